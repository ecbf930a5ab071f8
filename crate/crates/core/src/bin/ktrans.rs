fn main() { std::process::exit(ktrans::cli::run(std::env::args_os())); }
