use std::path::Path;

use ktrans::cli::run;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn ktrans(args: &[&str]) -> i32 {
    run(std::iter::once("ktrans").chain(args.iter().copied()).map(Into::into))
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = |f: &str| dir.path().join(f).to_string_lossy().into_owned();
    let u = fixture("u.json");

    assert_eq!(ktrans(&["solve", &u, "-k", "2", "--algo", "exact", "-o", &out("g.json")]), 0);
    let guards = std::fs::read_to_string(out("g.json")).unwrap();
    assert!(guards.contains("\"size\": 1"));
    assert_eq!(ktrans(&["verify", &u, &out("g.json"), "-k", "2"]), 0);
    assert_eq!(ktrans(&["verify", &u, &fixture("guards_y8_left.json"), "-k", "2"]), 2);

    assert_eq!(ktrans(&["gen-hardness", &fixture("k2.json"), "-k", "2", "-o", &out("p.json")]), 0);
    let p = ktrans::io::scene_from_json(&std::fs::read_to_string(out("p.json")).unwrap()).unwrap();
    assert!(p.is_y_monotone());
    assert_eq!(ktrans(&["lemmas", &fixture("k2.json"), "-k", "2", "--disconnected"]), 0);
    assert_eq!(ktrans(&["render", &out("p.json"), "-o", &out("p.svg")]), 0);

    assert_eq!(ktrans(&["solve", &u, "-k", "3", "--algo", "exact"]), 1);
    assert_eq!(ktrans(&["nonsense"]), 1);
    assert_eq!(ktrans(&["decompose", &out("missing.json"), "-k", "2"]), 1);
}
