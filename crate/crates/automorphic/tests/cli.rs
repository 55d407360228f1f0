use std::process::Command;

fn automorphic(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_automorphic")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn delta_table_ends_with_tau_10() {
    let (code, text) = automorphic(&["coeffs", "--form", "delta", "--count", "10", "--format", "csv"]);
    assert_eq!(code, 0);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("10,0,-115920,0,"), "{last}");
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["--format", "json", "--seed", "7", "extsq-verify", "--trials", "20", "--kmax", "8"];
    let (a, first) = automorphic(&args);
    let (b, second) = automorphic(&args);
    assert_eq!((a, b), (0, 0));
    assert_eq!(first, second);
    assert!(first.contains("\"seed\": 7"));
}

#[test]
fn exit_codes() {
    assert_eq!(automorphic(&["fe-check", "hecke", "--form", "delta", "--w", "6+3i"]).0, 0);
    assert_eq!(automorphic(&["--tol", "1e-40", "mellin-verify", "g-eta", "--eta", "1", "--s", "0.3+2i"]).0, 1);
    assert_eq!(automorphic(&["mellin-verify", "kernel", "--x", "1"]).0, 2);
    assert_eq!(automorphic(&["lvalue", "--form", "eisenstein", "--k", "4", "--s", "0.5", "--kind", "completed"]).0, 2);
    assert_eq!(automorphic(&["lvalue", "--form", "maass", "--file", "/no/such/file", "--s", "2"]).0, 3);
}

#[test]
fn mellin_example_is_one() {
    let (code, text) = automorphic(&["mellin-verify", "bessel-single", "--nu", "0", "--s", "2"]);
    assert_eq!(code, 0);
    assert!(text.contains("rhs=1.0000000000000000e0"), "{text}");
}
