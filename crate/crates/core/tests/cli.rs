use std::process::{Command, Output};

fn qweyl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qweyl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn z_element_prints_exactly() {
    let o = qweyl(&["z-element", "--ell", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("a^3 + 3*a*b*c + 3*q*b*c*d"));
}

#[test]
fn normal_form_examples() {
    let o = qweyl(&["nf", "--algebra", "dq2", "d2*x2"]);
    assert_eq!(stdout(&o).trim(), "(q^2 - 1)*x1*d1 + q^2*x2*d2 + (q^2 - 1)");
    let o = qweyl(&["nf", "--algebra", "dq2", "--unicode", "d2*x2"]);
    assert_eq!(stdout(&o).trim(), "(q^2 - 1)*x1*∂1 + q^2*x2*∂2 + (q^2 - 1)");
    let o = qweyl(&["nf", "--algebra", "dq2", "x2 x1"]);
    assert_eq!(stdout(&o).trim(), "q*x1*x2");
    // p-names are input aliases for the D-generators.
    let a = qweyl(&["nf", "--algebra", "dq_gl2", "p12*x21"]);
    let b = qweyl(&["nf", "--algebra", "dq_gl2", "d12*x21"]);
    assert_eq!(stdout(&a), stdout(&b));
    let o = qweyl(&["nf", "--algebra", "oq_gl2", "--ell", "3", "d^3*b - b*d^3"]);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["nf", "x1^-1"],
        vec!["nf", "--algebra", "dq1", "y7"],
        vec!["nf", "--algebra", "nonsense", "1"],
        vec!["nf", "--algebra", "dq1", "(x1"],
        vec!["z-element", "--ell", "4"],
        vec!["fiber", "--N", "2", "--ell", "3", "--char", "1,2"],
        vec!["fiber", "--N", "4", "--ell", "3", "--sweep"],
        vec!["verify", "no_such_catalog"],
        vec!["moment-map", "phi", "--frobenius", "--ell", "5"],
        vec!["frobnicate"],
        vec![],
    ] {
        let o = qweyl(&args);
        let code = o.status.code();
        // `phi --frobenius --ell 5` reports a skip and still passes the rest.
        if args.contains(&"phi") {
            assert_eq!(code, Some(0), "{args:?}");
            assert!(stdout(&o).contains("[skip]"));
        } else {
            assert_eq!(code, Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        }
    }
}

#[test]
fn failing_catalog_exits_one() {
    let dir = std::env::temp_dir().join(format!("qweyl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("wrong.toml");
    std::fs::write(
        &path,
        r#"schema = "qweyl-catalog/1"
name = "wrong"
algebra = "dq1"

[[identity]]
name = "commuting"
lhs = "d1*x1"
rhs = "x1*d1"
"#,
    )
    .unwrap();
    let o = qweyl(&["verify", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"][0]["verdict"], "fail");
    assert!(v["checks"][0]["witness"].as_str().unwrap().contains("x1*d1"));
}

#[test]
fn json_reports_are_deterministic() {
    let args = ["fiber", "--N", "2", "--ell", "3", "--sweep", "--samples", "4", "--seed", "11", "--json"];
    let a = qweyl(&args);
    let b = qweyl(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "qweyl-run/1");
    assert_eq!(v["result"]["schema"], "qweyl-locus/1");
    assert!(v.get("wall_time_ms").is_none());
    let other = qweyl(&["fiber", "--N", "2", "--ell", "3", "--sweep", "--samples", "4", "--seed", "12", "--json"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn thread_cap_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_qweyl"))
            .args(["moment-map", "mu", "--frobenius", "--json"])
            .env("QWEYL_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn report_file_is_written() {
    let path = std::env::temp_dir().join(format!("qweyl-poisson-{}.json", std::process::id()));
    let o = qweyl(&["poisson", "--N", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "poisson");
    assert_eq!(v["result"]["schema"], "qweyl-poisson/1");
    let _ = std::fs::remove_file(path);
}

#[test]
fn center_and_single_fiber() {
    let o = qweyl(&["center", "--algebra", "dq1", "--ell", "3", "--degree-bound", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dimension 6"));
    let o = qweyl(&["fiber", "--N", "1", "--ell", "3", "--char", "2, 5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("matrix algebra of size 3"));
    let o = qweyl(&["fiber", "--N", "1", "--ell", "3", "--char", "1, -1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not a matrix algebra"));
}

#[test]
fn all_runs_selected_criteria() {
    let o = qweyl(&["all", "--only", "1,4,9"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3, "{text}");
    assert!(text.lines().all(|l| l.ends_with(": pass")));
}
