use std::process::{Command, Output};

fn gossipage(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gossipage"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const RING: &str = r#"{"family":"ring","params":{"n":3,"f":1}}"#;

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&gossipage(&["--help"])), 0);
    assert_eq!(code(&gossipage(&["--version"])), 0);
    assert_eq!(code(&gossipage(&[])), 1);
    assert_eq!(code(&gossipage(&["frobnicate"])), 1);
    assert_eq!(
        code(&gossipage(&["bound", "--config", RING, "--chain", "--closed-form"])),
        1
    );
}

#[test]
fn exact_prints_the_age() {
    let out = gossipage(&["exact", "--config", RING]);
    assert_eq!(code(&out), 0);
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 1.65).abs() < 1e-12);

    let out = gossipage(&["exact", "--config", RING, "--all-sets", "2", "--quiet"]);
    let text = stdout(&out);
    assert!(text.starts_with("set,size,age\n0,1,"));
    assert_eq!(text.lines().count(), 1 + 3 + 3);
}

#[test]
fn validation_errors_exit_2() {
    assert_eq!(
        code(&gossipage(&[
            "exact",
            "--config",
            r#"{"family":"ring","params":{"n":4,"f":3}}"#
        ])),
        2
    );
    assert_eq!(code(&gossipage(&["exact", "--config", "/no/such/file.json"])), 2);
    assert_eq!(code(&gossipage(&["exact", "--config", RING, "--anchor", "3"])), 2);
    assert_eq!(code(&gossipage(&["simulate", "--config", RING, "--reps", "0"])), 2);
    assert_eq!(
        code(&gossipage(&[
            "run",
            "--config",
            r#"{"name":"x","family":"ring","methods":[]}"#
        ])),
        2
    );
}

#[test]
fn topology_inspect() {
    let out = gossipage(&[
        "topology",
        "inspect",
        "--config",
        r#"{"family":"torus_hypercube","params":{"m":3,"d":3}}"#,
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("n: 27"));
    assert!(text.contains("  6: 27"));
}

#[test]
fn bound_and_simulate_write_csv() {
    let out = gossipage(&["bound", "--config", r#"{"family":"ring","params":{"n":10000,"f":1}}"#]);
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[..3], ["ring", "n=10000;f=1", "10000"]);
    assert!((row[3].parse::<f64>().unwrap() - 124.666).abs() < 1e-3);
    assert!((row[4].parse::<f64>().unwrap() - 183.516).abs() < 1e-3);

    let chain_only = stdout(&gossipage(&["bound", "--config", RING, "--chain"]));
    assert!(chain_only.lines().nth(1).unwrap().contains(",,false"));

    let args = [
        "simulate",
        "--config",
        RING,
        "--horizon",
        "200",
        "--reps",
        "3",
        "--seed",
        "4",
    ];
    let a = gossipage(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&gossipage(&args)));
    assert!(stdout(&a).starts_with("family,params,n,mean,ci95,events,seed\n"));
}

#[test]
fn verify_extremal_passes_on_grids() {
    let out = gossipage(&[
        "verify-extremal",
        "--config",
        r#"{"family":"grid","params":{"m":5,"k":5}}"#,
        "--j-max",
        "9",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 10);
    assert_eq!(
        code(&gossipage(&["verify-extremal", "--config", RING, "--j-max", "9"])),
        2
    );
}

#[test]
fn run_is_byte_identical_in_quiet_mode() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"name":"cli","family":"grid","sweep":{"m":[3,4],"square":true},
            "methods":["exact","simulate","chain","closed_form","asymptotic"],
            "sim":{"horizon":500,"replications":4,"seed":1}}"#,
    )
    .unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let o = gossipage(&[
            "run",
            "--config",
            spec.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--quiet",
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_eq!(String::from_utf8(bytes).unwrap().lines().count(), 2 + 2 * 5);

    let reseeded = dir.path().join("c.csv");
    let args = [
        "run",
        "--config",
        spec.to_str().unwrap(),
        "--out",
        reseeded.to_str().unwrap(),
        "--quiet",
        "--seed",
        "2",
    ];
    gossipage(&args);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&reseeded).unwrap());
}

#[test]
fn crosscheck_reports_every_check() {
    let spec = r#"{"name":"cc","family":"fully_connected","sweep":{"n":[3,5]},
        "methods":["exact","simulate","chain","closed_form"],
        "sim":{"horizon":1000,"replications":8,"seed":2},"crosscheck_seeds":20}"#;
    let out = gossipage(&["crosscheck", "--config", spec]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 2 * 4);
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));
}
