use std::process::{Command, Output};

fn pellcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pellcount"))
        .args(args)
        .env_remove("PELLCOUNT_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const QUICK_SUITES: &str =
    "pell_identity,roots_bijection,weil_bounds,lambda_prime,bounds_algebra,poisson";

#[test]
fn count_table_shape() {
    let o = pellcount(&[
        "count", "--x", "1e5", "--alpha", "0.6,0.75", "--method", "both",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,alpha,S,Sf,S_param,agree");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("100000,0.6,6086,") && lines[1].ends_with(",true"));
    assert!(lines[2].starts_with("100000,0.75,8271,") && lines[2].ends_with(",true"));
}

#[test]
fn json_envelope_fields() {
    let o = pellcount(&["--format", "json", "count", "--x", "10", "--alpha", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "count");
    assert_eq!(v["rows"][0]["S"], 4);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert!(v["version"].is_string() && v["params"].is_object());
}

#[test]
fn invalid_input_exits_with_2() {
    assert_eq!(
        pellcount(&["count", "--x", "1", "--alpha", "0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pellcount(&["count", "--x", "100"]).status.code(), Some(2));
    assert_eq!(
        pellcount(&["verify", "--level", "medium"]).status.code(),
        Some(2)
    );
    assert_eq!(
        pellcount(&["smooth", "rho", "--u", "100"]).status.code(),
        Some(2)
    );
    assert_eq!(
        pellcount(&["--threads", "0", "solve", "--d", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn small_commands() {
    assert_eq!(
        stdout(&pellcount(&["solve", "--d", "13"])),
        "d,t,u\n13,649,180\n"
    );
    assert_eq!(
        stdout(&pellcount(&["smooth", "rho", "--u", "2"])),
        "u,rho\n2,3.068528194401e-1\n"
    );
    let psi = stdout(&pellcount(&["smooth", "psi", "--x", "1e6", "--y", "100"]));
    assert!(psi
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("1000000,100,72271,"));
    let k = stdout(&pellcount(&[
        "sums",
        "kloosterman",
        "--m",
        "1",
        "--n",
        "1",
        "--q",
        "5",
    ]));
    assert!(k.contains("K,m=1 n=1,5,-0.309016994375,2.126627020880,"));
}

#[test]
fn bounds_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("bounds.svg");
    let o = pellcount(&[
        "bounds",
        "--alpha-step",
        "0.05",
        "--theta",
        "0.3",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with(
        "alpha,theta,hooley_main,conjecture,fouvry_Sf,fouvry_S,cond_Sf,cond_S,main_Sf,main_S,weak_S,corollary_Sf,corollary_S,gain\n"
    ));
    assert_eq!(text.lines().count(), 12);
    let chart = std::fs::read_to_string(svg).unwrap();
    assert!(chart.starts_with("<svg") && chart.contains("<polyline"));
}

#[test]
fn cache_round_trip_and_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pell.cache");
    let p = path.to_str().unwrap();
    let first = pellcount(&["count", "--x", "2e3", "--alpha", "0.9", "--cache", p]);
    assert_eq!(first.status.code(), Some(0));
    let saved = std::fs::read_to_string(&path).unwrap();
    assert!(saved.starts_with("pellcache v1\n2,3,2\n"));
    assert!(saved.contains("\n5,9,4\n"));

    let second = Command::new(env!("CARGO_BIN_EXE_pellcount"))
        .args(["count", "--x", "2e3", "--alpha", "0.9"])
        .env("PELLCOUNT_CACHE", p)
        .output()
        .unwrap();
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), saved);

    let tampered = saved.replace("\n5,9,4\n", "\n5,9,5\n");
    std::fs::write(&path, tampered).unwrap();
    let bad = pellcount(&["count", "--x", "2e3", "--alpha", "0.9", "--cache", p]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line"));
}

#[test]
fn verify_is_deterministic_across_runs_and_threads() {
    let run = |threads: &str| {
        let o = pellcount(&[
            "--threads",
            threads,
            "verify",
            "--level",
            "fast",
            "--seed",
            "7",
            "--suites",
            QUICK_SUITES,
        ]);
        (o.status.code(), o.stdout)
    };
    let a = run("8");
    let b = run("8");
    let c = run("1");
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn fault_injection_is_named_in_report() {
    let args = [
        "verify",
        "--level",
        "fast",
        "--seed",
        "7",
        "--suites",
        "weil_bounds,sum_identities",
    ];
    let clean = pellcount(&args);
    assert_eq!(clean.status.code(), Some(0));
    let mut faulty_args = args.to_vec();
    faulty_args.push("--inject-fault");
    let faulty = pellcount(&faulty_args);
    assert_eq!(faulty.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&faulty.stdout).unwrap();
    let failing: Vec<&str> = v["failures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect();
    assert!(failing.contains(&"sum_identities"), "{failing:?}");
    assert_eq!(v["params"]["inject_fault"], true);
}
