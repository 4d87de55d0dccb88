use e3real_cli::{RunReport, ScenarioConfig};
use std::path::Path;
use std::process::{Command, Output};

fn e3real(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_e3real"))
        .args(args)
        .current_dir(dir)
        .env_remove("E3REAL_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

const EULER: &[&str] = &[
    "simulate", "--scenario", "euler", "--realization", "e3", "--inertia", "1,2,3",
    "--initial-J", "1,1,1", "--initial-Gamma", "0,0,1", "--dt", "1e-3", "--t-max", "10",
];

fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn euler_run_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = e3real(&with(EULER, &["--out", "traj.csv"]), dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = read(dir.path(), "traj.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,J1,J2,J3,Gamma1,Gamma2,Gamma3,K1,K2,H,K_extra");
    assert_eq!(lines.len() - 1, 10001);
    assert!(!csv.contains('\r'));
    // 17 significant digits, '.' separator
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[1], "1.0000000000000000e0");
    let h: f64 = first[9].parse().unwrap();
    assert_eq!(h, 0.5 * (1.0 + 0.5 + 1.0 / 3.0));
    let last: Vec<f64> = lines[10001].split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[0] - 10.0).abs() < 1e-12);

    let rep: RunReport = serde_json::from_str(&read(dir.path(), "traj.report.json")).unwrap();
    assert_eq!(rep.rows, 10001);
    assert!(!rep.terminated_early);
    assert_eq!(rep.metadata.version, env!("CARGO_PKG_VERSION"));
    for d in &rep.invariants {
        assert!(d.max_rel < 1e-8, "{} {}", d.name, d.max_rel);
    }
}

#[test]
fn record_stride_thins_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = e3real(&with(EULER, &["--record-stride", "10", "--out", "t.csv"]), dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(read(dir.path(), "t.csv").lines().count() - 1, 1001);
}

#[test]
fn config_errors_exit_2_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&[&str], &str)] = &[
        (&["simulate", "--scenario", "euler", "--initial-J", "1,1,1", "--initial-Gamma", "0,0,1", "--out", "a.csv"], "inertia"),
        (
            &["simulate", "--scenario", "euler", "--realization", "twistor", "--inertia", "1,2,3",
              "--initial-theta", "1,0,0,0", "--initial-zeta", "0,0,0,0", "--out", "a.csv"],
            "zeta",
        ),
        (&["simulate", "--scenario", "lmg", "--eps", "1", "--lmg-v", "0.3", "--lmg-w", "0.2", "--chi", "1,0,0",
           "--initial-J", "1,1,1", "--initial-Gamma", "0,0,1", "--out", "a.csv"], "chi"),
        (&["simulate", "--scenario", "euler", "--inertia", "1,2", "--initial-J", "1,1,1", "--initial-Gamma", "0,0,1", "--out", "a.csv"], "inertia"),
        (&["simulate", "--scenario", "euler", "--inertia", "1,-2,3", "--initial-J", "1,1,1", "--initial-Gamma", "0,0,1", "--out", "a.csv"], "inertia"),
        (&["simulate", "--scenario", "euler", "--inertia", "1,2,3", "--initial-J", "1,1,1", "--out", "a.csv"], "Gamma"),
        (&["simulate", "--scenario", "euler", "--inertia", "1,2,3", "--mu", "1", "--initial-J", "1,1,1", "--initial-Gamma", "0,0,1", "--out", "a.csv"], "mu"),
        (&["simulate", "--scenario", "euler", "--inertia", "1,2,3", "--realization", "monopole", "--initial-p", "1,0,0", "--initial-y", "0,0,1", "--out", "a.csv"], "mu"),
        (&["simulate", "--scenario", "euler", "--inertia", "1,2,3", "--realization", "monopole", "--mu", "1", "--initial-p", "1,0,0", "--initial-y", "0,0,0", "--out", "a.csv"], "initial.y"),
        (&["simulate", "--scenario", "euler", "--inertia", "1,2,3", "--realization", "sphere", "--nu", "1", "--initial-p", "1,0,0", "--initial-y", "0,0,1", "--out", "a.csv"], "nu"),
        (&["simulate", "--scenario", "euler", "--inertia", "1,2,3", "--dt", "-1", "--initial-J", "1,1,1", "--initial-Gamma", "0,0,1", "--out", "a.csv"], "integrator"),
        (&["simulate", "--scenario", "euler", "--inertia", "1,2,3", "--method", "leapfrog", "--initial-J", "1,1,1", "--initial-Gamma", "0,0,1", "--out", "a.csv"], "method"),
        (&["simulate", "--scenario", "heavy", "--out", "a.csv"], "scenario"),
        (&["simulate", "--scenario", "euler", "--inertia", "1,2,3", "--initial-J", "1,1,1", "--initial-Gamma", "0,0,1", "--initial-q", "1,0,0,0", "--out", "a.csv"], "initial.q"),
    ];
    for (args, field) in cases {
        let o = e3real(args, dir.path());
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains(field), "{args:?}: {}", stderr(&o));
    }
    assert!(!dir.path().join("a.csv").exists());
}

#[test]
fn blow_up_exits_3_after_writing_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = e3real(
        &["simulate", "--scenario", "euler", "--inertia", "1,2,3", "--initial-J", "100,200,300",
          "--initial-Gamma", "0,0,1", "--dt", "0.5", "--t-max", "100", "--out", "b.csv"],
        dir.path(),
    );
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("stopped early"));
    let rep: RunReport = serde_json::from_str(&read(dir.path(), "b.report.json")).unwrap();
    assert!(rep.terminated_early);
    assert!(rep.termination_reason.unwrap().contains("non-finite"));
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["simulate", "--scenario", "zhukovskii", "--inertia", "1,2,3", "--lambda", "0.3,-0.2,0.5",
                "--realization", "twistor", "--random-initial", "--seed", "9", "--t-max", "2"];
    for out in ["a.csv", "b.csv"] {
        let o = e3real(&with(&args, &["--out", out, "--report", "r.json"]), dir.path());
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        std::fs::rename(dir.path().join("r.json"), dir.path().join(format!("{out}.json"))).unwrap();
    }
    assert_eq!(read(dir.path(), "a.csv"), read(dir.path(), "b.csv"));
    let strip = |s: String| s.replace("a.csv", "X").replace("b.csv", "X");
    assert_eq!(strip(read(dir.path(), "a.csv.json")), strip(read(dir.path(), "b.csv.json")));
}

#[test]
fn seed_environment_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["simulate", "--scenario", "euler", "--inertia", "1,2,3", "--random-initial", "--t-max", "0.1"];
    let run = |env: Option<&str>, extra: &[&str], out: &str| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_e3real"));
        cmd.args(args).args(extra).args(["--out", out]).current_dir(dir.path()).env_remove("E3REAL_SEED");
        if let Some(s) = env {
            cmd.env("E3REAL_SEED", s);
        }
        cmd.output().unwrap()
    };
    assert_eq!(code(&run(Some("5"), &[], "env5.csv")), 0);
    assert_eq!(code(&run(None, &["--seed", "5"], "flag5.csv")), 0);
    assert_eq!(code(&run(Some("6"), &[], "env6.csv")), 0);
    assert_eq!(read(dir.path(), "env5.csv"), read(dir.path(), "flag5.csv"));
    assert_ne!(read(dir.path(), "env5.csv"), read(dir.path(), "env6.csv"));
    // the flag wins over the environment
    assert_eq!(code(&run(Some("6"), &["--seed", "5"], "both.csv")), 0);
    assert_eq!(read(dir.path(), "both.csv"), read(dir.path(), "flag5.csv"));
    let bad = run(Some("abc"), &[], "bad.csv");
    assert_eq!(code(&bad), 2);
    assert!(stderr(&bad).contains("E3REAL_SEED"));
}

#[test]
fn toml_config_with_flag_overrides_and_echo_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let toml = r#"
scenario = "clebsch"
realization = "sphere"
nu = -1.0

[inertia]
values = [1.0, 2.0, 3.0]

[potential]
eps = 0.1

[initial]
y = [0.3, -0.2, 0.5]
p = [0.1, 0.4, -0.3]

[integrator]
method = "rk4"
dt = 0.01
t_max = 5.0
"#;
    std::fs::write(dir.path().join("run.toml"), toml).unwrap();
    let o = e3real(&["simulate", "--config", "run.toml", "--t-max", "1", "--out", "c.csv"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = read(dir.path(), "c.csv");
    assert!(csv.starts_with("t,y1,y2,y3,p1,p2,p3,K1,K2,H,K_extra,J0\n"));
    assert_eq!(csv.lines().count() - 1, 101);

    let rep: RunReport = serde_json::from_str(&read(dir.path(), "c.report.json")).unwrap();
    let echo = rep.metadata.config;
    assert_eq!(echo.integrator.t_max, Some(1.0));
    assert_eq!(echo.seed, Some(0));
    // the echo re-parses to an equal config and reproduces the run
    let again = ScenarioConfig::from_toml_str(&echo.to_toml_string()).unwrap();
    assert_eq!(again, echo);
    std::fs::write(dir.path().join("echo.toml"), echo.to_toml_string()).unwrap();
    let o = e3real(&["simulate", "--config", "echo.toml", "--out", "d.csv"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(read(dir.path(), "d.csv"), csv);

    std::fs::write(dir.path().join("bad.toml"), "scenario = \"euler\"\nspeed = 3\n").unwrap();
    let o = e3real(&["simulate", "--config", "bad.toml", "--out", "e.csv"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("speed"), "{}", stderr(&o));
}

fn first_row(csv: &str) -> Vec<f64> {
    csv.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect()
}

#[test]
fn from_e3_starts_over_the_given_point() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["simulate", "--scenario", "kovalevskaya", "--inertia", "1", "--chi", "1,0.5",
                "--from-e3", "--initial-J", "0.3,0.1,0.5", "--initial-Gamma", "0,0.5,1", "--t-max", "1"];
    for (i, r) in [["--realization", "monopole"], ["--realization", "twistor"], ["--realization", "sphere"]].iter().enumerate() {
        let out = format!("f{i}.csv");
        let o = e3real(&with(&with(&base, r), &["--out", &out]), dir.path());
        assert_eq!(code(&o), 0, "{r:?}: {}", stderr(&o));
        // K1 and K2 columns come right after the chart coordinates
        let row = first_row(&read(dir.path(), &out));
        let n = row.len();
        let (k1, k2) = match r[1] {
            "twistor" => (row[9], row[10]),
            _ => (row[7], row[8]),
        };
        assert!((k1 - 0.55).abs() < 1e-12 && (k2 - 1.25).abs() < 1e-12, "{r:?} {row:?} {n}");
    }
    // the monopole gauge puts y = Gamma and p.y = 0
    let row = first_row(&read(dir.path(), "f0.csv"));
    assert_eq!(&row[4..7], &[0.0, 0.5, 1.0]);
    assert!((row[1] * row[4] + row[2] * row[5] + row[3] * row[6]).abs() < 1e-15);

    let o = e3real(&with(&base, &["--realization", "monopole", "--mu", "3", "--out", "g.csv"]), dir.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_exit_codes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = e3real(&["verify", "all", "--samples", "100", "--seed", "42"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 42);
    assert!(v["checks"].as_array().unwrap().len() > 50);

    let o = e3real(&["verify", "regression", "--out", "reg.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&read(dir.path(), "reg.json")).unwrap();
    assert!(!v["regression"].as_array().unwrap().is_empty());

    let o = e3real(&["verify", "brackets", "--tol", "1e-30"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("FAIL"));

    assert_eq!(code(&e3real(&["verify", "everything"], dir.path())), 2);
    assert_eq!(code(&e3real(&["verify", "brackets", "--samples", "0"], dir.path())), 2);
    assert_eq!(code(&e3real(&["verify", "brackets", "--tol", "-1"], dir.path())), 2);
}

#[test]
fn verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = e3real(&["verify", "involution", "--samples", "20", "--seed", "3"], dir.path());
    let b = e3real(&["verify", "involution", "--samples", "20", "--seed", "3"], dir.path());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn list_scenarios_names_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let o = e3real(&["list-scenarios"], dir.path());
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    let line = |n: &str| s.lines().find(|l| l.starts_with(n)).unwrap_or_else(|| panic!("{n} missing")).to_string();
    assert!(line("euler").contains("I1, I2, I3"));
    let k = line("kovalevskaya");
    assert!(k.contains("I,") && k.contains("chi1") && k.contains("chi2"));
    let l = line("lmg");
    assert!(l.contains("eps") && l.contains('V') && l.contains('W'));
    assert_eq!(s.lines().count(), 6);
}

#[test]
fn unknown_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&e3real(&["simulate", "--warp", "9", "--out", "x.csv"], dir.path())), 2);
    assert_eq!(code(&e3real(&["dance"], dir.path())), 2);
}
