use std::fs;
use std::process::{Command, Output};

fn cjrelay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cjrelay")).args(args).output().expect("spawn cjrelay")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn presets_listing() {
    let o = cjrelay(&["presets"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for n in 6..=11 {
        assert!(text.contains(&format!("fig{n} ")), "{text}");
    }
    let o = cjrelay(&["presets", "fig8"]);
    assert!(stdout(&o).contains("jammer_ratio = 0.5"));
}

#[test]
fn sweep_from_config_file_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    fs::write(&cfg, "relay_power_db = 30\njammer_mode = fixed\njammer_power_db = 40\nalpha = 0.5\np1_db_start = 0\np1_db_stop = 20\np1_db_step = 10\n").unwrap();
    let out = dir.path().join("s.csv");
    let o = cjrelay(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("p1_db,achievable,"));
}

#[test]
fn sweep_is_byte_identical_on_rerun() {
    let a = cjrelay(&["sweep", "--preset", "fig10"]);
    let b = cjrelay(&["sweep", "--preset", "fig10"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn proxy_relay_power() {
    let o = cjrelay(&["sweep", "--preset", "fig6", "--proxy-db", "60"]);
    assert!(o.status.success());
    let exact = stdout(&cjrelay(&["sweep", "--preset", "fig6"]));
    assert_ne!(stdout(&o), exact);
}

#[test]
fn single_point_commands() {
    let o = cjrelay(&["rate", "--p1-db", "10", "--p2-db", "10", "--pr-db", "30", "--power-control"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rate: f64 = text.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
    assert!(rate > 0.0);

    let o = cjrelay(&["bound", "--p1-db", "10", "--p2-db", "-inf", "--pr-db", "inf"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("upper_new,"));
}

#[test]
fn configuration_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "relay_power_db = 30\njammer_mode = fixed\nalpha = opt\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["sweep", "--config", cfg.to_str().unwrap()],
        vec!["sweep", "--preset", "fig99"],
        vec!["sweep"],
        vec!["sweep", "--config", "/nonexistent/x.cfg"],
        vec!["rate", "--p1-db", "0", "--p2-db", "0", "--pr-db", "0", "--alpha", "1.5"],
        vec!["verify", "--samples", "10"],
        vec!["no-such-command"],
    ];
    for args in cases {
        let o = cjrelay(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
    let o = cjrelay(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("jammer_power_db"));
}

#[test]
fn numerical_errors_exit_2() {
    // no relay power leaves the quantizer balance without a solution
    let o = cjrelay(&["rate", "--p1-db", "0", "--p2-db", "0", "--pr-db", "-inf"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let o = cjrelay(&["verify", "--samples", "2000", "--p1=-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_report_format_and_determinism() {
    let a = cjrelay(&["verify", "--samples", "20000", "--seed", "7"]);
    let b = cjrelay(&["verify", "--samples", "20000", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    let labels = ["source_to_quantized", "source_to_relay", "relay_link", "quantizer_rate", "genie_entropy_gap"];
    for (line, label) in lines.iter().zip(labels) {
        let f: Vec<&str> = line.split(' ').collect();
        assert_eq!(f.len(), 5, "{line}");
        assert_eq!(f[0], label);
        assert!(f[3].parse::<f64>().unwrap() > 0.0);
        assert!(f[4] == "pass" || f[4] == "fail");
    }
    let expected_code = if text.contains("fail") { 3 } else { 0 };
    assert_eq!(a.status.code(), Some(expected_code));
}

#[test]
fn verify_failure_exits_3() {
    // five terms at three standard errors: about one seed in seventy has a
    // term outside the band
    let mut failing = None;
    for seed in 0..200u64 {
        let o = cjrelay(&["verify", "--samples", "1000", "--seed", &seed.to_string()]);
        if o.status.code() == Some(3) {
            failing = Some(o);
            break;
        }
        assert_eq!(o.status.code(), Some(0));
    }
    let o = failing.expect("some seed fails at 3 sigma in 200 tries");
    assert!(stdout(&o).contains(" fail\n"));
}
