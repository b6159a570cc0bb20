use std::path::Path;
use std::process::{Command, Output};

fn nbdetect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbdetect"))
        .args(args)
        .env_clear()
        .output()
        .expect("binary runs")
}

fn manifest(out: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(format!("{}.manifest.json", out.display())).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn complexity_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("complexity.csv");
    let o = nbdetect(&["complexity", "--n", "4,16", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,branches_naive,branches_dp");
    assert!(lines[2].starts_with("16,65534,"));
    let m = manifest(&out);
    assert_eq!(m["command"], "complexity");
    assert!(m["git_describe"].is_string());
}

#[test]
fn llr_sweep_defaults_to_the_full_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = nbdetect(&["llr-sweep", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 402);
    assert_eq!(manifest(&out)["config"]["constellation"], "dsm-epa:16");
}

#[test]
fn sweep_reads_prior_file() {
    let dir = tempfile::tempdir().unwrap();
    let priors = dir.path().join("priors.txt");
    std::fs::write(&priors, "0.5 -1\n2, 0\n").unwrap();
    let o = nbdetect(&[
        "llr-sweep",
        "--constellation",
        "dsm-epa:4",
        "--grid",
        "-1:1:0.5",
        "--priors",
        priors.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 6);
}

#[test]
fn small_ber_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ber.csv");
    let o = nbdetect(&[
        "ber",
        "--constellation",
        "dsm-epa:4",
        "--detector",
        "maxlog-sym",
        "--snr-db",
        "4:6:2",
        "--info-len",
        "200",
        "--iters",
        "4",
        "--max-blocks",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "snr_db,iteration,bit_errors,bits,ber,blocks");
    assert_eq!(lines.len(), 1 + 2 * 4);
    let m = manifest(&out);
    assert_eq!(m["config"]["detector"], "maxlog-sym");
    assert_eq!(m["config"]["info_len"], 200);
}

#[test]
fn bad_configuration_is_reported() {
    for args in [
        &["complexity", "--n", "3"][..],
        &["llr-sweep", "--constellation", "dsm-epa:5"],
        &["llr-sweep", "--grid", "2:-2:0.1"],
        &["ber", "--snr-db", "5", "--detector", "nope"],
        &["ber", "--snr-db", "5", "--info-len", "0"],
    ] {
        let o = nbdetect(args);
        assert!(!o.status.success(), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"), "{args:?}");
    }
}

#[test]
fn environment_supplies_flags() {
    let o = Command::new(env!("CARGO_BIN_EXE_nbdetect"))
        .args(["complexity"])
        .env_clear()
        .env("NBDETECT_N", "6,8")
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let ns: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ns, ["6", "8"]);
}
