use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rf-forster"));
    c.env_remove("RF_FORSTER_PARAMS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn resonance_table_contains_dc_locus() {
    let out = run(&["resonances", "--channel", "37P", "--rf-freq", "15", "--rf-amp", "0.15", "--f-range", "0:2.5", "--orders", "-6:6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("m,F_resonance_Vcm,defect_slope_MHz_per_Vcm,weight\n"));
    let row = csv_rows(&text).into_iter().find(|r| r[0] == "0").unwrap();
    let f: f64 = row[1].parse().unwrap();
    assert!((f - 1.79).abs() < 1e-6);
}

#[test]
fn sideband_intensities_sum_to_one() {
    let out = run(&["sidebands", "--state", "37P", "--f-dc", "1.79", "--rf-amp", "0.2", "--rf-freq", "15"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let sum: f64 = csv_rows(&text).iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-9);
}

#[test]
fn missing_flag_exits_2_without_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("x.csv");
    let out = run(&["sidebands", "--f-dc", "1.0", "--out", path_str(&out_path)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);

    let out = run(&["resonances", "--channel", "37P", "--out", path_str(&out_path)]);
    assert_eq!(out.status.code(), Some(2), "rf frequency is required");
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);

    let out = run(&["resonances", "--channel", "37P", "--rf-freq", "15", "--f-range", "2:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn computational_error_exits_1() {
    let out = run(&["resonances", "--channel", "nope", "--rf-freq", "15"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("nope"), "{err}");

    let out = run(&["sidebands", "--state", "37P", "--f-dc", "1.79", "--rf-amp", "2.0", "--rf-freq", "15", "--m-max", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_writes_sidecar_and_replays_identically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("scan.csv");
    let out = run(&[
        "spectrum", "--channel", "37P", "--f-range", "1.7:1.9", "--points", "21", "--atoms", "3", "--samples", "40",
        "--seed", "7", "--json", "--out", path_str(&a),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let meta = dir.path().join("scan.meta.json");
    assert!(dir.path().join("scan.json").exists());
    let sidecar: serde_json::Value = serde_json::from_str(&fs::read_to_string(&meta).unwrap()).unwrap();
    assert_eq!(sidecar["manifest"]["subcommand"], "spectrum");
    assert_eq!(sidecar["manifest"]["seed"], 7);
    assert!(sidecar["timestamp_unix"].is_null());
    let header = fs::read_to_string(&a).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "F_dc_Vcm,S_2,err_2,S_3,err_3");

    let b = dir.path().join("replayed.csv");
    let out = run(&["replay", "--manifest", path_str(&meta), "--out", path_str(&b), "--threads", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "2", "5"] {
        let p = dir.path().join(format!("t{threads}.csv"));
        let out = run(&[
            "spectrum", "--channel", "37P", "--rf-amp", "0.15", "--rf-freq", "15", "--f-range", "1.4:2.1", "--points", "30",
            "--samples", "64", "--threads", threads, "--out", path_str(&p),
        ]);
        assert!(out.status.success());
        outputs.push(fs::read(&p).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn millivolt_flag_matches_field_flag() {
    let a = run(&["sidebands", "--state", "37P", "--f-dc", "1.5", "--rf-amp", "0.15", "--rf-freq", "15"]);
    let b = run(&["sidebands", "--state", "37P", "--f-dc", "1.5", "--rf-mv", "150", "--rf-freq", "15"]);
    let c = run(&["sidebands", "--state", "37P", "--f-dc", "1.5", "--rf-mv", "75", "--rf-field-per-volt", "2", "--rf-freq", "15"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let both = run(&["sidebands", "--state", "37P", "--f-dc", "1.5", "--rf-mv", "75", "--rf-amp", "0.1", "--rf-freq", "15"]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn params_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let text = rf_forster::ParameterSet::reference_toml().replace("C3_MHz_um3 = 2800.0", "C3_MHz_um3 = 1400.0");
    assert_ne!(text, rf_forster::ParameterSet::reference_toml(), "reference file layout changed");
    let p = dir.path().join("half.toml");
    fs::write(&p, text).unwrap();
    let args = ["pair-shift", "--channel", "37P", "--r-range", "5:10", "--points", "2"];
    let reference = run(&args);
    let env = bin().args(args).env("RF_FORSTER_PARAMS", &p).output().unwrap();
    let flag = run(&[&args[..], &["--params", path_str(&p)]].concat());
    assert!(env.status.success());
    assert_ne!(reference.stdout, env.stdout);
    assert_eq!(env.stdout, flag.stdout);
    let v_ref: f64 = csv_rows(&String::from_utf8(reference.stdout).unwrap())[0][2].parse().unwrap();
    let v_env: f64 = csv_rows(&String::from_utf8(env.stdout).unwrap())[0][2].parse().unwrap();
    assert!((v_ref / v_env - 2.0).abs() < 1e-12);
}

#[test]
fn pair_shift_and_stark_map_layout() {
    let out = run(&["pair-shift", "--channel", "37P", "--points", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("R_um,Delta_MHz,V_MHz,dE_PP_MHz,vdW_limit_MHz\n"));
    assert_eq!(text.lines().count(), 4);
    assert!(!text.contains('\r'));

    let out = run(&["stark-map", "--channel", "37P", "--rf-amp", "0.1", "--rf-freq", "15", "--points", "5", "--sidebands", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("F_Vcm,E_initial_MHz,E_final_MHz,defect_MHz,E_initial_p1_MHz,E_initial_m1_MHz\n"));
}
