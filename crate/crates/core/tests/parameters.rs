use std::fs;

use rf_forster::{load_parameters, ParameterSet};

#[test]
fn reference_round_trips_through_a_file() {
    let p = ParameterSet::reference();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("params.toml");
    fs::write(&path, p.to_toml_string()).unwrap();
    let back = load_parameters(&path).unwrap();
    assert_eq!(back, p);
    assert_eq!(back.to_toml_string(), p.to_toml_string());
}

#[test]
fn reference_has_the_calibrated_channels() {
    let p = ParameterSet::reference();
    for label in ["37P", "39P"] {
        p.channel(label).unwrap();
    }
    let f = p.channel("37P").unwrap().dc_resonance_field().unwrap();
    assert!((f - 1.79).abs() < 1e-9);
}

#[test]
fn missing_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(load_parameters(dir.path().join("absent.toml")).is_err());
}

#[test]
fn malformed_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, "states = 3\n").unwrap();
    assert!(load_parameters(&path).is_err());
}
