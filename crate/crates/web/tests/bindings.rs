use padelab_web::{build_json, pade_table_json, place_json};
use serde_json::Value;

#[test]
fn table_of_exponential() {
    let out = pade_table_json("1, 1, 1/2, 1/6, 1/24", 2, 2).unwrap();
    let cells: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(cells.as_array().unwrap().len(), 9);
    let c11 = &cells[4];
    assert_eq!((c11["m"].as_u64(), c11["n"].as_u64()), (Some(1), Some(1)));
    assert_eq!(c11["status"], "normal");
    assert_eq!(c11["poles"][0][0].as_f64(), Some(2.0));
}

#[test]
fn table_rejects_short_input() {
    assert!(pade_table_json("1 1", 2, 2).is_err());
    assert!(pade_table_json("1 x", 0, 0).is_err());
}

#[test]
fn pole_lands_on_target() {
    let out = place_json("pole", "1 1", 2, 1, "3", "1/100").unwrap();
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["c2"], "1/300");
    assert_eq!(v["status"], "normal");
    let (re, im) = (v["poles"][0][0].as_f64().unwrap(), v["poles"][0][1].as_f64().unwrap());
    assert!((re - 3.0).abs() < 1e-12 && im.abs() < 1e-12);
    assert!(place_json("both", "1 1", 2, 1, "3", "1/100").is_err());
}

#[test]
fn small_build_has_prescribed_denominator() {
    let out = build_json("2 3", "-2", "1/100", 1).unwrap();
    let v: Value = serde_json::from_str(&out).unwrap();
    let cps = v["checkpoints"].as_array().unwrap();
    assert_eq!(cps.len(), 1);
    assert_eq!(cps[0]["denominator"], v["denominator"]);
    assert_eq!(cps[0]["verified"], true);
    assert!(cps[0]["err_k"].as_f64().unwrap() <= 1e-2);
}
