use serde_json::Value;

use superkit_web::{chiral_kernel_json, decompose_json, pipeline_json};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn decompose_half_one() {
    let v = parse(decompose_json("1/2", "1").unwrap());
    assert_eq!(v["spins"]["3/2"], 1);
    assert_eq!(v["spins"]["1/2"], 1);
    assert_eq!(v["dimension"], 6);
}

#[test]
fn chiral_at_rest() {
    let v = parse(chiral_kernel_json("1,0,0,0").unwrap());
    assert_eq!(v["kernel_dim"], 4);
    assert_eq!(v["closed_form_mismatches"], 0);
}

#[test]
fn pipeline_rest_and_off_orbit() {
    let v = parse(pipeline_json("1", "1,0,0,0").unwrap());
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    assert!(pipeline_json("1", "2,0,0,0").is_err());
    assert!(pipeline_json("0", "1,0,0,0").is_err());
    assert!(decompose_json("1/3", "1").is_err());
}
