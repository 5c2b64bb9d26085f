use std::path::PathBuf;

use closurium::sequent::{
    check_derivation, load_derivation, random_derivation, random_models, soundness_check, Derivation, Rule,
};
use closurium::spaces::load_model;
use closurium::Error;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

#[test]
fn shipped_proofs_check() {
    let d = load_derivation(&data("proof_cl1.json")).unwrap();
    check_derivation(&d).unwrap();
    let models: Vec<_> = ["four.json", "four_suc.json", "two.json", "grid.json"]
        .iter()
        .map(|m| load_model(&data(m)).unwrap())
        .collect();
    assert!(soundness_check(&d, &models).unwrap().all_satisfied());
}

#[test]
fn unsound_proof_is_located() {
    let d = load_derivation(&data("proof_cl2_unsound.json")).unwrap();
    check_derivation(&d).unwrap();
    let r = soundness_check(&d, &[load_model(&data("two.json")).unwrap()]).unwrap();
    let u = r.unsound.expect("countermodel");
    assert_eq!(u.path, "root");
    assert_eq!(u.rule, Rule::Cl2.name());
}

#[test]
fn json_round_trip_of_random_derivations() {
    for seed in 0..50 {
        let d = random_derivation(seed, 1 + (seed % 6) as usize, &["a", "b"]);
        let back = Derivation::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        check_derivation(&back).unwrap();
    }
}

#[test]
fn tampered_rule_is_a_violation() {
    let mut json = load_derivation(&data("proof_cl1.json")).unwrap().to_json();
    json["premises"][0]["rule"] = "⊤R".into();
    let d = Derivation::from_json(&json).unwrap();
    match check_derivation(&d) {
        Err(Error::RuleViolation { path, .. }) => assert_eq!(path, "root.0"),
        other => panic!("expected a rule violation, got {other:?}"),
    }
}

#[test]
fn random_models_are_reproducible() {
    let a = random_models(3, 4, 5, 0.3, &["a"]);
    let b = random_models(3, 4, 5, 0.3, &["a"]);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.atoms(), y.atoms());
    }
}
