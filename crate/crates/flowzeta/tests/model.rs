use std::path::{Path, PathBuf};

use flowzeta::model::random::{random_model, RandomModelParams};
use flowzeta::model::{parse_model, parse_rational, validate_model, BackendKind, ModelError, ModelFile};
use flowzeta::{Exact, Float, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn data_files() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .expect("data directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

fn loop_json() -> Value {
    json!({
        "states": ["a"],
        "edges": [{ "id": "e", "from": "a", "to": "a", "r": 1, "delta": 1, "epsilon": 1, "rho": [1],
                    "derivative": { "lambda": 2, "mu": "1/2" } }],
        "gamma_u": [], "gamma_s": [],
        "backend": { "kind": "exact-rational", "tolerance": 1e-9 }
    })
}

fn semantic_issues(v: &Value) -> flowzeta::model::ValidationReport {
    match parse_model::<Exact>(&v.to_string()) {
        Err(ModelError::Semantic(report)) => report,
        other => panic!("expected a semantic error, got {:?}", other.map(|m| m.name)),
    }
}

fn round_trip<S: Scalar>(file: &ModelFile, label: &str) {
    let m = file.build::<S>().expect("builds");
    assert!(validate_model(&m).is_valid(), "{label}");
    let back = parse_model::<S>(&ModelFile::from_model(&m).to_json()).expect("rewritten file validates");
    assert_eq!(back.states, m.states, "{label}");
    assert_eq!(back.edges, m.edges, "{label}");
    assert_eq!((&back.gamma_u, &back.gamma_s, back.dim), (&m.gamma_u, &m.gamma_s, m.dim), "{label}");
    assert_eq!(back.flow_complex, m.flow_complex, "{label}");
}

#[test]
fn shipped_files_validate_and_round_trip() {
    let files = data_files();
    assert!(files.len() >= 5);
    for path in files {
        let file = ModelFile::from_json(&std::fs::read_to_string(&path).expect("readable")).expect("parses");
        let label = path.display().to_string();
        match file.backend.kind {
            BackendKind::ExactRational => round_trip::<Exact>(&file, &label),
            BackendKind::ComplexFloat => round_trip::<Float>(&file, &label),
        }
    }
}

#[test]
fn random_models_round_trip_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let m = random_model(&mut rng, &RandomModelParams::default());
        assert!(validate_model(&m).is_valid());
        let back = parse_model::<Exact>(&ModelFile::from_model(&m).to_json()).expect("valid");
        assert_eq!(back.edges, m.edges);
        assert_eq!(back.states, m.states);
    }
}

#[test]
fn rationals_parse_from_strings() {
    assert_eq!(parse_rational("3/4"), Some(Exact::new(3.into(), 4.into())));
    assert_eq!(parse_rational("-2"), Some(Exact::from_integer((-2).into())));
    assert_eq!(parse_rational("0.25"), Some(Exact::new(1.into(), 4.into())));
    assert_eq!(parse_rational("1/0"), None);
    assert_eq!(parse_rational("x"), None);
}

#[test]
fn structural_errors_are_reported() {
    assert!(parse_model::<Exact>(&loop_json().to_string()).is_ok());

    let mut v = loop_json();
    v["edges"][0]["to"] = json!("b");
    assert!(parse_model::<Exact>(&v.to_string()).is_err());

    let mut v = loop_json();
    v["edges"][0]["r"] = json!(0);
    assert!(semantic_issues(&v).mentions("return time"));

    let mut v = loop_json();
    v["edges"][0]["rho"] = json!([2]);
    assert!(semantic_issues(&v).mentions("not unitary"));

    let mut v = loop_json();
    v["edges"][0]["derivative"]["lambda"] = json!("1/2");
    assert!(semantic_issues(&v).mentions("not expanding"));

    let mut v = loop_json();
    v["edges"][0]["epsilon"] = json!(-1);
    assert!(semantic_issues(&v).mentions("sign of det"));
}

#[test]
fn designated_orbits_must_be_disjoint_closed_and_primitive() {
    let mut v = loop_json();
    v["gamma_u"] = json!([{ "cycle": ["e", "e"] }]);
    assert!(semantic_issues(&v).mentions("proper power"));

    let mut v = loop_json();
    v["gamma_u"] = json!([{ "cycle": ["e"] }]);
    v["gamma_s"] = json!([{ "cycle": ["e"] }]);
    assert!(semantic_issues(&v).mentions("intersect"));
}

#[test]
fn malformed_json_is_not_a_semantic_error() {
    assert!(matches!(ModelFile::from_json("[1, 2"), Err(ModelError::Json(_))));
    assert!(matches!(ModelFile::from_json(r#"{"states": "a"}"#), Err(ModelError::Schema(_))));
}
