use flowzeta::algebra::{UPoly, ZSeries};
use flowzeta::model::random::{random_model, RandomModelParams};
use flowzeta::model::{parse_model, SymbolicFlowModel, Twist};
use flowzeta::torsion::synth::cat_map_model;
use flowzeta::zeta::{
    euler_product_series, markov_determinant_series, markov_ratio_series, periodic_word_sums, periodic_word_sums_brute, word_sign_identity,
    zeta_flow_rational,
};
use flowzeta::{Exact, Float, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

fn q(n: i64, d: i64) -> Exact {
    Exact::new(n.into(), d.into())
}

fn models(seed: u64, count: usize) -> Vec<SymbolicFlowModel<Exact>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_model(&mut rng, &RandomModelParams::default())).collect()
}

#[test]
fn word_sums_match_brute_force() {
    for m in models(31, 10) {
        for twist in [Twist::Rho, Twist::DeltaRho, Twist::EpsilonRho] {
            assert_eq!(periodic_word_sums(&m, twist, 6), periodic_word_sums_brute(&m, twist, 6));
        }
    }
}

#[test]
fn orbit_grouping_matches_the_euler_product() {
    for m in models(32, 10) {
        assert_eq!(markov_determinant_series(&m, 8), euler_product_series(&m, 8));
    }
}

#[test]
fn single_loop_has_one_factor() {
    let v = json!({
        "states": ["a"],
        "edges": [{ "id": "e", "from": "a", "to": "a", "r": 1, "delta": 1, "epsilon": 1, "rho": [1],
                    "derivative": { "lambda": 2, "mu": "1/2" } }]
    });
    let m = parse_model::<Exact>(&v.to_string()).expect("valid");
    let mut coeffs = vec![UPoly::one(), UPoly::monomial(q(-1, 1), 1)];
    coeffs.resize(7, UPoly::zero());
    let expected = ZSeries::from_coeffs(6, coeffs);
    assert_eq!(euler_product_series(&m, 6), expected);
    assert_eq!(markov_ratio_series(&m, 6).expect("derivatives present"), expected);
}

#[test]
fn sign_of_the_lefschetz_factor() {
    for (l, mu) in [(q(2, 1), q(1, 2)), (q(3, 1), q(-1, 5)), (q(-5, 2), q(1, 3)), (q(-4, 1), q(-2, 7))] {
        let delta = if l > q(0, 1) { q(1, 1) } else { q(-1, 1) };
        let (telescoped, ratio) = word_sign_identity(&l, &mu, 0.0);
        assert_eq!(telescoped, delta);
        assert_eq!(ratio, -delta);
    }
}

#[test]
fn float_backend_tracks_the_exact_one() {
    for m in models(33, 10) {
        let f = m.map_scalars(Float::from_rational);
        let exact = euler_product_series(&m, 8);
        let float = euler_product_series(&f, 8);
        assert!(float.max_deviation(&ZSeries::from_coeffs(8, exact.coeffs().iter().map(|p| p.map(Float::from_rational)).collect())) < 1e-9);
        let ratio = markov_ratio_series(&f, 8).expect("derivatives present");
        assert!(ratio.approx_eq(&float, 1e-9));
    }
}

#[test]
fn cat_map_zeta_is_regular_at_one() {
    let z = zeta_flow_rational(&cat_map_model(), false).expect("rational");
    assert_eq!(z.order_at_one, 0);
    assert_eq!(z.leading.abs_value(), q(5, 4));
}
