use flowzeta::cover::{class_number_check, lift_double_cover, CoverError, SignRep};
use flowzeta::torsion::synth::{cat_map_branched_model, cat_map_model};
use flowzeta::torsion::{complex_homology, h1_order, CellKind, H1Order, Term, WordComplex};
use flowzeta::Exact;
use num_bigint::BigInt;

fn term(target: usize, coeff: i64, word: &[usize]) -> Term {
    Term { target, coeff, word: word.to_vec() }
}

/// One vertex, one loop edge along edge 0 and one face wrapping `wrap` times.
fn loop_complex(wrap: i64) -> WordComplex {
    let mut cells = vec![vec![CellKind::Point { state: 0, side: 0 }], vec![CellKind::Horizontal { state: 0 }]];
    let mut boundaries = vec![vec![vec![term(0, 1, &[]), term(0, -1, &[0])]]];
    if wrap != 0 {
        cells.push(vec![CellKind::Face { state: 0 }]);
        boundaries.push(vec![vec![term(0, wrap, &[])]]);
    }
    let labels = cells.iter().enumerate().map(|(k, cs)| (0..cs.len()).map(|i| format!("c{k}.{i}")).collect()).collect();
    let base = cells.iter().map(|cs| vec![0; cs.len()]).collect();
    WordComplex { cells, labels, base, boundaries }
}

#[test]
fn trivial_rep_gives_two_copies() {
    let words = loop_complex(3);
    let cover = lift_double_cover(&words, &SignRep::trivial(1)).unwrap();
    assert_eq!(cover.lift.dims(), &[2, 2, 2]);
    assert_eq!(h1_order(&cover.base).unwrap(), H1Order::Finite(3.into()));
    assert_eq!(h1_order(&cover.lift).unwrap(), H1Order::Finite(9.into()));
    let h = complex_homology(&cover.lift).unwrap();
    assert_eq!(h[0].betti, 2);
    assert!(cover.isotypic_parts_match());
}

#[test]
fn odd_loop_lifts_to_a_connected_circle() {
    let words = loop_complex(0);
    let cover = lift_double_cover(&words, &SignRep::new(vec![-1])).unwrap();
    let h = complex_homology(&cover.lift).unwrap();
    assert!(h[0].is_infinite_cyclic());
    assert!(h[1].is_infinite_cyclic());
    assert!(cover.isotypic_parts_match());
}

#[test]
fn cat_map_branched_lift() {
    let m = cat_map_branched_model();
    let r = class_number_check(&m).unwrap();
    assert!(r.lift_homology[0].is_infinite_cyclic());
    assert_eq!(r.snf_value, H1Order::Finite(5.into()));
    assert_eq!(r.det_i_minus_h, BigInt::from(5));
    assert_eq!(r.stable_orbits, 1);
    assert!(r.isotypic);
    assert!(r.twisted_betti_match);
    assert!(r.orbit_ratios.ok() && r.orbit_ratios.checked > 0);
    assert!(r.tau_closed_form);
    assert_eq!(r.tau_x, Some(Exact::new(2.into(), 5.into())));
    assert_eq!(r.ratio_value, Some(r.formula_value.clone()));
}

#[test]
fn stable_orbits_must_be_odd() {
    let mut m = cat_map_model();
    for e in &mut m.edges {
        e.rho = flowzeta::algebra::Matrix::identity(1);
    }
    assert!(matches!(class_number_check(&m), Err(CoverError::StableSign(0))));
}

#[test]
fn matrix_holonomy_is_not_sign_type() {
    let mut m = cat_map_model();
    m.edges[0].rho = flowzeta::algebra::Matrix::scalar(1, Exact::new(1.into(), 2.into()));
    assert!(matches!(class_number_check(&m), Err(CoverError::NotSignType(id)) if id == "e1"));
}
