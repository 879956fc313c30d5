//! The class-number identities for a branched double cover.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Matrix, UPoly};
use crate::model::{canonical_rotation, BackendSpec, Edge, SymbolicFlowModel, Twist};
use crate::orbits::enumerate_primitive_cycles;
use crate::torsion::{acyclic_torsion, build_flow_complex, punctured_closed_form, complex_homology, H1Order, HomologyGroup, Level};
use crate::zeta::{det_i_minus_h, zeta_flow_rational};
use crate::Exact;

use super::{lift_double_cover, CoverError, SignRep};

/// Both sides of the class-number formula and the supporting cross-checks.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassNumberReport {
    pub det_i_minus_h: BigInt,
    pub stable_orbits: usize,
    /// `|det(I - H)| / 2^{|Γˢ| + 1}`.
    pub formula_value: BigRational,
    /// `|H_1|` of the lifted complex, from its Smith normal form.
    pub snf_value: H1Order,
    pub snf_factors: Vec<BigInt>,
    pub lift_homology: Vec<HomologyGroup>,
    /// Half the modulus of the punctured `ρ`-twisted zeta function at `u = 1`,
    /// when it has neither zero nor pole there.
    pub ratio_value: Option<BigRational>,
    /// Order of vanishing of the punctured zeta function at `u = 1`.
    pub ratio_order: i64,
    /// Torsion of the sign-twisted punctured complex `X`, when acyclic.
    pub tau_x: Option<BigRational>,
    /// `τ(X)` agrees with `|det(I - H)^{-1} ∏_{Γˢ} det(I - ρ(γ))|`.
    pub tau_closed_form: bool,
    /// `τ(X) |H_1|`, when both are defined.
    pub tau_h1_product: Option<BigRational>,
    /// `2 τ(X) |H_1| = 1`.
    pub tau_identity: bool,
    /// The lift restricted to non-branch cells splits into `C(M)` and `X`.
    pub isotypic: bool,
    /// Betti numbers of `X` agree with the twisted punctured flow complex.
    pub twisted_betti_match: bool,
    pub orbit_ratios: OrbitRatioCheck,
    pub pass: bool,
}

/// Result of comparing lifted orbit factors with `1 - Δ ρ(γ) u^T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRatioCheck {
    pub checked: usize,
    /// Base orbits whose lifted factors do not match.
    pub failures: Vec<Vec<usize>>,
}

impl OrbitRatioCheck {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Orbits of the base of length at most this are compared with their lifts.
const ORBIT_SAMPLE_LEN: usize = 4;

/// Runs the class-number checks on a sign-type model with flow cell data
/// whose base complex is an integer homology sphere.
pub fn class_number_check(model: &SymbolicFlowModel<Exact>) -> Result<ClassNumberReport, CoverError> {
    let rep = SignRep::from_model(model)?;
    if let Some(k) = model.gamma_s.iter().position(|o| rep.sign(&o.cycle) != -1) {
        return Err(CoverError::StableSign(k));
    }
    let fc = build_flow_complex(model)?;
    let h = complex_homology(&fc.integer)?;
    if !(h[0].is_infinite_cyclic() && h[1].is_zero() && h[2].is_zero() && h[3].is_infinite_cyclic()) {
        let shown: Vec<String> = h.iter().map(ToString::to_string).collect();
        return Err(CoverError::NotHomologySphere(format!("H = ({})", shown.join(", "))));
    }

    let det = det_i_minus_h(model, Twist::DeltaRho);
    assert!(det.is_integer(), "sign-type H has integer entries");
    let det = det.to_integer();
    let cover = lift_double_cover(&fc.words, &rep)?;
    let lift_homology = complex_homology(&cover.lift)?;
    let h1 = &lift_homology[1];
    let snf_value = if h1.betti > 0 { H1Order::Infinite } else { H1Order::Finite(h1.torsion_order()) };
    if det.is_zero() {
        if let H1Order::Finite(n) = &snf_value {
            return Err(CoverError::Inconsistent(format!("|H_1| = {n}")));
        }
    }
    let stable_orbits = model.gamma_s.len();
    let formula_value = BigRational::new(det.abs(), BigInt::from(2).pow(stable_orbits as u32 + 1));

    let tau_x = acyclic_torsion(&cover.twisted.to_rational(), 0.0).ok();
    let tau_closed_form = match (&tau_x, punctured_closed_form(model)) {
        (Some(t), Ok(c)) => *t == c,
        _ => false,
    };
    let tau_h1_product = match (&tau_x, &snf_value) {
        (Some(t), H1Order::Finite(n)) => Some(t * BigRational::from_integer(n.clone())),
        _ => None,
    };
    let tau_identity = tau_h1_product.as_ref().is_some_and(|p| BigRational::from_integer(2.into()) * p == BigRational::one());
    let zeta = zeta_flow_rational(model, true).map_err(|e| CoverError::Zeta(e.to_string()))?;
    let ratio_value = (zeta.order_at_one == 0).then(|| zeta.leading.abs() / BigRational::from_integer(2.into()));
    let isotypic = cover.isotypic_parts_match();
    let twisted_betti_match = cover.twisted.to_rational().betti(0.0) == fc.filtration(Level::F2).betti(0.0);
    let orbit_ratios = orbit_ratio_check(model, &rep, ORBIT_SAMPLE_LEN);

    let formula_matches = matches!(&snf_value, H1Order::Finite(n) if BigRational::from_integer(n.clone()) == formula_value);
    let pass = formula_matches
        && ratio_value.as_ref() == Some(&formula_value)
        && tau_identity
        && tau_closed_form
        && isotypic
        && twisted_betti_match
        && orbit_ratios.ok();
    Ok(ClassNumberReport {
        det_i_minus_h: det,
        stable_orbits,
        formula_value,
        snf_factors: h1.torsion.clone(),
        snf_value,
        lift_homology,
        ratio_value,
        ratio_order: zeta.order_at_one,
        tau_x,
        tau_closed_form,
        tau_h1_product,
        tau_identity,
        isotypic,
        twisted_betti_match,
        orbit_ratios,
        pass,
    })
}

/// The unbranched double cover of the graph: states `(θ, s)`, and edge
/// `e` from sheet `s` to sheet `s` or `1 - s` as its sign is `+1` or `-1`.
/// Edge `2e + s` is the lift of `e` starting on sheet `s`; holonomies are trivial.
fn doubled_graph(model: &SymbolicFlowModel<Exact>, rep: &SignRep) -> SymbolicFlowModel<Exact> {
    let states = model.states.iter().flat_map(|s| [format!("{s}.0"), format!("{s}.1")]).collect();
    let edges = model
        .edges
        .iter()
        .enumerate()
        .flat_map(|(k, e)| {
            let flip = (rep.signs[k] < 0) as usize;
            (0..2).map(move |s| Edge {
                id: format!("{}.{s}", e.id),
                from: 2 * e.from + s,
                to: 2 * e.to + (s ^ flip),
                r: e.r,
                delta: e.delta,
                epsilon: e.epsilon,
                rho: Matrix::identity(1),
                derivative: None,
            })
        })
        .collect();
    SymbolicFlowModel {
        name: None,
        states,
        edges,
        gamma_u: vec![],
        gamma_s: vec![],
        dim: 1,
        backend: BackendSpec::exact(),
        flow_complex: None,
    }
}

/// Primitive root of a word and its exponent.
fn primitive_root(word: &[usize]) -> (Vec<usize>, usize) {
    let n = word.len();
    let d = (1..=n).find(|d| n.is_multiple_of(*d) && (0..n).all(|i| word[i] == word[i % d])).expect("n divides itself");
    (canonical_rotation(&word[..d]), n / d)
}

fn orbit_factor(delta: i64, t: u64) -> UPoly<Exact> {
    &UPoly::one() - &UPoly::monomial(Exact::from_integer(delta.into()), t as usize)
}

/// For every non-designated primitive orbit of length at most `max_len`,
/// enumerates its lifts in the doubled graph independently and checks that
/// the lifted factors divided by the base factor `1 - Δ u^T` equal
/// `1 - Δ ρ(γ) u^T`: two lifts when `ρ(γ) = 1`, one of twice the length otherwise.
pub fn orbit_ratio_check(model: &SymbolicFlowModel<Exact>, rep: &SignRep, max_len: usize) -> OrbitRatioCheck {
    let doubled = doubled_graph(model, rep);
    let mut lifts: BTreeMap<Vec<usize>, Vec<(i8, u64)>> = BTreeMap::new();
    for o in enumerate_primitive_cycles(&doubled, 2 * max_len) {
        let projected: Vec<usize> = o.cycle.iter().map(|e| e / 2).collect();
        let (root, _) = primitive_root(&projected);
        if root.len() <= max_len {
            lifts.entry(root).or_default().push((o.delta, o.total_time));
        }
    }
    let designated: Vec<Vec<usize>> = model.designated().map(|(_, o)| canonical_rotation(&o.cycle)).collect();
    let mut checked = 0;
    let mut failures = Vec::new();
    for o in enumerate_primitive_cycles(model, max_len) {
        if designated.contains(&o.cycle) {
            continue;
        }
        checked += 1;
        let lifted = lifts.get(&o.cycle).map(Vec::as_slice).unwrap_or(&[]);
        let product = lifted.iter().fold(UPoly::one(), |acc, &(d, t)| &acc * &orbit_factor(d as i64, t));
        let delta = o.delta as i64;
        let expected = &orbit_factor(delta, o.total_time) * &orbit_factor(delta * rep.sign(&o.cycle) as i64, o.total_time);
        if product != expected {
            failures.push(o.cycle.clone());
        }
    }
    OrbitRatioCheck { checked, failures }
}
