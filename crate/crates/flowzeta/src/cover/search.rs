//! Seeded search for small sign-type models with a branched double cover.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::Matrix;
use crate::model::{canonical_rotation, is_primitive, BackendSpec, Derivative, DesignatedOrbit, Edge, SymbolicFlowModel};
use crate::orbits::enumerate_primitive_cycles;
use crate::torsion::synth::{cover_spec, successor_cycle_words};
use crate::torsion::{H1Order, Successor};
use crate::Exact;

use super::class_number_check;

/// Shape limits for [`search_branched_instance`].
#[derive(Clone, Debug)]
pub struct BranchedSearchParams {
    pub max_states: usize,
    pub max_out_degree: usize,
    /// Longest cycle considered for the branch orbit.
    pub max_branch_len: usize,
    pub attempts: usize,
}

impl Default for BranchedSearchParams {
    fn default() -> Self {
        BranchedSearchParams { max_states: 3, max_out_degree: 3, max_branch_len: 3, attempts: 5000 }
    }
}

fn sign(rng: &mut impl Rng) -> i8 {
    if rng.gen_bool(0.5) {
        1
    } else {
        -1
    }
}

/// Draws random sign-type models with random vertex successors, takes the
/// successor cycles as `Γˢ` (all must have sign `-1`) and a short cycle with
/// `ρ = ε = Δ = +1` as the branch orbit, builds branched cell data and keeps
/// the first model whose base is an integer homology sphere with
/// `det(I - H) ≠ 0` and whose lift has finite `H_1`.
pub fn search_branched_instance(rng: &mut impl Rng, p: &BranchedSearchParams) -> Option<SymbolicFlowModel<Exact>> {
    let q = |n: i64, d: i64| Exact::new(n.into(), d.into());
    for _ in 0..p.attempts {
        let n = rng.gen_range(1..=p.max_states.max(1));
        let mut arcs: Vec<(usize, usize)> = Vec::new();
        for s in 0..n {
            arcs.push((s, (s + 1) % n));
            for _ in 1..rng.gen_range(1..=p.max_out_degree.max(1)) {
                arcs.push((s, rng.gen_range(0..n)));
            }
        }
        arcs.sort();
        let edges: Vec<Edge<Exact>> = arcs
            .iter()
            .enumerate()
            .map(|(k, &(from, to))| {
                let (delta, epsilon) = (sign(rng), sign(rng));
                Edge {
                    id: format!("e{}", k + 1),
                    from,
                    to,
                    r: 1,
                    delta,
                    epsilon,
                    rho: Matrix::scalar(1, q(sign(rng) as i64, 1)),
                    derivative: Some(Derivative { lambda: q(2 * delta as i64, 1), mu: q((delta * epsilon) as i64, 2) }),
                }
            })
            .collect();
        let mut model = SymbolicFlowModel {
            name: Some("branched".into()),
            states: (0..n).map(|s| format!("s{s}")).collect(),
            edges,
            gamma_u: vec![],
            gamma_s: vec![],
            dim: 1,
            backend: BackendSpec::exact(),
            flow_complex: None,
        };
        let successors: BTreeMap<String, [Successor; 2]> = (0..n)
            .map(|s| {
                let out = model.out_edges(s);
                let mut pick = || Successor { edge: model.edges[*out.choose(rng).expect("out-edge")].id.clone(), side: rng.gen_range(0..2) };
                (model.states[s].clone(), [pick(), pick()])
            })
            .collect();
        let Ok(cycles) = successor_cycle_words(&model, &successors) else { continue };
        let odd = |w: &[usize]| model.holonomy(w)[(0, 0)] == q(-1, 1);
        if cycles.iter().any(|c| !odd(c) || !is_primitive(c)) {
            continue;
        }
        let mut stable = cycles.clone();
        stable.sort();
        stable.dedup();
        if stable.len() != cycles.len() {
            continue;
        }
        let candidates: Vec<Vec<usize>> = enumerate_primitive_cycles(&model, p.max_branch_len)
            .into_iter()
            .filter(|o| o.epsilon == 1 && !stable.contains(&canonical_rotation(&o.cycle)))
            .map(|o| o.cycle)
            .collect();
        let Some(branch) = candidates.choose(rng).cloned() else { continue };
        model.gamma_s = stable.into_iter().map(|cycle| DesignatedOrbit { cycle, prong: None }).collect();
        model.gamma_u = vec![DesignatedOrbit { cycle: branch, prong: None }];
        let Ok(spec) = cover_spec(&model, successors) else { continue };
        model.flow_complex = Some(spec);
        let Ok(report) = class_number_check(&model) else { continue };
        if report.det_i_minus_h != 0.into() && matches!(report.snf_value, H1Order::Finite(_)) {
            return Some(model);
        }
    }
    None
}
