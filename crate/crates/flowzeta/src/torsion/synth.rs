//! Synthetic flow cell data for sign-type models.
//!
//! A model is sign-type when `m = 1` and every `ρ_e = ±1`. Boundaries are
//! then written over `ℤ[ℤ/2]`: only the parity of a word (odd when its
//! holonomy is `-1`) matters, so `∂∂ = 0` holds at once for the trivial
//! representation, for `ρ` and for the double cover.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{ToPrimitive, Zero};

use crate::model::{canonical_rotation, SymbolicFlowModel};
use crate::scalar::Scalar;

use super::flow::{assemble, Level};
use super::{complex_homology, integral_homology_basis, FlowComplexSpec, Incidence, Successor, TorsionError};

fn err(msg: impl Into<String>) -> TorsionError {
    TorsionError::FlowComplex(msg.into())
}

/// Per edge, true when `ρ_e = -1`; fails unless the model is sign-type.
pub fn edge_parities<S: Scalar>(model: &SymbolicFlowModel<S>) -> Result<Vec<bool>, TorsionError> {
    if model.dim != 1 {
        return Err(err("sign-type data needs a one-dimensional representation"));
    }
    let tol = model.tolerance();
    model
        .edges
        .iter()
        .map(|e| {
            let x = e.rho[(0, 0)].clone();
            if x.approx_eq(&S::one(), tol) {
                Ok(false)
            } else if x.approx_eq(&-S::one(), tol) {
                Ok(true)
            } else {
                Err(err(format!("holonomy of edge '{}' is not +1 or -1", e.id)))
            }
        })
        .collect()
}

pub fn word_parity(parities: &[bool], word: &[usize]) -> bool {
    word.iter().fold(false, |acc, &e| acc ^ parities[e])
}

/// Default vertex successors: side 0 follows the first out-edge, side 1 the
/// last, landing on the side given by the unstable orientation of the edge.
pub fn default_successors<S: Scalar>(model: &SymbolicFlowModel<S>) -> BTreeMap<String, [Successor; 2]> {
    (0..model.num_states())
        .map(|s| {
            let out = model.out_edges(s);
            let (first, last) = (&model.edges[out[0]], &model.edges[out[out.len() - 1]]);
            let succ = [
                Successor { edge: first.id.clone(), side: if first.delta > 0 { 0 } else { 1 } },
                Successor { edge: last.id.clone(), side: if last.delta > 0 { 1 } else { 0 } },
            ];
            (model.states[s].clone(), succ)
        })
        .collect()
}

/// Shortest edge path from `from` to `to` whose parity is `odd`.
pub fn path_with_parity<S: Scalar>(model: &SymbolicFlowModel<S>, parities: &[bool], from: usize, to: usize, odd: bool) -> Option<Vec<usize>> {
    let n = model.num_states();
    let key = |s: usize, p: bool| 2 * s + p as usize;
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; 2 * n];
    let mut seen = vec![false; 2 * n];
    seen[key(from, false)] = true;
    let mut queue = VecDeque::from([(from, false)]);
    while let Some((s, p)) = queue.pop_front() {
        if s == to && p == odd {
            let mut word = Vec::new();
            let mut k = key(s, p);
            while let Some((back, e)) = prev[k] {
                word.push(e);
                k = back;
            }
            word.reverse();
            return Some(word);
        }
        for e in model.out_edges(s) {
            let next = (model.edges[e].to, p ^ parities[e]);
            let k = key(next.0, next.1);
            if !seen[k] {
                seen[k] = true;
                prev[k] = Some((key(s, p), e));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Successor of every vertex `2θ + side` as `(vertex, edge)`.
fn successor_map<S: Scalar>(model: &SymbolicFlowModel<S>, successors: &BTreeMap<String, [Successor; 2]>) -> Result<Vec<(usize, usize)>, TorsionError> {
    let mut next = Vec::with_capacity(2 * model.num_states());
    for (s, name) in model.states.iter().enumerate() {
        let pair = successors.get(name).ok_or_else(|| err(format!("no successors for state '{name}'")))?;
        for succ in pair {
            let e = model.edge_index(&succ.edge).ok_or_else(|| err(format!("unknown edge '{}'", succ.edge)))?;
            if model.edges[e].from != s || succ.side > 1 {
                return Err(err(format!("invalid successor '{}' of state '{name}'", succ.edge)));
            }
            next.push((2 * model.edges[e].to + succ.side as usize, e));
        }
    }
    Ok(next)
}

/// The vertex on the successor cycle reached from `p` with the smallest index.
fn cycle_root(next: &[(usize, usize)], p: usize) -> usize {
    let mut seen = vec![false; next.len()];
    let mut x = p;
    while !seen[x] {
        seen[x] = true;
        x = next[x].0;
    }
    let mut root = x;
    let mut y = next[x].0;
    while y != x {
        root = root.min(y);
        y = next[y].0;
    }
    root
}

/// Vertical edges from `p` up to `q` (exclusive), each with the word from `p`
/// to its base, and the total word. With `p = q` and `around` set, walks the
/// whole cycle.
fn vertical_path(next: &[(usize, usize)], p: usize, q: usize, around: bool) -> (Vec<(usize, Vec<usize>)>, Vec<usize>) {
    let mut steps = Vec::new();
    let mut word = Vec::new();
    let mut x = p;
    let mut first = around;
    while x != q || first {
        first = false;
        steps.push((x, word.clone()));
        word.push(next[x].1);
        x = next[x].0;
    }
    (steps, word)
}

fn vert_label<S: Scalar>(model: &SymbolicFlowModel<S>, p: usize) -> String {
    format!("vert:{}:{}", model.states[p / 2], p % 2)
}

fn ids<S: Scalar>(model: &SymbolicFlowModel<S>, word: &[usize]) -> Vec<String> {
    word.iter().map(|&e| model.edges[e].id.clone()).collect()
}

/// Vertical-edge terms of every face making `∂∂ = 0` over `ℤ[ℤ/2]`.
///
/// The horizontal part of `∂ face:θ` has boundary `d` on the vertices.
/// Each vertex of `d` is pushed along its vertical path to the root of its
/// successor cycle; the leftover multiple `K` of the root is cancelled by a
/// multiple of the loop around the cycle, which needs `K` to have
/// augmentation zero on an odd cycle and to vanish on an even one.
pub fn face_chains<S: Scalar>(
    model: &SymbolicFlowModel<S>,
    successors: &BTreeMap<String, [Successor; 2]>,
) -> Result<BTreeMap<String, Vec<Incidence>>, TorsionError> {
    let parities = edge_parities(model)?;
    let next = successor_map(model, successors)?;
    let mut faces = BTreeMap::new();
    for theta in 0..model.num_states() {
        let mut d: Vec<(i64, Vec<usize>, usize)> = vec![(1, vec![], 2 * theta + 1), (-1, vec![], 2 * theta)];
        for e in model.out_edges(theta) {
            let (to, delta) = (model.edges[e].to, model.edges[e].delta as i64);
            d.push((-delta, vec![e], 2 * to + 1));
            d.push((delta, vec![e], 2 * to));
        }
        let mut terms = Vec::new();
        // per root: coefficients of even and odd words
        let mut leftover: BTreeMap<usize, [i64; 2]> = BTreeMap::new();
        for (c, g, s) in d {
            let q = cycle_root(&next, s);
            let (steps, total) = vertical_path(&next, s, q, false);
            for (x, w) in steps {
                terms.push(Incidence { cell: vert_label(model, x), coeff: c, word: ids(model, &[g.clone(), w].concat()) });
            }
            leftover.entry(q).or_default()[word_parity(&parities, &[g, total].concat()) as usize] += c;
        }
        for (q, [k0, k1]) in leftover {
            if k0 == 0 && k1 == 0 {
                continue;
            }
            let (loop_steps, gamma) = vertical_path(&next, q, q, true);
            if !word_parity(&parities, &gamma) {
                return Err(err(format!("face:{}: nonzero leftover on an even successor cycle", model.states[theta])));
            }
            if k0 + k1 != 0 {
                return Err(err(format!("face:{}: leftover has nonzero augmentation", model.states[theta])));
            }
            let (coeff, lead) = match path_with_parity(model, &parities, theta, q / 2, false) {
                Some(w) => (k0, w),
                None => (-k0, path_with_parity(model, &parities, theta, q / 2, true).ok_or_else(|| err("no path to the successor cycle"))?),
            };
            for (x, w) in loop_steps {
                terms.push(Incidence { cell: vert_label(model, x), coeff, word: ids(model, &[lead.clone(), w].concat()) });
            }
        }
        faces.insert(model.states[theta].clone(), terms);
    }
    Ok(faces)
}

/// Cell data where each unstable orbit is filled like a solid torus that
/// cancels the face at its base state: `∂p = -∂ face:θ₀` and
/// `∂v = (1 - ε[γ]) p + (1 - ε[γ]) face:θ₀`.
pub fn fried_spec<S: Scalar>(model: &SymbolicFlowModel<S>, successors: BTreeMap<String, [Successor; 2]>) -> Result<FlowComplexSpec, TorsionError> {
    let faces = face_chains(model, &successors)?;
    let mut p_cells = Vec::new();
    let mut v_cells = Vec::new();
    for o in &model.gamma_u {
        let theta = model.edges[o.cycle[0]].from;
        let name = &model.states[theta];
        let mut p = vec![Incidence { cell: format!("hor:{name}"), coeff: -1, word: vec![] }];
        for e in model.out_edges(theta) {
            let edge = &model.edges[e];
            p.push(Incidence { cell: format!("hor:{}", model.states[edge.to]), coeff: edge.delta as i64, word: vec![edge.id.clone()] });
        }
        p.extend(faces[name].iter().map(|i| Incidence { coeff: -i.coeff, ..i.clone() }));
        p_cells.push(p);
        let eps = model.epsilon_product(&o.cycle) as i64;
        v_cells.push(vec![
            Incidence { cell: format!("face:{name}"), coeff: 1, word: vec![] },
            Incidence { cell: format!("face:{name}"), coeff: -eps, word: ids(model, &o.cycle) },
        ]);
    }
    Ok(FlowComplexSpec { successors, faces, p_cells, v_cells, branched: false })
}

/// Cell data for a single unstable orbit along which a double cover
/// branches. The sign representation is only defined on the complement,
/// where the meridian of the orbit is odd, so `∂p` is an integer cycle `z`
/// generating `H_1 ≅ ℤ` of the punctured complex (it need not be a cycle
/// with sign coefficients) and `∂v = (1 - ε[γ]) p` with `ε_γ = +1`.
pub fn cover_spec<S: Scalar>(model: &SymbolicFlowModel<S>, successors: BTreeMap<String, [Successor; 2]>) -> Result<FlowComplexSpec, TorsionError> {
    let parities = edge_parities(model)?;
    let [o] = model.gamma_u.as_slice() else {
        return Err(err("branched data needs exactly one unstable orbit"));
    };
    if model.epsilon_product(&o.cycle) != 1 {
        return Err(err("the branch orbit needs epsilon = +1"));
    }
    let faces = face_chains(model, &successors)?;
    let draft = FlowComplexSpec { successors, faces, p_cells: vec![vec![]], v_cells: vec![vec![]], branched: true };
    let words = assemble(model, &draft)?;
    let plain = words.realize_integer(|_| 1).select(&words.level_cells(Level::F1, Level::F2));
    let h = complex_homology(&plain)?;
    if !(h[0].is_infinite_cyclic() && h[1].is_infinite_cyclic() && h[2].is_zero() && h[3].is_zero()) {
        return Err(err("punctured complex does not have the homology of a knot complement"));
    }
    let g = integral_homology_basis(&plain, 1).remove(0);
    let theta = model.edges[o.cycle[0]].from;
    let mut z = Vec::new();
    for (y, c) in g.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let coeff = c.to_i64().ok_or_else(|| err("coefficient overflow"))?;
        let target = words.base[1][y];
        let w = path_with_parity(model, &parities, theta, target, false)
            .or_else(|| path_with_parity(model, &parities, theta, target, true))
            .ok_or_else(|| err("no path to a cell of the generator"))?;
        z.push(Incidence { cell: words.labels[1][y].clone(), coeff, word: ids(model, &w) });
    }
    Ok(FlowComplexSpec { p_cells: vec![z], ..draft })
}

/// Canonical words of the successor cycles, for choosing `Γˢ`.
pub fn successor_cycle_words<S: Scalar>(
    model: &SymbolicFlowModel<S>,
    successors: &BTreeMap<String, [Successor; 2]>,
) -> Result<Vec<Vec<usize>>, TorsionError> {
    let next = successor_map(model, successors)?;
    let mut roots: Vec<usize> = (0..next.len()).map(|p| cycle_root(&next, p)).collect();
    roots.sort();
    roots.dedup();
    Ok(roots.into_iter().map(|q| canonical_rotation(&vertical_path(&next, q, q, true).1)).collect())
}

/// The suspension of the cat map `[[2, 1], [1, 1]]` coded on two states,
/// with every holonomy `-1`, `Γˢ = {e1}`, `Γᵘ = {e5}` and successors chosen
/// so that the vertex successor map has the single cycle `e1`.
pub fn cat_map_model() -> SymbolicFlowModel<crate::Exact> {
    use crate::algebra::Matrix;
    use crate::model::{BackendSpec, Derivative, DesignatedOrbit, Edge};
    use crate::Exact;

    let q = |n: i64, d: i64| Exact::new(n.into(), d.into());
    let edge = |id: &str, from: usize, to: usize| Edge {
        id: id.into(),
        from,
        to,
        r: 1,
        delta: 1,
        epsilon: 1,
        rho: Matrix::scalar(1, q(-1, 1)),
        derivative: Some(Derivative { lambda: q(2, 1), mu: q(1, 2) }),
    };
    let mut model = SymbolicFlowModel {
        name: Some("catmap".into()),
        states: vec!["a".into(), "b".into()],
        edges: vec![edge("e1", 0, 0), edge("e2", 0, 0), edge("e3", 0, 1), edge("e4", 1, 0), edge("e5", 1, 1)],
        gamma_u: vec![DesignatedOrbit { cycle: vec![4], prong: None }],
        gamma_s: vec![DesignatedOrbit { cycle: vec![0], prong: None }],
        dim: 1,
        backend: BackendSpec::exact(),
        flow_complex: None,
    };
    model.flow_complex = Some(fried_spec(&model, cat_map_successors()).expect("cat map cell data"));
    model
}

/// Vertex successors of [`cat_map_model`]; their only cycle is `e1`.
pub fn cat_map_successors() -> BTreeMap<String, [Successor; 2]> {
    let succ = |edge: &str, side: u8| Successor { edge: edge.into(), side };
    BTreeMap::from([
        ("a".to_string(), [succ("e1", 0), succ("e3", 0)]),
        ("b".to_string(), [succ("e4", 0), succ("e4", 1)]),
    ])
}

/// [`cat_map_model`] with branched cell data over `e5`: the double cover
/// branched over that orbit.
pub fn cat_map_branched_model() -> SymbolicFlowModel<crate::Exact> {
    let mut model = cat_map_model();
    model.name = Some("catmap-branched".into());
    model.flow_complex = Some(cover_spec(&model, cat_map_successors()).expect("cat map branched cell data"));
    model
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BackendSpec, DesignatedOrbit, Edge};
    use crate::torsion::build_flow_complex;
    use crate::Exact;

    fn loop_model(rho: i64) -> SymbolicFlowModel<Exact> {
        let edge = |id: &str, rho: i64| Edge {
            id: id.into(),
            from: 0,
            to: 0,
            r: 1,
            delta: 1,
            epsilon: 1,
            rho: crate::algebra::Matrix::scalar(1, Exact::from_integer(rho.into())),
            derivative: None,
        };
        SymbolicFlowModel {
            name: None,
            states: vec!["a".into()],
            edges: vec![edge("e1", rho), edge("e2", -1)],
            gamma_u: vec![DesignatedOrbit { cycle: vec![1], prong: None }],
            gamma_s: vec![],
            dim: 1,
            backend: BackendSpec::exact(),
            flow_complex: None,
        }
    }

    #[test]
    fn parity_paths() {
        let m = loop_model(-1);
        let p = edge_parities(&m).unwrap();
        assert_eq!(path_with_parity(&m, &p, 0, 0, false), Some(vec![]));
        assert_eq!(path_with_parity(&m, &p, 0, 0, true), Some(vec![0]));
    }

    #[test]
    fn cat_map_assembles() {
        let m = cat_map_model();
        let fc = build_flow_complex(&m).unwrap();
        let report = fc.torsion_report(&m).unwrap();
        assert!(report.multiplicative && report.matches_closed_form);
        assert_eq!(report.full, Exact::new(4.into(), 5.into()));
    }
}
