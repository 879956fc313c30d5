//! Primitive periodic symbolic orbits, their invariants, holonomy search
//! and the fixed space of the graph representation.

use std::collections::{BTreeSet, VecDeque};

use crate::algebra::Matrix;
use crate::model::{canonical_rotation, is_primitive, SymbolicFlowModel, Twist};
use crate::scalar::Scalar;

/// A primitive directed cycle up to rotation, stored at its lexicographically least rotation.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitClass<S> {
    pub cycle: Vec<usize>,
    /// Symbolic period (number of edges).
    pub period: usize,
    /// Total return time `T_O`.
    pub total_time: u64,
    pub delta: i8,
    pub epsilon: i8,
    /// `ρ(γ_O)` at the base point of the canonical rotation.
    pub holonomy: Matrix<S>,
}

impl<S: Scalar> OrbitClass<S> {
    pub fn trace(&self) -> S {
        self.holonomy.trace()
    }

    /// Traces of `ρ(γ)^k` for `k = 1..=m`; these determine the conjugacy-invariant data.
    pub fn power_traces(&self) -> Vec<S> {
        let mut p = self.holonomy.clone();
        let mut out = Vec::with_capacity(p.rows());
        for _ in 0..p.rows() {
            out.push(p.trace());
            p = &p * &self.holonomy;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    #[error("edge word is empty or not a closed directed walk")]
    NotClosed,
    #[error("cycle is a proper power of a shorter cycle")]
    NotPrimitive,
    #[error("target holonomy is not a unitary {0}x{0} matrix")]
    InvalidTarget(usize),
}

/// Invariants of a primitive closed walk, reported at its canonical rotation.
pub fn orbit_invariants<S: Scalar>(model: &SymbolicFlowModel<S>, cycle: &[usize]) -> Result<OrbitClass<S>, OrbitError> {
    if !model.is_closed_walk(cycle) {
        return Err(OrbitError::NotClosed);
    }
    if !is_primitive(cycle) {
        return Err(OrbitError::NotPrimitive);
    }
    let canon = canonical_rotation(cycle);
    Ok(OrbitClass {
        period: canon.len(),
        total_time: model.return_time(&canon),
        delta: model.delta_product(&canon),
        epsilon: model.epsilon_product(&canon),
        holonomy: model.holonomy(&canon),
        cycle: canon,
    })
}

/// Calls `visit` once per canonical primitive cycle of length at most
/// `max_len`, with the holonomy of the canonical rotation.
///
/// Canonical primitive cycles are exactly the Lyndon words over the edge
/// alphabet that close up in the graph. Every prefix of a Lyndon word is a
/// prenecklace, so the depth-first walk tracks the prenecklace period `p`
/// and prunes any extension that falls below the periodic continuation.
/// A node of depth `t` is Lyndon exactly when `p = t`.
fn for_each_cycle<S: Scalar>(model: &SymbolicFlowModel<S>, max_len: usize, visit: &mut impl FnMut(&[usize], &Matrix<S>)) {
    let mut word = Vec::with_capacity(max_len);
    let mut prefix = Vec::with_capacity(max_len);
    let out: Vec<Vec<usize>> = (0..model.num_states()).map(|s| model.out_edges(s)).collect();
    for start in 0..model.edges.len() {
        if max_len == 0 {
            break;
        }
        word.clear();
        prefix.clear();
        word.push(start);
        prefix.push(model.edges[start].rho.clone());
        extend(model, &out, max_len, 1, &mut word, &mut prefix, visit);
    }
}

fn extend<S: Scalar>(
    model: &SymbolicFlowModel<S>,
    out: &[Vec<usize>],
    max_len: usize,
    period: usize,
    word: &mut Vec<usize>,
    prefix: &mut Vec<Matrix<S>>,
    visit: &mut impl FnMut(&[usize], &Matrix<S>),
) {
    let t = word.len();
    let last = word[t - 1];
    if period == t && model.edges[last].to == model.edges[word[0]].from {
        visit(word, &prefix[t - 1]);
    }
    if t == max_len {
        return;
    }
    let floor = word[t - period];
    for &next in &out[model.edges[last].to] {
        if next < floor {
            continue;
        }
        let p = if next == floor { period } else { t + 1 };
        let h = &prefix[t - 1] * &model.edges[next].rho;
        word.push(next);
        prefix.push(h);
        extend(model, out, max_len, p, word, prefix, visit);
        word.pop();
        prefix.pop();
    }
}

/// One [`OrbitClass`] per rotation class of primitive cycles of length at most `max_len`,
/// ordered by period and then by canonical edge word.
pub fn enumerate_primitive_cycles<S: Scalar>(model: &SymbolicFlowModel<S>, max_len: usize) -> Vec<OrbitClass<S>> {
    let mut out = Vec::new();
    for_each_cycle(model, max_len, &mut |w, h| {
        out.push(OrbitClass {
            cycle: w.to_vec(),
            period: w.len(),
            total_time: model.return_time(w),
            delta: model.delta_product(w),
            epsilon: model.epsilon_product(w),
            holonomy: h.clone(),
        })
    });
    out.sort_by(|a, b| (a.period, &a.cycle).cmp(&(b.period, &b.cycle)));
    out
}

/// Oracle: every closed walk of length at most `max_len`, reduced to its
/// canonical rotation, deduplicated, primitive ones kept.
pub fn brute_force_orbit_words<S: Scalar>(model: &SymbolicFlowModel<S>, max_len: usize) -> BTreeSet<Vec<usize>> {
    let mut found = BTreeSet::new();
    let mut paths: Vec<Vec<usize>> = (0..model.edges.len()).map(|e| vec![e]).collect();
    for _ in 1..=max_len {
        for p in &paths {
            if model.is_closed_walk(p) && is_primitive(p) {
                found.insert(canonical_rotation(p));
            }
        }
        let mut next = Vec::new();
        for p in &paths {
            let head = model.edges[*p.last().expect("nonempty path")].to;
            for (e, edge) in model.edges.iter().enumerate() {
                if edge.from == head {
                    let mut q = p.clone();
                    q.push(e);
                    next.push(q);
                }
            }
        }
        paths = next;
    }
    found
}

/// Searches primitive cycles by increasing length for one whose holonomy is
/// within `delta` of `target` in max-entry norm, skipping designated orbits.
///
/// The scan is exhaustive up to `max_len`, so `Ok(None)` is an honest
/// not-found. On the exact backend pass `delta = 0` for equality.
pub fn find_cycle_with_holonomy<S: Scalar>(
    model: &SymbolicFlowModel<S>,
    target: &Matrix<S>,
    delta: f64,
    max_len: usize,
) -> Result<Option<OrbitClass<S>>, OrbitError> {
    if target.rows() != model.dim || target.cols() != model.dim || !target.is_unitary(model.tolerance()) {
        return Err(OrbitError::InvalidTarget(model.dim));
    }
    let designated: BTreeSet<Vec<usize>> = model.designated().map(|(_, o)| canonical_rotation(&o.cycle)).collect();
    for len in 1..=max_len {
        let mut hits: Vec<Vec<usize>> = Vec::new();
        for_each_cycle(model, len, &mut |w, h| {
            let close = if S::EXACT && delta == 0.0 { h == target } else { h.max_deviation(target) <= delta };
            if w.len() == len && close && !designated.contains(w) {
                hits.push(w.to_vec());
            }
        });
        if let Some(w) = hits.into_iter().min() {
            return orbit_invariants(model, &w).map(Some);
        }
    }
    Ok(None)
}

/// Subspace of `S^m` fixed by the holonomy of every closed walk at the root state.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedSpace<S> {
    pub dimension: usize,
    pub basis: Vec<Vec<S>>,
}

/// Spanning tree used for gauge fixing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub struct TreeChoice {
    pub root: usize,
    pub depth_first: bool,
}


/// Fixed space of the graph representation (twisted by `ε` in the
/// [`Twist::EpsilonRho`] mode), with the default spanning tree.
pub fn global_fixed_space<S: Scalar>(model: &SymbolicFlowModel<S>, twist: Twist) -> FixedSpace<S> {
    global_fixed_space_with_tree(model, twist, TreeChoice::default())
}

/// Gauge-fixes along a spanning tree rooted at `tree.root`, then intersects
/// the 1-eigenspaces of the fundamental-cycle holonomies
/// `g(u) ρ_e g(w)^{-1}` for every non-tree edge `e: u → w`.
pub fn global_fixed_space_with_tree<S: Scalar>(model: &SymbolicFlowModel<S>, twist: Twist, tree: TreeChoice) -> FixedSpace<S> {
    let n = model.num_states();
    let m = model.dim;
    let tol = model.tolerance();
    // gauge[v] = holonomy of the tree path from the root to v
    let mut gauge: Vec<Option<Matrix<S>>> = vec![None; n];
    let mut tree_edge = vec![false; model.edges.len()];
    gauge[tree.root] = Some(Matrix::identity(m));
    let mut frontier = VecDeque::from([tree.root]);
    while let Some(v) = if tree.depth_first { frontier.pop_back() } else { frontier.pop_front() } {
        for e in model.out_edges(v) {
            let w = model.edges[e].to;
            if gauge[w].is_none() {
                let g = gauge[v].as_ref().expect("visited state has a gauge");
                gauge[w] = Some(g * &model.twisted_rho(e, twist));
                tree_edge[e] = true;
                frontier.push_back(w);
            }
        }
    }
    let inverses: Vec<Option<Matrix<S>>> =
        gauge.iter().map(|g| g.as_ref().map(|g| g.inverse(tol).expect("unitary gauge is invertible"))).collect();

    let mut stacked: Vec<Vec<S>> = Vec::new();
    let id = Matrix::<S>::identity(m);
    for (e, edge) in model.edges.iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        let (Some(gu), Some(gw_inv)) = (&gauge[edge.from], &inverses[edge.to]) else { continue };
        let h = &(gu * &model.twisted_rho(e, twist)) * gw_inv;
        stacked.extend((&h - &id).to_rows());
    }
    let basis = if stacked.is_empty() { id.to_rows() } else { Matrix::from_rows(stacked).right_kernel(tol) };
    FixedSpace { dimension: basis.len(), basis }
}

/// Oracle: intersection of the kernels of `h - I` over the holonomies of all
/// closed walks of length at most `max_len` through `root`.
pub fn brute_force_fixed_dimension<S: Scalar>(model: &SymbolicFlowModel<S>, twist: Twist, root: usize, max_len: usize) -> usize {
    let m = model.dim;
    let tol = model.tolerance();
    let id = Matrix::<S>::identity(m);
    let mut stacked: Vec<Vec<S>> = Vec::new();
    let mut layer: Vec<(usize, Matrix<S>)> = vec![(root, id.clone())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (v, h) in &layer {
            for e in model.out_edges(*v) {
                let h2 = h * &model.twisted_rho(e, twist);
                let w = model.edges[e].to;
                if w == root {
                    stacked.extend((&h2 - &id).to_rows());
                }
                next.push((w, h2));
            }
        }
        layer = next;
    }
    if stacked.is_empty() {
        return m;
    }
    Matrix::from_rows(stacked).right_kernel(tol).len()
}
