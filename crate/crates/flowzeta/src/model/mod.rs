//! Symbolic flow models: a finite directed multigraph whose edges carry a
//! return time, orientation signs, a holonomy matrix and optional
//! hyperbolic derivative data, plus the designated orbit sets `Γᵘ`, `Γˢ`.

mod file;
mod prong;
pub mod random;
mod validate;

use std::collections::VecDeque;

pub use file::{parse_model, parse_rational, BackendKind, BackendSpec, ModelError, ModelFile};
pub use prong::{prong_leaf_data, LeafData, ProngError, ProngSpec};
pub use validate::{validate_model, Issue, ValidationReport};

use crate::algebra::Matrix;
use crate::scalar::Scalar;
use crate::torsion::FlowComplexSpec;

/// Hyperbolic derivative `diag(λ, μ)` of the first-return map along an edge.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivative<S> {
    pub lambda: S,
    pub mu: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<S> {
    pub id: String,
    pub from: usize,
    pub to: usize,
    /// Return time in ticks, at least 1.
    pub r: u32,
    /// Unstable orientation sign `Δ`.
    pub delta: i8,
    /// Tangent orientation sign `ε`.
    pub epsilon: i8,
    pub rho: Matrix<S>,
    pub derivative: Option<Derivative<S>>,
}

/// Which designated set an orbit belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Unstable,
    Stable,
}

/// Sign twist applied to the edge holonomies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Twist {
    /// `ρ_e`.
    Rho,
    /// `Δ_e ρ_e`.
    DeltaRho,
    /// `ε_e ρ_e`.
    EpsilonRho,
}

/// A closed orbit placed in `Γᵘ` or `Γˢ`, given as a cycle of edge indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignatedOrbit {
    pub cycle: Vec<usize>,
    pub prong: Option<ProngSpec>,
}

#[derive(Clone, Debug)]
pub struct SymbolicFlowModel<S> {
    pub name: Option<String>,
    pub states: Vec<String>,
    pub edges: Vec<Edge<S>>,
    pub gamma_u: Vec<DesignatedOrbit>,
    pub gamma_s: Vec<DesignatedOrbit>,
    /// Representation dimension `m`.
    pub dim: usize,
    pub backend: BackendSpec,
    pub flow_complex: Option<FlowComplexSpec>,
}

impl<S: Scalar> SymbolicFlowModel<S> {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn tolerance(&self) -> f64 {
        self.backend.tolerance
    }

    pub fn state_index(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Indices of edges leaving `state`, in file order.
    pub fn out_edges(&self, state: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].from == state).collect()
    }

    /// Edge-count matrix; for a graph without parallel edges this is the 0/1 adjacency `A`.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.num_states();
        let mut a = vec![vec![0u64; n]; n];
        for e in &self.edges {
            a[e.from][e.to] += 1;
        }
        a
    }

    /// True when consecutive edges of `cycle` connect and the last returns to the first.
    pub fn is_closed_walk(&self, cycle: &[usize]) -> bool {
        !cycle.is_empty()
            && cycle.iter().all(|&e| e < self.edges.len())
            && (0..cycle.len()).all(|i| self.edges[cycle[i]].to == self.edges[cycle[(i + 1) % cycle.len()]].from)
    }

    /// True when consecutive edges connect (no closing condition).
    pub fn is_path(&self, word: &[usize]) -> bool {
        word.iter().all(|&e| e < self.edges.len())
            && word.windows(2).all(|w| self.edges[w[0]].to == self.edges[w[1]].from)
    }

    /// Ordered holonomy product `ρ_{e_1} ρ_{e_2} ⋯` of an edge word.
    pub fn holonomy(&self, word: &[usize]) -> Matrix<S> {
        word.iter().fold(Matrix::identity(self.dim), |acc, &e| &acc * &self.edges[e].rho)
    }

    /// Holonomy twisted by the tangent signs: `∏ ε_e ρ_e`.
    pub fn epsilon_holonomy(&self, word: &[usize]) -> Matrix<S> {
        self.holonomy(word).scale(&S::from_i64(self.sign_product(word, |e| e.epsilon) as i64))
    }

    /// Edge holonomy with the requested sign twist.
    pub fn twisted_rho(&self, e: usize, twist: Twist) -> Matrix<S> {
        let edge = &self.edges[e];
        match twist {
            Twist::Rho => edge.rho.clone(),
            Twist::DeltaRho => edge.rho.scale(&S::from_i64(edge.delta as i64)),
            Twist::EpsilonRho => edge.rho.scale(&S::from_i64(edge.epsilon as i64)),
        }
    }

    pub fn return_time(&self, word: &[usize]) -> u64 {
        word.iter().map(|&e| self.edges[e].r as u64).sum()
    }

    pub fn delta_product(&self, word: &[usize]) -> i8 {
        self.sign_product(word, |e| e.delta)
    }

    pub fn epsilon_product(&self, word: &[usize]) -> i8 {
        self.sign_product(word, |e| e.epsilon)
    }

    fn sign_product(&self, word: &[usize], f: impl Fn(&Edge<S>) -> i8) -> i8 {
        word.iter().fold(1i8, |acc, &e| acc * f(&self.edges[e]))
    }

    /// All designated orbits tagged with their side, `Γᵘ` first.
    pub fn designated(&self) -> impl Iterator<Item = (Side, &DesignatedOrbit)> {
        self.gamma_u
            .iter()
            .map(|o| (Side::Unstable, o))
            .chain(self.gamma_s.iter().map(|o| (Side::Stable, o)))
    }

    /// True when every state reaches every other state.
    pub fn is_strongly_connected(&self) -> bool {
        let n = self.num_states();
        if n == 0 {
            return false;
        }
        let forward = self.reachable(0, false);
        let backward = self.reachable(0, true);
        forward.iter().all(|&x| x) && backward.iter().all(|&x| x)
    }

    fn reachable(&self, start: usize, reverse: bool) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for e in &self.edges {
                let (a, b) = if reverse { (e.to, e.from) } else { (e.from, e.to) };
                if a == s && !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        seen
    }

    /// True when every edge carries derivative data.
    pub fn has_derivatives(&self) -> bool {
        !self.edges.is_empty() && self.edges.iter().all(|e| e.derivative.is_some())
    }

    /// Converts every scalar to another backend.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SymbolicFlowModel<T> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                id: e.id.clone(),
                from: e.from,
                to: e.to,
                r: e.r,
                delta: e.delta,
                epsilon: e.epsilon,
                rho: Matrix::from_fn(self.dim, self.dim, |i, j| f(&e.rho[(i, j)])),
                derivative: e.derivative.as_ref().map(|d| Derivative { lambda: f(&d.lambda), mu: f(&d.mu) }),
            })
            .collect();
        SymbolicFlowModel {
            name: self.name.clone(),
            states: self.states.clone(),
            edges,
            gamma_u: self.gamma_u.clone(),
            gamma_s: self.gamma_s.clone(),
            dim: self.dim,
            backend: self.backend.clone(),
            flow_complex: self.flow_complex.clone(),
        }
    }
}

/// Rotation `k` positions to the left.
pub fn rotate(cycle: &[usize], k: usize) -> Vec<usize> {
    let n = cycle.len();
    (0..n).map(|i| cycle[(i + k) % n]).collect()
}

/// Lexicographically least rotation.
pub fn canonical_rotation(cycle: &[usize]) -> Vec<usize> {
    (0..cycle.len()).map(|k| rotate(cycle, k)).min().unwrap_or_default()
}

/// True when the cycle is not a proper power of a shorter cycle.
pub fn is_primitive(cycle: &[usize]) -> bool {
    let n = cycle.len();
    n > 0 && (1..n).filter(|d| n.is_multiple_of(*d)).all(|d| (0..n).any(|i| cycle[i] != cycle[(i + d) % n]))
}
