//! Invariant checks for symbolic flow models.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::{canonical_rotation, is_primitive, prong_leaf_data, Side, SymbolicFlowModel};
use crate::scalar::Scalar;

/// One violated invariant and where it was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub location: String,
    pub message: String,
}

impl Issue {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Issue { location: location.into(), message: message.into() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    fn push(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.issues.push(Issue::new(location, message));
    }

    pub fn mentions(&self, needle: &str) -> bool {
        self.issues.iter().any(|i| i.message.contains(needle))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.issues {
            writeln!(f, "  {}: {}", i.location, i.message)?;
        }
        Ok(())
    }
}

/// Checks every model invariant and lists all violations; an empty report means valid.
///
/// The flow complex attached to a model is checked separately when it is
/// assembled, since its invariants are statements about chain complexes.
pub fn validate_model<S: Scalar>(model: &SymbolicFlowModel<S>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let tol = model.tolerance();

    if model.states.is_empty() {
        report.push("states", "model has no states");
    }
    let mut seen = HashSet::new();
    for s in &model.states {
        if !seen.insert(s.as_str()) {
            report.push("states", format!("duplicate state id '{s}'"));
        }
    }
    let mut seen = HashSet::new();
    for e in &model.edges {
        if !seen.insert(e.id.as_str()) {
            report.push("edges", format!("duplicate edge id '{}'", e.id));
        }
    }
    if model.dim == 0 {
        report.push("dim", "representation dimension must be positive");
    }

    for (k, e) in model.edges.iter().enumerate() {
        let loc = format!("edges[{k}] ({})", e.id);
        if e.from >= model.num_states() || e.to >= model.num_states() {
            report.push(&loc, "endpoint out of range");
        }
        if e.r < 1 {
            report.push(&loc, "return time r must be at least 1");
        }
        if e.delta.abs() != 1 {
            report.push(&loc, format!("delta {} is not +1 or -1", e.delta));
        }
        if e.epsilon.abs() != 1 {
            report.push(&loc, format!("epsilon {} is not +1 or -1", e.epsilon));
        }
        if e.rho.rows() != model.dim || e.rho.cols() != model.dim {
            report.push(&loc, format!("holonomy is {}x{}, expected {}x{}", e.rho.rows(), e.rho.cols(), model.dim, model.dim));
        } else if !e.rho.is_unitary(tol) {
            report.push(&loc, "holonomy is not unitary");
        }
        if let Some(d) = &e.derivative {
            check_derivative(&mut report, &loc, &d.lambda, &d.mu, e.delta, e.epsilon, tol);
        }
    }

    for s in 0..model.num_states() {
        if !model.edges.iter().any(|e| e.from == s) {
            report.push(format!("states[{s}] ({})", model.states[s]), "state has no outgoing edge");
        }
        if !model.edges.iter().any(|e| e.to == s) {
            report.push(format!("states[{s}] ({})", model.states[s]), "state has no incoming edge");
        }
    }
    if !model.states.is_empty() && !model.is_strongly_connected() {
        report.push("edges", "underlying graph is not strongly connected");
    }

    let mut classes: Vec<(Side, Vec<usize>)> = Vec::new();
    for (idx, (side, orbit)) in model.designated().enumerate() {
        let key = if side == Side::Unstable { "gamma_u" } else { "gamma_s" };
        let local = if side == Side::Unstable { idx } else { idx - model.gamma_u.len() };
        let loc = format!("{key}[{local}]");
        if orbit.cycle.is_empty() {
            report.push(&loc, "empty cycle");
            continue;
        }
        if !model.is_closed_walk(&orbit.cycle) {
            report.push(&loc, "cycle is not a closed directed walk");
            continue;
        }
        if !is_primitive(&orbit.cycle) {
            report.push(&loc, "cycle is a proper power of a shorter cycle");
        }
        if let Some(p) = &orbit.prong {
            match prong_leaf_data(p) {
                Err(err) => report.push(&loc, format!("invalid prong data: {err}")),
                Ok(_) => {
                    let eps = model.epsilon_product(&orbit.cycle);
                    if p.epsilon != eps {
                        report.push(&loc, format!("prong epsilon {} differs from the orbit epsilon {eps}", p.epsilon));
                    }
                    let delta = model.delta_product(&orbit.cycle);
                    if p.n == 2 && (p.a % 4 == 0) != (delta > 0) {
                        report.push(&loc, format!("two-prong rotation a = {} is inconsistent with delta {delta}", p.a));
                    }
                }
            }
        }
        let canon = canonical_rotation(&orbit.cycle);
        for (other_side, other) in &classes {
            if *other == canon {
                if *other_side == side {
                    report.push(&loc, format!("duplicate orbit in {key}"));
                } else {
                    report.push(&loc, "designated orbit sets intersect");
                }
            }
        }
        classes.push((side, canon));
    }

    report
}

fn check_derivative<S: Scalar>(report: &mut ValidationReport, loc: &str, lambda: &S, mu: &S, delta: i8, epsilon: i8, tol: f64) {
    if !lambda.is_real(tol) || !mu.is_real(tol) {
        report.push(loc, "derivative eigenvalues must be real");
        return;
    }
    if (lambda.abs_value() - S::one()).real_sign(tol) <= 0 {
        report.push(loc, "derivative is not expanding: |lambda| <= 1");
    }
    if mu.near_zero(tol) || (mu.abs_value() - S::one()).real_sign(tol) >= 0 {
        report.push(loc, "derivative is not contracting: mu must satisfy 0 < |mu| < 1");
    }
    let sl = lambda.real_sign(tol);
    let sm = mu.real_sign(tol);
    if sl != 0 && sl != delta {
        report.push(loc, format!("delta {delta} disagrees with the sign of lambda"));
    }
    if sl != 0 && sm != 0 && sl * sm != epsilon {
        report.push(loc, format!("epsilon {epsilon} disagrees with the sign of det = lambda*mu"));
    }
}
