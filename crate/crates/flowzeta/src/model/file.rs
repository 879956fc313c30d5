//! JSON model files: schema types, number parsing and conversion into a
//! [`SymbolicFlowModel`] over a chosen scalar backend.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::validate::{validate_model, Issue, ValidationReport};
use super::{Derivative, DesignatedOrbit, Edge, ProngSpec, SymbolicFlowModel};
use crate::algebra::Matrix;
use crate::scalar::Scalar;
use crate::torsion::FlowComplexSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    #[serde(alias = "exact")]
    ExactRational,
    #[serde(alias = "float")]
    ComplexFloat,
}

/// Field over which holonomies live, with the float comparison tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendSpec {
    pub kind: BackendKind,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    1e-9
}

impl Default for BackendSpec {
    fn default() -> Self {
        BackendSpec { kind: BackendKind::ExactRational, tolerance: default_tolerance() }
    }
}

impl BackendSpec {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn float(tolerance: f64) -> Self {
        BackendSpec { kind: BackendKind::ComplexFloat, tolerance }
    }
}

/// A number written either as a JSON number or as a string such as `"-3/5"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Number(serde_json::Number),
    Text(String),
}

impl Num {
    pub fn rational(&self) -> Option<BigRational> {
        match self {
            Num::Number(n) => parse_rational(&n.to_string()),
            Num::Text(s) => parse_rational(s),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        if r.is_integer() {
            if let Ok(i) = i64::from_str(&r.to_integer().to_string()) {
                return Num::Number(i.into());
            }
        }
        Num::Text(r.to_string())
    }

    fn from_f64(x: f64) -> Self {
        serde_json::Number::from_f64(x).map_or_else(|| Num::Text(x.to_string()), Num::Number)
    }
}

/// Parses `p`, `p/q` or a decimal literal with optional exponent into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        return (!q.is_zero()).then(|| BigRational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], i64::from_str(&t[i + 1..]).ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int}{frac}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all).ok()?);
    let shift = exponent - frac.len() as i64;
    let ten = BigRational::from_integer(BigInt::from(10));
    let scale = (0..shift.unsigned_abs()).fold(BigRational::one(), |acc, _| acc * ten.clone());
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Some(if negative { -value } else { value })
}

/// One holonomy entry: a real number or an `[re, im]` pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RhoEntry {
    Pair([Num; 2]),
    Real(Num),
}

/// Row-major holonomy entries, or a bare number for `m = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RhoFile {
    Entries(Vec<RhoEntry>),
    Single(Num),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivativeFile {
    pub lambda: Num,
    pub mu: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub id: String,
    pub from: String,
    pub to: String,
    pub r: u32,
    pub delta: i8,
    pub epsilon: i8,
    pub rho: RhoFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivative: Option<DerivativeFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitFile {
    pub cycle: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prong: Option<ProngSpec>,
}

/// On-disk model schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub states: Vec<String>,
    pub edges: Vec<EdgeFile>,
    #[serde(default)]
    pub gamma_u: Vec<OrbitFile>,
    #[serde(default)]
    pub gamma_s: Vec<OrbitFile>,
    #[serde(default)]
    pub backend: BackendSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flow_complex: Option<FlowComplexSpec>,
}

/// Failure to load a model, split by stage.
#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("malformed JSON: {0}")]
    Json(serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(serde_json::Error),
    #[error("semantic violation:\n{0}")]
    Semantic(ValidationReport),
}

impl ModelFile {
    /// Parses text into the schema type without semantic checks.
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(ModelError::Json)?;
        serde_json::from_value(value).map_err(ModelError::Schema)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files always serialize")
    }

    /// Resolves identifiers and converts numbers into `S`.
    ///
    /// Reference errors (unknown ids, unparsable numbers, wrong matrix
    /// sizes) are reported here; model invariants are left to
    /// [`validate_model`].
    pub fn build<S: Scalar>(&self) -> Result<SymbolicFlowModel<S>, ModelError> {
        let mut issues = Vec::new();
        let state = |id: &str, loc: String, issues: &mut Vec<Issue>| {
            let found = self.states.iter().position(|s| s == id);
            if found.is_none() {
                issues.push(Issue::new(loc, format!("unknown state id '{id}'")));
            }
            found.unwrap_or(0)
        };

        let first_len = self.edges.first().map(|e| rho_len(&e.rho)).unwrap_or(1);
        let dim = self.dim.unwrap_or_else(|| (first_len as f64).sqrt().round() as usize);
        if dim == 0 {
            issues.push(Issue::new("dim", "representation dimension must be positive"));
        }

        let mut edges = Vec::with_capacity(self.edges.len());
        for (k, e) in self.edges.iter().enumerate() {
            let loc = format!("edges[{k}] ({})", e.id);
            let from = state(&e.from, format!("{loc}.from"), &mut issues);
            let to = state(&e.to, format!("{loc}.to"), &mut issues);
            let rho = build_rho::<S>(&e.rho, dim, &format!("{loc}.rho"), &mut issues);
            let derivative = e.derivative.as_ref().and_then(|d| {
                let lambda = real_num::<S>(&d.lambda, &format!("{loc}.derivative.lambda"), &mut issues)?;
                let mu = real_num::<S>(&d.mu, &format!("{loc}.derivative.mu"), &mut issues)?;
                Some(Derivative { lambda, mu })
            });
            edges.push(Edge { id: e.id.clone(), from, to, r: e.r, delta: e.delta, epsilon: e.epsilon, rho, derivative });
        }

        let orbits = |list: &[OrbitFile], key: &str, issues: &mut Vec<Issue>| -> Vec<DesignatedOrbit> {
            list.iter()
                .enumerate()
                .map(|(k, o)| {
                    let cycle = o
                        .cycle
                        .iter()
                        .map(|id| {
                            self.edges.iter().position(|e| &e.id == id).unwrap_or_else(|| {
                                issues.push(Issue::new(format!("{key}[{k}]"), format!("unknown edge id '{id}'")));
                                0
                            })
                        })
                        .collect();
                    DesignatedOrbit { cycle, prong: o.prong }
                })
                .collect()
        };
        let gamma_u = orbits(&self.gamma_u, "gamma_u", &mut issues);
        let gamma_s = orbits(&self.gamma_s, "gamma_s", &mut issues);

        if !issues.is_empty() {
            return Err(ModelError::Semantic(ValidationReport { issues }));
        }
        Ok(SymbolicFlowModel {
            name: self.name.clone(),
            states: self.states.clone(),
            edges,
            gamma_u,
            gamma_s,
            dim,
            backend: self.backend.clone(),
            flow_complex: self.flow_complex.clone(),
        })
    }

    /// Serializes a model; exact scalars are written as rationals and float
    /// scalars as `[re, im]` pairs.
    pub fn from_model<S: Scalar>(model: &SymbolicFlowModel<S>) -> Self {
        let num = |s: &S| match s.to_rational() {
            Some(r) => Num::from_rational(&r),
            None => Num::from_f64(s.to_c64().re),
        };
        let entry = |s: &S| match s.to_rational() {
            Some(r) => RhoEntry::Real(Num::from_rational(&r)),
            None => {
                let z = s.to_c64();
                if z.im == 0.0 {
                    RhoEntry::Real(Num::from_f64(z.re))
                } else {
                    RhoEntry::Pair([Num::from_f64(z.re), Num::from_f64(z.im)])
                }
            }
        };
        let edge_ids = |cycle: &[usize]| cycle.iter().map(|&e| model.edges[e].id.clone()).collect();
        let orbit = |o: &DesignatedOrbit| OrbitFile { cycle: edge_ids(&o.cycle), prong: o.prong };
        ModelFile {
            name: model.name.clone(),
            description: None,
            states: model.states.clone(),
            edges: model
                .edges
                .iter()
                .map(|e| EdgeFile {
                    id: e.id.clone(),
                    from: model.states[e.from].clone(),
                    to: model.states[e.to].clone(),
                    r: e.r,
                    delta: e.delta,
                    epsilon: e.epsilon,
                    rho: RhoFile::Entries(e.rho.map(entry)),
                    derivative: e.derivative.as_ref().map(|d| DerivativeFile { lambda: num(&d.lambda), mu: num(&d.mu) }),
                })
                .collect(),
            gamma_u: model.gamma_u.iter().map(orbit).collect(),
            gamma_s: model.gamma_s.iter().map(orbit).collect(),
            backend: model.backend.clone(),
            dim: None,
            flow_complex: model.flow_complex.clone(),
        }
    }
}

fn rho_len(rho: &RhoFile) -> usize {
    match rho {
        RhoFile::Entries(v) => v.len(),
        RhoFile::Single(_) => 1,
    }
}

fn real_num<S: Scalar>(n: &Num, loc: &str, issues: &mut Vec<Issue>) -> Option<S> {
    match n.rational() {
        Some(r) => Some(S::from_rational(&r)),
        None => {
            issues.push(Issue::new(loc, format!("unparsable number {n:?}")));
            None
        }
    }
}

fn build_rho<S: Scalar>(rho: &RhoFile, dim: usize, loc: &str, issues: &mut Vec<Issue>) -> Matrix<S> {
    let entries: Vec<RhoEntry> = match rho {
        RhoFile::Entries(v) => v.clone(),
        RhoFile::Single(n) => vec![RhoEntry::Real(n.clone())],
    };
    if entries.len() != dim * dim {
        issues.push(Issue::new(loc, format!("expected {} entries for a {dim}x{dim} holonomy, found {}", dim * dim, entries.len())));
        return Matrix::identity(dim);
    }
    let mut values = Vec::with_capacity(entries.len());
    for (k, e) in entries.iter().enumerate() {
        let (re, im) = match e {
            RhoEntry::Real(n) => (n.rational(), Some(BigRational::zero())),
            RhoEntry::Pair([a, b]) => (a.rational(), b.rational()),
        };
        let (Some(re), Some(im)) = (re, im) else {
            issues.push(Issue::new(format!("{loc}[{k}]"), "unparsable number"));
            values.push(S::zero());
            continue;
        };
        match S::from_parts(&re, &im) {
            Some(v) => values.push(v),
            None => {
                issues.push(Issue::new(format!("{loc}[{k}]"), "complex entry on a real backend"));
                values.push(S::zero());
            }
        }
    }
    Matrix::from_fn(dim, dim, |i, j| values[i * dim + j].clone())
}

/// Parses, resolves and validates a model file over backend `S`.
pub fn parse_model<S: Scalar>(text: &str) -> Result<SymbolicFlowModel<S>, ModelError> {
    let model = ModelFile::from_json(text)?.build::<S>()?;
    let report = validate_model(&model);
    if report.is_valid() {
        Ok(model)
    } else {
        Err(ModelError::Semantic(report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("3/5"), Some(q(3, 5)));
        assert_eq!(parse_rational("-0.6"), Some(q(-3, 5)));
        assert_eq!(parse_rational("1.5e2"), Some(q(150, 1)));
        assert_eq!(parse_rational("25e-2"), Some(q(1, 4)));
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn error_stages_are_distinguished() {
        assert!(matches!(ModelFile::from_json("{"), Err(ModelError::Json(_))));
        assert!(matches!(ModelFile::from_json(r#"{"states": 3}"#), Err(ModelError::Schema(_))));
        let dangling = r#"{"states":["a"],"edges":[{"id":"e","from":"a","to":"b","r":1,"delta":1,"epsilon":1,"rho":[1]}]}"#;
        assert!(matches!(parse_model::<BigRational>(dangling), Err(ModelError::Semantic(_))));
    }
}
