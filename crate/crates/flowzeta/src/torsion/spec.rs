//! User-supplied cell data of the flow complex.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One boundary term `coeff · [word] · cell`.
///
/// `word` is an edge path from the base state of the cell whose boundary is
/// being described to the base state of `cell`; its holonomy weights the term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Incidence {
    pub cell: String,
    pub coeff: i64,
    #[serde(default)]
    pub word: Vec<String>,
}

/// Where the vertical edge leaving a vertex lands: the vertex on `side` of
/// the target state of `edge`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Successor {
    pub edge: String,
    pub side: u8,
}

/// Incidence data of the flow cell structure.
///
/// Per state `θ` the cells are the vertices `pt:θ:0`, `pt:θ:1`, the
/// horizontal edge `hor:θ`, the vertical edges `vert:θ:0`, `vert:θ:1` and
/// the face `face:θ`; per unstable designated orbit `k` there are filling
/// cells `p:k` (degree 2) and `v:k` (degree 3). Boundaries that follow from
/// the model are generated: `∂ hor = pt1 - pt0`, the vertical edges from
/// `successors`, the horizontal part of each face from the transition
/// signs, and the `(1 - ε[γ]) p` part of each `v`. The remaining terms are
/// listed here.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowComplexSpec {
    /// Per state, the successors of its two vertices.
    pub successors: BTreeMap<String, [Successor; 2]>,
    /// Per state, the vertical-edge terms of the face boundary.
    pub faces: BTreeMap<String, Vec<Incidence>>,
    /// Per unstable orbit, the boundary of `p` in degree 1.
    #[serde(default)]
    pub p_cells: Vec<Vec<Incidence>>,
    /// Per unstable orbit, the face terms of the boundary of `v`.
    #[serde(default)]
    pub v_cells: Vec<Vec<Incidence>>,
    /// The unstable orbits are branch loci: `ρ` is a representation of the
    /// complement only, so twisted checks stop at the punctured complex.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub branched: bool,
}
