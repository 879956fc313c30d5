//! Based chain complexes, Reidemeister torsion, integer homology and the
//! flow cell complex.

mod complex;
mod flow;
mod homology;
pub mod random;
mod reidemeister;
mod ses;
mod spec;
pub mod synth;

pub use complex::{circle_complex, BasedChainComplex, IntComplex};
pub use flow::{
    build_flow_complex, expand_selection, punctured_closed_form, successor_cycles, torsion_closed_form, CellKind, ClosedForm, FlowComplex,
    FlowComplexReport, Level, Term, WordComplex,
};
pub use homology::{
    canonical_homology_bases, complex_homology, h1_order, integral_homology_basis, integral_torsion, H1Order,
    HomologyGroup,
};
pub use reidemeister::{
    acyclic_torsion, acyclic_torsion_with, independent_rows, reidemeister_torsion, reidemeister_torsion_with,
    HomologyBases, PivotOrder,
};
pub use ses::{ses_torsion_check, SesCheck};
pub use spec::{FlowComplexSpec, Incidence, Successor};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TorsionError {
    #[error("inconsistent complex shape: {0}")]
    Shape(String),
    #[error("boundary squared is nonzero at degree {0}")]
    BoundarySquare(usize),
    #[error("complex is not acyclic: homology in degree {0}")]
    NotAcyclic(usize),
    #[error("homology in degree {0} is nonzero but no homology basis was given")]
    MissingHomologyBasis(usize),
    #[error("degree {degree}: expected {expected} homology vectors, got {got}")]
    HomologyBasisSize { degree: usize, expected: usize, got: usize },
    #[error("homology representative in degree {0} is not a cycle")]
    NotCycle(usize),
    #[error("homology representatives in degree {0} are dependent modulo boundaries")]
    DegenerateHomologyBasis(usize),
    #[error("basis change in degree {0} is singular")]
    SingularBasisChange(usize),
    #[error("selected cells do not form a subcomplex")]
    NotSubcomplex,
    #[error("flow complex: {0}")]
    FlowComplex(String),
    #[error("torsion formula hypotheses violated: {0}")]
    Hypotheses(String),
}
