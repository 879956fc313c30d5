//! Sign representations, double-cover lifts of the flow complex and the
//! class-number checks for branched double covers.

mod check;
mod lift;
mod search;

pub use check::{class_number_check, orbit_ratio_check, ClassNumberReport, OrbitRatioCheck};
pub use lift::{lift_double_cover, CoverComplex, LiftedCell, SignRep};
pub use search::{search_branched_instance, BranchedSearchParams};

use crate::torsion::TorsionError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("holonomy of edge '{0}' is not a sign")]
    NotSignType(String),
    #[error("sign representation has {got} entries for {expected} edges")]
    SignCount { expected: usize, got: usize },
    #[error("stable orbit {0} has sign +1; every stable orbit must have sign -1")]
    StableSign(usize),
    #[error("base complex is not an integer homology sphere: {0}")]
    NotHomologySphere(String),
    #[error("det(I - H) = 0 but the lifted H_1 is finite ({0})")]
    Inconsistent(String),
    #[error("zeta: {0}")]
    Zeta(String),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
}
