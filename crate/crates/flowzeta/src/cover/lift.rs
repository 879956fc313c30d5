//! Lifting the flow complex to the double cover defined by a sign representation.

use crate::algebra::IntMatrix;
use crate::model::SymbolicFlowModel;
use crate::scalar::Scalar;
use crate::torsion::{IntComplex, Level, WordComplex};

use super::CoverError;

/// A sign `±1` per edge; the sign of a word is the product along it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignRep {
    pub signs: Vec<i8>,
}

impl SignRep {
    pub fn new(signs: Vec<i8>) -> Self {
        assert!(signs.iter().all(|s| s.abs() == 1), "signs must be +1 or -1");
        SignRep { signs }
    }

    pub fn trivial(edges: usize) -> Self {
        SignRep { signs: vec![1; edges] }
    }

    /// Reads the signs off a model whose holonomies are `[±1]`.
    pub fn from_model<S: Scalar>(model: &SymbolicFlowModel<S>) -> Result<Self, CoverError> {
        let tol = model.tolerance();
        let signs = model
            .edges
            .iter()
            .map(|e| {
                let x = if model.dim == 1 { Some(e.rho[(0, 0)].clone()) } else { None };
                match x {
                    Some(x) if x.approx_eq(&S::one(), tol) => Ok(1),
                    Some(x) if x.approx_eq(&-S::one(), tol) => Ok(-1),
                    _ => Err(CoverError::NotSignType(e.id.clone())),
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(SignRep { signs })
    }

    pub fn sign(&self, word: &[usize]) -> i8 {
        word.iter().fold(1, |acc, &e| acc * self.signs[e])
    }

    pub fn is_odd(&self, word: &[usize]) -> bool {
        self.sign(word) < 0
    }
}

/// A cell of the lift: a base cell and its sheet, or `None` for a branch
/// cell, which has a single lift.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftedCell {
    pub base: usize,
    pub sheet: Option<u8>,
}

/// The base complex `C(M)`, its double-cover lift `C(M̄)` and the
/// sign-twisted complex `X` of the non-branch cells.
#[derive(Clone, Debug)]
pub struct CoverComplex {
    pub base: IntComplex,
    pub lift: IntComplex,
    pub twisted: IntComplex,
    pub cells: Vec<Vec<LiftedCell>>,
}

impl CoverComplex {
    /// Checks that on non-branch cells the lift is sheet-symmetric and that
    /// its `(+)` and `(-)` parts reproduce `C(M)` and `X`.
    pub fn isotypic_parts_match(&self) -> bool {
        let pos = |k: usize, base: usize, sheet: u8| {
            self.cells[k].iter().position(|c| c.base == base && c.sheet == Some(sheet)).expect("lifted cell")
        };
        (1..=self.lift.top()).all(|k| {
            let (db, dl, dx) = (self.base.boundary(k), self.lift.boundary(k), self.twisted.boundary(k));
            let xs: Vec<usize> = self.cells[k].iter().filter(|c| c.sheet == Some(0)).map(|c| c.base).collect();
            let ys: Vec<usize> = self.cells[k - 1].iter().filter(|c| c.sheet == Some(0)).map(|c| c.base).collect();
            xs.iter().enumerate().all(|(xi, &x)| {
                ys.iter().enumerate().all(|(yi, &y)| {
                    let same = &dl[(pos(k, x, 0), pos(k - 1, y, 0))];
                    let other = &dl[(pos(k, x, 0), pos(k - 1, y, 1))];
                    same == &dl[(pos(k, x, 1), pos(k - 1, y, 1))]
                        && other == &dl[(pos(k, x, 1), pos(k - 1, y, 0))]
                        && (same + other) == db[(x, y)]
                        && (same - other) == dx[(xi, yi)]
                })
            })
        })
    }
}

/// Lifts the word complex to the double cover of `rep`.
///
/// A non-branch cell `x` lifts to `x̃` and `τx̃`; the term `c [w] y` of
/// `∂x` lifts to `c · τ^{parity(w)} ỹ` on each sheet. The branch cells `p`,
/// `v` over the unstable orbits lift once: their terms on non-branch cells
/// become `c (ỹ + τỹ)`, and a term between branch cells keeps its coefficient.
pub fn lift_double_cover(words: &WordComplex, rep: &SignRep) -> Result<CoverComplex, CoverError> {
    let cells: Vec<Vec<LiftedCell>> = words
        .cells
        .iter()
        .map(|cs| {
            cs.iter()
                .enumerate()
                .flat_map(|(i, c)| {
                    if c.is_branch() {
                        vec![LiftedCell { base: i, sheet: None }]
                    } else {
                        vec![LiftedCell { base: i, sheet: Some(0) }, LiftedCell { base: i, sheet: Some(1) }]
                    }
                })
                .collect()
        })
        .collect();
    let index = |k: usize, base: usize, sheet: Option<u8>| {
        cells[k].iter().position(|c| c.base == base && c.sheet == sheet).expect("lifted cell")
    };
    let boundaries = (1..cells.len())
        .map(|k| {
            let mut b = vec![vec![0i64; cells[k - 1].len()]; cells[k].len()];
            for (r, cell) in cells[k].iter().enumerate() {
                for t in words.terms(k, cell.base) {
                    let target_branch = words.cells[k - 1][t.target].is_branch();
                    match (cell.sheet, target_branch) {
                        (Some(s), false) => b[r][index(k - 1, t.target, Some(s ^ rep.is_odd(&t.word) as u8))] += t.coeff,
                        (None, false) => {
                            b[r][index(k - 1, t.target, Some(0))] += t.coeff;
                            b[r][index(k - 1, t.target, Some(1))] += t.coeff;
                        }
                        (None, true) => b[r][index(k - 1, t.target, None)] += t.coeff,
                        (Some(_), true) => unreachable!("non-branch cells do not bound branch cells"),
                    }
                }
            }
            IntMatrix::from_fn(cells[k].len(), cells[k - 1].len(), |i, j| b[i][j].into())
        })
        .collect();
    let labels = cells
        .iter()
        .enumerate()
        .map(|(k, cs)| {
            cs.iter()
                .map(|c| match c.sheet {
                    Some(s) => format!("{}~{s}", words.labels[k][c.base]),
                    None => format!("{}~", words.labels[k][c.base]),
                })
                .collect()
        })
        .collect();
    let lift = IntComplex::new(cells.iter().map(Vec::len).collect(), boundaries).map_err(CoverError::Torsion)?.with_labels(labels);
    lift.check_boundary_square()?;
    let base = words.realize_integer(|_| 1);
    let twisted = words.realize_integer(|w| rep.sign(w) as i64).select(&words.level_cells(Level::F1, Level::F2));
    Ok(CoverComplex { base, lift, twisted, cells })
}
