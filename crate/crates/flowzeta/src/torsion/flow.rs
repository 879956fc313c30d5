//! The three-step filtered cell complex of a symbolic flow, its twisted and
//! integer realizations and the closed-form torsion.
//!
//! Cells per state `θ`: vertices `pt:θ:0`, `pt:θ:1`, the horizontal edge
//! `hor:θ`, vertical edges `vert:θ:0`, `vert:θ:1` and the face `face:θ`.
//! Per unstable designated orbit `k`: `p:k` in degree 2 and `v:k` in
//! degree 3. The filtration is `F1 = {pt, vert}`, `F2 = F1 ∪ {hor, face}`
//! and `F3 = F2 ∪ {p, v}`.

use std::collections::HashMap;

use crate::algebra::{IntMatrix, Matrix};
use crate::model::{canonical_rotation, SymbolicFlowModel, Twist};
use crate::scalar::Scalar;
use crate::zeta::{det_i_minus_h, h_matrix};

use super::{acyclic_torsion, ses_torsion_check, BasedChainComplex, FlowComplexSpec, Incidence, IntComplex, TorsionError};

/// What a cell of the flow complex is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    Point { state: usize, side: u8 },
    Horizontal { state: usize },
    Vertical { state: usize, side: u8 },
    Face { state: usize },
    /// `p` for an unstable designated orbit.
    Filling { orbit: usize },
    /// `v` for an unstable designated orbit.
    Solid { orbit: usize },
}

/// Smallest filtration level containing a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    F1 = 1,
    F2 = 2,
    F3 = 3,
}

impl CellKind {
    pub fn degree(&self) -> usize {
        match self {
            CellKind::Point { .. } => 0,
            CellKind::Horizontal { .. } | CellKind::Vertical { .. } => 1,
            CellKind::Face { .. } | CellKind::Filling { .. } => 2,
            CellKind::Solid { .. } => 3,
        }
    }

    pub fn level(&self) -> Level {
        match self {
            CellKind::Point { .. } | CellKind::Vertical { .. } => Level::F1,
            CellKind::Horizontal { .. } | CellKind::Face { .. } => Level::F2,
            CellKind::Filling { .. } | CellKind::Solid { .. } => Level::F3,
        }
    }

    /// True for the cells over the unstable designated orbits.
    pub fn is_branch(&self) -> bool {
        self.level() == Level::F3
    }

    fn label(&self, states: &[String]) -> String {
        match *self {
            CellKind::Point { state, side } => format!("pt:{}:{side}", states[state]),
            CellKind::Horizontal { state } => format!("hor:{}", states[state]),
            CellKind::Vertical { state, side } => format!("vert:{}:{side}", states[state]),
            CellKind::Face { state } => format!("face:{}", states[state]),
            CellKind::Filling { orbit } => format!("p:{orbit}"),
            CellKind::Solid { orbit } => format!("v:{orbit}"),
        }
    }
}

/// One boundary term `coeff · [word] · target`, with `word` a list of edge indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub target: usize,
    pub coeff: i64,
    pub word: Vec<usize>,
}

/// The flow complex over the path groupoid: boundaries as holonomy words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordComplex {
    pub cells: Vec<Vec<CellKind>>,
    pub labels: Vec<Vec<String>>,
    /// Base state of every cell; words run between base states.
    pub base: Vec<Vec<usize>>,
    /// `boundaries[k - 1][i]` lists the terms of `∂` of cell `i` in degree `k`.
    pub boundaries: Vec<Vec<Vec<Term>>>,
}

impl WordComplex {
    pub fn dims(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn terms(&self, k: usize, i: usize) -> &[Term] {
        &self.boundaries[k - 1][i]
    }

    /// Realization with `m`-dimensional blocks: the term `c [w] y` of `∂x`
    /// adds `c · block(w)` at `(x, y)`.
    pub fn realize<S: Scalar>(&self, m: usize, block: impl Fn(&[usize]) -> Matrix<S>) -> BasedChainComplex<S> {
        let dims: Vec<usize> = self.dims().iter().map(|n| n * m).collect();
        let boundaries = (1..self.cells.len())
            .map(|k| {
                let mut b = Matrix::zeros(dims[k], dims[k - 1]);
                for (i, terms) in self.boundaries[k - 1].iter().enumerate() {
                    for t in terms {
                        b.add_block(i * m, t.target * m, &block(&t.word).scale(&S::from_i64(t.coeff)));
                    }
                }
                b
            })
            .collect();
        let labels = self
            .labels
            .iter()
            .map(|ls| ls.iter().flat_map(|l| (0..m).map(move |a| if m == 1 { l.clone() } else { format!("{l}[{a}]") })).collect())
            .collect();
        BasedChainComplex::new(dims, boundaries).expect("consistent shapes").with_labels(labels)
    }

    /// Integer realization with per-word coefficients `sign(w)` (the trivial
    /// representation when `sign` is constantly 1).
    pub fn realize_integer(&self, sign: impl Fn(&[usize]) -> i64) -> IntComplex {
        let dims = self.dims();
        let boundaries = (1..self.cells.len())
            .map(|k| {
                let mut b = vec![vec![0i64; dims[k - 1]]; dims[k]];
                for (i, terms) in self.boundaries[k - 1].iter().enumerate() {
                    for t in terms {
                        b[i][t.target] += t.coeff * sign(&t.word);
                    }
                }
                IntMatrix::from_fn(dims[k], dims[k - 1], |i, j| b[i][j].into())
            })
            .collect();
        IntComplex::new(dims, boundaries).expect("consistent shapes").with_labels(self.labels.clone())
    }

    /// Cells whose level is at most `upto` and at least `from`, per degree.
    pub fn level_cells(&self, from: Level, upto: Level) -> Vec<Vec<usize>> {
        self.cells
            .iter()
            .map(|cs| (0..cs.len()).filter(|&i| (from..=upto).contains(&cs[i].level())).collect())
            .collect()
    }

    /// Index of a labelled cell as `(degree, index)`.
    pub fn find(&self, label: &str) -> Option<(usize, usize)> {
        self.labels.iter().enumerate().find_map(|(k, ls)| ls.iter().position(|l| l == label).map(|i| (k, i)))
    }
}

/// Expands a per-cell selection to the basis of an `m`-dimensional realization.
pub fn expand_selection(cells: &[Vec<usize>], m: usize) -> Vec<Vec<usize>> {
    cells.iter().map(|cs| cs.iter().flat_map(|&i| (i * m)..(i * m + m)).collect()).collect()
}

/// The assembled flow complex with its `ρ`-twisted and integer realizations.
#[derive(Clone, Debug)]
pub struct FlowComplex<S> {
    pub words: WordComplex,
    pub twisted: BasedChainComplex<S>,
    pub integer: IntComplex,
    pub dim: usize,
    /// `ρ` is defined on the punctured complex only; see [`FlowComplexSpec::branched`].
    pub branched: bool,
}

impl<S: Scalar> FlowComplex<S> {
    /// The twisted subcomplex `F_level`.
    pub fn filtration(&self, level: Level) -> BasedChainComplex<S> {
        self.twisted.select(&expand_selection(&self.words.level_cells(Level::F1, level), self.dim))
    }

    /// The twisted quotient `F_level / F_{level-1}`.
    pub fn graded_piece(&self, level: Level) -> BasedChainComplex<S> {
        self.twisted.select(&expand_selection(&self.words.level_cells(level, level), self.dim))
    }

    /// `τ(F2)`, the torsion of the complement of the unstable orbits.
    pub fn punctured_torsion(&self, tol: f64) -> Result<S, TorsionError> {
        acyclic_torsion(&self.filtration(Level::F2), tol)
    }

    /// Torsions of the filtration pieces and the total complex, checked
    /// against the short exact sequences of the filtration and the closed form.
    pub fn torsion_report(&self, model: &SymbolicFlowModel<S>) -> Result<FlowComplexReport<S>, TorsionError> {
        if self.branched {
            return Err(TorsionError::Hypotheses("rho is only defined on the complement of the branch orbits".into()));
        }
        let tol = model.tolerance();
        let levels = [Level::F1, Level::F2, Level::F3].map(|l| acyclic_torsion(&self.graded_piece(l), tol));
        let [f1, f21, f32] = levels;
        let (f1, f21, f32) = (f1?, f21?, f32?);
        let f2 = self.filtration(Level::F2);
        let inner = ses_torsion_check(&f2, &expand_selection(&self.words.level_cells(Level::F1, Level::F1), self.dim), tol)?;
        let outer = ses_torsion_check(&self.twisted, &expand_selection(&self.words.level_cells(Level::F1, Level::F2), self.dim), tol)?;
        let closed_form = torsion_closed_form(model)?;
        let full = outer.total.clone();
        let punctured = inner.total.clone();
        let multiplicative = inner.holds && outer.holds && full.approx_eq(&(f1.clone() * f21.clone() * f32.clone()), tol);
        let matches_closed_form = full.approx_eq(&closed_form.full, tol) && punctured.approx_eq(&closed_form.punctured, tol);
        Ok(FlowComplexReport { levels: [f1, f21, f32], punctured, full, multiplicative, closed_form, matches_closed_form })
    }
}

/// Torsions of the filtration of a flow complex.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowComplexReport<S> {
    /// `τ(F1)`, `τ(F2/F1)`, `τ(F3/F2)`.
    pub levels: [S; 3],
    /// `τ(F2)`: the complement of the unstable orbits.
    pub punctured: S,
    /// `τ(F3)`.
    pub full: S,
    /// `τ(F3) = τ(F3/F2) τ(F2/F1) τ(F1)` and both filtration sequences multiply.
    pub multiplicative: bool,
    pub closed_form: ClosedForm<S>,
    pub matches_closed_form: bool,
}

/// The closed-form torsion and its factors.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm<S> {
    /// `|det(I - H)^{-1} ∏_{Γˢ} det(I - ρ(γ)) ∏_{Γᵘ} det(I - ε_γ ρ(γ))|`.
    pub full: S,
    /// The same without the `Γᵘ` factors.
    pub punctured: S,
    pub det_i_minus_h: S,
    pub stable_factors: Vec<S>,
    pub unstable_factors: Vec<S>,
}

/// Closed-form torsion from `H` and the designated orbits; every factor must be nonzero.
pub fn torsion_closed_form<S: Scalar>(model: &SymbolicFlowModel<S>) -> Result<ClosedForm<S>, TorsionError> {
    let tol = model.tolerance();
    let id = Matrix::identity(model.dim);
    let (d, stable_factors) = punctured_factors(model)?;
    let mut unstable_factors = Vec::new();
    for (k, o) in model.gamma_u.iter().enumerate() {
        let f = (&id - &model.epsilon_holonomy(&o.cycle)).det(tol);
        if f.near_zero(tol) {
            return Err(TorsionError::Hypotheses(format!("det(I - eps rho) = 0 on unstable orbit {k}")));
        }
        unstable_factors.push(f);
    }
    let stable = stable_factors.iter().fold(S::one(), |a, f| a * f.clone());
    let unstable = unstable_factors.iter().fold(S::one(), |a, f| a * f.clone());
    let punctured = (stable / d.clone()).abs_value();
    let full = punctured.clone() * unstable.abs_value();
    Ok(ClosedForm { full, punctured, det_i_minus_h: d, stable_factors, unstable_factors })
}

/// The closed form of `τ(F2)`: `|det(I - H)^{-1} ∏_{Γˢ} det(I - ρ(γ))|`.
pub fn punctured_closed_form<S: Scalar>(model: &SymbolicFlowModel<S>) -> Result<S, TorsionError> {
    let (d, stable) = punctured_factors(model)?;
    Ok((stable.into_iter().fold(S::one(), |a, f| a * f) / d).abs_value())
}

fn punctured_factors<S: Scalar>(model: &SymbolicFlowModel<S>) -> Result<(S, Vec<S>), TorsionError> {
    let tol = model.tolerance();
    let id = Matrix::identity(model.dim);
    let d = det_i_minus_h(model, Twist::DeltaRho);
    if d.near_zero(tol) {
        return Err(TorsionError::Hypotheses("det(I - H) = 0".into()));
    }
    let mut stable_factors = Vec::new();
    for (k, o) in model.gamma_s.iter().enumerate() {
        let f = (&id - &model.holonomy(&o.cycle)).det(tol);
        if f.near_zero(tol) {
            return Err(TorsionError::Hypotheses(format!("det(I - rho) = 0 on stable orbit {k}")));
        }
        stable_factors.push(f);
    }
    Ok((d, stable_factors))
}

fn err(msg: impl Into<String>) -> TorsionError {
    TorsionError::FlowComplex(msg.into())
}

/// Assembles the flow complex from the model's cell data and validates it:
/// cell references and words, `∂∂ = 0` twisted and untwisted, the successor
/// cycles against `Γˢ`, the chain ranks, the Euler characteristic, the
/// `F2/F1` block against `I - H` and the `F3/F2` block against `I - ε ρ(γ)`.
/// For branched data the twisted checks cover the punctured complex only.
pub fn build_flow_complex<S: Scalar>(model: &SymbolicFlowModel<S>) -> Result<FlowComplex<S>, TorsionError> {
    let spec = model.flow_complex.as_ref().ok_or_else(|| err("model carries no flow_complex data"))?;
    let words = assemble(model, spec)?;
    let m = model.dim;
    let tol = model.tolerance();
    let twisted = words.realize(m, |w| model.holonomy(w));
    let integer = words.realize_integer(|_| 1);
    let branched = spec.branched;
    let checked = if branched { twisted.select(&expand_selection(&words.level_cells(Level::F1, Level::F2), m)) } else { twisted.clone() };
    checked.check_boundary_square(tol).map_err(|_| err("boundary squared is nonzero in the twisted complex"))?;
    integer.check_boundary_square().map_err(|_| err("boundary squared is nonzero in the integer complex"))?;
    check_successor_cycles(model, &words)?;

    let (n, u) = (model.num_states(), model.gamma_u.len());
    let expected = [2 * n, 3 * n, n + u, u].map(|d| d * m);
    if twisted.dims() != expected {
        return Err(err(format!("chain ranks {:?}, expected {:?}", twisted.dims(), expected)));
    }
    if twisted.euler_characteristic() != 0 {
        return Err(err("Euler characteristic is nonzero"));
    }

    let piece = |l| expand_selection(&words.level_cells(l, l), m);
    let middle = piece(Level::F2);
    let block = twisted.boundary(2).submatrix(&middle[2], &middle[1]);
    let h = h_matrix(model, Twist::DeltaRho);
    if !block.approx_eq(&(&Matrix::identity(h.rows()) - &h), tol) {
        return Err(err("F2/F1 block differs from I - H"));
    }
    if branched {
        return Ok(FlowComplex { words, twisted, integer, dim: m, branched });
    }
    let top = piece(Level::F3);
    let block = twisted.boundary(3).submatrix(&top[3], &top[2]);
    let mut expect = Matrix::zeros(u * m, u * m);
    for (k, o) in model.gamma_u.iter().enumerate() {
        expect.add_block(k * m, k * m, &(&Matrix::identity(m) - &model.epsilon_holonomy(&o.cycle)));
    }
    if !block.approx_eq(&expect, tol) {
        return Err(err("F3/F2 block differs from I - eps rho(gamma)"));
    }
    Ok(FlowComplex { words, twisted, integer, dim: m, branched })
}

/// Builds the word complex: generated boundaries plus the listed incidences.
pub(crate) fn assemble<S: Scalar>(model: &SymbolicFlowModel<S>, spec: &FlowComplexSpec) -> Result<WordComplex, TorsionError> {
    let n = model.num_states();
    let u = model.gamma_u.len();
    for key in spec.successors.keys().chain(spec.faces.keys()) {
        if model.state_index(key).is_none() {
            return Err(err(format!("unknown state '{key}'")));
        }
    }
    if spec.p_cells.len() != u || spec.v_cells.len() != u {
        return Err(err(format!("need p and v cell data for each of the {u} unstable orbits")));
    }
    if model.gamma_u.iter().any(|o| o.cycle.is_empty()) {
        return Err(err("empty unstable orbit"));
    }

    let mut cells: Vec<Vec<CellKind>> = vec![Vec::new(); 4];
    for state in 0..n {
        cells[0].extend([CellKind::Point { state, side: 0 }, CellKind::Point { state, side: 1 }]);
    }
    cells[1].extend((0..n).map(|state| CellKind::Horizontal { state }));
    for state in 0..n {
        cells[1].extend([CellKind::Vertical { state, side: 0 }, CellKind::Vertical { state, side: 1 }]);
    }
    cells[2].extend((0..u).map(|orbit| CellKind::Filling { orbit }));
    cells[2].extend((0..n).map(|state| CellKind::Face { state }));
    cells[3].extend((0..u).map(|orbit| CellKind::Solid { orbit }));

    let orbit_base = |k: usize| model.edges[model.gamma_u[k].cycle[0]].from;
    let base: Vec<Vec<usize>> = cells
        .iter()
        .map(|cs| {
            cs.iter()
                .map(|c| match *c {
                    CellKind::Point { state, .. }
                    | CellKind::Horizontal { state }
                    | CellKind::Vertical { state, .. }
                    | CellKind::Face { state } => state,
                    CellKind::Filling { orbit } | CellKind::Solid { orbit } => orbit_base(orbit),
                })
                .collect()
        })
        .collect();
    let labels: Vec<Vec<String>> = cells.iter().map(|cs| cs.iter().map(|c| c.label(&model.states)).collect()).collect();
    let index: HashMap<CellKind, usize> = cells.iter().flat_map(|cs| cs.iter().enumerate().map(|(i, c)| (*c, i))).collect();
    let at = |c: CellKind| index[&c];

    let mut words = WordComplex { cells: cells.clone(), labels, base, boundaries: vec![Vec::new(); 3] };

    // degree 1
    let mut d1 = vec![Vec::new(); cells[1].len()];
    for state in 0..n {
        d1[at(CellKind::Horizontal { state })] = vec![
            Term { target: at(CellKind::Point { state, side: 1 }), coeff: 1, word: vec![] },
            Term { target: at(CellKind::Point { state, side: 0 }), coeff: -1, word: vec![] },
        ];
        let name = &model.states[state];
        let succ = spec.successors.get(name).ok_or_else(|| err(format!("no successors for state '{name}'")))?;
        for (side, s) in succ.iter().enumerate() {
            let e = model.edge_index(&s.edge).ok_or_else(|| err(format!("unknown edge '{}'", s.edge)))?;
            if model.edges[e].from != state {
                return Err(err(format!("successor edge '{}' does not leave state '{name}'", s.edge)));
            }
            if s.side > 1 {
                return Err(err(format!("successor side {} is not 0 or 1", s.side)));
            }
            let side = side as u8;
            d1[at(CellKind::Vertical { state, side })] = vec![
                Term { target: at(CellKind::Point { state: model.edges[e].to, side: s.side }), coeff: 1, word: vec![e] },
                Term { target: at(CellKind::Point { state, side }), coeff: -1, word: vec![] },
            ];
        }
    }
    words.boundaries[0] = d1;

    // degree 2
    let mut d2 = vec![Vec::new(); cells[2].len()];
    for state in 0..n {
        let i = at(CellKind::Face { state });
        let mut terms = vec![Term { target: at(CellKind::Horizontal { state }), coeff: 1, word: vec![] }];
        for e in model.out_edges(state) {
            let edge = &model.edges[e];
            terms.push(Term { target: at(CellKind::Horizontal { state: edge.to }), coeff: -(edge.delta as i64), word: vec![e] });
        }
        let listed = spec.faces.get(&model.states[state]).map(Vec::as_slice).unwrap_or(&[]);
        for inc in listed {
            let t = parse_incidence(model, &words, (2, i), inc)?;
            if !matches!(cells[1][t.target], CellKind::Vertical { .. }) {
                return Err(err(format!("face '{}' lists a non-vertical edge '{}'", model.states[state], inc.cell)));
            }
            terms.push(t);
        }
        d2[i] = terms;
    }
    for (k, listed) in spec.p_cells.iter().enumerate() {
        let i = at(CellKind::Filling { orbit: k });
        d2[i] = listed.iter().map(|inc| parse_incidence(model, &words, (2, i), inc)).collect::<Result<_, _>>()?;
    }
    words.boundaries[1] = d2;

    // degree 3
    let mut d3 = vec![Vec::new(); cells[3].len()];
    for (k, listed) in spec.v_cells.iter().enumerate() {
        let cycle = &model.gamma_u[k].cycle;
        let p = at(CellKind::Filling { orbit: k });
        let mut terms = vec![
            Term { target: p, coeff: 1, word: vec![] },
            Term { target: p, coeff: -(model.epsilon_product(cycle) as i64), word: cycle.clone() },
        ];
        for inc in listed {
            let t = parse_incidence(model, &words, (3, k), inc)?;
            if !matches!(cells[2][t.target], CellKind::Face { .. }) {
                return Err(err(format!("v:{k} lists a non-face cell '{}'", inc.cell)));
            }
            terms.push(t);
        }
        d3[at(CellKind::Solid { orbit: k })] = terms;
    }
    words.boundaries[2] = d3;
    Ok(words)
}

fn parse_incidence<S: Scalar>(
    model: &SymbolicFlowModel<S>,
    words: &WordComplex,
    (k, i): (usize, usize),
    inc: &Incidence,
) -> Result<Term, TorsionError> {
    let source = &words.labels[k][i];
    let (deg, target) = words.find(&inc.cell).ok_or_else(|| err(format!("{source}: unknown cell '{}'", inc.cell)))?;
    if deg + 1 != k {
        return Err(err(format!("{source}: '{}' has degree {deg}, expected {}", inc.cell, k - 1)));
    }
    let word = inc
        .word
        .iter()
        .map(|id| model.edge_index(id).ok_or_else(|| err(format!("{source}: unknown edge '{id}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    let (from, to) = (words.base[k][i], words.base[deg][target]);
    let ok = match (word.first(), word.last()) {
        (Some(&a), Some(&b)) => model.is_path(&word) && model.edges[a].from == from && model.edges[b].to == to,
        _ => from == to,
    };
    if !ok {
        return Err(err(format!("{source}: word to '{}' is not a path between the base states", inc.cell)));
    }
    Ok(Term { target, coeff: inc.coeff, word })
}

/// Cycles of the vertex successor map, as edge words in canonical rotation.
pub fn successor_cycles(words: &WordComplex) -> Vec<Vec<usize>> {
    let next: Vec<(usize, usize)> = words.boundaries[0]
        .iter()
        .zip(&words.cells[1])
        .filter(|(_, c)| matches!(c, CellKind::Vertical { .. }))
        .map(|(terms, _)| (terms[1].target, terms[0].target, terms[0].word[0]))
        .fold(vec![(usize::MAX, usize::MAX); words.cells[0].len()], |mut acc, (from, to, e)| {
            acc[from] = (to, e);
            acc
        });
    let mut state = vec![0u8; next.len()];
    let mut cycles = Vec::new();
    for start in 0..next.len() {
        let mut path = Vec::new();
        let mut x = start;
        while state[x] == 0 {
            state[x] = 1;
            path.push(x);
            x = next[x].0;
        }
        if state[x] == 1 {
            let from = path.iter().position(|&y| y == x).expect("on the current path");
            cycles.push(canonical_rotation(&path[from..].iter().map(|&y| next[y].1).collect::<Vec<_>>()));
        }
        for y in path {
            state[y] = 2;
        }
    }
    cycles.sort();
    cycles
}

fn check_successor_cycles<S: Scalar>(model: &SymbolicFlowModel<S>, words: &WordComplex) -> Result<(), TorsionError> {
    let found = successor_cycles(words);
    let mut expected: Vec<Vec<usize>> = model.gamma_s.iter().map(|o| canonical_rotation(&o.cycle)).collect();
    expected.sort();
    if found != expected {
        let show = |cs: &[Vec<usize>]| {
            cs.iter()
                .map(|c| c.iter().map(|&e| model.edges[e].id.as_str()).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join(" | ")
        };
        return Err(err(format!("successor cycles [{}] differ from the stable orbits [{}]", show(&found), show(&expected))));
    }
    Ok(())
}
