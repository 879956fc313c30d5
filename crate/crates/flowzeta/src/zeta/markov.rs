//! Transfer matrices, the Markov zeta closed form, Euler products over
//! primitive orbits and periodic-word sums.

use std::collections::BTreeMap;

use crate::algebra::{poly_matrix_det, Matrix, PolyMatrix, UPoly, ZSeries};
use crate::model::{SymbolicFlowModel, Twist};
use crate::orbits::{enumerate_primitive_cycles, OrbitClass};
use crate::scalar::Scalar;

/// `G(u)`: the `(θ,ϑ)` block is `Σ u^{r_e} Δ_e ρ_e` over edges `e: θ → ϑ`
/// (twist selectable), as a polynomial matrix of size `|Θ|·m`.
pub fn transfer_matrix<S: Scalar>(model: &SymbolicFlowModel<S>, twist: Twist) -> PolyMatrix<S> {
    let m = model.dim;
    let size = model.num_states() * m;
    let mut g: PolyMatrix<S> = vec![vec![UPoly::zero(); size]; size];
    for (k, e) in model.edges.iter().enumerate() {
        let block = model.twisted_rho(k, twist);
        for i in 0..m {
            for j in 0..m {
                let term = UPoly::monomial(block[(i, j)].clone(), e.r as usize);
                let cell = &mut g[e.from * m + i][e.to * m + j];
                *cell = &*cell + &term;
            }
        }
    }
    g
}

/// `H`: the transfer matrix at `u = 1`.
pub fn h_matrix<S: Scalar>(model: &SymbolicFlowModel<S>, twist: Twist) -> Matrix<S> {
    let m = model.dim;
    let size = model.num_states() * m;
    let mut h: Matrix<S> = Matrix::zeros(size, size);
    for (k, e) in model.edges.iter().enumerate() {
        let block = model.twisted_rho(k, twist);
        for i in 0..m {
            for j in 0..m {
                let v = h[(e.from * m + i, e.to * m + j)].clone() + block[(i, j)].clone();
                h[(e.from * m + i, e.to * m + j)] = v;
            }
        }
    }
    h
}

/// `det(I - H)` for the requested twist.
pub fn det_i_minus_h<S: Scalar>(model: &SymbolicFlowModel<S>, twist: Twist) -> S {
    let h = h_matrix(model, twist);
    (&Matrix::identity(h.rows()) - &h).det(model.tolerance())
}

/// `det(I - G(u))` with the `Δρ` twist.
pub fn zeta_markov_closed_form<S: Scalar>(model: &SymbolicFlowModel<S>) -> UPoly<S> {
    let g = transfer_matrix(model, Twist::DeltaRho);
    let n = g.len();
    let rows = (0..n)
        .map(|i| (0..n).map(|j| if i == j { &UPoly::one() - &g[i][j] } else { -&g[i][j] }).collect())
        .collect();
    poly_matrix_det(&rows, model.tolerance())
}

/// `det(I - zH)` as a polynomial in `z`.
pub fn det_i_minus_zh<S: Scalar>(model: &SymbolicFlowModel<S>, twist: Twist) -> UPoly<S> {
    let h = h_matrix(model, twist);
    let n = h.rows();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = if i == j { S::one() } else { S::zero() };
                    UPoly::from_coeffs(vec![c, -h[(i, j)].clone()])
                })
                .collect()
        })
        .collect();
    poly_matrix_det(&rows, model.tolerance())
}

/// `det(I - zG(u))` truncated at `z^order`, by Gaussian elimination over
/// `K[u][[z]]`. Every pivot has constant term 1 because the matrix is the
/// identity at `z = 0`, so no pivoting is needed.
pub fn markov_determinant_series<S: Scalar>(model: &SymbolicFlowModel<S>, order: usize) -> ZSeries<S> {
    let g = transfer_matrix(model, Twist::DeltaRho);
    let n = g.len();
    let mut a: Vec<Vec<ZSeries<S>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = ZSeries::zero(order);
                    if i == j {
                        s.set_coeff(0, UPoly::one());
                    }
                    s.set_coeff(1, -&g[i][j]);
                    s
                })
                .collect()
        })
        .collect();
    let mut det = ZSeries::one(order);
    for k in 0..n {
        let pivot = a[k][k].clone();
        det = det.mul(&pivot);
        let inv = pivot.inverse().expect("pivot has unit constant term");
        let pivot_row = a[k].clone();
        for row in a.iter_mut().skip(k + 1) {
            if row[k].coeffs().iter().all(UPoly::is_zero) {
                continue;
            }
            let f = row[k].mul(&inv);
            for (x, p) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                *x = x.sub(&f.mul(p));
            }
        }
    }
    det
}

/// `∏ F_O` over primitive orbits of period at most `order`, truncated at `z^order`,
/// with `F_O = det(I - z^p u^{T_O} Δ_O ρ(γ_O))`.
pub fn euler_product_series<S: Scalar>(model: &SymbolicFlowModel<S>, order: usize) -> ZSeries<S> {
    euler_product_from_orbits(&enumerate_primitive_cycles(model, order), order, true)
}

/// The Euler product specialized at `u = 1`, as a series in `z` with constant coefficients.
pub fn euler_product_at_one<S: Scalar>(model: &SymbolicFlowModel<S>, order: usize) -> ZSeries<S> {
    euler_product_from_orbits(&enumerate_primitive_cycles(model, order), order, false)
}

/// `∏ F_O` over the given orbits, truncated at `z^order`; with `graded = false`
/// the factors are taken at `u = 1`. Orbits longer than `order` are ignored.
///
/// The product is formed as `exp Σ_O log F_O` with
/// `log F_O = -Σ_k z^{pk} u^{Tk} tr((Δ_O ρ_O)^k) / k`; a direct product of
/// tens of thousands of factors over the rationals is far slower.
pub fn euler_product_from_orbits<S: Scalar>(orbits: &[OrbitClass<S>], order: usize, graded: bool) -> ZSeries<S> {
    let mut log: Vec<UPoly<S>> = vec![UPoly::zero(); order + 1];
    for orbit in orbits.iter().filter(|o| o.period <= order) {
        let x = orbit.holonomy.scale(&S::from_i64(orbit.delta as i64));
        let mut power = x.clone();
        for k in 1..=order / orbit.period {
            if k > 1 {
                power = &power * &x;
            }
            let shift = if graded { orbit.total_time as usize * k } else { 0 };
            let c = -power.trace() / S::from_i64(k as i64);
            let n = orbit.period * k;
            log[n] = &log[n] + &UPoly::monomial(c, shift);
        }
    }
    ZSeries::from_coeffs(order, log).exp().expect("log series has zero constant term")
}

/// For `n = 1..=order`, `Σ u^{T_w} tr(ρ'_w)` over closed walks `w` of length `n`
/// with a marked starting edge, where `ρ'` is the twisted holonomy.
///
/// Walks are grouped by (start, current state, return time), which merges
/// words with equal data without changing the sum. Entry 0 is zero.
pub fn periodic_word_sums<S: Scalar>(model: &SymbolicFlowModel<S>, twist: Twist, order: usize) -> Vec<UPoly<S>> {
    let mut sums = vec![UPoly::zero(); order + 1];
    let twisted: Vec<Matrix<S>> = (0..model.edges.len()).map(|e| model.twisted_rho(e, twist)).collect();
    for start in 0..model.num_states() {
        let mut layer: BTreeMap<(usize, u64), Matrix<S>> = BTreeMap::from([((start, 0), Matrix::identity(model.dim))]);
        for slot in sums.iter_mut().skip(1) {
            let mut next: BTreeMap<(usize, u64), Matrix<S>> = BTreeMap::new();
            for ((cur, t), h) in &layer {
                for e in model.out_edges(*cur) {
                    let key = (model.edges[e].to, t + model.edges[e].r as u64);
                    let prod = h * &twisted[e];
                    match next.get_mut(&key) {
                        Some(acc) => *acc = &*acc + &prod,
                        None => {
                            next.insert(key, prod);
                        }
                    }
                }
            }
            for ((cur, t), h) in &next {
                if *cur == start {
                    *slot = &*slot + &UPoly::monomial(h.trace(), *t as usize);
                }
            }
            layer = next;
        }
    }
    sums
}

/// Oracle: the same sums by explicit enumeration of every closed edge word.
pub fn periodic_word_sums_brute<S: Scalar>(model: &SymbolicFlowModel<S>, twist: Twist, order: usize) -> Vec<UPoly<S>> {
    let mut sums = vec![UPoly::zero(); order + 1];
    let mut paths: Vec<Vec<usize>> = (0..model.edges.len()).map(|e| vec![e]).collect();
    for (n, slot) in sums.iter_mut().enumerate().skip(1) {
        for p in &paths {
            if model.is_closed_walk(p) {
                let h = p.iter().fold(Matrix::identity(model.dim), |acc, &e| &acc * &model.twisted_rho(e, twist));
                *slot = &*slot + &UPoly::monomial(h.trace(), model.return_time(p) as usize);
            }
        }
        if n == order {
            break;
        }
        let mut next = Vec::new();
        for p in &paths {
            let head = model.edges[*p.last().expect("nonempty path")].to;
            for e in model.out_edges(head) {
                let mut q = p.clone();
                q.push(e);
                next.push(q);
            }
        }
        paths = next;
    }
    sums
}

/// `-Σ_n z^n/n · sums[n]`, the logarithm predicted by the word sums.
pub fn log_series_from_word_sums<S: Scalar>(sums: &[UPoly<S>], order: usize) -> ZSeries<S> {
    let mut s = ZSeries::zero(order);
    for (n, p) in sums.iter().enumerate().take(order + 1).skip(1) {
        s.set_coeff(n, p.scale(&(-S::one() / S::from_i64(n as i64))));
    }
    s
}
