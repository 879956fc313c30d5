//! Flat-trace determinants `d_k(s, z)` assembled from periodic words.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::algebra::{Matrix, UPoly, ZSeries};
use crate::model::SymbolicFlowModel;
use crate::scalar::Scalar;

use super::ZetaError;

/// Ordered key for grouping words with identical derivative products.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum NumKey {
    Exact(BigRational),
    Float(u64, u64),
}

impl NumKey {
    fn of<S: Scalar>(x: &S) -> Self {
        match x.to_rational() {
            Some(r) => NumKey::Exact(r),
            None => {
                let z = x.to_c64();
                NumKey::Float(z.re.to_bits(), z.im.to_bits())
            }
        }
    }
}

/// `tr Λᵏ DT` for `DT = diag(λ, μ)`.
pub fn exterior_trace<S: Scalar>(k: usize, lambda: &S, mu: &S) -> S {
    match k {
        0 => S::one(),
        1 => lambda.clone() + mu.clone(),
        2 => lambda.clone() * mu.clone(),
        _ => S::zero(),
    }
}

/// `|det(I - DT)|` for a hyperbolic `DT = diag(λ, μ)` with `|λ| > 1 > |μ|`,
/// using `sign(1 - μ) = +1` and `sign(1 - λ) = -sign(λ)`; no absolute value is taken.
pub fn abs_det_i_minus_dt<S: Scalar>(lambda: &S, mu: &S, tol: f64) -> S {
    let det = (S::one() - lambda.clone()) * (S::one() - mu.clone());
    if lambda.real_sign(tol) > 0 {
        -det
    } else {
        det
    }
}

/// Per-word sign data: the telescoped sum `Σ_k (-1)^{k+1} tr Λᵏ DT / |det(I - DT)|`
/// and the ratio `det(I - DT) / |det(I - DT)|`.
pub fn word_sign_identity<S: Scalar>(lambda: &S, mu: &S, tol: f64) -> (S, S) {
    let abs = abs_det_i_minus_dt(lambda, mu, tol);
    let tele = (0..=2).fold(S::zero(), |acc, k| {
        let t = exterior_trace(k, lambda, mu) / abs.clone();
        if k % 2 == 1 {
            acc + t
        } else {
            acc - t
        }
    });
    let det = (S::one() - lambda.clone()) * (S::one() - mu.clone());
    (tele, det / abs)
}

fn check_derivatives<S: Scalar>(model: &SymbolicFlowModel<S>) -> Result<(), ZetaError> {
    let tol = model.tolerance();
    for e in &model.edges {
        let Some(d) = &e.derivative else {
            return Err(ZetaError::MissingDerivative(e.id.clone()));
        };
        let expanding = (d.lambda.abs_value() - S::one()).real_sign(tol) > 0;
        let contracting = !d.mu.near_zero(tol) && (d.mu.abs_value() - S::one()).real_sign(tol) < 0;
        if !d.lambda.is_real(tol) || !d.mu.is_real(tol) || !expanding || !contracting {
            return Err(ZetaError::NonHyperbolic(e.id.clone()));
        }
    }
    Ok(())
}

/// For each length `n ≤ order`, the flat-trace sum
/// `Σ_w u^{T_w} tr(ρ_w) tr Λᵏ DT_w / |det(I - DT_w)|` over closed words of length `n`.
pub fn flat_trace_sums<S: Scalar>(model: &SymbolicFlowModel<S>, k: usize, order: usize) -> Result<Vec<UPoly<S>>, ZetaError> {
    if k > 2 {
        return Err(ZetaError::Degree(k));
    }
    let [s0, s1, s2] = flat_trace_sums_all(model, order)?;
    Ok([s0, s1, s2].into_iter().nth(k).expect("k <= 2"))
}

/// The flat-trace sums for `k = 0, 1, 2` from a single pass over the words.
///
/// Walks are grouped by start, current state, return time and the exact
/// derivative products `(λ_w, μ_w)`; grouping never changes the sum.
pub fn flat_trace_sums_all<S: Scalar>(model: &SymbolicFlowModel<S>, order: usize) -> Result<[Vec<UPoly<S>>; 3], ZetaError> {
    check_derivatives(model)?;
    let tol = model.tolerance();
    type Key = (usize, u64, NumKey, NumKey);
    let mut sums = [vec![UPoly::zero(); order + 1], vec![UPoly::zero(); order + 1], vec![UPoly::zero(); order + 1]];
    for start in 0..model.num_states() {
        let mut layer: BTreeMap<Key, (S, S, Matrix<S>)> = BTreeMap::new();
        layer.insert((start, 0, NumKey::of(&S::one()), NumKey::of(&S::one())), (S::one(), S::one(), Matrix::identity(model.dim)));
        for n in 1..=order {
            let mut next: BTreeMap<Key, (S, S, Matrix<S>)> = BTreeMap::new();
            for ((cur, t, _, _), (lam, mu, h)) in &layer {
                for e in model.out_edges(*cur) {
                    let edge = &model.edges[e];
                    let d = edge.derivative.as_ref().expect("checked above");
                    let lam2 = lam.clone() * d.lambda.clone();
                    let mu2 = mu.clone() * d.mu.clone();
                    let key = (edge.to, t + edge.r as u64, NumKey::of(&lam2), NumKey::of(&mu2));
                    let prod = h * &edge.rho;
                    match next.get_mut(&key) {
                        Some(entry) => entry.2 = &entry.2 + &prod,
                        None => {
                            next.insert(key, (lam2, mu2, prod));
                        }
                    }
                }
            }
            for ((cur, t, _, _), (lam, mu, h)) in &next {
                if *cur != start {
                    continue;
                }
                let abs = abs_det_i_minus_dt(lam, mu, tol);
                let tr = h.trace();
                for (k, sum) in sums.iter_mut().enumerate() {
                    let w = exterior_trace(k, lam, mu) / abs.clone();
                    sum[n] = &sum[n] + &UPoly::monomial(tr.clone() * w, *t as usize);
                }
            }
            layer = next;
        }
    }
    Ok(sums)
}

/// `d_k(s, z) = exp(-Σ_n zⁿ/n · flat_trace_sums[n])`, truncated at `z^order`.
pub fn flat_determinant_series<S: Scalar>(model: &SymbolicFlowModel<S>, k: usize, order: usize) -> Result<ZSeries<S>, ZetaError> {
    if k > 2 {
        return Err(ZetaError::Degree(k));
    }
    let sums = flat_trace_sums(model, k, order)?;
    determinant_from_sums(&sums, order)
}

fn determinant_from_sums<S: Scalar>(sums: &[UPoly<S>], order: usize) -> Result<ZSeries<S>, ZetaError> {
    let mut log = ZSeries::zero(order);
    for (n, p) in sums.iter().enumerate().skip(1) {
        log.set_coeff(n, p.scale(&(-S::one() / S::from_i64(n as i64))));
    }
    Ok(log.exp()?)
}

/// `[d₀, d₁, d₂]` truncated at `z^order`.
pub fn flat_determinants<S: Scalar>(model: &SymbolicFlowModel<S>, order: usize) -> Result<[ZSeries<S>; 3], ZetaError> {
    let [s0, s1, s2] = flat_trace_sums_all(model, order)?;
    Ok([determinant_from_sums(&s0, order)?, determinant_from_sums(&s1, order)?, determinant_from_sums(&s2, order)?])
}

/// `d₁ / (d₀ d₂)` truncated at `z^order`, formed as one exponential of
/// the combined trace sums `s₁ - s₀ - s₂`; dividing the separately
/// exponentiated `d_k` loses precision on float backends because their
/// coefficients grow much faster than those of the ratio.
pub fn markov_ratio_series<S: Scalar>(model: &SymbolicFlowModel<S>, order: usize) -> Result<ZSeries<S>, ZetaError> {
    let [s0, s1, s2] = flat_trace_sums_all(model, order)?;
    let combined: Vec<UPoly<S>> = (0..s1.len()).map(|n| &(&s1[n] - &s0[n]) - &s2[n]).collect();
    determinant_from_sums(&combined, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn telescoping_equals_lambda_sign() {
        for (l, m) in [(q(2, 1), q(1, 2)), (q(-3, 1), q(1, 3)), (q(5, 2), q(-2, 3)), (q(-2, 1), q(-1, 2))] {
            let (tele, ratio) = word_sign_identity(&l, &m, 0.0);
            let sign = if l > q(0, 1) { q(1, 1) } else { q(-1, 1) };
            assert_eq!(tele, sign);
            assert_eq!(ratio, -sign);
        }
    }

    #[test]
    fn ratio_matches_division_of_determinants() {
        use crate::model::random::{random_model, RandomModelParams};
        use rand::SeedableRng;

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let params = RandomModelParams { max_states: 3, max_dim: 2, ..RandomModelParams::default() };
        for _ in 0..3 {
            let model = random_model(&mut rng, &params);
            let [d0, d1, d2] = flat_determinants(&model, 5).unwrap();
            assert_eq!(markov_ratio_series(&model, 5).unwrap(), d1.div(&d0.mul(&d2)).unwrap());
        }
    }
}
