//! Seeded random models and holonomies for property suites.

use num_complex::Complex64;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{BackendSpec, Derivative, Edge, SymbolicFlowModel};
use crate::algebra::Matrix;
use crate::scalar::Scalar;

/// Shape limits for [`random_model`].
#[derive(Clone, Debug)]
pub struct RandomModelParams {
    pub max_states: usize,
    pub max_out_degree: usize,
    pub max_dim: usize,
    pub max_return_time: u32,
    pub with_derivatives: bool,
}

impl Default for RandomModelParams {
    fn default() -> Self {
        RandomModelParams { max_states: 5, max_out_degree: 3, max_dim: 3, max_return_time: 2, with_derivatives: true }
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Random rational orthogonal matrix: a Cayley transform `(I - K)(I + K)^{-1}`
/// of a small skew-symmetric integer matrix, times a random sign diagonal.
pub fn random_orthogonal(rng: &mut impl Rng, m: usize) -> Matrix<BigRational> {
    let mut k = Matrix::<BigRational>::zeros(m, m);
    for i in 0..m {
        for j in i + 1..m {
            let v = q(rng.gen_range(-2..=2), rng.gen_range(1..=2));
            k[(i, j)] = v.clone();
            k[(j, i)] = -v;
        }
    }
    let id = Matrix::identity(m);
    let inv = (&id + &k).inverse(0.0).expect("I + K is invertible for skew-symmetric K");
    let cayley = &(&id - &k) * &inv;
    let signs = Matrix::from_fn(m, m, |i, j| if i == j { q(if rng.gen_bool(0.5) { 1 } else { -1 }, 1) } else { q(0, 1) });
    &cayley * &signs
}

/// Random unitary matrix: Cayley transform of a random anti-Hermitian matrix,
/// times random unit phases.
pub fn random_unitary(rng: &mut impl Rng, m: usize) -> Matrix<Complex64> {
    let mut k = Matrix::<Complex64>::zeros(m, m);
    for i in 0..m {
        k[(i, i)] = Complex64::new(0.0, rng.gen_range(-1.0..1.0));
        for j in i + 1..m {
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            k[(i, j)] = v;
            k[(j, i)] = -v.conj();
        }
    }
    let id = Matrix::identity(m);
    let inv = (&id + &k).inverse(1e-12).expect("I + K is invertible for anti-Hermitian K");
    let cayley = &(&id - &k) * &inv;
    let phases =
        Matrix::from_fn(m, m, |i, j| if i == j { Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)) } else { Complex64::new(0.0, 0.0) });
    &cayley * &phases
}

/// Strongly connected random model over exact rationals.
///
/// States form a directed ring so the graph is strongly connected; each
/// state then receives random extra out-edges up to the degree limit.
/// Derivative data is drawn from small rational sets with `Δ = sign λ` and
/// `ε = sign(λμ)`.
pub fn random_model(rng: &mut impl Rng, p: &RandomModelParams) -> SymbolicFlowModel<BigRational> {
    let n = rng.gen_range(1..=p.max_states.max(1));
    let dim = rng.gen_range(1..=p.max_dim.max(1));
    let lambdas = [q(2, 1), q(3, 1), q(3, 2), q(-2, 1), q(-3, 1), q(-3, 2)];
    let mus = [q(1, 2), q(1, 3), q(2, 3), q(-1, 2), q(-1, 3), q(-2, 3)];

    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for s in 0..n {
        arcs.push((s, (s + 1) % n));
        let extra = rng.gen_range(1..=p.max_out_degree.max(1)) - 1;
        for _ in 0..extra {
            arcs.push((s, rng.gen_range(0..n)));
        }
    }
    arcs.sort();

    let edges = arcs
        .iter()
        .enumerate()
        .map(|(k, &(from, to))| {
            let (delta, epsilon, derivative) = if p.with_derivatives {
                let lambda = lambdas.choose(rng).expect("nonempty").clone();
                let mu = mus.choose(rng).expect("nonempty").clone();
                let sl = lambda.real_sign(0.0);
                let sm = mu.real_sign(0.0);
                (sl, sl * sm, Some(Derivative { lambda, mu }))
            } else {
                (if rng.gen_bool(0.5) { 1 } else { -1 }, if rng.gen_bool(0.5) { 1 } else { -1 }, None)
            };
            Edge {
                id: format!("e{k}"),
                from,
                to,
                r: rng.gen_range(1..=p.max_return_time.max(1)),
                delta,
                epsilon,
                rho: random_orthogonal(rng, dim),
                derivative,
            }
        })
        .collect();

    SymbolicFlowModel {
        name: None,
        states: (0..n).map(|s| format!("s{s}")).collect(),
        edges,
        gamma_u: Vec::new(),
        gamma_s: Vec::new(),
        dim,
        backend: BackendSpec::exact(),
        flow_complex: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_model;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_models_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let m = random_model(&mut rng, &RandomModelParams::default());
            let report = validate_model(&m);
            assert!(report.is_valid(), "{report}");
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(random_unitary(&mut rng, 3).is_unitary(1e-12));
    }
}
