//! Prong permutation combinatorics of (possibly singular) periodic orbits.

use serde::{Deserialize, Serialize};

/// Boundary sector permutation `σ : k ↦ εk + a` on `ℤ/2nℤ`.
///
/// Even residues index unstable half-leaves and odd residues stable ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProngSpec {
    pub n: u32,
    pub epsilon: i8,
    pub a: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProngError {
    #[error("prong count n = {0} is below 2")]
    TooFewProngs(u32),
    #[error("rotation a = {0} is odd")]
    OddShift(u32),
    #[error("prong epsilon {0} is not +1 or -1")]
    BadEpsilon(i8),
}

/// Wrap numbers of the weak-unstable and weak-stable half-leaves, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafData {
    pub unstable_wraps: Vec<u32>,
    pub stable_wraps: Vec<u32>,
}

impl ProngSpec {
    pub fn new(n: u32, epsilon: i8, a: u32) -> Result<Self, ProngError> {
        let s = ProngSpec { n, epsilon, a };
        s.check()?;
        Ok(s)
    }

    /// Wrap data of a regular orbit with the given signs: two prongs, the
    /// sectors swapped exactly when the unstable orientation flips.
    pub fn regular(delta: i8, epsilon: i8) -> Self {
        ProngSpec { n: 2, epsilon, a: if delta > 0 { 0 } else { 2 } }
    }

    pub fn check(&self) -> Result<(), ProngError> {
        if self.n < 2 {
            return Err(ProngError::TooFewProngs(self.n));
        }
        if !self.a.is_multiple_of(2) {
            return Err(ProngError::OddShift(self.a));
        }
        if self.epsilon != 1 && self.epsilon != -1 {
            return Err(ProngError::BadEpsilon(self.epsilon));
        }
        Ok(())
    }

    /// `σ(k)` on `ℤ/2nℤ`.
    pub fn sigma(&self, k: u32) -> u32 {
        let m = 2 * self.n as i64;
        let v = self.epsilon as i64 * k as i64 + self.a as i64;
        v.rem_euclid(m) as u32
    }
}

/// Cycle lengths of `σ` on even residues (unstable) and odd residues (stable).
pub fn prong_leaf_data(spec: &ProngSpec) -> Result<LeafData, ProngError> {
    spec.check()?;
    let m = 2 * spec.n;
    let mut seen = vec![false; m as usize];
    let mut unstable = Vec::new();
    let mut stable = Vec::new();
    for start in 0..m {
        if seen[start as usize] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k as usize] {
            seen[k as usize] = true;
            len += 1;
            k = spec.sigma(k);
        }
        if start % 2 == 0 {
            unstable.push(len);
        } else {
            stable.push(len);
        }
    }
    unstable.sort_unstable();
    stable.sort_unstable();
    Ok(LeafData { unstable_wraps: unstable, stable_wraps: stable })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaves(n: u32, e: i8, a: u32) -> LeafData {
        prong_leaf_data(&ProngSpec { n, epsilon: e, a }).unwrap()
    }

    #[test]
    fn regular_orbit_has_two_single_wraps() {
        assert_eq!(leaves(2, 1, 0).unstable_wraps, vec![1, 1]);
    }

    #[test]
    fn three_prong_rotation() {
        assert_eq!(leaves(3, 1, 2).unstable_wraps, vec![3]);
    }

    #[test]
    fn three_prong_reflection() {
        let d = leaves(3, -1, 0);
        assert_eq!(d.unstable_wraps, vec![1, 2]);
        assert_eq!(d.stable_wraps, vec![1, 2]);
    }

    #[test]
    fn identity_permutation() {
        assert_eq!(leaves(3, 1, 0).unstable_wraps, vec![1, 1, 1]);
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(prong_leaf_data(&ProngSpec { n: 3, epsilon: 1, a: 1 }), Err(ProngError::OddShift(1)));
        assert_eq!(prong_leaf_data(&ProngSpec { n: 1, epsilon: 1, a: 0 }), Err(ProngError::TooFewProngs(1)));
    }
}
