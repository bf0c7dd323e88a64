//! The auxiliary associative algebra on anticommuting square-zero generators
//! `e_1, e_2, ...`, monomial arithmetic with signs, and the sign a
//! permutation induces on the odd entries of a mixed-parity sequence.

use crate::freelie::Parity;
use crate::perm::Permutation;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A signed monomial `coefficient * e_{i1} e_{i2} ... e_{ik}` with strictly
/// increasing indices. The canonical zero has coefficient 0 and no indices.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GrassmannMonomial {
    indices: Vec<u32>,
    coefficient: i64,
}

impl GrassmannMonomial {
    pub fn one() -> Self {
        GrassmannMonomial {
            indices: Vec::new(),
            coefficient: 1,
        }
    }

    pub fn zero() -> Self {
        GrassmannMonomial {
            indices: Vec::new(),
            coefficient: 0,
        }
    }

    /// `e_i` for a positive index.
    pub fn generator(i: u32) -> Self {
        assert!(i >= 1, "Grassmann indices are positive");
        GrassmannMonomial {
            indices: vec![i],
            coefficient: 1,
        }
    }

    /// Builds `coefficient * e_{i1}...e_{ik}`; indices must be strictly
    /// increasing.
    pub fn new(indices: Vec<u32>, coefficient: i64) -> Self {
        assert!(
            indices.windows(2).all(|w| w[0] < w[1]),
            "indices must be strictly increasing"
        );
        assert!(indices.iter().all(|&i| i >= 1));
        if coefficient == 0 {
            return Self::zero();
        }
        GrassmannMonomial {
            indices,
            coefficient,
        }
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn coefficient(&self) -> i64 {
        self.coefficient
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient == 0
    }

    pub fn parity(&self) -> Parity {
        if self.indices.len().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 || self.is_zero() {
            return Self::zero();
        }
        GrassmannMonomial {
            indices: self.indices.clone(),
            coefficient: self.coefficient * c,
        }
    }

    /// Product of two canonical monomials. The sign is (-1)^(inversions in
    /// the index merge); the product is zero when the index sets intersect.
    pub fn mul(&self, other: &GrassmannMonomial) -> GrassmannMonomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut merged = Vec::with_capacity(self.indices.len() + other.indices.len());
        let (mut i, mut j) = (0usize, 0usize);
        let mut inversions = 0usize;
        while i < self.indices.len() && j < other.indices.len() {
            if self.indices[i] < other.indices[j] {
                merged.push(self.indices[i]);
                i += 1;
            } else if self.indices[i] > other.indices[j] {
                // other.indices[j] jumps past the remaining entries of self
                inversions += self.indices.len() - i;
                merged.push(other.indices[j]);
                j += 1;
            } else {
                return Self::zero(); // e_i^2 = 0
            }
        }
        merged.extend_from_slice(&self.indices[i..]);
        merged.extend_from_slice(&other.indices[j..]);
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        GrassmannMonomial {
            indices: merged,
            coefficient: self.coefficient * other.coefficient * sign,
        }
    }
}

impl fmt::Debug for GrassmannMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GrassmannMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        match self.coefficient {
            1 => {}
            -1 => write!(f, "-")?,
            c => write!(f, "{}", c)?,
        }
        if self.indices.is_empty() {
            if self.coefficient.abs() == 1 {
                write!(f, "1")?;
            }
        } else {
            for i in &self.indices {
                write!(f, "e{}", i)?;
            }
        }
        Ok(())
    }
}

/// The sign of the permutation `sigma` induces on the odd entries of a
/// parity sequence: delete the even positions from both the identity order
/// and the permuted order, and take the sign of the induced permutation.
pub fn sigma_odd_sign(parities: &[Parity], sigma: &Permutation) -> i32 {
    assert_eq!(parities.len(), sigma.degree());
    // positions of odd entries, in identity order
    let odd_positions: Vec<usize> = (0..parities.len())
        .filter(|&i| parities[i] == Parity::Odd)
        .collect();
    // rank of each odd position among the odd positions
    let rank = |pos: usize| odd_positions.iter().position(|&q| q == pos).unwrap();
    // permuted order: position i of the permuted sequence holds the original
    // entry sigma^{-1}... careful: the permuted sequence is (b_{1σ},...,b_{nσ}),
    // i.e. slot i holds original entry σ(i).
    let induced: Vec<usize> = (0..parities.len())
        .map(|i| sigma.apply(i))
        .filter(|&orig| parities[orig] == Parity::Odd)
        .map(rank)
        .collect();
    let mut inv = 0usize;
    for i in 0..induced.len() {
        for j in i + 1..induced.len() {
            if induced[i] > induced[j] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::symmetric_group;
    use proptest::prelude::*;

    fn e(indices: &[u32]) -> GrassmannMonomial {
        GrassmannMonomial::new(indices.to_vec(), 1)
    }

    #[test]
    fn square_is_zero() {
        assert!(e(&[1]).mul(&e(&[1])).is_zero());
    }

    #[test]
    fn anticommutation() {
        // e2 * e1 = -e1e2
        let p = e(&[2]).mul(&e(&[1]));
        assert_eq!(p, GrassmannMonomial::new(vec![1, 2], -1));
    }

    #[test]
    fn single_transposition_sign() {
        // (e1e3) * e2 = -e1e2e3
        let p = e(&[1, 3]).mul(&e(&[2]));
        assert_eq!(p, GrassmannMonomial::new(vec![1, 2, 3], -1));
    }

    #[test]
    fn graded_commutativity_disjoint() {
        let xs = [e(&[1]), e(&[2, 5]), e(&[3]), e(&[4, 6, 7])];
        for x in &xs {
            for y in &xs {
                if x.indices().iter().any(|i| y.indices().contains(i)) {
                    continue;
                }
                let sign = if x.parity() == Parity::Odd && y.parity() == Parity::Odd {
                    -1
                } else {
                    1
                };
                assert_eq!(x.mul(y), y.mul(x).scale(sign));
            }
        }
    }

    proptest! {
        #[test]
        fn associativity(a in prop::collection::vec(1u32..=8, 0..4),
                         b in prop::collection::vec(1u32..=8, 0..4),
                         c in prop::collection::vec(1u32..=8, 0..4)) {
            let canon = |mut v: Vec<u32>| { v.sort_unstable(); v.dedup(); v };
            let (a, b, c) = (e(&canon(a)), e(&canon(b)), e(&canon(c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }

    /// Independent oracle: materialize the permuted parity sequence, delete
    /// even entries from both orders, count inversions directly on original
    /// position labels.
    fn sigma_odd_oracle(parities: &[Parity], sigma: &Permutation) -> i32 {
        let before: Vec<usize> = (0..parities.len())
            .filter(|&i| parities[i] == Parity::Odd)
            .collect();
        let after: Vec<usize> = (0..parities.len())
            .map(|i| sigma.apply(i))
            .filter(|&i| parities[i] == Parity::Odd)
            .collect();
        let pos = |x: usize| before.iter().position(|&y| y == x).unwrap();
        let mut inv = 0;
        for i in 0..after.len() {
            for j in i + 1..after.len() {
                if pos(after[i]) > pos(after[j]) {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 { 1 } else { -1 }
    }

    #[test]
    fn sigma_odd_all_even_is_trivial() {
        let p = vec![Parity::Even; 4];
        for s in symmetric_group(4) {
            assert_eq!(sigma_odd_sign(&p, &s), 1);
        }
    }

    #[test]
    fn sigma_odd_all_odd_is_sign() {
        let p = vec![Parity::Odd; 4];
        for s in symmetric_group(4) {
            assert_eq!(sigma_odd_sign(&p, &s), s.sign());
        }
    }

    #[test]
    fn sigma_odd_mixed_matches_oracle() {
        let p = [Parity::Odd, Parity::Even, Parity::Odd];
        for s in symmetric_group(3) {
            assert_eq!(sigma_odd_sign(&p, &s), sigma_odd_oracle(&p, &s));
        }
        // spec'd cases: swap positions 1 and 3 (0-based 0 and 2) -> -1
        let swap13 = Permutation::from_images(vec![2, 1, 0]).unwrap();
        assert_eq!(sigma_odd_sign(&p, &swap13), -1);
        let swap12 = Permutation::from_images(vec![1, 0, 2]).unwrap();
        assert_eq!(sigma_odd_sign(&p, &swap12), 1);
    }

    #[test]
    fn sigma_odd_homomorphism_on_even_preserving_perms() {
        let p = [Parity::Odd, Parity::Even, Parity::Odd, Parity::Odd];
        let fixing: Vec<_> = symmetric_group(4)
            .into_iter()
            .filter(|s| p[s.apply(1)] == Parity::Even)
            .collect();
        for a in &fixing {
            for b in &fixing {
                let ab = a.compose(b);
                assert_eq!(
                    sigma_odd_sign(&p, &ab),
                    sigma_odd_sign(&p, a) * sigma_odd_sign(&p, b)
                );
            }
        }
    }
}
