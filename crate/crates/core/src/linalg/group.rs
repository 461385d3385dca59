use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite abelian group `Z/n₁ ⊕ … ⊕ Z/n_k` with `n₁ | n₂ | … | n_k`, each `nᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    factors: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn new(factors: Vec<BigInt>) -> Result<Self> {
        if factors.iter().any(|n| n < &BigInt::from(2)) {
            return Err(Error::Input("invariant factors must be at least 2".into()));
        }
        if factors.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::Input(format!("invariant factors {factors:?} do not form a divisibility chain")));
        }
        Ok(FiniteAbelianGroup { factors })
    }

    /// Normalizes arbitrary cyclic orders (entries equal to 1 are dropped)
    /// into invariant-factor form.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Result<Self> {
        if orders.iter().any(|n| !n.is_positive()) {
            return Err(Error::Input("cyclic orders must be positive".into()));
        }
        let diag = super::IntMatrix::diagonal(orders);
        Ok(super::cokernel_presentation(&diag).torsion)
    }

    pub fn from_u64(factors: &[u64]) -> Result<Self> {
        Self::new(factors.iter().map(|&n| BigInt::from(n)).collect())
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.factors.clone();
        orders.extend(other.factors.iter().cloned());
        Self::from_cyclic_orders(&orders).expect("factors are positive")
    }

    /// Canonical residue tuple for arbitrary integer coordinates.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        x.iter().zip(&self.factors).map(|(a, n)| a.mod_floor(n)).collect()
    }

    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        self.reduce(x).iter().all(Zero::is_zero)
    }

    /// Small invariant factors as machine integers.
    pub fn small_factors(&self) -> Result<Vec<i64>> {
        self.factors
            .iter()
            .map(|n| n.to_i64().ok_or_else(|| Error::Input(format!("group factor {n} too large to enumerate"))))
            .collect()
    }

    /// All elements as residue tuples, in mixed-radix order.
    pub fn elements(&self) -> Result<ElementIter> {
        let orders = self.small_factors()?;
        Ok(ElementIter { current: vec![0; orders.len()], orders, done: false })
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Mixed-radix enumeration of a finite abelian group.
pub struct ElementIter {
    orders: Vec<i64>,
    current: Vec<i64>,
    done: bool,
}

impl Iterator for ElementIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = self.orders.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.current[i] += 1;
            if self.current[i] < self.orders[i] {
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}

/// Finitely generated abelian group `Z^free ⊕ torsion`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GroupDescription {
    pub free_rank: usize,
    pub torsion: FiniteAbelianGroup,
}

impl GroupDescription {
    pub fn new(free_rank: usize, torsion: FiniteAbelianGroup) -> Self {
        GroupDescription { free_rank, torsion }
    }

    pub fn free(rank: usize) -> Self {
        GroupDescription { free_rank: rank, torsion: FiniteAbelianGroup::trivial() }
    }

    pub fn finite(torsion: FiniteAbelianGroup) -> Self {
        GroupDescription { free_rank: 0, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_trivial()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        GroupDescription {
            free_rank: self.free_rank + other.free_rank,
            torsion: self.torsion.direct_sum(&other.torsion),
        }
    }

    /// Number of cyclic summands in the canonical decomposition.
    pub fn generator_count(&self) -> usize {
        self.torsion.rank() + self.free_rank
    }

    /// Orders of the canonical generators: torsion factors, then zeros for free summands.
    pub fn generator_orders(&self) -> Vec<BigInt> {
        let mut v = self.torsion.factors().to_vec();
        v.extend(std::iter::repeat(BigInt::zero()).take(self.free_rank));
        v
    }
}

impl fmt::Display for GroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        if !self.torsion.is_trivial() {
            parts.push(self.torsion.to_string());
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_validation() {
        assert!(FiniteAbelianGroup::from_u64(&[2, 4]).is_ok());
        assert!(FiniteAbelianGroup::from_u64(&[4, 2]).is_err());
        assert!(FiniteAbelianGroup::from_u64(&[1]).is_err());
    }

    #[test]
    fn crt_normalization() {
        let g = FiniteAbelianGroup::from_cyclic_orders(&[BigInt::from(2), BigInt::from(3)]).unwrap();
        assert_eq!(g.factors(), &[BigInt::from(6)]);
        let h = FiniteAbelianGroup::from_cyclic_orders(&[BigInt::from(4), BigInt::from(6), BigInt::from(1)]).unwrap();
        assert_eq!(h.factors(), &[BigInt::from(2), BigInt::from(12)]);
        assert_eq!(h.order(), BigInt::from(24));
    }

    #[test]
    fn enumeration_covers_group() {
        let g = FiniteAbelianGroup::from_u64(&[2, 6]).unwrap();
        let all: Vec<_> = g.elements().unwrap().collect();
        assert_eq!(all.len(), 12);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[11], vec![1, 5]);
        assert_eq!(FiniteAbelianGroup::trivial().elements().unwrap().count(), 1);
    }
}
