use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cochain::{Chain, Cochain, IntCochain};
use super::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{
    Field, FieldSubquotient, FiniteAbelianGroup, Gf2, GroupDescription, IntMatrix, Lattice, Matrix, Subquotient,
};

/// Coefficient rings for (co)homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Z/2")]
    Mod2,
    #[serde(rename = "Q")]
    Rationals,
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" | "int" => Ok(Ring::Integers),
            "Z/2" | "z2" | "Z2" | "gf2" => Ok(Ring::Mod2),
            "Q" | "q" | "rat" => Ok(Ring::Rationals),
            _ => Err(Error::Input(format!("unknown coefficient ring {s:?}"))),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Integers => "Z",
            Ring::Mod2 => "Z/2",
            Ring::Rationals => "Q",
        })
    }
}

/// `Hᵏ(K;Z) = ker δₖ / im δₖ₋₁` with canonical generators (torsion first).
#[derive(Clone, Debug)]
pub struct IntegralCohomology {
    complex: Arc<SimplicialComplex>,
    degree: usize,
    quotient: Subquotient,
    generators: Vec<IntCochain>,
}

impl IntegralCohomology {
    pub fn compute(complex: &Arc<SimplicialComplex>, k: usize) -> Result<Self> {
        let n = complex.count(k);
        let cocycles = Lattice::kernel(&complex.integer_coboundary(k));
        let coboundaries = if k == 0 {
            Lattice::span(&IntMatrix::zeros(n, 0))
        } else {
            Lattice::span(&complex.integer_coboundary(k - 1))
        };
        let quotient = Subquotient::new(cocycles, &coboundaries)?;
        let generators =
            quotient.generators().into_iter().map(|v| Cochain::new(complex, k, v)).collect::<Result<Vec<_>>>()?;
        Ok(IntegralCohomology { complex: complex.clone(), degree: k, quotient, generators })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn description(&self) -> GroupDescription {
        self.quotient.description()
    }

    /// Representative cocycles of the canonical generators, torsion first.
    pub fn generators(&self) -> &[IntCochain] {
        &self.generators
    }

    /// Orders of the generators (0 for infinite order).
    pub fn generator_orders(&self) -> Vec<BigInt> {
        self.quotient.generator_orders()
    }

    pub fn torsion_generators(&self) -> &[IntCochain] {
        &self.generators[..self.description().torsion.rank()]
    }

    pub fn free_generators(&self) -> &[IntCochain] {
        &self.generators[self.description().torsion.rank()..]
    }

    /// Coordinates of the class of a cocycle in the canonical generators.
    pub fn coordinates(&self, c: &IntCochain) -> Result<Vec<BigInt>> {
        if !Arc::ptr_eq(c.complex(), &self.complex) {
            return Err(Error::ComplexMismatch);
        }
        if c.degree() != self.degree {
            return Err(Error::Degree(format!("{}-cochain in H^{}", c.degree(), self.degree)));
        }
        if !c.is_cocycle() {
            return Err(Error::NotCocycle);
        }
        self.quotient.coordinates(c.values())
    }

    /// Free-part coordinates only.
    pub fn free_coordinates(&self, c: &IntCochain) -> Result<Vec<BigInt>> {
        let t = self.description().torsion.rank();
        Ok(self.coordinates(c)?[t..].to_vec())
    }

    pub fn is_trivial_class(&self, c: &IntCochain) -> Result<bool> {
        Ok(self.coordinates(c)?.iter().all(Zero::is_zero))
    }

    /// Cocycle representing `Σ cᵢ gᵢ`.
    pub fn representative(&self, coords: &[BigInt]) -> Result<IntCochain> {
        if coords.len() != self.generators.len() {
            return Err(Error::DimensionMismatch("class coordinates".into()));
        }
        let terms: Vec<(BigInt, &IntCochain)> = coords.iter().cloned().zip(self.generators.iter()).collect();
        Cochain::combination(&self.complex, self.degree, &terms)
    }
}

/// Cohomology over a field, with a complement basis of cocycles.
#[derive(Clone, Debug)]
pub struct FieldCohomology<F> {
    complex: Arc<SimplicialComplex>,
    degree: usize,
    quotient: FieldSubquotient<F>,
    generators: Vec<Cochain<F>>,
}

impl<F: Field> FieldCohomology<F> {
    pub fn compute(complex: &Arc<SimplicialComplex>, k: usize) -> Result<Self> {
        let n = complex.count(k);
        let dk: Matrix<F> = complex.coboundary_matrix(k);
        let prev: Matrix<F> = if k == 0 { Matrix::zeros(n, 0) } else { complex.coboundary_matrix(k - 1) };
        let quotient = FieldSubquotient::new(n, &dk, &prev)?;
        let generators =
            quotient.basis().iter().map(|v| Cochain::new(complex, k, v.clone())).collect::<Result<Vec<_>>>()?;
        Ok(FieldCohomology { complex: complex.clone(), degree: k, quotient, generators })
    }

    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Cochain<F>] {
        &self.generators
    }

    pub fn coordinates(&self, c: &Cochain<F>) -> Result<Vec<F>> {
        if !Arc::ptr_eq(c.complex(), &self.complex) {
            return Err(Error::ComplexMismatch);
        }
        if c.degree() != self.degree {
            return Err(Error::Degree(format!("{}-cochain in H^{}", c.degree(), self.degree)));
        }
        if !c.is_cocycle() {
            return Err(Error::NotCocycle);
        }
        self.quotient.coordinates(c.values())
    }

    pub fn is_trivial_class(&self, c: &Cochain<F>) -> Result<bool> {
        Ok(self.coordinates(c)?.iter().all(Zero::is_zero))
    }

    pub fn representative(&self, coords: &[F]) -> Result<Cochain<F>> {
        if coords.len() != self.generators.len() {
            return Err(Error::DimensionMismatch("class coordinates".into()));
        }
        let terms: Vec<(F, &Cochain<F>)> = coords.iter().cloned().zip(self.generators.iter()).collect();
        Cochain::combination(&self.complex, self.degree, &terms)
    }
}

pub type Mod2Cohomology = FieldCohomology<Gf2>;
pub type RationalCohomology = FieldCohomology<BigRational>;

/// `H_k(K;Z) = ker ∂ₖ / im ∂ₖ₊₁` with cycle representatives.
#[derive(Clone, Debug)]
pub struct IntegralHomology {
    complex: Arc<SimplicialComplex>,
    degree: usize,
    quotient: Subquotient,
    generators: Vec<Chain<BigInt>>,
}

impl IntegralHomology {
    pub fn compute(complex: &Arc<SimplicialComplex>, k: usize) -> Result<Self> {
        let n = complex.count(k);
        let cycles =
            if k == 0 { Lattice::full(n) } else { Lattice::kernel(&complex.integer_coboundary(k - 1).transpose()) };
        let boundaries = Lattice::span(&complex.integer_coboundary(k).transpose());
        let quotient = Subquotient::new(cycles, &boundaries)?;
        let generators =
            quotient.generators().into_iter().map(|v| Chain::new(complex, k, v)).collect::<Result<Vec<_>>>()?;
        Ok(IntegralHomology { complex: complex.clone(), degree: k, quotient, generators })
    }

    pub fn description(&self) -> GroupDescription {
        self.quotient.description()
    }

    pub fn generators(&self) -> &[Chain<BigInt>] {
        &self.generators
    }

    pub fn generator_orders(&self) -> Vec<BigInt> {
        self.quotient.generator_orders()
    }

    pub fn coordinates(&self, z: &Chain<BigInt>) -> Result<Vec<BigInt>> {
        if !Arc::ptr_eq(z.complex(), &self.complex) {
            return Err(Error::ComplexMismatch);
        }
        if z.degree() != self.degree || !z.is_cycle() {
            return Err(Error::NotCycle);
        }
        self.quotient.coordinates(z.values())
    }
}

/// Group description of `Hᵏ(K; R)`: for fields, the dimension is reported as
/// free rank over `Q` or as `(Z/2)^d`.
pub fn cohomology_description(complex: &Arc<SimplicialComplex>, k: usize, ring: Ring) -> Result<GroupDescription> {
    Ok(match ring {
        Ring::Integers => IntegralCohomology::compute(complex, k)?.description(),
        Ring::Rationals => GroupDescription::free(RationalCohomology::compute(complex, k)?.dimension()),
        Ring::Mod2 => {
            let d = Mod2Cohomology::compute(complex, k)?.dimension();
            GroupDescription::finite(FiniteAbelianGroup::from_u64(&vec![2; d])?)
        }
    })
}

/// Betti numbers `dim Hᵏ(K;F)` for every `k`.
pub fn betti_numbers<F: Field>(complex: &Arc<SimplicialComplex>) -> Result<Vec<usize>> {
    (0..=complex.dim()).map(|k| Ok(FieldCohomology::<F>::compute(complex, k)?.dimension())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::builtin::builtin;

    #[test]
    fn sphere_cohomology() {
        let s2 = builtin("s2").unwrap();
        let h2 = IntegralCohomology::compute(&s2, 2).unwrap();
        assert_eq!(h2.description(), GroupDescription::free(1));
        assert_eq!(IntegralCohomology::compute(&s2, 1).unwrap().description(), GroupDescription::free(0));
        assert_eq!(IntegralCohomology::compute(&s2, 0).unwrap().description(), GroupDescription::free(1));
    }

    #[test]
    fn projective_plane_cohomology() {
        let rp2 = builtin("rp2").unwrap();
        let z2 = FiniteAbelianGroup::from_u64(&[2]).unwrap();
        assert_eq!(cohomology_description(&rp2, 1, Ring::Mod2).unwrap(), GroupDescription::finite(z2.clone()));
        assert_eq!(cohomology_description(&rp2, 2, Ring::Integers).unwrap(), GroupDescription::finite(z2.clone()));
        assert_eq!(cohomology_description(&rp2, 1, Ring::Integers).unwrap(), GroupDescription::free(0));
        assert_eq!(cohomology_description(&rp2, 2, Ring::Rationals).unwrap(), GroupDescription::free(0));
        let h1 = IntegralHomology::compute(&rp2, 1).unwrap();
        assert_eq!(h1.description(), GroupDescription::finite(z2));
    }

    #[test]
    fn torus_generators_are_cocycles() {
        let t2 = builtin("t2").unwrap();
        let h1 = IntegralCohomology::compute(&t2, 1).unwrap();
        assert_eq!(h1.description(), GroupDescription::free(2));
        for (i, g) in h1.generators().iter().enumerate() {
            assert!(g.is_cocycle());
            let mut e = vec![BigInt::zero(); 2];
            e[i] = BigInt::from(1);
            assert_eq!(h1.coordinates(g).unwrap(), e);
        }
    }

    #[test]
    fn ring_parsing() {
        assert_eq!("Z/2".parse::<Ring>().unwrap(), Ring::Mod2);
        assert!("R".parse::<Ring>().is_err());
    }
}
