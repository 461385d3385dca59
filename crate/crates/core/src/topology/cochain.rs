use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{Gf2, Scalar};

/// A `k`-cochain with values in `T`, one value per ordered `k`-simplex.
#[derive(Clone, Debug)]
pub struct Cochain<T> {
    complex: Arc<SimplicialComplex>,
    degree: usize,
    values: Vec<T>,
}

/// A `k`-chain, coefficients per ordered `k`-simplex.
#[derive(Clone, Debug)]
pub struct Chain<T> {
    complex: Arc<SimplicialComplex>,
    degree: usize,
    values: Vec<T>,
}

pub type IntCochain = Cochain<BigInt>;
pub type RatCochain = Cochain<BigRational>;
pub type Gf2Cochain = Cochain<Gf2>;

impl<T: PartialEq> PartialEq for Cochain<T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.complex, &other.complex) && self.degree == other.degree && self.values == other.values
    }
}

impl<T: PartialEq> PartialEq for Chain<T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.complex, &other.complex) && self.degree == other.degree && self.values == other.values
    }
}

fn same(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> Result<()> {
    if Arc::ptr_eq(a, b) {
        Ok(())
    } else {
        Err(Error::ComplexMismatch)
    }
}

impl<T: Scalar> Cochain<T> {
    pub fn zero(complex: &Arc<SimplicialComplex>, degree: usize) -> Self {
        Cochain { complex: complex.clone(), degree, values: vec![T::zero(); complex.count(degree)] }
    }

    pub fn new(complex: &Arc<SimplicialComplex>, degree: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != complex.count(degree) {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} simplices of dimension {degree}",
                values.len(),
                complex.count(degree)
            )));
        }
        Ok(Cochain { complex: complex.clone(), degree, values })
    }

    /// The unit `1 ∈ C⁰`.
    pub fn unit(complex: &Arc<SimplicialComplex>) -> Self {
        Cochain { complex: complex.clone(), degree: 0, values: vec![T::one(); complex.count(0)] }
    }

    /// Indicator of one simplex.
    pub fn indicator(complex: &Arc<SimplicialComplex>, simplex: &[usize]) -> Result<Self> {
        let k = simplex.len().checked_sub(1).ok_or_else(|| Error::Degree("empty simplex".into()))?;
        let i =
            complex.index_of(simplex).ok_or_else(|| Error::InvalidComplex(format!("{simplex:?} is not a simplex")))?;
        let mut c = Self::zero(complex, k);
        c.values[i] = T::one();
        Ok(c)
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn value_on(&self, simplex: &[usize]) -> T {
        if simplex.len() != self.degree + 1 {
            return T::zero();
        }
        self.complex.index_of(simplex).map_or_else(T::zero, |i| self.values[i].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn coboundary(&self) -> Self {
        let k = self.degree;
        let mut out = vec![T::zero(); self.complex.count(k + 1)];
        for (r, s) in self.complex.simplices(k + 1).iter().enumerate() {
            let mut acc = T::zero();
            let mut face = Vec::with_capacity(s.len() - 1);
            for j in 0..s.len() {
                face.clear();
                face.extend(s.iter().enumerate().filter(|&(t, _)| t != j).map(|(_, &v)| v));
                let v = self.values[self.complex.index_of(&face).expect("closed under faces")].clone();
                acc = if j % 2 == 0 { acc + v } else { acc - v };
            }
            out[r] = acc;
        }
        Cochain { complex: self.complex.clone(), degree: k + 1, values: out }
    }

    pub fn is_cocycle(&self) -> bool {
        self.coboundary().is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        same(&self.complex, &other.complex)?;
        if self.degree != other.degree {
            return Err(Error::Degree(format!("degrees {} and {} differ", self.degree, other.degree)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Cochain { complex: self.complex.clone(), degree: self.degree, values })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(Cochain { complex: self.complex.clone(), degree: self.degree, values })
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| c.clone() * v.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Cochain<U> {
        Cochain { complex: self.complex.clone(), degree: self.degree, values: self.values.iter().map(f).collect() }
    }

    /// `⟨a, z⟩ = Σ a(σ) z(σ)`.
    pub fn evaluate(&self, z: &Chain<T>) -> Result<T> {
        same(&self.complex, &z.complex)?;
        if self.degree != z.degree {
            return Err(Error::Degree(format!("{}-cochain on a {}-chain", self.degree, z.degree)));
        }
        Ok(self.values.iter().zip(&z.values).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    /// Linear combination `Σ cᵢ aᵢ` of cochains of equal degree.
    pub fn combination(complex: &Arc<SimplicialComplex>, degree: usize, terms: &[(T, &Cochain<T>)]) -> Result<Self> {
        let mut acc = Self::zero(complex, degree);
        for (c, a) in terms {
            acc = acc.add(&a.scale(c))?;
        }
        Ok(acc)
    }
}

impl Cochain<BigInt> {
    pub fn to_gf2(&self) -> Cochain<Gf2> {
        self.map(Gf2::from_parity)
    }

    pub fn to_rational(&self) -> Cochain<BigRational> {
        self.map(|v| BigRational::from_integer(v.clone()))
    }

    /// Exact division by `n`; errors if some value is not divisible.
    pub fn divide_exact(&self, n: &BigInt) -> Result<Self> {
        let mut values = Vec::with_capacity(self.values.len());
        for v in &self.values {
            let (q, r) = v.div_rem(n);
            if !r.is_zero() {
                return Err(Error::Input(format!("cochain value {v} is not divisible by {n}")));
            }
            values.push(q);
        }
        Ok(Cochain { complex: self.complex.clone(), degree: self.degree, values })
    }
}

impl Cochain<Gf2> {
    /// The 0/1 integer lift.
    pub fn lift(&self) -> Cochain<BigInt> {
        self.map(|v| BigInt::from(u8::from(v.0)))
    }
}

impl<T: Scalar> Chain<T> {
    pub fn zero(complex: &Arc<SimplicialComplex>, degree: usize) -> Self {
        Chain { complex: complex.clone(), degree, values: vec![T::zero(); complex.count(degree)] }
    }

    pub fn new(complex: &Arc<SimplicialComplex>, degree: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != complex.count(degree) {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} simplices of dimension {degree}",
                values.len(),
                complex.count(degree)
            )));
        }
        Ok(Chain { complex: complex.clone(), degree, values })
    }

    /// A single simplex with coefficient 1.
    pub fn simplex(complex: &Arc<SimplicialComplex>, simplex: &[usize]) -> Result<Self> {
        let c = Cochain::<T>::indicator(complex, simplex)?;
        Ok(Chain { complex: c.complex, degree: c.degree, values: c.values })
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn boundary(&self) -> Self {
        let k = self.degree;
        if k == 0 {
            return Chain { complex: self.complex.clone(), degree: 0, values: Vec::new() };
        }
        let mut out = vec![T::zero(); self.complex.count(k - 1)];
        for (i, s) in self.complex.simplices(k).iter().enumerate() {
            if self.values[i].is_zero() {
                continue;
            }
            for j in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(t, _)| t != j).map(|(_, &v)| v).collect();
                let r = self.complex.index_of(&face).expect("closed under faces");
                let v = self.values[i].clone();
                out[r] = if j % 2 == 0 { out[r].clone() + v } else { out[r].clone() - v };
            }
        }
        Chain { complex: self.complex.clone(), degree: k - 1, values: out }
    }

    pub fn is_cycle(&self) -> bool {
        self.degree == 0 || self.boundary().is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same(&self.complex, &other.complex)?;
        if self.degree != other.degree {
            return Err(Error::Degree("chain degrees differ".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Chain { complex: self.complex.clone(), degree: self.degree, values })
    }

    pub fn scale(&self, c: &T) -> Self {
        Chain {
            complex: self.complex.clone(),
            degree: self.degree,
            values: self.values.iter().map(|v| c.clone() * v.clone()).collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Chain<U> {
        Chain { complex: self.complex.clone(), degree: self.degree, values: self.values.iter().map(f).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coboundary_of_vertex_indicator() {
        let s1 = Arc::new(SimplicialComplex::simplex_boundary(2).unwrap());
        let v0 = IntCochain::indicator(&s1, &[0]).unwrap();
        let d = v0.coboundary();
        // Edges [0,1], [0,2], [1,2]; δ[0] = −[01] − [02].
        assert_eq!(d.values(), &[BigInt::from(-1), BigInt::from(-1), BigInt::from(0)]);
        assert!(d.coboundary().is_zero());
    }

    #[test]
    fn boundary_of_boundary() {
        let s = Arc::new(SimplicialComplex::simplex(3));
        let top = Chain::<BigInt>::simplex(&s, &[0, 1, 2, 3]).unwrap();
        assert!(top.boundary().boundary().is_zero());
        assert!(!top.is_cycle());
    }

    #[test]
    fn mismatched_complexes() {
        let a = Arc::new(SimplicialComplex::simplex(1));
        let b = Arc::new(SimplicialComplex::simplex(1));
        let x = IntCochain::unit(&a);
        let y = IntCochain::unit(&b);
        assert_eq!(x.add(&y), Err(Error::ComplexMismatch));
    }
}
