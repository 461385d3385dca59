//! Integer linear algebra built on the Smith form: Diophantine solves,
//! kernels, cokernels and subquotients of lattices in `Zⁿ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::group::{FiniteAbelianGroup, GroupDescription};
use super::matrix::IntMatrix;
use super::smith::smith_normal_form;
use crate::error::{Error, Result};

/// Solves `A·x = b` over the integers. Returns `None` when no integer
/// solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!("right-hand side of length {} for {} rows", b.len(), a.rows())));
    }
    let s = smith_normal_form(a);
    let c = s.u.mul_vec(b)?;
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        let d = s.divisor(i);
        if d.is_zero() {
            if !ci.is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = ci.div_rem(&d);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    let x = s.v.mul_vec(&y)?;
    debug_assert_eq!(a.mul_vec(&x)?, b);
    Ok(Some(x))
}

/// Abelian group presented by the rows of `a` as relations on its columns:
/// `Z^cols / rowspace(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel {
    pub torsion: FiniteAbelianGroup,
    pub free_rank: usize,
}

impl Cokernel {
    pub fn description(&self) -> GroupDescription {
        GroupDescription::new(self.free_rank, self.torsion.clone())
    }
}

pub fn cokernel_presentation(a: &IntMatrix) -> Cokernel {
    let s = smith_normal_form(a);
    let factors: Vec<BigInt> = s.elementary_divisors().into_iter().filter(|d| !d.is_one()).collect();
    Cokernel {
        torsion: FiniteAbelianGroup::new(factors).expect("Smith divisors form a chain"),
        free_rank: a.cols() - s.rank(),
    }
}

/// A basis of `ker A ⊂ Z^cols` (as columns) together with integer
/// coordinate rows: `coords · v` recovers the coefficients of any `v` in
/// the kernel.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub basis: IntMatrix,
    pub coords: IntMatrix,
}

pub fn kernel_basis(a: &IntMatrix) -> KernelBasis {
    let s = smith_normal_form(a);
    let idx: Vec<usize> = (s.rank()..a.cols()).collect();
    KernelBasis { basis: s.v.select_columns(&idx), coords: s.v_inv.select_rows(&idx) }
}

/// A sublattice of `Zⁿ` with a basis and an exact coordinate map.
#[derive(Clone, Debug)]
pub struct Lattice {
    ambient: usize,
    /// Columns form a basis.
    basis: IntMatrix,
    /// Coordinates of `v` are `(coord · v)ᵢ / scaleᵢ`.
    coord: IntMatrix,
    scale: Vec<BigInt>,
}

impl Lattice {
    /// Lattice spanned by the columns of `generators`.
    pub fn span(generators: &IntMatrix) -> Self {
        let n = generators.rows();
        let s = smith_normal_form(generators);
        let r = s.rank();
        let mut basis = IntMatrix::zeros(n, r);
        for j in 0..r {
            let d = s.divisor(j);
            for i in 0..n {
                basis[(i, j)] = &s.u_inv[(i, j)] * &d;
            }
        }
        let rows: Vec<usize> = (0..r).collect();
        Lattice { ambient: n, basis, coord: s.u.select_rows(&rows), scale: s.elementary_divisors() }
    }

    /// Lattice spanned by the given vectors of `Zⁿ`.
    pub fn span_vectors(n: usize, vectors: &[Vec<BigInt>]) -> Result<Self> {
        Ok(Self::span(&IntMatrix::from_columns(n, vectors)?))
    }

    /// `ker A` for `A: Zⁿ → Z^m`.
    pub fn kernel(a: &IntMatrix) -> Self {
        let k = kernel_basis(a);
        let r = k.basis.cols();
        Lattice { ambient: a.cols(), basis: k.basis, coord: k.coords, scale: vec![BigInt::one(); r] }
    }

    pub fn full(n: usize) -> Self {
        Lattice {
            ambient: n,
            basis: IntMatrix::identity(n),
            coord: IntMatrix::identity(n),
            scale: vec![BigInt::one(); n],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vector(&self, j: usize) -> Vec<BigInt> {
        self.basis.column(j)
    }

    /// Coefficients of `v` in the basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch("vector outside the ambient lattice".into()));
        }
        let raw = self.coord.mul_vec(v)?;
        let mut c = Vec::with_capacity(raw.len());
        for (x, s) in raw.iter().zip(&self.scale) {
            let (q, r) = x.div_rem(s);
            if !r.is_zero() {
                return Ok(None);
            }
            c.push(q);
        }
        if self.basis.mul_vec(&c)? != v {
            return Ok(None);
        }
        Ok(Some(c))
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// Lattice spanned by the union of the two bases.
    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        Ok(Lattice::span(&self.basis.hstack(&other.basis)?))
    }
}

/// The quotient `numerator / denominator` of nested lattices in `Zⁿ`,
/// presented in canonical generators.
#[derive(Clone, Debug)]
pub struct Subquotient {
    numerator: Lattice,
    p: IntMatrix,
    p_inv: IntMatrix,
    /// Smith divisor per numerator basis direction (0 for free directions).
    divisors: Vec<BigInt>,
}

impl Subquotient {
    /// `denominator` must be contained in `numerator`.
    pub fn new(numerator: Lattice, denominator: &Lattice) -> Result<Self> {
        let r = numerator.rank();
        let mut cols = Vec::with_capacity(denominator.rank());
        for j in 0..denominator.rank() {
            let v = denominator.basis_vector(j);
            let c = numerator
                .coordinates(&v)?
                .ok_or_else(|| Error::Input("denominator is not contained in numerator".into()))?;
            cols.push(c);
        }
        let y = IntMatrix::from_columns(r, &cols)?;
        let s = smith_normal_form(&y);
        let divisors = (0..r).map(|i| s.divisor(i)).collect();
        Ok(Subquotient { numerator, p: s.u, p_inv: s.u_inv, divisors })
    }

    fn visible(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.divisors.len()).filter(|&i| !self.divisors[i].is_one())
    }

    pub fn description(&self) -> GroupDescription {
        let torsion: Vec<BigInt> = self.divisors.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
        let free = self.divisors.iter().filter(|d| d.is_zero()).count();
        GroupDescription::new(free, FiniteAbelianGroup::new(torsion).expect("Smith chain"))
    }

    /// Ambient representatives of the canonical generators, torsion first.
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        self.visible()
            .map(|i| {
                let c = self.p_inv.column(i);
                self.numerator.basis.mul_vec(&c).expect("shape")
            })
            .collect()
    }

    /// Orders of the canonical generators (0 = infinite order).
    pub fn generator_orders(&self) -> Vec<BigInt> {
        self.visible().map(|i| self.divisors[i].clone()).collect()
    }

    /// Coordinates of `v` in the canonical generators, torsion entries
    /// reduced to `[0, n)`. Errors when `v` is not in the numerator.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        let c = self
            .numerator
            .coordinates(v)?
            .ok_or_else(|| Error::Input("element is not in the numerator lattice".into()))?;
        let w = self.p.mul_vec(&c)?;
        Ok(self
            .visible()
            .map(|i| if self.divisors[i].is_zero() { w[i].clone() } else { w[i].mod_floor(&self.divisors[i]) })
            .collect())
    }

    /// True when `v` represents the zero class.
    pub fn is_zero_class(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.coordinates(v)?.iter().all(Zero::is_zero))
    }

    pub fn numerator(&self) -> &Lattice {
        &self.numerator
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn solve_examples() {
        let a = IntMatrix::from_i64_rows(&[vec![2]]).unwrap();
        assert_eq!(solve_integer(&a, &ints(&[4])).unwrap(), Some(ints(&[2])));
        assert_eq!(solve_integer(&a, &ints(&[3])).unwrap(), None);
        let b = IntMatrix::from_i64_rows(&[vec![1, 1], vec![0, 2]]).unwrap();
        let x = solve_integer(&b, &ints(&[1, 2])).unwrap().unwrap();
        assert_eq!(x, ints(&[0, 1]));
        assert!(solve_integer(&b, &ints(&[1])).is_err());
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel_presentation(&IntMatrix::from_i64_rows(&[vec![2]]).unwrap());
        assert_eq!(c.torsion, FiniteAbelianGroup::from_u64(&[2]).unwrap());
        assert_eq!(c.free_rank, 0);
        let c = cokernel_presentation(&IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]).unwrap());
        assert_eq!(c.torsion, FiniteAbelianGroup::from_u64(&[6]).unwrap());
        let c = cokernel_presentation(&IntMatrix::zeros(1, 1));
        assert!(c.torsion.is_trivial());
        assert_eq!(c.free_rank, 1);
    }

    #[test]
    fn kernel_and_subquotient() {
        // ker [1 1 1] in Z³, quotient by the span of (2,-2,0).
        let a = IntMatrix::from_i64_rows(&[vec![1, 1, 1]]).unwrap();
        let k = Lattice::kernel(&a);
        assert_eq!(k.rank(), 2);
        let d = Lattice::span_vectors(3, &[ints(&[2, -2, 0])]).unwrap();
        let q = Subquotient::new(k, &d).unwrap();
        let desc = q.description();
        assert_eq!(desc.free_rank, 1);
        assert_eq!(desc.torsion, FiniteAbelianGroup::from_u64(&[2]).unwrap());
        assert!(q.is_zero_class(&ints(&[2, -2, 0])).unwrap());
        assert!(!q.is_zero_class(&ints(&[1, -1, 0])).unwrap());
        assert!(q.coordinates(&ints(&[1, 0, 0])).is_err());
        for g in q.generators() {
            assert!(a.mul_vec(&g).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn span_coordinates() {
        let l = Lattice::span_vectors(2, &[ints(&[2, 0]), ints(&[0, 3]), ints(&[2, 3])]).unwrap();
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&ints(&[4, -3])).unwrap());
        assert!(!l.contains(&ints(&[1, 0])).unwrap());
    }
}
