//! Gaussian elimination over fields (rationals and the two-element field).

use super::matrix::{Field, Matrix};
use crate::error::{Error, Result};

/// Reduced row echelon form with pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

pub fn rref<F: Field>(m: &Matrix<F>) -> Echelon<F> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else { continue };
        a.swap_rows(r, p);
        let inv = a[(r, c)].inv();
        for j in c..cols {
            let v = a[(r, j)].clone() * inv.clone();
            a[(r, j)] = v;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { reduced: a, pivots }
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    rref(m).pivots.len()
}

/// Basis of the null space, one vector per free column.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let e = rref(m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (row, &pc) in e.pivots.iter().enumerate() {
                v[pc] = -e.reduced[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// One solution of `A·x = b`, or `None` if inconsistent.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Result<Option<Vec<F>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch("right-hand side length".into()));
    }
    let aug = a.hstack(&Matrix::from_columns(a.rows(), &[b.to_vec()])?)?;
    let e = rref(&aug);
    if e.pivots.last() == Some(&a.cols()) {
        return Ok(None);
    }
    let mut x = vec![F::zero(); a.cols()];
    for (row, &pc) in e.pivots.iter().enumerate() {
        x[pc] = e.reduced[(row, a.cols())].clone();
    }
    Ok(Some(x))
}

/// `ker / im` for a pair of composable linear maps over a field, with a
/// chosen complement basis for the image inside the kernel.
#[derive(Clone, Debug)]
pub struct FieldSubquotient<F> {
    dim: usize,
    image_basis: Vec<Vec<F>>,
    complement: Vec<Vec<F>>,
    /// `[image | complement]` columns, used for coordinate solves.
    frame: Matrix<F>,
}

impl<F: Field> FieldSubquotient<F> {
    /// `kernel_of`: map out of the space; `image_of`: map into it.
    pub fn new(ambient: usize, kernel_of: &Matrix<F>, image_of: &Matrix<F>) -> Result<Self> {
        if kernel_of.cols() != ambient || image_of.rows() != ambient {
            return Err(Error::DimensionMismatch("subquotient maps".into()));
        }
        let img_e = rref(image_of);
        let image_basis: Vec<Vec<F>> = img_e.pivots.iter().map(|&c| image_of.column(c)).collect();
        let ker = kernel(kernel_of);
        let mut spanning: Vec<Vec<F>> = image_basis.clone();
        let mut current_rank = spanning.len();
        let mut complement = Vec::new();
        for v in ker {
            spanning.push(v.clone());
            let r = rank(&Matrix::from_columns(ambient, &spanning)?);
            if r > current_rank {
                current_rank = r;
                complement.push(v);
            } else {
                spanning.pop();
            }
        }
        let mut cols = image_basis.clone();
        cols.extend(complement.iter().cloned());
        let frame = Matrix::from_columns(ambient, &cols)?;
        Ok(FieldSubquotient { dim: ambient, image_basis, complement, frame })
    }

    pub fn dimension(&self) -> usize {
        self.complement.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.complement
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Coordinates in the complement basis of a kernel element.
    pub fn coordinates(&self, v: &[F]) -> Result<Vec<F>> {
        let x = solve(&self.frame, v)?.ok_or_else(|| Error::Input("vector is not in the kernel".into()))?;
        Ok(x[self.image_basis.len()..].to_vec())
    }

    /// Writes `v - Σ coords·basis` as an image vector: returns the
    /// coefficients on the image basis.
    pub fn image_coordinates(&self, v: &[F]) -> Result<Vec<F>> {
        let x = solve(&self.frame, v)?.ok_or_else(|| Error::Input("vector is not in the kernel".into()))?;
        Ok(x[..self.image_basis.len()].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{Gf2, RatMatrix};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rational_kernel_and_solve() {
        let m = RatMatrix::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]).unwrap();
        assert_eq!(rank(&m), 1);
        let k = kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().iter().all(|x| x == &q(0)));
        }
        assert!(solve(&m, &[q(1), q(3)]).unwrap().is_none());
        let x = solve(&m, &[q(2), q(4)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![q(2), q(4)]);
    }

    #[test]
    fn gf2_subquotient() {
        // Circle as a 3-cycle: H¹ over GF(2) is one-dimensional.
        let d0 = Matrix::from_rows(vec![
            vec![Gf2::ONE, Gf2::ONE, Gf2::ZERO],
            vec![Gf2::ONE, Gf2::ZERO, Gf2::ONE],
            vec![Gf2::ZERO, Gf2::ONE, Gf2::ONE],
        ])
        .unwrap();
        let d1 = Matrix::<Gf2>::zeros(0, 3);
        let h1 = FieldSubquotient::new(3, &d1, &d0).unwrap();
        assert_eq!(h1.dimension(), 1);
        let c = h1.coordinates(&[Gf2::ONE, Gf2::ZERO, Gf2::ZERO]).unwrap();
        assert_eq!(c, vec![Gf2::ONE]);
    }
}
