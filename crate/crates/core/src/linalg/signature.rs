use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::matrix::RatMatrix;
use crate::error::{Error, Result};

/// Sylvester inertia of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Inertia by symmetric Lagrange reduction. When every remaining diagonal
/// entry vanishes but some off-diagonal entry `b` does not, the 2×2 block
/// `[[0,b],[b,0]]` is split off (one positive and one negative square) and
/// its Schur complement is taken.
pub fn signature_of_symmetric(g: &RatMatrix) -> Result<Inertia> {
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut a = g.clone();
    let mut active: Vec<usize> = (0..a.rows()).collect();
    let (mut pos, mut neg) = (0, 0);

    while !active.is_empty() {
        if let Some(&p) = active.iter().find(|&&i| !a[(i, i)].is_zero()) {
            let pivot = a[(p, p)].clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            active.retain(|&i| i != p);
            let col: Vec<(usize, BigRational)> = active.iter().map(|&i| (i, a[(i, p)].clone())).collect();
            for &(i, ref ai) in &col {
                if ai.is_zero() {
                    continue;
                }
                for &(j, ref aj) in &col {
                    if aj.is_zero() {
                        continue;
                    }
                    let v = a[(i, j)].clone() - ai * aj / &pivot;
                    a[(i, j)] = v;
                }
            }
            continue;
        }
        let pair = active
            .iter()
            .enumerate()
            .find_map(|(k, &i)| active[k + 1..].iter().find(|&&j| !a[(i, j)].is_zero()).map(|&j| (i, j)));
        let Some((p, q)) = pair else { break };
        // Block [[0,b],[b,0]] has inverse [[0,1/b],[1/b,0]].
        pos += 1;
        neg += 1;
        let b = a[(p, q)].clone();
        active.retain(|&i| i != p && i != q);
        let cols: Vec<(usize, BigRational, BigRational)> =
            active.iter().map(|&i| (i, a[(i, p)].clone(), a[(i, q)].clone())).collect();
        for (i, xp, xq) in &cols {
            for (j, yp, yq) in &cols {
                // x_Bᵀ B⁻¹ y_B = (x_p y_q + x_q y_p) / b
                let corr = (xp * yq + xq * yp) / &b;
                if !corr.is_zero() {
                    let v = a[(*i, *j)].clone() - corr;
                    a[(*i, *j)] = v;
                }
            }
        }
    }
    let zero = g.rows() - pos - neg;
    Ok(Inertia { positive: pos, negative: neg, zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::e8_gram;
    use crate::linalg::IntMatrix;

    fn rat(rows: &[Vec<i64>]) -> RatMatrix {
        IntMatrix::from_i64_rows(rows).unwrap().to_rational()
    }

    #[test]
    fn small_examples() {
        let i = signature_of_symmetric(&rat(&[vec![1, 0], vec![0, -1]])).unwrap();
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
        let h = signature_of_symmetric(&rat(&[vec![0, 1], vec![1, 0]])).unwrap();
        assert_eq!((h.positive, h.negative, h.zero), (1, 1, 0));
        let d = signature_of_symmetric(&rat(&[vec![1, 1], vec![1, 1]])).unwrap();
        assert_eq!((d.positive, d.negative, d.zero), (1, 0, 1));
        assert!(signature_of_symmetric(&rat(&[vec![1, 2], vec![0, 1]])).is_err());
    }

    /// Characteristic polynomial by Faddeev–LeVerrier; all roots real for a
    /// symmetric matrix, so Descartes' rule of signs counts them exactly.
    fn descartes_inertia(m: &RatMatrix) -> (usize, usize, usize) {
        let n = m.rows();
        let mut coeffs = vec![BigRational::from_integer(1.into())];
        let mut mk = RatMatrix::zeros(n, n);
        let ident = RatMatrix::identity(n);
        for k in 1..=n {
            let mut shifted = mk.clone();
            let c_prev = coeffs[k - 1].clone();
            for i in 0..n {
                let v = shifted[(i, i)].clone() + ident[(i, i)].clone() * c_prev.clone();
                shifted[(i, i)] = v;
            }
            mk = m.mul_mat(&shifted).unwrap();
            let tr: BigRational = (0..n).map(|i| mk[(i, i)].clone()).sum();
            coeffs.push(-tr / BigRational::from_integer((k as i64).into()));
        }
        // coeffs[k] is the coefficient of x^{n-k}.
        let zero_mult = coeffs.iter().rev().take_while(|c| c.is_zero()).count();
        let signs = |cs: &[BigRational]| {
            let nz: Vec<bool> = cs.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
            nz.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let pos = signs(&coeffs);
        let neg_coeffs: Vec<BigRational> =
            coeffs.iter().enumerate().map(|(k, c)| if (n - k) % 2 == 1 { -c.clone() } else { c.clone() }).collect();
        (pos, signs(&neg_coeffs), zero_mult)
    }

    #[test]
    fn e8_against_descartes() {
        let g = e8_gram().to_rational();
        let i = signature_of_symmetric(&g).unwrap();
        assert_eq!(descartes_inertia(&g), (8, 0, 0));
        assert_eq!((i.positive, i.negative, i.zero), (8, 0, 0));
    }

    #[test]
    fn hyperbolic_against_descartes() {
        let g = rat(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -3]]);
        let i = signature_of_symmetric(&g).unwrap();
        assert_eq!(descartes_inertia(&g), (i.positive, i.negative, i.zero));
    }
}
