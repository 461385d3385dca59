//! Smith normal form over the integers.
//!
//! Pivot rule: the entry of smallest nonzero absolute value in the active
//! submatrix, scanning rows first and then columns, so the output is a
//! deterministic function of the input. Unimodular transforms and their
//! inverses are accumulated alongside the elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal with
/// nonnegative entries `d₁ | d₂ | … | d_r`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    rank: usize,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The nonzero diagonal entries, in order.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Diagonal entry `i`, or zero past the rank.
    pub fn divisor(&self, i: usize) -> BigInt {
        if i < self.rank {
            self.d[(i, i)].clone()
        } else {
            BigInt::zero()
        }
    }
}

struct Elimination {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

fn axpy_row(m: &mut IntMatrix, target: usize, c: &BigInt, source: usize) {
    let cols = m.cols();
    let src: Vec<(usize, BigInt)> =
        (0..cols).filter(|&j| !m[(source, j)].is_zero()).map(|j| (j, m[(source, j)].clone())).collect();
    for (j, s) in src {
        let cell = &mut m[(target, j)];
        *cell += c * s;
    }
}

fn axpy_col(m: &mut IntMatrix, target: usize, c: &BigInt, source: usize) {
    let rows = m.rows();
    let src: Vec<(usize, BigInt)> =
        (0..rows).filter(|&i| !m[(i, source)].is_zero()).map(|i| (i, m[(i, source)].clone())).collect();
    for (i, s) in src {
        let cell = &mut m[(i, target)];
        *cell += c * s;
    }
}

impl Elimination {
    // row_target += c * row_source
    fn row_add(&mut self, target: usize, c: &BigInt, source: usize) {
        axpy_row(&mut self.a, target, c, source);
        axpy_row(&mut self.u, target, c, source);
        axpy_col(&mut self.u_inv, source, &-c, target);
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.a.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn row_negate(&mut self, r: usize) {
        for j in 0..self.a.cols() {
            let x = &mut self.a[(r, j)];
            *x = -std::mem::take(x);
        }
        for j in 0..self.u.cols() {
            let x = &mut self.u[(r, j)];
            *x = -std::mem::take(x);
        }
        for i in 0..self.u_inv.rows() {
            let x = &mut self.u_inv[(i, r)];
            *x = -std::mem::take(x);
        }
    }

    // col_target += c * col_source
    fn col_add(&mut self, target: usize, c: &BigInt, source: usize) {
        axpy_col(&mut self.a, target, c, source);
        axpy_col(&mut self.v, target, c, source);
        axpy_row(&mut self.v_inv, source, &-c, target);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.a.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.abs() < self.a[(bi, bj)].abs(),
                };
                if better {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn smallest_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut best_abs = self.a[(t, t)].abs();
        for i in t + 1..self.a.rows() {
            let x = self.a[(i, t)].abs();
            if !x.is_zero() && (best_abs.is_zero() || x < best_abs) {
                best = (i, t);
                best_abs = x;
            }
        }
        for j in t + 1..self.a.cols() {
            let x = self.a[(t, j)].abs();
            if !x.is_zero() && (best_abs.is_zero() || x < best_abs) {
                best = (t, j);
                best_abs = x;
            }
        }
        best
    }

    fn place(&mut self, t: usize, (i, j): (usize, usize)) {
        self.row_swap(t, i);
        self.col_swap(t, j);
    }

    /// Clears row and column `t` and enforces divisibility of the
    /// remaining block by the pivot.
    fn settle_pivot(&mut self, t: usize) {
        let (m, n) = (self.a.rows(), self.a.cols());
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if self.a[(i, t)].is_zero() {
                    continue;
                }
                let q = self.a[(i, t)].div_floor(&self.a[(t, t)]);
                self.row_add(i, &-q, t);
                dirty |= !self.a[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if self.a[(t, j)].is_zero() {
                    continue;
                }
                let q = self.a[(t, j)].div_floor(&self.a[(t, t)]);
                self.col_add(j, &-q, t);
                dirty |= !self.a[(t, j)].is_zero();
            }
            if dirty {
                let pos = self.smallest_in_cross(t);
                self.place(t, pos);
                continue;
            }
            let p = self.a[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !self.a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => self.row_add(t, &BigInt::one(), i),
                None => break,
            }
        }
        if self.a[(t, t)].is_negative() {
            self.row_negate(t);
        }
    }
}

/// Smith normal form with accumulated transforms.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut e = Elimination {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        let Some(pos) = e.smallest_in_block(t) else { break };
        e.place(t, pos);
        e.settle_pivot(t);
        t += 1;
    }
    SmithDecomposition { u: e.u, v: e.v, d: e.a, u_inv: e.u_inv, v_inv: e.v_inv, rank: t }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a);
        let uav = s.u.mul_mat(a).unwrap().mul_mat(&s.v).unwrap();
        assert_eq!(uav, s.d);
        assert_eq!(s.u.mul_mat(&s.u_inv).unwrap(), IntMatrix::identity(a.rows()));
        assert_eq!(s.v.mul_mat(&s.v_inv).unwrap(), IntMatrix::identity(a.cols()));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let divs = s.elementary_divisors();
        for w in divs.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(divs.iter().all(|d| d.is_positive()));
        s
    }

    #[test]
    fn diag_two_three() {
        // Direct multiplication check of U·A·V = D and divisibility.
        let s = check(&IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]).unwrap());
        assert_eq!(s.elementary_divisors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&IntMatrix::identity(4));
        assert_eq!(s.d, IntMatrix::identity(4));
        let z = check(&IntMatrix::zeros(3, 2));
        assert_eq!(z.rank(), 0);
        assert!(z.d.is_zero());
    }

    #[test]
    fn rectangular_and_negative() {
        check(&IntMatrix::from_i64_rows(&[vec![4, -6, 8], vec![10, 0, -14]]).unwrap());
        let s = check(&IntMatrix::from_i64_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap());
        assert_eq!(s.elementary_divisors(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn unimodular_determinants() {
        let s = check(&IntMatrix::from_i64_rows(&[vec![3, 7, 1], vec![5, 2, 8], vec![6, 9, 4]]).unwrap());
        assert!(s.u.determinant().unwrap().abs().is_one());
        assert!(s.v.determinant().unwrap().abs().is_one());
    }
}
