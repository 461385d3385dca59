//! Cup products, Steenrod's cup-i products, squares and the Bockstein.

use std::sync::Arc;

use num_bigint::BigInt;

use super::cochain::{Cochain, Gf2Cochain, IntCochain};
use crate::error::{Error, Result};
use crate::linalg::{Gf2, Scalar};

/// Alexander–Whitney cup product: `(a∪b)[v₀…v_{p+q}] = a[v₀…v_p]·b[v_p…v_{p+q}]`.
pub fn cup<T: Scalar>(a: &Cochain<T>, b: &Cochain<T>) -> Result<Cochain<T>> {
    if !Arc::ptr_eq(a.complex(), b.complex()) {
        return Err(Error::ComplexMismatch);
    }
    let k = a.complex();
    let (p, q) = (a.degree(), b.degree());
    let n = p + q;
    let values = k
        .simplices(n)
        .iter()
        .map(|s| {
            let x = a.value_on(&s[..=p]);
            if x.is_zero() {
                return T::zero();
            }
            x * b.value_on(&s[p..])
        })
        .collect();
    Cochain::new(k, n, values)
}

/// `a ∪ᵢ b` over GF(2). On an `n`-simplex, `n = p + q − i`, the cut points
/// `0 ≤ j₀ < … < jᵢ ≤ n` split `[0,n]` into intervals `I₀ = [0,j₀]`,
/// `I₁ = [j₀,j₁]`, …, `I_{i+1} = [jᵢ,n]`; `a` sees the even intervals and
/// `b` the odd ones.
pub fn cup_i(a: &Gf2Cochain, b: &Gf2Cochain, i: usize) -> Result<Gf2Cochain> {
    if !Arc::ptr_eq(a.complex(), b.complex()) {
        return Err(Error::ComplexMismatch);
    }
    let (p, q) = (a.degree(), b.degree());
    if i > p + q {
        return Err(Error::Degree(format!("cup-{i} of degrees {p} and {q}")));
    }
    let n = p + q - i;
    let k = a.complex();
    if n > k.dim() {
        return Ok(Cochain::zero(k, n));
    }
    let cuts = cut_patterns(n, i, p, q);
    let values = k
        .simplices(n)
        .iter()
        .map(|s| {
            let mut acc = Gf2::ZERO;
            let mut front = Vec::with_capacity(p + 1);
            let mut back = Vec::with_capacity(q + 1);
            for (f, bk) in &cuts {
                front.clear();
                back.clear();
                front.extend(f.iter().map(|&t| s[t]));
                back.extend(bk.iter().map(|&t| s[t]));
                acc = acc + a.value_on(&front) * b.value_on(&back);
            }
            acc
        })
        .collect();
    Cochain::new(k, n, values)
}

/// Front/back position lists for every admissible cut sequence.
fn cut_patterns(n: usize, i: usize, p: usize, q: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let mut cuts = Vec::with_capacity(i + 1);
    fn rec(
        start: usize,
        n: usize,
        need: usize,
        cuts: &mut Vec<usize>,
        p: usize,
        q: usize,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        if need == 0 {
            let mut bounds = vec![0];
            bounds.extend(cuts.iter().copied());
            bounds.push(n);
            let (mut front, mut back) = (Vec::new(), Vec::new());
            for (m, w) in bounds.windows(2).enumerate() {
                let side = if m % 2 == 0 { &mut front } else { &mut back };
                side.extend(w[0]..=w[1]);
            }
            if front.len() == p + 1 && back.len() == q + 1 {
                out.push((front, back));
            }
            return;
        }
        for j in start..=n {
            cuts.push(j);
            rec(j + 1, n, need - 1, cuts, p, q, out);
            cuts.pop();
        }
    }
    rec(0, n, i + 1, &mut cuts, p, q, &mut out);
    out
}

/// `Sqᵏ(a) = a ∪_{n−k} a` for `a` of degree `n`; zero when `k > n`.
pub fn steenrod_square(k: usize, a: &Gf2Cochain) -> Result<Gf2Cochain> {
    let n = a.degree();
    if !a.is_cocycle() {
        return Err(Error::NotCocycle);
    }
    if k > n {
        return Ok(Cochain::zero(a.complex(), n + k));
    }
    cup_i(a, a, n - k)
}

/// Integral Bockstein `β(a) = δã / 2` for the 0/1 lift `ã`.
pub fn bockstein(a: &Gf2Cochain) -> Result<IntCochain> {
    if !a.is_cocycle() {
        return Err(Error::NotCocycle);
    }
    a.lift().coboundary().divide_exact(&BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_cochain, trial_rng};
    use crate::topology::builtin::builtin;

    #[test]
    fn unit_is_neutral() {
        let m = builtin("rp2").unwrap();
        let mut rng = trial_rng(1, 0);
        let b: IntCochain = random_cochain(&mut rng, &m, 1, 3);
        let u = IntCochain::unit(&m);
        assert_eq!(cup(&u, &b).unwrap(), b);
        assert_eq!(cup(&b, &u).unwrap(), b);
    }

    #[test]
    fn leibniz_rule() {
        let m = builtin("t2").unwrap();
        let mut rng = trial_rng(2, 0);
        for _ in 0..20 {
            let a: IntCochain = random_cochain(&mut rng, &m, 1, 4);
            let b: IntCochain = random_cochain(&mut rng, &m, 0, 4);
            let lhs = cup(&a, &b).unwrap().coboundary();
            let rhs = cup(&a.coboundary(), &b).unwrap().sub(&cup(&a, &b.coboundary()).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cup_i_coboundary_formula() {
        let m = builtin("cp2").unwrap();
        let mut rng = trial_rng(3, 0);
        for i in 0..3 {
            for (p, q) in [(1, 1), (2, 1), (2, 2), (1, 2)] {
                let a: Gf2Cochain = random_cochain(&mut rng, &m, p, 2);
                let b: Gf2Cochain = random_cochain(&mut rng, &m, q, 2);
                let lhs = cup_i(&a, &b, i).unwrap().coboundary();
                let mut rhs =
                    cup_i(&a.coboundary(), &b, i).unwrap().add(&cup_i(&a, &b.coboundary(), i).unwrap()).unwrap();
                if i > 0 {
                    rhs = rhs.add(&cup_i(&a, &b, i - 1).unwrap()).unwrap().add(&cup_i(&b, &a, i - 1).unwrap()).unwrap();
                }
                assert_eq!(lhs, rhs, "i={i} p={p} q={q}");
            }
        }
    }

    #[test]
    fn cup_zero_agrees_with_cup() {
        let m = builtin("rp2").unwrap();
        let mut rng = trial_rng(4, 0);
        let a: Gf2Cochain = random_cochain(&mut rng, &m, 1, 2);
        let b: Gf2Cochain = random_cochain(&mut rng, &m, 1, 2);
        assert_eq!(cup_i(&a, &b, 0).unwrap(), cup(&a, &b).unwrap());
        assert!(cup_i(&a, &b, 3).is_err());
    }
}
