//! Strict Picard categories `∂: A → B` and pairs `(h₀: A → Q, h₁: B → Q/Z)`
//! with `h₀ ≡ h₁∘∂ mod 1`, up to shifts by `h ∈ Hom(B, Q)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::presented::{check_hom, homology, matrix_from_rows, orders_from_u64, preimage, Orders};
use crate::error::{Error, Result};
use crate::linalg::{solve_integer, GroupDescription, IntMatrix, Lattice, Subquotient};

/// `∂: A → B`, both `⊕ Z/oᵢ`; `π₀ = coker ∂`, `π₁ = ker ∂`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoTermComplex {
    a: Orders,
    b: Orders,
    d: IntMatrix,
    epsilon: Option<IntMatrix>,
}

/// JSON form. `d` has one row per generator of `B`. `epsilon`, the
/// k-invariant `π₀ ⊗ Z/2 → π₁`, is only carried along.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TwoTermSpec {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub d: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Vec<Vec<i64>>>,
}

impl TwoTermComplex {
    pub fn new(a: Orders, b: Orders, d: IntMatrix) -> Result<Self> {
        check_hom(&d, &a, &b, "∂")?;
        Ok(TwoTermComplex { a, b, d, epsilon: None })
    }

    pub fn from_spec(spec: &TwoTermSpec) -> Result<Self> {
        let a = orders_from_u64(&spec.a)?;
        let b = orders_from_u64(&spec.b)?;
        let d = matrix_from_rows(&spec.d, b.len(), a.len(), "d")?;
        let mut t = Self::new(a, b, d)?;
        if let Some(e) = &spec.epsilon {
            let (ncols, nrows) = (e.first().map_or(0, |r| r.len()), e.len());
            t.epsilon = Some(matrix_from_rows(e, nrows, ncols, "epsilon")?);
        }
        Ok(t)
    }

    pub fn to_spec(&self) -> TwoTermSpec {
        let rows = |m: &IntMatrix| -> Vec<Vec<i64>> {
            m.to_rows().iter().map(|r| r.iter().map(|x| i64::try_from(x).unwrap_or(0)).collect()).collect()
        };
        TwoTermSpec {
            a: self.a.iter().map(|x| u64::try_from(x).unwrap_or(0)).collect(),
            b: self.b.iter().map(|x| u64::try_from(x).unwrap_or(0)).collect(),
            d: rows(&self.d),
            epsilon: self.epsilon.as_ref().map(rows),
        }
    }

    pub fn a(&self) -> &[BigInt] {
        &self.a
    }

    pub fn b(&self) -> &[BigInt] {
        &self.b
    }

    pub fn d(&self) -> &IntMatrix {
        &self.d
    }

    pub fn epsilon(&self) -> Option<&IntMatrix> {
        self.epsilon.as_ref()
    }

    /// `π₀ = coker ∂`.
    pub fn cokernel(&self) -> Result<GroupDescription> {
        Ok(homology(&self.b, None, Some(&self.d))?.description())
    }

    /// `π₁ = ker ∂`.
    pub fn kernel(&self) -> Result<Subquotient> {
        homology(&self.a, Some((&self.d, &self.b)), None)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        Self::new(
            [self.a.clone(), other.a.clone()].concat(),
            [self.b.clone(), other.b.clone()].concat(),
            self.d.direct_sum(&other.d),
        )
    }

    fn torsion_b(&self) -> Vec<usize> {
        (0..self.b.len()).filter(|&j| !self.b[j].is_zero()).collect()
    }

    fn free_a(&self) -> Vec<usize> {
        (0..self.a.len()).filter(|&i| self.a[i].is_zero()).collect()
    }
}

/// `h₀` on the generators of `A` (zero on torsion) and `h₁` on those of `B`
/// (representatives in `Q`, read mod 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorPair {
    pub h0: Vec<BigRational>,
    pub h1: Vec<BigRational>,
}

impl FunctorPair {
    /// Checks that both maps are defined and `h₀ ≡ h₁∘∂ mod 1`.
    pub fn validate(&self, t: &TwoTermComplex) -> Result<()> {
        if self.h0.len() != t.a.len() || self.h1.len() != t.b.len() {
            return Err(Error::DimensionMismatch("pair does not match the complex".into()));
        }
        for (i, o) in t.a.iter().enumerate() {
            if !o.is_zero() && !self.h0[i].is_zero() {
                return Err(Error::IllDefinedMap(format!("h0 sends torsion generator {i} to {}", self.h0[i])));
            }
        }
        for (j, o) in t.b.iter().enumerate() {
            if !o.is_zero() && !(&self.h1[j] * BigRational::from_integer(o.clone())).is_integer() {
                return Err(Error::IllDefinedMap(format!("h1 on generator {j} of order {o} is {}", self.h1[j])));
            }
        }
        for i in 0..t.a.len() {
            let v = &self.h0[i] - pull_back(t, &self.h1, i);
            if !v.is_integer() {
                return Err(Error::IllDefinedMap(format!("h0 and h1∘∂ differ by {v} on generator {i}")));
            }
        }
        Ok(())
    }
}

/// `(h₁∘∂)(eᵢ)` as a rational representative.
fn pull_back(t: &TwoTermComplex, h1: &[BigRational], i: usize) -> BigRational {
    (0..t.b.len()).map(|j| &h1[j] * BigRational::from_integer(t.d[(j, i)].clone())).sum()
}

/// The class group of pairs, presented as `Λ / R` inside `Z^{Bₜ} ⊕ Z^{A_f}`.
///
/// A point `(s, m)` stands for `h₁ = sⱼ/bⱼ` on torsion generators of `B`
/// and 0 on free ones, `h₀ = h₁∘∂ + m` on free generators of `A`.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    complex: TwoTermComplex,
    quotient: Subquotient,
}

impl ClassGroup {
    pub fn description(&self) -> GroupDescription {
        self.quotient.description()
    }

    fn to_pair(&self, v: &[BigInt]) -> FunctorPair {
        let t = &self.complex;
        let bt = t.torsion_b();
        let mut h1 = vec![BigRational::zero(); t.b.len()];
        for (k, &j) in bt.iter().enumerate() {
            h1[j] = BigRational::new(v[k].clone(), t.b[j].clone());
        }
        let mut h0 = vec![BigRational::zero(); t.a.len()];
        for (k, &i) in t.free_a().iter().enumerate() {
            h0[i] = pull_back(t, &h1, i) + BigRational::from_integer(v[bt.len() + k].clone());
        }
        FunctorPair { h0, h1 }
    }

    /// Pairs representing the canonical generators.
    pub fn generator_pairs(&self) -> Vec<FunctorPair> {
        self.quotient.generators().iter().map(|v| self.to_pair(v)).collect()
    }

    /// Coordinates of a pair's class along the canonical generators.
    pub fn class_of(&self, p: &FunctorPair) -> Result<Vec<BigInt>> {
        let t = &self.complex;
        p.validate(t)?;
        // Shift by h = −h₁ on the free part of B to make h₁ vanish there.
        let shift: Vec<BigRational> =
            p.h1.iter().zip(&t.b).map(|(y, o)| if o.is_zero() { y.clone() } else { BigRational::zero() }).collect();
        let mut v = Vec::new();
        for &j in &t.torsion_b() {
            v.push((&p.h1[j] * BigRational::from_integer(t.b[j].clone())).to_integer());
        }
        let af = t.free_a();
        let mut padded = v.clone();
        padded.resize(v.len() + af.len(), BigInt::zero());
        let reduced = self.to_pair(&padded);
        for &i in &af {
            let m = &p.h0[i] - pull_back(t, &shift, i) - &reduced.h0[i];
            if !m.is_integer() {
                return Err(Error::IllDefinedMap("pair is not compatible with ∂".into()));
            }
            v.push(m.to_integer());
        }
        self.quotient.coordinates(&v)
    }
}

/// Pairs modulo `(h∘∂, h mod 1)`, `h ∈ Hom(B, Q)`.
pub fn functor_class_group(t: &TwoTermComplex) -> Result<ClassGroup> {
    let bt = t.torsion_b();
    let af = t.free_a();
    let at: Vec<usize> = (0..t.a.len()).filter(|&i| !t.a[i].is_zero()).collect();
    let bf: Vec<usize> = (0..t.b.len()).filter(|&j| t.b[j].is_zero()).collect();
    let dim = bt.len() + af.len();
    let l = bt.iter().fold(BigInt::one(), |acc, &j| acc.lcm(&t.b[j]));
    // Λ: h₁∘∂ must vanish mod 1 on torsion generators of A.
    let mut cons = IntMatrix::zeros(at.len(), dim);
    for (r, &i) in at.iter().enumerate() {
        for (k, &j) in bt.iter().enumerate() {
            cons[(r, k)] = &t.d[(j, i)] * (&l / &t.b[j]);
        }
    }
    let targets = vec![l; at.len()];
    let lambda = preimage(&[(&cons, &targets)], dim)?;
    // R: shifts by h with h mod 1 supported on torsion generators.
    let mut rel = Vec::new();
    for (k, &j) in bt.iter().enumerate() {
        let mut v = vec![BigInt::zero(); dim];
        v[k] = t.b[j].clone();
        for (r, &i) in af.iter().enumerate() {
            v[bt.len() + r] = -t.d[(j, i)].clone();
        }
        rel.push(v);
    }
    for &j in &bf {
        let mut v = vec![BigInt::zero(); dim];
        for (r, &i) in af.iter().enumerate() {
            v[bt.len() + r] = t.d[(j, i)].clone();
        }
        rel.push(v);
    }
    let rel = Lattice::span_vectors(dim, &rel)?;
    Ok(ClassGroup { complex: t.clone(), quotient: Subquotient::new(lambda, &rel)? })
}

/// Whether `(h₀, h₁) = (h∘∂, h mod 1)` for some `h ∈ Hom(B, Q)`.
pub fn pair_is_trivial(t: &TwoTermComplex, p: &FunctorPair) -> Result<bool> {
    p.validate(t)?;
    if t.b.iter().zip(&p.h1).any(|(o, y)| !o.is_zero() && !y.is_integer()) {
        return Ok(false);
    }
    // h = h₁ + n on free generators, n integral: ∂ᵀ n = h₀ − ∂ᵀ h₁.
    let bf: Vec<usize> = (0..t.b.len()).filter(|&j| t.b[j].is_zero()).collect();
    let af = t.free_a();
    let lifted: Vec<BigRational> =
        p.h1.iter().zip(&t.b).map(|(y, o)| if o.is_zero() { y.clone() } else { BigRational::zero() }).collect();
    let mut rhs = Vec::with_capacity(af.len());
    for &i in &af {
        let v = &p.h0[i] - pull_back(t, &lifted, i);
        if !v.is_integer() {
            return Ok(false);
        }
        rhs.push(v.to_integer());
    }
    let dt = t.d.select_rows(&bf).select_columns(&af).transpose();
    Ok(solve_integer(&dt, &rhs)?.is_some())
}

/// The two ends of `Ext(π₀, Z) ↣ G ↠ Hom(π₁, Z)` and the verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AndersonReport {
    pub class_group: GroupDescription,
    pub ext: GroupDescription,
    pub hom: GroupDescription,
    pub restriction_integral: bool,
    pub holds: bool,
}

/// Compares the class group with `Ext(coker ∂, Z) ⊕ Hom(ker ∂, Z)` and checks
/// that every pair restricts to an integral map on `ker ∂`.
pub fn anderson_report(t: &TwoTermComplex) -> Result<AndersonReport> {
    let g = functor_class_group(t)?;
    let ext = GroupDescription::finite(t.cokernel()?.torsion);
    let hom = GroupDescription::free(t.kernel()?.description().free_rank);
    let kernel = t.kernel()?.numerator().clone();
    let mut restriction_integral = true;
    for p in g.generator_pairs() {
        for c in 0..kernel.rank() {
            let k = kernel.basis_vector(c);
            let v: BigRational = p.h0.iter().zip(&k).map(|(x, n)| x * BigRational::from_integer(n.clone())).sum();
            restriction_integral &= v.is_integer();
        }
    }
    let class_group = g.description();
    let holds = restriction_integral && class_group == ext.direct_sum(&hom);
    Ok(AndersonReport { class_group, ext, hom, restriction_integral, holds })
}

pub fn anderson_sequence_check(t: &TwoTermComplex) -> Result<bool> {
    Ok(anderson_report(t)?.holds)
}

/// Random `∂` between groups given by cyclic orders; finite groups have
/// order at most `max_order`, and `free` allows Z summands.
pub fn random_two_term<R: Rng>(rng: &mut R, max_order: u64, free: bool) -> Result<TwoTermComplex> {
    let group = |rng: &mut R| -> Orders {
        let mut out = Vec::new();
        let mut total = 1u64;
        for _ in 0..rng.gen_range(0..=3) {
            if free && rng.gen_bool(0.25) {
                out.push(BigInt::zero());
                continue;
            }
            let o = rng.gen_range(2..=12u64);
            if total * o <= max_order {
                total *= o;
                out.push(BigInt::from(o));
            }
        }
        out
    };
    let a = group(rng);
    let b = group(rng);
    let mut d = IntMatrix::zeros(b.len(), a.len());
    for (j, bo) in b.iter().enumerate() {
        for (i, ao) in a.iter().enumerate() {
            let step = if ao.is_zero() {
                BigInt::one()
            } else if bo.is_zero() {
                continue;
            } else {
                bo / ao.gcd(bo)
            };
            d[(j, i)] = step * BigInt::from(rng.gen_range(-3..=3i64));
        }
    }
    TwoTermComplex::new(a, b, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    fn cx(a: &[u64], b: &[u64], d: &[Vec<i64>]) -> TwoTermComplex {
        TwoTermComplex::from_spec(&TwoTermSpec { a: a.to_vec(), b: b.to_vec(), d: d.to_vec(), epsilon: None }).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn basic_examples() {
        let g = |t: &TwoTermComplex| functor_class_group(t).unwrap().description().to_string();
        assert_eq!(g(&cx(&[0], &[0], &[vec![2]])), "Z/2");
        assert_eq!(g(&cx(&[0], &[0], &[vec![0]])), "Z");
        assert_eq!(g(&cx(&[0], &[0], &[vec![3]])), "Z/3");
        assert_eq!(g(&cx(&[], &[0], &[vec![]])), "0");
        assert_eq!(g(&cx(&[0], &[], &[])), "Z");
        assert_eq!(g(&cx(&[2], &[4], &[vec![2]])), "Z/2");
        assert_eq!(g(&cx(&[], &[6], &[vec![]])), "Z/6");
        for t in [cx(&[0], &[0], &[vec![2]]), cx(&[0], &[0], &[vec![0]]), cx(&[0], &[0], &[vec![3]])] {
            assert!(anderson_sequence_check(&t).unwrap());
        }
    }

    #[test]
    fn triviality_matches_classes() {
        let t = cx(&[0], &[0], &[vec![2]]);
        let g = functor_class_group(&t).unwrap();
        // (h₀, h₁) = (1, 1/2) is the nontrivial class; (1, 0) = (2h, h) with h = 1/2.
        let p = FunctorPair { h0: vec![r(1, 1)], h1: vec![r(0, 1)] };
        assert!(!pair_is_trivial(&t, &p).unwrap());
        assert_eq!(g.class_of(&p).unwrap(), vec![BigInt::one()]);
        let p = FunctorPair { h0: vec![r(1, 1)], h1: vec![r(1, 2)] };
        assert!(pair_is_trivial(&t, &p).unwrap());
        assert!(FunctorPair { h0: vec![r(1, 3)], h1: vec![r(0, 1)] }.validate(&t).is_err());
    }

    #[test]
    fn random_complexes() {
        for trial in 0..40 {
            let mut rng = trial_rng(5, trial);
            let t = random_two_term(&mut rng, 100, trial % 2 == 0).unwrap();
            let rep = anderson_report(&t).unwrap();
            assert!(rep.holds, "trial {trial}: {rep:?}");
            let g = functor_class_group(&t).unwrap();
            for (k, p) in g.generator_pairs().iter().enumerate() {
                p.validate(&t).unwrap();
                let coords = g.class_of(p).unwrap();
                let mut e = vec![BigInt::zero(); coords.len()];
                e[k] = BigInt::one();
                assert_eq!(coords, e);
                assert!(!pair_is_trivial(&t, p).unwrap());
            }
            let u = random_two_term(&mut rng, 100, true).unwrap();
            let sum = functor_class_group(&t.direct_sum(&u).unwrap()).unwrap().description();
            assert_eq!(sum, g.description().direct_sum(&functor_class_group(&u).unwrap().description()));
        }
    }
}
