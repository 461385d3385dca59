//! Quadratic functions `q: A → Q/Z` on finite abelian groups, their Gauss
//! sums and reduction along isotropic subgroups.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{discriminant_form, CharacteristicVector, IntegralLattice};
use crate::linalg::{frac, FiniteAbelianGroup, IntMatrix, Lattice, RatMatrix, Subquotient};

/// Largest group the Gauss sum will enumerate.
pub const MAX_ENUMERATED_ORDER: u64 = 1 << 22;

const ROOT_TOLERANCE: f64 = 1e-6;

/// `q(x) = xᵀQx mod 1` on `Z/n₁ ⊕ … ⊕ Z/n_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    group: FiniteAbelianGroup,
    coeffs: RatMatrix,
}

impl FiniteQuadraticForm {
    /// Checks that `q(x + nᵢeᵢ) ≡ q(x)` for all `x`, i.e. `nᵢ²Qᵢᵢ ∈ Z` and
    /// `2nᵢQᵢⱼ ∈ Z` for every `j`.
    pub fn new(group: FiniteAbelianGroup, coeffs: RatMatrix) -> Result<Self> {
        let k = group.rank();
        if coeffs.rows() != k || coeffs.cols() != k {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} coefficient matrix for {k} generators",
                coeffs.rows(),
                coeffs.cols()
            )));
        }
        if !coeffs.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        for (i, n) in group.factors().iter().enumerate() {
            let n = BigRational::from_integer(n.clone());
            if !(&n * &n * &coeffs[(i, i)]).is_integer() {
                return Err(Error::IllDefinedForm(format!("n{i}^2 Q[{i}][{i}] is not an integer")));
            }
            for j in 0..k {
                if !(&n * &coeffs[(i, j)] * BigRational::from_integer(2.into())).is_integer() {
                    return Err(Error::IllDefinedForm(format!("2 n{i} Q[{i}][{j}] is not an integer")));
                }
            }
        }
        Ok(FiniteQuadraticForm { group, coeffs })
    }

    /// The form on the trivial group.
    pub fn trivial() -> Self {
        FiniteQuadraticForm { group: FiniteAbelianGroup::trivial(), coeffs: RatMatrix::zeros(0, 0) }
    }

    /// Cyclic `Z/n` with `q(x) = c·x²`.
    pub fn cyclic(n: u64, c: BigRational) -> Result<Self> {
        Self::new(FiniteAbelianGroup::from_u64(&[n])?, RatMatrix::diagonal(&[c]))
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &RatMatrix {
        &self.coeffs
    }

    fn check(&self, x: &[BigInt]) -> Result<Vec<BigRational>> {
        if x.len() != self.group.rank() {
            return Err(Error::DimensionMismatch(format!(
                "element has {} coordinates, group has {} generators",
                x.len(),
                self.group.rank()
            )));
        }
        Ok(x.iter().map(|v| BigRational::from_integer(v.clone())).collect())
    }

    /// `q(x)` in `[0, 1)`.
    pub fn value(&self, x: &[BigInt]) -> Result<BigRational> {
        let xr = self.check(x)?;
        Ok(frac(&self.coeffs.bilinear(&xr, &xr)?))
    }

    /// `B(x,y) = q(x+y) − q(x) − q(y) = 2xᵀQy` in `[0, 1)`.
    pub fn bilinear(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigRational> {
        let xr = self.check(x)?;
        let yr = self.check(y)?;
        Ok(frac(&(self.coeffs.bilinear(&xr, &yr)? * BigRational::from_integer(2.into()))))
    }

    fn enumerate(&self) -> Result<Vec<Vec<BigInt>>> {
        let order = self.group.order();
        if order > BigInt::from(MAX_ENUMERATED_ORDER) {
            return Err(Error::Input(format!("group of order {order} is too large to enumerate")));
        }
        Ok(self.group.elements()?.map(|e| e.into_iter().map(BigInt::from).collect()).collect())
    }

    /// `x ↦ B(x,·)` is injective. Characters are determined by their values
    /// on generators, so it suffices to test those.
    pub fn is_nondegenerate(&self) -> Result<bool> {
        let k = self.group.rank();
        let gens: Vec<Vec<BigInt>> =
            (0..k).map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        for x in self.enumerate()? {
            if x.iter().all(Zero::is_zero) {
                continue;
            }
            let mut pairs_trivially = true;
            for g in &gens {
                if !self.bilinear(&x, g)?.is_zero() {
                    pairs_trivially = false;
                    break;
                }
            }
            if pairs_trivially {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Normalized Gauss sum `|A|^{-1/2} Σ e^{−2πi q(x)}`, snapped to an
    /// eighth root of unity.
    pub fn gauss_sum(&self) -> Result<EighthRootValue> {
        let raw = self.raw_gauss_sum()?;
        EighthRootValue::classify(raw)
    }

    /// The unnormalized-then-normalized complex sum, before classification.
    pub fn raw_gauss_sum(&self) -> Result<Complex64> {
        let order = self.group.order();
        if order > BigInt::from(MAX_ENUMERATED_ORDER) {
            return Err(Error::Input(format!("group of order {order} is too large to enumerate")));
        }
        let size = order.to_f64().expect("bounded order");
        let mut sum = Complex64::new(0.0, 0.0);
        match self.integer_model() {
            Some((m, den)) => {
                for x in self.group.elements()? {
                    let r = quad_mod(&m, den, &x);
                    sum += phase(r, den);
                }
            }
            None => {
                for x in self.enumerate()? {
                    let v = self.value(&x)?;
                    let angle = -2.0 * PI * v.to_f64().unwrap_or(0.0);
                    sum += Complex64::from_polar(1.0, angle);
                }
            }
        }
        Ok(sum / size.sqrt())
    }

    /// `(N·Q mod N, N)` with `N` the common denominator, when small enough
    /// for exact machine arithmetic.
    fn integer_model(&self) -> Option<(Vec<Vec<i128>>, i128)> {
        let k = self.group.rank();
        let mut den = BigInt::one();
        for e in self.coeffs.entries() {
            den = den.lcm(e.denom());
        }
        let n = den.to_i128().filter(|&n| n < (1i128 << 60))?;
        if self.group.factors().iter().any(|f| f > &BigInt::from(1u64 << 22)) {
            return None;
        }
        let mut m = vec![vec![0i128; k]; k];
        for i in 0..k {
            for j in 0..k {
                let e = &self.coeffs[(i, j)];
                let scaled = e.numer() * (&den / e.denom());
                m[i][j] = scaled.mod_floor(&den).to_i128()?;
            }
        }
        Some((m, n))
    }

    /// Restriction to the subgroup generated by `gens`, enumerated.
    fn span_closure(&self, gens: &[Vec<BigInt>]) -> HashSet<Vec<BigInt>> {
        let zero = vec![BigInt::zero(); self.group.rank()];
        let mut seen: HashSet<Vec<BigInt>> = HashSet::from([zero.clone()]);
        let mut frontier = vec![zero];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.group.add(&x, g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen
    }

    /// The induced form on `A₀^⊥ / A₀` for an isotropic subgroup `A₀`.
    pub fn isotropic_reduce(&self, generators: &[Vec<BigInt>]) -> Result<FiniteQuadraticForm> {
        let k = self.group.rank();
        for g in generators {
            self.check(g)?;
        }
        let gens: Vec<Vec<BigInt>> = generators.iter().map(|g| self.group.reduce(g)).collect();
        let sub = self.span_closure(&gens);
        for a in &sub {
            let v = self.value(a)?;
            if !v.is_zero() {
                return Err(Error::NotIsotropic(format!("q({}) = {v}", fmt_element(a))));
            }
        }
        // Orthogonal complement, with a greedy generating set.
        let mut perp_gens: Vec<Vec<BigInt>> = Vec::new();
        let mut perp_span = self.span_closure(&[]);
        for x in self.enumerate()? {
            if perp_span.contains(&x) {
                continue;
            }
            let mut orthogonal = true;
            for g in &gens {
                if !self.bilinear(&x, g)?.is_zero() {
                    orthogonal = false;
                    break;
                }
            }
            if orthogonal {
                perp_gens.push(x);
                perp_span = self.span_closure(&perp_gens);
            }
        }
        // Pass to lattices in Z^k containing the relation lattice.
        let relations: Vec<Vec<BigInt>> = self
            .group
            .factors()
            .iter()
            .enumerate()
            .map(|(i, n)| (0..k).map(|j| if i == j { n.clone() } else { BigInt::zero() }).collect())
            .collect();
        let mut num_gens = perp_gens.clone();
        num_gens.extend(relations.iter().cloned());
        let mut den_gens = gens.clone();
        den_gens.extend(relations.iter().cloned());
        let numerator = Lattice::span_vectors(k, &num_gens)?;
        let denominator = Lattice::span_vectors(k, &den_gens)?;
        let quotient = Subquotient::new(numerator, &denominator)?;
        let desc = quotient.description();
        debug_assert_eq!(desc.free_rank, 0);
        let new_gens = quotient.generators();
        let t = IntMatrix::from_columns(k, &new_gens)?.to_rational();
        let coeffs = t.transpose().mul_mat(&self.coeffs)?.mul_mat(&t)?;
        FiniteQuadraticForm::new(desc.torsion, coeffs)
    }

    /// Parses the `{"orders": [...], "coeffs": [["a/b", ...], ...]}` format.
    pub fn from_json(spec: &FiniteFormSpec) -> Result<Self> {
        let orders: Vec<BigInt> = spec.orders.iter().map(|&n| BigInt::from(n)).collect();
        let group = FiniteAbelianGroup::new(orders)?;
        let rows = spec
            .coeffs
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let coeffs = if rows.is_empty() { RatMatrix::zeros(0, 0) } else { RatMatrix::from_rows(rows)? };
        Self::new(group, coeffs)
    }

    pub fn to_json(&self) -> FiniteFormSpec {
        FiniteFormSpec {
            orders: self.group.factors().iter().map(|n| n.to_u64().unwrap_or(0)).collect(),
            coeffs: self.coeffs.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        }
    }
}

/// Wire format of a finite quadratic form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteFormSpec {
    pub orders: Vec<u64>,
    pub coeffs: Vec<Vec<String>>,
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if let Ok(n) = BigInt::from_str(t) {
        return Ok(BigRational::from_integer(n));
    }
    BigRational::from_str(t).map_err(|_| Error::Input(format!("cannot parse rational {s:?}")))
}

fn fmt_element(x: &[BigInt]) -> String {
    let parts: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

fn quad_mod(m: &[Vec<i128>], den: i128, x: &[i64]) -> i128 {
    let mut acc: i128 = 0;
    for i in 0..x.len() {
        if x[i] == 0 {
            continue;
        }
        let xi = x[i] as i128;
        acc = (acc + m[i][i] * (xi * xi % den)) % den;
        for j in 0..i {
            if x[j] != 0 {
                acc = (acc + 2 * m[i][j] % den * (xi * x[j] as i128 % den)) % den;
            }
        }
    }
    acc.rem_euclid(den)
}

fn phase(r: i128, den: i128) -> Complex64 {
    let angle = -2.0 * PI * (r as f64) / (den as f64);
    Complex64::from_polar(1.0, angle)
}

/// A value `e^{2πik/8}` recovered from a floating-point sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EighthRootValue {
    pub k: u8,
    /// Distance from the computed sum to `e^{2πik/8}`.
    pub residual: f64,
    pub re: f64,
    pub im: f64,
}

impl EighthRootValue {
    pub fn classify(z: Complex64) -> Result<Self> {
        let modulus = z.norm();
        if (modulus - 1.0).abs() > ROOT_TOLERANCE {
            return Err(Error::DegenerateForm { modulus });
        }
        let turns = z.arg() / (2.0 * PI) * 8.0;
        let k = (turns.round() as i64).rem_euclid(8) as u8;
        let root = Complex64::from_polar(1.0, 2.0 * PI * f64::from(k) / 8.0);
        let residual = (z - root).norm();
        if residual > ROOT_TOLERANCE {
            return Err(Error::Unclassifiable { residual });
        }
        Ok(EighthRootValue { k, residual, re: z.re, im: z.im })
    }

    /// `k/8 ∈ Q/Z`.
    pub fn kappa(&self) -> BigRational {
        BigRational::new(BigInt::from(self.k), BigInt::from(8))
    }
}

/// Outcome of comparing the Gauss sum of the discriminant form with the
/// lattice side `B(λ,λ) − σ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MilgramVerdict {
    pub gauss: EighthRootValue,
    pub lattice_residue: u8,
    pub holds: bool,
}

pub fn milgram_check(lattice: &IntegralLattice, lambda: &CharacteristicVector) -> Result<MilgramVerdict> {
    let disc = discriminant_form(lattice, lambda)?;
    let gauss = disc.form.gauss_sum()?;
    let ll = lattice.pairing(lambda.coords(), lambda.coords())?;
    let r = (ll - BigInt::from(lattice.signature())).mod_floor(&BigInt::from(8));
    let lattice_residue = r.to_u8().expect("residue in [0,8)");
    Ok(MilgramVerdict { gauss, lattice_residue, holds: gauss.k == lattice_residue })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::characteristic_vector;
    use crate::linalg::rat;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn bilinear_examples() {
        let z2 = FiniteQuadraticForm::cyclic(2, rat(1, 4)).unwrap();
        assert_eq!(z2.bilinear(&ints(&[1]), &ints(&[1])).unwrap(), rat(1, 2));
        assert_eq!(z2.bilinear(&ints(&[0]), &ints(&[1])).unwrap(), rat(0, 1));
        let z3 = FiniteQuadraticForm::cyclic(3, rat(2, 3)).unwrap();
        assert_eq!(z3.bilinear(&ints(&[1]), &ints(&[1])).unwrap(), rat(1, 3));
    }

    #[test]
    fn bilinear_is_polarization() {
        let z3 = FiniteQuadraticForm::cyclic(3, rat(2, 3)).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let lhs = z3.bilinear(&ints(&[a]), &ints(&[b])).unwrap();
                let q = |v: i64| z3.value(&ints(&[v])).unwrap();
                assert_eq!(lhs, frac(&(q(a + b) - q(a) - q(b))));
            }
        }
    }

    #[test]
    fn nondegeneracy_examples() {
        assert!(FiniteQuadraticForm::trivial().is_nondegenerate().unwrap());
        assert!(FiniteQuadraticForm::cyclic(2, rat(1, 4)).unwrap().is_nondegenerate().unwrap());
        assert!(!FiniteQuadraticForm::cyclic(2, rat(1, 2)).unwrap().is_nondegenerate().unwrap());
    }

    #[test]
    fn well_definedness() {
        assert!(matches!(FiniteQuadraticForm::cyclic(2, rat(1, 8)), Err(Error::IllDefinedForm(_))));
        assert!(FiniteQuadraticForm::cyclic(4, rat(3, 8)).is_ok());
        assert!(FiniteQuadraticForm::cyclic(4, rat(1, 8)).is_ok());
    }

    #[test]
    fn gauss_examples() {
        assert_eq!(FiniteQuadraticForm::trivial().gauss_sum().unwrap().k, 0);
        assert_eq!(FiniteQuadraticForm::cyclic(2, rat(1, 4)).unwrap().gauss_sum().unwrap().k, 7);
        assert_eq!(FiniteQuadraticForm::cyclic(3, rat(2, 3)).unwrap().gauss_sum().unwrap().k, 2);
        let degenerate = FiniteQuadraticForm::cyclic(2, rat(1, 2)).unwrap().gauss_sum();
        assert!(matches!(degenerate, Err(Error::DegenerateForm { .. })));
    }

    #[test]
    fn integer_model_matches_exact_values() {
        let g = FiniteAbelianGroup::from_u64(&[2, 12]).unwrap();
        let q = RatMatrix::from_rows(vec![vec![rat(1, 4), rat(1, 4)], vec![rat(1, 4), rat(5, 24)]]).unwrap();
        let f = FiniteQuadraticForm::new(g, q).unwrap();
        let (m, den) = f.integer_model().unwrap();
        for x in f.group().elements().unwrap() {
            let exact = f.value(&x.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>()).unwrap();
            assert_eq!(rat(quad_mod(&m, den, &x) as i64, den as i64), exact);
        }
    }

    #[test]
    fn milgram_examples() {
        let two = IntegralLattice::diagonal(&[2]).unwrap();
        let v = milgram_check(&two, &characteristic_vector(&two)).unwrap();
        assert_eq!((v.gauss.k, v.lattice_residue, v.holds), (7, 7, true));
        let three = IntegralLattice::diagonal(&[3]).unwrap();
        let v = milgram_check(&three, &CharacteristicVector::from_i64(&three, &[1]).unwrap()).unwrap();
        assert_eq!((v.gauss.k, v.lattice_residue, v.holds), (2, 2, true));
        let e8 = IntegralLattice::e8();
        let v = milgram_check(&e8, &characteristic_vector(&e8)).unwrap();
        assert_eq!((v.gauss.k, v.lattice_residue, v.holds), (0, 0, true));
    }

    #[test]
    fn isotropic_examples() {
        let z2 = FiniteQuadraticForm::cyclic(2, rat(1, 4)).unwrap();
        assert_eq!(z2.isotropic_reduce(&[]).unwrap(), z2);

        let z4 = FiniteQuadraticForm::cyclic(4, rat(3, 8)).unwrap();
        assert!(matches!(z4.isotropic_reduce(&[ints(&[2])]), Err(Error::NotIsotropic(_))));

        let g = FiniteAbelianGroup::from_u64(&[2, 2]).unwrap();
        let q = RatMatrix::from_rows(vec![vec![rat(0, 1), rat(1, 4)], vec![rat(1, 4), rat(0, 1)]]).unwrap();
        let f = FiniteQuadraticForm::new(g, q).unwrap();
        assert_eq!(f.value(&ints(&[1, 1])).unwrap(), rat(1, 2));
        let r = f.isotropic_reduce(&[ints(&[1, 0])]).unwrap();
        assert!(r.group().is_trivial());
        assert_eq!(f.gauss_sum().unwrap().k, 0);
        assert_eq!(r.gauss_sum().unwrap().k, 0);
    }

    #[test]
    fn isotropic_reduction_keeps_gauss_sum() {
        // Z/16 with q(x) = x²/32; A₀ = ⟨8⟩ has q(8) = 2 ≡ 0.
        let f = FiniteQuadraticForm::cyclic(16, rat(1, 32)).unwrap();
        let r = f.isotropic_reduce(&[ints(&[8])]).unwrap();
        assert_eq!(r.group(), &FiniteAbelianGroup::from_u64(&[4]).unwrap());
        assert_eq!(r.gauss_sum().unwrap().k, f.gauss_sum().unwrap().k);
    }
}
