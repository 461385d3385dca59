//! Closed triangulated manifolds: fundamental cycles, Wu classes, integral
//! Wu lifts and the middle-dimensional quadratic refinement.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::cochain::{Chain, Cochain, Gf2Cochain, IntCochain};
use super::cohomology::{IntegralCohomology, Mod2Cohomology, RationalCohomology};
use super::complex::SimplicialComplex;
use super::products::{bockstein, cup, steenrod_square};
use crate::error::{Error, Result};
use crate::lattice::{CharacteristicVector, IntegralLattice};
use crate::linalg::{field_solve, signature_of_symmetric, solve_integer, Gf2, Gf2Matrix, IntMatrix, RatMatrix};

/// `Σ εᵢσᵢ` over the facets with the propagated orientation signs.
pub fn fundamental_cycle(complex: &Arc<SimplicialComplex>) -> Result<Chain<BigInt>> {
    let signs = complex.orientation()?;
    let n = complex.dim();
    Chain::new(complex, n, signs.into_iter().map(BigInt::from).collect())
}

/// Sum of all facets; needs only the pseudo-manifold condition.
pub fn fundamental_cycle_mod2(complex: &Arc<SimplicialComplex>) -> Result<Chain<Gf2>> {
    complex.check_closed_pseudomanifold()?;
    let n = complex.dim();
    Chain::new(complex, n, vec![Gf2::ONE; complex.count(n)])
}

/// A closed pseudo-manifold with its mod-2 fundamental cycle and, when
/// orientable, an integral one.
#[derive(Clone, Debug)]
pub struct Manifold {
    complex: Arc<SimplicialComplex>,
    fundamental: Option<Chain<BigInt>>,
    fundamental_mod2: Chain<Gf2>,
}

impl Manifold {
    /// Orientation is propagated from the first facet and then flipped, in
    /// dimensions divisible by four, so that the signature is nonnegative.
    pub fn new(complex: Arc<SimplicialComplex>) -> Result<Self> {
        let fundamental_mod2 = fundamental_cycle_mod2(&complex)?;
        let fundamental = match fundamental_cycle(&complex) {
            Ok(z) => Some(z),
            Err(Error::NonOrientable) => None,
            Err(e) => return Err(e),
        };
        let mut m = Manifold { complex, fundamental, fundamental_mod2 };
        if m.fundamental.is_some() && m.dim() % 4 == 0 && m.dim() > 0 && m.signature()? < 0 {
            m = m.reversed();
        }
        Ok(m)
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn is_orientable(&self) -> bool {
        self.fundamental.is_some()
    }

    /// Same complex, opposite orientation.
    pub fn reversed(&self) -> Manifold {
        Manifold {
            complex: self.complex.clone(),
            fundamental: self.fundamental.as_ref().map(|z| z.scale(&-BigInt::one())),
            fundamental_mod2: self.fundamental_mod2.clone(),
        }
    }

    pub fn fundamental_cycle(&self) -> Result<&Chain<BigInt>> {
        self.fundamental.as_ref().ok_or(Error::NonOrientable)
    }

    pub fn fundamental_cycle_mod2(&self) -> &Chain<Gf2> {
        &self.fundamental_mod2
    }

    /// `⟨c, [M]⟩`.
    pub fn integrate(&self, c: &IntCochain) -> Result<BigInt> {
        c.evaluate(self.fundamental_cycle()?)
    }

    pub fn integrate_rational(&self, c: &Cochain<BigRational>) -> Result<BigRational> {
        c.evaluate(&self.fundamental_cycle()?.map(|v| BigRational::from_integer(v.clone())))
    }

    pub fn integrate_mod2(&self, c: &Gf2Cochain) -> Result<Gf2> {
        c.evaluate(&self.fundamental_mod2)
    }

    /// Inertia of the rational cup pairing on the middle cohomology; zero
    /// unless the dimension is divisible by four.
    pub fn signature(&self) -> Result<i64> {
        let n = self.dim();
        if n % 4 != 0 || n == 0 {
            return Ok(0);
        }
        let h = RationalCohomology::compute(&self.complex, n / 2)?;
        let gens = h.generators();
        let d = gens.len();
        let mut g = RatMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                g[(i, j)] = self.integrate_rational(&cup(&gens[i], &gens[j])?)?;
            }
        }
        Ok(signature_of_symmetric(&g)?.signature())
    }
}

/// `ν_k` together with its coordinates in the chosen basis of `Hᵏ(M;Z/2)`.
#[derive(Clone, Debug)]
pub struct WuClass {
    pub degree: usize,
    pub representative: Gf2Cochain,
    pub coordinates: Vec<Gf2>,
}

impl WuClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }
}

/// Solves `⟨ν ∪ x, [M]⟩ = ⟨Sqᵏ x, [M]⟩` over a basis of `H^{n−k}(M;Z/2)`.
pub fn wu_class(m: &Manifold, k: usize) -> Result<WuClass> {
    let n = m.dim();
    if k > n {
        return Err(Error::Degree(format!("Wu class in degree {k} of a {n}-manifold")));
    }
    let hk = Mod2Cohomology::compute(m.complex(), k)?;
    let hc = Mod2Cohomology::compute(m.complex(), n - k)?;
    let d = hk.dimension();
    if hc.dimension() != d {
        return Err(Error::PairingDegenerate(k));
    }
    let mut pairing = Gf2Matrix::zeros(d, d);
    let mut rhs = Vec::with_capacity(d);
    for (j, x) in hc.generators().iter().enumerate() {
        for (i, b) in hk.generators().iter().enumerate() {
            pairing[(j, i)] = m.integrate_mod2(&cup(b, x)?)?;
        }
        rhs.push(m.integrate_mod2(&steenrod_square(k, x)?)?);
    }
    if crate::linalg::field_rank(&pairing) != d {
        return Err(Error::PairingDegenerate(k));
    }
    let coords = field_solve(&pairing, &rhs)?.ok_or(Error::PairingDegenerate(k))?;
    let representative = if d == 0 { Cochain::zero(m.complex(), k) } else { hk.representative(&coords)? };
    Ok(WuClass { degree: k, representative, coordinates: coords })
}

/// `ν₀, …, ν_n`.
pub fn wu_classes(m: &Manifold) -> Result<Vec<WuClass>> {
    (0..=m.dim()).map(|k| wu_class(m, k)).collect()
}

/// Integer cocycle `λ = ν̃ + 2y` reducing to `ν` mod 2, where `ν̃` is the
/// 0/1 lift and `δy = −δν̃/2`.
pub fn integral_lift(nu: &Gf2Cochain) -> Result<IntCochain> {
    if !nu.is_cocycle() {
        return Err(Error::NotCocycle);
    }
    let base = nu.lift();
    let half = base.coboundary().divide_exact(&BigInt::from(2))?;
    let target: Vec<BigInt> = half.values().iter().map(|v| -v).collect();
    let delta = nu.complex().integer_coboundary(nu.degree());
    let y = solve_integer(&delta, &target)?.ok_or(Error::Unliftable)?;
    let y = Cochain::new(nu.complex(), nu.degree(), y)?;
    let lambda = base.add(&y.scale(&BigInt::from(2)))?;
    debug_assert!(lambda.is_cocycle());
    Ok(lambda)
}

/// Middle-dimensional data of a closed oriented `4k`-manifold: integral
/// cohomology in degree `2k`, its cup pairing, signature and `ν_{2k}`.
#[derive(Clone, Debug)]
pub struct MiddleForm {
    manifold: Manifold,
    cohomology: IntegralCohomology,
    gram: IntMatrix,
    signature: i64,
    wu: WuClass,
}

impl MiddleForm {
    pub fn new(m: &Manifold) -> Result<Self> {
        let n = m.dim();
        if n % 4 != 0 || n == 0 {
            return Err(Error::Degree(format!("middle form needs dimension 4k, got {n}")));
        }
        m.fundamental_cycle()?;
        let k2 = n / 2;
        let cohomology = IntegralCohomology::compute(m.complex(), k2)?;
        let free = cohomology.free_generators();
        let r = free.len();
        let mut gram = IntMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                gram[(i, j)] = m.integrate(&cup(&free[i], &free[j])?)?;
            }
        }
        let signature = m.signature()?;
        let wu = wu_class(m, k2)?;
        Ok(MiddleForm { manifold: m.clone(), cohomology, gram, signature, wu })
    }

    pub fn manifold(&self) -> &Manifold {
        &self.manifold
    }

    pub fn cohomology(&self) -> &IntegralCohomology {
        &self.cohomology
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn signature(&self) -> i64 {
        self.signature
    }

    pub fn wu(&self) -> &WuClass {
        &self.wu
    }

    /// The lattice `H^{2k}(M;Z)/tor` with the cup pairing.
    pub fn lattice(&self) -> Result<IntegralLattice> {
        IntegralLattice::new(self.gram.clone())
    }

    /// Some integral lift of `ν_{2k}`.
    pub fn wu_lift(&self) -> Result<IntCochain> {
        integral_lift(&self.wu.representative)
    }

    /// `λ` is an integer cocycle whose reduction is cohomologous to `ν_{2k}`.
    pub fn check_lift(&self, lambda: &IntCochain) -> Result<()> {
        if !lambda.is_cocycle() {
            return Err(Error::NotCocycle);
        }
        let h = Mod2Cohomology::compute(self.manifold.complex(), self.wu.degree)?;
        let diff = lambda.to_gf2().sub(&self.wu.representative)?;
        if !h.is_trivial_class(&diff)? {
            return Err(Error::NotCharacteristic("cocycle does not reduce to the Wu class".into()));
        }
        Ok(())
    }

    /// `(⟨λ∪λ,[M]⟩ − σ)/8`.
    pub fn kappa(&self, lambda: &IntCochain) -> Result<BigRational> {
        if !lambda.is_cocycle() {
            return Err(Error::NotCocycle);
        }
        let ll = self.manifold.integrate(&cup(lambda, lambda)?)?;
        Ok(BigRational::new(ll - BigInt::from(self.signature), BigInt::from(8)))
    }

    /// `q^λ(x) = ½(⟨x∪x,[M]⟩ − ⟨x∪λ,[M]⟩)`.
    pub fn q(&self, lambda: &IntCochain, x: &IntCochain) -> Result<BigRational> {
        if !x.is_cocycle() {
            return Err(Error::NotCocycle);
        }
        let xx = self.manifold.integrate(&cup(x, x)?)?;
        let xl = self.manifold.integrate(&cup(x, lambda)?)?;
        Ok(BigRational::new(xx - xl, BigInt::from(2)))
    }

    /// `⟨x∪y,[M]⟩`.
    pub fn pairing(&self, x: &IntCochain, y: &IntCochain) -> Result<BigInt> {
        self.manifold.integrate(&cup(x, y)?)
    }

    /// The lattice avatar of `λ`: its free-part coordinates.
    pub fn characteristic_vector(&self, lambda: &IntCochain) -> Result<CharacteristicVector> {
        let lattice = self.lattice()?;
        CharacteristicVector::new(&lattice, self.cohomology.free_coordinates(lambda)?)
    }
}

pub fn kappa_manifold(m: &Manifold, lambda: &IntCochain) -> Result<BigRational> {
    MiddleForm::new(m)?.kappa(lambda)
}

pub fn q_lambda(m: &Manifold, lambda: &IntCochain, x: &IntCochain) -> Result<BigRational> {
    MiddleForm::new(m)?.q(lambda, x)
}

/// `β(Σ_{n≥1} α^{2ⁿ−1} ∪ ν_{2k−2ⁿ})`, the degree-`2k` shift of an integral
/// Wu structure under a change of spin structure by `α`. `wu[t]` must have
/// degree `t`; `wu[0]` is the unit.
pub fn change_of_spin_shift(alpha: &Gf2Cochain, wu: &[Gf2Cochain], k: usize) -> Result<IntCochain> {
    if alpha.degree() != 1 {
        return Err(Error::Degree("α must be a 1-cochain".into()));
    }
    if !alpha.is_cocycle() {
        return Err(Error::NotCocycle);
    }
    let complex = alpha.complex();
    let top = 2 * k - 1;
    let mut sum = Cochain::zero(complex, top);
    let mut power = 1usize;
    loop {
        let e = (1usize << power) - 1;
        if e > top {
            break;
        }
        let t = top - e;
        let nu = wu.get(t).ok_or_else(|| Error::Degree(format!("missing Wu class in degree {t}")))?;
        if nu.degree() != t {
            return Err(Error::Degree(format!("Wu list entry {t} has degree {}", nu.degree())));
        }
        let mut a = alpha.clone();
        for _ in 1..e {
            a = cup(&a, alpha)?;
        }
        sum = sum.add(&cup(&a, nu)?)?;
        power += 1;
    }
    bockstein(&sum)
}

/// Report-friendly Wu class summary.
#[derive(Clone, Debug, Serialize)]
pub struct WuSummary {
    pub degree: usize,
    pub coordinates: Vec<u8>,
    pub nonzero: bool,
}

impl From<&WuClass> for WuSummary {
    fn from(w: &WuClass) -> Self {
        WuSummary {
            degree: w.degree,
            coordinates: w.coordinates.iter().map(|c| u8::from(c.0)).collect(),
            nonzero: !w.is_zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::topology::builtin::{builtin, builtin_manifold};
    use crate::topology::cohomology::IntegralCohomology;

    #[test]
    fn fundamental_cycles() {
        let s2 = builtin("s2").unwrap();
        let z = fundamental_cycle(&s2).unwrap();
        assert_eq!(z.values(), &[1, -1, 1, -1].map(BigInt::from));
        assert!(z.is_cycle());
        let rp2 = builtin("rp2").unwrap();
        assert_eq!(fundamental_cycle(&rp2).unwrap_err(), Error::NonOrientable);
        let z2 = fundamental_cycle_mod2(&rp2).unwrap();
        assert_eq!(z2.values().len(), 10);
        assert!(z2.is_cycle());
    }

    #[test]
    fn wu_of_projective_plane() {
        let m = builtin_manifold("rp2").unwrap();
        let nu1 = wu_class(&m, 1).unwrap();
        assert_eq!(nu1.coordinates, vec![Gf2::ONE]);
        assert!(wu_class(&m, 2).unwrap().is_zero());
    }

    #[test]
    fn cp2_middle_form() {
        let m = builtin_manifold("cp2").unwrap();
        let mf = MiddleForm::new(&m).unwrap();
        assert_eq!(mf.signature(), 1);
        assert!(!mf.wu().is_zero());
        assert_eq!(mf.gram(), &IntMatrix::from_i64_rows(&[vec![1]]).unwrap());
        let lambda = mf.wu_lift().unwrap();
        mf.check_lift(&lambda).unwrap();
        let h = IntegralCohomology::compute(m.complex(), 2).unwrap();
        let g = &h.generators()[0];
        let c = h.coordinates(&lambda).unwrap()[0].clone();
        assert!(c.bit(0));
        // Normalize to λ ≅ g and λ ≅ 3g by adding 2x.
        let l1 = lambda.add(&g.scale(&(BigInt::one() - &c))).unwrap();
        let l3 = lambda.add(&g.scale(&(BigInt::from(3) - &c))).unwrap();
        assert_eq!(mf.kappa(&l1).unwrap(), rat(0, 1));
        assert_eq!(mf.kappa(&l3).unwrap(), rat(1, 1));
        for n in -3i64..=3 {
            let x = g.scale(&BigInt::from(n));
            assert_eq!(mf.q(&l1, &x).unwrap(), rat((n * n - n) / 2, 1));
        }
    }

    #[test]
    fn sphere_wu_lift_is_zero_class() {
        let m = builtin_manifold("s4").unwrap();
        let mf = MiddleForm::new(&m).unwrap();
        assert!(mf.wu().is_zero());
        let lambda = mf.wu_lift().unwrap();
        assert!(lambda.is_zero());
        assert_eq!(mf.kappa(&lambda).unwrap(), rat(0, 1));
    }

    #[test]
    fn spin_change_on_rp3() {
        let m = builtin_manifold("rp3").unwrap();
        let wu: Vec<Gf2Cochain> = wu_classes(&m).unwrap().into_iter().map(|w| w.representative).collect();
        let h1 = Mod2Cohomology::compute(m.complex(), 1).unwrap();
        let alpha = &h1.generators()[0];
        let shift = change_of_spin_shift(alpha, &wu, 1).unwrap();
        let h2 = IntegralCohomology::compute(m.complex(), 2).unwrap();
        assert_eq!(h2.generator_orders(), vec![BigInt::from(2)]);
        assert_eq!(h2.coordinates(&shift).unwrap(), vec![BigInt::one()]);
        let zero = Cochain::zero(m.complex(), 1);
        assert!(change_of_spin_shift(&zero, &wu, 1).unwrap().is_zero());
    }
}
