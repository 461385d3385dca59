//! Randomized property suites, one per verified identity, behind a
//! name-indexed registry. Every trial draws from its own seeded stream.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::differential::{group_description, random_allowed, stokes_holds, witness_suite, DifferentialGroup};
use crate::error::{Error, Result};
use crate::finite_form::milgram_check;
use crate::homotopy::{
    anderson_report, dold_kan_isomorphism, functor_class_group, gamma, homotopy_groups, random_chain_complex,
    random_two_term, unnormalized_homology, TwoTermComplex,
};
use crate::lattice::{
    characteristic_vector, discriminant_form, kappa_4k_lattice, van_der_blij_check, CharacteristicVector,
    IntegralLattice,
};
use crate::linalg::{FiniteAbelianGroup, GroupDescription, IntMatrix, Lattice, Subquotient};
use crate::rng::{random_cochain, random_symmetric, random_unimodular, trial_rng};
use crate::series::{
    change_of_spin_identity, delta_g_integral, mod4_square_check, spin_wu, spin_wu_inverse_bundle, spin_wu_series,
    FormalSeries, PontryaginPolynomial,
};
use crate::topology::{
    bockstein, builtin, builtin_manifold, builtin_names, cup_i, interval_integral, prism, restrict_end,
    steenrod_square, wu_class, Gf2Cochain, IntCochain, IntegralCohomology, IntegralHomology, MiddleForm,
    Mod2Cohomology, ProductComplex, SimplicialComplex,
};

/// Trial counts and bounds shared by the suites.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub milgram_trials: usize,
    pub max_rank: usize,
    pub unimodular_trials: usize,
    /// Trials for the cochain identity suites.
    pub identity_trials: usize,
    /// Random complexes for the Dold–Kan and Picard suites.
    pub random_complexes: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            milgram_trials: 200,
            max_rank: 6,
            unimodular_trials: 100,
            identity_trials: 1000,
            random_complexes: 50,
        }
    }
}

/// Result of one suite. `metrics` holds exact values as strings.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub trials: u64,
    pub checks: u64,
    pub metrics: BTreeMap<String, String>,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome { name: name.to_string(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn equal<T: PartialEq + std::fmt::Display>(&mut self, what: &str, got: T, want: T) {
        self.check(got == want, || format!("{what}: got {got}, expected {want}"));
    }

    /// Runs one trial body, turning an error into a failure line.
    fn trial(&mut self, label: impl FnOnce() -> String, body: impl FnOnce(&mut Self) -> Result<()>) {
        self.trials += 1;
        if let Err(e) = body(self) {
            let l = label();
            self.check(false, || format!("{l}: {e}"));
        }
    }

    fn metric(&mut self, key: &str, value: impl ToString) {
        self.metrics.insert(key.to_string(), value.to_string());
    }
}

pub trait SelfTest: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn run(&self, cfg: &SuiteConfig) -> SuiteOutcome;
}

/// Name-indexed list of suites, kept in registration order.
pub struct SuiteRegistry {
    suites: Vec<Box<dyn SelfTest>>,
}

impl SuiteRegistry {
    pub fn empty() -> Self {
        SuiteRegistry { suites: Vec::new() }
    }

    pub fn register<S: SelfTest + 'static>(&mut self, suite: S) {
        self.suites.push(Box::new(suite));
    }

    pub fn get(&self, name: &str) -> Result<&dyn SelfTest> {
        self.suites
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::Input(format!("unknown suite {name:?}; known: {}", self.names().join(", "))))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.suites.iter().map(|s| s.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn SelfTest> {
        self.suites.iter().map(|s| s.as_ref())
    }
}

impl Default for SuiteRegistry {
    fn default() -> Self {
        let mut r = SuiteRegistry::empty();
        r.register(Milgram);
        r.register(Golden);
        r.register(Unimodular);
        r.register(Cp2);
        r.register(Refinement);
        r.register(Steenrod);
        r.register(Stokes);
        r.register(Differential);
        r.register(Series);
        r.register(DoldKan);
        r.register(Picard);
        r
    }
}

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(int(n), int(d))
}

/// Nondegenerate symmetric matrix of rank `1..=max_rank`, entries bounded
/// by 8 and `0 < |det| ≤ 10⁴` so the discriminant group stays enumerable.
pub fn random_lattice<R: Rng>(rng: &mut R, max_rank: usize) -> IntegralLattice {
    loop {
        let rank = rng.gen_range(1..=max_rank.max(1));
        let bound = rng.gen_range(1..=8);
        let g = random_symmetric(rng, rank, bound);
        let det = g.determinant().expect("square");
        if !det.is_zero() && det.abs() <= int(10_000) {
            return IntegralLattice::new(g).expect("nondegenerate");
        }
    }
}

/// `⊕⟨±1⟩` in a random basis.
pub fn random_unimodular_lattice<R: Rng>(rng: &mut R, max_rank: usize) -> Result<IntegralLattice> {
    let rank = rng.gen_range(1..=max_rank.max(1));
    let signs: Vec<i64> = (0..rank).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let p = random_unimodular(rng, rank, 3 * rank);
    IntegralLattice::diagonal(&signs)?.change_basis(&p)
}

struct Milgram;

impl SelfTest for Milgram {
    fn name(&self) -> &'static str {
        "milgram"
    }

    fn description(&self) -> &'static str {
        "Gauss sum of the discriminant form is e^{2πi(B(λ,λ)−σ)/8} on random lattices"
    }

    fn run(&self, cfg: &SuiteConfig) -> SuiteOutcome {
        let mut out = SuiteOutcome::new(self.name());
        let mut worst = 0f64;
        let mut largest = BigInt::one();
        for t in 0..cfg.milgram_trials {
            out.trial(
                || format!("trial {t}"),
                |out| {
                    let mut rng = trial_rng(cfg.seed, t as u64);
                    let l = random_lattice(&mut rng, cfg.max_rank);
                    let lambda = characteristic_vector(&l);
                    let v = milgram_check(&l, &lambda)?;
                    worst = worst.max(v.gauss.residual);
                    largest = largest.clone().max(l.determinant().abs());
                    out.check(v.gauss.residual < 1e-6, || format!("trial {t}: residual {:e}", v.gauss.residual));
                    out.check(v.holds, || {
                        format!("trial {t}: gauss k = {}, lattice residue {}", v.gauss.k, v.lattice_residue)
                    });
                    Ok(())
                },
            );
        }
        out.metric("max_residual_below_1e-9", worst < 1e-9);
        out.metric("largest_discriminant", largest);
        out
    }
}

struct Golden;

impl SelfTest for Golden {
    fn name(&self) -> &'static str {
        "golden"
    }

    fn description(&self) -> &'static str {
        "fixed values for <2>, <3> with λ = 1, and E8"
    }

    fn run(&self, _cfg: &SuiteConfig) -> SuiteOutcome {
        let mut out = SuiteOutcome::new(self.name());
        out.trial(
            || "<2>".into(),
            |out| {
                let l = IntegralLattice::diagonal(&[2])?;
                let lambda = characteristic_vector(&l);
                let d = discriminant_form(&l, &lambda)?;
                out.equal("<2> group", d.group().to_string(), "Z/2".into());
                out.equal("<2> q(gen)", d.form.value(&[int(1)])?, rat(1, 4));
                out.equal("<2> k", milgram_check(&l, &lambda)?.gauss.k, 7);
                Ok(())
            },
        );
        out.trial(
            || "<3>".into(),
            |out| {
                let l = IntegralLattice::diagonal(&[3])?;
                let lambda = CharacteristicVector::from_i64(&l, &[1])?;
                let d = discriminant_form(&l, &lambda)?;
                out.equal("<3> group", d.group().to_string(), "Z/3".into());
                out.equal("<3> q(gen)", d.form.value(&[int(1)])?, rat(2, 3));
                out.equal("<3> k", milgram_check(&l, &lambda)?.gauss.k, 2);
                Ok(())
            },
        );
        out.trial(
            || "E8".into(),
            |out| {
                let l = IntegralLattice::e8();
                let lambda = characteristic_vector(&l);
                out.check(discriminant_form(&l, &lambda)?.group().is_trivial(), || "E8 discriminant".into());
                out.equal("E8 signature", l.signature(), 8);
                out.equal("E8 kappa", kappa_4k_lattice(&l, &lambda)?, rat(-1, 1));
                out.equal("E8 k", milgram_check(&l, &lambda)?.gauss.k, 0);
                Ok(())
            },
        );
        out
    }
}

struct Unimodular;

impl SelfTest for Unimodular {
    fn name(&self) -> &'static str {
        "unimodular"
    }

    fn description(&self) -> &'static str {
        "κ = (B(λ,λ)−σ)/8 is an integer on random unimodular lattices"
    }

    fn run(&self, cfg: &SuiteConfig) -> SuiteOutcome {
        let mut out = SuiteOutcome::new(self.name());
        for t in 0..cfg.unimodular_trials {
            out.trial(
                || format!("trial {t}"),
                |out| {
                    let mut rng = trial_rng(cfg.seed ^ 0x5555, t as u64);
                    let l = random_unimodular_lattice(&mut rng, cfg.max_rank)?;
                    out.check(l.is_unimodular(), || format!("trial {t}: det {}", l.determinant()));
                    // Any characteristic vector, not only the canonical one.
                    let base = characteristic_vector(&l);
                    let w: Vec<BigInt> = (0..l.rank()).map(|_| int(rng.gen_range(-3..=3))).collect();
                    for lambda in [base.clone(), base.shifted(&w)?] {
                        let k = kappa_4k_lattice(&l, &lambda)?;
                        out.check(k.is_integer(), || format!("trial {t}: κ = {k}"));
                        out.check(van_der_blij_check(&l, &lambda)?.residue == 0, || format!("trial {t}: residue"));
                    }
                    Ok(())
                },
            );
        }
        out
    }
}

/// `λ ≅ c·g` for the generator `g` of `H²(CP²)`, from any lift.
fn cp2_lifts(mf: &MiddleForm) -> Result<(IntCochain, IntCochain)> {
    let lambda = mf.wu_lift()?;
    let g = mf.cohomology().free_generators()[0].clone();
    let c = mf.cohomology().free_coordinates(&lambda)?[0].clone();
    let l1 = lambda.add(&g.scale(&(BigInt::one() - &c)))?;
    let l3 = lambda.add(&g.scale(&(int(3) - &c)))?;
    Ok((l1, l3))
}

struct Cp2;

impl SelfTest for Cp2 {
    fn name(&self) -> &'static str {
        "cp2"
    }

    fn description(&self) -> &'static str {
        "signature, Wu class, integral Wu lift and κ on the 9-vertex CP²"
    }

    fn run(&self, _cfg: &SuiteConfig) -> SuiteOutcome {
        let mut out = SuiteOutcome::new(self.name());
        out.trial(
            || "cp2".into(),
            |out| {
                let m = builtin_manifold("cp2")?;
                let mf = MiddleForm::new(&m)?;
                out.equal("signature", mf.signature(), 1);
                out.check(!mf.wu().is_zero(), || "ν₂ vanishes".into());
                let lambda = mf.wu_lift()?;
                mf.check_lift(&lambda)?;
                let (l1, l3) = cp2_lifts(&mf)?;
                let lattice = mf.lattice()?;
                for (name, l, want) in [("g", &l1, 0), ("3g", &l3, 1)] {
                    mf.check_lift(l)?;
                    let k = mf.kappa(l)?;
                    out.equal(&format!("κ(λ≅{name})"), k.clone(), rat(want, 1));
                    let avatar = kappa_4k_lattice(&lattice, &mf.characteristic_vector(l)?)?;
                    out.equal(&format!("lattice κ(λ≅{name})"), avatar, k.clone());
                    out.metric(&format!("kappa_{name}"), k);
                }
                out.metric("signature", mf.signature());
                Ok(())
            },
        );
        out
    }
}

/// Random cocycle in degree `k`: integral generator combination plus a
/// coboundary.
fn random_cocycle<R: Rng>(rng: &mut R, h: &IntegralCohomology, complex: &Arc<SimplicialComplex>) -> Result<IntCochain> {
    let k = h.degree();
    let coords: Vec<BigInt> = h.generators().iter().map(|_| int(rng.gen_range(-4..=4))).collect();
    let mut x = h.representative(&coords)?;
    if k > 0 {
        let b: IntCochain = random_cochain(rng, complex, k - 1, 2);
        x = x.add(&b.coboundary())?;
    }
    Ok(x)
}

struct Refinement;

impl SelfTest for Refinement {
    fn name(&self) -> &'static str {
        "refinement"
    }

    fn description(&self) -> &'static str {
        "q^λ is an integral quadratic refinement of the cup pairing on CP² and S²×S²"
    }

    fn run(&self, cfg: &SuiteConfig) -> SuiteOutcome {
        let mut out = SuiteOutcome::new(self.name());
        for name in ["cp2", "s2xs2"] {
            let setup = (|| -> Result<_> {
                let m = builtin_manifold(name)?;
                let mf = MiddleForm::new(&m)?;
                let lambda = mf.wu_lift()?;
                let kappa = mf.kappa(&lambda)?;
                Ok((mf, lambda, kappa))
            })();
            let (mf, lambda, kappa) = match setup {
                Ok(s) => s,
                Err(e) => {
                    out.check(false, || format!("{name}: {e}"));
                    continue;
                }
            };
            let complex = mf.manifold().complex().clone();
            let lattice = match mf.lattice() {
                Ok(l) => l,
                Err(e) => {
                    out.check(false, || format!("{name}: {e}"));
                    continue;
                }
            };
            out.metric(&format!("{name}_kappa"), &kappa);
            // Q(x) = κ(λ) + ½⟨x∪x − x∪λ⟩, so Q(0) = Q(λ) = κ(λ).
            let big_q = |x: &IntCochain| -> Result<BigRational> { Ok(&kappa + mf.q(&lambda, x)?) };
            for t in 0..cfg.identity_trials {
                out.trial(
                    || format!("{name} trial {t}"),
                    |out| {
                        let mut rng = trial_rng(cfg.seed ^ 0x7a7a, t as u64);
                        let x = random_cocycle(&mut rng, mf.cohomology(), &complex)?;
                        let y = random_cocycle(&mut rng, mf.cohomology(), &complex)?;
                        let qx = mf.q(&lambda, &x)?;
                        out.check(qx.is_integer(), || format!("{name} trial {t}: q = {qx}"));
                        let zero = IntCochain::zero(&complex, x.degree());
                        let defect = big_q(&x.add(&y)?)? - big_q(&x)? - big_q(&y)? + big_q(&zero)?;
                        let pairing = BigRational::from_integer(mf.pairing(&x, &y)?);
                        out.check(defect == pairing, || format!("{name} trial {t}: defect {defect} ≠ {pairing}"));
                        // Right-hand side through the lattice avatar.
                        let v = mf.cohomology().free_coordinates(&x)?;
                        let l = mf.cohomology().free_coordinates(&lambda)?;
                        let vv = lattice.pairing(&v, &v)?;
                        let vl = lattice.pairing(&v, &l)?;
                        let lhs = big_q(&x)? * rat(2, 1);
                        let rhs = &kappa * rat(2, 1) + BigRational::from_integer(vv - vl);
                        out.check(lhs == rhs, || format!("{name} trial {t}: 2q = {lhs}, formula {rhs}"));
                        let sym = big_q(&lambda.sub(&x)?)?;
                        out.check(sym == big_q(&x)?, || format!("{name} trial {t}: q(λ−x) ≠ q(x)"));
                        Ok(())
                    },
                );
            }
        }
        out
    }
}

const STEENROD_COMPLEXES: [&str; 5] = ["rp2", "t2", "rp3", "cp2", "s2xs2"];

struct Steenrod;

impl SelfTest for Steenrod {
    fn name(&self) -> &'static str {
        "steenrod"
    }

    fn description(&self) -> &'static str {
        "cup-i coboundary formula, Sq¹ = reduced Bockstein, Wu classes, β∘β = 0"
    }

    fn run(&self, cfg: &SuiteConfig) -> SuiteOutcome {
        let mut out = SuiteOutcome::new(self.name());
        for name in STEENROD_COMPLEXES {
            let complex = match builtin(name) {
                Ok(c) => c,
                Err(e) => {
                    out.check(false, || format!("{name}: {e}"));
                    continue;
                }
            };
            let n = complex.dim();
            for t in 0..cfg.identity_trials {
                out.trial(
                    || format!("{name} cup-i trial {t}"),
                    |out| {
                        let mut rng = trial_rng(cfg.seed ^ 0x1111, t as u64);
                        let p = rng.gen_range(0..=n);
                        let q = rng.gen_range(0..=n);
                        // Keep δ(a ∪ᵢ b) inside the complex.
                        let i = rng.gen_range((p + q + 1).saturating_sub(n)..=p + q);
                        let a: Gf2Cochain = random_cochain(&mut rng, &complex, p, 1);
                        let b: Gf2Cochain = random_cochain(&mut rng, &complex, q, 1);
                        let lhs = cup_i(&a, &b, i)?.coboundary();
                        let mut rhs = cup_i(&a.coboundary(), &b, i)?.add(&cup_i(&a, &b.coboundary(), i)?)?;
                        if i > 0 {
                            rhs = rhs.add(&cup_i(&a, &b, i - 1)?)?.add(&cup_i(&b, &a, i - 1)?)?;
                        }
                        out.check(lhs == rhs, || format!("{name} trial {t}: δ(a ∪{i} b), |a| = {p}, |b| = {q}"));
                        Ok(())
                    },
                );
            }
            for k in 0..n {
                out.trial(
                    || format!("{name} Sq¹ in degree {k}"),
                    |out| {
                        let h2 = Mod2Cohomology::compute(&complex, k)?;
                        let next2 = Mod2Cohomology::compute(&complex, k + 1)?;
                        let mut rng = trial_rng(cfg.seed ^ 0x2222, k as u64);
                        for g in 0..h2.dimension() + 2 {
                            let mut a = if g < h2.dimension() {
                                h2.generators()[g].clone()
                            } else {
                                let coords: Vec<_> = (0..h2.dimension()).map(|_| random_bit(&mut rng)).collect();
                                h2.representative(&coords)?
                            };
                            if k > 0 {
                                let b: Gf2Cochain = random_cochain(&mut rng, &complex, k - 1, 1);
                                a = a.add(&b.coboundary())?;
                            }
                            let sq = steenrod_square(1, &a)?;
                            let beta = bockstein(&a)?;
                            let diff = sq.sub(&beta.to_gf2())?;
                            out.check(next2.is_trivial_class(&diff)?, || format!("{name}: Sq¹ ≠ ρβ in degree {k}"));
                            if k + 2 <= n {
                                let bb = bockstein(&beta.to_gf2())?;
                                let h = IntegralCohomology::compute(&complex, k + 2)?;
                                out.check(h.is_trivial_class(&bb)?, || format!("{name}: β(ρβa) ≠ 0 in degree {k}"));
                            }
                        }
                        Ok(())
                    },
                );
            }
        }
        out.trial(
            || "ν₁(RP²)".into(),
            |out| {
                let m = builtin_manifold("rp2")?;
                let nu = wu_class(&m, 1)?;
                out.check(nu.coordinates.len() == 1 && !nu.is_zero(), || "ν₁(RP²) is not the generator".into());
                Ok(())
            },
        );
        for name in builtin_names() {
            out.trial(
                || format!("{name} Wu vanishing"),
                |out| {
                    let m = builtin_manifold(name)?;
                    let n = m.dim();
                    for k in (n / 2 + 1)..=n {
                        out.check(wu_class(&m, k)?.is_zero(), || format!("{name}: ν{k} ≠ 0"));
                    }
                    Ok(())
                },
            );
        }
        out
    }
}

fn random_bit<R: Rng>(rng: &mut R) -> crate::linalg::Gf2 {
    crate::linalg::Gf2(rng.gen_bool(0.5))
}

const PRISM_BASES: [&str; 4] = ["s1", "s2", "rp2", "t2"];

struct Stokes;

impl SelfTest for Stokes {
    fn name(&self) -> &'static str {
        "stokes"
    }

    fn description(&self) -> &'static str {
        "δ∫s = ∫δs − (−1)^{|s|}(s|₁ − s|₀) for ordinary and differential cochains on prisms"
    }

    fn run(&self, cfg: &SuiteConfig) -> SuiteOutcome {
        let mut out = SuiteOutcome::new(self.name());
        let prisms: Vec<(&str, ProductComplex)> =
            PRISM_BASES.iter().filter_map(|&n| builtin(n).and_then(|c| prism(&c)).ok().map(|p| (n, p))).collect();
        out.check(prisms.len() == PRISM_BASES.len(), || "could not build every prism".into());
        if prisms.is_empty() {
            return out;
        }
        for t in 0..cfg.identity_trials {
            out.trial(
                || format!("trial {t}"),
                |out| {
                    let mut rng = trial_rng(cfg.seed ^ 0x3333, t as u64);
                    let (name, p) = &prisms[t % prisms.len()];
                    let top = p.complex().dim();
                    let k = rng.gen_range(1..=top);
                    if t % 2 == 0 {
                        let s: IntCochain = random_cochain(&mut rng, p.complex(), k, 5);
                        let lhs = interval_integral(p, &s)?.coboundary();
                        let ends = restrict_end(p, &s, 1)?.sub(&restrict_end(p, &s, 0)?)?;
                        let sign = if k % 2 == 0 { int(-1) } else { int(1) };
                        let rhs = interval_integral(p, &s.coboundary())?.add(&ends.scale(&sign))?;
                        out.check(lhs == rhs, || format!("{name} trial {t}: ordinary, degree {k}"));
                    } else {
                        let q = rng.gen_range(1..=top);
                        let x = random_allowed(&mut rng, p.complex(), q, k)?;
                        out.check(stokes_holds(p, &x)?, || format!("{name} trial {t}: differential, q = {q}, k = {k}"));
                    }
                    Ok(())
                },
            );
        }
        out
    }
}

/// `Hᵏ(Z)` from the coboundary matrices directly.
fn cohomology_by_lattices(complex: &Arc<SimplicialComplex>, k: usize) -> Result<GroupDescription> {
    let dk = complex.integer_coboundary(k);
    let cycles = Lattice::kernel(&dk);
    let bounds = if k == 0 {
        Lattice::span(&IntMatrix::zeros(complex.count(0), 0))
    } else {
        Lattice::span(&complex.integer_coboundary(k - 1))
    };
    Ok(Subquotient::new(cycles, &bounds)?.description())
}

/// `H^{k−1}(Q/Z) ≅ Hom(H_{k−1}, Q/Z)`: divisible rank and torsion both
/// read off `H_{k−1}`.
fn flat_by_homology(complex: &Arc<SimplicialComplex>, k: usize) -> Result<(usize, FiniteAbelianGroup)> {
    if k == 0 {
        return Ok((0, FiniteAbelianGroup::trivial()));
    }
    let h = IntegralHomology::compute(complex, k - 1)?.description();
    Ok((h.free_rank, h.torsion))
}

struct Differential;

impl SelfTest for Differential {
    fn name(&self) -> &'static str {
        "differential"
    }

    fn description(&self) -> &'static str {
        "d² = 0, group descriptions against independent computations, exact-sequence witnesses"
    }

    fn run(&self, cfg: &SuiteConfig) -> SuiteOutcome {
        let mut out = SuiteOutcome::new(self.name());
        for name in ["t2", "rp2"] {
            let complex = match builtin(name) {
                Ok(c) => c,
                Err(e) => {
                    out.check(false, || format!("{name}: {e}"));
                    continue;
                }
            };
            let n = complex.dim();
            let trials = (cfg.identity_trials / 10).max(1);
            for t in 0..trials {
                out.trial(
                    || format!("{name} d² trial {t}"),
                    |out| {
                        let mut rng = trial_rng(cfg.seed ^ 0x4444, t as u64);
                        let q = rng.gen_range(0..=n + 1);
                        let k = rng.gen_range(0..n);
                        let x = random_allowed(&mut rng, &complex, q, k)?;
                        let dd = x.d()?.d()?;
                        out.check(
                            dd.is_closed()?
                                && dd.c().is_zero()
                                && dd.omega().is_zero()
                                && dd.h().is_none_or(|h| h.is_zero()),
                            || format!("{name} trial {t}: d² ≠ 0 at q = {q}, k = {k}"),
                        );
                        Ok(())
                    },
                );
            }
            for q in 0..=n + 1 {
                for k in 0..=n + 1 {
                    if k == q {
                        continue;
                    }
                    out.trial(
                        || format!("{name} group ({q},{k})"),
                        |out| {
                            let got = group_description(&complex, q, k)?;
                            let want = if k > q {
                                let h = if k > n {
                                    GroupDescription::default()
                                } else {
                                    cohomology_by_lattices(&complex, k)?
                                };
                                DifferentialGroup::Integral(h)
                            } else {
                                let (divisible_rank, torsion) = flat_by_homology(&complex, k)?;
                                DifferentialGroup::Flat { divisible_rank, torsion }
                            };
                            out.check(got == want, || format!("{name} ({q},{k}): {got:?} vs {want:?}"));
                            Ok(())
                        },
                    );
                }
            }
            for (q, k) in [(1, 1), (2, 2), (1, 2), (2, 1)] {
                out.trial(
                    || format!("{name} witnesses ({q},{k})"),
                    |out| {
                        let rep = witness_suite(&complex, q, k, 10, cfg.seed)?;
                        for f in &rep.failures {
                            out.check(false, || format!("{name} ({q},{k}): {f}"));
                        }
                        out.check(true, String::new);
                        let key = format!("{name}_{q}_{k}_witnesses");
                        let total = rep.curvature_surjective
                            + rep.flat_round_trips
                            + rep.characteristic_surjective
                            + rep.kernel_trivializations
                            + rep.iso_witnesses;
                        out.metric(&key, total);
                        Ok(())
                    },
                );
            }
        }
        out
    }
}

struct Series;

impl SelfTest for Series {
    fn name(&self) -> &'static str {
        "series"
    }

    fn description(&self) -> &'static str {
        "spin Wu series g, integrality of δg, mod-4 square check, Pontryagin tables, change of spin"
    }

    fn run(&self, _cfg: &SuiteConfig) -> SuiteOutcome {
        let mut out = SuiteOutcome::new(self.name());
        out.trial(
            || "g".into(),
            |out| {
                let g = spin_wu_series(6)?;
                let want = FormalSeries::new(
                    6,
                    &[rat(1, 1), rat(0, 1), rat(-1, 2), rat(0, 1), rat(-9, 8), rat(0, 1), rat(-17, 16)],
                );
                out.equal("g through x⁶", g.to_string(), want.to_string());
                Ok(())
            },
        );
        out.trial(
            || "δg".into(),
            |out| {
                out.check(delta_g_integral(20)?, || "δg has a non-integral coefficient through order 20".into());
                Ok(())
            },
        );
        out.trial(
            || "mod 4".into(),
            |out| {
                for d in 0..=12 {
                    out.check(mod4_square_check(d)?, || format!("mod-4 square check fails at order {d}"));
                }
                Ok(())
            },
        );
        let tables: [(&str, usize, bool, Vec<(&[u32], i64, i64)>); 6] = [
            ("ν4", 1, false, vec![(&[1], -1, 2)]),
            ("ν8", 2, false, vec![(&[0, 1], 20, 8), (&[2], -9, 8)]),
            ("ν12", 3, false, vec![(&[0, 0, 1], -80, 16), (&[1, 1], 60, 16), (&[3], -17, 16)]),
            ("ν4(−T)", 1, true, vec![(&[1], 1, 2)]),
            ("ν8(−T)", 2, true, vec![(&[0, 1], -20, 8), (&[2], 11, 8)]),
            ("ν12(−T)", 3, true, vec![(&[0, 0, 1], 80, 16), (&[1, 1], -100, 16), (&[3], 37, 16)]),
        ];
        for (name, k, inverse, terms) in tables {
            out.trial(
                || name.to_string(),
                |out| {
                    let got = if inverse { spin_wu_inverse_bundle(k)? } else { spin_wu(k)? };
                    let want = PontryaginPolynomial::from_terms(&terms);
                    out.equal(name, got.to_string(), want.to_string());
                    out.metric(name, got);
                    Ok(())
                },
            );
        }
        out.trial(
            || "change of spin".into(),
            |out| {
                out.check(change_of_spin_identity(8)?, || "change-of-spin rule fails".into());
                Ok(())
            },
        );
        out
    }
}

struct DoldKan;

impl SelfTest for DoldKan {
    fn name(&self) -> &'static str {
        "doldkan"
    }

    fn description(&self) -> &'static str {
        "N(Γ(C)) ≅ C with a constructed isomorphism, and π*(Γ(C)) = H*(C)"
    }

    fn run(&self, cfg: &SuiteConfig) -> SuiteOutcome {
        let mut out = SuiteOutcome::new(self.name());
        for t in 0..cfg.random_complexes {
            out.trial(
                || format!("trial {t}"),
                |out| {
                    let mut rng = trial_rng(cfg.seed ^ 0x6666, t as u64);
                    let c = random_chain_complex(&mut rng, 3, 3)?;
                    dold_kan_isomorphism(&c)?;
                    let g = gamma(&c, None)?;
                    let pi = homotopy_groups(g.group())?;
                    for (n, p) in pi.iter().enumerate().take(c.top() + 1) {
                        out.equal(&format!("trial {t} π{n}"), p.clone(), c.homology(n)?);
                    }
                    out.check(unnormalized_homology(g.group())? == pi, || {
                        format!("trial {t}: Moore and unnormalized homology differ")
                    });
                    Ok(())
                },
            );
        }
        out
    }
}

struct Picard;

impl SelfTest for Picard {
    fn name(&self) -> &'static str {
        "picard"
    }

    fn description(&self) -> &'static str {
        "classes of functor pairs against Ext(π₀, Z) ⊕ Hom(π₁, Z)"
    }

    fn run(&self, cfg: &SuiteConfig) -> SuiteOutcome {
        let mut out = SuiteOutcome::new(self.name());
        for (m, want) in [(2, "Z/2"), (0, "Z"), (3, "Z/3")] {
            out.trial(
                || format!("Z --{m}--> Z"),
                |out| {
                    let t = TwoTermComplex::new(vec![int(0)], vec![int(0)], IntMatrix::from_i64_rows(&[vec![m]])?)?;
                    let g = functor_class_group(&t)?.description();
                    out.equal(&format!("Z --{m}--> Z"), g.to_string(), want.to_string());
                    out.check(anderson_report(&t)?.holds, || format!("Z --{m}--> Z: sequence check"));
                    Ok(())
                },
            );
        }
        for t in 0..cfg.random_complexes {
            out.trial(
                || format!("trial {t}"),
                |out| {
                    let mut rng = trial_rng(cfg.seed ^ 0x8888, t as u64);
                    let a = random_two_term(&mut rng, 100, false)?;
                    let rep = anderson_report(&a)?;
                    out.check(rep.holds, || {
                        format!("trial {t}: class group {} vs Ext {} and Hom {}", rep.class_group, rep.ext, rep.hom)
                    });
                    let b = random_two_term(&mut rng, 100, false)?;
                    let sum = functor_class_group(&a.direct_sum(&b)?)?.description();
                    let parts = rep.class_group.direct_sum(&functor_class_group(&b)?.description());
                    out.check(sum == parts, || format!("trial {t}: not additive"));
                    Ok(())
                },
            );
        }
        out
    }
}

/// Runs the named suites (all when empty) in registration order.
pub fn run_suites(registry: &SuiteRegistry, names: &[String], cfg: &SuiteConfig) -> Result<Vec<SuiteOutcome>> {
    if names.is_empty() {
        return Ok(registry.iter().map(|s| s.run(cfg)).collect());
    }
    names.iter().map(|n| Ok(registry.get(n)?.run(cfg))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteConfig {
        SuiteConfig {
            seed: 3,
            milgram_trials: 10,
            max_rank: 4,
            unimodular_trials: 10,
            identity_trials: 20,
            random_complexes: 5,
        }
    }

    #[test]
    fn every_suite_passes_quickly() {
        let reg = SuiteRegistry::default();
        assert_eq!(reg.names().len(), 11);
        for s in reg.iter() {
            let o = s.run(&quick());
            assert!(o.passed(), "{}: {:?}", s.name(), o.failures);
            assert!(o.checks > 0, "{}", s.name());
        }
    }

    #[test]
    fn outcomes_are_deterministic() {
        let reg = SuiteRegistry::default();
        let a = serde_json::to_string(&reg.get("milgram").unwrap().run(&quick())).unwrap();
        let b = serde_json::to_string(&reg.get("milgram").unwrap().run(&quick())).unwrap();
        assert_eq!(a, b);
        assert!(reg.get("nope").is_err());
    }

    #[test]
    fn random_lattices_respect_bounds() {
        for t in 0..20 {
            let mut rng = trial_rng(9, t);
            let l = random_lattice(&mut rng, 6);
            assert!(l.rank() <= 6 && !l.determinant().is_zero());
            assert!(l.gram().entries().iter().all(|e| e.abs() <= int(8)));
            assert!(random_unimodular_lattice(&mut rng, 5).unwrap().is_unimodular());
        }
    }
}
