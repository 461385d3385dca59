use std::path::PathBuf;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use quadra::differential::{group_description, witness_suite, DifferentialGroup};
use quadra::finite_form::{milgram_check, FiniteFormSpec, FiniteQuadraticForm};
use quadra::homotopy::{
    anderson_report, dold_kan_isomorphism, functor_class_group, gamma, homotopy_groups, normalize,
    unnormalized_homology, ChainComplexSpec, ChainComplexZ, SimplicialAbelianGroup, SimplicialGroupSpec,
    TwoTermComplex, TwoTermSpec,
};
use quadra::lattice::{
    builtin_lattice, characteristic_vector, discriminant_form, kappa_4k_lattice, van_der_blij_check,
    CharacteristicVector, IntegralLattice, LatticeSpec,
};
use quadra::linalg::GroupDescription;
use quadra::selftest::{run_suites, SuiteConfig, SuiteRegistry};
use quadra::series::{
    change_of_spin_identity, delta_g_integral, l_polynomial, mod4_square_check, spin_wu, spin_wu_inverse_bundle,
    spin_wu_series,
};
use quadra::topology::{
    betti_numbers, builtin, steenrod_square, wu_classes, ComplexSpec, IntCochain, IntegralCohomology, Manifold,
    MiddleForm, Mod2Cohomology, SimplicialComplex,
};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::report::{load_json, matrix, residual_bound, s, strings, CmdResult, InputError, InputInfo, Outcome};

fn group(g: &GroupDescription) -> Value {
    json!({
        "group": g.to_string(),
        "free_rank": g.free_rank,
        "torsion": strings(g.torsion.factors()),
    })
}

// ---- lattice ----

pub struct LatticeArgs {
    pub path: Option<PathBuf>,
    pub builtin: Option<String>,
    pub lambda: Option<String>,
}

fn parse_lambda(text: &str, lattice: &IntegralLattice) -> CmdResult<CharacteristicVector> {
    if text.trim() == "auto" {
        return Ok(characteristic_vector(lattice));
    }
    let coords = text
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| InputError(format!("--lambda entry {t:?}: {e}"))))
        .collect::<CmdResult<Vec<i64>>>()?;
    Ok(CharacteristicVector::from_i64(lattice, &coords)?)
}

pub fn lattice(args: &LatticeArgs) -> CmdResult<Outcome> {
    let (lattice, lambda, input) = match (&args.path, &args.builtin) {
        (Some(p), _) => {
            let (spec, info): (LatticeSpec, _) = load_json(p)?;
            let l = spec.lattice()?;
            let lambda = spec.characteristic(&l)?;
            (l, lambda, info)
        }
        (None, Some(name)) => {
            let l = builtin_lattice(name)?;
            let lambda = characteristic_vector(&l);
            (l, lambda, InputInfo::builtin("lattice", name))
        }
        (None, None) => return Err(InputError("give a lattice file or --builtin NAME".into())),
    };
    let lambda = match &args.lambda {
        Some(t) => parse_lambda(t, &lattice)?,
        None => lambda,
    };
    let mut out = Outcome::new(Some(input));
    let inertia = lattice.inertia();
    out.put("rank", lattice.rank());
    out.put("gram", matrix(lattice.gram()));
    out.put_str("determinant", lattice.determinant());
    out.put("signature", lattice.signature());
    out.put("inertia", json!({"positive": inertia.positive, "negative": inertia.negative, "zero": inertia.zero}));
    out.put("unimodular", lattice.is_unimodular());
    out.put("even", lattice.is_even());
    out.put("lambda", strings(lambda.coords()));
    out.put_str("lambda_square", lattice.pairing(lambda.coords(), lambda.coords())?);
    out.put_str("kappa", kappa_4k_lattice(&lattice, &lambda)?);
    let vdb = van_der_blij_check(&lattice, &lambda)?;
    out.put("van_der_blij", json!({"residue": vdb.residue, "unimodular": vdb.unimodular, "holds": vdb.holds()}));
    let disc = discriminant_form(&lattice, &lambda)?;
    out.put_str("discriminant_group", disc.group());
    out.put("discriminant_form", serde_json::to_value(disc.form.to_json()).expect("plain data"));
    let m = milgram_check(&lattice, &lambda)?;
    out.put("gauss_k", m.gauss.k);
    out.put_str("gauss_kappa", m.gauss.kappa());
    out.put("gauss_residual_below", residual_bound(m.gauss.residual));
    out.put("lattice_residue", m.lattice_residue);
    out.put("milgram", m.holds);
    out.require(m.holds && vdb.holds());
    Ok(out)
}

// ---- gauss ----

pub fn gauss(path: &PathBuf) -> CmdResult<Outcome> {
    let (spec, info): (FiniteFormSpec, _) = load_json(path)?;
    let form = FiniteQuadraticForm::from_json(&spec)?;
    let mut out = Outcome::new(Some(info));
    out.put_str("group", form.group());
    out.put_str("order", form.group().order());
    let nondegenerate = form.is_nondegenerate()?;
    out.put("nondegenerate", nondegenerate);
    out.require(nondegenerate);
    if nondegenerate {
        let g = form.gauss_sum()?;
        out.put("k", g.k);
        out.put_str("kappa", g.kappa());
        out.put("residual_below", residual_bound(g.residual));
    }
    Ok(out)
}

// ---- complex ----

pub struct ComplexArgs {
    pub path: Option<PathBuf>,
    pub builtin: Option<String>,
    pub wu: bool,
    pub kappa: bool,
    pub steenrod: Option<usize>,
    pub qtable: bool,
}

fn load_complex(path: &Option<PathBuf>, name: &Option<String>) -> CmdResult<(Arc<SimplicialComplex>, InputInfo)> {
    match (path, name) {
        (Some(p), _) => {
            let (spec, info): (ComplexSpec, _) = load_json(p)?;
            Ok((Arc::new(SimplicialComplex::from_spec(&spec)?), info))
        }
        (None, Some(n)) => Ok((builtin(n)?, InputInfo::builtin("complex", n))),
        (None, None) => Err(InputError("give a complex file or --builtin NAME".into())),
    }
}

fn bits<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect()
}

/// Characteristic lifts with free coordinates `cᵢ ∈ {rᵢ, rᵢ + 2}`,
/// `rᵢ ∈ {0, 1}`, together with their labels.
fn normalized_lifts(mf: &MiddleForm) -> CmdResult<Vec<(String, Vec<BigInt>, IntCochain)>> {
    let base = mf.wu_lift()?;
    let h = mf.cohomology();
    let gens = h.free_generators();
    let c = h.free_coordinates(&base)?;
    let r = c.len();
    if r > 6 {
        return Err(InputError(format!("κ table over 2^{r} lifts is too large")));
    }
    let residues: Vec<BigInt> = c.iter().map(|x| ((x % 2) + 2) % 2).collect();
    let mut lifts = Vec::new();
    for mask in 0..(1u32 << r) {
        let target: Vec<BigInt> =
            (0..r).map(|i| &residues[i] + BigInt::from(if mask >> i & 1 == 1 { 2 } else { 0 })).collect();
        let mut lambda = base.clone();
        for i in 0..r {
            lambda = lambda.add(&gens[i].scale(&(&target[i] - &c[i])))?;
        }
        let label = if r == 1 {
            match &target[0] {
                t if t.is_zero() => "λ=0".to_string(),
                t if t.is_one() => "λ=g".to_string(),
                t => format!("λ={t}g"),
            }
        } else {
            let parts: Vec<String> = target.iter().map(|t| t.to_string()).collect();
            format!("λ=({})", parts.join(","))
        };
        lifts.push((label, target, lambda));
    }
    Ok(lifts)
}

fn kappa_table(mf: &MiddleForm, lifts: &[(String, Vec<BigInt>, IntCochain)]) -> CmdResult<(Map<String, Value>, bool)> {
    let lattice = mf.lattice()?;
    let mut table = Map::new();
    let mut agree = true;
    for (label, _, lambda) in lifts {
        mf.check_lift(lambda)?;
        let k = mf.kappa(lambda)?;
        agree &= kappa_4k_lattice(&lattice, &mf.characteristic_vector(lambda)?)? == k;
        table.insert(label.clone(), s(k));
    }
    Ok((table, agree))
}

pub fn complex(args: &ComplexArgs) -> CmdResult<Outcome> {
    let (cx, info) = load_complex(&args.path, &args.builtin)?;
    let mut out = Outcome::new(Some(info));
    let n = cx.dim();
    out.put("dimension", n);
    out.put("f_vector", json!(cx.f_vector()));
    out.put("euler_characteristic", cx.euler_characteristic());
    let mut coh = Vec::new();
    for k in 0..=n {
        coh.push(group(&IntegralCohomology::compute(&cx, k)?.description()));
    }
    out.put("integral_cohomology", Value::Array(coh));
    out.put("mod2_betti", json!(betti_numbers::<quadra::linalg::Gf2>(&cx)?));
    let needs_manifold = args.wu || args.kappa || args.qtable;
    if !needs_manifold && args.steenrod.is_none() {
        return Ok(out);
    }
    if let Some(k) = args.steenrod {
        let mut maps = Map::new();
        for j in 0..=n.saturating_sub(k) {
            if j + k > n {
                break;
            }
            let src = Mod2Cohomology::compute(&cx, j)?;
            let dst = Mod2Cohomology::compute(&cx, j + k)?;
            let mut cols = Vec::new();
            for g in src.generators() {
                cols.push(bits(&dst.coordinates(&steenrod_square(k, g)?)?));
            }
            maps.insert(format!("H{j}->H{}", j + k), json!(cols));
        }
        out.put("steenrod", json!({"k": k, "images": maps}));
    }
    if !needs_manifold {
        return Ok(out);
    }
    let m = Manifold::new(cx.clone())?;
    out.put("orientable", m.is_orientable());
    if args.wu {
        let mut wu = Map::new();
        for w in wu_classes(&m)? {
            wu.insert(format!("nu{}", w.degree), json!(bits(&w.coordinates)));
        }
        out.put("wu", Value::Object(wu));
    }
    if args.kappa || args.qtable {
        let mf = MiddleForm::new(&m)?;
        out.put("signature", mf.signature());
        out.put("wu_nonzero", !mf.wu().is_zero());
        let lifts = normalized_lifts(&mf)?;
        if args.kappa {
            let (table, agree) = kappa_table(&mf, &lifts)?;
            out.put("kappa", Value::Object(table));
            out.put("lattice_agrees", agree);
            out.require(agree);
            if mf.signature() == 0 {
                // σ = 0 does not pin the orientation; κ changes sign under reversal.
                let rev = MiddleForm::new(&m.reversed())?;
                let (table, agree) = kappa_table(&rev, &normalized_lifts(&rev)?)?;
                out.put("kappa_reversed", Value::Object(table));
                out.require(agree);
            }
        }
        if args.qtable {
            let (label, coords, lambda) = &lifts[0];
            let gens = mf.cohomology().free_generators();
            let mut values = Map::new();
            for i in 0..gens.len() {
                values.insert(format!("e{i}"), s(mf.q(lambda, &gens[i])?));
                for j in i + 1..gens.len() {
                    values.insert(format!("e{i}+e{j}"), s(mf.q(lambda, &gens[i].add(&gens[j])?)?));
                }
            }
            out.put(
                "qtable",
                json!({"gram": matrix(mf.gram()), "lambda": label, "lambda_coords": strings(coords), "q": values}),
            );
        }
    }
    Ok(out)
}

// ---- dcohom ----

pub struct DcohomArgs {
    pub path: Option<PathBuf>,
    pub builtin: Option<String>,
    pub q: usize,
    pub k: usize,
    pub witnesses: usize,
    pub seed: u64,
}

pub fn dcohom(args: &DcohomArgs) -> CmdResult<Outcome> {
    let (cx, info) = load_complex(&args.path, &args.builtin)?;
    let mut out = Outcome::new(Some(info));
    out.put("q", args.q);
    out.put("k", args.k);
    let desc = match group_description(&cx, args.q, args.k)? {
        DifferentialGroup::Integral(g) => json!({"kind": "integral", "description": group(&g)}),
        DifferentialGroup::Flat { divisible_rank, torsion } => json!({
            "kind": "flat",
            "divisible_rank": divisible_rank,
            "torsion": strings(torsion.factors()),
            "group": flat_name(divisible_rank, &torsion.to_string(), torsion.is_trivial()),
        }),
        DifferentialGroup::Mixed(m) => json!({
            "kind": "mixed",
            "flat": {
                "divisible_rank": m.flat_divisible_rank,
                "torsion": strings(m.flat_torsion.factors()),
            },
            "characteristic": group(&m.characteristic),
            "period_lattice_rank": m.period_lattice_rank,
            "torus_rank": m.torus_rank,
        }),
    };
    out.put("group", desc);
    if args.witnesses > 0 {
        out.seed = Some(args.seed);
        let rep = witness_suite(&cx, args.q, args.k, args.witnesses, args.seed)?;
        out.require(rep.passed());
        out.put("witnesses", serde_json::to_value(&rep).expect("plain data"));
    }
    Ok(out)
}

fn flat_name(rank: usize, torsion: &str, trivial: bool) -> String {
    let mut parts = Vec::new();
    match rank {
        0 => {}
        1 => parts.push("Q/Z".to_string()),
        r => parts.push(format!("(Q/Z)^{r}")),
    }
    if !trivial {
        parts.push(torsion.to_string());
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

// ---- series ----

#[derive(Default)]
pub struct SeriesArgs {
    pub spin_wu: Option<usize>,
    pub delta_g_check: Option<usize>,
    pub mod4_check: Option<usize>,
    pub pontryagin: Option<usize>,
    pub l_genus: Option<usize>,
    pub spin_change: Option<usize>,
}

impl SeriesArgs {
    fn is_empty(&self) -> bool {
        self.spin_wu.is_none()
            && self.delta_g_check.is_none()
            && self.mod4_check.is_none()
            && self.pontryagin.is_none()
            && self.l_genus.is_none()
            && self.spin_change.is_none()
    }
}

pub fn series(args: &SeriesArgs) -> CmdResult<Outcome> {
    let defaults = SeriesArgs {
        spin_wu: Some(6),
        delta_g_check: Some(20),
        mod4_check: Some(12),
        pontryagin: Some(3),
        l_genus: Some(3),
        spin_change: Some(8),
    };
    let args = if args.is_empty() { &defaults } else { args };
    let mut out = Outcome::new(None);
    if let Some(n) = args.spin_wu {
        let g = spin_wu_series(n)?;
        out.put("spin_wu_series", strings(g.coeffs()));
    }
    if let Some(n) = args.delta_g_check {
        let ok = delta_g_integral(n)?;
        out.put("delta_g_integral", json!({"order": n, "holds": ok}));
        out.require(ok);
    }
    if let Some(n) = args.mod4_check {
        let ok = mod4_square_check(n)?;
        out.put("mod4_square", json!({"order": n, "holds": ok}));
        out.require(ok);
    }
    if let Some(k) = args.pontryagin {
        let mut wu = Map::new();
        let mut inv = Map::new();
        for i in 1..=k {
            wu.insert(format!("nu{}", 4 * i), s(spin_wu(i)?));
            inv.insert(format!("nu{}", 4 * i), s(spin_wu_inverse_bundle(i)?));
        }
        out.put("spin_wu", Value::Object(wu));
        out.put("spin_wu_inverse", Value::Object(inv));
    }
    if let Some(k) = args.l_genus {
        let mut l = Map::new();
        for i in 1..=k {
            l.insert(format!("L{i}"), s(l_polynomial(i)?));
        }
        out.put("l_genus", Value::Object(l));
    }
    if let Some(n) = args.spin_change {
        let ok = change_of_spin_identity(n)?;
        out.put("change_of_spin", json!({"order": n, "holds": ok}));
        out.require(ok);
    }
    Ok(out)
}

// ---- doldkan ----

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum DoldKanInput {
    ChainComplex(ChainComplexSpec),
    SimplicialGroup(SimplicialGroupSpec),
}

fn chain_summary(c: &ChainComplexZ) -> CmdResult<Value> {
    let mut levels = Vec::new();
    for n in 0..=c.top() {
        levels.push(json!({
            "group": group(&GroupDescription::new(
                c.orders(n).iter().filter(|o| o.is_zero()).count(),
                quadra::linalg::FiniteAbelianGroup::new(c.orders(n).iter().filter(|o| !o.is_zero()).cloned().collect())?,
            )),
            "boundary": matrix(&c.boundary(n)),
            "homology": group(&c.homology(n)?),
        }));
    }
    Ok(Value::Array(levels))
}

fn group_list(gs: &[GroupDescription]) -> Value {
    Value::Array(gs.iter().map(group).collect())
}

pub fn doldkan(path: &PathBuf) -> CmdResult<Outcome> {
    let (input, info): (DoldKanInput, _) = load_json(path)?;
    let mut out = Outcome::new(Some(info));
    match input {
        DoldKanInput::ChainComplex(spec) => {
            let c = ChainComplexZ::from_spec(&spec)?;
            out.put("kind", "chain_complex");
            out.put("complex", chain_summary(&c)?);
            let g = gamma(&c, None)?;
            out.put("gamma_level_ranks", json!(g.group().level_ranks()));
            dold_kan_isomorphism(&c)?;
            out.put("isomorphism", true);
            let pi = homotopy_groups(g.group())?;
            let h: Vec<GroupDescription> = (0..=c.top()).map(|n| c.homology(n)).collect::<Result<_, _>>()?;
            out.put("homotopy_groups", group_list(&pi));
            let ok = pi.iter().zip(&h).all(|(a, b)| a == b) && pi.len() > c.top();
            out.put("homotopy_equals_homology", ok);
            out.require(ok);
        }
        DoldKanInput::SimplicialGroup(spec) => {
            let a = SimplicialAbelianGroup::from_spec(&spec)?;
            out.put("kind", "simplicial_group");
            out.put("level_ranks", json!(a.level_ranks()));
            let nc = normalize(&a)?;
            out.put("normalized", chain_summary(nc.complex())?);
            let pi = homotopy_groups(&a)?;
            let un = unnormalized_homology(&a)?;
            out.put("homotopy_groups", group_list(&pi));
            let ok = pi == un;
            out.put("normalized_equals_unnormalized", ok);
            out.require(ok);
        }
    }
    Ok(out)
}

// ---- picard ----

pub fn picard(path: &PathBuf) -> CmdResult<Outcome> {
    let (spec, info): (TwoTermSpec, _) = load_json(path)?;
    let t = TwoTermComplex::from_spec(&spec)?;
    let mut out = Outcome::new(Some(info));
    out.put("pi0", group(&t.cokernel()?));
    out.put("pi1", group(&t.kernel()?.description()));
    let cg = functor_class_group(&t)?;
    out.put("class_group", group(&cg.description()));
    let pairs: Vec<Value> =
        cg.generator_pairs().iter().map(|p| json!({"h0": strings(&p.h0), "h1": strings(&p.h1)})).collect();
    out.put("generator_pairs", Value::Array(pairs));
    let rep = anderson_report(&t)?;
    out.put(
        "anderson",
        json!({
            "ext": group(&rep.ext),
            "hom": group(&rep.hom),
            "restriction_integral": rep.restriction_integral,
            "holds": rep.holds,
        }),
    );
    out.require(rep.holds);
    Ok(out)
}

// ---- selftest ----

pub struct SelftestArgs {
    pub config: SuiteConfig,
    pub suites: Vec<String>,
}

pub fn selftest(args: &SelftestArgs) -> CmdResult<Outcome> {
    let registry = SuiteRegistry::default();
    let outcomes = run_suites(&registry, &args.suites, &args.config)?;
    let mut out = Outcome::new(None);
    out.seed = Some(args.config.seed);
    out.put("config", serde_json::to_value(&args.config).expect("plain data"));
    let mut suites = Map::new();
    for o in outcomes {
        out.require(o.passed());
        suites.insert(
            o.name.clone(),
            json!({
                "passed": o.passed(),
                "trials": o.trials,
                "checks": o.checks,
                "metrics": o.metrics,
                "failures": o.failures.iter().take(20).collect::<Vec<_>>(),
                "failure_count": o.failures.len(),
            }),
        );
    }
    out.put("suites", Value::Object(suites));
    Ok(out)
}

// ---- export ----

/// Wire-format JSON of a built-in complex or lattice.
pub fn export(kind: &str, name: &str) -> CmdResult<Value> {
    let v = match kind {
        "complex" => serde_json::to_value(builtin(name)?.to_spec()),
        "lattice" => serde_json::to_value(LatticeSpec::from_lattice(&builtin_lattice(name)?)),
        _ => return Err(InputError(format!("cannot export {kind:?}; use complex or lattice"))),
    };
    Ok(v.expect("plain data"))
}

// ---- list ----

pub fn list() -> Outcome {
    let mut out = Outcome::new(None);
    let complexes: Map<String, Value> = quadra::topology::builtin_names()
        .into_iter()
        .map(|n| (n.to_string(), s(quadra::topology::builtin::builtin_description(n).unwrap_or(""))))
        .collect();
    let lattices: Map<String, Value> = quadra::lattice::builtin_lattice_names()
        .into_iter()
        .map(|n| (n.to_string(), s(quadra::lattice::builtin_lattice_description(n).unwrap_or(""))))
        .collect();
    let suites: Map<String, Value> =
        SuiteRegistry::default().iter().map(|t| (t.name().to_string(), s(t.description()))).collect();
    let series: Map<String, Value> =
        quadra::series::SeriesRegistry::default().iter().map(|c| (c.name().to_string(), s(c.description()))).collect();
    out.put("complexes", Value::Object(complexes));
    out.put("lattices", Value::Object(lattices));
    out.put("suites", Value::Object(suites));
    out.put("series", Value::Object(series));
    out
}
