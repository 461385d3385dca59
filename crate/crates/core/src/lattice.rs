//! Integral lattices with a nondegenerate symmetric bilinear form:
//! characteristic vectors, the quadratic refinement they determine, the
//! mod-8 congruence, the discriminant quadratic form and κ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_form::FiniteQuadraticForm;
use crate::linalg::{
    field_solve, signature_of_symmetric, smith_normal_form, FiniteAbelianGroup, Gf2, Gf2Matrix, Inertia, IntMatrix,
    RatMatrix,
};

/// Free abelian group with a nondegenerate symmetric integral form, given
/// by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralLattice {
    gram: IntMatrix,
    determinant: BigInt,
    label: Option<String>,
}

impl IntegralLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let determinant = gram.determinant()?;
        if determinant.is_zero() {
            return Err(Error::DegenerateLattice);
        }
        Ok(IntegralLattice { gram, determinant, label: None })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_i64_rows(rows)?)
    }

    /// Diagonal lattice `⟨a₁⟩ ⊕ … ⊕ ⟨a_n⟩`.
    pub fn diagonal(entries: &[i64]) -> Result<Self> {
        let d: Vec<BigInt> = entries.iter().map(|&x| BigInt::from(x)).collect();
        Self::new(IntMatrix::diagonal(&d))
    }

    pub fn e8() -> Self {
        Self::new(e8_gram()).expect("E8 is unimodular").with_label("E8")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn determinant(&self) -> &BigInt {
        &self.determinant
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant.abs().is_one()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn inertia(&self) -> Inertia {
        signature_of_symmetric(&self.gram.to_rational()).expect("gram is symmetric")
    }

    pub fn signature(&self) -> i64 {
        self.inertia().signature()
    }

    pub fn pairing(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        self.gram.bilinear(x, y)
    }

    pub fn rational_pairing(&self, x: &[BigRational], y: &[BigRational]) -> Result<BigRational> {
        self.gram.to_rational().bilinear(x, y)
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &IntegralLattice) -> IntegralLattice {
        IntegralLattice::new(self.gram.direct_sum(&other.gram)).expect("sum of nondegenerate forms")
    }

    /// The congruent lattice with Gram matrix `Pᵀ G P`.
    pub fn change_basis(&self, p: &IntMatrix) -> Result<IntegralLattice> {
        let g = p.transpose().mul_mat(&self.gram)?.mul_mat(p)?;
        IntegralLattice::new(g)
    }
}

/// Gram matrix of the E8 root lattice (Cartan matrix, Bourbaki labelling).
pub fn e8_gram() -> IntMatrix {
    let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    let mut g = IntMatrix::zeros(8, 8);
    for i in 0..8 {
        g[(i, i)] = BigInt::from(2);
    }
    for (a, b) in edges {
        g[(a, b)] = BigInt::from(-1);
        g[(b, a)] = BigInt::from(-1);
    }
    g
}

/// λ with `B(x,x) ≡ B(x,λ) mod 2` for every `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacteristicVector {
    coords: Vec<BigInt>,
}

impl CharacteristicVector {
    /// Validates `diag(G) ≡ G·λ (mod 2)`.
    pub fn new(lattice: &IntegralLattice, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != lattice.rank() {
            return Err(Error::DimensionMismatch(format!(
                "λ has {} coordinates, lattice rank is {}",
                coords.len(),
                lattice.rank()
            )));
        }
        let g_lambda = lattice.gram.mul_vec(&coords)?;
        if let Some(i) = (0..lattice.rank()).find(|&i| (&g_lambda[i] - &lattice.gram[(i, i)]).is_odd()) {
            return Err(Error::NotCharacteristic(format!("B(e{i},e{i}) and B(e{i},λ) have different parity")));
        }
        Ok(CharacteristicVector { coords })
    }

    pub fn from_i64(lattice: &IntegralLattice, coords: &[i64]) -> Result<Self> {
        Self::new(lattice, coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// `λ + 2w`, again characteristic.
    pub fn shifted(&self, w: &[BigInt]) -> Result<Self> {
        if w.len() != self.coords.len() {
            return Err(Error::DimensionMismatch("shift vector".into()));
        }
        Ok(CharacteristicVector { coords: self.coords.iter().zip(w).map(|(l, x)| l + x * 2).collect() })
    }
}

/// Canonical characteristic vector: the lexicographically smallest 0/1
/// solution of `G·λ ≡ diag(G) (mod 2)`, lifted with zeros.
pub fn characteristic_vector(lattice: &IntegralLattice) -> CharacteristicVector {
    let n = lattice.rank();
    let g2 = lattice.gram.to_gf2();
    let diag: Vec<Gf2> = (0..n).map(|i| g2[(i, i)]).collect();
    // The diagonal of a symmetric matrix over GF(2) lies in its column
    // space, so the system is consistent; fix coordinates greedily.
    let mut rows: Vec<Vec<Gf2>> = g2.to_rows();
    let mut rhs = diag;
    let mut bits = Vec::with_capacity(n);
    for i in 0..n {
        let mut probe = vec![Gf2::ZERO; n];
        probe[i] = Gf2::ONE;
        rows.push(probe);
        rhs.push(Gf2::ZERO);
        let system = Gf2Matrix::from_rows(rows.clone()).expect("rectangular");
        if field_solve(&system, &rhs).expect("shape").is_some() {
            bits.push(0);
        } else {
            *rhs.last_mut().unwrap() = Gf2::ONE;
            bits.push(1);
        }
    }
    let coords = bits.into_iter().map(BigInt::from).collect();
    CharacteristicVector::new(lattice, coords).expect("greedy solution is characteristic")
}

/// `q(x) = (B(x,x) − B(x,λ)) / 2`, an integer.
pub fn quadratic_refinement(lattice: &IntegralLattice, lambda: &CharacteristicVector, x: &[BigInt]) -> Result<BigInt> {
    let xx = lattice.pairing(x, x)?;
    let xl = lattice.pairing(x, &lambda.coords)?;
    let num = xx - xl;
    debug_assert!(num.is_even());
    Ok(num / 2)
}

/// The same formula on rational vectors (used on the dual lattice).
pub fn rational_refinement(
    lattice: &IntegralLattice,
    lambda: &CharacteristicVector,
    x: &[BigRational],
) -> Result<BigRational> {
    let l: Vec<BigRational> = lambda.coords.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let xx = lattice.rational_pairing(x, x)?;
    let xl = lattice.rational_pairing(x, &l)?;
    Ok((xx - xl) / BigRational::from_integer(2.into()))
}

/// `q(x+y) − q(x) − q(y) + q(0)`; equals `B(x,y)`.
pub fn refinement_defect(
    lattice: &IntegralLattice,
    lambda: &CharacteristicVector,
    x: &[BigInt],
    y: &[BigInt],
) -> Result<BigInt> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch("defect arguments".into()));
    }
    let sum: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    let zero = vec![BigInt::zero(); x.len()];
    Ok(quadratic_refinement(lattice, lambda, &sum)?
        - quadratic_refinement(lattice, lambda, x)?
        - quadratic_refinement(lattice, lambda, y)?
        + quadratic_refinement(lattice, lambda, &zero)?)
}

/// Residue of `B(λ,λ) − σ` modulo 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Mod8Check {
    pub residue: u8,
    pub unimodular: bool,
}

impl Mod8Check {
    /// The congruence is a theorem only for unimodular forms; otherwise the
    /// residue is reported, not asserted.
    pub fn holds(&self) -> bool {
        !self.unimodular || self.residue == 0
    }
}

pub fn van_der_blij_check(lattice: &IntegralLattice, lambda: &CharacteristicVector) -> Result<Mod8Check> {
    let ll = lattice.pairing(&lambda.coords, &lambda.coords)?;
    let r = (ll - BigInt::from(lattice.signature())).mod_floor(&BigInt::from(8));
    let residue = u8::try_from(r).expect("residue in [0,8)");
    Ok(Mod8Check { residue, unimodular: lattice.is_unimodular() })
}

/// `κ = (B(λ,λ) − σ) / 8`.
pub fn kappa_4k_lattice(lattice: &IntegralLattice, lambda: &CharacteristicVector) -> Result<BigRational> {
    let ll = lattice.pairing(&lambda.coords, &lambda.coords)?;
    Ok(BigRational::new(ll - BigInt::from(lattice.signature()), BigInt::from(8)))
}

/// The discriminant group `L*/L` with its induced quadratic form.
#[derive(Clone, Debug)]
pub struct DiscriminantForm {
    pub form: FiniteQuadraticForm,
    /// Representatives in `L*` (rational coordinates) of the generators.
    pub lifts: Vec<Vec<BigRational>>,
    pub determinant: BigInt,
}

impl DiscriminantForm {
    pub fn group(&self) -> &FiniteAbelianGroup {
        self.form.group()
    }
}

/// `L*/L ≅ Zⁿ/GZⁿ` from the Smith form `U·G·V = D`: generator `i` lifts to
/// `V eᵢ / dᵢ ∈ L*` and `q` is evaluated on lifts by the rational formula.
pub fn discriminant_form(lattice: &IntegralLattice, lambda: &CharacteristicVector) -> Result<DiscriminantForm> {
    let n = lattice.rank();
    let s = smith_normal_form(&lattice.gram);
    let mut lifts = Vec::new();
    let mut factors = Vec::new();
    for i in 0..n {
        let d = s.divisor(i);
        if d.is_one() {
            continue;
        }
        let lift: Vec<BigRational> = (0..n).map(|r| BigRational::new(s.v[(r, i)].clone(), d.clone())).collect();
        lifts.push(lift);
        factors.push(d);
    }
    let k = lifts.len();
    let g = lattice.gram.to_rational();
    let mut coeffs = RatMatrix::zeros(k, k);
    for i in 0..k {
        coeffs[(i, i)] = rational_refinement(lattice, lambda, &lifts[i])?;
        for j in 0..i {
            let b = g.bilinear(&lifts[i], &lifts[j])? / BigRational::from_integer(2.into());
            coeffs[(i, j)] = b.clone();
            coeffs[(j, i)] = b;
        }
    }
    let group = FiniteAbelianGroup::new(factors)?;
    let form = FiniteQuadraticForm::new(group, coeffs)?;
    Ok(DiscriminantForm { form, lifts, determinant: lattice.determinant.abs() })
}

/// JSON form: `{"gram": [[…]], "lambda": "auto" | [int, …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub gram: Vec<Vec<i64>>,
    #[serde(default)]
    pub lambda: LambdaSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    #[default]
    #[serde(with = "auto_literal")]
    Auto,
    Coords(Vec<i64>),
}

mod auto_literal {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("auto")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let v = String::deserialize(d)?;
        if v == "auto" {
            Ok(())
        } else {
            Err(de::Error::custom(format!("lambda must be \"auto\" or a list of integers, got {v:?}")))
        }
    }
}

impl LatticeSpec {
    pub fn lattice(&self) -> Result<IntegralLattice> {
        let n = self.gram.len();
        if n == 0 || self.gram.iter().any(|r| r.len() != n) {
            return Err(Error::Input("gram must be a nonempty square matrix".into()));
        }
        IntegralLattice::from_rows(&self.gram)
    }

    pub fn characteristic(&self, lattice: &IntegralLattice) -> Result<CharacteristicVector> {
        match &self.lambda {
            LambdaSpec::Auto => Ok(characteristic_vector(lattice)),
            LambdaSpec::Coords(c) => CharacteristicVector::from_i64(lattice, c),
        }
    }

    pub fn from_lattice(lattice: &IntegralLattice) -> Self {
        let gram = lattice
            .gram()
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).expect("small entries")).collect())
            .collect();
        LatticeSpec { gram, lambda: LambdaSpec::Auto }
    }
}

/// Named lattices: `(name, description, Gram rows)`.
const BUILTIN_LATTICES: &[(&str, &str)] = &[
    ("one", "<1>, the form of CP²"),
    ("two", "<2>"),
    ("three", "<3>"),
    ("hyperbolic", "hyperbolic plane U, the form of S²×S²"),
    ("e8", "E8 root lattice"),
];

pub fn builtin_lattice_names() -> Vec<&'static str> {
    BUILTIN_LATTICES.iter().map(|(n, _)| *n).collect()
}

pub fn builtin_lattice_description(name: &str) -> Option<&'static str> {
    BUILTIN_LATTICES.iter().find(|(n, _)| *n == name).map(|(_, d)| *d)
}

pub fn builtin_lattice(name: &str) -> Result<IntegralLattice> {
    let l = match name {
        "one" => IntegralLattice::diagonal(&[1])?,
        "two" => IntegralLattice::diagonal(&[2])?,
        "three" => IntegralLattice::diagonal(&[3])?,
        "hyperbolic" => IntegralLattice::from_rows(&[vec![0, 1], vec![1, 0]])?,
        "e8" => IntegralLattice::e8(),
        _ => {
            return Err(Error::Input(format!(
                "unknown built-in lattice {name:?}; known: {}",
                builtin_lattice_names().join(", ")
            )))
        }
    };
    Ok(l.with_label(name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn characteristic_examples() {
        let one = IntegralLattice::diagonal(&[1]).unwrap();
        assert_eq!(characteristic_vector(&one).coords(), &ints(&[1]));
        let e8 = IntegralLattice::e8();
        assert_eq!(characteristic_vector(&e8).coords(), &ints(&[0; 8]));
        let two = IntegralLattice::diagonal(&[2]).unwrap();
        assert_eq!(characteristic_vector(&two).coords(), &ints(&[0]));
        assert!(CharacteristicVector::from_i64(&one, &[0]).is_err());
        assert!(CharacteristicVector::from_i64(&one, &[1, 1]).is_err());
    }

    #[test]
    fn refinement_examples() {
        let one = IntegralLattice::diagonal(&[1]).unwrap();
        let lam = CharacteristicVector::from_i64(&one, &[1]).unwrap();
        for n in -6i64..=6 {
            assert_eq!(quadratic_refinement(&one, &lam, &ints(&[n])).unwrap(), BigInt::from((n * n - n) / 2));
        }
        let e8 = IntegralLattice::e8();
        let zero = characteristic_vector(&e8);
        let mut root = vec![0i64; 8];
        root[3] = 1;
        assert_eq!(quadratic_refinement(&e8, &zero, &ints(&root)).unwrap(), BigInt::one());
        let three = IntegralLattice::diagonal(&[3]).unwrap();
        let l3 = CharacteristicVector::from_i64(&three, &[1]).unwrap();
        assert_eq!(quadratic_refinement(&three, &l3, &ints(&[1])).unwrap(), BigInt::zero());
    }

    #[test]
    fn defect_examples() {
        let one = IntegralLattice::diagonal(&[1]).unwrap();
        let lam = CharacteristicVector::from_i64(&one, &[1]).unwrap();
        assert_eq!(refinement_defect(&one, &lam, &ints(&[0]), &ints(&[0])).unwrap(), BigInt::zero());
        assert_eq!(refinement_defect(&one, &lam, &ints(&[2]), &ints(&[3])).unwrap(), BigInt::from(6));
    }

    #[test]
    fn mod8_examples() {
        let one = IntegralLattice::diagonal(&[1]).unwrap();
        let lam = CharacteristicVector::from_i64(&one, &[1]).unwrap();
        assert_eq!(van_der_blij_check(&one, &lam).unwrap().residue, 0);
        let e8 = IntegralLattice::e8();
        let c = van_der_blij_check(&e8, &characteristic_vector(&e8)).unwrap();
        assert_eq!((c.residue, c.unimodular), (0, true));
        let hyp = IntegralLattice::diagonal(&[2, -2]).unwrap();
        let c = van_der_blij_check(&hyp, &CharacteristicVector::from_i64(&hyp, &[0, 0]).unwrap()).unwrap();
        assert_eq!(c.residue, 0);
        // Non-unimodular: reported, not asserted.
        let three = IntegralLattice::diagonal(&[3]).unwrap();
        let c = van_der_blij_check(&three, &CharacteristicVector::from_i64(&three, &[1]).unwrap()).unwrap();
        assert_eq!(c.residue, 2);
        assert!(!c.unimodular && c.holds());
    }

    #[test]
    fn kappa_examples() {
        let one = IntegralLattice::diagonal(&[1]).unwrap();
        let k = kappa_4k_lattice(&one, &CharacteristicVector::from_i64(&one, &[3]).unwrap()).unwrap();
        assert_eq!(k, rat(1, 1));
        let e8 = IntegralLattice::e8();
        assert_eq!(kappa_4k_lattice(&e8, &characteristic_vector(&e8)).unwrap(), rat(-1, 1));
        let h = IntegralLattice::diagonal(&[1, -1]).unwrap();
        let k = kappa_4k_lattice(&h, &CharacteristicVector::from_i64(&h, &[1, 1]).unwrap()).unwrap();
        assert_eq!(k, rat(0, 1));
    }

    #[test]
    fn discriminant_examples() {
        let two = IntegralLattice::diagonal(&[2]).unwrap();
        let d = discriminant_form(&two, &characteristic_vector(&two)).unwrap();
        assert_eq!(d.group(), &FiniteAbelianGroup::from_u64(&[2]).unwrap());
        assert_eq!(d.form.value(&ints(&[1])).unwrap(), rat(1, 4));

        let three = IntegralLattice::diagonal(&[3]).unwrap();
        let d = discriminant_form(&three, &CharacteristicVector::from_i64(&three, &[1]).unwrap()).unwrap();
        assert_eq!(d.group(), &FiniteAbelianGroup::from_u64(&[3]).unwrap());
        assert_eq!(d.form.value(&ints(&[1])).unwrap(), rat(2, 3));
        assert_eq!(d.form.value(&ints(&[2])).unwrap(), rat(2, 3));

        let e8 = IntegralLattice::e8();
        let d = discriminant_form(&e8, &characteristic_vector(&e8)).unwrap();
        assert!(d.group().is_trivial());
    }

    #[test]
    fn degenerate_rejected() {
        assert_eq!(IntegralLattice::from_rows(&[vec![1, 1], vec![1, 1]]), Err(Error::DegenerateLattice));
        assert_eq!(IntegralLattice::from_rows(&[vec![1, 2], vec![0, 1]]), Err(Error::NotSymmetric));
    }

    #[test]
    fn spec_round_trip() {
        let spec: LatticeSpec = serde_json::from_str(r#"{"gram": [[3]], "lambda": [1]}"#).unwrap();
        let l = spec.lattice().unwrap();
        assert_eq!(spec.characteristic(&l).unwrap().coords(), &[BigInt::from(1)]);
        let auto: LatticeSpec = serde_json::from_str(r#"{"gram": [[2]]}"#).unwrap();
        assert_eq!(auto.lambda, LambdaSpec::Auto);
        assert!(serde_json::from_str::<LatticeSpec>(r#"{"gram": [[2]], "lambda": "yes"}"#).is_err());
        let e8 = LatticeSpec::from_lattice(&builtin_lattice("e8").unwrap());
        assert_eq!(serde_json::to_string(&e8.lambda).unwrap(), "\"auto\"");
        for name in builtin_lattice_names() {
            builtin_lattice(name).unwrap();
        }
    }
}
