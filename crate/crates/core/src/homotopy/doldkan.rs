//! Simplicial abelian groups truncated at a top level, the normalized
//! (Moore) complex `N`, the inverse `Γ`, and homotopy groups.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::presented::{
    check_hom, describe, homology, image, maps_equal, matrix_from_rows, matrix_to_rows, orders_from_u64, preimage,
    reduce, relations, Orders,
};
use crate::error::{Error, Result};
use crate::linalg::{GroupDescription, IntMatrix, Lattice, Subquotient};
use crate::rng::random_unimodular;

/// Nonnegatively graded chain complex of f.g. abelian groups, `Cₙ = ⊕ Z/oᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplexZ {
    orders: Vec<Orders>,
    /// `boundaries[n−1] = ∂ₙ: Cₙ → Cₙ₋₁`.
    boundaries: Vec<IntMatrix>,
}

impl ChainComplexZ {
    pub fn new(orders: Vec<Orders>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::Input("a chain complex needs at least one group".into()));
        }
        if boundaries.len() + 1 != orders.len() {
            return Err(Error::Input(format!(
                "{} groups need {} boundary maps, got {}",
                orders.len(),
                orders.len() - 1,
                boundaries.len()
            )));
        }
        for (i, d) in boundaries.iter().enumerate() {
            let n = i + 1;
            check_hom(d, &orders[n], &orders[n - 1], &format!("boundary {n}"))?;
        }
        for n in 2..orders.len() {
            let dd = boundaries[n - 2].mul_mat(&boundaries[n - 1])?;
            if !maps_equal(&dd, &IntMatrix::zeros(dd.rows(), dd.cols()), &orders[n - 2]) {
                return Err(Error::IllDefinedMap(format!("∂{}∘∂{n} is not zero", n - 1)));
            }
        }
        Ok(ChainComplexZ { orders, boundaries })
    }

    /// One group in degree `n`.
    pub fn concentrated(n: usize, orders: Orders) -> Result<Self> {
        let mut all = vec![Vec::new(); n + 1];
        all[n] = orders;
        let bounds = (1..=n).map(|k| IntMatrix::zeros(all[k - 1].len(), all[k].len())).collect();
        Self::new(all, bounds)
    }

    /// Highest degree.
    pub fn top(&self) -> usize {
        self.orders.len() - 1
    }

    pub fn orders(&self, n: usize) -> &[BigInt] {
        self.orders.get(n).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn rank(&self, n: usize) -> usize {
        self.orders(n).len()
    }

    /// `∂ₙ`; zero outside the stored range.
    pub fn boundary(&self, n: usize) -> IntMatrix {
        if n >= 1 && n <= self.top() {
            self.boundaries[n - 1].clone()
        } else {
            IntMatrix::zeros(if n == 0 { 0 } else { self.rank(n - 1) }, self.rank(n))
        }
    }

    /// `Hₙ(C)`.
    pub fn homology(&self, n: usize) -> Result<GroupDescription> {
        Ok(self.homology_subquotient(n)?.description())
    }

    fn homology_subquotient(&self, n: usize) -> Result<Subquotient> {
        let out = self.boundary(n);
        let prev = if n == 0 { Vec::new() } else { self.orders(n - 1).to_vec() };
        let inc = self.boundary(n + 1);
        homology(self.orders(n), (n > 0).then_some((&out, prev.as_slice())), Some(&inc))
    }

    pub fn from_spec(spec: &ChainComplexSpec) -> Result<Self> {
        let orders: Vec<Orders> = spec.orders.iter().map(|o| orders_from_u64(o)).collect::<Result<_>>()?;
        let mut bounds = Vec::new();
        for (i, m) in spec.boundaries.iter().enumerate() {
            let n = i + 1;
            if n >= orders.len() {
                return Err(Error::Input(format!("boundary {n} has no source group")));
            }
            bounds.push(matrix_from_rows(m, orders[n - 1].len(), orders[n].len(), &format!("boundaries[{i}]"))?);
        }
        Self::new(orders, bounds)
    }

    pub fn to_spec(&self) -> ChainComplexSpec {
        ChainComplexSpec {
            orders: self.orders.iter().map(|o| o.iter().map(|x| u64::try_from(x).unwrap_or(0)).collect()).collect(),
            boundaries: self
                .boundaries
                .iter()
                .map(|m| {
                    m.to_rows().iter().map(|r| r.iter().map(|x| i64::try_from(x).unwrap_or(0)).collect()).collect()
                })
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let top = self.top().max(other.top());
        let orders: Vec<Orders> = (0..=top).map(|n| [self.orders(n), other.orders(n)].concat()).collect();
        let bounds = (1..=top).map(|n| self.boundary(n).direct_sum(&other.boundary(n))).collect();
        Self::new(orders, bounds)
    }
}

/// JSON form: cyclic orders per degree (0 for Z) and `∂₁, ∂₂, …` as
/// row-major matrices, rows indexed by target generators.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ChainComplexSpec {
    pub orders: Vec<Vec<u64>>,
    pub boundaries: Vec<Vec<Vec<i64>>>,
}

/// Levels `A₀ … A_N` with faces and degeneracies up to the top level.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialAbelianGroup {
    orders: Vec<Orders>,
    /// `faces[n][i] = dᵢ: Aₙ → Aₙ₋₁` (empty for `n = 0`).
    faces: Vec<Vec<IntMatrix>>,
    /// `degeneracies[n][i] = sᵢ: Aₙ → Aₙ₊₁`, for `n < N`.
    degeneracies: Vec<Vec<IntMatrix>>,
}

impl SimplicialAbelianGroup {
    /// Validates shapes, well-definedness and the simplicial identities.
    pub fn new(orders: Vec<Orders>, faces: Vec<Vec<IntMatrix>>, degeneracies: Vec<Vec<IntMatrix>>) -> Result<Self> {
        let top = orders.len().checked_sub(1).ok_or_else(|| Error::Input("no levels".into()))?;
        if faces.len() != top + 1 || degeneracies.len() != top {
            return Err(Error::Input("faces needed for every level, degeneracies below the top".into()));
        }
        for n in 0..=top {
            let want = if n == 0 { 0 } else { n + 1 };
            if faces[n].len() != want {
                return Err(Error::Input(format!("level {n} needs {want} faces")));
            }
            for (i, d) in faces[n].iter().enumerate() {
                check_hom(d, &orders[n], &orders[n - 1], &format!("d{i} at level {n}"))?;
            }
            if n < top {
                if degeneracies[n].len() != n + 1 {
                    return Err(Error::Input(format!("level {n} needs {} degeneracies", n + 1)));
                }
                for (i, s) in degeneracies[n].iter().enumerate() {
                    check_hom(s, &orders[n], &orders[n + 1], &format!("s{i} at level {n}"))?;
                }
            }
        }
        let a = SimplicialAbelianGroup { orders, faces, degeneracies };
        a.check_identities()?;
        Ok(a)
    }

    pub fn top(&self) -> usize {
        self.orders.len() - 1
    }

    pub fn orders(&self, n: usize) -> &[BigInt] {
        &self.orders[n]
    }

    pub fn face(&self, n: usize, i: usize) -> &IntMatrix {
        &self.faces[n][i]
    }

    pub fn degeneracy(&self, n: usize, i: usize) -> &IntMatrix {
        &self.degeneracies[n][i]
    }

    fn check_identities(&self) -> Result<()> {
        let fail = |what: String| Err(Error::SimplicialIdentity(what));
        let top = self.top();
        let eq = |a: &IntMatrix, b: &IntMatrix, n: usize| maps_equal(a, b, &self.orders[n]);
        let mul = |a: &IntMatrix, b: &IntMatrix| a.mul_mat(b).expect("shapes");
        for n in 2..=top {
            // dᵢdⱼ = dⱼ₋₁dᵢ, i < j, from level n.
            for j in 0..=n {
                for i in 0..j {
                    if !eq(
                        &mul(&self.faces[n - 1][i], &self.faces[n][j]),
                        &mul(&self.faces[n - 1][j - 1], &self.faces[n][i]),
                        n - 2,
                    ) {
                        return fail(format!("d{i}d{j} = d{}d{i} at level {n}", j - 1));
                    }
                }
            }
        }
        for n in 0..top {
            let id = IntMatrix::identity(self.orders[n].len());
            for j in 0..=n {
                let s = &self.degeneracies[n][j];
                for i in 0..=n + 1 {
                    let lhs = mul(&self.faces[n + 1][i], s);
                    let rhs = if i == j || i == j + 1 {
                        id.clone()
                    } else if i < j {
                        mul(&self.degeneracies[n - 1][j - 1], &self.faces[n][i])
                    } else {
                        mul(&self.degeneracies[n - 1][j], &self.faces[n][i - 1])
                    };
                    if !eq(&lhs, &rhs, n) {
                        return fail(format!("d{i}s{j} at level {n}"));
                    }
                }
            }
            if n + 1 < top {
                for j in 0..=n {
                    for i in 0..=j {
                        let lhs = mul(&self.degeneracies[n + 1][i], &self.degeneracies[n][j]);
                        let rhs = mul(&self.degeneracies[n + 1][j + 1], &self.degeneracies[n][i]);
                        if !eq(&lhs, &rhs, n + 2) {
                            return fail(format!("s{i}s{j} = s{}s{i} at level {n}", j + 1));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The constant simplicial group on `⊕ Z/oᵢ`.
    pub fn constant(orders: Orders, top: usize) -> Result<Self> {
        let id = IntMatrix::identity(orders.len());
        let faces = (0..=top).map(|n| vec![id.clone(); if n == 0 { 0 } else { n + 1 }]).collect();
        let degs = (0..top).map(|n| vec![id.clone(); n + 1]).collect();
        Self::new(vec![orders; top + 1], faces, degs)
    }

    /// `Z[Δᵐ]`: level `n` is free on monotone maps `[n] → [m]`.
    pub fn free_on_simplex(m: usize, top: usize) -> Result<Self> {
        let levels: Vec<Vec<Vec<usize>>> = (0..=top + 1).map(|n| monotone_maps(n, m)).collect();
        let index = |n: usize, s: &[usize]| levels[n].iter().position(|t| t == s).expect("monotone");
        let mut faces = Vec::new();
        let mut degs = Vec::new();
        for n in 0..=top {
            let mut fl = Vec::new();
            if n > 0 {
                for i in 0..=n {
                    let mut mat = IntMatrix::zeros(levels[n - 1].len(), levels[n].len());
                    for (c, s) in levels[n].iter().enumerate() {
                        let mut t = s.clone();
                        t.remove(i);
                        mat[(index(n - 1, &t), c)] = BigInt::one();
                    }
                    fl.push(mat);
                }
            }
            faces.push(fl);
            if n < top {
                let mut dl = Vec::new();
                for i in 0..=n {
                    let mut mat = IntMatrix::zeros(levels[n + 1].len(), levels[n].len());
                    for (c, s) in levels[n].iter().enumerate() {
                        let mut t = s.clone();
                        t.insert(i, s[i]);
                        mat[(index(n + 1, &t), c)] = BigInt::one();
                    }
                    dl.push(mat);
                }
                degs.push(dl);
            }
        }
        let orders = (0..=top).map(|n| vec![BigInt::zero(); levels[n].len()]).collect();
        Self::new(orders, faces, degs)
    }

    pub fn from_spec(spec: &SimplicialGroupSpec) -> Result<Self> {
        let orders: Vec<Orders> = spec.orders.iter().map(|o| orders_from_u64(o)).collect::<Result<_>>()?;
        let top = orders.len().checked_sub(1).ok_or_else(|| Error::Input("no levels".into()))?;
        if spec.faces.len() != top + 1 || spec.degeneracies.len() != top {
            return Err(Error::Input("faces needed for every level, degeneracies below the top".into()));
        }
        let mut faces = Vec::new();
        for (n, fl) in spec.faces.iter().enumerate() {
            let rows = if n == 0 { 0 } else { orders[n - 1].len() };
            faces.push(
                fl.iter()
                    .enumerate()
                    .map(|(i, m)| matrix_from_rows(m, rows, orders[n].len(), &format!("faces[{n}][{i}]")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let mut degs = Vec::new();
        for (n, dl) in spec.degeneracies.iter().enumerate() {
            degs.push(
                dl.iter()
                    .enumerate()
                    .map(|(i, m)| {
                        matrix_from_rows(m, orders[n + 1].len(), orders[n].len(), &format!("degeneracies[{n}][{i}]"))
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Self::new(orders, faces, degs)
    }

    /// Ranks of the levels (number of cyclic generators).
    pub fn level_ranks(&self) -> Vec<usize> {
        self.orders.iter().map(|o| o.len()).collect()
    }

    /// `Aₙ` described as a group.
    pub fn level(&self, n: usize) -> GroupDescription {
        describe(&self.orders[n])
    }

    /// Unnormalized (Moore) complex `∂ = Σ (−1)ⁱ dᵢ`.
    pub fn unnormalized(&self) -> Result<ChainComplexZ> {
        let mut bounds = Vec::new();
        for n in 1..=self.top() {
            let mut d = IntMatrix::zeros(self.orders[n - 1].len(), self.orders[n].len());
            for (i, f) in self.faces[n].iter().enumerate() {
                for r in 0..d.rows() {
                    for c in 0..d.cols() {
                        let v = if i % 2 == 0 { &d[(r, c)] + &f[(r, c)] } else { &d[(r, c)] - &f[(r, c)] };
                        d[(r, c)] = v;
                    }
                }
            }
            bounds.push(d);
        }
        ChainComplexZ::new(self.orders.clone(), bounds)
    }
}

/// JSON form of a truncated simplicial abelian group.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SimplicialGroupSpec {
    pub orders: Vec<Vec<u64>>,
    pub faces: Vec<Vec<Vec<Vec<i64>>>>,
    pub degeneracies: Vec<Vec<Vec<Vec<i64>>>>,
}

impl SimplicialGroupSpec {
    pub fn from_group(a: &SimplicialAbelianGroup) -> Self {
        let m = |x: &IntMatrix| -> Vec<Vec<i64>> {
            x.to_rows().iter().map(|r| r.iter().map(|v| i64::try_from(v).unwrap_or(0)).collect()).collect()
        };
        SimplicialGroupSpec {
            orders: a.orders.iter().map(|o| o.iter().map(|x| u64::try_from(x).unwrap_or(0)).collect()).collect(),
            faces: a.faces.iter().map(|l| l.iter().map(m).collect()).collect(),
            degeneracies: a.degeneracies.iter().map(|l| l.iter().map(m).collect()).collect(),
        }
    }
}

/// Nondecreasing sequences of length `n+1` in `0..=m`.
fn monotone_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n + 1);
    fn rec(n: usize, m: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=m {
            cur.push(v);
            rec(n, m, v, cur, out);
            cur.pop();
        }
    }
    rec(n, m, 0, &mut cur, &mut out);
    out
}

/// Monotone surjections `[n] ↠ [k]` as value sequences.
fn surjections(n: usize) -> Vec<Vec<usize>> {
    // A surjection is determined by the set of positions where it steps up.
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let mut f = vec![0usize; n + 1];
        for j in 1..=n {
            f[j] = f[j - 1] + usize::from(mask >> (j - 1) & 1 == 1);
        }
        out.push(f);
    }
    out.sort_by(|a, b| b[n].cmp(&a[n]).then(a.cmp(b)));
    out
}

/// The normalized complex together with how it sits inside `A`.
#[derive(Clone, Debug)]
pub struct Normalized {
    complex: ChainComplexZ,
    /// `Nₙ ⊂ Z^{gₙ}`, containing the relations of `Aₙ`.
    lattices: Vec<Lattice>,
    /// `Nₙ / relations` in canonical generators.
    quotients: Vec<Subquotient>,
}

impl Normalized {
    pub fn complex(&self) -> &ChainComplexZ {
        &self.complex
    }

    pub fn lattice(&self, n: usize) -> &Lattice {
        &self.lattices[n]
    }

    /// Ambient vectors in `Aₙ` of the generators of `Nₙ`.
    pub fn generators(&self, n: usize) -> Vec<Vec<BigInt>> {
        self.quotients[n].generators()
    }

    /// Coordinates in `Nₙ` of an element of `Aₙ` lying in it.
    pub fn coordinates(&self, n: usize, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.quotients[n].coordinates(v)
    }
}

/// `NAₙ = ∩_{i≥1} ker dᵢ` with differential `d₀`.
pub fn normalize(a: &SimplicialAbelianGroup) -> Result<Normalized> {
    let top = a.top();
    let mut lattices = Vec::with_capacity(top + 1);
    let mut quotients = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let g = a.orders[n].len();
        let maps: Vec<(&IntMatrix, &[BigInt])> =
            (1..=n).map(|i| (&a.faces[n][i], a.orders[n - 1].as_slice())).collect();
        let l = preimage(&maps, g)?;
        quotients.push(Subquotient::new(l.clone(), &relations(&a.orders[n]))?);
        lattices.push(l);
    }
    let orders: Vec<Orders> = quotients.iter().map(|q| q.generator_orders()).collect();
    let mut bounds = Vec::new();
    for n in 1..=top {
        let gens = quotients[n].generators();
        let mut cols = Vec::with_capacity(gens.len());
        for v in &gens {
            let img = a.faces[n][0].mul_vec(v)?;
            cols.push(quotients[n - 1].coordinates(&img)?);
        }
        bounds.push(IntMatrix::from_columns(orders[n - 1].len(), &cols)?);
    }
    let complex = ChainComplexZ::new(orders, bounds)?;
    Ok(Normalized { complex, lattices, quotients })
}

/// `πₙ(A) = Hₙ(NA)` for `n < N`; the top level lacks the data for `π_N`.
pub fn homotopy_groups(a: &SimplicialAbelianGroup) -> Result<Vec<GroupDescription>> {
    let top = a.top();
    let mut out = Vec::with_capacity(top);
    for n in 0..top {
        let g = a.orders[n].len();
        let maps: Vec<(&IntMatrix, &[BigInt])> =
            (0..=n).filter(|&i| n > 0 || i > 0).map(|i| (&a.faces[n][i], a.orders[n - 1].as_slice())).collect();
        let cycles = preimage(&maps, g)?;
        let above: Vec<(&IntMatrix, &[BigInt])> =
            (1..=n + 1).map(|i| (&a.faces[n + 1][i], a.orders[n].as_slice())).collect();
        let n_above = preimage(&above, a.orders[n + 1].len())?;
        let bounds = image(&a.faces[n + 1][0], &n_above)?.sum(&relations(&a.orders[n]))?;
        out.push(Subquotient::new(cycles, &bounds)?.description());
    }
    Ok(out)
}

/// Homology of the unnormalized complex in degrees `< N`.
pub fn unnormalized_homology(a: &SimplicialAbelianGroup) -> Result<Vec<GroupDescription>> {
    let c = a.unnormalized()?;
    (0..a.top()).map(|n| c.homology(n)).collect()
}

/// `Γ(C)` together with the summand bookkeeping needed for `N∘Γ ≅ id`.
#[derive(Clone, Debug)]
pub struct Gamma {
    group: SimplicialAbelianGroup,
    /// Per level: `(surjection, offset)` of each summand `C_k`.
    summands: Vec<Vec<(Vec<usize>, usize)>>,
}

impl Gamma {
    pub fn group(&self) -> &SimplicialAbelianGroup {
        &self.group
    }

    /// Summands of level `n` as target dimensions `k` of their surjections.
    pub fn summand_degrees(&self, n: usize) -> Vec<usize> {
        self.summands[n].iter().map(|(f, _)| f[n]).collect()
    }

    /// Offset of the identity summand `Cₙ` in `Γₙ`.
    fn identity_offset(&self, n: usize) -> usize {
        self.summands[n].iter().find(|(f, _)| f[n] == n).expect("identity surjection").1
    }
}

/// Decomposes `f∘θ` as `ε∘η` and returns `(η, image)`.
fn epi_mono(g: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut image: Vec<usize> = g.to_vec();
    image.dedup();
    let eta = g.iter().map(|v| image.iter().position(|w| w == v).expect("in image")).collect();
    (eta, image)
}

/// `Γ(C)ₙ = ⊕_{[n]↠[k]} C_k`, for levels `0..=top` (default `top(C) + 1`).
pub fn gamma(c: &ChainComplexZ, top: Option<usize>) -> Result<Gamma> {
    let top = top.unwrap_or(c.top() + 1);
    let mut summands: Vec<Vec<(Vec<usize>, usize)>> = Vec::with_capacity(top + 1);
    let mut orders: Vec<Orders> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut level = Vec::new();
        let mut o = Vec::new();
        for f in surjections(n) {
            let k = f[n];
            level.push((f, o.len()));
            o.extend_from_slice(c.orders(k));
        }
        summands.push(level);
        orders.push(o);
    }
    // θ* for θ: [m] → [n] given as a value sequence.
    let operator = |n: usize, m: usize, theta: &[usize]| -> IntMatrix {
        let mut mat = IntMatrix::zeros(orders[m].len(), orders[n].len());
        for (f, off) in &summands[n] {
            let k = f[n];
            let g: Vec<usize> = theta.iter().map(|&t| f[t]).collect();
            let (eta, image) = epi_mono(&g);
            let j = image.len() - 1;
            let target = summands[m].iter().find(|(h, _)| *h == eta).expect("surjection").1;
            let block = if j == k {
                IntMatrix::identity(c.rank(k))
            } else if j + 1 == k && image.iter().copied().eq(1..=k) {
                c.boundary(k)
            } else {
                continue;
            };
            for r in 0..block.rows() {
                for col in 0..block.cols() {
                    mat[(target + r, off + col)] = block[(r, col)].clone();
                }
            }
        }
        mat
    };
    let mut faces = Vec::with_capacity(top + 1);
    let mut degs = Vec::with_capacity(top);
    for n in 0..=top {
        let mut fl = Vec::new();
        if n > 0 {
            for i in 0..=n {
                let delta: Vec<usize> = (0..n).map(|j| if j < i { j } else { j + 1 }).collect();
                fl.push(operator(n, n - 1, &delta));
            }
        }
        faces.push(fl);
        if n < top {
            let mut dl = Vec::new();
            for i in 0..=n {
                let sigma: Vec<usize> = (0..=n + 1).map(|j| if j <= i { j } else { j - 1 }).collect();
                dl.push(operator(n, n + 1, &sigma));
            }
            degs.push(dl);
        }
    }
    let group = SimplicialAbelianGroup::new(orders, faces, degs)?;
    Ok(Gamma { group, summands })
}

/// A chain isomorphism `φ: C → NΓ(C)` with its inverse, both verified.
#[derive(Clone, Debug)]
pub struct DoldKanIso {
    pub forward: Vec<IntMatrix>,
    pub backward: Vec<IntMatrix>,
}

/// Builds and checks `C ≅ N(Γ(C))` in degrees `0..=top(C)`.
pub fn dold_kan_isomorphism(c: &ChainComplexZ) -> Result<DoldKanIso> {
    let gm = gamma(c, None)?;
    let normal = normalize(gm.group())?;
    let nc = normal.complex();
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    for n in 0..=c.top() {
        let off = gm.identity_offset(n);
        let g = gm.group().orders(n).len();
        let rank = c.rank(n);
        let mut cols = Vec::with_capacity(rank);
        for e in 0..rank {
            let mut v = vec![BigInt::zero(); g];
            v[off + e] = BigInt::one();
            cols.push(
                normal
                    .coordinates(n, &v)
                    .map_err(|_| Error::SimplicialIdentity(format!("generator {e} of C{n} is not normalized in Γ")))?,
            );
        }
        let phi = IntMatrix::from_columns(nc.rank(n), &cols)?;
        let mut cols = Vec::new();
        for v in normal.generators(n) {
            // Nₙ is the identity summand modulo relations.
            let mut rest = v.clone();
            for x in rest[off..off + rank].iter_mut() {
                *x = BigInt::zero();
            }
            reduce(&mut rest, gm.group().orders(n));
            if rest.iter().any(|x| !x.is_zero()) {
                return Err(Error::SimplicialIdentity(format!("N{n} leaves the identity summand")));
            }
            cols.push(v[off..off + rank].to_vec());
        }
        let psi = IntMatrix::from_columns(rank, &cols)?;
        if !maps_equal(&psi.mul_mat(&phi)?, &IntMatrix::identity(rank), c.orders(n))
            || !maps_equal(&phi.mul_mat(&psi)?, &IntMatrix::identity(nc.rank(n)), nc.orders(n))
        {
            return Err(Error::SimplicialIdentity(format!("comparison in degree {n} is not invertible")));
        }
        forward.push(phi);
        backward.push(psi);
    }
    for n in 1..=c.top() {
        let lhs = forward[n - 1].mul_mat(&c.boundary(n))?;
        let rhs = nc.boundary(n).mul_mat(&forward[n])?;
        if !maps_equal(&lhs, &rhs, nc.orders(n - 1)) {
            return Err(Error::SimplicialIdentity(format!("comparison is not a chain map in degree {n}")));
        }
    }
    Ok(DoldKanIso { forward, backward })
}

/// Random bounded complex of length `≤ max_top`: a direct sum of
/// elementary pieces with the free generators mixed by a unimodular change
/// of basis in each degree.
pub fn random_chain_complex<R: Rng>(rng: &mut R, max_top: usize, max_rank: usize) -> Result<ChainComplexZ> {
    let top = rng.gen_range(0..=max_top);
    let mut c = ChainComplexZ::concentrated(top, Vec::new())?;
    let pieces = rng.gen_range(1..=max_rank.max(1));
    for _ in 0..pieces {
        let n = rng.gen_range(0..=top);
        let piece = match rng.gen_range(0..4) {
            0 => ChainComplexZ::concentrated(n, vec![BigInt::zero()])?,
            1 => ChainComplexZ::concentrated(n, vec![BigInt::from([2, 3, 4, 6][rng.gen_range(0..4)])])?,
            _ if n >= 1 => {
                let (src, tgt, m) = if rng.gen_bool(0.5) {
                    (BigInt::zero(), BigInt::zero(), rng.gen_range(0..=4i64))
                } else {
                    // Z/a → Z/b, x ↦ m·x with a·m ≡ 0 mod b.
                    let (a, b) = [(2, 4), (4, 2), (3, 6), (6, 3), (2, 2), (4, 4)][rng.gen_range(0..6)];
                    let m = (1..=b).find(|m| (a * m) % b == 0).unwrap_or(b);
                    (BigInt::from(a), BigInt::from(b), m)
                };
                let mut orders = vec![Vec::new(); n + 1];
                orders[n - 1] = vec![tgt];
                orders[n] = vec![src];
                let mut bounds: Vec<IntMatrix> =
                    (1..=n).map(|k| IntMatrix::zeros(orders[k - 1].len(), orders[k].len())).collect();
                bounds[n - 1] = IntMatrix::from_i64_rows(&[vec![m]])?;
                ChainComplexZ::new(orders, bounds)?
            }
            _ => ChainComplexZ::concentrated(n, vec![BigInt::zero()])?,
        };
        c = c.direct_sum(&piece)?;
    }
    // Mix free generators: Cₙ ← Pₙ Cₙ, ∂ₙ ← Pₙ₋₁ ∂ₙ Pₙ⁻¹.
    let mut changes = Vec::new();
    for n in 0..=c.top() {
        let free: Vec<usize> = (0..c.rank(n)).filter(|&i| c.orders(n)[i].is_zero()).collect();
        let p_small = random_unimodular(rng, free.len(), 6);
        let mut p = IntMatrix::identity(c.rank(n));
        for (a, &i) in free.iter().enumerate() {
            for (b, &j) in free.iter().enumerate() {
                p[(i, j)] = p_small[(a, b)].clone();
            }
        }
        let p_inv = invert_unimodular(&p)?;
        changes.push((p, p_inv));
    }
    let bounds = (1..=c.top())
        .map(|n| changes[n - 1].0.mul_mat(&c.boundary(n))?.mul_mat(&changes[n].1))
        .collect::<Result<Vec<_>>>()?;
    let orders = (0..=c.top()).map(|n| c.orders(n).to_vec()).collect();
    ChainComplexZ::new(orders, bounds)
}

fn invert_unimodular(p: &IntMatrix) -> Result<IntMatrix> {
    let n = p.rows();
    let cols = (0..n)
        .map(|j| {
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::one();
            crate::linalg::solve_integer(p, &e)?.ok_or(Error::Unliftable)
        })
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_columns(n, &cols)
}

/// Printable form of a chain complex.
pub fn complex_summary(c: &ChainComplexZ) -> Vec<(String, Vec<Vec<String>>)> {
    (0..=c.top()).map(|n| (describe(c.orders(n)).to_string(), matrix_to_rows(&c.boundary(n)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    fn z(n: usize) -> Orders {
        vec![BigInt::zero(); n]
    }

    #[test]
    fn surjection_counts() {
        assert_eq!(surjections(0).len(), 1);
        assert_eq!(surjections(2).len(), 4);
        assert_eq!(surjections(3).iter().filter(|f| f[3] == 1).count(), 3);
    }

    #[test]
    fn constant_group() {
        let a = SimplicialAbelianGroup::constant(vec![BigInt::from(6)], 3).unwrap();
        let n = normalize(&a).unwrap();
        assert_eq!(n.complex().homology(0).unwrap().to_string(), "Z/6");
        assert!(n.complex().rank(1) == 0 && n.complex().rank(2) == 0);
        let pi = homotopy_groups(&a).unwrap();
        assert_eq!(pi[0].to_string(), "Z/6");
        assert!(pi[1..].iter().all(|g| g.is_trivial()));
    }

    #[test]
    fn free_simplex_is_contractible() {
        let a = SimplicialAbelianGroup::free_on_simplex(1, 3).unwrap();
        let pi = homotopy_groups(&a).unwrap();
        assert_eq!(pi[0], GroupDescription::free(1));
        assert!(pi[1].is_trivial() && pi[2].is_trivial());
        assert_eq!(unnormalized_homology(&a).unwrap(), pi);
    }

    #[test]
    fn gamma_sizes() {
        // C = (Z --0--> Z) in degrees 1, 0.
        let c = ChainComplexZ::new(vec![z(1), z(1)], vec![IntMatrix::zeros(1, 1)]).unwrap();
        let g = gamma(&c, Some(3)).unwrap();
        assert_eq!(g.group().level_ranks(), vec![1, 2, 3, 4]);
        let c0 = ChainComplexZ::concentrated(0, z(1)).unwrap();
        let g0 = gamma(&c0, Some(2)).unwrap();
        assert_eq!(g0.group().level_ranks(), vec![1, 1, 1]);
        assert_eq!(g0.group(), &SimplicialAbelianGroup::constant(z(1), 2).unwrap());
    }

    #[test]
    fn round_trip_and_homotopy() {
        let c = ChainComplexZ::concentrated(2, vec![BigInt::from(2)]).unwrap();
        let g = gamma(&c, None).unwrap();
        let pi = homotopy_groups(g.group()).unwrap();
        assert_eq!(pi[2].to_string(), "Z/2");
        assert!(pi[0].is_trivial() && pi[1].is_trivial());
        dold_kan_isomorphism(&c).unwrap();
        let back = normalize(g.group()).unwrap();
        assert_eq!(back.complex().homology(2).unwrap().to_string(), "Z/2");
    }

    #[test]
    fn random_round_trips() {
        for t in 0..15 {
            let mut rng = trial_rng(21, t);
            let c = random_chain_complex(&mut rng, 3, 3).unwrap();
            dold_kan_isomorphism(&c).unwrap();
            let g = gamma(&c, None).unwrap();
            let pi = homotopy_groups(g.group()).unwrap();
            for n in 0..=c.top() {
                assert_eq!(pi[n], c.homology(n).unwrap(), "trial {t} degree {n}");
            }
            assert_eq!(unnormalized_homology(g.group()).unwrap(), pi);
        }
    }

    #[test]
    fn identity_violations_rejected() {
        let a = SimplicialAbelianGroup::constant(z(1), 2).unwrap();
        let mut spec = SimplicialGroupSpec::from_group(&a);
        spec.faces[2][1] = vec![vec![2]];
        assert!(matches!(SimplicialAbelianGroup::from_spec(&spec), Err(Error::SimplicialIdentity(_))));
        let c = ChainComplexSpec {
            orders: vec![vec![0], vec![0], vec![0]],
            boundaries: vec![vec![vec![1]], vec![vec![1]]],
        };
        assert!(ChainComplexZ::from_spec(&c).is_err());
    }
}
