//! Truncated power series over Q, multivariate truncations, Hirzebruch
//! multiplicative sequences and the spin Wu series.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 20;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `a₀ + a₁x + … + a_D x^D`, exact through order `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    coeffs: Vec<BigRational>,
}

impl FormalSeries {
    /// Pads or truncates `coeffs` to order `order`.
    pub fn new(order: usize, coeffs: &[BigRational]) -> Self {
        let mut c: Vec<BigRational> = coeffs.iter().take(order + 1).cloned().collect();
        c.resize(order + 1, BigRational::zero());
        FormalSeries { coeffs: c }
    }

    pub fn from_i64(order: usize, coeffs: &[i64]) -> Self {
        Self::new(order, &coeffs.iter().map(|&c| q(c)).collect::<Vec<_>>())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, &[])
    }

    pub fn one(order: usize) -> Self {
        Self::from_i64(order, &[1])
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        Self::from_i64(order, &[0, 1])
    }

    /// `Σ xⁿ/n!`.
    pub fn exp_x(order: usize) -> Self {
        let mut c = Vec::with_capacity(order + 1);
        let mut f = BigInt::one();
        for n in 0..=order {
            if n > 0 {
                f *= n;
            }
            c.push(BigRational::new(BigInt::one(), f.clone()));
        }
        FormalSeries { coeffs: c }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::Series(format!("orders {} and {} differ", self.order(), other.order())));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FormalSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        FormalSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.order();
        let mut c = vec![BigRational::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=d - i].iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Ok(FormalSeries { coeffs: c })
    }

    /// `1/s`, needs `a₀ ≠ 0`.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::Series("cannot invert a series with zero constant term".into()));
        }
        let d = self.order();
        let mut b = vec![BigRational::zero(); d + 1];
        b[0] = a0.recip();
        for n in 1..=d {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &b[n - k];
            }
            b[n] = -acc / a0;
        }
        Ok(FormalSeries { coeffs: b })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inverse()?)
    }

    fn truncate(&self, order: usize) -> Self {
        Self::new(order, &self.coeffs)
    }

    /// Square root with constant term 1, by Newton iteration `r ↦ (r + s/r)/2`
    /// with doubling precision.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Series("square root needs constant term 1".into()));
        }
        let d = self.order();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut r = FormalSeries::one(0);
        let mut prec = 0;
        while prec < d {
            prec = (2 * prec + 1).min(d);
            let r_ext = r.truncate(prec);
            let s = self.truncate(prec);
            r = r_ext.add(&s.div(&r_ext)?)?.scale(&half);
        }
        Ok(r.truncate(d))
    }

    /// `s(t(x))`, needs `t(0) = 0`.
    pub fn compose(&self, t: &Self) -> Result<Self> {
        self.check(t)?;
        if !t.coeffs[0].is_zero() {
            return Err(Error::Series("inner series must have zero constant term".into()));
        }
        // Horner.
        let mut acc = FormalSeries::zero(self.order());
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(t)?;
            acc.coeffs[0] += a;
        }
        Ok(acc)
    }

    /// `s(−x)`.
    pub fn reflect(&self) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().enumerate().map(|(i, a)| if i % 2 == 0 { a.clone() } else { -a }).collect(),
        }
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_integer())
    }

    /// `log s`, needs constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Series("log needs constant term 1".into()));
        }
        // (log s)' = s'/s.
        let d = self.order();
        let deriv = FormalSeries::new(d, &(1..=d).map(|n| &self.coeffs[n] * q(n as i64)).collect::<Vec<_>>());
        let quotient = deriv.div(self)?;
        let mut c = vec![BigRational::zero(); d + 1];
        for n in 1..=d {
            c[n] = &quotient.coeffs[n - 1] / q(n as i64);
        }
        Ok(FormalSeries { coeffs: c })
    }

    /// Even series as a series in `y = x²`, to order `⌊D/2⌋`.
    pub fn in_square(&self) -> Result<Self> {
        if !self.is_even() {
            return Err(Error::Series("series is not even".into()));
        }
        let c: Vec<BigRational> = self.coeffs.iter().step_by(2).cloned().collect();
        Ok(FormalSeries { coeffs: c })
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let sign = if a.is_negative() { "-" } else { "+" };
            let mag = a.abs();
            let body = match n {
                0 => mag.to_string(),
                _ => {
                    let xp = if n == 1 { "x".to_string() } else { format!("x^{n}") };
                    if mag.is_one() {
                        xp
                    } else {
                        format!("{mag}*{xp}")
                    }
                }
            };
            if first {
                write!(f, "{}{body}", if a.is_negative() { "-" } else { "" })?;
                first = false;
            } else {
                write!(f, " {sign} {body}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

/// Series in several variables truncated at total degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSeries {
    nvars: usize,
    order: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

/// Two-variable truncated series.
pub type BivariateSeries = MultiSeries;

impl MultiSeries {
    pub fn constant(nvars: usize, order: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        MultiSeries { nvars, order, terms }
    }

    /// `Σ formᵢ xᵢ`.
    pub fn linear(order: usize, form: &[i64]) -> Self {
        let mut terms = BTreeMap::new();
        if order >= 1 {
            for (i, &c) in form.iter().enumerate() {
                if c != 0 {
                    let mut e = vec![0; form.len()];
                    e[i] = 1;
                    terms.insert(e, q(c));
                }
            }
        }
        MultiSeries { nvars: form.len(), order, terms }
    }

    /// `s(Σ formᵢ xᵢ)`.
    pub fn substitute(s: &FormalSeries, form: &[i64], order: usize) -> Self {
        let l = Self::linear(order, form);
        let mut acc = Self::constant(form.len(), order, BigRational::zero());
        for a in s.coeffs().iter().take(order + 1).rev() {
            acc = acc.mul(&l);
            acc.add_term(vec![0; form.len()], a.clone());
        }
        acc
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() || e.iter().sum::<u32>() as usize > self.order {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = MultiSeries { nvars: self.nvars, order: self.order, terms: BTreeMap::new() };
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (e1, a) in &self.terms {
            let d1: u32 = e1.iter().sum();
            for (e2, b) in &other.terms {
                if (d1 + e2.iter().sum::<u32>()) as usize > order {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(BigRational::zero) += a * b;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MultiSeries { nvars: self.nvars, order, terms: acc }
    }

    /// `1/s` when the constant term is nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(&vec![0; self.nvars]);
        if c0.is_zero() {
            return Err(Error::Series("cannot invert: zero constant term".into()));
        }
        // 1/(c(1+u)) = c⁻¹ Σ (−u)ⁿ, u has no constant term.
        let inv = c0.recip();
        let one = Self::constant(self.nvars, self.order, BigRational::one());
        let neg_u = one.sub(&self.scale(&inv));
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..self.order {
            power = power.mul(&neg_u);
            acc = acc.add(&power);
        }
        Ok(acc.scale(&inv))
    }

    /// `s(−x₁, …, −xₙ)`.
    pub fn reflect(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), if e.iter().sum::<u32>() % 2 == 0 { c.clone() } else { -c }))
            .collect();
        MultiSeries { nvars: self.nvars, order: self.order, terms }
    }

    /// Exchange of two variables.
    pub fn swap(&self, i: usize, j: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.swap(i, j);
                (e, c.clone())
            })
            .collect();
        MultiSeries { nvars: self.nvars, order: self.order, terms }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Terms whose coefficient is not an integer.
    pub fn non_integral_terms(&self) -> Vec<(Vec<u32>, BigRational)> {
        self.terms.iter().filter(|(_, c)| !c.is_integer()).map(|(e, c)| (e.clone(), c.clone())).collect()
    }

    /// True when every coefficient is an integer divisible by `m`.
    pub fn divisible_by(&self, m: i64) -> bool {
        let m = BigInt::from(m);
        self.terms.values().all(|c| c.is_integer() && c.to_integer().is_multiple_of(&m))
    }
}

/// `s(u+v)/(s(u)s(v))` for linear forms `u`, `v` in `nvars` variables.
fn delta_at(s: &FormalSeries, u: &[i64], v: &[i64], order: usize) -> Result<MultiSeries> {
    let uv: Vec<i64> = u.iter().zip(v).map(|(a, b)| a + b).collect();
    let num = MultiSeries::substitute(s, &uv, order);
    let den = MultiSeries::substitute(s, u, order).mul(&MultiSeries::substitute(s, v, order));
    Ok(num.mul(&den.inverse()?))
}

/// `δs(x,y) = s(x+y)/(s(x)s(y))`, needs `s(0) = 1`.
pub fn delta_two_variable(s: &FormalSeries) -> Result<BivariateSeries> {
    delta_two_variable_to(s, s.order())
}

/// [`delta_two_variable`] truncated at total order `order`.
pub fn delta_two_variable_to(s: &FormalSeries, order: usize) -> Result<BivariateSeries> {
    if !s.coeff(0).is_one() {
        return Err(Error::Series("δs needs s(0) = 1".into()));
    }
    delta_at(s, &[1, 0], &[0, 1], order)
}

/// `δs(y,z)·δs(x,y+z) = δs(x+y,z)·δs(x,y)` to total order `order`.
pub fn delta_cocycle_holds(s: &FormalSeries, order: usize) -> Result<bool> {
    let (x, y, z) = ([1, 0, 0], [0, 1, 0], [0, 0, 1]);
    let lhs = delta_at(s, &y, &z, order)?.mul(&delta_at(s, &x, &[0, 1, 1], order)?);
    let rhs = delta_at(s, &[1, 1, 0], &z, order)?.mul(&delta_at(s, &x, &y, order)?);
    Ok(lhs == rhs)
}

/// `1 + x + x³ + x⁷ + …`, ones at exponents `2ⁿ − 1`.
pub fn wu_line_series(order: usize) -> FormalSeries {
    let mut c = vec![0i64; order + 1];
    let mut e = 1usize;
    c[0] = 1;
    while e - 1 <= order {
        c[e - 1] = 1;
        e *= 2;
    }
    FormalSeries::from_i64(order, &c)
}

/// [`wu_line_series`] over Z/2, as coefficient bits.
pub fn wu_line_series_mod2(order: usize) -> Vec<u8> {
    wu_line_series(order).coeffs().iter().map(|c| u8::from(c.to_integer().is_odd())).collect()
}

/// `g(x) = √(f(x)f(−x))` for the Wu line series `f`.
pub fn spin_wu_series(order: usize) -> Result<FormalSeries> {
    let f = wu_line_series(order);
    f.mul(&f.reflect())?.sqrt()
}

/// `x / tanh x`.
pub fn l_genus_series(order: usize) -> Result<FormalSeries> {
    // cosh x / (sinh x / x).
    let e = FormalSeries::exp_x(order + 1);
    let mut cosh = vec![BigRational::zero(); order + 1];
    let mut sinc = vec![BigRational::zero(); order + 1];
    for n in (0..=order).step_by(2) {
        cosh[n] = e.coeff(n);
        sinc[n] = e.coeff(n + 1);
    }
    FormalSeries::new(order, &cosh).div(&FormalSeries::new(order, &sinc))
}

/// `δf·δf(−x,−y) ≡ (δf)² mod 4` through total order `order`, `f` the Wu
/// line series.
pub fn mod4_square_check(order: usize) -> Result<bool> {
    let f = wu_line_series(order);
    let df = delta_two_variable(&f)?;
    if !df.is_integral() {
        return Ok(false);
    }
    let lhs = df.mul(&df.reflect());
    let rhs = df.mul(&df);
    Ok(lhs.sub(&rhs).divisible_by(4))
}

/// Integrality of `δg` through total order `order`.
pub fn delta_g_integral(order: usize) -> Result<bool> {
    Ok(delta_two_variable(&spin_wu_series(order)?)?.is_integral())
}

/// Homogeneous polynomial in `p₁, p₂, …` (weight of `pᵢ` is `4i`), keyed by
/// exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PontryaginPolynomial {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn weight(e: &[u32]) -> u32 {
    e.iter().enumerate().map(|(i, x)| (i as u32 + 1) * x).sum()
}

impl PontryaginPolynomial {
    /// From `(exponents of p₁, p₂, …, numerator, denominator)`.
    pub fn from_terms(terms: &[(&[u32], i64, i64)]) -> Self {
        let mut p = PontryaginPolynomial::default();
        for (e, n, d) in terms {
            p.add_term(e.to_vec(), BigRational::new(BigInt::from(*n), BigInt::from(*d)));
        }
        p
    }

    pub fn one() -> Self {
        Self::from_terms(&[(&[], 1, 1)])
    }

    /// `pᵢ` (1-based).
    pub fn p(i: usize) -> Self {
        let mut e = vec![0; i];
        e[i - 1] = 1;
        Self::from_terms(&[(&e, 1, 1)])
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        let e = trim(e);
        let slot = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Weighted degree `4k` of a homogeneous polynomial.
    pub fn degree(&self) -> Option<usize> {
        let ws: BTreeSet<u32> = self.terms.keys().map(|e| weight(e)).collect();
        (ws.len() == 1).then(|| 4 * *ws.iter().next().expect("one weight") as usize)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = PontryaginPolynomial::default();
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    /// Product, dropping terms of weight above `max_weight` (in units of 4).
    fn mul_truncated(&self, other: &Self, max_weight: u32) -> Self {
        let mut out = PontryaginPolynomial::default();
        for (e1, a) in &self.terms {
            for (e2, b) in &other.terms {
                if weight(e1) + weight(e2) > max_weight {
                    continue;
                }
                let n = e1.len().max(e2.len());
                let e: Vec<u32> =
                    (0..n).map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0)).collect();
                out.add_term(e, a * b);
            }
        }
        out
    }

    fn part_of_weight(&self, w: u32) -> Self {
        PontryaginPolynomial {
            terms: self.terms.iter().filter(|(e, _)| weight(e) == w).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Value at rational `p₁, p₂, …`.
    pub fn evaluate(&self, p: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                let v = p.get(i).cloned().unwrap_or_else(BigRational::zero);
                for _ in 0..k {
                    t *= &v;
                }
            }
            acc += t;
        }
        acc
    }

    /// `(exponents, "p/q")` pairs.
    pub fn coefficient_strings(&self) -> Vec<(Vec<u32>, String)> {
        self.ordered().into_iter().map(|(e, c)| (e.clone(), c.to_string())).collect()
    }

    /// Terms in the order `p_k`, …, `p₁ᵏ` (highest generator first).
    fn ordered(&self) -> Vec<(&Vec<u32>, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let n = a.len().max(b.len());
            let key = |e: &Vec<u32>| (0..n).rev().map(|i| e.get(i).copied().unwrap_or(0)).collect::<Vec<_>>();
            key(b).cmp(&key(a))
        });
        v
    }
}

fn monomial_name(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { format!("p{}", i + 1) } else { format!("p{}^{k}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for PontryaginPolynomial {
    /// Over a common denominator: `(20*p2 - 9*p1^2)/8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let den = self.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let mut body = String::new();
        for (i, (e, c)) in self.ordered().into_iter().enumerate() {
            let n = (c * BigRational::from_integer(den.clone())).to_integer();
            let mag = n.abs();
            let sign = if n.is_negative() { "-" } else { "+" };
            let name = monomial_name(e);
            let t = if name == "1" {
                mag.to_string()
            } else if mag.is_one() {
                name
            } else {
                format!("{mag}*{name}")
            };
            if i == 0 {
                body.push_str(&format!("{}{t}", if n.is_negative() { "-" } else { "" }));
            } else {
                body.push_str(&format!(" {sign} {t}"));
            }
        }
        if den.is_one() {
            write!(f, "{body}")
        } else if self.terms.len() == 1 {
            write!(f, "{body}/{den}")
        } else {
            write!(f, "({body})/{den}")
        }
    }
}

impl Serialize for PontryaginPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Power sums `P_m = Σ yᵢᵐ` in elementary symmetric functions `pⱼ`,
/// `m = 1..=k`, by Newton's identities.
fn power_sums(k: usize) -> Vec<PontryaginPolynomial> {
    let w = k as u32;
    let mut ps: Vec<PontryaginPolynomial> = Vec::with_capacity(k);
    for m in 1..=k {
        let mut pm = PontryaginPolynomial::p(m).scale(&q(if m % 2 == 1 { m as i64 } else { -(m as i64) }));
        for i in 1..m {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            pm = pm.add(&PontryaginPolynomial::p(i).mul_truncated(&ps[m - i - 1], w).scale(&q(sign)));
        }
        ps.push(pm);
    }
    ps
}

/// Degree-`4k` term of `Π g(xᵢ)` in the elementary symmetric functions
/// `pⱼ` of the `xᵢ²`. `g` must be even with `g(0) = 1`.
pub fn multiplicative_sequence(g: &FormalSeries, k: usize) -> Result<PontryaginPolynomial> {
    if 2 * k > g.order() {
        return Err(Error::Series(format!("series of order {} is too short for degree {}", g.order(), 4 * k)));
    }
    if k == 0 {
        return Ok(PontryaginPolynomial::one());
    }
    // log Π G(yᵢ) = Σ_m c_m P_m, then exponentiate.
    let big_g = g.in_square()?;
    let log_g = FormalSeries::new(k, big_g.coeffs()).log()?;
    let ps = power_sums(k);
    let w = k as u32;
    let mut x = PontryaginPolynomial::default();
    for m in 1..=k {
        x = x.add(&ps[m - 1].scale(&log_g.coeff(m)));
    }
    let mut result = PontryaginPolynomial::one();
    let mut power = PontryaginPolynomial::one();
    let mut fact = BigInt::one();
    for n in 1..=k {
        power = power.mul_truncated(&x, w);
        fact *= n;
        result = result.add(&power.scale(&BigRational::new(BigInt::one(), fact.clone())));
    }
    Ok(result.part_of_weight(w))
}

/// A named even characteristic series.
pub trait CharacteristicSeries: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn series(&self, order: usize) -> Result<FormalSeries>;

    /// Degree-`4k` polynomial of the associated multiplicative sequence.
    fn polynomial(&self, k: usize) -> Result<PontryaginPolynomial> {
        multiplicative_sequence(&self.series((2 * k).max(2))?, k)
    }
}

struct LGenus;

impl CharacteristicSeries for LGenus {
    fn name(&self) -> &'static str {
        "l-genus"
    }

    fn description(&self) -> &'static str {
        "Hirzebruch L-genus, x/tanh(x)"
    }

    fn series(&self, order: usize) -> Result<FormalSeries> {
        l_genus_series(order)
    }
}

struct SpinWu;

impl CharacteristicSeries for SpinWu {
    fn name(&self) -> &'static str {
        "spin-wu"
    }

    fn description(&self) -> &'static str {
        "integral Wu class of spin bundles, sqrt(f(x)f(-x))"
    }

    fn series(&self, order: usize) -> Result<FormalSeries> {
        spin_wu_series(order)
    }
}

struct SpinWuInverse;

impl CharacteristicSeries for SpinWuInverse {
    fn name(&self) -> &'static str {
        "spin-wu-inverse"
    }

    fn description(&self) -> &'static str {
        "spin Wu class of the stable inverse -T, in the Pontryagin classes of T"
    }

    fn series(&self, order: usize) -> Result<FormalSeries> {
        spin_wu_series(order)?.inverse()
    }
}

/// Name-indexed characteristic series.
pub struct SeriesRegistry {
    entries: Vec<Box<dyn CharacteristicSeries>>,
}

impl SeriesRegistry {
    pub fn empty() -> Self {
        SeriesRegistry { entries: Vec::new() }
    }

    pub fn register<S: CharacteristicSeries + 'static>(&mut self, s: S) {
        self.entries.push(Box::new(s));
    }

    pub fn get(&self, name: &str) -> Result<&dyn CharacteristicSeries> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::Input(format!("unknown series {name:?}; known: {}", self.names().join(", "))))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn CharacteristicSeries> {
        self.entries.iter().map(|e| e.as_ref())
    }
}

impl Default for SeriesRegistry {
    fn default() -> Self {
        let mut r = SeriesRegistry::empty();
        r.register(LGenus);
        r.register(SpinWu);
        r.register(SpinWuInverse);
        r
    }
}

/// `ν^spin_{4k}`.
pub fn spin_wu(k: usize) -> Result<PontryaginPolynomial> {
    SpinWu.polynomial(k)
}

/// `ν^spin_{4k}(−T)` in the Pontryagin classes of `T`.
pub fn spin_wu_inverse_bundle(k: usize) -> Result<PontryaginPolynomial> {
    SpinWuInverse.polynomial(k)
}

/// `L_{4k}`.
pub fn l_polynomial(k: usize) -> Result<PontryaginPolynomial> {
    LGenus.polynomial(k)
}

/// Polynomials over Z/2 in `α, ε, ν₁, ν₂, …` modulo `ε²`, graded with
/// `|α| = |ε| = 1`, `|νᵢ| = i`, truncated above a total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WuPolynomial {
    order: usize,
    /// Monomials with coefficient 1, as exponents `[α, ε, ν₁, ν₂, …]`.
    monomials: BTreeSet<Vec<u32>>,
}

impl WuPolynomial {
    fn nvars(order: usize) -> usize {
        2 + order
    }

    fn degree_of(e: &[u32]) -> usize {
        e[0] as usize + e[1] as usize + e[2..].iter().enumerate().map(|(i, &k)| (i + 1) * k as usize).sum::<usize>()
    }

    pub fn zero(order: usize) -> Self {
        WuPolynomial { order, monomials: BTreeSet::new() }
    }

    pub fn one(order: usize) -> Self {
        let mut p = Self::zero(order);
        p.toggle(vec![0; Self::nvars(order)]);
        p
    }

    fn var(order: usize, i: usize) -> Self {
        let mut e = vec![0; Self::nvars(order)];
        e[i] = 1;
        let mut p = Self::zero(order);
        p.toggle(e);
        p
    }

    pub fn alpha(order: usize) -> Self {
        Self::var(order, 0)
    }

    pub fn epsilon(order: usize) -> Self {
        Self::var(order, 1)
    }

    /// `νᵢ`, `i ≥ 1`.
    pub fn nu(order: usize, i: usize) -> Self {
        if i > order {
            return Self::zero(order);
        }
        Self::var(order, 1 + i)
    }

    fn toggle(&mut self, e: Vec<u32>) {
        if e[1] > 1 || Self::degree_of(&e) > self.order {
            return;
        }
        if !self.monomials.remove(&e) {
            self.monomials.insert(e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for e in &other.monomials {
            out.toggle(e.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.order);
        for a in &self.monomials {
            for b in &other.monomials {
                out.toggle(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        out
    }

    /// `1/(1+u)` for `u` without constant term.
    pub fn inverse(&self) -> Result<Self> {
        let one = Self::one(self.order);
        if !self.monomials.contains(&vec![0; Self::nvars(self.order)]) {
            return Err(Error::Series("not invertible".into()));
        }
        let u = self.add(&one);
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..self.order {
            power = power.mul(&u);
            acc = acc.add(&power);
        }
        Ok(acc)
    }

    /// Sets `ε = 0`.
    pub fn epsilon_free(&self) -> Self {
        WuPolynomial { order: self.order, monomials: self.monomials.iter().filter(|e| e[1] == 0).cloned().collect() }
    }

    /// `Σ_{n≥0} w^{2ⁿ−1}`, the total Wu class of a line bundle with `w₁ = w`.
    pub fn line_wu(w: &Self) -> Self {
        let order = w.order;
        let mut acc = Self::one(order);
        let mut power = w.clone();
        let mut exp = 1usize;
        while exp <= order {
            acc = acc.add(&power);
            // w^{2^{n+1}−1} = w^{2ⁿ−1} · w^{2ⁿ}.
            let mut sq = w.clone();
            for _ in 0..exp {
                sq = sq.mul(w);
            }
            power = power.mul(&sq);
            exp = 2 * exp + 1;
        }
        acc
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

/// Expands `ν_t(V)·ν(L_α⊗H)/(ν(L_α)ν(H))` with `w₁(L_α) = α`, `w₁(H) = ε`
/// and compares it with `ν_t(V)(1 + ε Σ_{n≥1} α^{2ⁿ−1})` through total
/// degree `order`.
pub fn change_of_spin_identity(order: usize) -> Result<bool> {
    let (lhs, rhs) = change_of_spin_sides(order)?;
    Ok(lhs == rhs)
}

/// Both sides of [`change_of_spin_identity`].
pub fn change_of_spin_sides(order: usize) -> Result<(WuPolynomial, WuPolynomial)> {
    let a = WuPolynomial::alpha(order);
    let e = WuPolynomial::epsilon(order);
    let mut nu_t = WuPolynomial::one(order);
    for i in 1..=order {
        nu_t = nu_t.add(&WuPolynomial::nu(order, i));
    }
    let num = WuPolynomial::line_wu(&a.add(&e));
    let den = WuPolynomial::line_wu(&a).mul(&WuPolynomial::line_wu(&e));
    let lhs = nu_t.mul(&num).mul(&den.inverse()?);
    let tail = WuPolynomial::line_wu(&a).add(&WuPolynomial::one(order));
    let rhs = nu_t.mul(&WuPolynomial::one(order).add(&e.mul(&tail)));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn g_matches_table() {
        let g = spin_wu_series(6).unwrap();
        assert_eq!(g, FormalSeries::new(6, &[q(1), q(0), rat(-1, 2), q(0), rat(-9, 8), q(0), rat(-17, 16)]));
    }

    #[test]
    fn sqrt_round_trip() {
        let s = FormalSeries::from_i64(9, &[1, 1]);
        let r = s.sqrt().unwrap();
        assert_eq!(r.mul(&r).unwrap(), s);
        assert_eq!(FormalSeries::one(5).sqrt().unwrap(), FormalSeries::one(5));
        assert!(FormalSeries::from_i64(3, &[2, 1]).sqrt().is_err());
    }

    #[test]
    fn wu_series_shape() {
        assert_eq!(wu_line_series(7), FormalSeries::from_i64(7, &[1, 1, 0, 1, 0, 0, 0, 1]));
        assert_eq!(wu_line_series(0), FormalSeries::one(0));
        assert_eq!(wu_line_series_mod2(8), vec![1, 1, 0, 1, 0, 0, 0, 1, 0]);
    }

    #[test]
    fn delta_of_exponential_is_one() {
        let d = delta_two_variable(&FormalSeries::exp_x(8)).unwrap();
        assert_eq!(d, MultiSeries::constant(2, 8, q(1)));
        let d = delta_two_variable(&FormalSeries::one(5)).unwrap();
        assert_eq!(d, MultiSeries::constant(2, 5, q(1)));
    }

    #[test]
    fn delta_symmetric_and_cocycle() {
        let g = spin_wu_series(8).unwrap();
        let d = delta_two_variable(&g).unwrap();
        assert_eq!(d, d.swap(0, 1));
        assert!(delta_cocycle_holds(&g, 8).unwrap());
        assert!(delta_cocycle_holds(&wu_line_series(6), 6).unwrap());
    }

    #[test]
    fn delta_g_is_integral() {
        assert!(delta_g_integral(12).unwrap());
        // g itself is not integral.
        assert!(!spin_wu_series(4).unwrap().is_integral());
    }

    #[test]
    fn mod4_squares() {
        for d in [0, 4, 12] {
            assert!(mod4_square_check(d).unwrap(), "order {d}");
        }
    }

    #[test]
    fn l_polynomials() {
        assert_eq!(l_polynomial(1).unwrap(), PontryaginPolynomial::from_terms(&[(&[1], 1, 3)]));
        assert_eq!(l_polynomial(2).unwrap(), PontryaginPolynomial::from_terms(&[(&[0, 1], 7, 45), (&[2], -1, 45)]));
    }

    #[test]
    fn spin_wu_tables() {
        assert_eq!(spin_wu(1).unwrap(), PontryaginPolynomial::from_terms(&[(&[1], -1, 2)]));
        assert_eq!(spin_wu(2).unwrap(), PontryaginPolynomial::from_terms(&[(&[0, 1], 20, 8), (&[2], -9, 8)]));
        assert_eq!(
            spin_wu(3).unwrap(),
            PontryaginPolynomial::from_terms(&[(&[0, 0, 1], -80, 16), (&[1, 1], 60, 16), (&[3], -17, 16)])
        );
        assert_eq!(spin_wu_inverse_bundle(1).unwrap(), PontryaginPolynomial::from_terms(&[(&[1], 1, 2)]));
        assert_eq!(
            spin_wu_inverse_bundle(2).unwrap(),
            PontryaginPolynomial::from_terms(&[(&[0, 1], -20, 8), (&[2], 11, 8)])
        );
        assert_eq!(
            spin_wu_inverse_bundle(3).unwrap(),
            PontryaginPolynomial::from_terms(&[(&[0, 0, 1], 80, 16), (&[1, 1], -100, 16), (&[3], 37, 16)])
        );
        assert_eq!(spin_wu(2).unwrap().to_string(), "(20*p2 - 9*p1^2)/8");
        assert_eq!(spin_wu(1).unwrap().to_string(), "-p1/2");
        assert_eq!(spin_wu(3).unwrap().to_string(), "(-80*p3 + 60*p1*p2 - 17*p1^3)/16");
    }

    #[test]
    fn multiplicative_sequence_on_sums() {
        // For a sum of two rank-2 pieces with roots a, b the product g(a)g(b)
        // must match the polynomial at p₁ = a² + b², p₂ = a²b².
        let g = spin_wu_series(8).unwrap();
        let (a2, b2) = (q(3), q(-2));
        let gy = g.in_square().unwrap();
        let eval = |y: &BigRational| -> Vec<BigRational> {
            let mut pw = BigRational::one();
            gy.coeffs()
                .iter()
                .map(|c| {
                    let t = c * &pw;
                    pw *= y;
                    t
                })
                .collect()
        };
        let (ga, gb) = (eval(&a2), eval(&b2));
        let p = [&a2 + &b2, &a2 * &b2];
        for k in 1..=4 {
            let expected: BigRational = (0..=k).map(|i| &ga[i] * &gb[k - i]).sum();
            assert_eq!(multiplicative_sequence(&g, k).unwrap().evaluate(&p), expected, "k={k}");
        }
    }

    #[test]
    fn change_of_spin() {
        for d in [1, 4, 8] {
            assert!(change_of_spin_identity(d).unwrap(), "order {d}");
        }
        let (lhs, _) = change_of_spin_sides(6).unwrap();
        let mut nu_t = WuPolynomial::one(6);
        for i in 1..=6 {
            nu_t = nu_t.add(&WuPolynomial::nu(6, i));
        }
        assert_eq!(lhs.epsilon_free(), nu_t);
    }

    #[test]
    fn registry_names() {
        let r = SeriesRegistry::default();
        assert_eq!(r.names(), vec!["l-genus", "spin-wu", "spin-wu-inverse"]);
        assert!(r.get("a-hat").is_err());
        assert_eq!(r.get("l-genus").unwrap().polynomial(1).unwrap(), l_polynomial(1).unwrap());
    }
}
