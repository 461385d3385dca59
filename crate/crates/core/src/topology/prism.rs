//! Staircase triangulations of products, Eilenberg–Zilber shuffles and the
//! slant product.

use std::sync::Arc;

use super::cochain::{Chain, Cochain};
use super::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::Scalar;

/// `K × L` triangulated by monotone staircase paths; vertex `(a,b)` is
/// labelled `a·|L| + b`, so the lexicographic order is the vertex order.
#[derive(Clone, Debug)]
pub struct ProductComplex {
    complex: Arc<SimplicialComplex>,
    left: Arc<SimplicialComplex>,
    right: Arc<SimplicialComplex>,
}

impl ProductComplex {
    pub fn new(left: Arc<SimplicialComplex>, right: Arc<SimplicialComplex>) -> Result<Self> {
        let nr = right.vertex_count();
        let mut facets = Vec::new();
        for f in left.facets() {
            for g in right.facets() {
                for (_, path) in shuffles(f, g, nr) {
                    facets.push(path);
                }
            }
        }
        let complex = Arc::new(SimplicialComplex::new(left.vertex_count() * nr, &facets)?);
        Ok(ProductComplex { complex, left, right })
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn left(&self) -> &Arc<SimplicialComplex> {
        &self.left
    }

    pub fn right(&self) -> &Arc<SimplicialComplex> {
        &self.right
    }

    pub fn vertex(&self, a: usize, b: usize) -> usize {
        a * self.right.vertex_count() + b
    }

    /// `EZ(x ⊗ y)` as signed simplices.
    pub fn shuffle_product(&self, x: &[usize], y: &[usize]) -> Vec<(i8, Vec<usize>)> {
        shuffles(x, y, self.right.vertex_count())
    }

    /// `EZ(x ⊗ z)` for a simplex `x` of `K` and a chain `z` on `L`.
    pub fn cross_chain<T: Scalar>(&self, x: &[usize], z: &Chain<T>) -> Result<Chain<T>> {
        if !Arc::ptr_eq(z.complex(), &self.right) {
            return Err(Error::ComplexMismatch);
        }
        let d = x.len() - 1 + z.degree();
        let mut values = vec![T::zero(); self.complex.count(d)];
        for (j, c) in z.values().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let y = self.right.simplex_at(z.degree(), j);
            for (sign, s) in self.shuffle_product(x, y) {
                let i = self.complex.index_of(&s).expect("shuffle simplices lie in the product");
                let term = if sign > 0 { c.clone() } else { -c.clone() };
                values[i] = values[i].clone() + term;
            }
        }
        Chain::new(&self.complex, d, values)
    }
}

/// All `(p,q)`-shuffle simplices of `x × y`, with the shuffle sign.
fn shuffles(x: &[usize], y: &[usize], nr: usize) -> Vec<(i8, Vec<usize>)> {
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(x.len() + y.len() - 1);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        j: usize,
        inversions: usize,
        x: &[usize],
        y: &[usize],
        nr: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<(i8, Vec<usize>)>,
    ) {
        path.push(x[i] * nr + y[j]);
        let (p, q) = (x.len() - 1, y.len() - 1);
        if i == p && j == q {
            out.push((if inversions % 2 == 0 { 1 } else { -1 }, path.clone()));
        }
        if i < p {
            // An x-step after j earlier y-steps passes them all.
            rec(i + 1, j, inversions + j, x, y, nr, path, out);
        }
        if j < q {
            rec(i, j + 1, inversions, x, y, nr, path, out);
        }
        path.pop();
    }
    rec(0, 0, 0, x, y, nr, &mut path, &mut out);
    out
}

/// `M × Δ¹`, the ends labelled 0 and 1.
pub fn prism(m: &Arc<SimplicialComplex>) -> Result<ProductComplex> {
    ProductComplex::new(m.clone(), Arc::new(SimplicialComplex::simplex(1)))
}

/// `(a/z)(x) = a(EZ(x ⊗ z))`.
pub fn slant<T: Scalar>(product: &ProductComplex, a: &Cochain<T>, z: &Chain<T>) -> Result<Cochain<T>> {
    if !Arc::ptr_eq(a.complex(), &product.complex) || !Arc::ptr_eq(z.complex(), &product.right) {
        return Err(Error::ComplexMismatch);
    }
    let d = a
        .degree()
        .checked_sub(z.degree())
        .ok_or_else(|| Error::Degree(format!("slant of a {}-cochain by a {}-chain", a.degree(), z.degree())))?;
    let left = &product.left;
    let mut values = Vec::with_capacity(left.count(d));
    for x in left.simplices(d) {
        let mut acc = T::zero();
        for (j, c) in z.values().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let y = product.right.simplex_at(z.degree(), j);
            for (sign, s) in product.shuffle_product(x, y) {
                let v = c.clone() * a.value_on(&s);
                acc = if sign > 0 { acc + v } else { acc - v };
            }
        }
        values.push(acc);
    }
    Cochain::new(left, d, values)
}

/// Restriction to the end `M × {t}` of a prism.
pub fn restrict_end<T: Scalar>(product: &ProductComplex, a: &Cochain<T>, t: usize) -> Result<Cochain<T>> {
    let point = Chain::simplex(&product.right, &[t])?;
    slant(product, a, &point)
}

/// `∫₀¹ s = s / Z_I` with `Z_I = [0,1]`.
pub fn interval_integral<T: Scalar>(product: &ProductComplex, s: &Cochain<T>) -> Result<Cochain<T>> {
    if product.right.vertex_count() != 2 || product.right.dim() != 1 {
        return Err(Error::InvalidComplex("interval integral needs a prism".into()));
    }
    let interval = Chain::simplex(&product.right, &[0, 1])?;
    slant(product, s, &interval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_cochain, trial_rng};
    use crate::topology::cochain::IntCochain;
    use num_bigint::BigInt;

    #[test]
    fn prism_of_triangle() {
        let tri = Arc::new(SimplicialComplex::simplex(2));
        let p = prism(&tri).unwrap();
        assert_eq!(p.complex().count(3), 3);
        assert_eq!(p.complex().vertex_count(), 6);
    }

    #[test]
    fn shuffle_signs() {
        let p = ProductComplex::new(Arc::new(SimplicialComplex::simplex(1)), Arc::new(SimplicialComplex::simplex(1)))
            .unwrap();
        let mut s = p.shuffle_product(&[0, 1], &[0, 1]);
        s.sort();
        // (0,0)(1,0)(1,1) = [0,2,3] is the identity shuffle; [0,1,3] is odd.
        assert_eq!(s, vec![(-1, vec![0, 1, 3]), (1, vec![0, 2, 3])]);
    }

    #[test]
    fn slant_by_point_is_restriction() {
        let s2 = Arc::new(SimplicialComplex::simplex_boundary(3).unwrap());
        let p = prism(&s2).unwrap();
        let mut rng = trial_rng(9, 0);
        let a: IntCochain = random_cochain(&mut rng, p.complex(), 2, 5);
        let r = restrict_end(&p, &a, 1).unwrap();
        for (i, x) in s2.simplices(2).iter().enumerate() {
            let lifted: Vec<usize> = x.iter().map(|&v| p.vertex(v, 1)).collect();
            assert_eq!(r.values()[i], a.value_on(&lifted));
        }
    }

    #[test]
    fn stokes_on_prism() {
        let s2 = Arc::new(SimplicialComplex::simplex_boundary(3).unwrap());
        let p = prism(&s2).unwrap();
        let mut rng = trial_rng(10, 0);
        for deg in 1..=3 {
            let s: IntCochain = random_cochain(&mut rng, p.complex(), deg, 5);
            let lhs = interval_integral(&p, &s).unwrap().coboundary();
            let ends = restrict_end(&p, &s, 1).unwrap().sub(&restrict_end(&p, &s, 0).unwrap()).unwrap();
            let sign = if deg % 2 == 0 { BigInt::from(-1) } else { BigInt::from(1) };
            let rhs = interval_integral(&p, &s.coboundary()).unwrap().add(&ends.scale(&sign)).unwrap();
            assert_eq!(lhs, rhs, "degree {deg}");
        }
    }
}
