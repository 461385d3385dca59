//! Finitely generated abelian groups `⊕ Z/oᵢ` (`oᵢ = 0` for `Z`) and maps
//! between them as integer matrices, rows indexed by target generators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{GroupDescription, IntMatrix, Lattice, Subquotient};

pub type Orders = Vec<BigInt>;

pub fn orders_from_u64(o: &[u64]) -> Result<Orders> {
    if o.contains(&1) {
        return Err(Error::Input("cyclic order 1 is not allowed; drop the generator".into()));
    }
    Ok(o.iter().map(|&x| BigInt::from(x)).collect())
}

/// Relation lattice `⊕ oᵢZ`.
pub fn relations(orders: &[BigInt]) -> Lattice {
    let cols: Vec<Vec<BigInt>> = orders
        .iter()
        .enumerate()
        .filter(|(_, o)| !o.is_zero())
        .map(|(i, o)| {
            let mut v = vec![BigInt::zero(); orders.len()];
            v[i] = o.clone();
            v
        })
        .collect();
    Lattice::span_vectors(orders.len(), &cols).expect("shapes")
}

pub fn reduce(v: &mut [BigInt], orders: &[BigInt]) {
    for (x, o) in v.iter_mut().zip(orders) {
        if !o.is_zero() {
            *x = x.mod_floor(o);
        }
    }
}

pub fn reduce_matrix(m: &IntMatrix, target: &[BigInt]) -> IntMatrix {
    let mut out = m.clone();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !target[r].is_zero() {
                out[(r, c)] = m[(r, c)].mod_floor(&target[r]);
            }
        }
    }
    out
}

pub fn maps_equal(a: &IntMatrix, b: &IntMatrix, target: &[BigInt]) -> bool {
    a.rows() == b.rows() && a.cols() == b.cols() && reduce_matrix(a, target) == reduce_matrix(b, target)
}

/// `m` defines a homomorphism `⊕ Z/source → ⊕ Z/target`.
pub fn check_hom(m: &IntMatrix, source: &[BigInt], target: &[BigInt], what: &str) -> Result<()> {
    if m.rows() != target.len() || m.cols() != source.len() {
        return Err(Error::DimensionMismatch(format!(
            "{what}: matrix is {}x{}, expected {}x{}",
            m.rows(),
            m.cols(),
            target.len(),
            source.len()
        )));
    }
    for (c, o) in source.iter().enumerate() {
        if o.is_zero() {
            continue;
        }
        for (r, t) in target.iter().enumerate() {
            let v = &m[(r, c)] * o;
            let ok = if t.is_zero() { v.is_zero() } else { v.is_multiple_of(t) };
            if !ok {
                return Err(Error::IllDefinedMap(format!(
                    "{what}: generator {c} of order {o} maps to entry {} in a factor of order {t}",
                    m[(r, c)]
                )));
            }
        }
    }
    Ok(())
}

/// `{x ∈ Z^g : Mₖx ∈ relations(targetₖ) for all k}`.
pub fn preimage(maps: &[(&IntMatrix, &[BigInt])], g: usize) -> Result<Lattice> {
    if maps.is_empty() {
        return Ok(Lattice::full(g));
    }
    let h: usize = maps.iter().map(|(m, _)| m.rows()).sum();
    let mut big = IntMatrix::zeros(h, g + h);
    let mut row = 0;
    for (m, t) in maps {
        if m.cols() != g || t.len() != m.rows() {
            return Err(Error::DimensionMismatch("preimage shapes".into()));
        }
        for r in 0..m.rows() {
            for c in 0..g {
                big[(row + r, c)] = m[(r, c)].clone();
            }
            big[(row + r, g + row + r)] = -t[r].clone();
        }
        row += m.rows();
    }
    let k = Lattice::kernel(&big);
    let rows: Vec<usize> = (0..g).collect();
    Ok(Lattice::span(&k.basis().select_rows(&rows)))
}

/// `M · L` for a lattice `L` in the source.
pub fn image(m: &IntMatrix, l: &Lattice) -> Result<Lattice> {
    Ok(Lattice::span(&m.mul_mat(l.basis())?))
}

/// Homology `ker ∂_out / (im ∂_in + relations)` at a group with the given
/// orders; `out` maps away from it, `inc` maps into it.
pub fn homology(
    orders: &[BigInt],
    out: Option<(&IntMatrix, &[BigInt])>,
    inc: Option<&IntMatrix>,
) -> Result<Subquotient> {
    let g = orders.len();
    let cycles = match out {
        Some((m, t)) => preimage(&[(m, t)], g)?,
        None => Lattice::full(g),
    };
    let mut bounds = relations(orders);
    if let Some(m) = inc {
        bounds = bounds.sum(&image(m, &Lattice::full(m.cols()))?)?;
    }
    Subquotient::new(cycles, &bounds)
}

pub fn describe(orders: &[BigInt]) -> GroupDescription {
    let free = orders.iter().filter(|o| o.is_zero()).count();
    let tors: Vec<BigInt> = orders.iter().filter(|o| !o.is_zero()).cloned().collect();
    GroupDescription::new(free, crate::linalg::FiniteAbelianGroup::from_cyclic_orders(&tors).expect("orders ≥ 2"))
}

pub fn matrix_from_rows(rows: &[Vec<i64>], nrows: usize, ncols: usize, what: &str) -> Result<IntMatrix> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Input(format!("{what}: expected a {nrows}x{ncols} matrix")));
    }
    if nrows == 0 {
        return Ok(IntMatrix::zeros(0, ncols));
    }
    IntMatrix::from_i64_rows(rows)
}

pub fn matrix_to_rows(m: &IntMatrix) -> Vec<Vec<String>> {
    m.to_rows().into_iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(v: &[u64]) -> Orders {
        orders_from_u64(v).unwrap()
    }

    #[test]
    fn homomorphism_check() {
        let m = IntMatrix::from_i64_rows(&[vec![2]]).unwrap();
        assert!(check_hom(&m, &o(&[2]), &o(&[4]), "x").is_ok());
        let m = IntMatrix::from_i64_rows(&[vec![1]]).unwrap();
        assert!(check_hom(&m, &o(&[2]), &o(&[4]), "x").is_err());
        assert!(check_hom(&m, &o(&[2]), &o(&[0]), "x").is_err());
        assert!(check_hom(&m, &o(&[0]), &o(&[3]), "x").is_ok());
    }

    #[test]
    fn homology_of_multiplication() {
        // Z --2--> Z: H at the target is Z/2.
        let m = IntMatrix::from_i64_rows(&[vec![2]]).unwrap();
        let h = homology(&o(&[0]), None, Some(&m)).unwrap();
        assert_eq!(h.description().to_string(), "Z/2");
        let h = homology(&o(&[0]), Some((&m, &o(&[0]))), None).unwrap();
        assert!(h.description().is_trivial());
        // Z/4 --2--> Z/4 kernel is Z/2.
        let h = homology(&o(&[4]), Some((&m, &o(&[4]))), None).unwrap();
        assert_eq!(h.description().to_string(), "Z/2");
    }
}
