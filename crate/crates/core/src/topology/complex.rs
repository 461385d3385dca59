use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};

/// Finite simplicial complex on vertices `0..n`, ordered by vertex label.
/// Every simplex is stored as a strictly increasing vertex list.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertices: usize,
    facets: Vec<Vec<usize>>,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

/// Wire format: `{"vertices": n, "facets": [[v, ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub vertices: usize,
    pub facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn new(vertices: usize, facets: &[Vec<usize>]) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::InvalidComplex("no facets".into()));
        }
        let mut cleaned: Vec<Vec<usize>> = Vec::with_capacity(facets.len());
        for (i, f) in facets.iter().enumerate() {
            if f.is_empty() {
                return Err(Error::InvalidComplex(format!("facet {i} is empty")));
            }
            if let Some(&v) = f.iter().find(|&&v| v >= vertices) {
                return Err(Error::InvalidComplex(format!("facet {i} uses vertex {v} >= {vertices}")));
            }
            let mut s = f.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex(format!("facet {i} repeats a vertex")));
            }
            cleaned.push(s);
        }
        cleaned.sort();
        cleaned.dedup();

        let dim = cleaned.iter().map(Vec::len).max().unwrap() - 1;
        let mut sets: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); dim + 1];
        for f in &cleaned {
            let m = f.len();
            for mask in 1u64..(1u64 << m) {
                let face: Vec<usize> = (0..m).filter(|&j| mask >> j & 1 == 1).map(|j| f[j]).collect();
                sets[face.len() - 1].insert(face);
            }
        }
        let mut simplices: Vec<Vec<Vec<usize>>> = sets
            .into_iter()
            .map(|s| {
                let mut v: Vec<Vec<usize>> = s.into_iter().collect();
                v.sort();
                v
            })
            .collect();
        // Isolated vertices still count as 0-simplices.
        let used: HashSet<usize> = simplices[0].iter().map(|s| s[0]).collect();
        if used.len() < vertices {
            simplices[0] = (0..vertices).map(|v| vec![v]).collect();
        }
        let index =
            simplices.iter().map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        // Maximal simplices only.
        let facet_set: Vec<Vec<usize>> = cleaned
            .iter()
            .filter(|f| !cleaned.iter().any(|g| g.len() > f.len() && f.iter().all(|v| g.contains(v))))
            .cloned()
            .collect();
        Ok(SimplicialComplex { vertices, facets: facet_set, simplices, index })
    }

    pub fn from_spec(spec: &ComplexSpec) -> Result<Self> {
        Self::new(spec.vertices, &spec.facets)
    }

    pub fn to_spec(&self) -> ComplexSpec {
        ComplexSpec { vertices: self.vertices, facets: self.facets.clone() }
    }

    /// Boundary of the standard `n`-simplex, an `(n-1)`-sphere.
    pub fn simplex_boundary(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidComplex("boundary of a point is empty".into()));
        }
        let facets: Vec<Vec<usize>> = (0..=n).map(|skip| (0..=n).filter(|&v| v != skip).collect()).collect();
        Self::new(n + 1, &facets)
    }

    /// The full standard `n`-simplex.
    pub fn simplex(n: usize) -> Self {
        Self::new(n + 1, &[(0..=n).collect()]).expect("simplex is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// Number of `k`-simplices (zero above the dimension).
    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn simplex_at(&self, k: usize, i: usize) -> &[usize] {
        &self.simplices[k][i]
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        if simplex.is_empty() {
            return None;
        }
        self.index.get(simplex.len() - 1)?.get(simplex).copied()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(k, s)| if k % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }

    /// Matrix of `δ: Cᵏ → Cᵏ⁺¹` (rows indexed by `(k+1)`-simplices); the
    /// transpose of the simplicial boundary `∂_{k+1}`.
    pub fn coboundary_matrix<T: Scalar>(&self, k: usize) -> Matrix<T> {
        let rows = self.count(k + 1);
        let cols = self.count(k);
        let mut m = Matrix::zeros(rows, cols);
        let plus = T::one();
        let minus = -T::one();
        for (r, s) in self.simplices(k + 1).iter().enumerate() {
            for j in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(t, _)| t != j).map(|(_, &v)| v).collect();
                let c = self.index[k][&face];
                m[(r, c)] = if j % 2 == 0 { plus.clone() } else { minus.clone() };
            }
        }
        m
    }

    pub fn integer_coboundary(&self, k: usize) -> Matrix<BigInt> {
        self.coboundary_matrix::<BigInt>(k)
    }

    /// Facets of top dimension containing each ridge, in index order.
    fn ridge_incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.dim();
        let mut inc = vec![Vec::new(); self.count(n - 1)];
        for (f, s) in self.simplices(n).iter().enumerate() {
            for j in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(t, _)| t != j).map(|(_, &v)| v).collect();
                inc[self.index[n - 1][&face]].push((f, j));
            }
        }
        inc
    }

    /// Pure, every ridge in exactly two facets, and strongly connected.
    pub fn check_closed_pseudomanifold(&self) -> Result<()> {
        let n = self.dim();
        if n == 0 {
            return if self.vertices == 1 {
                Ok(())
            } else {
                Err(Error::NotPseudoManifold("disconnected 0-complex".into()))
            };
        }
        if self.facets.iter().any(|f| f.len() != n + 1) {
            return Err(Error::NotPseudoManifold("complex is not pure".into()));
        }
        let inc = self.ridge_incidence();
        if let Some((r, list)) = inc.iter().enumerate().find(|(_, l)| l.len() != 2) {
            return Err(Error::NotPseudoManifold(format!(
                "ridge {:?} lies in {} facets",
                self.simplices[n - 1][r],
                list.len()
            )));
        }
        let adj = facet_adjacency(&inc, self.count(n));
        let mut seen = vec![false; self.count(n)];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(f) = queue.pop_front() {
            for &(g, _, _) in &adj[f] {
                if !seen[g] {
                    seen[g] = true;
                    queue.push_back(g);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::NotPseudoManifold("facets are not strongly connected".into()));
        }
        Ok(())
    }

    /// Consistent facet signs `εᵢ ∈ {±1}` with `∂(Σ εᵢ σᵢ) = 0`, the first
    /// facet positive. Requires a closed pseudo-manifold.
    pub fn orientation(&self) -> Result<Vec<i8>> {
        self.check_closed_pseudomanifold()?;
        let n = self.dim();
        if n == 0 {
            return Ok(vec![1]);
        }
        let inc = self.ridge_incidence();
        let adj = facet_adjacency(&inc, self.count(n));
        let mut sign = vec![0i8; self.count(n)];
        sign[0] = 1;
        let mut queue = VecDeque::from([0]);
        while let Some(f) = queue.pop_front() {
            for &(g, jf, jg) in &adj[f] {
                // Contributions ε_f(−1)^{jf} + ε_g(−1)^{jg} must cancel.
                let parity = if (jf + jg) % 2 == 0 { -1 } else { 1 };
                let want = sign[f] * parity;
                if sign[g] == 0 {
                    sign[g] = want;
                    queue.push_back(g);
                } else if sign[g] != want {
                    return Err(Error::NonOrientable);
                }
            }
        }
        Ok(sign)
    }
}

/// For each facet: `(neighbour, face index in self, face index in neighbour)`.
fn facet_adjacency(inc: &[Vec<(usize, usize)>], facets: usize) -> Vec<Vec<(usize, usize, usize)>> {
    let mut adj = vec![Vec::new(); facets];
    for list in inc {
        if let [(a, ja), (b, jb)] = list.as_slice() {
            adj[*a].push((*b, *ja, *jb));
            adj[*b].push((*a, *jb, *ja));
        }
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    #[test]
    fn sphere_counts() {
        let s2 = SimplicialComplex::simplex_boundary(3).unwrap();
        assert_eq!(s2.f_vector(), vec![4, 6, 4]);
        assert_eq!(s2.euler_characteristic(), 2);
        assert_eq!(s2.index_of(&[1, 2, 3]), Some(3));
        assert_eq!(s2.index_of(&[0, 1, 2, 3]), None);
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let s3 = SimplicialComplex::simplex_boundary(4).unwrap();
        for k in 0..3 {
            let d0: IntMatrix = s3.coboundary_matrix(k);
            let d1: IntMatrix = s3.coboundary_matrix(k + 1);
            assert!(d1.mul_mat(&d0).unwrap().is_zero());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SimplicialComplex::new(2, &[vec![0, 2]]).is_err());
        assert!(SimplicialComplex::new(3, &[vec![0, 0]]).is_err());
        assert!(SimplicialComplex::new(3, &[]).is_err());
    }

    #[test]
    fn orientation_of_sphere() {
        let s2 = SimplicialComplex::simplex_boundary(3).unwrap();
        assert_eq!(s2.orientation().unwrap(), vec![1, -1, 1, -1]);
        let disk = SimplicialComplex::simplex(2);
        assert!(matches!(disk.orientation(), Err(Error::NotPseudoManifold(_))));
    }
}
