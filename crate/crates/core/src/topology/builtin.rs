//! Library of named triangulations. Each entry knows its integral
//! cohomology and is checked against it the first time it is loaded.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::cohomology::IntegralCohomology;
use super::complex::{ComplexSpec, SimplicialComplex};
use super::manifold::Manifold;
use super::prism::ProductComplex;
use crate::error::{Error, Result};
use crate::linalg::{FiniteAbelianGroup, GroupDescription};

/// A named triangulation with known cohomology.
pub trait BuiltinComplex: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn build(&self) -> Result<SimplicialComplex>;

    /// `Hᵏ(K;Z)` as `(free rank, torsion factors)` for `k = 0..=dim`.
    fn cohomology(&self) -> Vec<(usize, Vec<u64>)>;
}

struct SimplexBoundary {
    name: &'static str,
    description: &'static str,
    n: usize,
}

impl BuiltinComplex for SimplexBoundary {
    fn name(&self) -> &'static str {
        self.name
    }

    fn description(&self) -> &'static str {
        self.description
    }

    fn build(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::simplex_boundary(self.n)
    }

    fn cohomology(&self) -> Vec<(usize, Vec<u64>)> {
        let d = self.n - 1;
        (0..=d).map(|k| (usize::from(k == 0 || k == d), vec![])).collect()
    }
}

struct Point;

impl BuiltinComplex for Point {
    fn name(&self) -> &'static str {
        "point"
    }

    fn description(&self) -> &'static str {
        "a single vertex"
    }

    fn build(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::new(1, &[vec![0]])
    }

    fn cohomology(&self) -> Vec<(usize, Vec<u64>)> {
        vec![(1, vec![])]
    }
}

/// A facet list shipped as JSON.
struct FacetFile {
    name: &'static str,
    description: &'static str,
    json: &'static str,
    cohomology: &'static [(usize, &'static [u64])],
}

impl BuiltinComplex for FacetFile {
    fn name(&self) -> &'static str {
        self.name
    }

    fn description(&self) -> &'static str {
        self.description
    }

    fn build(&self) -> Result<SimplicialComplex> {
        let spec: ComplexSpec =
            serde_json::from_str(self.json).map_err(|e| Error::Input(format!("{}: {e}", self.name)))?;
        SimplicialComplex::from_spec(&spec)
    }

    fn cohomology(&self) -> Vec<(usize, Vec<u64>)> {
        self.cohomology.iter().map(|(r, t)| (*r, t.to_vec())).collect()
    }
}

/// Staircase product of two other entries.
struct Product {
    name: &'static str,
    description: &'static str,
    left: usize,
    right: usize,
    cohomology: &'static [(usize, &'static [u64])],
}

impl BuiltinComplex for Product {
    fn name(&self) -> &'static str {
        self.name
    }

    fn description(&self) -> &'static str {
        self.description
    }

    fn build(&self) -> Result<SimplicialComplex> {
        let l = Arc::new(SimplicialComplex::simplex_boundary(self.left)?);
        let r = Arc::new(SimplicialComplex::simplex_boundary(self.right)?);
        Ok(ProductComplex::new(l, r)?.complex().as_ref().clone())
    }

    fn cohomology(&self) -> Vec<(usize, Vec<u64>)> {
        self.cohomology.iter().map(|(r, t)| (*r, t.to_vec())).collect()
    }
}

/// Name-indexed set of built-in complexes.
pub struct ComplexRegistry {
    entries: Vec<Box<dyn BuiltinComplex>>,
}

impl ComplexRegistry {
    pub fn empty() -> Self {
        ComplexRegistry { entries: Vec::new() }
    }

    pub fn register<C: BuiltinComplex + 'static>(&mut self, entry: C) {
        self.entries.push(Box::new(entry));
    }

    pub fn get(&self, name: &str) -> Option<&dyn BuiltinComplex> {
        self.entries.iter().find(|e| e.name() == name).map(|e| e.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn BuiltinComplex> {
        self.entries.iter().map(|e| e.as_ref())
    }
}

impl Default for ComplexRegistry {
    fn default() -> Self {
        let mut r = ComplexRegistry::empty();
        r.register(Point);
        r.register(SimplexBoundary { name: "s1", description: "circle, boundary of the 2-simplex", n: 2 });
        r.register(SimplexBoundary { name: "s2", description: "2-sphere, boundary of the 3-simplex", n: 3 });
        r.register(SimplexBoundary { name: "s3", description: "3-sphere, boundary of the 4-simplex", n: 4 });
        r.register(SimplexBoundary { name: "s4", description: "4-sphere, boundary of the 5-simplex", n: 5 });
        r.register(FacetFile {
            name: "rp2",
            description: "real projective plane, 6 vertices",
            json: include_str!("../../data/rp2_6.json"),
            cohomology: &[(1, &[]), (0, &[]), (0, &[2])],
        });
        r.register(FacetFile {
            name: "rp3",
            description: "real projective 3-space, 11 vertices",
            json: include_str!("../../data/rp3_11.json"),
            cohomology: &[(1, &[]), (0, &[]), (0, &[2]), (1, &[])],
        });
        r.register(FacetFile {
            name: "t2",
            description: "torus, 7 vertices",
            json: include_str!("../../data/torus_7.json"),
            cohomology: &[(1, &[]), (2, &[]), (1, &[])],
        });
        r.register(FacetFile {
            name: "cp2",
            description: "complex projective plane, 9 vertices",
            json: include_str!("../../data/cp2_9.json"),
            cohomology: &[(1, &[]), (0, &[]), (1, &[]), (0, &[]), (1, &[])],
        });
        r.register(Product {
            name: "s2xs2",
            description: "product of two 2-spheres, staircase triangulation of two boundary 3-simplices",
            left: 3,
            right: 3,
            cohomology: &[(1, &[]), (0, &[]), (2, &[]), (0, &[]), (1, &[])],
        });
        r
    }
}

/// Checks an entry's integral cohomology against its declared groups.
pub fn validate(entry: &dyn BuiltinComplex, complex: &Arc<SimplicialComplex>) -> Result<()> {
    let expected = entry.cohomology();
    if expected.len() != complex.dim() + 1 {
        return Err(Error::InvalidComplex(format!("{}: unexpected dimension {}", entry.name(), complex.dim())));
    }
    for (k, (rank, torsion)) in expected.into_iter().enumerate() {
        let want = GroupDescription::new(rank, FiniteAbelianGroup::from_u64(&torsion)?);
        let got = IntegralCohomology::compute(complex, k)?.description();
        if got != want {
            return Err(Error::InvalidComplex(format!("{}: H^{k} is {got}, expected {want}", entry.name())));
        }
    }
    Ok(())
}

fn registry() -> &'static ComplexRegistry {
    static REGISTRY: OnceLock<ComplexRegistry> = OnceLock::new();
    REGISTRY.get_or_init(ComplexRegistry::default)
}

pub fn builtin_names() -> Vec<&'static str> {
    registry().names()
}

pub fn builtin_description(name: &str) -> Option<&'static str> {
    registry().get(name).map(|e| e.description())
}

/// Loads (once) and validates a built-in complex. The same `Arc` is
/// returned on every call, so cochains built from separate calls combine.
pub fn builtin(name: &str) -> Result<Arc<SimplicialComplex>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<SimplicialComplex>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().expect("cache lock").get(name) {
        return Ok(c.clone());
    }
    let entry = registry().get(name).ok_or_else(|| {
        Error::Input(format!("unknown built-in complex {name:?}; known: {}", builtin_names().join(", ")))
    })?;
    let complex = Arc::new(entry.build()?);
    validate(entry, &complex)?;
    let mut guard = cache.lock().expect("cache lock");
    Ok(guard.entry(name.to_string()).or_insert(complex).clone())
}

/// A built-in closed manifold with its orientation convention applied.
pub fn builtin_manifold(name: &str) -> Result<Manifold> {
    Manifold::new(builtin(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_validates() {
        for name in builtin_names() {
            let c = builtin(name).unwrap();
            assert!(Arc::ptr_eq(&c, &builtin(name).unwrap()));
        }
    }

    #[test]
    fn known_f_vectors() {
        assert_eq!(builtin("cp2").unwrap().f_vector(), vec![9, 36, 84, 90, 36]);
        assert_eq!(builtin("rp2").unwrap().f_vector(), vec![6, 15, 10]);
        assert_eq!(builtin("t2").unwrap().f_vector(), vec![7, 21, 14]);
        assert_eq!(builtin("s2xs2").unwrap().count(4), 96);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(builtin("klein"), Err(Error::Input(_))));
    }

    #[test]
    fn bad_declared_cohomology_is_caught() {
        let wrong = FacetFile {
            name: "fake",
            description: "",
            json: include_str!("../../data/rp2_6.json"),
            cohomology: &[(1, &[]), (0, &[]), (1, &[])],
        };
        let c = Arc::new(wrong.build().unwrap());
        assert!(validate(&wrong, &c).is_err());
    }
}
