//! Ordered simplicial complexes and cochain-level algebraic topology.

pub mod builtin;
mod cochain;
mod cohomology;
mod complex;
mod manifold;
mod prism;
mod products;

pub use builtin::{builtin, builtin_manifold, builtin_names, BuiltinComplex, ComplexRegistry};
pub use cochain::{Chain, Cochain, Gf2Cochain, IntCochain, RatCochain};
pub use cohomology::{
    betti_numbers, cohomology_description, FieldCohomology, IntegralCohomology, IntegralHomology, Mod2Cohomology,
    RationalCohomology, Ring,
};
pub use complex::{ComplexSpec, SimplicialComplex};
pub use manifold::{
    change_of_spin_shift, fundamental_cycle, fundamental_cycle_mod2, integral_lift, kappa_manifold, q_lambda, wu_class,
    wu_classes, Manifold, MiddleForm, WuClass, WuSummary,
};
pub use prism::{interval_integral, prism, restrict_end, slant, ProductComplex};
pub use products::{bockstein, cup, cup_i, steenrod_square};
