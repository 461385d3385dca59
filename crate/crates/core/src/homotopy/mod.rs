//! Simplicial abelian groups, Dold–Kan, and two-term Picard categories.

pub mod doldkan;
pub mod picard;
pub mod presented;

pub use doldkan::{
    dold_kan_isomorphism, gamma, homotopy_groups, normalize, random_chain_complex, unnormalized_homology,
    ChainComplexSpec, ChainComplexZ, DoldKanIso, Gamma, Normalized, SimplicialAbelianGroup, SimplicialGroupSpec,
};
pub use picard::{
    anderson_report, anderson_sequence_check, functor_class_group, pair_is_trivial, random_two_term, AndersonReport,
    ClassGroup, FunctorPair, TwoTermComplex, TwoTermSpec,
};
