// Multiplication tables, partitions and order matrices are addressed by
// element index throughout; iterator rewrites of those loops obscure the
// two-sided indexing.
#![allow(clippy::needless_range_loop)]

//! A verification-grade engine for classifying cosetal extensions of
//! finite monoids with abelian-group kernel.
//!
//! The pipeline runs from multiplication tables up: admissible indexed
//! equivalence relations, compatible weak actions and the poset WAct,
//! weak semidirect and twisted products, factor-set cohomology with Baer
//! sums, morphism and automorphism computation, and the inverse-monoid /
//! inverse-category structures layered over the cohomology groups. Every
//! classifying count is cross-checked against a brute-force oracle.

pub mod action;
pub mod caps;
pub mod classify;
pub mod cohomology;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod indexed;
pub mod io;
pub mod monoid;
pub mod oracle;
pub mod partition;
pub mod product;
pub mod structures;

pub use action::{
    actions_equivalent, check_compatible, enumerate_compatible_actions,
    enumerate_compatible_relations, is_valid, wact_poset, CandidateAction, CompatiblePair,
    WActPoset,
};
pub use caps::Caps;
pub use classify::{classify, ClassificationReport};
pub use cohomology::{
    baer_sum, check_factor_set, cohomology_group, factor_sets_equivalent, inner_factor_set,
    pushforward_l, pushforward_map, CohomologyGroup,
};
pub use error::{Error, Result};
pub use extension::{
    check_crossed_hom, check_extension, check_short_five, extensions_isomorphic,
    extract_invariants, hom_set, reconstruct, z1_group, CosetalInvariants, ExtensionPresentation,
    Z1Group,
};
pub use indexed::{check_admissible, coarse_equivalence, enumerate_admissible, IndexedEqRel};
pub use monoid::{
    abelian_group_witness, check_homomorphism, check_monoid, cokernel, congruence_closure,
    find_isomorphism, kernel, quotient, AbelianGroupWitness, Congruence, Elem, FiniteMonoid,
    MonoidMap,
};
pub use oracle::{oracle_enumerate_cosetal_extensions, oracle_enumerate_factor_sets};
pub use product::{
    check_cosetal, check_special_schreier, check_weakly_schreier, induced_split_extension,
    twisted_product, weak_semidirect, SplitExtension, WSDMonoid,
};
pub use structures::{
    check_inverse_monoid, hat_h2_groupoid, tilde_h2_category, tilde_h2_monoid, FiniteCategory,
    TildeH2Monoid,
};
