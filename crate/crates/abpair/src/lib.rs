//! Exact arithmetic for finite abelian groups given as explicit lists of
//! cyclic factors: tensor products, bilinear maps and their kernels,
//! non-degeneracy (pairing) decisions, quotient constructions, and character
//! duality, plus a brute-force verification suite that re-derives the main
//! counting and non-degeneracy facts by raw enumeration.
//!
//! Everything that walks a group's elements takes an explicit cap on how many
//! states it may visit and fails loudly past it; nothing is ever truncated.

mod arith;
mod error;
mod odometer;

pub mod bilinear;
pub mod duality;
pub mod groups;
pub mod oracle;
pub mod tensor;

pub use error::{Error, Result};
pub use groups::{
    count_homs_by_enumeration, enumerate_homs, hom_count, FinAbGroup, GroupElement,
    GroupStructure, Homomorphism,
};
pub use tensor::{
    canonical_map, induced_bilinear_from_homs, primary_tensor_formula, tensor_cyclic,
    tensor_of_homs, tensor_product, TensorResult,
};
pub use bilinear::{
    bilinear_count, canonical_nondeg_fastpath, count_bilinear_by_enumeration,
    count_pairings_cyclic, direct_product_combine, enumerate_bilinear, pairing_exists,
    visit_bilinear, BilinearMap, BilinearMaps, FastpathRule, KernelPair, QuotientPairing,
    QuotientScratch,
};
pub use duality::{
    dual_group, duality_pairing, find_primitive_root, realize_in_prime_field, Character,
    CyclicTarget, DualGroup, PrimeFieldRealization, PrimeFieldTable,
};
pub use oracle::{
    abelian_classes, presentations_up_to, verify_bil_hom_count, verify_nondeg_theorems,
    verify_pairing_counts, verify_universal_property, CountBounds, NondegBounds,
    UniversalBounds, VerificationReport,
};

/// Default ceiling on exhaustive enumerations: 2^20 states.
pub const DEFAULT_MAX_ENUM: u64 = 1 << 20;
