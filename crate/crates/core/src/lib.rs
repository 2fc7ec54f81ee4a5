//! Exact toolkit for k-regular integer sequences given as linear
//! representations: evaluation and closure operations, spectral growth
//! classification of integer matrices, budgeted semigroup exploration,
//! pumping certificates witnessing logarithmic growth, and the
//! surrounding machinery for completely multiplicative automatic
//! sequences and their partial sums.
//!
//! All sequence and matrix arithmetic is arbitrary-precision and exact.
//! Every operation is a pure function of immutable inputs, so values can
//! be shared and evaluated across threads freely.

pub mod error;
pub mod growth;
pub mod jsonio;
pub mod linrep;
pub mod matrix;
pub mod numtheory;
pub mod poly;
pub mod semigroup;
pub mod spectral;
pub mod word;

pub use error::{Error, Result};
pub use growth::{
    build_certificate, log_lower_bound_check, verify_certificate, BuildOutcome,
    GrowthCertificate, GrowthKind, GrowthOptions, LogLbReport, VerifyReport,
};
pub use linrep::{Automaton, LinearRepresentation, ProbeOutcome};
pub use matrix::{IntMatrix, IntVector};
pub use numtheory::{
    builtin, builtin_by_name, discrepancy_scan, g_recursion_check, prime_power_check,
    repunit_identity_check, schlage_puchta_check, BaseFactorization, Builtin,
    CharacterKind, DiscrepancyReport, MultiplicativeSpec,
};
pub use poly::{cyclotomic, IntPolynomial};
pub use semigroup::{
    explore, find_infinite_order_element, spanning_prefixes, spanning_suffixes,
    ExplorationBudget, ExplorationStatus, InfiniteOrderSearch, SemigroupExploration,
};
pub use spectral::{char_poly, classify, cyclotomic_strip, is_defective, Classification, SpectralReport};
pub use word::Word;
