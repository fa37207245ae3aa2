//! Exact computation of Weil sums over finite fields: table-driven field
//! arithmetic, count-histogram sums, spectra and power moments, closed-form
//! values for Niho exponents, and exhaustive desk-scale verification of the
//! theorem-level identities plus empirical conjecture scanners.
//!
//! Everything is exact integer arithmetic; no floating point appears anywhere
//! in a value path. The naive O(q) evaluation and the coset-accelerated
//! O(p^n) path check each other wherever both apply.

pub mod arith;
pub mod error;
pub mod field;
pub mod niho;
pub mod report;
pub mod verify;
pub mod weil;

mod poly;

pub use error::{Error, Result};
pub use field::{Element, Field, Tower, DEFAULT_SIZE_CAP};
pub use niho::{classify, ExponentClass, HypothesisReport, NormalizedExponent};
pub use report::{spectrum_digest, spectrum_record, SpectrumRecord, TOOL_VERSION};
pub use verify::{
    multiplicity_solver, scan, spectrum_cardinality, verify_four_values, verify_vanishing,
    MultiplicitySolution, Outcome, ScanConfig, ScanSummary, Suite, Verdict,
};
pub use weil::{
    all_rational, kset_count, moments, orbit_report, orbit_sum, r_count_bruteforce, spectrum,
    weil_integer, weil_sum, weil_via_kset, CyclotomicCounts, Domain, KsetCount, MomentReport,
    OrbitReport, Spectrum,
};
