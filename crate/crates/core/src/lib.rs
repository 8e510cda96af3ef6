//! Numerical semigroup tree engine.
//!
//! A numerical semigroup is a co-finite subset of the nonnegative
//! integers closed under addition and containing 0. All of them form a
//! tree: each non-trivial semigroup's parent adds its Frobenius number
//! back, and depth equals genus. This crate enumerates that tree
//! exactly, tabulates semigroups by genus and efficacy (number of
//! children), checks the combinatorial recursions that relate those
//! tables, and estimates the golden-ratio constants the tables converge
//! to.
//!
//! Organization:
//! * [`semigroup`] — the value type: membership, children/parent,
//!   effective generators, descent taxonomy.
//! * [`tree`] — the fast depth-first census ([`count_tables`]) with
//!   optional subtree-level parallelism, visitor enumeration, and the
//!   D_a diagnostic sum.
//! * [`census`] — an independent brute-force oracle over gap sets.
//! * [`recursion`] — exact integer machinery: binomials, Fibonacci,
//!   r(n), the T_S recursion and its closed form, reconstruction of t
//!   from shat, verification reports.
//! * [`asymptotics`] — constant estimates and convergence diagnostics.
//! * [`conjectures`] — numerical probes of the open conjectures.

pub mod asymptotics;
mod bits;
pub mod census;
pub mod conjectures;
pub mod error;
pub mod recursion;
pub mod semigroup;
pub mod tree;

pub use asymptotics::{
    convergence_report, estimate_constants, lemma3_trend, phi, trend_of, ConstantEstimate,
    ConvergenceReport, TrendSummary,
};
pub use census::{brute_force_census, CENSUS_MAX_GENUS};
pub use conjectures::{
    check_conjecture1, check_fibonacci_conjecture, check_ye, estimate_psi, s2_diagonal_check,
    ConjectureReport, PsiFit,
};
pub use error::{Error, Result};
pub use recursion::{
    binet, binom, fib, fib_pascal, shat, t_explicit, t_from_shat, t_recursive, verify_eq10,
    verify_eq8, verify_good_region, verify_lemma1, verify_lemma5, verify_lemma6, w, CellFailure,
    RSequence, SignedTableFn, VerifyReport,
};
pub use semigroup::Semigroup;
pub use tree::{
    count_tables, d_a_sum, enumerate, enumerate_parallel, CountTable, DaSumReport,
    TraversalOptions, MAX_GENUS_LIMIT,
};
