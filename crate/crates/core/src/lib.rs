//! Shallow permutations: statistics, the R/L reduction operators, pattern
//! containment, exact generating functions and enumeration.

pub mod enumerate;
pub mod pattern;
pub mod perm;
pub mod series;
pub mod shallow;
pub mod suites;

pub use enumerate::{
    count, descent_table, profile, search_mesh_counterexample, verify, CountQuery, CountTable, EnumerationError,
    Method, Oracle, Statistic,
};
pub use pattern::{avoids, find_occurrence, Anchor, Occurrence, PatternError, PatternSpec};
pub use perm::{
    parse_permutation, reduce, PermError, Permutation, SpecialKind, StatVector, SymmetryClass, SymmetryKind,
};
pub use series::{catalog, closed_form, ClosedForm, GfName, SeriesError};
pub use shallow::{
    achieves_upper_bound, certify_shallow, count_shallow, extend_right, generate_shallow, is_shallow, l_operator,
    r_operator, visit_shallow, wrap_n1, ExtensionSlot, ShallowCertificate, ShallowError, StepClass,
};
pub use suites::{run_suite, Check, Suite, SuiteReport};
