//! Cycle switching, exact constrained enumeration, uniform sampling and
//! subsquare statistics for Latin squares.
//!
//! The [`verify`] module uses the other modules to check, with exact
//! rational arithmetic, the switching-count identities and inequalities
//! that bound the probability of a random Latin square containing a
//! subsquare at a given position.

pub mod cycles;
pub mod enumerate;
pub mod exact;
pub mod sampler;
pub mod square;
pub mod stats;
pub mod subsquares;
pub mod verify;

pub use cycles::{extract_cycle, row_permutation, switch_cycle, Axis, Cycle, CycleError, RowPermutation};
pub use enumerate::{
    build_m, complete, count_constrained, count_delta, enumerate_constrained, ConstraintSpec,
    EnumerateError, EnumerateOptions, PrefixCellSet,
};
pub use exact::{BigCount, ExactProb, Ratio};
pub use square::{LatinSquare, PartialSquare, Role, RoleMap, SquareError, SubsquareLocation};
pub use subsquares::{count_intercalates, enumerate_subsquares, is_subsquare};
