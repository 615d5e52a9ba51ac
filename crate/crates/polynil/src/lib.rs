//! Exact structure and order of nilpotent and polynilpotent multipliers of
//! finitely generated abelian groups and of nilpotent products of cyclic
//! groups, computed from closed-form exponent formulas, together with
//! brute-force enumeration oracles and extremality checkers.

pub mod engine;
pub mod exponents;
pub mod group;
pub mod hall;
mod numbers;
pub mod parse;
pub mod theorems;
pub mod verify;

pub use engine::{
    is_extremal, multiplier, multiplier_abelian_nilpotent, multiplier_abelian_polynilpotent,
    multiplier_multiproduct_polynilpotent, multiplier_product_c_nilpotent,
    multiplier_product_polynilpotent, EngineError, ExponentSequence, ExtremalityVerdict,
    MultiplierReport,
};
pub use exponents::{
    beta, d_exponent, e_exponent, f_exponent, g_exponent, h_value, mobius, nested_tail, u_value,
    witt, witt64, ClassRow, ExponentError,
};
pub use group::{
    AbelianStructure, CyclicFactor, GroupError, GroupOrder, GroupSpec, PPowerOrder, ProductClasses,
};
pub use hall::{
    count_containing, hall_basis, nested_hall_count, BasicCommutator, HallBasis, HallError,
    ResourceCaps,
};
pub use parse::{parse_group, ParseError};
pub use theorems::{check_hypotheses, HypothesisCheck, HypothesisReport, Theorem};
pub use verify::{
    check_bounds, check_equality_i, check_equality_sweep, classify_extremal,
    classify_extremal_mixed, find_inequality_counterexample, partitions,
    verify_difference_monotonicity, CheckRecord, ClassifyEntry, ClassifyReport, EqualityCheck,
    InequalityCounterexample, PartitionIter, VerificationReport,
};
