//! Brute-force verification suites.
//!
//! Everything here re-derives a claim the closed forms make by independent,
//! exhaustive computation at small scale: sweeping all partitions of a fixed
//! p-group order and comparing multiplier orders against the extremal target,
//! replaying the telescoping equality behind the elementary-abelian
//! characterization, hunting for the smallest counterexample to a plausible
//! but false growth inequality, and cross-checking difference monotonicity
//! against commutator enumeration.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::engine::{self, EngineError};
use crate::exponents::{self, ClassRow};
use crate::group::{GroupError, GroupSpec, PPowerOrder, ProductClasses};
use crate::hall::{self, HallError, ResourceCaps};
use crate::theorems::{check_hypotheses, Theorem};

/// Iterator over the partitions of a fixed total in reverse lexicographic
/// order, from `(m)` down to `(1, 1, ..., 1)`.
///
/// Partitions are emitted as nonincreasing part vectors. The total `0` has
/// exactly one partition, the empty vector.
#[derive(Debug, Clone)]
pub struct PartitionIter {
    total: u32,
    current: Option<Vec<u32>>,
}

/// All partitions of `total`, largest-first.
pub fn partitions(total: u32) -> PartitionIter {
    let first = if total == 0 { Vec::new() } else { vec![total] };
    PartitionIter {
        total,
        current: Some(first),
    }
}

impl Iterator for PartitionIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.current.take()?;
        self.current = successor(&current, self.total);
        Some(current)
    }
}

/// The next partition after `parts` in reverse lexicographic order: truncate
/// at the rightmost part exceeding 1, decrement it, and redistribute the
/// freed remainder in chunks no larger than the decremented part.
fn successor(parts: &[u32], total: u32) -> Option<Vec<u32>> {
    let pos = parts.iter().rposition(|&part| part > 1)?;
    let mut next = parts[..=pos].to_vec();
    next[pos] -= 1;
    let cap = next[pos];
    let mut remainder = total - next.iter().sum::<u32>();
    while remainder > 0 {
        let chunk = remainder.min(cap);
        next.push(chunk);
        remainder -= chunk;
    }
    Some(next)
}

fn fmt_partition(parts: &[u32]) -> String {
    let body: Vec<String> = parts.iter().map(u32::to_string).collect();
    format!("({})", body.join(","))
}

/// One elementary check performed by a verification suite: a relation
/// between two computed quantities, with both sides recorded.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub suite: &'static str,
    pub instance: String,
    pub relation: &'static str,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

/// The outcome of a verification sweep: every check it ran.
#[derive(Debug, Clone, Default, Serialize)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.records.len() - self.passed()
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    fn push(
        &mut self,
        suite: &'static str,
        instance: String,
        relation: &'static str,
        lhs: impl fmt::Display,
        rhs: impl fmt::Display,
        pass: bool,
    ) {
        self.records.push(CheckRecord {
            suite,
            instance,
            relation,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass,
        });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} checks, {} failed", self.records.len(), self.failed())
    }
}

/// One row of an extremality sweep: a partition, the exponent of the
/// multiplier order it produces, and whether it attains the target.
#[derive(Debug, Clone)]
pub struct ClassifyEntry {
    pub partition: Vec<u32>,
    pub exponent: BigUint,
    pub attains: bool,
}

impl Serialize for ClassifyEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("ClassifyEntry", 3)?;
        state.serialize_field("partition", &self.partition)?;
        state.serialize_field("exponent", &self.exponent.to_string())?;
        state.serialize_field("attains", &self.attains)?;
        state.end()
    }
}

/// The result of sweeping every group of order `p^m` in a fixed product
/// shape and comparing multiplier orders against the extremal target.
#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub prime: u64,
    pub total_exponent: u32,
    pub row: ClassRow,
    pub classes: ProductClasses,
    pub target: PPowerOrder,
    pub entries: Vec<ClassifyEntry>,
    pub maximizers: Vec<Vec<u32>>,
    /// True when the elementary abelian partition is the unique maximizer
    /// and its multiplier order equals the closed-form target.
    pub claim_holds: bool,
}

impl fmt::Display for ClassifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "sweep of groups of order {}^{} (row {}, target {}):",
            self.prime, self.total_exponent, self.row, self.target
        )?;
        for entry in &self.entries {
            let mark = if entry.attains { "  <- attains target" } else { "" };
            writeln!(
                f,
                "  {:<16} multiplier order {}^{}{}",
                fmt_partition(&entry.partition),
                self.prime,
                entry.exponent,
                mark
            )?;
        }
        let maximizers: Vec<String> = self.maximizers.iter().map(|p| fmt_partition(p)).collect();
        writeln!(f, "  maximizers: {}", maximizers.join(", "))?;
        write!(
            f,
            "  claim (unique maximizer is elementary abelian, at the target): {}",
            if self.claim_holds { "holds" } else { "FAILS" }
        )
    }
}

fn finish_classify(
    prime: u64,
    total_exponent: u32,
    row: &ClassRow,
    classes: ProductClasses,
    target_exponent: BigUint,
    entries: Vec<ClassifyEntry>,
) -> ClassifyReport {
    let max = entries
        .iter()
        .map(|entry| entry.exponent.clone())
        .max()
        .unwrap_or_default();
    let maximizers: Vec<Vec<u32>> = entries
        .iter()
        .filter(|entry| entry.exponent == max)
        .map(|entry| entry.partition.clone())
        .collect();
    let elementary = vec![1u32; total_exponent as usize];
    let claim_holds = maximizers == vec![elementary] && max == target_exponent;
    ClassifyReport {
        prime,
        total_exponent,
        row: row.clone(),
        classes,
        target: PPowerOrder {
            prime,
            exponent: target_exponent,
        },
        entries,
        maximizers,
        claim_holds,
    }
}

/// Sweep every abelian group of order `p^m` (equivalently, every partition
/// of `m`) under the uniform product class `n`, compute the multiplier of
/// the requested row for each, and test that the elementary abelian group
/// is the unique maximizer, attaining the closed-form target exponent.
///
/// The hypotheses of the extremal statement are probed on a two-factor
/// elementary instance up front; a violation (for example `p <= n`) refuses
/// the whole sweep rather than producing a vacuous report.
pub fn classify_extremal(
    prime: u64,
    total_exponent: u32,
    row: &ClassRow,
    product_class: u32,
) -> Result<ClassifyReport, EngineError> {
    if total_exponent >= 2 {
        let probe = GroupSpec::p_group_product(prime, &[1, 1], product_class)?;
        let report = check_hypotheses(&probe, row, Theorem::T3_1);
        if !report.all_satisfied() {
            return Err(EngineError::HypothesesViolated(report));
        }
    }
    let target = exponents::d_exponent(row, product_class, u64::from(total_exponent))?;
    let mut entries = Vec::new();
    for partition in partitions(total_exponent) {
        let group = GroupSpec::p_group_product(prime, &partition, product_class)?;
        let multiplier = engine::multiplier(&group, row)?;
        let exponent = multiplier.order.exponent_of(prime);
        let attains = exponent == target;
        entries.push(ClassifyEntry {
            partition,
            exponent,
            attains,
        });
    }
    Ok(finish_classify(
        prime,
        total_exponent,
        row,
        ProductClasses::Uniform(product_class),
        target,
        entries,
    ))
}

/// Sweep every abelian group of order `p^m` under a full list of pair
/// classes (one per adjacent pair in the elementary decomposition, so
/// `m - 1` entries); a partition with `d` parts uses the first `d - 1`.
/// Tests that the elementary abelian group is the unique maximizer,
/// attaining the mixed-class closed-form target exponent.
pub fn classify_extremal_mixed(
    prime: u64,
    total_exponent: u32,
    row: &ClassRow,
    classes: &[u32],
) -> Result<ClassifyReport, EngineError> {
    let expected = total_exponent.saturating_sub(1) as usize;
    if total_exponent == 0 || classes.len() != expected {
        return Err(EngineError::Group(GroupError::ClassCountMismatch {
            factors: total_exponent as usize,
            expected,
            got: classes.len(),
        }));
    }
    let elementary = vec![1u32; total_exponent as usize];
    let probe = GroupSpec::p_group_multi_product(prime, &elementary, classes.to_vec())?;
    let report = check_hypotheses(&probe, row, Theorem::T3_2);
    if !report.all_satisfied() {
        return Err(EngineError::HypothesesViolated(report));
    }
    let target = exponents::e_exponent(row, classes, 0, total_exponent as usize - 1)?;
    let mut entries = Vec::new();
    for partition in partitions(total_exponent) {
        let used = classes[..partition.len() - 1].to_vec();
        let group = GroupSpec::p_group_multi_product(prime, &partition, used)?;
        let multiplier = engine::multiplier(&group, row)?;
        let exponent = multiplier.order.exponent_of(prime);
        let attains = exponent == target;
        entries.push(ClassifyEntry {
            partition,
            exponent,
            attains,
        });
    }
    Ok(finish_classify(
        prime,
        total_exponent,
        row,
        ProductClasses::PerPair(classes.to_vec()),
        target,
        entries,
    ))
}

/// Both sides of the telescoping identity that pins down when a direct sum
/// of cyclic p-groups reaches the maximal multiplier order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualityCheck {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

/// Evaluate the exactness condition for one partition at nilpotency class
/// `c`: with `b_i` counting weight-`c + 1` basic commutators on `i`
/// letters, the deficit `b_n - b_d` (n the partition total, d its length)
/// equals `sum_{i >= 2} (a_i - 1)(b_i - b_{i-1})` precisely when every part
/// is 1.
pub fn check_equality_i(class: u32, partition: &[u32]) -> EqualityCheck {
    let total: u32 = partition.iter().sum();
    let parts = partition.len() as u32;
    let b = |letters: u32| {
        exponents::witt64(class + 1, u64::from(letters)).expect("weight c + 1 is positive")
    };
    let lhs = b(total) - b(parts);
    let mut rhs = BigUint::zero();
    for (index, &part) in partition.iter().enumerate().skip(1) {
        let letters = index as u32 + 1;
        rhs += BigUint::from(part - 1) * (b(letters) - b(letters - 1));
    }
    EqualityCheck {
        holds: lhs == rhs,
        lhs,
        rhs,
    }
}

/// Replay the exactness condition across every partition of every total up
/// to `max_total`, checking that it holds exactly for the all-ones
/// partitions.
pub fn check_equality_sweep(class: u32, max_total: u32) -> VerificationReport {
    let mut report = VerificationReport::default();
    for total in 1..=max_total {
        for partition in partitions(total) {
            let all_ones = partition.iter().all(|&part| part == 1);
            let check = check_equality_i(class, &partition);
            report.push(
                "equality",
                format!("c={class} partition={}", fmt_partition(&partition)),
                "difference vanishes iff elementary",
                &check.lhs,
                &check.rhs,
                check.holds == all_ones,
            );
        }
    }
    report
}

/// The smallest witness (if any) that `i * w(i) >= w(i + 1)` can hold for
/// the weight-`c + 1` commutator counts `w`, refuting the tempting claim
/// that the count always grows faster than linearly in the alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityCounterexample {
    pub index: u64,
    pub lhs: BigUint,
    pub rhs: BigUint,
}

impl Serialize for InequalityCounterexample {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("InequalityCounterexample", 3)?;
        state.serialize_field("index", &self.index)?;
        state.serialize_field("lhs", &self.lhs.to_string())?;
        state.serialize_field("rhs", &self.rhs.to_string())?;
        state.end()
    }
}

/// Search `1..=bound` for the first `i` with `i * w(i) >= w(i + 1)`, where
/// `w` counts weight-`class + 1` basic commutators. For class 1 the first
/// witness is `i = 3`: `3 * w(3) = 9 >= 6 = w(4)`.
pub fn find_inequality_counterexample(
    class: u32,
    bound: u64,
) -> Option<InequalityCounterexample> {
    for index in 1..=bound {
        let lhs = BigUint::from(index)
            * exponents::witt64(class + 1, index).expect("weight c + 1 is positive");
        let rhs = exponents::witt64(class + 1, index + 1).expect("weight c + 1 is positive");
        if lhs >= rhs {
            return Some(InequalityCounterexample { index, lhs, rhs });
        }
    }
    None
}

/// For every partition of every total up to `max_exponent`, compare the
/// multiplier exponent of the corresponding direct sum of cyclic p-groups
/// against the closed-form bounds: at least the value for its length, at
/// most the value for its total, and equal to the latter exactly when the
/// partition is all ones.
///
/// When the upper bound is 0 (rows like (1,1) at total 2 nest to nothing)
/// every multiplier in the sweep is trivial, so the tightness check demands
/// only that the bound is met, not that attaining it singles anything out.
pub fn check_bounds(
    prime: u64,
    max_exponent: u32,
    row: &ClassRow,
) -> Result<VerificationReport, EngineError> {
    let mut report = VerificationReport::default();
    for total in 1..=max_exponent {
        let upper = exponents::beta(row, u64::from(total));
        for partition in partitions(total) {
            let lower = exponents::beta(row, partition.len() as u64);
            let group = GroupSpec::p_group_product(prime, &partition, 1)?;
            let multiplier = engine::multiplier(&group, row)?;
            let exponent = multiplier.order.exponent_of(prime);
            let instance = format!(
                "p={} partition={} row={}",
                prime,
                fmt_partition(&partition),
                row
            );
            report.push(
                "bounds",
                instance.clone(),
                "rank lower bound <= multiplier exponent",
                &lower,
                &exponent,
                lower <= exponent,
            );
            report.push(
                "bounds",
                instance.clone(),
                "multiplier exponent <= order upper bound",
                &exponent,
                &upper,
                exponent <= upper,
            );
            let elementary = partition.iter().all(|&part| part == 1);
            let tightness = if upper.is_zero() {
                exponent.is_zero()
            } else {
                (exponent == upper) == elementary
            };
            report.push(
                "bounds",
                instance,
                "upper bound attained iff elementary",
                &exponent,
                &upper,
                tightness,
            );
        }
    }
    Ok(report)
}

/// Check that consecutive differences of the nested exponent sequence are
/// nondecreasing over `1..=max_letters`, and cross-check each sequence
/// value against direct enumeration of iterated basic commutators while
/// that enumeration stays within `caps`.
pub fn verify_difference_monotonicity(
    row: &ClassRow,
    product_class: u32,
    max_letters: u32,
    caps: &ResourceCaps,
) -> Result<VerificationReport, EngineError> {
    let mut report = VerificationReport::default();
    let values: Vec<BigUint> = (0..=max_letters)
        .map(|letters| exponents::d_exponent(row, product_class, u64::from(letters)))
        .collect::<Result<_, _>>()?;
    let differences: Vec<BigUint> = values.windows(2).map(|pair| &pair[1] - &pair[0]).collect();
    for later in 2..=max_letters as usize {
        for earlier in 2..=later {
            report.push(
                "monotonicity",
                format!(
                    "row={} n={} i={} j={}",
                    row, product_class, earlier, later
                ),
                "later difference >= earlier difference",
                &differences[later - 1],
                &differences[earlier - 1],
                differences[later - 1] >= differences[earlier - 1],
            );
        }
    }
    for letters in 1..=max_letters {
        let count = match hall::nested_hall_count(row, product_class, letters as usize, caps) {
            Ok(count) => count,
            // The enumeration outgrew the caps; larger alphabets only get
            // bigger, so stop cross-checking here.
            Err(
                HallError::AlphabetTooLarge { .. }
                | HallError::WeightTooLarge { .. }
                | HallError::TooManyElements { .. },
            ) => break,
            Err(other) => unreachable!(
                "enumeration precondition failed after the closed form accepted it: {other}"
            ),
        };
        report.push(
            "monotonicity",
            format!("row={} n={} i={}", row, product_class, letters),
            "enumerated count equals closed form",
            &count,
            &values[letters as usize],
            count == values[letters as usize],
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::witt64;

    #[test]
    fn partition_counts_match_the_partition_function() {
        let expected = [1usize, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (total, &count) in expected.iter().enumerate() {
            let all: Vec<Vec<u32>> = partitions(total as u32).collect();
            assert_eq!(all.len(), count, "p({total})");
            for partition in &all {
                assert_eq!(partition.iter().sum::<u32>(), total as u32);
                assert!(partition.windows(2).all(|pair| pair[0] >= pair[1]));
            }
            if total > 0 {
                assert_eq!(all.first().unwrap(), &vec![total as u32]);
                assert_eq!(all.last().unwrap(), &vec![1u32; total]);
            } else {
                assert_eq!(all, vec![Vec::<u32>::new()]);
            }
        }
    }

    #[test]
    fn classify_sweep_singles_out_the_elementary_group() {
        let report = classify_extremal(2, 3, &ClassRow::single(1).unwrap(), 1).unwrap();
        let exponents: Vec<(Vec<u32>, String)> = report
            .entries
            .iter()
            .map(|e| (e.partition.clone(), e.exponent.to_string()))
            .collect();
        assert_eq!(
            exponents,
            vec![
                (vec![3], "0".to_string()),
                (vec![2, 1], "1".to_string()),
                (vec![1, 1, 1], "3".to_string()),
            ]
        );
        assert_eq!(report.maximizers, vec![vec![1, 1, 1]]);
        assert_eq!(report.target.to_string(), "2^3");
        assert!(report.claim_holds);

        let report = classify_extremal(5, 3, &ClassRow::single(2).unwrap(), 2).unwrap();
        assert_eq!(report.target.to_string(), "5^26");
        assert_eq!(report.maximizers, vec![vec![1, 1, 1]]);
        assert!(report.claim_holds);
    }

    #[test]
    fn classify_sweep_refuses_bad_hypotheses() {
        let err = classify_extremal(2, 3, &ClassRow::single(2).unwrap(), 2).unwrap_err();
        assert!(matches!(err, EngineError::HypothesesViolated(_)));
        assert!(err.to_string().contains("gcd(2"));
    }

    #[test]
    fn mixed_classify_sweep_matches_the_uniform_one_on_equal_classes() {
        let uniform = classify_extremal(5, 4, &ClassRow::single(2).unwrap(), 2).unwrap();
        let mixed = classify_extremal_mixed(5, 4, &ClassRow::single(2).unwrap(), &[2, 2, 2]).unwrap();
        assert_eq!(mixed.target, uniform.target);
        assert_eq!(mixed.maximizers, uniform.maximizers);
        assert!(mixed.claim_holds);
        for (a, b) in mixed.entries.iter().zip(&uniform.entries) {
            assert_eq!(a.partition, b.partition);
            assert_eq!(a.exponent, b.exponent);
        }

        let descending = classify_extremal_mixed(5, 3, &ClassRow::single(2).unwrap(), &[2, 1]).unwrap();
        assert_eq!(descending.maximizers, vec![vec![1, 1, 1]]);
        assert!(descending.claim_holds);
    }

    #[test]
    fn equality_holds_exactly_for_all_ones() {
        let check = check_equality_i(1, &[1, 1, 1]);
        assert!(check.holds);
        assert_eq!(check.lhs, BigUint::zero());

        let check = check_equality_i(1, &[2, 1]);
        assert!(!check.holds);
        assert_eq!(check.lhs, BigUint::from(2u32));
        assert_eq!(check.rhs, BigUint::zero());

        let check = check_equality_i(2, &[2, 2]);
        assert!(!check.holds);
        assert_eq!(check.lhs, witt64(3, 4).unwrap() - witt64(3, 2).unwrap());
        assert_eq!(check.rhs, witt64(3, 2).unwrap() - witt64(3, 1).unwrap());

        for class in 1..=3u32 {
            for total in 1..=8u32 {
                for partition in partitions(total) {
                    let all_ones = partition.iter().all(|&part| part == 1);
                    let check = check_equality_i(class, &partition);
                    assert_eq!(
                        check.holds, all_ones,
                        "c={class} partition={partition:?} lhs={} rhs={}",
                        check.lhs, check.rhs
                    );
                }
            }
            let sweep = check_equality_sweep(class, 8);
            assert!(sweep.all_pass(), "{sweep}");
        }
    }

    #[test]
    fn smallest_inequality_witness_is_three_letters() {
        let witness = find_inequality_counterexample(1, 10).unwrap();
        assert_eq!(witness.index, 3);
        assert_eq!(witness.lhs, BigUint::from(9u32));
        assert_eq!(witness.rhs, BigUint::from(6u32));

        assert_eq!(find_inequality_counterexample(1, 2), None);

        let witness = find_inequality_counterexample(2, 20).unwrap();
        assert_eq!(witness.index, 3);
        assert_eq!(witness.lhs, BigUint::from(24u32));
        assert_eq!(witness.rhs, BigUint::from(20u32));
    }

    #[test]
    fn bound_suite_passes_and_is_tight_only_at_elementary() {
        for prime in [2u64, 3] {
            let report = check_bounds(prime, 4, &ClassRow::single(1).unwrap()).unwrap();
            assert!(report.all_pass(), "{report}");
            let report = check_bounds(prime, 4, &ClassRow::new(vec![2, 1]).unwrap()).unwrap();
            assert!(report.all_pass(), "{report}");
        }
    }

    #[test]
    fn difference_monotonicity_holds_with_enumeration_cross_checks() {
        let caps = ResourceCaps::default();
        let report =
            verify_difference_monotonicity(&ClassRow::single(2).unwrap(), 2, 6, &caps).unwrap();
        assert!(report.all_pass(), "{report}");

        let report =
            verify_difference_monotonicity(&ClassRow::new(vec![2, 1]).unwrap(), 2, 4, &caps).unwrap();
        assert!(report.all_pass(), "{report}");
        let enumerated = report
            .records
            .iter()
            .filter(|r| r.relation == "enumerated count equals closed form")
            .count();
        assert!(enumerated >= 3, "expected enumeration cross-checks to run");
    }
}
