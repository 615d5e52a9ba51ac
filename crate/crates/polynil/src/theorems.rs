//! Theorem selection and hypothesis checking.
//!
//! Every structure and extremality statement the engine implements is named
//! by a [`Theorem`] selector. [`check_hypotheses`] evaluates the full
//! checklist of a selected statement against a group and a class row; the
//! engine refuses to compute when any condition is violated, so the
//! checklist is the single source of truth for applicability.

use std::fmt;

use serde::Serialize;

use crate::exponents::ClassRow;
use crate::group::GroupSpec;
use crate::numbers;

/// Selector for the implemented statements. Labels follow the convention
/// used in reports: structure statements for abelian groups (2.7, 2.11),
/// uniform products (2.13, 2.14, 2.15(i)/(ii)), mixed-class products
/// (2.16), and the extremality statements (3.1, 3.2, 3.3, 3.4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    T2_7,
    T2_11,
    T2_13,
    T2_14,
    T2_15i,
    T2_15ii,
    T2_16,
    T3_1,
    T3_2,
    T3_3,
    C3_4,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::T2_7 => "Thm 2.7",
            Theorem::T2_11 => "Thm 2.11",
            Theorem::T2_13 => "Thm 2.13",
            Theorem::T2_14 => "Thm 2.14",
            Theorem::T2_15i => "Thm 2.15(i)",
            Theorem::T2_15ii => "Thm 2.15(ii)",
            Theorem::T2_16 => "Thm 2.16",
            Theorem::T3_1 => "Thm 3.1",
            Theorem::T3_2 => "Thm 3.2",
            Theorem::T3_3 => "Thm 3.3",
            Theorem::C3_4 => "Cor 3.4",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Theorem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

/// One named hypothesis with its outcome. A check that cannot be evaluated
/// (because a structural prerequisite already failed) is reported as
/// unsatisfied with an explanatory detail, never silently skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub satisfied: bool,
    pub detail: String,
}

impl HypothesisCheck {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        HypothesisCheck {
            name,
            satisfied: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        HypothesisCheck {
            name,
            satisfied: false,
            detail: detail.into(),
        }
    }

    fn skipped(name: &'static str, prerequisite: &str) -> Self {
        HypothesisCheck::fail(name, format!("not evaluated: requires {prerequisite}"))
    }
}

/// The complete checklist for one theorem against one input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub theorem: Theorem,
    pub checks: Vec<HypothesisCheck>,
}

impl HypothesisReport {
    pub fn all_satisfied(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }

    pub fn failures(&self) -> impl Iterator<Item = &HypothesisCheck> {
        self.checks.iter().filter(|c| !c.satisfied)
    }

    /// One-line summary of every failing condition.
    pub fn failure_summary(&self) -> String {
        self.failures()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} hypotheses:", self.theorem)?;
        for check in &self.checks {
            let mark = if check.satisfied { "ok " } else { "VIOLATED" };
            writeln!(f, "  [{mark}] {}: {}", check.name, check.detail)?;
        }
        Ok(())
    }
}

fn abelian(g: &GroupSpec) -> HypothesisCheck {
    if g.is_abelian() {
        HypothesisCheck::pass("abelian input", "all pair classes are 1")
    } else {
        HypothesisCheck::fail("abelian input", "product classes exceed 1")
    }
}

fn finite(g: &GroupSpec) -> HypothesisCheck {
    let rank = g.free_rank();
    if rank == 0 {
        HypothesisCheck::pass("finite group", "no infinite factors")
    } else {
        HypothesisCheck::fail("finite group", format!("{rank} infinite factor(s)"))
    }
}

fn single_row(row: &ClassRow) -> HypothesisCheck {
    if row.len() == 1 {
        HypothesisCheck::pass("single-entry class row", format!("row {row}"))
    } else {
        HypothesisCheck::fail(
            "single-entry class row",
            format!("row {row} has {} entries", row.len()),
        )
    }
}

/// The divisibility chain is a construction invariant of [`GroupSpec`];
/// rechecked here so the checklist is self-contained.
fn chain(g: &GroupSpec) -> HypothesisCheck {
    let orders = g.torsion_orders();
    match orders.windows(2).find(|w| w[0] % w[1] != 0) {
        None => HypothesisCheck::pass(
            "divisibility chain",
            "each finite order divides the previous",
        ),
        Some(w) => HypothesisCheck::fail(
            "divisibility chain",
            format!("{} does not divide {}", w[1], w[0]),
        ),
    }
}

fn uniform(g: &GroupSpec) -> HypothesisCheck {
    match g.uniform_class() {
        Some(n) => HypothesisCheck::pass("uniform product class", format!("class {n}")),
        None => HypothesisCheck::fail(
            "uniform product class",
            format!("mixed classes {:?}", g.pair_classes()),
        ),
    }
}

fn nonincreasing(g: &GroupSpec) -> HypothesisCheck {
    let classes = g.pair_classes();
    match classes.windows(2).find(|w| w[0] < w[1]) {
        None => HypothesisCheck::pass(
            "nonincreasing pair classes",
            format!("classes {classes:?}"),
        ),
        Some(w) => HypothesisCheck::fail(
            "nonincreasing pair classes",
            format!("{} < {}", w[0], w[1]),
        ),
    }
}

fn class_order(label: &'static str, big: u32, small: u32) -> HypothesisCheck {
    let (big_name, small_name) = label.split_once(" >= ").expect("label is 'x >= y'");
    if big >= small {
        HypothesisCheck::pass(
            "class ordering",
            format!("{big_name} = {big} >= {small_name} = {small}"),
        )
    } else {
        HypothesisCheck::fail(
            "class ordering",
            format!("{big_name} = {big} < {small_name} = {small}"),
        )
    }
}

fn p_group(g: &GroupSpec) -> HypothesisCheck {
    match g.p_group() {
        Some((p, alphas)) => HypothesisCheck::pass(
            "cyclic p-group factors",
            format!("p = {p}, exponents {alphas:?}"),
        ),
        None => HypothesisCheck::fail(
            "cyclic p-group factors",
            "factors are not all finite powers of one prime",
        ),
    }
}

/// Every prime `q <= bound` must be coprime to `target` (the leading finite
/// order, or the group prime). No finite factors means nothing to check.
fn coprimality(bound: u32, target_name: &str, target: Option<u64>) -> HypothesisCheck {
    let Some(modulus) = target else {
        return HypothesisCheck::pass("coprimality", "no finite factors");
    };
    let primes = numbers::primes_up_to(u64::from(bound));
    if primes.is_empty() {
        return HypothesisCheck::pass("coprimality", format!("no primes up to {bound}"));
    }
    for q in primes {
        if modulus % q == 0 {
            return HypothesisCheck::fail(
                "coprimality",
                format!("gcd({q}, {target_name} = {modulus}) != 1"),
            );
        }
    }
    HypothesisCheck::pass(
        "coprimality",
        format!("every prime q <= {bound} is coprime to {target_name} = {modulus}"),
    )
}

/// Evaluates every hypothesis of `theorem` for the group `g` under the
/// class row `row` and returns the full checklist. Reporting only: callers
/// decide whether to refuse.
pub fn check_hypotheses(g: &GroupSpec, row: &ClassRow, theorem: Theorem) -> HypothesisReport {
    let r1 = g.torsion_orders().first().copied();
    let mut checks = Vec::new();
    match theorem {
        Theorem::T2_7 => {
            checks.push(abelian(g));
            checks.push(finite(g));
            checks.push(single_row(row));
            checks.push(chain(g));
        }
        Theorem::T2_11 => {
            checks.push(abelian(g));
            checks.push(chain(g));
        }
        Theorem::T2_13 | Theorem::T2_15i | Theorem::T2_15ii => {
            let u = uniform(g);
            let n = g.uniform_class();
            checks.push(single_row(row));
            checks.push(chain(g));
            let c = row.first();
            match (theorem, n) {
                (_, None) => {
                    checks.push(class_order_skipped());
                    checks.push(HypothesisCheck::skipped("coprimality", "a uniform product class"));
                }
                (Theorem::T2_13, Some(n)) => {
                    checks.push(class_order("c >= n", c, n));
                    checks.push(coprimality(n, "r_1", r1));
                }
                (Theorem::T2_15i, Some(n)) => {
                    checks.push(class_order("n >= c", n, c));
                    checks.push(coprimality(n + c, "r_1", r1));
                }
                (_, Some(n)) => {
                    checks.push(class_order("c >= n", c, n));
                    checks.push(coprimality(n + c, "r_1", r1));
                }
            }
            checks.insert(0, u);
        }
        Theorem::T2_14 => {
            checks.push(uniform(g));
            checks.push(chain(g));
            match g.uniform_class() {
                Some(n) => {
                    checks.push(class_order("c_1 >= n", row.first(), n));
                    checks.push(coprimality(n, "r_1", r1));
                }
                None => {
                    checks.push(class_order_skipped());
                    checks.push(HypothesisCheck::skipped("coprimality", "a uniform product class"));
                }
            }
        }
        Theorem::T2_16 => {
            checks.push(nonincreasing(g));
            checks.push(chain(g));
            match g.pair_classes().first().copied() {
                Some(n1) => {
                    checks.push(class_order("c_1 >= n_1", row.first(), n1));
                    checks.push(coprimality(n1, "m_{t+1}", r1));
                }
                None => {
                    // a single factor has no pair constraints
                    checks.push(HypothesisCheck::pass("class ordering", "no factor pairs"));
                    checks.push(HypothesisCheck::pass("coprimality", "no factor pairs"));
                }
            }
        }
        Theorem::T3_1 => {
            checks.push(p_group(g));
            checks.push(uniform(g));
            let p = g.p_group().map(|(p, _)| p);
            match g.uniform_class() {
                Some(n) => {
                    checks.push(class_order("c_1 >= n", row.first(), n));
                    checks.push(coprimality(n, "p", p));
                }
                None => {
                    checks.push(class_order_skipped());
                    checks.push(HypothesisCheck::skipped("coprimality", "a uniform product class"));
                }
            }
        }
        Theorem::T3_2 => {
            checks.push(p_group(g));
            checks.push(nonincreasing(g));
            let p = g.p_group().map(|(p, _)| p);
            match g.pair_classes().first().copied() {
                Some(n1) => {
                    checks.push(class_order("c_1 >= n_1", row.first(), n1));
                    // strongest reading of "primes q <= n": bound n_1
                    checks.push(coprimality(n1, "p", p));
                }
                None => {
                    checks.push(HypothesisCheck::pass("class ordering", "no factor pairs"));
                    checks.push(HypothesisCheck::pass("coprimality", "no factor pairs"));
                }
            }
        }
        Theorem::T3_3 => {
            checks.push(p_group(g));
            checks.push(uniform(g));
            checks.push(single_row(row));
            let p = g.p_group().map(|(p, _)| p);
            let c = row.first();
            match g.uniform_class() {
                Some(n) => {
                    checks.push(class_order("n >= c", n, c));
                    checks.push(coprimality(n + c, "p", p));
                }
                None => {
                    checks.push(class_order_skipped());
                    checks.push(HypothesisCheck::skipped("coprimality", "a uniform product class"));
                }
            }
        }
        Theorem::C3_4 => {
            checks.push(abelian(g));
            checks.push(p_group(g));
        }
    }
    HypothesisReport { theorem, checks }
}

fn class_order_skipped() -> HypothesisCheck {
    HypothesisCheck::skipped("class ordering", "a uniform product class")
}
