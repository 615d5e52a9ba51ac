//! Brute-force basic-commutator enumeration.
//!
//! Builds Hall bases by the textbook weight-stratified construction and
//! counts them directly, with no Witt-formula shortcuts anywhere. This is
//! the independent oracle the closed-form exponent calculus is checked
//! against.
//!
//! Elements live in an arena ordered by construction: all letters first,
//! then each weight stratum in turn, inside a stratum ordered by the
//! (left, right) index pair. That position order is exactly the order the
//! Hall condition refers to.

use std::fmt;

use num_bigint::BigUint;

use crate::exponents::ClassRow;

/// Enumeration guards. The element cap is the load-bearing one: alphabet
/// and weight caps alone do not bound the basis size.
#[derive(Debug, Clone)]
pub struct ResourceCaps {
    /// Largest alphabet the enumerator will accept.
    pub max_alphabet: usize,
    /// Largest commutator weight the enumerator will accept.
    pub max_weight: u32,
    /// Largest total number of arena elements across all weights.
    pub max_elements: usize,
}

impl Default for ResourceCaps {
    fn default() -> Self {
        ResourceCaps {
            max_alphabet: 2000,
            max_weight: 8,
            max_elements: 2_000_000,
        }
    }
}

/// Environment variable overriding `max_alphabet`.
pub const ALPHABET_CAP_VAR: &str = "POLYNIL_ALPHABET_CAP";
/// Environment variable overriding `max_weight`.
pub const WEIGHT_CAP_VAR: &str = "POLYNIL_WEIGHT_CAP";
/// Environment variable overriding `max_elements`.
pub const ELEMENT_CAP_VAR: &str = "POLYNIL_ELEMENT_CAP";

impl ResourceCaps {
    /// Defaults overridden by the documented environment variables, each a
    /// plain numeric value.
    pub fn from_env() -> Self {
        let mut caps = ResourceCaps::default();
        if let Some(v) = read_cap(ALPHABET_CAP_VAR) {
            caps.max_alphabet = v as usize;
        }
        if let Some(v) = read_cap(WEIGHT_CAP_VAR) {
            caps.max_weight = v as u32;
        }
        if let Some(v) = read_cap(ELEMENT_CAP_VAR) {
            caps.max_elements = v as usize;
        }
        caps
    }
}

fn read_cap(var: &str) -> Option<u64> {
    std::env::var(var).ok().and_then(|s| s.trim().parse().ok())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HallError {
    #[error("alphabet of {requested} letters exceeds the cap of {cap}")]
    AlphabetTooLarge { requested: usize, cap: usize },
    #[error("weight {requested} exceeds the cap of {cap}")]
    WeightTooLarge { requested: u32, cap: u32 },
    #[error("enumeration exceeds the element cap of {cap}")]
    TooManyElements { cap: usize },
    #[error("weight must be at least 1")]
    ZeroWeight,
    #[error("letter index {letter} out of range for an alphabet of {letters}")]
    LetterOutOfRange { letter: u32, letters: usize },
    #[error("class ordering violated: need c_1 >= n, got c_1 = {c1} and n = {n}")]
    ClassOrder { c1: u32, n: u32 },
    #[error("product class must be at least 1")]
    ZeroClass,
}

/// A basic commutator as an explicit tree. Letters are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasicCommutator {
    weight: u32,
    node: Node,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Letter(u32),
    Bracket(Box<BasicCommutator>, Box<BasicCommutator>),
}

impl BasicCommutator {
    pub fn letter(index: u32) -> Self {
        BasicCommutator {
            weight: 1,
            node: Node::Letter(index),
        }
    }

    pub fn bracket(left: BasicCommutator, right: BasicCommutator) -> Self {
        BasicCommutator {
            weight: left.weight + right.weight,
            node: Node::Bracket(Box::new(left), Box::new(right)),
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn is_letter(&self) -> bool {
        matches!(self.node, Node::Letter(_))
    }

    pub fn contains_letter(&self, letter: u32) -> bool {
        match &self.node {
            Node::Letter(l) => *l == letter,
            Node::Bracket(a, b) => a.contains_letter(letter) || b.contains_letter(letter),
        }
    }
}

impl fmt::Display for BasicCommutator {
    /// Renders as `x3` for letters and `[[x2,x1],x1]` for brackets.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Letter(l) => write!(f, "x{l}"),
            Node::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum ArenaNode {
    Letter(u32),
    Bracket { left: usize, right: usize },
}

#[derive(Debug, Clone, Copy)]
struct ArenaEntry {
    weight: u32,
    node: ArenaNode,
}

/// A fully generated Hall basis on an abstract ordered alphabet, holding
/// every basic commutator of weight up to the generation bound.
#[derive(Debug)]
pub struct HallBasis {
    letters: usize,
    arena: Vec<ArenaEntry>,
    /// `strata[w]` is the index range of weight-(w+1) elements.
    strata: Vec<std::ops::Range<usize>>,
}

impl HallBasis {
    /// Generates every basic commutator of weight `1..=max_weight` on
    /// `letters` letters.
    pub fn generate(letters: usize, max_weight: u32, caps: &ResourceCaps) -> Result<Self, HallError> {
        if max_weight == 0 {
            return Err(HallError::ZeroWeight);
        }
        if letters > caps.max_alphabet {
            return Err(HallError::AlphabetTooLarge {
                requested: letters,
                cap: caps.max_alphabet,
            });
        }
        if max_weight > caps.max_weight {
            return Err(HallError::WeightTooLarge {
                requested: max_weight,
                cap: caps.max_weight,
            });
        }
        let mut arena: Vec<ArenaEntry> = Vec::new();
        let mut strata = Vec::new();
        for l in 1..=letters {
            arena.push(ArenaEntry {
                weight: 1,
                node: ArenaNode::Letter(l as u32),
            });
        }
        strata.push(0..arena.len());
        for w in 2..=max_weight {
            let start = arena.len();
            // Candidate pairs in (left, right) index order: the left operand
            // carries at least half the weight, and ascending left-weight
            // visits left indices in ascending arena order, so the stratum
            // comes out sorted by the (left, right) pair with no extra pass.
            for left_weight in w.div_ceil(2)..w {
                let right_weight = w - left_weight;
                let left_range = strata[left_weight as usize - 1].clone();
                let right_range = strata[right_weight as usize - 1].clone();
                for left in left_range {
                    for right in right_range.clone() {
                        if right >= left {
                            continue;
                        }
                        if let ArenaNode::Bracket { right: inner, .. } = arena[left].node {
                            if inner > right {
                                continue;
                            }
                        }
                        if arena.len() >= caps.max_elements {
                            return Err(HallError::TooManyElements {
                                cap: caps.max_elements,
                            });
                        }
                        arena.push(ArenaEntry {
                            weight: w,
                            node: ArenaNode::Bracket { left, right },
                        });
                    }
                }
            }
            strata.push(start..arena.len());
        }
        Ok(HallBasis {
            letters,
            arena,
            strata,
        })
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    /// Number of basis elements of exactly `weight`.
    pub fn count_of_weight(&self, weight: u32) -> usize {
        self.stratum(weight).map_or(0, |r| r.len())
    }

    fn stratum(&self, weight: u32) -> Option<std::ops::Range<usize>> {
        if weight == 0 {
            return None;
        }
        self.strata.get(weight as usize - 1).cloned()
    }

    /// Materializes the weight-`weight` stratum as explicit trees, in basis
    /// order.
    pub fn elements_of_weight(&self, weight: u32) -> Vec<BasicCommutator> {
        self.stratum(weight)
            .map(|r| r.map(|i| self.tree(i)).collect())
            .unwrap_or_default()
    }

    fn tree(&self, index: usize) -> BasicCommutator {
        match self.arena[index].node {
            ArenaNode::Letter(l) => BasicCommutator::letter(l),
            ArenaNode::Bracket { left, right } => {
                BasicCommutator::bracket(self.tree(left), self.tree(right))
            }
        }
    }

    /// Counts weight-`weight` elements in which `letter` occurs.
    pub fn count_containing(&self, weight: u32, letter: u32) -> Result<usize, HallError> {
        if letter == 0 || letter as usize > self.letters {
            return Err(HallError::LetterOutOfRange {
                letter,
                letters: self.letters,
            });
        }
        let mut contains = vec![false; self.arena.len()];
        for (i, entry) in self.arena.iter().enumerate() {
            contains[i] = match entry.node {
                ArenaNode::Letter(l) => l == letter,
                ArenaNode::Bracket { left, right } => contains[left] || contains[right],
            };
        }
        Ok(self
            .stratum(weight)
            .map_or(0, |r| r.filter(|&i| contains[i]).count()))
    }

    /// Checks the Hall condition on every arena element: a bracket `[a, b]`
    /// must satisfy `a > b` in basis order, with `a`'s own right part at or
    /// below `b` when `a` is itself a bracket; weights must be consistent
    /// and strata must be ordered by (left, right).
    pub fn validate(&self) -> Result<(), String> {
        for (i, entry) in self.arena.iter().enumerate() {
            match entry.node {
                ArenaNode::Letter(l) => {
                    if entry.weight != 1 {
                        return Err(format!("letter x{l} at index {i} has weight {}", entry.weight));
                    }
                    if l == 0 || l as usize > self.letters || i + 1 != l as usize {
                        return Err(format!("letter x{l} out of place at index {i}"));
                    }
                }
                ArenaNode::Bracket { left, right } => {
                    if left >= i || right >= i {
                        return Err(format!("element {i} references later elements"));
                    }
                    let lw = self.arena[left].weight;
                    let rw = self.arena[right].weight;
                    if entry.weight != lw + rw {
                        return Err(format!("element {i} has inconsistent weight"));
                    }
                    if left <= right {
                        return Err(format!("element {i} violates left > right"));
                    }
                    if let ArenaNode::Bracket { right: inner, .. } = self.arena[left].node {
                        if inner > right {
                            return Err(format!("element {i} violates the inner-right bound"));
                        }
                    }
                }
            }
        }
        for r in &self.strata {
            let keys: Vec<(usize, usize)> = self.arena[r.clone()]
                .iter()
                .filter_map(|e| match e.node {
                    ArenaNode::Bracket { left, right } => Some((left, right)),
                    ArenaNode::Letter(_) => None,
                })
                .collect();
            if keys.windows(2).any(|w| w[0] >= w[1]) {
                return Err("stratum not ordered by (left, right)".to_string());
            }
        }
        Ok(())
    }
}

/// All basic commutators of exactly `weight` on `letters` letters, in basis
/// order, under default caps.
pub fn hall_basis(letters: usize, weight: u32) -> Result<Vec<BasicCommutator>, HallError> {
    let basis = HallBasis::generate(letters, weight, &ResourceCaps::default())?;
    Ok(basis.elements_of_weight(weight))
}

/// Number of weight-`weight` basic commutators on `letters` letters in which
/// `x_letter` occurs. For `letter == letters` this equals the difference of
/// consecutive basis counts.
pub fn count_containing(letters: usize, weight: u32, letter: u32) -> Result<usize, HallError> {
    let basis = HallBasis::generate(letters, weight, &ResourceCaps::default())?;
    basis.count_containing(weight, letter)
}

/// The iterated alphabet count for a class row: starting from basic
/// commutators of weights `c_1+1 ..= c_1+n` on `letters` letters, each later
/// row entry `c_k` rebuilds weight `c_k+1` commutators on the previous
/// stage's elements taken as an ordered alphabet. Returns the final stage
/// size, counted by actual enumeration throughout.
pub fn nested_hall_count(
    row: &ClassRow,
    product_class: u32,
    letters: usize,
    caps: &ResourceCaps,
) -> Result<BigUint, HallError> {
    if product_class == 0 {
        return Err(HallError::ZeroClass);
    }
    let c1 = row.first();
    if c1 < product_class {
        return Err(HallError::ClassOrder {
            c1,
            n: product_class,
        });
    }
    let first = HallBasis::generate(letters, c1 + product_class, caps)?;
    let mut size: usize = (1..=product_class)
        .map(|j| first.count_of_weight(c1 + j))
        .sum();
    for &c in row.tail() {
        let stage = HallBasis::generate(size, c + 1, caps)?;
        size = stage.count_of_weight(c + 1);
    }
    Ok(BigUint::from(size))
}
