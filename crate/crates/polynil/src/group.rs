//! Group model: input groups, computed multiplier structures, and orders.
//!
//! An input group is an ordered list of cyclic factors combined by nilpotent
//! products (class 1 is the direct sum). Canonical form puts infinite
//! factors first, keeps finite orders on a divisibility chain (each dividing
//! the previous), and keeps pair classes nonincreasing. Violations are
//! reported as errors, never silently reordered.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::numbers;

/// One cyclic factor of an input group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CyclicFactor {
    Infinite,
    /// Finite cyclic of the given order; order 1 is dropped during
    /// canonicalization.
    Finite(u64),
}

/// Pair classes of a nilpotent product: one class per adjacent factor pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum ProductClasses {
    /// Every pair shares one class; class 1 is the direct sum.
    Uniform(u32),
    /// Classes `(n_1, ..., n_k)` for `k+1` factors, nonincreasing.
    PerPair(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("cyclic factor of order 0 is not a group")]
    ZeroOrderFactor,
    #[error("divisibility chain violated: {next} does not divide {prev}")]
    BrokenChain { prev: u64, next: u64 },
    #[error("infinite factors must precede finite factors (factor {position})")]
    InfiniteAfterFinite { position: usize },
    #[error("product classes must be nonincreasing (class {position})")]
    NonIncreasingClasses { position: usize },
    #[error("product classes must be at least 1")]
    ZeroClass,
    #[error("expected {expected} product classes for {factors} factors, got {got}")]
    ClassCountMismatch {
        factors: usize,
        expected: usize,
        got: usize,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime power {p}^{alpha} exceeds the supported modulus range")]
    PPowerOverflow { p: u64, alpha: u32 },
}

/// A finitely generated abelian group or nilpotent product of cyclic groups,
/// in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<CyclicFactor>,
    classes: ProductClasses,
}

impl GroupSpec {
    /// Builds a spec from raw parts, canonicalizing and validating:
    /// order-1 factors are dropped (each taking its left pair class along),
    /// all-equal per-pair classes collapse to a uniform class, and the
    /// factor-order, chain, and class-monotonicity invariants are enforced.
    pub fn new(factors: Vec<CyclicFactor>, classes: ProductClasses) -> Result<Self, GroupError> {
        let expected = factors.len().saturating_sub(1);
        let mut pair: Vec<u32> = match classes {
            ProductClasses::Uniform(0) => return Err(GroupError::ZeroClass),
            ProductClasses::Uniform(n) => vec![n; expected],
            ProductClasses::PerPair(v) => {
                if v.len() != expected {
                    return Err(GroupError::ClassCountMismatch {
                        factors: factors.len(),
                        expected,
                        got: v.len(),
                    });
                }
                v
            }
        };
        if pair.contains(&0) {
            return Err(GroupError::ZeroClass);
        }
        if factors.contains(&CyclicFactor::Finite(0)) {
            return Err(GroupError::ZeroOrderFactor);
        }
        let mut factors = factors;
        while let Some(i) = factors.iter().position(|f| *f == CyclicFactor::Finite(1)) {
            factors.remove(i);
            if !pair.is_empty() {
                pair.remove(i.saturating_sub(1));
            }
        }
        if let Some(position) = factors
            .windows(2)
            .position(|w| w[0] != CyclicFactor::Infinite && w[1] == CyclicFactor::Infinite)
        {
            return Err(GroupError::InfiniteAfterFinite { position: position + 1 });
        }
        let torsion: Vec<u64> = factors
            .iter()
            .filter_map(|f| match f {
                CyclicFactor::Finite(m) => Some(*m),
                CyclicFactor::Infinite => None,
            })
            .collect();
        if let Some(w) = torsion.windows(2).find(|w| w[0] % w[1] != 0) {
            return Err(GroupError::BrokenChain {
                prev: w[0],
                next: w[1],
            });
        }
        if let Some(position) = pair.windows(2).position(|w| w[0] < w[1]) {
            return Err(GroupError::NonIncreasingClasses { position: position + 1 });
        }
        let classes = if pair.is_empty() {
            ProductClasses::Uniform(1)
        } else if pair.iter().all(|&c| c == pair[0]) {
            ProductClasses::Uniform(pair[0])
        } else {
            ProductClasses::PerPair(pair)
        };
        Ok(GroupSpec { factors, classes })
    }

    /// Direct sum (class-1 product) of the given factors.
    pub fn direct_sum(factors: Vec<CyclicFactor>) -> Result<Self, GroupError> {
        GroupSpec::new(factors, ProductClasses::Uniform(1))
    }

    /// Uniform nth nilpotent product of the given factors.
    pub fn nilpotent_product(factors: Vec<CyclicFactor>, n: u32) -> Result<Self, GroupError> {
        GroupSpec::new(factors, ProductClasses::Uniform(n))
    }

    /// Product with explicit per-pair classes.
    pub fn multi_product(factors: Vec<CyclicFactor>, classes: Vec<u32>) -> Result<Self, GroupError> {
        GroupSpec::new(factors, ProductClasses::PerPair(classes))
    }

    /// Uniform nth product of `Z_{p^alpha}` factors: the family the
    /// extremality statements quantify over. `alphas` must be nonincreasing
    /// so the orders form a chain.
    pub fn p_group_product(p: u64, alphas: &[u32], n: u32) -> Result<Self, GroupError> {
        if !numbers::is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        let factors = alphas
            .iter()
            .map(|&alpha| {
                p.checked_pow(alpha)
                    .map(CyclicFactor::Finite)
                    .ok_or(GroupError::PPowerOverflow { p, alpha })
            })
            .collect::<Result<Vec<_>, _>>()?;
        GroupSpec::nilpotent_product(factors, n)
    }

    /// Like `p_group_product` with explicit per-pair classes.
    pub fn p_group_multi_product(p: u64, alphas: &[u32], classes: Vec<u32>) -> Result<Self, GroupError> {
        if !numbers::is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        let factors = alphas
            .iter()
            .map(|&alpha| {
                p.checked_pow(alpha)
                    .map(CyclicFactor::Finite)
                    .ok_or(GroupError::PPowerOverflow { p, alpha })
            })
            .collect::<Result<Vec<_>, _>>()?;
        GroupSpec::multi_product(factors, classes)
    }

    pub fn factors(&self) -> &[CyclicFactor] {
        &self.factors
    }

    pub fn classes(&self) -> &ProductClasses {
        &self.classes
    }

    /// Number of infinite factors.
    pub fn free_rank(&self) -> usize {
        self.factors
            .iter()
            .filter(|f| **f == CyclicFactor::Infinite)
            .count()
    }

    /// Orders of the finite factors, largest first on the chain.
    pub fn torsion_orders(&self) -> Vec<u64> {
        self.factors
            .iter()
            .filter_map(|f| match f {
                CyclicFactor::Finite(m) => Some(*m),
                CyclicFactor::Infinite => None,
            })
            .collect()
    }

    /// The shared class when the product is uniform.
    pub fn uniform_class(&self) -> Option<u32> {
        match &self.classes {
            ProductClasses::Uniform(n) => Some(*n),
            ProductClasses::PerPair(_) => None,
        }
    }

    /// The class list expanded to one entry per adjacent factor pair.
    pub fn pair_classes(&self) -> Vec<u32> {
        match &self.classes {
            ProductClasses::Uniform(n) => vec![*n; self.factors.len().saturating_sub(1)],
            ProductClasses::PerPair(v) => v.clone(),
        }
    }

    /// Direct sums and single cyclic factors are abelian.
    pub fn is_abelian(&self) -> bool {
        self.factors.len() <= 1 || self.uniform_class() == Some(1)
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    /// `(p, alphas)` when every factor is finite of order a power of one
    /// prime `p`; the exponents inherit the chain's nonincreasing order.
    pub fn p_group(&self) -> Option<(u64, Vec<u32>)> {
        if self.factors.is_empty() || !self.is_finite() {
            return None;
        }
        let mut prime = None;
        let mut alphas = Vec::new();
        for order in self.torsion_orders() {
            let factored = numbers::factor(order);
            let [(p, alpha)] = factored[..] else {
                return None;
            };
            if *prime.get_or_insert(p) != p {
                return None;
            }
            alphas.push(alpha);
        }
        prime.map(|p| (p, alphas))
    }
}

impl fmt::Display for GroupSpec {
    /// Canonical text form in the input grammar; the trivial group renders
    /// as `Z_1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z_1");
        }
        let pairs = self.pair_classes();
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                match pairs[i - 1] {
                    1 => write!(f, " + ")?,
                    n => write!(f, " *{n}* ")?,
                }
            }
            match factor {
                CyclicFactor::Infinite => write!(f, "Z")?,
                CyclicFactor::Finite(m) => write!(f, "Z_{m}")?,
            }
        }
        Ok(())
    }
}

/// Serializes as the canonical grammar text, so records round-trip through
/// [`crate::parse::parse_group`].
impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A finitely generated abelian group in the form
/// `Z^(rank) + Z_{m_1}^(k_1) + ...` with the moduli strictly decreasing
/// along a divisibility chain: the shape every multiplier structure takes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianStructure {
    free_rank: BigUint,
    torsion: Vec<(u64, BigUint)>,
}

impl AbelianStructure {
    /// Canonicalizes raw parts: multiplicity-0 and modulus-1 parts are
    /// dropped, runs of one modulus merge, and the remaining moduli must
    /// sit on a strict divisibility chain.
    pub fn new(free_rank: BigUint, parts: Vec<(u64, BigUint)>) -> Result<Self, GroupError> {
        let mut torsion: Vec<(u64, BigUint)> = Vec::new();
        for (modulus, multiplicity) in parts {
            if modulus == 0 {
                return Err(GroupError::ZeroOrderFactor);
            }
            if modulus == 1 || multiplicity.is_zero() {
                continue;
            }
            match torsion.last_mut() {
                Some((m, k)) if *m == modulus => *k += multiplicity,
                _ => torsion.push((modulus, multiplicity)),
            }
        }
        if let Some(w) = torsion.windows(2).find(|w| w[0].0 % w[1].0 != 0) {
            return Err(GroupError::BrokenChain {
                prev: w[0].0,
                next: w[1].0,
            });
        }
        Ok(AbelianStructure { free_rank, torsion })
    }

    pub fn trivial() -> Self {
        AbelianStructure {
            free_rank: BigUint::zero(),
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank.is_zero() && self.torsion.is_empty()
    }

    pub fn free_rank(&self) -> &BigUint {
        &self.free_rank
    }

    /// `(modulus, multiplicity)` pairs, largest modulus first.
    pub fn torsion(&self) -> &[(u64, BigUint)] {
        &self.torsion
    }

    /// Exact order: infinite when there is a free part, otherwise the
    /// product of `modulus^multiplicity`, kept in factored form.
    pub fn order(&self) -> GroupOrder {
        if !self.free_rank.is_zero() {
            return GroupOrder::Infinite;
        }
        let mut factors: Vec<(u64, BigUint)> = Vec::new();
        for (modulus, multiplicity) in &self.torsion {
            for (p, a) in numbers::factor(*modulus) {
                let contribution = BigUint::from(a) * multiplicity;
                match factors.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, e)) => *e += contribution,
                    None => factors.push((p, contribution)),
                }
            }
        }
        factors.sort_by_key(|&(p, _)| p);
        GroupOrder::Finite(factors)
    }
}

impl fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if first {
                first = false;
                Ok(())
            } else {
                write!(f, " + ")
            }
        };
        let one = BigUint::from(1u32);
        if !self.free_rank.is_zero() {
            sep(f)?;
            if self.free_rank == one {
                write!(f, "Z")?;
            } else {
                write!(f, "Z^({})", self.free_rank)?;
            }
        }
        for (modulus, multiplicity) in &self.torsion {
            sep(f)?;
            if *multiplicity == one {
                write!(f, "Z_{modulus}")?;
            } else {
                write!(f, "Z_{modulus}^({multiplicity})")?;
            }
        }
        Ok(())
    }
}

/// Order of a prime power `p^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPowerOrder {
    pub prime: u64,
    pub exponent: BigUint,
}

impl fmt::Display for PPowerOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.prime, self.exponent)
    }
}

/// A group order in factored form; `Finite(vec![])` is the trivial order 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupOrder {
    Infinite,
    /// `(prime, exponent)` pairs sorted by prime, exponents nonzero.
    Finite(Vec<(u64, BigUint)>),
}

impl GroupOrder {
    pub fn is_trivial(&self) -> bool {
        matches!(self, GroupOrder::Finite(f) if f.is_empty())
    }

    /// The order as `p^e` when exactly one prime occurs.
    pub fn as_prime_power(&self) -> Option<PPowerOrder> {
        match self {
            GroupOrder::Finite(factors) if factors.len() == 1 => Some(PPowerOrder {
                prime: factors[0].0,
                exponent: factors[0].1.clone(),
            }),
            _ => None,
        }
    }

    /// Exponent of `p` in the order; zero when absent or infinite.
    pub fn exponent_of(&self, p: u64) -> BigUint {
        match self {
            GroupOrder::Finite(factors) => factors
                .iter()
                .find(|(q, _)| *q == p)
                .map(|(_, e)| e.clone())
                .unwrap_or_default(),
            GroupOrder::Infinite => BigUint::zero(),
        }
    }
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Infinite => write!(f, "infinite"),
            GroupOrder::Finite(factors) if factors.is_empty() => write!(f, "1"),
            GroupOrder::Finite(factors) => {
                for (i, (p, e)) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    write!(f, "{p}^{e}")?;
                }
                Ok(())
            }
        }
    }
}

// Multiplicities and exponents are unbounded, so records carry them as
// decimal strings rather than native integers.

impl Serialize for AbelianStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let torsion: Vec<(u64, String)> = self
            .torsion
            .iter()
            .map(|(m, k)| (*m, k.to_string()))
            .collect();
        let mut s = serializer.serialize_struct("AbelianStructure", 3)?;
        s.serialize_field("free_rank", &self.free_rank.to_string())?;
        s.serialize_field("torsion", &torsion)?;
        s.serialize_field("display", &self.to_string())?;
        s.end()
    }
}

impl Serialize for PPowerOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PPowerOrder", 2)?;
        s.serialize_field("prime", &self.prime)?;
        s.serialize_field("exponent", &self.exponent.to_string())?;
        s.end()
    }
}

impl Serialize for GroupOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(m: u64) -> CyclicFactor {
        CyclicFactor::Finite(m)
    }

    #[test]
    fn canonicalization_drops_trivial_factors() {
        let g = GroupSpec::direct_sum(vec![CyclicFactor::Infinite, fin(4), fin(1), fin(2)]).unwrap();
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.torsion_orders(), vec![4, 2]);
        assert_eq!(g.uniform_class(), Some(1));
        let again = GroupSpec::new(g.factors().to_vec(), g.classes().clone()).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn all_equal_classes_collapse_to_uniform() {
        let g = GroupSpec::multi_product(vec![fin(9), fin(3)], vec![2]).unwrap();
        assert_eq!(g.uniform_class(), Some(2));
        let g = GroupSpec::multi_product(vec![CyclicFactor::Infinite, CyclicFactor::Infinite, fin(3)], vec![2, 1]).unwrap();
        assert_eq!(g.uniform_class(), None);
        assert_eq!(g.pair_classes(), vec![2, 1]);
    }

    #[test]
    fn single_factor_normalizes_to_class_one() {
        let g = GroupSpec::nilpotent_product(vec![fin(25)], 2).unwrap();
        assert_eq!(g.uniform_class(), Some(1));
        assert!(g.is_abelian());
    }

    #[test]
    fn invariant_violations_are_named() {
        assert_eq!(
            GroupSpec::direct_sum(vec![fin(2), fin(4)]).unwrap_err(),
            GroupError::BrokenChain { prev: 2, next: 4 }
        );
        assert_eq!(
            GroupSpec::direct_sum(vec![fin(4), CyclicFactor::Infinite]).unwrap_err(),
            GroupError::InfiniteAfterFinite { position: 1 }
        );
        assert_eq!(
            GroupSpec::multi_product(vec![fin(8), fin(4), fin(2)], vec![2, 3]).unwrap_err(),
            GroupError::NonIncreasingClasses { position: 1 }
        );
        assert_eq!(
            GroupSpec::nilpotent_product(vec![fin(3), fin(3)], 0).unwrap_err(),
            GroupError::ZeroClass
        );
        assert_eq!(
            GroupSpec::direct_sum(vec![fin(0)]).unwrap_err(),
            GroupError::ZeroOrderFactor
        );
        assert_eq!(
            GroupSpec::multi_product(vec![fin(3), fin(3)], vec![2, 2]).unwrap_err(),
            GroupError::ClassCountMismatch {
                factors: 2,
                expected: 1,
                got: 2
            }
        );
    }

    #[test]
    fn dropping_a_factor_drops_its_left_class() {
        // Z *2* Z_1 *1* Z_3 collapses to Z *1* Z_3
        let g = GroupSpec::multi_product(
            vec![CyclicFactor::Infinite, fin(1), fin(3)],
            vec![2, 1],
        )
        .unwrap();
        assert_eq!(g.pair_classes(), vec![1]);
        assert_eq!(g.torsion_orders(), vec![3]);
    }

    #[test]
    fn p_group_detection() {
        let g = GroupSpec::p_group_product(5, &[2, 1, 1], 2).unwrap();
        assert_eq!(g.p_group(), Some((5, vec![2, 1, 1])));
        assert_eq!(g.torsion_orders(), vec![25, 5, 5]);
        let g = GroupSpec::direct_sum(vec![fin(6), fin(2)]).unwrap();
        assert_eq!(g.p_group(), None);
        let g = GroupSpec::direct_sum(vec![CyclicFactor::Infinite, fin(4)]).unwrap();
        assert_eq!(g.p_group(), None);
        assert_eq!(GroupSpec::p_group_product(6, &[1], 1).unwrap_err(), GroupError::NotPrime(6));
        assert!(matches!(
            GroupSpec::p_group_product(3, &[64], 1).unwrap_err(),
            GroupError::PPowerOverflow { p: 3, alpha: 64 }
        ));
    }

    #[test]
    fn group_rendering() {
        let g = GroupSpec::direct_sum(vec![CyclicFactor::Infinite, fin(4), fin(2)]).unwrap();
        assert_eq!(g.to_string(), "Z + Z_4 + Z_2");
        let g = GroupSpec::nilpotent_product(vec![fin(9), fin(3)], 2).unwrap();
        assert_eq!(g.to_string(), "Z_9 *2* Z_3");
        let g = GroupSpec::multi_product(
            vec![CyclicFactor::Infinite, CyclicFactor::Infinite, fin(3)],
            vec![2, 1],
        )
        .unwrap();
        assert_eq!(g.to_string(), "Z *2* Z + Z_3");
        let g = GroupSpec::direct_sum(vec![fin(1)]).unwrap();
        assert_eq!(g.to_string(), "Z_1");
    }

    #[test]
    fn structure_canonicalization_and_order() {
        let s = AbelianStructure::new(
            BigUint::zero(),
            vec![(3, BigUint::from(0u32)), (3, BigUint::from(5u32))],
        )
        .unwrap();
        assert_eq!(s.to_string(), "Z_3^(5)");
        assert_eq!(s.order().to_string(), "3^5");
        assert_eq!(
            s.order().as_prime_power(),
            Some(PPowerOrder {
                prime: 3,
                exponent: BigUint::from(5u32)
            })
        );

        let s = AbelianStructure::new(
            BigUint::from(1u32),
            vec![(4, BigUint::from(2u32)), (2, BigUint::from(3u32))],
        )
        .unwrap();
        assert_eq!(s.to_string(), "Z + Z_4^(2) + Z_2^(3)");
        assert_eq!(s.order(), GroupOrder::Infinite);

        // 4^1 * 2^1 = 2^3
        let s = AbelianStructure::new(
            BigUint::zero(),
            vec![(4, BigUint::from(1u32)), (2, BigUint::from(1u32))],
        )
        .unwrap();
        assert_eq!(s.order().to_string(), "2^3");

        // merged equal moduli and dropped units
        let s = AbelianStructure::new(
            BigUint::zero(),
            vec![
                (6, BigUint::from(1u32)),
                (6, BigUint::from(1u32)),
                (1, BigUint::from(7u32)),
            ],
        )
        .unwrap();
        assert_eq!(s.torsion(), &[(6, BigUint::from(2u32))]);
        assert_eq!(s.order().to_string(), "2^2 * 3^2");
        assert!(s.order().as_prime_power().is_none());

        let trivial = AbelianStructure::trivial();
        assert!(trivial.is_trivial());
        assert_eq!(trivial.to_string(), "1");
        assert_eq!(trivial.order().to_string(), "1");
        assert!(trivial.order().is_trivial());

        assert_eq!(
            AbelianStructure::new(BigUint::zero(), vec![(4, BigUint::from(1u32)), (3, BigUint::from(1u32))])
                .unwrap_err(),
            GroupError::BrokenChain { prev: 4, next: 3 }
        );
    }

    #[test]
    fn order_exponent_lookup() {
        let s = AbelianStructure::new(
            BigUint::zero(),
            vec![(12, BigUint::from(2u32)), (2, BigUint::from(1u32))],
        )
        .unwrap();
        let order = s.order();
        assert_eq!(order.to_string(), "2^5 * 3^2");
        assert_eq!(order.exponent_of(2), BigUint::from(5u32));
        assert_eq!(order.exponent_of(3), BigUint::from(2u32));
        assert_eq!(order.exponent_of(5), BigUint::zero());
    }
}
