//! Exponent calculus for multiplier structure formulas.
//!
//! Provides the Mobius function, the Witt formula `chi_w(n)`, and the
//! derived exponent families used by the structure theorems:
//!
//! * `beta`: nested Witt composition along a class row,
//! * `d_exponent`: nested composition over a sum of Witt values,
//! * `f_exponent` / `g_exponent`: Witt sums for c-nilpotent multipliers
//!   of uniform nilpotent products,
//! * `u_value` / `h_value` / `e_exponent`: the mixed-class product family.
//!
//! All arithmetic is exact; values grow fast, so everything is BigUint.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::numbers;

/// A polynilpotent class row `(c_1, ..., c_s)` with `s >= 1`, each `c_k >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct ClassRow(Vec<u32>);

impl ClassRow {
    pub fn new(classes: Vec<u32>) -> Result<Self, ExponentError> {
        if classes.is_empty() {
            return Err(ExponentError::EmptyRow);
        }
        if classes.iter().any(|&c| c == 0) {
            return Err(ExponentError::ZeroClass);
        }
        Ok(ClassRow(classes))
    }

    /// Row of length 1, for c-nilpotent (single-class) computations.
    pub fn single(c: u32) -> Result<Self, ExponentError> {
        ClassRow::new(vec![c])
    }

    pub fn classes(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The innermost class `c_1`.
    pub fn first(&self) -> u32 {
        self.0[0]
    }

    /// The classes after `c_1`, applied outermost-last.
    pub fn tail(&self) -> &[u32] {
        &self.0[1..]
    }
}

impl fmt::Display for ClassRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for ClassRow {
    type Err = ExponentError;

    /// Parses a comma-separated row such as `2,1` or `(2,1)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut classes = Vec::new();
        for part in trimmed.split(',') {
            let c: u32 = part
                .trim()
                .parse()
                .map_err(|_| ExponentError::BadRowLiteral(s.to_string()))?;
            classes.push(c);
        }
        ClassRow::new(classes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExponentError {
    #[error("mobius is undefined at 0")]
    MobiusZero,
    #[error("witt weight must be at least 1")]
    ZeroWeight,
    #[error("class row must be nonempty")]
    EmptyRow,
    #[error("class row entries must be at least 1")]
    ZeroClass,
    #[error("cannot parse class row from {0:?}")]
    BadRowLiteral(String),
    #[error("class ordering violated: need {need}, got c = {c} and n = {n}")]
    ClassOrder { need: &'static str, c: u32, n: u32 },
    #[error("product classes must be nonincreasing and at least 1")]
    BadClassList,
    #[error("index {index} out of range for {what}")]
    IndexOutOfRange { what: &'static str, index: usize },
}

/// Mobius function; 0 on non-squarefree inputs, otherwise `(-1)^k` for `k`
/// distinct prime factors.
pub fn mobius(d: u64) -> Result<i32, ExponentError> {
    if d == 0 {
        return Err(ExponentError::MobiusZero);
    }
    let factors = numbers::factor(d);
    if factors.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if factors.len() % 2 == 0 { 1 } else { -1 })
}

thread_local! {
    static WITT_CACHE: RefCell<HashMap<(u32, u64), BigUint>> = RefCell::new(HashMap::new());
}

/// The Witt formula `chi_w(n) = (1/w) sum_{d | w} mu(d) n^(w/d)`:
/// the number of basic commutators of weight `w` on `n` letters.
pub fn witt(weight: u32, letters: &BigUint) -> Result<BigUint, ExponentError> {
    if weight == 0 {
        return Err(ExponentError::ZeroWeight);
    }
    let key = letters.to_u64().map(|n| (weight, n));
    if let Some(k) = key {
        let hit = WITT_CACHE.with(|c| c.borrow().get(&k).cloned());
        if let Some(v) = hit {
            return Ok(v);
        }
    }
    let mut acc = BigInt::zero();
    for d in numbers::divisors(weight) {
        let mu = mobius(u64::from(d)).expect("divisor is nonzero");
        if mu == 0 {
            continue;
        }
        let term = BigInt::from(letters.pow(weight / d));
        if mu > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let (q, r) = acc.div_rem(&BigInt::from(weight));
    assert!(r.is_zero(), "witt divisor sum must be divisible by the weight");
    assert!(!q.is_negative(), "witt value must be nonnegative");
    let value = q.to_biguint().expect("nonnegative");
    if let Some(k) = key {
        WITT_CACHE.with(|c| c.borrow_mut().insert(k, value.clone()));
    }
    Ok(value)
}

/// `witt` on a machine-word letter count.
pub fn witt64(weight: u32, letters: u64) -> Result<BigUint, ExponentError> {
    witt(weight, &BigUint::from(letters))
}

/// Applies `chi_{c+1}` for each class `c` in `tail`, innermost first.
pub fn nested_tail(tail: &[u32], value: BigUint) -> BigUint {
    let mut acc = value;
    for &c in tail {
        acc = witt(c + 1, &acc).expect("class + 1 is a positive weight");
    }
    acc
}

/// `beta_i` for the row `(c_1, ..., c_s)`:
/// `chi_{c_s+1}( ... chi_{c_2+1}( chi_{c_1+1}(i) ) ... )`.
pub fn beta(row: &ClassRow, letters: u64) -> BigUint {
    nested_tail(row.classes(), BigUint::from(letters))
}

/// `d_i` for a uniform product of class `n` under the row `(c_1, ..., c_s)`:
/// the tail composition applied to `sum_{j=1..n} chi_{c_1+j}(i)`.
/// Requires `c_1 >= n >= 1`.
pub fn d_exponent(row: &ClassRow, product_class: u32, letters: u64) -> Result<BigUint, ExponentError> {
    let c1 = row.first();
    if product_class == 0 {
        return Err(ExponentError::ZeroClass);
    }
    if c1 < product_class {
        return Err(ExponentError::ClassOrder {
            need: "c_1 >= n",
            c: c1,
            n: product_class,
        });
    }
    let letters = BigUint::from(letters);
    let mut inner = BigUint::zero();
    for j in 1..=product_class {
        inner += witt(c1 + j, &letters)?;
    }
    Ok(nested_tail(row.tail(), inner))
}

/// `f_k`-style exponent `sum_{i=1..n} chi_{c+i}(letters)` for `c >= n >= 1`.
pub fn f_exponent(c: u32, n: u32, letters: u64) -> Result<BigUint, ExponentError> {
    if n == 0 || c == 0 {
        return Err(ExponentError::ZeroClass);
    }
    if c < n {
        return Err(ExponentError::ClassOrder { need: "c >= n", c, n });
    }
    let letters = BigUint::from(letters);
    let mut acc = BigUint::zero();
    for i in 1..=n {
        acc += witt(c + i, &letters)?;
    }
    Ok(acc)
}

/// `g_k`-style exponent `sum_{i=1..c} chi_{n+i}(letters)` for `n >= c >= 1`.
pub fn g_exponent(c: u32, n: u32, letters: u64) -> Result<BigUint, ExponentError> {
    if n == 0 || c == 0 {
        return Err(ExponentError::ZeroClass);
    }
    if n < c {
        return Err(ExponentError::ClassOrder { need: "n >= c", c, n });
    }
    let letters = BigUint::from(letters);
    let mut acc = BigUint::zero();
    for i in 1..=c {
        acc += witt(n + i, &letters)?;
    }
    Ok(acc)
}

fn check_class_list(row: &ClassRow, classes: &[u32]) -> Result<(), ExponentError> {
    if classes.iter().any(|&n| n == 0) || classes.windows(2).any(|w| w[0] < w[1]) {
        return Err(ExponentError::BadClassList);
    }
    if let Some(&n1) = classes.first() {
        if row.first() < n1 {
            return Err(ExponentError::ClassOrder {
                need: "c_1 >= n_1",
                c: row.first(),
                n: n1,
            });
        }
    }
    Ok(())
}

/// The base count `u` for a mixed-class product with `infinite_count` (`t`)
/// infinite factors and pair classes `(n_1, ..., n_k)`:
///
/// `u = sum_{j=1..n_{t-1}} chi_{c_1+j}(t)
///    + sum_{i=1..t-2} sum_{j=n_{i+1}+1..n_i} chi_{c_1+j}(i+1)`.
///
/// For `t <= 1` every term is a Witt value on at most one letter at weight
/// at least 2, so `u = 0` and the `n_0` subscript is never consulted.
pub fn u_value(row: &ClassRow, classes: &[u32], infinite_count: usize) -> Result<BigUint, ExponentError> {
    check_class_list(row, classes)?;
    let t = infinite_count;
    if t > classes.len() + 1 {
        return Err(ExponentError::IndexOutOfRange {
            what: "infinite factor count",
            index: t,
        });
    }
    if t <= 1 {
        return Ok(BigUint::zero());
    }
    let c1 = row.first();
    let n = |j: usize| classes[j - 1];
    let mut acc = BigUint::zero();
    for j in 1..=n(t - 1) {
        acc += witt64(c1 + j, t as u64)?;
    }
    for i in 1..=t - 2 {
        for j in n(i + 1) + 1..=n(i) {
            acc += witt64(c1 + j, (i + 1) as u64)?;
        }
    }
    Ok(acc)
}

/// The step count `h_j = sum_{lambda=1..n_j} (chi_{c_1+lambda}(j+1) - chi_{c_1+lambda}(j))`
/// for `1 <= j <= k`. Each summand is nonnegative.
pub fn h_value(row: &ClassRow, classes: &[u32], j: usize) -> Result<BigUint, ExponentError> {
    check_class_list(row, classes)?;
    if j == 0 || j > classes.len() {
        return Err(ExponentError::IndexOutOfRange { what: "h index", index: j });
    }
    let c1 = row.first();
    let nj = classes[j - 1];
    let mut acc = BigUint::zero();
    for lambda in 1..=nj {
        let hi = witt64(c1 + lambda, (j + 1) as u64)?;
        let lo = witt64(c1 + lambda, j as u64)?;
        acc += hi - lo;
    }
    Ok(acc)
}

/// `e_i` for a mixed-class product: the row tail composition applied to
/// `u + sum_{j=t..i} h_j`, where the sum starts at `max(t, 1)` because
/// `h_0 = 0` under any reading. Valid for `i = 0` and for `t <= i <= k`.
pub fn e_exponent(
    row: &ClassRow,
    classes: &[u32],
    infinite_count: usize,
    i: usize,
) -> Result<BigUint, ExponentError> {
    let t = infinite_count;
    if !(i == 0 || (t <= i && i <= classes.len())) {
        return Err(ExponentError::IndexOutOfRange { what: "e index", index: i });
    }
    let mut acc = u_value(row, classes, t)?;
    for j in t.max(1)..=i {
        acc += h_value(row, classes, j)?;
    }
    Ok(nested_tail(row.tail(), acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(classes: &[u32]) -> ClassRow {
        ClassRow::new(classes.to_vec()).unwrap()
    }

    fn w(weight: u32, letters: u64) -> u64 {
        witt64(weight, letters).unwrap().to_u64().unwrap()
    }

    #[test]
    fn mobius_first_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1];
        for (i, &m) in expected.iter().enumerate() {
            assert_eq!(mobius(i as u64 + 1).unwrap(), m, "mobius({})", i + 1);
        }
        assert_eq!(mobius(0), Err(ExponentError::MobiusZero));
    }

    #[test]
    fn witt_small_table() {
        // weight 2: n(n-1)/2
        assert_eq!(w(2, 0), 0);
        for n in 1..8 {
            assert_eq!(w(2, n), n * (n - 1) / 2);
        }
        // weight 1 is the identity
        for n in 0..8 {
            assert_eq!(w(1, n), n);
        }
        // weight 3: (n^3 - n)/3
        assert_eq!(w(3, 2), 2);
        assert_eq!(w(3, 3), 8);
        assert_eq!(w(3, 4), 20);
        assert_eq!(w(3, 5), 40);
        // weight 4: (n^4 - n^2)/4
        assert_eq!(w(4, 2), 3);
        assert_eq!(w(4, 3), 18);
        assert_eq!(w(4, 4), 60);
        // weight 6 has a composite divisor lattice
        assert_eq!(w(6, 2), 9);
        assert_eq!(w(6, 3), 116);
    }

    #[test]
    fn witt_degenerate_letters() {
        for weight in 1..10 {
            assert_eq!(w(weight, 0), 0);
        }
        for weight in 2..10 {
            assert_eq!(w(weight, 1), 0);
        }
        assert_eq!(w(1, 1), 1);
        assert_eq!(witt64(0, 3), Err(ExponentError::ZeroWeight));
    }

    #[test]
    fn witt_big_letters() {
        let n = BigUint::from(10u32).pow(12);
        let v = witt(2, &n).unwrap();
        let expected = (&n * (&n - 1u32)) / 2u32;
        assert_eq!(v, expected);
    }

    #[test]
    fn beta_compositions() {
        assert_eq!(beta(&row(&[1]), 3), BigUint::from(3u32));
        assert_eq!(beta(&row(&[1, 1]), 4), BigUint::from(15u32));
        assert_eq!(beta(&row(&[2]), 4), BigUint::from(20u32));
        assert_eq!(beta(&row(&[1, 2]), 3), witt64(3, 3).unwrap());
        for c in 1..4 {
            assert_eq!(beta(&row(&[c]), 1), BigUint::zero());
        }
    }

    #[test]
    fn d_exponent_examples() {
        assert_eq!(d_exponent(&row(&[2]), 2, 2).unwrap(), BigUint::from(5u32));
        assert_eq!(d_exponent(&row(&[2, 1]), 2, 2).unwrap(), BigUint::from(10u32));
        assert_eq!(
            d_exponent(&row(&[1]), 1, 4).unwrap(),
            beta(&row(&[1]), 4)
        );
        assert!(matches!(
            d_exponent(&row(&[1]), 2, 3),
            Err(ExponentError::ClassOrder { .. })
        ));
    }

    #[test]
    fn f_and_g_examples() {
        assert_eq!(f_exponent(2, 2, 2).unwrap(), BigUint::from(5u32));
        assert_eq!(g_exponent(1, 2, 3).unwrap(), BigUint::from(8u32));
        // g-formula instantiation for two letters at n = 2, c = 1
        assert_eq!(g_exponent(1, 2, 2).unwrap(), BigUint::from(2u32));
        assert!(matches!(f_exponent(1, 2, 3), Err(ExponentError::ClassOrder { .. })));
        assert!(matches!(g_exponent(2, 1, 3), Err(ExponentError::ClassOrder { .. })));
        // at n = c both sums coincide term by term
        for m in 0..6 {
            assert_eq!(f_exponent(3, 3, m).unwrap(), g_exponent(3, 3, m).unwrap());
        }
    }

    #[test]
    fn u_value_cases() {
        // uniform classes reduce to the d-style inner sum
        assert_eq!(u_value(&row(&[2]), &[2], 2).unwrap(), BigUint::from(5u32));
        // strictly decreasing classes exercise the double sum:
        // u = chi_3(3) + chi_4(2) = 8 + 3
        assert_eq!(u_value(&row(&[2]), &[2, 1], 3).unwrap(), BigUint::from(11u32));
        for t in 0..2 {
            assert_eq!(u_value(&row(&[2]), &[2, 1], t).unwrap(), BigUint::zero());
        }
        assert!(u_value(&row(&[2]), &[2, 1], 4).is_err());
        assert!(matches!(
            u_value(&row(&[1]), &[2, 1], 2),
            Err(ExponentError::ClassOrder { .. })
        ));
        assert!(matches!(
            u_value(&row(&[2]), &[1, 2], 2),
            Err(ExponentError::BadClassList)
        ));
    }

    #[test]
    fn h_value_cases() {
        // n_1 = 2: (chi_3(2) - chi_3(1)) + (chi_4(2) - chi_4(1)) = 2 + 3
        assert_eq!(h_value(&row(&[2]), &[2, 1], 1).unwrap(), BigUint::from(5u32));
        // n_2 = 1: chi_3(3) - chi_3(2) = 6
        assert_eq!(h_value(&row(&[2]), &[2, 1], 2).unwrap(), BigUint::from(6u32));
        assert!(h_value(&row(&[2]), &[2, 1], 0).is_err());
        assert!(h_value(&row(&[2]), &[2, 1], 3).is_err());
    }

    #[test]
    fn e_exponent_cases() {
        // two infinite factors, one torsion factor, classes (2, 1)
        assert_eq!(e_exponent(&row(&[2]), &[2, 1], 2, 0).unwrap(), BigUint::from(5u32));
        assert_eq!(e_exponent(&row(&[2]), &[2, 1], 2, 2).unwrap(), BigUint::from(11u32));
        // all factors torsion: e_0 = 0
        assert_eq!(e_exponent(&row(&[2]), &[2, 1], 0, 0).unwrap(), BigUint::zero());
        assert!(e_exponent(&row(&[2]), &[2, 1], 2, 1).is_err());
        assert!(e_exponent(&row(&[2]), &[2, 1], 0, 3).is_err());
        // a row tail composes the outer classes
        let inner = e_exponent(&row(&[2]), &[2, 1], 2, 2).unwrap();
        assert_eq!(
            e_exponent(&row(&[2, 1]), &[2, 1], 2, 2).unwrap(),
            witt(2, &inner).unwrap()
        );
    }

    #[test]
    fn uniform_e_matches_d() {
        // with all pair classes equal, e_i must telescope to d_{i+1}
        let r = row(&[3, 1]);
        let classes = [2u32, 2, 2];
        let t = 2usize;
        for i in t..=classes.len() {
            let e = e_exponent(&r, &classes, t, i).unwrap();
            let d = d_exponent(&r, 2, (i + 1) as u64).unwrap();
            assert_eq!(e, d, "e_{i} vs d_{}", i + 1);
        }
        let e0 = e_exponent(&r, &classes, t, 0).unwrap();
        assert_eq!(e0, d_exponent(&r, 2, t as u64).unwrap());
    }

    #[test]
    fn class_row_parsing_and_display() {
        let r: ClassRow = "2,1".parse().unwrap();
        assert_eq!(r.classes(), &[2, 1]);
        assert_eq!(r.to_string(), "(2,1)");
        let r: ClassRow = "(3)".parse().unwrap();
        assert_eq!(r.classes(), &[3]);
        assert!("".parse::<ClassRow>().is_err());
        assert!("2,0".parse::<ClassRow>().is_err());
        assert!("a,b".parse::<ClassRow>().is_err());
        assert!(ClassRow::new(vec![]).is_err());
    }
}
