//! Exact binomial and multinomial arithmetic.
//!
//! Every value is an arbitrary-precision integer or a reduced rational; no
//! floating point is used anywhere. The coefficient enumeration orders the
//! p-multinomial coefficients for `n` by value, largest first, with ties
//! broken by the lexicographically smallest shape.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational, BigUint, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type BigNat = BigUint;

/// Exact rational, always kept in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

/// Default maximum number of shapes (or coefficient classes) materialized by
/// a single enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// `n!`
pub fn factorial(n: u64) -> BigNat {
    let mut acc = BigNat::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// `n` choose `k`, zero when `k` lies outside `0..=n`.
pub fn binomial(n: u64, k: i64) -> BigNat {
    if k < 0 || k as u64 > n {
        return BigNat::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigNat::one();
    // acc stays integral: after step i it equals C(n - k + i, i).
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// `1 / value` as an exact rational. `value` must be nonzero.
pub fn reciprocal(value: &BigNat) -> ExactRational {
    BigRational::new(BigInt::one(), BigInt::from(value.clone()))
}

/// Lift a natural number into the rationals.
pub fn to_rational(value: &BigNat) -> ExactRational {
    BigRational::from_integer(BigInt::from(value.clone()))
}

/// The index `(a_1, ..., a_p)` of a multinomial coefficient for `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    n: u64,
    parts: Vec<u64>,
}

impl Shape {
    /// Shape whose total is the sum of `parts`.
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidShape(
                "a shape needs at least one part".into(),
            ));
        }
        let n = parts
            .iter()
            .try_fold(0u64, |acc, &a| acc.checked_add(a))
            .ok_or_else(|| Error::InvalidShape("part sum overflows".into()))?;
        Ok(Shape { n, parts })
    }

    /// Shape with an explicit total, checked against the parts.
    pub fn with_total(n: u64, parts: Vec<u64>) -> Result<Self> {
        let shape = Shape::new(parts)?;
        if shape.n != n {
            return Err(Error::InvalidShape(format!(
                "parts {:?} sum to {}, expected {}",
                shape.parts, shape.n, n
            )));
        }
        Ok(shape)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Number of parts `p`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The shape `(a_2, ..., a_p)` of `n - a_1`, or `None` for a one-part shape.
    pub fn tail(&self) -> Option<Shape> {
        if self.parts.len() < 2 {
            return None;
        }
        Some(Shape {
            n: self.n - self.parts[0],
            parts: self.parts[1..].to_vec(),
        })
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// `n! / (a_1! ... a_p!)`
pub fn multinomial(shape: &Shape) -> BigNat {
    let mut denominator = BigNat::one();
    for &a in &shape.parts {
        denominator *= factorial(a);
    }
    factorial(shape.n) / denominator
}

/// Number of p-multinomial coefficients for `n`, i.e. `C(n + p - 1, p - 1)`.
pub fn count_coefficients(n: u64, p: usize) -> BigNat {
    if p == 0 {
        return if n == 0 {
            BigNat::one()
        } else {
            BigNat::zero()
        };
    }
    binomial(n + p as u64 - 1, p as i64 - 1)
}

/// All shapes sharing one multiset of part sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientClass {
    /// Part sizes in weakly decreasing order, padded with zeros to length p.
    pub partition: Vec<u64>,
    /// The common multinomial coefficient.
    pub value: BigNat,
    /// Number of distinct shapes (orderings of `partition`).
    pub multiplicity: BigNat,
}

impl CoefficientClass {
    /// Shapes of this class in lexicographic order.
    pub fn shapes(&self) -> impl Iterator<Item = Shape> + '_ {
        let n = self.partition.iter().sum();
        let mut current = self.partition.clone();
        current.sort_unstable();
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = Shape {
                n,
                parts: current.clone(),
            };
            done = !next_permutation(&mut current);
            Some(out)
        })
    }
}

fn next_permutation(v: &mut [u64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn check_parts(p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    Ok(())
}

/// Coefficient classes for `(n, p)`, sorted by value descending and then by
/// partition descending.
pub fn coefficient_classes(n: u64, p: usize, cap: u64) -> Result<Vec<CoefficientClass>> {
    check_parts(p)?;
    let mut partitions = Vec::new();
    let mut current = Vec::with_capacity(p);
    collect_partitions(n, n, p, &mut current, &mut partitions, cap)?;

    let mut factorials = Vec::with_capacity(n as usize + 1);
    factorials.push(BigNat::one());
    for i in 1..=n {
        let next = &factorials[i as usize - 1] * i;
        factorials.push(next);
    }

    let mut classes: Vec<CoefficientClass> = partitions
        .into_iter()
        .map(|partition| {
            let mut value = factorials[n as usize].clone();
            for &a in &partition {
                value /= &factorials[a as usize];
            }
            // p! / prod(run!) as a product of binomials over the runs.
            let mut multiplicity = BigNat::one();
            let mut slots = p as u64;
            for run in partition.chunk_by(|a, b| a == b) {
                multiplicity *= binomial(slots, run.len() as i64);
                slots -= run.len() as u64;
            }
            CoefficientClass {
                partition,
                value,
                multiplicity,
            }
        })
        .collect();
    classes.sort_by(|a, b| {
        b.value
            .cmp(&a.value)
            .then_with(|| b.partition.cmp(&a.partition))
    });
    Ok(classes)
}

fn collect_partitions(
    remaining: u64,
    max_part: u64,
    slots: usize,
    current: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
    cap: u64,
) -> Result<()> {
    if slots == 0 {
        if remaining == 0 {
            if out.len() as u64 >= cap {
                return Err(Error::ResourceLimit {
                    what: "coefficient classes",
                    needed: format!("more than {cap}"),
                    cap,
                });
            }
            out.push(current.clone());
        }
        return Ok(());
    }
    // The remaining slots can hold at most slots * max_part.
    if (slots as u128) * (max_part as u128) < remaining as u128 {
        return Ok(());
    }
    if remaining == 0 {
        let mut padded = current.clone();
        padded.resize(current.len() + slots, 0);
        if out.len() as u64 >= cap {
            return Err(Error::ResourceLimit {
                what: "coefficient classes",
                needed: format!("more than {cap}"),
                cap,
            });
        }
        out.push(padded);
        return Ok(());
    }
    let hi = remaining.min(max_part);
    for a in (1..=hi).rev() {
        current.push(a);
        collect_partitions(remaining - a, a, slots - 1, current, out, cap)?;
        current.pop();
    }
    Ok(())
}

/// Sum of the `t` largest p-multinomial coefficients for `n`, padding with
/// zeros past the end. With `t` at least the coefficient count this is `p^n`.
pub fn sum_of_largest(n: u64, p: usize, t: &BigNat) -> Result<BigNat> {
    sum_of_largest_with_cap(n, p, t, DEFAULT_ENUMERATION_CAP)
}

pub fn sum_of_largest_with_cap(n: u64, p: usize, t: &BigNat, cap: u64) -> Result<BigNat> {
    let classes = coefficient_classes(n, p, cap)?;
    let mut remaining = t.clone();
    let mut total = BigNat::zero();
    for class in &classes {
        if remaining.is_zero() {
            break;
        }
        let take = (&class.multiplicity).min(&remaining).clone();
        total += &class.value * &take;
        remaining -= take;
    }
    Ok(total)
}

/// The `min(t, count)` largest coefficients with their shapes, in the
/// canonical order of [`enumerate_coefficients`].
pub fn largest_coefficients(
    n: u64,
    p: usize,
    t: &BigNat,
    cap: u64,
) -> Result<Vec<(Shape, BigNat)>> {
    let classes = coefficient_classes(n, p, cap)?;
    let wanted = t.min(&count_coefficients(n, p)).clone();
    let wanted = match wanted.to_u64() {
        Some(w) if w <= cap => w,
        _ => {
            return Err(Error::ResourceLimit {
                what: "coefficient shapes",
                needed: wanted.to_string(),
                cap,
            })
        }
    };

    let mut out: Vec<(Shape, BigNat)> = Vec::with_capacity(wanted as usize);
    let mut start = 0;
    while start < classes.len() && (out.len() as u64) < wanted {
        let value = &classes[start].value;
        let end = start
            + classes[start..]
                .iter()
                .take_while(|c| c.value == *value)
                .count();
        let group = &classes[start..end];
        let group_size: BigNat = group.iter().map(|c| &c.multiplicity).sum();
        let left = wanted - out.len() as u64;
        if group_size.to_u64().is_none_or(|g| g > cap) {
            return Err(Error::ResourceLimit {
                what: "shapes of one coefficient value",
                needed: group_size.to_string(),
                cap,
            });
        }
        let mut shapes: Vec<Shape> = group.iter().flat_map(|c| c.shapes()).collect();
        if group.len() > 1 {
            shapes.sort_unstable();
        }
        out.extend(
            shapes
                .into_iter()
                .take(left as usize)
                .map(|s| (s, value.clone())),
        );
        start = end;
    }
    Ok(out)
}

/// Every p-multinomial coefficient for `n` with its shape, weakly decreasing
/// by value, ties broken by the lexicographically smallest shape.
pub fn enumerate_coefficients(n: u64, p: usize) -> Result<Vec<(Shape, BigNat)>> {
    enumerate_coefficients_with_cap(n, p, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_coefficients_with_cap(n: u64, p: usize, cap: u64) -> Result<Vec<(Shape, BigNat)>> {
    check_parts(p)?;
    let count = count_coefficients(n, p);
    if count.to_u64().is_none_or(|c| c > cap) {
        return Err(Error::ResourceLimit {
            what: "coefficient shapes",
            needed: count.to_string(),
            cap,
        });
    }
    largest_coefficients(n, p, &count, cap)
}

/// Compare two coefficient entries in enumeration order.
pub fn enumeration_order(a: &(Shape, BigNat), b: &(Shape, BigNat)) -> Ordering {
    b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0))
}
