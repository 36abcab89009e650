//! Weak compositions of a ground set and componentwise r-chain-free families.
//!
//! A family `M` of weak compositions into `p` parts is valid for `r` when,
//! for every `k < p`, the class `M_k` of distinct k-th parts is
//! r-chain-free. For such families
//!
//! ```text
//! sum over A in M of 1 / multinomial(n; |A_1|, ..., |A_p|)  <=  r^(p-1)
//! ```
//!
//! and `|M|` is at most the sum of the `r^(p-1)` largest p-multinomial
//! coefficients for `n` (zero-padded).

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num::{BigUint, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{
    binomial, count_coefficients, largest_coefficients, multinomial, reciprocal, sum_of_largest,
    to_rational, BigNat, ExactRational, Shape, DEFAULT_ENUMERATION_CAP,
};
use crate::families::{longest_chain, GroundSet, SetFamily, SubsetMask};

/// An ordered tuple of pairwise disjoint subsets covering the ground set.
/// Parts may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeakComposition {
    ground: GroundSet,
    parts: Vec<SubsetMask>,
}

impl WeakComposition {
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn parts(&self) -> &[SubsetMask] {
        &self.parts
    }

    /// Number of parts `p`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The k-th part, 1-based.
    pub fn part(&self, k: usize) -> Option<SubsetMask> {
        k.checked_sub(1).and_then(|i| self.parts.get(i)).copied()
    }

    pub fn part_sizes(&self) -> Vec<u64> {
        self.parts.iter().map(|s| s.len() as u64).collect()
    }

    pub fn shape(&self) -> Shape {
        Shape::with_total(self.ground.size() as u64, self.part_sizes())
            .expect("parts of a composition cover the ground set")
    }

    /// `multinomial(n; |A_1|, ..., |A_p|)`
    pub fn coefficient(&self) -> BigNat {
        multinomial(&self.shape())
    }
}

impl Ord for WeakComposition {
    /// Canonical order: by shape, then by the parts as masks.
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts
            .iter()
            .map(|s| s.len())
            .cmp(other.parts.iter().map(|s| s.len()))
            .then_with(|| self.parts.cmp(&other.parts))
            .then_with(|| self.ground.cmp(&other.ground))
    }
}

impl PartialOrd for WeakComposition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Checks disjointness and cover; any part count is accepted.
fn assemble(parts: Vec<SubsetMask>, ground: GroundSet) -> Result<WeakComposition> {
    for &part in &parts {
        if !ground.contains(part) {
            return Err(Error::OutsideGround(part));
        }
    }
    let mut seen = SubsetMask::EMPTY;
    for (j, &part) in parts.iter().enumerate() {
        let clash = seen.intersection(part);
        if !clash.is_empty() {
            let element = clash.elements().next().expect("nonempty");
            let first = parts
                .iter()
                .position(|p| p.contains(element))
                .expect("element was seen");
            return Err(Error::OverlappingParts {
                first: first + 1,
                second: j + 1,
                element,
            });
        }
        seen = seen.union(part);
    }
    let missing = ground.universe().difference(seen);
    if !missing.is_empty() {
        return Err(Error::IncompleteCover { missing });
    }
    Ok(WeakComposition { ground, parts })
}

/// Validate parts as a weak composition of `ground` into at least two parts.
pub fn validate_composition(parts: Vec<SubsetMask>, ground: GroundSet) -> Result<WeakComposition> {
    if parts.len() < 2 {
        return Err(Error::PartCountTooSmall(parts.len()));
    }
    assemble(parts, ground)
}

/// A set of distinct weak compositions sharing one ground set and part count.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompositionFamily {
    ground: GroundSet,
    parts: usize,
    members: BTreeSet<WeakComposition>,
}

impl CompositionFamily {
    pub fn empty(ground: GroundSet, p: usize) -> Self {
        CompositionFamily {
            ground,
            parts: p,
            members: BTreeSet::new(),
        }
    }

    /// Family from distinct compositions; positions in errors are 0-based.
    pub fn new<I>(ground: GroundSet, p: usize, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = WeakComposition>,
    {
        let mut family = CompositionFamily::empty(ground, p);
        for (index, member) in members.into_iter().enumerate() {
            family.check_member(index, &member)?;
            if !family.members.insert(member) {
                return Err(Error::DuplicateComposition(index));
            }
        }
        Ok(family)
    }

    fn check_member(&self, index: usize, member: &WeakComposition) -> Result<()> {
        if member.ground != self.ground {
            return Err(Error::MismatchedComposition {
                index,
                reason: "different ground set".into(),
            });
        }
        if member.len() != self.parts {
            return Err(Error::MismatchedComposition {
                index,
                reason: format!("{} parts, family has {}", member.len(), self.parts),
            });
        }
        Ok(())
    }

    /// Insert a composition; returns whether it was new.
    pub fn insert(&mut self, member: WeakComposition) -> Result<bool> {
        self.check_member(self.members.len(), &member)?;
        Ok(self.members.insert(member))
    }

    /// All `p^n` weak compositions of the ground set into `p` parts.
    pub fn all(ground: GroundSet, p: usize) -> Result<Self> {
        Ok(CompositionFamily {
            ground,
            parts: p,
            members: all_compositions(ground, p)?.into_iter().collect(),
        })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    /// Ground-set size `n`.
    pub fn n(&self) -> u32 {
        self.ground.size()
    }

    /// Part count `p`.
    pub fn parts(&self) -> usize {
        self.parts
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, member: &WeakComposition) -> bool {
        self.members.contains(member)
    }

    /// Members in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = &WeakComposition> + '_ {
        self.members.iter()
    }
}

/// Guard on the number of compositions materialized at once.
const COMPOSITION_CAP: u64 = DEFAULT_ENUMERATION_CAP;

/// Every weak composition of `ground` into `p` parts, in canonical order.
pub fn all_compositions(ground: GroundSet, p: usize) -> Result<Vec<WeakComposition>> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    let elements: Vec<u32> = ground.elements().collect();
    let total = (p as u128).checked_pow(elements.len() as u32);
    if total.is_none_or(|t| t > COMPOSITION_CAP as u128) {
        return Err(Error::ResourceLimit {
            what: "weak compositions",
            needed: format!("{p}^{}", elements.len()),
            cap: COMPOSITION_CAP,
        });
    }
    let mut out = Vec::with_capacity(total.unwrap_or(0) as usize);
    let mut assignment = vec![0usize; elements.len()];
    loop {
        let mut parts = vec![SubsetMask::EMPTY; p];
        for (&e, &k) in elements.iter().zip(&assignment) {
            parts[k] = parts[k].union(SubsetMask::from_bits(1 << e));
        }
        out.push(WeakComposition { ground, parts });
        // Odometer step.
        let mut i = 0;
        while i < assignment.len() {
            assignment[i] += 1;
            if assignment[i] < p {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
        if i == assignment.len() {
            break;
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// All weak compositions of `ground` whose part sizes are `sizes`.
pub fn compositions_of_shape(ground: GroundSet, sizes: &[u64]) -> Result<Vec<WeakComposition>> {
    let shape = Shape::with_total(ground.size() as u64, sizes.to_vec())?;
    let count = multinomial(&shape);
    if count.to_u64().is_none_or(|c| c > COMPOSITION_CAP) {
        return Err(Error::ResourceLimit {
            what: "compositions of one shape",
            needed: count.to_string(),
            cap: COMPOSITION_CAP,
        });
    }
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(sizes.len());
    fill_shape(ground, ground.universe(), sizes, &mut parts, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn fill_shape(
    ground: GroundSet,
    remaining: SubsetMask,
    sizes: &[u64],
    parts: &mut Vec<SubsetMask>,
    out: &mut Vec<WeakComposition>,
) {
    let Some((&size, rest)) = sizes.split_first() else {
        out.push(WeakComposition {
            ground,
            parts: parts.clone(),
        });
        return;
    };
    if rest.is_empty() {
        parts.push(remaining);
        fill_shape(ground, SubsetMask::EMPTY, rest, parts, out);
        parts.pop();
        return;
    }
    let within = GroundSet::from_universe(remaining).expect("subset of a valid ground set");
    for part in within.subsets().filter(|s| s.len() as u64 == size) {
        parts.push(part);
        fill_shape(ground, remaining.difference(part), rest, parts, out);
        parts.pop();
    }
}

/// `M_k`: the distinct k-th parts (k is 1-based).
pub fn component_family(family: &CompositionFamily, k: usize) -> Result<SetFamily> {
    if k == 0 || k > family.parts {
        return Err(Error::IndexOutOfRange {
            index: k,
            len: family.parts,
        });
    }
    let mut out = SetFamily::empty(family.ground);
    for member in family.iter() {
        out.insert(member.parts[k - 1])?;
    }
    Ok(out)
}

/// Which components the validity predicate constrains.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Validity {
    /// Components `1..p`, leaving the last one free.
    #[default]
    Standard,
    /// Every component, including the last.
    Strict,
}

impl Validity {
    /// 1-based indices of the constrained components.
    pub fn constrained(self, p: usize) -> std::ops::Range<usize> {
        match self {
            Validity::Standard => 1..p.max(1),
            Validity::Strict => 1..p + 1,
        }
    }
}

/// A component class that holds too long a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentViolation {
    /// 1-based component index.
    pub k: usize,
    /// `r + 1` mutually comparable sets, smallest first.
    pub chain: Vec<SubsetMask>,
}

fn check_r(r: u64) -> Result<()> {
    if r < 1 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    Ok(())
}

/// The first constrained component that is not r-chain-free, if any.
pub fn first_violation(
    family: &CompositionFamily,
    r: u64,
    mode: Validity,
) -> Result<Option<ComponentViolation>> {
    check_r(r)?;
    for k in mode.constrained(family.parts) {
        let chain = longest_chain(&component_family(family, k)?);
        if chain.len() as u64 > r {
            return Ok(Some(ComponentViolation {
                k,
                chain: chain[..r as usize + 1].to_vec(),
            }));
        }
    }
    Ok(None)
}

/// True iff `M_k` is r-chain-free for every `k < p`.
pub fn is_valid_meshalkin_family(family: &CompositionFamily, r: u64) -> Result<bool> {
    is_valid_meshalkin_family_with(family, r, Validity::Standard)
}

pub fn is_valid_meshalkin_family_with(
    family: &CompositionFamily,
    r: u64,
    mode: Validity,
) -> Result<bool> {
    Ok(first_violation(family, r, mode)?.is_none())
}

/// `sum over A in M of 1 / multinomial(n; |A_1|, ..., |A_p|)`
pub fn meshalkin_lym_sum(family: &CompositionFamily) -> ExactRational {
    let mut per_shape: std::collections::BTreeMap<Vec<u64>, u64> = Default::default();
    for member in family.iter() {
        *per_shape.entry(member.part_sizes()).or_default() += 1;
    }
    per_shape
        .into_iter()
        .map(|(sizes, count)| {
            let shape = Shape::with_total(family.n() as u64, sizes).expect("member shape");
            reciprocal(&multinomial(&shape)) * to_rational(&BigNat::from(count))
        })
        .fold(ExactRational::zero(), |acc, term| acc + term)
}

/// `r^(p-1)`: the LYM budget and the number of coefficients summed by the
/// cardinality bound.
pub fn block_count(p: usize, r: u64) -> Result<BigNat> {
    if p < 1 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    let exponent = u32::try_from(p - 1)
        .map_err(|_| Error::InvalidParameter(format!("p = {p} is too large")))?;
    Ok(num::pow(BigUint::from(r), exponent as usize))
}

fn check_bound_params(p: usize, r: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!(
            "p must be at least 2, got {p}"
        )));
    }
    check_r(r)
}

/// The cardinality bound and the coefficients that make it up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub n: u64,
    pub p: usize,
    pub r: u64,
    /// `r^(p-1)`
    pub blocks: BigNat,
    pub bound: BigNat,
    /// The largest coefficients, in enumeration order.
    pub coefficients_used: Vec<(Shape, BigNat)>,
    /// Zero terms appended because `r^(p-1)` exceeds the coefficient count.
    pub padded_zeros: BigNat,
}

/// Sum of the `r^(p-1)` largest p-multinomial coefficients for `n`, with the
/// coefficients listed. The listing is capped; use [`meshalkin_bound_value`]
/// when only the number is needed.
pub fn meshalkin_bound(n: u64, p: usize, r: u64) -> Result<BoundReport> {
    check_bound_params(p, r)?;
    let blocks = block_count(p, r)?;
    let count = count_coefficients(n, p);
    let used = largest_coefficients(n, p, &blocks, DEFAULT_ENUMERATION_CAP)?;
    let bound: BigNat = used.iter().map(|(_, v)| v).sum();
    debug_assert_eq!(bound, sum_of_largest(n, p, &blocks).unwrap());
    let padded_zeros = if blocks > count {
        &blocks - &count
    } else {
        BigNat::zero()
    };
    Ok(BoundReport {
        n,
        p,
        r,
        blocks,
        bound,
        coefficients_used: used,
        padded_zeros,
    })
}

/// The bound alone; works far past the shape-enumeration cap.
pub fn meshalkin_bound_value(n: u64, p: usize, r: u64) -> Result<BigNat> {
    check_bound_params(p, r)?;
    sum_of_largest(n, p, &block_count(p, r)?)
}

/// The balanced shape: parts of size `ceil(n/p)` first, then `floor(n/p)`.
pub fn balanced_shape(n: u64, p: usize) -> Result<Shape> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    let q = n / p as u64;
    let extra = (n % p as u64) as usize;
    let parts = (0..p).map(|i| if i < extra { q + 1 } else { q }).collect();
    Shape::with_total(n, parts)
}

/// Every composition of the balanced shape. Each `M_k` is a single level,
/// so the family is valid for `r = 1` and has the largest coefficient as
/// its size.
pub fn balanced_extremal_family(n: u32, p: usize) -> Result<CompositionFamily> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!(
            "p must be at least 2, got {p}"
        )));
    }
    let ground = GroundSet::new(n)?;
    let shape = balanced_shape(n as u64, p)?;
    CompositionFamily::new(ground, p, compositions_of_shape(ground, shape.parts())?)
}

/// `M(F)`: tails `(A_2, ..., A_p)` of members whose first part is `first`,
/// as compositions of `S \ F` into `p - 1` parts.
///
/// A 2-part family restricts to a 1-part family; restricting a 1-part
/// family is rejected.
pub fn restriction(family: &CompositionFamily, first: SubsetMask) -> Result<CompositionFamily> {
    if family.parts < 2 {
        return Err(Error::InvalidParameter(
            "restriction needs at least two parts".into(),
        ));
    }
    let ground = family.ground.without(first);
    let members = family
        .iter()
        .filter(|m| m.parts[0] == first)
        .map(|m| WeakComposition {
            ground,
            parts: m.parts[1..].to_vec(),
        })
        .collect();
    Ok(CompositionFamily {
        ground,
        parts: family.parts - 1,
        members,
    })
}

/// One block of the replacement argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplacementStep {
    /// 1-based block index `j`.
    pub block: usize,
    /// `M_j`
    pub block_value: BigNat,
    /// Number of terms replaced by `1 / M_j`.
    pub replaced: usize,
    /// Sum of the replaced terms before replacement.
    pub original_sum: ExactRational,
    /// `replaced / M_j`
    pub replaced_sum: ExactRational,
    /// Every replaced denominator was at most `M_j`, so the step did not
    /// increase the total.
    pub dominated: bool,
    /// Whole left-hand side after this step.
    pub running_total: ExactRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplacementCertificate {
    pub fits: bool,
    pub terms: usize,
    /// `r^(p-1)`
    pub budget: BigNat,
    /// `M_1 + ... + M_{r^(p-1)}`
    pub capacity: BigNat,
    /// Left-hand side before any replacement.
    pub initial_total: ExactRational,
    pub steps: Vec<ReplacementStep>,
    /// Terms left once the blocks were used up.
    pub leftover: usize,
}

/// Runs the greedy replacement on a multiset of shapes.
///
/// Terms `1/multinomial(shape)` are taken largest denominator first; block
/// `j` replaces the next `M_j` of them by `1/M_j`. The multiset fits when it
/// has at most `M_1 + ... + M_{r^(p-1)}` terms and the left-hand side never
/// exceeds `r^(p-1)`, before or after any step.
pub fn replacement_bound_certificate(
    shapes: &[Shape],
    n: u64,
    p: usize,
    r: u64,
) -> Result<ReplacementCertificate> {
    check_bound_params(p, r)?;
    for shape in shapes {
        if shape.n() != n || shape.len() != p {
            return Err(Error::InvalidShape(format!(
                "{shape} is not a {p}-part shape for n = {n}"
            )));
        }
    }
    let budget = block_count(p, r)?;
    let capacity = sum_of_largest(n, p, &budget)?;

    let mut denominators: Vec<BigNat> = shapes.iter().map(multinomial).collect();
    denominators.sort_unstable_by(|a, b| b.cmp(a));

    // Each nonzero block consumes at least one term, so no more blocks than
    // terms are ever needed.
    let needed = budget.clone().min(BigNat::from(denominators.len()));
    let blocks = largest_coefficients(n, p, &needed, DEFAULT_ENUMERATION_CAP)?;

    let initial_total: ExactRational = denominators
        .iter()
        .map(reciprocal)
        .fold(ExactRational::zero(), |a, b| a + b);
    let budget_q = to_rational(&budget);
    let mut within_budget = initial_total <= budget_q;
    let mut total = initial_total.clone();
    let mut next = 0usize;
    let mut steps = Vec::new();
    for (j, (_, value)) in blocks.iter().enumerate() {
        if next == denominators.len() {
            break;
        }
        let cap = value.to_usize().unwrap_or(usize::MAX);
        let take = cap.min(denominators.len() - next);
        let taken = &denominators[next..next + take];
        let original_sum = taken
            .iter()
            .map(reciprocal)
            .fold(ExactRational::zero(), |a, b| a + b);
        let replaced_sum = reciprocal(value) * to_rational(&BigNat::from(take));
        total = total - &original_sum + &replaced_sum;
        within_budget &= total <= budget_q;
        steps.push(ReplacementStep {
            block: j + 1,
            block_value: value.clone(),
            replaced: take,
            original_sum,
            replaced_sum,
            dominated: taken.iter().all(|d| d <= value),
            running_total: total.clone(),
        });
        next += take;
    }
    let terms = denominators.len();
    let fits = BigNat::from(terms) <= capacity && within_budget;
    Ok(ReplacementCertificate {
        fits,
        terms,
        budget,
        capacity,
        initial_total,
        steps,
        leftover: terms - next,
    })
}

/// `1 / C(n, |A_1|) * 1 / multinomial(n - |A_1|; |A_2|, ..., |A_p|)`, the
/// two-factor form of one member's term.
pub fn factored_term(member: &WeakComposition) -> ExactRational {
    let shape = member.shape();
    let head = binomial(shape.n(), shape.parts()[0] as i64);
    let tail = shape
        .tail()
        .map(|t| multinomial(&t))
        .unwrap_or_else(|| 1u32.into());
    reciprocal(&head) * reciprocal(&tail)
}
