//! Families of subsets of a small ground set.
//!
//! Chains are measured by cardinality (the number of sets). A family is
//! r-chain-free when it holds no r+1 mutually comparable sets, i.e. its
//! longest chain has at most r members.

use std::collections::BTreeSet;
use std::fmt;

use num::{BigUint, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{binomial, factorial, reciprocal, BigNat, ExactRational};

/// Largest ground set supported by mask-level operations.
pub const MAX_GROUND_SIZE: u32 = 16;

/// A subset of the ground set as a bit mask.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub const fn from_bits(bits: u32) -> Self {
        SubsetMask(bits)
    }

    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Result<Self> {
        let mut bits = 0u32;
        for e in elements {
            if e >= MAX_GROUND_SIZE {
                return Err(Error::InvalidParameter(format!(
                    "element {e} exceeds the ground-set limit {MAX_GROUND_SIZE}"
                )));
            }
            bits |= 1 << e;
        }
        Ok(SubsetMask(bits))
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// Cardinality.
    pub const fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, element: u32) -> bool {
        element < 32 && self.0 & (1 << element) != 0
    }

    pub const fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_proper_subset_of(self, other: SubsetMask) -> bool {
        self.0 != other.0 && self.is_subset_of(other)
    }

    pub const fn is_comparable(self, other: SubsetMask) -> bool {
        self.is_subset_of(other) || other.is_subset_of(self)
    }

    pub const fn is_disjoint(self, other: SubsetMask) -> bool {
        self.0 & other.0 == 0
    }

    pub const fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    pub const fn intersection(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & other.0)
    }

    pub const fn difference(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !other.0)
    }

    /// Elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let e = bits.trailing_zeros();
            bits &= bits - 1;
            Some(e)
        })
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// The ground set `S`.
///
/// Usually `{0, ..., n-1}`, but any subset of the first
/// [`MAX_GROUND_SIZE`] labels is allowed so that restricted families can
/// keep their original element labels.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet {
    universe: SubsetMask,
}

impl GroundSet {
    pub fn new(n: u32) -> Result<Self> {
        if n > MAX_GROUND_SIZE {
            return Err(Error::InvalidParameter(format!(
                "ground set of size {n} exceeds the limit {MAX_GROUND_SIZE}"
            )));
        }
        Ok(GroundSet {
            universe: SubsetMask(((1u64 << n) - 1) as u32),
        })
    }

    pub fn from_universe(universe: SubsetMask) -> Result<Self> {
        if universe.bits() >> MAX_GROUND_SIZE != 0 {
            return Err(Error::InvalidParameter(format!(
                "universe {universe} uses labels beyond {MAX_GROUND_SIZE}"
            )));
        }
        Ok(GroundSet { universe })
    }

    /// Number of elements `n`.
    pub fn size(&self) -> u32 {
        self.universe.len()
    }

    pub fn universe(&self) -> SubsetMask {
        self.universe
    }

    pub fn contains(&self, set: SubsetMask) -> bool {
        set.is_subset_of(self.universe)
    }

    /// `S \ removed`.
    pub fn without(&self, removed: SubsetMask) -> GroundSet {
        GroundSet {
            universe: self.universe.difference(removed),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        self.universe.elements()
    }

    /// All subsets of the ground set, by ascending mask.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetMask> {
        // Enumerate submasks of the universe in increasing order.
        let universe = self.universe.bits();
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let current = next?;
            next = if current == universe {
                None
            } else {
                Some((current.wrapping_sub(universe)) & universe)
            };
            Some(SubsetMask(current))
        })
    }
}

/// A family of distinct subsets of one ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ground: GroundSet,
    members: BTreeSet<SubsetMask>,
}

impl SetFamily {
    pub fn empty(ground: GroundSet) -> Self {
        SetFamily {
            ground,
            members: BTreeSet::new(),
        }
    }

    /// Family from a list of distinct sets inside `ground`.
    pub fn new<I: IntoIterator<Item = SubsetMask>>(ground: GroundSet, sets: I) -> Result<Self> {
        let mut family = SetFamily::empty(ground);
        for set in sets {
            if !family.insert(set)? {
                return Err(Error::DuplicateMember(set));
            }
        }
        Ok(family)
    }

    /// `P_k(S)`: every k-element subset.
    pub fn level(ground: GroundSet, k: u32) -> Self {
        SetFamily {
            ground,
            members: ground.subsets().filter(|s| s.len() == k).collect(),
        }
    }

    pub fn power_set(ground: GroundSet) -> Self {
        SetFamily {
            ground,
            members: ground.subsets().collect(),
        }
    }

    /// Insert a set; returns whether it was new.
    pub fn insert(&mut self, set: SubsetMask) -> Result<bool> {
        if !self.ground.contains(set) {
            return Err(Error::OutsideGround(set));
        }
        Ok(self.members.insert(set))
    }

    /// Union with a family over the same ground set.
    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        if self.ground != other.ground {
            return Err(Error::InvalidParameter(
                "families live on different ground sets".into(),
            ));
        }
        Ok(SetFamily {
            ground: self.ground,
            members: self.members.union(&other.members).copied().collect(),
        })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: SubsetMask) -> bool {
        self.members.contains(&set)
    }

    pub fn iter(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        self.members.iter().copied()
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// A longest chain of the family, smallest set first.
///
/// Members are processed by increasing cardinality; each keeps the length
/// of the longest chain ending at it and a predecessor to rebuild it.
pub fn longest_chain(family: &SetFamily) -> Vec<SubsetMask> {
    let mut sets: Vec<SubsetMask> = family.iter().collect();
    sets.sort_by_key(|s| (s.len(), s.bits()));

    let mut height = vec![1usize; sets.len()];
    let mut pred: Vec<Option<usize>> = vec![None; sets.len()];
    for i in 0..sets.len() {
        for j in 0..i {
            if sets[j].is_proper_subset_of(sets[i]) && height[j] + 1 > height[i] {
                height[i] = height[j] + 1;
                pred[i] = Some(j);
            }
        }
    }

    let Some(mut end) = (0..sets.len()).max_by_key(|&i| (height[i], std::cmp::Reverse(i))) else {
        return Vec::new();
    };
    let mut chain = vec![sets[end]];
    while let Some(j) = pred[end] {
        chain.push(sets[j]);
        end = j;
    }
    chain.reverse();
    chain
}

/// Maximum number of mutually comparable members; 0 for the empty family.
pub fn longest_chain_cardinality(family: &SetFamily) -> usize {
    longest_chain(family).len()
}

fn check_r(r: u64) -> Result<()> {
    if r < 1 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    Ok(())
}

/// True iff the family holds no r+1 mutually comparable sets.
pub fn is_r_chain_free(family: &SetFamily, r: u64) -> Result<bool> {
    check_r(r)?;
    Ok(longest_chain_cardinality(family) as u64 <= r)
}

/// `sum over A of 1 / C(n, |A|)`.
pub fn lym_sum(family: &SetFamily) -> ExactRational {
    let n = family.ground().size() as u64;
    let mut per_level = vec![0u64; n as usize + 1];
    for set in family.iter() {
        per_level[set.len() as usize] += 1;
    }
    per_level
        .iter()
        .enumerate()
        .filter(|(_, &count)| count > 0)
        .map(|(k, &count)| {
            reciprocal(&binomial(n, k as i64)) * ExactRational::from_integer(count.into())
        })
        .fold(ExactRational::zero(), |acc, term| acc + term)
}

/// Number of maximal chains of the Boolean lattice on `n` elements passing
/// through a fixed `a`-element set: `a! (n - a)!`.
pub fn chains_through_count(a: u64, n: u64) -> Result<BigNat> {
    if a > n {
        return Err(Error::InvalidParameter(format!(
            "set size {a} exceeds n = {n}"
        )));
    }
    Ok(factorial(a) * factorial(n - a))
}

/// Integer form of the r-chain-free LYM inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    /// `sum over A of |A|! (n - |A|)!`
    pub lhs: BigNat,
    /// `r * n!`
    pub rhs: BigNat,
    pub holds: bool,
}

/// Counts maximal chains through members against `r` chains per maximal
/// chain. Refuses families that are not r-chain-free.
pub fn lemma_counting_check(family: &SetFamily, r: u64) -> Result<LemmaCheck> {
    if !is_r_chain_free(family, r)? {
        return Err(Error::PreconditionViolated(format!(
            "family has a chain of {} sets, more than r = {r}",
            longest_chain_cardinality(family)
        )));
    }
    let n = family.ground().size() as u64;
    let mut lhs = BigUint::zero();
    for set in family.iter() {
        lhs += chains_through_count(set.len() as u64, n)?;
    }
    let rhs = factorial(n) * r;
    let holds = lhs <= rhs;
    Ok(LemmaCheck { lhs, rhs, holds })
}

/// Levels `0..=n` ordered by binomial coefficient, largest first: closer to
/// `n/2` wins, and among equidistant levels the smaller one.
pub fn levels_by_size(n: u32) -> Vec<u32> {
    let mut levels: Vec<u32> = (0..=n).collect();
    levels.sort_by_key(|&m| ((2 * m as i64 - n as i64).abs(), m));
    levels
}

/// Union of the `r` largest levels `P_m(S)`; the full power set once
/// `r > n`.
pub fn erdos_extremal_family(n: u32, r: u64) -> Result<SetFamily> {
    check_r(r)?;
    let ground = GroundSet::new(n)?;
    let chosen: Vec<u32> = levels_by_size(n)
        .into_iter()
        .take(r.min(n as u64 + 1) as usize)
        .collect();
    Ok(SetFamily {
        ground,
        members: ground
            .subsets()
            .filter(|s| chosen.contains(&s.len()))
            .collect(),
    })
}

/// Sum of the `r` largest binomial coefficients `C(n, k)`.
pub fn sum_of_largest_binomials(n: u32, r: u64) -> BigNat {
    let mut values: Vec<BigNat> = (0..=n as i64).map(|k| binomial(n as u64, k)).collect();
    values.sort_unstable_by(|a, b| b.cmp(a));
    values.into_iter().take(r.min(n as u64 + 1) as usize).sum()
}

impl SetFamily {
    /// Convenience: build from element lists.
    pub fn from_element_lists(ground: GroundSet, lists: &[&[u32]]) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| SubsetMask::from_elements(l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(ground, sets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground(n: u32) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn fam(n: u32, lists: &[&[u32]]) -> SetFamily {
        SetFamily::from_element_lists(ground(n), lists).unwrap()
    }

    fn int(v: i64) -> ExactRational {
        ExactRational::from_integer(v.into())
    }

    #[test]
    fn mask_basics() {
        let a = SubsetMask::from_elements([0, 2]).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a.to_string(), "{0,2}");
        assert_eq!(SubsetMask::EMPTY.to_string(), "{}");
        assert!(SubsetMask::EMPTY.is_proper_subset_of(a));
        assert!(!a.is_proper_subset_of(a));
        assert_eq!(a.elements().collect::<Vec<_>>(), vec![0, 2]);
        assert!(SubsetMask::from_elements([16]).is_err());
    }

    #[test]
    fn ground_subsets() {
        assert_eq!(ground(4).subsets().count(), 16);
        assert_eq!(
            ground(0).subsets().collect::<Vec<_>>(),
            vec![SubsetMask::EMPTY]
        );
        let g = ground(4).without(SubsetMask::from_bits(0b0101));
        let subs: Vec<u32> = g.subsets().map(|s| s.bits()).collect();
        assert_eq!(subs, vec![0b0000, 0b0010, 0b1000, 0b1010]);
        assert!(GroundSet::new(17).is_err());
        assert_eq!(ground(16).subsets().count(), 1 << 16);
    }

    #[test]
    fn family_rejects_bad_members() {
        let g = ground(2);
        assert!(matches!(
            SetFamily::new(g, [SubsetMask::from_bits(0b100)]),
            Err(Error::OutsideGround(_))
        ));
        assert!(matches!(
            SetFamily::new(g, [SubsetMask::from_bits(1), SubsetMask::from_bits(1)]),
            Err(Error::DuplicateMember(_))
        ));
    }

    #[test]
    fn longest_chain_examples() {
        assert_eq!(longest_chain_cardinality(&fam(2, &[&[], &[0], &[0, 1]])), 3);
        assert_eq!(
            longest_chain_cardinality(&SetFamily::level(ground(4), 2)),
            1
        );
        assert_eq!(
            longest_chain_cardinality(&fam(2, &[&[], &[0], &[1], &[0, 1]])),
            3
        );
        assert_eq!(longest_chain_cardinality(&SetFamily::empty(ground(3))), 0);
        let chain = longest_chain(&fam(2, &[&[], &[0], &[1], &[0, 1]]));
        assert_eq!(
            chain,
            vec![
                SubsetMask::EMPTY,
                SubsetMask::from_bits(1),
                SubsetMask::from_bits(3)
            ]
        );
    }

    #[test]
    fn chain_free_examples() {
        assert!(is_r_chain_free(&SetFamily::level(ground(4), 2), 1).unwrap());
        assert!(!is_r_chain_free(&fam(2, &[&[], &[0], &[0, 1]]), 2).unwrap());
        assert!(is_r_chain_free(&fam(2, &[&[0], &[1], &[0, 1]]), 2).unwrap());
        assert!(matches!(
            is_r_chain_free(&SetFamily::empty(ground(1)), 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn lym_examples() {
        let g = ground(4);
        assert_eq!(lym_sum(&SetFamily::level(g, 2)), int(1));
        assert_eq!(lym_sum(&SetFamily::empty(g)), int(0));
        let two_levels = SetFamily::level(g, 2)
            .union(&SetFamily::level(g, 1))
            .unwrap();
        assert_eq!(lym_sum(&two_levels), int(2));
    }

    #[test]
    fn chains_through_examples() {
        assert_eq!(chains_through_count(2, 4).unwrap(), BigNat::from(4u32));
        assert_eq!(chains_through_count(0, 4).unwrap(), BigNat::from(24u32));
        assert_eq!(chains_through_count(4, 4).unwrap(), BigNat::from(24u32));
        assert!(chains_through_count(5, 4).is_err());
    }

    #[test]
    fn chain_count_check_examples() {
        let g = ground(4);
        let c = lemma_counting_check(&SetFamily::level(g, 2), 1).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (24u32.into(), 24u32.into(), true));
        let c = lemma_counting_check(&SetFamily::empty(g), 1).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (0u32.into(), 24u32.into(), true));
        let two_levels = SetFamily::level(g, 2)
            .union(&SetFamily::level(g, 1))
            .unwrap();
        let c = lemma_counting_check(&two_levels, 2).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (48u32.into(), 48u32.into(), true));
        assert!(matches!(
            lemma_counting_check(&two_levels, 1),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn erdos_examples() {
        let f = erdos_extremal_family(4, 2).unwrap();
        assert_eq!(f.len(), 10);
        let expected = SetFamily::level(ground(4), 2)
            .union(&SetFamily::level(ground(4), 1))
            .unwrap();
        assert_eq!(f, expected);
        assert_eq!(
            erdos_extremal_family(2, 1).unwrap(),
            SetFamily::level(ground(2), 1)
        );
        assert_eq!(erdos_extremal_family(3, 4).unwrap().len(), 8);
        assert_eq!(erdos_extremal_family(3, 40).unwrap().len(), 8);
        assert!(erdos_extremal_family(3, 0).is_err());
        assert!(erdos_extremal_family(17, 1).is_err());
    }

    #[test]
    fn level_tie_break() {
        assert_eq!(levels_by_size(4), vec![2, 1, 3, 0, 4]);
        assert_eq!(levels_by_size(3), vec![1, 2, 0, 3]);
        assert_eq!(levels_by_size(0), vec![0]);
    }
}
