//! Brute-force oracles shared by the integration tests. None of these call
//! into the code paths they are used to check.
#![allow(dead_code)]

use meshalkin::meshalkin::all_compositions;
use meshalkin::{CompositionFamily, GroundSet, SetFamily, WeakComposition};
use num::BigUint;

/// Pascal's triangle up to row `max_n`.
pub fn pascal_table(max_n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::from(1u32)]];
    for n in 1..=max_n {
        let prev = &rows[n - 1];
        let mut row = vec![BigUint::from(1u32); n + 1];
        for k in 1..n {
            row[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(row);
    }
    rows
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, i| acc * i)
}

/// `n! / prod a_i!` by the factorial formula.
pub fn multinomial_by_factorials(parts: &[u64]) -> BigUint {
    let n: u64 = parts.iter().sum();
    parts
        .iter()
        .fold(factorial(n), |acc, &a| acc / factorial(a))
}

/// Stars and bars: every ordered composition of `n` into `p` nonnegative parts.
pub fn stars_and_bars(n: u64, p: usize) -> Vec<Vec<u64>> {
    fn go(n: u64, p: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if p == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in 0..=n {
            prefix.push(a);
            go(n - a, p - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, p, &mut Vec::new(), &mut out);
    out
}

/// Sorted coefficient list by direct enumeration: value descending, then
/// shape ascending.
pub fn brute_coefficients(n: u64, p: usize) -> Vec<(Vec<u64>, BigUint)> {
    let mut list: Vec<(Vec<u64>, BigUint)> = stars_and_bars(n, p)
        .into_iter()
        .map(|s| {
            let v = multinomial_by_factorials(&s);
            (s, v)
        })
        .collect();
    list.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    list
}

fn proper_subset(a: u32, b: u32) -> bool {
    a != b && a & !b == 0
}

/// Longest chain among `sets` by trying every chain start and extension.
pub fn brute_longest_chain_masks(sets: &[u32]) -> usize {
    fn extend(from: u32, sets: &[u32]) -> usize {
        1 + sets
            .iter()
            .filter(|&&s| proper_subset(from, s))
            .map(|&s| extend(s, sets))
            .max()
            .unwrap_or(0)
    }
    sets.iter().map(|&s| extend(s, sets)).max().unwrap_or(0)
}

pub fn brute_longest_chain(family: &SetFamily) -> usize {
    let sets: Vec<u32> = family.iter().map(|s| s.bits()).collect();
    brute_longest_chain_masks(&sets)
}

/// Componentwise r-chain-freeness of the first `p - 1` parts, computed from
/// raw masks.
pub fn brute_valid(members: &[&WeakComposition], p: usize, r: usize) -> bool {
    (0..p - 1).all(|k| {
        let mut parts: Vec<u32> = members.iter().map(|m| m.parts()[k].bits()).collect();
        parts.sort_unstable();
        parts.dedup();
        brute_longest_chain_masks(&parts) <= r
    })
}

/// Every subfamily of all weak compositions of an n-set into p parts.
pub fn all_subfamilies(
    n: u32,
    p: usize,
) -> (Vec<WeakComposition>, impl Iterator<Item = Vec<usize>>) {
    let all = all_compositions(GroundSet::new(n).unwrap(), p).unwrap();
    let m = all.len();
    assert!(m <= 20, "too many compositions to enumerate subfamilies");
    let iter = (0u32..1 << m).map(move |bits| (0..m).filter(|i| bits & (1 << i) != 0).collect());
    (all, iter)
}

/// Maximum valid family size by trying every subfamily.
pub fn brute_max_family(n: u32, p: usize, r: usize) -> usize {
    let (all, subsets) = all_subfamilies(n, p);
    subsets
        .filter(|idx| {
            let members: Vec<&WeakComposition> = idx.iter().map(|&i| &all[i]).collect();
            brute_valid(&members, p, r)
        })
        .map(|idx| idx.len())
        .max()
        .unwrap_or(0)
}

pub fn family_of(n: u32, p: usize, members: &[&WeakComposition]) -> CompositionFamily {
    CompositionFamily::new(
        GroundSet::new(n).unwrap(),
        p,
        members.iter().map(|&m| m.clone()),
    )
    .unwrap()
}

/// Sum of the r largest entries of row `n` of Pascal's triangle.
pub fn brute_erdos_bound(n: usize, r: usize) -> BigUint {
    let mut row = pascal_table(n).pop().unwrap();
    row.sort_by(|a, b| b.cmp(a));
    row.into_iter().take(r).sum()
}
