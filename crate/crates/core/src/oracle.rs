//! Exhaustive search for the largest valid composition family on small
//! instances, and seeded random generation of valid families.
//!
//! The search walks compositions in canonical order, branching on
//! include-before-exclude. Candidates that would break r-chain-freeness of
//! a constrained component are dropped as soon as they become infeasible
//! (feasibility only shrinks as the family grows). A node is cut when the
//! number of live candidates, or the number that could still fit in the
//! remaining LYM budget `r^(p-1)`, cannot beat the incumbent.
//!
//! Among all maximum families the search returns the one whose sorted list
//! of canonical indices is lexicographically smallest. That choice does not
//! depend on how the tree is split into subtrees, so the result is the same
//! for every thread count.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use num::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactmath::BigNat;
use crate::families::{erdos_extremal_family, GroundSet, SubsetMask, MAX_GROUND_SIZE};
use crate::meshalkin::{
    all_compositions, balanced_extremal_family, block_count, meshalkin_bound_value,
    validate_composition, CompositionFamily, Validity, WeakComposition,
};

/// Largest `p^n` the oracle accepts.
pub const MAX_COMPOSITIONS: u64 = 100_000;

/// Largest part count the oracle accepts.
pub const MAX_SEARCH_PARTS: usize = 32;

/// Decision depth at which the tree is cut into independent subtrees.
const SPLIT_DEPTH: usize = 8;

const WORKER_STACK: usize = 256 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub node_cap: Option<u64>,
    pub time_cap: Option<Duration>,
    pub threads: usize,
    /// Cut with the LYM budget and the cardinality bound. Turning this off
    /// leaves a search that does not rely on either inequality.
    pub bound_pruning: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_cap: None,
            time_cap: None,
            threads: 1,
            bound_pruning: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub n: u32,
    pub p: usize,
    pub r: u64,
    /// The search finished within its limits, so `max_size` is the maximum.
    pub exact: bool,
    pub max_size: usize,
    pub witness: Option<CompositionFamily>,
    pub nodes_explored: u64,
    pub wall_time: Duration,
    /// The cardinality bound for `(n, p, r)`.
    pub bound: BigNat,
    /// `bound - max_size`
    pub bound_gap: BigNat,
}

fn check_instance(n: u32, p: usize, r: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!(
            "p must be at least 2, got {p}"
        )));
    }
    if r < 1 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    if n > MAX_GROUND_SIZE {
        return Err(Error::InstanceTooLarge(format!(
            "n = {n} exceeds {MAX_GROUND_SIZE}"
        )));
    }
    if p > MAX_SEARCH_PARTS {
        return Err(Error::InstanceTooLarge(format!(
            "p = {p} exceeds {MAX_SEARCH_PARTS}"
        )));
    }
    let total = (p as u128).checked_pow(n);
    if total.is_none_or(|t| t > MAX_COMPOSITIONS as u128) {
        return Err(Error::InstanceTooLarge(format!(
            "{p}^{n} compositions exceed {MAX_COMPOSITIONS}"
        )));
    }
    Ok(())
}

/// The instance in index form. Costs are `n! / multinomial(shape)`, i.e.
/// `prod |A_k|!`, so the LYM inequality reads `sum cost <= r^(p-1) n!` in
/// integers.
struct Instance {
    compositions: Vec<WeakComposition>,
    parts: Vec<Vec<u32>>,
    cost: Vec<u64>,
    cost_class: Vec<usize>,
    class_cost: Vec<u64>,
    budget: u128,
    constrained: usize,
    r: usize,
    bound: usize,
}

impl Instance {
    fn new(n: u32, p: usize, r: u64, mode: Validity, bound_pruning: bool) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        let compositions = all_compositions(ground, p)?;
        let parts: Vec<Vec<u32>> = compositions
            .iter()
            .map(|c| c.parts().iter().map(|s| s.bits()).collect())
            .collect();
        let factorial = |k: u32| (1..=k as u64).product::<u64>();
        let cost: Vec<u64> = parts
            .iter()
            .map(|ps| ps.iter().map(|m| factorial(m.count_ones())).product())
            .collect();
        let mut class_cost = cost.clone();
        class_cost.sort_unstable();
        class_cost.dedup();
        let cost_class = cost
            .iter()
            .map(|c| class_cost.binary_search(c).expect("cost is listed"))
            .collect();

        let (budget, bound) = if bound_pruning {
            let budget = block_count(p, r)?
                .to_u128()
                .and_then(|b| b.checked_mul(factorial(n) as u128))
                .unwrap_or(u128::MAX);
            let bound = meshalkin_bound_value(n as u64, p, r)?
                .to_usize()
                .unwrap_or(usize::MAX)
                .min(compositions.len());
            (budget, bound)
        } else {
            (u128::MAX, compositions.len())
        };
        let constrained = match mode {
            Validity::Standard => p - 1,
            Validity::Strict => p,
        };
        Ok(Instance {
            compositions,
            parts,
            cost,
            cost_class,
            class_cost,
            budget,
            constrained,
            r: usize::try_from(r).unwrap_or(usize::MAX),
            bound,
        })
    }

    fn root(&self) -> Node {
        Node {
            chosen: Vec::new(),
            components: vec![Vec::new(); self.constrained],
            spent: 0,
            candidates: (0..self.compositions.len() as u32).rev().collect(),
        }
    }

    /// Can `mask` join `component` without creating `r + 1` comparable sets?
    fn fits_component(&self, component: &[u32], mask: u32) -> bool {
        if component.contains(&mask) {
            return true;
        }
        let sub = |a: u32, b: u32| a & !b == 0;
        if self.r == 1 {
            return !component.iter().any(|&m| sub(m, mask) || sub(mask, m));
        }
        let below: Vec<u32> = component
            .iter()
            .copied()
            .filter(|&m| sub(m, mask))
            .collect();
        let above: Vec<u32> = component
            .iter()
            .copied()
            .filter(|&m| sub(mask, m))
            .collect();
        chain_length(below) + 1 + chain_length(above) <= self.r
    }

    fn is_feasible(&self, node: &Node, index: u32, changed: &[bool]) -> bool {
        let i = index as usize;
        if node.spent + self.cost[i] as u128 > self.budget {
            return false;
        }
        (0..self.constrained)
            .filter(|&k| changed[k])
            .all(|k| self.fits_component(&node.components[k], self.parts[i][k]))
    }

    /// Child node that takes the last candidate.
    fn include(&self, node: &Node, index: u32) -> Node {
        let i = index as usize;
        let mut components = node.components.clone();
        let mut changed = vec![false; self.constrained];
        for (k, component) in components.iter_mut().enumerate() {
            let mask = self.parts[i][k];
            if !component.contains(&mask) {
                component.push(mask);
                changed[k] = true;
            }
        }
        let mut chosen = node.chosen.clone();
        chosen.push(index);
        let mut child = Node {
            chosen,
            components,
            spent: node.spent + self.cost[i] as u128,
            candidates: Vec::new(),
        };
        let rest = &node.candidates[..node.candidates.len() - 1];
        child.candidates = rest
            .iter()
            .copied()
            .filter(|&c| self.is_feasible(&child, c, &changed))
            .collect();
        child
    }

    /// Optimistic size of any family in the subtree of `node`.
    fn upper_bound(&self, node: &Node) -> usize {
        let mut per_class = vec![0usize; self.class_cost.len()];
        for &c in &node.candidates {
            per_class[self.cost_class[c as usize]] += 1;
        }
        let mut left = self.budget - node.spent;
        let mut fit = 0usize;
        for (class, &count) in per_class.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let cost = self.class_cost[class] as u128;
            let take = (left / cost).min(count as u128) as usize;
            fit += take;
            left -= take as u128 * cost;
            if take < count {
                break;
            }
        }
        (node.chosen.len() + fit).min(self.bound)
    }

    fn family(&self, chosen: &[u32]) -> CompositionFamily {
        let ground = self
            .compositions
            .first()
            .map(|c| c.ground())
            .expect("nonempty instance");
        let p = self.parts[0].len();
        CompositionFamily::new(
            ground,
            p,
            chosen
                .iter()
                .map(|&i| self.compositions[i as usize].clone()),
        )
        .expect("distinct members of one instance")
    }
}

fn chain_length(mut masks: Vec<u32>) -> usize {
    if masks.len() < 2 {
        return masks.len();
    }
    masks.sort_unstable_by_key(|m| m.count_ones());
    let mut height = vec![1usize; masks.len()];
    for i in 0..masks.len() {
        for j in 0..i {
            if masks[j] & !masks[i] == 0 && masks[j] != masks[i] && height[j] + 1 > height[i] {
                height[i] = height[j] + 1;
            }
        }
    }
    height.into_iter().max().unwrap_or(0)
}

#[derive(Clone)]
struct Node {
    chosen: Vec<u32>,
    components: Vec<Vec<u32>>,
    spent: u128,
    /// Live candidates, largest index first; the next branch takes the last.
    candidates: Vec<u32>,
}

struct Shared {
    best: AtomicUsize,
    nodes: AtomicU64,
    aborted: AtomicBool,
    first_optimal: AtomicUsize,
    node_cap: Option<u64>,
    deadline: Option<Instant>,
}

struct Worker<'a> {
    instance: &'a Instance,
    shared: &'a Shared,
    task: usize,
    best_len: usize,
    best: Option<Vec<u32>>,
    visits: u64,
    stop: bool,
}

impl Worker<'_> {
    fn visit(&mut self) -> bool {
        self.visits += 1;
        let total = self.shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.shared.node_cap.is_some_and(|cap| total > cap) {
            self.shared.aborted.store(true, Ordering::Relaxed);
        }
        if self.visits.is_multiple_of(256) {
            if let Some(deadline) = self.shared.deadline {
                if Instant::now() >= deadline {
                    self.shared.aborted.store(true, Ordering::Relaxed);
                }
            }
        }
        if self.shared.aborted.load(Ordering::Relaxed)
            || self.shared.first_optimal.load(Ordering::Relaxed) < self.task
        {
            self.stop = true;
        }
        !self.stop
    }

    fn explore(&mut self, mut node: Node) {
        loop {
            if !self.visit() {
                return;
            }
            if self.best.is_none() || node.chosen.len() > self.best_len {
                self.best_len = node.chosen.len();
                self.best = Some(node.chosen.clone());
                self.shared.best.fetch_max(self.best_len, Ordering::Relaxed);
                if self.best_len == self.instance.bound {
                    self.shared
                        .first_optimal
                        .fetch_min(self.task, Ordering::Relaxed);
                }
            }
            let Some(&next) = node.candidates.last() else {
                return;
            };
            let ub = self.instance.upper_bound(&node);
            if ub <= self.best_len || ub < self.shared.best.load(Ordering::Relaxed) {
                return;
            }
            let child = self.instance.include(&node, next);
            self.explore(child);
            if self.stop {
                return;
            }
            node.candidates.pop();
        }
    }
}

fn split(instance: &Instance, mut node: Node, depth: usize, floor: usize, tasks: &mut Vec<Node>) {
    if depth == SPLIT_DEPTH || node.candidates.is_empty() {
        tasks.push(node);
        return;
    }
    if instance.upper_bound(&node) < floor {
        return;
    }
    let next = *node.candidates.last().expect("nonempty");
    let child = instance.include(&node, next);
    split(instance, child, depth + 1, floor, tasks);
    node.candidates.pop();
    split(instance, node, depth + 1, floor, tasks);
}

/// A known valid family used to seed the incumbent size.
fn seed_family(n: u32, p: usize, r: u64) -> Option<CompositionFamily> {
    if r == 1 {
        return balanced_extremal_family(n, p).ok();
    }
    if p == 2 {
        let sets = erdos_extremal_family(n, r).ok()?;
        return complement_pairs(sets.ground(), sets.iter()).ok();
    }
    None
}

/// Largest family of weak compositions of an n-set into p parts whose
/// components `1..p` are r-chain-free.
pub fn max_family_size(n: u32, p: usize, r: u64, limits: &SearchLimits) -> Result<SearchReport> {
    max_family_size_with(n, p, r, limits, Validity::Standard)
}

pub fn max_family_size_with(
    n: u32,
    p: usize,
    r: u64,
    limits: &SearchLimits,
    mode: Validity,
) -> Result<SearchReport> {
    check_instance(n, p, r)?;
    let started = Instant::now();
    let instance = Instance::new(n, p, r, mode, limits.bound_pruning)?;
    let seed = seed_family(n, p, r);
    let floor = seed.as_ref().map_or(0, |s| s.len());

    let mut tasks = Vec::new();
    split(&instance, instance.root(), 0, floor, &mut tasks);

    let shared = Shared {
        best: AtomicUsize::new(floor),
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        first_optimal: AtomicUsize::new(usize::MAX),
        node_cap: limits.node_cap,
        deadline: limits.time_cap.map(|cap| started + cap),
    };
    let run = |(task, node): (usize, Node)| {
        let mut worker = Worker {
            instance: &instance,
            shared: &shared,
            task,
            best_len: 0,
            best: None,
            visits: 0,
            stop: false,
        };
        worker.explore(node);
        worker.best.map(|chosen| (chosen.len(), chosen))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(limits.threads.max(1))
        .stack_size(WORKER_STACK)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let results: Vec<Option<(usize, Vec<u32>)>> =
        pool.install(|| tasks.into_par_iter().enumerate().map(run).collect());

    // Largest size wins; ties go to the lexicographically smallest index list.
    let best = results.into_iter().flatten().reduce(|a, b| {
        if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
            b
        } else {
            a
        }
    });
    let exact = !shared.aborted.load(Ordering::Relaxed);
    let mut witness = best.map(|(_, chosen)| instance.family(&chosen));
    if let Some(seed) = seed {
        if witness.as_ref().is_none_or(|w| w.len() < seed.len()) {
            witness = Some(seed);
        }
    }
    let max_size = witness.as_ref().map_or(0, |w| w.len());
    let bound = meshalkin_bound_value(n as u64, p, r)?;
    let bound_gap = if bound >= BigNat::from(max_size) {
        &bound - BigNat::from(max_size)
    } else {
        BigNat::zero()
    };
    Ok(SearchReport {
        n,
        p,
        r,
        exact,
        max_size,
        witness,
        nodes_explored: shared.nodes.load(Ordering::Relaxed),
        wall_time: started.elapsed(),
        bound,
        bound_gap,
    })
}

/// A valid family built by inserting compositions in seeded random order,
/// keeping each one that preserves validity, until `target_size` members or
/// no compositions are left.
pub fn random_valid_family(
    n: u32,
    p: usize,
    r: u64,
    seed: u64,
    target_size: usize,
) -> Result<CompositionFamily> {
    check_instance(n, p, r)?;
    let instance = Instance::new(n, p, r, Validity::Standard, false)?;
    let mut order: Vec<u32> = (0..instance.compositions.len() as u32).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let all_changed = vec![true; instance.constrained];
    let mut node = instance.root();
    node.candidates.clear();
    for index in order {
        if node.chosen.len() >= target_size {
            break;
        }
        if instance.is_feasible(&node, index, &all_changed) {
            node.candidates.push(index);
            node = instance.include(&node, index);
        }
    }
    node.chosen.sort_unstable();
    Ok(instance.family(&node.chosen))
}

/// Family of 2-part compositions `(A, S \ A)` for the sets of `sets`.
pub fn complement_pairs(
    ground: GroundSet,
    sets: impl IntoIterator<Item = SubsetMask>,
) -> Result<CompositionFamily> {
    let members = sets
        .into_iter()
        .map(|a| validate_composition(vec![a, ground.universe().difference(a)], ground))
        .collect::<Result<Vec<_>>>()?;
    CompositionFamily::new(ground, 2, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meshalkin::is_valid_meshalkin_family;

    fn exact(n: u32, p: usize, r: u64) -> SearchReport {
        let report = max_family_size(n, p, r, &SearchLimits::default()).unwrap();
        assert!(report.exact);
        report
    }

    #[test]
    fn search_examples() {
        assert_eq!(exact(4, 2, 1).max_size, 6);
        assert_eq!(exact(2, 3, 2).max_size, 7);
        assert_eq!(exact(4, 2, 2).max_size, 10);
    }

    #[test]
    fn sperner_witness_is_middle_layer() {
        let w = exact(4, 2, 1).witness.unwrap();
        assert!(w.iter().all(|c| c.part_sizes() == vec![2, 2]));
    }

    #[test]
    fn attained_open_case_witness() {
        let report = exact(2, 3, 2);
        let w = report.witness.unwrap();
        assert!(is_valid_meshalkin_family(&w, 2).unwrap());
        assert_eq!(w.len(), 7);
        assert_eq!(report.bound_gap, BigNat::zero());
    }

    #[test]
    fn guard_rejects_large_instances() {
        assert!(matches!(
            max_family_size(9, 4, 1, &SearchLimits::default()),
            Err(Error::InstanceTooLarge(_))
        ));
        assert!(matches!(
            random_valid_family(9, 4, 1, 0, 10),
            Err(Error::InstanceTooLarge(_))
        ));
        assert!(max_family_size(2, 1, 1, &SearchLimits::default()).is_err());
    }

    #[test]
    fn node_cap_degrades_to_inexact() {
        let limits = SearchLimits {
            node_cap: Some(3),
            ..SearchLimits::default()
        };
        let report = max_family_size(3, 3, 2, &limits).unwrap();
        assert!(!report.exact);
        let w = report.witness.unwrap();
        assert!(is_valid_meshalkin_family(&w, 2).unwrap());
        assert_eq!(w.len(), report.max_size);
    }

    #[test]
    fn random_examples() {
        let f = random_valid_family(3, 3, 1, 1, 6).unwrap();
        assert!(f.len() <= 6);
        assert!(is_valid_meshalkin_family(&f, 1).unwrap());
        let f = random_valid_family(2, 3, 2, 7, 9).unwrap();
        assert!(f.len() <= 7);
        assert!(is_valid_meshalkin_family(&f, 2).unwrap());
        let f = random_valid_family(0, 2, 1, 42, 5).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn random_is_reproducible() {
        let a = random_valid_family(3, 3, 2, 99, 100).unwrap();
        let b = random_valid_family(3, 3, 2, 99, 100).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn chain_length_matches_definition() {
        assert_eq!(chain_length(vec![]), 0);
        assert_eq!(chain_length(vec![0b0, 0b1, 0b11, 0b10]), 3);
        assert_eq!(chain_length(vec![0b01, 0b10]), 1);
    }
}
