//! Identity suite run by `meshalkin selfcheck`.

use num::{BigUint, Zero};

use crate::exactmath::{
    binomial, count_coefficients, enumerate_coefficients, multinomial, reciprocal, BigNat,
    ExactRational, Shape,
};
use crate::families::{erdos_extremal_family, lemma_counting_check, lym_sum, GroundSet, SetFamily};
use crate::meshalkin::{meshalkin_bound_value, meshalkin_lym_sum, CompositionFamily};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckGroup {
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    /// First failure, or a short note.
    pub detail: String,
}

struct Tally {
    checks: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn finish(self, name: &'static str, note: &str) -> CheckGroup {
        CheckGroup {
            name,
            passed: self.failure.is_none(),
            checks: self.checks,
            detail: self.failure.unwrap_or_else(|| note.to_string()),
        }
    }
}

fn pascal() -> CheckGroup {
    let mut t = Tally::new();
    for n in 1..=40u64 {
        for k in 1..n as i64 {
            let ok = binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k);
            t.check(ok, || format!("C({n},{k})"));
        }
    }
    t.finish("pascal", "n <= 40")
}

fn symmetry() -> CheckGroup {
    let mut t = Tally::new();
    for n in 0..=40u64 {
        for k in 0..=n as i64 {
            t.check(binomial(n, k) == binomial(n, n as i64 - k), || {
                format!("C({n},{k})")
            });
        }
    }
    t.finish("symmetry", "n <= 40")
}

fn factorization() -> CheckGroup {
    let mut t = Tally::new();
    for n in 0..=12u64 {
        for p in 2..=5usize {
            for (shape, value) in enumerate_coefficients(n, p).unwrap_or_default() {
                let tail = shape.tail().expect("p >= 2");
                let ok = value == binomial(n, shape.parts()[0] as i64) * multinomial(&tail);
                t.check(ok, || format!("shape {shape}"));
            }
        }
    }
    t.finish("factorization", "n <= 12, p <= 5")
}

fn count() -> CheckGroup {
    let mut t = Tally::new();
    for n in 0..=10u64 {
        for p in 1..=5usize {
            let listed = enumerate_coefficients(n, p)
                .map(|l| l.len())
                .unwrap_or(usize::MAX);
            t.check(BigNat::from(listed) == count_coefficients(n, p), || {
                format!("n={n} p={p}")
            });
        }
    }
    t.finish("count", "n <= 10, p <= 5")
}

fn completeness() -> CheckGroup {
    let mut t = Tally::new();
    for n in 0..=10u64 {
        for p in 1..=5usize {
            let total: BigNat = enumerate_coefficients(n, p)
                .unwrap_or_default()
                .into_iter()
                .map(|(_, v)| v)
                .sum();
            t.check(total == num::pow(BigUint::from(p), n as usize), || {
                format!("n={n} p={p}")
            });
        }
    }
    // Each shape contributes exactly 1 when summed over all its compositions.
    for n in 0..=6u32 {
        for p in 2..=4usize {
            let ground = GroundSet::new(n).expect("small n");
            let Ok(all) = CompositionFamily::all(ground, p) else {
                t.check(false, || format!("all compositions n={n} p={p}"));
                continue;
            };
            let expected = ExactRational::from_integer(count_coefficients(n as u64, p).into());
            t.check(meshalkin_lym_sum(&all) == expected, || {
                format!("reciprocal sum n={n} p={p}")
            });
        }
    }
    let all = CompositionFamily::all(GroundSet::new(2).expect("n=2"), 3).expect("9 compositions");
    t.check(
        meshalkin_lym_sum(&all) == ExactRational::from_integer(6.into()),
        || "n=2 p=3 reciprocal sum".into(),
    );
    t.finish("completeness", "sum = p^n; n=2,p=3 reciprocal sum = 6")
}

fn lym_levels() -> CheckGroup {
    let mut t = Tally::new();
    for n in 0..=12u32 {
        let ground = GroundSet::new(n).expect("small n");
        for k in 0..=n {
            let ok = lym_sum(&SetFamily::level(ground, k)) == ExactRational::from_integer(1.into());
            t.check(ok, || format!("P_{k} of {n}-set"));
        }
    }
    t.finish("lym-levels", "lym(P_k) = 1, n <= 12")
}

fn chain_count() -> CheckGroup {
    let mut t = Tally::new();
    let g4 = GroundSet::new(4).expect("n=4");
    let p2 = SetFamily::level(g4, 2);
    let p21 = p2.union(&SetFamily::level(g4, 1)).expect("same ground");
    let canned = [(p2, 1u64, 24u32, 24u32), (p21, 2, 48, 48)];
    for (family, r, lhs, rhs) in canned {
        let ok = lemma_counting_check(&family, r)
            .map(|c| c.holds && c.lhs == lhs.into() && c.rhs == rhs.into())
            .unwrap_or(false);
        t.check(ok, || format!("canned family r={r}"));
    }
    for n in 0..=8u32 {
        for r in 1..=n as u64 + 1 {
            let ok = erdos_extremal_family(n, r)
                .and_then(|f| lemma_counting_check(&f, r))
                .map(|c| c.holds)
                .unwrap_or(false);
            t.check(ok, || format!("erdos n={n} r={r}"));
        }
    }
    t.finish("chain-count", "sum |A|!(n-|A|)! <= r n!")
}

fn bounds() -> CheckGroup {
    let mut t = Tally::new();
    for (n, p, r, expected) in [
        (4u64, 2usize, 1u64, 6u32),
        (2, 3, 2, 7),
        (4, 2, 2, 10),
        (0, 2, 5, 1),
    ] {
        let ok = meshalkin_bound_value(n, p, r)
            .map(|b| b == expected.into())
            .unwrap_or(false);
        t.check(ok, || format!("bound({n},{p},{r})"));
    }
    // Attained n=2,p=3,r=2 multiset: LYM sum is exactly r^(p-1) = 4.
    let shapes = [
        [0u64, 0, 2],
        [1, 1, 0],
        [1, 1, 0],
        [1, 0, 1],
        [1, 0, 1],
        [0, 1, 1],
        [0, 1, 1],
    ];
    let sum = shapes
        .iter()
        .map(|s| reciprocal(&multinomial(&Shape::new(s.to_vec()).expect("shape"))))
        .fold(ExactRational::zero(), |a, b| a + b);
    t.check(sum == ExactRational::from_integer(4.into()), || {
        "attained lym sum".into()
    });
    t.finish("bounds", "known bound values")
}

/// Run every group.
pub fn run() -> Vec<CheckGroup> {
    vec![
        pascal(),
        symmetry(),
        factorization(),
        count(),
        completeness(),
        lym_levels(),
        chain_count(),
        bounds(),
    ]
}
