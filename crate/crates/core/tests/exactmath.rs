mod common;

use meshalkin::exactmath::{
    binomial, count_coefficients, enumerate_coefficients, largest_coefficients, multinomial,
    sum_of_largest, BigNat, Shape, DEFAULT_ENUMERATION_CAP,
};
use num::{BigUint, ToPrimitive};
use proptest::prelude::*;

use common::{
    brute_coefficients, factorial, multinomial_by_factorials, pascal_table, stars_and_bars,
};

#[test]
fn binomial_matches_pascal_and_factorials() {
    let table = pascal_table(60);
    for n in 0..=60u64 {
        for k in -2..=n as i64 + 2 {
            let got = binomial(n, k);
            if k < 0 || k > n as i64 {
                assert_eq!(got, BigUint::from(0u32));
                continue;
            }
            assert_eq!(got, table[n as usize][k as usize], "C({n},{k}) vs Pascal");
            let by_factorials = factorial(n) / (factorial(k as u64) * factorial(n - k as u64));
            assert_eq!(got, by_factorials, "C({n},{k}) vs factorials");
        }
    }
}

#[test]
fn frozen_binomial_values() {
    // Pascal-table values, frozen.
    assert_eq!(binomial(4, 2), BigUint::from(6u32));
    assert_eq!(binomial(7, 0), BigUint::from(1u32));
    assert_eq!(binomial(5, 7), BigUint::from(0u32));
}

#[test]
fn pascal_recurrence_to_forty() {
    for n in 1..=40u64 {
        for k in 1..n as i64 {
            assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
        }
    }
}

#[test]
fn frozen_multinomial_values() {
    assert_eq!(multinomial_by_factorials(&[1, 1, 1]), BigUint::from(6u32));
    assert_eq!(
        multinomial(&Shape::new(vec![1, 1, 1]).unwrap()),
        BigUint::from(6u32)
    );
    assert_eq!(
        multinomial(&Shape::new(vec![2, 2]).unwrap()),
        BigUint::from(6u32)
    );
    for n in 0..8 {
        let mut parts = vec![0u64; 4];
        parts[0] = n;
        assert_eq!(
            multinomial(&Shape::new(parts).unwrap()),
            BigUint::from(1u32)
        );
    }
}

#[test]
fn enumeration_matches_stars_and_bars() {
    for n in 0..=8u64 {
        for p in 1..=5usize {
            let expected = brute_coefficients(n, p);
            let got: Vec<(Vec<u64>, BigUint)> = enumerate_coefficients(n, p)
                .unwrap()
                .into_iter()
                .map(|(s, v)| (s.parts().to_vec(), v))
                .collect();
            assert_eq!(got, expected, "n={n} p={p}");
        }
    }
}

#[test]
fn frozen_enumeration_values() {
    // From direct enumeration of compositions.
    let values = |n, p| -> Vec<u64> {
        enumerate_coefficients(n, p)
            .unwrap()
            .into_iter()
            .map(|(_, v)| v.to_u64().unwrap())
            .collect()
    };
    assert_eq!(values(2, 3), vec![2, 2, 2, 1, 1, 1]);
    assert_eq!(values(0, 2), vec![1]);
    assert_eq!(values(3, 2), vec![3, 3, 1, 1]);
}

#[test]
fn frozen_count_values() {
    assert_eq!(stars_and_bars(3, 3).len(), 10);
    assert_eq!(count_coefficients(3, 3), BigUint::from(10u32));
    assert_eq!(count_coefficients(0, 2), BigUint::from(1u32));
    assert_eq!(count_coefficients(2, 3), BigUint::from(6u32));
}

#[test]
fn count_and_completeness_to_ten() {
    for n in 0..=10u64 {
        for p in 1..=5usize {
            let list = enumerate_coefficients(n, p).unwrap();
            assert_eq!(BigNat::from(list.len()), count_coefficients(n, p));
            assert_eq!(
                BigNat::from(stars_and_bars(n, p).len()),
                count_coefficients(n, p)
            );
            let total: BigNat = list.iter().map(|(_, v)| v).sum();
            assert_eq!(total, num::pow(BigUint::from(p), n as usize));
        }
    }
}

#[test]
fn factorization_identity_to_twelve() {
    for n in 0..=12u64 {
        for p in 2..=5usize {
            for parts in stars_and_bars(n, p) {
                let shape = Shape::new(parts.clone()).unwrap();
                let tail = Shape::new(parts[1..].to_vec()).unwrap();
                assert_eq!(
                    multinomial(&shape),
                    binomial(n, parts[0] as i64) * multinomial(&tail),
                    "shape {shape}"
                );
            }
        }
    }
}

#[test]
fn frozen_sum_of_largest_values() {
    assert_eq!(
        sum_of_largest(4, 2, &2u32.into()).unwrap(),
        BigUint::from(10u32)
    );
    assert_eq!(
        sum_of_largest(2, 3, &4u32.into()).unwrap(),
        BigUint::from(7u32)
    );
    assert_eq!(
        sum_of_largest(2, 3, &10u32.into()).unwrap(),
        BigUint::from(9u32)
    );
}

#[test]
fn sum_of_largest_matches_sorted_prefix() {
    for n in 0..=7u64 {
        for p in 1..=4usize {
            let list = brute_coefficients(n, p);
            for t in 0..=list.len() + 4 {
                let expected: BigUint = list.iter().take(t).map(|(_, v)| v).sum();
                assert_eq!(sum_of_largest(n, p, &BigUint::from(t)).unwrap(), expected);
            }
        }
    }
}

#[test]
fn enumeration_is_deterministic_across_threads() {
    let reference = enumerate_coefficients(9, 4).unwrap();
    let handles: Vec<_> = (0..4)
        .map(|_| std::thread::spawn(|| enumerate_coefficients(9, 4).unwrap()))
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), reference);
    }
}

proptest! {
    #[test]
    fn symmetry(n in 0u64..80, k in 0i64..80) {
        prop_assume!(k as u64 <= n);
        prop_assert_eq!(binomial(n, k), binomial(n, n as i64 - k));
    }

    #[test]
    fn enumeration_is_weakly_decreasing(n in 0u64..9, p in 1usize..6) {
        let list = enumerate_coefficients(n, p).unwrap();
        for w in list.windows(2) {
            prop_assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
        }
    }

    #[test]
    fn top_t_is_prefix(n in 0u64..8, p in 1usize..5, t in 0usize..200) {
        let full = enumerate_coefficients(n, p).unwrap();
        let top = largest_coefficients(n, p, &BigUint::from(t), DEFAULT_ENUMERATION_CAP).unwrap();
        prop_assert_eq!(&top[..], &full[..t.min(full.len())]);
    }

    #[test]
    fn saturated_sum_is_p_to_the_n(n in 0u64..30, p in 1usize..6, extra in 0u64..10) {
        let t = count_coefficients(n, p) + extra;
        prop_assert_eq!(sum_of_largest(n, p, &t).unwrap(), num::pow(BigUint::from(p), n as usize));
    }
}
