mod common;

use common::random_normalized;
use kkp::lp::{half_approx, solve_lp};
use kkp::Instance;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn q(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// LP optimum by enumerating every basic solution: each item is 0, 1 or
/// fractional, with at most two fractional items pinned by tight rows.
fn vertex_optimum(inst: &Instance) -> BigRational {
    let items = inst.items();
    let n = items.len();
    let c = q(inst.capacity());
    let k = q(inst.cardinality_bound() as u64);
    let zero = BigRational::zero();
    let one = BigRational::one();
    let inside = |x: &BigRational| *x > zero && *x < one;
    let mut best = BigRational::zero();
    let mut state = vec![0u8; n];
    loop {
        let frac: Vec<usize> = (0..n).filter(|&j| state[j] == 2).collect();
        if frac.len() <= 2 {
            let ones: Vec<usize> = (0..n).filter(|&j| state[j] == 1).collect();
            let w1 = q(ones.iter().map(|&j| items[j].weight).sum());
            let p1 = q(ones.iter().map(|&j| items[j].profit).sum());
            let n1 = q(ones.len() as u64);
            let mut consider = |xs: &[(usize, BigRational)]| {
                if xs.iter().any(|(_, x)| !inside(x)) {
                    return;
                }
                let w = xs
                    .iter()
                    .fold(w1.clone(), |acc, (j, x)| acc + x * q(items[*j].weight));
                let cnt = xs.iter().fold(n1.clone(), |acc, (_, x)| acc + x);
                if w <= c && cnt <= k {
                    let p = xs
                        .iter()
                        .fold(p1.clone(), |acc, (j, x)| acc + x * q(items[*j].profit));
                    if p > best {
                        best = p;
                    }
                }
            };
            match frac.as_slice() {
                [] => {
                    if w1 <= c && n1 <= k && p1 > best {
                        best = p1.clone();
                    }
                }
                [j] => {
                    let j = *j;
                    consider(&[(j, (&c - &w1) / q(items[j].weight))]);
                    consider(&[(j, &k - &n1)]);
                }
                [i, j] => {
                    let (i, j) = (*i, *j);
                    let (wi, wj) = (q(items[i].weight), q(items[j].weight));
                    if wi != wj {
                        let r = &c - &w1;
                        let m = &k - &n1;
                        let xi = (&r - &wj * &m) / (&wi - &wj);
                        let xj = &m - &xi;
                        consider(&[(i, xi), (j, xj)]);
                    }
                }
                _ => unreachable!(),
            }
        }
        let mut pos = 0;
        while pos < n && state[pos] == 2 {
            state[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
        state[pos] += 1;
    }
    best
}

#[test]
fn lp_matches_vertex_enumeration() {
    for seed in 0..300u64 {
        let inst = random_normalized(seed, 1, 8);
        let lp = solve_lp(&inst).unwrap();
        assert_eq!(lp.objective, vertex_optimum(&inst), "seed {seed}");
        assert!(lp.fractional.len() <= 2, "seed {seed}");
        let (w, cnt) = lp.usage(inst.items());
        assert!(
            w <= q(inst.capacity()) && cnt <= q(inst.cardinality_bound() as u64),
            "seed {seed}"
        );
        let value = inst.items().iter().fold(BigRational::zero(), |acc, it| {
            acc + lp.value(it.id) * q(it.profit)
        });
        assert_eq!(value, lp.objective, "seed {seed}");
        if lp.fractional.len() == 2
            && w == q(inst.capacity())
            && cnt == q(inst.cardinality_bound() as u64)
        {
            let sum = lp
                .fractional
                .iter()
                .fold(BigRational::zero(), |acc, (_, x)| acc + x);
            assert!(sum.is_one(), "seed {seed}: fractional values sum to {sum}");
        }
    }
}

#[test]
fn half_is_within_factor_two_of_lp() {
    for seed in 0..300u64 {
        let inst = random_normalized(700 + seed, 1, 30);
        let lp = solve_lp(&inst).unwrap();
        let h = half_approx(&inst).unwrap();
        assert!(h.solution.feasible);
        assert!(q(h.value) <= lp.objective, "seed {seed}");
        assert!(q(2 * h.value) >= lp.objective, "seed {seed}");
        assert_eq!(
            inst.evaluate(&h.solution.selected).unwrap().profit_total,
            h.value
        );
    }
}

#[test]
fn lp_is_linear_time_friendly_on_large_input() {
    let inst = random_normalized(42, 50_000, 50_000);
    let lp = solve_lp(&inst).unwrap();
    assert!(lp.fractional.len() <= 2);
}
