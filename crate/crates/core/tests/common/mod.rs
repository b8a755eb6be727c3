#![allow(dead_code)]

use kkp::workbench::generate::Draw;
use kkp::workbench::{generate, GeneratorSpec};
use kkp::{normalize, Epsilon, Instance};

pub fn eps(num: u64, den: u64) -> Epsilon {
    Epsilon::new(num, den).unwrap()
}

/// Seeded random instance with `lo ≤ n ≤ hi` items, uniform or weakly
/// correlated by seed parity, a random bound `k` and a random capacity
/// that always admits at least one item.
pub fn random_instance(seed: u64, lo: usize, hi: usize) -> Instance {
    let mut d = Draw::new(seed ^ 0x5eed);
    let n = d.range(lo as u64, hi as u64) as usize;
    let k = d.range(1, n as u64) as usize;
    let spec = if seed.is_multiple_of(2) {
        GeneratorSpec::Uniform {
            n,
            k,
            capacity: None,
            profit: (1, 1000),
            weight: (1, 1000),
            seed,
        }
    } else {
        GeneratorSpec::WeaklyCorrelated {
            n,
            k,
            capacity: None,
            weight: (1, 1000),
            spread: 100,
            seed,
        }
    };
    let base = generate(&spec).unwrap();
    let min_w = base.items().iter().map(|it| it.weight).min().unwrap();
    let c = d.range(min_w, base.total_weight().max(min_w));
    let pairs: Vec<(u64, u64)> = base
        .items()
        .iter()
        .map(|it| (it.profit, it.weight))
        .collect();
    Instance::from_pairs(&pairs, c, k).unwrap()
}

/// Same as [`random_instance`] but already normalized.
pub fn random_normalized(seed: u64, lo: usize, hi: usize) -> Instance {
    normalize(&random_instance(seed, lo, hi)).unwrap().0
}

/// `value ≥ (1 − f·ε)·opt`, exactly.
pub fn meets_ratio(value: u64, opt: u64, factor: u64, e: Epsilon) -> bool {
    let lhs = value as i128 * e.den() as i128;
    let rhs = opt as i128 * (e.den() as i128 - factor as i128 * e.num() as i128);
    lhs >= rhs
}
