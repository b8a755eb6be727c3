//! Seeded instance generators.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`).
//! A draw from `[lo, hi]` takes `next_u64` values until one falls below the
//! largest multiple of the span and reduces it modulo the span. Ports that
//! follow these two rules reproduce every instance bit for bit.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::epsilon::Epsilon;
use crate::error::{Error, Result};
use crate::growth::build_theorem4_instance;
use crate::instance::{Instance, Item};

pub struct Draw(ChaCha8Rng);

impl Draw {
    pub fn new(seed: u64) -> Self {
        Draw(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform on `[lo, hi]`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo).wrapping_add(1);
        if span == 0 {
            return self.0.next_u64();
        }
        let limit = span * (u64::MAX / span);
        loop {
            let x = self.0.next_u64();
            if x < limit {
                return lo + x % span;
            }
        }
    }
}

fn default_profit() -> (u64, u64) {
    (1, 1000)
}

fn default_weight() -> (u64, u64) {
    (1, 1000)
}

fn default_spread() -> u64 {
    100
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// Independent uniform profits and weights; `c = ⌊Σw/2⌋` unless given.
    Uniform {
        n: usize,
        k: usize,
        #[serde(default)]
        capacity: Option<u64>,
        #[serde(default = "default_profit")]
        profit: (u64, u64),
        #[serde(default = "default_weight")]
        weight: (u64, u64),
        seed: u64,
    },
    /// Uniform weights and `p = max(1, w + noise)`, noise uniform on `[−spread, spread]`.
    WeaklyCorrelated {
        n: usize,
        k: usize,
        #[serde(default)]
        capacity: Option<u64>,
        #[serde(default = "default_weight")]
        weight: (u64, u64),
        #[serde(default = "default_spread")]
        spread: u64,
        seed: u64,
    },
    /// `γ` items at each profit `(εP^H/γ)·i`, `i = 1..⌊γ/ε⌋`.
    ArithTight {
        epsilon: Epsilon,
        gamma: usize,
        p_h: u64,
        #[serde(default)]
        k: Option<usize>,
        seed: u64,
    },
    /// `γ` items at each profit `(εP^H/γ)·r^{i−1} ≤ P^H`.
    GeoTight {
        epsilon: Epsilon,
        gamma: usize,
        p_h: u64,
        #[serde(default)]
        k: Option<usize>,
        seed: u64,
    },
    /// The growth-lab worst case; needs `k ≥ ⌈1/ε⌉`.
    Theorem4 {
        epsilon: Epsilon,
        p_h: u64,
        k: usize,
    },
}

impl GeneratorSpec {
    /// Same spec with the seed advanced by `offset`.
    pub fn reseeded(&self, offset: u64) -> Self {
        let mut out = self.clone();
        match &mut out {
            GeneratorSpec::Uniform { seed, .. }
            | GeneratorSpec::WeaklyCorrelated { seed, .. }
            | GeneratorSpec::ArithTight { seed, .. }
            | GeneratorSpec::GeoTight { seed, .. } => *seed = seed.wrapping_add(offset),
            GeneratorSpec::Theorem4 { .. } => {}
        }
        out
    }
}

/// A generated instance with the scale applied to rational profit levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub instance: Instance,
    /// Profits are the intended values times `scale`.
    pub scale: u64,
    /// `P^H` the tight kinds were built for, already scaled.
    pub p_h: Option<u64>,
}

pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    Ok(generate_detailed(spec)?.instance)
}

fn check_range(name: &str, (lo, hi): (u64, u64)) -> Result<()> {
    if lo == 0 || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "{name} range [{lo}, {hi}] must be positive and ordered"
        )));
    }
    Ok(())
}

fn half_capacity(weights: &[u64]) -> u64 {
    (weights.iter().sum::<u64>() / 2).max(1)
}

pub fn generate_detailed(spec: &GeneratorSpec) -> Result<Generated> {
    let plain = |instance| Generated {
        instance,
        scale: 1,
        p_h: None,
    };
    match *spec {
        GeneratorSpec::Uniform {
            n,
            k,
            capacity,
            profit,
            weight,
            seed,
        } => {
            check_range("profit", profit)?;
            check_range("weight", weight)?;
            let mut rng = Draw::new(seed);
            let mut pairs = Vec::with_capacity(n);
            for _ in 0..n {
                let p = rng.range(profit.0, profit.1);
                let w = rng.range(weight.0, weight.1);
                pairs.push((p, w));
            }
            let c = capacity
                .unwrap_or_else(|| half_capacity(&pairs.iter().map(|x| x.1).collect::<Vec<_>>()));
            Ok(plain(Instance::from_pairs(&pairs, c, k)?))
        }
        GeneratorSpec::WeaklyCorrelated {
            n,
            k,
            capacity,
            weight,
            spread,
            seed,
        } => {
            check_range("weight", weight)?;
            let mut rng = Draw::new(seed);
            let mut pairs = Vec::with_capacity(n);
            for _ in 0..n {
                let w = rng.range(weight.0, weight.1);
                let noise = rng.range(0, 2 * spread);
                let p = (w + noise).saturating_sub(spread).max(1);
                pairs.push((p, w));
            }
            let c = capacity
                .unwrap_or_else(|| half_capacity(&pairs.iter().map(|x| x.1).collect::<Vec<_>>()));
            Ok(plain(Instance::from_pairs(&pairs, c, k)?))
        }
        GeneratorSpec::ArithTight {
            epsilon,
            gamma,
            p_h,
            k,
            seed,
        } => {
            let levels = epsilon.floor_div(gamma as u64) as usize;
            tight(
                gamma,
                p_h,
                k,
                seed,
                |i| {
                    (
                        BigUint::from(epsilon.num()) * p_h * i as u64,
                        BigUint::from(epsilon.den()) * gamma as u64,
                    )
                },
                levels,
            )
        }
        GeneratorSpec::GeoTight {
            epsilon,
            gamma,
            p_h,
            k,
            seed,
        } => {
            let (n, d, m) = (epsilon.num(), epsilon.den(), epsilon.complement_num());
            let level = |i: usize| {
                (
                    BigUint::from(n) * p_h * num_traits::pow(BigUint::from(d), i - 1),
                    BigUint::from(d) * gamma as u64 * num_traits::pow(BigUint::from(m), i - 1),
                )
            };
            let mut beta = 0;
            while {
                let (a, b) = level(beta + 1);
                a <= b * p_h
            } {
                beta += 1;
            }
            tight(gamma, p_h, k, seed, level, beta)
        }
        GeneratorSpec::Theorem4 { epsilon, p_h, k } => {
            let t = build_theorem4_instance(epsilon, p_h, k)?;
            let scaled = p_h
                .checked_mul(t.scale)
                .ok_or_else(|| Error::Overflow("scaled P^H".into()))?;
            Ok(Generated {
                instance: t.instance,
                scale: t.scale,
                p_h: Some(scaled),
            })
        }
    }
}

/// `γ` copies of each level `num/den` for `i = 1..=levels`, scaled by the
/// lcm of the reduced denominators. When that scale does not fit in `u64`
/// the levels are scaled by the smallest integer `S` that keeps every gap
/// `S·(a_{i+1} − a_i)` at least 1 and rounded up, so each rounded level
/// stays in its own class. Weights are uniform on `[1, 1000]`.
fn tight<F>(
    gamma: usize,
    p_h: u64,
    k: Option<usize>,
    seed: u64,
    level: F,
    levels: usize,
) -> Result<Generated>
where
    F: Fn(usize) -> (BigUint, BigUint),
{
    if gamma == 0 || p_h == 0 {
        return Err(Error::InvalidParameter(
            "gamma and P^H must be positive".into(),
        ));
    }
    let k = k.unwrap_or(gamma);
    if gamma > k {
        return Err(Error::InvalidParameter(format!(
            "gamma {gamma} exceeds k {k}"
        )));
    }
    if levels == 0 {
        return Err(Error::InvalidParameter("no profit levels below P^H".into()));
    }
    let reduced: Vec<(BigUint, BigUint)> = (1..=levels)
        .map(|i| {
            let (a, b) = level(i);
            let g = a.gcd(&b);
            (a / &g, b / g)
        })
        .collect();
    let lcm = reduced
        .iter()
        .fold(BigUint::from(1u32), |acc, (_, b)| acc.lcm(b));
    let profits = scaled_levels(&reduced, &lcm, gamma, true).or_else(|| {
        let one = BigUint::from(1u32);
        let s = reduced.windows(2).fold(one.clone(), |acc, w| {
            let ((n1, d1), (n2, d2)) = (&w[0], &w[1]);
            let gap_num = n2 * d1 - n1 * d2;
            acc.max((d1 * d2).div_ceil(&gap_num))
        });
        scaled_levels(&reduced, &s, gamma, false)
    });
    let overflow = || Error::Overflow("tight instance values exceed u64".into());
    let (scale_u, profits) = profits.ok_or_else(overflow)?;
    let p_h_scaled = p_h.checked_mul(scale_u).ok_or_else(overflow)?;
    let mut rng = Draw::new(seed);
    let mut items = Vec::with_capacity(levels * gamma);
    for p in profits {
        for _ in 0..gamma {
            items.push(Item::new(items.len(), p, rng.range(1, 1000)));
        }
    }
    let c = half_capacity(&items.iter().map(|it| it.weight).collect::<Vec<_>>());
    Ok(Generated {
        instance: Instance::new(items, c, k)?,
        scale: scale_u,
        p_h: Some(p_h_scaled),
    })
}

/// Levels times `scale`, exact or rounded up; `None` when the scale, a
/// profit or the total profit of `γ` copies per level leaves `u64`.
fn scaled_levels(
    reduced: &[(BigUint, BigUint)],
    scale: &BigUint,
    gamma: usize,
    exact: bool,
) -> Option<(u64, Vec<u64>)> {
    let s = scale.to_u64()?;
    let mut total = 0u64;
    let mut out = Vec::with_capacity(reduced.len());
    for (a, b) in reduced {
        let x = a * scale;
        let p = if exact { x / b } else { x.div_ceil(b) }.to_u64()?;
        total = total.checked_add(p.checked_mul(gamma as u64)?)?;
        out.push(p);
    }
    Some((s, out))
}
