//! How many distinct solution values survive geometric rounding.
//!
//! Counts the lattice points `S_ε^d = {c ∈ ℕ₀^d : Σ c_i·ε(1+ε)^i < 1}` and
//! their distinct sums, and compares with the volume of the tetrahedron
//! under the same hyperplane and with the bound `C·e^{B/ε}`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::epsilon::Epsilon;
use crate::error::{Error, Result};
use crate::instance::{Instance, Item};

pub const BOUND_A: f64 = 0.2784;
pub const BOUND_B: f64 = 0.3172;
pub const BOUND_C: f64 = 0.3200;

/// Default cap on enumerated lattice points.
pub const DEFAULT_CEILING: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub epsilon: Epsilon,
    pub dim: usize,
    pub d_max: usize,
    pub lattice_count: u64,
    pub distinct_sums: u64,
    pub volume_bound: f64,
    pub exp_bound: f64,
}

impl CountReport {
    pub fn injective(&self) -> bool {
        self.lattice_count == self.distinct_sums
    }

    /// `eps,d,d_max,count,distinct,volume,expbound,injective`.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6e},{:.6e},{}",
            self.epsilon,
            self.dim,
            self.d_max,
            self.lattice_count,
            self.distinct_sums,
            self.volume_bound,
            self.exp_bound,
            self.injective()
        )
    }
}

pub const CSV_HEADER: &str = "eps,d,d_max,count,distinct,volume,expbound,injective";

fn pow(base: u64, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), e)
}

/// Number of coordinates that can be nonzero: `#{i : ε(1+ε)^i < 1}`,
/// which is `⌈ln(1/ε)/ln(1+ε)⌉` unless a coefficient equals 1 exactly.
pub fn d_max(epsilon: Epsilon) -> usize {
    let (n, d) = (epsilon.num(), epsilon.den());
    let mut i = 0;
    // n(d+n)^i < d^{i+1}
    while BigUint::from(n) * pow(d + n, i) < pow(d, i + 1) {
        i += 1;
    }
    i
}

/// Unsigned integers as little-endian `u64` limbs of one fixed width.
fn to_limbs(x: &BigUint, width: usize) -> Vec<u64> {
    let mut v = x.to_u64_digits();
    v.resize(width, 0);
    v
}

fn add_in_place(acc: &mut [u64], x: &[u64]) {
    let mut carry = false;
    for (a, &b) in acc.iter_mut().zip(x) {
        let (s1, c1) = a.overflowing_add(b);
        let (s2, c2) = s1.overflowing_add(carry as u64);
        *a = s2;
        carry = c1 || c2;
    }
}

fn less(a: &[u64], b: &[u64]) -> bool {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        if x != y {
            return x < y;
        }
    }
    false
}

fn fingerprint(limbs: &[u64]) -> u64 {
    let mut h: u64 = 0x9E37_79B9_7F4A_7C15;
    for &x in limbs {
        h ^= x;
        h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h ^= h >> 31;
    }
    h
}

struct Lattice {
    width: usize,
    coef: Vec<Vec<u64>>,
    bound: Vec<u64>,
    ceiling: u64,
    count: u64,
    /// Level `i` partial sum at `[i·width, (i+1)·width)`.
    levels: Vec<u64>,
    /// Fingerprints, or whole sums when `exact`.
    seen: Vec<u64>,
    exact: bool,
}

impl Lattice {
    fn record(&mut self, i: usize) -> Result<()> {
        self.count += 1;
        if self.count > self.ceiling {
            return Err(Error::CeilingExceeded {
                ceiling: self.ceiling,
                counted: self.count - 1,
            });
        }
        let sum = &self.levels[i * self.width..(i + 1) * self.width];
        if self.exact {
            self.seen.extend_from_slice(sum);
        } else {
            self.seen.push(fingerprint(sum));
        }
        Ok(())
    }

    /// True when coordinate `j` can still be raised from the level-`i` sum.
    fn room(&self, i: usize, j: usize, scratch: &mut Vec<u64>) -> bool {
        scratch.clear();
        scratch.extend_from_slice(&self.levels[i * self.width..(i + 1) * self.width]);
        add_in_place(scratch, &self.coef[j]);
        less(scratch, &self.bound)
    }

    fn walk(&mut self, i: usize, scratch: &mut Vec<u64>) -> Result<()> {
        let dim = self.coef.len();
        // coefficients grow with the index, so if the next one does not fit
        // every deeper coordinate is zero
        if i == dim || !self.room(i, i, scratch) {
            return self.record(i);
        }
        let w = self.width;
        loop {
            self.levels.copy_within(i * w..(i + 1) * w, (i + 1) * w);
            self.walk(i + 1, scratch)?;
            add_in_place(&mut self.levels[i * w..(i + 1) * w], &self.coef[i]);
            if !less(&self.levels[i * w..(i + 1) * w], &self.bound) {
                return Ok(());
            }
        }
    }
}

fn enumerate(epsilon: Epsilon, live: usize, ceiling: u64, exact: bool) -> Result<(u64, u64)> {
    let (n, d) = (epsilon.num(), epsilon.den());
    // scale by d^live: coefficient i becomes n(d+n)^i d^{live−1−i}
    let bound = pow(d, live);
    let width = (bound.bits() as usize).div_ceil(64) + 1;
    let coef = (0..live)
        .map(|i| {
            to_limbs(
                &(BigUint::from(n) * pow(d + n, i) * pow(d, live - 1 - i)),
                width,
            )
        })
        .collect();
    let mut lat = Lattice {
        width,
        coef,
        bound: to_limbs(&bound, width),
        ceiling,
        count: 0,
        levels: vec![0; (live + 1) * width],
        seen: Vec::new(),
        exact,
    };
    lat.walk(0, &mut Vec::with_capacity(width))?;
    let distinct = if exact {
        let mut sums: Vec<&[u64]> = lat.seen.chunks(width).collect();
        sums.sort_unstable();
        sums.dedup();
        sums.len() as u64
    } else {
        lat.seen.sort_unstable();
        lat.seen.dedup();
        lat.seen.len() as u64
    };
    Ok((lat.count, distinct))
}

/// Enumerates `S_ε^dim` exactly; coordinates at or beyond `d_max` are
/// forced to 0 and skipped.
pub fn count_lattice(epsilon: Epsilon, dim: usize) -> Result<CountReport> {
    count_lattice_with_ceiling(epsilon, dim, DEFAULT_CEILING)
}

pub fn count_lattice_with_ceiling(
    epsilon: Epsilon,
    dim: usize,
    ceiling: u64,
) -> Result<CountReport> {
    if dim == 0 {
        return Err(Error::InvalidParameter(
            "dimension must be at least 1".into(),
        ));
    }
    let dm = d_max(epsilon);
    let live = dim.min(dm);
    // distinct fingerprints prove distinct sums; otherwise compare exactly
    let (count, mut distinct) = enumerate(epsilon, live, ceiling, false)?;
    if distinct < count {
        distinct = enumerate(epsilon, live, ceiling, true)?.1;
    }
    Ok(CountReport {
        epsilon,
        dim,
        d_max: dm,
        lattice_count: count,
        distinct_sums: distinct,
        volume_bound: tetrahedron_volume(epsilon, dim),
        exp_bound: exponential_bound(epsilon).1,
    })
}

/// `[d!·ε^d·(1+ε)^{d(d−1)/2}]^{−1}`.
pub fn tetrahedron_volume(epsilon: Epsilon, dim: usize) -> f64 {
    let e = epsilon.to_f64();
    let d = dim as f64;
    let ln_fact: f64 = (2..=dim).map(|i| (i as f64).ln()).sum();
    (-(ln_fact + d * e.ln() + d * (d - 1.0) / 2.0 * e.ln_1p())).exp()
}

/// `(max(1, ⌊A/ε⌋), C·e^{B/ε})`.
pub fn exponential_bound(epsilon: Epsilon) -> (usize, f64) {
    let e = epsilon.to_f64();
    let d = ((BOUND_A / e).floor() as usize).max(1);
    (d, BOUND_C * (BOUND_B / e).exp())
}

/// True when distinct lattice vectors give distinct sums.
pub fn injectivity_check(epsilon: Epsilon, dim: usize) -> Result<bool> {
    Ok(count_lattice(epsilon, dim)?.injective())
}

/// The worst-case instance behind the growth bound, scaled to integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem4Instance {
    pub instance: Instance,
    /// All values were multiplied by this factor.
    pub scale: u64,
    pub lambda: usize,
    /// Number of geometric values at most `P^H`.
    pub beta: usize,
}

/// For each geometric value `a_i = (εP^H/λ)·r^{i−1} ≤ P^H` (`λ = min{k, ⌊2/ε⌋}`),
/// `⌊P^H/a_i⌋` copies of an item with `p = w = a_i`; capacity `P^H`.
pub fn build_theorem4_instance(epsilon: Epsilon, p_h: u64, k: usize) -> Result<Theorem4Instance> {
    if p_h == 0 {
        return Err(Error::InvalidParameter("P^H must be positive".into()));
    }
    if (k as u64) < epsilon.ceil_inverse() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} is below 1/epsilon = {}",
            epsilon.ceil_inverse()
        )));
    }
    let lambda = (epsilon.floor_div(2) as usize).min(k);
    let (n, d, m) = (epsilon.num(), epsilon.den(), epsilon.complement_num());
    // a_i = n·P^H·d^{i−1} / (d·λ·m^{i−1})
    let mut values: Vec<(BigUint, BigUint)> = Vec::new();
    let top = BigUint::from(p_h);
    for i in 1.. {
        let num = BigUint::from(n) * &top * pow(d, i - 1);
        let den = BigUint::from(d) * BigUint::from(lambda as u64) * pow(m, i - 1);
        if num > &top * &den {
            break;
        }
        let g = num.gcd(&den);
        values.push((num / &g, den / g));
    }
    let scale = values
        .iter()
        .fold(BigUint::from(1u32), |acc, (_, den)| acc.lcm(den));
    let too_big = || Error::Overflow("growth instance does not fit in u64".into());
    let scale_u = scale.to_u64().ok_or_else(too_big)?;
    let cap = (&top * &scale).to_u64().ok_or_else(too_big)?;
    let mut items = Vec::new();
    for (num, den) in &values {
        let value = (num * &scale / den).to_u64().ok_or_else(too_big)?;
        let copies = cap / value;
        for _ in 0..copies {
            items.push(Item::new(items.len(), value, value));
        }
    }
    Ok(Theorem4Instance {
        instance: Instance::new(items, cap, k)?,
        scale: scale_u,
        lambda,
        beta: values.len(),
    })
}
