//! Exact LP relaxation of kKP and the 1/2-approximation built on it.
//!
//! The relaxation `max Σ p_j x_j  s.t.  Σ w_j x_j ≤ c, Σ x_j ≤ k, 0 ≤ x ≤ 1`
//! is solved through its Lagrangian dual in the capacity multiplier `λ`:
//!
//! ```text
//! D(λ) = λ·c + Σ_{top k} max(0, p_j − λ·w_j)
//! ```
//!
//! `D` is convex and piecewise linear, and its breakpoints are rationals whose
//! denominators are bounded by the largest weight `W`. Bisection on dyadic
//! points narrows the sign change of `D'` to an interval shorter than `1/W²`,
//! which holds exactly one such rational; it is recovered as the simplest
//! rational in the interval. Primal values then follow from complementary
//! slackness, with at most two fractional variables.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, Item, Solution};

/// Optimal basic solution of the LP relaxation.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// Ids with `x_j = 1`, ascending.
    pub ones: Vec<usize>,
    /// Ids with `0 < x_j < 1` and their values, ascending by id.
    pub fractional: Vec<(usize, BigRational)>,
    pub objective: BigRational,
    /// Optimal capacity multiplier.
    pub lambda: BigRational,
    /// Optimal cardinality multiplier.
    pub mu: BigRational,
}

impl LpSolution {
    fn zero() -> Self {
        LpSolution {
            ones: Vec::new(),
            fractional: Vec::new(),
            objective: BigRational::zero(),
            lambda: BigRational::zero(),
            mu: BigRational::zero(),
        }
    }

    pub fn fractional_ids(&self) -> Vec<usize> {
        self.fractional.iter().map(|(id, _)| *id).collect()
    }

    /// `x_j` for the given id (zero for ids not mentioned).
    pub fn value(&self, id: usize) -> BigRational {
        if self.ones.binary_search(&id).is_ok() {
            return BigRational::one();
        }
        self.fractional
            .iter()
            .find(|(j, _)| *j == id)
            .map(|(_, x)| x.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// `(Σ w_j x_j, Σ x_j)` recomputed exactly against `items`.
    pub fn usage(&self, items: &[Item]) -> (BigRational, BigRational) {
        let mut weight = BigRational::zero();
        let mut count = BigRational::zero();
        for it in items {
            let x = self.value(it.id);
            if !x.is_zero() {
                weight += &x * BigRational::from_integer(BigInt::from(it.weight));
                count += x;
            }
        }
        (weight, count)
    }
}

/// Result of the 1/2-approximation `H½`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfResult {
    pub solution: Solution,
    /// `P^H`.
    pub value: u64,
    /// Largest profit among packable items.
    pub p_max: u64,
}

/// Solves the LP relaxation of a normalized instance.
pub fn solve_lp(inst: &Instance) -> Result<LpSolution> {
    solve_lp_items(inst.items(), inst.capacity(), inst.cardinality_bound())
}

/// Solves the LP relaxation over an arbitrary item list. Items heavier than
/// the capacity are fixed at zero.
pub fn solve_lp_items(items: &[Item], capacity: u64, bound: usize) -> Result<LpSolution> {
    let packable: Vec<Item> = items
        .iter()
        .copied()
        .filter(|it| it.weight <= capacity)
        .collect();
    if packable.is_empty() || bound == 0 {
        return Ok(LpSolution::zero());
    }
    let dual = Dual::new(&packable, capacity, bound);

    // λ = 0 is optimal when the k most profitable items fit.
    if dual.right_slope(&BigRational::zero()) >= 0 {
        let mut order: Vec<&Item> = packable.iter().collect();
        order.sort_by(|a, b| {
            b.profit
                .cmp(&a.profit)
                .then(a.weight.cmp(&b.weight))
                .then(a.id.cmp(&b.id))
        });
        order.truncate(bound);
        let mut ones: Vec<usize> = order.iter().map(|it| it.id).collect();
        ones.sort_unstable();
        let objective: u64 = order.iter().map(|it| it.profit).sum();
        let mu = if packable.len() > bound {
            BigRational::from_integer(BigInt::from(order.last().map_or(0, |it| it.profit)))
        } else {
            BigRational::zero()
        };
        return Ok(LpSolution {
            ones,
            fractional: Vec::new(),
            objective: BigRational::from_integer(BigInt::from(objective)),
            lambda: BigRational::zero(),
            mu,
        });
    }

    let lambda = dual.minimizer()?;
    dual.recover_primal(lambda)
}

/// `H½`: best of the LP-rounded candidates and the best single item.
pub fn half_approx(inst: &Instance) -> Result<HalfResult> {
    half_approx_items(inst.items(), inst.capacity(), inst.cardinality_bound())
}

/// `H½` over an arbitrary item list, capacity and cardinality bound.
pub fn half_approx_items(items: &[Item], capacity: u64, bound: usize) -> Result<HalfResult> {
    let mut packable: Vec<Item> = items
        .iter()
        .copied()
        .filter(|it| it.weight <= capacity)
        .collect();
    packable.sort_unstable_by_key(|it| it.id);
    let p_max = packable.iter().map(|it| it.profit).max().unwrap_or(0);
    if packable.is_empty() || bound == 0 {
        return Ok(HalfResult {
            solution: Solution::empty(),
            value: 0,
            p_max,
        });
    }
    let lp = solve_lp_items(&packable, capacity, bound)?;
    let by_id = |id: usize| -> &Item {
        let pos = packable
            .binary_search_by_key(&id, |it| it.id)
            .expect("lp ids come from the item list");
        &packable[pos]
    };

    let base: Vec<Item> = lp.ones.iter().map(|&id| *by_id(id)).collect();
    let mut candidates: Vec<Solution> = vec![Solution::from_items(&base, capacity, bound)];
    if lp.fractional.len() == 2 {
        let sum = &lp.fractional[0].1 + &lp.fractional[1].1;
        if sum.is_one() {
            let f1 = by_id(lp.fractional[0].0);
            let f2 = by_id(lp.fractional[1].0);
            let lighter = match f1.weight.cmp(&f2.weight) {
                Ordering::Less => f1,
                Ordering::Greater => f2,
                Ordering::Equal => {
                    if f1.profit >= f2.profit {
                        f1
                    } else {
                        f2
                    }
                }
            };
            let mut with = base.clone();
            with.push(*lighter);
            candidates.push(Solution::from_items(&with, capacity, bound));
        }
    }
    let best_single = packable
        .iter()
        .max_by(|a, b| a.profit.cmp(&b.profit).then(b.id.cmp(&a.id)))
        .expect("non-empty");
    candidates.push(Solution::from_items([best_single], capacity, bound));

    let mut best: Option<Solution> = None;
    for cand in candidates {
        if !cand.feasible {
            return Err(Error::Internal(format!(
                "H½ candidate {:?} is infeasible",
                cand.selected
            )));
        }
        let better = match &best {
            None => true,
            Some(b) => {
                cand.profit_total > b.profit_total
                    || (cand.profit_total == b.profit_total && cand.selected < b.selected)
            }
        };
        if better {
            best = Some(cand);
        }
    }
    let solution = best.expect("at least one candidate");
    Ok(HalfResult {
        value: solution.profit_total,
        solution,
        p_max,
    })
}

/// Scaled reduced value `b·(p − λ·w) = p·b − a·w` for `λ = a/b`.
trait Scaled: Ord + Clone + Send {
    fn origin() -> Self;
    fn value(p: u64, w: u64, a: &Self, b: &Self) -> Self;
}

impl Scaled for i128 {
    fn origin() -> Self {
        0
    }
    fn value(p: u64, w: u64, a: &i128, b: &i128) -> i128 {
        p as i128 * b - a * w as i128
    }
}

impl Scaled for BigInt {
    fn origin() -> Self {
        <BigInt as Zero>::zero()
    }
    fn value(p: u64, w: u64, a: &BigInt, b: &BigInt) -> BigInt {
        BigInt::from(p) * b - a * BigInt::from(w)
    }
}

#[derive(Clone, Copy)]
enum Side {
    /// Just right of `λ`: zero values drop out, lighter items win ties.
    Right,
    /// Just left of `λ`: zero values count, heavier items win ties.
    Left,
}

struct Dual<'a> {
    items: &'a [Item],
    capacity: u64,
    bound: usize,
    p_max: u64,
    w_max: u64,
}

fn bits(x: &BigInt) -> u64 {
    x.bits()
}

impl<'a> Dual<'a> {
    fn new(items: &'a [Item], capacity: u64, bound: usize) -> Self {
        Dual {
            items,
            capacity,
            bound,
            p_max: items.iter().map(|it| it.profit).max().unwrap_or(0),
            w_max: items.iter().map(|it| it.weight).max().unwrap_or(0),
        }
    }

    fn fits_i128(&self, a: &BigInt, b: &BigInt) -> bool {
        let pb = 64 - self.p_max.leading_zeros() as u64;
        let wb = 64 - self.w_max.leading_zeros() as u64;
        bits(a) + wb <= 125 && bits(b) + pb <= 125
    }

    fn slope(&self, lambda: &BigRational, side: Side) -> i128 {
        let (a, b) = (lambda.numer(), lambda.denom());
        let used = if self.fits_i128(a, b) {
            let (a, b) = (a.to_i128().unwrap(), b.to_i128().unwrap());
            self.top_weight::<i128>(&a, &b, side)
        } else {
            self.top_weight::<BigInt>(a, b, side)
        };
        self.capacity as i128 - used as i128
    }

    fn right_slope(&self, lambda: &BigRational) -> i128 {
        self.slope(lambda, Side::Right)
    }

    fn left_slope(&self, lambda: &BigRational) -> i128 {
        self.slope(lambda, Side::Left)
    }

    /// Total weight of the `k` items with the largest reduced values on the
    /// given side of `λ`, restricted to positive values there.
    fn top_weight<T: Scaled>(&self, a: &T, b: &T, side: Side) -> u64 {
        let zero = T::origin();
        let mut keyed: Vec<(T, u64)> = self
            .items
            .iter()
            .filter_map(|it| {
                let v = T::value(it.profit, it.weight, a, b);
                let keep = match side {
                    Side::Right => v > zero,
                    Side::Left => v >= zero,
                };
                keep.then_some((v, it.weight))
            })
            .collect();
        if keyed.len() > self.bound {
            let cmp = |x: &(T, u64), y: &(T, u64)| -> Ordering {
                y.0.cmp(&x.0).then_with(|| match side {
                    Side::Right => x.1.cmp(&y.1),
                    Side::Left => y.1.cmp(&x.1),
                })
            };
            keyed.select_nth_unstable_by(self.bound - 1, cmp);
            keyed.truncate(self.bound);
        }
        keyed.iter().map(|(_, w)| *w).sum()
    }

    /// Minimizer of `D` over `λ > 0`, assuming `D'(0+) < 0`.
    fn minimizer(&self) -> Result<BigRational> {
        let two = BigRational::from_integer(BigInt::from(2));
        let mut lo = BigRational::zero();
        let mut hi = BigRational::from_integer(BigInt::from(self.p_max) + 1);
        let w = BigInt::from(self.w_max);
        let resolution = BigRational::new(BigInt::one(), &w * &w);
        while &hi - &lo >= resolution {
            let mid = (&lo + &hi) / &two;
            if self.right_slope(&mid) < 0 {
                lo = mid;
            } else if self.left_slope(&mid) > 0 {
                hi = mid;
            } else {
                return Ok(mid);
            }
        }
        let lambda = simplest_between(&lo, &hi);
        if self.left_slope(&lambda) <= 0 && self.right_slope(&lambda) >= 0 {
            Ok(lambda)
        } else {
            Err(Error::Internal(format!(
                "lp multiplier search failed to isolate a breakpoint in ({lo}, {hi})"
            )))
        }
    }

    fn recover_primal(&self, lambda: BigRational) -> Result<LpSolution> {
        let (a, b) = (lambda.numer().clone(), lambda.denom().clone());
        let mut keyed: Vec<(BigInt, &Item)> = self
            .items
            .iter()
            .map(|it| (<BigInt as Scaled>::value(it.profit, it.weight, &a, &b), it))
            .collect();
        keyed.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.id.cmp(&y.1.id)));
        let k = self.bound;
        let mu_scaled = if keyed.len() > k && keyed[k].0.is_positive() {
            keyed[k].0.clone()
        } else {
            BigInt::zero()
        };
        let upper: Vec<&Item> = keyed
            .iter()
            .filter(|(v, _)| *v > mu_scaled)
            .map(|(_, it)| *it)
            .collect();
        let ties: Vec<&Item> = keyed
            .iter()
            .filter(|(v, _)| *v == mu_scaled)
            .map(|(_, it)| *it)
            .collect();
        if upper.len() > k {
            return Err(Error::Internal(
                "more than k items above the threshold".into(),
            ));
        }
        let used: u64 = upper.iter().map(|it| it.weight).sum();
        if used > self.capacity {
            return Err(Error::Internal(
                "items above the threshold exceed capacity".into(),
            ));
        }
        let slots = k - upper.len();
        let room = self.capacity - used;

        let mut ones: Vec<usize> = upper.iter().map(|it| it.id).collect();
        let mut fractional: Vec<(usize, BigRational)> = Vec::new();
        if mu_scaled.is_positive() {
            // Both constraints tight: exactly `slots` units of tied items with
            // total weight `room`. Slide a window over the weight order.
            let mut tied = ties.clone();
            tied.sort_by(|x, y| x.weight.cmp(&y.weight).then(x.id.cmp(&y.id)));
            if slots > tied.len() {
                return Err(Error::Internal("not enough tied items to fill k".into()));
            }
            let mut window: u64 = tied[..slots].iter().map(|it| it.weight).sum();
            if window > room {
                return Err(Error::Internal(
                    "lightest tied window exceeds capacity".into(),
                ));
            }
            let mut t = 0;
            loop {
                if window == room {
                    ones.extend(tied[t..t + slots].iter().map(|it| it.id));
                    break;
                }
                if t + slots >= tied.len() {
                    return Err(Error::Internal(
                        "heaviest tied window below capacity".into(),
                    ));
                }
                let out = tied[t];
                let inc = tied[t + slots];
                let next = window - out.weight + inc.weight;
                if next > room {
                    let theta = BigRational::new(
                        BigInt::from(room - window),
                        BigInt::from(inc.weight - out.weight),
                    );
                    ones.extend(tied[t + 1..t + slots].iter().map(|it| it.id));
                    fractional.push((out.id, BigRational::one() - &theta));
                    fractional.push((inc.id, theta));
                    break;
                }
                window = next;
                t += 1;
            }
        } else {
            // Capacity tight, cardinality free: heaviest tied items first.
            let mut tied = ties.clone();
            tied.sort_by(|x, y| y.weight.cmp(&x.weight).then(x.id.cmp(&y.id)));
            let mut left = room;
            let mut taken = 0usize;
            for it in tied {
                if left == 0 {
                    break;
                }
                taken += 1;
                if it.weight <= left {
                    left -= it.weight;
                    ones.push(it.id);
                } else {
                    fractional.push((
                        it.id,
                        BigRational::new(BigInt::from(left), BigInt::from(it.weight)),
                    ));
                    left = 0;
                }
            }
            if left > 0 || taken > slots {
                return Err(Error::Internal(
                    "tied items cannot fill capacity within k".into(),
                ));
            }
        }
        ones.sort_unstable();
        fractional.sort_by_key(|(id, _)| *id);

        let mut objective = BigRational::zero();
        for it in self.items {
            if ones.binary_search(&it.id).is_ok() {
                objective += BigRational::from_integer(BigInt::from(it.profit));
            }
        }
        for (id, x) in &fractional {
            let it = self.items.iter().find(|it| it.id == *id).expect("known id");
            objective += x * BigRational::from_integer(BigInt::from(it.profit));
        }
        Ok(LpSolution {
            ones,
            fractional,
            objective,
            mu: BigRational::new(mu_scaled, b),
            lambda,
        })
    }
}

/// The rational with the smallest denominator in the open interval
/// `(lo, hi)`, `0 <= lo < hi`.
pub(crate) fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    let fl = lo.floor();
    let next = &fl + BigRational::one();
    if &next < hi {
        return next;
    }
    // Both ends inside (fl, fl + 1]: recurse on reciprocals of the fractional parts.
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let y = if lo_frac.is_zero() {
        (BigRational::one() / hi_frac).floor() + BigRational::one()
    } else {
        simplest_between(
            &(BigRational::one() / hi_frac),
            &(BigRational::one() / lo_frac),
        )
    };
    fl + BigRational::one() / y
}
