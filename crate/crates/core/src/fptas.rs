//! Fully polynomial approximation scheme.
//!
//! Items with `p > εP^H` are large. Their profits are rounded geometrically
//! and then onto multiples of `εP^H/λ`, and a DP records for every pair
//! (rounded profit index `a`, count `l`) the lightest realizing set. Each pair
//! is completed with `H½` over the reduced small items.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::epsilon::Epsilon;
use crate::error::{Error, Result};
use crate::instance::{Instance, Item, Solution};
use crate::lp::{half_approx, half_approx_items};
use crate::report::{run_solver, SolveReport};
use crate::rounding::{geometric_sequence_classify, parallel_reduce_items, RoundingContext};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub large: Vec<Item>,
    pub small: Vec<Item>,
    /// `λ = min{k, ⌊2/ε⌋}`.
    pub lambda: usize,
}

/// Splits at `εP^H`: large means strictly above.
pub fn partition_items(inst: &Instance, epsilon: Epsilon, p_h: u64) -> Partition {
    let (large, small) = inst.items().iter().partition(|it| {
        it.profit as u128 * epsilon.den() as u128 > epsilon.num() as u128 * p_h as u128
    });
    let lambda = (epsilon.floor_div(2) as usize).min(inst.cardinality_bound());
    Partition {
        large,
        small,
        lambda,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundedLargeItem {
    pub item: Item,
    /// Rounded profit is `profit_index · εP^H/λ`.
    pub profit_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerialRounding {
    /// Survivors of the geometric stage, in id order.
    pub items: Vec<RoundedLargeItem>,
    pub discarded: usize,
}

/// Geometric rounding with `γ = λ` (classes and caps), then each
/// survivor's value `(εP^H/λ)·r^{i−1}` is floored onto the unit grid.
/// The index never drops below `λ`; since `p > λ·unit` the rounded profit
/// stays at most `p`.
pub fn serial_round_large(
    large: &[Item],
    epsilon: Epsilon,
    p_h: u64,
    lambda: usize,
) -> Result<SerialRounding> {
    let threshold =
        |p: u64| p as u128 * epsilon.den() as u128 > epsilon.num() as u128 * p_h as u128;
    if let Some(it) = large.iter().find(|it| !threshold(it.profit)) {
        return Err(Error::NotLarge(it.id));
    }
    let reduced = geometric_sequence_classify(large, RoundingContext::new(epsilon, lambda, p_h)?)?;
    let mut items = Vec::with_capacity(reduced.total());
    for (&class, list) in reduced.classes() {
        let e = class - 1;
        let num = num_traits::pow(BigInt::from(epsilon.den()), e);
        let den = num_traits::pow(BigInt::from(epsilon.complement_num()), e);
        let floor = num.div_floor(&den).to_usize().unwrap_or(usize::MAX);
        for c in list {
            items.push(RoundedLargeItem {
                item: c.item,
                profit_index: floor.max(lambda),
            });
        }
    }
    items.sort_unstable_by_key(|r| r.item.id);
    Ok(SerialRounding {
        items,
        discarded: large.len() - reduced.total(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairState {
    pub a: usize,
    pub l: usize,
    pub weight: u64,
    /// Realizing large-item ids, ascending.
    pub items: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTable {
    /// Reachable states sorted by `(a, l)`.
    pub states: Vec<PairState>,
    /// Number of distinct reachable `a`.
    pub value_set_size: usize,
    pub axis_cap: usize,
}

impl PairTable {
    pub fn get(&self, a: usize, l: usize) -> Option<&PairState> {
        self.states
            .binary_search_by(|s| (s.a, s.l).cmp(&(a, l)))
            .ok()
            .map(|i| &self.states[i])
    }

    /// CSV `a,l,weight` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,l,weight\n");
        for s in &self.states {
            let _ = writeln!(out, "{},{},{}", s.a, s.l, s.weight);
        }
        out
    }
}

/// `⌊2λ/ε⌋`: any feasible set has rounded profit at most `OPT ≤ 2P^H`,
/// which is `2λ/ε` units.
pub fn axis_cap(epsilon: Epsilon, lambda: usize) -> usize {
    epsilon.floor_div(2 * lambda as u64) as usize
}

/// Minimum weight `g(a, l)` of a set of exactly `l` rounded items with
/// index sum exactly `a`, over states with weight at most `capacity`.
pub fn dp_large(
    rounded: &[RoundedLargeItem],
    capacity: u64,
    lambda: usize,
    axis_cap: usize,
) -> PairTable {
    let width = axis_cap + 1;
    let mut table: Vec<Option<(u64, Vec<usize>)>> = vec![None; (lambda + 1) * width];
    table[0] = Some((0, Vec::new()));
    for r in rounded {
        let idx = r.profit_index;
        if idx > axis_cap {
            continue;
        }
        for l in (1..=lambda).rev() {
            for a in (idx..=axis_cap).rev() {
                let from = (l - 1) * width + a - idx;
                let Some(w) = table[from].as_ref().map(|(w0, _)| w0 + r.item.weight) else {
                    continue;
                };
                let to = l * width + a;
                if w > capacity || table[to].as_ref().is_some_and(|(cur, _)| *cur <= w) {
                    continue;
                }
                let mut ids = table[from].as_ref().expect("checked").1.clone();
                ids.push(r.item.id);
                table[to] = Some((w, ids));
            }
        }
    }
    let mut states = Vec::new();
    for a in 0..width {
        for l in 0..=lambda {
            if let Some((weight, ids)) = &table[l * width + a] {
                let mut items = ids.clone();
                items.sort_unstable();
                states.push(PairState {
                    a,
                    l,
                    weight: *weight,
                    items,
                });
            }
        }
    }
    let mut distinct: Vec<usize> = states.iter().map(|s| s.a).collect();
    distinct.dedup();
    PairTable {
        value_set_size: distinct.len(),
        states,
        axis_cap,
    }
}

/// FPTAS result together with its pair table.
#[derive(Debug, Clone)]
pub struct FptasOutcome {
    pub report: SolveReport,
    pub pairs: Option<PairTable>,
}

pub fn fptas_solve(inst: &Instance, epsilon: Epsilon) -> Result<SolveReport> {
    Ok(fptas_solve_detailed(inst, epsilon)?.report)
}

pub fn fptas_solve_detailed(inst: &Instance, epsilon: Epsilon) -> Result<FptasOutcome> {
    let mut pairs = None;
    let report = run_solver(inst, "fptas", Some(epsilon), |inst| {
        let (report, table) = solve_normalized(inst, epsilon)?;
        pairs = Some(table);
        Ok(report)
    })?;
    Ok(FptasOutcome { report, pairs })
}

fn solve_normalized(inst: &Instance, epsilon: Epsilon) -> Result<(SolveReport, PairTable)> {
    let (c, k) = (inst.capacity(), inst.cardinality_bound());
    let global = half_approx(inst)?;
    let p_h = global.value;
    let part = partition_items(inst, epsilon, p_h);
    let lambda = part.lambda;
    let rounding = serial_round_large(&part.large, epsilon, p_h, lambda)?;
    let cap = axis_cap(epsilon, lambda);
    let table = dp_large(&rounding.items, c, lambda, cap);
    let small = parallel_reduce_items(&part.small, RoundingContext::new(epsilon, k, p_h)?)?.items();

    let fill = |s: &PairState| -> Result<(u64, usize, Solution)> {
        let rest = half_approx_items(&small, c - s.weight, k - s.l)?;
        let chosen: Vec<Item> = s
            .items
            .iter()
            .chain(rest.solution.selected.iter())
            .map(|&id| *inst.item(id).expect("known id"))
            .collect();
        Ok((s.a as u64, s.l, Solution::from_items(&chosen, c, k)))
    };
    let best = table
        .states
        .par_iter()
        .map(fill)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .reduce(|x, y| {
            if y.2.profit_total > x.2.profit_total {
                y
            } else {
                x
            }
        })
        .map(|(_, _, sol)| sol)
        .unwrap_or_else(Solution::empty);
    if !best.feasible {
        return Err(Error::Internal(format!(
            "fptas produced infeasible set {:?}",
            best.selected
        )));
    }
    let mut report = SolveReport::new("fptas", Some(epsilon), &best)
        .counter("lambda", lambda as u64)
        .counter("large", part.large.len() as u64)
        .counter("large_kept", rounding.items.len() as u64)
        .counter("small", part.small.len() as u64)
        .counter("small_reduced", small.len() as u64)
        .counter("dp_states", table.states.len() as u64)
        .counter("value_set_size", table.value_set_size as u64)
        .counter("axis_cap", cap as u64)
        .counter("p_h", p_h);
    report.certified_lower_bound = best.profit_total.max(p_h);
    Ok((report, table))
}
