//! Ground-truth solvers. The enumeration and DP oracles share no helper
//! logic so that each can catch bugs in the other.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, Solution};

/// Largest item count accepted by [`solve_exact_enum`].
pub const ENUM_MAX_ITEMS: usize = 25;

/// Default cell budget of [`solve_exact_dp`].
pub const DEFAULT_DP_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    SubsetEnum,
    Dp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub opt_value: u64,
    pub witness: Solution,
    pub method: OracleMethod,
}

/// True when the set `a` precedes `b` in lexicographic order of their
/// ascending position lists.
fn mask_lex_less(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let low = diff & diff.wrapping_neg();
    let above = !((low << 1).wrapping_sub(1));
    if a & low != 0 {
        // a has the smaller element here unless b has ended.
        b & above != 0
    } else {
        a & above == 0
    }
}

/// Exhaustive search over all `2^n` subsets (Gray-code order, O(1) update
/// per subset). Ties: larger profit, then smaller weight, then
/// lexicographically smaller id list.
pub fn solve_exact_enum(inst: &Instance) -> Result<OracleResult> {
    let n = inst.len();
    if n > ENUM_MAX_ITEMS {
        return Err(Error::EnumerationTooLarge(n));
    }
    let items = inst.items();
    let (c, k) = (inst.capacity(), inst.cardinality_bound());
    let mut mask: u32 = 0;
    let (mut p, mut w, mut cnt) = (0u64, 0u64, 0usize);
    let mut best = (0u64, 0u64, 0u32);
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        let flag = 1u32 << bit;
        if mask & flag == 0 {
            mask |= flag;
            p += items[bit].profit;
            w += items[bit].weight;
            cnt += 1;
        } else {
            mask &= !flag;
            p -= items[bit].profit;
            w -= items[bit].weight;
            cnt -= 1;
        }
        if w > c || cnt > k {
            continue;
        }
        let (bp, bw, bm) = best;
        if p > bp || (p == bp && (w < bw || (w == bw && mask_lex_less(mask, bm)))) {
            best = (p, w, mask);
        }
    }
    let (_, _, bm) = best;
    let chosen: Vec<usize> = (0..n)
        .filter(|i| bm & (1 << i) != 0)
        .map(|i| items[i].id)
        .collect();
    let witness = inst.evaluate(&chosen)?;
    Ok(OracleResult {
        opt_value: witness.profit_total,
        witness,
        method: OracleMethod::SubsetEnum,
    })
}

/// Classic max-profit DP over (items used, capacity used) with take-bits
/// for witness reconstruction. The budget caps `(c + 1)(k + 1)`.
pub fn solve_exact_dp(inst: &Instance) -> Result<OracleResult> {
    solve_exact_dp_with_budget(inst, DEFAULT_DP_BUDGET)
}

pub fn solve_exact_dp_with_budget(inst: &Instance, budget: u128) -> Result<OracleResult> {
    let c = inst.capacity() as usize;
    let k = inst.cardinality_bound().min(inst.len());
    let cells = (inst.capacity() as u128 + 1) * (k as u128 + 1);
    if cells > budget {
        return Err(Error::DpBudgetExceeded {
            required: cells,
            budget,
        });
    }
    let width = c + 1;
    let cells = cells as usize;
    let mut best = vec![0u64; cells];
    let words = cells.div_ceil(64);
    let mut take: Vec<Vec<u64>> = Vec::with_capacity(inst.len());

    for it in inst.items() {
        let mut bits = vec![0u64; words];
        let wi = it.weight as usize;
        if wi <= c {
            for l in (1..=k).rev() {
                for cap in (wi..=c).rev() {
                    let cand = best[(l - 1) * width + cap - wi] + it.profit;
                    let idx = l * width + cap;
                    if cand > best[idx] {
                        best[idx] = cand;
                        bits[idx / 64] |= 1 << (idx % 64);
                    }
                }
            }
        }
        take.push(bits);
    }

    let mut chosen = Vec::new();
    let (mut l, mut cap) = (k, c);
    for (pos, it) in inst.items().iter().enumerate().rev() {
        if l == 0 {
            break;
        }
        let idx = l * width + cap;
        if take[pos][idx / 64] & (1 << (idx % 64)) != 0 {
            chosen.push(it.id);
            l -= 1;
            cap -= it.weight as usize;
        }
    }
    let opt = best[k * width + c];
    let witness = inst.evaluate(&chosen)?;
    if witness.profit_total != opt || !witness.feasible {
        return Err(Error::Internal(format!(
            "dp witness {:?} does not reproduce value {opt}",
            witness.selected
        )));
    }
    Ok(OracleResult {
        opt_value: opt,
        witness,
        method: OracleMethod::Dp,
    })
}
