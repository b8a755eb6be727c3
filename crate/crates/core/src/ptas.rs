//! Polynomial-time approximation scheme with ratio `1 − 4ε`.
//!
//! Guess the at most `ℓ` most profitable items `L` of an optimal solution
//! among the reduced set `N_ℓ`, then complete each guess with `H½` over the
//! items of `N_k` whose profit lies below the smallest profit class of `L`.

use rayon::prelude::*;

use crate::epsilon::Epsilon;
use crate::error::{Error, Result};
use crate::instance::{Instance, Item, Solution};
use crate::lp::{half_approx, half_approx_items};
use crate::report::{run_solver, SolveReport};
use crate::rounding::{parallel_reduce, ReducedSet, RoundingContext, Sequence};

/// Refuse enumerations beyond this many prefixes.
pub const MAX_PREFIXES: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PtasParams {
    pub epsilon: Epsilon,
    pub ell: usize,
}

impl PtasParams {
    /// `ℓ = min{⌈1/ε⌉ − 2, k}`, floored at 0.
    pub fn new(epsilon: Epsilon, k: usize) -> Result<Self> {
        if !epsilon.at_most(1, 2) {
            return Err(Error::InvalidParameter(format!(
                "ptas needs epsilon <= 1/2, got {epsilon}"
            )));
        }
        let ell = (epsilon.ceil_inverse().saturating_sub(2) as usize).min(k);
        Ok(PtasParams { epsilon, ell })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PtasOptions {
    /// Complete every prefix with cardinality `k − ℓ` instead of `k − |L|`.
    pub literal_residual: bool,
}

/// Items left for `H½` once the prefix `L` is fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subinstance {
    pub items: Vec<Item>,
    pub capacity: u64,
    pub cardinality: usize,
    /// `h`: members have profit below `a_{h+1}` of the `ℓ`-grid.
    pub threshold_index: usize,
}

/// All subsets of `items` with at most `ell` members, as index lists in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct Prefixes {
    len: usize,
    ell: usize,
    stack: Vec<usize>,
    started: bool,
}

impl Iterator for Prefixes {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if !self.started {
            self.started = true;
            return Some(Vec::new());
        }
        // pre-order walk: extend if possible, otherwise advance the last slot
        if self.stack.len() < self.ell {
            let next = self.stack.last().map_or(0, |&x| x + 1);
            if next < self.len {
                self.stack.push(next);
                return Some(self.stack.clone());
            }
        }
        while let Some(last) = self.stack.pop() {
            if last + 1 < self.len {
                self.stack.push(last + 1);
                return Some(self.stack.clone());
            }
        }
        None
    }
}

/// Enumerates every `L ⊆ N_ℓ` with `|L| ≤ ell`; items are taken in id
/// order so the enumeration is lexicographic in sorted ids.
pub fn enumerate_prefixes(reduced: &ReducedSet, ell: usize) -> (Vec<Item>, Prefixes) {
    let items = reduced.items();
    let len = items.len();
    (
        items,
        Prefixes {
            len,
            ell,
            stack: Vec::new(),
            started: false,
        },
    )
}

/// `Σ_{s ≤ ell} C(m, s)`, saturating.
pub fn prefix_count(m: usize, ell: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for s in 0..=ell.min(m) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul((m - s) as u128) / (s as u128 + 1);
    }
    total
}

fn subinstance(
    prefix: &[Item],
    pool: &[Item],
    grid: Option<&Sequence>,
    capacity: u64,
    cardinality: usize,
) -> Subinstance {
    let weight: u64 = prefix.iter().map(|it| it.weight).sum();
    let h = match (grid, prefix.iter().map(|it| it.profit).min()) {
        (Some(seq), Some(p)) => seq.class_of(p).unwrap_or(0),
        _ => 0,
    };
    let items = pool
        .iter()
        .filter(|it| match grid {
            Some(seq) => !seq.term_at_most(h + 1, it.profit),
            None => true,
        })
        .filter(|it| !prefix.iter().any(|l| l.id == it.id))
        .copied()
        .collect();
    Subinstance {
        items,
        capacity: capacity - weight,
        cardinality,
        threshold_index: h,
    }
}

struct Candidate {
    index: usize,
    solution: Solution,
}

fn better(a: Candidate, b: Candidate) -> Candidate {
    let key = |c: &Candidate| (c.solution.profit_total, std::cmp::Reverse(c.index));
    if key(&b) > key(&a) {
        b
    } else {
        a
    }
}

pub fn ptas_solve(inst: &Instance, epsilon: Epsilon) -> Result<SolveReport> {
    ptas_solve_with(inst, epsilon, PtasOptions::default())
}

pub fn ptas_solve_with(
    inst: &Instance,
    epsilon: Epsilon,
    opts: PtasOptions,
) -> Result<SolveReport> {
    PtasParams::new(epsilon, inst.cardinality_bound())?;
    run_solver(inst, "ptas", Some(epsilon), |inst| {
        solve_normalized(inst, epsilon, opts)
    })
}

fn solve_normalized(inst: &Instance, epsilon: Epsilon, opts: PtasOptions) -> Result<SolveReport> {
    let (c, k) = (inst.capacity(), inst.cardinality_bound());
    let params = PtasParams::new(epsilon, k)?;
    let ell = params.ell;
    let global = half_approx(inst)?;
    let p_h = global.value;

    let n_k = parallel_reduce(inst, RoundingContext::new(epsilon, k, p_h)?)?;
    let pool = n_k.items();

    let (prefix_items, prefixes, grid, n_ell_size) = if ell == 0 {
        (Vec::new(), None, None, 0)
    } else {
        let n_ell = parallel_reduce(inst, RoundingContext::new(epsilon, ell, p_h)?)?;
        let count = prefix_count(n_ell.total(), ell);
        if count > MAX_PREFIXES {
            return Err(Error::InvalidParameter(format!(
                "ptas would enumerate {count} prefixes; use a larger epsilon"
            )));
        }
        let size = n_ell.total();
        let (items, iter) = enumerate_prefixes(&n_ell, ell);
        (
            items,
            Some(iter.collect::<Vec<_>>()),
            Some(n_ell.sequence().clone()),
            size,
        )
    };
    let prefixes = prefixes.unwrap_or_else(|| vec![Vec::new()]);

    let evaluate = |index: usize, chosen: &Vec<usize>| -> Result<Option<Candidate>> {
        let prefix: Vec<Item> = chosen.iter().map(|&i| prefix_items[i]).collect();
        let w: u64 = prefix.iter().map(|it| it.weight).sum();
        if w > c {
            return Ok(None);
        }
        let residual = if opts.literal_residual {
            k - ell
        } else {
            k - prefix.len()
        };
        let sub = subinstance(&prefix, &pool, grid.as_ref(), c, residual);
        let fill = half_approx_items(&sub.items, sub.capacity, sub.cardinality)?;
        let all: Vec<Item> = prefix
            .iter()
            .copied()
            .chain(
                fill.solution
                    .selected
                    .iter()
                    .map(|&id| *inst.item(id).expect("known id")),
            )
            .collect();
        Ok(Some(Candidate {
            index,
            solution: Solution::from_items(&all, c, k),
        }))
    };

    let results: Vec<Option<Candidate>> = prefixes
        .par_iter()
        .enumerate()
        .map(|(i, l)| evaluate(i, l))
        .collect::<Result<_>>()?;
    let feasible_prefixes = results.iter().filter(|r| r.is_some()).count();
    let best = results.into_iter().flatten().reduce(better);

    let solution = match best {
        Some(b) if b.solution.profit_total > global.value => b.solution,
        _ => global.solution.clone(),
    };
    if !solution.feasible {
        return Err(Error::Internal(format!(
            "ptas produced infeasible set {:?}",
            solution.selected
        )));
    }
    let mut report = SolveReport::new("ptas", Some(epsilon), &solution)
        .counter("ell", ell as u64)
        .counter("n_k", n_k.total() as u64)
        .counter("n_ell", n_ell_size as u64)
        .counter("prefixes", prefixes.len() as u64)
        .counter("prefixes_feasible", feasible_prefixes as u64)
        .counter("p_h", p_h);
    report.certified_lower_bound = solution.profit_total.max(p_h);
    Ok(report)
}
