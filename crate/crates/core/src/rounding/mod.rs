//! Profit rounding and the reduced item sets `N_γ`.
//!
//! Items are classified against a profit grid, and per class only the
//! lightest few survive. Any solution with at most `γ` items can then be
//! swapped class by class for one from the reduced set that is no heavier
//! and loses at most `2ε·OPT` in profit.

mod sequence;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::epsilon::Epsilon;
use crate::error::{Error, Result};
use crate::instance::{Instance, Item};

pub use sequence::{GridKind, Sequence};

/// Reduction parameters: accuracy `ε`, solution size `γ` and the
/// half-approximation value `P^H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RoundingContext {
    pub epsilon: Epsilon,
    pub gamma: usize,
    pub p_h: u64,
}

impl RoundingContext {
    pub fn new(epsilon: Epsilon, gamma: usize, p_h: u64) -> Result<Self> {
        let ctx = RoundingContext {
            epsilon,
            gamma,
            p_h,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.gamma == 0 {
            return Err(Error::InvalidParameter("gamma must be at least 1".into()));
        }
        if self.p_h == 0 {
            return Err(Error::InvalidParameter("P^H must be positive".into()));
        }
        Ok(())
    }

    /// `p ≤ a₁ = ε·P^H/γ`.
    pub fn is_small(&self, p: u64) -> bool {
        let e = self.epsilon;
        p as u128 * self.gamma as u128 * e.den() as u128 <= e.num() as u128 * self.p_h as u128
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassedItem {
    pub item: Item,
    pub class_index: usize,
}

/// Classified items with at most `n_i` of the lightest per class.
#[derive(Debug, Clone)]
pub struct ReducedSet {
    sequence: Sequence,
    classes: BTreeMap<usize, Vec<ClassedItem>>,
    total: usize,
    dropped_small: usize,
    dropped_by_cap: usize,
}

impl ReducedSet {
    pub fn sequence(&self) -> &Sequence {
        &self.sequence
    }

    /// Class index to kept items, ascending by `(weight, id)`.
    pub fn classes(&self) -> &BTreeMap<usize, Vec<ClassedItem>> {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &[ClassedItem] {
        self.classes.get(&i).map_or(&[], Vec::as_slice)
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn dropped_small(&self) -> usize {
        self.dropped_small
    }

    pub fn dropped_by_cap(&self) -> usize {
        self.dropped_by_cap
    }

    /// Kept items in ascending id order.
    pub fn items(&self) -> Vec<Item> {
        let mut out: Vec<Item> = self.classes.values().flatten().map(|c| c.item).collect();
        out.sort_unstable_by_key(|it| it.id);
        out
    }

    pub fn report(&self) -> ReduceReport {
        let seq = &self.sequence;
        ReduceReport {
            epsilon: seq.context().epsilon.to_string(),
            gamma: seq.context().gamma,
            p_h: seq.context().p_h,
            kind: seq.kind(),
            arith_count: seq.arith_count(),
            alpha: seq.alpha(),
            beta: seq.beta(),
            psi: seq.psi(),
            classes: self
                .classes
                .iter()
                .map(|(&i, items)| ClassReport {
                    class: i,
                    term: seq.term(i).to_string(),
                    cap: seq.cap(i),
                    kept: items.iter().map(|c| c.item.id).collect(),
                })
                .collect(),
            total: self.total,
            dropped_small: self.dropped_small,
            dropped_by_cap: self.dropped_by_cap,
        }
    }
}

/// Serializable summary of a [`ReducedSet`].
#[derive(Debug, Clone, Serialize)]
pub struct ReduceReport {
    pub epsilon: String,
    pub gamma: usize,
    pub p_h: u64,
    pub kind: GridKind,
    pub arith_count: usize,
    pub alpha: usize,
    pub beta: usize,
    pub psi: usize,
    pub classes: Vec<ClassReport>,
    pub total: usize,
    pub dropped_small: usize,
    pub dropped_by_cap: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub class: usize,
    pub term: String,
    pub cap: usize,
    pub kept: Vec<usize>,
}

fn lighter(a: &ClassedItem, b: &ClassedItem) -> std::cmp::Ordering {
    (a.item.weight, a.item.id).cmp(&(b.item.weight, b.item.id))
}

/// Keeps the `n` lightest entries (ties to the smaller id), sorted.
fn keep_lightest(list: &mut Vec<ClassedItem>, n: usize) -> usize {
    let before = list.len();
    if n == 0 {
        list.clear();
        return before;
    }
    if list.len() > n {
        list.select_nth_unstable_by(n - 1, lighter);
        list.truncate(n);
    }
    list.sort_unstable_by(lighter);
    before - list.len()
}

fn build(seq: Sequence, items: &[Item], drop_small: bool) -> Result<ReducedSet> {
    let ctx = *seq.context();
    let mut classes: BTreeMap<usize, Vec<ClassedItem>> = BTreeMap::new();
    let mut dropped_small = 0;
    for it in items {
        if drop_small && ctx.is_small(it.profit) {
            dropped_small += 1;
            continue;
        }
        let class_index = seq
            .class_of(it.profit)
            .ok_or(Error::SmallProfitItem(it.id))?;
        classes.entry(class_index).or_default().push(ClassedItem {
            item: *it,
            class_index,
        });
    }
    let mut dropped_by_cap = 0;
    for (&i, list) in classes.iter_mut() {
        dropped_by_cap += keep_lightest(list, seq.cap(i));
    }
    classes.retain(|_, list| !list.is_empty());
    let total = classes.values().map(Vec::len).sum();
    Ok(ReducedSet {
        sequence: seq,
        classes,
        total,
        dropped_small,
        dropped_by_cap,
    })
}

/// Classifies against `a_i = a₁·i` and caps class `i` at
/// `min{γ, ⌊2γ/(εi)⌋}`. Profits below `a₁` are an error.
pub fn arithmetic_sequence_classify(items: &[Item], ctx: RoundingContext) -> Result<ReducedSet> {
    build(Sequence::arithmetic(ctx)?, items, false)
}

/// Classifies against `a_i = a₁·r^{i−1}` and caps class `i` at
/// `min{γ, ⌊(2γ/ε)(1−ε)^{i−1}⌋}`. Profits below `a₁` are an error.
pub fn geometric_sequence_classify(items: &[Item], ctx: RoundingContext) -> Result<ReducedSet> {
    build(Sequence::geometric(ctx)?, items, false)
}

pub fn hybrid_sequence(ctx: RoundingContext) -> Result<Sequence> {
    Sequence::hybrid(ctx)
}

/// Builds `N_γ`: drops items with `p ≤ a₁`, classifies the rest on the
/// hybrid grid and keeps the `n_i` lightest per class.
pub fn parallel_reduce(inst: &Instance, ctx: RoundingContext) -> Result<ReducedSet> {
    parallel_reduce_items(inst.items(), ctx)
}

pub fn parallel_reduce_items(items: &[Item], ctx: RoundingContext) -> Result<ReducedSet> {
    build(Sequence::hybrid(ctx)?, items, true)
}

/// Number of items per class, `counts[i − 1]` for class `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Configuration {
    pub counts: Vec<usize>,
}

impl Configuration {
    pub fn size(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Counts the items of `set` per interval `[a_i, a_{i+1})`, `i < ψ`.
pub fn configuration_of(set: &[Item], seq: &Sequence) -> Result<Configuration> {
    let len = seq.psi().saturating_sub(1);
    let mut counts = vec![0usize; len];
    for it in set {
        let i = seq
            .class_of(it.profit)
            .ok_or(Error::SmallProfitItem(it.id))?;
        if i > len {
            return Err(Error::InvalidParameter(format!(
                "item {} has profit {} beyond the last class {len}",
                it.id, it.profit
            )));
        }
        counts[i - 1] += 1;
    }
    Ok(Configuration { counts })
}

/// Realizes `cfg` with the lightest items of each reduced class.
pub fn match_configuration(cfg: &Configuration, reduced: &ReducedSet) -> Result<Vec<Item>> {
    let mut out = Vec::with_capacity(cfg.size());
    for (pos, &needed) in cfg.counts.iter().enumerate() {
        if needed == 0 {
            continue;
        }
        let class = reduced.class(pos + 1);
        if class.len() < needed {
            return Err(Error::UnrealizableConfiguration {
                class: pos + 1,
                needed,
                available: class.len(),
            });
        }
        out.extend(class[..needed].iter().map(|c| c.item));
    }
    Ok(out)
}
