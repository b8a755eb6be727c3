//! k-item knapsack instances, solutions and normalization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One item of an instance. `id` is stable across normalization and
/// reductions; profit and weight are positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Item {
    pub id: usize,
    pub profit: u64,
    pub weight: u64,
}

impl Item {
    pub fn new(id: usize, profit: u64, weight: u64) -> Self {
        Item { id, profit, weight }
    }
}

/// A kKP instance: items, knapsack capacity `c` and cardinality bound `k`.
///
/// Items are kept sorted by id. Construction checks the item-level
/// invariants; the standing assumptions `w_j <= c`, `sum w_j > c` and
/// `k <= n` are only guaranteed after [`normalize`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    items: Vec<Item>,
    capacity: u64,
    cardinality_bound: usize,
}

impl Instance {
    pub fn new(mut items: Vec<Item>, capacity: u64, cardinality_bound: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidInstance("capacity must be positive".into()));
        }
        if cardinality_bound == 0 {
            return Err(Error::InvalidInstance(
                "cardinality bound must be at least 1".into(),
            ));
        }
        items.sort_by_key(|it| it.id);
        let mut total_p: u64 = 0;
        let mut total_w: u64 = 0;
        for (pos, it) in items.iter().enumerate() {
            if it.profit == 0 || it.weight == 0 {
                return Err(Error::InvalidInstance(format!(
                    "item {} must have positive profit and weight",
                    it.id
                )));
            }
            if pos > 0 && items[pos - 1].id == it.id {
                return Err(Error::InvalidInstance(format!(
                    "duplicate item id {}",
                    it.id
                )));
            }
            total_p = total_p
                .checked_add(it.profit)
                .ok_or_else(|| Error::Overflow("total profit exceeds u64".into()))?;
            total_w = total_w
                .checked_add(it.weight)
                .ok_or_else(|| Error::Overflow("total weight exceeds u64".into()))?;
        }
        Ok(Instance {
            items,
            capacity,
            cardinality_bound,
        })
    }

    /// Builds an instance with ids `0..n` from `(profit, weight)` pairs.
    pub fn from_pairs(
        pairs: &[(u64, u64)],
        capacity: u64,
        cardinality_bound: usize,
    ) -> Result<Self> {
        let items = pairs
            .iter()
            .enumerate()
            .map(|(id, &(p, w))| Item::new(id, p, w))
            .collect();
        Instance::new(items, capacity, cardinality_bound)
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn cardinality_bound(&self) -> usize {
        self.cardinality_bound
    }

    pub fn item(&self, id: usize) -> Option<&Item> {
        self.items
            .binary_search_by_key(&id, |it| it.id)
            .ok()
            .map(|pos| &self.items[pos])
    }

    pub fn total_weight(&self) -> u64 {
        self.items.iter().map(|it| it.weight).sum()
    }

    pub fn total_profit(&self) -> u64 {
        self.items.iter().map(|it| it.profit).sum()
    }

    pub fn max_profit(&self) -> u64 {
        self.items.iter().map(|it| it.profit).max().unwrap_or(0)
    }

    /// True when the standing assumptions hold: every item fits alone,
    /// the items do not all fit together, and `1 <= k <= n`.
    pub fn is_normalized(&self) -> bool {
        !self.items.is_empty()
            && self.items.iter().all(|it| it.weight <= self.capacity)
            && self.cardinality_bound <= self.items.len()
    }

    /// True when taking every item is feasible.
    pub fn is_trivial(&self) -> bool {
        self.total_weight() <= self.capacity && self.items.len() <= self.cardinality_bound
    }

    /// Evaluates a set of item ids against this instance.
    pub fn evaluate(&self, ids: &[usize]) -> Result<Solution> {
        let mut selected: Vec<usize> = ids.to_vec();
        selected.sort_unstable();
        selected.dedup();
        let mut profit_total = 0u64;
        let mut weight_total = 0u64;
        for &id in &selected {
            let it = self.item(id).ok_or(Error::UnknownItem(id))?;
            profit_total += it.profit;
            weight_total += it.weight;
        }
        let feasible = weight_total <= self.capacity && selected.len() <= self.cardinality_bound;
        Ok(Solution {
            selected,
            profit_total,
            weight_total,
            feasible,
        })
    }
}

/// A set of selected items with its exact totals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Solution {
    /// Selected ids in ascending order.
    pub selected: Vec<usize>,
    pub profit_total: u64,
    pub weight_total: u64,
    pub feasible: bool,
}

impl Solution {
    pub fn empty() -> Self {
        Solution {
            selected: Vec::new(),
            profit_total: 0,
            weight_total: 0,
            feasible: true,
        }
    }

    /// Builds a solution from items directly; `feasible` is checked against
    /// the given capacity and bound.
    pub fn from_items<'a, I>(items: I, capacity: u64, bound: usize) -> Self
    where
        I: IntoIterator<Item = &'a Item>,
    {
        let mut selected = Vec::new();
        let mut profit_total = 0;
        let mut weight_total = 0;
        for it in items {
            selected.push(it.id);
            profit_total += it.profit;
            weight_total += it.weight;
        }
        selected.sort_unstable();
        let feasible = weight_total <= capacity && selected.len() <= bound;
        Solution {
            selected,
            profit_total,
            weight_total,
            feasible,
        }
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }
}

/// What [`normalize`] changed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationLog {
    /// Ids of items heavier than the capacity.
    pub removed: Vec<usize>,
    /// `(from, to)` when the cardinality bound was clamped to the item count.
    pub clamped_bound: Option<(usize, usize)>,
    /// Set when every surviving item fits at once.
    pub trivial_solution: Option<Solution>,
}

impl NormalizationLog {
    pub fn is_empty(&self) -> bool {
        self.removed.is_empty() && self.clamped_bound.is_none() && self.trivial_solution.is_none()
    }

    pub fn is_trivially_solvable(&self) -> bool {
        self.trivial_solution.is_some()
    }

    pub fn messages(&self) -> Vec<String> {
        let mut out = Vec::new();
        for id in &self.removed {
            out.push(format!("removed item {id}: weight exceeds capacity"));
        }
        if let Some((from, to)) = self.clamped_bound {
            out.push(format!("cardinality bound clamped from {from} to {to}"));
        }
        if self.trivial_solution.is_some() {
            out.push("trivially solvable: take all items".to_string());
        }
        out
    }
}

/// Removes items that can never be packed, clamps `k` to the surviving item
/// count, and flags instances where all items fit together.
pub fn normalize(raw: &Instance) -> Result<(Instance, NormalizationLog)> {
    let c = raw.capacity;
    let mut log = NormalizationLog::default();
    let mut kept = Vec::with_capacity(raw.items.len());
    for it in &raw.items {
        if it.weight > c {
            log.removed.push(it.id);
        } else {
            kept.push(*it);
        }
    }
    if kept.is_empty() {
        return Err(Error::NoPackableItems);
    }
    let mut k = raw.cardinality_bound;
    if k > kept.len() {
        log.clamped_bound = Some((k, kept.len()));
        k = kept.len();
    }
    let inst = Instance {
        items: kept,
        capacity: c,
        cardinality_bound: k,
    };
    if inst.is_trivial() {
        log.trivial_solution = Some(Solution::from_items(inst.items(), c, k));
    }
    Ok((inst, log))
}
