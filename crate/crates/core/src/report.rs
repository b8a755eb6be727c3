//! Uniform result record for every solver.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::epsilon::Epsilon;
use crate::error::{Error, Result};
use crate::instance::{normalize, Instance, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub algorithm: String,
    pub epsilon: Option<Epsilon>,
    pub value: u64,
    pub item_ids: Vec<usize>,
    pub weight: u64,
    pub feasible: bool,
    /// A value some feasible solution is known to reach.
    pub certified_lower_bound: u64,
    pub opt_if_known: Option<u64>,
    pub wall_ns: u64,
    pub counters: BTreeMap<String, u64>,
}

impl SolveReport {
    pub fn new(algorithm: &str, epsilon: Option<Epsilon>, solution: &Solution) -> Self {
        SolveReport {
            algorithm: algorithm.to_string(),
            epsilon,
            value: solution.profit_total,
            item_ids: solution.selected.clone(),
            weight: solution.weight_total,
            feasible: solution.feasible,
            certified_lower_bound: solution.profit_total,
            opt_if_known: None,
            wall_ns: 0,
            counters: BTreeMap::new(),
        }
    }

    pub fn counter(mut self, name: &str, value: u64) -> Self {
        self.counters.insert(name.to_string(), value);
        self
    }

    /// Re-evaluates the item set against `inst` and fails unless the
    /// stored value and feasibility match.
    pub fn verify(&self, inst: &Instance) -> Result<()> {
        let sol = inst.evaluate(&self.item_ids)?;
        if sol.profit_total != self.value || sol.feasible != self.feasible || !sol.feasible {
            return Err(Error::Internal(format!(
                "{} report does not re-evaluate: value {} vs {}, feasible {}",
                self.algorithm, self.value, sol.profit_total, sol.feasible
            )));
        }
        Ok(())
    }

    /// `k=v;k=v` with keys sorted.
    pub fn counters_field(&self) -> String {
        self.counters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Normalizes `raw`, returns the all-items report for trivially solvable
/// inputs, and otherwise runs `body` on the normalized instance. The
/// result is timed and re-verified against `raw`.
pub(crate) fn run_solver<F>(
    raw: &Instance,
    algorithm: &str,
    epsilon: Option<Epsilon>,
    body: F,
) -> Result<SolveReport>
where
    F: FnOnce(&Instance) -> Result<SolveReport>,
{
    let start = Instant::now();
    let (inst, log) = normalize(raw)?;
    let mut report = match &log.trivial_solution {
        Some(sol) => SolveReport::new(algorithm, epsilon, sol).counter("trivial", 1),
        None => body(&inst)?,
    };
    report.wall_ns = start.elapsed().as_nanos() as u64;
    report.verify(raw)?;
    Ok(report)
}
