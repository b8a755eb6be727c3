//! Benchmark suites: generate, solve, compare with an oracle, emit CSV.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{generate, GeneratorSpec};
use super::{solve, Algorithm};
use crate::epsilon::Epsilon;
use crate::error::Result;
use crate::instance::Instance;
use crate::oracle::{solve_exact_dp, solve_exact_enum, ENUM_MAX_ITEMS};

pub const CSV_HEADER: &str = "instance_id,alg,eps,value,opt,ratio,wall_ns,counters,note";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub spec: GeneratorSpec,
    /// Instances drawn from this spec, with seeds `seed, seed+1, …`.
    #[serde(default = "one")]
    pub repeat: u64,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    #[serde(default)]
    pub generators: Vec<SuiteEntry>,
    #[serde(default)]
    pub epsilons: Vec<Epsilon>,
    #[serde(default)]
    pub algorithms: Vec<Algorithm>,
    /// Skip the oracle entirely (large scaling runs).
    #[serde(default)]
    pub no_oracle: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance_id: String,
    pub alg: Algorithm,
    pub eps: Option<Epsilon>,
    pub value: Option<u64>,
    pub opt: Option<u64>,
    pub wall_ns: u64,
    pub counters: String,
    pub note: String,
}

impl BenchRow {
    pub fn ratio(&self) -> Option<f64> {
        match (self.value, self.opt) {
            (Some(v), Some(o)) if o > 0 => Some(v as f64 / o as f64),
            _ => None,
        }
    }

    pub fn csv_line(&self) -> String {
        let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.instance_id,
            self.alg,
            self.eps.map(|e| e.to_string()).unwrap_or_default(),
            opt(self.value),
            opt(self.opt),
            self.ratio().map(|r| format!("{r:.6}")).unwrap_or_default(),
            self.wall_ns,
            self.counters,
            self.note.replace([',', '\n'], ";")
        )
    }
}

fn oracle(inst: &Instance) -> std::result::Result<u64, String> {
    let r = if inst.len() <= ENUM_MAX_ITEMS {
        solve_exact_enum(inst)
    } else {
        solve_exact_dp(inst)
    };
    r.map(|o| o.opt_value)
        .map_err(|e| format!("oracle refused: {e}"))
}

fn run_instance(id: &str, inst: &Instance, suite: &Suite) -> Vec<BenchRow> {
    let (opt, oracle_note) = if suite.no_oracle {
        (None, String::new())
    } else {
        match crate::instance::normalize(inst).map_err(|e| e.to_string()) {
            Ok((norm, log)) => match &log.trivial_solution {
                Some(sol) => (Some(sol.profit_total), String::new()),
                None => match oracle(&norm) {
                    Ok(v) => (Some(v), String::new()),
                    Err(e) => (None, e),
                },
            },
            Err(e) => (None, format!("oracle refused: {e}")),
        }
    };
    let mut rows = Vec::new();
    for &alg in &suite.algorithms {
        let eps_list: Vec<Option<Epsilon>> = if alg.needs_epsilon() {
            suite.epsilons.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for eps in eps_list {
            let mut row = BenchRow {
                instance_id: id.to_string(),
                alg,
                eps,
                value: None,
                opt,
                wall_ns: 0,
                counters: String::new(),
                note: oracle_note.clone(),
            };
            match solve(inst, alg, eps) {
                Ok(r) => {
                    row.value = Some(r.value);
                    row.wall_ns = r.wall_ns;
                    row.counters = r.counters_field();
                }
                Err(e) => row.note = format!("error: {e}"),
            }
            rows.push(row);
        }
    }
    rows
}

/// Runs every (instance, algorithm, ε) of the suite. Rows come back in
/// suite order regardless of how the instances were scheduled.
pub fn bench_suite(suite: &Suite) -> Result<Vec<BenchRow>> {
    let mut jobs = Vec::new();
    for (g, entry) in suite.generators.iter().enumerate() {
        for rep in 0..entry.repeat {
            jobs.push((format!("g{g}-{rep}"), entry.spec.reseeded(rep)));
        }
    }
    let per_instance: Vec<Vec<BenchRow>> = jobs
        .par_iter()
        .map(|(id, spec)| -> Result<Vec<BenchRow>> {
            let inst = generate(spec)?;
            Ok(run_instance(id, &inst, suite))
        })
        .collect::<Result<_>>()?;
    Ok(per_instance.into_iter().flatten().collect())
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}
