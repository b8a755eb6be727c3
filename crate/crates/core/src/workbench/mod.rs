//! Generators, solver dispatch and the benchmark harness.

pub mod bench;
pub mod generate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::epsilon::Epsilon;
use crate::error::{Error, Result};
use crate::fptas::fptas_solve;
use crate::instance::Instance;
use crate::lp::half_approx;
use crate::oracle::{solve_exact_dp, solve_exact_enum, OracleResult, ENUM_MAX_ITEMS};
use crate::ptas::ptas_solve;
use crate::report::{run_solver, SolveReport};

pub use bench::{bench_suite, BenchRow, Suite};
pub use generate::{generate, generate_detailed, Generated, GeneratorSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    ExactEnum,
    ExactDp,
    /// Enumeration when `n ≤ 25`, otherwise the DP.
    Exact,
    Half,
    Ptas,
    Fptas,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::ExactEnum,
        Algorithm::ExactDp,
        Algorithm::Exact,
        Algorithm::Half,
        Algorithm::Ptas,
        Algorithm::Fptas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::ExactEnum => "exact-enum",
            Algorithm::ExactDp => "exact-dp",
            Algorithm::Exact => "exact",
            Algorithm::Half => "half",
            Algorithm::Ptas => "ptas",
            Algorithm::Fptas => "fptas",
        }
    }

    pub fn needs_epsilon(self) -> bool {
        matches!(self, Algorithm::Ptas | Algorithm::Fptas)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm '{s}'")))
    }
}

fn oracle_report(name: &str, r: OracleResult) -> SolveReport {
    let mut rep = SolveReport::new(name, None, &r.witness);
    rep.opt_if_known = Some(r.opt_value);
    rep
}

/// Runs `alg` on `inst`. Approximation schemes need `epsilon`.
pub fn solve(inst: &Instance, alg: Algorithm, epsilon: Option<Epsilon>) -> Result<SolveReport> {
    let eps = || epsilon.ok_or_else(|| Error::InvalidParameter(format!("{alg} needs --eps")));
    match alg {
        Algorithm::Ptas => ptas_solve(inst, eps()?),
        Algorithm::Fptas => fptas_solve(inst, eps()?),
        Algorithm::Half => run_solver(inst, "half", None, |i| {
            let h = half_approx(i)?;
            Ok(SolveReport::new("half", None, &h.solution).counter("p_max", h.p_max))
        }),
        Algorithm::ExactEnum => run_solver(inst, "exact-enum", None, |i| {
            Ok(oracle_report("exact-enum", solve_exact_enum(i)?))
        }),
        Algorithm::ExactDp => run_solver(inst, "exact-dp", None, |i| {
            Ok(oracle_report("exact-dp", solve_exact_dp(i)?))
        }),
        Algorithm::Exact => run_solver(inst, "exact", None, |i| {
            let r = if i.len() <= ENUM_MAX_ITEMS {
                solve_exact_enum(i)?
            } else {
                solve_exact_dp(i)?
            };
            Ok(oracle_report("exact", r))
        }),
    }
    .map(|mut r| {
        if matches!(
            alg,
            Algorithm::ExactEnum | Algorithm::ExactDp | Algorithm::Exact
        ) {
            r.opt_if_known = Some(r.value);
        }
        r
    })
}
