//! Approximation schemes for the k-item knapsack problem (kKP): maximize the
//! profit of at most `k` items whose total weight fits a capacity `c`.

pub mod cli;
pub mod epsilon;
pub mod error;
pub mod fptas;
pub mod growth;
pub mod instance;
pub mod io;
pub mod lp;
pub mod oracle;
pub mod ptas;
pub mod report;
pub mod rounding;
pub mod workbench;

pub use epsilon::Epsilon;
pub use error::{Error, Result};
pub use instance::{normalize, Instance, Item, NormalizationLog, Solution};
pub use report::SolveReport;
