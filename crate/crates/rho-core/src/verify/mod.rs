//! Closed-form oracles for `ρ` and the property batteries that check the
//! identities and inequalities it satisfies.

mod batteries;
mod exhaustion;
mod oracle;
mod radius;
mod report;

pub use batteries::{
    check_boundary_decay, check_kobayashi_disk, check_lipschitz, check_oracles, check_submean,
};
pub use exhaustion::{build_exhaustion, ExhaustionField};
pub use oracle::{oracle_rho, oracle_table, OracleEntry};
pub use radius::{convergence_radius, ConvergenceRadius};
pub use report::PropertyReport;
