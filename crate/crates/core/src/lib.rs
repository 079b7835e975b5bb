//! Simulation and exact analysis of a heralded single-photon source built from
//! an array of pulsed downconverters, a crossed by-passable binary delay
//! register and a routing tree.
//!
//! The pieces, bottom-up:
//!
//! - [`emission`]: Poisson pair statistics and non-number-resolving heralds.
//! - [`topology`]: which delays each source can reach through the register.
//! - [`scheduler`]: one pump cycle's slot assignment, storage and discards.
//! - [`simulator`]: the Monte Carlo loop, feedback and metrics.
//! - [`oracle`]: exact stationary rates from a storage-level Markov chain and
//!   the optimized pump power.
//! - [`sweep`], [`config`], [`cli`]: experiment harness and I/O.

pub mod cli;
pub mod config;
pub mod emission;
pub mod error;
pub mod oracle;
pub mod scheduler;
pub mod simulator;
pub mod sweep;
pub mod topology;

pub use config::parse_config;
pub use emission::{herald, herald_probabilities, pair_pmf, sample_cycle_emissions, EmissionBatch, HeraldReport};
pub use error::{Error, Result};
pub use oracle::{optimized_power, stationary_rates, ChainSpec, StationaryRates};
pub use scheduler::{plan_cycle, plan_cycle_optimal, CyclePlan, StorageState};
pub use simulator::{apply_feedback, run_simulation, FeedbackMode, FeedbackPolicy, SimConfig, SimMetrics, Simulator};
pub use sweep::{emit_csv, run_sweep, Engine, Grid, MetricRow, SweepParameter, SweepSpec};
pub use topology::{verify_monotone_assignment, BoundaryMode, DelaySet, RegisterTopology};
