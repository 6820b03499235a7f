//! Detecting false coins with random Gaussian test vectors, and a halting
//! problem encoded as a coin sequence.
//!
//! Everything here is `no_std` with `alloc`. Floating point goes through
//! `libm` so that results are bit-identical across targets. Monte Carlo
//! estimators take a [`TrialExecutor`]; each trial draws from its own
//! ChaCha stream keyed by `(seed, trial)`, so outputs do not depend on how
//! trials are scheduled.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod coins;
pub mod detector;
mod error;
pub mod halting;
pub mod quadrature;
pub mod scattering;
pub mod schedule;
pub mod stats;
pub mod vector;
pub mod walks;

pub use coins::{
    classical_merchant_detect, classical_merchant_weigh, merchant_config, CoinSequence, FalseStack,
};
pub use detector::{
    device_clicks, estimate_indistinguishable_measure, in_indistinguishable_set, indistinguishable_bound,
    min_time_bound, posterior_no_false, run_halting_batch, run_halting_experiment, simulate_posterior, BayesTally,
    Bound, DeviceConfig, HaltingBatch, Outcome, StackSelector, TimeBound, Verdict,
};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use halting::{
    coins_to_halting_search, corpus, corpus_machine, encode_halting_as_coins, tm_run, MachineSpec, Move, Rule,
    RunStatus, RunTrace, SearchOutcome, TuringMachine,
};
pub use schedule::WalkSchedule;
pub use stats::{MeanEstimate, Proportion, Sequential, TrialExecutor};
pub use vector::{sobolev_unperturbed, sobolev_weighted, Mode, TestVector};
pub use walks::{cylinder_probability, cylinder_probability_mc, rn_density, Gate, WalkSampler};
