//! Std companion to `hyperhalt-core`: machine files, run configs, reports,
//! a rayon trial executor and the `hyperhalt` command line.

pub mod cli;
pub mod config;
pub mod exec;
pub mod experiments;
pub mod machine_file;
pub mod report;
pub mod suite;

pub use exec::Parallel;
pub use hyperhalt_core as model;
