//! Configuration, experiment drivers and CSV output for the `kinetic-hmc`
//! binary.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod table;
