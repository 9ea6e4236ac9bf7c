//! Simulation and verification of quantum cellular automata and related
//! models: qubit registers and gates, classical CA, 1d-QCA, partitioned and
//! block-partitioned QCA, quantum Turing machines, and a QTM to PQCA compiler.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`). The aliases at the crate root fix it to `f64`.

pub mod amplitude;
pub mod bqca;
pub mod classical;
pub mod compiler;
pub mod error;
pub mod format;
pub mod gates;
pub mod matrix;
pub mod pqca;
pub mod qca1d;
pub mod qtm;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Amplitude = amplitude::Amplitude<f64>;
pub type Tolerance = amplitude::Tolerance<f64>;
pub type Superposition<K> = amplitude::Superposition<K, f64>;
pub type Gate = gates::Gate<f64>;
pub type QubitRegister = gates::QubitRegister<f64>;
pub type QcaSpec = qca1d::QcaSpec<f64>;
pub type QcaState = qca1d::QcaState<f64>;
pub type PqcaSpec = pqca::PqcaSpec<f64>;
pub type BqcaSpec = bqca::BqcaSpec<f64>;
pub type QtmSpec = qtm::QtmSpec<f64>;
pub type QtmState = qtm::QtmState<f64>;
pub type CompiledPqca = compiler::CompiledPqca<f64>;
