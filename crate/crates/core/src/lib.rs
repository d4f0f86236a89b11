//! Finite-window numerics for CAR flows over lattice cones.
//!
//! The crate builds, on explicit finite windows of `Z^d`:
//!
//! * the antisymmetric Fock space with creation/annihilation operators and
//!   second quantization ([`fock`]),
//! * lattice cones, P-modules, their shift representations, dilations and
//!   opposite representations ([`lattice`]),
//! * the product system with fibres `Γ_a(Ker V_x^*)`, its two
//!   multiplications and the embedding into intertwiners ([`product_system`]),
//! * the CAR flow `β_x` as an endomorphism of the windowed operator algebra
//!   ([`car_flow`]),
//! * a JSON-configured experiment runner with deterministic reports
//!   ([`config`], [`report`], [`suite`]).
//!
//! Every truncated identity is checked under compression by an explicit
//! validity projection, so the checks are exact on the represented subspace.

pub mod car_flow;
pub mod config;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod product_system;
pub mod report;
pub mod rng;
pub mod suite;

pub use error::{Error, Result};
