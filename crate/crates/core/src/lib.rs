//! Dynamical Casimir effect in a SQUID-terminated coplanar waveguide.
//!
//! The crate synthesizes the SQUID flux drive that makes the effective
//! boundary of the waveguide follow one of three periodic relativistic
//! worldlines (sinusoidal motion, sinusoidal acceleration, alternating
//! uniform acceleration), and evaluates the first-order output photon
//! spectrum against a thermal input.
//!
//! Module map:
//!
//! * [`numerics`] - elliptic integrals, quadrature, root finding, Fourier series
//! * [`trajectories`] - closed-form worldline kinematics
//! * [`circuit`] - CPW/SQUID constants, drive synthesis, external flux, validity checks
//! * [`scattering`] - reflection, mode-conversion amplitudes, output spectrum
//! * [`experiments`] - parameter selection, sweeps, datasets and CSV
//! * [`cli`] - run configuration and command dispatch

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod cli;
pub mod constants;
pub mod error;
pub mod experiments;
pub mod numerics;
pub mod scattering;
pub mod trajectories;

pub use error::{Error, Result};
