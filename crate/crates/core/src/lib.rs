//! Coverage, secrecy and effective secrecy throughput of artificial-noise
//! assisted multi-antenna C-V2X networks.
//!
//! Roads form a Poisson line process, vehicular transmitters/receivers/Eves
//! are Cox processes on those roads, and cellular nodes are planar PPPs.
//! Two engines are provided:
//!
//! * an analytic engine ([`coverage`], [`secrecy`], [`throughput`]) built on
//!   the Laplace transforms in [`laplace`] and the quadrature in [`numerics`];
//! * a Monte Carlo engine ([`montecarlo`]) that samples the same network with
//!   [`pointprocess`] and serves as the reference for the analytic one.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. The `parallel` feature runs Monte Carlo trials on rayon.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod coverage;
mod error;
pub mod laplace;
mod math;
pub mod model;
pub mod montecarlo;
pub mod numerics;
pub mod pointprocess;
pub mod secrecy;
pub mod throughput;

pub use error::{Error, Result};
pub use model::{
    db_to_linear, derive_constants, linear_to_db, DerivedConstants, NetworkParams, Thresholds,
};
