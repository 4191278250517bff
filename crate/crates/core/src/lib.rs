//! Coined quantum walks, linear optical networks, and geometric measures of
//! entanglement.
//!
//! The library covers:
//!
//! - Fock-basis bookkeeping for `N` photons in `M` modes ([`fock`]);
//! - linear-optical-network unitaries and their state-space action via
//!   matrix permanents ([`lon`]);
//! - a fast single-walker coined-walk engine on the line and the circle
//!   ([`walk`]);
//! - the geometric measure of entanglement for generalized W states under
//!   arbitrary partitions, computed through separability-eigenvalue
//!   root finding ([`wstate`]);
//! - blockwise-Schmidt bipartite entanglement and genuine multipartite
//!   entanglement for multi-photon states ([`schmidt`]);
//! - closed-form coin-partition entanglement dynamics on the line
//!   ([`analytic`]);
//! - statistics over random-network ensembles ([`ensemble`]).

pub mod analytic;
pub mod ensemble;
pub mod error;
pub mod fock;
pub mod lon;
pub mod schmidt;
pub mod walk;
pub mod wstate;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
