//! Exact computations for toric symplectic manifolds: moment polytopes, probe
//! displacement of toric fibers, Newton-polygon valuations of superpotential
//! critical points, Dirac quasi-state shadows and subtorus reduction.

pub mod acceptance;
pub mod error;
pub mod linalg;
pub mod polytope;
pub mod potential;
pub mod probes;
pub mod quasistate;
pub mod rational;
pub mod reduction;
pub mod series;

pub use error::{Error, Result};
pub use rational::{rat, Point, Rational};
