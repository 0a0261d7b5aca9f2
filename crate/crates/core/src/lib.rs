//! Simulation of closed space curves moving by curvature and binormal
//! velocity, coupled through Biot-Savart interaction.
//!
//! Each curve is a polygon whose nodes move by a flowing finite-volume
//! discretization. Nodes are redistributed tangentially to keep their relative
//! spacing, and the resulting ODE system is integrated with an adaptive
//! Runge-Kutta-Merson scheme. Gauss linking numbers serve as a topological
//! diagnostic.

pub mod checks;
pub mod cli;
pub mod config;
pub mod curves;
pub mod error;
pub mod forces;
pub mod geometry;
pub mod integrator;
pub mod io;
pub mod redistribution;
pub mod scheme;
pub mod sim;
pub mod topology;

pub use error::{Error, Result};
pub use geometry::{compute_geometry, resample_uniform, CurveGeometry, DiscreteCurve, Vec3};
