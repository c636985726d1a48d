//! Finite-strain wave dispersion and statics for 1D elastic waveguides.
//!
//! The crate answers one physical question three ways: how does finite
//! (Green-Lagrange) strain shift the dynamics of slender elastic members
//! away from their textbook infinitesimal behavior?
//!
//! - [`rod`]: closed-form amplitude-dependent dispersion omega(kappa; B)
//!   for longitudinal rod waves, with group velocity and inversion.
//! - [`beam`]: dispersion for two transverse beam models (conventional and
//!   inextensional planar) obtained by bracketed root finding on exact
//!   residuals.
//! - [`fem`]: a nonlinear finite-element rod simulator that validates the
//!   rod relation in the time domain.
//! - [`statics`]: large-deflection static solutions (axially loaded rod,
//!   uniformly loaded cantilevers) for the same three models.
//!
//! Everything is deterministic; there is no randomness anywhere.

pub mod beam;
pub mod curve;
pub mod error;
pub mod fem;
pub mod model;
pub mod rod;
pub mod statics;

mod dual;
mod solve;

pub use beam::{BeamModelParams, PhasePointState, RotaryDivisor};
pub use curve::CurvePoint;
pub use error::{Error, Result};
pub use fem::{
    ElementKind, EnergySample, ExcitationKind, ExcitationProtocol, RodMesh, SimulationRecord,
};
pub use model::{MaterialSpec, ModelKind, SectionProps, WaveSample};
pub use statics::{
    ConvergenceReport, MomentDenominator, SectionState, StaticCase, StaticLoad, StaticSolution,
};
