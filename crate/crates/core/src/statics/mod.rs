//! Static (inertia-free) finite-deformation solutions: a rod under axial
//! load and clamped-free cantilevers under uniform transverse load, all
//! three sharing one case/solution vocabulary.
//!
//! The rod problem integrates exactly: the axial force balance reduces to
//! one cubic per grid point. The beam problems are genuinely nonlinear
//! boundary-value problems and go through damped Newton iteration on a
//! central-difference collocation system with ghost points.

mod band;
mod beam;
mod rod;

pub use beam::solve_beam_static;
pub use rod::solve_rod_static;

use crate::error::{ensure_finite, Error, Result};
use crate::model::{MaterialSpec, ModelKind, SectionProps};
use serde::{Deserialize, Serialize};

/// Normalized load on a static case.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StaticLoad {
    /// Rod: uniform axial load, value q_u L / (E A).
    UniformAxial { value: f64 },
    /// Rod: end force, value P / (E A).
    TipForce { value: f64 },
    /// Beam: uniform transverse load, value q_v L^3 / (8 E J).
    /// Negative values deflect toward negative v.
    UniformTransverse { value: f64 },
}

impl StaticLoad {
    pub fn value(&self) -> f64 {
        match *self {
            StaticLoad::UniformAxial { value }
            | StaticLoad::TipForce { value }
            | StaticLoad::UniformTransverse { value } => value,
        }
    }
}

/// Switch for the inextensional bending-moment denominator. The default
/// keeps (1 - v')^2; the corrected variant uses the (1 - v'^2) pattern of
/// every sibling term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum MomentDenominator {
    #[default]
    Printed,
    Corrected,
}

/// One static problem: geometry, material, load, and solver resolution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaticCase {
    pub model: ModelKind,
    pub material: MaterialSpec,
    pub section: SectionProps,
    /// Member length [m].
    pub length: f64,
    pub load: StaticLoad,
    /// Gravitational acceleration magnitude [m/s^2], default 0. Acts along
    /// +s for the rod (hanging configuration) and toward negative v for
    /// the beams, adding to the distributed load in either case.
    pub gravity: f64,
    /// Collocation / reconstruction points, default 200.
    pub resolution: usize,
    /// Conventional beam only: drop the axial-stiffness (EA) term from the
    /// equation of motion to probe its influence.
    pub drop_ea_term: bool,
    pub moment_denominator: MomentDenominator,
}

pub const DEFAULT_STATIC_RESOLUTION: usize = 200;

impl StaticCase {
    pub fn new(
        model: ModelKind,
        material: MaterialSpec,
        section: SectionProps,
        length: f64,
        load: StaticLoad,
    ) -> Result<Self> {
        ensure_finite(length, "length")?;
        ensure_finite(load.value(), "load value")?;
        if length <= 0.0 {
            return Err(Error::invalid(format!("length must be > 0, got {length}")));
        }
        let load_is_axial = matches!(load, StaticLoad::UniformAxial { .. } | StaticLoad::TipForce { .. });
        if (model == ModelKind::Rod) != load_is_axial {
            return Err(Error::invalid(format!(
                "load {load:?} does not apply to model {model}"
            )));
        }
        Ok(StaticCase {
            model,
            material,
            section,
            length,
            load,
            gravity: 0.0,
            resolution: DEFAULT_STATIC_RESOLUTION,
            drop_ea_term: false,
            moment_denominator: MomentDenominator::default(),
        })
    }

    pub fn with_gravity(mut self, gravity: f64) -> Result<Self> {
        ensure_finite(gravity, "gravity")?;
        if gravity < 0.0 {
            return Err(Error::invalid(format!("gravity magnitude must be >= 0, got {gravity}")));
        }
        self.gravity = gravity;
        Ok(self)
    }

    pub fn with_resolution(mut self, resolution: usize) -> Result<Self> {
        if resolution < 50 {
            return Err(Error::invalid(format!(
                "resolution must be >= 50 collocation points, got {resolution}"
            )));
        }
        self.resolution = resolution;
        Ok(self)
    }

    pub fn with_drop_ea_term(mut self, drop: bool) -> Self {
        self.drop_ea_term = drop;
        self
    }

    pub fn with_moment_denominator(mut self, d: MomentDenominator) -> Self {
        self.moment_denominator = d;
        self
    }
}

/// Solver bookkeeping attached to every solution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// Accepted Newton updates (0 for the direct rod solve).
    pub iterations: usize,
    /// Max-norm of the final discrete residual, in the solver's
    /// normalized units.
    pub residual_norm: f64,
    /// Acceptance tolerance the final residual met.
    pub tolerance: f64,
    /// Load-continuation steps taken (1 means direct).
    pub continuation_steps: usize,
}

/// Deflection derivatives at one arclength station, in physical units:
/// v' [-], v'' [1/m], v''' [1/m^2].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionState {
    pub v_p: f64,
    pub v_pp: f64,
    pub v_ppp: f64,
}

/// Converged static fields on the arclength grid, all normalized by L.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaticSolution {
    pub s_over_l: Vec<f64>,
    /// Axial displacement. Zero for the conventional beam, whose reduced
    /// equation condenses the axial field away; recovered from the
    /// constraint for the inextensional beam.
    pub u_over_l: Vec<f64>,
    /// Transverse deflection. Zero for the rod.
    pub v_over_l: Vec<f64>,
    /// Rod only: centerline stretch ratio h = 1 + u' per grid point
    /// (empty for beams). Kept so equilibrium can be re-checked without
    /// differentiating the displacement field.
    pub axial_stretch: Vec<f64>,
    pub tip_u_over_l: f64,
    pub tip_v_over_l: f64,
    /// Free-end deflection derivatives (beams; zeros for the rod).
    pub tip_state: SectionState,
    pub report: ConvergenceReport,
}

/// Transverse shear-like and bending-moment section loads (B2, B2bar)
/// for a beam model at one station. Both vanish at a free end.
pub fn section_loads(
    model: ModelKind,
    material: &MaterialSpec,
    section: &SectionProps,
    state: &SectionState,
    moment_denominator: MomentDenominator,
) -> Result<(f64, f64)> {
    ensure_finite(state.v_p, "v'")?;
    ensure_finite(state.v_pp, "v''")?;
    ensure_finite(state.v_ppp, "v'''")?;
    let e = material.e;
    let (area, j, jf) = (section.area, section.j, section.j_f);
    let vp = state.v_p;
    let vpp = state.v_pp;
    let vppp = state.v_ppp;
    match model {
        ModelKind::ConventionalBeam => {
            let r2 = 1.0 + vp * vp;
            let moment = e * jf * vpp.powi(3) / (2.0 * r2.powi(4))
                - e * j * (1.0 - 3.0 * r2) * vpp / (2.0 * r2 * r2);
            let cvp = 0.5 * e * area * vp.powi(3)
                + e * j * (2.0 - 3.0 * r2) * vp * vpp * vpp / (2.0 * r2.powi(3))
                - e * jf * vp * vpp.powi(4) / r2.powi(5);
            let dcvpp = e * jf * (3.0 * vpp * vpp * vppp / (2.0 * r2.powi(4)) - 4.0 * vp * vpp.powi(4) / r2.powi(5))
                - 0.5 * e * j
                    * (-6.0 * vp * vpp * vpp / (r2 * r2) + (1.0 - 3.0 * r2) * vppp / (r2 * r2)
                        - 4.0 * (1.0 - 3.0 * r2) * vp * vpp * vpp / r2.powi(3));
            Ok((cvp - dcvpp, moment))
        }
        ModelKind::InextensionalBeam => {
            if vp.abs() >= 1.0 {
                return Err(Error::SlopeLimit(format!(
                    "inextensional section loads need |v'| < 1, got {vp}"
                )));
            }
            let m2 = 1.0 - vp * vp;
            let den = match moment_denominator {
                MomentDenominator::Printed => (1.0 - vp) * (1.0 - vp),
                MomentDenominator::Corrected => m2,
            };
            let moment = e * j * vpp + e * jf * vpp.powi(3) / (2.0 * den);
            let shear = -e * j * vp * vpp * vpp / (m2 * m2) - e * j * vppp / m2
                - e * jf * (3.0 * vpp * vpp * vppp / (2.0 * m2) + 3.0 * vp * vpp.powi(4) / (2.0 * m2.powi(3)));
            Ok((shear, moment))
        }
        ModelKind::Rod => Err(Error::invalid("section loads are defined for beam models".to_string())),
    }
}
