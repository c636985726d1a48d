//! Dispersion-curve sampling: one row per wavenumber with the finite and
//! infinitesimal frequencies, group velocity, and percent deviation.
//!
//! Points are independent, so callers may evaluate them in parallel; the
//! functions here are pure and deterministic.

use crate::beam::{self, BeamModelParams};
use crate::error::{ensure_finite, Error, Result};
use crate::model::ModelKind;
use crate::rod;
use serde::{Deserialize, Serialize};

/// One sampled curve row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub kappa: f64,
    pub omega: f64,
    pub omega_inf: f64,
    pub c_g: f64,
    pub deviation_pct: f64,
}

/// Inclusive uniform grid with `count` points from `start` to `stop`.
/// `count == 1` needs `start == stop`.
pub fn uniform_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    ensure_finite(start, "grid start")?;
    ensure_finite(stop, "grid stop")?;
    if count == 0 {
        return Err(Error::invalid("grid count must be >= 1".to_string()));
    }
    if start < 0.0 {
        return Err(Error::invalid(format!("grid start must be >= 0, got {start}")));
    }
    if stop < start {
        return Err(Error::invalid(format!("grid stop {stop} is below start {start}")));
    }
    if count == 1 {
        if stop != start {
            return Err(Error::invalid(
                "a 1-point grid needs start == stop".to_string(),
            ));
        }
        return Ok(vec![start]);
    }
    let span = stop - start;
    let last = (count - 1) as f64;
    Ok((0..count).map(|i| start + span * i as f64 / last).collect())
}

/// Rod curve row. kappa == 0 is filled with its limits
/// (omega = omega_inf = 0, c_g -> c0, deviation -> 0).
pub fn rod_point(c0: f64, b: f64, kappa: f64) -> Result<CurvePoint> {
    ensure_finite(kappa, "kappa")?;
    if kappa < 0.0 {
        return Err(Error::invalid(format!("kappa must be >= 0, got {kappa}")));
    }
    if kappa == 0.0 {
        return Ok(CurvePoint {
            kappa,
            omega: 0.0,
            omega_inf: 0.0,
            c_g: c0,
            deviation_pct: 0.0,
        });
    }
    let omega = rod::rod_omega(kappa, b, c0)?;
    let omega_inf = rod::rod_omega_inf(kappa, c0)?;
    let c_g = rod::rod_group_velocity(kappa, b, c0)?;
    let deviation_pct = rod::deviation_percent(omega, omega_inf)?;
    Ok(CurvePoint { kappa, omega, omega_inf, c_g, deviation_pct })
}

/// Beam curve row (conventional or inextensional). kappa == 0 is filled
/// with its limits (everything 0: beam group velocity vanishes with kappa).
pub fn beam_point(model: ModelKind, b: f64, kappa: f64, params: &BeamModelParams) -> Result<CurvePoint> {
    ensure_finite(kappa, "kappa")?;
    if kappa < 0.0 {
        return Err(Error::invalid(format!("kappa must be >= 0, got {kappa}")));
    }
    if kappa == 0.0 {
        return Ok(CurvePoint {
            kappa,
            omega: 0.0,
            omega_inf: 0.0,
            c_g: 0.0,
            deviation_pct: 0.0,
        });
    }
    let c0 = params.material.bar_wave_speed();
    let r0 = params.section.r0;
    let omega = beam::beam_omega(model, kappa, b, params)?;
    let omega_inf = beam::beam_omega_inf(kappa, c0, r0)?;
    // shrink the stencil near kappa -> 0 so the lower evaluation stays valid
    let h = (1e-6 * kappa.max(1.0)).min(kappa / 4.0);
    let c_g = beam::group_velocity_fd_with_step(model, kappa, b, params, h)?;
    let deviation_pct = rod::deviation_percent(omega, omega_inf)?;
    Ok(CurvePoint { kappa, omega, omega_inf, c_g, deviation_pct })
}
