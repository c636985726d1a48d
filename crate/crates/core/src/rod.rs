//! Closed-form finite-strain dispersion for longitudinal waves in a rod.
//!
//! With Green-Lagrange strain and a linear stress law, a traveling wave of
//! amplitude B at wavenumber kappa oscillates at
//!
//!   omega(kappa; B) = c0 |kappa| sqrt((2 + 3 B|kappa| + (B kappa)^2) / 2)
//!
//! which reduces to the nondispersive omega = c0 |kappa| as B -> 0 and lies
//! above it for every B|kappa| > 0.

use crate::error::{ensure_finite, Error, Result};
use crate::solve;

fn check_c0(c0: f64) -> Result<()> {
    ensure_finite(c0, "c0")?;
    if c0 <= 0.0 {
        return Err(Error::invalid(format!("c0 must be > 0, got {c0}")));
    }
    Ok(())
}

fn check_amplitude(b: f64) -> Result<()> {
    ensure_finite(b, "B")?;
    if b < 0.0 {
        return Err(Error::invalid(format!("amplitude B must be >= 0, got {b}")));
    }
    Ok(())
}

/// Finite-strain rod frequency. Even in `kappa`; equals `c0*|kappa|` at B = 0.
pub fn rod_omega(kappa: f64, b: f64, c0: f64) -> Result<f64> {
    ensure_finite(kappa, "kappa")?;
    check_amplitude(b)?;
    check_c0(c0)?;
    let k = kappa.abs();
    let bk = b * k;
    Ok(c0 * k * ((2.0 + 3.0 * bk + bk * bk) / 2.0).sqrt())
}

/// Infinitesimal-strain rod frequency c0*|kappa|.
pub fn rod_omega_inf(kappa: f64, c0: f64) -> Result<f64> {
    ensure_finite(kappa, "kappa")?;
    check_c0(c0)?;
    Ok(c0 * kappa.abs())
}

/// Analytic group velocity d omega / d kappa on the kappa > 0 branch.
///
/// Negative kappa is rejected here; map it by evenness at the call site.
pub fn rod_group_velocity(kappa: f64, b: f64, c0: f64) -> Result<f64> {
    ensure_finite(kappa, "kappa")?;
    check_amplitude(b)?;
    check_c0(c0)?;
    if kappa <= 0.0 {
        return Err(Error::invalid(format!(
            "group velocity needs kappa > 0 (map negative kappa by evenness), got {kappa}"
        )));
    }
    if b == 0.0 {
        return Ok(c0);
    }
    let omega = rod_omega(kappa, b, c0)?;
    // d(omega^2)/d kappa = c0^2 (2 kappa + 9/2 B kappa^2 + 2 B^2 kappa^3)
    let domega2 = c0 * c0 * (2.0 * kappa + 4.5 * b * kappa * kappa + 2.0 * b * b * kappa.powi(3));
    Ok(domega2 / (2.0 * omega))
}

/// Strain amplitude recovered from a frequency:
/// ubar = (-3 + sqrt(1 + 8 omega^2 / (c0 kappa)^2)) / 2.
///
/// Physical queries satisfy omega >= c0|kappa|, giving ubar >= 0; the raw
/// formula is exposed unchanged for values below that line (e.g. omega = 0
/// maps to -1).
pub fn rod_strain_amplitude(kappa: f64, omega: f64, c0: f64) -> Result<f64> {
    ensure_finite(kappa, "kappa")?;
    ensure_finite(omega, "omega")?;
    check_c0(c0)?;
    if kappa == 0.0 {
        return Err(Error::invalid("strain amplitude is undefined at kappa = 0".to_string()));
    }
    if omega < 0.0 {
        return Err(Error::invalid(format!("omega must be >= 0, got {omega}")));
    }
    let ratio = omega / (c0 * kappa);
    Ok((-3.0 + (1.0 + 8.0 * ratio * ratio).sqrt()) / 2.0)
}

/// Relative frequency shift in percent: 100 (omega_fin - omega_inf) / omega_inf.
///
/// Model-agnostic; beams reuse it for their deviation curves.
pub fn deviation_percent(omega_fin: f64, omega_inf: f64) -> Result<f64> {
    ensure_finite(omega_fin, "omega_fin")?;
    ensure_finite(omega_inf, "omega_inf")?;
    if omega_inf <= 0.0 {
        return Err(Error::invalid(format!(
            "deviation reference must be > 0, got {omega_inf}"
        )));
    }
    Ok(100.0 * (omega_fin - omega_inf) / omega_inf)
}

/// Inverts the rod dispersion relation: the unique kappa > 0 with
/// rod_omega(kappa, b, c0) = omega.
///
/// omega is strictly increasing in kappa, and omega >= c0 kappa, so the
/// root lies in (0, omega/c0].
pub fn invert_rod_dispersion(omega: f64, b: f64, c0: f64) -> Result<f64> {
    ensure_finite(omega, "omega")?;
    check_amplitude(b)?;
    check_c0(c0)?;
    if omega <= 0.0 {
        return Err(Error::invalid(format!("omega must be > 0, got {omega}")));
    }
    if b == 0.0 {
        return Ok(omega / c0);
    }
    let f = |k: f64| {
        let bk = b * k;
        c0 * k * ((2.0 + 3.0 * bk + bk * bk) / 2.0).sqrt() - omega
    };
    let hi = omega / c0;
    let flo = -omega; // f(0)
    let fhi = f(hi);
    solve::brent(f, 0.0, hi, flo, fhi, 1e-15)
}

/// A validated rod sweep request: one amplitude over an ordered kappa grid.
#[derive(Clone, Debug)]
pub struct RodDispersionQuery {
    pub c0: f64,
    pub b: f64,
    pub kappa_grid: Vec<f64>,
}

impl RodDispersionQuery {
    pub fn new(c0: f64, b: f64, kappa_grid: Vec<f64>) -> Result<Self> {
        check_c0(c0)?;
        check_amplitude(b)?;
        if kappa_grid.is_empty() {
            return Err(Error::invalid("kappa grid must be non-empty".to_string()));
        }
        for &k in &kappa_grid {
            ensure_finite(k, "kappa")?;
            if k <= 0.0 {
                return Err(Error::invalid(format!("kappa grid entries must be > 0, got {k}")));
            }
        }
        if !kappa_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("kappa grid must be strictly increasing".to_string()));
        }
        Ok(RodDispersionQuery { c0, b, kappa_grid })
    }
}
