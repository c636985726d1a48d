//! Material and cross-section data shared by every solver.

use crate::error::{ensure_finite, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which one-dimensional structural model a quantity belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    Rod,
    ConventionalBeam,
    InextensionalBeam,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ModelKind::Rod => "rod",
            ModelKind::ConventionalBeam => "conventional",
            ModelKind::InextensionalBeam => "inextensional",
        };
        f.write_str(s)
    }
}

/// Linear-elastic material. Poisson ratio is stored but must be exactly
/// zero; the kinematics assume uncoupled lateral contraction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaterialSpec {
    /// Elastic modulus [Pa].
    pub e: f64,
    /// Mass density [kg/m^3].
    pub rho: f64,
    /// Poisson ratio, fixed 0.
    pub nu: f64,
}

impl MaterialSpec {
    pub fn new(e: f64, rho: f64, nu: f64) -> Result<Self> {
        ensure_finite(e, "E")?;
        ensure_finite(rho, "rho")?;
        ensure_finite(nu, "nu")?;
        if e <= 0.0 {
            return Err(Error::invalid(format!("E must be > 0, got {e}")));
        }
        if rho <= 0.0 {
            return Err(Error::invalid(format!("rho must be > 0, got {rho}")));
        }
        if nu != 0.0 {
            return Err(Error::invalid(format!(
                "nu must be exactly 0 (lateral contraction is not modeled), got {nu}"
            )));
        }
        Ok(MaterialSpec { e, rho, nu })
    }

    /// E = rho = 1, the normalization used throughout the test suite
    /// (bar wave speed 1, nondimensional lengths).
    pub fn normalized() -> Self {
        MaterialSpec { e: 1.0, rho: 1.0, nu: 0.0 }
    }

    /// Bar wave speed c0 = sqrt(E/rho).
    pub fn bar_wave_speed(&self) -> f64 {
        (self.e / self.rho).sqrt()
    }
}

/// Cross-section properties. `j_f` and `j_c` are the higher-order area
/// moments that enter the finite-strain beam terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionProps {
    /// Nominal section radius [m].
    pub a: f64,
    /// Area [m^2].
    pub area: f64,
    /// Second area moment [m^4].
    pub j: f64,
    /// Fourth area moment [m^6].
    pub j_f: f64,
    /// Higher-order area product [m^6].
    pub j_c: f64,
    /// Radius of gyration sqrt(J/A) [m].
    pub r0: f64,
    /// sqrt(J_f/A) [m].
    pub r_f: f64,
}

impl SectionProps {
    /// Circular section of radius `a`:
    /// A = pi a^2, J = pi a^4/4, J_f = pi a^6/8, J_c = pi a^6/24.
    pub fn circular(a: f64) -> Result<Self> {
        ensure_finite(a, "a")?;
        if a <= 0.0 {
            return Err(Error::invalid(format!("section radius must be > 0, got {a}")));
        }
        let area = PI * a * a;
        let j = PI * a.powi(4) / 4.0;
        let j_f = PI * a.powi(6) / 8.0;
        let j_c = PI * a.powi(6) / 24.0;
        Self::from_raw(a, area, j, j_f, j_c)
    }

    /// Arbitrary section given directly by its moments. Keeps the door
    /// open for non-circular shapes; radii of gyration are derived.
    pub fn from_raw(a: f64, area: f64, j: f64, j_f: f64, j_c: f64) -> Result<Self> {
        for (v, name) in [(a, "a"), (area, "area"), (j, "J"), (j_f, "J_f"), (j_c, "J_c")] {
            ensure_finite(v, name)?;
            if v <= 0.0 {
                return Err(Error::invalid(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(SectionProps {
            a,
            area,
            j,
            j_f,
            j_c,
            r0: (j / area).sqrt(),
            r_f: (j_f / area).sqrt(),
        })
    }
}

/// One point of a dispersion curve: amplitude-dependent frequency at a
/// wavenumber, tagged with the model it came from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveSample {
    /// Wavenumber [1/m].
    pub kappa: f64,
    /// Wave amplitude [m].
    pub b: f64,
    /// Angular frequency [rad/s].
    pub omega: f64,
    pub model: ModelKind,
}
