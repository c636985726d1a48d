//! Static rod under axial load: exact integration.
//!
//! The axial balance integrates once, so the resultant N(s) is known in
//! closed form from the loads beyond s, and the stretch h = 1 + u' at any
//! station is the physical root of h^3 - h = 2 N / (E A). Displacement
//! follows by quadrature; no iteration is involved.

use super::{ConvergenceReport, SectionState, StaticCase, StaticLoad, StaticSolution};
use crate::error::{Error, Result};
use crate::model::ModelKind;

/// Compressive normalized-force magnitude at the fold: the cubic loses its
/// physical branch below 2 N / (E A) = -2 / (3 sqrt 3).
const CUBIC_FOLD: f64 = 0.38490017945975052; // 2 / (3 sqrt 3)

/// Physical branch of h^3 - h = c: the root continuing from h = 1 at
/// c = 0, always >= 1/sqrt(3). None when c is beyond the fold.
fn stretch_root(c: f64) -> Option<f64> {
    if !c.is_finite() {
        return None;
    }
    if c < -CUBIC_FOLD * (1.0 + 4.0 * f64::EPSILON) {
        return None;
    }
    let scaled = (c / CUBIC_FOLD).clamp(-1.0, f64::INFINITY);
    let mut h = if scaled <= 1.0 {
        // three real roots; the largest is 2/sqrt(3) cos(theta/3)
        let theta = scaled.clamp(-1.0, 1.0).acos();
        2.0 / 3.0f64.sqrt() * (theta / 3.0).cos()
    } else {
        2.0 / 3.0f64.sqrt() * (scaled.acosh() / 3.0).cosh()
    };
    // Newton polish to machine accuracy where the root is well conditioned
    for _ in 0..2 {
        let slope = 3.0 * h * h - 1.0;
        if slope.abs() < 0.05 {
            break;
        }
        h -= (h * h * h - h - c) / slope;
    }
    Some(h)
}

struct AxialLoadProfile {
    /// Distributed part: N/EA contribution w * (1 - xi).
    w: f64,
    /// End-force part: constant N/EA contribution.
    p: f64,
}

impl AxialLoadProfile {
    fn resultant(&self, xi: f64) -> f64 {
        self.p + self.w * (1.0 - xi)
    }
}

/// Solve the static rod case. Fixed at s = 0; the end condition is the
/// tip force (zero for the uniform-load case).
pub fn solve_rod_static(case: &StaticCase) -> Result<StaticSolution> {
    if case.model != ModelKind::Rod {
        return Err(Error::invalid(format!(
            "solve_rod_static got model {}",
            case.model
        )));
    }
    // gravity hangs the rod along +s: adds rho g L / E of distributed load
    let grav = case.material.rho * case.gravity * case.length / case.material.e;
    let profile = match case.load {
        StaticLoad::UniformAxial { value } => AxialLoadProfile { w: value + grav, p: 0.0 },
        StaticLoad::TipForce { value } => AxialLoadProfile { w: grav, p: value },
        StaticLoad::UniformTransverse { .. } => {
            return Err(Error::invalid("rod statics take axial loads".to_string()));
        }
    };

    let n = case.resolution;
    let last = (n - 1) as f64;
    let mut s_over_l = Vec::with_capacity(n);
    let mut stretch = Vec::with_capacity(n);
    let mut defect: f64 = 0.0;
    for i in 0..n {
        let xi = i as f64 / last;
        let c = 2.0 * profile.resultant(xi);
        let h = stretch_root(c).ok_or_else(|| {
            Error::LoadLimit(format!(
                "compressive axial force N/EA = {:.6} at s/L = {xi:.4} is beyond the \
                 static fold -1/(3 sqrt 3); no equilibrium stretch exists",
                profile.resultant(xi)
            ))
        })?;
        defect = defect.max((h * h * h - h - c).abs());
        s_over_l.push(xi);
        stretch.push(h);
    }

    // u(xi) = integral of (h - 1): 3-point Gauss per interval, evaluating
    // the stretch at interior quadrature points through the same cubic
    const GW: [(f64, f64); 3] = [
        (-0.7745966692414834, 0.5555555555555556),
        (0.0, 0.8888888888888888),
        (0.7745966692414834, 0.5555555555555556),
    ];
    let dlt = 1.0 / last;
    let mut u_over_l = Vec::with_capacity(n);
    u_over_l.push(0.0);
    let mut acc = 0.0;
    for i in 1..n {
        let mid = (i as f64 - 0.5) * dlt;
        let mut inc = 0.0;
        for (t, w) in GW {
            let xi = mid + 0.5 * dlt * t;
            let c = 2.0 * profile.resultant(xi);
            let h = stretch_root(c).ok_or_else(|| {
                Error::LoadLimit(format!(
                    "compressive axial force at quadrature point s/L = {xi:.4} is beyond the static fold"
                ))
            })?;
            inc += w * (h - 1.0);
        }
        acc += 0.5 * dlt * inc;
        u_over_l.push(acc);
    }

    Ok(StaticSolution {
        s_over_l,
        u_over_l: u_over_l.clone(),
        v_over_l: vec![0.0; n],
        axial_stretch: stretch,
        tip_u_over_l: *u_over_l.last().unwrap(),
        tip_v_over_l: 0.0,
        tip_state: SectionState { v_p: 0.0, v_pp: 0.0, v_ppp: 0.0 },
        report: ConvergenceReport {
            iterations: 0,
            residual_norm: defect / 2.0,
            tolerance: 1e-14,
            continuation_steps: 1,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MaterialSpec, SectionProps};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn rod_case(load: StaticLoad) -> StaticCase {
        StaticCase::new(
            ModelKind::Rod,
            MaterialSpec::normalized(),
            SectionProps::circular(0.1).unwrap(),
            1.0,
            load,
        )
        .unwrap()
    }

    #[test]
    fn zero_load_is_identity() {
        let sol = solve_rod_static(&rod_case(StaticLoad::UniformAxial { value: 0.0 })).unwrap();
        assert!(sol.u_over_l.iter().all(|&u| u == 0.0));
        assert!(sol.axial_stretch.iter().all(|&h| h == 1.0));
    }

    #[test]
    fn tip_force_uniform_stretch_oracle() {
        // frozen from a 50-digit solve of h^3 - h = 0.4
        let sol = solve_rod_static(&rod_case(StaticLoad::TipForce { value: 0.2 })).unwrap();
        let up = 0.15970485276486176;
        for (&h, (&xi, &u)) in sol
            .axial_stretch
            .iter()
            .zip(sol.s_over_l.iter().zip(&sol.u_over_l))
        {
            assert_relative_eq!(h - 1.0, up, max_relative = 1e-14);
            assert!((u - up * xi).abs() < 1e-14, "u({xi}) = {u}");
        }
        assert_relative_eq!(sol.tip_u_over_l, up, max_relative = 1e-13);
    }

    #[test]
    fn linear_limit_matches_closed_form() {
        // u(s) = (q_u/EA)(L s - s^2/2), normalized: w (xi - xi^2/2)
        let w = 1e-6;
        let sol = solve_rod_static(&rod_case(StaticLoad::UniformAxial { value: w })).unwrap();
        for (&xi, &u) in sol.s_over_l.iter().zip(&sol.u_over_l) {
            let lin = w * (xi - 0.5 * xi * xi);
            assert!((u - lin).abs() < 1e-8, "u({xi}) = {u} vs {lin}");
        }
    }

    #[test]
    fn equilibrium_holds_pointwise() {
        // the implied resultant (h^3 - h)/2 must differentiate back to the
        // applied load: central differences on the reported stretch grid
        let w = 0.3;
        let sol = solve_rod_static(&rod_case(StaticLoad::UniformAxial { value: w })).unwrap();
        let n = sol.axial_stretch.len();
        let dlt = 1.0 / (n as f64 - 1.0);
        for i in 1..n - 1 {
            let nim = (sol.axial_stretch[i - 1].powi(3) - sol.axial_stretch[i - 1]) / 2.0;
            let nip = (sol.axial_stretch[i + 1].powi(3) - sol.axial_stretch[i + 1]) / 2.0;
            let slope = (nip - nim) / (2.0 * dlt);
            assert!((slope + w).abs() < 1e-8, "equilibrium defect {} at node {i}", slope + w);
        }
        assert!(sol.report.residual_norm < 1e-14);
    }

    #[test]
    fn compressive_fold_is_a_load_limit() {
        let sol = solve_rod_static(&rod_case(StaticLoad::TipForce { value: -0.19 }));
        assert!(sol.is_ok(), "just inside the fold must solve");
        let err = solve_rod_static(&rod_case(StaticLoad::TipForce { value: -0.20 })).unwrap_err();
        assert!(matches!(err, Error::LoadLimit(_)), "got {err:?}");
    }

    #[test]
    fn gravity_adds_distributed_load() {
        // with E = rho = L = 1 and g = w, gravity reproduces the uniform case
        let via_load = solve_rod_static(&rod_case(StaticLoad::UniformAxial { value: 0.05 })).unwrap();
        let via_gravity = solve_rod_static(
            &rod_case(StaticLoad::UniformAxial { value: 0.0 })
                .with_gravity(0.05)
                .unwrap(),
        )
        .unwrap();
        for (a, b) in via_load.u_over_l.iter().zip(&via_gravity.u_over_l) {
            assert_eq!(a, b);
        }
    }

    proptest! {
        #[test]
        fn tension_softens_vs_linear(p in 1e-4f64..0.3) {
            // finite-strain stiffening: same force produces less stretch
            // than the linear relation u' = N/EA predicts
            let sol = solve_rod_static(&rod_case(StaticLoad::TipForce { value: p })).unwrap();
            prop_assert!(sol.tip_u_over_l < p);
            prop_assert!(sol.tip_u_over_l > 0.0);
        }

        #[test]
        fn stretch_root_solves_cubic(c in -0.384f64..5.0) {
            let h = stretch_root(c).unwrap();
            prop_assert!(h > 1.0 / 3.0f64.sqrt() - 1e-9);
            prop_assert!((h * h * h - h - c).abs() < 1e-12 * c.abs().max(1.0));
        }
    }
}
