//! Clamped-free cantilever under uniform transverse load, conventional and
//! inextensional models: damped Newton on a nondimensional central-difference
//! collocation system with ghost points, plus load continuation.
//!
//! Unknowns x[j] = v_{j-1}/L at xi = (j-1) dlt, j = 0..n+2: one ghost
//! before the clamp and two past the free end so every row keeps its
//! centered stencil. Rows: clamp slope, clamp value, the interior equation
//! at nodes 1..n-1 (free end included), then free-end moment and shear.
//!
//! The Jacobian is exact (dual numbers, columns grouped stride 8 into a
//! banded matrix): finite differences of the dlt^-4 stencil terms lose too
//! many digits to cancellation and stall the iteration at small loads.
//! Residual acceptance is noise-aware for the same reason: each row
//! carries an evaluation floor of roughly eps * |v| / dlt^4.

use super::band::BandedMatrix;
use super::{ConvergenceReport, MomentDenominator, SectionState, StaticCase, StaticLoad, StaticSolution};
use crate::dual::{Dual, Num};
use crate::error::{Error, Result};
use crate::model::ModelKind;

#[derive(Clone, Copy, PartialEq)]
enum BeamKind {
    Conventional { drop_ea: bool },
    Inextensional,
}

struct Ctx {
    kind: BeamKind,
    lam_a: f64,
    lam_f: f64,
    printed_moment: bool,
    n: usize,
    dlt: f64,
}

fn powi<T: Num>(x: T, p: u32) -> T {
    let mut acc = x;
    for _ in 1..p {
        acc = acc * x;
    }
    acc
}

struct Derivs<T> {
    vp: T,
    vpp: T,
    vppp: T,
    vpppp: T,
}

/// Centered stencils at node i (x[j] = v_{j-1}).
fn derivs<T: Num>(x: &[T], i: usize, dlt: f64) -> Derivs<T> {
    let d2 = dlt * dlt;
    let d3 = 2.0 * d2 * dlt;
    let d4 = d2 * d2;
    Derivs {
        vp: (x[i + 2] - x[i]) * (1.0 / (2.0 * dlt)),
        vpp: (x[i + 2] - x[i + 1] * 2.0 + x[i]) * (1.0 / d2),
        vppp: (x[i + 3] - x[i + 2] * 2.0 + x[i] * 2.0 - x[i - 1]) * (1.0 / d3),
        vpppp: (x[i + 3] - x[i + 2] * 4.0 + x[i + 1] * 6.0 - x[i] * 4.0 + x[i - 1]) * (1.0 / d4),
    }
}

fn f_conv<T: Num>(d: &Derivs<T>, lam_a: f64, lam_f: f64, drop_ea: bool) -> T {
    let one = T::from_f64(1.0);
    let (vp, vpp, vppp, vpppp) = (d.vp, d.vpp, d.vppp, d.vpppp);
    let vp2 = vp * vp;
    let r2 = one + vp2;
    let mut t = if drop_ea { T::from_f64(0.0) } else { vp2 * vpp * (1.5 * lam_a) };
    t = t + vp * (one + vp2 * 3.0) * vpp * vppp * 2.0 / powi(r2, 3);
    t = t - (T::from_f64(2.0) + vp2 * 3.0) * vpppp / (powi(r2, 2) * 2.0);
    t = t + (one + vp2 * 4.0 - vp2 * vp2 * 9.0) * powi(vpp, 3) / (powi(r2, 4) * 2.0);
    t = t + (-(vpp * vpp * vpppp * 3.0) / (powi(r2, 4) * 2.0)
        + vp * powi(vpp, 3) * vppp * 24.0 / powi(r2, 5)
        + (one - vp2 * 9.0) * powi(vpp, 5) * 3.0 / powi(r2, 6)
        - vpp * vppp * vppp * 3.0 / powi(r2, 4))
        * lam_f;
    t
}

fn f_inex<T: Num>(d: &Derivs<T>, lam_f: f64) -> T {
    let one = T::from_f64(1.0);
    let (vp, vpp, vppp, vpppp) = (d.vp, d.vpp, d.vppp, d.vpppp);
    let vp2 = vp * vp;
    let m2 = one - vp2;
    if m2.re() <= 0.0 {
        return T::from_f64(f64::NAN);
    }
    let mut t = -vpppp / m2 - vp * vpp * vppp * 4.0 / (m2 * m2) - (one + vp2 * 3.0) * powi(vpp, 3) / powi(m2, 3);
    t = t + (-(vpp * vpp * vpppp * 3.0) / (powi(m2, 2) * 2.0)
        - vp * powi(vpp, 3) * vppp * 12.0 / powi(m2, 3)
        - (one + vp2 * 5.0) * powi(vpp, 5) * 3.0 / (powi(m2, 4) * 2.0)
        - vpp * vppp * vppp * 3.0 / powi(m2, 2))
        * lam_f;
    t
}

/// Free-end moment and shear rows, conventional model.
fn bc_conv<T: Num>(vp: T, vpp: T, vppp: T, lam_a: f64, lam_f: f64) -> (T, T) {
    let one = T::from_f64(1.0);
    let vp2 = vp * vp;
    let r2 = one + vp2;
    let one_m3r2 = one - r2 * 3.0;
    let moment = powi(vpp, 3) * lam_f / (powi(r2, 4) * 2.0) - one_m3r2 * vpp / (powi(r2, 2) * 2.0);
    let cvp = powi(vp, 3) * (0.5 * lam_a) + (T::from_f64(2.0) - r2 * 3.0) * vp * vpp * vpp / (powi(r2, 3) * 2.0)
        - vp * powi(vpp, 4) * lam_f / powi(r2, 5);
    let dcvpp = (vpp * vpp * vppp * 3.0 / (powi(r2, 4) * 2.0) - vp * powi(vpp, 4) * 4.0 / powi(r2, 5)) * lam_f
        - (-(vp * vpp * vpp * 6.0) / (r2 * r2) + one_m3r2 * vppp / (r2 * r2)
            - one_m3r2 * vp * vpp * vpp * 4.0 / powi(r2, 3))
            * 0.5;
    (moment, cvp - dcvpp)
}

/// Free-end moment and shear rows, inextensional model. The moment
/// denominator is (1 - v')^2 by default, (1 - v'^2) when corrected.
fn bc_inex<T: Num>(vp: T, vpp: T, vppp: T, lam_f: f64, printed: bool) -> (T, T) {
    let one = T::from_f64(1.0);
    let m2 = one - vp * vp;
    let den = if printed { (one - vp) * (one - vp) } else { m2 };
    let moment = vpp + powi(vpp, 3) * lam_f / (den * 2.0);
    let shear = -(vp * vpp * vpp) / (m2 * m2) - vppp / m2
        - (vpp * vpp * vppp * 3.0 / (m2 * 2.0) + vp * powi(vpp, 4) * 3.0 / (powi(m2, 3) * 2.0)) * lam_f;
    (moment, shear)
}

fn residual_into<T: Num>(x: &[T], q8: f64, ctx: &Ctx, r: &mut [T]) {
    let n = ctx.n;
    let dlt = ctx.dlt;
    r[0] = (x[2] - x[0]) * (1.0 / (2.0 * dlt));
    r[1] = x[1];
    for i in 1..n {
        let d = derivs(x, i, dlt);
        let f = match ctx.kind {
            BeamKind::Conventional { drop_ea } => f_conv(&d, ctx.lam_a, ctx.lam_f, drop_ea),
            BeamKind::Inextensional => f_inex(&d, ctx.lam_f),
        };
        r[1 + i] = f + T::from_f64(q8);
    }
    let d = derivs(x, n - 1, dlt);
    let (moment, shear) = match ctx.kind {
        BeamKind::Conventional { .. } => bc_conv(d.vp, d.vpp, d.vppp, ctx.lam_a, ctx.lam_f),
        BeamKind::Inextensional => bc_inex(d.vp, d.vpp, d.vppp, ctx.lam_f, ctx.printed_moment),
    };
    r[n + 1] = moment;
    r[n + 2] = shear;
}

/// Max-norm that propagates non-finite entries instead of ignoring them.
fn max_abs(r: &[f64]) -> f64 {
    let mut m = 0.0f64;
    for &v in r {
        if !v.is_finite() {
            return f64::NAN;
        }
        if v.abs() > m {
            m = v.abs();
        }
    }
    m
}

/// Exact Jacobian: dual-number evaluation with columns grouped stride 8.
/// Column c only touches rows c-2..c+4, so groups eight apart never share
/// a row and one sweep costs eight residual evaluations.
fn colored_jacobian(x: &[f64], q8: f64, ctx: &Ctx, jac: &mut BandedMatrix, xd: &mut [Dual], rd: &mut [Dual]) {
    let m = x.len();
    jac.reset();
    for (d, &v) in xd.iter_mut().zip(x) {
        *d = Dual::con(v);
    }
    for color in 0..8 {
        let mut j = color;
        while j < m {
            xd[j] = Dual::var(x[j]);
            j += 8;
        }
        residual_into(xd, q8, ctx, rd);
        let mut c = color;
        while c < m {
            let lo = c.saturating_sub(2);
            let hi = (c + 5).min(m);
            for i in lo..hi {
                jac.set(i, c, rd[i].du);
            }
            xd[c] = Dual::con(x[c]);
            c += 8;
        }
    }
}

/// Residual rows lose about eps * |v| to stencil cancellation, amplified
/// by dlt^-4, so acceptance cannot be tighter than that evaluation floor.
fn newton_tol(x: &[f64], n: usize, q8: f64) -> f64 {
    let xmax = x.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let floor = 32.0 * f64::EPSILON * xmax.max(1e-6) * ((n - 1) as f64).powi(4);
    (1e-9 * q8.abs().max(1.0)).max(4.0 * floor)
}

fn max_abs_slope(x: &[f64], n: usize, dlt: f64) -> f64 {
    let mut m = 0.0f64;
    for i in 0..n {
        let vp = (x[i + 2] - x[i]) / (2.0 * dlt);
        m = m.max(vp.abs());
    }
    m
}

const CONTINUATION_STEPS: usize = 20;
const MAX_NEWTON_ITERATIONS: usize = 100;

/// Solve a clamped-free cantilever case under uniform transverse load.
pub fn solve_beam_static(case: &StaticCase) -> Result<StaticSolution> {
    let kind = match case.model {
        ModelKind::ConventionalBeam => BeamKind::Conventional { drop_ea: case.drop_ea_term },
        ModelKind::InextensionalBeam => {
            if case.drop_ea_term {
                return Err(Error::invalid(
                    "drop_ea_term applies to the conventional beam only".to_string(),
                ));
            }
            BeamKind::Inextensional
        }
        ModelKind::Rod => {
            return Err(Error::invalid(format!("solve_beam_static got model {}", case.model)));
        }
    };
    let qbar = match case.load {
        StaticLoad::UniformTransverse { value } => value,
        _ => return Err(Error::invalid("beam statics take a uniform transverse load".to_string())),
    };
    let l = case.length;
    let (e, rho) = (case.material.e, case.material.rho);
    let (area, j) = (case.section.area, case.section.j);
    // gravity acts toward negative v, adding to the normalized load
    let qbar_eff = qbar - rho * area * case.gravity * l.powi(3) / (8.0 * e * j);

    let n = case.resolution;
    let m = n + 3;
    let dlt = 1.0 / (n as f64 - 1.0);
    let ctx = Ctx {
        kind,
        lam_a: (l / case.section.r0).powi(2),
        lam_f: case.section.j_f / (case.section.j * l * l),
        printed_moment: case.moment_denominator == MomentDenominator::Printed,
        n,
        dlt,
    };

    let mut x = vec![0.0f64; m];
    let mut r = vec![0.0f64; m];
    let mut xd = vec![Dual::con(0.0); m];
    let mut rd = vec![Dual::con(0.0); m];
    let mut jac = BandedMatrix::new(m, 4, 2);
    let mut total_updates = 0usize;
    let mut final_rn = 0.0f64;
    let mut final_tol = 0.0f64;

    let fail = |x: &[f64], rn: f64, tol: f64, kstep: usize| -> Error {
        if kind == BeamKind::Inextensional && max_abs_slope(x, n, dlt) >= 0.999 {
            Error::SlopeLimit(format!(
                "inextensional cantilever slope reached 1 during continuation step {kstep} \
                 (load magnitude too large for this model)"
            ))
        } else {
            Error::Convergence(format!(
                "newton stalled at continuation step {kstep}: |r| = {rn:.3e}, tol = {tol:.3e}"
            ))
        }
    };

    for kstep in 1..=CONTINUATION_STEPS {
        let q8 = 8.0 * (qbar_eff * kstep as f64 / CONTINUATION_STEPS as f64);
        if kstep == 1 {
            for (jx, v) in x.iter_mut().enumerate() {
                let c = (jx as f64 - 1.0) * dlt;
                *v = q8 * (c * c) * (6.0 - 4.0 * c + c * c) / 24.0;
            }
        }
        let mut ok = false;
        for _ in 0..MAX_NEWTON_ITERATIONS {
            residual_into(&x, q8, &ctx, &mut r);
            let rn = max_abs(&r);
            if !rn.is_finite() {
                return Err(fail(&x, rn, 0.0, kstep));
            }
            let tol = newton_tol(&x, n, q8);
            if rn < tol {
                ok = true;
                break;
            }
            colored_jacobian(&x, q8, &ctx, &mut jac, &mut xd, &mut rd);
            let mut delta: Vec<f64> = r.iter().map(|&v| -v).collect();
            jac.solve_in_place(&mut delta)?;
            let mut lam = 1.0;
            let mut improved = false;
            let mut xn = vec![0.0f64; m];
            for _ in 0..40 {
                for i in 0..m {
                    xn[i] = x[i] + lam * delta[i];
                }
                residual_into(&xn, q8, &ctx, &mut r);
                let rn2 = max_abs(&r);
                if rn2.is_finite() && rn2 < rn {
                    improved = true;
                    break;
                }
                lam *= 0.5;
            }
            if !improved {
                break; // stagnated at the evaluation noise floor
            }
            x.copy_from_slice(&xn);
            total_updates += 1;
        }
        residual_into(&x, q8, &ctx, &mut r);
        let rn = max_abs(&r);
        let tol = newton_tol(&x, n, q8);
        if !(ok || rn < tol) {
            return Err(fail(&x, rn, tol, kstep));
        }
        if kstep == CONTINUATION_STEPS {
            final_rn = rn;
            final_tol = tol;
        }
    }

    // field extraction: nodes 0..n-1 live at x[1..=n]
    let last = (n - 1) as f64;
    let s_over_l: Vec<f64> = (0..n).map(|i| i as f64 / last).collect();
    let v_over_l: Vec<f64> = x[1..=n].to_vec();
    let mut vp_nodes = vec![0.0f64; n];
    for (i, vp) in vp_nodes.iter_mut().enumerate() {
        *vp = (x[i + 2] - x[i]) / (2.0 * dlt);
    }
    let u_over_l = match kind {
        BeamKind::Inextensional => {
            // constraint: u' = sqrt(1 - v'^2) - 1, integrated by trapezoid
            let mut u = Vec::with_capacity(n);
            let mut acc = 0.0;
            u.push(0.0);
            let up = |vp: f64| -> Result<f64> {
                let m2 = 1.0 - vp * vp;
                if m2 <= 0.0 {
                    return Err(Error::SlopeLimit(format!(
                        "converged slope magnitude {vp} reached 1; axial field undefined"
                    )));
                }
                Ok(m2.sqrt() - 1.0)
            };
            for i in 1..n {
                acc += 0.5 * dlt * (up(vp_nodes[i - 1])? + up(vp_nodes[i])?);
                u.push(acc);
            }
            u
        }
        // the reduced conventional equation condenses the axial field away
        BeamKind::Conventional { .. } => vec![0.0; n],
    };

    let d = derivs(&x, n - 1, dlt);
    let tip_state = SectionState {
        v_p: d.vp,
        v_pp: d.vpp / l,
        v_ppp: d.vppp / (l * l),
    };

    Ok(StaticSolution {
        tip_u_over_l: *u_over_l.last().unwrap(),
        tip_v_over_l: *v_over_l.last().unwrap(),
        s_over_l,
        u_over_l,
        v_over_l,
        axial_stretch: Vec::new(),
        tip_state,
        report: ConvergenceReport {
            iterations: total_updates,
            residual_norm: final_rn,
            tolerance: final_tol,
            continuation_steps: CONTINUATION_STEPS,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MaterialSpec;
    use crate::model::SectionProps;
    use crate::statics::section_loads;

    fn beam_case(model: ModelKind, qbar: f64) -> StaticCase {
        StaticCase::new(
            model,
            MaterialSpec::normalized(),
            SectionProps::circular(0.1).unwrap(),
            1.0,
            StaticLoad::UniformTransverse { value: qbar },
        )
        .unwrap()
    }

    #[test]
    fn zero_load_is_flat() {
        let sol = solve_beam_static(&beam_case(ModelKind::ConventionalBeam, 0.0)).unwrap();
        assert!(sol.v_over_l.iter().all(|&v| v == 0.0));
        assert_eq!(sol.report.iterations, 0);
    }

    #[test]
    fn linear_limit_tip_matches_cantilever_formula() {
        // tip v/L -> qbar as qbar -> 0; cross-checked against an
        // independent complex-step prototype of the same discretization
        for model in [ModelKind::ConventionalBeam, ModelKind::InextensionalBeam] {
            let sol = solve_beam_static(&beam_case(model, -1e-6)).unwrap();
            let tip = sol.tip_v_over_l;
            assert!(
                (tip - (-1e-6)).abs() < 1e-4 * 1e-6,
                "{model}: tip {tip} too far from -1e-6"
            );
        }
    }

    #[test]
    fn linear_limit_profiles_agree_across_models() {
        let conv = solve_beam_static(&beam_case(ModelKind::ConventionalBeam, -1e-6)).unwrap();
        let inex = solve_beam_static(&beam_case(ModelKind::InextensionalBeam, -1e-6)).unwrap();
        for (a, b) in conv.v_over_l.iter().zip(&inex.v_over_l) {
            assert!((a - b).abs() < 1e-9, "models differ by {} at v = {a}", (a - b).abs());
        }
    }

    #[test]
    fn moderate_load_tip_values() {
        // frozen from the prototype at the default 200-point grid
        let cases = [
            (ModelKind::ConventionalBeam, -0.1, -0.06744276),
            (ModelKind::InextensionalBeam, -0.1, -0.09919434),
            (ModelKind::ConventionalBeam, -0.5, -0.15687537),
            (ModelKind::InextensionalBeam, -0.5, -0.42387510),
        ];
        for (model, q, want) in cases {
            let sol = solve_beam_static(&beam_case(model, q)).unwrap();
            assert!(
                (sol.tip_v_over_l - want).abs() < 1e-6,
                "{model} q={q}: {} vs frozen {want}",
                sol.tip_v_over_l
            );
        }
    }

    #[test]
    fn grid_refined_tips_approach_continuum_oracles() {
        // Richardson-extrapolated continuum values from the prototype
        let conv = solve_beam_static(&beam_case(ModelKind::ConventionalBeam, -0.5)).unwrap();
        assert!((conv.tip_v_over_l - (-0.1568714902)).abs() < 1e-3 * 0.157);
        let inex = solve_beam_static(&beam_case(ModelKind::InextensionalBeam, -0.5)).unwrap();
        assert!((inex.tip_v_over_l - (-0.4238662603)).abs() < 1e-3 * 0.424);
    }

    #[test]
    fn halving_grid_spacing_barely_moves_tip() {
        let coarse = solve_beam_static(&beam_case(ModelKind::InextensionalBeam, -0.5)).unwrap();
        let fine = solve_beam_static(
            &beam_case(ModelKind::InextensionalBeam, -0.5)
                .with_resolution(399)
                .unwrap(),
        )
        .unwrap();
        let rel = (coarse.tip_v_over_l - fine.tip_v_over_l).abs() / fine.tip_v_over_l.abs();
        assert!(rel < 1e-3, "tip moved {rel:.2e} on refinement");
    }

    #[test]
    fn models_disagree_strongly_at_half_load() {
        let conv = solve_beam_static(&beam_case(ModelKind::ConventionalBeam, -0.5)).unwrap();
        let inex = solve_beam_static(&beam_case(ModelKind::InextensionalBeam, -0.5)).unwrap();
        let rel = (conv.tip_v_over_l - inex.tip_v_over_l).abs()
            / conv.tip_v_over_l.abs().max(inex.tip_v_over_l.abs());
        assert!(rel > 0.10, "models differ by only {rel:.3}");
        assert!(inex.tip_v_over_l.abs() < 0.5);
    }

    #[test]
    fn dropping_ea_term_moves_conventional_toward_inextensional() {
        let conv = solve_beam_static(&beam_case(ModelKind::ConventionalBeam, -0.5)).unwrap();
        let no_ea =
            solve_beam_static(&beam_case(ModelKind::ConventionalBeam, -0.5).with_drop_ea_term(true)).unwrap();
        let inex = solve_beam_static(&beam_case(ModelKind::InextensionalBeam, -0.5)).unwrap();
        assert!(conv.tip_v_over_l != no_ea.tip_v_over_l);
        let gap_with = (conv.tip_v_over_l - inex.tip_v_over_l).abs();
        let gap_without = (no_ea.tip_v_over_l - inex.tip_v_over_l).abs();
        assert!(gap_without < gap_with, "{gap_without} vs {gap_with}");
    }

    #[test]
    fn arc_length_preserved_inextensional() {
        let sol = solve_beam_static(&beam_case(ModelKind::InextensionalBeam, -0.5)).unwrap();
        let n = sol.s_over_l.len();
        let dlt = 1.0 / (n as f64 - 1.0);
        // derivatives of the reported fields, second-order at the edges
        let grad = |f: &[f64], i: usize| -> f64 {
            if i == 0 {
                (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dlt)
            } else if i == n - 1 {
                (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dlt)
            } else {
                (f[i + 1] - f[i - 1]) / (2.0 * dlt)
            }
        };
        let mut arc = 0.0;
        let mut prev = 0.0;
        for i in 0..n {
            let up = grad(&sol.u_over_l, i);
            let vp = grad(&sol.v_over_l, i);
            let integrand = ((1.0 + up).powi(2) + vp * vp).sqrt();
            if i > 0 {
                arc += 0.5 * dlt * (prev + integrand);
            }
            prev = integrand;
        }
        assert!((arc - 1.0).abs() < 1e-6, "arc length {arc}");
    }

    #[test]
    fn free_end_section_loads_vanish() {
        for model in [ModelKind::ConventionalBeam, ModelKind::InextensionalBeam] {
            let sol = solve_beam_static(&beam_case(model, -0.5)).unwrap();
            let (shear, moment) = section_loads(
                model,
                &MaterialSpec::normalized(),
                &SectionProps::circular(0.1).unwrap(),
                &sol.tip_state,
                MomentDenominator::Printed,
            )
            .unwrap();
            assert!(shear.abs() < 1e-8, "{model}: free-end shear {shear}");
            assert!(moment.abs() < 1e-8, "{model}: free-end moment {moment}");
        }
    }

    #[test]
    fn clamp_conditions_hold() {
        let sol = solve_beam_static(&beam_case(ModelKind::InextensionalBeam, -0.3)).unwrap();
        assert!(sol.v_over_l[0].abs() < 1e-10);
        // clamp slope via the one-sided second-order formula
        let dlt = 1.0 / (sol.v_over_l.len() as f64 - 1.0);
        let slope = (-3.0 * sol.v_over_l[0] + 4.0 * sol.v_over_l[1] - sol.v_over_l[2]) / (2.0 * dlt);
        assert!(slope.abs() < 1e-4, "clamp slope {slope}");
        assert_eq!(sol.u_over_l[0], 0.0);
    }

    #[test]
    fn report_reflects_converged_state() {
        let sol = solve_beam_static(&beam_case(ModelKind::ConventionalBeam, -0.3)).unwrap();
        assert!(sol.report.iterations > 0);
        assert!(sol.report.residual_norm < sol.report.tolerance);
        assert_eq!(sol.report.continuation_steps, 20);
        assert!(sol.v_over_l.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn extreme_load_stays_inside_slope_domain_or_errors() {
        // geometric stiffening keeps |v'| < 1 even at q = -2.5
        let sol = solve_beam_static(&beam_case(ModelKind::InextensionalBeam, -2.5)).unwrap();
        assert!(sol.tip_v_over_l.abs() < 1.0);
        let max_vp = sol
            .v_over_l
            .windows(2)
            .map(|w| (w[1] - w[0]).abs() * (sol.v_over_l.len() as f64 - 1.0))
            .fold(0.0f64, f64::max);
        assert!(max_vp < 1.0, "slope {max_vp} escaped the model domain");

        // far beyond that, the solve must refuse with a slope-limit error
        let err = solve_beam_static(&beam_case(ModelKind::InextensionalBeam, -50.0)).unwrap_err();
        assert!(matches!(err, Error::SlopeLimit(_)), "got {err:?}");
    }

    #[test]
    fn drop_ea_rejected_for_inextensional() {
        let case = beam_case(ModelKind::InextensionalBeam, -0.1).with_drop_ea_term(true);
        assert!(solve_beam_static(&case).is_err());
    }
}
