//! Adaptive explicit Runge-Kutta integration (Dormand-Prince 5(4)) with
//! fourth-order dense output, used to march the semidiscrete rod equations.
//!
//! The pair is FSAL: the last stage of an accepted step is the first stage
//! of the next, so an accepted step costs six right-hand-side evaluations.

use crate::error::{Error, Result};

// Butcher tableau (classic DOPRI5 coefficients).
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Error estimate y5 - y4.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Dense-output weights.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;
const MAX_STEPS: u64 = 50_000_000;

/// Dormand-Prince 5(4) integrator configuration.
#[derive(Clone, Copy, Debug)]
pub struct Dopri5 {
    /// Relative tolerance on the embedded error estimate.
    pub rtol: f64,
    /// Absolute tolerance floor.
    pub atol: f64,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Dopri5 { rtol: 1e-8, atol: 1e-14 }
    }
}

struct Workspace {
    k: [Vec<f64>; 7],
    y_stage: Vec<f64>,
    y_new: Vec<f64>,
    rcont: [Vec<f64>; 5],
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            k: std::array::from_fn(|_| vec![0.0; n]),
            y_stage: vec![0.0; n],
            y_new: vec![0.0; n],
            rcont: std::array::from_fn(|_| vec![0.0; n]),
        }
    }
}

impl Dopri5 {
    /// Integrates dy/dt = f(t, y) from `t0` to `tend`, emitting the dense
    /// solution at each of the ascending `out_times` (all within
    /// [t0, tend]) via `emit(index, y)`.
    ///
    /// Fails with a divergence error if the state stops being finite or the
    /// controller underflows its step size.
    pub fn integrate<F, E>(
        &self,
        mut f: F,
        t0: f64,
        tend: f64,
        y0: &[f64],
        out_times: &[f64],
        mut emit: E,
    ) -> Result<()>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
        E: FnMut(usize, &[f64]),
    {
        let n = y0.len();
        if !(tend > t0) {
            return Err(Error::invalid(format!(
                "integration window must have tend > t0, got [{t0}, {tend}]"
            )));
        }
        for (i, w) in out_times.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::invalid(format!(
                    "output times must be strictly ascending (index {i})"
                )));
            }
        }
        if let (Some(&first), Some(&last)) = (out_times.first(), out_times.last()) {
            // Tiny forward slack: a rounded final output time may sit a few
            // ulps past tend.
            if first < t0 || last > tend + 1e-12 * tend.abs().max(1.0) {
                return Err(Error::invalid(format!(
                    "output times [{first}, {last}] not contained in [{t0}, {tend}]"
                )));
            }
        }

        let mut ws = Workspace::new(n);
        let mut y = y0.to_vec();
        let mut t = t0;
        let mut next_out = 0;

        // Outputs that coincide with the initial time.
        while next_out < out_times.len() && out_times[next_out] <= t0 {
            emit(next_out, &y);
            next_out += 1;
        }

        f(t, &y, &mut ws.k[0]);
        let mut h = self.initial_step(&mut f, t0, tend, &y, &ws.k[0].clone());

        let mut rejected = false;
        for _step in 0..MAX_STEPS {
            if next_out >= out_times.len() && t >= tend {
                return Ok(());
            }
            if t >= tend {
                return Ok(());
            }
            let h_floor = 1e-14 * t.abs().max(1.0);
            if h < h_floor {
                return Err(Error::Divergence {
                    t,
                    details: format!("step size underflow (h = {h:.3e})"),
                });
            }
            if t + 1.01 * h >= tend {
                h = tend - t;
            }

            self.stages(&mut f, t, h, &y, &mut ws);

            // Scaled RMS of the embedded 4th/5th-order difference.
            let mut err_sq = 0.0;
            for i in 0..n {
                let e = h
                    * (E1 * ws.k[0][i]
                        + E3 * ws.k[2][i]
                        + E4 * ws.k[3][i]
                        + E5 * ws.k[4][i]
                        + E6 * ws.k[5][i]
                        + E7 * ws.k[6][i]);
                let sc = self.atol + self.rtol * ws.y_new[i].abs().max(y[i].abs());
                err_sq += (e / sc) * (e / sc);
            }
            let err = (err_sq / n as f64).sqrt();

            if !err.is_finite() {
                // NaN state: retry on a much smaller step; the underflow
                // guard turns persistent NaN into a divergence error.
                h *= 0.1;
                rejected = true;
                continue;
            }

            if err <= 1.0 {
                self.prepare_dense(h, &y, &mut ws);
                let t_new = t + h;
                while next_out < out_times.len() && out_times[next_out] <= t_new {
                    let theta = ((out_times[next_out] - t) / h).clamp(0.0, 1.0);
                    let theta1 = 1.0 - theta;
                    for i in 0..n {
                        ws.y_stage[i] = ws.rcont[0][i]
                            + theta
                                * (ws.rcont[1][i]
                                    + theta1
                                        * (ws.rcont[2][i]
                                            + theta
                                                * (ws.rcont[3][i] + theta1 * ws.rcont[4][i])));
                    }
                    emit(next_out, &ws.y_stage);
                    next_out += 1;
                }

                y.copy_from_slice(&ws.y_new);
                ws.k.swap(0, 6); // FSAL
                t = t_new;

                let mut fac = SAFETY * err.powf(-0.2);
                if rejected {
                    fac = fac.min(1.0);
                }
                h *= fac.clamp(FAC_MIN, FAC_MAX);
                rejected = false;
            } else {
                h *= (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 1.0);
                rejected = true;
            }
        }
        Err(Error::Divergence {
            t,
            details: format!("step budget exhausted ({MAX_STEPS} steps)"),
        })
    }

    /// Classic starting-step heuristic: match the scale of y and y' and
    /// probe the local Lipschitz scale with one Euler trial.
    fn initial_step<F>(&self, f: &mut F, t0: f64, tend: f64, y0: &[f64], f0: &[f64]) -> f64
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = y0.len();
        let sc =
            |y: f64| -> f64 { self.atol + self.rtol * y.abs() };
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..n {
            let s = sc(y0[i]);
            d0 += (y0[i] / s) * (y0[i] / s);
            d1 += (f0[i] / s) * (f0[i] / s);
        }
        d0 = (d0 / n as f64).sqrt();
        d1 = (d1 / n as f64).sqrt();
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(tend - t0);

        let mut y1 = vec![0.0; n];
        let mut f1 = vec![0.0; n];
        for i in 0..n {
            y1[i] = y0[i] + h0 * f0[i];
        }
        f(t0 + h0, &y1, &mut f1);
        let mut d2 = 0.0;
        for i in 0..n {
            let s = sc(y0[i]);
            let df = (f1[i] - f0[i]) / s;
            d2 += df * df;
        }
        d2 = (d2 / n as f64).sqrt() / h0;

        let dm = d1.max(d2);
        let h1 = if dm <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / dm).powf(0.2)
        };
        (100.0 * h0).min(h1).min(tend - t0)
    }

    fn stages<F>(&self, f: &mut F, t: f64, h: f64, y: &[f64], ws: &mut Workspace)
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = y.len();
        let (k, ys) = (&mut ws.k, &mut ws.y_stage);

        for i in 0..n {
            ys[i] = y[i] + h * A21 * k[0][i];
        }
        f(t + C2 * h, ys, &mut k[1]);
        for i in 0..n {
            ys[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
        }
        f(t + C3 * h, ys, &mut k[2]);
        for i in 0..n {
            ys[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
        }
        f(t + C4 * h, ys, &mut k[3]);
        for i in 0..n {
            ys[i] = y[i] + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
        }
        f(t + C5 * h, ys, &mut k[4]);
        for i in 0..n {
            ys[i] = y[i]
                + h * (A61 * k[0][i]
                    + A62 * k[1][i]
                    + A63 * k[2][i]
                    + A64 * k[3][i]
                    + A65 * k[4][i]);
        }
        f(t + h, ys, &mut k[5]);
        for i in 0..n {
            ws.y_new[i] = y[i]
                + h * (A71 * k[0][i]
                    + A73 * k[2][i]
                    + A74 * k[3][i]
                    + A75 * k[4][i]
                    + A76 * k[5][i]);
        }
        f(t + h, &ws.y_new, &mut k[6]);
    }

    fn prepare_dense(&self, h: f64, y: &[f64], ws: &mut Workspace) {
        let n = y.len();
        for i in 0..n {
            let dy = ws.y_new[i] - y[i];
            let bspl = h * ws.k[0][i] - dy;
            ws.rcont[0][i] = y[i];
            ws.rcont[1][i] = dy;
            ws.rcont[2][i] = bspl;
            ws.rcont[3][i] = dy - h * ws.k[6][i] - bspl;
            ws.rcont[4][i] = h
                * (D1 * ws.k[0][i]
                    + D3 * ws.k[2][i]
                    + D4 * ws.k[3][i]
                    + D5 * ws.k[4][i]
                    + D6 * ws.k[5][i]
                    + D7 * ws.k[6][i]);
        }
    }
}
