//! Adaptive Dormand–Prince 5(4) integrator for small complex systems.

use num_complex::Complex64;

use crate::error::{Error, Result};

type State<const N: usize> = [Complex64; N];

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub rtol: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { rtol: 1e-12, initial_step: 1e-2, min_step: 1e-14, max_steps: 2_000_000 }
    }
}

/// Integrates `y' = f(x, y)` from `x0` to `x1 > x0`.
///
/// Error control is per component against `rtol · max(|y_i|, running max |y_i|)`,
/// which keeps oscillating components that pass through zero from forcing
/// tiny steps.
pub fn integrate<const N: usize, F>(f: F, x0: f64, x1: f64, y0: State<N>, cfg: &Settings) -> Result<State<N>>
where
    F: Fn(f64, &State<N>) -> State<N>,
{
    let span = x1 - x0;
    if span <= 0.0 {
        return Ok(y0);
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut x = x0;
    let mut y = y0;
    let mut h = cfg.initial_step.min(span);
    let mut peak = [0.0f64; N];
    for i in 0..N {
        peak[i] = y[i].norm();
    }
    let mut k = [[zero; N]; 7];
    k[0] = f(x, &y);
    let mut steps = 0;
    while x < x1 {
        if steps >= cfg.max_steps {
            return Err(Error::IntegratorFailure(format!("step budget exhausted at x = {x}")));
        }
        steps += 1;
        let last = x + h >= x1;
        if last {
            h = x1 - x;
        }
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += kj[i] * (h * a);
                    }
                }
            }
            k[s] = f(x + C[s] * h, &ys);
        }
        // stage 7 is evaluated at the fifth-order solution (FSAL)
        let mut y_new = y;
        for s in 0..6 {
            let a = A[6][s];
            for i in 0..N {
                y_new[i] += k[s][i] * (h * a);
            }
        }
        let mut err = 0.0f64;
        for i in 0..N {
            let mut e = zero;
            for s in 0..7 {
                e += k[s][i] * E[s];
            }
            let scale = cfg.rtol * y[i].norm().max(y_new[i].norm()).max(peak[i]) + f64::MIN_POSITIVE;
            err = err.max((e * h).norm() / scale);
        }
        if err <= 1.0 || h <= cfg.min_step * span {
            if h <= cfg.min_step * span && err > 1.0 {
                return Err(Error::IntegratorFailure(format!("step size underflow at x = {x}")));
            }
            x = if last { x1 } else { x + h };
            y = y_new;
            for i in 0..N {
                peak[i] = peak[i].max(y[i].norm());
            }
            k[0] = k[6];
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    Ok(y)
}
