//! Dormand–Prince 5(4) step with dense output, specialized to a single
//! complex state variable.
//!
//! Coefficients follow the standard 7-stage FSAL tableau; the dense output
//! is the usual fourth-order interpolant. Step-size adaptation uses the PI
//! controller with safety 0.9 and growth/shrink limits 10 and 1/5.

use crate::types::Cx;

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

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

// Difference between the 5th- and 4th-order weights.
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
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const MAX_GROW: f64 = 10.0;
const MAX_SHRINK: f64 = 0.2;

/// One attempted step. `err` is the scaled error estimate (accept iff
/// `err <= 1`); `k1` must hold `f(t, z)` on entry and `k7 = f(t + h, z_new)`
/// can seed the next step (FSAL).
pub(crate) struct Attempt {
    pub z_new: Cx,
    pub err: f64,
    pub k: [Cx; 7],
}

pub(crate) fn attempt_step<F: FnMut(f64, Cx) -> Cx>(
    f: &mut F,
    t: f64,
    z: Cx,
    h: f64,
    k1: Cx,
    rtol: f64,
    atol: f64,
) -> Attempt {
    let k2 = f(t + C2 * h, z + h * (A21 * k1));
    let k3 = f(t + C3 * h, z + h * (A31 * k1 + A32 * k2));
    let k4 = f(t + C4 * h, z + h * (A41 * k1 + A42 * k2 + A43 * k3));
    let k5 = f(t + C5 * h, z + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
    let k6 = f(t + h, z + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
    let z_new = z + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6);
    let k7 = f(t + h, z_new);

    let err_vec = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    let scale = atol + rtol * z.norm().max(z_new.norm());
    let err = err_vec.norm() / scale;

    Attempt { z_new, err, k: [k1, k2, k3, k4, k5, k6, k7] }
}

/// PI controller state; `facold` remembers the previous accepted error.
pub(crate) struct Controller {
    facold: f64,
}

impl Controller {
    pub fn new() -> Self {
        Controller { facold: 1e-4 }
    }

    /// Step factor after an accepted step with scaled error `err`.
    pub fn accept(&mut self, err: f64) -> f64 {
        let fac11 = err.max(1e-300).powf(EXPO1);
        let fac = (fac11 / self.facold.powf(BETA) / SAFETY).clamp(1.0 / MAX_GROW, 1.0 / MAX_SHRINK);
        self.facold = err.max(1e-4);
        1.0 / fac
    }

    /// Step factor after a rejected step.
    pub fn reject(&mut self, err: f64) -> f64 {
        if !err.is_finite() {
            return 0.25;
        }
        let fac11 = err.max(1e-300).powf(EXPO1);
        1.0 / (fac11 / SAFETY).max(1.0)
    }
}

/// Fourth-order dense interpolant over one accepted step.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DenseSegment {
    pub t0: f64,
    pub h: f64,
    rcont: [Cx; 5],
}

impl DenseSegment {
    pub fn new(t0: f64, h: f64, z0: Cx, z1: Cx, k: &[Cx; 7]) -> Self {
        let ydiff = z1 - z0;
        let bspl = h * k[0] - ydiff;
        let rcont = [
            z0,
            ydiff,
            bspl,
            ydiff - h * k[6] - bspl,
            h * (D1 * k[0] + D3 * k[2] + D4 * k[3] + D5 * k[4] + D6 * k[5] + D7 * k[6]),
        ];
        DenseSegment { t0, h, rcont }
    }

    /// Evaluates the interpolant at `t` inside `[t0, t0 + h]`.
    pub fn eval(&self, t: f64) -> Cx {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        self.rcont[0]
            + theta
                * (self.rcont[1]
                    + theta1 * (self.rcont[2] + theta * (self.rcont[3] + theta1 * self.rcont[4])))
    }
}
