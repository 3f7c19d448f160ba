//! Convergence radius of `u ∘ φ_a` from discrete Cauchy integrals.

use rayon::prelude::*;

use crate::continuation::{phi_eval, EngineConfig};
use crate::error::RhoError;
use crate::geometry::ProblemSpec;
use crate::types::{Cx, Rho};

/// Result of the radius estimation; `Unbounded` is the polynomial sentinel
/// (every tail coefficient at the noise floor).
#[derive(Debug, Clone)]
pub struct ConvergenceRadius {
    pub radius: Rho,
    /// Index range of the coefficients used by the tail fit.
    pub window: (usize, usize),
    /// Highest coefficient index above the noise floor.
    pub max_trusted: usize,
}

/// Estimates the convergence radius of the Taylor expansion of `u ∘ φ_a` at
/// `0` by the root test on coefficients extracted with the trapezoidal
/// Cauchy integral on `|ζ| = r0` (4N nodes).
///
/// The root-test limit is read off a tail window (the top quartile of
/// trusted indices) by fitting `log |c_ν| = −ν log R + γ log ν + const`,
/// which removes the algebraic prefactor that makes the raw `|c_ν|^{1/ν}`
/// converge only like `1/ν`. The result is an estimator, not a bound; for
/// every `u` holomorphic on the region it should not undercut the
/// continuation lower bound for `ρ(a)`.
pub fn convergence_radius(
    spec: &ProblemSpec,
    a: Cx,
    u: &(dyn Fn(Cx) -> Cx + Sync),
    r0: f64,
    n: usize,
    cfg: &EngineConfig,
) -> Result<ConvergenceRadius, RhoError> {
    if n < 16 {
        return Err(RhoError::Invalid("need N >= 16 quadrature resolution".into()));
    }
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(RhoError::Invalid("r0 must be positive".into()));
    }
    let nodes = 4 * n;

    // phi on the circle, then u; any continuation event here means r0 was
    // not below rho and is reported as such.
    let samples: Vec<Cx> = (0..nodes)
        .into_par_iter()
        .map(|j| {
            let zeta = Cx::from_polar(r0, std::f64::consts::TAU * j as f64 / nodes as f64);
            let z = phi_eval(spec, a, zeta, cfg)?;
            Ok(u(z))
        })
        .collect::<Result<_, RhoError>>()?;

    let u_scale = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if u_scale == 0.0 {
        return Ok(ConvergenceRadius { radius: Rho::Unbounded, window: (0, 0), max_trusted: 0 });
    }

    // c_nu r0^nu by the discrete Fourier sum; trustworthy up to half the
    // node count (aliasing) and down to the quadrature noise floor.
    let nu_max = 2 * n;
    let mut scaled_coeff = Vec::with_capacity(nu_max + 1);
    for nu in 0..=nu_max {
        let mut acc = Cx::new(0.0, 0.0);
        for (j, &val) in samples.iter().enumerate() {
            let phase = -std::f64::consts::TAU * (j * nu % nodes) as f64 / nodes as f64;
            acc += val * Cx::from_polar(1.0, phase);
        }
        scaled_coeff.push(acc.norm() / nodes as f64);
    }
    let floor = 1e-10 * u_scale;
    let trusted: Vec<usize> =
        (1..=nu_max).filter(|&nu| scaled_coeff[nu] > floor).collect();
    let Some(&max_trusted) = trusted.last() else {
        // All tail coefficients vanish at quadrature accuracy: polynomial.
        return Ok(ConvergenceRadius { radius: Rho::Unbounded, window: (0, 0), max_trusted: 0 });
    };

    let lo = ((0.75 * max_trusted as f64).ceil() as usize).max(1);
    let window: Vec<usize> = trusted.iter().copied().filter(|&nu| nu >= lo).collect();
    let window_span = (*window.first().unwrap_or(&lo), max_trusted);

    // log|c_nu| = log(scaled) - nu log r0; fit against {nu, log nu, 1}.
    let ys: Vec<f64> =
        window.iter().map(|&nu| scaled_coeff[nu].ln() - nu as f64 * r0.ln()).collect();
    let slope = if window.len() >= 3 {
        fit_slope3(&window, &ys)
    } else if window.len() == 2 {
        (ys[1] - ys[0]) / (window[1] as f64 - window[0] as f64)
    } else {
        ys[0] / window[0] as f64
    };
    // slope = -log R
    let radius = (-slope).exp();
    if !radius.is_finite() {
        return Ok(ConvergenceRadius {
            radius: Rho::Unbounded,
            window: window_span,
            max_trusted,
        });
    }
    Ok(ConvergenceRadius { radius: Rho::Finite(radius), window: window_span, max_trusted })
}

/// Least-squares slope of `y` against `nu` in the model
/// `y = s·nu + g·log(nu) + c`.
fn fit_slope3(nus: &[usize], ys: &[f64]) -> f64 {
    let n = nus.len() as f64;
    let (mut sx, mut sl, mut sy) = (0.0, 0.0, 0.0);
    let (mut sxx, mut sxl, mut sll, mut sxy, mut sly) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&nu, &y) in nus.iter().zip(ys) {
        let x = nu as f64;
        let l = x.ln();
        sx += x;
        sl += l;
        sy += y;
        sxx += x * x;
        sxl += x * l;
        sll += l * l;
        sxy += x * y;
        sly += l * y;
    }
    // Normal equations for [s, g, c].
    let m = [[sxx, sxl, sx], [sxl, sll, sl], [sx, sl, n]];
    let rhs = [sxy, sly, sy];
    solve3(m, rhs)[0]
}

fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        b.swap(col, pivot);
        let d = m[col][col];
        for row in col + 1..3 {
            let f = m[row][col] / d;
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DomainSpec, FrameSpec};

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn geometric_series_radius() {
        // u(z) = 1/(z-1) on the unit disk at a = 0: coefficients are all
        // -1, radius exactly 1.
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        let u = |z: Cx| (z - cx(1.0, 0.0)).inv();
        let r = convergence_radius(&spec, cx(0.0, 0.0), &u, 0.5, 32, &cfg()).unwrap();
        let v = r.radius.finite().expect("finite radius");
        assert!((v - 1.0).abs() < 0.02, "radius {v}");
    }

    #[test]
    fn polynomial_gets_the_unbounded_sentinel() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        let u = |_: Cx| cx(1.0, 0.0);
        let r = convergence_radius(&spec, cx(0.0, 0.0), &u, 0.5, 32, &cfg()).unwrap();
        assert_eq!(r.radius, Rho::Unbounded);
    }

    #[test]
    fn log_series_under_exp_frame() {
        // u(z) = z with the e^z dz frame at a = 0: u(phi(zeta)) =
        // log(1 + zeta), coefficients (-1)^(nu+1)/nu, radius 1. The 1/nu
        // prefactor is exactly what the tail fit must remove.
        let spec = ProblemSpec::new(DomainSpec::Plane, DomainSpec::Plane, FrameSpec::Exp);
        let u = |z: Cx| z;
        let r = convergence_radius(&spec, cx(0.0, 0.0), &u, 0.5, 32, &cfg()).unwrap();
        let v = r.radius.finite().expect("finite radius");
        assert!((v - 1.0).abs() < 0.02, "radius {v}");
    }

    #[test]
    fn r0_beyond_rho_is_an_error() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        let u = |z: Cx| z;
        assert!(convergence_radius(&spec, cx(0.0, 0.0), &u, 1.5, 16, &cfg()).is_err());
    }

    #[test]
    fn small_n_rejected() {
        let spec = ProblemSpec::new(
            DomainSpec::Plane,
            DomainSpec::disk(cx(0.0, 0.0), 1.0),
            FrameSpec::ConstOne,
        );
        let u = |z: Cx| z;
        assert!(convergence_radius(&spec, cx(0.0, 0.0), &u, 0.5, 8, &cfg()).is_err());
    }
}
