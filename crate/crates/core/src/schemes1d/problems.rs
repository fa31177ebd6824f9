use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::flux::ScalarFlux;

/// Default amplitude and rate of the exponential steady solution.
pub const STEADY_C: f64 = 1.57;
pub const STEADY_A: f64 = 1.23;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Problem1D {
    /// `(u²/2)_x = a C² e^{2ax}` on `[0,1]`, exact `u = C e^{ax}`.
    SteadyBurgers { c: f64, a: f64 },
    /// `u_x = a C e^{ax}` on `[0,1]`, exact `u = C e^{ax}`.
    SteadyAdvection { c: f64, a: f64 },
    /// Periodic `u_t + (u²/2)_x = 0`, `u(x,0) = sin 2πx`.
    UnsteadyBurgers,
    /// Periodic `u_t + u_x = 0`, `u(x,0) = sin 2πx`.
    UnsteadyAdvection,
    /// Periodic `u_t + u_x = 0`, `u(x,0) = exp(-80 (x-1/2)²)`.
    GaussianPulse,
}

impl Problem1D {
    pub fn steady_burgers() -> Self {
        Problem1D::SteadyBurgers { c: STEADY_C, a: STEADY_A }
    }

    pub fn steady_advection() -> Self {
        Problem1D::SteadyAdvection { c: STEADY_C, a: STEADY_A }
    }

    pub fn flux(&self) -> ScalarFlux {
        match self {
            Problem1D::SteadyBurgers { .. } | Problem1D::UnsteadyBurgers => ScalarFlux::Burgers,
            _ => ScalarFlux::Advection { a: 1.0 },
        }
    }

    pub fn is_steady(&self) -> bool {
        matches!(self, Problem1D::SteadyBurgers { .. } | Problem1D::SteadyAdvection { .. })
    }

    pub fn has_source(&self) -> bool {
        self.is_steady()
    }

    pub fn source(&self, x: f64) -> f64 {
        match *self {
            Problem1D::SteadyBurgers { c, a } => a * c * c * (2.0 * a * x).exp(),
            Problem1D::SteadyAdvection { c, a } => a * c * (a * x).exp(),
            _ => 0.0,
        }
    }

    pub fn source_average(&self, x: f64, h: f64) -> f64 {
        match *self {
            Problem1D::SteadyBurgers { c, a } => cell_average_exact(AverageOf::BurgersSource { c, a }, x, h),
            Problem1D::SteadyAdvection { c, a } => a * cell_average_exact(AverageOf::Exp { c, a }, x, h),
            _ => 0.0,
        }
    }

    pub fn initial(&self, x: f64) -> f64 {
        match self {
            Problem1D::GaussianPulse => gaussian_pulse(x),
            _ => (2.0 * PI * x).sin(),
        }
    }

    /// Exact point value at time `t` (ignored for steady problems).
    pub fn exact(&self, x: f64, t: f64) -> Result<f64> {
        match *self {
            Problem1D::SteadyBurgers { c, a } | Problem1D::SteadyAdvection { c, a } => Ok(c * (a * x).exp()),
            Problem1D::UnsteadyBurgers => burgers_sine_exact(x, t),
            Problem1D::UnsteadyAdvection => Ok((2.0 * PI * (x - t)).sin()),
            Problem1D::GaussianPulse => Ok(gaussian_pulse(x - t)),
        }
    }

    /// Exact cell average over `[x - h/2, x + h/2]` at time `t`.
    pub fn exact_average(&self, x: f64, h: f64, t: f64) -> Result<f64> {
        match *self {
            Problem1D::SteadyBurgers { c, a } | Problem1D::SteadyAdvection { c, a } => {
                Ok(cell_average_exact(AverageOf::Exp { c, a }, x, h))
            }
            Problem1D::UnsteadyAdvection => Ok(cell_average_exact(AverageOf::Sine, x - t, h)),
            _ => {
                let mut err = None;
                let v = gauss3_average(
                    |y| {
                        self.exact(y, t).unwrap_or_else(|e| {
                            err = Some(e);
                            f64::NAN
                        })
                    },
                    x,
                    h,
                );
                err.map_or(Ok(v), Err)
            }
        }
    }
}

impl std::str::FromStr for Problem1D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "steady-burgers" => Ok(Problem1D::steady_burgers()),
            "steady-advection" => Ok(Problem1D::steady_advection()),
            "unsteady-burgers" => Ok(Problem1D::UnsteadyBurgers),
            "unsteady-advection" => Ok(Problem1D::UnsteadyAdvection),
            "gaussian-pulse" => Ok(Problem1D::GaussianPulse),
            other => Err(Error::Config(format!("unknown 1D problem '{other}'"))),
        }
    }
}

pub fn gaussian_pulse(x: f64) -> f64 {
    let y = x - x.floor() - 0.5;
    (-80.0 * y * y).exp()
}

/// Functions with a closed-form or quadrature cell average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AverageOf {
    /// `C e^{ax}`
    Exp { c: f64, a: f64 },
    /// `a C² e^{2ax}`
    BurgersSource { c: f64, a: f64 },
    /// `sin 2πx`
    Sine,
    Constant(f64),
}

pub fn cell_average_exact(f: AverageOf, x: f64, h: f64) -> f64 {
    let (xl, xr) = (x - 0.5 * h, x + 0.5 * h);
    match f {
        AverageOf::Exp { c, a } => c / (a * h) * ((a * xr).exp() - (a * xl).exp()),
        AverageOf::BurgersSource { c, a } => c * c / (2.0 * h) * ((2.0 * a * xr).exp() - (2.0 * a * xl).exp()),
        AverageOf::Sine => ((2.0 * PI * xl).cos() - (2.0 * PI * xr).cos()) / (2.0 * PI * h),
        AverageOf::Constant(v) => v,
    }
}

/// Three-point Gauss-Legendre average over `[x - h/2, x + h/2]`.
pub fn gauss3_average(mut f: impl FnMut(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = 0.5 * h * (0.6f64).sqrt();
    (5.0 * f(x - d) + 8.0 * f(x) + 5.0 * f(x + d)) / 18.0
}

/// Solves `u = sin(2π(x - u t))` by Newton iteration; valid before wave breaking.
pub fn burgers_sine_exact(x: f64, t: f64) -> Result<f64> {
    let mut u = (2.0 * PI * x).sin();
    for _ in 0..100 {
        let arg = 2.0 * PI * (x - u * t);
        let g = u - arg.sin();
        let dg = 1.0 + 2.0 * PI * t * arg.cos();
        let du = g / dg;
        u -= du;
        if du.abs() <= 1e-15 * (1.0 + u.abs()) {
            return Ok(u);
        }
    }
    let residual = (u - (2.0 * PI * (x - u * t)).sin()).abs();
    if residual <= 1e-14 {
        Ok(u)
    } else {
        Err(Error::NotConverged(format!("Burgers characteristic solve at x={x}, t={t}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, fa, flm, fm, left, 0.5 * tol) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol)
            }
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol)
    }

    #[test]
    fn exponential_average_matches_quadrature_oracle() {
        let (x, h) = (0.5, 1.0 / 63.0);
        let closed = cell_average_exact(AverageOf::Exp { c: STEADY_C, a: STEADY_A }, x, h);
        let f = |y: f64| STEADY_C * (STEADY_A * y).exp();
        let oracle = adaptive_simpson(&f, x - 0.5 * h, x + 0.5 * h, 1e-15) / h;
        assert!((closed - oracle).abs() < 1e-12, "{closed} vs {oracle}");

        let s = cell_average_exact(AverageOf::BurgersSource { c: STEADY_C, a: STEADY_A }, x, h);
        let g = |y: f64| STEADY_A * STEADY_C * STEADY_C * (2.0 * STEADY_A * y).exp();
        let oracle = adaptive_simpson(&g, x - 0.5 * h, x + 0.5 * h, 1e-15) / h;
        assert!((s - oracle).abs() < 1e-12);
    }

    #[test]
    fn trivial_averages() {
        assert_eq!(cell_average_exact(AverageOf::Constant(2.5), 0.3, 0.1), 2.5);
        assert!(cell_average_exact(AverageOf::Sine, 0.37, 1.0).abs() < 1e-15);
        assert!((gauss3_average(|_| 2.5, 0.3, 0.1) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn burgers_characteristic_solution_satisfies_implicit_relation() {
        for i in 0..50 {
            let x = i as f64 / 50.0;
            let u = burgers_sine_exact(x, 0.08).unwrap();
            assert!((u - (2.0 * PI * (x - u * 0.08)).sin()).abs() < 1e-14);
        }
    }
}
