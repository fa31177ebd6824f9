//! One-dimensional κ-schemes on uniform grids.
//!
//! | flavor | unknowns      | source                          | default     |
//! |--------|---------------|---------------------------------|-------------|
//! | FVC    | cell averages | cell average                    | κ = 1/3     |
//! | FVP    | point values  | cell average (+ optional mass)  | κ = 1/2     |
//! | FD     | point values  | point                           | κ = 1/3     |
//! | FSR    | point values  | point                           | θ = 1/3, κ = 1/2 |
//! | SSQ    | point values  | quadrature (+ mass)             | κ = 1/2, κₛ = 1/6 |
//! | YH     | point values  | point                           | κ = -1/6, κ₃ = 0 |

mod drivers;
mod problems;

pub use drivers::{
    errors_1d, gaussian_pulse_run, steady_driver_1d, truncation_error_1d, unsteady_driver_1d, GaussianPulseResult,
    Grid1D, SteadyOptions, SteadyResult,
};
pub use problems::{
    burgers_sine_exact, cell_average_exact, gauss3_average, gaussian_pulse, AverageOf, Problem1D, STEADY_A,
    STEADY_C,
};

use crate::error::{Error, Result};
use crate::flux::{scalar_upwind_flux, ScalarFlux};
use crate::reconstruction::{umuscl_delta_1d, yang_harris_1d};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Fvc,
    Fvp,
    Fd,
    Fsr,
    Ssq,
    Yh,
}

impl Flavor {
    pub fn tag(self) -> &'static str {
        match self {
            Flavor::Fvc => "fvc",
            Flavor::Fvp => "fvp",
            Flavor::Fd => "fd",
            Flavor::Fsr => "fsr",
            Flavor::Ssq => "ssq",
            Flavor::Yh => "yh",
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fvc" => Ok(Flavor::Fvc),
            "fvp" => Ok(Flavor::Fvp),
            "fd" | "umuscl" => Ok(Flavor::Fd),
            "fsr" => Ok(Flavor::Fsr),
            "ssq" => Ok(Flavor::Ssq),
            "yh" => Ok(Flavor::Yh),
            other => Err(Error::Config(format!("unknown 1D flavor '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    CellAverage,
    PointValue,
}

impl Semantics {
    pub fn tag(self) -> &'static str {
        match self {
            Semantics::CellAverage => "cell-average",
            Semantics::PointValue => "point",
        }
    }
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cell-average" => Ok(Semantics::CellAverage),
            "point" => Ok(Semantics::PointValue),
            other => Err(Error::Config(format!("unknown norm semantics '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceMode {
    Point,
    CellAverage,
    SsqQuadrature,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scheme1D {
    pub flavor: Flavor,
    pub kappa: f64,
    pub theta: f64,
    pub kappa_s: f64,
    pub yh_kappa3: f64,
    pub semantics: Semantics,
    pub source_mode: SourceMode,
    /// Couples the time derivative through `M = I + (κₛ/4)δ²` (FVP and SSQ only).
    pub mass_matrix: bool,
}

impl Scheme1D {
    fn base(flavor: Flavor, kappa: f64, semantics: Semantics, source_mode: SourceMode) -> Self {
        Self {
            flavor,
            kappa,
            theta: 1.0 / 3.0,
            kappa_s: 1.0 / 6.0,
            yh_kappa3: 0.0,
            semantics,
            source_mode,
            mass_matrix: false,
        }
    }

    pub fn fvc() -> Self {
        Self::base(Flavor::Fvc, 1.0 / 3.0, Semantics::CellAverage, SourceMode::CellAverage)
    }

    /// Point-valued finite volume without the coupled time derivative.
    pub fn fvp() -> Self {
        Self::base(Flavor::Fvp, 0.5, Semantics::PointValue, SourceMode::CellAverage)
    }

    pub fn fvp_with_mass() -> Self {
        Self { mass_matrix: true, ..Self::fvp() }
    }

    pub fn fd(kappa: f64) -> Self {
        Self::base(Flavor::Fd, kappa, Semantics::PointValue, SourceMode::Point)
    }

    pub fn fsr() -> Self {
        Self::base(Flavor::Fsr, 0.5, Semantics::PointValue, SourceMode::Point)
    }

    pub fn ssq() -> Self {
        Self { mass_matrix: true, ..Self::base(Flavor::Ssq, 0.5, Semantics::PointValue, SourceMode::SsqQuadrature) }
    }

    pub fn yang_harris() -> Self {
        Self::base(Flavor::Yh, -1.0 / 6.0, Semantics::PointValue, SourceMode::Point)
    }

    /// Default configuration of a flavor.
    pub fn of(flavor: Flavor) -> Self {
        match flavor {
            Flavor::Fvc => Self::fvc(),
            Flavor::Fvp => Self::fvp(),
            Flavor::Fd => Self::fd(1.0 / 3.0),
            Flavor::Fsr => Self::fsr(),
            Flavor::Ssq => Self::ssq(),
            Flavor::Yh => Self::yang_harris(),
        }
    }

    /// Checks the (semantics, source) pairing of the flavor.
    pub fn validate(&self) -> Result<()> {
        use SourceMode as S;
        let ok_source = match self.flavor {
            Flavor::Fvc | Flavor::Fvp => matches!(self.source_mode, S::CellAverage | S::None),
            Flavor::Fd | Flavor::Fsr | Flavor::Yh => matches!(self.source_mode, S::Point | S::None),
            Flavor::Ssq => matches!(self.source_mode, S::SsqQuadrature | S::None),
        };
        let ok_semantics = (self.flavor == Flavor::Fvc) == (self.semantics == Semantics::CellAverage);
        let ok_mass = !self.mass_matrix || matches!(self.flavor, Flavor::Fvp | Flavor::Ssq);
        if !ok_source || !ok_semantics || !ok_mass {
            return Err(Error::Config(format!(
                "{} cannot use {:?} unknowns with {:?} source (mass matrix: {})",
                self.flavor.tag(),
                self.semantics,
                self.source_mode,
                self.mass_matrix
            )));
        }
        if self.flavor == Flavor::Ssq && self.kappa != 0.5 {
            return Err(Error::Config("ssq requires kappa = 1/2".into()));
        }
        Ok(())
    }

    /// Boundary layers held at exact values on each side of a non-periodic grid.
    pub fn dirichlet_layers(&self) -> usize {
        if self.flavor == Flavor::Yh {
            3
        } else {
            2
        }
    }

    /// Off-diagonal weight of the mass matrix.
    pub fn mass_coefficient(&self) -> f64 {
        match self.flavor {
            Flavor::Fvp => 1.0 / 24.0,
            _ => 0.25 * self.kappa_s,
        }
    }
}

/// `s_i + (κₛ/4)(s_{i+1} - 2 s_i + s_{i-1})` at interior points; ends are copied.
pub fn ssq_source_1d(s: &[f64], kappa_s: f64) -> Vec<f64> {
    let n = s.len();
    (0..n)
        .map(|i| {
            if i == 0 || i + 1 == n {
                s[i]
            } else {
                s[i] + 0.25 * kappa_s * (s[i + 1] - 2.0 * s[i] + s[i - 1])
            }
        })
        .collect()
}

/// The same quadrature written as the average of the two half-cell extrapolations.
pub fn ssq_source_half_form(s_im1: f64, s_i: f64, s_ip1: f64, kappa_s: f64) -> f64 {
    let sx_h = 0.5 * (s_ip1 - s_im1);
    let minus = kappa_s * 0.5 * (s_im1 + s_i) + (1.0 - kappa_s) * (s_i - 0.5 * sx_h);
    let plus = kappa_s * 0.5 * (s_ip1 + s_i) + (1.0 - kappa_s) * (s_i + 0.5 * sx_h);
    0.5 * (minus + plus)
}

/// `r_i + c (r_{i+1} - 2 r_i + r_{i-1})`; with `periodic == false` the end rows are identity.
pub fn fvp_mass_apply(r: &[f64], c: f64, periodic: bool) -> Vec<f64> {
    let n = r.len();
    (0..n)
        .map(|i| {
            if periodic {
                r[i] + c * (r[(i + 1) % n] - 2.0 * r[i] + r[(i + n - 1) % n])
            } else if i == 0 || i + 1 == n {
                r[i]
            } else {
                r[i] + c * (r[i + 1] - 2.0 * r[i] + r[i - 1])
            }
        })
        .collect()
}

/// Inverse of [`fvp_mass_apply`] by the Thomas algorithm (Sherman-Morrison when periodic).
pub fn fvp_mass_solve(b: &[f64], c: f64, periodic: bool) -> Result<Vec<f64>> {
    let n = b.len();
    let diag = 1.0 - 2.0 * c;
    if diag.abs() <= 2.0 * c.abs() {
        return Err(Error::Singular(format!("mass matrix with coefficient {c} is not diagonally dominant")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if !periodic {
        let mut lower = vec![c; n];
        let mut upper = vec![c; n];
        let mut d = vec![diag; n];
        d[0] = 1.0;
        d[n - 1] = 1.0;
        upper[0] = 0.0;
        lower[n - 1] = 0.0;
        return Ok(thomas(&lower, &d, &upper, b));
    }
    if n < 3 {
        return Err(Error::Singular("periodic mass matrix needs at least 3 points".into()));
    }
    // A = T + u v^T with u = (gamma, 0.., c), v = (1, 0.., c/gamma).
    let gamma = -diag;
    let mut d = vec![diag; n];
    d[0] -= gamma;
    d[n - 1] -= c * c / gamma;
    let off = vec![c; n];
    let y = thomas(&off, &d, &off, b);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = c;
    let z = thomas(&off, &d, &off, &u);
    let vy = y[0] + c / gamma * y[n - 1];
    let vz = z[0] + c / gamma * z[n - 1];
    let f = vy / (1.0 + vz);
    Ok(y.iter().zip(&z).map(|(yi, zi)| yi - f * zi).collect())
}

fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    cp[0] = upper[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * cp[i - 1];
        cp[i] = upper[i] / m;
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / m;
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        x[i] -= cp[i] * x[i + 1];
    }
    x
}

/// Discrete state on a uniform 1D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    pub x: Vec<f64>,
    pub h: f64,
    pub values: Vec<f64>,
    pub semantics: Semantics,
    pub periodic: bool,
}

impl Field1D {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Fixed inputs of the residual: source samples in the scheme's semantics.
#[derive(Debug, Clone)]
pub struct Residual1D {
    pub scheme: Scheme1D,
    pub flux: ScalarFlux,
    pub h: f64,
    pub periodic: bool,
    /// Index range `[lo, hi)` of unknowns that are updated.
    pub active: std::ops::Range<usize>,
    /// Source term already discretized per the scheme's source mode.
    pub source: Vec<f64>,
}

impl Residual1D {
    pub fn new(scheme: Scheme1D, problem: &Problem1D, x: &[f64], h: f64, periodic: bool) -> Result<Self> {
        scheme.validate()?;
        let n = x.len();
        let layers = if periodic { 0 } else { scheme.dirichlet_layers() };
        if n < 2 * layers + 1 || (periodic && n < 5) {
            return Err(Error::InvalidGrid(format!("{n} points cannot hold the {} stencil", scheme.flavor.tag())));
        }
        let source = if !problem.has_source() {
            vec![0.0; n]
        } else {
            match scheme.source_mode {
                SourceMode::None => vec![0.0; n],
                SourceMode::Point => x.iter().map(|&xi| problem.source(xi)).collect(),
                SourceMode::CellAverage => x.iter().map(|&xi| problem.source_average(xi, h)).collect(),
                SourceMode::SsqQuadrature => {
                    let s: Vec<f64> = x.iter().map(|&xi| problem.source(xi)).collect();
                    if periodic {
                        fvp_mass_apply(&s, 0.25 * scheme.kappa_s, true)
                    } else {
                        ssq_source_1d(&s, scheme.kappa_s)
                    }
                }
            }
        };
        Ok(Self { scheme, flux: problem.flux(), h, periodic, active: layers..n - layers, source })
    }

    #[inline]
    fn at(&self, u: &[f64], i: isize) -> f64 {
        let n = u.len() as isize;
        if self.periodic {
            u[i.rem_euclid(n) as usize]
        } else {
            u[i as usize]
        }
    }

    /// Numerical flux at the face between `i` and `i+1`.
    fn face_flux(&self, u: &[f64], i: isize) -> f64 {
        let s = &self.scheme;
        let g = |k: isize| self.at(u, k);
        let (ul, ur) = if s.flavor == Flavor::Yh {
            (
                yang_harris_1d([g(i - 2), g(i - 1), g(i), g(i + 1), g(i + 2)], s.kappa, s.yh_kappa3),
                yang_harris_1d([g(i + 3), g(i + 2), g(i + 1), g(i), g(i - 1)], s.kappa, s.yh_kappa3),
            )
        } else {
            (
                umuscl_delta_1d(g(i - 1), g(i), g(i + 1), s.kappa).left,
                umuscl_delta_1d(g(i), g(i + 1), g(i + 2), s.kappa).right,
            )
        };
        if s.flavor == Flavor::Fsr {
            let f = |k: isize| self.flux.f(g(k));
            let fl = umuscl_delta_1d(f(i - 1), f(i), f(i + 1), s.theta).left;
            let fr = umuscl_delta_1d(f(i), f(i + 1), f(i + 2), s.theta).right;
            0.5 * (fl + fr) - 0.5 * self.flux.df(0.5 * (ul + ur)).abs() * (ur - ul)
        } else {
            scalar_upwind_flux(ul, ur, self.flux)
        }
    }

    /// `-(Φ_{i+1/2} - Φ_{i-1/2})/h + S_i` on active points, zero elsewhere; no mass matrix.
    pub fn rate(&self, u: &[f64], out: &mut Vec<f64>) {
        let n = u.len();
        out.clear();
        out.resize(n, 0.0);
        let (lo, hi) = (self.active.start as isize, self.active.end as isize);
        let mut left = self.face_flux(u, lo - 1);
        for i in lo..hi {
            let right = self.face_flux(u, i);
            out[i as usize] = -(right - left) / self.h + self.source[i as usize];
            left = right;
        }
    }

    /// Time derivative including the mass matrix when the scheme couples it.
    pub fn time_derivative(&self, u: &[f64], out: &mut Vec<f64>) -> Result<()> {
        self.rate(u, out);
        if self.scheme.mass_matrix {
            let c = self.scheme.mass_coefficient();
            if self.periodic {
                *out = fvp_mass_solve(out, c, true)?;
            } else {
                let r = self.active.clone();
                let solved = fvp_mass_solve(&out[r.clone()], c, false)?;
                out[r].copy_from_slice(&solved);
            }
        }
        Ok(())
    }
}

/// Right-hand side `du/dt` of `scheme` for `field` (mass matrix excluded).
pub fn residual_1d(scheme: Scheme1D, field: &Field1D, problem: &Problem1D) -> Result<Vec<f64>> {
    if field.semantics != scheme.semantics {
        return Err(Error::Config(format!(
            "{} expects {} unknowns, field holds {}",
            scheme.flavor.tag(),
            scheme.semantics.tag(),
            field.semantics.tag()
        )));
    }
    let r = Residual1D::new(scheme, problem, &field.x, field.h, field.periodic)?;
    let mut out = Vec::new();
    r.rate(&field.values, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ssq_source_examples() {
        assert_eq!(ssq_source_1d(&[1.0, 1.0, 1.0], 1.0 / 6.0)[1], 1.0);
        let v = ssq_source_1d(&[1.0, 0.0, 1.0], 1.0 / 6.0)[1];
        assert!((v - 1.0 / 12.0).abs() < 1e-16);
        let s = [0.3, -1.2, 2.7];
        let a = ssq_source_1d(&s, 1.0 / 6.0)[1];
        let b = ssq_source_half_form(s[0], s[1], s[2], 1.0 / 6.0);
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn mass_matrix_round_trip() {
        let n = 64;
        let r: Vec<f64> = (0..n).map(|i| (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos()).collect();
        for periodic in [true, false] {
            let a = fvp_mass_apply(&r, 1.0 / 24.0, periodic);
            let back = fvp_mass_solve(&a, 1.0 / 24.0, periodic).unwrap();
            for (x, y) in r.iter().zip(&back) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        let ones = vec![1.0; 10];
        assert_eq!(fvp_mass_apply(&ones, 1.0 / 24.0, true), ones);
        assert!(fvp_mass_solve(&ones, 0.5, true).is_err());
    }

    #[test]
    fn constant_field_has_zero_rate_for_every_flavor() {
        let n = 20;
        let h = 1.0 / n as f64;
        let x: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
        for flavor in [Flavor::Fvc, Flavor::Fvp, Flavor::Fd, Flavor::Fsr, Flavor::Ssq, Flavor::Yh] {
            let scheme = Scheme1D::of(flavor);
            let field = Field1D { x: x.clone(), h, values: vec![0.7; n], semantics: scheme.semantics, periodic: true };
            let r = residual_1d(scheme, &field, &Problem1D::UnsteadyBurgers).unwrap();
            assert!(r.iter().all(|v| v.abs() < 1e-14), "{flavor:?}");
        }
    }

    #[test]
    fn mismatched_configuration_is_rejected() {
        let bad = Scheme1D { source_mode: SourceMode::Point, ..Scheme1D::fvc() };
        assert!(bad.validate().is_err());
        let bad = Scheme1D { semantics: Semantics::CellAverage, ..Scheme1D::fd(0.0) };
        assert!(bad.validate().is_err());
        let bad = Scheme1D { kappa: 1.0 / 3.0, ..Scheme1D::ssq() };
        assert!(bad.validate().is_err());
        let field = Field1D { x: vec![0.0; 8], h: 0.1, values: vec![0.0; 8], semantics: Semantics::PointValue, periodic: true };
        assert!(residual_1d(Scheme1D::fvc(), &field, &Problem1D::UnsteadyBurgers).is_err());
    }
}
