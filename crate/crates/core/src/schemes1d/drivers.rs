use std::f64::consts::PI;

use super::{fvp_mass_apply, Field1D, Problem1D, Residual1D, Scheme1D, Semantics};
use crate::error::{Error, Result};
use crate::rk::SspRk3;

/// Uniform 1D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub x: Vec<f64>,
    pub h: f64,
    pub periodic: bool,
}

impl Grid1D {
    /// `n` points `x_i = i h` on `[0, 1]`, `h = 1/(n-1)`.
    pub fn steady(n: usize) -> Self {
        let h = 1.0 / (n.max(2) - 1) as f64;
        Self { x: (0..n).map(|i| i as f64 * h).collect(), h, periodic: false }
    }

    /// `n` periodic cells centred at `(i + 1/2) h`, `h = 1/n`.
    pub fn periodic_cells(n: usize) -> Self {
        let h = 1.0 / n as f64;
        Self { x: (0..n).map(|i| (i as f64 + 0.5) * h).collect(), h, periodic: true }
    }

    /// `n` periodic nodes `x_i = i h`, `h = 1/n`; node `n` coincides with node 0.
    pub fn periodic_nodes(n: usize) -> Self {
        let h = 1.0 / n as f64;
        Self { x: (0..n).map(|i| i as f64 * h).collect(), h, periodic: true }
    }
}

fn sample(problem: &Problem1D, grid: &Grid1D, semantics: Semantics, t: f64) -> Result<Vec<f64>> {
    grid.x
        .iter()
        .map(|&x| match semantics {
            Semantics::PointValue => problem.exact(x, t),
            Semantics::CellAverage => problem.exact_average(x, grid.h, t),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SteadyInit {
    /// Straight line between the two boundary values.
    Linear,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyOptions {
    pub cfl: f64,
    /// Required ratio of final to initial L1 residual.
    pub drop: f64,
    pub max_iterations: usize,
    pub init: SteadyInit,
}

impl Default for SteadyOptions {
    fn default() -> Self {
        Self { cfl: 0.8, drop: 1e-11, max_iterations: 1_000_000, init: SteadyInit::Linear }
    }
}

#[derive(Debug, Clone)]
pub struct SteadyResult {
    pub field: Field1D,
    pub iterations: usize,
    pub initial_residual: f64,
    pub final_residual: f64,
}

fn l1(r: &[f64], active: &std::ops::Range<usize>) -> f64 {
    r[active.clone()].iter().map(|v| v.abs()).sum::<f64>() / active.len().max(1) as f64
}

/// Pseudo-time SSP RK3 iteration to a steady state.
pub fn steady_driver_1d(scheme: Scheme1D, problem: &Problem1D, n: usize, opts: SteadyOptions) -> Result<SteadyResult> {
    if !problem.is_steady() {
        return Err(Error::Config("steady driver needs a steady problem".into()));
    }
    let grid = Grid1D::steady(n);
    let res = Residual1D::new(scheme, problem, &grid.x, grid.h, false)?;
    let exact = sample(problem, &grid, scheme.semantics, 0.0)?;
    let mut u = exact.clone();
    if opts.init == SteadyInit::Linear {
        let (a, b) = (exact[0], exact[n - 1]);
        for i in res.active.clone() {
            u[i] = a + (b - a) * i as f64 / (n - 1) as f64;
        }
    }

    let flux = res.flux;
    let mut rate = Vec::new();
    res.rate(&u, &mut rate);
    let r0 = l1(&rate, &res.active);
    let mut r = r0;
    // Roundoff level of the rate: flux differences over h plus the source.
    let fmax = u.iter().map(|&v| flux.f(v).abs()).fold(0.0, f64::max);
    let smax = res.source.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let floor = 100.0 * f64::EPSILON * (fmax / grid.h + smax);
    let target = (opts.drop * r0).max(floor);
    let mut rk = SspRk3::<f64>::new();
    let mut it = 0;
    while r > target {
        if it >= opts.max_iterations {
            return Err(Error::NotConverged(format!(
                "{} on n={n}: residual {r:e} after {it} iterations",
                scheme.flavor.tag()
            )));
        }
        let speed = u.iter().map(|&v| flux.df(v).abs()).fold(0.0, f64::max).max(1e-12);
        let dt = opts.cfl * grid.h / speed;
        rk.step(&mut u, 0.0, dt, |v, _, out| res.time_derivative(v, out), |_, _| {})?;
        res.rate(&u, &mut rate);
        r = l1(&rate, &res.active);
        it += 1;
        if !r.is_finite() || r > 1e3 * r0.max(1e-300) {
            return Err(Error::Diverged(format!("{} on n={n}: residual {r:e}", scheme.flavor.tag())));
        }
    }
    Ok(SteadyResult {
        field: Field1D { x: grid.x, h: grid.h, values: u, semantics: scheme.semantics, periodic: false },
        iterations: it,
        initial_residual: r0,
        final_residual: r,
    })
}

/// SSP RK3 with a fixed step on a periodic grid; the initial data follow the scheme's semantics.
pub fn unsteady_driver_1d(
    scheme: Scheme1D,
    problem: &Problem1D,
    grid: &Grid1D,
    dt: f64,
    nsteps: usize,
) -> Result<Field1D> {
    if !grid.periodic {
        return Err(Error::Config("unsteady driver needs a periodic grid".into()));
    }
    let res = Residual1D::new(scheme, problem, &grid.x, grid.h, true)?;
    let mut u = sample(problem, grid, scheme.semantics, 0.0)?;
    let mut rk = SspRk3::<f64>::new();
    for step in 0..nsteps {
        rk.step(&mut u, step as f64 * dt, dt, |v, _, out| res.time_derivative(v, out), |_, _| {})?;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged(format!("{} at step {step}", scheme.flavor.tag())));
        }
    }
    Ok(Field1D { x: grid.x.clone(), h: grid.h, values: u, semantics: scheme.semantics, periodic: true })
}

/// `(L1, L∞)` error against the exact solution at time `t` in the requested semantics.
///
/// Non-periodic fields skip `skip` points at each end.
pub fn errors_1d(field: &Field1D, problem: &Problem1D, t: f64, semantics: Semantics, skip: usize) -> Result<(f64, f64)> {
    let n = field.len();
    let range = if field.periodic { 0..n } else { skip..n - skip };
    let mut sum = 0.0;
    let mut max: f64 = 0.0;
    for i in range.clone() {
        let x = field.x[i];
        let exact = match semantics {
            Semantics::PointValue => problem.exact(x, t)?,
            Semantics::CellAverage => problem.exact_average(x, field.h, t)?,
        };
        let e = (field.values[i] - exact).abs();
        sum += e;
        max = max.max(e);
    }
    Ok((sum / range.len().max(1) as f64, max))
}

/// Exact `du/dt` at `t = 0` for the problem in the given semantics.
fn exact_rate(problem: &Problem1D, x: f64, h: f64, semantics: Semantics) -> f64 {
    if problem.is_steady() {
        return 0.0;
    }
    let flux = problem.flux();
    let u = |y: f64| problem.initial(y);
    match semantics {
        Semantics::PointValue => {
            let ux = match problem {
                Problem1D::GaussianPulse => {
                    let d = x - x.floor() - 0.5;
                    -160.0 * d * problem.initial(x)
                }
                _ => 2.0 * PI * (2.0 * PI * x).cos(),
            };
            -flux.df(u(x)) * ux
        }
        Semantics::CellAverage => -(flux.f(u(x + 0.5 * h)) - flux.f(u(x - 0.5 * h))) / h,
    }
}

/// Rate of the scheme on injected exact data minus the exact rate, at active points.
///
/// For mass-matrix schemes the exact rate is multiplied by the mass matrix.
pub fn truncation_error_1d(scheme: Scheme1D, problem: &Problem1D, grid: &Grid1D) -> Result<Vec<f64>> {
    let res = Residual1D::new(scheme, problem, &grid.x, grid.h, grid.periodic)?;
    let u = sample(problem, grid, scheme.semantics, 0.0)?;
    let mut rate = Vec::new();
    res.rate(&u, &mut rate);
    let mut exact: Vec<f64> = grid.x.iter().map(|&x| exact_rate(problem, x, grid.h, scheme.semantics)).collect();
    if scheme.mass_matrix && !problem.is_steady() {
        exact = fvp_mass_apply(&exact, scheme.mass_coefficient(), grid.periodic);
    }
    Ok(res.active.clone().map(|i| rate[i] - exact[i]).collect())
}

#[derive(Debug, Clone)]
pub struct GaussianPulseResult {
    pub x: Vec<f64>,
    pub initial: Vec<f64>,
    pub computed: Vec<f64>,
    pub l2_error: f64,
}

/// Advects the pulse with FD U-MUSCL(κ) on `nodes` periodic nodes (last node duplicates the first).
pub fn gaussian_pulse_run(kappa: f64, nodes: usize, cfl: f64, t_final: f64) -> Result<GaussianPulseResult> {
    let grid = Grid1D::periodic_nodes(nodes - 1);
    let steps = (t_final / (cfl * grid.h)).round() as usize;
    let dt = t_final / steps as f64;
    let problem = Problem1D::GaussianPulse;
    let field = unsteady_driver_1d(Scheme1D::fd(kappa), &problem, &grid, dt, steps)?;
    let initial: Vec<f64> = grid.x.iter().map(|&x| problem.initial(x)).collect();
    let mut e2 = 0.0;
    for (i, &x) in grid.x.iter().enumerate() {
        let e = field.values[i] - problem.exact(x, t_final)?;
        e2 += e * e * grid.h;
    }
    Ok(GaussianPulseResult { x: grid.x, initial, computed: field.values, l2_error: e2.sqrt() })
}
