//! Three-stage strong-stability-preserving Runge-Kutta integration.

use crate::error::Result;

/// Pointwise state supporting the linear combinations RK stages need.
pub trait State: Copy {
    /// `a x + b (y + dt r)`
    fn blend(a: f64, x: Self, b: f64, y: Self, dt: f64, r: Self) -> Self;
}

impl State for f64 {
    #[inline]
    fn blend(a: f64, x: f64, b: f64, y: f64, dt: f64, r: f64) -> f64 {
        a * x + b * (y + dt * r)
    }
}

impl<const N: usize> State for [f64; N] {
    #[inline]
    fn blend(a: f64, x: Self, b: f64, y: Self, dt: f64, r: Self) -> Self {
        std::array::from_fn(|i| a * x[i] + b * (y[i] + dt * r[i]))
    }
}

/// Scratch buffers for repeated steps of the Shu-Osher SSP RK3 scheme.
#[derive(Debug, Clone, Default)]
pub struct SspRk3<T> {
    stage: Vec<T>,
    rate: Vec<T>,
}

impl<T: State> SspRk3<T> {
    pub fn new() -> Self {
        Self { stage: Vec::new(), rate: Vec::new() }
    }

    /// Advances `u` from `t` to `t + dt`.
    ///
    /// `rhs(u, t, out)` fills the rates; `fix(u, t)` may overwrite
    /// prescribed values after each stage, at stage times `t+dt`, `t+dt/2`, `t+dt`.
    pub fn step<R, F>(&mut self, u: &mut [T], t: f64, dt: f64, mut rhs: R, mut fix: F) -> Result<()>
    where
        R: FnMut(&[T], f64, &mut Vec<T>) -> Result<()>,
        F: FnMut(&mut [T], f64),
    {
        let n = u.len();
        self.stage.clear();
        self.stage.extend_from_slice(u);

        rhs(u, t, &mut self.rate)?;
        for i in 0..n {
            self.stage[i] = T::blend(0.0, u[i], 1.0, u[i], dt, self.rate[i]);
        }
        fix(&mut self.stage, t + dt);

        rhs(&self.stage, t + dt, &mut self.rate)?;
        for i in 0..n {
            self.stage[i] = T::blend(0.75, u[i], 0.25, self.stage[i], dt, self.rate[i]);
        }
        fix(&mut self.stage, t + 0.5 * dt);

        rhs(&self.stage, t + 0.5 * dt, &mut self.rate)?;
        for i in 0..n {
            u[i] = T::blend(1.0 / 3.0, u[i], 2.0 / 3.0, self.stage[i], dt, self.rate[i]);
        }
        fix(u, t + dt);
        Ok(())
    }
}
