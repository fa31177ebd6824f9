//! Physical and numerical fluxes for scalar laws and the 2D Euler equations.
//!
//! Euler states travel as `[f64; 4]` arrays: primitive `(rho, u, v, p)` or
//! conservative `(rho, rho u, rho v, rho E)`. All projected fluxes take a
//! unit normal.

use crate::error::{Error, Result};

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    pub gamma: f64,
}

impl Default for GasModel {
    fn default() -> Self {
        Self { gamma: 1.4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl PrimitiveState {
    pub const fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Self { rho, u, v, p }
    }

    pub const fn to_array(self) -> Vec4 {
        [self.rho, self.u, self.v, self.p]
    }

    pub const fn from_array(w: Vec4) -> Self {
        Self::new(w[0], w[1], w[2], w[3])
    }
}

#[inline]
fn check(w: &Vec4) -> Result<()> {
    if w[0] > 0.0 && w[3] > 0.0 && w.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Nonphysical { rho: w[0], p: w[3] })
    }
}

impl GasModel {
    pub fn conservative(&self, w: &Vec4) -> Vec4 {
        let [r, u, v, p] = *w;
        [r, r * u, r * v, p / (self.gamma - 1.0) + 0.5 * r * (u * u + v * v)]
    }

    pub fn primitive(&self, q: &Vec4) -> Result<Vec4> {
        let r = q[0];
        let (u, v) = (q[1] / r, q[2] / r);
        let p = (self.gamma - 1.0) * (q[3] - 0.5 * r * (u * u + v * v));
        let w = [r, u, v, p];
        check(&w)?;
        Ok(w)
    }

    pub fn sound_speed(&self, w: &Vec4) -> f64 {
        (self.gamma * w[3] / w[0]).sqrt()
    }

    pub fn total_enthalpy(&self, w: &Vec4) -> f64 {
        let [r, u, v, p] = *w;
        self.gamma / (self.gamma - 1.0) * p / r + 0.5 * (u * u + v * v)
    }

    /// `(rho u_n, rho u u_n + p n_x, rho v u_n + p n_y, rho u_n H)`.
    pub fn euler_flux(&self, w: &Vec4, n: [f64; 2]) -> Result<Vec4> {
        check(w)?;
        Ok(self.euler_flux_unchecked(w, n))
    }

    #[inline]
    fn euler_flux_unchecked(&self, w: &Vec4, n: [f64; 2]) -> Vec4 {
        let [r, u, v, p] = *w;
        let un = u * n[0] + v * n[1];
        let h = self.total_enthalpy(w);
        [r * un, r * u * un + p * n[0], r * v * un + p * n[1], r * un * h]
    }

    /// `∂f/∂w` for the projected flux.
    pub fn flux_jacobian_primitive(&self, w: &Vec4, n: [f64; 2]) -> Result<Mat4> {
        check(w)?;
        Ok(self.flux_jacobian_unchecked(w, n))
    }

    #[inline]
    pub(crate) fn flux_jacobian_unchecked(&self, w: &Vec4, n: [f64; 2]) -> Mat4 {
        let [r, u, v, _] = *w;
        let g = self.gamma;
        let un = u * n[0] + v * n[1];
        let h = self.total_enthalpy(w);
        let q2 = u * u + v * v;
        [
            [un, r * n[0], r * n[1], 0.0],
            [un * u, r * (un + u * n[0]), r * u * n[1], n[0]],
            [un * v, r * v * n[0], r * (un + v * n[1]), n[1]],
            [0.5 * un * q2, r * (h * n[0] + un * u), r * (h * n[1] + un * v), g * un / (g - 1.0)],
        ]
    }

    /// `∂U/∂w`.
    pub fn dq_dw(&self, w: &Vec4) -> Mat4 {
        let [r, u, v, _] = *w;
        let gm1 = self.gamma - 1.0;
        [
            [1.0, 0.0, 0.0, 0.0],
            [u, r, 0.0, 0.0],
            [v, 0.0, r, 0.0],
            [0.5 * (u * u + v * v), r * u, r * v, 1.0 / gm1],
        ]
    }

    /// Roe-averaged `(rho, u, v, H, c)`.
    pub fn roe_average(&self, wl: &Vec4, wr: &Vec4) -> Result<[f64; 5]> {
        check(wl)?;
        check(wr)?;
        let s = (wr[0] / wl[0]).sqrt();
        let d = 1.0 + s;
        let rho = s * wl[0];
        let u = (wl[1] + s * wr[1]) / d;
        let v = (wl[2] + s * wr[2]) / d;
        let h = (self.total_enthalpy(wl) + s * self.total_enthalpy(wr)) / d;
        let c2 = (self.gamma - 1.0) * (h - 0.5 * (u * u + v * v));
        if c2 <= 0.0 || !c2.is_finite() {
            return Err(Error::VacuumRoeAverage);
        }
        Ok([rho, u, v, h, c2.sqrt()])
    }

    /// `|A_roe| (U_R - U_L)` with an optional Harten fix of width `delta * c`.
    pub fn roe_dissipation(&self, wl: &Vec4, wr: &Vec4, n: [f64; 2], entropy_fix: Option<f64>) -> Result<Vec4> {
        let [rho, u, v, h, c] = self.roe_average(wl, wr)?;
        let un = u * n[0] + v * n[1];
        let drho = wr[0] - wl[0];
        let (du, dv) = (wr[1] - wl[1], wr[2] - wl[2]);
        let dp = wr[3] - wl[3];
        let dun = du * n[0] + dv * n[1];

        let fix = |lam: f64| match entropy_fix {
            Some(delta) if lam < delta * c => {
                let d = delta * c;
                (lam * lam + d * d) / (2.0 * d)
            }
            _ => lam,
        };
        let l1 = fix((un - c).abs());
        let l2 = fix(un.abs());
        let l4 = fix((un + c).abs());

        let c2 = c * c;
        let a1 = l1 * (dp - rho * c * dun) / (2.0 * c2);
        let a2 = l2 * (drho - dp / c2);
        let a4 = l4 * (dp + rho * c * dun) / (2.0 * c2);
        let (sx, sy) = (du - dun * n[0], dv - dun * n[1]);
        let a3 = l2 * rho;

        Ok([
            a1 + a2 + a4,
            a1 * (u - c * n[0]) + a2 * u + a4 * (u + c * n[0]) + a3 * sx,
            a1 * (v - c * n[1]) + a2 * v + a4 * (v + c * n[1]) + a3 * sy,
            a1 * (h - c * un) + a2 * 0.5 * (u * u + v * v) + a4 * (h + c * un) + a3 * (u * sx + v * sy),
        ])
    }

    /// `(|û_n| + ĉ)(U_R - U_L)`.
    pub fn rusanov_dissipation(&self, wl: &Vec4, wr: &Vec4, n: [f64; 2]) -> Result<Vec4> {
        let [_, u, v, _, c] = self.roe_average(wl, wr)?;
        let lam = (u * n[0] + v * n[1]).abs() + c;
        let (ql, qr) = (self.conservative(wl), self.conservative(wr));
        Ok(std::array::from_fn(|i| lam * (qr[i] - ql[i])))
    }

    pub fn roe_flux(&self, wl: &Vec4, wr: &Vec4, n: [f64; 2]) -> Result<Vec4> {
        self.roe_flux_with_fix(wl, wr, n, None)
    }

    pub fn roe_flux_with_fix(&self, wl: &Vec4, wr: &Vec4, n: [f64; 2], entropy_fix: Option<f64>) -> Result<Vec4> {
        let d = self.roe_dissipation(wl, wr, n, entropy_fix)?;
        Ok(central_minus_half(&self.euler_flux_unchecked(wl, n), &self.euler_flux_unchecked(wr, n), &d))
    }

    pub fn rusanov_flux(&self, wl: &Vec4, wr: &Vec4, n: [f64; 2]) -> Result<Vec4> {
        let d = self.rusanov_dissipation(wl, wr, n)?;
        Ok(central_minus_half(&self.euler_flux_unchecked(wl, n), &self.euler_flux_unchecked(wr, n), &d))
    }

    /// Conservative flux Jacobian `∂f/∂U` at `w`.
    pub fn flux_jacobian_conservative(&self, w: &Vec4, n: [f64; 2]) -> Mat4 {
        let a = self.flux_jacobian_unchecked(w, n);
        let [r, u, v, _] = *w;
        let gm1 = self.gamma - 1.0;
        // ∂w/∂U
        let q2 = u * u + v * v;
        let m: Mat4 = [
            [1.0, 0.0, 0.0, 0.0],
            [-u / r, 1.0 / r, 0.0, 0.0],
            [-v / r, 0.0, 1.0 / r, 0.0],
            [0.5 * gm1 * q2, -gm1 * u, -gm1 * v, gm1],
        ];
        mat_mul(&a, &m)
    }
}

#[inline]
fn central_minus_half(fl: &Vec4, fr: &Vec4, d: &Vec4) -> Vec4 {
    std::array::from_fn(|i| 0.5 * (fl[i] + fr[i]) - 0.5 * d[i])
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn euler_flux(w: PrimitiveState, nhat: [f64; 2]) -> Result<Vec4> {
    GasModel::default().euler_flux(&w.to_array(), nhat)
}

pub fn roe_flux(wl: PrimitiveState, wr: PrimitiveState, nhat: [f64; 2]) -> Result<Vec4> {
    GasModel::default().roe_flux(&wl.to_array(), &wr.to_array(), nhat)
}

pub fn rusanov_flux(wl: PrimitiveState, wr: PrimitiveState, nhat: [f64; 2]) -> Result<Vec4> {
    GasModel::default().rusanov_flux(&wl.to_array(), &wr.to_array(), nhat)
}

pub fn flux_jacobian_primitive(w: PrimitiveState, nhat: [f64; 2]) -> Result<Mat4> {
    GasModel::default().flux_jacobian_primitive(&w.to_array(), nhat)
}

/// One-dimensional scalar flux functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarFlux {
    /// `f = a u`
    Advection { a: f64 },
    /// `f = u²/2`
    Burgers,
}

impl ScalarFlux {
    #[inline]
    pub fn f(self, u: f64) -> f64 {
        match self {
            ScalarFlux::Advection { a } => a * u,
            ScalarFlux::Burgers => 0.5 * u * u,
        }
    }

    #[inline]
    pub fn df(self, u: f64) -> f64 {
        match self {
            ScalarFlux::Advection { a } => a,
            ScalarFlux::Burgers => u,
        }
    }
}

/// `½(f(uL)+f(uR)) - ½|f'(ū)|(uR-uL)` with `ū = (uL+uR)/2`.
#[inline]
pub fn scalar_upwind_flux(ul: f64, ur: f64, kind: ScalarFlux) -> f64 {
    0.5 * (kind.f(ul) + kind.f(ur)) - 0.5 * kind.df(0.5 * (ul + ur)).abs() * (ur - ul)
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: GasModel = GasModel { gamma: 1.4 };

    #[test]
    fn static_and_moving_state_fluxes() {
        let f = G.euler_flux(&[1.0, 0.0, 0.0, 1.0], [0.6, 0.8]).unwrap();
        assert_eq!(f, [0.0, 0.6, 0.8, 0.0]);
        let f = G.euler_flux(&[1.0, 1.0, 0.0, 1.0], [1.0, 0.0]).unwrap();
        for (a, b) in f.iter().zip([1.0, 2.0, 0.0, 4.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(G.euler_flux(&[-1.0, 0.0, 0.0, 1.0], [1.0, 0.0]).is_err());
    }

    #[test]
    fn static_state_jacobian_first_row() {
        let a = G.flux_jacobian_primitive(&[1.0, 0.0, 0.0, 1.0], [1.0, 0.0]).unwrap();
        assert_eq!(a[0], [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn roe_consistency_and_supersonic_upwinding() {
        let w = [1.0, 0.5, 0.1, 1.0];
        let n = [0.8, -0.6];
        let f = G.euler_flux(&w, n).unwrap();
        assert_eq!(G.roe_flux(&w, &w, n).unwrap(), f);
        assert_eq!(G.rusanov_flux(&w, &w, n).unwrap(), f);

        let wl = [1.0, -3.0, 0.2, 1.0];
        let wr = [1.1, -3.2, 0.1, 1.2];
        let phi = G.roe_flux(&wl, &wr, [1.0, 0.0]).unwrap();
        let fr = G.euler_flux(&wr, [1.0, 0.0]).unwrap();
        for i in 0..4 {
            assert!((phi[i] - fr[i]).abs() < 1e-12 * (1.0 + fr[i].abs()));
        }
    }

    #[test]
    fn entropy_fix_only_alters_small_eigenvalues() {
        let wl = [1.0, 0.3, 0.0, 1.0];
        let wr = [0.9, 0.35, 0.05, 0.85];
        let n = [1.0, 0.0];
        let plain = G.roe_flux(&wl, &wr, n).unwrap();
        let fixed = G.roe_flux_with_fix(&wl, &wr, n, Some(1e-3)).unwrap();
        assert_eq!(plain, fixed);
        let fixed = G.roe_flux_with_fix(&wl, &wr, n, Some(0.5)).unwrap();
        assert_ne!(plain, fixed);
    }

    #[test]
    fn scalar_upwind_examples() {
        assert_eq!(scalar_upwind_flux(2.0, 5.0, ScalarFlux::Advection { a: 1.0 }), 2.0);
        assert_eq!(scalar_upwind_flux(1.0, 0.0, ScalarFlux::Burgers), 0.5);
        assert_eq!(scalar_upwind_flux(0.7, 0.7, ScalarFlux::Burgers), ScalarFlux::Burgers.f(0.7));
    }

    #[test]
    fn conservative_jacobian_matches_finite_differences() {
        let w = [1.2, 0.3, -0.4, 0.9];
        let n = [0.6, 0.8];
        let a = G.flux_jacobian_conservative(&w, n);
        let q = G.conservative(&w);
        for c in 0..4 {
            let h = 1e-6 * (1.0 + q[c].abs());
            let (mut qp, mut qm) = (q, q);
            qp[c] += h;
            qm[c] -= h;
            let fp = G.euler_flux(&G.primitive(&qp).unwrap(), n).unwrap();
            let fm = G.euler_flux(&G.primitive(&qm).unwrap(), n).unwrap();
            for r in 0..4 {
                let fd = (fp[r] - fm[r]) / (2.0 * h);
                assert!((fd - a[r][c]).abs() < 1e-7, "({r},{c}) {fd} vs {}", a[r][c]);
            }
        }
    }
}
