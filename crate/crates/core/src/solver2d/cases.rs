use std::f64::consts::PI;

use super::law::{Law, ScalarLaw};
use crate::error::{Error, Result};
use crate::flux::{GasModel, PrimitiveState};
use crate::mesh::Point;

/// Manufactured-solution amplitude used by the Euler convergence studies.
pub const MMS_C: f64 = 0.3;

const MMS_OFFSETS: [f64; 4] = [1.0, 0.15, 0.02, 1.0];

fn mms_shape(p: Point) -> f64 {
    (PI * (0.3 * p.x + 0.3 * p.y)).exp()
}

/// Exact primitive state `offsets + C e^{π(0.3x+0.3y)}` and the analytic `div F` at `p`.
pub fn mms_euler_exact_and_source(p: Point, c: f64) -> (PrimitiveState, [f64; 4]) {
    let gas = GasModel::default();
    let e = c * mms_shape(p);
    let w: [f64; 4] = std::array::from_fn(|i| MMS_OFFSETS[i] + e);
    let dw = 0.3 * PI * e;
    let ax = gas.flux_jacobian_unchecked(&w, [1.0, 0.0]);
    let ay = gas.flux_jacobian_unchecked(&w, [0.0, 1.0]);
    let s = std::array::from_fn(|i| (0..4).map(|k| (ax[i][k] + ay[i][k]) * dw).sum());
    (PrimitiveState::from_array(w), s)
}

/// Scalar analogue: `u = 1 + C e^{π(0.3x+0.3y)}` and `div F(u)` for the given law.
pub fn mms_scalar_exact_and_source(p: Point, law: ScalarLaw, c: f64) -> (f64, f64) {
    let e = c * mms_shape(p);
    let u = 1.0 + e;
    let du = 0.3 * PI * e;
    let ax = law.flux_jacobian(&[u], [1.0, 0.0])[0][0];
    let ay = law.flux_jacobian(&[u], [0.0, 1.0])[0][0];
    (u, (ax + ay) * du)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexParams {
    pub k: f64,
    pub u_inf: f64,
    pub v_inf: f64,
}

impl Default for VortexParams {
    fn default() -> Self {
        Self { k: 6.0, u_inf: 0.5, v_inf: 0.0 }
    }
}

/// Isentropic vortex centred at the origin at `t = 0`, advected with `(u∞, v∞)`.
pub fn vortex_exact(p: Point, t: f64, k: f64, u_inf: f64, v_inf: f64) -> Result<PrimitiveState> {
    let gamma = GasModel::default().gamma;
    let (xb, yb) = (p.x - u_inf * t, p.y - v_inf * t);
    let r2 = xb * xb + yb * yb;
    let g = (0.5 * (1.0 - r2)).exp();
    let temp = 1.0 - k * k * (gamma - 1.0) / (8.0 * PI * PI) * g * g;
    if temp <= 0.0 {
        return Err(Error::NonpositiveTemperature(temp));
    }
    let rho = temp.powf(1.0 / (gamma - 1.0));
    Ok(PrimitiveState::new(
        rho,
        u_inf - k * yb / (2.0 * PI) * g,
        v_inf + k * xb / (2.0 * PI) * g,
        rho.powf(gamma) / gamma,
    ))
}

/// An exact solution in reconstruction variables with its steady source.
pub trait Case<const N: usize> {
    fn exact(&self, p: Point, t: f64) -> Result<[f64; N]>;
    fn source(&self, p: Point) -> [f64; N];
    fn has_source(&self) -> bool;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Case2D {
    MmsEuler { c: f64 },
    Vortex(VortexParams),
}

impl Case<4> for Case2D {
    fn exact(&self, p: Point, t: f64) -> Result<[f64; 4]> {
        match *self {
            Case2D::MmsEuler { c } => Ok(mms_euler_exact_and_source(p, c).0.to_array()),
            Case2D::Vortex(v) => vortex_exact(p, t, v.k, v.u_inf, v.v_inf).map(PrimitiveState::to_array),
        }
    }

    fn source(&self, p: Point) -> [f64; 4] {
        match *self {
            Case2D::MmsEuler { c } => mms_euler_exact_and_source(p, c).1,
            Case2D::Vortex(_) => [0.0; 4],
        }
    }

    fn has_source(&self) -> bool {
        matches!(self, Case2D::MmsEuler { .. })
    }
}

/// Scalar manufactured solution for a given law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMms {
    pub law: ScalarLaw,
    pub c: f64,
}

impl Case<1> for ScalarMms {
    fn exact(&self, p: Point, _t: f64) -> Result<[f64; 1]> {
        Ok([mms_scalar_exact_and_source(p, self.law, self.c).0])
    }

    fn source(&self, p: Point) -> [f64; 1] {
        [mms_scalar_exact_and_source(p, self.law, self.c).1]
    }

    fn has_source(&self) -> bool {
        true
    }
}
