//! Left/right face states and their equivalent algebraic forms.
//!
//! Edge `(j, k)` has its face at the midpoint; `w_L` is extrapolated from `j`
//! and `w_R` from `k`. Gradients may come from any source.

use crate::lsq::GradientOperator;
use crate::mesh::{Mesh, Point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconConfig {
    pub kappa: f64,
    pub theta: f64,
    pub yh_kappa3: f64,
}

impl Default for ReconConfig {
    fn default() -> Self {
        Self { kappa: 0.0, theta: 1.0 / 3.0, yh_kappa3: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacePair<T = f64> {
    pub left: T,
    pub right: T,
}

impl FacePair<f64> {
    pub fn jump(&self) -> f64 {
        self.right - self.left
    }
}

#[inline]
fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// One-sided U-MUSCL value: `u_j + (k/2)(u_k - u_j) + ((1-k)/2) g.dx`.
#[inline]
pub fn umuscl_extrapolate(u_j: f64, u_k: f64, g_dot_dx: f64, kappa: f64) -> f64 {
    u_j + 0.5 * kappa * (u_k - u_j) + 0.5 * (1.0 - kappa) * g_dot_dx
}

pub fn umuscl_pair(
    u_j: f64,
    u_k: f64,
    grad_j: [f64; 2],
    grad_k: [f64; 2],
    x_j: Point,
    x_k: Point,
    kappa: f64,
) -> FacePair {
    let d = x_j.to(x_k);
    FacePair {
        left: umuscl_extrapolate(u_j, u_k, dot(grad_j, d), kappa),
        right: umuscl_extrapolate(u_k, u_j, -dot(grad_k, d), kappa),
    }
}

/// Three-point κ-scheme at cell `i` of a uniform 1D grid.
///
/// `left` is the state at `i+1/2` seen from `i`; `right` is the state at
/// `i-1/2` seen from `i`.
pub fn umuscl_delta_1d(u_im1: f64, u_i: f64, u_ip1: f64, kappa: f64) -> FacePair {
    let dm = u_i - u_im1;
    let dp = u_ip1 - u_i;
    FacePair {
        left: u_i + 0.25 * ((1.0 - kappa) * dm + (1.0 + kappa) * dp),
        right: u_i - 0.25 * ((1.0 - kappa) * dp + (1.0 + kappa) * dm),
    }
}

/// Multi-dimensional Δ± form with `Δ- = 2 g_j.dx - Δ+`, `Δ+ = u_k - u_j`.
pub fn umuscl_pair_delta_form(
    u_j: f64,
    u_k: f64,
    grad_j: [f64; 2],
    grad_k: [f64; 2],
    x_j: Point,
    x_k: Point,
    kappa: f64,
) -> FacePair {
    let d = x_j.to(x_k);
    let dp = u_k - u_j;
    let dm_j = 2.0 * dot(grad_j, d) - dp;
    let dm_k = 2.0 * dot(grad_k, d) - dp;
    FacePair {
        left: u_j + 0.25 * ((1.0 - kappa) * dm_j + (1.0 + kappa) * dp),
        right: u_k - 0.25 * ((1.0 - kappa) * dm_k + (1.0 + kappa) * dp),
    }
}

/// `κ (u_j+u_k)/2 + (1-κ) [u_j + g_j.dx/2]`.
pub fn weighted_average_form(u_j: f64, u_k: f64, grad_j: [f64; 2], x_j: Point, x_k: Point, kappa: f64) -> f64 {
    let d = x_j.to(x_k);
    kappa * 0.5 * (u_j + u_k) + (1.0 - kappa) * (u_j + 0.5 * dot(grad_j, d))
}

/// The κ-form applied to flux values with parameter θ.
pub fn flux_pair_fsr(
    f_j: f64,
    f_k: f64,
    gradf_j: [f64; 2],
    gradf_k: [f64; 2],
    x_j: Point,
    x_k: Point,
    theta: f64,
) -> FacePair {
    umuscl_pair(f_j, f_k, gradf_j, gradf_k, x_j, x_k, theta)
}

/// Left state at `i+1/2` from the five values `u[0..5] = u_{i-2} .. u_{i+2}`.
///
/// Gradients are central differences and the Hessian is the central
/// difference of the central difference; `κ₃ = 0` adds
/// `(u_{i+2} - 2u_i + u_{i-2})/32` to the three-point κ-scheme.
pub fn yang_harris_1d(u: [f64; 5], kappa: f64, kappa3: f64) -> f64 {
    let base = umuscl_delta_1d(u[1], u[2], u[3], kappa).left;
    let grad_jump = 0.5 * (u[4] - u[3] - u[2] + u[1]);
    let second = 0.25 * (u[4] - 2.0 * u[2] + u[0]);
    let c = 0.25 * kappa3 * grad_jump + 0.25 * (1.0 - kappa3) * second;
    base + 0.5 * c
}

pub fn midpoint_average(pair: FacePair) -> f64 {
    0.5 * (pair.left + pair.right)
}

/// `(u_j+u_k)/2 - (g_k - g_j).dx/8`, the κ=1/2 midpoint average written directly.
pub fn midpoint_average_direct(u_j: f64, u_k: f64, grad_j: [f64; 2], grad_k: [f64; 2], x_j: Point, x_k: Point) -> f64 {
    let d = x_j.to(x_k);
    0.5 * (u_j + u_k) - 0.125 * dot([grad_k[0] - grad_j[0], grad_k[1] - grad_j[1]], d)
}

/// Uncorrected face value `κ (u_j+u_k)/2 + (1-κ)[u_j + g_j.(x_f - x_j)]`.
pub fn face_value_uncorrected(u_j: f64, u_k: f64, grad_j: [f64; 2], x_j: Point, x_face: Point, kappa: f64) -> f64 {
    kappa * 0.5 * (u_j + u_k) + (1.0 - kappa) * (u_j + dot(grad_j, x_j.to(x_face)))
}

/// Face value with `u_k` replaced by `u_p = u_k + g_k.(2x_f - x_j - x_k)`;
/// exact for linear fields wherever the face point lies.
#[allow(clippy::too_many_arguments)]
pub fn cell_centered_correction(
    u_j: f64,
    u_k: f64,
    grad_j: [f64; 2],
    grad_k: [f64; 2],
    x_j: Point,
    x_k: Point,
    x_face: Point,
    kappa: f64,
) -> f64 {
    let shift = [2.0 * x_face.x - x_j.x - x_k.x, 2.0 * x_face.y - x_j.y - x_k.y];
    let u_p = u_k + dot(grad_k, shift);
    face_value_uncorrected(u_j, u_p, grad_j, x_j, x_face, kappa)
}

/// Analytic fields used by the jump and error probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeField {
    /// `1 + 0.2 sin(2.3πx + 2.5πy)`
    Sine,
    /// `8.75 - 1.3x + 3.7y + 2.1x² + 0.3xy - 7.5y²`
    Quadratic,
}

impl ProbeField {
    pub fn eval(self, p: Point) -> f64 {
        match self {
            ProbeField::Sine => {
                1.0 + 0.2 * (2.3 * std::f64::consts::PI * p.x + 2.5 * std::f64::consts::PI * p.y).sin()
            }
            ProbeField::Quadratic => {
                8.75 - 1.3 * p.x + 3.7 * p.y + 2.1 * p.x * p.x + 0.3 * p.x * p.y - 7.5 * p.y * p.y
            }
        }
    }
}

impl std::str::FromStr for ProbeField {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "sine" | "sin" => Ok(ProbeField::Sine),
            "quadratic" => Ok(ProbeField::Quadratic),
            other => Err(crate::Error::Config(format!("unknown probe field '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpError {
    /// `max |u_R - u_L|` over all edges.
    pub jump: f64,
    /// `max (|u_L - u_e| + |u_R - u_e|)` over all edges, `u_e` at the edge midpoint.
    pub error: f64,
}

pub fn jump_and_error_probe(mesh: &Mesh, lsq: &GradientOperator, kappa: f64, field: ProbeField) -> JumpError {
    let u: Vec<f64> = mesh.nodes.iter().map(|&p| field.eval(p)).collect();
    let g = lsq.gradients(&u);
    let mut out = JumpError { jump: 0.0, error: 0.0 };
    for &[j, k] in &mesh.edges {
        let (xj, xk) = (mesh.nodes[j], mesh.nodes[k]);
        let pair = umuscl_pair(u[j], u[k], g[j], g[k], xj, xk, kappa);
        let exact = field.eval(xj.midpoint(xk));
        out.jump = out.jump.max(pair.jump().abs());
        out.error = out.error.max((pair.left - exact).abs() + (pair.right - exact).abs());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_grid, Domain, GridFamily};

    const O: Point = Point::new(0.0, 0.0);
    const E: Point = Point::new(1.0, 0.0);

    #[test]
    fn consistent_linear_data_gives_midpoint_for_every_kappa() {
        for kappa in [-1.0, 0.0, 1.0 / 3.0, 0.5, 1.0] {
            let p = umuscl_pair(1.0, 3.0, [2.0, 0.0], [2.0, 0.0], O, E, kappa);
            assert!((p.left - 2.0).abs() < 1e-15 && (p.right - 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn three_point_examples() {
        // Nodes at -1, 0, 1 with u = (0, 1, 4); central gradient 2.
        let a = umuscl_pair(1.0, 4.0, [2.0, 0.0], [0.0; 2], O, E, 1.0 / 3.0).left;
        let b = umuscl_delta_1d(0.0, 1.0, 4.0, 1.0 / 3.0).left;
        let c = weighted_average_form(1.0, 4.0, [2.0, 0.0], O, E, 1.0 / 3.0);
        for v in [a, b, c] {
            assert!((v - 13.0 / 6.0).abs() < 1e-15);
        }
        assert!((umuscl_delta_1d(0.0, 1.0, 2.0, 0.37).left - 1.5).abs() < 1e-15);
        assert!((umuscl_delta_1d(1.0, 0.0, 1.0, 0.5).left - 0.25).abs() < 1e-15);
    }

    #[test]
    fn x_squared_with_exact_gradient_at_half_kappa() {
        // u = x^2: u(0)=0, u(1)=1, u'(0)=0, u'(1)=2.
        let p = umuscl_pair(0.0, 1.0, [0.0; 2], [2.0, 0.0], O, E, 0.5);
        assert!((p.left - 0.25).abs() < 1e-15 && (p.right - 0.25).abs() < 1e-15);
    }

    #[test]
    fn flux_reconstruction_examples() {
        let p = flux_pair_fsr(3.0, 3.0, [0.0; 2], [0.0; 2], O, E, 1.0 / 3.0);
        assert_eq!((p.left, p.right), (3.0, 3.0));
        for theta in [0.0, 1.0 / 3.0, 0.9] {
            let p = flux_pair_fsr(1.0, 3.0, [2.0, 0.0], [2.0, 0.0], O, E, theta);
            assert!((p.left - 2.0).abs() < 1e-15);
        }
        // f = x^2 at nodes -1, 0, 1 with central gradient 0 at 0.
        let p = flux_pair_fsr(0.0, 1.0, [0.0; 2], [2.0, 0.0], O, E, 1.0 / 3.0);
        assert!((p.left - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn yang_harris_matches_third_order_target() {
        let u = [4.0, 1.0, 0.0, 1.0, 4.0];
        let yh = yang_harris_1d(u, -1.0 / 6.0, 0.0);
        let k13 = umuscl_delta_1d(1.0, 0.0, 1.0, 1.0 / 3.0).left;
        assert!((yh - 1.0 / 6.0).abs() < 1e-15);
        assert!((yh - k13).abs() < 1e-15);
        assert!((yang_harris_1d([0.0, 1.0, 2.0, 3.0, 4.0], 0.3, 0.0) - 2.5).abs() < 1e-15);
        assert_eq!(yang_harris_1d([7.0; 5], -1.0 / 6.0, 0.0), 7.0);
    }

    #[test]
    fn midpoint_average_matches_direct_formula() {
        let cases = [
            (0.0, 1.0, [0.0, 0.0], [2.0, 0.0], E),
            (1.5, -0.3, [0.2, -1.1], [3.0, 0.4], Point::new(0.3, -0.7)),
            (2.0, 2.0, [1.0, 1.0], [1.0, 1.0], Point::new(-1.0, 2.0)),
        ];
        for (uj, uk, gj, gk, xk) in cases {
            let m = midpoint_average(umuscl_pair(uj, uk, gj, gk, O, xk, 0.5));
            assert!((m - midpoint_average_direct(uj, uk, gj, gk, O, xk)).abs() < 1e-15);
        }
    }

    #[test]
    fn cell_centered_correction_restores_linear_exactness() {
        let f = |p: Point| 3.0 * p.x - 2.0 * p.y;
        let g = [3.0, -2.0];
        let (xj, xk) = (Point::new(0.0, 0.0), Point::new(1.0, 0.4));
        let mid = xj.midpoint(xk);
        for kappa in [0.0, 1.0 / 3.0, 0.5] {
            let a = cell_centered_correction(f(xj), f(xk), g, g, xj, xk, mid, kappa);
            let b = umuscl_pair(f(xj), f(xk), g, g, xj, xk, kappa).left;
            assert!((a - b).abs() < 1e-15);

            let xf = Point::new(0.55, 0.05);
            let corrected = cell_centered_correction(f(xj), f(xk), g, g, xj, xk, xf, kappa);
            assert!((corrected - f(xf)).abs() < 1e-14);
            let plain = face_value_uncorrected(f(xj), f(xk), g, xj, xf, kappa);
            if kappa != 0.0 {
                assert!((plain - f(xf)).abs() > 1e-3);
            }
        }
        let c = cell_centered_correction(5.0, 5.0, [0.0; 2], [0.0; 2], xj, xk, Point::new(0.2, 0.9), 0.3);
        assert_eq!(c, 5.0);
    }

    #[test]
    fn probe_on_quadratic_field() {
        let m = generate_grid(GridFamily::TriIrregular, 14, 14, Domain::unit(), Some(1)).unwrap();
        let q = GradientOperator::build_quadratic(&m).unwrap();
        let l = GradientOperator::build_linear(&m).unwrap();
        for kappa in [0.0, 1.0 / 3.0, 0.5, 0.75] {
            let r = jump_and_error_probe(&m, &q, kappa, ProbeField::Quadratic);
            assert!(r.jump < 1e-10, "kappa {kappa}: {r:?}");
        }
        let r = jump_and_error_probe(&m, &q, 0.5, ProbeField::Quadratic);
        assert!(r.error < 1e-10);
        let r = jump_and_error_probe(&m, &l, 1.0, ProbeField::Quadratic);
        assert!(r.jump < 1e-12);
    }
}
