//! Node-centred edge-based residuals on median-dual volumes.
//!
//! The residual at node `j` is `Res_j = (1/V_j) Σ_k Φ_jk A_jk - s̃_j` and the
//! semi-discrete system is `du_j/dt = -Res_j` (with a quadrature mass matrix
//! for U-MUSCL-SSQ). Nodes in boundary rings 0, 1 and 2 are held at exact values
//! by the drivers.

mod cases;
mod drivers;
mod law;

pub use cases::{
    mms_euler_exact_and_source, mms_scalar_exact_and_source, vortex_exact, Case, Case2D, ScalarMms, VortexParams, MMS_C,
};
pub use drivers::{
    nodal_errors, steady_implicit_driver, truncation_error_probe_2d, unsteady_rk3_driver, ImplicitOptions,
    ImplicitResult, InitialGuess, NodalErrors, UnsteadyOptions,
};
pub use law::{EulerFlux, EulerLaw, Law, ScalarLaw};

use crate::error::{Error, Result};
use crate::lsq::{GradientOperator, LsqKind};
use crate::mesh::{DualMetrics, GridFamily, Mesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme2D {
    UMuscl,
    Cfsr3,
    UMusclSsq,
}

impl Scheme2D {
    pub fn tag(self) -> &'static str {
        match self {
            Scheme2D::UMuscl => "umuscl",
            Scheme2D::Cfsr3 => "cfsr3",
            Scheme2D::UMusclSsq => "umuscl-ssq",
        }
    }
}

impl std::str::FromStr for Scheme2D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "umuscl" => Ok(Scheme2D::UMuscl),
            "cfsr3" => Ok(Scheme2D::Cfsr3),
            "umuscl-ssq" | "ssq" => Ok(Scheme2D::UMusclSsq),
            other => Err(Error::Config(format!("unknown 2D scheme '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discretization2D {
    pub scheme: Scheme2D,
    pub kappa: f64,
    pub theta: f64,
    pub kappa_s: f64,
    pub lsq: LsqKind,
}

impl Discretization2D {
    pub fn umuscl(kappa: f64) -> Self {
        Self { scheme: Scheme2D::UMuscl, kappa, theta: 1.0 / 3.0, kappa_s: 0.25, lsq: LsqKind::Linear }
    }

    /// CFSR3 with `θ = 1/3` and `κ = 1/2`.
    pub fn cfsr3() -> Self {
        Self { scheme: Scheme2D::Cfsr3, kappa: 0.5, ..Self::umuscl(0.0) }
    }

    /// U-MUSCL-SSQ with `κ = 1/2` and the family's default `κₛ`.
    pub fn ssq(family: GridFamily) -> Self {
        Self { scheme: Scheme2D::UMusclSsq, kappa: 0.5, kappa_s: default_kappa_s(family), ..Self::umuscl(0.0) }
    }

    /// Zero gradients, `κ = 0`: `w_L = w_j`, `w_R = w_k`.
    pub fn first_order() -> Self {
        Self::umuscl(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa.is_finite() && self.theta.is_finite() && self.kappa_s.is_finite()) {
            return Err(Error::Config("non-finite scheme parameter".into()));
        }
        if self.scheme == Scheme2D::UMusclSsq && self.kappa != 0.5 {
            return Err(Error::Config(format!("umuscl-ssq requires kappa = 1/2, got {}", self.kappa)));
        }
        Ok(())
    }
}

/// `κₛ = 1/4` on triangles and `1/6` on quadrilaterals; regular tetrahedra would take `3/10`.
pub fn default_kappa_s(family: GridFamily) -> f64 {
    if family.is_simplex() {
        0.25
    } else {
        1.0 / 6.0
    }
}

pub const KAPPA_S_TETRAHEDRA: f64 = 0.3;

/// Nodal solution with its reconstruction variables and their LSQ gradients.
#[derive(Debug, Clone)]
pub struct NodalField<const N: usize> {
    pub q: Vec<[f64; N]>,
    pub w: Vec<[f64; N]>,
    pub grad: Vec<[[f64; N]; 2]>,
}

impl<const N: usize> NodalField<N> {
    pub fn new(q: Vec<[f64; N]>) -> Self {
        Self { q, w: Vec::new(), grad: Vec::new() }
    }

    /// Recomputes `w` and, when `lsq` is given, its gradients.
    pub fn refresh<L: Law<N>>(&mut self, law: &L, lsq: Option<&GradientOperator>) -> Result<()> {
        self.w.clear();
        for q in &self.q {
            let w = law.to_recon(q)?;
            self.w.push(w);
        }
        match lsq {
            Some(op) => op.gradients_into(&self.w, &mut self.grad),
            None => {
                self.grad.clear();
                self.grad.resize(self.q.len(), [[0.0; N]; 2]);
            }
        }
        Ok(())
    }
}

#[inline]
fn grad_dot<const N: usize>(g: &[[f64; N]; 2], d: [f64; 2]) -> [f64; N] {
    std::array::from_fn(|i| g[0][i] * d[0] + g[1][i] * d[1])
}

#[inline]
fn mat_vec<const N: usize>(a: &[[f64; N]; N], x: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| (0..N).map(|k| a[i][k] * x[k]).sum())
}

/// Edge-loop residual assembly for one mesh, discretization and law.
pub struct Assembler<'m, L, const N: usize> {
    pub mesh: &'m Mesh,
    pub metrics: &'m DualMetrics,
    pub disc: Discretization2D,
    pub law: L,
    pub lsq: GradientOperator,
    edges: Vec<usize>,
}

impl<'m, L: Law<N>, const N: usize> Assembler<'m, L, N> {
    pub fn new(mesh: &'m Mesh, metrics: &'m DualMetrics, disc: Discretization2D, law: L) -> Result<Self> {
        disc.validate()?;
        let lsq = GradientOperator::build(mesh, disc.lsq)?;
        Ok(Self { mesh, metrics, disc, law, lsq, edges: (0..mesh.num_edges()).collect() })
    }

    /// Restricts assembly to edges touching at least one node outside rings 0..2.
    ///
    /// Residuals at held nodes are then incomplete and must not be used.
    pub fn restrict_to_free_nodes(&mut self) {
        let m = self.mesh;
        self.edges = (0..m.num_edges())
            .filter(|&e| {
                let [j, k] = m.edges[e];
                !m.is_dirichlet(j) || !m.is_dirichlet(k)
            })
            .collect();
    }

    fn needs_gradients(&self) -> bool {
        self.disc.kappa != 1.0 || self.disc.scheme == Scheme2D::Cfsr3
    }

    pub fn refresh(&self, field: &mut NodalField<N>) -> Result<()> {
        field.refresh(&self.law, self.needs_gradients().then_some(&self.lsq))
    }

    /// `Σ_k Φ_jk A_jk` at every node from a refreshed field.
    pub fn flux_balance(&self, field: &NodalField<N>, out: &mut Vec<[f64; N]>) -> Result<()> {
        let m = self.mesh;
        out.clear();
        out.resize(m.num_nodes(), [0.0; N]);
        let kappa = self.disc.kappa;
        let theta = self.disc.theta;
        let cfsr = self.disc.scheme == Scheme2D::Cfsr3;
        let (w, g) = (&field.w, &field.grad);
        for &e in &self.edges {
            let [j, k] = m.edges[e];
            let d = m.nodes[j].to(m.nodes[k]);
            let n = self.metrics.unit_normals[e];
            let a = self.metrics.areas[e];
            let dj = grad_dot(&g[j], d);
            let dk = grad_dot(&g[k], d);
            let wl: [f64; N] =
                std::array::from_fn(|i| w[j][i] + 0.5 * kappa * (w[k][i] - w[j][i]) + 0.5 * (1.0 - kappa) * dj[i]);
            let wr: [f64; N] =
                std::array::from_fn(|i| w[k][i] - 0.5 * kappa * (w[k][i] - w[j][i]) - 0.5 * (1.0 - kappa) * dk[i]);
            for s in [&wl, &wr] {
                if !self.law.admissible(s) {
                    return Err(Error::NonphysicalEdge { edge: e, rho: s[0], p: s[N - 1] });
                }
            }
            let diss = self.law.dissipation(&wl, &wr, n)?;
            let phi: [f64; N] = if cfsr {
                let (fj, fk) = (self.law.flux(&w[j], n), self.law.flux(&w[k], n));
                let dfj = mat_vec(&self.law.flux_jacobian(&w[j], n), &dj);
                let dfk = mat_vec(&self.law.flux_jacobian(&w[k], n), &dk);
                std::array::from_fn(|i| {
                    let avg = 0.5 * (fj[i] + fk[i]);
                    let fl = theta * avg + (1.0 - theta) * (fj[i] + 0.5 * dfj[i]);
                    let fr = theta * avg + (1.0 - theta) * (fk[i] - 0.5 * dfk[i]);
                    0.5 * (fl + fr - diss[i])
                })
            } else {
                let (fl, fr) = (self.law.flux(&wl, n), self.law.flux(&wr, n));
                std::array::from_fn(|i| 0.5 * (fl[i] + fr[i] - diss[i]))
            };
            for i in 0..N {
                out[j][i] += phi[i] * a;
                out[k][i] -= phi[i] * a;
            }
        }
        Ok(())
    }

    /// `(1/V_j) Σ_k ψ_jk V_jk` with `ψ_jk = κₛ(s_j+s_k)/2 + (1-κₛ)[s_j + ½∇s_j·Δx]`.
    pub fn ssq_quadrature(&self, s: &[[f64; N]], out: &mut Vec<[f64; N]>) {
        let m = self.mesh;
        let ks = self.disc.kappa_s;
        let mut grad = Vec::new();
        self.lsq.gradients_into(s, &mut grad);
        out.clear();
        out.resize(m.num_nodes(), [0.0; N]);
        for (e, &[j, k]) in m.edges.iter().enumerate() {
            let d = m.nodes[j].to(m.nodes[k]);
            let vjk = self.metrics.partial_volumes[e];
            let (gj, gk) = (grad_dot(&grad[j], d), grad_dot(&grad[k], d));
            for i in 0..N {
                let avg = 0.5 * (s[j][i] + s[k][i]);
                out[j][i] += vjk * (ks * avg + (1.0 - ks) * (s[j][i] + 0.5 * gj[i]));
                out[k][i] += vjk * (ks * avg + (1.0 - ks) * (s[k][i] - 0.5 * gk[i]));
            }
        }
        for (o, v) in out.iter_mut().zip(&self.metrics.volumes) {
            for x in o.iter_mut() {
                *x /= v;
            }
        }
    }

    /// Source as seen by the scheme: point values, or the SSQ quadrature.
    pub fn effective_source(&self, s: &[[f64; N]]) -> Vec<[f64; N]> {
        if self.disc.scheme == Scheme2D::UMusclSsq {
            let mut out = Vec::new();
            self.ssq_quadrature(s, &mut out);
            out
        } else {
            s.to_vec()
        }
    }

    /// `Res_j = (1/V_j) Σ Φ A - s̃_j` for conservative states `q`.
    pub fn assemble_residual(&self, q: &[[f64; N]], source: Option<&[[f64; N]]>) -> Result<Vec<[f64; N]>> {
        let mut field = NodalField::new(q.to_vec());
        self.refresh(&mut field)?;
        let mut out = Vec::new();
        self.residual_from_field(&field, source, &mut out)?;
        Ok(out)
    }

    /// As [`Self::assemble_residual`] from an already refreshed field and an effective source.
    pub fn residual_from_field(
        &self,
        field: &NodalField<N>,
        effective_source: Option<&[[f64; N]]>,
        out: &mut Vec<[f64; N]>,
    ) -> Result<()> {
        self.flux_balance(field, out)?;
        for (j, r) in out.iter_mut().enumerate() {
            let v = self.metrics.volumes[j];
            for i in 0..N {
                r[i] /= v;
                if let Some(s) = effective_source {
                    r[i] -= s[j][i];
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{compute_dual_metrics, generate_grid, Domain};

    #[test]
    fn uniform_state_gives_zero_residual_on_every_family() {
        let law = EulerLaw::new(EulerFlux::Roe { entropy_fix: None });
        for fam in GridFamily::ALL {
            let m = generate_grid(fam, 9, 9, Domain::unit(), Some(3)).unwrap();
            let met = compute_dual_metrics(&m).unwrap();
            for disc in [Discretization2D::umuscl(1.0 / 3.0), Discretization2D::cfsr3(), Discretization2D::ssq(fam)] {
                let a = Assembler::new(&m, &met, disc, law).unwrap();
                let q = vec![law.to_conservative(&[1.1, 0.4, -0.2, 0.9]); m.num_nodes()];
                let r = a.assemble_residual(&q, None).unwrap();
                for j in m.interior_nodes() {
                    assert!(r[j].iter().all(|v| v.abs() < 1e-12), "{fam} {disc:?} node {j}: {:?}", r[j]);
                }
            }
        }
    }

    #[test]
    fn linear_field_with_linear_flux_gives_exact_divergence() {
        let law = ScalarLaw::Linear { a: [0.7, -0.4] };
        let m = generate_grid(GridFamily::TriIrregular, 10, 10, Domain::unit(), Some(2)).unwrap();
        let met = compute_dual_metrics(&m).unwrap();
        let a = Assembler::new(&m, &met, Discretization2D::umuscl(0.3), law).unwrap();
        let q: Vec<[f64; 1]> = m.nodes.iter().map(|p| [2.0 * p.x + 3.0 * p.y]).collect();
        let r = a.assemble_residual(&q, None).unwrap();
        let div = 0.7 * 2.0 - 0.4 * 3.0;
        for j in m.nodes.iter().enumerate().filter(|(j, _)| !m.is_boundary(*j)).map(|(j, _)| j) {
            assert!((r[j][0] - div).abs() < 1e-12, "node {j}: {}", r[j][0]);
        }
    }

    #[test]
    fn ssq_quadrature_preserves_constants() {
        for fam in GridFamily::ALL {
            let m = generate_grid(fam, 8, 8, Domain::unit(), None).unwrap();
            let met = compute_dual_metrics(&m).unwrap();
            let a = Assembler::new(&m, &met, Discretization2D::ssq(fam), ScalarLaw::Linear { a: [1.0, 0.0] }).unwrap();
            let s = vec![[3.25]; m.num_nodes()];
            for (j, v) in a.effective_source(&s).iter().enumerate() {
                assert!((v[0] - 3.25).abs() < 1e-13, "{fam} node {j}");
            }
        }
    }
}
