//! Unweighted least-squares gradient operators.
//!
//! Every operator is a set of per-node coefficient vectors `c_jk` such that
//! `sum_k c_jk (u_k - u_j)` gives the fitted derivatives at node `j`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LsqKind {
    /// Affine fit over edge neighbours; yields the gradient.
    Linear,
    /// Quadratic fit over neighbours and neighbours of neighbours; yields
    /// the gradient and the Hessian.
    Quadratic,
}

impl LsqKind {
    fn unknowns(self) -> usize {
        match self {
            LsqKind::Linear => 2,
            LsqKind::Quadratic => 5,
        }
    }
}

impl std::str::FromStr for LsqKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(LsqKind::Linear),
            "quadratic" => Ok(LsqKind::Quadratic),
            other => Err(Error::Config(format!("unknown lsq kind '{other}'"))),
        }
    }
}

/// Coefficients for `(u_x, u_y, u_xx, u_xy, u_yy)`; the last three are zero for linear fits.
pub type Coefficients = [f64; 5];

#[derive(Debug, Clone)]
pub struct GradientOperator {
    pub kind: LsqKind,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    coeffs: Vec<Coefficients>,
}

/// Ring-1 neighbours (linear) or ring-1 plus ring-2 neighbours (quadratic), sorted, centre excluded.
pub fn stencil(mesh: &Mesh, node: usize, kind: LsqKind) -> Vec<usize> {
    let mut s: Vec<usize> = mesh.neighbors(node).collect();
    if kind == LsqKind::Quadratic {
        let ring1 = s.clone();
        for k in ring1 {
            s.extend(mesh.neighbors(k).filter(|&m| m != node));
        }
    }
    s.sort_unstable();
    s.dedup();
    s
}

fn basis(d: [f64; 2], kind: LsqKind) -> Coefficients {
    match kind {
        LsqKind::Linear => [d[0], d[1], 0.0, 0.0, 0.0],
        LsqKind::Quadratic => [d[0], d[1], 0.5 * d[0] * d[0], d[0] * d[1], 0.5 * d[1] * d[1]],
    }
}

/// Least-squares coefficients at `center` for the given neighbour positions.
///
/// Columns are scaled by powers of the stencil radius before the QR
/// factorization; a diagonal entry of `R` below `1e-10` of the largest marks
/// the fit as rank deficient.
pub fn fit_coefficients(
    center: Point,
    neighbors: &[Point],
    kind: LsqKind,
    node: usize,
) -> Result<Vec<Coefficients>> {
    let p = kind.unknowns();
    let m = neighbors.len();
    let deficient = || Error::RankDeficient {
        node,
        kind: match kind {
            LsqKind::Linear => "linear",
            LsqKind::Quadratic => "quadratic",
        },
    };
    if m < p {
        return Err(deficient());
    }
    let r = neighbors
        .iter()
        .map(|q| {
            let d = center.to(*q);
            d[0].hypot(d[1])
        })
        .fold(0.0, f64::max);
    if r == 0.0 {
        return Err(deficient());
    }
    let scale = [r, r, r * r, r * r, r * r];

    let mut a = DMatrix::<f64>::zeros(m, p);
    for (i, q) in neighbors.iter().enumerate() {
        let b = basis(center.to(*q), kind);
        for c in 0..p {
            a[(i, c)] = b[c] / scale[c];
        }
    }
    let qr = a.qr();
    let rmat = qr.r();
    let diag_max = (0..p).map(|i| rmat[(i, i)].abs()).fold(0.0, f64::max);
    if (0..p).any(|i| rmat[(i, i)].abs() <= 1e-10 * diag_max) {
        return Err(deficient());
    }
    // pinv = R^-1 Q^T, a p x m matrix.
    let qt = qr.q().transpose();
    let pinv = rmat.solve_upper_triangular(&qt).ok_or_else(deficient)?;

    let mut out = vec![[0.0; 5]; m];
    for (i, row) in out.iter_mut().enumerate() {
        for c in 0..p {
            row[c] = pinv[(c, i)] / scale[c];
        }
    }
    Ok(out)
}

impl GradientOperator {
    pub fn build(mesh: &Mesh, kind: LsqKind) -> Result<Self> {
        let nn = mesh.num_nodes();
        let mut offsets = Vec::with_capacity(nn + 1);
        let mut neighbors = Vec::new();
        let mut coeffs = Vec::new();
        offsets.push(0);
        for j in 0..nn {
            let s = stencil(mesh, j, kind);
            let pts: Vec<Point> = s.iter().map(|&k| mesh.nodes[k]).collect();
            coeffs.extend(fit_coefficients(mesh.nodes[j], &pts, kind, j)?);
            neighbors.extend(s);
            offsets.push(neighbors.len());
        }
        Ok(Self { kind, offsets, neighbors, coeffs })
    }

    pub fn build_linear(mesh: &Mesh) -> Result<Self> {
        Self::build(mesh, LsqKind::Linear)
    }

    pub fn build_quadratic(mesh: &Mesh) -> Result<Self> {
        Self::build(mesh, LsqKind::Quadratic)
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Stencil of `node` with its coefficient vectors.
    pub fn stencil_of(&self, node: usize) -> (&[usize], &[Coefficients]) {
        let r = self.offsets[node]..self.offsets[node + 1];
        (&self.neighbors[r.clone()], &self.coeffs[r])
    }

    /// All five fitted derivatives `(u_x, u_y, u_xx, u_xy, u_yy)` at `node`.
    pub fn derivatives(&self, node: usize, u: &[f64]) -> [f64; 5] {
        let (nb, cf) = self.stencil_of(node);
        let mut d = [0.0; 5];
        for (&k, c) in nb.iter().zip(cf) {
            let du = u[k] - u[node];
            for i in 0..5 {
                d[i] += c[i] * du;
            }
        }
        d
    }

    #[inline]
    pub fn gradient(&self, node: usize, u: &[f64]) -> [f64; 2] {
        let (nb, cf) = self.stencil_of(node);
        let mut g = [0.0; 2];
        for (&k, c) in nb.iter().zip(cf) {
            let du = u[k] - u[node];
            g[0] += c[0] * du;
            g[1] += c[1] * du;
        }
        g
    }

    /// Gradients of every component of a vector field, as `[d/dx, d/dy]`.
    pub fn gradients_into<const N: usize>(&self, u: &[[f64; N]], out: &mut Vec<[[f64; N]; 2]>) {
        out.clear();
        out.reserve(u.len());
        for j in 0..u.len() {
            let (nb, cf) = self.stencil_of(j);
            let mut g = [[0.0; N]; 2];
            for (&k, c) in nb.iter().zip(cf) {
                for i in 0..N {
                    let du = u[k][i] - u[j][i];
                    g[0][i] += c[0] * du;
                    g[1][i] += c[1] * du;
                }
            }
            out.push(g);
        }
    }

    pub fn gradients(&self, u: &[f64]) -> Vec<[f64; 2]> {
        (0..u.len()).map(|j| self.gradient(j, u)).collect()
    }
}
