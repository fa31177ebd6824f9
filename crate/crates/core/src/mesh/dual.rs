use super::{Element, Mesh, Point};
use crate::error::{Error, Result};

/// Median-dual metrics of a mesh.
///
/// `normals[e]` is the directed-area vector of edge `e = (j, k)`, oriented
/// from `j` to `k`. `partial_volumes[e] = (x_k - x_j) . n_jk / 4` is shared by
/// both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct DualMetrics {
    pub normals: Vec<[f64; 2]>,
    pub areas: Vec<f64>,
    pub unit_normals: Vec<[f64; 2]>,
    pub volumes: Vec<f64>,
    pub partial_volumes: Vec<f64>,
}

impl DualMetrics {
    /// Directed-area vector of an incident edge as seen from the node.
    #[inline]
    pub fn normal_from(&self, edge: usize, sign: f64) -> [f64; 2] {
        let n = self.normals[edge];
        [sign * n[0], sign * n[1]]
    }
}

fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|a| {
            let (p, q) = (pts[a], pts[(a + 1) % n]);
            p.x * q.y - q.x * p.y
        })
        .sum::<f64>()
        * 0.5
}

pub fn compute_dual_metrics(mesh: &Mesh) -> Result<DualMetrics> {
    let nn = mesh.num_nodes();
    let ne = mesh.num_edges();
    let mut normals = vec![[0.0; 2]; ne];
    let mut volumes = vec![0.0; nn];

    let edge_id = |p: usize, q: usize| -> (usize, f64) {
        let inc = mesh
            .incident(p)
            .iter()
            .find(|i| i.other == q)
            .expect("element side is a mesh edge");
        (inc.edge, inc.sign)
    };

    let tol = 1e-12 * mesh.spacing * mesh.spacing;
    let mut buf = [0usize; 4];
    for (ie, el) in mesh.elements.iter().enumerate() {
        let verts = el.vertices();
        let m = verts.len();
        buf[..m].copy_from_slice(verts);
        let pts: Vec<Point> = buf[..m].iter().map(|&v| mesh.nodes[v]).collect();
        let mut area = signed_area(&pts);
        if area.abs() <= tol || !area.is_finite() {
            return Err(Error::DegenerateElement { element: ie, area });
        }
        if area < 0.0 {
            buf[..m].reverse();
            area = -area;
        }
        let v = &buf[..m];
        let pts: Vec<Point> = v.iter().map(|&a| mesh.nodes[a]).collect();
        let centroid = Point::new(
            pts.iter().map(|p| p.x).sum::<f64>() / m as f64,
            pts.iter().map(|p| p.y).sum::<f64>() / m as f64,
        );

        for a in 0..m {
            let (p, q) = (v[a], v[(a + 1) % m]);
            let mid = pts[a].midpoint(pts[(a + 1) % m]);
            // Segment from the side midpoint to the centroid, rotated clockwise,
            // points from p towards q for a counter-clockwise element.
            let d = mid.to(centroid);
            let (edge, sign) = edge_id(p, q);
            normals[edge][0] += sign * d[1];
            normals[edge][1] -= sign * d[0];
        }

        match el {
            Element::Tri(_) => {
                for &a in v {
                    volumes[a] += area / 3.0;
                }
            }
            Element::Quad(_) => {
                for a in 0..m {
                    let prev = pts[(a + m - 1) % m];
                    let next = pts[(a + 1) % m];
                    let frag = [pts[a], pts[a].midpoint(next), centroid, pts[a].midpoint(prev)];
                    volumes[v[a]] += signed_area(&frag);
                }
            }
        }
    }

    let areas: Vec<f64> = normals.iter().map(|n| n[0].hypot(n[1])).collect();
    let unit_normals = normals
        .iter()
        .zip(&areas)
        .map(|(n, a)| [n[0] / a, n[1] / a])
        .collect();
    let partial_volumes = (0..ne)
        .map(|e| {
            let d = mesh.edge_vector(e);
            0.25 * (d[0] * normals[e][0] + d[1] * normals[e][1])
        })
        .collect();

    if let Some(e) = areas.iter().position(|&a| !(a > 0.0)) {
        return Err(Error::InvalidGrid(format!("edge {e} has zero directed area")));
    }
    Ok(DualMetrics { normals, areas, unit_normals, volumes, partial_volumes })
}

/// Maximum residuals of the edge-metric identities over non-boundary nodes.
///
/// Sums of directed areas are divided by `h`, first moments are already
/// dimensionless, and quadratic moments are divided by `h^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    pub sum_normals: f64,
    pub first_moment_x: f64,
    pub first_moment_y: f64,
    /// `max |sum_k V_jk - V_j| / V_j`.
    pub partial_volume: f64,
    /// `(xx, yy, xy)` quadratic moments; only reported for simplex families.
    pub quadratic_moments: Option<[f64; 3]>,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        let mut m = self
            .sum_normals
            .max(self.first_moment_x)
            .max(self.first_moment_y)
            .max(self.partial_volume);
        if let Some(q) = self.quadratic_moments {
            m = q.iter().fold(m, |a, &b| a.max(b));
        }
        m
    }
}

pub fn metric_identity_report(mesh: &Mesh, metrics: &DualMetrics) -> IdentityReport {
    let h = mesh.spacing;
    let mut rep = IdentityReport {
        sum_normals: 0.0,
        first_moment_x: 0.0,
        first_moment_y: 0.0,
        partial_volume: 0.0,
        quadratic_moments: mesh.family.is_simplex().then_some([0.0; 3]),
    };
    let vmax = |a: f64, v: [f64; 2]| a.max(v[0].abs()).max(v[1].abs());

    for j in 0..mesh.num_nodes() {
        if mesh.is_boundary(j) {
            continue;
        }
        let vol = metrics.volumes[j];
        let mut sn = [0.0; 2];
        let mut mx = [0.0; 2];
        let mut my = [0.0; 2];
        let mut qxx = [0.0; 2];
        let mut qyy = [0.0; 2];
        let mut qxy = [0.0; 2];
        let mut vsum = 0.0;
        for inc in mesh.incident(j) {
            let n = metrics.normal_from(inc.edge, inc.sign);
            let d = mesh.nodes[j].to(mesh.nodes[inc.other]);
            for c in 0..2 {
                sn[c] += n[c];
                mx[c] += 0.5 * d[0] * n[c];
                my[c] += 0.5 * d[1] * n[c];
                qxx[c] += 0.5 * d[0] * d[0] * n[c];
                qyy[c] += 0.5 * d[1] * d[1] * n[c];
                qxy[c] += 0.5 * d[0] * d[1] * n[c];
            }
            vsum += metrics.partial_volumes[inc.edge];
        }
        rep.sum_normals = vmax(rep.sum_normals, [sn[0] / h, sn[1] / h]);
        rep.first_moment_x = vmax(rep.first_moment_x, [mx[0] / vol - 1.0, mx[1] / vol]);
        rep.first_moment_y = vmax(rep.first_moment_y, [my[0] / vol, my[1] / vol - 1.0]);
        rep.partial_volume = rep.partial_volume.max((vsum - vol).abs() / vol);
        if let Some(q) = rep.quadratic_moments.as_mut() {
            let h3 = h * h * h;
            q[0] = vmax(q[0], [qxx[0] / h3, qxx[1] / h3]);
            q[1] = vmax(q[1], [qyy[0] / h3, qyy[1] / h3]);
            q[2] = vmax(q[2], [qxy[0] / h3, qxy[1] / h3]);
        }
    }
    rep
}
