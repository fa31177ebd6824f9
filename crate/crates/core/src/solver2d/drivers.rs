use nalgebra::SMatrix;

use super::cases::Case;
use super::law::Law;
use super::{Assembler, NodalField, Scheme2D};
use crate::error::{Error, Result};
use crate::mesh::{DualMetrics, Mesh, Point};
use crate::rk::SspRk3;

type Block<const N: usize> = [[f64; N]; N];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialGuess {
    /// Exact value at the domain centre everywhere off the held rings.
    Uniform,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImplicitOptions {
    pub cfl0: f64,
    pub cfl_max: f64,
    /// Required ratio of final to initial L1 residual.
    pub drop: f64,
    pub stall_iterations: usize,
    pub max_iterations: usize,
    pub max_sweeps: usize,
    pub sweep_drop: f64,
    pub init: InitialGuess,
}

impl Default for ImplicitOptions {
    fn default() -> Self {
        Self {
            cfl0: 10.0,
            cfl_max: 1e6,
            drop: 1e-10,
            stall_iterations: 500,
            max_iterations: 5000,
            max_sweeps: 30,
            sweep_drop: 0.1,
            init: InitialGuess::Uniform,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ImplicitResult<const N: usize> {
    pub field: NodalField<N>,
    pub iterations: usize,
    pub initial_residual: f64,
    pub final_residual: f64,
}

/// Volume-weighted `L1`, `L2` and `L∞` per component over interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalErrors {
    pub l1: Vec<f64>,
    pub l2: Vec<f64>,
    pub linf: Vec<f64>,
}

pub fn nodal_errors<const N: usize>(
    mesh: &Mesh,
    metrics: &DualMetrics,
    w: &[[f64; N]],
    exact: &[[f64; N]],
) -> NodalErrors {
    let (mut l1, mut l2, mut linf) = (vec![0.0; N], vec![0.0; N], vec![0.0f64; N]);
    let mut vol = 0.0;
    for j in mesh.interior_nodes() {
        let v = metrics.volumes[j];
        vol += v;
        for i in 0..N {
            let e = (w[j][i] - exact[j][i]).abs();
            l1[i] += e * v;
            l2[i] += e * e * v;
            linf[i] = linf[i].max(e);
        }
    }
    let vol = vol.max(f64::MIN_POSITIVE);
    NodalErrors {
        l1: l1.iter().map(|s| s / vol).collect(),
        l2: l2.iter().map(|s| (s / vol).sqrt()).collect(),
        linf,
    }
}

fn sample<const N: usize, C: Case<N>>(mesh: &Mesh, case: &C, t: f64) -> Result<Vec<[f64; N]>> {
    mesh.nodes.iter().map(|&p| case.exact(p, t)).collect()
}

fn free_l1<const N: usize>(mesh: &Mesh, r: &[[f64; N]]) -> f64 {
    let (mut s, mut c) = (0.0, 0usize);
    for j in (0..mesh.num_nodes()).filter(|&j| !mesh.is_dirichlet(j)) {
        s += r[j].iter().map(|x| x.abs()).sum::<f64>();
        c += 1;
    }
    s / c.max(1) as f64
}

fn invert<const N: usize>(a: &Block<N>, node: usize) -> Result<Block<N>> {
    let m = SMatrix::<f64, N, N>::from_fn(|i, k| a[i][k]);
    let inv = m.try_inverse().ok_or_else(|| Error::Singular(format!("diagonal block at node {node}")))?;
    Ok(std::array::from_fn(|i| std::array::from_fn(|k| inv[(i, k)])))
}

#[inline]
fn mv<const N: usize>(a: &Block<N>, x: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| (0..N).map(|k| a[i][k] * x[k]).sum())
}

/// Jacobian blocks of the first-order edge flux times area with respect to the two conservative states.
fn edge_blocks<L: Law<N>, const N: usize>(
    law: &L,
    qj: &[f64; N],
    qk: &[f64; N],
    n: [f64; 2],
    area: f64,
) -> Result<(Block<N>, Block<N>)> {
    let (wj, wk) = (law.to_recon(qj)?, law.to_recon(qk)?);
    let base = law.numerical_flux(&wj, &wk, n)?;
    let mut jl = [[0.0; N]; N];
    let mut jr = [[0.0; N]; N];
    for c in 0..N {
        for (left, jac) in [(true, &mut jl), (false, &mut jr)] {
            let mut q = if left { *qj } else { *qk };
            let eps = 1e-7 * q[c].abs().max(1.0);
            q[c] += eps;
            let w = law.to_recon(&q)?;
            let f = if left { law.numerical_flux(&w, &wk, n)? } else { law.numerical_flux(&wj, &w, n)? };
            for i in 0..N {
                jac[i][c] = (f[i] - base[i]) / eps * area;
            }
        }
    }
    Ok((jl, jr))
}

/// Defect correction: high-order residual, first-order flux Jacobian, block Gauss-Seidel inner solves.
///
/// Rings 0..2 are held at the exact solution; convergence is on the L1 residual over the free nodes.
pub fn steady_implicit_driver<L: Law<N>, C: Case<N>, const N: usize>(
    asm: &Assembler<'_, L, N>,
    case: &C,
    opts: ImplicitOptions,
) -> Result<ImplicitResult<N>> {
    let (mesh, met, law) = (asm.mesh, asm.metrics, &asm.law);
    let nn = mesh.num_nodes();
    let exact = sample(mesh, case, 0.0)?;
    let centre = {
        let (lo, hi) = mesh.nodes.iter().fold(
            (Point::new(f64::MAX, f64::MAX), Point::new(f64::MIN, f64::MIN)),
            |(lo, hi), p| (Point::new(lo.x.min(p.x), lo.y.min(p.y)), Point::new(hi.x.max(p.x), hi.y.max(p.y))),
        );
        case.exact(lo.midpoint(hi), 0.0)?
    };
    let q0: Vec<[f64; N]> = (0..nn)
        .map(|j| {
            let w = if opts.init == InitialGuess::Exact || mesh.is_dirichlet(j) { exact[j] } else { centre };
            law.to_conservative(&w)
        })
        .collect();
    let point_source: Vec<[f64; N]> = mesh.nodes.iter().map(|&p| case.source(p)).collect();
    let source = case.has_source().then(|| asm.effective_source(&point_source));

    let mut field = NodalField::new(q0);
    asm.refresh(&mut field)?;
    let mut res = Vec::new();
    asm.residual_from_field(&field, source.as_deref(), &mut res)?;
    let r0 = free_l1(mesh, &res);
    let smax = source.as_ref().map_or(0.0, |s| s.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs())));
    let fscale = field
        .w
        .iter()
        .map(|w| law.flux(w, [1.0, 0.0]).iter().chain(law.flux(w, [0.0, 1.0]).iter()).fold(0.0f64, |a, x| a.max(x.abs())))
        .fold(0.0f64, f64::max);
    let floor = 1e3 * f64::EPSILON * (fscale / mesh.spacing + smax);
    let target = (opts.drop * r0).max(floor);

    let free: Vec<usize> = (0..nn).filter(|&j| !mesh.is_dirichlet(j)).collect();
    let mut diag = vec![[[0.0; N]; N]; nn];
    let mut jl = vec![[[0.0; N]; N]; mesh.num_edges()];
    let mut jr = vec![[[0.0; N]; N]; mesh.num_edges()];
    let mut dq = vec![[0.0; N]; nn];
    let mut rhs = vec![[0.0; N]; nn];
    let mut trial = NodalField::new(Vec::new());

    let mut r = r0;
    let mut best = r0;
    let mut best_at = 0;
    let mut it = 0;
    while r > target {
        if it >= opts.max_iterations || it - best_at > opts.stall_iterations {
            return Err(Error::NotConverged(format!(
                "{} on {} nodes: residual {r:e} (start {r0:e}) after {it} iterations",
                asm.disc.scheme.tag(),
                nn
            )));
        }
        let cfl = (opts.cfl0 * r0 / r).min(opts.cfl_max);

        for d in diag.iter_mut() {
            *d = [[0.0; N]; N];
        }
        let mut pseudo = vec![0.0; nn];
        for (e, &[j, k]) in mesh.edges.iter().enumerate() {
            if mesh.is_dirichlet(j) && mesh.is_dirichlet(k) {
                continue;
            }
            let n = met.unit_normals[e];
            let a = met.areas[e];
            let (l, rr) = edge_blocks(law, &field.q[j], &field.q[k], n, a)?;
            let lam = law.spectral_radius(&field.w[j], n).max(law.spectral_radius(&field.w[k], n)) * a;
            pseudo[j] += lam;
            pseudo[k] += lam;
            for i in 0..N {
                for c in 0..N {
                    diag[j][i][c] += l[i][c];
                    diag[k][i][c] -= rr[i][c];
                }
            }
            jl[e] = l;
            jr[e] = rr;
        }
        let mut dinv = vec![[[0.0; N]; N]; nn];
        for &j in &free {
            for (i, row) in diag[j].iter_mut().enumerate() {
                row[i] += pseudo[j] / cfl;
            }
            dinv[j] = invert(&diag[j], j)?;
        }

        for &j in &free {
            let v = met.volumes[j];
            rhs[j] = std::array::from_fn(|i| -res[j][i] * v);
        }
        for x in dq.iter_mut() {
            *x = [0.0; N];
        }
        let offdiag = |inc: &crate::mesh::Incidence| -> Block<N> {
            if inc.sign > 0.0 {
                jr[inc.edge]
            } else {
                let m = jl[inc.edge];
                std::array::from_fn(|i| std::array::from_fn(|c| -m[i][c]))
            }
        };
        let lin_res = |dq: &[[f64; N]]| -> f64 {
            let mut s = 0.0;
            for &j in &free {
                let mut acc = rhs[j];
                let x = mv(&diag[j], &dq[j]);
                for i in 0..N {
                    acc[i] -= x[i];
                }
                for inc in mesh.incident(j) {
                    if mesh.is_dirichlet(inc.other) {
                        continue;
                    }
                    let y = mv(&offdiag(inc), &dq[inc.other]);
                    for i in 0..N {
                        acc[i] -= y[i];
                    }
                }
                s += acc.iter().map(|v| v.abs()).sum::<f64>();
            }
            s
        };
        let lin0 = lin_res(&dq);
        for _ in 0..opts.max_sweeps {
            for &j in &free {
                let mut acc = rhs[j];
                for inc in mesh.incident(j) {
                    if mesh.is_dirichlet(inc.other) {
                        continue;
                    }
                    let y = mv(&offdiag(inc), &dq[inc.other]);
                    for i in 0..N {
                        acc[i] -= y[i];
                    }
                }
                dq[j] = mv(&dinv[j], &acc);
            }
            if lin_res(&dq) <= opts.sweep_drop * lin0 {
                break;
            }
        }

        // Damp the update until every reconstructed state stays admissible.
        let mut scale = 1.0;
        loop {
            trial.q.clear();
            trial.q.extend(field.q.iter().zip(&dq).map(|(q, d)| std::array::from_fn(|i| q[i] + scale * d[i])));
            let ok = asm.refresh(&mut trial).and_then(|_| asm.residual_from_field(&trial, source.as_deref(), &mut res));
            match ok {
                Ok(()) => break,
                Err(_) if scale > 1e-3 => scale *= 0.5,
                Err(e) => return Err(e),
            }
        }
        std::mem::swap(&mut field, &mut trial);
        r = free_l1(mesh, &res);
        it += 1;
        if !r.is_finite() {
            return Err(Error::Diverged(format!("{} residual {r} at iteration {it}", asm.disc.scheme.tag())));
        }
        if r < best {
            best = r;
            best_at = it;
        }
    }
    Ok(ImplicitResult { field, iterations: it, initial_residual: r0, final_residual: r })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnsteadyOptions {
    pub dt: f64,
    pub nsteps: usize,
    /// Linear-residual drop for the quadrature mass solve.
    pub mass_drop: f64,
}

impl Default for UnsteadyOptions {
    fn default() -> Self {
        Self { dt: 5e-4, nsteps: 72_000, mass_drop: 1e-6 }
    }
}

/// SSP RK3 with exact values imposed on rings 0..2 at every stage.
///
/// For U-MUSCL-SSQ the rates solve `M r = -Res` with `M` the source quadrature;
/// held nodes take the exact time derivative inside `M`.
pub fn unsteady_rk3_driver<L: Law<N>, C: Case<N>, const N: usize>(
    asm: &Assembler<'_, L, N>,
    case: &C,
    opts: UnsteadyOptions,
) -> Result<NodalField<N>> {
    let (mesh, law) = (asm.mesh, &asm.law);
    let held: Vec<usize> = (0..mesh.num_nodes()).filter(|&j| mesh.is_dirichlet(j)).collect();
    let exact_q = |j: usize, t: f64| case.exact(mesh.nodes[j], t).map(|w| law.to_conservative(&w));
    let point_source: Vec<[f64; N]> = mesh.nodes.iter().map(|&p| case.source(p)).collect();
    let source = case.has_source().then(|| asm.effective_source(&point_source));
    let ssq = asm.disc.scheme == Scheme2D::UMusclSsq;
    let diag = 1.0 - 0.5 * asm.disc.kappa_s;

    let mut q = sample(mesh, case, 0.0)?.iter().map(|w| law.to_conservative(w)).collect::<Vec<_>>();
    let mut field = NodalField::new(Vec::new());
    let mut rhs = Vec::new();
    let mut mr = Vec::new();
    let mut fix_err = None;
    let mut rk = SspRk3::<[f64; N]>::new();
    for step in 0..opts.nsteps {
        let t = step as f64 * opts.dt;
        rk.step(
            &mut q,
            t,
            opts.dt,
            |u, ts, out| {
                field.q.clear();
                field.q.extend_from_slice(u);
                asm.refresh(&mut field)?;
                asm.residual_from_field(&field, source.as_deref(), &mut rhs)?;
                for x in rhs.iter_mut() {
                    for v in x.iter_mut() {
                        *v = -*v;
                    }
                }
                if !ssq {
                    std::mem::swap(out, &mut rhs);
                    return Ok(());
                }
                let dt_fd = 1e-4;
                for &j in &held {
                    let (a, b) = (exact_q(j, ts + dt_fd)?, exact_q(j, ts - dt_fd)?);
                    rhs[j] = std::array::from_fn(|i| (a[i] - b[i]) / (2.0 * dt_fd));
                }
                out.clear();
                out.extend_from_slice(&rhs);
                let norm0 = free_l1(mesh, &rhs).max(f64::MIN_POSITIVE);
                for _ in 0..200 {
                    asm.ssq_quadrature(out, &mut mr);
                    let mut s = 0.0;
                    for j in 0..out.len() {
                        if mesh.is_dirichlet(j) {
                            continue;
                        }
                        for i in 0..N {
                            let d = rhs[j][i] - mr[j][i];
                            s += d.abs();
                            out[j][i] += d / diag;
                        }
                    }
                    if s / (out.len() - held.len()).max(1) as f64 <= opts.mass_drop * norm0 {
                        break;
                    }
                }
                Ok(())
            },
            |u, ts| {
                for &j in &held {
                    match exact_q(j, ts) {
                        Ok(v) => u[j] = v,
                        Err(e) => fix_err = Some(e),
                    }
                }
            },
        )?;
        if let Some(e) = fix_err.take() {
            return Err(e);
        }
        if q.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Diverged(format!("{} at step {step}", asm.disc.scheme.tag())));
        }
    }
    field.q = q;
    asm.refresh(&mut field)?;
    Ok(field)
}

/// Volume-weighted interior L1 of the residual with the exact solution injected.
pub fn truncation_error_probe_2d<L: Law<N>, C: Case<N>, const N: usize>(
    asm: &Assembler<'_, L, N>,
    case: &C,
) -> Result<f64> {
    let (mesh, met) = (asm.mesh, asm.metrics);
    let q: Vec<[f64; N]> = sample(mesh, case, 0.0)?.iter().map(|w| asm.law.to_conservative(w)).collect();
    let point_source: Vec<[f64; N]> = mesh.nodes.iter().map(|&p| case.source(p)).collect();
    let source = case.has_source().then(|| asm.effective_source(&point_source));
    let mut field = NodalField::new(q);
    asm.refresh(&mut field)?;
    let mut res = Vec::new();
    asm.residual_from_field(&field, source.as_deref(), &mut res)?;
    let (mut s, mut v) = (0.0, 0.0);
    for j in mesh.interior_nodes() {
        s += res[j].iter().map(|x| x.abs()).sum::<f64>() * met.volumes[j];
        v += met.volumes[j];
    }
    Ok(s / v.max(f64::MIN_POSITIVE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{compute_dual_metrics, generate_grid, Domain, GridFamily};
    use crate::solver2d::{Case2D, Discretization2D, EulerFlux, EulerLaw, VortexParams};

    #[test]
    fn exact_start_is_cheaper_and_reaches_the_same_solution() {
        let m = generate_grid(GridFamily::Quad, 12, 12, Domain::unit(), None).unwrap();
        let met = compute_dual_metrics(&m).unwrap();
        let a = Assembler::new(&m, &met, Discretization2D::first_order(), EulerLaw::new(EulerFlux::Rusanov)).unwrap();
        let case = Case2D::MmsEuler { c: 0.3 };
        let run = |init| steady_implicit_driver(&a, &case, ImplicitOptions { init, ..Default::default() }).unwrap();
        let (exact, uniform) = (run(InitialGuess::Exact), run(InitialGuess::Uniform));
        assert!(exact.initial_residual < 0.1 * uniform.initial_residual);
        assert!(exact.iterations < uniform.iterations);
        for (x, y) in exact.field.w.iter().zip(&uniform.field.w) {
            assert!(x.iter().zip(y).all(|(a, b)| (a - b).abs() < 1e-9));
        }
    }

    #[test]
    fn roe_and_rusanov_both_converge_on_a_coarse_quad_grid() {
        let m = generate_grid(GridFamily::Quad, 16, 16, Domain::unit(), None).unwrap();
        let met = compute_dual_metrics(&m).unwrap();
        let case = Case2D::MmsEuler { c: 0.3 };
        let mut errs = Vec::new();
        for flux in [EulerFlux::Rusanov, EulerFlux::Roe { entropy_fix: None }] {
            let a = Assembler::new(&m, &met, Discretization2D::umuscl(0.0), EulerLaw::new(flux)).unwrap();
            let out = steady_implicit_driver(&a, &case, ImplicitOptions { drop: 1e-6, ..Default::default() }).unwrap();
            assert!(out.final_residual <= 1e-6 * out.initial_residual);
            let exact = sample(&m, &case, 0.0).unwrap();
            errs.push(nodal_errors(&m, &met, &out.field.w, &exact).l1[3]);
        }
        assert!(errs.iter().all(|&e| e > 0.0 && e < 1e-3), "{errs:?}");
    }

    #[test]
    fn uniform_flow_stays_uniform() {
        let m = generate_grid(GridFamily::TriRight, 12, 6, Domain::new(-6.0, 6.0, -3.0, 3.0), None).unwrap();
        let met = compute_dual_metrics(&m).unwrap();
        let case = Case2D::Vortex(VortexParams { k: 0.0, ..Default::default() });
        for disc in [Discretization2D::cfsr3(), Discretization2D::ssq(GridFamily::TriRight)] {
            let a = Assembler::new(&m, &met, disc, EulerLaw::new(EulerFlux::Roe { entropy_fix: None })).unwrap();
            let f = unsteady_rk3_driver(&a, &case, UnsteadyOptions { dt: 0.01, nsteps: 20, ..Default::default() }).unwrap();
            for w in &f.w {
                let d = [w[0] - 1.0, w[1] - 0.5, w[2], w[3] - 1.0 / 1.4];
                assert!(d.iter().all(|x| x.abs() < 1e-12), "{w:?}");
            }
        }
    }

    #[test]
    fn one_step_from_exact_data_moves_little() {
        let m = generate_grid(GridFamily::Quad, 30, 10, Domain::new(-6.0, 24.0, -5.0, 5.0), None).unwrap();
        let met = compute_dual_metrics(&m).unwrap();
        let case = Case2D::Vortex(VortexParams::default());
        let a = Assembler::new(&m, &met, Discretization2D::cfsr3(), EulerLaw::new(EulerFlux::Roe { entropy_fix: None }))
            .unwrap();
        let dt = 5e-4;
        let f = unsteady_rk3_driver(&a, &case, UnsteadyOptions { dt, nsteps: 1, ..Default::default() }).unwrap();
        let exact = sample(&m, &case, dt).unwrap();
        let e = nodal_errors(&m, &met, &f.w, &exact);
        assert!(e.linf.iter().all(|&x| x < dt), "{e:?}");
    }
}
