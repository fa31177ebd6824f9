//! Study configuration, convergence runs and report output.
//!
//! A study is a flat `key = value` file, optionally overridden from the command line.
//! Exactly one of `problem` (1D) or `case` (2D) selects the driver.

mod report;

pub use report::{emit_report, fit_order, ConvergenceReport, Norm, OrderFit, ReportFormat, ReportRow};

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::lsq::LsqKind;
use crate::mesh::{compute_dual_metrics, generate_grid, Domain, GridFamily, Mesh};
use crate::schemes1d::{
    errors_1d, steady_driver_1d, unsteady_driver_1d, Flavor, Grid1D, Problem1D, Scheme1D, Semantics, SteadyOptions,
};
use crate::solver2d::{
    nodal_errors, steady_implicit_driver, unsteady_rk3_driver, Assembler, Case, Case2D, Discretization2D, EulerFlux,
    EulerLaw, ImplicitOptions, ScalarLaw, ScalarMms, Scheme2D, UnsteadyOptions, VortexParams, MMS_C,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    Mms,
    MmsScalar,
    Vortex,
}

impl std::str::FromStr for CaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mms" | "mms-euler" => Ok(CaseKind::Mms),
            "mms-scalar" => Ok(CaseKind::MmsScalar),
            "vortex" => Ok(CaseKind::Vortex),
            other => Err(Error::Config(format!("unknown 2D case '{other}'"))),
        }
    }
}

/// Scalar law used by `mms-scalar`.
pub const SCALAR_MMS_LAW: ScalarLaw = ScalarLaw::Burgers { b: [1.0, 0.6] };

#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub scheme: String,
    pub kappa: Option<f64>,
    pub theta: Option<f64>,
    pub kappa_s: Option<f64>,
    pub kappa3: Option<f64>,
    pub mass_matrix: Option<bool>,
    pub flux: Option<EulerFlux>,
    pub grid: GridFamily,
    pub grids: Vec<usize>,
    pub problem: Option<Problem1D>,
    pub case: Option<CaseKind>,
    pub amplitude: f64,
    pub dt: Option<f64>,
    pub nsteps: Option<usize>,
    pub drop: Option<f64>,
    pub seed: Option<u64>,
    pub lsq: LsqKind,
    pub out: Option<PathBuf>,
    pub dump: Option<PathBuf>,
}

impl Default for CaseConfig {
    fn default() -> Self {
        Self {
            scheme: String::new(),
            kappa: None,
            theta: None,
            kappa_s: None,
            kappa3: None,
            mass_matrix: None,
            flux: None,
            grid: GridFamily::Quad,
            grids: Vec::new(),
            problem: None,
            case: None,
            amplitude: MMS_C,
            dt: None,
            nsteps: None,
            drop: None,
            seed: None,
            lsq: LsqKind::Linear,
            out: None,
            dump: None,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e| Error::Config(format!("{key} = '{v}': {e}")))
}

impl CaseConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Applies `key=value` overrides in order.
    pub fn apply_overrides<'a>(&mut self, pairs: impl IntoIterator<Item = &'a str>) -> Result<()> {
        for p in pairs {
            let (k, v) = p.split_once('=').ok_or_else(|| Error::Config(format!("override '{p}' is not key=value")))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "scheme" | "flavor" => self.scheme = v.to_string(),
            "kappa" => self.kappa = Some(num(key, v)?),
            "theta" => self.theta = Some(num(key, v)?),
            "kappa_s" | "kappa-s" => self.kappa_s = Some(num(key, v)?),
            "kappa3" => self.kappa3 = Some(num(key, v)?),
            "mass" | "mass_matrix" => self.mass_matrix = Some(num(key, v)?),
            "flux" => self.flux = Some(v.parse()?),
            "grid" => self.grid = v.parse()?,
            "n" => self.grids = vec![num(key, v)?],
            "grids" => self.grids = v.split(',').map(|s| num(key, s.trim())).collect::<Result<_>>()?,
            "problem" => self.problem = Some(v.parse()?),
            "case" => self.case = Some(v.parse()?),
            "c" | "amplitude" => self.amplitude = num(key, v)?,
            "dt" => self.dt = Some(num(key, v)?),
            "nsteps" => self.nsteps = Some(num(key, v)?),
            "drop" | "tolerance" => self.drop = Some(num(key, v)?),
            "seed" => self.seed = Some(num(key, v)?),
            "lsq" => self.lsq = v.parse()?,
            "out" => self.out = Some(v.into()),
            "dump" => self.dump = Some(v.into()),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.problem.is_some() == self.case.is_some() {
            return Err(Error::Config("set exactly one of 'problem' (1D) or 'case' (2D)".into()));
        }
        if self.grids.is_empty() {
            return Err(Error::Config("no grids given".into()));
        }
        if self.grids.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(format!("grid sequence {:?} is not strictly increasing", self.grids)));
        }
        if self.problem.is_some() {
            self.scheme_1d()?.validate()
        } else {
            self.discretization_2d()?.validate()
        }
    }

    pub fn scheme_1d(&self) -> Result<Scheme1D> {
        let flavor: Flavor = self.scheme.parse()?;
        let mut s = Scheme1D::of(flavor);
        if let Some(k) = self.kappa {
            s.kappa = k;
        }
        if let Some(t) = self.theta {
            s.theta = t;
        }
        if let Some(k) = self.kappa_s {
            s.kappa_s = k;
        }
        if let Some(k) = self.kappa3 {
            s.yh_kappa3 = k;
        }
        if let Some(m) = self.mass_matrix {
            s.mass_matrix = m;
        }
        Ok(s)
    }

    pub fn discretization_2d(&self) -> Result<Discretization2D> {
        let scheme: Scheme2D = self.scheme.parse()?;
        let mut d = match scheme {
            Scheme2D::UMuscl => Discretization2D::umuscl(0.0),
            Scheme2D::Cfsr3 => Discretization2D::cfsr3(),
            Scheme2D::UMusclSsq => Discretization2D::ssq(self.grid),
        };
        if let Some(k) = self.kappa {
            d.kappa = k;
        }
        if let Some(t) = self.theta {
            d.theta = t;
        }
        if let Some(k) = self.kappa_s {
            d.kappa_s = k;
        }
        d.lsq = self.lsq;
        Ok(d)
    }

    pub fn label(&self) -> String {
        let mut s = self.scheme.clone();
        if let Some(k) = self.kappa {
            s += &format!(" kappa={k}");
        }
        match (self.problem, self.case) {
            (Some(p), _) => s += &format!(" {p:?}"),
            (_, Some(c)) => s += &format!(" {c:?} on {}", self.grid),
            _ => {}
        }
        s
    }
}

/// Runs every grid of the study in increasing order.
pub fn run_convergence_study(cfg: &CaseConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let mut report = match cfg.case {
        None => ConvergenceReport::new(cfg.label(), &["u"], &[Norm::L1, Norm::Linf], 0),
        Some(CaseKind::MmsScalar) => ConvergenceReport::new(cfg.label(), &["u"], &[Norm::L1, Norm::L2, Norm::Linf], 0),
        Some(_) => ConvergenceReport::new(cfg.label(), &["rho", "u", "v", "p"], &[Norm::L1, Norm::L2, Norm::Linf], 3),
    };
    let last = cfg.grids.len() - 1;
    for (i, &n) in cfg.grids.iter().enumerate() {
        let dump = if i == last { cfg.dump.as_deref() } else { None };
        let row = run_grid(cfg, n, dump).map_err(|e| Error::GridRun { n, source: Box::new(e) })?;
        report.push(row)?;
    }
    if let Some(path) = &cfg.out {
        emit_report(&report, ReportFormat::Csv, path)?;
    }
    Ok(report)
}

/// Runs a single grid of the study.
pub fn run_grid(cfg: &CaseConfig, n: usize, dump: Option<&Path>) -> Result<ReportRow> {
    match (cfg.problem, cfg.case) {
        (Some(problem), _) => run_1d(cfg, &problem, n),
        (_, Some(case)) => run_2d(cfg, case, n, dump),
        _ => Err(Error::Config("no problem or case".into())),
    }
}

fn run_1d(cfg: &CaseConfig, problem: &Problem1D, n: usize) -> Result<ReportRow> {
    let scheme = cfg.scheme_1d()?;
    let (field, h, t, skip) = if problem.is_steady() {
        let mut opts = SteadyOptions::default();
        if let Some(d) = cfg.drop {
            opts.drop = d;
        }
        let r = steady_driver_1d(scheme, problem, n, opts)?;
        (r.field, 1.0 / (n - 1) as f64, 0.0, scheme.dirichlet_layers())
    } else {
        let dt = cfg.dt.unwrap_or(1e-4);
        let steps = cfg.nsteps.unwrap_or(800);
        let grid = Grid1D::periodic_cells(n);
        let f = unsteady_driver_1d(scheme, problem, &grid, dt, steps)?;
        (f, grid.h, dt * steps as f64, 0)
    };
    let (l1, linf) = errors_1d(&field, problem, t, scheme.semantics, skip)?;
    Ok(ReportRow { n, h, errors: vec![vec![l1], vec![linf]], semantics: scheme.semantics })
}

/// Grid for a 2D case: `n x n` nodes on the unit square, or `3n x n` on the vortex box.
pub fn grid_2d(case: CaseKind, family: GridFamily, n: usize, seed: Option<u64>) -> Result<(Mesh, f64)> {
    match case {
        CaseKind::Vortex => Ok((
            generate_grid(family, 3 * n, n, Domain::new(-6.0, 24.0, -5.0, 5.0), seed)?,
            10.0 / (n - 1) as f64,
        )),
        _ => Ok((generate_grid(family, n, n, Domain::unit(), seed)?, 1.0 / (n - 1) as f64)),
    }
}

fn run_2d(cfg: &CaseConfig, case: CaseKind, n: usize, dump: Option<&Path>) -> Result<ReportRow> {
    let disc = cfg.discretization_2d()?;
    let (mesh, h) = grid_2d(case, cfg.grid, n, cfg.seed)?;
    let metrics = compute_dual_metrics(&mesh)?;
    let mut steady = ImplicitOptions::default();
    if let Some(d) = cfg.drop {
        steady.drop = d;
    }
    let (w, exact) = match case {
        CaseKind::Mms => {
            let law = EulerLaw::new(cfg.flux.unwrap_or(EulerFlux::Rusanov));
            let asm = Assembler::new(&mesh, &metrics, disc, law)?;
            let c = Case2D::MmsEuler { c: cfg.amplitude };
            let r = steady_implicit_driver(&asm, &c, steady)?;
            (to_rows(&r.field.w), exact_rows(&mesh, &c, 0.0)?)
        }
        CaseKind::MmsScalar => {
            let asm = Assembler::new(&mesh, &metrics, disc, SCALAR_MMS_LAW)?;
            let c = ScalarMms { law: SCALAR_MMS_LAW, c: cfg.amplitude };
            let r = steady_implicit_driver(&asm, &c, steady)?;
            (to_rows(&r.field.w), exact_rows(&mesh, &c, 0.0)?)
        }
        CaseKind::Vortex => {
            let law = EulerLaw::new(cfg.flux.unwrap_or(EulerFlux::Roe { entropy_fix: None }));
            let mut asm = Assembler::new(&mesh, &metrics, disc, law)?;
            asm.restrict_to_free_nodes();
            let opts = UnsteadyOptions {
                dt: cfg.dt.unwrap_or(5e-4),
                nsteps: cfg.nsteps.unwrap_or(72_000),
                ..Default::default()
            };
            let c = Case2D::Vortex(VortexParams::default());
            let f = unsteady_rk3_driver(&asm, &c, opts)?;
            (to_rows(&f.w), exact_rows(&mesh, &c, opts.dt * opts.nsteps as f64)?)
        }
    };
    if let Some(path) = dump {
        write_nodal_dump(&mesh, &w, path)?;
    }
    let errors = row_errors(&mesh, &metrics, &w, &exact);
    Ok(ReportRow { n, h, errors, semantics: Semantics::PointValue })
}

fn to_rows<const N: usize>(w: &[[f64; N]]) -> Vec<Vec<f64>> {
    w.iter().map(|x| x.to_vec()).collect()
}

fn exact_rows<const N: usize, C: Case<N>>(mesh: &Mesh, case: &C, t: f64) -> Result<Vec<Vec<f64>>> {
    mesh.nodes.iter().map(|&p| case.exact(p, t).map(|w| w.to_vec())).collect()
}

fn row_errors(mesh: &Mesh, metrics: &crate::mesh::DualMetrics, w: &[Vec<f64>], exact: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let e = match w.first().map_or(0, Vec::len) {
        1 => {
            let f = |v: &[Vec<f64>]| v.iter().map(|x| [x[0]]).collect::<Vec<_>>();
            nodal_errors(mesh, metrics, &f(w), &f(exact))
        }
        _ => {
            let f = |v: &[Vec<f64>]| v.iter().map(|x| [x[0], x[1], x[2], x[3]]).collect::<Vec<_>>();
            nodal_errors(mesh, metrics, &f(w), &f(exact))
        }
    };
    vec![e.l1, e.l2, e.linf]
}

/// ASCII nodal dump: `id x y` followed by the nodal variables (`rho u v p` for Euler).
pub fn write_nodal_dump(mesh: &Mesh, w: &[Vec<f64>], path: &Path) -> Result<()> {
    let wrap = |source| Error::Write { path: path.to_path_buf(), source };
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(wrap)?);
    let names = if w.first().map_or(0, Vec::len) == 4 { "rho u v p" } else { "u" };
    writeln!(out, "# id x y {names}").map_err(wrap)?;
    for (j, (p, v)) in mesh.nodes.iter().zip(w).enumerate() {
        let vals: Vec<String> = v.iter().map(|x| format!("{x:e}")).collect();
        writeln!(out, "{j} {} {} {}", p.x, p.y, vals.join(" ")).map_err(wrap)?;
    }
    out.flush().map_err(wrap)
}
