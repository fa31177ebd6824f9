use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use muscl_verify::harness::{emit_report, run_convergence_study, CaseConfig, CaseKind, ReportFormat, SCALAR_MMS_LAW};
use muscl_verify::lsq::{GradientOperator, LsqKind};
use muscl_verify::mesh::{compute_dual_metrics, metric_identity_report, write_ascii, GridFamily};
use muscl_verify::reconstruction::{jump_and_error_probe, ProbeField};
use muscl_verify::solver2d::{
    truncation_error_probe_2d, Assembler, Case2D, EulerFlux, EulerLaw, ScalarMms,
};
use muscl_verify::{Error, Result};

#[derive(Parser)]
#[command(name = "muscl-verify", version, about = "Accuracy verification for U-MUSCL, CFSR3 and U-MUSCL-SSQ schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a grid and write it in the ASCII mesh format.
    Mesh {
        #[arg(long, default_value = "quad")]
        family: GridFamily,
        #[arg(long)]
        n: usize,
        /// Nodes in y (defaults to n).
        #[arg(long)]
        ny: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// One-dimensional run or convergence study.
    Run1d {
        #[arg(long)]
        flavor: String,
        #[arg(long)]
        problem: String,
        #[command(flatten)]
        common: Common,
        /// Couple the time derivative through the mass matrix (fvp, ssq).
        #[arg(long)]
        mass: Option<bool>,
        #[arg(long)]
        kappa3: Option<f64>,
    },
    /// Two-dimensional run or convergence study.
    Run2d {
        #[arg(long)]
        scheme: String,
        #[arg(long, default_value = "mms")]
        case: String,
        #[arg(long, default_value = "quad")]
        grid: GridFamily,
        #[arg(long)]
        flux: Option<String>,
        /// Manufactured-solution amplitude.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Nodal dump of the finest grid: id x y and the nodal variables.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Convergence study from a key=value config file with key=value overrides.
    Study {
        config: PathBuf,
        overrides: Vec<String>,
        #[arg(long, default_value = "markdown")]
        format: ReportFormat,
        /// Report file in `format`; printed to stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Truncation-error and reconstruction jump/error probes over a grid sequence.
    Probe {
        #[command(subcommand)]
        kind: Probe,
    },
    /// Dual-metric identities on one grid.
    Identities {
        #[arg(long, default_value = "tri-right")]
        family: GridFamily,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long = "kappa-s")]
    kappa_s: Option<f64>,
    /// Single grid size.
    #[arg(long, conflicts_with = "grids")]
    n: Option<usize>,
    /// Comma-separated grid sequence.
    #[arg(long)]
    grids: Option<String>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    nsteps: Option<usize>,
    /// Required residual drop for steady runs.
    #[arg(long)]
    drop: Option<f64>,
    /// CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Probe {
    /// Residual with the exact solution injected.
    Te {
        #[arg(long)]
        scheme: String,
        #[arg(long, default_value = "quad")]
        grid: GridFamily,
        /// euler, or the scalar manufactured solution.
        #[arg(long, default_value = "euler")]
        law: String,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long = "kappa-s")]
        kappa_s: Option<f64>,
        #[arg(long, default_value = "16,32,64,128")]
        grids: String,
    },
    /// Max reconstruction jump and face error for an analytic field.
    Jump {
        #[arg(long, default_value = "tri-irregular")]
        grid: GridFamily,
        #[arg(long, default_value = "linear")]
        lsq: LsqKind,
        #[arg(long, default_value = "sine")]
        field: ProbeField,
        #[arg(long, default_value_t = 0.5)]
        kappa: f64,
        #[arg(long, default_value = "48,64,80,96,112")]
        grids: String,
    },
}

impl Common {
    fn apply(&self, cfg: &mut CaseConfig) -> Result<()> {
        let mut pairs = Vec::new();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                pairs.push(format!("{k}={v}"));
            }
        };
        push("kappa", self.kappa.map(|v| v.to_string()));
        push("theta", self.theta.map(|v| v.to_string()));
        push("kappa_s", self.kappa_s.map(|v| v.to_string()));
        push("n", self.n.map(|v| v.to_string()));
        push("grids", self.grids.clone());
        push("dt", self.dt.map(|v| v.to_string()));
        push("nsteps", self.nsteps.map(|v| v.to_string()));
        push("drop", self.drop.map(|v| v.to_string()));
        cfg.apply_overrides(pairs.iter().map(String::as_str))?;
        cfg.out = self.out.clone();
        Ok(())
    }
}

fn grid_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|e| Error::Config(format!("grid '{x}': {e}"))))
        .collect()
}

fn print_slopes(label: &str, grids: &[usize], values: &[f64]) {
    print!("{label}:");
    for (i, (n, v)) in grids.iter().zip(values).enumerate() {
        print!(" n={n} {v:.4e}");
        if i > 0 {
            let p = (values[i - 1] / v).ln() / ((*n - 1) as f64 / (grids[i - 1] - 1) as f64).ln();
            print!(" (slope {p:.2})");
        }
    }
    println!();
}

fn run_study(cfg: &CaseConfig) -> Result<()> {
    let report = run_convergence_study(cfg)?;
    print!("{}", report.render(ReportFormat::Markdown));
    if let Some(p) = report.summary_order() {
        println!("finest-pair order: {p:.3}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Mesh { family, n, ny, seed, out } => {
            let mesh = muscl_verify::mesh::generate_grid(
                family,
                n,
                ny.unwrap_or(n),
                muscl_verify::mesh::Domain::unit(),
                seed,
            )?;
            let file = std::fs::File::create(&out).map_err(|source| Error::Write { path: out.clone(), source })?;
            write_ascii(&mesh, std::io::BufWriter::new(file))?;
            println!("{} nodes, {} edges, {} elements -> {}", mesh.num_nodes(), mesh.num_edges(), mesh.elements.len(), out.display());
        }
        Command::Run1d { flavor, problem, common, mass, kappa3 } => {
            let mut cfg = CaseConfig::default();
            cfg.set("scheme", &flavor)?;
            cfg.set("problem", &problem)?;
            cfg.mass_matrix = mass;
            cfg.kappa3 = kappa3;
            common.apply(&mut cfg)?;
            run_study(&cfg)?;
        }
        Command::Run2d { scheme, case, grid, flux, c, seed, dump, common } => {
            let mut cfg = CaseConfig::default();
            cfg.set("scheme", &scheme)?;
            cfg.set("case", &case)?;
            cfg.grid = grid;
            if let Some(f) = flux {
                cfg.set("flux", &f)?;
            }
            if let Some(c) = c {
                cfg.amplitude = c;
            }
            cfg.seed = seed;
            cfg.dump = dump;
            common.apply(&mut cfg)?;
            run_study(&cfg)?;
        }
        Command::Study { config, overrides, format, report } => {
            let mut cfg = CaseConfig::from_file(&config)?;
            cfg.apply_overrides(overrides.iter().map(String::as_str))?;
            let rep = run_convergence_study(&cfg)?;
            match report {
                Some(path) => emit_report(&rep, format, &path)?,
                None => print!("{}", rep.render(format)),
            }
        }
        Command::Probe { kind: Probe::Te { scheme, grid, law, kappa, kappa_s, grids } } => {
            let grids = grid_list(&grids)?;
            let mut cfg = CaseConfig { grid, ..CaseConfig::default() };
            cfg.set("scheme", &scheme)?;
            cfg.kappa = kappa;
            cfg.kappa_s = kappa_s;
            let disc = cfg.discretization_2d()?;
            let mut te = Vec::new();
            for &n in &grids {
                let (mesh, _) = muscl_verify::harness::grid_2d(CaseKind::Mms, grid, n, None)?;
                let metrics = compute_dual_metrics(&mesh)?;
                te.push(match law.as_str() {
                    "euler" => {
                        let asm = Assembler::new(&mesh, &metrics, disc, EulerLaw::new(EulerFlux::Rusanov))?;
                        truncation_error_probe_2d(&asm, &Case2D::MmsEuler { c: cfg.amplitude })?
                    }
                    "scalar" => {
                        let asm = Assembler::new(&mesh, &metrics, disc, SCALAR_MMS_LAW)?;
                        truncation_error_probe_2d(&asm, &ScalarMms { law: SCALAR_MMS_LAW, c: cfg.amplitude })?
                    }
                    other => return Err(Error::Config(format!("unknown probe law '{other}'"))),
                });
            }
            print_slopes(&format!("TE {scheme} on {grid}"), &grids, &te);
        }
        Command::Probe { kind: Probe::Jump { grid, lsq, field, kappa, grids } } => {
            let grids = grid_list(&grids)?;
            let (mut jumps, mut errors) = (Vec::new(), Vec::new());
            for &n in &grids {
                let (mesh, _) = muscl_verify::harness::grid_2d(CaseKind::Mms, grid, n, None)?;
                let op = GradientOperator::build(&mesh, lsq)?;
                let r = jump_and_error_probe(&mesh, &op, kappa, field);
                jumps.push(r.jump);
                errors.push(r.error);
            }
            print_slopes("jump", &grids, &jumps);
            print_slopes("error", &grids, &errors);
        }
        Command::Identities { family, n, seed } => {
            let mesh = muscl_verify::mesh::generate_grid(family, n, n, muscl_verify::mesh::Domain::unit(), seed)?;
            let metrics = compute_dual_metrics(&mesh)?;
            let r = metric_identity_report(&mesh, &metrics);
            println!("sum of directed areas   {:.3e}", r.sum_normals);
            println!("first moment (x)        {:.3e}", r.first_moment_x);
            println!("first moment (y)        {:.3e}", r.first_moment_y);
            println!("partial volumes         {:.3e}", r.partial_volume);
            match r.quadratic_moments {
                Some([xx, yy, xy]) => println!("quadratic moments       {xx:.3e} {yy:.3e} {xy:.3e}"),
                None => println!("quadratic moments       not applicable"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            ExitCode::FAILURE
        }
    }
}
