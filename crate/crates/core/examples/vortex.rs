//! Isentropic vortex transport on the 60x20-node grids.
//!
//! `cargo run --release --example vortex -- [quad|tri-right] [scheme] [kappa] [t_final]`
//!
//! Writes `vortex_<grid>_<scheme>.dat` with the `y = 0` density section.

use std::io::Write;
use std::time::Instant;

use muscl_verify::mesh::{compute_dual_metrics, generate_grid, Domain, GridFamily};
use muscl_verify::solver2d::{
    nodal_errors, unsteady_rk3_driver, Assembler, Case, Case2D, Discretization2D, EulerFlux, EulerLaw, Scheme2D,
    UnsteadyOptions, VortexParams,
};

fn main() -> muscl_verify::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let family: GridFamily = args.first().map_or(Ok(GridFamily::Quad), |s| s.parse())?;
    let scheme: Scheme2D = args.get(1).map_or(Ok(Scheme2D::Cfsr3), |s| s.parse())?;
    let kappa: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let t_final: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(36.0);
    let disc = match scheme {
        Scheme2D::UMuscl => Discretization2D::umuscl(kappa),
        Scheme2D::Cfsr3 => Discretization2D::cfsr3(),
        Scheme2D::UMusclSsq => Discretization2D::ssq(family),
    };

    let mesh = generate_grid(family, 60, 20, Domain::new(-6.0, 24.0, -5.0, 5.0), None)?;
    let metrics = compute_dual_metrics(&mesh)?;
    let mut asm = Assembler::new(&mesh, &metrics, disc, EulerLaw::new(EulerFlux::Roe { entropy_fix: None }))?;
    asm.restrict_to_free_nodes();
    let case = Case2D::Vortex(VortexParams::default());
    let dt = 5e-4;
    let opts = UnsteadyOptions { dt, nsteps: (t_final / dt).round() as usize, ..Default::default() };

    let start = Instant::now();
    let field = unsteady_rk3_driver(&asm, &case, opts)?;
    let exact: Vec<[f64; 4]> = mesh.nodes.iter().map(|&p| case.exact(p, t_final)).collect::<Result<_, _>>()?;
    let err = nodal_errors(&mesh, &metrics, &field.w, &exact);
    println!(
        "{} {} kappa={kappa}: density L2 {:.4e} Linf {:.4e} ({:.1} s)",
        family.tag(),
        scheme.tag(),
        err.l2[0],
        err.linf[0],
        start.elapsed().as_secs_f64()
    );

    let path = format!("vortex_{}_{}.dat", family.tag(), scheme.tag());
    let mut out = std::io::BufWriter::new(std::fs::File::create(&path).map_err(|source| {
        muscl_verify::Error::Write { path: path.clone().into(), source }
    })?);
    writeln!(out, "# x rho_computed rho_exact")?;
    for (j, p) in mesh.nodes.iter().enumerate().filter(|(_, p)| p.y.abs() < 1e-9) {
        writeln!(out, "{} {} {}", p.x, field.w[j][0], exact[j][0])?;
    }
    Ok(())
}
