//! Euler manufactured-solution convergence on one grid family.
//!
//! `cargo run --release --example mms_euler -- [family] [scheme] [kappa] [n...]`
//!
//! `KAPPA_S` overrides the source-quadrature weight and `MMS_C` the amplitude.

use std::time::Instant;

use muscl_verify::mesh::{compute_dual_metrics, generate_grid, Domain, GridFamily};
use muscl_verify::solver2d::{
    nodal_errors, steady_implicit_driver, Assembler, Case, Case2D, Discretization2D, EulerFlux, EulerLaw,
    ImplicitOptions, Scheme2D, MMS_C,
};

fn main() -> muscl_verify::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let family: GridFamily = args.first().map_or(Ok(GridFamily::TriRight), |s| s.parse())?;
    let scheme: Scheme2D = args.get(1).map_or(Ok(Scheme2D::Cfsr3), |s| s.parse())?;
    let kappa: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let mut grids: Vec<usize> = args.iter().skip(3).filter_map(|s| s.parse().ok()).collect();
    if grids.is_empty() {
        grids = vec![16, 24, 32, 48];
    }
    let disc = match scheme {
        Scheme2D::UMuscl => Discretization2D::umuscl(kappa),
        Scheme2D::Cfsr3 => Discretization2D { kappa, ..Discretization2D::cfsr3() },
        Scheme2D::UMusclSsq => Discretization2D::ssq(family),
    };
    let disc = match std::env::var("KAPPA_S").ok().and_then(|s| s.parse().ok()) {
        Some(kappa_s) => Discretization2D { kappa_s, ..disc },
        None => disc,
    };
    let c = std::env::var("MMS_C").ok().and_then(|s| s.parse().ok()).unwrap_or(MMS_C);
    let case = Case2D::MmsEuler { c };
    let law = EulerLaw::new(EulerFlux::Rusanov);
    println!("{} rusanov kappa={kappa} on {family}", scheme.tag());
    println!("{:>5} {:>12} {:>12} {:>6} {:>6} {:>8}", "n", "p L1", "p Linf", "order", "iters", "secs");
    let mut prev: Option<(f64, f64)> = None;
    for n in grids {
        let start = Instant::now();
        let mesh = generate_grid(family, n, n, Domain::unit(), None)?;
        let metrics = compute_dual_metrics(&mesh)?;
        let asm = Assembler::new(&mesh, &metrics, disc, law)?;
        let out = steady_implicit_driver(&asm, &case, ImplicitOptions::default())?;
        let exact: Vec<[f64; 4]> = mesh.nodes.iter().map(|&p| case.exact(p, 0.0)).collect::<Result<_, _>>()?;
        let err = nodal_errors(&mesh, &metrics, &out.field.w, &exact);
        let h = 1.0 / (n - 1) as f64;
        let order = prev.map_or(f64::NAN, |(h0, e0)| (e0 / err.l1[3]).ln() / (h0 / h).ln());
        println!(
            "{n:>5} {:>12.4e} {:>12.4e} {order:>6.2} {:>6} {:>8.2}",
            err.l1[3],
            err.linf[3],
            out.iterations,
            start.elapsed().as_secs_f64()
        );
        prev = Some((h, err.l1[3]));
    }
    Ok(())
}
