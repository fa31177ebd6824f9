//! Steady 1D convergence for every scheme flavor on Burgers and linear advection.
//!
//! Run with `cargo run --release --example steady_1d`.

use muscl_verify::schemes1d::{errors_1d, steady_driver_1d, Problem1D, Scheme1D, SteadyOptions};

fn main() -> muscl_verify::Result<()> {
    let grids = [16, 32, 64, 128];
    let schemes = [
        ("FVC k=1/3", Scheme1D::fvc()),
        ("FVP k=1/2", Scheme1D::fvp()),
        ("FSR t=1/3", Scheme1D::fsr()),
        ("FD  k=0", Scheme1D::fd(0.0)),
        ("FD  k=1/3", Scheme1D::fd(1.0 / 3.0)),
        ("FD  k=1/2", Scheme1D::fd(0.5)),
        ("SSQ", Scheme1D::ssq()),
        ("YH  k=-1/6", Scheme1D::yang_harris()),
    ];
    for problem in [Problem1D::steady_burgers(), Problem1D::steady_advection()] {
        println!("{problem:?}");
        for (name, scheme) in schemes {
            let mut errs = Vec::new();
            for n in grids {
                let r = steady_driver_1d(scheme, &problem, n, SteadyOptions::default())?;
                let skip = scheme.dirichlet_layers();
                errs.push(errors_1d(&r.field, &problem, 0.0, scheme.semantics, skip)?.0);
            }
            let orders: Vec<String> = errs
                .windows(2)
                .zip(grids.windows(2))
                .map(|(e, n)| {
                    let (h1, h2) = (1.0 / (n[0] - 1) as f64, 1.0 / (n[1] - 1) as f64);
                    format!("{:.2}", (e[0] / e[1]).ln() / (h1 / h2).ln())
                })
                .collect();
            println!("  {name:<11} L1 {:>10.3e} .. {:>10.3e}  orders {}", errs[0], errs[3], orders.join(" "));
        }
    }
    Ok(())
}
