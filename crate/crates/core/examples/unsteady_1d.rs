//! Unsteady periodic Burgers and advection from a sine wave, to t = 0.08.
//!
//! Run with `cargo run --release --example unsteady_1d`.

use muscl_verify::schemes1d::{errors_1d, unsteady_driver_1d, Grid1D, Problem1D, Scheme1D};

fn main() -> muscl_verify::Result<()> {
    let (dt, steps) = (1e-4, 800);
    let t = dt * steps as f64;
    let cells: Vec<usize> = (1..=5).map(|m| (1usize << (m + 6)) - 1).collect();
    let schemes = [
        ("FVC k=1/3", Scheme1D::fvc()),
        ("FSR t=1/3", Scheme1D::fsr()),
        ("FVP naive", Scheme1D::fvp()),
        ("FVP + mass", Scheme1D::fvp_with_mass()),
        ("SSQ", Scheme1D::ssq()),
        ("FD  k=1/3", Scheme1D::fd(1.0 / 3.0)),
        ("FD  k=1/2", Scheme1D::fd(0.5)),
    ];
    for problem in [Problem1D::UnsteadyBurgers, Problem1D::UnsteadyAdvection] {
        println!("{problem:?}, t = {t}");
        for (name, scheme) in schemes {
            let mut errs = Vec::new();
            for &n in &cells {
                let f = unsteady_driver_1d(scheme, &problem, &Grid1D::periodic_cells(n), dt, steps)?;
                errs.push(errors_1d(&f, &problem, t, scheme.semantics, 0)?.0);
            }
            let orders: Vec<String> = errs
                .windows(2)
                .zip(cells.windows(2))
                .map(|(e, n)| format!("{:.2}", (e[0] / e[1]).ln() / (n[1] as f64 / n[0] as f64).ln()))
                .collect();
            println!("  {name:<11} L1 {:>10.3e} .. {:>10.3e}  orders {}", errs[0], errs[errs.len() - 1], orders.join(" "));
        }
    }
    Ok(())
}
