//! Roe and Rusanov fluxes across a contact and a shock-tube pair, and the Jacobian check.

use muscl_verify::flux::{flux_jacobian_primitive, GasModel, PrimitiveState};

fn main() -> muscl_verify::Result<()> {
    let g = GasModel::default();
    let n = [0.8, 0.6];
    let pairs = [
        ("contact", PrimitiveState::new(1.0, 0.5, 0.0, 1.0), PrimitiveState::new(0.5, 0.5, 0.0, 1.0)),
        ("shock tube", PrimitiveState::new(1.0, 0.0, 0.0, 1.0), PrimitiveState::new(0.125, 0.0, 0.0, 0.1)),
    ];
    for (name, l, r) in pairs {
        let (wl, wr) = (l.to_array(), r.to_array());
        println!("{name}");
        println!("  roe     {:?}", g.roe_flux(&wl, &wr, n)?);
        println!("  rusanov {:?}", g.rusanov_flux(&wl, &wr, n)?);
    }

    let w = PrimitiveState::new(1.2, 0.4, -0.3, 0.9);
    let a = flux_jacobian_primitive(w, n)?;
    let mut worst: f64 = 0.0;
    for c in 0..4 {
        let eps = 1e-6;
        let (mut p, mut m) = (w.to_array(), w.to_array());
        p[c] += eps;
        m[c] -= eps;
        let (fp, fm) = (g.euler_flux(&p, n)?, g.euler_flux(&m, n)?);
        for r in 0..4 {
            worst = worst.max((a[r][c] - (fp[r] - fm[r]) / (2.0 * eps)).abs());
        }
    }
    println!("primitive Jacobian vs central differences: {worst:.2e}");
    Ok(())
}
