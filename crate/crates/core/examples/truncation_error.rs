//! Truncation-error probes: the residual of each scheme with the exact solution injected.
//!
//! `cargo run --release --example truncation_error`

use muscl_verify::mesh::{compute_dual_metrics, generate_grid, Domain, GridFamily};
use muscl_verify::solver2d::{
    truncation_error_probe_2d, Assembler, Case, Case2D, Discretization2D, EulerFlux, EulerLaw, Law, ScalarLaw,
    ScalarMms, MMS_C,
};

fn slope_table<L: Law<N> + Copy, C: Case<N>, const N: usize>(
    label: &str,
    family: GridFamily,
    disc: Discretization2D,
    law: L,
    case: &C,
    grids: &[usize],
) -> muscl_verify::Result<()> {
    let mut line = format!("{label:<28} {:<16}", family.tag());
    let mut prev: Option<(f64, f64)> = None;
    for &n in grids {
        let mesh = generate_grid(family, n, n, Domain::unit(), None)?;
        let metrics = compute_dual_metrics(&mesh)?;
        let asm = Assembler::new(&mesh, &metrics, disc, law)?;
        let te = truncation_error_probe_2d(&asm, case)?;
        let h = 1.0 / (n - 1) as f64;
        if let Some((h0, e0)) = prev {
            line += &format!(" {:6.2}", (e0 / te).ln() / (h0 / h).ln());
        } else {
            line += &format!(" {te:10.3e} |");
        }
        prev = Some((h, te));
    }
    println!("{line}");
    Ok(())
}

fn main() -> muscl_verify::Result<()> {
    let grids = [16, 32, 64, 128];
    let linear = ScalarLaw::Linear { a: [1.0, 0.6] };
    let burgers = ScalarLaw::Burgers { b: [1.0, 0.6] };
    let euler = EulerLaw::new(EulerFlux::Rusanov);
    let mms = Case2D::MmsEuler { c: MMS_C };
    println!("coarsest TE, then slopes between successive grids {grids:?}");
    for family in [GridFamily::Quad, GridFamily::TriRight, GridFamily::TriEquilateral] {
        let ssq = Discretization2D { kappa_s: 0.25, ..Discretization2D::ssq(family) };
        for (name, law) in [("linear", linear), ("burgers", burgers)] {
            let case = ScalarMms { law, c: MMS_C };
            slope_table(&format!("{name} umuscl k=0"), family, Discretization2D::umuscl(0.0), law, &case, &grids)?;
            slope_table(&format!("{name} umuscl k=1/3"), family, Discretization2D::umuscl(1.0 / 3.0), law, &case, &grids)?;
            slope_table(&format!("{name} cfsr3"), family, Discretization2D::cfsr3(), law, &case, &grids)?;
            slope_table(&format!("{name} ssq ks=1/4"), family, ssq, law, &case, &grids)?;
        }
        slope_table("euler umuscl k=0", family, Discretization2D::umuscl(0.0), euler, &mms, &grids)?;
        slope_table("euler cfsr3", family, Discretization2D::cfsr3(), euler, &mms, &grids)?;
        slope_table("euler ssq ks=1/4", family, ssq, euler, &mms, &grids)?;
    }
    Ok(())
}
