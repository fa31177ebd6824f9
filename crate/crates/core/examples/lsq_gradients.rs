//! Linear and quadratic least-squares derivatives of the probe fields on an irregular grid.

use muscl_verify::lsq::{GradientOperator, LsqKind};
use muscl_verify::mesh::{generate_grid, Domain, GridFamily};
use muscl_verify::reconstruction::ProbeField;

fn main() -> muscl_verify::Result<()> {
    // Derivatives of 8.75 - 1.3x + 3.7y + 2.1x² + 0.3xy - 7.5y².
    let exact = |x: f64, y: f64| [-1.3 + 4.2 * x + 0.3 * y, 3.7 + 0.3 * x - 15.0 * y, 4.2, 0.3, -15.0];
    for n in [17, 33, 65] {
        let mesh = generate_grid(GridFamily::TriIrregular, n, n, Domain::unit(), Some(3))?;
        let u: Vec<f64> = mesh.nodes.iter().map(|&p| ProbeField::Quadratic.eval(p)).collect();
        for kind in [LsqKind::Linear, LsqKind::Quadratic] {
            let op = GradientOperator::build(&mesh, kind)?;
            let mut worst = [0.0f64; 5];
            for j in mesh.interior_nodes() {
                let d = op.derivatives(j, &u);
                let e = exact(mesh.nodes[j].x, mesh.nodes[j].y);
                for i in 0..5 {
                    worst[i] = worst[i].max((d[i] - e[i]).abs());
                }
            }
            let shown = if kind == LsqKind::Linear { &worst[..2] } else { &worst[..] };
            let cells: Vec<String> = shown.iter().map(|w| format!("{w:.2e}")).collect();
            println!("n={n:<3} {kind:?}: max error {}", cells.join(" "));
        }
    }
    Ok(())
}
