//! Face jumps and face errors under grid refinement on irregular triangles.

use muscl_verify::harness::{grid_2d, CaseKind};
use muscl_verify::lsq::{GradientOperator, LsqKind};
use muscl_verify::mesh::GridFamily;
use muscl_verify::reconstruction::{jump_and_error_probe, ProbeField};

fn main() -> muscl_verify::Result<()> {
    let grids = [48, 64, 80, 96, 112];
    let meshes = grids
        .iter()
        .map(|&n| grid_2d(CaseKind::Mms, GridFamily::TriIrregular, n, None).map(|g| g.0))
        .collect::<Result<Vec<_>, _>>()?;
    for kind in [LsqKind::Linear, LsqKind::Quadratic] {
        let ops = meshes.iter().map(|m| GradientOperator::build(m, kind)).collect::<Result<Vec<_>, _>>()?;
        for field in [ProbeField::Sine, ProbeField::Quadratic] {
            for kappa in [0.0, 1.0 / 3.0, 0.5, 0.75] {
                let r: Vec<_> = meshes.iter().zip(&ops).map(|(m, op)| jump_and_error_probe(m, op, kappa, field)).collect();
                let (first, last) = (r[0], r[r.len() - 1]);
                let span = ((grids[grids.len() - 1] - 1) as f64 / (grids[0] - 1) as f64).ln();
                println!(
                    "{kind:?} {field:?} kappa={kappa:.3}: jump {:.2e} (slope {:.2}), error {:.2e} (slope {:.2})",
                    last.jump,
                    (first.jump / last.jump).ln() / span,
                    last.error,
                    (first.error / last.error).ln() / span
                );
            }
        }
    }
    Ok(())
}
