//! Grid families, median-dual metrics and the edge-metric identities.
//!
//! `cargo run --release --example grid_metrics -- [n] [mesh_out]`

use muscl_verify::mesh::{compute_dual_metrics, generate_grid, metric_identity_report, write_ascii, Domain, GridFamily};

fn main() -> muscl_verify::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(16);
    for family in GridFamily::ALL {
        let mesh = generate_grid(family, n, n, Domain::unit(), Some(7))?;
        let metrics = compute_dual_metrics(&mesh)?;
        let r = metric_identity_report(&mesh, &metrics);
        let vol: f64 = metrics.volumes.iter().sum();
        println!(
            "{:<16} nodes {:>5} edges {:>5} elements {:>5}  sum V {vol:.12}",
            family.tag(),
            mesh.num_nodes(),
            mesh.num_edges(),
            mesh.elements.len()
        );
        println!(
            "    sum n {:.1e}  first moments {:.1e} {:.1e}  partial volumes {:.1e}",
            r.sum_normals, r.first_moment_x, r.first_moment_y, r.partial_volume
        );
        if let Some([xx, yy, xy]) = r.quadratic_moments {
            println!("    quadratic moments {xx:.1e} {yy:.1e} {xy:.1e}");
        }
    }
    if let Some(path) = args.get(1) {
        let mesh = generate_grid(GridFamily::TriIrregular, n, n, Domain::unit(), Some(7))?;
        write_ascii(&mesh, std::io::BufWriter::new(std::fs::File::create(path)?))?;
        println!("irregular grid written to {path}");
    }
    Ok(())
}
