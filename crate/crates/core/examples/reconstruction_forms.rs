//! The equivalent U-MUSCL forms, the midpoint average and the face-point correction.

use muscl_verify::reconstruction::{
    cell_centered_correction, face_value_uncorrected, midpoint_average, midpoint_average_direct, umuscl_pair,
    umuscl_pair_delta_form, weighted_average_form,
};
use muscl_verify::mesh::Point;

fn main() {
    let (xj, xk) = (Point::new(0.1, 0.2), Point::new(0.4, 0.3));
    let (uj, uk) = (1.3, 0.7);
    let (gj, gk) = ([0.8, -1.1], [0.2, 0.5]);
    println!("kappa   left(edge)   left(delta)  left(weighted)  right(edge)  right(delta)");
    for kappa in [-1.0, 0.0, 1.0 / 3.0, 0.5, 1.0] {
        let a = umuscl_pair(uj, uk, gj, gk, xj, xk, kappa);
        let b = umuscl_pair_delta_form(uj, uk, gj, gk, xj, xk, kappa);
        let w = weighted_average_form(uj, uk, gj, xj, xk, kappa);
        println!("{kappa:>6.3} {:>12.9} {:>12.9} {w:>15.9} {:>12.9} {:>12.9}", a.left, b.left, a.right, b.right);
    }
    let half = umuscl_pair(uj, uk, gj, gk, xj, xk, 0.5);
    println!(
        "midpoint average {:.15} direct {:.15}",
        midpoint_average(half),
        midpoint_average_direct(uj, uk, gj, gk, xj, xk)
    );

    // Linear data u = 2 + 3x - y with the face off the edge midpoint.
    let lin = |p: Point| 2.0 + 3.0 * p.x - p.y;
    let g = [3.0, -1.0];
    let face = Point::new(0.3, 0.2);
    for kappa in [0.0, 0.5] {
        let plain = face_value_uncorrected(lin(xj), lin(xk), g, xj, face, kappa);
        let fixed = cell_centered_correction(lin(xj), lin(xk), g, g, xj, xk, face, kappa);
        println!("kappa={kappa}: exact {:.6} uncorrected {plain:.6} corrected {fixed:.6}", lin(face));
    }
}
