use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Element, GridFamily, Mesh, Point};
use crate::error::{Error, Result};

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Domain {
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    pub const fn unit() -> Self {
        Self::new(0.0, 1.0, 0.0, 1.0)
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
}

/// Maximum nodal displacement of the irregular family, as a fraction of the spacing.
pub const IRREGULAR_AMPLITUDE: f64 = 0.25;

const DEFAULT_SEED: u64 = 0x5eed;

/// Generates an `nx` by `ny` node grid of the given family.
///
/// The equilateral family places `nx` nodes per row with spacing
/// `h = width / (nx - 1)`, shifts odd rows by `h/2` and stacks rows
/// `h*sqrt(3)/2` apart starting at `y0`; the domain height is not used.
/// The irregular family perturbs the interior nodes of the right-triangle
/// grid by independent uniform offsets of at most `0.25 h` per coordinate.
pub fn generate_grid(
    family: GridFamily,
    nx: usize,
    ny: usize,
    domain: Domain,
    perturb_seed: Option<u64>,
) -> Result<Mesh> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2x2 nodes, got {nx}x{ny}")));
    }
    let count = nx
        .checked_mul(ny)
        .filter(|&c| c <= u32::MAX as usize)
        .ok_or_else(|| Error::InvalidGrid(format!("{nx}x{ny} nodes overflows the node index")))?;
    let (w, h) = (domain.width(), domain.height());
    let needs_height = family != GridFamily::TriEquilateral;
    if !(w.is_finite() && h.is_finite()) || w <= 0.0 || (needs_height && h <= 0.0) {
        return Err(Error::InvalidGrid(format!("domain {domain:?} has no area")));
    }

    let id = |i: usize, j: usize| j * nx + i;
    let hx = w / (nx - 1) as f64;
    let hy = h / (ny - 1) as f64;

    let mut nodes = Vec::with_capacity(count);
    match family {
        GridFamily::TriEquilateral => {
            let dy = hx * 3f64.sqrt() / 2.0;
            for j in 0..ny {
                let shift = if j % 2 == 1 { 0.5 * hx } else { 0.0 };
                for i in 0..nx {
                    nodes.push(Point::new(domain.x0 + shift + i as f64 * hx, domain.y0 + j as f64 * dy));
                }
            }
        }
        _ => {
            for j in 0..ny {
                for i in 0..nx {
                    nodes.push(Point::new(domain.x0 + i as f64 * hx, domain.y0 + j as f64 * hy));
                }
            }
        }
    }

    let mut elements = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            match family {
                GridFamily::Quad => elements.push(Element::Quad([a, b, c, d])),
                GridFamily::TriRight | GridFamily::TriIrregular => {
                    elements.push(Element::Tri([a, b, c]));
                    elements.push(Element::Tri([a, c, d]));
                }
                GridFamily::TriEquilateral => {
                    if j % 2 == 0 {
                        elements.push(Element::Tri([a, b, d]));
                        elements.push(Element::Tri([b, c, d]));
                    } else {
                        elements.push(Element::Tri([a, b, c]));
                        elements.push(Element::Tri([a, c, d]));
                    }
                }
            }
        }
    }

    if family == GridFamily::TriIrregular {
        let mut rng = ChaCha8Rng::seed_from_u64(perturb_seed.unwrap_or(DEFAULT_SEED));
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let p = &mut nodes[id(i, j)];
                p.x += rng.random_range(-IRREGULAR_AMPLITUDE..=IRREGULAR_AMPLITUDE) * hx;
                p.y += rng.random_range(-IRREGULAR_AMPLITUDE..=IRREGULAR_AMPLITUDE) * hy;
            }
        }
    }

    let spacing = match family {
        GridFamily::TriEquilateral => hx,
        _ => (hx * hy).sqrt(),
    };
    Mesh::from_elements(nodes, elements, family, spacing)
}
