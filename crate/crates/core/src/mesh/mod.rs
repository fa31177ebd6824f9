//! Grids and median-dual edge metrics.
//!
//! A [`Mesh`] is a conforming 2D triangulation or quadrangulation stored as
//! nodes, unique edges `(j, k)` with `j < k`, and elements. Each node carries
//! its graph distance to the boundary, capped at 3, which the drivers use to
//! hold three layers of nodes at exact values.

mod dual;
mod generate;
mod io;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use dual::{compute_dual_metrics, metric_identity_report, DualMetrics, IdentityReport};
pub use generate::{generate_grid, Domain};
pub use io::{read_ascii, write_ascii};

/// Ring value assigned to every node at graph distance three or more from the boundary.
pub const INTERIOR_RING: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Displacement `other - self`.
    #[inline]
    pub fn to(self, other: Point) -> [f64; 2] {
        [other.x - self.x, other.y - self.y]
    }

    #[inline]
    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridFamily {
    Quad,
    TriRight,
    TriEquilateral,
    TriIrregular,
}

impl GridFamily {
    pub const ALL: [GridFamily; 4] = [
        GridFamily::Quad,
        GridFamily::TriRight,
        GridFamily::TriEquilateral,
        GridFamily::TriIrregular,
    ];

    pub fn is_simplex(self) -> bool {
        !matches!(self, GridFamily::Quad)
    }

    pub fn is_regular(self) -> bool {
        !matches!(self, GridFamily::TriIrregular)
    }

    pub fn tag(self) -> &'static str {
        match self {
            GridFamily::Quad => "quad",
            GridFamily::TriRight => "tri-right",
            GridFamily::TriEquilateral => "tri-equilateral",
            GridFamily::TriIrregular => "tri-irregular",
        }
    }
}

impl fmt::Display for GridFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for GridFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quad" | "regular-quad" => Ok(GridFamily::Quad),
            "tri-right" | "right-triangle" | "tri" => Ok(GridFamily::TriRight),
            "tri-equilateral" | "tri-equi" | "equilateral" => Ok(GridFamily::TriEquilateral),
            "tri-irregular" | "irregular-tri" | "irregular" => Ok(GridFamily::TriIrregular),
            other => Err(Error::Config(format!("unknown grid family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Element {
    Tri([usize; 3]),
    Quad([usize; 4]),
}

impl Element {
    pub fn vertices(&self) -> &[usize] {
        match self {
            Element::Tri(v) => v,
            Element::Quad(v) => v,
        }
    }
}

/// A node's view of one incident edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Incidence {
    pub edge: usize,
    pub other: usize,
    /// `+1.0` when the node is the first endpoint of the stored edge, `-1.0` otherwise.
    pub sign: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<Point>,
    pub edges: Vec<[usize; 2]>,
    pub elements: Vec<Element>,
    pub family: GridFamily,
    pub boundary_rings: Vec<u8>,
    /// Nominal spacing used to scale diagnostics.
    pub spacing: f64,
    incidence_offsets: Vec<usize>,
    incidence: Vec<Incidence>,
}

impl Mesh {
    /// Builds edges, incidence and boundary rings from nodes and elements.
    ///
    /// Boundary nodes are the endpoints of element sides that belong to a
    /// single element.
    pub fn from_elements(
        nodes: Vec<Point>,
        elements: Vec<Element>,
        family: GridFamily,
        spacing: f64,
    ) -> Result<Self> {
        let nn = nodes.len();
        let mut side_count: std::collections::HashMap<[usize; 2], usize> =
            std::collections::HashMap::new();
        let mut edges = Vec::new();
        for (ie, el) in elements.iter().enumerate() {
            let v = el.vertices();
            for a in 0..v.len() {
                let (p, q) = (v[a], v[(a + 1) % v.len()]);
                if p >= nn || q >= nn || p == q {
                    return Err(Error::InvalidGrid(format!(
                        "element {ie} references invalid nodes ({p}, {q})"
                    )));
                }
                let key = [p.min(q), p.max(q)];
                let count = side_count.entry(key).or_insert_with(|| {
                    edges.push(key);
                    0
                });
                *count += 1;
            }
        }
        let mut on_boundary = vec![false; nn];
        for e in &edges {
            if side_count[e] == 1 {
                on_boundary[e[0]] = true;
                on_boundary[e[1]] = true;
            }
        }
        edges.sort_unstable();
        Self::from_parts(nodes, edges, elements, family, spacing, &on_boundary)
    }

    /// Assembles a mesh from explicit parts; `on_boundary` seeds ring 0.
    pub fn from_parts(
        nodes: Vec<Point>,
        edges: Vec<[usize; 2]>,
        elements: Vec<Element>,
        family: GridFamily,
        spacing: f64,
        on_boundary: &[bool],
    ) -> Result<Self> {
        let nn = nodes.len();
        if on_boundary.len() != nn {
            return Err(Error::InvalidGrid("boundary flags do not match node count".into()));
        }
        let mut degree = vec![0usize; nn + 1];
        for (ie, &[j, k]) in edges.iter().enumerate() {
            if j >= k || k >= nn {
                return Err(Error::InvalidGrid(format!("edge {ie} = ({j}, {k}) is invalid")));
            }
            degree[j + 1] += 1;
            degree[k + 1] += 1;
        }
        for i in 0..nn {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut incidence = vec![
            Incidence {
                edge: 0,
                other: 0,
                sign: 0.0
            };
            offsets[nn]
        ];
        for (ie, &[j, k]) in edges.iter().enumerate() {
            incidence[fill[j]] = Incidence { edge: ie, other: k, sign: 1.0 };
            fill[j] += 1;
            incidence[fill[k]] = Incidence { edge: ie, other: j, sign: -1.0 };
            fill[k] += 1;
        }
        for j in 0..nn {
            let slice = &incidence[offsets[j]..offsets[j + 1]];
            for a in 1..slice.len() {
                if slice[..a].iter().any(|b| b.other == slice[a].other) {
                    return Err(Error::InvalidGrid(format!(
                        "duplicate edge between {j} and {}",
                        slice[a].other
                    )));
                }
            }
        }

        let mut rings = vec![u8::MAX; nn];
        let mut frontier: Vec<usize> = (0..nn).filter(|&j| on_boundary[j]).collect();
        for &j in &frontier {
            rings[j] = 0;
        }
        let mut level = 0u8;
        while !frontier.is_empty() && level < INTERIOR_RING {
            level += 1;
            let mut next = Vec::new();
            for &j in &frontier {
                for inc in &incidence[offsets[j]..offsets[j + 1]] {
                    if rings[inc.other] == u8::MAX {
                        rings[inc.other] = level;
                        next.push(inc.other);
                    }
                }
            }
            frontier = next;
        }
        for r in rings.iter_mut() {
            if *r == u8::MAX {
                *r = INTERIOR_RING;
            }
        }

        Ok(Self {
            nodes,
            edges,
            elements,
            family,
            boundary_rings: rings,
            spacing,
            incidence_offsets: offsets,
            incidence,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges incident to `node`, each seen from `node`.
    #[inline]
    pub fn incident(&self, node: usize) -> &[Incidence] {
        &self.incidence[self.incidence_offsets[node]..self.incidence_offsets[node + 1]]
    }

    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident(node).iter().map(|i| i.other)
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        self.boundary_rings[node] == 0
    }

    /// Nodes at graph distance three or more from the boundary.
    pub fn interior_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_nodes()).filter(|&j| self.boundary_rings[j] >= INTERIOR_RING)
    }

    /// Nodes held at exact values by the drivers (rings 0, 1 and 2).
    pub fn is_dirichlet(&self, node: usize) -> bool {
        self.boundary_rings[node] < INTERIOR_RING
    }

    pub fn edge_vector(&self, edge: usize) -> [f64; 2] {
        let [j, k] = self.edges[edge];
        self.nodes[j].to(self.nodes[k])
    }
}
