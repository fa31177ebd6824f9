//! Plain-text mesh format.
//!
//! ```text
//! nnodes nedges nelems family
//! x y ring        (nnodes lines)
//! j k             (nedges lines)
//! m v1 .. vm      (nelems lines, m = 3 or 4)
//! ```
//! Coordinates use the shortest representation that round-trips exactly.

use std::io::{BufRead, Write};

use super::{Element, GridFamily, Mesh, Point};
use crate::error::{Error, Result};

pub fn write_ascii<W: Write>(mesh: &Mesh, mut out: W) -> Result<()> {
    writeln!(
        out,
        "{} {} {} {}",
        mesh.num_nodes(),
        mesh.num_edges(),
        mesh.elements.len(),
        mesh.family
    )?;
    for (p, r) in mesh.nodes.iter().zip(&mesh.boundary_rings) {
        writeln!(out, "{:?} {:?} {}", p.x, p.y, r)?;
    }
    for [j, k] in &mesh.edges {
        writeln!(out, "{j} {k}")?;
    }
    for el in &mesh.elements {
        let v = el.vertices();
        write!(out, "{}", v.len())?;
        for a in v {
            write!(out, " {a}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn read_ascii<R: BufRead>(input: R) -> Result<Mesh> {
    let mut lines = input.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        other => Some((i + 1, other)),
    });
    let mut next = |what: &str| -> Result<(usize, Vec<String>)> {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::MeshParse { line: 0, msg: format!("unexpected end of file, expected {what}") })?;
        Ok((ln, line?.split_whitespace().map(str::to_owned).collect()))
    };
    fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
        s.parse().map_err(|_| Error::MeshParse { line, msg: format!("bad number '{s}'") })
    }

    let (ln, head) = next("header")?;
    if head.len() != 4 {
        return Err(Error::MeshParse { line: ln, msg: "header needs 4 fields".into() });
    }
    let nn: usize = num(ln, &head[0])?;
    let ne: usize = num(ln, &head[1])?;
    let nel: usize = num(ln, &head[2])?;
    let family: GridFamily = head[3].parse()?;

    let mut nodes = Vec::with_capacity(nn);
    let mut on_boundary = Vec::with_capacity(nn);
    for _ in 0..nn {
        let (ln, f) = next("node")?;
        if f.len() != 3 {
            return Err(Error::MeshParse { line: ln, msg: "node line needs x y ring".into() });
        }
        nodes.push(Point::new(num(ln, &f[0])?, num(ln, &f[1])?));
        on_boundary.push(num::<u8>(ln, &f[2])? == 0);
    }
    let mut edges = Vec::with_capacity(ne);
    for _ in 0..ne {
        let (ln, f) = next("edge")?;
        if f.len() != 2 {
            return Err(Error::MeshParse { line: ln, msg: "edge line needs j k".into() });
        }
        edges.push([num(ln, &f[0])?, num(ln, &f[1])?]);
    }
    let mut elements = Vec::with_capacity(nel);
    for _ in 0..nel {
        let (ln, f) = next("element")?;
        let m: usize = num(ln, f.first().map(String::as_str).unwrap_or(""))?;
        if f.len() != m + 1 {
            return Err(Error::MeshParse { line: ln, msg: "element vertex count mismatch".into() });
        }
        let v: Vec<usize> = f[1..].iter().map(|s| num(ln, s)).collect::<Result<_>>()?;
        elements.push(match m {
            3 => Element::Tri([v[0], v[1], v[2]]),
            4 => Element::Quad([v[0], v[1], v[2], v[3]]),
            _ => return Err(Error::MeshParse { line: ln, msg: format!("unsupported element size {m}") }),
        });
    }

    let spacing = {
        let total: f64 = edges
            .iter()
            .map(|&[j, k]| {
                let d: [f64; 2] = Point::to(nodes[j], nodes[k]);
                d[0].hypot(d[1])
            })
            .sum();
        if ne > 0 { total / ne as f64 } else { 1.0 }
    };
    Mesh::from_parts(nodes, edges, elements, family, spacing, &on_boundary)
}
