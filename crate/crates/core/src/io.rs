//! Text formats.
//!
//! Edge list: first line `n m`, then `m` lines `u v` with `u < v`, 0-based.
//! Packing: first line `k`, then `k` lines `u v w`.
//! Vertex list: whitespace-separated vertex indices.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, VertexSet};
use crate::oracle::TrianglePacking;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(r: impl Read) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if !t.is_empty() && !t.starts_with('#') {
            out.push((i + 1, t.to_string()));
        }
    }
    Ok(out)
}

fn parse_fields<const K: usize>(line: usize, text: &str) -> Result<[usize; K]> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != K {
        return Err(parse_err(line, format!("expected {K} fields, found {}", fields.len())));
    }
    let mut out = [0usize; K];
    for (o, f) in out.iter_mut().zip(fields) {
        *o = f.parse().map_err(|_| parse_err(line, format!("not a vertex index: {f:?}")))?;
    }
    Ok(out)
}

pub fn read_edge_list(r: impl Read) -> Result<Graph> {
    let lines = content_lines(r)?;
    let Some((hl, header)) = lines.first() else {
        return Err(parse_err(1, "missing header `n m`"));
    };
    let [n, m] = parse_fields::<2>(*hl, header)?;
    if lines.len() - 1 != m {
        return Err(parse_err(*hl, format!("header declares {m} edges, found {}", lines.len() - 1)));
    }
    let mut b = GraphBuilder::new(n);
    for (ln, text) in &lines[1..] {
        let [u, v] = parse_fields::<2>(*ln, text)?;
        if u == v {
            return Err(parse_err(*ln, format!("self-loop at {u}")));
        }
        if u >= n || v >= n {
            return Err(parse_err(*ln, format!("vertex out of range for n = {n}")));
        }
        if u > v {
            return Err(parse_err(*ln, format!("edge must be written with u < v, got {u} {v}")));
        }
        if !b.add_edge(u, v)? {
            return Err(parse_err(*ln, format!("duplicate edge {u} {v}")));
        }
    }
    Ok(b.build())
}

pub fn write_edge_list(g: &Graph, mut w: impl Write) -> Result<()> {
    writeln!(w, "{} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_packing(r: impl Read) -> Result<TrianglePacking> {
    let lines = content_lines(r)?;
    let Some((hl, header)) = lines.first() else {
        return Err(parse_err(1, "missing header `k`"));
    };
    let [k] = parse_fields::<1>(*hl, header)?;
    if lines.len() - 1 != k {
        return Err(parse_err(*hl, format!("header declares {k} triangles, found {}", lines.len() - 1)));
    }
    let mut p = TrianglePacking::new();
    for (ln, text) in &lines[1..] {
        let [a, b, c] = parse_fields::<3>(*ln, text)?;
        p.push(a, b, c);
    }
    Ok(p)
}

pub fn write_packing(p: &TrianglePacking, mut w: impl Write) -> Result<()> {
    writeln!(w, "{}", p.len())?;
    for [a, b, c] in p.triples() {
        writeln!(w, "{a} {b} {c}")?;
    }
    Ok(())
}

pub fn read_vertex_list(r: impl Read, n: usize) -> Result<VertexSet> {
    let mut s = VertexSet::new(n);
    let mut seen = HashSet::new();
    for (ln, text) in content_lines(r)? {
        for f in text.split_whitespace() {
            let v: usize = f.parse().map_err(|_| parse_err(ln, format!("not a vertex index: {f:?}")))?;
            if v >= n {
                return Err(parse_err(ln, format!("vertex {v} out of range for n = {n}")));
            }
            if !seen.insert(v) {
                return Err(parse_err(ln, format!("vertex {v} listed twice")));
            }
            s.insert(v);
        }
    }
    Ok(s)
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    read_edge_list(File::open(path)?)
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_edge_list(g, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_packing(path: impl AsRef<Path>) -> Result<TrianglePacking> {
    read_packing(File::open(path)?)
}

pub fn save_packing(p: &TrianglePacking, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_packing(p, &mut w)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(70, &[(0, 1), (3, 69), (5, 64)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(read_edge_list(&buf[..]).unwrap(), g);
    }

    #[test]
    fn edge_list_rejects_bad_input() {
        for bad in ["3 1\n0 0\n", "3 1\n0 3\n", "3 2\n0 1\n0 1\n", "3 2\n0 1\n", "3 1\n1 0\n", "x\n", ""] {
            assert!(read_edge_list(bad.as_bytes()).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn packing_round_trip() {
        let p = TrianglePacking::from_triples([[2, 0, 1], [3, 4, 5]]);
        let mut buf = Vec::new();
        write_packing(&p, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "2\n0 1 2\n3 4 5\n");
        assert_eq!(read_packing(&buf[..]).unwrap(), p);
        assert!(read_packing("2\n0 1 2\n".as_bytes()).is_err());
    }

    #[test]
    fn vertex_list() {
        let s = read_vertex_list("0 1\n5\n".as_bytes(), 6).unwrap();
        assert_eq!(s.to_vec(), vec![0, 1, 5]);
        assert!(read_vertex_list("6".as_bytes(), 6).is_err());
        assert!(read_vertex_list("1 1".as_bytes(), 6).is_err());
    }
}
