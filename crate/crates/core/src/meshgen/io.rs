//! Line-oriented mesh format:
//!
//! ```text
//! zfem-mesh 1
//! <nv> <nc>
//! x y            (nv lines)
//! m i1 ... im    (nc lines, 0-based, counterclockwise)
//! ```
//!
//! Coordinates are written with the shortest representation that parses
//! back to the same `f64`.

use crate::geometry::{Mesh, Point2};
use crate::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

const MAGIC: &str = "zfem-mesh";
const VERSION: &str = "1";

pub fn read_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    parse_mesh(&std::fs::read_to_string(path)?)
}

pub fn write_mesh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_mesh_string(mesh))?;
    Ok(())
}

pub fn write_mesh_string(mesh: &Mesh) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC} {VERSION}").unwrap();
    writeln!(out, "{} {}", mesh.vertices().len(), mesh.num_cells()).unwrap();
    for p in mesh.vertices() {
        writeln!(out, "{} {}", p.x, p.y).unwrap();
    }
    for cell in mesh.cells() {
        write!(out, "{}", cell.len()).unwrap();
        for i in cell {
            write!(out, " {i}").unwrap();
        }
        out.push('\n');
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((i, l)) => {
                self.last = i + 1;
                Ok((i + 1, l))
            }
            None => Err(Error::Parse {
                line: self.last + 1,
                column: 1,
                message: format!("unexpected end of file, expected {what}"),
            }),
        }
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn field<T: std::str::FromStr>(line: usize, tok: Option<&(usize, &str)>, eol_column: usize, what: &str) -> Result<T> {
    match tok {
        Some(&(column, text)) => text.parse().map_err(|_| Error::Parse {
            line,
            column,
            message: format!("invalid {what} `{text}`"),
        }),
        None => Err(Error::Parse {
            line,
            column: eol_column,
            message: format!("missing {what}"),
        }),
    }
}

fn expect_end(line: usize, toks: &[(usize, &str)], n: usize) -> Result<()> {
    match toks.get(n) {
        Some(&(column, text)) => Err(Error::Parse {
            line,
            column,
            message: format!("unexpected token `{text}`"),
        }),
        None => Ok(()),
    }
}

pub fn parse_mesh(text: &str) -> Result<Mesh> {
    let mut lines = Lines { inner: text.lines().enumerate(), last: 0 };
    let (ln, header) = lines.next_line("header")?;
    let toks = tokens(header);
    if toks.first().map(|t| t.1) != Some(MAGIC) {
        return Err(Error::Parse { line: ln, column: 1, message: format!("expected `{MAGIC} {VERSION}` header") });
    }
    match toks.get(1) {
        Some(&(_, VERSION)) => expect_end(ln, &toks, 2)?,
        Some(&(column, v)) => return Err(Error::Parse { line: ln, column, message: format!("unsupported version `{v}`") }),
        None => return Err(Error::Parse { line: ln, column: header.len() + 1, message: "missing version".into() }),
    }

    let (ln, counts) = lines.next_line("vertex and cell counts")?;
    let toks = tokens(counts);
    let eol = counts.len() + 1;
    let nv: usize = field(ln, toks.first(), eol, "vertex count")?;
    let nc: usize = field(ln, toks.get(1), eol, "cell count")?;
    expect_end(ln, &toks, 2)?;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines.next_line("vertex coordinates")?;
        let toks = tokens(l);
        let eol = l.len() + 1;
        let x: f64 = field(ln, toks.first(), eol, "x coordinate")?;
        let y: f64 = field(ln, toks.get(1), eol, "y coordinate")?;
        expect_end(ln, &toks, 2)?;
        vertices.push(Point2::new(x, y));
    }
    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (ln, l) = lines.next_line("cell")?;
        let toks = tokens(l);
        let eol = l.len() + 1;
        let m: usize = field(ln, toks.first(), eol, "cell size")?;
        let cell = (1..=m)
            .map(|i| field::<usize>(ln, toks.get(i), eol, "vertex index"))
            .collect::<Result<Vec<_>>>()?;
        expect_end(ln, &toks, m + 1)?;
        cells.push(cell);
    }
    for (i, l) in lines.inner {
        if !l.trim().is_empty() {
            return Err(Error::Parse { line: i + 1, column: 1, message: "trailing content".into() });
        }
    }
    Mesh::new(vertices, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meshgen::{gen_cartesian, gen_distorted_quads, gen_structured_concave};

    #[test]
    fn round_trip_is_textually_exact() {
        for mesh in [gen_cartesian(3), gen_distorted_quads(6, 4, 0.2).unwrap(), gen_structured_concave(3)] {
            let text = write_mesh_string(&mesh);
            let back = parse_mesh(&text).unwrap();
            assert_eq!(write_mesh_string(&back), text);
            assert_eq!(back.vertices(), mesh.vertices());
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.mesh");
        let mesh = gen_distorted_quads(4, 1, 0.2).unwrap();
        write_mesh(&mesh, &path).unwrap();
        assert_eq!(write_mesh_string(&read_mesh(&path).unwrap()), write_mesh_string(&mesh));
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let text = write_mesh_string(&gen_cartesian(2));
        let cut: String = text.lines().take(6).map(|l| format!("{l}\n")).collect();
        match parse_mesh(&cut) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bad_tokens_report_line_and_column() {
        let text = "zfem-mesh 1\n3 1\n0 0\n1 zz\n0 1\n3 0 1 2\n";
        match parse_mesh(text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (4, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_mesh("zfem-mesh 2\n"), Err(Error::Parse { line: 1, column: 11, .. })));
        assert!(matches!(parse_mesh("mesh 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_mesh("zfem-mesh 1\n3 1\n0 0\n1 0\n0 1\n3 0 1 2 9\n"), Err(Error::Parse { line: 6, column: 9, .. })));
    }

    #[test]
    fn repeated_vertex_is_a_validation_error() {
        let text = "zfem-mesh 1\n4 1\n0 0\n1 0\n1 1\n0 1\n4 0 1 1 3\n";
        assert!(matches!(parse_mesh(text), Err(Error::Validation(_))));
    }
}
