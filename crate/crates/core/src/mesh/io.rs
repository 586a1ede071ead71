//! OFF and OFFX readers and writers.
//!
//! OFFX extends OFF with hole rings: the header is `OFFX` and each face line
//! reads `r | k1 v... | k2 v...` with the outer ring first.

use std::fmt::Write as _;

use super::{Arithmetic, MeshError, SurfaceMesh};
use crate::geom::{format_q, parse_q, parse_q_float, Vec3, Q};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Offx,
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

struct Lines<'a> {
    rows: Vec<Vec<Token<'a>>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut rows = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            last_line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let mut toks = Vec::new();
            let mut start = None;
            for (c, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
                if ch.is_whitespace() {
                    if let Some(s) = start.take() {
                        toks.push(Token { text: &body[s..c], line: i + 1, column: s + 1 });
                    }
                } else if start.is_none() {
                    start = Some(c);
                }
            }
            if !toks.is_empty() {
                rows.push(toks);
            }
        }
        Lines { rows, pos: 0, last_line }
    }

    fn next_row(&mut self, what: &str) -> Result<&[Token<'a>], MeshError> {
        if self.pos >= self.rows.len() {
            return Err(MeshError::Parse {
                line: self.last_line + 1,
                column: 1,
                message: format!("unexpected end of input, expected {what}"),
            });
        }
        self.pos += 1;
        Ok(&self.rows[self.pos - 1])
    }

    fn trailing(&self) -> Option<&Token<'a>> {
        self.rows.get(self.pos).map(|r| &r[0])
    }
}

fn err(tok: &Token, message: impl Into<String>) -> MeshError {
    MeshError::Parse { line: tok.line, column: tok.column, message: message.into() }
}

fn row_end(row: &[Token]) -> MeshError {
    let last = row.last().expect("rows are non-empty");
    MeshError::Parse { line: last.line, column: last.column + last.text.len(), message: "too few values on line".into() }
}

fn parse_count(tok: &Token) -> Result<usize, MeshError> {
    tok.text.parse::<usize>().map_err(|_| err(tok, format!("expected a non-negative integer, found `{}`", tok.text)))
}

fn parse_coord(tok: &Token, mode: Arithmetic) -> Result<Q, MeshError> {
    let r = if mode.is_exact() { parse_q(tok.text) } else { parse_q_float(tok.text) };
    r.map_err(|e| err(tok, e.0))
}

fn expect_len(row: &[Token], n: usize) -> Result<(), MeshError> {
    match row.len().cmp(&n) {
        std::cmp::Ordering::Less => Err(row_end(row)),
        std::cmp::Ordering::Greater => Err(err(&row[n], "unexpected extra value")),
        std::cmp::Ordering::Equal => Ok(()),
    }
}

fn read_header<'a>(lines: &mut Lines<'a>, keyword: &str) -> Result<(usize, usize), MeshError> {
    let row = lines.next_row("header")?;
    if row[0].text != keyword {
        return Err(err(&row[0], format!("expected `{keyword}` header, found `{}`", row[0].text)));
    }
    // Counts may follow the keyword on the same line.
    let counts: Vec<&Token> = if row.len() > 1 {
        row[1..].iter().collect()
    } else {
        lines.next_row("counts")?.iter().collect()
    };
    if counts.len() < 3 {
        return Err(MeshError::Parse {
            line: counts[0].line,
            column: counts.last().map(|t| t.column + t.text.len()).unwrap_or(1),
            message: "expected vertex, face and edge counts".into(),
        });
    }
    if counts.len() > 3 {
        return Err(err(counts[3], "unexpected extra value"));
    }
    let nv = parse_count(counts[0])?;
    let nf = parse_count(counts[1])?;
    parse_count(counts[2])?;
    Ok((nv, nf))
}

fn read_vertices(lines: &mut Lines, nv: usize, mode: Arithmetic) -> Result<Vec<Vec3>, MeshError> {
    let mut out = Vec::with_capacity(nv);
    for _ in 0..nv {
        let row = lines.next_row("vertex")?;
        expect_len(row, 3)?;
        out.push(Vec3::new(parse_coord(&row[0], mode)?, parse_coord(&row[1], mode)?, parse_coord(&row[2], mode)?));
    }
    Ok(out)
}

fn read_ring(toks: &[Token], nv: usize) -> Result<Vec<usize>, MeshError> {
    let k = parse_count(&toks[0])?;
    expect_len(toks, k + 1)?;
    toks[1..]
        .iter()
        .map(|t| {
            let v = parse_count(t)?;
            if v >= nv {
                return Err(err(t, format!("vertex index {v} out of range")));
            }
            Ok(v)
        })
        .collect()
}

fn finish(lines: &Lines) -> Result<(), MeshError> {
    match lines.trailing() {
        Some(t) => Err(err(t, "unexpected trailing content")),
        None => Ok(()),
    }
}

/// Parses OFF text and builds an outward-oriented mesh.
pub fn load_off(text: &str, mode: Arithmetic) -> Result<SurfaceMesh, MeshError> {
    let mut lines = Lines::new(text);
    let (nv, nf) = read_header(&mut lines, "OFF")?;
    let positions = read_vertices(&mut lines, nv, mode)?;
    let mut rings = Vec::with_capacity(nf);
    for _ in 0..nf {
        let row = lines.next_row("face")?;
        rings.push(vec![read_ring(row, nv)?]);
    }
    finish(&lines)?;
    SurfaceMesh::new(positions, rings, mode)
}

/// Parses OFFX text and builds an outward-oriented mesh.
pub fn load_offx(text: &str, mode: Arithmetic) -> Result<SurfaceMesh, MeshError> {
    let mut lines = Lines::new(text);
    let (nv, nf) = read_header(&mut lines, "OFFX")?;
    let positions = read_vertices(&mut lines, nv, mode)?;
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let row = lines.next_row("face")?;
        let r = parse_count(&row[0])?;
        let groups: Vec<&[Token]> = row[1..].split(|t| t.text == "|").collect();
        // A leading `|` yields an empty first group.
        if groups.is_empty() || !groups[0].is_empty() {
            return Err(err(row.get(1).unwrap_or(&row[0]), "expected `|` after ring count"));
        }
        let groups = &groups[1..];
        if groups.len() != r || r == 0 {
            return Err(err(&row[0], format!("ring count {r} does not match {} ring groups", groups.len())));
        }
        let mut face = Vec::with_capacity(r);
        for g in groups {
            if g.is_empty() {
                return Err(row_end(row));
            }
            face.push(read_ring(g, nv)?);
        }
        faces.push(face);
    }
    finish(&lines)?;
    SurfaceMesh::new(positions, faces, mode)
}

/// Picks the reader from the first keyword.
pub fn load_auto(text: &str, mode: Arithmetic) -> Result<SurfaceMesh, MeshError> {
    let first = Lines::new(text).rows.first().map(|r| r[0].text.to_string());
    match first.as_deref() {
        Some("OFFX") => load_offx(text, mode),
        _ => load_off(text, mode),
    }
}

fn write_vertices(out: &mut String, mesh: &SurfaceMesh) {
    for p in mesh.positions() {
        let _ = writeln!(out, "{} {} {}", format_q(p.x()), format_q(p.y()), format_q(p.z()));
    }
}

fn write_ring(out: &mut String, ring: &[usize]) {
    let _ = write!(out, "{}", ring.len());
    for v in ring {
        let _ = write!(out, " {v}");
    }
}

/// Writes OFF with exact rational coordinates. Fails on faces with holes.
pub fn save_off(mesh: &SurfaceMesh) -> Result<String, MeshError> {
    if let Some(f) = mesh.faces().iter().position(|f| !f.is_simple()) {
        return Err(MeshError::HoleRingsPresent(f));
    }
    let mut out = String::from("OFF\n");
    let _ = writeln!(out, "{} {} {}", mesh.num_vertices(), mesh.num_faces(), mesh.num_edges());
    write_vertices(&mut out, mesh);
    for face in mesh.faces() {
        write_ring(&mut out, face.outer());
        out.push('\n');
    }
    Ok(out)
}

pub fn save_offx(mesh: &SurfaceMesh) -> String {
    let mut out = String::from("OFFX\n");
    let _ = writeln!(out, "{} {} {}", mesh.num_vertices(), mesh.num_faces(), mesh.num_edges());
    write_vertices(&mut out, mesh);
    for face in mesh.faces() {
        let _ = write!(out, "{}", face.rings.len());
        for ring in &face.rings {
            out.push_str(" | ");
            write_ring(&mut out, ring);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::qf;

    const CUBE: &str = "OFF\n# unit cube\n8 6 12\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n0 0 1\n1 0 1\n0 1 1\n1 1 1\n\
4 0 2 3 1\n4 4 5 7 6\n4 0 1 5 4\n4 2 6 7 3\n4 0 4 6 2\n4 1 3 7 5\n";

    #[test]
    fn round_trip_off() {
        let m = load_off(CUBE, Arithmetic::Exact).unwrap();
        let text = save_off(&m).unwrap();
        assert_eq!(load_off(&text, Arithmetic::Exact).unwrap(), m);
    }

    #[test]
    fn rational_coordinates_survive() {
        let text = CUBE.replace("0 0 0\n1 0 0", "0 0 0\n3/3 0 0");
        let m = load_off(&text, Arithmetic::Exact).unwrap();
        assert_eq!(m.position(1).x(), &qf(1, 1));
    }

    #[test]
    fn parse_error_has_position() {
        let text = CUBE.replace("1 0 1\n", "1 zz 1\n");
        match load_off(&text, Arithmetic::Exact).unwrap_err() {
            MeshError::Parse { line, column, .. } => assert_eq!((line, column), (9, 3)),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn truncated_input_is_reported() {
        let text: String = CUBE.lines().take(12).collect::<Vec<_>>().join("\n");
        assert!(matches!(load_off(&text, Arithmetic::Exact), Err(MeshError::Parse { .. })));
    }

    #[test]
    fn out_of_range_index_is_a_parse_error() {
        let text = CUBE.replace("4 1 3 7 5", "4 1 3 7 9");
        assert!(matches!(load_off(&text, Arithmetic::Exact), Err(MeshError::Parse { line: 17, .. })));
    }

    #[test]
    fn offx_round_trip_matches_off() {
        let m = load_off(CUBE, Arithmetic::Exact).unwrap();
        let x = save_offx(&m);
        assert!(x.contains("1 | 4 "));
        assert_eq!(load_auto(&x, Arithmetic::Exact).unwrap(), m);
    }
}
