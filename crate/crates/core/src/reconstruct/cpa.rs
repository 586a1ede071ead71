//! CPA text format.
//!
//! ```text
//! CPA 1
//! V E F
//! u v length label      (E lines, label is convex or reflex)
//! k v1 ... vk           (F lines)
//! ```

use std::fmt::Write as _;

use super::{CombinatorialPoly, CpEdge, DihedralLabel};
use crate::geom::{format_q, parse_q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("CPA parse error at line {line}, column {column}: {message}")]
pub struct CpaError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Tok<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> (Vec<Vec<Tok<'_>>>, usize) {
    let mut rows = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        last = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut row = Vec::new();
        let mut offset = 0;
        for piece in body.split_whitespace() {
            let at = body[offset..].find(piece).map(|p| p + offset).unwrap_or(offset);
            offset = at + piece.len();
            row.push(Tok { text: piece, line: i + 1, column: at + 1 });
        }
        if !row.is_empty() {
            rows.push(row);
        }
    }
    (rows, last)
}

fn fail(t: &Tok, message: impl Into<String>) -> CpaError {
    CpaError { line: t.line, column: t.column, message: message.into() }
}

fn count(t: &Tok) -> Result<usize, CpaError> {
    t.text.parse().map_err(|_| fail(t, format!("expected a non-negative integer, found `{}`", t.text)))
}

fn arity(row: &[Tok], n: usize) -> Result<(), CpaError> {
    if row.len() < n {
        let last = &row[row.len() - 1];
        return Err(CpaError { line: last.line, column: last.column + last.text.len(), message: "too few values".into() });
    }
    if row.len() > n {
        return Err(fail(&row[n], "unexpected extra value"));
    }
    Ok(())
}

pub fn parse_cpa(text: &str) -> Result<CombinatorialPoly, CpaError> {
    let (rows, last) = tokenize(text);
    let mut it = rows.iter();
    let eof = |what: &str| CpaError { line: last + 1, column: 1, message: format!("unexpected end of input, expected {what}") };

    let header = it.next().ok_or_else(|| eof("header"))?;
    if header[0].text != "CPA" {
        return Err(fail(&header[0], "expected `CPA 1` header"));
    }
    arity(header, 2)?;
    if header[1].text != "1" {
        return Err(fail(&header[1], format!("unsupported version `{}`", header[1].text)));
    }
    let counts = it.next().ok_or_else(|| eof("counts"))?;
    arity(counts, 3)?;
    let (nv, ne, nf) = (count(&counts[0])?, count(&counts[1])?, count(&counts[2])?);

    let mut edges = Vec::with_capacity(ne);
    for _ in 0..ne {
        let row = it.next().ok_or_else(|| eof("edge"))?;
        arity(row, 4)?;
        let (u, v) = (count(&row[0])?, count(&row[1])?);
        for (t, x) in [(&row[0], u), (&row[1], v)] {
            if x >= nv {
                return Err(fail(t, format!("vertex index {x} out of range")));
            }
        }
        let length = parse_q(row[2].text).map_err(|e| fail(&row[2], e.0))?;
        let label = match row[3].text.to_ascii_lowercase().as_str() {
            "convex" => DihedralLabel::Convex,
            "reflex" => DihedralLabel::Reflex,
            other => return Err(fail(&row[3], format!("unknown label `{other}`, expected convex or reflex"))),
        };
        edges.push(CpEdge { u, v, length, label });
    }

    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let row = it.next().ok_or_else(|| eof("face"))?;
        let k = count(&row[0])?;
        arity(row, k + 1)?;
        let mut ring = Vec::with_capacity(k);
        for t in &row[1..] {
            let x = count(t)?;
            if x >= nv {
                return Err(fail(t, format!("vertex index {x} out of range")));
            }
            ring.push(x);
        }
        faces.push(ring);
    }
    if let Some(extra) = it.next() {
        return Err(fail(&extra[0], "unexpected trailing content"));
    }
    Ok(CombinatorialPoly { num_vertices: nv, edges, faces })
}

pub fn write_cpa(cp: &CombinatorialPoly) -> String {
    let mut out = String::from("CPA 1\n");
    let _ = writeln!(out, "{} {} {}", cp.num_vertices, cp.edges.len(), cp.faces.len());
    for e in &cp.edges {
        let _ = writeln!(out, "{} {} {} {}", e.u, e.v, format_q(&e.length), e.label.name());
    }
    for f in &cp.faces {
        let _ = write!(out, "{}", f.len());
        for v in f {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconstruct::test_support::cube_cp;

    #[test]
    fn round_trip() {
        let cp = cube_cp(1, 2, 3);
        assert_eq!(parse_cpa(&write_cpa(&cp)).unwrap(), cp);
    }

    #[test]
    fn fractions_and_decimals() {
        let mut text = write_cpa(&cube_cp(1, 1, 1));
        text = text.replacen("0 1 1 convex", "0 1 0.5 convex", 1).replacen("0 2 1 convex", "0 2 3/2 reflex", 1);
        let cp = parse_cpa(&text).unwrap();
        assert_eq!(cp.edges[0].length, crate::geom::qf(1, 2));
        assert_eq!(cp.edges[1].label, DihedralLabel::Reflex);
    }

    #[test]
    fn bad_label_position() {
        let text = write_cpa(&cube_cp(1, 1, 1)).replacen("0 1 1 convex", "0 1 1 flat", 1);
        let e = parse_cpa(&text).unwrap_err();
        assert_eq!((e.line, e.column), (3, 7));
    }

    #[test]
    fn truncated() {
        let text: String = write_cpa(&cube_cp(1, 1, 1)).lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(parse_cpa(&text).unwrap_err().message.contains("end of input"));
    }
}
