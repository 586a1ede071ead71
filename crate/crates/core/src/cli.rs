//! `orthopoly` command line.
//!
//! Exit codes: 0 success or affirmative verdict, 1 negative verdict, 2 input
//! error, 3 internal invariant failure (including gallery checklist
//! mismatches). Nothing is written to stderr when the code is 0.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::angles::angle_report;
use crate::gallery::{self, GalleryError};
use crate::mesh::{load_auto, save_off, save_offx, Arithmetic, SurfaceMesh};
use crate::orthotest::{is_orthogonal, theorem2_check};
use crate::reconstruct::{extract_combinatorial, parse_cpa, reconstruct, validate_input, write_cpa, ExtractError};

pub const OK: i32 = 0;
pub const NEGATIVE: i32 = 1;
pub const INPUT_ERROR: i32 = 2;
pub const INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "orthopoly", version, about = "Orthogonality tests and orthogonal reconstruction for polyhedra")]
pub struct Cli {
    /// Float mode with this tolerance for coplanarity and angle tests.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Exact rational arithmetic (the default; overrides --epsilon).
    #[arg(long, global = true)]
    pub exact: bool,
    /// Machine-readable JSON reports.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the primary output (mesh or CPA) to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a mesh (OFF/OFFX) or combinatorial description (CPA).
    Validate { path: PathBuf },
    /// Report every facial and dihedral angle.
    Analyze { path: PathBuf },
    /// Decide whether a mesh is orthogonal.
    CheckOrtho { path: PathBuf },
    /// Realize a CPA description as an orthogonal polyhedron.
    Reconstruct { path: PathBuf },
    /// Write the CPA description of an orthogonal mesh.
    Extract { path: PathBuf },
    /// Build a gallery solid and verify its checklist; lists names without one.
    Gallery { name: Option<String> },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Failure carrying an exit code and a message for stderr.
struct Fail(i32, String);

type Outcome = Result<i32, Fail>;

fn input<E: std::fmt::Display>(e: E) -> Fail {
    Fail(INPUT_ERROR, format!("error: {e}"))
}

impl Cli {
    fn mode(&self) -> Arithmetic {
        match (self.exact, self.epsilon) {
            (false, Some(e)) => Arithmetic::float_with(e),
            _ => Arithmetic::Exact,
        }
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail(INPUT_ERROR, format!("error: {}: {e}", path.display())))
}

fn load_mesh(path: &Path, mode: Arithmetic) -> Result<SurfaceMesh, Fail> {
    load_auto(&read(path)?, mode).map_err(|e| Fail(INPUT_ERROR, format!("error: {}: {e}", path.display())))
}

fn is_cpa(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("cpa"))
}

/// OFF when the mesh has no holes and the target is not `.offx`.
fn mesh_text(mesh: &SurfaceMesh, target: Option<&Path>) -> String {
    let want_offx = target.and_then(Path::extension).is_some_and(|e| e.eq_ignore_ascii_case("offx"));
    if want_offx {
        return save_offx(mesh);
    }
    save_off(mesh).unwrap_or_else(|_| save_offx(mesh))
}

fn write_file(path: &Path, text: &str) -> Result<(), Fail> {
    std::fs::write(path, text).map_err(|e| Fail(INPUT_ERROR, format!("error: {}: {e}", path.display())))
}

fn emit(io: &mut Io, text: &str) {
    let _ = io.out.write_all(text.as_bytes());
    if !text.is_empty() && !text.ends_with('\n') {
        let _ = io.out.write_all(b"\n");
    }
}

fn emit_json(io: &mut Io, v: &serde_json::Value) {
    emit(io, &serde_json::to_string_pretty(v).expect("json"));
}

fn histogram(values: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &v in values {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}

fn show_histogram(h: &BTreeMap<usize, usize>) -> String {
    let parts: Vec<String> = h.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn cmd_validate(cli: &Cli, path: &Path, io: &mut Io) -> Outcome {
    if is_cpa(path) {
        let cp = parse_cpa(&read(path)?).map_err(input)?;
        let report = validate_input(&cp).map_err(input)?;
        if cli.json {
            emit_json(io, &json!({ "kind": "cpa", "valid": true, "report": report, "degree_histogram": histogram(&report.degrees) }));
        } else {
            let mut s = format!(
                "valid: yes\nvertices {}, edges {}, faces {}\ngenus [0], components 1\ndegrees {}\n",
                report.vertices,
                report.edges,
                report.faces,
                show_histogram(&histogram(&report.degrees))
            );
            for d in &report.unrealizable_degrees {
                s.push_str(&format!("advisory: vertex {} has degree {} (not realizable orthogonally)\n", d.vertex, d.degree));
            }
            emit(io, &s);
        }
        return Ok(OK);
    }
    let mesh = load_mesh(path, cli.mode())?;
    let components = mesh.graph_components().count;
    let genus = mesh.euler_genus().ok();
    let degrees = histogram(&mesh.vertex_degrees());
    if cli.json {
        emit_json(
            io,
            &json!({
                "kind": "mesh",
                "valid": true,
                "manifold": true,
                "vertices": mesh.num_vertices(),
                "edges": mesh.num_edges(),
                "faces": mesh.num_faces(),
                "components": components,
                "surface_components": mesh.surface_components().count,
                "genus": genus,
                "has_holes": !mesh.all_simple(),
                "degree_histogram": degrees,
            }),
        );
    } else {
        let genus_text = match &genus {
            Some(g) => format!("genus {g:?}"),
            None => "genus undefined (faces with holes)".to_string(),
        };
        emit(
            io,
            &format!(
                "valid: yes\nmanifold: yes\nvertices {}, edges {}, faces {}\n{genus_text}, components {components}\ndegrees {}\n",
                mesh.num_vertices(),
                mesh.num_edges(),
                mesh.num_faces(),
                show_histogram(&degrees)
            ),
        );
    }
    Ok(OK)
}

fn cmd_analyze(cli: &Cli, path: &Path, io: &mut Io) -> Outcome {
    let mesh = load_mesh(path, cli.mode())?;
    let report = angle_report(&mesh).map_err(input)?;
    if cli.json {
        emit(io, &report.to_json());
    } else {
        emit(io, &report.to_text());
    }
    Ok(if report.hypotheses_hold() { OK } else { NEGATIVE })
}

fn cmd_check_ortho(cli: &Cli, path: &Path, io: &mut Io) -> Outcome {
    let mesh = load_mesh(path, cli.mode())?;
    let verdict = is_orthogonal(&mesh);
    let report = angle_report(&mesh).ok();
    let consistent = theorem2_check(&mesh);
    if cli.json {
        let mut v = verdict.to_json_value();
        v["hypotheses"] = match &report {
            Some(r) => json!({ "all_facial_right": r.all_facial_right, "all_dihedral_right": r.all_dihedral_right }),
            None => serde_json::Value::Null,
        };
        v["components"] = json!(mesh.graph_components().count);
        v["theorem_check"] = json!(consistent);
        emit_json(io, &v);
    } else {
        let mut s = verdict.to_text();
        match &report {
            Some(r) => {
                let yes = |b: bool| if b { "yes" } else { "no" };
                s.push_str(&format!(
                    "hypotheses: facial right multiples {}, dihedral right multiples {}, components {}\n",
                    yes(r.all_facial_right),
                    yes(r.all_dihedral_right),
                    mesh.graph_components().count
                ));
                if let Some(f) = r.first_non_right_facial() {
                    s.push_str(&format!("facial {} at face {} ring {} vertex {}\n", f.angle.describe(), f.face, f.ring, f.vertex));
                }
                if let Some(d) = r.first_non_right_dihedral() {
                    s.push_str(&format!("dihedral {} at edge {}\n", d.angle.describe(), d.edge));
                }
            }
            None => s.push_str("hypotheses: unavailable (degenerate angle)\n"),
        }
        emit(io, &s);
    }
    if !consistent {
        return Err(Fail(INTERNAL, "internal: connected mesh with right-multiple angles was not found orthogonal".into()));
    }
    Ok(if verdict.orthogonal { OK } else { NEGATIVE })
}

fn cmd_reconstruct(cli: &Cli, path: &Path, io: &mut Io) -> Outcome {
    let cp = parse_cpa(&read(path)?).map_err(input)?;
    let outcome = reconstruct(&cp).map_err(input)?;
    let off = outcome.realization().map(|r| mesh_text(&r.mesh, cli.out.as_deref()));
    if let (Some(p), Some(text)) = (&cli.out, &off) {
        write_file(p, text)?;
    }
    if cli.json {
        let mut v = outcome.to_json_value();
        if cli.out.is_none() {
            if let Some(text) = &off {
                v["off"] = json!(text);
            }
        }
        emit_json(io, &v);
    } else {
        let mut s = outcome.to_text();
        if cli.out.is_none() {
            if let Some(text) = &off {
                s.push_str(text);
            }
        }
        emit(io, &s);
    }
    Ok(if outcome.is_realized() { OK } else { NEGATIVE })
}

fn cmd_extract(cli: &Cli, path: &Path, io: &mut Io) -> Outcome {
    let mesh = load_mesh(path, cli.mode())?;
    let cp = match extract_combinatorial(&mesh) {
        Ok(cp) => cp,
        Err(e @ (ExtractError::NotOrthogonal(_) | ExtractError::NonRightDihedral(_))) => {
            return Err(Fail(NEGATIVE, format!("error: {e}")));
        }
        Err(e) => return Err(input(e)),
    };
    let text = write_cpa(&cp);
    match &cli.out {
        Some(p) => write_file(p, &text)?,
        None => emit(io, &text),
    }
    Ok(OK)
}

fn cmd_gallery(cli: &Cli, name: Option<&str>, io: &mut Io) -> Outcome {
    let Some(name) = name else {
        emit(io, &gallery::NAMES.join("\n"));
        return Ok(OK);
    };
    let entry = gallery::build(name).map_err(|e| match e {
        GalleryError::Unknown(_) => Fail(INPUT_ERROR, format!("error: {e}; known entries: {}", gallery::NAMES.join(", "))),
        other => Fail(INTERNAL, format!("internal: {other}")),
    })?;
    let verdict = gallery::verify_entry(&entry);
    let mismatches = verdict.as_ref().err().cloned().unwrap_or_default();
    let text = mesh_text(&entry.mesh, cli.out.as_deref());
    if let Some(p) = &cli.out {
        write_file(p, &text)?;
    }
    if cli.json {
        let mut v = json!({
            "name": entry.name,
            "params": entry.params,
            "checklist": entry.checklist,
            "pass": mismatches.is_empty(),
            "mismatches": mismatches,
        });
        if cli.out.is_none() {
            v["mesh"] = json!(text);
        }
        emit_json(io, &v);
    } else {
        let mut s = String::new();
        if cli.out.is_none() {
            s.push_str(&text);
        }
        // Comment lines keep the combined output a readable mesh file.
        s.push_str(&format!("# {}: {}\n", entry.name, entry.params));
        if mismatches.is_empty() {
            s.push_str("# checklist: pass\n");
        } else {
            s.push_str("# checklist: FAIL\n");
        }
        emit(io, &s);
    }
    if mismatches.is_empty() {
        Ok(OK)
    } else {
        let lines: Vec<String> = mismatches.iter().map(|m| format!("checklist failure: {m}")).collect();
        Err(Fail(INTERNAL, lines.join("\n")))
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut io = Io { out, err };
    let result = match &cli.command {
        Command::Validate { path } => cmd_validate(&cli, path, &mut io),
        Command::Analyze { path } => cmd_analyze(&cli, path, &mut io),
        Command::CheckOrtho { path } => cmd_check_ortho(&cli, path, &mut io),
        Command::Reconstruct { path } => cmd_reconstruct(&cli, path, &mut io),
        Command::Extract { path } => cmd_extract(&cli, path, &mut io),
        Command::Gallery { name } => cmd_gallery(&cli, name.as_deref(), &mut io),
    };
    match result {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(io.err, "{msg}");
            code
        }
    }
}

pub fn main() -> ExitCode {
    let code = run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["orthopoly"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn gallery_lists_and_builds() {
        let (code, out, err) = call(&["gallery"]);
        assert_eq!((code, err.as_str()), (0, ""));
        assert!(out.contains("fig1_middle"));
        let (code, out, err) = call(&["gallery", "fig1_middle"]);
        assert_eq!((code, err.as_str()), (0, ""));
        assert!(out.starts_with("OFF") && out.contains("# checklist: pass"));
    }

    #[test]
    fn unknown_entry_and_bad_flags_are_input_errors() {
        assert_eq!(call(&["gallery", "nonsuch"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["analyze", "/nonexistent/file.off"]).0, 2);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, err) = call(&["--help"]);
        assert_eq!((code, err.is_empty()), (0, true));
        assert!(out.contains("check-ortho"));
    }

    #[test]
    fn epsilon_selects_float_mode() {
        let cli = Cli::try_parse_from(["orthopoly", "--epsilon", "1e-6", "gallery"]).unwrap();
        assert!(!cli.mode().is_exact());
        let cli = Cli::try_parse_from(["orthopoly", "--epsilon", "1e-6", "--exact", "gallery"]).unwrap();
        assert!(cli.mode().is_exact());
    }
}
