//! `mmdescend` command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::error::{Error, Result};
use crate::linalg::ExactMat;
use crate::obstruct::{integer_obstruction, DEFAULT_DEPTH};
use crate::rationalize::{descend, DescentStatus, SearchBounds};
use crate::sample;
use crate::scheme::{
    detect_ring, parse_matrix_literal, DocumentForm, Scheme, SchemeDocument, TransformTriple,
};
use crate::Variant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BRENT: i32 = 2;
pub const EXIT_NO_SOLUTION: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;
pub const EXIT_NO_OBSTRUCTION: i32 = 5;

/// Entry height of matrices drawn by `transform --random`.
const RANDOM_HEIGHT: i64 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Check all Brent equations.
    Verify,
    /// Print dimensions, field, ring and traces.
    Info,
    /// Apply (X, Y, Z) to the scheme.
    Transform,
    /// Search for an equivalent scheme over Q.
    Rationalize,
    /// Search for a non-integral trace of a product of M_j.
    Obstruct,
    /// Switch between triple form and encoding form.
    Convert,
}

#[derive(Debug, Parser)]
#[command(
    name = "mmdescend",
    version,
    about = "Exact field descent for matrix-multiplication schemes"
)]
pub struct CliConfig {
    #[arg(value_enum)]
    pub command: Command,
    pub file: PathBuf,
    /// Output file (transform, rationalize, convert).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Maximum product length for obstruct.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    /// Height bound for the norm-equation search.
    #[arg(long, default_value_t = 50)]
    pub height: u64,
    /// Coefficient bound for combinations of intertwiner basis elements.
    #[arg(long, default_value_t = 2)]
    pub comb: i64,
    /// Product family used by obstruct.
    #[arg(long, default_value = "OPQ", value_parser = parse_variant)]
    pub variant: Variant,
    /// Seed for `transform --random`; implies --random.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Load schemes without checking the Brent equations.
    #[arg(long)]
    pub skip_verify: bool,
    /// X for transform: matrix literal or file holding one.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long)]
    pub z: Option<String>,
    /// Draw random invertible X, Y, Z over the scheme's field.
    #[arg(long)]
    pub random: bool,
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cfg, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BrentViolation(_) => EXIT_BRENT,
                _ => EXIT_USAGE,
            }
        }
    }
}

pub fn execute(cfg: &CliConfig, out: &mut dyn Write) -> Result<i32> {
    let doc = SchemeDocument::load(&cfg.file).map_err(|e| match e {
        Error::Io(io) => Error::Format(format!("{}: {io}", cfg.file.display())),
        other => other,
    })?;
    if cfg.command == Command::Verify {
        return verify(&doc.scheme, out);
    }
    if !cfg.skip_verify {
        doc.scheme.ensure_valid()?;
    }
    match cfg.command {
        Command::Verify => unreachable!(),
        Command::Info => info(&doc, cfg, out),
        Command::Transform => transform(&doc, cfg, out),
        Command::Rationalize => rationalize(&doc.scheme, cfg, out),
        Command::Obstruct => obstruct(&doc.scheme, cfg, out),
        Command::Convert => convert(&doc, cfg, out),
    }
}

fn verify(s: &Scheme, out: &mut dyn Write) -> Result<i32> {
    let report = s.brent_verify();
    match &report.violation {
        None => {
            writeln!(
                out,
                "ok: {} satisfies all {} Brent equations",
                s.signature(),
                report.sums_checked
            )?;
            Ok(EXIT_OK)
        }
        Some(v) => {
            writeln!(out, "violation: {v}")?;
            Ok(EXIT_BRENT)
        }
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn info(doc: &SchemeDocument, cfg: &CliConfig, out: &mut dyn Write) -> Result<i32> {
    let s = &doc.scheme;
    let traces = s.traces();
    writeln!(
        out,
        "{}, ring {}, traces [{}]",
        s.signature(),
        detect_ring(s),
        join(&traces)
    )?;
    writeln!(out, "field: {}", s.field())?;
    let form = match doc.form {
        DocumentForm::Triples => "triples",
        DocumentForm::Encoding => "encoding",
    };
    writeln!(out, "form: {form}")?;
    if cfg.skip_verify {
        writeln!(out, "brent: not checked")?;
    } else {
        writeln!(out, "brent: ok")?;
    }
    for (j, t) in traces.iter().enumerate() {
        writeln!(out, "trace {}: {t}", j + 1)?;
    }
    Ok(EXIT_OK)
}

fn matrix_arg(value: &str, s: &Scheme) -> Result<ExactMat> {
    let path = Path::new(value);
    let text = if path.is_file() {
        std::fs::read_to_string(path)?
    } else {
        value.to_string()
    };
    parse_matrix_literal(&text, s.field())
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn render(s: &Scheme, form: DocumentForm) -> String {
    match form {
        DocumentForm::Triples => s.to_json(),
        DocumentForm::Encoding => s.to_encoding_json(),
    }
}

fn transform(doc: &SchemeDocument, cfg: &CliConfig, out: &mut dyn Write) -> Result<i32> {
    let s = &doc.scheme;
    let dims = s.dims();
    let t = if cfg.random || cfg.seed.is_some() {
        if cfg.x.is_some() || cfg.y.is_some() || cfg.z.is_some() {
            return Err(Error::Format(
                "--random cannot be combined with --x/--y/--z".into(),
            ));
        }
        let mut rng = sample::rng(cfg.seed.unwrap_or(0));
        sample::transform(&mut rng, dims, s.field(), RANDOM_HEIGHT, false)
    } else {
        let pick = |arg: &Option<String>, n| match arg {
            Some(v) => matrix_arg(v, s),
            None => Ok(ExactMat::identity(n, s.field())),
        };
        let (x, y, z) = (
            pick(&cfg.x, dims.m)?,
            pick(&cfg.y, dims.n)?,
            pick(&cfg.z, dims.p)?,
        );
        for (name, m, n) in [('X', &x, dims.m), ('Y', &y, dims.n), ('Z', &z, dims.p)] {
            if m.shape() != (n, n) {
                return Err(Error::Dimension(format!(
                    "{name} must be {n}x{n}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        TransformTriple::new(x, y, z)
            .map_err(|e| Error::Format(format!("{} is singular: {}", e.which, e.source)))?
    };
    let moved = s.apply_transform(&t)?;
    moved.ensure_valid()?;
    write_or_print(cfg.out.as_deref(), &render(&moved, doc.form), out)?;
    Ok(EXIT_OK)
}

fn rationalize(s: &Scheme, cfg: &CliConfig, out: &mut dyn Write) -> Result<i32> {
    let bounds = SearchBounds {
        height: cfg.height,
        comb: cfg.comb,
        ..SearchBounds::default()
    };
    let outcome = descend(s, &bounds)?;
    writeln!(out, "{}", outcome.report_json())?;
    Ok(match outcome.status {
        DescentStatus::Success => {
            if let (Some(path), Some(result)) = (&cfg.out, &outcome.result) {
                std::fs::write(path, result.to_json())?;
            }
            EXIT_OK
        }
        DescentStatus::NoSolution => EXIT_NO_SOLUTION,
        DescentStatus::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn obstruct(s: &Scheme, cfg: &CliConfig, out: &mut dyn Write) -> Result<i32> {
    if !s.is_rational() {
        return Err(Error::Format(
            "obstruct needs a scheme with rational entries; run rationalize first".into(),
        ));
    }
    let report = integer_obstruction(s, cfg.variant, cfg.depth)?;
    let mut value = serde_json::to_value(&report)?;
    value["message"] = report.summary().into();
    writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
    Ok(if report.found {
        EXIT_OK
    } else {
        EXIT_NO_OBSTRUCTION
    })
}

fn convert(doc: &SchemeDocument, cfg: &CliConfig, out: &mut dyn Write) -> Result<i32> {
    let target = match doc.form {
        DocumentForm::Triples => DocumentForm::Encoding,
        DocumentForm::Encoding => DocumentForm::Triples,
    };
    write_or_print(cfg.out.as_deref(), &render(&doc.scheme, target), out)?;
    Ok(EXIT_OK)
}
