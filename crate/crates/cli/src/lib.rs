//! The `contactlab` command-line tool.
//!
//! Exit codes: 0 pass, 1 semantic failure, 2 input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use contactlab::classify::{classify, Candidates, Gauge};
use contactlab::conformal::{rescale, transform_candidates, ConformalChange, ConformalError};
use contactlab::corpus;
use contactlab::schema::{Loaded, StructureFile};
use contactlab::structure::{default_samples, DEFAULT_SAMPLE_COUNT};
use contactlab::symplin::lefschetz_summary;
use contactlab::{parse, AlmostContactStructure, DiffForm, ExpPoly, KForm, Rational};

pub mod report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const SAMPLES_ENV: &str = "CONTACTLAB_SAMPLES";

#[derive(Debug, Parser)]
#[command(name = "contactlab", version, about = "Exact checks for almost contact metric structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GaugeArg {
    H0,
    Candidate,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the almost contact metric axioms.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Validate, then classify against the structure equations.
    Classify {
        file: PathBuf,
        /// Candidate f; replaces the file's candidates.
        #[arg(long = "f", allow_hyphen_values = true)]
        f: Option<String>,
        /// Candidate omega as coord=EXPR,...; replaces the file's candidates.
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<String>,
        #[arg(long, value_enum)]
        gauge: Option<GaugeArg>,
        #[arg(long)]
        json: bool,
    },
    /// Apply a conformal change exp(sigma) and write the new structure file.
    Rescale {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the Lefschetz matrix of R^{2n} and its identity checks.
    Lefschetz {
        #[arg(long = "n")]
        n: usize,
    },
    /// List the built-in examples or dump one as a structure file.
    Examples {
        #[arg(long)]
        dump: Option<String>,
    },
    /// Evaluate every tensor field at a point.
    Eval {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// An error already reported to the user, carrying the exit code.
struct Exit(i32);

type CmdResult = Result<i32, Exit>;

impl Io<'_> {
    fn fail(&mut self, code: i32, msg: impl std::fmt::Display) -> Exit {
        let _ = writeln!(self.err, "error: {msg}");
        Exit(code)
    }

    fn print(&mut self, text: &str) {
        let _ = self.out.write_all(text.as_bytes());
    }
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let mut io = Io { out, err };
    let result = match cli.command {
        Command::Validate { file, json } => cmd_validate(&mut io, &file, json),
        Command::Classify { file, f, omega, gauge, json } => cmd_classify(&mut io, &file, f, omega, gauge, json),
        Command::Rescale { file, sigma, out } => cmd_rescale(&mut io, &file, &sigma, &out),
        Command::Lefschetz { n } => cmd_lefschetz(&mut io, n),
        Command::Examples { dump } => cmd_examples(&mut io, dump.as_deref()),
        Command::Eval { file, at } => cmd_eval(&mut io, &file, &at),
    };
    result.unwrap_or_else(|Exit(code)| code)
}

fn read_file(io: &mut Io<'_>, path: &Path) -> Result<(StructureFile, Loaded), Exit> {
    let text = fs::read_to_string(path).map_err(|e| io.fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    let file = StructureFile::from_json(&text).map_err(|e| io.fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    let loaded = file.load().map_err(|e| io.fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    Ok((file, loaded))
}

fn sample_count(io: &mut Io<'_>) -> Result<usize, Exit> {
    match std::env::var(SAMPLES_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| io.fail(EXIT_INPUT, format!("{SAMPLES_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_SAMPLE_COUNT),
    }
}

fn samples_for(io: &mut Io<'_>, loaded: &Loaded) -> Result<Vec<Vec<f64>>, Exit> {
    match &loaded.samples {
        Some(s) => Ok(s.clone()),
        None => Ok(default_samples(loaded.structure.dim(), sample_count(io)?)),
    }
}

fn cmd_validate(io: &mut Io<'_>, path: &Path, json: bool) -> CmdResult {
    let (_, loaded) = read_file(io, path)?;
    let samples = samples_for(io, &loaded)?;
    let rep = loaded.structure.validate(&samples);
    if json {
        io.print(&report::render(&report::validation(&rep)));
    } else {
        let status = if rep.symbolic_ok() { "valid" } else { "INVALID" };
        io.print(&format!("{}: {status} almost contact metric structure\n{rep}", path.display()));
        if rep.symbolic_ok() && !rep.numeric_ok() {
            io.print("warning: numeric checks failed at some sample points\n");
        }
    }
    Ok(if rep.symbolic_ok() { EXIT_OK } else { EXIT_FAIL })
}

fn parse_omega(io: &mut Io<'_>, s: &AlmostContactStructure, text: &str) -> Result<KForm, Exit> {
    let chart = s.chart();
    let mut comps = vec![ExpPoly::zero(chart); chart.dim()];
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| io.fail(EXIT_INPUT, format!("--omega: expected coord=EXPR, got `{part}`")))?;
        let name = name.trim();
        let i = chart
            .index_of(name)
            .ok_or_else(|| io.fail(EXIT_INPUT, format!("--omega: unknown coordinate `{name}`")))?;
        comps[i] = parse(value.trim(), chart).map_err(|e| io.fail(EXIT_INPUT, format!("--omega.{name}: {e}")))?;
    }
    DiffForm::one_form(chart, comps).map_err(|e| io.fail(EXIT_INPUT, format!("--omega: {e}")))
}

fn cmd_classify(
    io: &mut Io<'_>,
    path: &Path,
    f: Option<String>,
    omega: Option<String>,
    gauge: Option<GaugeArg>,
    json: bool,
) -> CmdResult {
    let (_, loaded) = read_file(io, path)?;
    let s = &loaded.structure;
    let samples = samples_for(io, &loaded)?;
    let validation = s.validate(&samples);
    if !validation.symbolic_ok() {
        io.print(&format!("{}: not an almost contact metric structure\n{validation}", path.display()));
        return Ok(EXIT_FAIL);
    }
    let mut cands = loaded.candidates.clone();
    if f.is_some() || omega.is_some() {
        cands = Candidates { sigma: cands.sigma, ..Candidates::default() };
        if let Some(text) = &f {
            cands.f = Some(parse(text, s.chart()).map_err(|e| io.fail(EXIT_INPUT, format!("--f: {e}")))?);
        }
        if let Some(text) = &omega {
            cands.omega = Some(parse_omega(io, s, text)?);
        }
    }
    let gauge = match gauge {
        None => Gauge::Auto,
        Some(GaugeArg::H0) => Gauge::H0,
        Some(GaugeArg::Candidate) => Gauge::Candidate,
    };
    let rep = classify(s, &cands, gauge).map_err(|e| io.fail(EXIT_INPUT, e))?;
    if json {
        io.print(&report::render(&report::classification(&rep)));
    } else {
        io.print(&format!("{}\n{rep}", path.display()));
    }
    Ok(if rep.tags.is_empty() { EXIT_FAIL } else { EXIT_OK })
}

fn cmd_rescale(io: &mut Io<'_>, path: &Path, sigma: &str, out: &Path) -> CmdResult {
    let (file, loaded) = read_file(io, path)?;
    let s = &loaded.structure;
    let sigma = parse(sigma, s.chart()).map_err(|e| io.fail(EXIT_INPUT, format!("--sigma: {e}")))?;
    let change = ConformalChange::new(sigma).map_err(|e| io.fail(EXIT_INPUT, format!("--sigma: {e}")))?;
    let rescaled = match rescale(s, &change) {
        Ok(r) => r,
        Err(e @ (ConformalError::InvalidStructure | ConformalError::Unstable(_))) => {
            return Err(io.fail(EXIT_FAIL, e));
        }
        Err(e) => return Err(io.fail(EXIT_INPUT, e)),
    };
    let cands = transform_candidates(&loaded.candidates, &change);
    let new_file = StructureFile::from_structure(&rescaled, &cands, file.samples.clone());
    fs::write(out, new_file.to_json()).map_err(|e| io.fail(EXIT_INPUT, format!("{}: {e}", out.display())))?;
    io.print(&format!("wrote {}\n", out.display()));
    io.print(&format!("sigma = {}\n", change.sigma()));
    if let Some(f) = &cands.f {
        io.print(&format!("f' = f exp(sigma) = {f}\n"));
    }
    if let Some(w) = &cands.omega {
        io.print(&format!("omega' = omega - d sigma = {w}\n"));
    }
    if let Some(sc) = &cands.sigma {
        io.print(&format!("sigma_c' = sigma_c - sigma = {sc}\n"));
    }
    Ok(EXIT_OK)
}

fn cmd_lefschetz(io: &mut Io<'_>, n: usize) -> CmdResult {
    let summary = lefschetz_summary(n).map_err(|e| io.fail(EXIT_INPUT, e))?;
    io.print(&summary.to_string());
    let ok = summary.matrix.injective() && summary.volume.holds() && summary.contraction_ok;
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_examples(io: &mut Io<'_>, dump: Option<&str>) -> CmdResult {
    match dump {
        Some(name) => {
            let e = corpus::by_name(name).ok_or_else(|| io.fail(EXIT_INPUT, format!("unknown example `{name}`")))?;
            let file = StructureFile::from_structure(&e.structure, &e.candidates, Some(e.samples.clone()));
            io.print(&file.to_json());
        }
        None => {
            for e in corpus::all() {
                io.print(&format!("{:<26} dim {}  {}\n", e.name, e.structure.dim(), e.notes));
            }
        }
    }
    Ok(EXIT_OK)
}

/// Formats without a sign on zero.
fn num(x: f64) -> String {
    (x + 0.0).to_string()
}

fn float_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| num(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn cmd_eval(io: &mut Io<'_>, path: &Path, at: &str) -> CmdResult {
    let (_, loaded) = read_file(io, path)?;
    let s = &loaded.structure;
    let point: Vec<f64> = at
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| io.fail(EXIT_INPUT, format!("--at: {e}")))?;
    if point.len() != s.dim() {
        return Err(io.fail(EXIT_INPUT, format!("--at: expected {} values, got {}", s.dim(), point.len())));
    }
    let eval_err = |e: &dyn std::fmt::Display| format!("evaluation failed: {e}");
    let coords = s.chart().coords().join(", ");
    let mut text = format!("point ({coords}) = {}\n", float_list(&point));
    let eta = s.eta.components();
    let eta: Vec<f64> = eta.iter().map(|c| c.eval(&point)).collect::<Result<_, _>>().map_err(|e| io.fail(EXIT_FAIL, eval_err(&e)))?;
    text += &format!("eta = {}\n", float_list(&eta));
    let xi = s.xi.eval(&point).map_err(|e| io.fail(EXIT_FAIL, eval_err(&e)))?;
    text += &format!("xi = {}\n", float_list(&xi));
    for (name, m) in [("phi", &s.phi), ("g", &s.g)] {
        let v = m.eval(&point).map_err(|e| io.fail(EXIT_FAIL, eval_err(&e)))?;
        text += &format!("{name} =\n");
        for i in 0..v.nrows() {
            let row: Vec<f64> = (0..v.ncols()).map(|j| v[(i, j)]).collect();
            text += &format!("  {}\n", float_list(&row));
        }
    }
    let phi = s.fundamental_form().map_err(|e| io.fail(EXIT_FAIL, e))?;
    text += &format!("Phi = {}\n", form_values(io, s, &phi, &point)?);
    if let Some(f) = &loaded.candidates.f {
        text += &format!("f = {}\n", num(f.eval(&point).map_err(|e| io.fail(EXIT_FAIL, eval_err(&e)))?));
    }
    if let Some(w) = &loaded.candidates.omega {
        text += &format!("omega = {}\n", form_values(io, s, w, &point)?);
    }
    if let Some(sg) = &loaded.candidates.sigma {
        text += &format!("sigma = {}\n", num(sg.eval(&point).map_err(|e| io.fail(EXIT_FAIL, eval_err(&e)))?));
    }
    io.print(&text);
    Ok(EXIT_OK)
}

fn form_values(io: &mut Io<'_>, s: &AlmostContactStructure, form: &DiffForm<Rational>, point: &[f64]) -> Result<String, Exit> {
    let values = form.eval(point).map_err(|e| io.fail(EXIT_FAIL, format!("evaluation failed: {e}")))?;
    let coords = s.chart().coords();
    let terms: Vec<String> = values
        .iter()
        .filter(|(_, v)| **v != 0.0)
        .map(|(idx, v)| {
            let basis: Vec<String> = idx.iter().map(|&i| format!("d{}", coords[i])).collect();
            format!("{} {}", num(*v), basis.join("^"))
        })
        .collect();
    Ok(if terms.is_empty() { "0".to_string() } else { terms.join(" + ") })
}
