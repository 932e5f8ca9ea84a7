//! The `tighttri` command line.
//!
//! Exit status: 0 when the property holds or the command succeeded, 1 when
//! the property fails (the witness is on stdout), 2 on usage or input errors
//! (one line on stderr).

pub mod format;

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;
use tighttri::complex::{Complex, VertexId};
use tighttri::constructions::{
    admissible_k, classify_topology, handle_addition, search_tight, stacked_sphere_with_steps, Certificate, HandleStep,
    SearchOptions, Seed,
};
use tighttri::homology::betti;
use tighttri::linalg::FieldSpec;
use tighttri::manifold::verify_closed_manifold;
use tighttri::stackedness::{decompose_ti, induced_cycles, is_locally_stacked, is_stacked_sphere, mod3_obstruction};
use tighttri::tightness::{decide, BruteOptions, Mode};

use format::ComplexFile;

pub const SEED_ENV: &str = "TIGHTTRI_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] tighttri::Error),
}

#[derive(Debug, Parser)]
#[command(name = "tighttri", version, about = "Tightness checks and constructions for small triangulations")]
pub struct Cli {
    /// Print the full JSON report instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a property of a complex.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Betti numbers and f-vector.
    Homology {
        file: String,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Split a 2-sphere into tetrahedron and icosahedron boundaries.
    Decompose { file: String },
    /// Chordless cycles of the 1-skeleton.
    Cycles {
        file: String,
        #[arg(long)]
        max_len: Option<usize>,
        /// Only look for a cycle of length 1 mod 3.
        #[arg(long)]
        mod3: bool,
    },
    #[command(subcommand)]
    Gen(GenCmd),
    #[command(subcommand)]
    Search(SearchCmd),
    /// Topological type of a complex from a certificate that rebuilds it.
    Classify {
        file: String,
        #[arg(long)]
        cert: String,
    },
    /// Values of k for which 80k+1 is a perfect square, with the matching f0.
    AdmissibleK {
        #[arg(long)]
        limit: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CheckCmd {
    Tight {
        file: String,
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        #[command(flatten)]
        jobs: JobsArg,
        /// Allow the subset scan above 30 vertices.
        #[arg(long = "i-know-this-is-exponential")]
        exponential: bool,
    },
    Manifold {
        file: String,
    },
    StackedSphere {
        file: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        dim: u8,
    },
    LocallyStacked {
        file: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenCmd {
    /// A random stacked sphere.
    StackedSphere {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Remove two facets and identify them.
    Handle {
        file: String,
        /// Indices of the two facets in canonical order.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        facets: Vec<usize>,
        /// Pairs `a:b` identifying b (second facet) with a (first facet);
        /// defaults to matching the facets in increasing order.
        #[arg(long, value_delimiter = ',')]
        bijection: Vec<String>,
        /// Certificate of the input, extended by this step in the output.
        #[arg(long)]
        cert: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum SearchCmd {
    /// Look for a tight handle quotient of a stacked 3-sphere.
    Tight {
        #[arg(long)]
        k: u64,
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        seed: SeedArg,
        /// Number of restarts.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[command(flatten)]
        jobs: JobsArg,
        #[command(flatten)]
        out: OutArg,
        /// Write the certificate here.
        #[arg(long)]
        cert_out: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct FieldArg {
    /// q, a prime such as 2, or p:<prime>.
    #[arg(long, default_value = "q", value_parser = parse_field)]
    pub field: FieldSpec,
}

#[derive(Debug, Args)]
pub struct JobsArg {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Defaults to $TIGHTTRI_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Write the resulting complex file here.
    #[arg(short, long)]
    pub out: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Auto,
    Fast,
    Brute,
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    s.parse().map_err(|e: tighttri::Error| e.to_string())
}

impl SeedArg {
    fn resolve(&self) -> Result<u64, CliError> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not a seed"))),
            Err(_) => Ok(0),
        }
    }
}

/// Everything a command reports. Every key is always present so the JSON
/// schema does not depend on the command.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input: Option<String>,
    pub verdict: Option<bool>,
    pub method: Option<String>,
    pub field: Option<FieldSpec>,
    pub f_vector: Option<Vec<usize>>,
    pub betti: Option<Vec<usize>>,
    pub witness: Option<Value>,
    pub certificate: Option<Certificate>,
    pub seed: Option<u64>,
    pub wall_time_ms: u64,
    pub details: Value,
    #[serde(skip)]
    summary: String,
    #[serde(skip)]
    exit: i32,
}

impl Report {
    fn new(command: &str, input: Option<&str>) -> Report {
        Report {
            command: command.to_string(),
            input: input.map(str::to_string),
            verdict: None,
            method: None,
            field: None,
            f_vector: None,
            betti: None,
            witness: None,
            certificate: None,
            seed: None,
            wall_time_ms: 0,
            details: Value::Null,
            summary: String::new(),
            exit: 0,
        }
    }

    fn with_complex(mut self, x: &Complex, field: FieldSpec) -> Result<Report, CliError> {
        self.f_vector = Some(x.f_vector().0);
        self.betti = Some(betti(x, field)?.betti);
        self.field = Some(field);
        Ok(self)
    }

    fn verdict(mut self, holds: bool, witness: Option<Value>) -> Report {
        self.verdict = Some(holds);
        self.witness = witness;
        self.exit = if holds { 0 } else { 1 };
        self
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

/// Parse `args` (including the program name), run the command, and return
/// the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let line = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
            let _ = writeln!(err, "tighttri: {}", line.trim_start_matches("error: "));
            return 2;
        }
    };
    let start = Instant::now();
    match dispatch(&cli.command) {
        Ok(mut r) => {
            r.wall_time_ms = start.elapsed().as_millis() as u64;
            if cli.json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("serializable"));
            } else {
                let _ = writeln!(out, "{}", r.summary);
                if let Some(w) = &r.witness {
                    let _ = writeln!(out, "witness: {w}");
                }
            }
            r.exit
        }
        Err(e) => {
            let msg = e.to_string().replace('\n', "; ");
            let _ = writeln!(err, "tighttri: {msg}");
            2
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Check(c) => check(c),
        Command::Homology { file, field } => {
            let (name, x) = format::load(file)?;
            let mut r = Report::new("homology", Some(&name)).with_complex(&x, field.field)?;
            r.summary = format!(
                "betti {:?} f-vector {:?} over {}",
                r.betti.as_ref().unwrap(),
                r.f_vector.as_ref().unwrap(),
                field.field
            );
            Ok(r)
        }
        Command::Decompose { file } => decompose(file),
        Command::Cycles { file, max_len, mod3 } => cycles(file, *max_len, *mod3),
        Command::Gen(g) => gen(g),
        Command::Search(s) => search(s),
        Command::Classify { file, cert } => classify(file, cert),
        Command::AdmissibleK { limit } => {
            let pairs = admissible_k(*limit);
            let mut r = Report::new("admissible-k", None);
            r.summary = pairs.iter().map(|p| format!("({},{})", p.k, p.f0)).collect();
            r.details = json!({ "limit": limit, "pairs": pairs });
            Ok(r)
        }
    }
}

fn check(c: &CheckCmd) -> Result<Report, CliError> {
    match c {
        CheckCmd::Tight { file, field, mode, jobs, exponential } => {
            let (name, x) = format::load(file)?;
            let mode = match mode {
                ModeArg::Auto => Mode::Auto,
                ModeArg::Fast => Mode::Fast,
                ModeArg::Brute => Mode::Brute,
            };
            let opts = BruteOptions { jobs: jobs.jobs.map(|j| j as usize), allow_exponential: *exponential };
            let rep = decide(&x, field.field, mode, &opts).map_err(|e| match e {
                tighttri::Error::TooManyVertices(..) => CliError::Usage(e.to_string()),
                e => e.into(),
            })?;
            let mut r = Report::new("check tight", Some(&name)).with_complex(&x, field.field)?;
            r.method = Some(to_value(&rep.method).as_str().unwrap_or_default().to_string());
            r.details = json!({ "fast": rep.fast, "surface": rep.surface, "subsets_scanned": rep.subsets_scanned });
            r.summary = format!("tight over {}: {} ({})", field.field, rep.verdict, r.method.as_deref().unwrap_or(""));
            Ok(r.verdict(rep.verdict, rep.witness.as_ref().map(to_value)))
        }
        CheckCmd::Manifold { file } => {
            let (name, x) = format::load(file)?;
            let m = verify_closed_manifold(&x)?;
            let mut r = Report::new("check manifold", Some(&name)).with_complex(&x, FieldSpec::Rationals)?;
            r.details = json!({ "dim": m.dim });
            r.summary = format!("closed {}-manifold: {}", m.dim, m.holds);
            Ok(r.verdict(m.holds, m.defect.as_ref().map(to_value)))
        }
        CheckCmd::StackedSphere { file, dim } => {
            let (name, x) = format::load(file)?;
            let r = Report::new("check stacked-sphere", Some(&name)).with_complex(&x, FieldSpec::Rationals)?;
            let mut r = match is_stacked_sphere(&x, *dim as usize) {
                Ok(s) => {
                    let witness = s.remainder.as_ref().map(|f| json!({ "remainder": f }));
                    let mut r = r.verdict(s.holds, witness);
                    r.details = json!({ "removals": s.removals });
                    r
                }
                Err(e @ tighttri::Error::NotClosedManifold { .. }) => {
                    r.verdict(false, Some(json!({ "reason": e.to_string() })))
                }
                Err(e) => return Err(e.into()),
            };
            r.summary = format!("stacked {dim}-sphere: {}", r.verdict.unwrap_or(false));
            Ok(r)
        }
        CheckCmd::LocallyStacked { file } => {
            let (name, x) = format::load(file)?;
            let r = Report::new("check locally-stacked", Some(&name)).with_complex(&x, FieldSpec::Rationals)?;
            let mut r = match is_locally_stacked(&x) {
                Ok(v) => r.verdict(v.holds, v.witness.map(|w| json!({ "vertex": w }))),
                Err(e @ tighttri::Error::NotClosedManifold { .. }) => {
                    r.verdict(false, Some(json!({ "reason": e.to_string() })))
                }
                Err(e) => return Err(e.into()),
            };
            r.summary = format!("locally stacked: {}", r.verdict.unwrap_or(false));
            Ok(r)
        }
    }
}

fn decompose(file: &str) -> Result<Report, CliError> {
    let (name, x) = format::load(file)?;
    let r = Report::new("decompose", Some(&name)).with_complex(&x, FieldSpec::Rationals)?;
    match decompose_ti(&x) {
        Ok(d) => {
            let mut r = r.verdict(true, None);
            r.summary = format!("T:{} I:{}", d.t, d.i);
            r.details = to_value(&d);
            Ok(r)
        }
        Err(tighttri::Error::ForbiddenCycle { cycle, len }) => {
            let mut r = r.verdict(false, Some(json!({ "cycle": cycle, "len": len })));
            r.summary = format!("induced {len}-cycle of length 1 mod 3; no T/I decomposition");
            Ok(r)
        }
        Err(e @ tighttri::Error::HypothesisViolated(_)) => {
            let mut r = r.verdict(false, Some(json!({ "reason": e.to_string() })));
            r.summary = e.to_string();
            Ok(r)
        }
        Err(e) => Err(e.into()),
    }
}

fn cycles(file: &str, max_len: Option<usize>, mod3: bool) -> Result<Report, CliError> {
    let (name, x) = format::load(file)?;
    let mut r = Report::new("cycles", Some(&name)).with_complex(&x, FieldSpec::Rationals)?;
    if mod3 {
        let v = mod3_obstruction(&x);
        r.summary = format!("no induced cycle of length 1 mod 3: {}", v.holds);
        return Ok(r.verdict(v.holds, v.witness.as_ref().map(to_value)));
    }
    let found = induced_cycles(&x, max_len.unwrap_or(x.num_vertices()));
    r.summary = format!("{} chordless cycles", found.len());
    r.details = json!({ "count": found.len(), "cycles": found });
    Ok(r)
}

fn gen(g: &GenCmd) -> Result<Report, CliError> {
    match g {
        GenCmd::StackedSphere { n, dim, seed, out } => {
            let seed = seed.resolve()?;
            let (x, steps) = stacked_sphere_with_steps(*n, *dim, seed)?;
            let cert = Certificate {
                seed: Seed::Stacking { dim: *dim, steps },
                steps: Vec::new(),
                f_vector: x.f_vector().0,
                rng_seed: Some(seed),
                restart: None,
            };
            let name = format!("stacked-{dim}-sphere-n{n}-s{seed}");
            let mut r = emit_complex("gen stacked-sphere", &name, &x, out)?;
            r.certificate = Some(cert);
            r.seed = Some(seed);
            Ok(r)
        }
        GenCmd::Handle { file, facets, bijection, cert, out } => {
            let (name, x) = format::load(file)?;
            let [i, j] = facets[..] else {
                return Err(CliError::Usage("--facets takes exactly two indices i,j".into()));
            };
            let fs = x.facets();
            let pick = |i: usize| {
                fs.get(i)
                    .map(|f| f.vertices().to_vec())
                    .ok_or_else(|| CliError::Usage(format!("facet index {i} out of range 0..{}", fs.len())))
            };
            let (f1, f2) = (pick(i)?, pick(j)?);
            let bijection = if bijection.is_empty() {
                f1.iter().copied().zip(f2.iter().copied()).collect()
            } else {
                bijection.iter().map(|p| parse_pair(p)).collect::<Result<Vec<_>, _>>()?
            };
            let step = HandleStep { facet1: f1, facet2: f2, bijection };
            let base_cert = cert.as_deref().map(load_certificate).transpose()?;
            match handle_addition(&x, &step) {
                Ok(y) => {
                    let mut r = emit_complex("gen handle", &format!("{name}+handle"), &y, out)?;
                    r.certificate = base_cert.map(|mut c| {
                        c.steps.push(step.clone());
                        c.f_vector = y.f_vector().0;
                        c
                    });
                    r.details["step"] = to_value(&step);
                    Ok(r)
                }
                Err(
                    e @ (tighttri::Error::Inadmissible(_)
                    | tighttri::Error::FacetsIntersect(..)
                    | tighttri::Error::InvalidBijection(_)),
                ) => {
                    let mut r = Report::new("gen handle", Some(&name))
                        .verdict(false, Some(json!({ "reason": e.to_string(), "step": step })));
                    r.summary = format!("rejected: {e}");
                    Ok(r)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn parse_pair(s: &str) -> Result<(VertexId, VertexId), CliError> {
    let bad = || CliError::Usage(format!("bijection entry {s:?} is not a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

/// Report a generated complex, writing it to `out` when asked.
fn emit_complex(command: &str, name: &str, x: &Complex, out: &OutArg) -> Result<Report, CliError> {
    let file = ComplexFile::from_complex(name, x);
    if let Some(path) = &out.out {
        format::write_text(path, &file.to_json())?;
    }
    let mut r = Report::new(command, None).with_complex(x, FieldSpec::Rationals)?;
    r.summary = match &out.out {
        Some(p) => format!("wrote {} ({} vertices) to {p}", file.name, x.num_vertices()),
        None => file.to_text().trim_end().to_string(),
    };
    r.details = json!({ "complex": file });
    Ok(r.verdict(true, None))
}

/// A certificate file is either a bare certificate or any report carrying one.
fn load_certificate(path: &str) -> Result<Certificate, CliError> {
    let text = format::read_text(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    let v = match v.get("certificate") {
        Some(c) if !c.is_null() => c.clone(),
        _ => v,
    };
    Certificate::deserialize(v).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn search(s: &SearchCmd) -> Result<Report, CliError> {
    let SearchCmd::Tight { k, field, seed, budget, jobs, out, cert_out } = s;
    let seed = seed.resolve()?;
    let opts = SearchOptions { k: *k, field: field.field, budget: *budget, seed, jobs: jobs.jobs.map(|j| j as usize) };
    let res = search_tight(&opts).map_err(|e| match e {
        tighttri::Error::InadmissibleK(_) => CliError::Usage(e.to_string()),
        e => e.into(),
    })?;
    let details = json!({ "k": k, "budget": budget, "restarts": res.restarts, "rejected": res.rejected });
    let mut r = match &res.found {
        Some(found) => {
            let name = format!("tight-k{k}-s{seed}-r{}", found.restart);
            let mut r =
                emit_complex("search tight", &name, &found.complex, out)?.with_complex(&found.complex, field.field)?;
            r.details["restart"] = json!(found.restart);
            r.certificate = Some(found.certificate.clone());
            if let Some(p) = cert_out {
                let text = serde_json::to_string_pretty(&found.certificate).expect("serializable") + "\n";
                format::write_text(p, &text)?;
            }
            r.summary = format!("found {:?} after {} restarts", found.complex.f_vector().0, res.restarts);
            r
        }
        None => {
            let mut r = Report::new("search tight", None).verdict(false, None);
            r.field = Some(field.field);
            r.summary = format!("nothing found in {} restarts", res.restarts);
            r
        }
    };
    r.method = Some("handle-search".into());
    r.seed = Some(seed);
    for (key, v) in details.as_object().expect("object") {
        r.details[key] = v.clone();
    }
    Ok(r)
}

fn classify(file: &str, cert: &str) -> Result<Report, CliError> {
    let (name, x) = format::load(file)?;
    let cert = load_certificate(cert)?;
    let mut r = Report::new("classify", Some(&name)).with_complex(&x, FieldSpec::Rationals)?;
    r.certificate = Some(cert.clone());
    match classify_topology(&x, &cert) {
        Ok(t) => {
            r.summary = t.to_string();
            r.details = json!({ "topology": t.to_string() });
            Ok(r.verdict(true, None))
        }
        Err(e @ tighttri::Error::Replay(_)) => {
            r.summary = e.to_string();
            Ok(r.verdict(false, Some(json!({ "reason": e.to_string() }))))
        }
        Err(e) => Err(e.into()),
    }
}
