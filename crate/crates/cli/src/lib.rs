//! Command-line front end: single queries as subcommands, or batches from a
//! plain-text spec file.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;
use ultraseq_core::corpus::{Corpus, DEFAULT_SEED};
use ultraseq_core::demo::delta_demo;
use ultraseq_core::genfun::{
    classify_fun, seminorm_bundle, test_set, weak_assoc_fun, Fun, GenfunError, DEFAULT_MAX_ORDER,
};
use ultraseq_core::gennum::{associate, AssocKind, GenError, GenNumber, Space};
use ultraseq_core::seqspaces::{ultranorm, SeqError, SeqRep, Verdict};
use ultraseq_core::temperate::{
    check_compatible, check_moderate, check_numeric, check_temperate, extend, CertStatus, Role,
    TemperateError, TemperateProbe,
};
use ultraseq_core::values::{Mode, Truth};
use ultraseq_core::weights::{
    scale_to_weights, verify_scale_axioms, AsymptoticScale, WeightsError,
};

pub mod inputs;
pub mod specfile;

use inputs::{parse_function_map, parse_input, parse_scalar_map, Input};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot parse '{input}' (column {column}): {msg}")]
    Parse {
        input: String,
        column: usize,
        msg: String,
    },
    #[error("{file}:{line}:{column}: {msg}")]
    Spec {
        file: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error(transparent)]
    Weights(#[from] WeightsError),
    #[error(transparent)]
    Fun(#[from] GenfunError),
    #[error(transparent)]
    Temperate(#[from] TemperateError),
}

/// Whether a query was answered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Decided,
    Inconclusive,
}

impl Status {
    fn of(t: Truth) -> Status {
        if t == Truth::Inconclusive {
            Status::Inconclusive
        } else {
            Status::Decided
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Decided => 0,
            Status::Inconclusive => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Standard,
    UnitBall,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RoleArg {
    Moderate,
    Compatible,
}

#[derive(Debug, Parser)]
#[command(
    name = "ultraseq",
    version,
    about = "Ultranorms, generalized numbers, association and temperate maps on sequence spaces"
)]
pub struct Cli {
    /// Weight family: colombeau, colombeau-scale[:LO..HI], infra-exponential,
    /// ultra[:LO..HI], egorov[:LO..HI], exp-tower[:LO..HI],
    /// custom:R1;R2;.., scale:power|exp|TEMPLATE
    #[arg(long, global = true, default_value = "colombeau")]
    pub space: String,
    /// Membership mode; defaults to the family's own.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Bound for the quantifier search over family members.
    #[arg(long = "m-max", global = true)]
    pub m_max: Option<u32>,
    /// Seed of the randomized probe corpora.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Highest seminorm order used for function sequences.
    #[arg(long, global = true, default_value_t = 2)]
    pub nu: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ultranorm of a sequence under each weight of the space.
    Norm { seq: String },
    /// Moderate / negligible classification.
    Classify { seq: String },
    /// Association of two sequences.
    Assoc {
        a: String,
        b: String,
        /// weak, strong:S, s-dual:S, weak-s:S or jx:J:X
        #[arg(long, default_value = "weak")]
        kind: String,
    },
    /// Weight family of an asymptotic scale, with its axiom report.
    ConvertScale {
        /// power, exp, geometric or a template such as exp(-{m}*n^0.5)
        scale: String,
        #[arg(long, default_value_t = 1)]
        lo: u32,
        #[arg(long, default_value_t = 16)]
        hi: u32,
    },
    /// Certificate that a scalar map is moderate or compatible.
    CheckMap {
        /// x, x^K, exp, log1p, inv-log, poly:C0,C1,.., affine:A,B or OUTER@INNER
        map: String,
        #[arg(long, value_enum, default_value = "moderate")]
        role: RoleArg,
        /// Use the numeric quantifier search even for catalog maps.
        #[arg(long)]
        numeric: bool,
    },
    /// Certify a function map on the probe corpus and apply it to a sequence.
    Extend {
        /// square, derivative, identity or exp
        map: String,
        seq: String,
    },
    /// Worked examples.
    Demo {
        #[arg(value_parser = ["delta"])]
        name: String,
    },
    /// Execute the queries of a spec file.
    Run { file: PathBuf },
}

/// Options shared by every query.
#[derive(Clone, Debug)]
pub struct Settings {
    pub space: Arc<Space>,
    pub seed: u64,
    pub nu: usize,
}

impl Settings {
    pub fn new(
        space: &str,
        mode: Option<Mode>,
        m_max: Option<u32>,
        seed: u64,
        nu: usize,
    ) -> Result<Self, CliError> {
        let mut s = Space::from_descriptor(space, mode)?;
        if let Some(m) = m_max {
            s = s.with_m_max(m);
        }
        if nu > DEFAULT_MAX_ORDER {
            return Err(CliError::Usage(format!(
                "--nu must be at most {}",
                DEFAULT_MAX_ORDER
            )));
        }
        Ok(Settings {
            space: Arc::new(s),
            seed,
            nu,
        })
    }
}

/// Parses `argv` and runs the command; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e)
            } else {
                write!(out, "{}", e)
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(s) => s.exit_code(),
        // the reader went away, as with `| head`
        Err(CliError::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            1
        }
    }
}

fn mode_of(m: Option<ModeArg>) -> Option<Mode> {
    m.map(|m| match m {
        ModeArg::Standard => Mode::Standard,
        ModeArg::UnitBall => Mode::UnitBall,
    })
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Status, CliError> {
    if let Command::Run { file } = &cli.command {
        return specfile::run_file(file, cli, out);
    }
    let settings = Settings::new(&cli.space, mode_of(cli.mode), cli.m_max, cli.seed, cli.nu)?;
    match &cli.command {
        Command::Norm { seq } => norm(&parse_input(seq)?, &settings, out),
        Command::Classify { seq } => classify(&parse_input(seq)?, &settings, out),
        Command::Assoc { a, b, kind } => assoc(
            &parse_input(a)?,
            &parse_input(b)?,
            &kind.parse()?,
            &settings,
            out,
        ),
        Command::ConvertScale { scale, lo, hi } => convert_scale(scale, *lo, *hi, out),
        Command::CheckMap { map, role, numeric } => check_map(map, *role, *numeric, &settings, out),
        Command::Extend { map, seq } => extend_map(map, &parse_input(seq)?, &settings, out),
        Command::Demo { .. } => demo(&settings, out),
        Command::Run { .. } => unreachable!("handled above"),
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<output>".into(),
        source: e,
    }
}

fn channels(input: &Input, nu: usize) -> Result<Vec<SeqRep>, CliError> {
    Ok(match input {
        Input::Num(x) => vec![x.magnitude()?],
        Input::Fun(f) => seminorm_bundle(f, nu)?,
    })
}

pub fn norm(input: &Input, s: &Settings, out: &mut dyn Write) -> Result<Status, CliError> {
    let bundle = channels(input, s.nu)?;
    let fam = &s.space.family;
    let single = fam.members.len() == 1 && bundle.len() == 1;
    let mut status = Status::Decided;
    for (m, r) in &fam.members {
        for ch in &bundle {
            let prefix = if single {
                String::new()
            } else {
                format!("m={} r={} [{}]: ", m, r.description, ch.label)
            };
            match ultranorm(ch, r) {
                Ok(v) => {
                    writeln!(out, "{}{}", prefix, v).map_err(io)?;
                    writeln!(out, "  witness: {}", v.witness).map_err(io)?;
                }
                Err(e) => {
                    status = Status::Inconclusive;
                    writeln!(out, "{}inconclusive ({})", prefix, e).map_err(io)?;
                }
            }
        }
    }
    Ok(status)
}

pub fn classify(input: &Input, s: &Settings, out: &mut dyn Write) -> Result<Status, CliError> {
    let c = match input {
        Input::Num(x) => s.space.classify(&[x.magnitude()?])?,
        Input::Fun(f) => classify_fun(f, s.nu, &s.space)?,
    };
    writeln!(out, "{}", c).map_err(io)?;
    Ok(if c.verdict == Verdict::Inconclusive {
        Status::Inconclusive
    } else {
        Status::Decided
    })
}

pub fn assoc(
    a: &Input,
    b: &Input,
    kind: &AssocKind,
    s: &Settings,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let v = match (a, b) {
        (Input::Num(x), Input::Num(y)) => associate(
            &GenNumber::make(x.clone(), &s.space)?,
            &GenNumber::make(y.clone(), &s.space)?,
            kind,
        )?,
        _ => {
            let (f, g) = (as_fun(a)?, as_fun(b)?);
            weak_assoc_fun(&f, &g, kind, &test_set(), &s.space)?
        }
    };
    writeln!(out, "{}", v).map_err(io)?;
    Ok(Status::of(v.holds))
}

/// Scalar inputs paired with a function sequence become constant-in-`x`
/// sequences only when they are plain numbers.
fn as_fun(i: &Input) -> Result<Fun, CliError> {
    match i {
        Input::Fun(f) => Ok(f.clone()),
        Input::Num(x) => {
            ultraseq_core::genfun::parse_fun(&format!("[{}]", x.label())).map_err(|_| {
                CliError::Usage(format!(
                    "'{}' cannot be compared with a function sequence",
                    x.label()
                ))
            })
        }
    }
}

pub fn convert_scale(
    scale: &str,
    lo: u32,
    hi: u32,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let a = AsymptoticScale::from_descriptor(scale)?;
    let fam = scale_to_weights(&a, lo, hi)?;
    writeln!(
        out,
        "family {} ({}), default mode {}",
        fam.name, fam.direction, fam.default_mode
    )
    .map_err(io)?;
    for (m, r) in &fam.members {
        writeln!(out, "  r^{} = {}", m, r.description).map_err(io)?;
    }
    let probe: Vec<i32> = (lo.max(1)..=hi.min(lo.max(1) + 5))
        .map(|m| m as i32)
        .collect();
    let report = verify_scale_axioms(&a, &probe, 4 * hi as i32)?;
    writeln!(out, "{}", report).map_err(io)?;
    Ok(if report.square.iter().any(|x| x.1.is_none()) {
        Status::Inconclusive
    } else {
        Status::Decided
    })
}

pub fn check_map(
    map: &str,
    role: RoleArg,
    numeric: bool,
    s: &Settings,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let g = parse_scalar_map(map)?;
    let fam = &s.space.family;
    let cert = match (role, numeric) {
        (RoleArg::Moderate, false) => check_moderate(&g, fam),
        (RoleArg::Compatible, false) => check_compatible(&g, fam),
        (RoleArg::Moderate, true) => check_numeric(Role::Moderate, &g, fam),
        (RoleArg::Compatible, true) => check_numeric(Role::Compatible, &g, fam),
    };
    writeln!(out, "{}", cert).map_err(io)?;
    if let CertStatus::Refuted(_) = cert.status {
        if let Some(ok) = cert.replay(&g, fam) {
            writeln!(
                out,
                "witness replay: {}",
                if ok {
                    "confirms the failure"
                } else {
                    "does not reproduce"
                }
            )
            .map_err(io)?;
        }
    }
    Ok(Status::of(cert.status.truth()))
}

pub fn extend_map(
    map: &str,
    input: &Input,
    s: &Settings,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let phi = parse_function_map(map)?;
    let Input::Fun(f) = input else {
        return Err(CliError::Usage(format!(
            "extend needs a function sequence, got the scalar sequence '{}'",
            input.label()
        )));
    };
    let mut corpus = Corpus::new(s.seed);
    let fs: Vec<Fun> = (0..6).map(|_| corpus.function()).collect();
    let ks: Vec<Fun> = (0..3).map(|_| corpus.negligible_function()).collect();
    let report = check_temperate(&phi, &s.space.family, &fs, &ks, &TemperateProbe::default())?;
    writeln!(out, "{}", report).map_err(io)?;
    match report.status {
        Truth::Yes => {
            let x = extend(&phi, &report, f, &s.space, s.nu)?;
            writeln!(out, "{}({}):", phi.name, f.label()).map_err(io)?;
            writeln!(out, "{}", x.classification).map_err(io)?;
            Ok(if x.classification.verdict == Verdict::Inconclusive {
                Status::Inconclusive
            } else {
                Status::Decided
            })
        }
        Truth::No => {
            writeln!(
                out,
                "{} does not extend to the quotient: the certificate was refuted",
                phi.name
            )
            .map_err(io)?;
            Ok(Status::Decided)
        }
        Truth::Inconclusive => Ok(Status::Inconclusive),
    }
}

pub fn demo(s: &Settings, out: &mut dyn Write) -> Result<Status, CliError> {
    let d = delta_demo(&s.space)?;
    writeln!(out, "{}", d).map_err(io)?;
    let undecided = d
        .sq_candidates
        .iter()
        .any(|(_, t)| *t == Truth::Inconclusive)
        || [&d.delta_class, &d.delta_sq_class]
            .iter()
            .any(|c| c.verdict == Verdict::Inconclusive);
    Ok(if undecided {
        Status::Inconclusive
    } else {
        Status::Decided
    })
}
