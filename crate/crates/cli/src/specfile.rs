//! Plain-text spec files:
//!
//! ```text
//! [space]
//! family = colombeau
//! mode = standard
//!
//! [sequences]
//! a = n^2 + log(n)
//! d = delta
//!
//! [queries]
//! norm = a
//! classify = d
//! assoc = a b weak
//! check-map = exp moderate
//! extend = square d
//! convert-scale = power
//! demo = delta
//! ```
//!
//! `#` starts a comment. Every error names `file:line:column`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use ultraseq_core::values::Mode;

use crate::inputs::{parse_input, Input};
use crate::{
    assoc, check_map, classify, convert_scale, demo, extend_map, io, mode_of, norm, Cli, CliError,
    RoleArg, Settings, Status,
};

#[derive(Clone, Debug, PartialEq)]
pub struct Located {
    pub line: usize,
    /// 1-based column of the value.
    pub column: usize,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Query {
    pub verb: String,
    pub line: usize,
    /// Arguments with their columns.
    pub args: Vec<(usize, String)>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpecFile {
    pub space: BTreeMap<String, Located>,
    /// In file order.
    pub sequences: Vec<(String, Located)>,
    pub queries: Vec<Query>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Space,
    Sequences,
    Queries,
}

const SPACE_KEYS: [&str; 5] = ["family", "mode", "m_max", "seed", "nu"];
const VERBS: [&str; 7] = [
    "norm",
    "classify",
    "assoc",
    "check-map",
    "extend",
    "convert-scale",
    "demo",
];

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a)
}

/// Splits on whitespace, keeping 1-based columns.
fn words(s: &str, base: usize) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices().chain(std::iter::once((s.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(a)) => {
                out.push((base + s[..a].chars().count(), s[a..i].to_string()));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

/// Parses the text of a spec file; `file` only labels errors.
pub fn parse(file: &str, text: &str) -> Result<SpecFile, CliError> {
    let err = |line: usize, column: usize, msg: String| CliError::Spec {
        file: file.into(),
        line,
        column,
        msg,
    };
    let mut spec = SpecFile::default();
    let mut section = Section::None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = body.chars().take_while(|c| c.is_whitespace()).count() + 1;
        if trimmed.starts_with('[') {
            section = match trimmed {
                "[space]" => Section::Space,
                "[sequences]" => Section::Sequences,
                "[queries]" => Section::Queries,
                other => return Err(err(line, indent, format!("unknown section {}", other))),
            };
            continue;
        }
        let Some(eq) = body.find('=') else {
            return Err(err(line, indent, "expected 'key = value'".into()));
        };
        let key = body[..eq].trim().to_string();
        let value_raw = &body[eq + 1..];
        let lead = value_raw.chars().take_while(|c| c.is_whitespace()).count();
        let value = value_raw.trim().to_string();
        let column = body[..eq + 1].chars().count() + lead + 1;
        if key.is_empty() {
            return Err(err(line, indent, "missing key before '='".into()));
        }
        if value.is_empty() {
            return Err(err(line, column, format!("missing value for '{}'", key)));
        }
        let located = Located {
            line,
            column,
            text: value.clone(),
        };
        match section {
            Section::None => {
                return Err(err(
                    line,
                    indent,
                    "entry outside of a [space], [sequences] or [queries] section".into(),
                ))
            }
            Section::Space => {
                if !SPACE_KEYS.contains(&key.as_str()) {
                    return Err(err(
                        line,
                        indent,
                        format!(
                            "unknown space key '{}' (expected one of {})",
                            key,
                            SPACE_KEYS.join(", ")
                        ),
                    ));
                }
                if spec.space.insert(key.clone(), located).is_some() {
                    return Err(err(line, indent, format!("duplicate space key '{}'", key)));
                }
            }
            Section::Sequences => {
                if !key.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(err(
                        line,
                        indent,
                        format!("sequence names are alphanumeric, got '{}'", key),
                    ));
                }
                if spec.sequences.iter().any(|(k, _)| *k == key) {
                    return Err(err(line, indent, format!("duplicate sequence '{}'", key)));
                }
                spec.sequences.push((key, located));
            }
            Section::Queries => {
                if !VERBS.contains(&key.as_str()) {
                    return Err(err(
                        line,
                        indent,
                        format!(
                            "unknown query '{}' (expected one of {})",
                            key,
                            VERBS.join(", ")
                        ),
                    ));
                }
                spec.queries.push(Query {
                    verb: key,
                    line,
                    args: words(&value, column),
                });
            }
        }
    }
    Ok(spec)
}

/// Resolved settings and sequences, ready to execute.
pub struct Resolved {
    pub settings: Settings,
    pub sequences: BTreeMap<String, Input>,
}

fn parse_mode(l: &Located, err: &dyn Fn(&Located, String) -> CliError) -> Result<Mode, CliError> {
    l.text.parse::<Mode>().map_err(|e| err(l, e.to_string()))
}

/// Resolves the space and parses every sequence, with command-line options
/// as defaults for keys the file leaves out.
pub fn resolve(file: &str, spec: &SpecFile, cli: &Cli) -> Result<Resolved, CliError> {
    let err = |l: &Located, msg: String| CliError::Spec {
        file: file.into(),
        line: l.line,
        column: l.column,
        msg,
    };
    let family = spec
        .space
        .get("family")
        .map_or(cli.space.as_str(), |l| l.text.as_str());
    let mode = match spec.space.get("mode") {
        Some(l) => Some(parse_mode(l, &err)?),
        None => mode_of(cli.mode),
    };
    let num = |key: &str| -> Result<Option<u64>, CliError> {
        spec.space
            .get(key)
            .map(|l| {
                l.text
                    .parse::<u64>()
                    .map_err(|_| err(l, format!("{} must be a natural number", key)))
            })
            .transpose()
    };
    let m_max = num("m_max")?.map(|v| v as u32).or(cli.m_max);
    let seed = num("seed")?.unwrap_or(cli.seed);
    let nu = num("nu")?.map(|v| v as usize).unwrap_or(cli.nu);
    let settings = Settings::new(family, mode, m_max, seed, nu).map_err(|e| {
        match spec.space.get("family") {
            Some(l) => err(l, e.to_string()),
            None => e,
        }
    })?;
    let mut sequences = BTreeMap::new();
    for (name, l) in &spec.sequences {
        let input = parse_input(&l.text).map_err(|e| match e {
            CliError::Parse { column, msg, .. } => CliError::Spec {
                file: file.into(),
                line: l.line,
                column: l.column + column - 1,
                msg,
            },
            other => err(l, other.to_string()),
        })?;
        sequences.insert(name.clone(), input);
    }
    Ok(Resolved {
        settings,
        sequences,
    })
}

/// Checks arity and name resolution of every query before anything runs.
pub fn check_queries(file: &str, spec: &SpecFile, r: &Resolved) -> Result<(), CliError> {
    for q in &spec.queries {
        let err = |column: usize, msg: String| CliError::Spec {
            file: file.into(),
            line: q.line,
            column,
            msg,
        };
        let (min, max, names): (usize, usize, &[usize]) = match q.verb.as_str() {
            "norm" | "classify" => (1, 1, &[0]),
            "assoc" => (2, 3, &[0, 1]),
            "check-map" => (1, 2, &[]),
            "extend" => (2, 2, &[1]),
            "convert-scale" => (1, 3, &[]),
            "demo" => (1, 1, &[]),
            _ => unreachable!("verbs are checked while parsing"),
        };
        let end = q.args.last().map_or(1, |(c, t)| c + t.chars().count());
        if q.args.len() < min || q.args.len() > max {
            return Err(err(
                end,
                format!(
                    "'{}' takes {} to {} arguments, got {}",
                    q.verb,
                    min,
                    max,
                    q.args.len()
                ),
            ));
        }
        for &i in names {
            let (col, name) = &q.args[i];
            if !r.sequences.contains_key(name) {
                return Err(err(*col, format!("unknown sequence '{}'", name)));
            }
        }
        match q.verb.as_str() {
            "assoc" => {
                if let Some((col, k)) = q.args.get(2) {
                    k.parse::<ultraseq_core::gennum::AssocKind>()
                        .map_err(|e| err(*col, e.to_string()))?;
                }
            }
            "check-map" => {
                crate::inputs::parse_scalar_map(&q.args[0].1)
                    .map_err(|e| err(q.args[0].0, e.to_string()))?;
                if let Some((col, role)) = q.args.get(1) {
                    if role != "moderate" && role != "compatible" {
                        return Err(err(
                            *col,
                            format!("role must be moderate or compatible, got '{}'", role),
                        ));
                    }
                }
            }
            "extend" => {
                crate::inputs::parse_function_map(&q.args[0].1)
                    .map_err(|e| err(q.args[0].0, e.to_string()))?;
            }
            "demo" if q.args[0].1 != "delta" => {
                return Err(err(q.args[0].0, format!("unknown demo '{}'", q.args[0].1)))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Runs every query in order; the status is the worst over all queries.
pub fn execute(
    file: &str,
    spec: &SpecFile,
    r: &Resolved,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    check_queries(file, spec, r)?;
    let mut worst = Status::Decided;
    let s = &r.settings;
    writeln!(out, "space: {}", s.space.id()).map_err(io)?;
    for q in &spec.queries {
        let a: Vec<&str> = q.args.iter().map(|(_, t)| t.as_str()).collect();
        writeln!(out, "\n== {}:{} {} {}", file, q.line, q.verb, a.join(" ")).map_err(io)?;
        let seq = |i: usize| &r.sequences[a[i]];
        let status = match q.verb.as_str() {
            "norm" => norm(seq(0), s, out),
            "classify" => classify(seq(0), s, out),
            "assoc" => {
                let kind = a.get(2).copied().unwrap_or("weak").parse()?;
                assoc(seq(0), seq(1), &kind, s, out)
            }
            "check-map" => {
                let role = if a.get(1) == Some(&"compatible") {
                    RoleArg::Compatible
                } else {
                    RoleArg::Moderate
                };
                check_map(a[0], role, false, s, out)
            }
            "extend" => extend_map(a[0], seq(1), s, out),
            "convert-scale" => {
                let bound = |i: usize, d: u32| -> Result<u32, CliError> {
                    a.get(i).map_or(Ok(d), |t| {
                        t.parse().map_err(|_| CliError::Spec {
                            file: file.into(),
                            line: q.line,
                            column: q.args[i].0,
                            msg: "bounds are natural numbers".into(),
                        })
                    })
                };
                convert_scale(a[0], bound(1, 1)?, bound(2, 16)?, out)
            }
            "demo" => demo(s, out),
            _ => unreachable!("verbs are checked while parsing"),
        };
        // an error in one query is reported against its line and ends the run
        let status = status.map_err(|e| match e {
            e @ CliError::Spec { .. } => e,
            other => CliError::Spec {
                file: file.into(),
                line: q.line,
                column: q.args.first().map_or(1, |x| x.0),
                msg: other.to_string(),
            },
        })?;
        worst = worst.max(status);
    }
    Ok(worst)
}

pub fn run_file(path: &Path, cli: &Cli, out: &mut dyn Write) -> Result<Status, CliError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: name.clone(),
        source: e,
    })?;
    let spec = parse(&name, &text)?;
    let resolved = resolve(&name, &spec, cli)?;
    execute(&name, &spec, &resolved, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn cli() -> Cli {
        Cli::parse_from(["ultraseq", "run", "x"])
    }

    #[test]
    fn parses_sections_with_columns() {
        let s = parse("t.spec", "[space]\nfamily = colombeau\n\n[sequences]\na = n^2   # comment\n[queries]\nassoc =  a b weak\n").unwrap();
        assert_eq!(s.space["family"].text, "colombeau");
        assert_eq!(
            s.sequences[0].1,
            Located {
                line: 5,
                column: 5,
                text: "n^2".into()
            }
        );
        assert_eq!(
            s.queries[0].args,
            vec![(10, "a".into()), (12, "b".into()), (14, "weak".into())]
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("t.spec", "[space]\ncolour = red\n").unwrap_err();
        assert_eq!(e.to_string(), "t.spec:2:1: unknown space key 'colour' (expected one of family, mode, m_max, seed, nu)");
        let e = parse("t.spec", "norm = a\n").unwrap_err();
        assert!(e.to_string().starts_with("t.spec:1:1:"), "{}", e);
        let spec = parse("t.spec", "[sequences]\nb = n^2 + * 3\n").unwrap();
        let e = resolve("t.spec", &spec, &cli()).err().unwrap();
        assert!(e.to_string().starts_with("t.spec:2:11:"), "{}", e);
        let spec = parse("t.spec", "[sequences]\na = n\n[queries]\nassoc = a zz\n").unwrap();
        let r = resolve("t.spec", &spec, &cli()).unwrap();
        let e = check_queries("t.spec", &spec, &r).unwrap_err();
        assert_eq!(e.to_string(), "t.spec:4:11: unknown sequence 'zz'");
    }
}
