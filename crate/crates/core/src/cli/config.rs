use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use super::{Cli, Command, Format, LiftChoice, ModuleChoice};
use crate::dl::DEFAULT_BUDGET;
use crate::formal::Precision;
use crate::{Error, Result};

const KEYS: &[&str] = &[
    "q",
    "n",
    "N",
    "D",
    "m",
    "big_m",
    "frobenius",
    "zeta",
    "g",
    "kind",
    "lift",
    "sequence",
    "format",
    "budget",
    "threads",
    "output",
];

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::InvalidParameter(format!("cannot read config {}: {e}", path.display()))
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("config line {}: expected key=value", i + 1))
        })?;
        let (k, v) = (k.trim(), v.trim());
        let k = if k == "big-m" { "big_m" } else { k };
        if !KEYS.contains(&k) {
            return Err(Error::InvalidParameter(format!(
                "config line {}: unknown key '{k}'",
                i + 1
            )));
        }
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

/// Fully resolved settings. Serialized into every report, minus the fields
/// that do not influence results (output path, thread count).
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub q: u64,
    pub n: u32,
    pub precision: Precision,
    pub kind: ModuleChoice,
    pub lift: LiftChoice,
    pub sequence: Vec<u32>,
    pub m: u32,
    pub big_m: Option<u32>,
    pub frobenius: u32,
    pub zeta: u64,
    pub g: Option<String>,
    pub format: Format,
    pub budget: u128,
    #[serde(skip)]
    pub threads: Option<usize>,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

fn from_file<T: FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    match file.get(key) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| {
            Error::InvalidParameter(format!("config value for '{key}' is malformed: {v}"))
        }),
    }
}

fn enum_from_file<T: clap::ValueEnum>(
    file: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>> {
    match file.get(key) {
        None => Ok(None),
        Some(v) => T::from_str(v, true).map(Some).map_err(|_| {
            Error::InvalidParameter(format!("config value for '{key}' is malformed: {v}"))
        }),
    }
}

pub fn parse_sequence(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidParameter(format!("bad sequence entry '{t}'")))
        })
        .collect()
}

impl RunConfig {
    /// Flags override the file, the file overrides defaults.
    pub fn resolve(cli: &Cli, file: &BTreeMap<String, String>) -> Result<RunConfig> {
        let c = &cli.common;
        let q =
            c.q.or(from_file(file, "q")?)
                .ok_or_else(|| Error::InvalidParameter("--q is required".into()))?;
        let n =
            c.n.or(from_file(file, "n")?)
                .ok_or_else(|| Error::InvalidParameter("--n is required".into()))?;
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if crate::coeff::prime_power(q).is_none() {
            return Err(Error::InvalidParameter(format!(
                "q = {q} is not a prime power"
            )));
        }
        let qn = q
            .checked_pow(n)
            .filter(|&v| v < 1 << 40)
            .ok_or_else(|| Error::SizeBound(format!("q^n = {q}^{n} is too large")))?;
        let prec_n = c.prec_n.or(from_file(file, "N")?).unwrap_or(8);
        let prec_d = c
            .prec_d
            .or(from_file(file, "D")?)
            .unwrap_or((qn + q).min(u32::MAX as u64) as u32);

        let (mut kind, mut lift, mut seq, mut m, mut big_m, mut frob, mut zeta, mut g) =
            (None, None, None, None, None, None, None, None);
        match &cli.command {
            Command::FormalGroup { kind: k } => kind = *k,
            Command::Depth0 { opts, .. } | Command::VerifyAll { opts } => {
                lift = opts.lift;
                seq = opts.sequence.clone();
            }
            Command::Dl { opts, .. } => {
                m = opts.m;
                big_m = opts.big_m;
                frob = opts.frobenius;
                zeta = opts.zeta;
                g = opts.g.clone();
            }
            Command::Chars { .. } => {}
        }
        let sequence = match seq {
            Some(s) => s,
            None => match file.get("sequence") {
                Some(s) => parse_sequence(s)?,
                None if n >= 2 => vec![n, n - 1],
                None => vec![n],
            },
        };
        Ok(RunConfig {
            q,
            n,
            precision: Precision::new(prec_n, prec_d),
            kind: kind
                .or(enum_from_file(file, "kind")?)
                .unwrap_or(ModuleChoice::Base),
            lift: lift
                .or(enum_from_file(file, "lift")?)
                .unwrap_or(LiftChoice::Zero),
            sequence,
            m: m.or(from_file(file, "m")?).unwrap_or(n),
            big_m: big_m.or(from_file(file, "big_m")?),
            frobenius: frob.or(from_file(file, "frobenius")?).unwrap_or(1),
            zeta: zeta.or(from_file(file, "zeta")?).unwrap_or(0),
            g: g.or_else(|| file.get("g").cloned()),
            format: c
                .format
                .or(enum_from_file(file, "format")?)
                .unwrap_or(Format::Json),
            budget: c
                .budget
                .or(from_file(file, "budget")?)
                .unwrap_or(DEFAULT_BUDGET),
            threads: c.threads.or(from_file(file, "threads")?),
            output: c
                .output
                .clone()
                .or_else(|| file.get("output").map(PathBuf::from)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_aliases() {
        let f = parse_config("# header\nq = 3\nbig-m=4 # trailing\n\n").unwrap();
        assert_eq!(f["q"], "3");
        assert_eq!(f["big_m"], "4");
        assert!(parse_config("bogus = 1").is_err());
        assert!(parse_config("q 3").is_err());
    }

    #[test]
    fn sequence_parsing() {
        assert_eq!(parse_sequence("3, 2").unwrap(), vec![3, 2]);
        assert!(parse_sequence("3,x").is_err());
    }
}
