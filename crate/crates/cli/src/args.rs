use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context};
use rgreedy_core::instance;
use rgreedy_core::{DistanceOracle, Error, TiePolicy, WeightedMetricSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TieArg {
    Lex,
    Priority,
    Random(u64),
}

impl TieArg {
    pub fn resolve(&self, space: &WeightedMetricSpace) -> TiePolicy {
        match self {
            TieArg::Lex => TiePolicy::Lexicographic,
            TieArg::Priority => TiePolicy::priority_of(space),
            TieArg::Random(seed) => TiePolicy::SeededRandom(*seed),
        }
    }
}

impl FromStr for TieArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" => Ok(TieArg::Lex),
            "priority" => Ok(TieArg::Priority),
            _ => match s.strip_prefix("random:") {
                Some(seed) => seed
                    .parse()
                    .map(TieArg::Random)
                    .map_err(|_| format!("bad seed in tie policy {s:?}")),
                None => Err(format!(
                    "unknown tie policy {s:?} (expected lex, priority or random:SEED)"
                )),
            },
        }
    }
}

impl fmt::Display for TieArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieArg::Lex => f.write_str("lex"),
            TieArg::Priority => f.write_str("priority"),
            TieArg::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } | Error::TooLarge(_) => 3,
        _ => 2,
    }
}

/// A list of values: `a..b` or `a..=b` (inclusive, integers only), or
/// comma-separated values.
pub fn parse_list<T>(text: &str) -> anyhow::Result<Vec<T>>
where
    T: FromStr + Copy + PartialOrd + TryFrom<u32>,
    <T as FromStr>::Err: std::error::Error + Send + Sync + 'static,
{
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u32 = lo
            .trim()
            .parse()
            .with_context(|| format!("range start in {text:?}"))?;
        let hi: u32 = hi
            .trim()
            .parse()
            .with_context(|| format!("range end in {text:?}"))?;
        let values: Vec<T> = (lo..=hi).filter_map(|v| T::try_from(v).ok()).collect();
        if values.is_empty() {
            bail!(Error::Input(format!("range {text:?} is empty")));
        }
        return Ok(values);
    }
    let values = text
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<T>()
                .with_context(|| format!("value {p:?} in {text:?}"))
        })
        .collect::<anyhow::Result<Vec<T>>>()?;
    if values.is_empty() {
        bail!(Error::Input(format!("list {text:?} is empty")));
    }
    Ok(values)
}

pub fn load_instance(path: &Path, allow_large: bool) -> anyhow::Result<WeightedMetricSpace> {
    let space = instance::load(path)?;
    if let DistanceOracle::Tree(t) = space.oracle() {
        if t.height() >= 4 && !allow_large {
            bail!(Error::TooLarge(format!(
                "{}: tree instance of height {} has {} points; pass --allow-large to run it",
                path.display(),
                t.height(),
                space.n()
            )));
        }
    }
    Ok(space)
}

/// Instance name used in reports: the file stem.
pub fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn facility_names(space: &WeightedMetricSpace, members: &[usize]) -> String {
    members
        .iter()
        .map(|&x| space.display_name(x))
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tie_args() {
        assert_eq!("lex".parse::<TieArg>().unwrap(), TieArg::Lex);
        assert_eq!("random:7".parse::<TieArg>().unwrap(), TieArg::Random(7));
        assert!("random:x".parse::<TieArg>().is_err());
        assert!("first".parse::<TieArg>().is_err());
        assert_eq!(TieArg::Random(3).to_string(), "random:3");
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<u32>("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_list::<u32>("1..=2").unwrap(), vec![1, 2]);
        assert_eq!(
            parse_list::<f64>("10,100,1000").unwrap(),
            vec![10.0, 100.0, 1000.0]
        );
        assert_eq!(parse_list::<usize>("5").unwrap(), vec![5]);
        assert!(parse_list::<u32>("3..1").is_err());
        assert!(parse_list::<u32>("").is_err());
        assert!(parse_list::<f64>("1,x").is_err());
    }
}
