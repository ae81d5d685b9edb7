use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Sieve,
    Decompose,
    Criterion,
    Orbit,
    Correlate,
    Disjointness,
    Classify,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Sieve,
        Command::Decompose,
        Command::Criterion,
        Command::Orbit,
        Command::Correlate,
        Command::Disjointness,
        Command::Classify,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Sieve => "sieve",
            Command::Decompose => "decompose",
            Command::Criterion => "criterion",
            Command::Orbit => "orbit",
            Command::Correlate => "correlate",
            Command::Disjointness => "disjointness",
            Command::Classify => "classify",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CliError::Config(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(CliError::Config(format!("format must be json or csv, got `{s}`"))),
        }
    }
}

/// Orbit arithmetic: `auto`, `double` or a number of fixed-point bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrecisionSetting {
    #[default]
    Auto,
    Double,
    Bits(u32),
}

impl fmt::Display for PrecisionSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrecisionSetting::Auto => f.write_str("auto"),
            PrecisionSetting::Double => f.write_str("double"),
            PrecisionSetting::Bits(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for PrecisionSetting {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "auto" => Ok(PrecisionSetting::Auto),
            "double" => Ok(PrecisionSetting::Double),
            _ => s
                .parse()
                .map(PrecisionSetting::Bits)
                .map_err(|_| CliError::Config(format!("precision must be auto, double or bits, got `{s}`"))),
        }
    }
}

impl From<PrecisionSetting> for horolab::dynamics::Precision {
    fn from(p: PrecisionSetting) -> Self {
        match p {
            PrecisionSetting::Auto => horolab::dynamics::Precision::Auto,
            PrecisionSetting::Double => horolab::dynamics::Precision::Double,
            PrecisionSetting::Bits(b) => horolab::dynamics::Precision::Bits(b),
        }
    }
}

/// Pairs written `p:q`, separated by `;`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PairList(pub Vec<(u64, u64)>);

impl fmt::Display for PairList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(p, q)| format!("{p}:{q}")).collect();
        f.write_str(&parts.join(";"))
    }
}

impl FromStr for PairList {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("excluded pairs must look like `2:3;5:7`, got `{s}`"));
        s.split(';')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| {
                let (a, b) = p.split_once(':').ok_or_else(bad)?;
                Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
            })
            .collect::<Result<_, _>>()
            .map(PairList)
    }
}

/// Comma-separated integers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ladder(pub Vec<u64>);

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Ladder {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse().map_err(|_| CliError::Config(format!("ladder entry `{p}` is not an integer"))))
            .collect::<Result<_, _>>()
            .map(Ladder)
    }
}

macro_rules! config_fields {
    ($( $field:ident : $ty:ty => $key:literal ),* $(,)?) => {
        /// Every knob of a run. Unset fields take per-command defaults.
        #[derive(Debug, Clone, PartialEq, Default)]
        pub struct ExperimentConfig {
            $( pub $field: Option<$ty>, )*
        }

        impl ExperimentConfig {
            pub const KEYS: &'static [&'static str] = &[$($key),*];

            pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
                let value = value.trim();
                match key.trim() {
                    $( $key => {
                        self.$field = Some(value.parse::<$ty>().map_err(|_| {
                            CliError::Config(format!("`{value}` is not a valid value for `{}`", $key))
                        })?);
                    } )*
                    other => return Err(CliError::Config(format!("unknown configuration key `{other}`"))),
                }
                Ok(())
            }

            pub fn get(&self, key: &str) -> Option<String> {
                match key {
                    $( $key => self.$field.as_ref().map(|v| v.to_string()), )*
                    _ => None,
                }
            }

            /// Fields of `other` that are set win.
            pub fn overlay(mut self, other: &ExperimentConfig) -> Self {
                $( if other.$field.is_some() { self.$field = other.$field.clone(); } )*
                self
            }
        }
    };
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathValue(pub PathBuf);

impl fmt::Display for PathValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.display())
    }
}

impl FromStr for PathValue {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s.is_empty() {
            return Err(CliError::Config("empty path".into()));
        }
        Ok(PathValue(PathBuf::from(s)))
    }
}

config_fields! {
    command: Command => "command",
    n: u64 => "n",
    alpha: f64 => "alpha",
    j0: u32 => "j0",
    j1: u32 => "j1",
    cutoff: f64 => "cutoff",
    pair_length: u64 => "pair_length",
    excluded: PairList => "excluded",
    nu: String => "nu",
    seq: String => "seq",
    point: String => "point",
    obs: String => "obs",
    p: u64 => "p",
    q: u64 => "q",
    center: bool => "center",
    ladder: Ladder => "ladder",
    z: String => "z",
    y_max: f64 => "y_max",
    nx: usize => "nx",
    ns: usize => "ns",
    ntheta: usize => "ntheta",
    precision: PrecisionSetting => "precision",
    threads: usize => "threads",
    format: Format => "format",
    out: PathValue => "out",
    series: PathValue => "series",
}

/// Keys meaningful to every command.
pub const GLOBAL_KEYS: &[&str] = &["command", "threads", "format", "out", "series"];

impl Command {
    /// Keys read by this command besides [`GLOBAL_KEYS`].
    pub fn keys(self) -> &'static [&'static str] {
        const QUAD: [&str; 4] = ["y_max", "nx", "ns", "ntheta"];
        match self {
            Command::Sieve => &["n", "nu"],
            Command::Decompose => &["n", "alpha", "j0", "j1"],
            Command::Criterion => &["n", "alpha", "j0", "j1", "cutoff", "pair_length", "excluded", "nu", "seq"],
            Command::Orbit => &["n", "point", "obs", "precision"],
            Command::Correlate => {
                const K: [&str; 11] = ["n", "point", "obs", "precision", "p", "q", "center", QUAD[0], QUAD[1], QUAD[2], QUAD[3]];
                &K
            }
            Command::Disjointness => {
                const K: [&str; 10] = ["n", "ladder", "nu", "point", "obs", "precision", QUAD[0], QUAD[1], QUAD[2], QUAD[3]];
                &K
            }
            Command::Classify => &["z"],
        }
    }

    pub fn accepts(self, key: &str) -> bool {
        GLOBAL_KEYS.contains(&key) || self.keys().contains(&key)
    }
}

impl ExperimentConfig {
    /// `key=value` lines in a fixed key order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for key in Self::KEYS {
            if let Some(v) = self.get(key) {
                s.push_str(key);
                s.push('=');
                s.push_str(&v);
                s.push('\n');
            }
        }
        s
    }

    /// Parses `key=value` lines; blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = ExperimentConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", i + 1)))?;
            c.set(k, v)?;
        }
        Ok(c)
    }

    /// Keys that are set but not read by `command`.
    pub fn foreign_keys(&self, command: Command) -> Vec<&'static str> {
        Self::KEYS
            .iter()
            .copied()
            .filter(|k| self.get(k).is_some() && !command.accepts(k))
            .collect()
    }

    /// Clears keys that `command` does not read.
    pub fn retain_for(&mut self, command: Command) {
        let mut kept = ExperimentConfig::default();
        for k in Self::KEYS {
            if command.accepts(k) {
                if let Some(v) = self.get(k) {
                    kept.set(k, &v).expect("value printed by this type parses back");
                }
            }
        }
        *self = kept;
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        Self::KEYS
            .iter()
            .filter_map(|k| self.get(k).map(|v| (k.to_string(), v)))
            .collect()
    }
}
