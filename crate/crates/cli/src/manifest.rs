//! Job manifests: the complete description of one run.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Largest manifest accepted from disk.
pub const MAX_MANIFEST_BYTES: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Lift,
    MaassCheck,
    Basis,
    Hecke,
    Eigen,
    Congruence,
    Lvalue,
    #[serde(rename = "scriptL")]
    #[value(name = "scriptL")]
    ScriptL,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Numeric parameters. Unset fields take the command's default when the manifest is resolved.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disc: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobManifest {
    pub command: Command,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache: Option<PathBuf>,
}

/// A validated job with every default filled in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Job {
    Lift { weight: u32, prec: u64 },
    MaassCheck { bound: Option<u64> },
    Basis { weight: u32, prec: u64 },
    Hecke,
    Eigen { weight: u32, prec: u64 },
    Congruence { weight: u32, prec: u64, min_prime: u64, max_prime: u64, bound: u64 },
    Lvalue { weight: u32, s: u32, chi: i64, bits: u32, index: usize },
    ScriptL { weight: u32, disc: i64, chi: i64, min_prime: u64, max_prime: u64, bits: u32, index: usize },
}

const MAX_WEIGHT: u32 = 64;
const MAX_LIFT_PREC: u64 = 12;
const MAX_SPACE_PREC: u64 = 8;
const MAX_PRIME: u64 = 100_000;
const MAX_BITS: u32 = 4096;
const MAX_BOUND: u64 = 12;
const MAX_CONDUCTOR: i64 = 10_000;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn require<T: Copy>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{name}")))
}

fn siegel_weight(w: Option<u32>) -> CliResult<u32> {
    let k = require(w, "weight")?;
    if k % 2 == 1 {
        return usage(format!("weight {k} is odd; only even weights are supported"));
    }
    if !(4..=MAX_WEIGHT).contains(&k) {
        return usage(format!("weight {k} outside 4..={MAX_WEIGHT}"));
    }
    Ok(k)
}

fn in_range<T: PartialOrd + std::fmt::Display + Copy>(v: T, lo: T, hi: T, name: &str) -> CliResult<T> {
    if v < lo || v > hi {
        return usage(format!("--{name} {v} outside {lo}..={hi}"));
    }
    Ok(v)
}

fn discriminant(d: i64, name: &str) -> CliResult<i64> {
    if d.unsigned_abs() > MAX_CONDUCTOR as u64 || !skc_core::arith::is_fundamental_discriminant(d) && d != 1 {
        return usage(format!("--{name} {d} is not a fundamental discriminant of size <= {MAX_CONDUCTOR}"));
    }
    Ok(d)
}

impl JobManifest {
    pub fn parse(text: &str) -> CliResult<Self> {
        if text.len() > MAX_MANIFEST_BYTES {
            return Err(CliError::Input(format!("manifest larger than {MAX_MANIFEST_BYTES} bytes")));
        }
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("manifest: {e}")))
    }

    /// Deterministic JSON text.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifests serialize") + "\n"
    }

    pub fn format(&self) -> Format {
        self.params.format.unwrap_or_default()
    }

    /// Validates the parameters, filling in defaults.
    pub fn job(&self) -> CliResult<Job> {
        let p = &self.params;
        let needs_input = matches!(self.command, Command::MaassCheck | Command::Hecke);
        if needs_input && self.input.is_none() {
            return usage("missing --input");
        }
        let job = match self.command {
            Command::Lift => Job::Lift {
                weight: siegel_weight(p.weight)?,
                prec: in_range(p.prec.unwrap_or(6), 1, MAX_LIFT_PREC, "prec")?,
            },
            Command::MaassCheck => {
                Job::MaassCheck { bound: p.bound.map(|b| in_range(b, 1, MAX_LIFT_PREC, "bound")).transpose()? }
            }
            Command::Hecke => Job::Hecke,
            Command::Basis | Command::Eigen => {
                let weight = siegel_weight(p.weight)?;
                let prec = in_range(p.prec.unwrap_or(3), 1, MAX_SPACE_PREC, "prec")?;
                if self.command == Command::Basis {
                    Job::Basis { weight, prec }
                } else {
                    Job::Eigen { weight, prec }
                }
            }
            Command::Congruence => {
                let weight = siegel_weight(p.weight)?;
                let prec = in_range(p.prec.unwrap_or(6), 1, MAX_SPACE_PREC, "prec")?;
                let bound = in_range(p.bound.unwrap_or(4), 1, MAX_BOUND.min(prec), "bound")?;
                let min_prime = p.min_prime.unwrap_or(2 * weight as u64 - 2);
                let max_prime = in_range(require(p.max_prime, "scan-primes")?, 2, MAX_PRIME, "scan-primes")?;
                Job::Congruence { weight, prec, min_prime, max_prime, bound }
            }
            Command::Lvalue => {
                let weight = require(p.weight, "weight")?;
                if weight % 2 == 1 {
                    return usage(format!("weight {weight} is odd; level-one newforms have even weight"));
                }
                let weight = in_range(weight, 12, 2 * MAX_WEIGHT, "weight")?;
                let s = in_range(require(p.s, "s")?, 1, weight - 1, "s")?;
                let chi = discriminant(p.chi.unwrap_or(1), "chi")?;
                let bits = in_range(p.bits.unwrap_or(128), 32, MAX_BITS, "bits")?;
                Job::Lvalue { weight, s, chi, bits, index: p.index.unwrap_or(0) }
            }
            Command::ScriptL => {
                let weight = siegel_weight(p.weight)?;
                let disc = discriminant(require(p.disc, "disc")?, "disc")?;
                let chi = discriminant(require(p.chi, "chi")?, "chi")?;
                let min_prime = p.min_prime.unwrap_or(2 * weight as u64 - 2);
                let max_prime = in_range(p.max_prime.unwrap_or(200), 2, MAX_PRIME, "max-prime")?;
                let bits = in_range(p.bits.unwrap_or(128), 32, MAX_BITS, "bits")?;
                Job::ScriptL { weight, disc, chi, min_prime, max_prime, bits, index: p.index.unwrap_or(0) }
            }
        };
        Ok(job)
    }

    /// The manifest with defaults written out, so the serialized form alone reproduces the run.
    pub fn resolved(&self) -> CliResult<Self> {
        let mut m = self.clone();
        let p = &mut m.params;
        p.format = Some(self.format());
        match self.job()? {
            Job::Lift { prec, .. } | Job::Basis { prec, .. } | Job::Eigen { prec, .. } => p.prec = Some(prec),
            Job::MaassCheck { .. } | Job::Hecke => {}
            Job::Congruence { prec, min_prime, bound, .. } => {
                p.prec = Some(prec);
                p.min_prime = Some(min_prime);
                p.bound = Some(bound);
            }
            Job::Lvalue { chi, bits, index, .. } => {
                p.chi = Some(chi);
                p.bits = Some(bits);
                p.index = Some(index);
            }
            Job::ScriptL { min_prime, max_prime, bits, index, .. } => {
                p.min_prime = Some(min_prime);
                p.max_prime = Some(max_prime);
                p.bits = Some(bits);
                p.index = Some(index);
            }
        }
        Ok(m)
    }
}
