//! Command-line flags and the resolved run configuration.

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use tl2b::params::default_bound;
use tl2b::pathbasis::ExceptionalPoint;
use tl2b::scalar::parse_rational;
use tl2b::{Error, Rational, Result};

#[derive(Parser, Debug)]
#[command(name = "tl2b", version, about = "Exact audits for the two-boundary Temperley-Lieb algebra")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Chain length N.
    #[arg(long = "n", global = true, default_value_t = 2)]
    n: usize,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Genericity bound; defaults to 4N + 4.
    #[arg(long, global = true)]
    bound: Option<u32>,
    /// `generic`, an exceptional point `sign,n,eps1,eps2`, or a value `p/q` for t.
    #[arg(long, global = true, default_value = "generic", allow_hyphen_values = true)]
    theta: String,
    #[arg(long, global = true, value_enum, default_value_t = Backend::Numeric)]
    backend: Backend,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Shifts s1 in the relation audit (negative control).
    #[arg(long, global = true, hide = true)]
    corrupt: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Defining relations, Hecke and Murphy identities, Yang-Baxter and reflection equations.
    Relations,
    /// Brute-force Gram determinant against the closed form.
    Gram,
    /// The path basis: action, Murphy spectrum, diagonal Gram form.
    Basis,
    /// Spin-chain representation and its identification with the path basis.
    Spinchain,
    /// Exceptional points: invariant blocks, central characters, trace battery.
    Irreps,
    /// Dimension tables of the half-diagram modules.
    Modules,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Command::Relations => "relations",
            Command::Gram => "gram",
            Command::Basis => "basis",
            Command::Spinchain => "spinchain",
            Command::Irreps => "irreps",
            Command::Modules => "modules",
        };
        f.write_str(name)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Numeric,
    Symbolic,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ThetaSpec {
    Generic,
    Exceptional(ExceptionalPoint),
    Explicit(Rational),
}

impl ThetaSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "generic" {
            return Ok(ThetaSpec::Generic);
        }
        if text.contains(',') {
            let parts: Vec<&str> = text.split(',').map(str::trim).collect();
            let [sign, m, e1, e2] = parts.as_slice() else {
                return Err(Error::Parse(format!("expected sign,n,eps1,eps2, got {text:?}")));
            };
            let m = m.parse::<u32>().map_err(|_| Error::Parse(format!("bad n in {text:?}")))?;
            return Ok(ThetaSpec::Exceptional(ExceptionalPoint { sign: sign_of(sign)?, m, eps1: sign_of(e1)?, eps2: sign_of(e2)? }));
        }
        let t = parse_rational(text).ok_or_else(|| Error::Parse(format!("bad theta {text:?}")))?;
        Ok(ThetaSpec::Explicit(t))
    }

    pub fn render(&self) -> String {
        match self {
            ThetaSpec::Generic => "generic".into(),
            ThetaSpec::Exceptional(p) => p.label(),
            ThetaSpec::Explicit(t) => tl2b::Scalar::render(t),
        }
    }
}

fn sign_of(text: &str) -> Result<i8> {
    match text {
        "+" | "+1" | "1" => Ok(1),
        "-" | "-1" => Ok(-1),
        _ => Err(Error::Parse(format!("bad sign {text:?}"))),
    }
}

/// Everything a command needs; printed into every report.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub seed: u64,
    pub bound: u32,
    pub theta: ThetaSpec,
    pub backend: Backend,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub corrupt: bool,
}

impl Cli {
    pub fn resolve(self) -> Result<RunConfig> {
        if self.n < 2 {
            return Err(Error::Invalid("N must be at least 2".into()));
        }
        let theta = ThetaSpec::parse(&self.theta)?;
        Ok(RunConfig {
            command: self.command,
            n: self.n,
            seed: self.seed,
            bound: self.bound.unwrap_or_else(|| default_bound(self.n)),
            theta,
            backend: self.backend,
            out: self.out,
            format: self.format,
            corrupt: self.corrupt,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_forms() {
        assert_eq!(ThetaSpec::parse("generic").unwrap(), ThetaSpec::Generic);
        let p = ThetaSpec::parse("+,1,+,-").unwrap();
        assert_eq!(p, ThetaSpec::Exceptional(ExceptionalPoint { sign: 1, m: 1, eps1: 1, eps2: -1 }));
        assert_eq!(ThetaSpec::parse("-1,0,1,1").unwrap().render(), "-,0,+,+");
        assert_eq!(ThetaSpec::parse("3/7").unwrap().render(), "3/7");
        assert!(ThetaSpec::parse("+,1,+").is_err());
        assert!(ThetaSpec::parse("x").is_err());
    }
}
