//! Command options, shared between command-line flags and the JSON config
//! file. Every field is optional; flags win over the file, and missing
//! values fall back to the preset defaults.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use nearfield_core::{Complex64, CouplingModel};
use serde::de::{self, Deserializer};
use serde::Deserialize;

use crate::presets::Preset;

/// Config file layout: one optional section per subcommand.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub det: Option<DetOptions>,
    #[serde(default)]
    pub certify: Option<CertifyOptions>,
    #[serde(default)]
    pub find_zero: Option<FindZeroOptions>,
    #[serde(default)]
    pub sweep: Option<SweepOptions>,
    #[serde(default)]
    pub safe_bound: Option<SafeBoundOptions>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

macro_rules! mergeable {
    ($ty:ident { $($field:ident),* $(,)? }) => {
        impl $ty {
            /// Keeps `self`'s values and fills the gaps from `fallback`.
            pub fn or(self, fallback: Self) -> Self {
                Self { $($field: self.$field.or(fallback.$field)),* }
            }
        }
    };
}

/// Coupling model as accepted on the command line and in config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelArg(pub CouplingModel);

impl FromStr for ModelArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(ModelArg).map_err(|e: nearfield_core::Error| e.to_string())
    }
}

impl<'de> Deserialize<'de> for ModelArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

/// Complex load ratio `Z_L/Z_nn`, written `re` or `re,im` (JSON: a number,
/// `[re, im]` or the same string).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadRatio(pub Complex64);

impl FromStr for LoadRatio {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = parse_floats(s)?;
        match parts[..] {
            [re] => Ok(Self(Complex64::new(re, 0.0))),
            [re, im] => Ok(Self(Complex64::new(re, im))),
            _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LoadRatioRepr {
    Real(f64),
    Pair([f64; 2]),
    Text(String),
}

impl<'de> Deserialize<'de> for LoadRatio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match LoadRatioRepr::deserialize(d)? {
            LoadRatioRepr::Real(re) => Ok(Self(Complex64::new(re, 0.0))),
            LoadRatioRepr::Pair([re, im]) => Ok(Self(Complex64::new(re, im))),
            LoadRatioRepr::Text(s) => s.parse().map_err(de::Error::custom),
        }
    }
}

/// Two reals written `a,b` (JSON: `[a, b]`).
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "PairRepr")]
pub struct Pair(pub [f64; 2]);

#[derive(Deserialize)]
#[serde(untagged)]
enum PairRepr {
    Array([f64; 2]),
    Text(String),
}

impl TryFrom<PairRepr> for Pair {
    type Error = String;

    fn try_from(r: PairRepr) -> Result<Self, String> {
        match r {
            PairRepr::Array(a) => Ok(Pair(a)),
            PairRepr::Text(s) => s.parse(),
        }
    }
}

impl FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse_floats(s)?[..] {
            [a, b] => Ok(Pair([a, b])),
            _ => Err(format!("expected two comma-separated numbers, got `{s}`")),
        }
    }
}

/// Spacing window written `lo:hi` (JSON: `[lo, hi]`).
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "PairRepr")]
pub struct SpacingRange(pub f64, pub f64);

impl TryFrom<PairRepr> for SpacingRange {
    type Error = String;

    fn try_from(r: PairRepr) -> Result<Self, String> {
        match r {
            PairRepr::Array([lo, hi]) => Ok(SpacingRange(lo, hi)),
            PairRepr::Text(s) => s.parse(),
        }
    }
}

impl FromStr for SpacingRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected `lo:hi`, got `{s}`"))?;
        let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
        Ok(SpacingRange(parse(lo)?, parse(hi)?))
    }
}

/// Grid sizes: comma-separated items, each `m` (square), `m1xm2`, or an
/// inclusive square range `a..b`. JSON accepts the same string or an array
/// of integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeList(pub Vec<(usize, usize)>);

impl FromStr for SizeList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let int = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
        let mut sizes = Vec::new();
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            if let Some((a, b)) = item.split_once("..") {
                let (a, b) = (int(a)?, int(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty size range `{item}`"));
                }
                sizes.extend((a..=b).map(|m| (m, m)));
            } else if let Some((r, c)) = item.split_once('x') {
                sizes.push((int(r)?, int(c)?));
            } else {
                let m = int(item)?;
                sizes.push((m, m));
            }
        }
        if sizes.is_empty() {
            return Err("no grid sizes given".into());
        }
        Ok(SizeList(sizes))
    }
}

impl fmt::Display for SizeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|(r, c)| format!("{r}x{c}")).collect();
        f.write_str(&items.join(","))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SizeListRepr {
    Squares(Vec<usize>),
    Text(String),
}

impl<'de> Deserialize<'de> for SizeList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match SizeListRepr::deserialize(d)? {
            SizeListRepr::Squares(v) => Ok(SizeList(v.into_iter().map(|m| (m, m)).collect())),
            SizeListRepr::Text(s) => s.parse().map_err(de::Error::custom),
        }
    }
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}")))
        .collect()
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetOptions {
    /// Named configuration.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// JSON layout file `{"positions": [[x, y], ...]}`.
    #[arg(long)]
    pub layout: Option<PathBuf>,
    /// Family parameters `a,b` for line/isosceles/right.
    #[arg(long)]
    pub params: Option<Pair>,
    /// Grid rows.
    #[arg(long)]
    pub m: Option<usize>,
    /// Grid columns (defaults to --m).
    #[arg(long)]
    pub m2: Option<usize>,
    /// Grid spacing.
    #[arg(long)]
    pub spacing: Option<f64>,
    /// hertzian | mid | far.
    #[arg(long)]
    pub model: Option<ModelArg>,
    /// Z_L/Z_nn as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub load_ratio: Option<LoadRatio>,
    /// Read lengths in meters at this wavelength instead of electrical units.
    #[arg(long)]
    pub wavelength: Option<f64>,
}

mergeable!(DetOptions { preset, layout, params, m, m2, spacing, model, load_ratio, wavelength });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyOptions {
    /// line | isosceles | right | table1.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// JSON trajectory `{"centers", "phases", "radius"}` instead of a preset.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    /// Family parameters `a,b` at the loop center.
    #[arg(long)]
    pub params: Option<Pair>,
    /// Loop radius.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Phase lag of the second family parameter, in periods.
    #[arg(long, allow_hyphen_values = true)]
    pub phase_offset: Option<f64>,
    /// Uniform samples before refinement.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Bisection depth cap.
    #[arg(long)]
    pub max_depth: Option<u32>,
    #[arg(long)]
    pub model: Option<ModelArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub load_ratio: Option<LoadRatio>,
    #[arg(long)]
    pub wavelength: Option<f64>,
    /// Write the determinant curve as CSV.
    #[arg(long)]
    pub curve_csv: Option<PathBuf>,
    /// Write the certificate as JSON.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

mergeable!(CertifyOptions {
    preset, trajectory, params, radius, phase_offset, samples, max_depth, model, load_ratio, wavelength,
    curve_csv, certificate,
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FindZeroOptions {
    /// line | isosceles | right.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Starting parameters `a,b`.
    #[arg(long)]
    pub start: Option<Pair>,
    /// Stop once |det| falls below this.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub model: Option<ModelArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub load_ratio: Option<LoadRatio>,
    #[arg(long)]
    pub wavelength: Option<f64>,
    /// Write the result as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

mergeable!(FindZeroOptions { preset, start, tol, max_iterations, model, load_ratio, wavelength, out });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOptions {
    /// Grid sizes, e.g. `2..8`, `2,4,6` or `3x2`.
    #[arg(long)]
    pub sizes: Option<SizeList>,
    /// Spacing window `lo:hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<SpacingRange>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub model: Option<ModelArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub load_ratio: Option<LoadRatio>,
    #[arg(long)]
    pub wavelength: Option<f64>,
    /// Directory for `sweep_<m1>x<m2>.csv` files and `summary.csv`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

mergeable!(SweepOptions { sizes, range, samples, model, load_ratio, wavelength, out_dir });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SafeBoundOptions {
    /// Number of antennas.
    #[arg(long)]
    pub n: Option<usize>,
    /// Only this model (default: all three).
    #[arg(long)]
    pub model: Option<ModelArg>,
    /// Also print the bound in meters at this wavelength.
    #[arg(long)]
    pub wavelength: Option<f64>,
}

mergeable!(SafeBoundOptions { n, model, wavelength });
