//! Subcommands: `det`, `certify`, `find-zero`, `sweep`, `safe-bound`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 malformed input or invalid
//! parameters, 3 invalid geometry, 4 uncertifiable curve, 5 no convergence.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nearfield_core::certification::RefinementOptions;
use nearfield_core::matrix::electrical_distance;
use nearfield_core::{
    build_matrix, find_zero, monotone_collapse_report, run_sweep, safe_distance_bound, trace_curve, winding_number,
    CircuitParams, Complex64, CouplingModel, ElectricalLayout, Error, FindZeroError, GridConfig,
    NewtonOptions, SweepSpec,
};
use thiserror::Error as ThisError;

use crate::config::{
    CertifyOptions, DetOptions, FindZeroOptions, LoadRatio, ModelArg, RunConfig, SafeBoundOptions, SweepOptions,
};
use crate::formats::{
    write_curve_csv, write_summary_csv, write_sweep_csv, CertificateRecord, LayoutDocument, TrajectoryDocument,
    ZeroRecord,
};
use crate::presets::Preset;

pub const EXIT_IO: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_GEOMETRY: u8 = 3;
pub const EXIT_UNCERTIFIED: u8 = 4;
pub const EXIT_NO_CONVERGENCE: u8 = 5;

#[derive(Debug, Parser)]
#[command(name = "nearfield", version, about = "Near-field impedance determinants of Hertzian dipole arrays")]
pub struct Cli {
    /// JSON config file with per-command sections; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the normalized impedance matrix and its determinant.
    Det(DetOptions),
    /// Winding number of the determinant along a closed loop of layouts.
    Certify(CertifyOptions),
    /// Newton search for a zero of the determinant in a two-parameter family.
    FindZero(FindZeroOptions),
    /// Determinant minima of grids over a spacing window.
    Sweep(SweepOptions),
    /// Spacing above which every matrix is diagonally dominant.
    SafeBound(SafeBoundOptions),
}

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("invalid geometry: {0}")]
    Geometry(Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Input(_) => EXIT_INPUT,
            Self::Geometry(_) => EXIT_GEOMETRY,
            Self::Io { .. } => EXIT_IO,
        }
    }

    fn io(context: impl Into<String>) -> impl FnOnce(io::Error) -> Self {
        let context = context.into();
        move |source| Self::Io { context, source }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec(_) | Error::DegenerateLoad => Self::Input(e.to_string()),
            _ => Self::Geometry(e),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Io {
            context: "writing CSV".into(),
            source: e.into(),
        }
    }
}

/// Runs a parsed command line, writing the human-readable summary to `out`.
/// Returns the process exit code for completed runs.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    let config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(CliError::io(format!("reading {}", path.display())))?;
            RunConfig::from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Det(o) => det(o.or(config.det.unwrap_or_default()), out),
        Command::Certify(o) => certify(o.or(config.certify.unwrap_or_default()), out),
        Command::FindZero(o) => find_zero_cmd(o.or(config.find_zero.unwrap_or_default()), out),
        Command::Sweep(o) => sweep(o.or(config.sweep.unwrap_or_default()), out),
        Command::SafeBound(o) => safe_bound(o.or(config.safe_bound.unwrap_or_default()), out),
    }
}

fn circuit(load: Option<LoadRatio>) -> Result<CircuitParams, CliError> {
    Ok(CircuitParams::new(load.map_or(Complex64::new(0.0, 0.0), |l| l.0))?)
}

fn check_wavelength(wavelength: Option<f64>) -> Result<(), CliError> {
    match wavelength {
        Some(w) if !(w.is_finite() && w > 0.0) => Err(CliError::Input(format!("wavelength must be positive, got {w}"))),
        _ => Ok(()),
    }
}

/// Converts a length to electrical units when a wavelength is given.
fn length(value: f64, wavelength: Option<f64>) -> f64 {
    wavelength.map_or(value, |w| electrical_distance(value, w))
}

fn pair_length(p: [f64; 2], wavelength: Option<f64>) -> [f64; 2] {
    [length(p[0], wavelength), length(p[1], wavelength)]
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let file = File::open(path).map_err(CliError::io(format!("opening {}", path.display())))?;
    serde_json::from_reader(io::BufReader::new(file)).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path).map_err(CliError::io(format!("creating {}", path.display())))?))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Io {
        context: format!("writing {}", path.display()),
        source: e.into(),
    })?;
    writeln!(w).and_then(|_| w.flush()).map_err(CliError::io(format!("writing {}", path.display())))
}

fn det_layout(o: &DetOptions) -> Result<(ElectricalLayout, CouplingModel), CliError> {
    let w = o.wavelength;
    let model_or = |default: CouplingModel| o.model.map_or(default, |m| m.0);
    match (o.layout.as_ref(), o.preset) {
        (Some(_), Some(_)) => Err(CliError::Input("use either --layout or --preset, not both".into())),
        (Some(path), None) => {
            let doc: LayoutDocument = read_json(path)?;
            Ok((doc.to_layout(w)?, model_or(CouplingModel::Hertzian)))
        }
        (None, Some(Preset::Grid)) => {
            let rows = o.m.unwrap_or(2);
            let cols = o.m2.unwrap_or(rows);
            let spacing = length(o.spacing.unwrap_or(4.1), w);
            Ok((GridConfig::new(rows, cols, spacing)?.layout(), model_or(CouplingModel::Hertzian)))
        }
        (None, Some(Preset::Table1)) => Ok((
            nearfield_core::TriangularLatticeConfig::table1().center_layout(),
            model_or(CouplingModel::Mid),
        )),
        (None, Some(preset)) => {
            let params = o.params.map(|p| pair_length(p.0, w)).or(preset.default_params()).unwrap();
            let family = preset.family().expect("two-parameter preset");
            Ok((family.layout(&params)?, model_or(preset.default_model())))
        }
        (None, None) => Err(CliError::Input("det needs --preset or --layout".into())),
    }
}

/// Formats with six significant digits, dropping trailing zeros.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{}", if v == 0.0 { 0.0 } else { v });
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.') } else { &s };
        if s == "-0" { "0".to_string() } else { s.to_string() }
    } else {
        let s = format!("{v:.5e}");
        let (mantissa, e) = s.split_once('e').unwrap();
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{e}")
    }
}

pub fn format_complex(z: Complex64) -> String {
    let im = format_sig(z.im.abs());
    let sign = if z.im.is_sign_negative() && im != "0" { '-' } else { '+' };
    format!("{}{sign}{im}i", format_sig(z.re))
}

fn emit(out: &mut dyn Write, text: std::fmt::Arguments<'_>) -> Result<(), CliError> {
    out.write_fmt(text).map_err(CliError::io("writing output"))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => { emit($out, format_args!("{}\n", format_args!($($arg)*))) };
}

fn det(o: DetOptions, out: &mut dyn Write) -> Result<u8, CliError> {
    check_wavelength(o.wavelength)?;
    let circuit = circuit(o.load_ratio)?;
    let (layout, model) = det_layout(&o)?;
    let m = build_matrix(&layout, model, circuit)?;
    let n = m.dim();
    let cells: Vec<String> = m.as_matrix().entries().iter().map(|z| format_complex(*z)).collect();
    let width = cells.iter().map(String::len).max().unwrap_or(0);
    say!(out, "model {model}, {n} antennas, load ratio {}", format_complex(circuit.load_ratio()))?;
    for i in 0..n {
        let row: Vec<String> = cells[i * n..(i + 1) * n].iter().map(|c| format!("{c:>width$}")).collect();
        say!(out, "  {}", row.join("  "))?;
    }
    let d = m.determinant();
    say!(out, "det = {}", format_complex(d))?;
    say!(out, "|det| = {}", format_sig(d.norm()))?;
    say!(out, "diagonally dominant: {}", m.is_diagonally_dominant())?;
    Ok(0)
}

fn certify(o: CertifyOptions, out: &mut dyn Write) -> Result<u8, CliError> {
    check_wavelength(o.wavelength)?;
    let w = o.wavelength;
    let circuit = circuit(o.load_ratio)?;
    let (trajectory, model, radius): (Box<dyn nearfield_core::ClosedTrajectory>, CouplingModel, f64) =
        match (o.trajectory.as_ref(), o.preset) {
            (Some(_), Some(_)) => return Err(CliError::Input("use either --trajectory or --preset, not both".into())),
            (Some(path), None) => {
                let doc: TrajectoryDocument = read_json(path)?;
                let mut cfg = doc.to_config(w)?;
                if let Some(r) = o.radius {
                    cfg = cfg.with_radius(length(r, w))?;
                }
                let radius = cfg.radius();
                let model = o.model.map_or(CouplingModel::Mid, |m| m.0);
                (Box::new(nearfield_core::LatticeTrajectory::new(cfg)?), model, radius)
            }
            (None, Some(Preset::Grid)) => return Err(CliError::Input("the grid preset has no certification loop".into())),
            (None, Some(preset)) => {
                let radius = o.radius.map_or(preset.default_radius().unwrap(), |r| length(r, w));
                if !(radius.is_finite() && radius >= 0.0) {
                    return Err(CliError::Input(format!("radius must be nonnegative, got {radius}")));
                }
                let params = o.params.map(|p| pair_length(p.0, w));
                let phase = o.phase_offset.unwrap_or(preset.default_phase_offset());
                let model = o.model.map_or(preset.default_model(), |m| m.0);
                (preset.trajectory(params, radius, phase)?, model, radius)
            }
            (None, None) => return Err(CliError::Input("certify needs --preset or --trajectory".into())),
        };
    let defaults = RefinementOptions::default();
    let options = RefinementOptions {
        initial_samples: o.samples.unwrap_or(defaults.initial_samples),
        max_depth: o.max_depth.unwrap_or(defaults.max_depth),
    };
    let curve = trace_curve(&trajectory, model, circuit, options)?;
    let cert = winding_number(&curve);
    if let Some(path) = &o.curve_csv {
        write_curve_csv(create(path)?, &curve)?;
    }
    if let Some(path) = &o.certificate {
        write_json(path, &CertificateRecord::from(cert))?;
    }
    say!(out, "model {model}, radius {}", format_sig(radius))?;
    say!(out, "winding = {}", cert.winding)?;
    say!(out, "min |det| = {}", format_sig(cert.min_modulus))?;
    say!(out, "samples = {}", cert.samples_used)?;
    say!(out, "certified = {}", cert.certified)?;
    Ok(if cert.certified { 0 } else { EXIT_UNCERTIFIED })
}

fn find_zero_cmd(o: FindZeroOptions, out: &mut dyn Write) -> Result<u8, CliError> {
    check_wavelength(o.wavelength)?;
    let preset = o.preset.unwrap_or(Preset::Line);
    let Some(family) = preset.family() else {
        return Err(CliError::Input(format!("preset {} is not a two-parameter family", preset.name())));
    };
    let circuit = circuit(o.load_ratio)?;
    let model = o.model.map_or(preset.default_model(), |m| m.0);
    let start = o.start.map(|p| pair_length(p.0, o.wavelength)).or(preset.default_params()).unwrap();
    let defaults = NewtonOptions::default();
    let options = NewtonOptions {
        tol: o.tol.unwrap_or(defaults.tol),
        max_iterations: o.max_iterations.unwrap_or(defaults.max_iterations),
        ..defaults
    };
    if !(options.tol.is_finite() && options.tol > 0.0) {
        return Err(CliError::Input(format!("tolerance must be positive, got {}", options.tol)));
    }
    let (location, converged, note) = match find_zero(&family, model, circuit, &start, options) {
        Ok(z) => (z, true, None),
        Err(FindZeroError::Layout(e)) => return Err(e.into()),
        Err(e) => {
            let note = e.to_string();
            (e.best().cloned().expect("search started"), false, Some(note))
        }
    };
    let record = ZeroRecord::new(&location, converged);
    if let Some(path) = &o.out {
        write_json(path, &record)?;
    }
    say!(out, "model {model}, preset {}", preset.name())?;
    let params: Vec<String> = record.parameters.iter().map(|p| format!("{p}")).collect();
    say!(out, "parameters = ({})", params.join(", "))?;
    say!(out, "|det| = {}", format_sig(record.residual_modulus))?;
    say!(out, "iterations = {}", record.iterations)?;
    say!(out, "converged = {converged}")?;
    if let Some(note) = note {
        say!(out, "{note}")?;
    }
    Ok(if converged { 0 } else { EXIT_NO_CONVERGENCE })
}

fn sweep(o: SweepOptions, out: &mut dyn Write) -> Result<u8, CliError> {
    check_wavelength(o.wavelength)?;
    let w = o.wavelength;
    let sizes = o.sizes.map_or_else(|| (2..=8).map(|m| (m, m)).collect(), |s| s.0);
    let (lo, hi) = o.range.map_or(SweepSpec::DEFAULT_RANGE, |r| (length(r.0, w), length(r.1, w)));
    let model = o.model.map_or(CouplingModel::Hertzian, |m: ModelArg| m.0);
    let spec = SweepSpec::new(
        sizes,
        (lo, hi),
        o.samples.unwrap_or(SweepSpec::DEFAULT_SAMPLES),
        model,
        circuit(o.load_ratio)?,
    )
    .map_err(|e| CliError::Input(e.to_string()))?;
    let result = run_sweep(&spec)?;
    if let Some(dir) = &o.out_dir {
        fs::create_dir_all(dir).map_err(CliError::io(format!("creating {}", dir.display())))?;
        for g in &result.grids {
            write_sweep_csv(create(&dir.join(format!("sweep_{}x{}.csv", g.rows, g.cols)))?, [g])?;
        }
        write_summary_csv(create(&dir.join("summary.csv"))?, &result)?;
    }
    say!(out, "model {model}, x in [{lo}, {hi}], {} samples", spec.samples())?;
    say!(out, "{:>7} {:>8} {:>12} {:>10} {:>14} {:>10}", "grid", "antennas", "x_min", "d/lambda", "|det|_min", "ratio")?;
    for e in monotone_collapse_report(&result) {
        say!(
            out,
            "{:>7} {:>8} {:>12} {:>10} {:>14} {:>10}",
            format!("{}x{}", e.rows, e.cols),
            e.antennas,
            format_sig(e.minimum.x),
            format_sig(e.minimum.wavelengths()),
            format_sig(e.minimum.abs_det),
            e.ratio_to_previous.map_or("-".to_string(), format_sig)
        )?;
    }
    Ok(0)
}

fn safe_bound(o: SafeBoundOptions, out: &mut dyn Write) -> Result<u8, CliError> {
    check_wavelength(o.wavelength)?;
    let Some(n) = o.n else {
        return Err(CliError::Input("safe-bound needs --n".into()));
    };
    let models = o.model.map_or(CouplingModel::ALL.to_vec(), |m| vec![m.0]);
    for model in models {
        let x = safe_distance_bound(n, model).map_err(|e| CliError::Input(e.to_string()))?;
        let lambdas = x / (2.0 * std::f64::consts::PI);
        let mut line = format!("{model}: x > {} (d > {} lambda", format_sig(x), format_sig(lambdas));
        if let Some(w) = o.wavelength {
            line.push_str(&format!(" = {} m", format_sig(lambdas * w)));
        }
        line.push(')');
        say!(out, "{line}")?;
    }
    Ok(0)
}
