//! `unruh-decoherence` command line.
//!
//! Every flag is global, may appear before or after the subcommand, and may
//! also be supplied through `--config FILE` (a flat JSON object keyed by flag
//! name without the leading dashes). Command-line values win over the file.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error, 4 verification
//! failure (`verify-constants` only), 1 I/O failure.

mod grid;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ColorChoice, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::{Deserialize, Deserializer};

use crate::dce::{check_mirror, dce_decoherence_rate_reduced, MirrorParams};
use crate::decoherence::{
    fitted_constant_report, integrand, phase_variance, spectral_prefactor, sweep,
    unruh_window_grid, DecoherenceInput, DecoherenceResult, Method,
};
use crate::montecarlo::{momentum_walk, phase_walk, McConfig, RNG_ALGORITHM};
use crate::radiation::{
    angular_integral, typical_wavevector, SphereOptics, MOMENTUM_TRANSFER_COEFFICIENT,
};
use crate::units::{dimensionless_groups, unruh_temperature, PhysicalConstants};
use crate::worldline::TrajectoryParams;
use crate::Error;

pub use grid::{parse_grid, MAX_GRID_POINTS};
pub use output::{format_float, Format, Output, Record, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Accepted `C` range for `verify-constants`.
pub const FIT_CONSTANT_RANGE: (f64, f64) = (7.25, 7.40);
/// Accepted spectral prefactor range for `verify-constants`.
pub const PREFACTOR_RANGE: (f64, f64) = (0.038, 0.042);
/// Grid size used by `verify-constants`.
pub const VERIFY_GRID_POINTS: usize = 50;

#[derive(Debug, Parser)]
#[command(
    name = "unruh-decoherence",
    version,
    about = "Unruh-radiation decoherence of a dielectric sphere in a matter-wave interferometer"
)]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Unruh temperature for --a (and x, θ₁ when --radius is given).
    Temperature,
    /// Worldline samples: tau, segment, gamma, v, speed_abs, x.
    Trajectory,
    /// Phase-spread integrand γ²|v|√τ on a uniform proper-time grid.
    Integrand,
    /// Phase variance and total phase uncertainty for one configuration.
    Decohere,
    /// Recompute the fit constant, spectral prefactor and horizon-limit value.
    VerifyConstants,
    /// Monte Carlo momentum walk and phase walk.
    Mc,
    /// Dynamical-Casimir mirror comparison.
    Dce,
    /// Decoherence over a grid of (a, radius, epsilon).
    Sweep,
}

#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct Flags {
    /// Proper acceleration (m/s²); a grid spec for `sweep`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(deserialize_with = "string_or_number")]
    a: Option<String>,
    /// Sphere radius or mirror amplitude (m); a grid spec for `sweep`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(deserialize_with = "string_or_number")]
    radius: Option<String>,
    /// d.c. relative permittivity; a grid spec for `sweep`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(deserialize_with = "string_or_number")]
    epsilon: Option<String>,
    /// Sphere mass, or mirror mass for `dce` (kg).
    #[arg(long, global = true, allow_hyphen_values = true)]
    mass: Option<f64>,
    /// Use c = ħ = k_B = 1.
    #[arg(long, global = true)]
    natural_units: bool,
    /// Monte Carlo seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo realizations.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Wavevector (1/m) for `mc`; defaults to a/(2πc²).
    #[arg(long, global = true, allow_hyphen_values = true)]
    k: Option<f64>,
    /// Walk duration (s) for `mc`; defaults to 4τ₁.
    #[arg(long, global = true, allow_hyphen_values = true)]
    tau: Option<f64>,
    /// Mean scattering events per walk for `mc`; sets the quantization volume.
    #[arg(long, global = true)]
    mean_events: Option<f64>,
    /// `closed` or `exact` (default).
    #[arg(long, global = true)]
    method: Option<Method>,
    /// `csv` or `json`; tables default to csv, reports to json.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Write to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file of flag defaults (kebab-case keys); command-line flags win.
    #[arg(long, global = true)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Grid size for `integrand` and `trajectory`.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Mirror oscillation frequency (rad/s) for `dce`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega0: Option<f64>,
    /// Half-periods N for `dce`.
    #[arg(long, global = true)]
    half_periods: Option<u32>,
}

impl<'de> Deserialize<'de> for Format {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

fn string_or_number<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    match serde_json::Value::deserialize(d)? {
        serde_json::Value::Null => Ok(None),
        serde_json::Value::String(s) => Ok(Some(s)),
        serde_json::Value::Number(n) => Ok(Some(n.to_string())),
        other => Err(serde::de::Error::custom(format!(
            "expected number or string, got {other}"
        ))),
    }
}

impl Flags {
    fn merged_over(self, file: Flags) -> Flags {
        Flags {
            a: self.a.or(file.a),
            radius: self.radius.or(file.radius),
            epsilon: self.epsilon.or(file.epsilon),
            mass: self.mass.or(file.mass),
            natural_units: self.natural_units || file.natural_units,
            seed: self.seed.or(file.seed),
            n: self.n.or(file.n),
            k: self.k.or(file.k),
            tau: self.tau.or(file.tau),
            mean_events: self.mean_events.or(file.mean_events),
            method: self.method.or(file.method),
            format: self.format.or(file.format),
            out: self.out.or(file.out),
            config: self.config,
            samples: self.samples.or(file.samples),
            omega0: self.omega0.or(file.omega0),
            half_periods: self.half_periods.or(file.half_periods),
        }
    }

    fn constants(&self) -> PhysicalConstants {
        PhysicalConstants::for_mode(self.natural_units)
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn scalar(name: &str, value: &Option<String>) -> Result<Option<f64>, CliError> {
    value
        .as_deref()
        .map(|s| grid::parse_num(s).map_err(|e| CliError::Usage(format!("--{name}: {e}"))))
        .transpose()
}

fn required(name: &str, value: &Option<String>) -> Result<f64, CliError> {
    scalar(name, value)?.map_or_else(|| usage(format!("missing required flag --{name}")), Ok)
}

fn positive_count(name: &str, value: Option<usize>, default: usize) -> Result<usize, CliError> {
    match value.unwrap_or(default) {
        0 => usage(format!("--{name} must be >= 1")),
        n => Ok(n),
    }
}

/// Runs the CLI on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let color = if std::env::var_os("NO_COLOR").is_some() {
        ColorChoice::Never
    } else {
        ColorChoice::Auto
    };
    let matches = match Cli::command().color(color).try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            EXIT_DOMAIN
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_IO
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let flags = match &cli.flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            let file: Flags = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?;
            cli.flags.merged_over(file)
        }
        None => cli.flags,
    };
    let (output, default_format, code) = match cli.command {
        Command::Temperature => (cmd_temperature(&flags)?, Format::Json, EXIT_OK),
        Command::Trajectory => (cmd_trajectory(&flags)?, Format::Csv, EXIT_OK),
        Command::Integrand => (cmd_integrand(&flags)?, Format::Csv, EXIT_OK),
        Command::Decohere => (cmd_decohere(&flags)?, Format::Json, EXIT_OK),
        Command::VerifyConstants => {
            let (out, passed) = cmd_verify_constants()?;
            (
                out,
                Format::Json,
                if passed { EXIT_OK } else { EXIT_VERIFY },
            )
        }
        Command::Mc => (cmd_mc(&flags)?, Format::Json, EXIT_OK),
        Command::Dce => (cmd_dce(&flags)?, Format::Json, EXIT_OK),
        Command::Sweep => (cmd_sweep(&flags)?, Format::Csv, EXIT_OK),
    };
    let text = output.render(flags.format.unwrap_or(default_format));
    output::write_output(&text, flags.out.as_deref()).map_err(CliError::Io)?;
    Ok(code)
}

fn cmd_temperature(flags: &Flags) -> Result<Output, CliError> {
    let constants = flags.constants();
    let a = required("a", &flags.a)?;
    let mut r = Record::new()
        .with("a", a)
        .with("natural_units", flags.natural_units)
        .with("temperature", unruh_temperature(a, &constants)?);
    if let Some(radius) = scalar("radius", &flags.radius)? {
        let g = dimensionless_groups(a, radius, &constants)?;
        r.push("radius", radius)
            .push("x", g.x)
            .push("theta1", g.theta1);
    }
    Ok(Output::Report(r))
}

/// The preset `a = 1, R = 2` in natural units applies when neither
/// `--a` nor `--radius` is given.
fn trajectory_params(flags: &Flags) -> Result<TrajectoryParams, CliError> {
    let (a, radius, constants) = if flags.a.is_none() && flags.radius.is_none() {
        (1.0, 2.0, PhysicalConstants::NATURAL)
    } else {
        (
            required("a", &flags.a)?,
            required("radius", &flags.radius)?,
            flags.constants(),
        )
    };
    Ok(TrajectoryParams::new(a, radius, constants)?)
}

fn cmd_trajectory(flags: &Flags) -> Result<Output, CliError> {
    let params = trajectory_params(flags)?;
    let rows = params
        .sample(positive_count("samples", flags.samples, 512)?)
        .into_iter()
        .map(|s| {
            Record::new()
                .with("tau", s.tau)
                .with("segment", s.segment)
                .with("gamma", s.gamma)
                .with("v", s.velocity)
                .with("speed_abs", s.speed_abs)
                .with("x", s.x)
        })
        .collect();
    Ok(Output::Table {
        header: vec!["tau", "segment", "gamma", "v", "speed_abs", "x"],
        rows,
    })
}

fn cmd_integrand(flags: &Flags) -> Result<Output, CliError> {
    let params = trajectory_params(flags)?;
    let rows = params
        .sample(positive_count("samples", flags.samples, 512)?)
        .into_iter()
        .map(|s| {
            let value = integrand(s.tau, &params)?;
            Ok(Record::new()
                .with("tau", s.tau)
                .with("v", s.velocity)
                .with("gamma", s.gamma)
                .with("integrand", value))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Output::Table {
        header: vec!["tau", "v", "gamma", "integrand"],
        rows,
    })
}

fn decoherence_input(
    a: f64,
    radius: f64,
    epsilon: f64,
    mass: Option<f64>,
    constants: PhysicalConstants,
) -> Result<DecoherenceInput, CliError> {
    let optics = SphereOptics::new(epsilon, radius, mass)?;
    Ok(DecoherenceInput::new(a, optics, constants)?)
}

const DECOHERENCE_HEADER: [&str; 18] = [
    "a",
    "radius",
    "epsilon",
    "method",
    "natural_units",
    "x",
    "theta1",
    "tau1",
    "clausius_mossotti",
    "delta_phi_sq",
    "delta_phi_tot",
    "prefactor",
    "quadrature_error",
    "dipole_ok",
    "kr_small",
    "horizon_ok",
    "unruh_regime",
    "heavy_sphere",
];

fn decoherence_record(input: &DecoherenceInput, r: &DecoherenceResult) -> Record {
    Record::new()
        .with("a", input.a)
        .with("radius", input.optics.radius)
        .with("epsilon", input.optics.epsilon)
        .with("method", r.method.as_str())
        .with("natural_units", input.constants.is_natural())
        .with("x", r.groups.x)
        .with("theta1", r.groups.theta1)
        .with("tau1", input.trajectory().tau1)
        .with("clausius_mossotti", r.clausius_mossotti)
        .with("delta_phi_sq", r.delta_phi_sq)
        .with("delta_phi_tot", r.delta_phi_tot)
        .with("prefactor", r.prefactor)
        .with("quadrature_error", r.quadrature_error)
        .with("dipole_ok", r.flags.dipole_ok)
        .with("kr_small", r.flags.kr_small)
        .with("horizon_ok", r.flags.horizon_ok)
        .with("unruh_regime", r.flags.unruh_regime)
        .with("heavy_sphere", r.flags.heavy_sphere)
}

fn cmd_decohere(flags: &Flags) -> Result<Output, CliError> {
    let input = decoherence_input(
        required("a", &flags.a)?,
        required("radius", &flags.radius)?,
        required("epsilon", &flags.epsilon)?,
        flags.mass,
        flags.constants(),
    )?;
    let result = phase_variance(&input, flags.method.unwrap_or(Method::ExactQuadrature))?;
    Ok(Output::Report(decoherence_record(&input, &result)))
}

fn cmd_verify_constants() -> Result<(Output, bool), CliError> {
    let fit = fitted_constant_report(&unruh_window_grid(VERIFY_GRID_POINTS))?;
    let prefactor = spectral_prefactor()?;
    let angular = angular_integral(|mu| 2.0 * (1.0 - mu))?.value;
    let horizon = {
        let input = decoherence_input(1.0, 1.0, f64::INFINITY, None, PhysicalConstants::NATURAL)?;
        phase_variance(&input, Method::ExactQuadrature)?.delta_phi_tot
    };
    let in_range = |v: f64, (lo, hi): (f64, f64)| v >= lo && v <= hi;
    let passed =
        in_range(fit.c_best, FIT_CONSTANT_RANGE) && in_range(prefactor.prefactor, PREFACTOR_RANGE);
    let r = Record::new()
        .with("fit_constant", fit.c_best)
        .with("max_rel_dev", fit.max_rel_dev)
        .with("grid_points", fit.points)
        .with("prefactor_exact", prefactor.prefactor)
        .with(
            "prefactor_closed",
            crate::decoherence::CLOSED_FORM_PREFACTOR,
        )
        .with("j_quadrature", prefactor.j_quadrature)
        .with("j_series", prefactor.j_series)
        .with(
            "j_rel_diff",
            (prefactor.j_quadrature / prefactor.j_series - 1.0).abs(),
        )
        .with("angular_coefficient", angular)
        .with(
            "angular_rel_error",
            (angular / MOMENTUM_TRANSFER_COEFFICIENT - 1.0).abs(),
        )
        .with("horizon_delta_phi_tot_per_f", horizon)
        .with("pass", passed);
    Ok((Output::Report(r), passed))
}

fn cmd_mc(flags: &Flags) -> Result<Output, CliError> {
    let constants = flags.constants();
    let input = decoherence_input(
        required("a", &flags.a)?,
        required("radius", &flags.radius)?,
        required("epsilon", &flags.epsilon)?,
        flags.mass,
        constants,
    )?;
    let k = flags
        .k
        .unwrap_or_else(|| typical_wavevector(input.a, &constants));
    let tau = flags
        .tau
        .unwrap_or_else(|| input.trajectory().total_proper_time);
    let seed = flags.seed.unwrap_or(0);
    let n = positive_count("n", flags.n, 10_000)?;
    let config =
        McConfig::with_mean_events(seed, n, k, input, tau, flags.mean_events.unwrap_or(100.0))?;
    let walk = momentum_walk(&config, tau)?;
    let phase = phase_walk(&config)?;
    Ok(Output::Report(
        Record::new()
            .with("rng", RNG_ALGORITHM)
            .with("seed", walk.seed)
            .with("n_realizations", walk.n_realizations)
            .with("k", k)
            .with("tau", tau)
            .with("volume", config.volume)
            .with("mean_events", walk.mean_events)
            .with("mean_dp_sq", walk.mean_dp_sq)
            .with("stderr", walk.stderr)
            .with("analytic", walk.analytic)
            .with("z_score", walk.z_score)
            .with("phase_std", phase.phase_std)
            .with("phase_prediction", phase.prediction)
            .with("phase_ratio", phase.phase_ratio)
            .with("phase_ratio_theory", phase.theory_ratio),
    ))
}

fn cmd_dce(flags: &Flags) -> Result<Output, CliError> {
    let constants = flags.constants();
    let omega0 = flags
        .omega0
        .map_or_else(|| usage("missing required flag --omega0"), Ok)?;
    let params = MirrorParams::new(
        flags.mass.unwrap_or(1.0),
        omega0,
        required("radius", &flags.radius)?,
        flags.half_periods.unwrap_or(1),
    )?;
    let report = check_mirror(&params, &constants);
    Ok(Output::Report(
        Record::new()
            .with("mass", params.mass)
            .with("omega0", params.omega0)
            .with("radius", params.amplitude)
            .with("half_periods", params.half_periods)
            .with("alpha_sq", report.alpha_sq)
            .with("rate", report.rate)
            .with(
                "rate_reduced",
                dce_decoherence_rate_reduced(&params, &constants),
            )
            .with("ra_over_c2", report.ra_over_c2)
            .with("bound_exact", report.bound.exact_threshold)
            .with("bound_estimate", report.bound.estimate_threshold)
            .with("coherent_exact", report.coherent_exact)
            .with("coherent_estimate", report.coherent_estimate)
            .with("high_velocity", report.high_velocity),
    ))
}

fn cmd_sweep(flags: &Flags) -> Result<Output, CliError> {
    let grid_of = |name: &str, spec: &Option<String>| -> Result<Vec<f64>, CliError> {
        let spec = spec
            .as_deref()
            .map_or_else(|| usage(format!("missing required flag --{name}")), Ok)?;
        parse_grid(spec).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
    };
    let (accels, radii, epsilons) = (
        grid_of("a", &flags.a)?,
        grid_of("radius", &flags.radius)?,
        grid_of("epsilon", &flags.epsilon)?,
    );
    let total = accels
        .len()
        .saturating_mul(radii.len())
        .saturating_mul(epsilons.len());
    if total > MAX_GRID_POINTS {
        return usage(format!(
            "sweep has {total} points, limit is {MAX_GRID_POINTS}"
        ));
    }
    let constants = flags.constants();
    let mut inputs = Vec::with_capacity(total);
    for &a in &accels {
        for &radius in &radii {
            for &epsilon in &epsilons {
                inputs.push(decoherence_input(
                    a, radius, epsilon, flags.mass, constants,
                )?);
            }
        }
    }
    let results = sweep(&inputs, flags.method.unwrap_or(Method::ExactQuadrature));
    let rows = inputs
        .iter()
        .zip(results)
        .map(|(input, r)| Ok(decoherence_record(input, &r?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Output::Table {
        header: DECOHERENCE_HEADER.to_vec(),
        rows,
    })
}
