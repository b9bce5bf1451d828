use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt::Write as _;

use obsclone::jointmeas::{clip_theta, compare_with_universal, uncertainty_product_with, ProductMode};
use obsclone::machines::{build, Machine, MachineKind};
use obsclone::qcore::{euler_zyz, BlochVector, ComplexMatrix2, DensityMatrix};
use obsclone::report::{format_float, to_json, CSV_HEADER};
use obsclone::verify::{
    check_covariance_with, estimate_noises_with, nogo_search, seeded_unitaries, CovarianceReport, NoGoResult,
    NogoClass, NogoConfig, NoiseFitOptions, NoiseReport,
};
use obsclone::{Error, Exec};

use crate::args::*;

/// Stable exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const VERIFICATION_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const IO: u8 = 3;
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: exit::USAGE, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { code: exit::IO, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InformationDestroyed { .. } | Error::Internal(_) => exit::VERIFICATION_FAILED,
            _ => exit::USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

/// Rendered output of a command and whether its check passed.
pub struct Outcome {
    pub body: String,
    pub passed: bool,
}

pub struct Context {
    pub config: ConfigFile,
    pub exec: Exec,
}

impl Context {
    fn seed(&self, flag: Option<u64>) -> u64 {
        flag.or(self.config.seed).unwrap_or(DEFAULT_SEED)
    }

    fn format(&self, flag: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
        let f = flag.or(self.config.format).unwrap_or(default);
        if !allowed.contains(&f) {
            return Err(CliError::usage(format!("format {f:?} is not supported by this command")));
        }
        Ok(f)
    }

    fn machine(&self, flag: &Option<String>) -> Result<MachineKind, CliError> {
        let name = flag.clone().or_else(|| self.config.machine.clone()).unwrap_or_else(|| "nc".into());
        name.parse::<MachineKind>().map_err(|_| {
            let known: Vec<_> = MachineKind::ALL.iter().map(|k| k.name()).collect();
            CliError::usage(format!("unknown machine `{name}` (known: {})", known.join(", ")))
        })
    }

    fn theta(&self, flag: Option<f64>) -> Result<Option<f64>, CliError> {
        Ok(flag.or(ConfigFile::angle(&self.config.theta).map_err(CliError::usage)?))
    }

    fn bloch(&self, flag: Option<[f64; 3]>) -> [f64; 3] {
        flag.or(self.config.bloch).unwrap_or([0.0, 0.0, 1.0])
    }

    fn fit(&self, samples: Option<usize>, seed: u64, tol: Option<f64>, exec: Exec) -> NoiseFitOptions {
        NoiseFitOptions {
            n_states: samples.or(self.config.samples).unwrap_or(DEFAULT_SAMPLES),
            seed,
            tol: tol.or(self.config.tol).unwrap_or(DEFAULT_FIT_TOL),
            exec,
        }
    }

    /// V for the conjugated machine: explicit Euler angles or a seeded Haar draw.
    fn conjugator(&self, flag: Option<[f64; 3]>, seed: u64) -> Result<ComplexMatrix2, CliError> {
        let angles = match flag {
            Some(a) => Some(a),
            None => self.config.euler_angles().map_err(CliError::usage)?,
        };
        Ok(match angles {
            Some([a, b, c]) => euler_zyz(a, b, c),
            None => seeded_unitaries(1, seed)[0],
        })
    }
}

fn state_from(bloch: [f64; 3]) -> Result<DensityMatrix, CliError> {
    Ok(DensityMatrix::from_bloch(BlochVector(bloch))?)
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    to_json(value).map_err(|e| CliError { code: exit::VERIFICATION_FAILED, message: e.to_string() })
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().fold(String::new(), |mut s, (k, v)| {
        let _ = writeln!(s, "{k:<width$}  {v}");
        s
    })
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_else(|| "-".into())
}

#[derive(Serialize)]
struct CatalogEntry {
    name: &'static str,
    class: &'static str,
    noise_formula: &'static str,
    description: &'static str,
    takes_theta: bool,
}

pub fn list(ctx: &Context, args: &ListArgs) -> Result<Outcome, CliError> {
    let format = ctx.format(args.common.format, Format::Table, &[Format::Table, Format::Json])?;
    let entries: Vec<CatalogEntry> = MachineKind::ALL
        .iter()
        .map(|k| CatalogEntry {
            name: k.name(),
            class: k.class_label(),
            noise_formula: k.noise_formula(),
            description: k.description(),
            takes_theta: k.takes_theta(),
        })
        .collect();
    let body = match format {
        Format::Json => json(&entries)?,
        _ => {
            let mut s = format!("{:<20} {:<38} {}\n", "machine", "class", "added noise");
            for e in &entries {
                let _ = writeln!(s, "{:<20} {:<38} {}", e.name, e.class, e.noise_formula);
            }
            s
        }
    };
    Ok(Outcome { body, passed: true })
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub machine: MachineKind,
    pub theta: Option<f64>,
    pub predicted_g1: Option<f64>,
    pub predicted_g2: Option<f64>,
    pub noise: NoiseReport,
    pub noise_matches_prediction: bool,
    pub covariance: Vec<CovarianceReport>,
    pub passed: bool,
}

pub fn verify(ctx: &Context, args: &VerifyArgs) -> Result<Outcome, CliError> {
    let format = ctx.format(args.common.format, Format::Json, &[Format::Json, Format::Table])?;
    let kind = ctx.machine(&args.machine)?;
    let seed = ctx.seed(args.common.seed);
    let theta = kind.takes_theta().then(|| ctx.theta(args.theta)).transpose()?.map(|t| t.unwrap_or(FRAC_PI_4));
    let v = ctx.conjugator(args.euler, seed)?;
    let machine = build(kind, theta.unwrap_or(FRAC_PI_4), &v)?;
    let fit = ctx.fit(args.samples, seed, args.tol, ctx.exec);

    let noise = estimate_noises_with(&machine, &fit)?;
    let (predicted, covariance) = match &machine {
        Machine::Unitary(spec) => {
            let reports = seeded_unitaries(DEFAULT_COVARIANCE_UNITARIES, seed)
                .iter()
                .map(|w| check_covariance_with(spec, w, &fit))
                .collect::<Result<Vec<_>, _>>()?;
            (spec.predicted(), reports)
        }
        Machine::Marginal(model) => {
            let g = 1.0 / model.shrink_factor;
            (Some((g, g)), Vec::new())
        }
    };
    let noise_matches_prediction =
        predicted.is_some_and(|(g1, g2)| (noise.g1_fit - g1).abs() <= fit.tol && (noise.g2_fit - g2).abs() <= fit.tol);
    let passed = noise.state_independent && noise_matches_prediction && covariance.iter().all(|c| c.passed);
    let report = VerifyReport {
        machine: kind,
        theta,
        predicted_g1: predicted.map(|p| p.0),
        predicted_g2: predicted.map(|p| p.1),
        noise,
        noise_matches_prediction,
        covariance,
        passed,
    };
    let body = match format {
        Format::Json => json(&report)?,
        _ => table(&[
            ("machine", kind.name().to_string()),
            ("theta", opt_float(theta)),
            ("g1 predicted", opt_float(report.predicted_g1)),
            ("g1 fitted", format_float(noise.g1_fit)),
            ("g2 predicted", opt_float(report.predicted_g2)),
            ("g2 fitted", format_float(noise.g2_fit)),
            ("residual max", format_float(noise.residual_max)),
            ("samples", noise.samples_used.to_string()),
            ("state independent", noise.state_independent.to_string()),
            (
                "covariance checks",
                format!("{}/{}", report.covariance.iter().filter(|c| c.passed).count(), report.covariance.len()),
            ),
            ("passed", passed.to_string()),
        ]),
    };
    Ok(Outcome { body, passed })
}

fn sweep_grid(ctx: &Context, args: &SweepArgs) -> Result<Vec<f64>, CliError> {
    let single = ctx.theta(args.theta)?;
    let min = args.theta_min.or(ConfigFile::angle(&ctx.config.theta_min).map_err(CliError::usage)?);
    let max = args.theta_max.or(ConfigFile::angle(&ctx.config.theta_max).map_err(CliError::usage)?);
    let steps = args.steps.or(ctx.config.steps).unwrap_or(DEFAULT_STEPS);
    if steps == 0 {
        return Err(CliError::usage("--steps must be at least 1"));
    }
    let grid: Vec<f64> = match (single, min, max) {
        (Some(t), None, None) => vec![t],
        (Some(_), _, _) => return Err(CliError::usage("--theta cannot be combined with --theta-min/--theta-max")),
        (None, None, None) => (1..=steps).map(|k| k as f64 * FRAC_PI_2 / (steps + 1) as f64).collect(),
        (None, Some(lo), Some(hi)) => {
            if hi < lo {
                return Err(CliError::usage("--theta-max is below --theta-min"));
            }
            if steps == 1 {
                vec![lo]
            } else {
                (0..steps).map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64).collect()
            }
        }
        _ => return Err(CliError::usage("--theta-min and --theta-max must be given together")),
    };
    if let Some(bad) = grid.iter().find(|t| !(**t > 0.0 && **t < FRAC_PI_2)) {
        return Err(CliError::usage(format!(
            "theta = {bad} is outside (0, pi/2): added noise diverges at the boundary"
        )));
    }
    Ok(grid.into_iter().map(clip_theta).collect())
}

#[derive(Serialize)]
struct SweepRow {
    theta: f64,
    report: obsclone::jointmeas::UncertaintyReport,
}

pub fn sweep(ctx: &Context, args: &SweepArgs) -> Result<Outcome, CliError> {
    let format = ctx.format(args.common.format, Format::Csv, &[Format::Csv, Format::Json, Format::Table])?;
    let kind = ctx.machine(&args.machine)?;
    if !kind.takes_theta() {
        return Err(CliError::usage(format!("sweep needs a machine with an angle, not `{kind}`")));
    }
    let seed = ctx.seed(args.common.seed);
    let grid = sweep_grid(ctx, args)?;
    let rho = state_from(ctx.bloch(args.bloch))?;
    let v = ctx.conjugator(args.euler, seed)?;
    let fit = ctx.fit(args.samples, seed, args.tol, Exec::Sequential);

    let rows = ctx.exec.try_map_indexed(grid.len(), |i| {
        let theta = grid[i];
        let Machine::Unitary(spec) = build(kind, theta, &v)? else {
            unreachable!("angle families are unitary machines")
        };
        let report = uncertainty_product_with(&spec, &rho, ProductMode::Strict, &fit)?;
        Ok::<_, Error>(SweepRow { theta, report })
    })?;

    let body = match format {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            let io = |e: csv::Error| CliError::io(e.to_string());
            w.write_record(CSV_HEADER).map_err(io)?;
            for row in &rows {
                w.write_record(row.report.csv_record(row.theta)).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::io(e.to_string()))?;
            String::from_utf8(bytes).expect("ASCII output")
        }
        Format::Table => {
            let mut s = format!("{:>24} {:>24} {:>24} {:>24}  {}\n", "theta", "dm1", "dm2", "product", "saturated");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>24} {:>24} {:>24} {:>24}  {}",
                    format_float(r.theta),
                    format_float(r.report.dm1),
                    format_float(r.report.dm2),
                    format_float(r.report.product),
                    r.report.saturated
                );
            }
            s
        }
    };
    Ok(Outcome { body, passed: true })
}

#[derive(Serialize)]
struct NogoOutput<'a> {
    #[serde(flatten)]
    result: &'a NoGoResult,
    criterion: String,
    passed: bool,
}

pub fn nogo(ctx: &Context, args: &NogoArgs) -> Result<Outcome, CliError> {
    let format = ctx.format(args.common.format, Format::Json, &[Format::Json, Format::Table])?;
    let seed = ctx.seed(args.common.seed);
    let restarts = args.restarts.or(ctx.config.restarts).unwrap_or(DEFAULT_RESTARTS);
    if restarts == 0 {
        return Err(CliError::usage("--restarts must be at least 1"));
    }
    let mut config = NogoConfig {
        class: if args.commuting { NogoClass::Commuting } else { NogoClass::Noncommuting },
        exec: ctx.exec,
        ..Default::default()
    };
    if let Some(n) = args.max_iterations.or(ctx.config.max_iterations) {
        config.simplex.max_iterations = n;
    }
    let result = nogo_search(restarts, seed, &config)?;
    let (passed, criterion) = if args.commuting {
        let tol = args.tol.or(ctx.config.tol).unwrap_or(DEFAULT_COMMUTING_TOL);
        (result.best_residual <= tol, format!("best_residual <= {}", format_float(tol)))
    } else {
        let floor = args.floor.or(ctx.config.floor).unwrap_or(DEFAULT_NOGO_FLOOR);
        (result.best_residual > floor, format!("best_residual > {}", format_float(floor)))
    };
    let body = match format {
        Format::Json => json(&NogoOutput { result: &result, criterion, passed })?,
        _ => {
            let params: Vec<String> = result.best_parameters.iter().map(|p| format!("{p:.6}")).collect();
            table(&[
                ("class", format!("{:?}", result.class).to_lowercase()),
                ("best residual", format_float(result.best_residual)),
                ("best parameters", params.join(",")),
                ("restarts", result.restarts.to_string()),
                ("evaluations", result.evaluations.to_string()),
                ("seed", result.seed.to_string()),
                ("criterion", criterion),
                ("passed", passed.to_string()),
                ("probe", result.probe_restriction.clone()),
                ("caveat", result.caveat.clone()),
            ])
        }
    };
    Ok(Outcome { body, passed })
}

pub fn compare(ctx: &Context, args: &CompareArgs) -> Result<Outcome, CliError> {
    let format = ctx.format(args.common.format, Format::Table, &[Format::Table, Format::Json])?;
    let rho = state_from(ctx.bloch(args.bloch))?;
    let c = compare_with_universal(&rho)?;
    let body = match format {
        Format::Json => json(&c)?,
        _ => table(&[
            ("optimal theta", format_float(c.optimal_theta)),
            ("observable cloner product", format_float(c.observable_product)),
            (
                "observable cloner shrink",
                format!("{}, {}", format_float(c.observable_shrink[0]), format_float(c.observable_shrink[1])),
            ),
            ("universal cloner shrink", format_float(c.universal_shrink)),
            ("universal cloner product", format!("{} (per-clone marginal model)", format_float(c.universal_product))),
            ("reference universal product", format_float(c.reference_universal_product)),
            ("discrepancy", c.discrepancy.to_string()),
        ]),
    };
    Ok(Outcome { body, passed: true })
}
