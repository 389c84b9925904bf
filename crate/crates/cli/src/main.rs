use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hypmetric_cli::output::{self, num, row, Format};
use hypmetric_cli::suites::{run_suite, SuiteConfig, SuiteOutcome, UsageError};
use hypmetric_core::curvature::curvature_at;
use hypmetric_core::distance::{distance, DEFAULT_WINDING};
use hypmetric_core::grammar::{parse_complex, parse_domain, parse_metric};
use hypmetric_core::liouville::{classify_singularity, closed_form_family, integrate_radial, Family};
use hypmetric_core::metric::MetricDensity;
use hypmetric_core::oracle::geodesic_oracle;
use hypmetric_core::rigidity::{
    classify_boundary_condition, decay_exponent_fit, decay_exponent_fit_log, default_sequence, sample_sequence,
    BoundarySequenceSample, Setting, DEFAULT_MARGIN,
};
use hypmetric_core::{sampling, C64};
use serde::Deserialize;

#[derive(Parser)]
#[command(name = "hypmetric", version, about = "Conformal metric and hyperbolic distance verification")]
struct Cli {
    #[arg(long, value_enum, default_value = "csv", global = true)]
    output: Format,
    /// Seed for pseudo-random sample points.
    #[arg(long, default_value_t = 42, global = true)]
    seed: u64,
    /// Tolerance override `<check>=<value>`; may be repeated.
    #[arg(long = "tol", value_parser = parse_tol, global = true)]
    tol: Vec<(String, f64)>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a density at points or on a grid: `re,im,lambda,log_lambda`.
    Density {
        #[arg(long)]
        domain: String,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Discrete Gauss curvature: `re,im,kappa,h_used`.
    Curvature {
        #[arg(long)]
        domain: String,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// Hyperbolic distance: `distance,<value>,<method>,<deck_index>`.
    Distance {
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        z1: String,
        #[arg(long, allow_hyphen_values = true)]
        z2: String,
        #[arg(long, default_value_t = DEFAULT_WINDING)]
        winding: i64,
        /// Use the grid shortest-path oracle with this many cells instead.
        #[arg(long)]
        oracle_grid: Option<usize>,
    },
    /// Run a named verification suite.
    Verify {
        /// One of: ahlfors, beardon-minda, harnack, harnack-conical, hopf,
        /// hopf-conical, aux-solutions, example1, phi, annulus-sharpness:<r>,
        /// curvature, comparability, decay-ratio, dichotomy, liouville, distance.
        suite: String,
        /// Grid size for grid-based suites.
        #[arg(long)]
        grid: Option<usize>,
    },
    #[command(subcommand)]
    Rigidity(RigidityCommand),
    #[command(subcommand)]
    Liouville(LiouvilleCommand),
}

#[derive(Args)]
struct PointArgs {
    /// A point `re,im`; may be repeated.
    #[arg(long, allow_hyphen_values = true)]
    z: Vec<String>,
    /// Polar grid `radii,angles,r_min,r_max` (outer loop radius, inner loop angle).
    #[arg(long)]
    polar: Option<String>,
    /// Cartesian grid `x0,x1,y0,y1,n` (outer loop x); points off the domain are skipped.
    #[arg(long = "box", allow_hyphen_values = true)]
    cartesian: Option<String>,
}

#[derive(Subcommand)]
enum RigidityCommand {
    /// Sample `re,im,ratio,distance,deficit` along a boundary sequence.
    Sample {
        #[arg(long)]
        metric: String,
        #[arg(long)]
        reference: String,
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Sequence points; defaults to `10^{-k}`, `k = 2..10`.
        #[arg(long, allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Fit the decay exponent of a `re,im,ratio,distance` CSV.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "general")]
        setting: String,
    },
    /// Fit and classify under the given setting.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        setting: String,
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
    },
}

#[derive(Subcommand)]
enum LiouvilleCommand {
    /// Integrate the radial equation: `t,w,lambda,E`.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        w0: f64,
        #[arg(long, allow_hyphen_values = true)]
        dw0: f64,
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Classify the singularity of a closed-form family.
    Classify {
        /// `pdisk`, `pdiskR:<R>`, `conical:<alpha>` or `conical-scaled:<alpha>,<c>`.
        #[arg(long)]
        family: String,
    },
}

fn parse_tol(text: &str) -> Result<(String, f64), String> {
    let (name, value) = text.split_once('=').ok_or_else(|| format!("expected <name>=<value>, got `{text}`"))?;
    let value = value.parse::<f64>().map_err(|_| format!("bad tolerance `{value}`"))?;
    if !(value >= 0.0) {
        return Err(format!("tolerance must be non-negative, got {value}"));
    }
    Ok((name.to_string(), value))
}

fn usage(err: impl std::fmt::Display) -> anyhow::Error {
    UsageError(err.to_string()).into()
}

fn numbers(text: &str, count: usize, what: &str) -> Result<Vec<f64>> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| usage(format!("{what}: expected {count} comma-separated numbers, got `{text}`")))?;
    if values.len() != count {
        return Err(usage(format!("{what}: expected {count} numbers, got {}", values.len())));
    }
    Ok(values)
}

fn points(args: &PointArgs, metric: &MetricDensity) -> Result<Vec<C64>> {
    let mut out = Vec::new();
    for z in &args.z {
        out.push(parse_complex(z).map_err(usage)?);
    }
    if let Some(polar) = &args.polar {
        let v = numbers(polar, 4, "--polar")?;
        out.extend(sampling::polar_grid(v[0] as usize, v[1] as usize, v[2], v[3]));
    }
    if let Some(grid) = &args.cartesian {
        let v = numbers(grid, 5, "--box")?;
        let n = v[4] as usize;
        if n < 2 {
            return Err(usage("--box needs at least 2 points per side"));
        }
        let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
        for i in 0..n {
            for j in 0..n {
                let z = C64::new(step(v[0], v[1], i), step(v[2], v[3], j));
                if metric.region().contains(z) {
                    out.push(z);
                }
            }
        }
    }
    if out.is_empty() {
        return Err(usage("no points given; use --z, --polar or --box"));
    }
    Ok(out)
}

fn parse_setting(text: &str) -> Result<Setting> {
    match text {
        "general" => Ok(Setting::General),
        "puncture" => Ok(Setting::Puncture),
        _ => match text.strip_prefix("conical:").map(str::parse::<f64>) {
            Some(Ok(alpha)) if alpha < 1.0 => Ok(Setting::Conical { alpha }),
            _ => Err(usage(format!("unknown setting `{text}`; expected general, puncture or conical:<alpha>"))),
        },
    }
}

fn parse_family(text: &str) -> Result<Family> {
    let bad = || usage(format!("unknown family `{text}`"));
    let family = match text.split_once(':') {
        None if text == "pdisk" => Family::PuncturedDisk,
        Some(("pdiskR", r)) => Family::PuncturedDiskR {
            radius: r.parse().map_err(|_| bad())?,
        },
        Some(("conical", a)) => Family::Conical {
            alpha: a.parse().map_err(|_| bad())?,
        },
        Some(("conical-scaled", rest)) => {
            let (a, c) = rest.split_once(',').ok_or_else(bad)?;
            Family::ConicalScaled {
                alpha: a.parse().map_err(|_| bad())?,
                c: c.parse().map_err(|_| bad())?,
            }
        }
        _ => return Err(bad()),
    };
    family.validate().map_err(usage)
}

#[derive(Deserialize)]
struct SampleRow {
    re: f64,
    im: f64,
    ratio: f64,
    distance: f64,
    #[serde(default)]
    deficit: Option<f64>,
}

/// Reads a sample CSV; the optional `deficit` column carries `1 − ratio` at full precision.
fn read_sample(path: &PathBuf) -> Result<BoundarySequenceSample> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let headers = reader.headers()?.clone();
    for needed in ["re", "im", "ratio", "distance"] {
        if !headers.iter().any(|h| h == needed) {
            return Err(usage(format!("{}: missing column `{needed}`", path.display())));
        }
    }
    let rows = reader
        .deserialize::<SampleRow>()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let points = rows.iter().map(|r| C64::new(r.re, r.im)).collect();
    let distances = rows.iter().map(|r| r.distance).collect();
    let q = C64::new(0.0, 0.0);
    if rows.iter().all(|r| r.deficit.is_some()) {
        let deficits = rows.iter().map(|r| r.deficit.unwrap_or(f64::NAN)).collect();
        Ok(BoundarySequenceSample::from_deficits(points, deficits, distances, q))
    } else {
        let ratios = rows.iter().map(|r| r.ratio).collect();
        Ok(BoundarySequenceSample::from_ratios(points, ratios, distances, q))
    }
}

fn fit_and_classify(cli: &Cli, input: &PathBuf, setting: &str, margin: f64) -> Result<ExitCode> {
    let setting = parse_setting(setting)?;
    let sample = read_sample(input)?;
    let mut estimate = match setting {
        Setting::Conical { .. } => decay_exponent_fit_log(&sample)?,
        _ => decay_exponent_fit(&sample)?,
    };
    estimate.classification = classify_boundary_condition(&estimate, setting, margin);
    let text = match cli.output {
        Format::Json => output::json(&estimate)?,
        Format::Csv => {
            let class = serde_json::to_value(estimate.classification)?;
            format!(
                "beta,c,r2,classification,removed\n{}",
                row(&[
                    num(estimate.beta),
                    num(estimate.c),
                    num(estimate.r2),
                    class.as_str().unwrap_or_default().to_string(),
                    estimate.removed.to_string(),
                ])
            )
        }
    };
    output::emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Density { domain, points: args } => {
            let metric = parse_metric(domain).map_err(usage)?;
            let mut text = String::from("re,im,lambda,log_lambda\n");
            for z in points(args, &metric)? {
                let lambda = metric.density_at(z)?;
                text.push_str(&row(&[num(z.re), num(z.im), num(lambda), num(metric.log_density_at(z)?)]));
            }
            output::emit(&text)?;
        }
        Command::Curvature { domain, points: args, h } => {
            let metric = parse_metric(domain).map_err(usage)?;
            let mut text = String::from("re,im,kappa,h_used\n");
            for z in points(args, &metric)? {
                let est = curvature_at(&metric, z, *h)?;
                text.push_str(&row(&[num(z.re), num(z.im), num(est.kappa), num(est.h_used)]));
            }
            output::emit(&text)?;
        }
        Command::Distance {
            domain,
            z1,
            z2,
            winding,
            oracle_grid,
        } => {
            let domain = parse_domain(domain).map_err(usage)?;
            let z1 = parse_complex(z1).map_err(usage)?;
            let z2 = parse_complex(z2).map_err(usage)?;
            let result = match oracle_grid {
                Some(n) => geodesic_oracle(domain, z1, z2, *n)?,
                None => distance(domain, z1, z2, *winding)?,
            };
            let text = match cli.output {
                Format::Csv => row(&[
                    "distance".into(),
                    num(result.value),
                    result.method.to_string(),
                    result.deck_index.to_string(),
                ]),
                Format::Json => output::json(&result)?,
            };
            output::emit(&text)?;
        }
        Command::Verify { suite, grid } => {
            let config = SuiteConfig {
                suite: suite.clone(),
                tolerances: cli.tol.clone(),
                grid: *grid,
                seed: cli.seed,
            };
            let outcome = run_suite(&config)?;
            let text = match (&outcome, cli.output) {
                (SuiteOutcome::Report(report), Format::Csv) => output::report_csv(report),
                (SuiteOutcome::Report(report), Format::Json) => output::json(report)?,
                (SuiteOutcome::Witness { limit, .. }, Format::Csv) => output::witness_csv(limit),
                (SuiteOutcome::Witness { limit, .. }, Format::Json) => output::json(limit)?,
            };
            output::emit(&text)?;
            if !outcome.pass() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Rigidity(RigidityCommand::Sample {
            metric,
            reference,
            domain,
            q,
            z,
        }) => {
            let metric = parse_metric(metric).map_err(usage)?;
            let reference = parse_metric(reference).map_err(usage)?;
            let domain = parse_domain(domain).map_err(usage)?;
            let q = parse_complex(q).map_err(usage)?;
            let seq = if z.is_empty() {
                default_sequence()
            } else {
                z.iter().map(|s| parse_complex(s).map_err(usage)).collect::<Result<Vec<_>>>()?
            };
            let sample = sample_sequence(&metric, &reference, domain, &seq, q)?;
            let mut text = String::from("re,im,ratio,distance,deficit\n");
            for i in 0..sample.points.len() {
                let z = sample.points[i];
                text.push_str(&row(&[
                    num(z.re),
                    num(z.im),
                    num(sample.ratios[i]),
                    num(sample.distances[i]),
                    num(sample.deficits[i]),
                ]));
            }
            output::emit(&text)?;
        }
        Command::Rigidity(RigidityCommand::Fit { input, setting }) => {
            return fit_and_classify(cli, input, setting, DEFAULT_MARGIN);
        }
        Command::Rigidity(RigidityCommand::Classify { input, setting, margin }) => {
            return fit_and_classify(cli, input, setting, *margin);
        }
        Command::Liouville(LiouvilleCommand::Solve { w0, dw0, t0, t1, steps }) => {
            if *steps == 0 {
                bail!(usage("--steps must be positive"));
            }
            let profile = integrate_radial(*w0, *dw0, *t0, *t1, *steps)?;
            let text = match cli.output {
                Format::Json => output::json(&profile)?,
                Format::Csv => {
                    let mut text = String::from("t,w,lambda,E\n");
                    for i in 0..profile.len() {
                        text.push_str(&row(&[
                            num(profile.t_grid[i]),
                            num(profile.w_values[i]),
                            num(profile.lambda(i)),
                            num(profile.energy(i)),
                        ]));
                    }
                    text
                }
            };
            output::emit(&text)?;
        }
        Command::Liouville(LiouvilleCommand::Classify { family }) => {
            let profile = classify_singularity(&closed_form_family(parse_family(family)?)?)?;
            let text = match cli.output {
                Format::Json => output::json(&profile)?,
                Format::Csv => {
                    let kind = serde_json::to_value(profile.kind)?;
                    let name = kind["kind"].as_str().unwrap_or_default().to_string();
                    let alpha = kind.get("alpha").and_then(|a| a.as_f64()).map(num).unwrap_or_default();
                    format!("kind,alpha,remainder_bound\n{}", row(&[name, alpha, num(profile.remainder_bound)]))
                }
            };
            output::emit(&text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
