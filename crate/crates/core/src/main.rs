use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use bergspec::report::{parse_complex, run, Report, RunOptions, Tolerances, TruncationRequest};
use bergspec::scenario::{parse_scenario, Scenario};
use bergspec::suite::{report_svgs, run_suite, SuiteOptions};
use bergspec::svg::{render_svg, Viewport};
use bergspec::{Error, Result};

#[derive(Parser)]
#[command(name = "bergspec", version, about = "Spectra of weighted composition semigroups on Bergman spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the spectra of a scenario.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Write an SVG of the generator spectrum.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Classify and cross-check numerically at the given λ values.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated complex numbers, e.g. `0.5+0i,-1.5`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        lambda: Vec<String>,
        /// Skip the growth-exponent fits.
        #[arg(long)]
        no_growth: bool,
        #[command(flatten)]
        tol: TolFlags,
    },
    /// Finite-section estimate of the spectral radius of one operator.
    Truncate {
        #[command(flatten)]
        common: Common,
        /// Matrix dimension.
        #[arg(long = "N", default_value_t = 60)]
        n: usize,
        /// Largest matrix power in the Gelfand estimate.
        #[arg(long, default_value_t = 24)]
        nmax: usize,
        #[command(flatten)]
        tol: TolFlags,
    },
    /// Render one region as SVG.
    Plot {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = RegionKind::Generator)]
        region: RegionKind,
        /// Time for operator regions.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// `re_min,re_max,im_min,im_max`; fitted to the region when absent.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 4)]
        viewport: Option<Vec<f64>>,
        /// Output file (stdout when absent).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run every scenario of a suite file.
    Report {
        suite: PathBuf,
        #[arg(short, long, default_value = "report")]
        out: PathBuf,
        /// Worker threads (0 = automatic).
        #[arg(short, long, default_value_t = 4)]
        jobs: usize,
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        tol: TolFlags,
    },
}

#[derive(Args)]
struct Common {
    #[arg(short, long)]
    config: PathBuf,
    /// Times for the operator regions (comma-separated).
    #[arg(long, value_delimiter = ',')]
    t: Vec<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Record wall time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct TolFlags {
    #[arg(long)]
    tol_identity: Option<f64>,
    #[arg(long)]
    tol_eigen_residual: Option<f64>,
    #[arg(long)]
    tol_resolvent: Option<f64>,
    #[arg(long)]
    tol_witness: Option<f64>,
    #[arg(long)]
    tol_growth: Option<f64>,
    #[arg(long)]
    tol_radius_ratio: Option<f64>,
    #[arg(long)]
    tol_envelope_ratio: Option<f64>,
    #[arg(long)]
    tol_membership_margin: Option<f64>,
    #[arg(long)]
    tol_orbit: Option<f64>,
}

impl TolFlags {
    fn resolve(&self) -> Result<Tolerances> {
        let mut t = Tolerances::default();
        let slots = [
            (self.tol_identity, &mut t.identity),
            (self.tol_eigen_residual, &mut t.eigen_residual),
            (self.tol_resolvent, &mut t.resolvent),
            (self.tol_witness, &mut t.witness),
            (self.tol_growth, &mut t.growth),
            (self.tol_radius_ratio, &mut t.radius_ratio),
            (self.tol_envelope_ratio, &mut t.envelope_ratio),
            (self.tol_membership_margin, &mut t.membership_margin),
            (self.tol_orbit, &mut t.orbit),
        ];
        for (flag, slot) in slots {
            if let Some(v) = flag {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Invalid(format!("tolerance {v} must be positive")));
                }
                *slot = v;
            }
        }
        Ok(t)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RegionKind {
    Generator,
    Essential,
    Point,
    Operator,
    OperatorPoint,
}

fn load(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

fn emit(report: &Report, json: Option<&Path>) -> Result<()> {
    match json {
        Some(p) => std::fs::write(p, report.to_json())?,
        None => print!("{}", report.to_json()),
    }
    for item in report.unsupported_items() {
        eprintln!("unsupported: {item}");
    }
    for c in report.failed_checks() {
        eprintln!("failed: {} (value {:?}, tolerance {:?})", c.name, c.value, c.tolerance);
    }
    Ok(())
}

fn run_command(s: &Scenario, common: &Common, opts: RunOptions) -> Result<Report> {
    let report = run(s, Some(&common.config.display().to_string()), &opts)?;
    emit(&report, common.json.as_deref())?;
    Ok(report)
}

fn lambdas(raw: &[String]) -> Result<Vec<Complex64>> {
    raw.iter()
        .map(|s| parse_complex(s).map_err(|e| Error::Invalid(format!("--lambda {s}: {e}"))))
        .collect()
}

fn plot(
    s: &Scenario,
    kind: RegionKind,
    t: f64,
    viewport: Option<Vec<f64>>,
) -> Result<String> {
    use bergspec::classifier::*;
    let g = s.gamma_profile();
    let region = match kind {
        RegionKind::Generator => generator_spectrum(&g)?,
        RegionKind::Essential => essential_spectrum(&g)?,
        RegionKind::Point => generator_point_spectrum(&g),
        RegionKind::Operator => operator_spectrum(&g, t)?,
        RegionKind::OperatorPoint => operator_point_spectrum(&g, t)?,
    };
    let v = match viewport {
        Some(v) => {
            let vp = Viewport::new(v[0], v[1], v[2], v[3]);
            if !vp.is_valid() {
                return Err(Error::Invalid(format!("bad viewport {v:?}")));
            }
            vp
        }
        None => Viewport::fit(&region),
    };
    Ok(render_svg(&region, &v))
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Classify { common, svg } => {
            let s = load(&common.config)?;
            let opts = RunOptions {
                ts: common.t.clone(),
                timing: common.timing,
                ..Default::default()
            };
            let report = run_command(&s, &common, opts)?;
            if let Some(path) = svg {
                if let Some((_, text)) = report_svgs(&report).into_iter().next() {
                    std::fs::write(path, text)?;
                }
            }
            Ok(report.exit_code())
        }
        Command::Verify {
            common,
            lambda,
            no_growth,
            tol,
        } => {
            let tolerances = tol.resolve()?;
            let lambdas = lambdas(&lambda)?;
            let s = load(&common.config)?;
            let opts = RunOptions {
                ts: common.t.clone(),
                lambdas,
                growth: !no_growth,
                tolerances,
                timing: common.timing,
                ..Default::default()
            };
            Ok(run_command(&s, &common, opts)?.exit_code())
        }
        Command::Truncate {
            common,
            n,
            nmax,
            tol,
        } => {
            let tolerances = tol.resolve()?;
            let s = load(&common.config)?;
            let t = match common.t.as_slice() {
                [] => 1.0,
                [t] => *t,
                _ => return Err(Error::Invalid("truncate takes a single --t".into())),
            };
            let opts = RunOptions {
                ts: vec![t],
                truncation: Some(TruncationRequest { t, n, n_max: nmax }),
                tolerances,
                timing: common.timing,
                ..Default::default()
            };
            Ok(run_command(&s, &common, opts)?.exit_code())
        }
        Command::Plot {
            config,
            region,
            t,
            viewport,
            out,
        } => {
            let svg = plot(&load(&config)?, region, t, viewport)?;
            match out {
                Some(p) => std::fs::write(p, svg)?,
                None => print!("{svg}"),
            }
            Ok(0)
        }
        Command::Report {
            suite,
            out,
            jobs,
            timing,
            tol,
        } => {
            let opts = SuiteOptions {
                tolerances: tol.resolve()?,
                jobs,
                timing,
            };
            let summary = run_suite(&suite, &out, &opts)?;
            for item in &summary.scenarios {
                let status = match (&item.error, item.exit_code) {
                    (Some(e), _) => format!("error: {e}"),
                    (None, 0) => "ok".to_string(),
                    (None, 1) => format!("failed: {}", item.failed_checks.join(", ")),
                    (None, _) => format!("unsupported: {}", item.unsupported.join("; ")),
                };
                eprintln!("{}: {status}", item.name);
            }
            Ok(summary.exit_code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("bergspec: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
