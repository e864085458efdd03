//! Command-line surface: filter validation, scaling/wavelet sample files,
//! the verification report, and pyramid transforms on signal files.
//!
//! Exit status contract: 0 = all checks pass, 1 = a numerical check failed,
//! 2 = input or usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use qmfwave::cascade::{analyze, parse_pyramid, parse_signal_csv, synthesize, write_pyramid, write_signal_csv};
use qmfwave::filters::QMF_TOLERANCE;
use qmfwave::mra::inverse_transform;
use qmfwave::scaling::LineGrid;
use qmfwave::verify::{verify_filter, Profile, VerifyOptions};
use qmfwave::{Filter, FilterKind, WaveletSystem};

#[derive(Parser)]
#[command(name = "qmfwave", version, about = "Filters to wavelets on the frequency axis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter-level operations
    Filters {
        #[command(subcommand)]
        action: FiltersAction,
    },
    /// Sample the scaling function or wavelet to a CSV file
    Build {
        /// What to sample
        #[arg(value_enum)]
        target: BuildTarget,
        #[command(flatten)]
        source: FilterSource,
        /// Truncation depth of the scaling product
        #[arg(long, default_value_t = 30)]
        depth: u32,
        /// Grid step: a dyadic value written as 1/64, 2^-6 or 0.015625
        #[arg(long, default_value = "1/64")]
        step: String,
        /// Grid extent: samples cover [-extent, extent)
        #[arg(long, default_value_t = 64.0)]
        extent: f64,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Emit the inverse Fourier transform instead of the frequency samples
        #[arg(long = "time-domain")]
        time_domain: bool,
    },
    /// Run the verification suite and report residuals
    Verify {
        #[command(flatten)]
        source: FilterSource,
        /// fast or full
        #[arg(long, default_value = "fast")]
        profile: String,
        /// Seed for the randomized checks
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Optional path for the machine-readable report
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Analysis/synthesis pyramid on signal files
    Cascade {
        /// Direction of the transform
        #[arg(value_enum)]
        direction: CascadeDirection,
        #[command(flatten)]
        source: FilterSource,
        /// Number of pyramid levels (analyze only)
        #[arg(long, default_value_t = 1)]
        levels: u32,
        /// Input file: signal CSV (analyze) or pyramid file (synthesize)
        #[arg(long = "in")]
        input: PathBuf,
        /// Output file
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum FiltersAction {
    /// Validate the QMF identity and print the conjugate mirror
    Check {
        #[command(flatten)]
        source: FilterSource,
        /// Number of circle points for the residual (even)
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildTarget {
    Scaling,
    Wavelet,
}

#[derive(Clone, Copy, ValueEnum)]
enum CascadeDirection {
    Analyze,
    Synthesize,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FilterSource {
    /// Built-in filter name: haar, db4 or shannon
    #[arg(long)]
    builtin: Option<String>,
    /// Filter file path
    #[arg(long)]
    file: Option<PathBuf>,
}

/// An error that already knows which exit status it maps to. Every input,
/// parse or validation problem is status 2; failed numerical checks return
/// status 1 through `run` directly.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn load_filter(source: &FilterSource) -> Result<(String, Filter), UsageError> {
    if let Some(name) = &source.builtin {
        let filter = Filter::builtin(name)?;
        Ok((name.clone(), filter))
    } else {
        let path = source.file.as_ref().expect("clap enforces the group");
        let text = fs::read_to_string(path)
            .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        let filter = Filter::parse(&text)
            .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        Ok((path.display().to_string(), filter))
    }
}

/// Accepts `1/64`, `1/2^6`, `2^-6`, or a dyadic decimal such as `0.015625`.
fn parse_step(text: &str) -> Result<f64, UsageError> {
    let bad = || UsageError(format!("step `{text}` is not a dyadic 2^-p value"));
    let value = if let Some(rest) = text.strip_prefix("1/") {
        if let Some(exp) = rest.strip_prefix("2^") {
            let exp: i32 = exp.parse().map_err(|_| bad())?;
            2f64.powi(-exp)
        } else {
            let den: f64 = rest.parse().map_err(|_| bad())?;
            1.0 / den
        }
    } else if let Some(rest) = text.strip_prefix("2^") {
        let exp: i32 = rest.parse().map_err(|_| bad())?;
        2f64.powi(exp)
    } else {
        text.parse::<f64>().map_err(|_| bad())?
    };
    if (0..=60).any(|p| value == 0.5f64.powi(p)) {
        Ok(value)
    } else {
        Err(bad())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), UsageError> {
    fs::write(path, contents).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn cmd_filters_check(source: &FilterSource, grid: usize) -> Result<u8, UsageError> {
    let (label, filter) = load_filter(source)?;
    let residual = filter.qmf_residual(grid)?;
    let at_one = (filter.evaluate(0.0) - Complex64::new(1.0, 0.0)).norm();
    let mirror = filter.conjugate_mirror();

    println!("filter            {label}");
    println!("qmf residual      {residual:.6e}  (grid {grid}, tolerance {QMF_TOLERANCE:.1e})");
    println!("|m(1) - 1|        {at_one:.6e}");
    match mirror.kind() {
        FilterKind::Laurent => {
            let (coeffs, offset) = mirror.coefficients().expect("laurent");
            println!("conjugate mirror  offset {offset}");
            for (i, c) in coeffs.iter().enumerate() {
                println!("  g[{}] = {} {}", offset + i as i64, c.re + 0.0, c.im + 0.0);
            }
        }
        FilterKind::Indicator => {
            let arcs = mirror.arcs().expect("indicator");
            println!("conjugate mirror  e^(2 pi i x) on arcs:");
            for (a, b) in arcs {
                println!("  [{a}, {b})");
            }
        }
    }

    if residual <= QMF_TOLERANCE && at_one <= QMF_TOLERANCE {
        println!("result            pass");
        Ok(0)
    } else {
        println!("result            FAIL");
        Ok(1)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_build(
    target: BuildTarget,
    source: &FilterSource,
    depth: u32,
    step: &str,
    extent: f64,
    out: &Path,
    time_domain: bool,
) -> Result<u8, UsageError> {
    let (label, filter) = load_filter(source)?;
    let step = parse_step(step)?;
    let grid = LineGrid::new(step, extent)?;
    let system = WaveletSystem::new(&filter, &grid, depth)?;
    let profile = match target {
        BuildTarget::Scaling => system.scaling_function(),
        BuildTarget::Wavelet => system.wavelet(),
    };
    let emitted = if time_domain {
        inverse_transform(profile)?
    } else {
        profile.clone()
    };
    write_file(out, &emitted.to_csv())?;
    let out_grid = emitted.grid();
    println!(
        "wrote {} ({} samples, step {}, extent {}, depth {}, filter {})",
        out.display(),
        out_grid.len(),
        out_grid.step(),
        out_grid.extent(),
        depth,
        label
    );
    Ok(0)
}

fn cmd_verify(
    source: &FilterSource,
    profile: &str,
    seed: u64,
    report_path: Option<&Path>,
) -> Result<u8, UsageError> {
    let (label, filter) = load_filter(source)?;
    let profile: Profile = profile.parse().map_err(UsageError)?;
    let options = VerifyOptions { profile, seed };
    let report = verify_filter(&label, &filter, &options)?;
    print!("{}", report.to_table());
    if let Some(path) = report_path {
        write_file(path, &report.to_machine())?;
    }
    if report.overall_pass() {
        Ok(0)
    } else {
        for entry in report.failing() {
            eprintln!(
                "failed: {} residual {:.6e} tolerance {:.6e}",
                entry.name, entry.residual, entry.tolerance
            );
        }
        Ok(1)
    }
}

fn cmd_cascade(
    direction: CascadeDirection,
    source: &FilterSource,
    levels: u32,
    input: &Path,
    out: &Path,
) -> Result<u8, UsageError> {
    let (_, filter) = load_filter(source)?;
    let mirror = filter.conjugate_mirror();
    let text = fs::read_to_string(input)
        .map_err(|e| UsageError(format!("{}: {e}", input.display())))?;
    match direction {
        CascadeDirection::Analyze => {
            let signal = parse_signal_csv(&text)?;
            let pyramid = analyze(&filter, &mirror, &signal, levels)?;
            write_file(out, &write_pyramid(&pyramid))?;
            println!(
                "analyzed {} levels; approximation window {:?}",
                pyramid.levels(),
                pyramid.approximation().window()
            );
        }
        CascadeDirection::Synthesize => {
            let pyramid = parse_pyramid(&text)?;
            let signal = synthesize(&filter, &mirror, &pyramid)?;
            write_file(out, &write_signal_csv(&signal))?;
            println!(
                "synthesized from {} levels; signal window {:?}",
                pyramid.levels(),
                signal.window()
            );
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, UsageError> {
    match &cli.command {
        Command::Filters {
            action: FiltersAction::Check { source, grid },
        } => cmd_filters_check(source, *grid),
        Command::Build {
            target,
            source,
            depth,
            step,
            extent,
            out,
            time_domain,
        } => cmd_build(*target, source, *depth, step, *extent, out, *time_domain),
        Command::Verify {
            source,
            profile,
            seed,
            report,
        } => cmd_verify(source, profile, *seed, report.as_deref()),
        Command::Cascade {
            direction,
            source,
            levels,
            input,
            out,
        } => cmd_cascade(*direction, source, *levels, input, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
