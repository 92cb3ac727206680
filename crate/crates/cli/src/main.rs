//! Command-line harness: efficiency sweeps and plots, closed-form weight
//! verification, prediction from design files, equivalence checks and Monte
//! Carlo validation.
//!
//! Exit codes: 0 success/verified, 1 operational error, 2 check failed.
//! Every parameter can also be set through a COKRIG_-prefixed environment
//! variable; flags take precedence.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use cokrig::closedform::{cokrige_weights_closed, ClosedFormWeights};
use cokrig::efficiency;
use cokrig::equivalence::{check_equivalence_conditions, BivariateMaternSpec};
use cokrig::predictor::{sample_paths, Prediction, EFFECTIVE_SUPPORT_THRESHOLD};
use cokrig::{cokrige, interleaved_design, krige, BivariateModel, Design};

mod plot;

#[derive(Parser)]
#[command(
    name = "cokrig",
    version,
    about = "Exact kriging and cokriging for the proportional bivariate exponential model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the kriging-to-cokriging efficiency grid and write it as CSV
    Sweep(SweepArgs),
    /// Render an efficiency CSV as a deterministic SVG figure
    Plot(PlotArgs),
    /// Check the closed-form cokriging weights against the dense solver
    VerifyWeights(VerifyWeightsArgs),
    /// Predict Y1 at the target of a JSON design file
    Predict(PredictArgs),
    /// Check sufficient conditions for equivalence of two bivariate Matérn measures
    Equiv(EquivArgs),
    /// Validate the exact prediction variances by seeded Monte Carlo
    McValidate(McValidateArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Scale parameters alpha, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "2,4,8",
        env = "COKRIG_ALPHAS"
    )]
    alphas: Vec<f64>,
    /// Cross-correlation coefficients r, comma separated (|r| < 1)
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.2,0.5",
        env = "COKRIG_RS"
    )]
    rs: Vec<f64>,
    /// Smallest design half-count (even)
    #[arg(long, default_value_t = 2, env = "COKRIG_N_MIN")]
    n_min: usize,
    /// Largest design half-count (even)
    #[arg(long, default_value_t = 64, env = "COKRIG_N_MAX")]
    n_max: usize,
    /// Variance of Y1
    #[arg(long, default_value_t = 1.0, env = "COKRIG_SIGMA11")]
    sigma11: f64,
    /// Variance of Y2
    #[arg(long, default_value_t = 1.0, env = "COKRIG_SIGMA22")]
    sigma22: f64,
    /// Output CSV path
    #[arg(
        long,
        short = 'o',
        default_value = "efficiency.csv",
        env = "COKRIG_OUT"
    )]
    out: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    /// Input CSV written by `sweep`
    #[arg(long, short = 'i', env = "COKRIG_INPUT")]
    input: PathBuf,
    /// Output SVG path
    #[arg(
        long,
        short = 'o',
        default_value = "efficiency.svg",
        env = "COKRIG_OUT"
    )]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyWeightsArgs {
    /// Design half-count (even)
    #[arg(long, env = "COKRIG_N")]
    n: usize,
    /// Scale parameter
    #[arg(long, env = "COKRIG_ALPHA")]
    alpha: f64,
    /// Cross-correlation coefficient (|r| < 1)
    #[arg(long, env = "COKRIG_R")]
    r: f64,
}

#[derive(Args)]
struct PredictArgs {
    /// JSON design file with fields sites1, sites2, target
    #[arg(long, env = "COKRIG_DESIGN")]
    design: PathBuf,
    #[arg(long, default_value_t = 1.0, env = "COKRIG_SIGMA11")]
    sigma11: f64,
    #[arg(long, default_value_t = 1.0, env = "COKRIG_SIGMA22")]
    sigma22: f64,
    /// Cross-correlation coefficient (|r| < 1)
    #[arg(long, env = "COKRIG_R")]
    r: f64,
    /// Scale parameter
    #[arg(long, env = "COKRIG_ALPHA")]
    alpha: f64,
    /// Smoothness (1/2 is the exponential model)
    #[arg(long, default_value_t = 0.5, env = "COKRIG_NU")]
    nu: f64,
}

#[derive(Args)]
struct EquivArgs {
    /// First measure: sigma11,sigma22,sigma12,alpha,nu
    #[arg(long, value_delimiter = ',', env = "COKRIG_FIRST")]
    first: Vec<f64>,
    /// Second measure: sigma11,sigma22,sigma12,alpha,nu
    #[arg(long, value_delimiter = ',', env = "COKRIG_SECOND")]
    second: Vec<f64>,
    /// Relative tolerance on each matching condition
    #[arg(long, default_value_t = 1e-9, env = "COKRIG_REL_TOL")]
    rel_tol: f64,
}

#[derive(Args)]
struct McValidateArgs {
    /// Design half-count (even)
    #[arg(long, env = "COKRIG_N")]
    n: usize,
    /// Scale parameter
    #[arg(long, env = "COKRIG_ALPHA")]
    alpha: f64,
    /// Cross-correlation coefficient (|r| < 1)
    #[arg(long, env = "COKRIG_R")]
    r: f64,
    /// Number of Monte Carlo draws (>= 1000)
    #[arg(long, default_value_t = 100_000, env = "COKRIG_SAMPLES")]
    samples: usize,
    /// RNG seed
    #[arg(long, default_value_t = 42, env = "COKRIG_SEED")]
    seed: u64,
}

/// Whether a completed command verified what it set out to check.
enum Outcome {
    Ok,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Plot(args) => cmd_plot(args),
        Command::VerifyWeights(args) => cmd_verify_weights(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Equiv(args) => cmd_equiv(args),
        Command::McValidate(args) => cmd_mc_validate(args),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::from(0),
        Ok(Outcome::CheckFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<Outcome> {
    if !args.n_min.is_multiple_of(2) || !args.n_max.is_multiple_of(2) || args.n_min < 2 {
        bail!(
            "n-min and n-max must be even and >= 2, got {} and {}",
            args.n_min,
            args.n_max
        );
    }
    if args.n_min > args.n_max {
        bail!("n-min {} exceeds n-max {}", args.n_min, args.n_max);
    }
    let ns: Vec<usize> = (args.n_min..=args.n_max).step_by(2).collect();
    let records = efficiency::sweep(&ns, &args.alphas, &args.rs, args.sigma11, args.sigma22)?;
    let file = fs::File::create(&args.out)
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    efficiency::write_csv(&records, file)?;
    println!(
        "wrote {} records ({} r x {} alpha x {} n) to {}",
        records.len(),
        args.rs.len(),
        args.alphas.len(),
        ns.len(),
        args.out.display()
    );
    Ok(Outcome::Ok)
}

fn cmd_plot(args: PlotArgs) -> anyhow::Result<Outcome> {
    let file = fs::File::open(&args.input)
        .with_context(|| format!("cannot read {}", args.input.display()))?;
    let records = efficiency::read_csv(file)
        .with_context(|| format!("malformed CSV {}", args.input.display()))?;
    let svg = plot::render(&records);
    fs::write(&args.out, svg).with_context(|| format!("cannot write {}", args.out.display()))?;
    println!(
        "plotted {} records to {}",
        records.len(),
        args.out.display()
    );
    Ok(Outcome::Ok)
}

fn cmd_verify_weights(args: VerifyWeightsArgs) -> anyhow::Result<Outcome> {
    let closed = cokrige_weights_closed(args.n, args.alpha, args.r)?;
    let model = BivariateModel::exponential(1.0, 1.0, args.r, args.alpha)?;
    let design = interleaved_design(args.n)?;
    let dense = cokrige(&design, &model)?;

    println!(
        "closed-form vs dense cokriging weights at n={}, alpha={}, r={}",
        args.n, args.alpha, args.r
    );
    println!(
        "  {:<12} {:>24} {:>24} {:>12}",
        "observation", "closed", "dense", "|deviation|"
    );
    let keys = ClosedFormWeights::support_keys(args.n);
    let values = closed.values();
    let mut max_dev = 0.0f64;
    for (&(var, site), &value) in keys.iter().zip(values.iter()) {
        let dense_w = dense
            .weight_for(var, site)
            .expect("support site missing from the design");
        let dev = (dense_w - value).abs();
        max_dev = max_dev.max(dev);
        println!(
            "  {:<12} {:>24.16e} {:>24.16e} {:>12.3e}",
            format!("{var}({site})"),
            value,
            dense_w,
            dev
        );
    }
    let mut off_count = 0usize;
    let mut off_max = 0.0f64;
    for w in dense.weights() {
        if !keys.contains(&(w.var, w.site)) {
            off_max = off_max.max(w.value.abs());
            if w.value.abs() > EFFECTIVE_SUPPORT_THRESHOLD {
                off_count += 1;
            }
        }
    }
    println!("max support deviation: {max_dev:.3e}");
    println!(
        "off-support weights above {EFFECTIVE_SUPPORT_THRESHOLD:.0e}: {off_count} (largest {off_max:.3e})"
    );
    let ok = max_dev < EFFECTIVE_SUPPORT_THRESHOLD && off_count == 0;
    println!("verdict: {}", if ok { "VERIFIED" } else { "MISMATCH" });
    Ok(if ok {
        Outcome::Ok
    } else {
        Outcome::CheckFailed
    })
}

fn print_weights(p: &Prediction) {
    println!("  {:<12} {:>24}", "observation", "weight");
    for w in p.weights() {
        println!(
            "  {:<12} {:>24.16e}",
            format!("{}({})", w.var, w.site),
            w.value
        );
    }
    println!("  prediction variance: {:.16e}", p.variance());
}

fn cmd_predict(args: PredictArgs) -> anyhow::Result<Outcome> {
    let text = fs::read_to_string(&args.design)
        .with_context(|| format!("cannot read {}", args.design.display()))?;
    let design = Design::from_json(&text)
        .with_context(|| format!("cannot parse design {}", args.design.display()))?;
    let model = BivariateModel::new(args.sigma11, args.sigma22, args.r, args.alpha, args.nu)?;

    println!(
        "design: {} Y1 sites, {} Y2 sites, target {}",
        design.sites1().len(),
        design.sites2().len(),
        design.target()
    );

    let kriging = if design.sites1().is_empty() {
        println!("\nkriging: unavailable (no Y1 observations)");
        None
    } else {
        let p = krige(&design, &model)?;
        println!("\nkriging (Y1 observations only):");
        print_weights(&p);
        Some(p)
    };

    let cokriging = cokrige(&design, &model)?;
    println!("\ncokriging (all observations):");
    print_weights(&cokriging);

    if let Some(k) = kriging {
        if k.variance() > 0.0 {
            println!(
                "\nvariance ratio cokriging/kriging: {:.6}",
                cokriging.variance() / k.variance()
            );
        } else {
            println!("\nvariance ratio cokriging/kriging: 1 (exact interpolation)");
        }
    }
    Ok(Outcome::Ok)
}

fn parse_spec(name: &str, values: &[f64]) -> anyhow::Result<BivariateMaternSpec> {
    if values.len() != 5 {
        bail!(
            "--{name} needs exactly 5 comma-separated values sigma11,sigma22,sigma12,alpha,nu, got {}",
            values.len()
        );
    }
    Ok(BivariateMaternSpec::new(
        values[0], values[1], values[2], values[3], values[4],
    )?)
}

fn cmd_equiv(args: EquivArgs) -> anyhow::Result<Outcome> {
    let first = parse_spec("first", &args.first)?;
    let second = parse_spec("second", &args.second)?;
    let report = check_equivalence_conditions(&first, &second, args.rel_tol)?;

    println!(
        "equivalence conditions (relative tolerance {:.1e}):",
        args.rel_tol
    );
    println!(
        "  {:<32} {:>16} {:>16} {:>12} {:>12}  status",
        "condition", "measure 1", "measure 2", "|residual|", "relative"
    );
    for c in &report.conditions {
        println!(
            "  {:<32} {:>16.9e} {:>16.9e} {:>12.3e} {:>12.3e}  {}",
            c.name,
            c.lhs,
            c.rhs,
            c.abs_residual,
            c.rel_residual,
            if c.satisfied { "ok" } else { "FAILED" }
        );
    }
    println!(
        "verdict: sufficient conditions {}",
        if report.satisfied {
            "SATISFIED"
        } else {
            "NOT satisfied"
        }
    );
    Ok(if report.satisfied {
        Outcome::Ok
    } else {
        Outcome::CheckFailed
    })
}

fn cmd_mc_validate(args: McValidateArgs) -> anyhow::Result<Outcome> {
    if args.samples < 1000 {
        bail!("samples must be >= 1000, got {}", args.samples);
    }
    let model = BivariateModel::exponential(1.0, 1.0, args.r, args.alpha)?;
    let design = interleaved_design(args.n)?;
    let kriging = krige(&design, &model)?;
    let cokriging = cokrige(&design, &model)?;
    let paths = sample_paths(&design, &model, args.seed, args.samples)?;

    println!(
        "monte carlo validation at n={}, alpha={}, r={}, samples={}, seed={}",
        args.n, args.alpha, args.r, args.samples, args.seed
    );
    println!(
        "  {:<10} {:>22} {:>22} {:>12} {:>8}  status",
        "predictor", "exact variance", "empirical mse", "3 std err", "z"
    );
    let mut all_ok = true;
    for (name, p) in [("kriging", &kriging), ("cokriging", &cokriging)] {
        let mse = paths.empirical_mse(p);
        // empirical mean of Z^2 with Z ~ N(0, v) has standard error sqrt(2/k) v
        let se = (2.0 / args.samples as f64).sqrt() * p.variance();
        let z = (mse - p.variance()) / se;
        let ok = z.abs() <= 3.0;
        all_ok &= ok;
        println!(
            "  {:<10} {:>22.16e} {:>22.16e} {:>12.3e} {:>8.3}  {}",
            name,
            p.variance(),
            mse,
            3.0 * se,
            z,
            if ok { "ok" } else { "FAILED" }
        );
    }
    println!(
        "verdict: {}",
        if all_ok { "VALIDATED" } else { "OUT OF BOUNDS" }
    );
    Ok(if all_ok {
        Outcome::Ok
    } else {
        Outcome::CheckFailed
    })
}
