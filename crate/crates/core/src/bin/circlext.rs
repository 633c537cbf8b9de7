use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use circlext::circfun::{antipodal_rearrangement, extension_norm6_direct, extension_norm6_spectral, phi, read_coefficients};
use circlext::circlegeom::{log_ratio_profile, sigma3, RadialProfile, SINGULAR_GAP};
use circlext::forms::{conjecture_explorer, psi_fast, trilinear_t};
use circlext::replab::{verify, Config, ConfigLayer, Suite, SuiteOptions, DIRECT_RADIAL_CUT};
use circlext::seqtab::{tables_json, write_table1_csv, write_table2_csv};
use circlext::{Error, Result};

#[derive(Parser)]
#[command(name = "circlext", version, about = "Sixfold Bessel integrals and extension-inequality checks on the circle")]
struct Cli {
    #[command(flatten)]
    config: ConfigFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigFlags {
    /// TOML file with split_radius, head_tol, tail_order, grid_size, cache_path
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    split_radius: Option<f64>,
    #[arg(long, global = true)]
    head_tol: Option<f64>,
    #[arg(long, global = true)]
    tail_order: Option<usize>,
    #[arg(long, global = true)]
    grid_size: Option<usize>,
    /// Integral cache file (overrides CIRCLEXT_CACHE_DIR)
    #[arg(long, global = true)]
    cache_path: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the alpha/beta and gamma/delta tables
    Tables {
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run a verification suite; exits with status 1 if any record fails
    Verify {
        /// tables, asymptotics, crux, cn, thm7, local-cs, geometry, budget or all
        suite: String,
        /// Number of random instances for the randomized suites
        #[arg(long)]
        seeds: Option<usize>,
        /// First seed
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// JSON report path
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print every record, not only failures
        #[arg(long)]
        verbose: bool,
    },
    /// Search for small values of Psi on random nonnegative antipodal functions
    Conjecture {
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a form on a coefficient file (n,re,im records)
    Eval {
        #[arg(value_enum)]
        form: Form,
        coeff_file: PathBuf,
        /// Also compute norm6 by direct quadrature of the extension
        #[arg(long)]
        dual_route: bool,
        #[arg(long, default_value_t = DIRECT_RADIAL_CUT)]
        radial_cut: f64,
        /// Replace f by the antipodal rearrangement of |f| on the configured grid
        #[arg(long)]
        rearrange: bool,
    },
    /// Radial profile of the threefold convolution of arc-length measure
    Convolution {
        #[arg(long, default_value_t = 0.0)]
        r_min: f64,
        #[arg(long, default_value_t = 3.0)]
        r_max: f64,
        #[arg(long, default_value_t = 301)]
        samples: usize,
        /// Profile CSV path
        #[arg(long)]
        out: PathBuf,
        /// Log-ratio CSV path (defaults to the profile path with a .log_ratio.csv suffix)
        #[arg(long)]
        log_ratio_out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Phi,
    #[value(name = "T")]
    T,
    Psi,
    Norm6,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn config(flags: &ConfigFlags) -> Result<Config> {
    let layer = ConfigLayer {
        split_radius: flags.split_radius,
        head_tol: flags.head_tol,
        tail_order: flags.tail_order,
        grid_size: flags.grid_size,
        cache_path: flags.cache_path.clone(),
    };
    Config::load(flags.config.as_deref(), &layer)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = config(&cli.config)?;
    match cli.command {
        Command::Tables { out, format } => {
            let seq = cfg.sequences()?;
            let (t1, t2) = (seq.table1()?, seq.table2()?);
            fs::create_dir_all(&out)?;
            match format {
                Format::Csv => {
                    write_table1_csv(&t1, fs::File::create(out.join("table1.csv"))?)?;
                    write_table2_csv(&t2, fs::File::create(out.join("table2.csv"))?)?;
                }
                Format::Json => {
                    let text = serde_json::to_string_pretty(&tables_json(&t1, &t2))?;
                    write_file(&out.join("tables.json"), &(text + "\n"))?;
                }
            }
            cfg.persist(&seq)?;
            Ok(true)
        }
        Command::Verify { suite, seeds, seed, out, verbose } => {
            let suite: Suite = suite.parse()?;
            let seq = cfg.sequences()?;
            let report = verify(&cfg, &seq, suite, SuiteOptions { seeds, base_seed: seed })?;
            cfg.persist(&seq)?;
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            for r in report.records.iter().filter(|r| verbose || !r.pass) {
                writeln!(w, "{}", r.summary_line())?;
            }
            let s = &report.summary;
            writeln!(
                w,
                "{}: {}/{} passed, min slack {:.3e}, {:.1}s",
                report.suite,
                s.passed,
                s.total,
                report.min_slack().unwrap_or(f64::NAN),
                report.wall_clock_seconds
            )?;
            if let Some(p) = out {
                write_file(&p, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            }
            Ok(report.all_pass())
        }
        Command::Conjecture { degree, trials, seed, out } => {
            let seq = cfg.sequences()?;
            let report = conjecture_explorer(seq.engine(), degree, trials, seed)?;
            cfg.persist(&seq)?;
            match &report.minimum {
                Some(m) => println!(
                    "degree {degree}, {trials} trials: min Psi/|h|^6 = {:.6e} (Psi = {:.6e} +- {:.1e}) at seed {}",
                    m.normalized, m.psi, m.psi_error, m.seed
                ),
                None => println!("no trials"),
            }
            for f in &report.flagged {
                println!("FLAGGED potential counterexample: seed {} Psi = {:.6e} +- {:.1e}", f.seed, f.psi, f.psi_error);
            }
            if let Some(p) = out {
                write_file(&p, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            }
            Ok(true)
        }
        Command::Eval { form, coeff_file, dual_route, radial_cut, rearrange } => {
            if dual_route && !matches!(form, Form::Norm6) {
                return Err(Error::Usage("--dual-route applies to norm6 only".into()));
            }
            let mut f = read_coefficients(fs::File::open(&coeff_file)?)?;
            if rearrange {
                let r = antipodal_rearrangement(&f, cfg.grid_size)?;
                eprintln!("rearranged on {} points, truncation residual {:.3e}", r.grid_size, r.residual);
                f = r.poly;
            }
            let seq = cfg.sequences()?;
            let engine = seq.engine();
            match form {
                Form::Phi => println!("{:.10}", phi(engine, &f)?),
                Form::T => println!("{}", trilinear_t(engine, &f, &f, &f)?),
                Form::Psi => println!("{}", psi_fast(engine, &f)?),
                Form::Norm6 => {
                    let s = extension_norm6_spectral(engine, &f)?;
                    println!("{s}");
                    if dual_route {
                        let d = extension_norm6_direct(&f, radial_cut)?;
                        let rel = (s.value - d.value).abs() / s.value.abs().max(f64::MIN_POSITIVE);
                        println!("direct {d}");
                        println!("relative difference {rel:.3e}");
                    }
                }
            }
            cfg.persist(&seq)?;
            Ok(true)
        }
        Command::Convolution { r_min, r_max, samples, out, log_ratio_out } => {
            if !(0.0 <= r_min && r_min <= r_max && r_max <= 3.0) || samples == 0 {
                return Err(Error::InvalidInput(format!("need 0 <= r_min <= r_max <= 3 and samples > 0, got [{r_min}, {r_max}] x {samples}")));
            }
            let mut profile = RadialProfile { radii: Vec::new(), values: Vec::new(), singular_radius: 1.0 };
            let mut skipped = 0;
            for i in 0..samples {
                let r = if samples == 1 { r_min } else { r_min + (r_max - r_min) * i as f64 / (samples - 1) as f64 };
                if (r - 1.0).abs() < SINGULAR_GAP {
                    skipped += 1;
                    continue;
                }
                profile.radii.push(r);
                profile.values.push(sigma3(r)?);
            }
            if skipped > 0 {
                eprintln!("skipped {skipped} sample(s) within {SINGULAR_GAP:e} of r = 1");
            }
            write_file(&out, &profile.to_csv())?;
            let lr = log_ratio_profile(&[1e-2, 1e-3, 1e-4, 1e-5, 1e-6])?;
            let lr_path = log_ratio_out.unwrap_or_else(|| {
                let mut s = out.clone().into_os_string();
                s.push(".log_ratio.csv");
                PathBuf::from(s)
            });
            write_file(&lr_path, &lr.to_csv())?;
            Ok(true)
        }
    }
}
