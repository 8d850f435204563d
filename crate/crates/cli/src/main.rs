use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use fracsq::dynamics::{default_window, evolve_vacuum, uniform_window, DEFAULT_SAMPLES};
use fracsq::pipeline::{
    analyze_run, emit_plot_data, run_sweep, toy_verify, AlphaWindows, SweepConfig,
};
use fracsq::{build_squeeze_chain, central_eigenpair, smallest_positive_eigenvalue, SqueezeOrder};

const EXIT_CONFIG: u8 = 1;
const EXIT_PARTIAL: u8 = 2;

#[derive(Parser)]
#[command(
    name = "fracsq",
    version,
    about = "Spectra and eigenstate scaling of fractional squeezing Hamiltonians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute E_min and <m> on an (n, N) grid.
    Sweep(SweepArgs),
    /// Fit scaling laws to a finished sweep.
    Analyze {
        #[arg(long)]
        run: PathBuf,
        /// e.g. "e=0.5:1.5,2.5:3.5;m=2.5:3.5,4.5:5.5"
        #[arg(long)]
        alpha_windows: Option<String>,
    },
    /// Write per-panel data files and a gnuplot script.
    Plot {
        #[arg(long)]
        run: PathBuf,
    },
    /// Check the spectrum of the hierarchical chain.
    Toy {
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 100.0])]
        ratios: Vec<f64>,
    },
    /// Evolve the vacuum and write r, <m>, photon number and norm.
    Dynamics {
        #[arg(long)]
        n: f64,
        #[arg(long = "N")]
        size: usize,
        /// Defaults to 3π / E_min.
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long)]
    n_min: Option<f64>,
    #[arg(long)]
    n_max: Option<f64>,
    #[arg(long)]
    n_step: Option<f64>,
    #[arg(long)]
    ladder_base: Option<usize>,
    #[arg(long)]
    doublings: Option<u32>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value = "run")]
    out: PathBuf,
    /// 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    resume: bool,
    /// Cap the ladder at N = 8000.
    #[arg(long)]
    desk: bool,
}

impl SweepArgs {
    fn config(&self) -> SweepConfig {
        let base = if self.desk {
            SweepConfig::desk()
        } else {
            SweepConfig::default()
        };
        SweepConfig {
            n_min: self.n_min.unwrap_or(base.n_min),
            n_max: self.n_max.unwrap_or(base.n_max),
            n_step: self.n_step.unwrap_or(base.n_step),
            ladder_base: self.ladder_base.unwrap_or(base.ladder_base),
            ladder_doublings: self.doublings.unwrap_or(base.ladder_doublings),
            tol: self.tol.unwrap_or(base.tol),
            output_dir: self.out.clone(),
            workers: self.workers,
            resume: self.resume,
        }
    }
}

fn status(failures: usize) -> ExitCode {
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_PARTIAL)
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Sweep(args) => {
            let outcome = run_sweep(&args.config())?;
            let failures = outcome.failures();
            eprintln!(
                "{} cells ({} computed, {} failed) -> {}",
                outcome.records.len(),
                outcome.manifest.computed_cells,
                failures,
                outcome.run_dir.display()
            );
            Ok(status(failures))
        }
        Command::Analyze { run, alpha_windows } => {
            let windows: AlphaWindows = match alpha_windows {
                Some(s) => s.parse()?,
                None => AlphaWindows::default(),
            };
            let outcome = analyze_run(&run, &windows)?;
            let mut failures = outcome.failures();
            for line in outcome.lines.e.iter().chain(&outcome.lines.m) {
                match (&line.line, &line.error) {
                    (Some(l), _) => eprintln!(
                        "window [{}, {}]: slope {:.6} root {}",
                        line.window.0,
                        line.window.1,
                        l.slope,
                        l.root.map_or("-".into(), |r| format!("{r:.6}"))
                    ),
                    (None, Some(e)) => {
                        failures += 1;
                        eprintln!("window [{}, {}]: {e}", line.window.0, line.window.1);
                    }
                    (None, None) => {}
                }
            }
            eprintln!(
                "{} rows, {} flagged -> {}",
                outcome.rows.len(),
                outcome.failures(),
                outcome.dir.display()
            );
            Ok(status(failures))
        }
        Command::Plot { run } => {
            let files = emit_plot_data(&run)?;
            for f in files {
                println!("{}", f.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Toy { max_size, ratios } => {
            let report = toy_verify(max_size, &ratios)?;
            println!("{report}");
            Ok(status(report.cases.iter().filter(|c| !c.passed()).count()))
        }
        Command::Dynamics {
            n,
            size,
            r_max,
            samples,
            out,
        } => {
            let order = SqueezeOrder::new(n)?;
            let chain = build_squeeze_chain(order, size)?;
            let r = match r_max {
                Some(r_max) => uniform_window(r_max, samples),
                None => default_window(
                    smallest_positive_eigenvalue(&chain, fracsq::eigensolve::DEFAULT_TOL, true)?,
                    samples,
                ),
            };
            let trajectory = evolve_vacuum(&chain, &r)?;
            match &out {
                Some(path) => {
                    let file = File::create(path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    let mut w = BufWriter::new(file);
                    trajectory.write_csv(&mut w)?;
                    w.flush()?;
                }
                None => trajectory.write_csv(io::stdout().lock())?,
            }
            let drift = trajectory
                .norm_of_r
                .iter()
                .map(|v| (v - 1.0).abs())
                .fold(0.0, f64::max);
            eprintln!(
                "photon-number amplitude {:.6e}, max norm drift {drift:.3e}",
                n * trajectory.amplitude
            );
            if size % 2 == 0 {
                let cp = central_eigenpair(&chain, fracsq::eigensolve::DEFAULT_TOL)?;
                eprintln!("2 n <m>_central = {:.6e}", 2.0 * n * cp.m_expect);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
