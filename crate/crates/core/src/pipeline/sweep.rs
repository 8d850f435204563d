use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SweepConfig;
use crate::eigensolve::{central_eigenpair, INVERSE_ITERATION_SEED};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_squeeze_chain, SqueezeOrder};

pub const SWEEP_FILE: &str = "sweep.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SWEEP_HEADER: &str = "n,N,e_min,m_expect,residual,bisection_steps,wall_time_ms,status";

/// One `(n, N)` cell of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: f64,
    pub size: usize,
    pub e_min: f64,
    pub m_expect: f64,
    pub residual: f64,
    pub bisection_steps: usize,
    pub wall_time_ms: f64,
    /// `"ok"` or an error description.
    pub status: String,
}

impl SweepRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn key(&self) -> (u64, usize) {
        (grid_key(self.n), self.size)
    }

    fn to_csv_line(&self) -> String {
        format!(
            "{:.16e},{},{:.16e},{:.16e},{:.16e},{},{:.3},{}",
            self.n,
            self.size,
            self.e_min,
            self.m_expect,
            self.residual,
            self.bisection_steps,
            self.wall_time_ms,
            self.status
        )
    }
}

/// Total-order key for grid values (non-negative, so bit order is numeric order).
fn grid_key(n: f64) -> u64 {
    n.to_bits()
}

pub fn compute_cell(n: f64, size: usize, tol: f64) -> SweepRecord {
    let start = Instant::now();
    let outcome = SqueezeOrder::new(n)
        .and_then(|order| build_squeeze_chain(order, size))
        .and_then(|chain| central_eigenpair(&chain, tol));
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok(cp) => SweepRecord {
            n,
            size,
            e_min: cp.e_min,
            m_expect: cp.m_expect,
            residual: cp.residual,
            bisection_steps: cp.bisection_steps,
            wall_time_ms,
            status: "ok".into(),
        },
        Err(e) => SweepRecord {
            n,
            size,
            e_min: f64::NAN,
            m_expect: f64::NAN,
            residual: f64::NAN,
            bisection_steps: 0,
            wall_time_ms,
            status: format!("error: {e}").replace([',', '\n'], ";"),
        },
    }
}

pub fn write_sweep_csv(path: &Path, records: &[SweepRecord]) -> Result<()> {
    let mut out = String::with_capacity(records.len() * 128);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{}", r.to_csv_line());
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRecord>> {
    if !path.exists() {
        return Err(Error::MissingInput(path.to_path_buf()));
    }
    let text = fs::read_to_string(path)?;
    let file = path.display().to_string();
    let err = |line: usize, message: String| Error::Parse {
        file: file.clone(),
        message: format!("line {line}: {message}"),
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == SWEEP_HEADER => {}
        other => {
            return Err(err(
                1,
                format!("unexpected header {:?}", other.map(|o| o.1)),
            ))
        }
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.splitn(8, ',').collect();
        if f.len() != 8 {
            return Err(err(i + 1, format!("expected 8 fields, got {}", f.len())));
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| err(i + 1, format!("{s:?}: {e}")))
        };
        let int = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| err(i + 1, format!("{s:?}: {e}")))
        };
        records.push(SweepRecord {
            n: num(f[0])?,
            size: int(f[1])?,
            e_min: num(f[2])?,
            m_expect: num(f[3])?,
            residual: num(f[4])?,
            bisection_steps: int(f[5])?,
            wall_time_ms: num(f[6])?,
            status: f[7].trim().to_string(),
        });
    }
    Ok(records)
}

/// Persisted description of a sweep run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact: String,
    pub version: String,
    pub config: SweepConfig,
    pub n_grid: Vec<f64>,
    pub ladder: Vec<usize>,
    pub seed: u64,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub cells: usize,
    pub computed_cells: usize,
    pub failed_cells: usize,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub run_dir: PathBuf,
    pub records: Vec<SweepRecord>,
    pub manifest: RunManifest,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.is_ok()).count()
    }
}

fn unix_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))
}

/// Runs every `(n, N)` cell and writes `sweep.csv` and `manifest.json`.
///
/// Cell failures are recorded in the status column; only configuration and I/O
/// problems abort the run.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let started_unix_ms = unix_ms();
    let run_dir = config.output_dir.clone();
    fs::create_dir_all(&run_dir)?;
    let csv_path = run_dir.join(SWEEP_FILE);

    let cells = config.cells();
    let mut done: BTreeMap<(u64, usize), SweepRecord> = BTreeMap::new();
    if config.resume && csv_path.exists() {
        let wanted: std::collections::BTreeSet<_> =
            cells.iter().map(|&(n, s)| (grid_key(n), s)).collect();
        for r in read_sweep_csv(&csv_path)? {
            if r.is_ok() && wanted.contains(&r.key()) {
                done.insert(r.key(), r);
            }
        }
    }
    let todo: Vec<(f64, usize)> = cells
        .iter()
        .copied()
        .filter(|&(n, s)| !done.contains_key(&(grid_key(n), s)))
        .collect();

    // largest cells first so the tail of the schedule is short
    let mut order = todo.clone();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.total_cmp(&b.0)));
    let pool = thread_pool(config.workers)?;
    let computed: Vec<SweepRecord> = pool.install(|| {
        order
            .par_iter()
            .map(|&(n, size)| compute_cell(n, size, config.tol))
            .collect()
    });
    let computed_cells = computed.len();
    for r in computed {
        done.insert(r.key(), r);
    }
    let records: Vec<SweepRecord> = done.into_values().collect();
    write_sweep_csv(&csv_path, &records)?;

    let manifest = RunManifest {
        artifact: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        n_grid: config.n_grid(),
        ladder: config.ladder(),
        seed: INVERSE_ITERATION_SEED,
        started_unix_ms,
        finished_unix_ms: unix_ms(),
        cells: records.len(),
        computed_cells,
        failed_cells: records.iter().filter(|r| !r.is_ok()).count(),
    };
    fs::write(
        run_dir.join(MANIFEST_FILE),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok(SweepOutcome {
        run_dir,
        records,
        manifest,
    })
}

pub fn read_manifest(run_dir: &Path) -> Result<RunManifest> {
    let path = run_dir.join(MANIFEST_FILE);
    if !path.exists() {
        return Err(Error::MissingInput(path));
    }
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
