use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::analysis::{read_analysis_csv, AnalysisRow, ANALYSIS_DIR, ANALYSIS_FILE};
use super::sweep::{read_sweep_csv, SweepRecord, SWEEP_FILE};
use crate::error::Result;

pub const PLOT_DIR: &str = "plots";
pub const PLOT_SCRIPT: &str = "plot.gp";

/// Orders shown as separate curves in the per-N panels.
const CURVE_ORDERS: [f64; 7] = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0];

struct Panel {
    name: &'static str,
    title: &'static str,
    xlabel: &'static str,
    ylabel: &'static str,
    logx: bool,
    logy: bool,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Panel {
    fn file_name(&self) -> String {
        format!("{}.dat", self.name)
    }

    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.title);
        let _ = writeln!(
            out,
            "# logscale x: {}",
            if self.logx { "yes" } else { "no" }
        );
        let _ = writeln!(
            out,
            "# logscale y: {}",
            if self.logy { "yes" } else { "no" }
        );
        let _ = writeln!(out, "# columns: {}", self.columns.join(" "));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.10e}")).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }

    fn gnuplot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "set output '{}.png'", self.name);
        let _ = writeln!(s, "set title '{}'", self.title.replace('\'', "''"));
        let _ = writeln!(s, "set xlabel '{}'", self.xlabel);
        let _ = writeln!(s, "set ylabel '{}'", self.ylabel);
        s.push_str(if self.logx {
            "set logscale x\n"
        } else {
            "unset logscale x\n"
        });
        s.push_str(if self.logy {
            "set logscale y\n"
        } else {
            "unset logscale y\n"
        });
        let file = self.file_name();
        let curves: Vec<String> = (1..self.columns.len())
            .map(|c| {
                format!(
                    "'{file}' using 1:{} with linespoints title '{}'",
                    c + 1,
                    self.columns[c]
                )
            })
            .collect();
        let _ = writeln!(s, "plot {}\n", curves.join(", \\\n     "));
        s
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

type CellMap<'a> = BTreeMap<(u64, usize), &'a SweepRecord>;

/// Sorted n values, sorted sizes, and successful cells keyed by `(n bits, N)`.
fn grid(records: &[SweepRecord]) -> (Vec<f64>, Vec<usize>, CellMap<'_>) {
    let mut ns: Vec<f64> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    let mut cells = BTreeMap::new();
    for r in records {
        if !ns.iter().any(|&n| close(n, r.n)) {
            ns.push(r.n);
        }
        if !sizes.contains(&r.size) {
            sizes.push(r.size);
        }
        if r.is_ok() {
            cells.insert((r.n.to_bits(), r.size), r);
        }
    }
    ns.sort_by(f64::total_cmp);
    sizes.sort_unstable();
    (ns, sizes, cells)
}

fn per_size_vs_n(
    records: &[SweepRecord],
    pick: impl Fn(&SweepRecord) -> f64,
) -> (Vec<String>, Vec<Vec<f64>>) {
    let (ns, sizes, cells) = grid(records);
    let mut columns = vec!["n".to_string()];
    columns.extend(sizes.iter().map(|s| format!("N={s}")));
    let rows = ns
        .iter()
        .map(|&n| {
            let mut row = vec![n];
            row.extend(
                sizes
                    .iter()
                    .map(|&s| cells.get(&(n.to_bits(), s)).map_or(f64::NAN, |r| pick(r))),
            );
            row
        })
        .collect();
    (columns, rows)
}

fn per_n_vs_size(
    records: &[SweepRecord],
    orders: &[f64],
    pick: impl Fn(&SweepRecord) -> f64,
) -> (Vec<String>, Vec<Vec<f64>>) {
    let (ns, sizes, cells) = grid(records);
    let chosen: Vec<f64> = orders
        .iter()
        .filter_map(|&o| ns.iter().copied().find(|&n| close(n, o)))
        .collect();
    let mut columns = vec!["N".to_string()];
    columns.extend(chosen.iter().map(|n| format!("n={n}")));
    let rows = sizes
        .iter()
        .map(|&s| {
            let mut row = vec![s as f64];
            row.extend(
                chosen
                    .iter()
                    .map(|&n| cells.get(&(n.to_bits(), s)).map_or(f64::NAN, |r| pick(r))),
            );
            row
        })
        .collect();
    (columns, rows)
}

fn analysis_columns(
    rows: &[AnalysisRow],
    names: &[&str],
    pick: impl Fn(&AnalysisRow) -> Vec<f64>,
) -> (Vec<String>, Vec<Vec<f64>>) {
    (
        names.iter().map(|s| s.to_string()).collect(),
        rows.iter()
            .map(|r| {
                let mut v = vec![r.n];
                v.extend(pick(r));
                v
            })
            .collect(),
    )
}

fn panels(records: &[SweepRecord], rows: &[AnalysisRow]) -> Vec<Panel> {
    let fig1b_orders: Vec<f64> = (0..=10).map(|i| 2.0 + 0.1 * i as f64).collect();
    let mut out = Vec::new();

    let (columns, data) = per_size_vs_n(records, |r| r.e_min);
    out.push(Panel {
        name: "fig1a",
        title: "smallest positive eigenvalue vs n, one curve per N",
        xlabel: "n",
        ylabel: "E_min",
        logx: false,
        logy: true,
        columns,
        rows: data,
    });
    let (columns, data) = per_n_vs_size(records, &fig1b_orders, |r| r.e_min);
    out.push(Panel {
        name: "fig1b",
        title: "smallest positive eigenvalue vs N for n = 2..3",
        xlabel: "N",
        ylabel: "E_min",
        logx: true,
        logy: true,
        columns,
        rows: data,
    });
    let (columns, data) = analysis_columns(rows, &["n", "e_inf", "gamma_ref"], |r| {
        vec![r.e_inf_clamped().0, r.gamma_ref]
    });
    out.push(Panel {
        name: "fig2a",
        title: "extrapolated E_min and sqrt(Gamma(n+1)); view with log y for the large-n approach",
        xlabel: "n",
        ylabel: "E_min,inf",
        logx: false,
        logy: false,
        columns,
        rows: data,
    });
    let (columns, data) = analysis_columns(rows, &["n", "alpha_e"], |r| vec![r.alpha_e]);
    out.push(Panel {
        name: "fig2b",
        title: "fitted E_min exponent",
        xlabel: "n",
        ylabel: "alpha",
        logx: false,
        logy: false,
        columns,
        rows: data,
    });
    let (columns, data) = per_size_vs_n(records, |r| r.m_expect);
    out.push(Panel {
        name: "fig3a",
        title: "<m> of the central eigenstate vs n, one curve per N",
        xlabel: "n",
        ylabel: "<m>",
        logx: false,
        logy: true,
        columns,
        rows: data,
    });
    let (columns, data) = per_size_vs_n(records, |r| r.n * r.m_expect);
    out.push(Panel {
        name: "fig3b",
        title: "photon number n<m> of the central eigenstate vs n",
        xlabel: "n",
        ylabel: "n<m>",
        logx: false,
        logy: true,
        columns,
        rows: data,
    });
    let (columns, data) = per_n_vs_size(records, &CURVE_ORDERS, |r| r.m_expect);
    out.push(Panel {
        name: "fig4a",
        title: "<m> vs N",
        xlabel: "N",
        ylabel: "<m>",
        logx: true,
        logy: true,
        columns: columns.clone(),
        rows: data.clone(),
    });
    out.push(Panel {
        name: "fig4b",
        title: "<m> vs N",
        xlabel: "N",
        ylabel: "<m>",
        logx: true,
        logy: false,
        columns,
        rows: data,
    });
    let (columns, data) = analysis_columns(rows, &["n", "A", "B"], |r| {
        let a = if r.n < 4.0 - 1e-9 { r.a_m } else { f64::NAN };
        let b = if r.n > 4.0 + 1e-9 { r.b_m } else { f64::NAN };
        vec![a, b]
    });
    out.push(Panel {
        name: "fig5a",
        title: "<m> fit: prefactor A for n<4 and offset B for n>4",
        xlabel: "n",
        ylabel: "A, B",
        logx: false,
        logy: false,
        columns,
        rows: data,
    });
    let (columns, data) = analysis_columns(rows, &["n", "alpha_m"], |r| vec![r.alpha_m]);
    out.push(Panel {
        name: "fig5b",
        title: "fitted <m> exponent",
        xlabel: "n",
        ylabel: "alpha",
        logx: false,
        logy: false,
        columns,
        rows: data,
    });
    out
}

/// Writes one data file per figure panel plus a gnuplot script into `<run>/plots`.
pub fn emit_plot_data(run_dir: &Path) -> Result<Vec<PathBuf>> {
    let records = read_sweep_csv(&run_dir.join(SWEEP_FILE))?;
    let rows = read_analysis_csv(&run_dir.join(ANALYSIS_DIR).join(ANALYSIS_FILE))?;
    let dir = run_dir.join(PLOT_DIR);
    fs::create_dir_all(&dir)?;
    let mut written = Vec::new();
    let mut script = String::from("# run from this directory: gnuplot plot.gp\nset terminal pngcairo size 800,600\nset key outside\n\n");
    for panel in panels(&records, &rows) {
        let path = dir.join(panel.file_name());
        fs::write(&path, panel.render())?;
        written.push(path);
        script.push_str(&panel.gnuplot());
    }
    let script_path = dir.join(PLOT_SCRIPT);
    fs::write(&script_path, script)?;
    written.push(script_path);
    Ok(written)
}
