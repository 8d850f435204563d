use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sweep::{read_sweep_csv, SweepRecord, SWEEP_FILE};
use crate::error::{Error, Result};
use crate::gamma::log_gamma;
use crate::scaling::{fit_line_with_root, fit_power_offset, select_model, LineFit, ScalingModel};

pub const ANALYSIS_DIR: &str = "analysis";
pub const ANALYSIS_FILE: &str = "analysis.csv";
pub const ALPHA_LINES_FILE: &str = "alpha_lines.json";
pub const ANALYSIS_HEADER: &str =
    "n,e_inf,de,alpha_e,sse_e,e_converged,model_m,a_m,alpha_m,b_m,sse_m,\
m_converged,log_a_m,log_b_m,score_gap_m,gamma_ref,stirling_ref,status";

/// Fit results for one squeezing order.
///
/// `a_m`, `alpha_m` and `b_m` always come from the power-law fit of `<m>`;
/// `model_m` names the law preferred by model selection, whose logarithmic
/// alternative `log_a_m + log_b_m ln N` is kept alongside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRow {
    pub n: f64,
    pub e_inf: f64,
    pub de: f64,
    pub alpha_e: f64,
    pub sse_e: f64,
    pub e_converged: bool,
    pub model_m: String,
    pub a_m: f64,
    pub alpha_m: f64,
    pub b_m: f64,
    pub sse_m: f64,
    pub m_converged: bool,
    pub log_a_m: f64,
    pub log_b_m: f64,
    /// Power-law score minus logarithmic score; positive favours the logarithm.
    pub score_gap_m: f64,
    pub gamma_ref: f64,
    pub stirling_ref: f64,
    pub status: String,
}

impl AnalysisRow {
    /// `max(e_inf, 0)` and whether clamping was needed.
    pub fn e_inf_clamped(&self) -> (f64, bool) {
        if self.e_inf < 0.0 {
            (0.0, true)
        } else {
            (self.e_inf, false)
        }
    }

    fn to_csv_line(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            self.n,
            self.e_inf,
            self.de,
            self.alpha_e,
            self.sse_e,
            self.e_converged,
            self.model_m,
            self.a_m,
            self.alpha_m,
            self.b_m,
            self.sse_m,
            self.m_converged,
            self.log_a_m,
            self.log_b_m,
            self.score_gap_m,
            self.gamma_ref,
            self.stirling_ref,
            self.status
        )
    }
}

/// `√Γ(n + 1)`, the first coupling of the chain.
pub fn gamma_reference(n: f64) -> f64 {
    log_gamma(n + 1.0)
        .map(|v| (0.5 * v).exp())
        .unwrap_or(f64::NAN)
}

/// Stirling's approximation `√(2πn) (n/e)^n` of `Γ(n + 1)`; undefined at `n = 0`.
pub fn stirling_reference(n: f64) -> f64 {
    if n > 0.0 {
        (2.0 * std::f64::consts::PI * n).sqrt() * (n / std::f64::consts::E).powf(n)
    } else {
        f64::NAN
    }
}

/// Closed n intervals over which α(n) is fitted by a straight line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaWindows {
    pub e: Vec<(f64, f64)>,
    pub m: Vec<(f64, f64)>,
}

impl Default for AlphaWindows {
    fn default() -> Self {
        Self {
            e: vec![(0.5, 1.5), (2.5, 3.5)],
            m: vec![(2.5, 3.5), (4.5, 5.5)],
        }
    }
}

impl FromStr for AlphaWindows {
    type Err = Error;

    /// Parses `e=0.5:1.5,2.5:3.5;m=2.5:3.5,4.5:5.5`; an omitted group keeps its default.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Config(format!("alpha windows {s:?}: {msg}"));
        let mut out = AlphaWindows::default();
        for group in s.split(';').map(str::trim).filter(|g| !g.is_empty()) {
            let (name, list) = group
                .split_once('=')
                .ok_or_else(|| bad(format!("group {group:?} lacks '='")))?;
            let windows = list
                .split(',')
                .map(|w| {
                    let (a, b) = w
                        .split_once(':')
                        .ok_or_else(|| bad(format!("window {w:?} must look like lo:hi")))?;
                    let a: f64 = a.trim().parse().map_err(|e| bad(format!("{a:?}: {e}")))?;
                    let b: f64 = b.trim().parse().map_err(|e| bad(format!("{b:?}: {e}")))?;
                    if !(a < b) {
                        return Err(bad(format!("window {w:?} is empty")));
                    }
                    Ok((a, b))
                })
                .collect::<Result<Vec<_>>>()?;
            match name.trim() {
                "e" => out.e = windows,
                "m" => out.m = windows,
                other => return Err(bad(format!("unknown group {other:?}"))),
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowLine {
    pub window: (f64, f64),
    pub points: usize,
    pub line: Option<LineFit>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaLines {
    pub e: Vec<WindowLine>,
    pub m: Vec<WindowLine>,
}

#[derive(Clone, Debug)]
pub struct AnalysisOutcome {
    pub dir: PathBuf,
    pub rows: Vec<AnalysisRow>,
    pub lines: AlphaLines,
}

impl AnalysisOutcome {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.status != "ok").count()
    }

    pub fn row(&self, n: f64) -> Option<&AnalysisRow> {
        self.rows.iter().find(|r| (r.n - n).abs() < 1e-9)
    }
}

/// Ladders of successful cells grouped by n, each sorted by N.
pub fn ladders(records: &[SweepRecord]) -> BTreeMap<u64, Vec<&SweepRecord>> {
    let mut out: BTreeMap<u64, Vec<&SweepRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        out.entry(r.n.to_bits()).or_default().push(r);
    }
    for v in out.values_mut() {
        v.sort_by_key(|r| r.size);
    }
    out
}

pub fn analyze_ladder(n: f64, cells: &[&SweepRecord]) -> AnalysisRow {
    let e_pts: Vec<(f64, f64)> = cells.iter().map(|r| (r.size as f64, r.e_min)).collect();
    let m_pts: Vec<(f64, f64)> = cells.iter().map(|r| (r.size as f64, r.m_expect)).collect();
    let mut problems = Vec::new();
    let mut row = AnalysisRow {
        n,
        e_inf: f64::NAN,
        de: f64::NAN,
        alpha_e: f64::NAN,
        sse_e: f64::NAN,
        e_converged: false,
        model_m: String::new(),
        a_m: f64::NAN,
        alpha_m: f64::NAN,
        b_m: f64::NAN,
        sse_m: f64::NAN,
        m_converged: false,
        log_a_m: f64::NAN,
        log_b_m: f64::NAN,
        score_gap_m: f64::NAN,
        gamma_ref: gamma_reference(n),
        stirling_ref: stirling_reference(n),
        status: String::new(),
    };
    match fit_power_offset(&e_pts) {
        Ok(f) => {
            row.e_inf = f.offset;
            row.de = f.prefactor;
            row.alpha_e = f.exponent.unwrap_or(f64::NAN);
            row.sse_e = f.sse;
            row.e_converged = f.converged;
            if !f.converged {
                problems.push("e fit at bracket edge".to_string());
            }
        }
        Err(e) => problems.push(format!("e fit: {e}")),
    }
    match select_model(&m_pts) {
        Ok((chosen, diag)) => {
            row.model_m = chosen.model.as_str().into();
            row.a_m = diag.power.prefactor;
            row.alpha_m = diag.power.exponent.unwrap_or(f64::NAN);
            row.b_m = diag.power.offset;
            row.sse_m = diag.power.sse;
            row.m_converged = diag.power.converged;
            row.log_a_m = diag.log.offset;
            row.log_b_m = diag.log.prefactor;
            row.score_gap_m = diag.score_gap;
            if !diag.power.converged && chosen.model == ScalingModel::PowerOffset {
                problems.push("m fit at bracket edge".to_string());
            }
        }
        Err(e) => problems.push(format!("m fit: {e}")),
    }
    row.status = if problems.is_empty() {
        "ok".into()
    } else {
        problems.join("; ").replace(',', ";")
    };
    row
}

fn window_line(
    rows: &[AnalysisRow],
    window: (f64, f64),
    pick: impl Fn(&AnalysisRow) -> Option<f64>,
) -> WindowLine {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n >= window.0 - 1e-9 && r.n <= window.1 + 1e-9)
        .filter_map(|r| pick(r).filter(|v| v.is_finite()).map(|v| (r.n, v)))
        .collect();
    match fit_line_with_root(&pts) {
        Ok(line) => WindowLine {
            window,
            points: pts.len(),
            line: Some(line),
            error: None,
        },
        Err(e) => WindowLine {
            window,
            points: pts.len(),
            line: None,
            error: Some(e.to_string()),
        },
    }
}

/// Straight-line fits of α_E(n) and α_m(n) over the configured windows.
pub fn alpha_lines(rows: &[AnalysisRow], windows: &AlphaWindows) -> AlphaLines {
    let e_pick = |r: &AnalysisRow| r.e_converged.then_some(r.alpha_e);
    let m_pick = |r: &AnalysisRow| r.m_converged.then_some(r.alpha_m);
    AlphaLines {
        e: windows
            .e
            .iter()
            .map(|&w| window_line(rows, w, e_pick))
            .collect(),
        m: windows
            .m
            .iter()
            .map(|&w| window_line(rows, w, m_pick))
            .collect(),
    }
}

pub fn analyze_records(
    records: &[SweepRecord],
    windows: &AlphaWindows,
) -> (Vec<AnalysisRow>, AlphaLines) {
    let rows: Vec<AnalysisRow> = ladders(records)
        .into_values()
        .map(|cells| analyze_ladder(cells[0].n, &cells))
        .collect();
    let lines = alpha_lines(&rows, windows);
    (rows, lines)
}

pub fn write_analysis_csv(path: &Path, rows: &[AnalysisRow]) -> Result<()> {
    let mut out = String::new();
    out.push_str(ANALYSIS_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.to_csv_line());
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_analysis_csv(path: &Path) -> Result<Vec<AnalysisRow>> {
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
        Some((_, h)) if h.trim() == ANALYSIS_HEADER => {}
        _ => return Err(err(1, "unexpected header".into())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.filter(|(_, l)| !l.trim().is_empty()) {
        let f: Vec<&str> = line.splitn(18, ',').collect();
        if f.len() != 18 {
            return Err(err(i + 1, format!("expected 18 fields, got {}", f.len())));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| err(i + 1, format!("{s:?}: {e}")))
        };
        let flag = |s: &str| {
            s.parse::<bool>()
                .map_err(|e| err(i + 1, format!("{s:?}: {e}")))
        };
        rows.push(AnalysisRow {
            n: num(f[0])?,
            e_inf: num(f[1])?,
            de: num(f[2])?,
            alpha_e: num(f[3])?,
            sse_e: num(f[4])?,
            e_converged: flag(f[5])?,
            model_m: f[6].to_string(),
            a_m: num(f[7])?,
            alpha_m: num(f[8])?,
            b_m: num(f[9])?,
            sse_m: num(f[10])?,
            m_converged: flag(f[11])?,
            log_a_m: num(f[12])?,
            log_b_m: num(f[13])?,
            score_gap_m: num(f[14])?,
            gamma_ref: num(f[15])?,
            stirling_ref: num(f[16])?,
            status: f[17].to_string(),
        });
    }
    Ok(rows)
}

/// Fits every ladder of a finished run and writes `analysis/analysis.csv` and
/// `analysis/alpha_lines.json`.
pub fn analyze_run(run_dir: &Path, windows: &AlphaWindows) -> Result<AnalysisOutcome> {
    let records = read_sweep_csv(&run_dir.join(SWEEP_FILE))?;
    let (rows, lines) = analyze_records(&records, windows);
    let dir = run_dir.join(ANALYSIS_DIR);
    fs::create_dir_all(&dir)?;
    write_analysis_csv(&dir.join(ANALYSIS_FILE), &rows)?;
    fs::write(
        dir.join(ALPHA_LINES_FILE),
        serde_json::to_string_pretty(&lines)?,
    )?;
    Ok(AnalysisOutcome { dir, rows, lines })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parsing() {
        let w: AlphaWindows = "e=0.4:1.4;m=2:3,4:5".parse().unwrap();
        assert_eq!(w.e, vec![(0.4, 1.4)]);
        assert_eq!(w.m, vec![(2.0, 3.0), (4.0, 5.0)]);
        let only_m: AlphaWindows = "m=1:2".parse().unwrap();
        assert_eq!(only_m.e, AlphaWindows::default().e);
        assert!("x=1:2".parse::<AlphaWindows>().is_err());
        assert!("e=2:1".parse::<AlphaWindows>().is_err());
        assert!("e=1-2".parse::<AlphaWindows>().is_err());
    }

    #[test]
    fn references() {
        assert!((gamma_reference(6.0) - 720f64.sqrt()).abs() < 1e-12);
        assert!(stirling_reference(0.0).is_nan());
        // Stirling undershoots Γ(n+1) by about 1/(12n)
        let ratio = stirling_reference(6.0) / 720.0;
        assert!((ratio - (1.0 - 1.0 / 72.0)).abs() < 1e-3);
    }

    #[test]
    fn short_ladder_is_flagged() {
        let cells: Vec<SweepRecord> = [250, 500, 1000]
            .iter()
            .map(|&s| super::super::sweep::compute_cell(3.0, s, 1e-12))
            .collect();
        let refs: Vec<&SweepRecord> = cells.iter().collect();
        let row = analyze_ladder(3.0, &refs);
        assert!(row.status.contains("e fit"), "{}", row.status);
        assert!(row.e_inf.is_nan());
    }
}
