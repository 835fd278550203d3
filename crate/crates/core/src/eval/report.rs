use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

/// Headline metrics, all percentages in `[0, 100]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub fr_top3: f64,
    pub fr_top5: f64,
    pub f_top1: f64,
    pub f_top3: f64,
    pub f_top5: f64,
    /// Per-font recall (percent) keyed by k.
    pub per_font_recall: BTreeMap<usize, Vec<f64>>,
}

impl EvalReport {
    /// Metrics in column order: FR@3, FR@5, F@1, F@3, F@5.
    pub fn headline(&self) -> [f64; 5] {
        [self.fr_top3, self.fr_top5, self.f_top1, self.f_top3, self.f_top5]
    }

    /// Element-wise mean of several reports.
    pub fn mean(reports: &[EvalReport]) -> Option<EvalReport> {
        let n = reports.len() as f64;
        let first = reports.first()?;
        let avg = |f: fn(&EvalReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
        let per_font_recall = first
            .per_font_recall
            .iter()
            .map(|(k, v)| {
                let mean = (0..v.len())
                    .map(|i| reports.iter().map(|r| r.per_font_recall[k][i]).sum::<f64>() / n)
                    .collect();
                (*k, mean)
            })
            .collect();
        Some(EvalReport {
            fr_top3: avg(|r| r.fr_top3),
            fr_top5: avg(|r| r.fr_top5),
            f_top1: avg(|r| r.f_top1),
            f_top3: avg(|r| r.f_top3),
            f_top5: avg(|r| r.f_top5),
            per_font_recall,
        })
    }
}

const COLUMNS: [&str; 5] = ["FR Top3", "FR Top5", "F-Top1", "F-Top3", "F-Top5"];

/// Aligned text table, one row per named report.
pub fn render_table(rows: &[(&str, &EvalReport)]) -> String {
    let name_width = rows
        .iter()
        .map(|(name, _)| name.len())
        .chain(["Model/Evals".len()])
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let _ = write!(out, "{:<name_width$}", "Model/Evals");
    for c in COLUMNS {
        let _ = write!(out, " | {c:>7}");
    }
    out.push('\n');
    out.push_str(&"-".repeat(name_width + COLUMNS.len() * 10));
    out.push('\n');
    for (name, report) in rows {
        let _ = write!(out, "{name:<name_width$}");
        for v in report.headline() {
            let _ = write!(out, " | {v:>7.2}");
        }
        out.push('\n');
    }
    out
}

/// CSV with a header row and one line per named report.
pub fn render_csv(rows: &[(&str, &EvalReport)]) -> String {
    let mut out = String::from("model,fr_top3,fr_top5,f_top1,f_top3,f_top5\n");
    for (name, report) in rows {
        let values: Vec<String> = report.headline().iter().map(|v| format!("{v:.4}")).collect();
        let _ = writeln!(out, "{},{}", name.replace(',', " "), values.join(","));
    }
    out
}
