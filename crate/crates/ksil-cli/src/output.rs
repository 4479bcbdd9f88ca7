//! File writers and human-readable table rendering for the CLI. The human
//! tables show the same numbers the JSON report carries.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use ksil_core::evaluation::PairedComparison;
use ksil_core::{ApproxEvalRow, ComparisonReport, Error};

use crate::CmdError;

/// "+X.XX% (p=...)" when the paired test is significant, a dash otherwise.
fn render_paired(cmp: &PairedComparison) -> String {
    match (&cmp.wilcoxon, cmp.mean_relative_improvement_pct) {
        (Some(test), improvement) if cmp.significant => {
            let imp = improvement
                .map(|v| format!("{v:+.2}%"))
                .unwrap_or_else(|| "signif.".into());
            format!("{imp} (p={:.2e})", test.p_value)
        }
        (Some(test), _) => format!("- (p={:.2e})", test.p_value),
        (None, _) => "- (all ties)".into(),
    }
}

pub fn write_labels_csv(path: &Path, assignments: &[usize]) -> Result<(), CmdError> {
    let file = File::create(path).map_err(Error::Io)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "index,cluster").map_err(Error::Io)?;
    for (i, c) in assignments.iter().enumerate() {
        writeln!(w, "{i},{c}").map_err(Error::Io)?;
    }
    w.flush().map_err(Error::Io)?;
    Ok(())
}

pub fn write_centroids_csv(path: &Path, centroids: &[Vec<f64>]) -> Result<(), CmdError> {
    let file = File::create(path).map_err(Error::Io)?;
    let mut w = BufWriter::new(file);
    write!(w, "cluster").map_err(Error::Io)?;
    for j in 0..centroids.first().map(Vec::len).unwrap_or(0) {
        write!(w, ",f{j}").map_err(Error::Io)?;
    }
    writeln!(w).map_err(Error::Io)?;
    for (c, centroid) in centroids.iter().enumerate() {
        write!(w, "{c}").map_err(Error::Io)?;
        for v in centroid {
            write!(w, ",{v}").map_err(Error::Io)?;
        }
        writeln!(w).map_err(Error::Io)?;
    }
    w.flush().map_err(Error::Io)?;
    Ok(())
}

pub fn write_approx_csv(path: &Path, rows: &[ApproxEvalRow]) -> Result<(), CmdError> {
    let file = File::create(path).map_err(Error::Io)?;
    let mut w = BufWriter::new(file);
    writeln!(
        w,
        "dataset,n,d,k,rho_apr,rho_aps,exact_micro,exact_macro,apr_micro,apr_macro,aps_micro,aps_macro"
    )
    .map_err(Error::Io)?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.dataset,
            r.n,
            r.dim,
            r.k,
            r.spearman_apr,
            r.spearman_aps,
            r.exact_micro,
            r.exact_macro,
            r.apr_micro,
            r.apr_macro,
            r.aps_micro,
            r.aps_macro
        )
        .map_err(Error::Io)?;
    }
    w.flush().map_err(Error::Io)?;
    Ok(())
}

pub fn render_approx_table(rows: &[ApproxEvalRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<18} {:>5} {:>3} {:>2}  {:>8} {:>8}  {:>8} {:>8}  {:>8} {:>8}  {:>8} {:>8}",
        "dataset",
        "n",
        "d",
        "k",
        "rho_apr",
        "rho_aps",
        "ex_Sm",
        "ex_SM",
        "apr_Sm",
        "apr_SM",
        "aps_Sm",
        "aps_SM"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<18} {:>5} {:>3} {:>2}  {:>8.4} {:>8.4}  {:>8.4} {:>8.4}  {:>8.4} {:>8.4}  {:>8.4} {:>8.4}",
            r.dataset,
            r.n,
            r.dim,
            r.k,
            r.spearman_apr,
            r.spearman_aps,
            r.exact_micro,
            r.exact_macro,
            r.apr_micro,
            r.apr_macro,
            r.aps_micro,
            r.aps_macro
        );
    }
    out
}

pub fn render_bench_report(report: &ComparisonReport) -> String {
    let mut out = String::new();
    let k_span = format!(
        "{}..{}",
        report.k_values.first().copied().unwrap_or(0),
        report.k_values.last().copied().unwrap_or(0)
    );
    let _ = writeln!(
        out,
        "dataset: {} (n={}, d={})  objective: {}  k: {}  trials: {}  seed: {}",
        report.dataset, report.n, report.dim, report.objective, k_span, report.trials, report.seed
    );
    let _ = writeln!(out, "candidate: {}", report.algorithms[0]);
    let _ = writeln!(out);
    let gt = report
        .ground_truth_k
        .map(|k| format!("at k_GT={k}"))
        .unwrap_or_else(|| "at k_GT".into());
    let _ = writeln!(out, "{:<16} {:>24} {:>24}", "baseline", "across k", gt);
    for cmp in &report.comparisons {
        let _ = writeln!(
            out,
            "{:<16} {:>24} {:>24}",
            cmp.baseline,
            render_paired(&cmp.across_k),
            cmp.at_ground_truth_k
                .as_ref()
                .map(render_paired)
                .unwrap_or_else(|| "n/a".into())
        );
    }
    if !report.nmi.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "NMI at k={} (mean, 95% t-CI over {} trials):",
            report.ground_truth_k.unwrap_or(0),
            report.trials
        );
        for s in &report.nmi {
            let _ = writeln!(
                out,
                "  {:<16} {:.4} [{:.4}, {:.4}]",
                s.algorithm, s.mean, s.ci_low, s.ci_high
            );
        }
    }
    // Mean per-k scores of every algorithm, the raw material of the tables.
    let _ = writeln!(out);
    let mut header = format!("{:<16}", "mean score");
    for k in &report.k_values {
        let _ = write!(header, " {:>8}", format!("k={k}"));
    }
    let _ = writeln!(out, "{header}");
    for algo in &report.scores {
        let mut line = format!("{:<16}", algo.algorithm);
        for per_k in &algo.per_k {
            let mean = per_k.trial_scores.iter().sum::<f64>() / per_k.trial_scores.len() as f64;
            let _ = write!(line, " {mean:>8.4}");
        }
        let _ = writeln!(out, "{line}");
    }
    out
}
