//! CSV and SVG rendering of simulation results.
//!
//! All numbers are printed with `.` as the decimal separator and 12 decimal
//! places; files use UTF-8 with LF line endings.

use std::fmt::Write as _;

use crate::asymptotics::{
    limit_hellinger_risk_flat, limit_hellinger_risk_grenander, limit_l2_risk_flat,
    limit_l2_risk_grenander,
};
use crate::pmf::FlatSpec;
use crate::simulate::{BoxStats, EstimatorKind, MetricKind, RiskSummary};
use crate::{Pmf, Result};

/// Fixed-point rendering with 12 decimal places, locale independent.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.12}")
}

/// One row per (estimator, metric, sample size, replicate), with both the raw
/// loss and the `n`-scaled loss.
pub fn losses_csv(summaries: &[RiskSummary]) -> String {
    let mut out = String::from("estimator,metric,sample_size,replicate,loss,n_loss\n");
    for s in summaries {
        let n = s.sample_size as f64;
        for (rep, &loss) in s.losses.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                s.estimator,
                s.metric,
                s.sample_size,
                rep,
                fmt_num(loss),
                fmt_num(n * loss)
            );
        }
    }
    out
}

/// One row per (estimator, metric, sample size) with boxplot statistics.
///
/// When the true pmf and its flat structure are supplied, an extra
/// `limit_n_loss` column carries the closed-form limit of `E[n·loss]` for the
/// estimator/metric pairs that have one (flat and Grenander under l2 and
/// Hellinger); it is empty otherwise.
pub fn summary_csv(summaries: &[RiskSummary], oracle: Option<(&Pmf, &FlatSpec)>) -> Result<String> {
    let mut out = String::from(
        "estimator,metric,sample_size,mean,min,q1,median,q3,max,whisker_low,whisker_high,mean_n_loss",
    );
    if oracle.is_some() {
        out.push_str(",limit_n_loss");
    }
    out.push('\n');
    for s in summaries {
        let b = &s.stats;
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            s.estimator,
            s.metric,
            s.sample_size,
            fmt_num(b.mean),
            fmt_num(b.min),
            fmt_num(b.q1),
            fmt_num(b.median),
            fmt_num(b.q3),
            fmt_num(b.max),
            fmt_num(b.whisker_low),
            fmt_num(b.whisker_high),
            fmt_num(s.mean_scaled())
        );
        if let Some((p, spec)) = oracle {
            let limit = match (s.estimator, s.metric) {
                (EstimatorKind::Flat, MetricKind::L2) => Some(limit_l2_risk_flat(p, spec)?),
                (EstimatorKind::Flat, MetricKind::Hellinger) => {
                    Some(limit_hellinger_risk_flat(p, spec)?)
                }
                (EstimatorKind::Grenander, MetricKind::L2) => {
                    Some(limit_l2_risk_grenander(p, spec)?)
                }
                (EstimatorKind::Grenander, MetricKind::Hellinger) => {
                    Some(limit_hellinger_risk_grenander(p, spec)?)
                }
                _ => None,
            };
            match limit {
                Some(v) => {
                    let _ = write!(out, ",{}", fmt_num(v));
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// A self-contained SVG with one box-and-whisker glyph per named group.
pub fn svg_boxplot(title: &str, groups: &[(String, BoxStats)]) -> String {
    let width = 120.0 * groups.len() as f64 + 80.0;
    let height = 360.0;
    let left = 60.0;
    let top = 40.0;
    let plot_h = height - top - 50.0;

    let y_max = groups
        .iter()
        .map(|(_, b)| b.max)
        .fold(0.0f64, f64::max)
        .max(1e-12)
        * 1.05;
    let y = |v: f64| top + plot_h * (1.0 - v / y_max);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\" font-size=\"11\">"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">{title}</text>",
        width / 2.0
    );

    // y axis with five ticks
    let _ = writeln!(
        svg,
        "<line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{:.1}\" stroke=\"black\"/>",
        top + plot_h
    );
    for t in 0..=4 {
        let v = y_max * t as f64 / 4.0;
        let yy = y(v);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{yy:.1}\" x2=\"{left}\" y2=\"{yy:.1}\" stroke=\"black\"/>\
             <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{v:.3}</text>",
            left - 4.0,
            left - 8.0,
            yy + 4.0
        );
    }

    for (i, (name, b)) in groups.iter().enumerate() {
        let cx = left + 60.0 + 120.0 * i as f64;
        let half = 30.0;
        // whiskers
        let _ = writeln!(
            svg,
            "<line x1=\"{cx:.1}\" y1=\"{:.1}\" x2=\"{cx:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
            y(b.whisker_high),
            y(b.q3)
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{cx:.1}\" y1=\"{:.1}\" x2=\"{cx:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
            y(b.q1),
            y(b.whisker_low)
        );
        for v in [b.whisker_low, b.whisker_high] {
            let _ = writeln!(
                svg,
                "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
                cx - half / 2.0,
                y(v),
                cx + half / 2.0,
                y(v)
            );
        }
        // box and median
        let _ = writeln!(
            svg,
            "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" \
             fill=\"#d0d0d0\" stroke=\"black\"/>",
            cx - half,
            y(b.q3),
            2.0 * half,
            (y(b.q1) - y(b.q3)).max(0.5)
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\" stroke-width=\"2\"/>",
            cx - half,
            y(b.median),
            cx + half,
            y(b.median)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{cx:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{name}</text>",
            top + plot_h + 18.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
