//! Rendering of run reports into flat tables.
//!
//! Two formats: `delimited-text` flattens the report into comma-separated
//! rows for plotting, `structured-text` dumps the full nested report as
//! pretty JSON. Delimited tables always start with `#` comment lines
//! documenting the columns, then a header row; lines end with LF and
//! every emitted field is free of commas, so no quoting is needed.
//!
//! Reports containing a hull-family check render as a member table (one
//! row per truncation level); everything else renders in a long format
//! keyed by check, instance, item, and metric.

use crate::scenario::{CheckDetail, RunReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    DelimitedText,
    StructuredText,
}

impl TableFormat {
    pub fn parse(s: &str) -> Option<TableFormat> {
        match s {
            "delimited-text" => Some(TableFormat::DelimitedText),
            "structured-text" => Some(TableFormat::StructuredText),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TableFormat::DelimitedText => "delimited-text",
            TableFormat::StructuredText => "structured-text",
        }
    }
}

/// Renders a report in the requested format.
pub fn emit_table(report: &RunReport, format: TableFormat) -> String {
    match format {
        TableFormat::StructuredText => {
            let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
            s.push('\n');
            s
        }
        TableFormat::DelimitedText => {
            if has_hull_family(report) {
                hull_table(report)
            } else {
                long_table(report)
            }
        }
    }
}

fn has_hull_family(report: &RunReport) -> bool {
    report.checks.iter().any(|c| {
        c.instances
            .iter()
            .any(|i| matches!(i.detail, CheckDetail::HullFamily { .. }))
    })
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

/// One row per family member: truncation dimension, distance from the
/// origin, and the gap from this member's minimizer to the closest
/// earlier one (blank for the first member).
fn hull_table(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("# scenario: {}\n", report.scenario));
    out.push_str("# columns: dim = truncation dimension N; distance = d(0, K_N) in the ");
    out.push_str("scenario norm;\n");
    out.push_str("#          min_gap_to_earlier = min ambient distance from the N-th ");
    out.push_str("minimizer to every earlier minimizer (blank on the first row)\n");
    out.push_str("dim,distance,min_gap_to_earlier\n");
    for check in &report.checks {
        for inst in &check.instances {
            if let CheckDetail::HullFamily { report } = &inst.detail {
                for row in &report.members {
                    let gap = row.min_gap_to_earlier.map(fmt).unwrap_or_default();
                    out.push_str(&format!("{},{},{}\n", row.dim, fmt(row.distance), gap));
                }
            }
        }
    }
    out
}

fn push_row(out: &mut String, check: &str, instance: &str, item: &str, metric: &str, value: &str) {
    out.push_str(&format!("{check},{instance},{item},{metric},{value}\n"));
}

/// Long-format table: distance trends, residuals, moduli, and verdicts,
/// one `(check, instance, item, metric, value)` row each.
fn long_table(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("# scenario: {}\n", report.scenario));
    out.push_str("# columns: check = check kind; instance = set instance label; item = probe/");
    out.push_str("strategy/norm the row describes;\n");
    out.push_str("#          metric = measured quantity; value = number, boolean, or label\n");
    out.push_str("check,instance,item,metric,value\n");
    for check in &report.checks {
        for inst in &check.instances {
            let c = check.kind.as_str();
            let l = inst.instance.as_str();
            match &inst.detail {
                CheckDetail::Distance { per_probe } => {
                    for (j, row) in per_probe.iter().enumerate() {
                        let item = format!("probe{j}");
                        push_row(&mut out, c, l, &item, "distance", &fmt(row.distance));
                        if let Some(g) = row.certified_gap {
                            push_row(&mut out, c, l, &item, "certified_gap", &fmt(g));
                        }
                        push_row(
                            &mut out,
                            c,
                            l,
                            &item,
                            "converged",
                            &row.converged.to_string(),
                        );
                    }
                }
                CheckDetail::BestApproximations { per_probe } => {
                    for (j, r) in per_probe.iter().enumerate() {
                        let item = format!("probe{j}");
                        push_row(&mut out, c, l, &item, "distance", &fmt(r.distance));
                        push_row(
                            &mut out,
                            c,
                            l,
                            &item,
                            "cluster_count",
                            &r.cluster_count.to_string(),
                        );
                        push_row(
                            &mut out,
                            c,
                            l,
                            &item,
                            "cluster_diameter",
                            &fmt(r.cluster_diameter),
                        );
                        push_row(&mut out, c, l, &item, "unique", &r.unique.to_string());
                    }
                }
                CheckDetail::Chebyshev { report } => {
                    for (j, p) in report.per_point.iter().enumerate() {
                        let item = format!("probe{j}");
                        push_row(&mut out, c, l, &item, "distance", &fmt(p.distance));
                        push_row(
                            &mut out,
                            c,
                            l,
                            &item,
                            "cluster_diameter",
                            &fmt(p.cluster_diameter),
                        );
                        push_row(&mut out, c, l, &item, "unique", &p.unique.to_string());
                    }
                    let verdict = match &report.verdict {
                        crate::projection::MultiplicityVerdict::ChebyshevEvidence { .. } => {
                            "chebyshev_evidence"
                        }
                        crate::projection::MultiplicityVerdict::ProximinalNotUnique { .. } => {
                            "proximinal_not_unique"
                        }
                        crate::projection::MultiplicityVerdict::NotProximinalEvidence {
                            ..
                        } => "not_proximinal_evidence",
                    };
                    push_row(&mut out, c, l, "batch", "verdict", verdict);
                }
                CheckDetail::Sequences { per_probe } => {
                    for (j, study) in per_probe.iter().enumerate() {
                        for rep in &study.reports {
                            let item = format!("probe{j}.{}", rep.strategy.label());
                            push_row(
                                &mut out,
                                c,
                                l,
                                &item,
                                "tail_diameter",
                                &fmt(rep.tail_diameter),
                            );
                            let converged = matches!(
                                rep.verdict,
                                crate::projection::SubsequenceVerdict::SubsequenceConverges { .. }
                            );
                            push_row(
                                &mut out,
                                c,
                                l,
                                &item,
                                "subsequence_converges",
                                &converged.to_string(),
                            );
                        }
                        let item = format!("probe{j}");
                        push_row(
                            &mut out,
                            c,
                            l,
                            &item,
                            "final_spread",
                            &fmt(study.final_spread),
                        );
                    }
                }
                CheckDetail::RayAlignment { per_probe } => {
                    for (j, r) in per_probe.iter().enumerate() {
                        let item = format!("probe{j}");
                        push_row(&mut out, c, l, &item, "distance", &fmt(r.distance));
                        push_row(&mut out, c, l, &item, "max_residual", &fmt(r.max_residual));
                        push_row(&mut out, c, l, &item, "threshold", &fmt(r.threshold));
                        push_row(&mut out, c, l, &item, "pass", &r.pass.to_string());
                    }
                }
                CheckDetail::Frechet { per_probe } => {
                    for (j, v) in per_probe.iter().enumerate() {
                        let item = format!("probe{j}");
                        push_row(&mut out, c, l, &item, "uniform", &v.uniform.to_string());
                        push_row(
                            &mut out,
                            c,
                            l,
                            &item,
                            "gradient_dual_norm",
                            &fmt(v.gradient_dual_norm),
                        );
                        for ((eps, delta), residual) in
                            v.epsilon_grid.iter().zip(&v.deltas).zip(&v.residuals)
                        {
                            push_row(&mut out, c, l, &item, &format!("delta@{eps}"), &fmt(*delta));
                            push_row(
                                &mut out,
                                c,
                                l,
                                &item,
                                &format!("residual@{eps}"),
                                &fmt(*residual),
                            );
                        }
                    }
                }
                CheckDetail::Exposure { per_probe } => {
                    for (j, r) in per_probe.iter().enumerate() {
                        let item = format!("probe{j}");
                        push_row(&mut out, c, l, &item, "exposes", &r.exposes.to_string());
                        for (level, diam) in r.levels.iter().zip(&r.superlevel_diameters) {
                            push_row(
                                &mut out,
                                c,
                                l,
                                &item,
                                &format!("superlevel_diameter@{level}"),
                                &fmt(*diam),
                            );
                        }
                    }
                }
                CheckDetail::ExposureConvergence { per_probe } => {
                    for (j, r) in per_probe.iter().enumerate() {
                        let item = format!("probe{j}");
                        push_row(
                            &mut out,
                            c,
                            l,
                            &item,
                            "hypotheses_hold",
                            &r.hypotheses_hold.to_string(),
                        );
                        if let Some(h) = &r.failing_hypothesis {
                            push_row(&mut out, c, l, &item, "failing_hypothesis", h);
                        }
                        push_row(&mut out, c, l, &item, "final_spread", &fmt(r.final_spread));
                        push_row(
                            &mut out,
                            c,
                            l,
                            &item,
                            "sequences_agree",
                            &r.sequences_agree.to_string(),
                        );
                        for o in &r.outcomes {
                            let item = format!("probe{j}.{}", o.strategy.label());
                            push_row(
                                &mut out,
                                c,
                                l,
                                &item,
                                "tail_diameter",
                                &fmt(o.tail_diameter),
                            );
                            push_row(&mut out, c, l, &item, "limit_value", &fmt(o.limit_value));
                        }
                    }
                }
                CheckDetail::Continuity { per_probe } => {
                    for (j, r) in per_probe.iter().enumerate() {
                        let item = format!("probe{j}");
                        push_row(
                            &mut out,
                            c,
                            l,
                            &item,
                            "modulus_estimate",
                            &fmt(r.modulus_estimate),
                        );
                        if let Some(w) = &r.discontinuity_witness {
                            push_row(&mut out, c, l, &item, "jump_ratio", &fmt(w.ratio));
                            push_row(
                                &mut out,
                                c,
                                l,
                                &item,
                                "projection_jump",
                                &fmt(w.projection_jump),
                            );
                        }
                    }
                }
                CheckDetail::Lipschitz { report } => {
                    push_row(&mut out, c, l, "pairs", "max_ratio", &fmt(report.max_ratio));
                }
                CheckDetail::Convexity { entries } => {
                    for e in entries {
                        push_row(
                            &mut out,
                            c,
                            l,
                            &e.label,
                            "strictness_witness",
                            &e.witness.is_some().to_string(),
                        );
                        if let Some(w) = &e.witness {
                            push_row(
                                &mut out,
                                c,
                                l,
                                &e.label,
                                "midpoint_norm",
                                &fmt(w.midpoint_norm),
                            );
                        }
                        for m in &e.modulus {
                            push_row(
                                &mut out,
                                c,
                                l,
                                &e.label,
                                &format!("delta@{}", m.eps),
                                &fmt(m.delta),
                            );
                        }
                    }
                }
                CheckDetail::HullFamily { report } => {
                    for row in &report.members {
                        push_row(&mut out, c, l, &row.label, "distance", &fmt(row.distance));
                    }
                }
            }
        }
    }
    out
}
