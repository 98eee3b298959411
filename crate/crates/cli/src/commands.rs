use std::fs;
use std::path::Path;

use redset_core::io::{parse_detector_set, parse_graph, DetectorSetSpec};
use redset_core::periodic::{builtin, builtin_patterns, pattern_search, PatternSearch};
use redset_core::rational::parse_rational;
use redset_core::share_bound::{
    certified_max_share, classify_high_share, Certificate, HighShareReport, PatchConstraint,
};
use redset_core::solver::{
    branch_and_bound_min, brute_force_min, dimacs, Mode, SolveRequest, SolveResult, Status,
};
use redset_core::{DetectionKind, DetectorSet, Graph, PeriodicPattern, Rational, Verdict};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::args::{BoundArgs, Cli, Command, Kind, SearchArgs, ShareArgs, SolveArgs, SolveMode, Subject, VerifyArgs};
use crate::render::{self, PatternJson};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] redset_core::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

/// Command output. `ok` is false for negative answers (invalid, infeasible).
pub struct Report {
    pub ok: bool,
    pub text: String,
}

pub fn run(cli: &Cli) -> Result<Report> {
    let out = Output { json: cli.json, decimal: cli.decimal };
    match &cli.command {
        Command::Verify(a) => verify(a, out),
        Command::Solve(a) => solve(a, out),
        Command::Density(a) => density(a, out),
        Command::Share(a) => share(a, out),
        Command::Bound(a) => bound(a, out),
        Command::Search(a) => search(a, out),
        Command::Builtins => Ok(builtins(out)),
    }
}

#[derive(Clone, Copy)]
struct Output {
    json: bool,
    decimal: bool,
}

impl Output {
    fn q(&self, r: &Rational) -> String {
        render::rational(r, self.decimal)
    }

    fn report(&self, ok: bool, value: &impl Serialize, text: impl FnOnce() -> String) -> Report {
        Report { ok, text: if self.json { render::json(value) } else { text() } }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

enum Loaded {
    Finite { graph: Graph, set: DetectorSetSpec },
    Pattern { name: String, pattern: PeriodicPattern },
}

fn load(subject: &Subject) -> Result<Loaded> {
    if let Some(name) = &subject.builtin {
        let pattern = builtin(name).ok_or_else(|| {
            let names: Vec<&str> = builtin_patterns().iter().map(|(n, _)| *n).collect();
            CliError::Usage(format!("unknown builtin {name:?}; available: {}", names.join(", ")))
        })?;
        return Ok(Loaded::Pattern { name: name.clone(), pattern });
    }
    if let Some(path) = &subject.pattern {
        let pattern: PeriodicPattern = read(path)?.parse()?;
        return Ok(Loaded::Pattern { name: path.display().to_string(), pattern });
    }
    let Some(set_path) = &subject.set else {
        return Err(CliError::Usage("give --builtin, --pattern, or --set (with --graph or an inline graph)".into()));
    };
    let given = match &subject.graph {
        Some(path) => Some(parse_graph(&read(path)?)?),
        None => None,
    };
    let set = parse_detector_set(&read(set_path)?)?;
    let graph = match (given, &set.graph) {
        (Some(graph), _) => graph,
        (None, Some(spec)) => spec.build()?,
        (None, None) => return Err(CliError::Usage("the detector set has no inline graph; pass --graph".into())),
    };
    Ok(Loaded::Finite { graph, set })
}

fn pattern_kind(kind: Option<Kind>) -> Result<DetectionKind> {
    kind.map(Into::into).ok_or_else(|| CliError::Usage("--kind is required for patterns".into()))
}

fn verify(a: &VerifyArgs, out: Output) -> Result<Report> {
    match load(&a.subject)? {
        Loaded::Finite { graph, set } => {
            let kind = a.kind.map_or(set.kind, Into::into);
            let ds = DetectorSet::new(&graph, kind, set.detectors.iter().copied())?;
            let verdict = if a.by_deletion { ds.verify_by_deletion(a.redundancy)? } else { ds.verify(a.redundancy) };
            let value = json!({"kind": kind, "redundancy": a.redundancy, "verdict": verdict});
            Ok(out.report(verdict.is_valid(), &value, || verdict_text(&verdict, |&v| graph.label(v))))
        }
        Loaded::Pattern { name, pattern } => {
            let kind = pattern_kind(a.kind)?;
            let verdict = pattern.verify_infinite(kind, a.redundancy);
            let value = json!({"pattern": name, "kind": kind, "redundancy": a.redundancy, "verdict": verdict});
            Ok(out.report(verdict.is_valid(), &value, || verdict_text(&verdict, |&c| render::cell(c))))
        }
    }
}

fn verdict_text<V>(verdict: &Verdict<V>, name: impl Fn(&V) -> String) -> String {
    match verdict.violation() {
        None => "valid".into(),
        Some(v) => format!("invalid: {}", render::violation(v, name)),
    }
}

fn density(a: &Subject, out: Output) -> Result<Report> {
    let (d, count, cells) = match load(a)? {
        Loaded::Finite { graph, set } => {
            let ds = DetectorSet::new(&graph, set.kind, set.detectors.iter().copied())?;
            (ds.density(), ds.len(), graph.vertex_count())
        }
        Loaded::Pattern { pattern, .. } => (pattern.density(), pattern.detector_count(), pattern.area()),
    };
    let value = json!({"density": d.to_string(), "detectors": count, "cells": cells});
    Ok(out.report(true, &value, || format!("density = {} ({count} of {cells})", out.q(&d))))
}

#[derive(Serialize)]
struct ShareLine {
    detector: String,
    #[serde(serialize_with = "as_str")]
    share: Rational,
}

fn as_str<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

fn share(a: &ShareArgs, out: Output) -> Result<Report> {
    let (lines, kind) = match load(&a.subject)? {
        Loaded::Finite { graph, set } => {
            let kind = a.kind.map_or(set.kind, Into::into);
            let ds = DetectorSet::new(&graph, kind, set.detectors.iter().copied())?;
            let lines = ds
                .members()
                .iter()
                .map(|x| Ok(ShareLine { detector: graph.label(x), share: ds.share(x)? }))
                .collect::<Result<Vec<_>>>()?;
            (lines, kind)
        }
        Loaded::Pattern { pattern, .. } => {
            let kind = pattern_kind(a.kind)?;
            let (cr, cc) = pattern.faithful_copies();
            let lifted = pattern.lift_to_torus(cr, cc)?;
            let ds = lifted.detector_set(kind);
            let lines = pattern
                .detectors()
                .into_iter()
                .map(|(r, c)| {
                    let v = r * lifted.graph.torus_shape().unwrap().cols + c;
                    Ok(ShareLine { detector: render::cell((r as i64, c as i64)), share: ds.share(v)? })
                })
                .collect::<Result<Vec<_>>>()?;
            (lines, kind)
        }
    };
    if lines.is_empty() {
        return Err(CliError::Usage("there are no detectors".into()));
    }
    let average = lines.iter().map(|l| l.share).sum::<Rational>() / lines.len() as i64;
    let value = json!({"kind": kind, "shares": lines, "average": average.to_string(), "density": average.recip().to_string()});
    Ok(out.report(true, &value, || {
        let mut text: Vec<String> = lines.iter().map(|l| format!("{}: {}", l.detector, out.q(&l.share))).collect();
        text.push(format!("average share = {}, 1/average = {}", out.q(&average), out.q(&average.recip())));
        text.join("\n")
    }))
}

fn solve(a: &SolveArgs, out: Output) -> Result<Report> {
    let graph = parse_graph(&read(&a.graph)?)?;
    let mode = match a.mode {
        SolveMode::Exact => Mode::ExactMin,
        SolveMode::All => Mode::FindAllMin,
        SolveMode::Decision => Mode::Decision(a.size.expect("clap requires --size in decision mode")),
    };
    let kind: DetectionKind = a.kind.into();
    let req = SolveRequest::new(&graph, kind, a.redundancy, mode)?;
    if let Some(path) = &a.export_cnf {
        let cnf = dimacs::encode(&req)?;
        fs::write(path, cnf.to_dimacs()).map_err(|source| CliError::Write { path: path.display().to_string(), source })?;
    }
    let result = if a.brute_force { brute_force_min(&req)? } else { branch_and_bound_min(&req)? };
    let value = json!({"kind": kind, "redundancy": a.redundancy, "request": mode, "result": result});
    Ok(out.report(result.is_feasible(), &value, || solve_text(&graph, &result)))
}

fn solve_text(graph: &Graph, result: &SolveResult) -> String {
    let status = match result.status {
        Status::Optimal => "optimal",
        Status::Feasible => "feasible",
        Status::Infeasible => "infeasible",
    };
    let mut lines = vec![match result.size {
        Some(s) => format!("{status}: size {s}"),
        None => status.to_string(),
    }];
    for w in &result.witnesses {
        lines.push(format!("set: {}", render::vertex_list(graph, w)));
    }
    lines.join("\n")
}

fn bound(a: &BoundArgs, out: Output) -> Result<Report> {
    let kind: DetectionKind = a.kind.into();
    let constraint: PatchConstraint = match &a.constraint {
        Some(spec) => spec.parse()?,
        None => PatchConstraint::NONE,
    };
    if a.threshold.is_some() && constraint != PatchConstraint::NONE {
        return Err(CliError::Usage("--threshold classifies unconstrained patches; drop --constraint".into()));
    }
    let cert = certified_max_share(kind, constraint);
    let classification = match &a.threshold {
        Some(t) => Some(classify_high_share(kind, parse_rational(t)?, parse_rational(&a.class_limit)?)),
        None => None,
    };
    let value = json!({"certificate": cert, "classification": classification});
    Ok(out.report(true, &value, || bound_text(&cert, classification.as_ref(), out)))
}

fn bound_text(cert: &Certificate, classification: Option<&HighShareReport>, out: Output) -> String {
    let mut lines = Vec::new();
    match (cert.max_share, cert.density_bound) {
        (Some(max), Some(density)) => {
            lines.push(format!("max share = {}, density lower bound = {}", out.q(&max), out.q(&density)))
        }
        _ => lines.push("no feasible patch".into()),
    }
    lines.push(format!("kind: {}, constraint: {}", cert.kind, cert.constraint));
    lines.push(format!("feasible patches: {}", cert.feasible_patches));
    lines.push(format!(
        "patches attaining the maximum: {} ({} up to symmetry)",
        cert.argmax_count,
        cert.argmax.len()
    ));
    for p in &cert.argmax {
        lines.push(String::new());
        lines.push(p.to_string());
    }
    if let Some(report) = classification {
        lines.push(String::new());
        let values: Vec<String> =
            report.share_values.iter().map(|s| format!("{} x{}", out.q(&s.share), s.patches)).collect();
        lines.push(format!(
            "patches with share > {}: {} [{}]",
            out.q(&report.threshold),
            report.patch_count,
            values.join(", ")
        ));
        for p in &report.patches {
            lines.push(String::new());
            lines.push(format!(
                "share {} ({} orientations), {} adjacent detector(s) with class max <= {}",
                out.q(&p.share),
                p.orientations,
                p.supported_by,
                out.q(&report.class_limit)
            ));
            lines.push(p.patch.to_string());
            for adj in &p.adjacent {
                lines.push(format!(
                    "  neighbour {} {} class max {}",
                    render::cell(adj.offset),
                    adj.neighborhood,
                    out.q(&adj.class_max)
                ));
            }
        }
        lines.push(String::new());
        lines.push(format!(
            "every patch above the threshold has at least two supporting neighbours: {}",
            if report.all_doubly_supported() { "yes" } else { "no" }
        ));
    }
    lines.join("\n")
}

fn search(a: &SearchArgs, out: Output) -> Result<Report> {
    let kind: DetectionKind = a.kind.into();
    let mut s = PatternSearch::new(kind, a.redundancy, a.max_detectors.unwrap_or(a.rows * a.cols));
    s.area_budget = a.area_budget;
    s.all = a.all;
    s.parallel = true;
    let found = pattern_search(a.rows, a.cols, &s)?;
    let value: Vec<PatternJson> = found.iter().map(PatternJson::of).collect();
    Ok(out.report(true, &value, || {
        let mut lines = vec![format!("{} pattern(s)", found.len())];
        for p in &found {
            lines.push(String::new());
            lines.push(format!("density {}", out.q(&p.density())));
            lines.push(p.to_string());
        }
        lines.join("\n")
    }))
}

fn builtins(out: Output) -> Report {
    let all = builtin_patterns();
    let value: Vec<serde_json::Value> = all
        .iter()
        .map(|(name, p)| {
            let mut v = serde_json::to_value(PatternJson::of(p)).unwrap();
            v["name"] = json!(name);
            v
        })
        .collect();
    out.report(true, &value, || {
        all.iter()
            .map(|(name, p)| format!("{name} ({}x{}, density {})\n{p}", p.rows(), p.cols(), out.q(&p.density())))
            .collect::<Vec<_>>()
            .join("\n\n")
    })
}
