use redset_core::rational::to_decimal;
use redset_core::{Cell, Graph, PeriodicPattern, Rational, Violation};
use serde::Serialize;

pub fn rational(value: &Rational, decimal: bool) -> String {
    if decimal {
        to_decimal(value, 6)
    } else {
        value.to_string()
    }
}

pub fn cell((r, c): Cell) -> String {
    format!("({r},{c})")
}

pub fn violation<V>(v: &Violation<V>, name: impl Fn(&V) -> String) -> String {
    match v {
        Violation::UnderDominated { vertex, dom, required } => {
            format!("under_dominated: {} is watched by {dom} detector(s), needs {required}", name(vertex))
        }
        Violation::Indistinguishable { u, v, difference, required } => format!(
            "indistinguishable: codes of {} and {} differ in {difference} detector(s), need {required}",
            name(u),
            name(v)
        ),
    }
}

pub fn vertex_list(graph: &Graph, vertices: &[usize]) -> String {
    vertices.iter().map(|&v| graph.label(v)).collect::<Vec<_>>().join(" ")
}

/// A pattern as JSON: period, rows of `X`/`.` and exact density.
#[derive(Serialize)]
pub struct PatternJson {
    pub rows: usize,
    pub cols: usize,
    pub pattern: Vec<String>,
    pub density: String,
}

impl PatternJson {
    pub fn of(p: &PeriodicPattern) -> Self {
        PatternJson {
            rows: p.rows(),
            cols: p.cols(),
            pattern: p.to_string().lines().map(str::to_owned).collect(),
            density: p.density().to_string(),
        }
    }
}

pub fn json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("output structures serialize")
}
