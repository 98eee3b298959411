//! Exact minimum detection systems on small graphs.
//!
//! [`brute_force_min`] enumerates subsets by increasing size and is the
//! reference. [`branch_and_bound_min`] reduces the instance to a covering
//! system (one demand per vertex, one per pair of vertices whose regions
//! overlap) and searches it with domination and distinguishing pruning. On
//! faithful king tori the certified per-detector share maximum supplies a
//! starting floor of `⌈|V| / max_share⌉`.

mod cover;
pub mod dimacs;

use itertools::Itertools;
use serde::Serialize;

pub use cover::{all_covers, minimum_cover, CoverSystem, Demand, SearchOptions, SearchOutcome};

use crate::detection::DetectorSet;
use crate::error::{Error, Result};
use crate::graph::{DetectionKind, Graph};
use crate::rational::{ceil_to_usize, Rational};
use crate::share_bound;
use crate::vertex_set::VertexSet;

pub const BRUTE_FORCE_VERTEX_LIMIT: usize = 20;
pub const DEFAULT_VERTEX_BUDGET: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "size")]
pub enum Mode {
    /// Minimum size and one optimal set.
    ExactMin,
    /// Minimum size and every optimal set.
    FindAllMin,
    /// Is there a valid set of exactly this size?
    Decision(usize),
}

#[derive(Clone, Debug)]
pub struct SolveRequest<'g> {
    pub graph: &'g Graph,
    pub kind: DetectionKind,
    pub redundancy: usize,
    pub mode: Mode,
}

impl<'g> SolveRequest<'g> {
    pub fn new(graph: &'g Graph, kind: DetectionKind, redundancy: usize, mode: Mode) -> Result<Self> {
        if redundancy > 2 {
            return Err(Error::InvalidArgument(format!("redundancy must be 0, 1 or 2, got {redundancy}")));
        }
        Ok(SolveRequest { graph, kind, redundancy, mode })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub status: Status,
    pub size: Option<usize>,
    /// Sorted vertex lists; one entry unless all optimal sets were requested.
    pub witnesses: Vec<Vec<usize>>,
    pub nodes: u64,
}

impl SolveResult {
    fn infeasible(nodes: u64) -> Self {
        SolveResult { status: Status::Infeasible, size: None, witnesses: Vec::new(), nodes }
    }

    pub fn is_feasible(&self) -> bool {
        self.status != Status::Infeasible
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub vertex_budget: usize,
    /// Apply the share floor on faithful king tori.
    pub share_floor: bool,
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { vertex_budget: DEFAULT_VERTEX_BUDGET, share_floor: true, parallel: false }
    }
}

/// Twin vertices (equal regions) can never be told apart.
pub fn find_twins(graph: &Graph, kind: DetectionKind) -> Option<(usize, usize)> {
    (0..graph.vertex_count())
        .tuple_combinations()
        .find(|&(u, v)| graph.region(u, kind) == graph.region(v, kind))
}

/// Covering form of `req`: `|R(v) ∩ S| ≥ r+1` for every vertex and
/// `|(R(u) △ R(v)) ∩ S| ≥ r+1` for every pair with overlapping regions.
/// Pairs with disjoint regions are implied by the vertex demands.
pub fn cover_system(graph: &Graph, kind: DetectionKind, redundancy: usize) -> CoverSystem {
    let n = graph.vertex_count();
    let need = redundancy as u32 + 1;
    let mut system = CoverSystem::new(n);
    for v in 0..n {
        system.push(graph.region(v, kind).iter().map(|u| (u, 1)), need);
    }
    for (u, v) in (0..n).tuple_combinations() {
        let (ru, rv) = (graph.region(u, kind), graph.region(v, kind));
        if !ru.is_disjoint(rv) {
            system.push(ru.symmetric_difference(rv).iter().map(|w| (w, 1)), need);
        }
    }
    system
}

/// `⌈|V| / max_share⌉` when `graph` is a faithful king torus and the
/// requested sets are at least 1-redundant, else 0.
pub fn share_floor(graph: &Graph, kind: DetectionKind, redundancy: usize) -> usize {
    match graph.torus_shape() {
        Some(shape) if shape.is_faithful() && redundancy >= 1 => {
            let max = share_bound::certified_max_share_value(kind);
            ceil_to_usize(&(Rational::from_integer(graph.vertex_count() as i64) / max))
        }
        _ => 0,
    }
}

/// Reference solver: all subsets by increasing size, each checked with
/// [`DetectorSet::verify`]. At most [`BRUTE_FORCE_VERTEX_LIMIT`] vertices.
pub fn brute_force_min(req: &SolveRequest<'_>) -> Result<SolveResult> {
    let n = req.graph.vertex_count();
    if n > BRUTE_FORCE_VERTEX_LIMIT {
        return Err(Error::Budget {
            what: "brute-force search",
            required: 1u128 << n,
            budget: 1u128 << BRUTE_FORCE_VERTEX_LIMIT,
        });
    }
    let mut nodes = 0;
    let sizes: Vec<usize> = match req.mode {
        Mode::Decision(s) if s > n => return Ok(SolveResult::infeasible(0)),
        Mode::Decision(s) => vec![s],
        _ => (0..=n).collect(),
    };
    for size in sizes {
        let mut found = Vec::new();
        for subset in (0..n).combinations(size) {
            nodes += 1;
            let ds = DetectorSet::new(req.graph, req.kind, subset.iter().copied())?;
            if ds.verify(req.redundancy).is_valid() {
                found.push(subset);
                if req.mode != Mode::FindAllMin {
                    break;
                }
            }
        }
        if !found.is_empty() {
            let status = if matches!(req.mode, Mode::Decision(_)) { Status::Feasible } else { Status::Optimal };
            return Ok(SolveResult { status, size: Some(size), witnesses: found, nodes });
        }
    }
    Ok(SolveResult::infeasible(nodes))
}

pub fn branch_and_bound_min(req: &SolveRequest<'_>) -> Result<SolveResult> {
    branch_and_bound_with(req, &SolverConfig::default())
}

pub fn branch_and_bound_with(req: &SolveRequest<'_>, config: &SolverConfig) -> Result<SolveResult> {
    let n = req.graph.vertex_count();
    if n > config.vertex_budget {
        return Err(Error::Budget {
            what: "branch-and-bound search",
            required: n as u128,
            budget: config.vertex_budget as u128,
        });
    }
    if find_twins(req.graph, req.kind).is_some() {
        return Ok(SolveResult::infeasible(0));
    }
    let system = cover_system(req.graph, req.kind, req.redundancy);
    let floor = if config.share_floor { share_floor(req.graph, req.kind, req.redundancy) } else { 0 };
    // Translations act transitively on a torus, so some optimum contains vertex 0.
    let anchor = req.graph.torus_shape().map(|_| 0);
    let mut options = SearchOptions { floor, anchor, parallel: config.parallel, ..Default::default() };
    match req.mode {
        Mode::ExactMin => {}
        Mode::FindAllMin => options.collect_all = true,
        Mode::Decision(s) => {
            if s > n {
                return Ok(SolveResult::infeasible(0));
            }
            options.max_size = Some(s);
        }
    }
    let out = minimum_cover(&system, &options);
    let Some(size) = out.size else {
        return Ok(SolveResult::infeasible(out.nodes));
    };
    match req.mode {
        Mode::Decision(s) => {
            // Supersets of valid sets stay valid; pad with the smallest free vertices.
            let mut set = VertexSet::from_indices(n, out.solutions[0].iter().copied());
            for v in 0..n {
                if set.len() >= s {
                    break;
                }
                set.insert(v);
            }
            Ok(SolveResult { status: Status::Feasible, size: Some(s), witnesses: vec![set.to_vec()], nodes: out.nodes })
        }
        _ => Ok(SolveResult { status: Status::Optimal, size: Some(size), witnesses: out.solutions, nodes: out.nodes }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve_both(g: &Graph, kind: DetectionKind, r: usize, mode: Mode) -> (SolveResult, SolveResult) {
        let req = SolveRequest::new(g, kind, r, mode).unwrap();
        (brute_force_min(&req).unwrap(), branch_and_bound_min(&req).unwrap())
    }

    #[test]
    fn p2_closed_is_infeasible() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let (bf, bb) = solve_both(&g, DetectionKind::Closed, 0, Mode::ExactMin);
        assert_eq!(bf.status, Status::Infeasible);
        assert_eq!(bb.status, Status::Infeasible);
        assert_eq!(find_twins(&g, DetectionKind::Closed), Some((0, 1)));
    }

    #[test]
    fn k3_has_open_codes_but_no_closed_ones() {
        // Two detectors leave codes {1}, {0}, {0,1}.
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let (bf, bb) = solve_both(&g, DetectionKind::Open, 0, Mode::ExactMin);
        assert_eq!((bf.status, bf.size), (Status::Optimal, Some(2)));
        assert_eq!((bb.status, bb.size), (Status::Optimal, Some(2)));
        let (bf, bb) = solve_both(&g, DetectionKind::Open, 1, Mode::ExactMin);
        assert_eq!((bf.size, bb.size), (Some(3), Some(3)));
        let (bf, bb) = solve_both(&g, DetectionKind::Closed, 0, Mode::ExactMin);
        assert_eq!((bf.status, bb.status), (Status::Infeasible, Status::Infeasible));
    }

    #[test]
    fn path_p4_open() {
        // P4: 0-1-2-3. OLD needs every vertex.
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let (bf, bb) = solve_both(&g, DetectionKind::Open, 0, Mode::FindAllMin);
        assert_eq!(bf.size, Some(4));
        assert_eq!(bf, SolveResult { nodes: bf.nodes, ..bb.clone() });
    }

    #[test]
    fn decision_mode_is_monotone_and_padded() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let min = branch_and_bound_min(&SolveRequest::new(&g, DetectionKind::Closed, 0, Mode::ExactMin).unwrap())
            .unwrap()
            .size
            .unwrap();
        for s in 0..=7 {
            let req = SolveRequest::new(&g, DetectionKind::Closed, 0, Mode::Decision(s)).unwrap();
            let bb = branch_and_bound_min(&req).unwrap();
            let bf = brute_force_min(&req).unwrap();
            assert_eq!(bb.is_feasible(), s >= min && s <= 6, "size {s}");
            assert_eq!(bf.is_feasible(), bb.is_feasible());
            if bb.is_feasible() {
                let w = &bb.witnesses[0];
                assert_eq!(w.len(), s);
                assert!(DetectorSet::new(&g, DetectionKind::Closed, w.iter().copied()).unwrap().verify(0).is_valid());
            }
        }
    }

    #[test]
    fn budgets() {
        let g = Graph::king_torus(5, 5).unwrap();
        let req = SolveRequest::new(&g, DetectionKind::Open, 1, Mode::ExactMin).unwrap();
        assert!(matches!(brute_force_min(&req), Err(Error::Budget { .. })));
        let big = Graph::king_torus(7, 7).unwrap();
        let req = SolveRequest::new(&big, DetectionKind::Open, 1, Mode::ExactMin).unwrap();
        assert!(matches!(branch_and_bound_min(&req), Err(Error::Budget { .. })));
        assert!(SolveRequest::new(&g, DetectionKind::Open, 3, Mode::ExactMin).is_err());
    }

    #[test]
    fn share_floor_values() {
        let g = Graph::king_torus(6, 6).unwrap();
        assert_eq!(share_floor(&g, DetectionKind::Open, 1), 11);
        assert_eq!(share_floor(&g, DetectionKind::Closed, 1), 11);
        assert_eq!(share_floor(&g, DetectionKind::Open, 0), 0);
        let small = Graph::king_torus(4, 4).unwrap();
        assert_eq!(share_floor(&small, DetectionKind::Open, 1), 0);
    }
}
