//! DIMACS CNF export of a detection-system instance for external SAT solvers.
//!
//! Variable `v + 1` means "vertex `v` is a detector". Each demand
//! "at least `k` of these `m` vertices" becomes every clause over `m - k + 1`
//! of them. With a size limit, an at-most-`s` sequential counter is appended.

use std::fmt::Write;

use itertools::Itertools;

use super::{cover_system, Mode, SolveRequest};
use crate::detection::binomial;
use crate::error::{Error, Result};

/// Clause budget for the binomial at-least-`k` expansion.
pub const MAX_CLAUSES: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<i64>>,
    pub comments: Vec<String>,
}

impl Cnf {
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "c {c}");
        }
        let _ = writeln!(out, "p cnf {} {}", self.vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(out, "{lit} ");
            }
            out.push_str("0\n");
        }
        out
    }

    /// Evaluates the formula; `assignment[i]` is variable `i + 1`.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = assignment[lit.unsigned_abs() as usize - 1];
                if lit > 0 { value } else { !value }
            })
        })
    }
}

/// Encodes `req`. [`Mode::Decision`] adds "at most `size` detectors";
/// the other modes export the feasibility constraints only.
pub fn encode(req: &SolveRequest<'_>) -> Result<Cnf> {
    let n = req.graph.vertex_count();
    let system = cover_system(req.graph, req.kind, req.redundancy);
    let mut total: u128 = 0;
    for d in system.demands() {
        let m = d.terms.len() as u128;
        let k = d.demand as u128;
        total += if k > m { 1 } else { binomial(m, m - k + 1) };
    }
    if total > MAX_CLAUSES {
        return Err(Error::Budget { what: "CNF export", required: total, budget: MAX_CLAUSES });
    }
    let mut clauses = Vec::new();
    for d in system.demands() {
        let lits: Vec<i64> = d.terms.iter().map(|&(v, _)| v as i64 + 1).collect();
        let k = d.demand as usize;
        if k > lits.len() {
            clauses.push(Vec::new());
            continue;
        }
        for clause in lits.iter().copied().combinations(lits.len() - k + 1) {
            clauses.push(clause);
        }
    }
    let mut vars = n;
    let mut comments = vec![
        format!("{} detection system, redundancy {}", req.kind, req.redundancy),
        format!("{n} vertices; variable v+1 is true when vertex v is a detector"),
    ];
    if let Mode::Decision(size) = req.mode {
        comments.push(format!("at most {size} detectors (sequential counter)"));
        vars = at_most(n, size, &mut clauses);
    }
    Ok(Cnf { vars, clauses, comments })
}

/// Sinz sequential counter for `x_1 + ... + x_n ≤ k`. Returns the new
/// variable count.
fn at_most(n: usize, k: usize, clauses: &mut Vec<Vec<i64>>) -> usize {
    let x = |i: usize| i as i64 + 1;
    if k >= n {
        return n;
    }
    if k == 0 {
        clauses.extend((0..n).map(|i| vec![-x(i)]));
        return n;
    }
    // s(i, j): among the first i+1 variables at least j+1 are true.
    let s = |i: usize, j: usize| (n + i * k + j) as i64 + 1;
    clauses.push(vec![-x(0), s(0, 0)]);
    for j in 1..k {
        clauses.push(vec![-s(0, j)]);
    }
    for i in 1..n - 1 {
        clauses.push(vec![-x(i), s(i, 0)]);
        clauses.push(vec![-s(i - 1, 0), s(i, 0)]);
        for j in 1..k {
            clauses.push(vec![-x(i), -s(i - 1, j - 1), s(i, j)]);
            clauses.push(vec![-s(i - 1, j), s(i, j)]);
        }
        clauses.push(vec![-x(i), -s(i - 1, k - 1)]);
    }
    clauses.push(vec![-x(n - 1), -s(n - 2, k - 1)]);
    n + (n - 1) * k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::DetectorSet;
    use crate::graph::{DetectionKind, Graph};

    fn satisfiable_with(cnf: &Cnf, n: usize, mask: u32) -> bool {
        let aux = cnf.vars - n;
        (0u64..(1 << aux)).any(|extra| {
            let assignment: Vec<bool> =
                (0..n).map(|i| mask >> i & 1 == 1).chain((0..aux).map(|j| extra >> j & 1 == 1)).collect();
            cnf.is_satisfied_by(&assignment)
        })
    }

    #[test]
    fn cnf_models_are_valid_sets() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        for kind in DetectionKind::ALL {
            for r in 0..=1 {
                let req = SolveRequest::new(&g, kind, r, Mode::ExactMin).unwrap();
                let cnf = encode(&req).unwrap();
                assert_eq!(cnf.vars, 5);
                for mask in 0u32..32 {
                    let chosen: Vec<bool> = (0..5).map(|i| mask >> i & 1 == 1).collect();
                    let ds = DetectorSet::new(&g, kind, (0..5).filter(|&i| chosen[i])).unwrap();
                    assert_eq!(cnf.is_satisfied_by(&chosen), ds.verify(r).is_valid(), "{kind} r={r} mask={mask:b}");
                }
            }
        }
    }

    #[test]
    fn size_limit_counter() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        for size in 0..=4 {
            let req = SolveRequest::new(&g, DetectionKind::Closed, 0, Mode::Decision(size)).unwrap();
            let cnf = encode(&req).unwrap();
            for mask in 0u32..16 {
                let ds = DetectorSet::new(&g, DetectionKind::Closed, (0..4).filter(|&i| mask >> i & 1 == 1)).unwrap();
                let expected = ds.verify(0).is_valid() && mask.count_ones() as usize <= size;
                assert_eq!(satisfiable_with(&cnf, 4, mask), expected, "size={size} mask={mask:b}");
            }
        }
    }

    #[test]
    fn dimacs_text() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let req = SolveRequest::new(&g, DetectionKind::Open, 0, Mode::ExactMin).unwrap();
        let text = encode(&req).unwrap().to_dimacs();
        assert!(text.contains("p cnf 2 2\n"));
        assert!(text.contains("\n2 0\n"));
        assert!(text.contains("\n1 0\n"));
    }
}
