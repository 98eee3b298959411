//! Minimum-cardinality 0/1 covering search.
//!
//! A [`CoverSystem`] is a list of demands `Σ weight·x_var ≥ demand` over
//! boolean variables. Redundant detection systems on finite graphs and
//! periodic patterns on the king's grid both reduce to one: domination
//! counts and code symmetric differences are linear in the detector
//! indicator.
//!
//! The search deepens a size limit from a lower bound upward. Each node
//! branches on the unmet demand with the least slack: the `i`-th child
//! selects the `i`-th undecided candidate and excludes the earlier ones, so
//! every minimum solution is reached along exactly one path.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Demand {
    pub terms: Vec<(usize, u32)>,
    pub demand: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverSystem {
    vars: usize,
    demands: Vec<Demand>,
}

impl CoverSystem {
    pub fn new(vars: usize) -> Self {
        CoverSystem { vars, demands: Vec::new() }
    }

    /// Adds `Σ weight·x ≥ demand`; repeated variables have their weights summed.
    pub fn push(&mut self, terms: impl IntoIterator<Item = (usize, u32)>, demand: u32) {
        let mut merged: Vec<(usize, u32)> = Vec::new();
        for (var, w) in terms {
            assert!(var < self.vars, "variable {var} out of range");
            if w == 0 {
                continue;
            }
            match merged.iter_mut().find(|(v, _)| *v == var) {
                Some(t) => t.1 += w,
                None => merged.push((var, w)),
            }
        }
        merged.sort_unstable();
        if demand > 0 {
            self.demands.push(Demand { terms: merged, demand });
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    pub fn is_satisfied_by(&self, chosen: &[bool]) -> bool {
        self.demands
            .iter()
            .all(|d| d.terms.iter().filter(|(v, _)| chosen[*v]).map(|(_, w)| w).sum::<u32>() >= d.demand)
    }

    /// True when even selecting every variable leaves a demand unmet.
    pub fn is_trivially_infeasible(&self) -> bool {
        self.demands.iter().any(|d| d.terms.iter().map(|(_, w)| w).sum::<u32>() < d.demand)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Known lower bound on the solution size (e.g. from a share argument).
    pub floor: usize,
    /// Stop deepening past this size.
    pub max_size: Option<usize>,
    /// Collect every solution of the minimum size instead of the first one.
    pub collect_all: bool,
    /// Variable that may be assumed selected (symmetry breaking for
    /// vertex-transitive instances). Ignored when collecting all solutions.
    pub anchor: Option<usize>,
    /// Split the root's children across a rayon pool.
    pub parallel: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Minimum size, if any solution within `max_size` exists.
    pub size: Option<usize>,
    /// Sorted variable lists, in lexicographic order.
    pub solutions: Vec<Vec<usize>>,
    pub nodes: u64,
}

/// Finds minimum-cardinality solutions of `system`.
pub fn minimum_cover(system: &CoverSystem, options: &SearchOptions) -> SearchOutcome {
    let mut nodes = 0;
    if system.is_trivially_infeasible() {
        return SearchOutcome { size: None, solutions: Vec::new(), nodes };
    }
    let anchor = options.anchor.filter(|_| !options.collect_all);
    let index = var_index(system);
    let root = {
        let mut s = State::new(system, &index);
        if let Some(a) = anchor {
            s.include(a);
        }
        s
    };
    let root_bound = root.chosen.len() + root.lower_bound().unwrap_or(usize::MAX - system.vars());
    let max_size = options.max_size.unwrap_or(system.vars()).min(system.vars());
    let mut limit = options.floor.max(root_bound);
    while limit <= max_size {
        let (mut solutions, n) = run_limit(&root, limit, options.collect_all, options.parallel);
        nodes += n;
        if !solutions.is_empty() {
            solutions.sort();
            solutions.dedup();
            if !options.collect_all {
                solutions.truncate(1);
            }
            return SearchOutcome { size: Some(limit), solutions, nodes };
        }
        limit += 1;
    }
    SearchOutcome { size: None, solutions: Vec::new(), nodes }
}

fn run_limit(root: &State<'_>, limit: usize, collect_all: bool, parallel: bool) -> (Vec<Vec<usize>>, u64) {
    if !parallel {
        let mut state = root.clone();
        let stop = AtomicBool::new(false);
        let mut out = Vec::new();
        state.dfs(limit, collect_all, &stop, &mut out);
        return (out, state.nodes);
    }
    // Expand the root once and hand each child (with its excluded prefix) to a worker.
    let Some(branch) = root.branch_candidates() else {
        return if root.chosen.len() <= limit { (vec![root.solution()], 1) } else { (Vec::new(), 1) };
    };
    if root.chosen.len() + root.lower_bound().unwrap_or(usize::MAX / 2) > limit {
        return (Vec::new(), 1);
    }
    let stop = AtomicBool::new(false);
    let nodes = AtomicU64::new(1);
    let mut per_child: Vec<(usize, Vec<Vec<usize>>)> = branch
        .par_iter()
        .enumerate()
        .filter_map(|(i, &w)| {
            let mut state = root.clone();
            for &earlier in &branch[..i] {
                if !state.exclude(earlier) {
                    return None;
                }
            }
            state.include(w);
            let mut out = Vec::new();
            state.dfs(limit, collect_all, &stop, &mut out);
            nodes.fetch_add(state.nodes, Ordering::Relaxed);
            Some((i, out))
        })
        .collect();
    per_child.sort_by_key(|(i, _)| *i);
    (per_child.into_iter().flat_map(|(_, o)| o).collect(), nodes.into_inner())
}

/// Every solution with at most `max_size` variables, in lexicographic order.
pub fn all_covers(system: &CoverSystem, max_size: usize) -> Vec<Vec<usize>> {
    let index = var_index(system);
    let mut state = State::new(system, &index);
    let mut out = Vec::new();
    if !system.is_trivially_infeasible() {
        state.enumerate(0, max_size, &mut out);
    }
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Var {
    Free,
    In,
    Out,
}

#[derive(Clone)]
struct State<'a> {
    system: &'a CoverSystem,
    by_var: &'a [Vec<(usize, u32)>],
    vars: Vec<Var>,
    achieved: Vec<u32>,
    potential: Vec<u32>,
    chosen: Vec<usize>,
    nodes: u64,
}

/// For each variable, the demands it appears in with its weight.
fn var_index(system: &CoverSystem) -> Vec<Vec<(usize, u32)>> {
    let mut by_var = vec![Vec::new(); system.vars];
    for (c, d) in system.demands.iter().enumerate() {
        for &(v, w) in &d.terms {
            by_var[v].push((c, w));
        }
    }
    by_var
}

impl<'a> State<'a> {
    fn new(system: &'a CoverSystem, by_var: &'a [Vec<(usize, u32)>]) -> Self {
        State {
            system,
            by_var,
            vars: vec![Var::Free; system.vars],
            achieved: vec![0; system.demands.len()],
            potential: system.demands.iter().map(|d| d.terms.iter().map(|t| t.1).sum()).collect(),
            chosen: Vec::new(),
            nodes: 0,
        }
    }

    fn solution(&self) -> Vec<usize> {
        let mut s = self.chosen.clone();
        s.sort_unstable();
        s
    }

    fn include(&mut self, var: usize) {
        debug_assert_eq!(self.vars[var], Var::Free);
        self.vars[var] = Var::In;
        self.chosen.push(var);
        for &(c, w) in &self.by_var[var] {
            self.achieved[c] += w;
            self.potential[c] -= w;
        }
    }

    fn undo_include(&mut self, var: usize) {
        self.vars[var] = Var::Free;
        self.chosen.pop();
        for &(c, w) in &self.by_var[var] {
            self.achieved[c] -= w;
            self.potential[c] += w;
        }
    }

    /// Excludes `var`; returns false (and leaves it excluded) if some demand
    /// became unreachable.
    fn exclude(&mut self, var: usize) -> bool {
        debug_assert_eq!(self.vars[var], Var::Free);
        self.vars[var] = Var::Out;
        let mut ok = true;
        for &(c, w) in &self.by_var[var] {
            self.potential[c] -= w;
            if self.achieved[c] + self.potential[c] < self.system.demands[c].demand {
                ok = false;
            }
        }
        ok
    }

    fn undo_exclude(&mut self, var: usize) {
        self.vars[var] = Var::Free;
        for &(c, w) in &self.by_var[var] {
            self.potential[c] += w;
        }
    }

    fn deficit(&self, c: usize) -> u32 {
        self.system.demands[c].demand.saturating_sub(self.achieved[c])
    }

    /// Each additional variable lowers the summed deficit by at most its
    /// gain, so the fewest top gains covering the deficit bound the number of
    /// variables still needed. `None` means no completion exists.
    fn lower_bound(&self) -> Option<usize> {
        let total: u64 = (0..self.achieved.len()).map(|c| self.deficit(c) as u64).sum();
        if total == 0 {
            return Some(0);
        }
        let mut gains: Vec<u64> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Var::Free)
            .map(|(v, _)| self.by_var[v].iter().map(|&(c, w)| w.min(self.deficit(c)) as u64).sum())
            .filter(|&g| g > 0)
            .collect();
        gains.sort_unstable_by(|a, b| b.cmp(a));
        let mut acc = 0;
        for (i, g) in gains.iter().enumerate() {
            acc += g;
            if acc >= total {
                return Some(i + 1);
            }
        }
        None
    }

    /// Undecided variables of the tightest unmet demand, most useful first.
    /// `None` when every demand is met.
    fn branch_candidates(&self) -> Option<Vec<usize>> {
        let mut best: Option<(i64, u32, usize)> = None;
        for c in 0..self.achieved.len() {
            let deficit = self.deficit(c);
            if deficit == 0 {
                continue;
            }
            let slack = self.potential[c] as i64 - deficit as i64;
            let key = (slack, u32::MAX - deficit, c);
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
        let (_, _, c) = best?;
        let mut cands: Vec<(u64, usize)> = self.system.demands[c]
            .terms
            .iter()
            .filter(|(v, _)| self.vars[*v] == Var::Free)
            .map(|&(v, _)| {
                let score = self.by_var[v].iter().map(|&(d, w)| w.min(self.deficit(d)) as u64).sum();
                (score, v)
            })
            .collect();
        cands.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        Some(cands.into_iter().map(|(_, v)| v).collect())
    }

    /// Decides variables `next..` in index order, keeping every completion
    /// of size at most `limit`.
    fn enumerate(&mut self, next: usize, limit: usize, out: &mut Vec<Vec<usize>>) {
        self.nodes += 1;
        match self.lower_bound() {
            Some(lb) if self.chosen.len() + lb <= limit => {}
            _ => return,
        }
        if next == self.vars.len() {
            out.push(self.solution());
            return;
        }
        if self.chosen.len() < limit {
            self.include(next);
            self.enumerate(next + 1, limit, out);
            self.undo_include(next);
        }
        if self.exclude(next) {
            self.enumerate(next + 1, limit, out);
        }
        self.undo_exclude(next);
    }

    fn dfs(&mut self, limit: usize, collect_all: bool, stop: &AtomicBool, out: &mut Vec<Vec<usize>>) {
        self.nodes += 1;
        if stop.load(Ordering::Relaxed) {
            return;
        }
        let Some(lb) = self.lower_bound() else { return };
        if self.chosen.len() + lb > limit {
            return;
        }
        let Some(cands) = self.branch_candidates() else {
            out.push(self.solution());
            if !collect_all {
                stop.store(true, Ordering::Relaxed);
            }
            return;
        };
        let mut excluded = Vec::new();
        for w in cands {
            self.include(w);
            self.dfs(limit, collect_all, stop, out);
            self.undo_include(w);
            if stop.load(Ordering::Relaxed) {
                break;
            }
            excluded.push(w);
            if !self.exclude(w) {
                break;
            }
        }
        for w in excluded.into_iter().rev() {
            self.undo_exclude(w);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_min(sys: &CoverSystem) -> Option<(usize, Vec<Vec<usize>>)> {
        let n = sys.vars();
        let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
        for mask in 0u32..(1 << n) {
            let chosen: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            if !sys.is_satisfied_by(&chosen) {
                continue;
            }
            let size = mask.count_ones() as usize;
            let set: Vec<usize> = (0..n).filter(|&i| chosen[i]).collect();
            match &mut best {
                Some((s, sets)) if *s == size => sets.push(set),
                Some((s, _)) if *s < size => {}
                _ => best = Some((size, vec![set])),
            }
        }
        best.map(|(s, mut sets)| {
            sets.sort();
            (s, sets)
        })
    }

    #[test]
    fn matches_brute_force_on_random_systems() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(1..=9);
            let mut sys = CoverSystem::new(n);
            for _ in 0..rng.gen_range(0..8) {
                let terms: Vec<(usize, u32)> =
                    (0..rng.gen_range(0..4)).map(|_| (rng.gen_range(0..n), rng.gen_range(1..3))).collect();
                sys.push(terms, rng.gen_range(1..4));
            }
            let expected = brute_min(&sys);
            for parallel in [false, true] {
                let all = minimum_cover(&sys, &SearchOptions { collect_all: true, parallel, ..Default::default() });
                match &expected {
                    None => assert_eq!(all.size, None),
                    Some((size, sets)) => {
                        assert_eq!(all.size, Some(*size));
                        assert_eq!(&all.solutions, sets);
                    }
                }
                let one = minimum_cover(&sys, &SearchOptions { parallel, ..Default::default() });
                assert_eq!(one.size, expected.as_ref().map(|e| e.0));
            }
        }
    }

    #[test]
    fn all_covers_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let mut sys = CoverSystem::new(n);
            for _ in 0..rng.gen_range(0..6) {
                let terms: Vec<(usize, u32)> =
                    (0..rng.gen_range(0..4)).map(|_| (rng.gen_range(0..n), rng.gen_range(1..3))).collect();
                sys.push(terms, rng.gen_range(1..3));
            }
            let limit = rng.gen_range(0..=n);
            let mut expected: Vec<Vec<usize>> = (0u32..(1 << n))
                .filter(|m| m.count_ones() as usize <= limit)
                .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>())
                .filter(|set| {
                    let chosen: Vec<bool> = (0..n).map(|i| set.contains(&i)).collect();
                    sys.is_satisfied_by(&chosen)
                })
                .collect();
            expected.sort();
            assert_eq!(all_covers(&sys, limit), expected);
        }
    }

    #[test]
    fn weights_merge_and_zero_demands_drop() {
        let mut sys = CoverSystem::new(3);
        sys.push([(1, 1), (1, 2), (0, 0)], 3);
        sys.push([(2, 1)], 0);
        assert_eq!(sys.demands(), &[Demand { terms: vec![(1, 3)], demand: 3 }]);
        let out = minimum_cover(&sys, &SearchOptions::default());
        assert_eq!(out.size, Some(1));
        assert_eq!(out.solutions, vec![vec![1]]);
    }

    #[test]
    fn max_size_cuts_the_search() {
        let mut sys = CoverSystem::new(4);
        for v in 0..4 {
            sys.push([(v, 1)], 1);
        }
        let out = minimum_cover(&sys, &SearchOptions { max_size: Some(3), ..Default::default() });
        assert_eq!(out.size, None);
        let out = minimum_cover(&sys, &SearchOptions { floor: 2, ..Default::default() });
        assert_eq!(out.size, Some(4));
    }
}
