//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use redset_core::{Graph, Rational};

/// Every simple graph on `n` vertices up to isomorphism, as edge lists.
/// Built by adding one vertex at a time with every possible neighbourhood and
/// keeping one graph per canonical form.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut level: BTreeSet<u32> = BTreeSet::from([0]);
    for k in 1..n {
        let mut next = BTreeSet::new();
        for &g in &level {
            for nbrs in 0u32..1 << k {
                let mut adj = unpack(g, k);
                adj.push(0);
                for u in 0..k {
                    if nbrs >> u & 1 == 1 {
                        adj[u] |= 1 << k;
                        adj[k] |= 1 << u;
                    }
                }
                next.insert(canonical(&adj));
            }
        }
        level = next;
    }
    level.into_iter().map(|g| edge_list(g, n)).collect()
}

fn pair_bit(u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    b * (b - 1) / 2 + a
}

fn unpack(code: u32, n: usize) -> Vec<u32> {
    let mut adj = vec![0u32; n];
    for b in 1..n {
        for a in 0..b {
            if code >> pair_bit(a, b) & 1 == 1 {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
    }
    adj
}

fn edge_list(code: u32, n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for b in 1..n {
        for a in 0..b {
            if code >> pair_bit(a, b) & 1 == 1 {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Least edge code over relabelings that list vertices by degree.
fn canonical(adj: &[u32]) -> u32 {
    let n = adj.len();
    let mut by_degree: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (v, a) in adj.iter().enumerate() {
        by_degree.entry(a.count_ones()).or_default().push(v);
    }
    let classes: Vec<Vec<usize>> = by_degree.into_values().collect();
    let mut best = u32::MAX;
    let mut order = Vec::with_capacity(n);
    fn rec(classes: &[Vec<usize>], i: usize, used: &mut Vec<bool>, order: &mut Vec<usize>, adj: &[u32], best: &mut u32) {
        if i == classes.len() {
            let mut label = vec![0; adj.len()];
            for (new, &old) in order.iter().enumerate() {
                label[old] = new;
            }
            let mut code = 0u32;
            for (u, &a) in adj.iter().enumerate() {
                for v in 0..adj.len() {
                    if u < v && a >> v & 1 == 1 {
                        code |= 1 << pair_bit(label[u], label[v]);
                    }
                }
            }
            *best = (*best).min(code);
            return;
        }
        let class = &classes[i];
        let placed = order.len();
        let start = classes[..i].iter().map(Vec::len).sum::<usize>();
        if placed == start + class.len() {
            rec(classes, i + 1, used, order, adj, best);
            return;
        }
        for &v in class {
            if !used[v] {
                used[v] = true;
                order.push(v);
                rec(classes, i, used, order, adj, best);
                order.pop();
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; n];
    rec(&classes, 0, &mut used, &mut order, adj, &mut best);
    best
}

pub fn graphs_up_to(max_n: usize) -> Vec<Graph> {
    (1..=max_n)
        .flat_map(|n| nonisomorphic_graphs(n).into_iter().map(move |e| Graph::from_edges(n, &e).unwrap()))
        .collect()
}

/// Worst case of `Σ 1/dom` over `a` vertices all watched by the same `d`
/// detectors in a `k`-distinguishing set: each count is at least `d`, and a
/// vertex watched by exactly those `d` forces every other one to `d + k` or
/// more. Counts above `d + k + 1` never help, so the search is finite.
pub fn lemma_oracle(a: u32, d: u32, k: u32) -> Rational {
    let top = d + k + 1;
    let mut best = Rational::from_integer(0);
    let mut counts = vec![d; a as usize];
    loop {
        let has_minimal = counts.contains(&d);
        let admissible = !has_minimal || {
            let minimal = counts.iter().filter(|&&c| c == d).count();
            counts.iter().all(|&c| c == d || c >= d + k) && (minimal == 1 || k == 0)
        };
        if admissible {
            let sum = counts.iter().map(|&c| Rational::new(1, c as i64)).sum::<Rational>();
            best = best.max(sum);
        }
        let mut i = 0;
        loop {
            if i == counts.len() {
                return best;
            }
            if counts[i] < top {
                counts[i] += 1;
                break;
            }
            counts[i] = d;
            i += 1;
        }
    }
}

/// Share histogram of every feasible 5×5 patch, computed by testing all
/// 2^24 windows directly with bit masks. Keys are shares in units of 1/2520.
pub struct PatchOracle {
    pub feasible: u64,
    pub histogram: BTreeMap<u32, u64>,
}

pub fn patch_oracle(closed: bool) -> PatchOracle {
    let bit = |r: i64, c: i64| ((r + 2) * 5 + (c + 2)) as u32;
    let core: Vec<(i64, i64)> = (-1..=1).flat_map(|r| (-1..=1).map(move |c| (r, c))).collect();
    let region = |(r, c): (i64, i64)| -> u32 {
        let mut m = 0;
        for dr in -1..=1 {
            for dc in -1..=1 {
                if closed || (dr, dc) != (0, 0) {
                    m |= 1 << bit(r + dr, c + dc);
                }
            }
        }
        m
    };
    let regions: Vec<u32> = core.iter().map(|&u| region(u)).collect();
    let mut diffs = Vec::new();
    for i in 0..9 {
        for j in i + 1..9 {
            diffs.push(regions[i] ^ regions[j]);
        }
    }
    let center_region: Vec<usize> = (0..9).filter(|&i| closed || core[i] != (0, 0)).collect();
    let mut out = PatchOracle { feasible: 0, histogram: BTreeMap::new() };
    for counter in 0u32..1 << 24 {
        let mask = (counter & 0xfff) | 1 << 12 | (counter >> 12) << 13;
        if regions.iter().any(|r| (mask & r).count_ones() < 2) || diffs.iter().any(|d| (mask & d).count_ones() < 2) {
            continue;
        }
        out.feasible += 1;
        let units: u32 = center_region.iter().map(|&i| 2520 / (mask & regions[i]).count_ones()).sum();
        *out.histogram.entry(units).or_default() += 1;
    }
    out
}
