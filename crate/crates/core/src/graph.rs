//! Finite simple undirected graphs with bitset adjacency.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Which neighborhood a detector watches: `N(v)` for OLD sets, `N[v]` for
/// identifying codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectionKind {
    Open,
    Closed,
}

impl DetectionKind {
    pub const ALL: [DetectionKind; 2] = [DetectionKind::Open, DetectionKind::Closed];

    pub fn name(self) -> &'static str {
        match self {
            DetectionKind::Open => "open",
            DetectionKind::Closed => "closed",
        }
    }

    /// Whether a vertex lies in its own detection region.
    pub fn includes_self(self) -> bool {
        self == DetectionKind::Closed
    }
}

impl fmt::Display for DetectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DetectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "open" | "old" => Ok(DetectionKind::Open),
            "closed" | "ic" => Ok(DetectionKind::Closed),
            _ => Err(Error::format(format!("unknown detection kind {s:?}"))),
        }
    }
}

/// Row/column layout of a king's-grid torus; vertex `(r, c)` has index
/// `r * cols + c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusShape {
    pub rows: usize,
    pub cols: usize,
}

impl TorusShape {
    /// Tori at least 5x5 agree with the infinite grid out to distance 2.
    pub fn is_faithful(&self) -> bool {
        self.rows >= 5 && self.cols >= 5
    }

    pub fn index(&self, row: i64, col: i64) -> usize {
        let r = row.rem_euclid(self.rows as i64) as usize;
        let c = col.rem_euclid(self.cols as i64) as usize;
        r * self.cols + c
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v / self.cols, v % self.cols)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    open: Vec<VertexSet>,
    closed: Vec<VertexSet>,
    edge_count: usize,
    torus: Option<TorusShape>,
}

impl Graph {
    /// Symmetric closure of `edges`; repeated edges collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut open = vec![VertexSet::new(n); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::format(format!("edge ({u}, {v}) has an endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(Error::format(format!("self-loop at vertex {u}")));
            }
            open[u].insert(v);
            open[v].insert(u);
        }
        Ok(Self::from_adjacency(open, None))
    }

    /// King's-grid torus: `(r, c)` is adjacent to every other cell at
    /// Chebyshev distance 1 modulo the dimensions.
    pub fn king_torus(rows: usize, cols: usize) -> Result<Graph> {
        if rows < 3 || cols < 3 {
            return Err(Error::Dimension { rows, cols });
        }
        let shape = TorusShape { rows, cols };
        let n = rows * cols;
        let mut open = vec![VertexSet::new(n); n];
        for r in 0..rows as i64 {
            for c in 0..cols as i64 {
                let v = shape.index(r, c);
                for dr in -1..=1 {
                    for dc in -1..=1 {
                        let u = shape.index(r + dr, c + dc);
                        if u != v {
                            open[v].insert(u);
                        }
                    }
                }
            }
        }
        Ok(Self::from_adjacency(open, Some(shape)))
    }

    fn from_adjacency(open: Vec<VertexSet>, torus: Option<TorusShape>) -> Graph {
        let closed = open
            .iter()
            .enumerate()
            .map(|(v, nbrs)| {
                let mut c = nbrs.clone();
                c.insert(v);
                c
            })
            .collect();
        let edge_count = open.iter().map(VertexSet::len).sum::<usize>() / 2;
        Graph { open, closed, edge_count, torus }
    }

    pub fn vertex_count(&self) -> usize {
        self.open.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.open[v].len()
    }

    pub fn torus_shape(&self) -> Option<TorusShape> {
        self.torus
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, vertex_count: self.vertex_count() })
        }
    }

    /// `N(v)` for [`DetectionKind::Open`], `N[v]` for [`DetectionKind::Closed`].
    pub fn neighbors(&self, v: usize, kind: DetectionKind) -> Result<&VertexSet> {
        self.check_vertex(v)?;
        Ok(self.region(v, kind))
    }

    /// Unchecked variant of [`Graph::neighbors`].
    #[inline]
    pub fn region(&self, v: usize, kind: DetectionKind) -> &VertexSet {
        match kind {
            DetectionKind::Open => &self.open[v],
            DetectionKind::Closed => &self.closed[v],
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.open[u].contains(v)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.open
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Human label: `(r,c)` on tori, the index otherwise.
    pub fn label(&self, v: usize) -> String {
        match self.torus {
            Some(shape) => {
                let (r, c) = shape.coords(v);
                format!("({r},{c})")
            }
            None => v.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_5x5_is_8_regular() {
        let g = Graph::king_torus(5, 5).unwrap();
        assert_eq!(g.vertex_count(), 25);
        assert!((0..25).all(|v| g.degree(v) == 8));
        let open = g.neighbors(0, DetectionKind::Open).unwrap();
        let shape = g.torus_shape().unwrap();
        for dr in -1..=1i64 {
            for dc in -1..=1i64 {
                let u = shape.index(dr, dc);
                assert_eq!(open.contains(u), (dr, dc) != (0, 0));
            }
        }
        let closed = g.neighbors(0, DetectionKind::Closed).unwrap();
        assert_eq!(closed.len(), 9);
        assert!(closed.contains(0));
    }

    #[test]
    fn torus_3x3_collapses_to_k9() {
        let g = Graph::king_torus(3, 3).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert!((0..9).all(|v| g.degree(v) == 8));
        assert_eq!(g.edge_count(), 36);
        assert!(!g.torus_shape().unwrap().is_faithful());
    }

    #[test]
    fn torus_6x6_edge_count() {
        // Direct count: each cell sees 8 distinct cells, every edge counted twice.
        let g = Graph::king_torus(6, 6).unwrap();
        let mut count = 0;
        for u in 0..36 {
            for v in 0..36 {
                let (ur, uc) = (u / 6, u % 6);
                let (vr, vc) = (v / 6, v % 6);
                let dr = (ur as i64 - vr as i64).rem_euclid(6);
                let dc = (uc as i64 - vc as i64).rem_euclid(6);
                let near = |d: i64| d == 0 || d == 1 || d == 5;
                if u < v && near(dr) && near(dc) {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 144);
        assert_eq!(g.edge_count(), 144);
        assert!((0..36).all(|v| g.degree(v) == 8));
    }

    #[test]
    fn small_tori_rejected() {
        assert_eq!(Graph::king_torus(2, 5), Err(Error::Dimension { rows: 2, cols: 5 }));
        assert!(Graph::king_torus(5, 1).is_err());
    }

    #[test]
    fn edge_list_semantics() {
        let p2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(p2.edge_count(), 1);
        assert!(p2.has_edge(1, 0));
        let dup = Graph::from_edges(3, &[(0, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(dup.edge_count(), 1);
        assert_eq!(dup.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert!(matches!(Graph::from_edges(3, &[(1, 1)]), Err(Error::Format(_))));
        assert!(matches!(Graph::from_edges(3, &[(0, 3)]), Err(Error::Format(_))));
    }

    #[test]
    fn single_vertex_open_region_is_empty() {
        let g = Graph::from_edges(1, &[]).unwrap();
        assert!(g.neighbors(0, DetectionKind::Open).unwrap().is_empty());
        assert_eq!(g.neighbors(0, DetectionKind::Closed).unwrap().to_vec(), vec![0]);
        assert_eq!(
            g.neighbors(1, DetectionKind::Open),
            Err(Error::InvalidVertex { vertex: 1, vertex_count: 1 })
        );
    }

    #[test]
    fn share_example_adjacency() {
        // v1..v8 are 0..7.
        let edges = [(0, 1), (1, 2), (1, 3), (1, 5), (0, 3), (2, 3), (3, 7), (4, 5), (5, 6)];
        let g = Graph::from_edges(8, &edges).unwrap();
        assert_eq!(g.neighbors(1, DetectionKind::Open).unwrap().to_vec(), vec![0, 2, 3, 5]);
        assert_eq!(g.neighbors(3, DetectionKind::Open).unwrap().to_vec(), vec![0, 1, 2, 7]);
    }

    fn ball(g: &Graph, v: usize, radius: usize) -> VertexSet {
        let mut seen = VertexSet::from_indices(g.vertex_count(), [v]);
        let mut frontier = seen.clone();
        for _ in 0..radius {
            let mut next = VertexSet::new(g.vertex_count());
            for u in frontier.iter() {
                next.union_with(g.region(u, DetectionKind::Open));
            }
            next.difference_with(&seen);
            seen.union_with(&next);
            frontier = next;
        }
        seen
    }

    #[test]
    fn wide_tori_match_the_grid_to_distance_two() {
        for (rows, cols) in [(6, 6), (6, 7), (9, 6), (8, 8)] {
            let g = Graph::king_torus(rows, cols).unwrap();
            let shape = g.torus_shape().unwrap();
            assert!(shape.is_faithful());
            for v in 0..g.vertex_count() {
                let (r, c) = shape.coords(v);
                // Canonical relabeling of the ball by grid offset.
                let offsets: Vec<(i64, i64)> =
                    (-2..=2).flat_map(|dr| (-2..=2).map(move |dc| (dr, dc))).collect();
                let image: Vec<usize> =
                    offsets.iter().map(|&(dr, dc)| shape.index(r as i64 + dr, c as i64 + dc)).collect();
                let distinct = VertexSet::from_indices(g.vertex_count(), image.iter().copied());
                assert_eq!(distinct.len(), 25);
                assert_eq!(distinct, ball(&g, v, 2));
                for (i, a) in offsets.iter().enumerate() {
                    for (j, b) in offsets.iter().enumerate() {
                        let king = i != j && (a.0 - b.0).abs() <= 1 && (a.1 - b.1).abs() <= 1;
                        assert_eq!(g.has_edge(image[i], image[j]), king);
                    }
                }
            }
        }
    }

    #[test]
    fn five_wide_tori_wrap_the_ball_but_keep_regions_exact() {
        // Offsets -2 and +2 coincide modulo 5 up to adjacency, so the ball
        // closes up; regions of cells up to distance 2 still meet as in the plane.
        let g = Graph::king_torus(5, 5).unwrap();
        let shape = g.torus_shape().unwrap();
        assert!(g.has_edge(shape.index(0, -2), shape.index(0, 2)));
        for kind in DetectionKind::ALL {
            for dr in -2..=2i64 {
                for dc in -2..=2i64 {
                    let v = shape.index(dr, dc);
                    let shared = g.region(0, kind).intersection_len(g.region(v, kind));
                    let plane = (-1..=1i64)
                        .flat_map(|a| (-1..=1i64).map(move |b| (a, b)))
                        .filter(|&(a, b)| kind.includes_self() || (a, b) != (0, 0))
                        .filter(|&(a, b)| {
                            let (x, y) = (a - dr, b - dc);
                            x.abs() <= 1 && y.abs() <= 1 && (kind.includes_self() || (x, y) != (0, 0))
                        })
                        .count();
                    assert_eq!(shared, plane, "offset ({dr},{dc}) {kind}");
                }
            }
        }
    }
}
