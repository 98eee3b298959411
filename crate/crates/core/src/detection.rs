//! Locating codes, domination counts, redundancy verification and shares.
//!
//! Both detection kinds are uniform and symmetric, so the locating code of a
//! vertex `v` is simply `R(v) ∩ S` where `R` is `N` or `N[·]`. A detector set
//! is `k`-redundant exactly when every vertex is at least `(k+1)`-dominated
//! and every pair of distinct vertices is `(k+1)`-distinguished;
//! [`DetectorSet::verify`] checks that characterisation while
//! [`DetectorSet::verify_by_deletion`] checks the definition literally.

use itertools::Itertools;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{DetectionKind, Graph};
use crate::rational::Rational;
use crate::vertex_set::VertexSet;

/// Upper bound on the number of reduced sets [`DetectorSet::verify_by_deletion`]
/// re-verifies before giving up.
pub const DEFAULT_DELETION_BUDGET: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocatingCode {
    pub vertex: usize,
    pub code: VertexSet,
}

/// Why a detector set fails to be `k`-redundant. `V` is the vertex type of
/// the witness: indices on finite graphs, grid cells on the infinite grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation<V = usize> {
    UnderDominated { vertex: V, dom: usize, required: usize },
    Indistinguishable { u: V, v: V, difference: usize, required: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<V = usize> {
    Valid,
    Invalid(Violation<V>),
}

impl<V> Verdict<V> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn violation(&self) -> Option<&Violation<V>> {
        match self {
            Verdict::Valid => None,
            Verdict::Invalid(v) => Some(v),
        }
    }

    pub fn map<W>(self, f: impl Fn(V) -> W) -> Verdict<W> {
        match self {
            Verdict::Valid => Verdict::Valid,
            Verdict::Invalid(Violation::UnderDominated { vertex, dom, required }) => {
                Verdict::Invalid(Violation::UnderDominated { vertex: f(vertex), dom, required })
            }
            Verdict::Invalid(Violation::Indistinguishable { u, v, difference, required }) => {
                Verdict::Invalid(Violation::Indistinguishable { u: f(u), v: f(v), difference, required })
            }
        }
    }
}

impl<V> Violation<V> {
    pub fn reason(&self) -> &'static str {
        match self {
            Violation::UnderDominated { .. } => "under_dominated",
            Violation::Indistinguishable { .. } => "indistinguishable",
        }
    }
}

impl<V: Serialize> Serialize for Violation<V> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Violation::UnderDominated { vertex, dom, required } => {
                let mut st = s.serialize_struct("UnderDominated", 3)?;
                st.serialize_field("vertex", vertex)?;
                st.serialize_field("dom", dom)?;
                st.serialize_field("required", required)?;
                st.end()
            }
            Violation::Indistinguishable { u, v, difference, required } => {
                let mut st = s.serialize_struct("Indistinguishable", 4)?;
                st.serialize_field("u", u)?;
                st.serialize_field("v", v)?;
                st.serialize_field("difference", difference)?;
                st.serialize_field("required", required)?;
                st.end()
            }
        }
    }
}

/// `{"status": "valid"|"invalid", "reason": ..., "witness": ...}`
impl<V: Serialize> Serialize for Verdict<V> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Verdict", 3)?;
        match self {
            Verdict::Valid => {
                st.serialize_field("status", "valid")?;
                st.serialize_field("reason", &None::<&str>)?;
                st.serialize_field("witness", &None::<()>)?;
            }
            Verdict::Invalid(v) => {
                st.serialize_field("status", "invalid")?;
                st.serialize_field("reason", v.reason())?;
                st.serialize_field("witness", v)?;
            }
        }
        st.end()
    }
}

/// Two vertices whose locating codes differ in fewer than the required
/// number of detectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairWitness {
    pub u: usize,
    pub v: usize,
    pub code_u: VertexSet,
    pub code_v: VertexSet,
}

impl PairWitness {
    pub fn difference(&self) -> usize {
        self.code_u.symmetric_difference_len(&self.code_v)
    }
}

/// A detector set `S` on a graph together with the kind of region each
/// detector watches.
#[derive(Clone, Debug)]
pub struct DetectorSet<'g> {
    graph: &'g Graph,
    kind: DetectionKind,
    members: VertexSet,
}

impl<'g> DetectorSet<'g> {
    pub fn new(graph: &'g Graph, kind: DetectionKind, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = VertexSet::new(graph.vertex_count());
        for v in members {
            graph.check_vertex(v)?;
            set.insert(v);
        }
        Ok(DetectorSet { graph, kind, members: set })
    }

    pub fn from_set(graph: &'g Graph, kind: DetectionKind, members: VertexSet) -> Result<Self> {
        if members.universe() != graph.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "detector set over {} vertices used with a graph of {}",
                members.universe(),
                graph.vertex_count()
            )));
        }
        Ok(DetectorSet { graph, kind, members })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn kind(&self) -> DetectionKind {
        self.kind
    }

    pub fn members(&self) -> &VertexSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Same graph and kind, different members.
    pub fn with_members(&self, members: VertexSet) -> DetectorSet<'g> {
        DetectorSet { graph: self.graph, kind: self.kind, members }
    }

    /// `|S| / |V|`.
    pub fn density(&self) -> Rational {
        Rational::new(self.len() as i64, self.graph.vertex_count().max(1) as i64)
    }

    fn code(&self, v: usize) -> VertexSet {
        self.graph.region(v, self.kind).intersection(&self.members)
    }

    #[inline]
    fn dom(&self, v: usize) -> usize {
        self.graph.region(v, self.kind).intersection_len(&self.members)
    }

    pub fn locating_code(&self, v: usize) -> Result<LocatingCode> {
        self.graph.check_vertex(v)?;
        Ok(LocatingCode { vertex: v, code: self.code(v) })
    }

    pub fn dom_count(&self, v: usize) -> Result<usize> {
        self.graph.check_vertex(v)?;
        Ok(self.dom(v))
    }

    /// First pair `(u, v)`, `u < v` in lexicographic order, whose codes differ
    /// in fewer than `k` detectors.
    pub fn find_indistinguished_pair(&self, k: usize) -> Option<PairWitness> {
        if k == 0 {
            return None;
        }
        let codes: Vec<VertexSet> = (0..self.graph.vertex_count()).map(|v| self.code(v)).collect();
        codes.iter().enumerate().tuple_combinations().find_map(|((u, cu), (v, cv))| {
            (cu.symmetric_difference_len(cv) < k).then(|| PairWitness {
                u,
                v,
                code_u: cu.clone(),
                code_v: cv.clone(),
            })
        })
    }

    pub fn is_k_distinguishing(&self, k: usize) -> bool {
        self.find_indistinguished_pair(k).is_none()
    }

    /// Checks `redundancy`-redundancy through domination and distinguishing
    /// counts. Under-dominated vertices are reported before pairs; within
    /// each class the lexicographically least witness wins.
    pub fn verify(&self, redundancy: usize) -> Verdict {
        let required = redundancy + 1;
        for v in 0..self.graph.vertex_count() {
            let dom = self.dom(v);
            if dom < required {
                return Verdict::Invalid(Violation::UnderDominated { vertex: v, dom, required });
            }
        }
        match self.find_indistinguished_pair(required) {
            None => Verdict::Valid,
            Some(w) => Verdict::Invalid(Violation::Indistinguishable {
                u: w.u,
                v: w.v,
                difference: w.difference(),
                required,
            }),
        }
    }

    pub fn verify_by_deletion(&self, redundancy: usize) -> Result<Verdict> {
        self.verify_by_deletion_with_budget(redundancy, DEFAULT_DELETION_BUDGET)
    }

    /// Checks the definition directly: removing any `redundancy` or fewer
    /// detectors must leave a detection system. The witness is the violation
    /// found in the first failing reduced set.
    pub fn verify_by_deletion_with_budget(&self, redundancy: usize, budget: u128) -> Result<Verdict> {
        let size = self.len();
        let required: u128 = (0..=redundancy.min(size)).map(|i| binomial(size as u128, i as u128)).sum();
        if required > budget {
            return Err(Error::Budget { what: "deletion check", required, budget });
        }
        let members = self.members.to_vec();
        for removed in 0..=redundancy.min(size) {
            for deleted in members.iter().copied().combinations(removed) {
                let mut reduced = self.members.clone();
                for d in deleted {
                    reduced.remove(d);
                }
                let verdict = self.with_members(reduced).verify(0);
                if !verdict.is_valid() {
                    return Ok(verdict);
                }
            }
        }
        Ok(Verdict::Valid)
    }

    /// `sh(x)`: the sum of `1/dom(u)` over the detection region of `x`.
    pub fn share(&self, x: usize) -> Result<Rational> {
        self.graph.check_vertex(x)?;
        let region = self.graph.region(x, self.kind).clone();
        self.partial_share(x, &region)
    }

    /// `sh[A](x)`: the share of `x` restricted to `area ⊆ R(x)`.
    pub fn partial_share(&self, x: usize, area: &VertexSet) -> Result<Rational> {
        self.graph.check_vertex(x)?;
        if !self.members.contains(x) {
            return Err(Error::NotADetector { vertex: x });
        }
        let region = self.graph.region(x, self.kind);
        let mut total = Rational::zero();
        for u in area.iter() {
            self.graph.check_vertex(u)?;
            if !region.contains(u) {
                return Err(Error::OutsideRegion { vertex: u, detector: x });
            }
            let dom = self.dom(u);
            // x itself covers u, so this only trips on inconsistent input.
            if dom == 0 {
                return Err(Error::UndefinedShare { detector: x, vertex: u });
            }
            total += Rational::new(1, dom as i64);
        }
        Ok(total)
    }
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}
