//! Per-detector share bounds on the king's grid for redundancy 1.
//!
//! A [`Patch`] is the 5×5 window around a detector `x`. Its 3×3 core is the
//! set of cells whose whole detection region lies in the window, so their
//! domination counts and pairwise code differences are exact. A patch is
//! feasible when every core cell is 2-dominated and every two core cells are
//! 2-distinguished; the window around any detector of a 1-redundant set is
//! feasible. The share of `x` only involves core cells, so the largest share
//! over feasible patches bounds the share of every detector of every
//! 1-redundant set, and its reciprocal bounds the density from below.

mod enumerate;
mod lemma;
mod patch;

use std::collections::BTreeSet;

use serde::Serialize;

pub use enumerate::{units_to_rational, Census, Enumerator, PatchConstraint};
pub use lemma::{lemma_bound, LemmaBoundQuery};
pub use patch::{bit, core_offsets, offset, Patch, CELLS, CENTER_BIT, SIDE};

use crate::geometry::{Cell, Dihedral};
use crate::graph::DetectionKind;
use crate::rational::{self, Rational};

/// Largest share of a detector in a 1-redundant set, as established by
/// [`certified_max_share`] without constraints.
pub fn certified_max_share_value(kind: DetectionKind) -> Rational {
    match kind {
        DetectionKind::Open => Rational::new(7, 2),
        DetectionKind::Closed => Rational::new(7, 2),
    }
}

/// Result of a full enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: DetectionKind,
    pub constraint: String,
    pub feasible_patches: u64,
    #[serde(with = "rational::opt_as_string")]
    pub max_share: Option<Rational>,
    /// `1 / max_share`.
    #[serde(with = "rational::opt_as_string")]
    pub density_bound: Option<Rational>,
    /// Number of patches attaining the maximum.
    pub argmax_count: usize,
    /// Those patches up to rotation and reflection.
    pub argmax: Vec<Patch>,
    /// Every share value that occurs, with the number of patches.
    pub share_values: Vec<ShareCount>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShareCount {
    #[serde(with = "rational::as_string")]
    pub share: Rational,
    pub patches: u64,
}

fn share_counts(histogram: impl IntoIterator<Item = (u32, u64)>) -> Vec<ShareCount> {
    histogram.into_iter().map(|(units, patches)| ShareCount { share: units_to_rational(units), patches }).collect()
}

fn distinct_canonical(patches: impl IntoIterator<Item = Patch>) -> Vec<Patch> {
    patches.into_iter().map(Patch::canonical).collect::<BTreeSet<_>>().into_iter().collect()
}

/// Enumerates every feasible patch admitted by `constraint` and reports the
/// largest share of the centre.
pub fn certified_max_share(kind: DetectionKind, constraint: PatchConstraint) -> Certificate {
    let census = Enumerator::new(kind, constraint).census(None);
    certificate(&census, constraint)
}

fn certificate(census: &Census, constraint: PatchConstraint) -> Certificate {
    let max_share = census.max_share();
    Certificate {
        kind: census.kind,
        constraint: constraint.to_string(),
        feasible_patches: census.feasible,
        max_share,
        density_bound: max_share.map(|m| m.recip()),
        argmax_count: census.argmax.len(),
        argmax: distinct_canonical(census.argmax.iter().copied()),
        share_values: share_counts(census.histogram.iter().map(|(&u, &n)| (u, n))),
    }
}

/// Default share above which a detector needs help from its neighbours.
pub fn default_threshold() -> Rational {
    Rational::new(10, 3)
}

/// Share a supporting neighbour may not exceed.
pub fn default_class_limit() -> Rational {
    Rational::new(13, 4)
}

/// A detector adjacent to the centre of a high-share patch. Its eight
/// neighbours all lie in the patch, so the largest share any detector with
/// that exact neighbourhood can have is known from the census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjacentDetector {
    pub offset: Cell,
    /// Its 3×3 neighbourhood in constraint syntax.
    pub neighborhood: String,
    #[serde(with = "rational::as_string")]
    pub class_max: Rational,
    pub within_limit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HighSharePatch {
    /// Least image under rotations and reflections.
    pub patch: Patch,
    #[serde(with = "rational::as_string")]
    pub share: Rational,
    /// Distinct images of the patch under rotations and reflections.
    pub orientations: usize,
    pub adjacent: Vec<AdjacentDetector>,
    /// Adjacent detectors within the class limit.
    pub supported_by: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HighShareReport {
    pub kind: DetectionKind,
    #[serde(with = "rational::as_string")]
    pub threshold: Rational,
    #[serde(with = "rational::as_string")]
    pub class_limit: Rational,
    /// All feasible patches above the threshold, counting every orientation.
    pub patch_count: usize,
    pub share_values: Vec<ShareCount>,
    pub patches: Vec<HighSharePatch>,
    /// Least `supported_by` over all reported patches, if any.
    pub min_support: Option<usize>,
}

impl HighShareReport {
    /// Every reported patch has at least two supporting neighbours.
    pub fn all_doubly_supported(&self) -> bool {
        self.min_support.map_or(true, |m| m >= 2)
    }
}

/// Lists the feasible patches whose share exceeds `threshold` and, for each,
/// which adjacent detectors belong to a neighbourhood class whose largest
/// share is at most `class_limit`.
pub fn classify_high_share(kind: DetectionKind, threshold: Rational, class_limit: Rational) -> HighShareReport {
    let census = Enumerator::new(kind, PatchConstraint::NONE).census(Some(threshold));
    classify(&census, threshold, class_limit)
}

/// Same as [`classify_high_share`] on a census that was taken with the same
/// threshold.
pub fn classify(census: &Census, threshold: Rational, class_limit: Rational) -> HighShareReport {
    let mut values = std::collections::BTreeMap::new();
    for &(_, units) in &census.above {
        *values.entry(units).or_insert(0u64) += 1;
    }
    let mut seen = BTreeSet::new();
    let mut patches = Vec::new();
    for &(patch, units) in &census.above {
        let canonical = patch.canonical();
        if !seen.insert(canonical) {
            continue;
        }
        let adjacent: Vec<AdjacentDetector> = canonical
            .adjacent_detectors()
            .into_iter()
            .map(|w| {
                let mask = canonical.neighbor_mask(w);
                let class_max = census.neighborhood_max(mask).expect("a feasible patch has this neighbourhood");
                AdjacentDetector {
                    offset: w,
                    neighborhood: PatchConstraint::neighborhood(mask).to_string(),
                    class_max,
                    within_limit: class_max <= class_limit,
                }
            })
            .collect();
        let orientations = Dihedral::all().map(|g| canonical.transform(g)).collect::<BTreeSet<_>>().len();
        patches.push(HighSharePatch {
            patch: canonical,
            share: units_to_rational(units),
            orientations,
            supported_by: adjacent.iter().filter(|a| a.within_limit).count(),
            adjacent,
        });
    }
    patches.sort_by(|a, b| b.share.cmp(&a.share).then(a.patch.cmp(&b.patch)));
    HighShareReport {
        kind: census.kind,
        threshold,
        class_limit,
        patch_count: census.above.len(),
        share_values: share_counts(values),
        min_support: patches.iter().map(|p| p.supported_by).min(),
        patches,
    }
}
