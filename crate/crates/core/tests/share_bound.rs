mod common;

use std::collections::BTreeSet;

use itertools::Itertools;
use redset_core::periodic::builtin_patterns;
use redset_core::rational::{ratio, SHARE_DENOMINATOR};
use redset_core::share_bound::{
    bit, certified_max_share, certified_max_share_value, classify_high_share, lemma_bound, offset, units_to_rational,
    Enumerator, LemmaBoundQuery, Patch, PatchConstraint, CELLS, CENTER_BIT,
};
use redset_core::{Cell, DetectionKind, Dihedral, Rational};

#[test]
fn lemma_bound_matches_the_oracle() {
    for a in 1..=8 {
        for d in 1..=8 {
            for k in 0..=4 {
                assert_eq!(lemma_bound(LemmaBoundQuery::new(a, d, k).unwrap()), common::lemma_oracle(a, d, k));
            }
        }
    }
}

#[test]
fn census_matches_unpruned_bitmask_oracle() {
    for kind in DetectionKind::ALL {
        let census = Enumerator::new(kind, PatchConstraint::NONE).census(None);
        let oracle = common::patch_oracle(kind.includes_self());
        assert_eq!(census.feasible, oracle.feasible, "{kind}");
        assert_eq!(census.histogram, oracle.histogram, "{kind}");
        assert_eq!(census.max_share(), Some(certified_max_share_value(kind)));
    }
}

#[test]
fn pruned_walk_is_complete_on_restricted_windows() {
    // Cells outside a 4x4 sub-window are fixed empty; the remaining 15 free
    // cells are enumerated without pruning and checked directly.
    for (top, left) in [(0i64, 0i64), (0, 1), (1, 0), (1, 1)] {
        let inside = |o: Cell| (top..top + 4).contains(&(o.0 + 2)) && (left..left + 4).contains(&(o.1 + 2));
        let forbidden = (0..CELLS).filter(|&b| !inside(offset(b))).fold(0u32, |m, b| m | 1 << b);
        let free: Vec<usize> = (0..CELLS).filter(|&b| inside(offset(b)) && b != CENTER_BIT).collect();
        let constraint = PatchConstraint::from_masks(0, forbidden).unwrap();
        for kind in DetectionKind::ALL {
            let mut walked = Vec::new();
            Enumerator::new(kind, constraint).for_each(|p, units| walked.push((p, units)));
            let mut reference = Vec::new();
            for m in 0u32..1 << free.len() {
                let mask = free.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).fold(1 << CENTER_BIT, |acc, (_, &b)| acc | 1 << b);
                let patch = Patch::from_mask(mask).unwrap();
                if patch.is_feasible(kind) {
                    let share = patch.share(kind).unwrap() * Rational::from_integer(SHARE_DENOMINATOR as i64);
                    reference.push((patch, share.to_integer() as u32));
                }
            }
            walked.sort();
            reference.sort();
            assert_eq!(walked.len(), walked.iter().map(|w| w.0).collect::<BTreeSet<_>>().len());
            assert_eq!(walked, reference, "{kind} window at ({top},{left})");
        }
    }
}

#[test]
fn windows_of_valid_patterns_are_feasible_with_equal_share() {
    for (name, p) in builtin_patterns() {
        for kind in DetectionKind::ALL {
            if !p.verify_infinite(kind, 1).is_valid() {
                continue;
            }
            let lifted = p.lift_to_torus(p.faithful_copies().0, p.faithful_copies().1).unwrap();
            let ds = lifted.detector_set(kind);
            let shape = lifted.graph.torus_shape().unwrap();
            for x in ds.members().iter() {
                let (r, c) = shape.coords(x);
                let patch = Patch::from_pattern(&p, (r as i64, c as i64)).unwrap();
                assert!(patch.is_feasible(kind), "{name} {kind} at {x}");
                assert_eq!(patch.share(kind).unwrap(), ds.share(x).unwrap());
            }
        }
    }
}

#[test]
fn feasibility_and_share_are_symmetric() {
    for kind in DetectionKind::ALL {
        let mut n = 0u64;
        Enumerator::new(kind, PatchConstraint::NONE).for_each(|p, units| {
            n += 1;
            if n % 1009 != 0 {
                return;
            }
            for g in Dihedral::all() {
                let q = p.transform(g);
                assert!(q.is_feasible(kind));
                assert_eq!(q.share(kind), Some(units_to_rational(units)));
            }
        });
    }
}

#[test]
fn partial_shares_respect_the_common_detector_bound() {
    for kind in DetectionKind::ALL {
        let mut n = 0u64;
        let mut checked = 0u64;
        Enumerator::new(kind, PatchConstraint::NONE).for_each(|p, _| {
            n += 1;
            if n % 211 != 0 {
                return;
            }
            let closed = kind.includes_self();
            let watched: Vec<Cell> =
                (-1..=1).flat_map(|r| (-1..=1).map(move |c| (r, c))).filter(|&u| closed || u != (0, 0)).collect();
            let watches = |det: Cell, u: Cell| {
                (det.0 - u.0).abs() <= 1 && (det.1 - u.1).abs() <= 1 && (closed || det != u)
            };
            for other in (0..CELLS).map(offset).filter(|&o| o != (0, 0) && p.is_detector(o)) {
                let common: Vec<Cell> =
                    watched.iter().copied().filter(|&u| watches((0, 0), u) && watches(other, u)).collect();
                for size in 1..=common.len() {
                    for area in common.iter().combinations(size) {
                        let partial: Rational = area.iter().map(|&&u| ratio(1, p.dom(u, kind) as i64)).sum();
                        let bound = lemma_bound(LemmaBoundQuery::new(size as u32, 2, 2).unwrap());
                        assert!(partial <= bound, "{p:?} {kind} with {other:?}");
                        checked += 1;
                    }
                }
            }
        });
        assert!(checked > 1000);
    }
}

#[test]
fn orthogonal_neighbour_classes_stay_below_thirteen_quarters() {
    for spec in ["?X?/?X?/???", "???/XX?/???", "???/?XX/???", "???/?X?/?X?"] {
        let cert = certified_max_share(DetectionKind::Open, spec.parse().unwrap());
        assert_eq!(cert.max_share, Some(ratio(13, 4)), "{spec}");
    }
    let diagonal = certified_max_share(DetectionKind::Open, "X??/?X?/???".parse().unwrap());
    assert_eq!(diagonal.max_share, Some(ratio(7, 2)));
}

#[test]
fn high_share_reports() {
    let report = classify_high_share(DetectionKind::Open, ratio(10, 3), ratio(13, 4));
    let values: Vec<Rational> = report.share_values.iter().map(|s| s.share).collect();
    assert_eq!(values, [ratio(69, 20), ratio(7, 2)]);
    assert_eq!(report.patch_count, 24);
    assert_eq!(report.patches.iter().map(|p| p.orientations).sum::<usize>(), 24);
    assert!(report.all_doubly_supported());
    // The 69/20 terminal configuration: x with v2, v4, v6 and ring cells v12, v16, v18, v23.
    let ring = [(-1, 1), (1, 1), (1, -1), (-1, 2), (2, 1), (2, -1), (-2, -2)];
    let mask = ring.iter().fold(1 << CENTER_BIT, |m, &o| m | 1 << bit(o).unwrap());
    let terminal = Patch::from_mask(mask).unwrap();
    assert_eq!(terminal.share(DetectionKind::Open), Some(ratio(69, 20)));
    assert!(report.patches.iter().any(|p| p.patch == terminal.canonical()));

    assert!(classify_high_share(DetectionKind::Open, ratio(7, 2), ratio(13, 4)).patches.is_empty());
    assert!(classify_high_share(DetectionKind::Closed, ratio(11, 3), ratio(13, 4)).patches.is_empty());
}

#[test]
fn results_do_not_depend_on_pool_size() {
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let report = classify_high_share(DetectionKind::Open, ratio(10, 3), ratio(13, 4));
            let cert = certified_max_share(DetectionKind::Closed, "?X?/?X?/???".parse().unwrap());
            (serde_json::to_string(&report).unwrap(), serde_json::to_string(&cert).unwrap())
        })
    };
    assert_eq!(run(1), run(5));
}
