//! Fixtures shared by the benchmarks.

use redset_core::{DetectionKind, Graph, PeriodicPattern};

/// The builtin pattern `name` lifted to an `n`×`n` king torus.
pub fn lifted(name: &str, n: usize) -> (Graph, Vec<usize>) {
    let pattern: PeriodicPattern = redset_core::periodic::builtin(name).expect("builtin exists");
    let lifted = pattern.lift_to_torus(n / pattern.rows(), n / pattern.cols()).expect("faithful lift");
    let members = lifted.members.to_vec();
    (lifted.graph, members)
}

pub const KINDS: [DetectionKind; 2] = [DetectionKind::Open, DetectionKind::Closed];
