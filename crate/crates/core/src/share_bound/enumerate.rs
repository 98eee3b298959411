use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::patch::{bit, core_offsets, offset, Patch, CELLS, CENTER_BIT, REQUIRED};
use crate::error::{Error, Result};
use crate::geometry::{chebyshev, region_offsets, Cell, KING_OFFSETS};
use crate::graph::DetectionKind;
use crate::rational::{Rational, SHARE_DENOMINATOR};

/// Cells fixed before enumeration. Written as rows of `X` (detector), `.`
/// (non-detector) and `?` (free) separated by `/`; either the 3×3 block
/// around the centre or the whole 5×5 window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PatchConstraint {
    required: u32,
    forbidden: u32,
}

impl Default for PatchConstraint {
    fn default() -> Self {
        PatchConstraint::NONE
    }
}

impl PatchConstraint {
    pub const NONE: PatchConstraint = PatchConstraint { required: 1 << CENTER_BIT, forbidden: 0 };

    pub fn from_masks(required: u32, forbidden: u32) -> Result<Self> {
        let required = required | 1 << CENTER_BIT;
        if (required | forbidden) >> CELLS != 0 || required & forbidden != 0 {
            return Err(Error::InvalidArgument(format!(
                "inconsistent patch constraint: required {required:#x}, forbidden {forbidden:#x}"
            )));
        }
        Ok(PatchConstraint { required, forbidden })
    }

    /// Fixes the eight neighbours of the centre to `mask`, bit `i` for the
    /// `i`-th entry of [`KING_OFFSETS`].
    pub fn neighborhood(mask: u8) -> Self {
        let bits = |m: u8| {
            KING_OFFSETS.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).fold(0, |acc, (_, &o)| acc | 1 << bit(o).unwrap())
        };
        Self::from_masks(bits(mask), bits(!mask)).expect("disjoint by construction")
    }

    pub fn required(&self) -> u32 {
        self.required
    }

    pub fn forbidden(&self) -> u32 {
        self.forbidden
    }

    pub fn admits(&self, patch: Patch) -> bool {
        patch.mask() & self.required == self.required && patch.mask() & self.forbidden == 0
    }

    fn forced(&self, b: usize) -> Option<bool> {
        if self.required >> b & 1 == 1 {
            Some(true)
        } else if self.forbidden >> b & 1 == 1 {
            Some(false)
        } else {
            None
        }
    }

    /// True when only the 3×3 block is constrained.
    fn is_local(&self) -> bool {
        (0..CELLS).all(|b| self.forced(b).is_none() || chebyshev(offset(b), (0, 0)) <= 1)
    }
}

impl fmt::Display for PatchConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let radius = if self.is_local() { 1 } else { 2 };
        let rows: Vec<String> = (-radius..=radius)
            .map(|r| {
                (-radius..=radius)
                    .map(|c| match self.forced(bit((r, c)).unwrap()) {
                        Some(true) => 'X',
                        Some(false) => '.',
                        None => '?',
                    })
                    .collect()
            })
            .collect();
        f.write_str(&rows.join("/"))
    }
}

impl FromStr for PatchConstraint {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let rows: Vec<&str> = text.trim().split(['/', '\n']).map(str::trim).filter(|r| !r.is_empty()).collect();
        let side = rows.len();
        if !(side == 3 || side == 5) || rows.iter().any(|r| r.chars().count() != side) {
            return Err(Error::format(format!("constraint must be 3x3 or 5x5 rows of X/./?, got {text:?}")));
        }
        let radius = (side / 2) as i64;
        let (mut required, mut forbidden) = (0, 0);
        for (r, row) in rows.iter().enumerate() {
            for (c, ch) in row.chars().enumerate() {
                let b = bit((r as i64 - radius, c as i64 - radius)).unwrap();
                match ch {
                    'X' | 'x' => required |= 1 << b,
                    '.' => forbidden |= 1 << b,
                    '?' => {}
                    other => return Err(Error::format(format!("unexpected character {other:?} in constraint"))),
                }
            }
        }
        if forbidden >> CENTER_BIT & 1 == 1 {
            return Err(Error::format("the centre of a patch is always a detector"));
        }
        Self::from_masks(required, forbidden).map_err(|e| Error::format(e.to_string()))
    }
}

/// Aggregate over every feasible patch admitted by a constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub kind: DetectionKind,
    pub feasible: u64,
    /// Largest share, in units of `1/SHARE_DENOMINATOR`.
    pub max_units: Option<u32>,
    /// Every patch attaining the largest share, by mask.
    pub argmax: Vec<Patch>,
    /// Number of feasible patches per share value.
    pub histogram: BTreeMap<u32, u64>,
    /// Largest share per exact neighbourhood of the centre.
    pub max_by_neighborhood: Vec<Option<u32>>,
    /// Patches whose share exceeds the requested threshold, with their share.
    pub above: Vec<(Patch, u32)>,
}

impl Census {
    fn empty(kind: DetectionKind) -> Self {
        Census {
            kind,
            feasible: 0,
            max_units: None,
            argmax: Vec::new(),
            histogram: BTreeMap::new(),
            max_by_neighborhood: vec![None; 256],
            above: Vec::new(),
        }
    }

    pub fn max_share(&self) -> Option<Rational> {
        self.max_units.map(units_to_rational)
    }

    pub fn neighborhood_max(&self, mask: u8) -> Option<Rational> {
        self.max_by_neighborhood[mask as usize].map(units_to_rational)
    }

    fn merge(&mut self, other: Census) {
        self.feasible += other.feasible;
        match self.max_units.cmp(&other.max_units) {
            std::cmp::Ordering::Less => {
                self.max_units = other.max_units;
                self.argmax = other.argmax;
            }
            std::cmp::Ordering::Equal => self.argmax.extend(other.argmax),
            std::cmp::Ordering::Greater => {}
        }
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        for (mine, theirs) in self.max_by_neighborhood.iter_mut().zip(other.max_by_neighborhood) {
            *mine = (*mine).max(theirs);
        }
        self.above.extend(other.above);
    }

    fn record(&mut self, mask: u32, units: u32, neighborhood: u8, above: Option<u32>) {
        self.feasible += 1;
        match self.max_units {
            Some(m) if m > units => {}
            Some(m) if m == units => self.argmax.push(Patch::from_mask_unchecked(mask)),
            _ => {
                self.max_units = Some(units);
                self.argmax = vec![Patch::from_mask_unchecked(mask)];
            }
        }
        *self.histogram.entry(units).or_default() += 1;
        let slot = &mut self.max_by_neighborhood[neighborhood as usize];
        *slot = (*slot).max(Some(units));
        if above.is_some_and(|t| units > t) {
            self.above.push((Patch::from_mask_unchecked(mask), units));
        }
    }

    fn finish(mut self) -> Self {
        self.argmax.sort_unstable();
        self.above.sort_unstable();
        self
    }
}

pub fn units_to_rational(units: u32) -> Rational {
    crate::rational::from_share_units(units)
}

/// Largest share count strictly below `threshold`, so that `units > result`
/// iff `units / SHARE_DENOMINATOR > threshold`.
fn threshold_units(threshold: Rational) -> u32 {
    let scaled = threshold * Rational::from_integer(SHARE_DENOMINATOR as i64);
    scaled.floor().to_integer().clamp(0, u32::MAX as i64) as u32
}

const DIVIDE: [u32; 10] = {
    let mut t = [0; 10];
    let mut d = 1;
    while d < 10 {
        t[d] = SHARE_DENOMINATOR / d as u32;
        d += 1;
    }
    t
};

/// Cells decided before work is split across threads.
const SPLIT_DEPTH: usize = 10;

/// Depth-first walk over the 24 non-centre cells, row-major, assigning each
/// cell non-detector before detector. Read as a 25-bit counter with the
/// top-left cell most significant, patches come out in increasing order. A branch is cut as soon as
/// some core constraint can no longer reach its demand.
pub struct Enumerator {
    kind: DetectionKind,
    constraint: PatchConstraint,
    order: Vec<usize>,
    /// Constraints each cell takes part in.
    member_of: Vec<Vec<u16>>,
    /// Cells in each constraint.
    sizes: Vec<u8>,
    /// Domination constraints of the cells the centre watches.
    share_terms: Vec<usize>,
}

#[derive(Clone)]
struct Frame {
    mask: u32,
    achieved: Vec<u8>,
    open: Vec<u8>,
}

impl Enumerator {
    pub fn new(kind: DetectionKind, constraint: PatchConstraint) -> Self {
        let closed = kind.includes_self();
        let region = |u: Cell| -> Vec<usize> { region_offsets(closed).map(|o| bit((u.0 + o.0, u.1 + o.1)).unwrap()).collect() };
        let core: Vec<Cell> = core_offsets().collect();
        let mut cell_sets: Vec<Vec<usize>> = core.iter().map(|&u| region(u)).collect();
        for i in 0..core.len() {
            for j in i + 1..core.len() {
                let (a, b) = (region(core[i]), region(core[j]));
                let diff: Vec<usize> = a.iter().filter(|x| !b.contains(x)).chain(b.iter().filter(|x| !a.contains(x))).copied().collect();
                cell_sets.push(diff);
            }
        }
        let mut member_of = vec![Vec::new(); CELLS];
        for (c, cells) in cell_sets.iter().enumerate() {
            for &b in cells {
                member_of[b].push(c as u16);
            }
        }
        let share_terms = region_offsets(closed).map(|u| core.iter().position(|&x| x == u).unwrap()).collect();
        Enumerator {
            kind,
            constraint,
            order: (0..CELLS).filter(|&b| b != CENTER_BIT).collect(),
            member_of,
            sizes: cell_sets.iter().map(|s| s.len() as u8).collect(),
            share_terms,
        }
    }

    pub fn kind(&self) -> DetectionKind {
        self.kind
    }

    fn root(&self) -> Option<Frame> {
        let mut frame = Frame { mask: 0, achieved: vec![0; self.sizes.len()], open: self.sizes.clone() };
        self.assign(&mut frame, CENTER_BIT, true).then_some(frame)
    }

    /// Records `value` for cell `b`; false if a constraint became unreachable.
    fn assign(&self, frame: &mut Frame, b: usize, value: bool) -> bool {
        let mut ok = true;
        if value {
            frame.mask |= 1 << b;
        }
        for &c in &self.member_of[b] {
            let c = c as usize;
            frame.open[c] -= 1;
            frame.achieved[c] += value as u8;
            ok &= (frame.achieved[c] + frame.open[c]) as u32 >= REQUIRED;
        }
        ok
    }

    fn unassign(&self, frame: &mut Frame, b: usize, value: bool) {
        frame.mask &= !(1 << b);
        for &c in &self.member_of[b] {
            let c = c as usize;
            frame.open[c] += 1;
            frame.achieved[c] -= value as u8;
        }
    }

    fn choices(&self, b: usize) -> &'static [bool] {
        match self.constraint.forced(b) {
            Some(true) => &[true],
            Some(false) => &[false],
            None => &[false, true],
        }
    }

    fn walk(&self, frame: &mut Frame, depth: usize, stop: usize, visit: &mut dyn FnMut(&Frame)) {
        if depth == stop {
            visit(frame);
            return;
        }
        let b = self.order[depth];
        for &value in self.choices(b) {
            if self.assign(frame, b, value) {
                self.walk(frame, depth + 1, stop, visit);
            }
            self.unassign(frame, b, value);
        }
    }

    fn leaf_units(&self, frame: &Frame) -> u32 {
        self.share_terms.iter().map(|&c| DIVIDE[frame.achieved[c] as usize]).sum()
    }

    fn neighborhood(mask: u32) -> u8 {
        KING_OFFSETS.iter().enumerate().filter(|(_, &o)| mask >> bit(o).unwrap() & 1 == 1).fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Calls `f(patch, share_units)` for every feasible patch in counter order.
    pub fn for_each(&self, mut f: impl FnMut(Patch, u32)) {
        let Some(mut root) = self.root() else { return };
        self.walk(&mut root, 0, self.order.len(), &mut |frame| {
            f(Patch::from_mask_unchecked(frame.mask), self.leaf_units(frame));
        });
    }

    /// Full census, split across the rayon pool. `above` keeps every patch
    /// whose share exceeds it. The result does not depend on the pool size.
    pub fn census(&self, above: Option<Rational>) -> Census {
        let above = above.map(threshold_units);
        let Some(mut root) = self.root() else { return Census::empty(self.kind) };
        let mut prefixes = Vec::new();
        self.walk(&mut root, 0, SPLIT_DEPTH, &mut |frame| prefixes.push(frame.clone()));
        let parts: Vec<Census> = prefixes
            .into_par_iter()
            .map(|mut frame| {
                let mut census = Census::empty(self.kind);
                self.walk(&mut frame, SPLIT_DEPTH, self.order.len(), &mut |leaf| {
                    census.record(leaf.mask, self.leaf_units(leaf), Self::neighborhood(leaf.mask), above);
                });
                census
            })
            .collect();
        let mut total = Census::empty(self.kind);
        for part in parts {
            total.merge(part);
        }
        total.finish()
    }
}
