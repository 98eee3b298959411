//! Periodic detector patterns on the infinite king's grid.
//!
//! A pattern is a `rows × cols` fundamental rectangle of residues; cell
//! `(r, c)` of the plane is a detector iff `(r mod rows, c mod cols)` is.
//! Its density in the plane is its density in the rectangle.
//!
//! The detection regions of two cells at Chebyshev distance 3 or more are
//! disjoint for both kinds, so their codes differ in `dom(u) + dom(v)`
//! detectors. Once every cell is `(k+1)`-dominated those pairs are
//! automatically `(k+1)`-distinguished, and the infinite-grid property
//! reduces to finitely many checks: one per residue for domination, and the
//! 12 half-plane offsets at distance 1 or 2 per residue for pairs.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::detection::{DetectorSet, Verdict, Violation};
use crate::error::{Error, Result};
use crate::geometry::{chebyshev, region_offsets, Cell, Dihedral};
use crate::graph::{DetectionKind, Graph};
use crate::rational::Rational;
use crate::solver::{self, CoverSystem, SearchOptions};
use crate::vertex_set::VertexSet;

/// Default cap on the fundamental-rectangle area for [`pattern_search`].
pub const DEFAULT_AREA_BUDGET: usize = 36;

/// Offsets `δ` with `1 ≤ ‖δ‖∞ ≤ 2` in the half-plane `δ > (0,0)`
/// lexicographically; every unordered pair of cells at distance ≤ 2 is a
/// translate of `{u, u + δ}` for a residue `u` and one of these.
pub const PAIR_OFFSETS: [Cell; 12] =
    [(0, 1), (0, 2), (1, -2), (1, -1), (1, 0), (1, 1), (1, 2), (2, -2), (2, -1), (2, 0), (2, 1), (2, 2)];

/// Whether the detection regions of `(0,0)` and `delta` intersect.
pub fn regions_overlap(delta: Cell, kind: DetectionKind) -> bool {
    let closed = kind.includes_self();
    region_offsets(closed).any(|a| region_offsets(closed).any(|b| a == (delta.0 + b.0, delta.1 + b.1)))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicPattern {
    rows: usize,
    cols: usize,
    cells: Vec<bool>,
}

impl PeriodicPattern {
    pub fn empty(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!("pattern period must be positive, got {rows}x{cols}")));
        }
        Ok(PeriodicPattern { rows, cols, cells: vec![false; rows * cols] })
    }

    /// Pattern with the given residues as detectors.
    pub fn new(rows: usize, cols: usize, detectors: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut p = Self::empty(rows, cols)?;
        for (r, c) in detectors {
            if r >= rows || c >= cols {
                return Err(Error::InvalidArgument(format!("residue ({r},{c}) outside the {rows}x{cols} rectangle")));
            }
            p.cells[r * cols + c] = true;
        }
        Ok(p)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut p = Self::empty(rows, cols)?;
        for r in 0..rows {
            for c in 0..cols {
                p.cells[r * cols + c] = f(r, c);
            }
        }
        Ok(p)
    }

    fn from_residue_indices(rows: usize, cols: usize, indices: &[usize]) -> Self {
        let mut cells = vec![false; rows * cols];
        for &i in indices {
            cells[i] = true;
        }
        PeriodicPattern { rows, cols, cells }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn area(&self) -> usize {
        self.rows * self.cols
    }

    pub fn detector_count(&self) -> usize {
        self.cells.iter().filter(|&&d| d).count()
    }

    /// Detector residues in row-major order.
    pub fn detectors(&self) -> Vec<(usize, usize)> {
        (0..self.area()).filter(|&i| self.cells[i]).map(|i| (i / self.cols, i % self.cols)).collect()
    }

    fn residue(&self, (r, c): Cell) -> usize {
        r.rem_euclid(self.rows as i64) as usize * self.cols + c.rem_euclid(self.cols as i64) as usize
    }

    pub fn is_detector(&self, cell: Cell) -> bool {
        self.cells[self.residue(cell)]
    }

    pub fn density(&self) -> Rational {
        Rational::new(self.detector_count() as i64, self.area() as i64)
    }

    /// Detectors watching `cell`.
    pub fn dom_at(&self, cell: Cell, kind: DetectionKind) -> usize {
        region_offsets(kind.includes_self()).filter(|o| self.is_detector((cell.0 + o.0, cell.1 + o.1))).count()
    }

    /// Detectors that watch exactly one of `u` and `v`.
    pub fn code_difference(&self, u: Cell, v: Cell, kind: DetectionKind) -> usize {
        let closed = kind.includes_self();
        let ru: BTreeSet<Cell> = region_offsets(closed).map(|o| (u.0 + o.0, u.1 + o.1)).collect();
        let rv: BTreeSet<Cell> = region_offsets(closed).map(|o| (v.0 + o.0, v.1 + o.1)).collect();
        ru.symmetric_difference(&rv).filter(|&&c| self.is_detector(c)).count()
    }

    /// Decides whether the plane-filling set is `redundancy`-redundant.
    /// Witnesses use residue representatives for the first cell; pairs give
    /// the second cell as `u + δ`.
    pub fn verify_infinite(&self, kind: DetectionKind, redundancy: usize) -> Verdict<Cell> {
        debug_assert!(locality_holds(kind));
        let required = redundancy + 1;
        let reps = || (0..self.rows as i64).flat_map(|r| (0..self.cols as i64).map(move |c| (r, c)));
        for u in reps() {
            let dom = self.dom_at(u, kind);
            if dom < required {
                return Verdict::Invalid(Violation::UnderDominated { vertex: u, dom, required });
            }
        }
        for u in reps() {
            for d in PAIR_OFFSETS {
                let v = (u.0 + d.0, u.1 + d.1);
                let difference = self.code_difference(u, v, kind);
                if difference < required {
                    return Verdict::Invalid(Violation::Indistinguishable { u, v, difference, required });
                }
            }
        }
        Verdict::Valid
    }

    /// Same set with every detector moved by `(dr, dc)`.
    pub fn translate(&self, dr: i64, dc: i64) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.is_detector((r as i64 - dr, c as i64 - dc))).unwrap()
    }

    /// Image of the plane-filling set under `g`.
    pub fn transform(&self, g: Dihedral) -> Self {
        let (rows, cols) = if g.transposes() { (self.cols, self.rows) } else { (self.rows, self.cols) };
        // The inverse of each of these maps is itself or its transpose-conjugate;
        // test membership by mapping target cells back through every symmetry
        // until the forward map hits them.
        let inverse = Dihedral::all().find(|h| {
            [(1, 0), (0, 1)].iter().all(|&e| g.apply(h.apply(e)) == e)
        });
        let inverse = inverse.expect("dihedral group is closed under inverses");
        Self::from_fn(rows, cols, |r, c| self.is_detector(inverse.apply((r as i64, c as i64)))).unwrap()
    }

    /// The same plane-filling set described with a larger period. `rows` and
    /// `cols` must be multiples of the current period.
    pub fn with_period(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows % self.rows != 0 || cols % self.cols != 0 {
            return Err(Error::InvalidArgument(format!(
                "{rows}x{cols} is not a multiple of the {}x{} period",
                self.rows, self.cols
            )));
        }
        Self::from_fn(rows, cols, |r, c| self.is_detector((r as i64, c as i64)))
    }

    /// Whether some symmetry of the king's grid (translation, rotation,
    /// reflection) maps one plane-filling set onto the other.
    pub fn is_equivalent(&self, other: &PeriodicPattern) -> bool {
        let side = [self.rows, self.cols, other.rows, other.cols].into_iter().fold(1, |a, b| a.lcm(&b));
        let target = other.with_period(side, side).unwrap();
        Dihedral::all().any(|g| {
            let image = self.transform(g).with_period(side, side).unwrap();
            (0..side as i64).any(|dr| (0..side as i64).any(|dc| image.translate(dr, dc) == target))
        })
    }

    /// Copies the pattern onto a `copies_r·rows × copies_c·cols` king torus.
    /// Tori smaller than 5x5 wrap onto themselves and are rejected.
    pub fn lift_to_torus(&self, copies_r: usize, copies_c: usize) -> Result<LiftedPattern> {
        let rows = copies_r * self.rows;
        let cols = copies_c * self.cols;
        if rows < 5 || cols < 5 {
            return Err(Error::NonFaithful { rows, cols });
        }
        let graph = Graph::king_torus(rows, cols)?;
        let members = VertexSet::from_indices(
            rows * cols,
            (0..rows * cols).filter(|&v| self.is_detector(((v / cols) as i64, (v % cols) as i64))),
        );
        Ok(LiftedPattern { graph, members })
    }

    /// Smallest multiples of the period that give a faithful torus.
    pub fn faithful_copies(&self) -> (usize, usize) {
        (5usize.div_ceil(self.rows), 5usize.div_ceil(self.cols))
    }
}

/// Rows of `X` (detector) and `.` (empty).
impl fmt::Display for PeriodicPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("\n")?;
            }
            for c in 0..self.cols {
                f.write_str(if self.cells[r * self.cols + c] { "X" } else { "." })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PeriodicPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodicPattern({}x{}: {})", self.rows, self.cols, self.to_string().replace('\n', "/"))
    }
}

/// Parses the ASCII form. Blank lines and `#` comments are skipped; `X`,
/// `x` or `1` mark detectors and `.` or `0` empty cells.
impl FromStr for PeriodicPattern {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<bool>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .chars()
                .map(|ch| match ch {
                    'X' | 'x' | '1' => Ok(true),
                    '.' | '0' => Ok(false),
                    other => Err(Error::format(format!("line {}: unexpected character {other:?}", lineno + 1))),
                })
                .collect::<Result<Vec<bool>>>()?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::format(format!(
                        "line {}: row has {} cells, expected {}",
                        lineno + 1,
                        row.len(),
                        first.len()
                    )));
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::format("pattern has no rows"));
        }
        let (r, c) = (rows.len(), rows[0].len());
        Ok(PeriodicPattern { rows: r, cols: c, cells: rows.concat() })
    }
}

/// A pattern copied onto a finite king torus.
#[derive(Clone, Debug)]
pub struct LiftedPattern {
    pub graph: Graph,
    pub members: VertexSet,
}

impl LiftedPattern {
    pub fn detector_set(&self, kind: DetectionKind) -> DetectorSet<'_> {
        DetectorSet::from_set(&self.graph, kind, self.members.clone()).expect("lifted set matches its torus")
    }
}

/// Brute-force check on a window that regions of cells at distance ≥ 3 never
/// meet while those at distance 1 or 2 always do.
fn locality_holds(kind: DetectionKind) -> bool {
    (-4..=4i64).all(|dr| {
        (-4..=4i64).all(|dc| {
            let d = chebyshev((0, 0), (dr, dc));
            d == 0 || regions_overlap((dr, dc), kind) == (d <= 2)
        })
    })
}

/// The density-1/3 constructions: `pattern-a` (one diagonal in three),
/// `pattern-b` (diagonals 0 and 2 of every six) and `pattern-c` (a redundant
/// identifying code whose open neighbourhoods leave some cells 1-dominated).
pub fn builtin_patterns() -> Vec<(&'static str, PeriodicPattern)> {
    vec![
        ("pattern-a", PeriodicPattern::from_fn(3, 3, |r, c| (r + c) % 3 == 0).unwrap()),
        ("pattern-b", PeriodicPattern::from_fn(6, 6, |r, c| matches!((r + c) % 6, 0 | 2)).unwrap()),
        ("pattern-c", PATTERN_C.parse().unwrap()),
    ]
}

pub fn builtin(name: &str) -> Option<PeriodicPattern> {
    builtin_patterns().into_iter().find(|(n, _)| *n == name).map(|(_, p)| p)
}

const PATTERN_C: &str = "....XX\n..X.X.\nX..X..\n.XX...\n.X...X\nX..X..";

/// Search parameters for [`pattern_search`].
#[derive(Clone, Debug)]
pub struct PatternSearch {
    pub kind: DetectionKind,
    pub redundancy: usize,
    pub max_detectors: usize,
    pub area_budget: usize,
    /// Every valid residue set with at most `max_detectors` detectors,
    /// rather than only those of minimum size.
    pub all: bool,
    pub parallel: bool,
}

impl PatternSearch {
    pub fn new(kind: DetectionKind, redundancy: usize, max_detectors: usize) -> Self {
        PatternSearch { kind, redundancy, max_detectors, area_budget: DEFAULT_AREA_BUDGET, all: false, parallel: false }
    }
}

/// Covering form of the infinite-grid conditions over the residues of a
/// `rows × cols` rectangle. Weights count how many cells of a region fall on
/// each residue.
pub fn residue_cover_system(rows: usize, cols: usize, kind: DetectionKind, redundancy: usize) -> CoverSystem {
    let closed = kind.includes_self();
    let probe = PeriodicPattern::empty(rows, cols).expect("positive period");
    let need = redundancy as u32 + 1;
    let mut system = CoverSystem::new(rows * cols);
    let reps: Vec<Cell> = (0..rows as i64).flat_map(|r| (0..cols as i64).map(move |c| (r, c))).collect();
    for &u in &reps {
        system.push(region_offsets(closed).map(|o| (probe.residue((u.0 + o.0, u.1 + o.1)), 1)), need);
    }
    for &u in &reps {
        for d in PAIR_OFFSETS {
            let v = (u.0 + d.0, u.1 + d.1);
            let ru: BTreeSet<Cell> = region_offsets(closed).map(|o| (u.0 + o.0, u.1 + o.1)).collect();
            let rv: BTreeSet<Cell> = region_offsets(closed).map(|o| (v.0 + o.0, v.1 + o.1)).collect();
            system.push(ru.symmetric_difference(&rv).map(|&c| (probe.residue(c), 1)), need);
        }
    }
    system
}

/// Residue sets on a `rows × cols` rectangle that pass
/// [`PeriodicPattern::verify_infinite`]: the minimum-size ones (if that size
/// is at most `max_detectors`), or with `all` every one within the limit.
/// Results are sorted.
pub fn pattern_search(rows: usize, cols: usize, search: &PatternSearch) -> Result<Vec<PeriodicPattern>> {
    check_area(rows, cols, search.area_budget)?;
    let system = residue_cover_system(rows, cols, search.kind, search.redundancy);
    let sets = if search.all {
        solver::all_covers(&system, search.max_detectors)
    } else {
        let options = SearchOptions {
            max_size: Some(search.max_detectors),
            collect_all: true,
            parallel: search.parallel,
            ..Default::default()
        };
        solver::minimum_cover(&system, &options).solutions
    };
    let mut patterns: Vec<PeriodicPattern> =
        sets.iter().map(|s| PeriodicPattern::from_residue_indices(rows, cols, s)).collect();
    patterns.sort();
    Ok(patterns)
}

/// Fewest detectors of any valid pattern with this period, with one
/// witness. Translations are factored out by fixing residue `(0,0)`.
pub fn minimum_pattern(
    rows: usize,
    cols: usize,
    kind: DetectionKind,
    redundancy: usize,
    area_budget: usize,
) -> Result<Option<PeriodicPattern>> {
    check_area(rows, cols, area_budget)?;
    let system = residue_cover_system(rows, cols, kind, redundancy);
    let out = solver::minimum_cover(&system, &SearchOptions { anchor: Some(0), ..Default::default() });
    Ok(out.solutions.first().map(|s| PeriodicPattern::from_residue_indices(rows, cols, s)))
}

fn check_area(rows: usize, cols: usize, budget: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(format!("pattern period must be positive, got {rows}x{cols}")));
    }
    if rows * cols > budget {
        return Err(Error::Budget {
            what: "pattern search area",
            required: (rows * cols) as u128,
            budget: budget as u128,
        });
    }
    Ok(())
}
