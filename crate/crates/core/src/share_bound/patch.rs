use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{chebyshev, region_offsets, Cell, Dihedral, KING_OFFSETS};
use crate::graph::DetectionKind;
use crate::periodic::PeriodicPattern;
use crate::rational::Rational;

/// Side of a patch.
pub const SIDE: usize = 5;
/// Number of patch cells.
pub const CELLS: usize = SIDE * SIDE;
/// Bit of the centre cell.
pub const CENTER_BIT: usize = CELLS / 2;
/// Every local constraint asks for at least this many detectors (redundancy 1).
pub const REQUIRED: u32 = 2;

/// Bit index of the cell at `offset` from the centre, if it lies in the patch.
pub fn bit(offset: Cell) -> Option<usize> {
    let (r, c) = (offset.0 + 2, offset.1 + 2);
    ((0..SIDE as i64).contains(&r) && (0..SIDE as i64).contains(&c)).then(|| (r * SIDE as i64 + c) as usize)
}

/// Offset from the centre of the cell with bit index `b`.
pub fn offset(b: usize) -> Cell {
    ((b / SIDE) as i64 - 2, (b % SIDE) as i64 - 2)
}

/// The nine offsets whose whole detection region lies inside the patch.
pub fn core_offsets() -> impl Iterator<Item = Cell> {
    region_offsets(true)
}

/// A 5×5 window of the king's grid centred on a detector. Bit `5r + c` is
/// cell `(r, c)` with the centre at `(2, 2)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Patch(u32);

impl Patch {
    pub fn from_mask(mask: u32) -> Result<Self> {
        if mask >> CELLS != 0 {
            return Err(Error::InvalidArgument(format!("patch mask {mask:#x} has bits outside 25 cells")));
        }
        if mask >> CENTER_BIT & 1 == 0 {
            return Err(Error::InvalidArgument("patch centre must be a detector".into()));
        }
        Ok(Patch(mask))
    }

    pub(crate) fn from_mask_unchecked(mask: u32) -> Self {
        debug_assert!(mask >> CELLS == 0 && mask >> CENTER_BIT & 1 == 1);
        Patch(mask)
    }

    /// The window of `pattern` around the detector at `at`.
    pub fn from_pattern(pattern: &PeriodicPattern, at: Cell) -> Result<Self> {
        let mask = (0..CELLS)
            .filter(|&b| {
                let o = offset(b);
                pattern.is_detector((at.0 + o.0, at.1 + o.1))
            })
            .fold(0, |m, b| m | 1 << b);
        Self::from_mask(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// Whether the cell at `offset` from the centre is a detector. Cells
    /// outside the window count as non-detectors.
    pub fn is_detector(self, offset: Cell) -> bool {
        bit(offset).is_some_and(|b| self.0 >> b & 1 == 1)
    }

    /// Detector indicator of the eight neighbours of the cell at `at`, bit
    /// `i` for the `i`-th offset of [`KING_OFFSETS`].
    pub fn neighbor_mask(self, at: Cell) -> u8 {
        KING_OFFSETS
            .iter()
            .enumerate()
            .filter(|(_, o)| self.is_detector((at.0 + o.0, at.1 + o.1)))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Detectors watching the core cell `at`.
    pub fn dom(self, at: Cell, kind: DetectionKind) -> u32 {
        debug_assert!(chebyshev(at, (0, 0)) <= 1);
        region_offsets(kind.includes_self()).filter(|o| self.is_detector((at.0 + o.0, at.1 + o.1))).count() as u32
    }

    fn code_difference(self, u: Cell, v: Cell, kind: DetectionKind) -> u32 {
        let closed = kind.includes_self();
        let in_region = |c: Cell, x: Cell| chebyshev(c, x) <= 1 && (closed || c != x);
        (0..CELLS)
            .map(offset)
            .filter(|&c| self.is_detector(c) && in_region(c, u) != in_region(c, v))
            .count() as u32
    }

    /// Every core cell is 2-dominated and every two core cells are
    /// 2-distinguished. Ring cells are unconstrained.
    pub fn is_feasible(self, kind: DetectionKind) -> bool {
        let core: Vec<Cell> = core_offsets().collect();
        core.iter().all(|&u| self.dom(u, kind) >= REQUIRED)
            && core.iter().enumerate().all(|(i, &u)| {
                core[i + 1..].iter().all(|&v| self.code_difference(u, v, kind) >= REQUIRED)
            })
    }

    /// Share of the centre, or `None` if some cell it watches is undominated.
    pub fn share(self, kind: DetectionKind) -> Option<Rational> {
        region_offsets(kind.includes_self()).try_fold(Rational::from_integer(0), |acc, u| {
            let dom = self.dom(u, kind);
            (dom > 0).then(|| acc + Rational::new(1, dom as i64))
        })
    }

    /// Detector cells adjacent to the centre, row-major.
    pub fn adjacent_detectors(self) -> Vec<Cell> {
        KING_OFFSETS.iter().copied().filter(|&o| self.is_detector(o)).collect()
    }

    pub fn transform(self, g: Dihedral) -> Patch {
        let mask = (0..CELLS).filter(|&b| self.0 >> b & 1 == 1).fold(0, |m, b| {
            let target = bit(g.apply(offset(b))).expect("symmetries keep the window");
            m | 1 << target
        });
        Patch(mask)
    }

    /// Least image under the eight symmetries of the square.
    pub fn canonical(self) -> Patch {
        Dihedral::all().map(|g| self.transform(g)).min().expect("nonempty group")
    }

    /// ASCII rows joined by `/`.
    pub fn to_spec(self) -> String {
        self.to_string().replace('\n', "/")
    }
}

impl fmt::Display for Patch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..SIDE {
            if r > 0 {
                f.write_str("\n")?;
            }
            for c in 0..SIDE {
                f.write_str(if self.0 >> (r * SIDE + c) & 1 == 1 { "X" } else { "." })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Patch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Patch({})", self.to_spec())
    }
}

/// Five rows of `X`/`.` separated by newlines or `/`.
impl FromStr for Patch {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let pattern: PeriodicPattern = text.replace('/', "\n").parse()?;
        if (pattern.rows(), pattern.cols()) != (SIDE, SIDE) {
            return Err(Error::format(format!("a patch is 5x5, got {}x{}", pattern.rows(), pattern.cols())));
        }
        let mask = pattern.detectors().into_iter().fold(0, |m, (r, c)| m | 1 << (r * SIDE + c));
        Self::from_mask(mask).map_err(|e| Error::format(e.to_string()))
    }
}

impl Serialize for Patch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_spec())
    }
}
