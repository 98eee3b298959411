//! King's-grid offsets and the dihedral symmetries of the square.

/// A cell of the infinite grid as `(row, col)`.
pub type Cell = (i64, i64);

/// The eight neighbours of the origin in row-major order.
pub const KING_OFFSETS: [Cell; 8] = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)];

pub fn chebyshev(a: Cell, b: Cell) -> i64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

/// Offsets of the detection region of the origin, row-major.
pub fn region_offsets(closed: bool) -> impl Iterator<Item = Cell> {
    (-1..=1)
        .flat_map(|dr| (-1..=1).map(move |dc| (dr, dc)))
        .filter(move |&d| closed || d != (0, 0))
}

/// One of the eight symmetries of the square acting on offsets: optional
/// transpose followed by optional row and column flips.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dihedral(u8);

impl Dihedral {
    pub const IDENTITY: Dihedral = Dihedral(0);

    pub fn all() -> impl Iterator<Item = Dihedral> {
        (0..8).map(Dihedral)
    }

    pub fn transposes(self) -> bool {
        self.0 & 4 != 0
    }

    pub fn apply(self, (r, c): Cell) -> Cell {
        let (r, c) = if self.transposes() { (c, r) } else { (r, c) };
        let r = if self.0 & 1 != 0 { -r } else { r };
        let c = if self.0 & 2 != 0 { -c } else { c };
        (r, c)
    }
}
