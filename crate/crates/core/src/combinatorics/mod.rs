//! Chessboard, permutation and algebra puzzles.

mod domination;
mod hanoi;
mod knight;
mod linear;
mod magic;
mod queens;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use domination::{covers_board, queens_domination, Domination};
pub use hanoi::{hanoi, hanoi_move_count, validate_hanoi, HanoiMove, HanoiSolution, HanoiViolation};
pub use knight::{knight_tour, validate_tour, KnightTour};
pub use linear::solve_linear;
pub use magic::{magic_squares, MagicSquare};
pub use queens::{queens, queens_count, QueensResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("{what} size {n} exceeds the configured cap of {cap}")]
    CapExceeded { what: &'static str, n: u64, cap: u64 },
    #[error("start ({0}, {1}) is off the board")]
    OffBoardStart(i64, i64),
    #[error("board dimensions must be positive")]
    EmptyBoard,
    #[error("only order-3 magic squares are supported, got {0}")]
    UnsupportedOrder(u32),
    #[error("no solution: the equation reduces to {0}")]
    NoUniqueSolution(String),
    #[error("every value solves the equation")]
    Indeterminate,
    #[error("invalid placement: {0}")]
    InvalidPlacement(String),
}

/// Size limits for the exhaustive solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabCaps {
    /// Largest disk count whose move list is generated.
    pub hanoi: u32,
    /// Largest board for full N-queens enumeration.
    pub queens: u32,
    /// Largest `rows * cols` for knight's tour backtracking.
    pub knight_area: u32,
    /// Largest board for the domination search. At most 11 (boards are 128-bit masks).
    pub domination: u32,
}

impl Default for LabCaps {
    fn default() -> Self {
        LabCaps { hanoi: 20, queens: 10, knight_area: 42, domination: 8 }
    }
}

pub(crate) fn check_cap(what: &'static str, n: u64, cap: u64) -> Result<(), LabError> {
    if n > cap {
        return Err(LabError::CapExceeded { what, n, cap });
    }
    Ok(())
}

/// Squares on an `n x n` board, as `(row, col)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoardPlacement {
    pub size: u32,
    pub squares: Vec<(u32, u32)>,
}

impl BoardPlacement {
    pub fn new(size: u32, squares: Vec<(u32, u32)>) -> Result<Self, LabError> {
        if let Some(&(r, c)) = squares.iter().find(|&&(r, c)| r >= size || c >= size) {
            return Err(LabError::InvalidPlacement(format!("({r}, {c}) is off a {size}x{size} board")));
        }
        let mut sorted = squares.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(LabError::InvalidPlacement("duplicate square".into()));
        }
        Ok(BoardPlacement { size, squares })
    }
}

/// True when queens on `a` and `b` attack each other (or share the square).
pub fn queens_attack(a: (u32, u32), b: (u32, u32)) -> bool {
    let (dr, dc) = (a.0.abs_diff(b.0), a.1.abs_diff(b.1));
    dr == 0 || dc == 0 || dr == dc
}
