use serde::{Deserialize, Serialize};

use super::{check_cap, queens_attack, BoardPlacement, LabCaps, LabError};

/// Fewest queens covering the board, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domination {
    pub k: u32,
    pub placement: BoardPlacement,
}

const MASK_LIMIT: u32 = 11;

/// True when every square is occupied or attacked by one of the placed queens.
pub fn covers_board(placement: &BoardPlacement) -> bool {
    let n = placement.size;
    (0..n).all(|r| (0..n).all(|c| placement.squares.iter().any(|&q| queens_attack(q, (r, c)))))
}

struct Search {
    /// `reach[s]`: squares covered by a queen on `s`, itself included. Symmetric in `s`.
    reach: Vec<u128>,
    full: u128,
    best_reach: u32,
    chosen: Vec<usize>,
}

impl Search {
    /// Depth-limited set cover: branch on every square whose queen would cover the lowest
    /// uncovered square. Exhaustive for the given depth.
    fn cover(&mut self, covered: u128, left: u32) -> bool {
        let open = self.full & !covered;
        if open == 0 {
            return true;
        }
        if left == 0 || open.count_ones() > left * self.best_reach {
            return false;
        }
        let lowest = open.trailing_zeros() as usize;
        let mut options = self.reach[lowest];
        while options != 0 {
            let sq = options.trailing_zeros() as usize;
            options &= options - 1;
            self.chosen.push(sq);
            if self.cover(covered | self.reach[sq], left - 1) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}

/// Minimum queen domination of an `n x n` board by increasing-`k` exhaustive search, so no
/// placement of `k - 1` queens covers the board.
pub fn queens_domination(n: u32, caps: &LabCaps) -> Result<Domination, LabError> {
    if n == 0 {
        return Err(LabError::EmptyBoard);
    }
    check_cap("domination", n.into(), caps.domination.min(MASK_LIMIT).into())?;
    let squares: Vec<(u32, u32)> = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).collect();
    let reach: Vec<u128> = squares
        .iter()
        .map(|&q| {
            squares
                .iter()
                .enumerate()
                .filter(|&(_, &s)| queens_attack(q, s))
                .fold(0u128, |m, (i, _)| m | (1u128 << i))
        })
        .collect();
    let best_reach = reach.iter().map(|m| m.count_ones()).max().unwrap_or(1);
    let full = if squares.len() == 128 { u128::MAX } else { (1u128 << squares.len()) - 1 };
    let mut search = Search { reach, full, best_reach, chosen: Vec::new() };
    for k in 1..=n {
        if search.cover(0, k) {
            let mut picked: Vec<(u32, u32)> = search.chosen.iter().map(|&i| squares[i]).collect();
            picked.sort_unstable();
            let placement = BoardPlacement::new(n, picked)?;
            return Ok(Domination { k, placement });
        }
    }
    unreachable!("n queens on one column cover an n x n board")
}
