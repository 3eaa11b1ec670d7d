use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_cap, BoardPlacement, LabCaps, LabError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueensResult {
    pub count: u64,
    pub solutions: Vec<BoardPlacement>,
}

/// Bitboard backtracking, one row at a time. `cols`, `left` and `right` mark the columns
/// and the two diagonal directions already attacked on the current row.
fn place(n: u32, row: u32, cols: u32, left: u32, right: u32, path: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if row == n {
        out.push(path.clone());
        return;
    }
    let full = (1u32 << n) - 1;
    let mut free = full & !(cols | left | right);
    while free != 0 {
        let bit = free & free.wrapping_neg();
        free ^= bit;
        path.push(bit.trailing_zeros());
        place(n, row + 1, cols | bit, ((left | bit) << 1) & full, (right | bit) >> 1, path, out);
        path.pop();
    }
}

fn count_from(n: u32, row: u32, cols: u32, left: u32, right: u32) -> u64 {
    if row == n {
        return 1;
    }
    let full = (1u32 << n) - 1;
    let mut free = full & !(cols | left | right);
    let mut total = 0;
    while free != 0 {
        let bit = free & free.wrapping_neg();
        free ^= bit;
        total += count_from(n, row + 1, cols | bit, ((left | bit) << 1) & full, (right | bit) >> 1);
    }
    total
}

/// Every placement of `n` mutually non-attacking queens, sorted. The first row's columns
/// are searched in parallel.
pub fn queens(n: u32, caps: &LabCaps) -> Result<QueensResult, LabError> {
    if n == 0 {
        return Err(LabError::EmptyBoard);
    }
    check_cap("queens", n.into(), caps.queens.into())?;
    let shards: Vec<Vec<Vec<u32>>> = (0..n)
        .into_par_iter()
        .map(|col| {
            let bit = 1u32 << col;
            let full = (1u32 << n) - 1;
            let mut out = Vec::new();
            place(n, 1, bit, (bit << 1) & full, bit >> 1, &mut vec![col], &mut out);
            out
        })
        .collect();
    let solutions: Vec<BoardPlacement> = shards
        .into_iter()
        .flatten()
        .map(|cols| BoardPlacement {
            size: n,
            squares: cols.into_iter().enumerate().map(|(r, c)| (r as u32, c)).collect(),
        })
        .collect();
    Ok(QueensResult { count: solutions.len() as u64, solutions })
}

/// Number of solutions without materializing them. Boards up to 31 wide fit the bitboard.
pub fn queens_count(n: u32) -> Result<u64, LabError> {
    if n == 0 {
        return Err(LabError::EmptyBoard);
    }
    check_cap("queens", n.into(), 31)?;
    Ok(count_from(n, 0, 0, 0, 0))
}
