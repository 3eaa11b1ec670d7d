use serde::{Deserialize, Serialize};

use super::LabError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MagicSquare {
    pub order: u32,
    pub grid: Vec<Vec<u32>>,
}

impl MagicSquare {
    /// `order * (order^2 + 1) / 2`.
    pub fn line_sum(&self) -> u32 {
        self.order * (self.order * self.order + 1) / 2
    }

    /// Checks the numbers are `1..=order^2` each once and every line hits [`Self::line_sum`].
    pub fn is_magic(&self) -> bool {
        let n = self.order as usize;
        if self.grid.len() != n || self.grid.iter().any(|row| row.len() != n) {
            return false;
        }
        let mut seen: Vec<u32> = self.grid.iter().flatten().copied().collect();
        seen.sort_unstable();
        if seen != (1..=(n * n) as u32).collect::<Vec<_>>() {
            return false;
        }
        let target = self.line_sum();
        let rows = self.grid.iter().all(|row| row.iter().sum::<u32>() == target);
        let cols = (0..n).all(|c| self.grid.iter().map(|row| row[c]).sum::<u32>() == target);
        let diag = (0..n).map(|i| self.grid[i][i]).sum::<u32>() == target;
        let anti = (0..n).map(|i| self.grid[i][n - 1 - i]).sum::<u32>() == target;
        rows && cols && diag && anti
    }
}

/// All 3x3 magic squares on `1..=9`, sorted by rows.
pub fn magic_squares(order: u32) -> Result<Vec<MagicSquare>, LabError> {
    if order != 3 {
        return Err(LabError::UnsupportedOrder(order));
    }
    const TARGET: u32 = 15;
    fn fill(cells: &mut [u32; 9], used: &mut [bool; 10], pos: usize, out: &mut Vec<MagicSquare>) {
        if pos == 9 {
            let grid: Vec<Vec<u32>> = cells.chunks(3).map(<[u32]>::to_vec).collect();
            let square = MagicSquare { order: 3, grid };
            if square.is_magic() {
                out.push(square);
            }
            return;
        }
        for v in 1..=9u32 {
            if used[v as usize] {
                continue;
            }
            cells[pos] = v;
            // Each completed row must already sum correctly.
            if pos % 3 == 2 && cells[pos - 2] + cells[pos - 1] + v != TARGET {
                continue;
            }
            used[v as usize] = true;
            fill(cells, used, pos + 1, out);
            used[v as usize] = false;
        }
    }
    let mut out = Vec::new();
    fill(&mut [0; 9], &mut [false; 10], 0, &mut out);
    Ok(out)
}
