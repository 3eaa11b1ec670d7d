use serde::{Deserialize, Serialize};

use super::{check_cap, LabCaps, LabError};

const JUMPS: [(i64, i64); 8] = [(1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2)];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnightTour {
    pub rows: u32,
    pub cols: u32,
    pub path: Vec<(u32, u32)>,
}

fn is_jump(a: (u32, u32), b: (u32, u32)) -> bool {
    let (dr, dc) = (a.0.abs_diff(b.0), a.1.abs_diff(b.1));
    (dr == 1 && dc == 2) || (dr == 2 && dc == 1)
}

/// Checks that the path stays on the board, visits each square exactly once and moves
/// like a knight; with `closed`, the last square must also be a knight's move from the first.
pub fn validate_tour(tour: &KnightTour, closed: bool) -> Result<(), String> {
    let area = (tour.rows * tour.cols) as usize;
    if tour.path.len() != area {
        return Err(format!("path has {} squares, board has {area}", tour.path.len()));
    }
    let mut seen = vec![false; area];
    for &(r, c) in &tour.path {
        if r >= tour.rows || c >= tour.cols {
            return Err(format!("({r}, {c}) is off the board"));
        }
        let i = (r * tour.cols + c) as usize;
        if std::mem::replace(&mut seen[i], true) {
            return Err(format!("({r}, {c}) visited twice"));
        }
    }
    if let Some(w) = tour.path.windows(2).find(|w| !is_jump(w[0], w[1])) {
        return Err(format!("{:?} -> {:?} is not a knight's move", w[0], w[1]));
    }
    if closed && area > 1 && !is_jump(tour.path[area - 1], tour.path[0]) {
        return Err("tour does not return to its start".into());
    }
    Ok(())
}

struct Board {
    cols: usize,
    neighbors: Vec<Vec<usize>>,
    visited: Vec<bool>,
    path: Vec<usize>,
    closed: bool,
}

impl Board {
    fn degree(&self, sq: usize) -> usize {
        self.neighbors[sq].iter().filter(|&&n| !self.visited[n]).count()
    }

    /// Warnsdorff-ordered depth-first search: fewest onward moves first, ties by index.
    fn extend(&mut self) -> bool {
        let here = *self.path.last().expect("path starts non-empty");
        let remaining = self.visited.len() - self.path.len();
        if remaining == 0 {
            return !self.closed || self.path.len() == 1 || self.neighbors[here].contains(&self.path[0]);
        }
        let mut next: Vec<(usize, usize)> = self.neighbors[here]
            .iter()
            .filter(|&&n| !self.visited[n])
            .map(|&n| (self.degree(n), n))
            .collect();
        // A neighbour with no other way in can only be the final square.
        if remaining > 1 && next.iter().any(|&(d, _)| d == 0) {
            return false;
        }
        next.sort_unstable();
        for (_, n) in next {
            self.visited[n] = true;
            self.path.push(n);
            if self.extend() {
                return true;
            }
            self.path.pop();
            self.visited[n] = false;
        }
        false
    }
}

/// Finds a knight's tour from `start`, or `None` when none exists.
///
/// The search is complete: Warnsdorff's rule only orders the branches. On boards with an
/// odd number of squares a tour alternates colours and must start on the majority colour,
/// which settles the other starts immediately.
pub fn knight_tour(
    rows: u32,
    cols: u32,
    start: (i64, i64),
    closed: bool,
    caps: &LabCaps,
) -> Result<Option<KnightTour>, LabError> {
    if rows == 0 || cols == 0 {
        return Err(LabError::EmptyBoard);
    }
    check_cap("knight board area", u64::from(rows) * u64::from(cols), caps.knight_area.into())?;
    let (sr, sc) = start;
    if sr < 0 || sc < 0 || sr >= i64::from(rows) || sc >= i64::from(cols) {
        return Err(LabError::OffBoardStart(sr, sc));
    }
    let area = (rows * cols) as usize;
    if area % 2 == 1 && (sr + sc) % 2 == 1 {
        return Ok(None);
    }
    if closed && area % 2 == 1 && area > 1 {
        return Ok(None);
    }
    let (rows_i, cols_i) = (i64::from(rows), i64::from(cols));
    let neighbors = (0..area)
        .map(|i| {
            let (r, c) = ((i / cols as usize) as i64, (i % cols as usize) as i64);
            JUMPS
                .iter()
                .map(|(dr, dc)| (r + dr, c + dc))
                .filter(|&(nr, nc)| nr >= 0 && nc >= 0 && nr < rows_i && nc < cols_i)
                .map(|(nr, nc)| (nr * cols_i + nc) as usize)
                .collect()
        })
        .collect();
    let first = (sr * cols_i + sc) as usize;
    let mut board = Board { cols: cols as usize, neighbors, visited: vec![false; area], path: vec![first], closed };
    board.visited[first] = true;
    if !board.extend() {
        return Ok(None);
    }
    let path = board.path.iter().map(|&i| ((i / board.cols) as u32, (i % board.cols) as u32)).collect();
    Ok(Some(KnightTour { rows, cols, path }))
}
