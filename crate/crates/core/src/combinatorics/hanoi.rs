use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{check_cap, LabCaps, LabError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HanoiMove {
    pub from: u8,
    pub to: u8,
}

impl fmt::Display for HanoiMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{}", self.from, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HanoiSolution {
    pub moves: Vec<HanoiMove>,
    pub count: u64,
}

/// `2^n - 1`, the length of the optimal solution.
pub fn hanoi_move_count(n: u32) -> u64 {
    (1u64 << n) - 1
}

/// Moves `n` disks from rod 0 to rod 2.
pub fn hanoi(n: u32, caps: &LabCaps) -> Result<HanoiSolution, LabError> {
    check_cap("hanoi", n.into(), caps.hanoi.into())?;
    fn solve(n: u32, from: u8, to: u8, via: u8, out: &mut Vec<HanoiMove>) {
        if n == 0 {
            return;
        }
        solve(n - 1, from, via, to, out);
        out.push(HanoiMove { from, to });
        solve(n - 1, via, to, from, out);
    }
    let mut moves = Vec::with_capacity(hanoi_move_count(n) as usize);
    solve(n, 0, 2, 1, &mut moves);
    let count = moves.len() as u64;
    debug_assert_eq!(count, hanoi_move_count(n));
    Ok(HanoiSolution { moves, count })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HanoiViolation {
    #[error("move {index}: rod {rod} does not exist")]
    NoSuchRod { index: usize, rod: u8 },
    #[error("move {index}: source and destination are both rod {rod}")]
    SameRod { index: usize, rod: u8 },
    #[error("move {index}: rod {rod} is empty")]
    EmptyRod { index: usize, rod: u8 },
    #[error("move {index}: disk {disk} placed on smaller disk {below}")]
    LargerOnSmaller { index: usize, disk: u32, below: u32 },
    #[error("finished without every disk on rod 2")]
    Unfinished,
}

/// Replays `moves` from all `n` disks on rod 0 and checks that every move is legal and
/// the tower ends on rod 2.
pub fn validate_hanoi(n: u32, moves: &[HanoiMove]) -> Result<(), HanoiViolation> {
    let mut rods: [Vec<u32>; 3] = [(1..=n).rev().collect(), Vec::new(), Vec::new()];
    for (index, m) in moves.iter().enumerate() {
        for rod in [m.from, m.to] {
            if rod > 2 {
                return Err(HanoiViolation::NoSuchRod { index, rod });
            }
        }
        if m.from == m.to {
            return Err(HanoiViolation::SameRod { index, rod: m.from });
        }
        let disk = rods[m.from as usize].pop().ok_or(HanoiViolation::EmptyRod { index, rod: m.from })?;
        if let Some(&below) = rods[m.to as usize].last() {
            if below < disk {
                return Err(HanoiViolation::LargerOnSmaller { index, disk, below });
            }
        }
        rods[m.to as usize].push(disk);
    }
    if rods[2].len() as u32 != n {
        return Err(HanoiViolation::Unfinished);
    }
    Ok(())
}
