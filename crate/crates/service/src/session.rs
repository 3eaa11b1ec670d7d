//! Session records and the views sent to clients.

use polycut_core::probability::{monty_exact, Strategy};
use polycut_core::rng::SplitMix64;
use polycut_core::{Cell, CutModel, CutSegment, DissectionError, DissectionState, Polyomino, Solver};
use serde::{Deserialize, Serialize};

use crate::error::ApiError;

/// An interactive dissection: the engine state plus bookkeeping for scoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissectionSession {
    pub id: String,
    pub state: DissectionState,
    /// Milliseconds since the Unix epoch.
    pub created_at: u64,
    pub shape: Polyomino,
    /// Minimum cuts for the original shape.
    pub optimal_total: u32,
}

impl DissectionSession {
    pub fn new(id: String, shape: Polyomino, model: CutModel, solver: &Solver, created_at: u64) -> Result<Self, DissectionError> {
        let optimal_total = solver.min_cuts(&shape, model)?.count;
        let state = DissectionState::new(shape.clone(), model);
        Ok(DissectionSession { id, state, created_at, shape, optimal_total })
    }

    pub fn cut_count(&self) -> usize {
        self.state.history().len()
    }

    pub fn finished(&self) -> bool {
        self.state.is_finished()
    }

    pub fn apply(&mut self, cut: &CutSegment) -> Result<(), ApiError> {
        if self.finished() {
            return Err(ApiError::new(
                axum::http::StatusCode::GONE,
                "finished",
                format!("session {} is already fully dissected", self.id),
            ));
        }
        match self.state.apply_cut(cut) {
            Ok(next) => {
                self.state = next;
                Ok(())
            }
            Err(e) => Err(ApiError::from(e).with_legal_cuts(self.state.legal_cuts())),
        }
    }

    pub fn view(&self, solver: &Solver) -> Result<DissectionView, ApiError> {
        let hint = solver.hint(&self.state)?;
        let cut_count = self.cut_count() as u32;
        let projected_total = cut_count + hint;
        let n = self.shape.len() as u32;
        let delta = i64::from(projected_total) - i64::from(self.optimal_total);
        let mut note = match delta {
            0 => format!("on track: {projected_total} cuts total matches the optimum"),
            d => format!("{d} cut(s) above the optimum of {}", self.optimal_total),
        };
        if self.optimal_total + 1 < n {
            note.push_str(&format!(" (optimum is below N-1 = {})", n - 1));
        }
        Ok(DissectionView {
            id: self.id.clone(),
            model: self.state.model(),
            n: self.shape.len(),
            created_at: self.created_at,
            pieces: self
                .state
                .pieces()
                .iter()
                .map(|(id, p)| PieceView { id: id.to_string(), cells: p.cells().to_vec() })
                .collect(),
            cut_count,
            optimal_total: self.optimal_total,
            hint,
            finished: self.finished(),
            history: self.state.history().to_vec(),
            legal_cuts: self.state.legal_cuts(),
            score: Score { cuts_used: cut_count, projected_total, optimal_total: self.optimal_total, delta, note },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceView {
    pub id: String,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub cuts_used: u32,
    /// Cuts used so far plus the fewest still needed.
    pub projected_total: u32,
    pub optimal_total: u32,
    pub delta: i64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissectionView {
    pub id: String,
    pub model: CutModel,
    pub n: usize,
    pub created_at: u64,
    pub pieces: Vec<PieceView>,
    pub cut_count: u32,
    pub optimal_total: u32,
    pub hint: u32,
    pub finished: bool,
    pub history: Vec<CutSegment>,
    pub legal_cuts: Vec<CutSegment>,
    pub score: Score,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MontyPhase {
    AwaitPick,
    AwaitDecision,
    Resolved,
}

/// One Monty Hall game, doors numbered 1 to 3.
///
/// The seed fixes both hidden choices: the first draw places the car, the second breaks the
/// tie when the host has two goat doors to choose from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MontySession {
    pub id: String,
    pub phase: MontyPhase,
    pub seed: u64,
    pub car_door: u8,
    pub picked: Option<u8>,
    pub revealed: Option<u8>,
    pub strategy: Option<Strategy>,
    pub final_door: Option<u8>,
    pub won: Option<bool>,
    pub created_at: u64,
}

impl MontySession {
    pub fn new(id: String, seed: u64, created_at: u64) -> Self {
        let car_door = 1 + SplitMix64::new(seed).below(3) as u8;
        MontySession {
            id,
            phase: MontyPhase::AwaitPick,
            seed,
            car_door,
            picked: None,
            revealed: None,
            strategy: None,
            final_door: None,
            won: None,
            created_at,
        }
    }

    pub fn pick(&mut self, door: u8) -> Result<(), ApiError> {
        if !(1..=3).contains(&door) {
            return Err(ApiError::bad_request(format!("door must be 1, 2 or 3, got {door}")));
        }
        if self.phase != MontyPhase::AwaitPick {
            return Err(ApiError::conflict("out_of_phase", "a door has already been picked"));
        }
        let goats: Vec<u8> = (1..=3).filter(|&d| d != door && d != self.car_door).collect();
        let mut rng = SplitMix64::new(self.seed);
        rng.next_u64();
        let opened = goats[rng.below(goats.len() as u64) as usize];
        self.picked = Some(door);
        self.revealed = Some(opened);
        self.phase = MontyPhase::AwaitDecision;
        Ok(())
    }

    pub fn decide(&mut self, strategy: Strategy) -> Result<(), ApiError> {
        let (Some(picked), Some(revealed), MontyPhase::AwaitDecision) = (self.picked, self.revealed, self.phase) else {
            return Err(ApiError::conflict("out_of_phase", "decide needs a picked door and no prior decision"));
        };
        let final_door = match strategy {
            Strategy::Stay => picked,
            Strategy::Switch => (1..=3).find(|&d| d != picked && d != revealed).expect("one door left"),
        };
        self.strategy = Some(strategy);
        self.final_door = Some(final_door);
        self.won = Some(final_door == self.car_door);
        self.phase = MontyPhase::Resolved;
        Ok(())
    }

    /// What the client may see. Hidden state appears only once the game is resolved.
    pub fn view(&self) -> MontyView {
        let resolved = self.phase == MontyPhase::Resolved;
        MontyView {
            id: self.id.clone(),
            phase: self.phase,
            picked: self.picked,
            revealed: self.revealed,
            strategy: self.strategy,
            final_door: self.final_door,
            won: self.won,
            car_door: resolved.then_some(self.car_door),
            seed: resolved.then_some(self.seed),
            transcript: resolved.then(|| self.transcript()),
        }
    }

    fn transcript(&self) -> Vec<String> {
        let mut lines = vec![format!("car placed behind door {}", self.car_door)];
        if let Some(p) = self.picked {
            lines.push(format!("contestant picks door {p}"));
        }
        if let Some(r) = self.revealed {
            lines.push(format!("host opens door {r} to show a goat"));
        }
        if let (Some(s), Some(f)) = (self.strategy, self.final_door) {
            lines.push(match s {
                Strategy::Stay => format!("contestant stays with door {f}"),
                Strategy::Switch => format!("contestant switches to door {f}"),
            });
        }
        if let Some(won) = self.won {
            lines.push(if won { "contestant wins the car".into() } else { "contestant gets a goat".into() });
        }
        lines
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MontyView {
    pub id: String,
    pub phase: MontyPhase,
    pub picked: Option<u8>,
    pub revealed: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Strategy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_door: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub won: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub car_door: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transcript: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyStats {
    pub games: u64,
    pub wins: u64,
    pub win_rate: Option<f64>,
    /// Exact winning probability as `"p/q"`.
    pub exact: String,
    pub exact_value: f64,
}

impl StrategyStats {
    pub fn tally(strategy: Strategy, sessions: impl Iterator<Item = MontySession>) -> Self {
        let (mut games, mut wins) = (0, 0);
        for s in sessions.filter(|s| s.strategy == Some(strategy)) {
            games += 1;
            wins += u64::from(s.won == Some(true));
        }
        let exact = monty_exact(strategy);
        StrategyStats {
            games,
            wins,
            win_rate: (games > 0).then(|| wins as f64 / games as f64),
            exact: exact.to_string(),
            exact_value: exact.to_f64(),
        }
    }
}
