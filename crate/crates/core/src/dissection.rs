//! Straight-line dissection of polyominoes into unit squares.
//!
//! Cuts run along grid lines. A vertical cut on line `x = L` severs the boundary between
//! cells `(L-1, y)` and `(L, y)` for every `y` in its span `[lo, hi)`; a horizontal cut on
//! `y = L` does the same between `(x, L-1)` and `(x, L)` for `x` in `[lo, hi)`.
//!
//! Three cut models are supported:
//!
//! * [`CutModel::SingleSplit`]: a segment on one piece that splits it into exactly two parts.
//! * [`CutModel::FullLine`]: every internal boundary of one piece along a grid line at once.
//! * [`CutModel::GlobalLine`]: an infinite grid line applied to every piece simultaneously.
//!
//! Pieces stay where they are after each cut; nothing is moved, rotated or stacked.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use dashmap::DashMap;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::polyomino::{
    canonical_key, enumerate_fixed, Cell, Polyomino, PolyominoError, ShapeKey,
    DEFAULT_ENUMERATION_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DissectionError {
    #[error("illegal cut {0}")]
    IllegalCut(CutSegment),
    #[error("cut target {target} does not fit the {model} model")]
    WrongModel { model: CutModel, target: CutTarget },
    #[error("{cells} cells exceeds the {model} search cap of {cap}")]
    CapExceeded { model: CutModel, cells: usize, cap: usize },
    #[error("pieces overlap at ({}, {})", .0.x, .0.y)]
    Overlap(Cell),
    #[error(transparent)]
    Polyomino(#[from] PolyominoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CutModel {
    SingleSplit,
    FullLine,
    GlobalLine,
}

impl CutModel {
    pub const ALL: [CutModel; 3] = [CutModel::SingleSplit, CutModel::FullLine, CutModel::GlobalLine];

    pub fn is_per_piece(self) -> bool {
        !matches!(self, CutModel::GlobalLine)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CutModel::SingleSplit => "SINGLE_SPLIT",
            CutModel::FullLine => "FULL_LINE",
            CutModel::GlobalLine => "GLOBAL_LINE",
        }
    }
}

impl fmt::Display for CutModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CutModel {
    type Err = String;

    /// Accepts `single-split`, `SINGLE_SPLIT`, `singlesplit` and so on.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let folded: String =
            s.chars().filter(|c| c.is_ascii_alphanumeric()).map(|c| c.to_ascii_lowercase()).collect();
        match folded.as_str() {
            "singlesplit" | "single" => Ok(CutModel::SingleSplit),
            "fullline" | "full" => Ok(CutModel::FullLine),
            "globalline" | "global" => Ok(CutModel::GlobalLine),
            _ => Err(format!("unknown cut model {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "H")]
    Horizontal,
    #[serde(rename = "V")]
    Vertical,
}

/// Identifier of a piece within one [`DissectionState`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PieceId(pub u32);

impl fmt::Display for PieceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for PieceId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PieceId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map(PieceId).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutTarget {
    Piece(PieceId),
    Global,
}

impl fmt::Display for CutTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutTarget::Piece(id) => write!(f, "{id}"),
            CutTarget::Global => f.write_str("GLOBAL"),
        }
    }
}

impl Serialize for CutTarget {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CutTarget {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s == "GLOBAL" {
            return Ok(CutTarget::Global);
        }
        s.parse().map(|id| CutTarget::Piece(PieceId(id))).map_err(serde::de::Error::custom)
    }
}

/// A grid-aligned cut. `span` is the closed interval `[lo, hi]` it covers along its line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CutSegment {
    pub target: CutTarget,
    pub axis: Axis,
    pub line: i32,
    pub span: (i32, i32),
}

impl fmt::Display for CutSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, other) = match self.axis {
            Axis::Vertical => ("x", "y"),
            Axis::Horizontal => ("y", "x"),
        };
        write!(
            f,
            "[{}] {}={} {}:{}..{}",
            self.target, name, self.line, other, self.span.0, self.span.1
        )
    }
}

/// Limits on exact search, by total cell count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCaps {
    pub per_piece: usize,
    pub global: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { per_piece: 8, global: 6 }
    }
}

impl SearchCaps {
    pub fn for_model(&self, model: CutModel) -> usize {
        if model.is_per_piece() {
            self.per_piece
        } else {
            self.global
        }
    }

    fn check(&self, model: CutModel, cells: usize) -> Result<(), DissectionError> {
        let cap = self.for_model(model);
        if cells > cap {
            return Err(DissectionError::CapExceeded { model, cells, cap });
        }
        Ok(())
    }
}

fn crosses(axis: Axis, line: i32, (lo, hi): (i32, i32), a: Cell, b: Cell) -> bool {
    match axis {
        Axis::Vertical => a.y == b.y && a.x.max(b.x) == line && a.x != b.x && lo <= a.y && a.y < hi,
        Axis::Horizontal => a.x == b.x && a.y.max(b.y) == line && a.y != b.y && lo <= a.x && a.x < hi,
    }
}

/// Positions along `line` of the piece's internal boundaries lying on it, ascending.
fn edges_on_line(piece: &Polyomino, axis: Axis, line: i32) -> Vec<i32> {
    let mut positions: Vec<i32> = match axis {
        Axis::Vertical => piece
            .cells()
            .iter()
            .filter(|c| c.x == line && piece.contains(Cell::new(line - 1, c.y)))
            .map(|c| c.y)
            .collect(),
        Axis::Horizontal => piece
            .cells()
            .iter()
            .filter(|c| c.y == line && piece.contains(Cell::new(c.x, line - 1)))
            .map(|c| c.x)
            .collect(),
    };
    positions.sort_unstable();
    positions
}

/// Grid lines strictly inside the piece's bounding box, horizontal first.
fn interior_lines(piece: &Polyomino) -> impl Iterator<Item = (Axis, i32)> {
    let (min_x, min_y, max_x, max_y) = piece.bounds();
    ((min_y + 1)..=max_y)
        .map(|l| (Axis::Horizontal, l))
        .chain(((min_x + 1)..=max_x).map(|l| (Axis::Vertical, l)))
}

/// Connected parts of `piece` once the boundaries crossed by the segment are severed,
/// ordered by their smallest cell.
fn sever(piece: &Polyomino, axis: Axis, line: i32, span: (i32, i32)) -> Vec<Polyomino> {
    let cells = piece.cells();
    let mut label = vec![usize::MAX; cells.len()];
    let mut parts = Vec::new();
    for start in 0..cells.len() {
        if label[start] != usize::MAX {
            continue;
        }
        let id = parts.len();
        label[start] = id;
        let mut members = vec![cells[start]];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for n in cells[i].neighbors() {
                let Ok(j) = cells.binary_search(&n) else { continue };
                if label[j] == usize::MAX && !crosses(axis, line, span, cells[i], n) {
                    label[j] = id;
                    members.push(n);
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        parts.push(Polyomino::from_sorted_unchecked(members));
    }
    parts
}

/// A per-piece cut before it is attached to a piece id, with the parts it produces.
#[derive(Debug, Clone)]
struct PieceMove {
    axis: Axis,
    line: i32,
    span: (i32, i32),
    parts: Vec<Polyomino>,
}

fn piece_moves(piece: &Polyomino, model: CutModel) -> Vec<PieceMove> {
    debug_assert!(model.is_per_piece());
    let mut moves = Vec::new();
    for (axis, line) in interior_lines(piece) {
        let edges = edges_on_line(piece, axis, line);
        if edges.is_empty() {
            continue;
        }
        match model {
            CutModel::FullLine => {
                let span = (edges[0], edges[edges.len() - 1] + 1);
                moves.push(PieceMove { axis, line, span, parts: sever(piece, axis, line, span) });
            }
            _ => {
                for i in 0..edges.len() {
                    for j in i..edges.len() {
                        let span = (edges[i], edges[j] + 1);
                        let parts = sever(piece, axis, line, span);
                        if parts.len() == 2 {
                            moves.push(PieceMove { axis, line, span, parts });
                        }
                    }
                }
            }
        }
    }
    moves
}

/// Placed pieces plus the cuts that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DissectionState {
    model: CutModel,
    pieces: BTreeMap<PieceId, Polyomino>,
    history: Vec<CutSegment>,
    next_id: u32,
}

impl DissectionState {
    /// A fresh state holding `p` as piece `0`, at its own coordinates.
    pub fn new(p: Polyomino, model: CutModel) -> Self {
        DissectionState { model, pieces: BTreeMap::from([(PieceId(0), p)]), history: Vec::new(), next_id: 1 }
    }

    /// A state with several already-separated pieces, numbered in the given order.
    pub fn from_pieces(pieces: Vec<Polyomino>, model: CutModel) -> Result<Self, DissectionError> {
        let mut all: Vec<Cell> = pieces.iter().flat_map(|p| p.cells().iter().copied()).collect();
        all.sort_unstable();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(DissectionError::Overlap(w[0]));
        }
        if all.is_empty() {
            return Err(PolyominoError::EmptyInput.into());
        }
        let next_id = pieces.len() as u32;
        let pieces = pieces.into_iter().enumerate().map(|(i, p)| (PieceId(i as u32), p)).collect();
        Ok(DissectionState { model, pieces, history: Vec::new(), next_id })
    }

    pub fn model(&self) -> CutModel {
        self.model
    }

    pub fn pieces(&self) -> &BTreeMap<PieceId, Polyomino> {
        &self.pieces
    }

    pub fn history(&self) -> &[CutSegment] {
        &self.history
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn total_cells(&self) -> usize {
        self.pieces.values().map(Polyomino::len).sum()
    }

    /// All cells of all pieces, sorted.
    pub fn cells(&self) -> Vec<Cell> {
        let mut all: Vec<Cell> = self.pieces.values().flat_map(|p| p.cells().iter().copied()).collect();
        all.sort_unstable();
        all
    }

    pub fn is_finished(&self) -> bool {
        self.pieces.values().all(Polyomino::is_unit)
    }

    /// The set of pieces as sorted cell lists; identical for states with the same layout.
    fn layout(&self) -> Vec<Vec<Cell>> {
        let mut layout: Vec<Vec<Cell>> = self.pieces.values().map(|p| p.cells().to_vec()).collect();
        layout.sort_unstable();
        layout
    }

    /// Every admissible cut, in a fixed order.
    pub fn legal_cuts(&self) -> Vec<CutSegment> {
        match self.model {
            CutModel::GlobalLine => self.global_moves().into_iter().map(|(cut, _)| cut).collect(),
            model => self
                .pieces
                .iter()
                .flat_map(|(&id, piece)| {
                    piece_moves(piece, model).into_iter().map(move |m| CutSegment {
                        target: CutTarget::Piece(id),
                        axis: m.axis,
                        line: m.line,
                        span: m.span,
                    })
                })
                .collect(),
        }
    }

    /// Lines that sever at least one piece, each with the pieces it touches.
    fn global_moves(&self) -> Vec<(CutSegment, Vec<PieceId>)> {
        let mut lines: BTreeMap<(Axis, i32), (i32, i32, Vec<PieceId>)> = BTreeMap::new();
        for (&id, piece) in &self.pieces {
            for (axis, line) in interior_lines(piece) {
                let edges = edges_on_line(piece, axis, line);
                if let (Some(&first), Some(&last)) = (edges.first(), edges.last()) {
                    let entry = lines.entry((axis, line)).or_insert((i32::MAX, i32::MIN, Vec::new()));
                    entry.0 = entry.0.min(first);
                    entry.1 = entry.1.max(last + 1);
                    entry.2.push(id);
                }
            }
        }
        lines
            .into_iter()
            .map(|((axis, line), (lo, hi, ids))| {
                (CutSegment { target: CutTarget::Global, axis, line, span: (lo, hi) }, ids)
            })
            .collect()
    }

    /// Applies `cut`, returning the new state. The recorded cut has its span tightened to the
    /// boundaries it actually severs; a global cut is an entire line, so its span is ignored.
    pub fn apply_cut(&self, cut: &CutSegment) -> Result<DissectionState, DissectionError> {
        let illegal = || DissectionError::IllegalCut(*cut);
        match (self.model, cut.target) {
            (CutModel::GlobalLine, CutTarget::Piece(_)) | (CutModel::SingleSplit | CutModel::FullLine, CutTarget::Global) => {
                Err(DissectionError::WrongModel { model: self.model, target: cut.target })
            }
            (CutModel::GlobalLine, CutTarget::Global) => {
                let (canonical, ids) = self
                    .global_moves()
                    .into_iter()
                    .find(|(c, _)| c.axis == cut.axis && c.line == cut.line)
                    .ok_or_else(illegal)?;
                let mut next = self.clone();
                for id in ids {
                    let piece = next.pieces.remove(&id).expect("piece listed by global_moves");
                    let parts = sever(&piece, canonical.axis, canonical.line, (i32::MIN, i32::MAX));
                    next.insert_parts(parts);
                }
                next.history.push(canonical);
                Ok(next)
            }
            (model, CutTarget::Piece(id)) => {
                let piece = self.pieces.get(&id).ok_or_else(illegal)?;
                let (lo, hi) = cut.span;
                if lo >= hi {
                    return Err(illegal());
                }
                let all = edges_on_line(piece, cut.axis, cut.line);
                let severed: Vec<i32> = all.iter().copied().filter(|&p| lo <= p && p < hi).collect();
                let (Some(&first), Some(&last)) = (severed.first(), severed.last()) else {
                    return Err(illegal());
                };
                if model == CutModel::FullLine && severed.len() != all.len() {
                    return Err(illegal());
                }
                let span = (first, last + 1);
                let parts = sever(piece, cut.axis, cut.line, span);
                if model == CutModel::SingleSplit && parts.len() != 2 {
                    return Err(illegal());
                }
                let mut next = self.clone();
                next.pieces.remove(&id);
                next.insert_parts(parts);
                next.history.push(CutSegment { target: cut.target, axis: cut.axis, line: cut.line, span });
                Ok(next)
            }
        }
    }

    fn insert_parts(&mut self, parts: Vec<Polyomino>) {
        for part in parts {
            self.pieces.insert(PieceId(self.next_id), part);
            self.next_id += 1;
        }
    }
}

/// Exact minimum number of cuts together with a cut sequence achieving it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinCutResult {
    pub count: u32,
    pub witness: Vec<CutSegment>,
}

/// Lower bound valid for every model: each grid line carrying an internal boundary must be
/// cut at least once.
fn distinct_line_bound(piece: &Polyomino) -> u32 {
    interior_lines(piece).filter(|&(axis, line)| !edges_on_line(piece, axis, line).is_empty()).count() as u32
}

/// Exact minimum-cut search with a shared memo table.
///
/// Per-piece models recurse on individual pieces (parts never interact once separated) and
/// memoize on the symmetry-folded shape key. The global model searches breadth-first over
/// whole layouts.
#[derive(Debug, Default)]
pub struct Solver {
    caps: SearchCaps,
    single_split: DashMap<ShapeKey, u32>,
    full_line: DashMap<ShapeKey, u32>,
}

impl Solver {
    pub fn new(caps: SearchCaps) -> Self {
        Solver { caps, ..Default::default() }
    }

    /// Process-wide solver with default caps.
    pub fn shared() -> &'static Solver {
        static SHARED: OnceLock<Solver> = OnceLock::new();
        SHARED.get_or_init(Solver::default)
    }

    pub fn caps(&self) -> SearchCaps {
        self.caps
    }

    fn memo(&self, model: CutModel) -> &DashMap<ShapeKey, u32> {
        match model {
            CutModel::SingleSplit => &self.single_split,
            CutModel::FullLine => &self.full_line,
            CutModel::GlobalLine => unreachable!("global search is not memoized per piece"),
        }
    }

    fn piece_min(&self, piece: &Polyomino, model: CutModel) -> u32 {
        if piece.is_unit() {
            return 0;
        }
        let key = canonical_key(piece, true);
        if let Some(v) = self.memo(model).get(&key) {
            return *v;
        }
        let floor = match model {
            CutModel::SingleSplit => piece.len() as u32 - 1,
            _ => distinct_line_bound(piece),
        };
        let mut best = u32::MAX;
        for m in piece_moves(piece, model) {
            let mut total = 1;
            for part in &m.parts {
                if total >= best {
                    break;
                }
                total += self.piece_min(part, model);
            }
            best = best.min(total);
            if best == floor {
                break;
            }
        }
        self.memo(model).insert(key, best);
        best
    }

    pub fn min_cuts(&self, p: &Polyomino, model: CutModel) -> Result<MinCutResult, DissectionError> {
        self.caps.check(model, p.len())?;
        let start = DissectionState::new(p.clone(), model);
        match model {
            CutModel::GlobalLine => self.global_search(&start),
            _ => Ok(self.per_piece_witness(start)),
        }
    }

    /// Replays optimal choices piece by piece, always working on the lowest-numbered
    /// unfinished piece.
    fn per_piece_witness(&self, mut state: DissectionState) -> MinCutResult {
        let model = state.model;
        let count: u32 = state.pieces.values().map(|p| self.piece_min(p, model)).sum();
        while let Some((&id, piece)) = state.pieces.iter().find(|(_, p)| !p.is_unit()) {
            let goal = self.piece_min(piece, model) - 1;
            let best = piece_moves(piece, model)
                .into_iter()
                .find(|m| m.parts.iter().map(|part| self.piece_min(part, model)).sum::<u32>() == goal)
                .expect("an optimal move exists for every memoized value");
            let cut = CutSegment { target: CutTarget::Piece(id), axis: best.axis, line: best.line, span: best.span };
            state = state.apply_cut(&cut).expect("generated cuts are legal");
        }
        debug_assert_eq!(state.history.len(), count as usize);
        MinCutResult { count, witness: state.history }
    }

    fn global_search(&self, start: &DissectionState) -> Result<MinCutResult, DissectionError> {
        let base = start.history.len();
        let mut seen = HashSet::from([start.layout()]);
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(state) = queue.pop_front() {
            if state.is_finished() {
                let witness = state.history[base..].to_vec();
                return Ok(MinCutResult { count: witness.len() as u32, witness });
            }
            for cut in state.legal_cuts() {
                let next = state.apply_cut(&cut)?;
                if seen.insert(next.layout()) {
                    queue.push_back(next);
                }
            }
        }
        unreachable!("every layout can be finished with line cuts")
    }

    /// Minimum number of further cuts needed to finish `state`.
    pub fn hint(&self, state: &DissectionState) -> Result<u32, DissectionError> {
        self.caps.check(state.model, state.total_cells())?;
        match state.model {
            CutModel::GlobalLine => Ok(self.global_search(state)?.count),
            model => Ok(state.pieces.values().map(|p| self.piece_min(p, model)).sum()),
        }
    }

    /// Minimum cuts for every fixed polyomino up to `n_max` cells. `jobs > 1` spreads the
    /// shapes over a thread pool; the row order does not depend on it.
    pub fn survey(&self, n_max: usize, model: CutModel, jobs: usize) -> Result<SurveyReport, DissectionError> {
        self.caps.check(model, n_max)?;
        let mut shapes = Vec::new();
        for n in 1..=n_max {
            shapes.extend(enumerate_fixed(n, DEFAULT_ENUMERATION_CAP.max(self.caps.for_model(model)))?);
        }
        let row = |p: &Polyomino| -> Result<SurveyRow, DissectionError> {
            let min_cuts = self.min_cuts(p, model)?.count;
            let n_minus_1 = p.len() as u32 - 1;
            Ok(SurveyRow {
                n: p.len(),
                shape_key: p.shape_key(),
                min_cuts,
                n_minus_1,
                matches: min_cuts == n_minus_1,
                has_holes: p.has_holes(),
            })
        };
        let rows: Vec<SurveyRow> = if jobs > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("thread pool");
            pool.install(|| shapes.par_iter().map(row).collect::<Result<_, _>>())?
        } else {
            shapes.iter().map(row).collect::<Result<_, _>>()?
        };
        Ok(SurveyReport::new(model, rows))
    }
}

pub fn min_cuts(p: &Polyomino, model: CutModel) -> Result<MinCutResult, DissectionError> {
    Solver::shared().min_cuts(p, model)
}

pub fn hint(state: &DissectionState) -> Result<u32, DissectionError> {
    Solver::shared().hint(state)
}

pub fn survey_conjecture(n_max: usize, model: CutModel) -> Result<SurveyReport, DissectionError> {
    Solver::shared().survey(n_max, model, 1)
}

/// `n - 1`: with every cut adding at most one piece, `C_k <= 1 + k`, and finishing needs
/// `C_k = n`.
pub fn single_split_lower_bound(p: &Polyomino) -> u32 {
    p.len() as u32 - 1
}

/// A deterministic SINGLE_SPLIT dissection into unit squares, always `n - 1` cuts long.
///
/// Works on the lowest-numbered unfinished piece. If that piece has a cell with a single
/// neighbour, the lexicographically smallest such cell is cut free. Otherwise every cell has
/// two or more neighbours and none can be freed by one straight cut, so the piece is split
/// with the shortest run of boundaries (from the low end of the first line, in
/// [`DissectionState::legal_cuts`] order) that disconnects it. Such a run exists because
/// severing boundaries one at a time raises the component count by at most one, and a whole
/// line always disconnects.
pub fn greedy_dissect(p: &Polyomino) -> Vec<CutSegment> {
    let mut state = DissectionState::new(p.clone(), CutModel::SingleSplit);
    while let Some((&id, piece)) = state.pieces.iter().find(|(_, p)| !p.is_unit()) {
        let target = CutTarget::Piece(id);
        let leaf = piece.cells().iter().find_map(|&c| {
            let mut nbrs = c.neighbors().into_iter().filter(|&n| piece.contains(n));
            match (nbrs.next(), nbrs.next()) {
                (Some(n), None) => Some((c, n)),
                _ => None,
            }
        });
        let cut = match leaf {
            Some((c, n)) => {
                if c.x != n.x {
                    let y = c.y;
                    CutSegment { target, axis: Axis::Vertical, line: c.x.max(n.x), span: (y, y + 1) }
                } else {
                    let x = c.x;
                    CutSegment { target, axis: Axis::Horizontal, line: c.y.max(n.y), span: (x, x + 1) }
                }
            }
            None => interior_lines(piece)
                .find_map(|(axis, line)| {
                    let edges = edges_on_line(piece, axis, line);
                    (0..edges.len()).find_map(|j| {
                        let span = (edges[0], edges[j] + 1);
                        (sever(piece, axis, line, span).len() == 2)
                            .then_some(CutSegment { target, axis, line, span })
                    })
                })
                .expect("some prefix run splits any non-unit piece"),
        };
        state = state.apply_cut(&cut).expect("greedy cuts are legal");
    }
    state.history
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub n: usize,
    pub shape_key: String,
    pub min_cuts: u32,
    pub n_minus_1: u32,
    pub matches: bool,
    pub has_holes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyTotals {
    pub n: usize,
    pub shapes: usize,
    pub matching: usize,
    pub flagged: usize,
    pub with_holes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub model: CutModel,
    pub rows: Vec<SurveyRow>,
    pub totals: Vec<SurveyTotals>,
}

impl SurveyReport {
    fn new(model: CutModel, rows: Vec<SurveyRow>) -> Self {
        let mut by_n: BTreeMap<usize, SurveyTotals> = BTreeMap::new();
        for r in &rows {
            let t = by_n
                .entry(r.n)
                .or_insert(SurveyTotals { n: r.n, shapes: 0, matching: 0, flagged: 0, with_holes: 0 });
            t.shapes += 1;
            if r.matches {
                t.matching += 1;
            } else {
                t.flagged += 1;
            }
            if r.has_holes {
                t.with_holes += 1;
            }
        }
        SurveyReport { model, rows, totals: by_n.into_values().collect() }
    }

    pub fn flagged(&self) -> impl Iterator<Item = &SurveyRow> {
        self.rows.iter().filter(|r| !r.matches)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,shape_key,min_cuts,n_minus_1,matches\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{},{}\n", r.n, r.shape_key, r.min_cuts, r.n_minus_1, r.matches));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cells: &[(i32, i32)]) -> Polyomino {
        Polyomino::from_cells(cells.iter().copied()).unwrap()
    }

    fn domino() -> Polyomino {
        poly(&[(0, 0), (1, 0)])
    }

    fn u_pentomino() -> Polyomino {
        poly(&[(0, 0), (1, 0), (2, 0), (0, 1), (2, 1)])
    }

    fn square() -> Polyomino {
        Polyomino::rectangle(2, 2).unwrap()
    }

    #[test]
    fn domino_has_one_cut_in_every_model() {
        for model in CutModel::ALL {
            let state = DissectionState::new(domino(), model);
            let cuts = state.legal_cuts();
            assert_eq!(cuts.len(), 1, "{model}");
            assert_eq!((cuts[0].axis, cuts[0].line, cuts[0].span), (Axis::Vertical, 1, (0, 1)));
            let next = state.apply_cut(&cuts[0]).unwrap();
            assert!(next.is_finished());
            assert_eq!(next.piece_count(), 2);
            assert_eq!(next.history().len(), 1);
        }
    }

    #[test]
    fn monomino_has_no_cuts() {
        let state = DissectionState::new(Polyomino::monomino(), CutModel::SingleSplit);
        assert!(state.legal_cuts().is_empty());
        assert!(state.is_finished());
    }

    #[test]
    fn square_single_split_cuts() {
        let cuts = DissectionState::new(square(), CutModel::SingleSplit).legal_cuts();
        let simple: Vec<_> = cuts.iter().map(|c| (c.axis, c.line, c.span)).collect();
        assert_eq!(simple, vec![(Axis::Horizontal, 1, (0, 2)), (Axis::Vertical, 1, (0, 2))]);
    }

    #[test]
    fn partial_cut_through_cycle_is_illegal() {
        let state = DissectionState::new(square(), CutModel::SingleSplit);
        let partial = CutSegment { target: CutTarget::Piece(PieceId(0)), axis: Axis::Vertical, line: 1, span: (0, 1) };
        assert_eq!(state.apply_cut(&partial), Err(DissectionError::IllegalCut(partial)));
    }

    #[test]
    fn full_line_cut_on_u_gives_three_pieces() {
        let state = DissectionState::new(u_pentomino(), CutModel::FullLine);
        let cut = CutSegment { target: CutTarget::Piece(PieceId(0)), axis: Axis::Horizontal, line: 1, span: (0, 3) };
        let next = state.apply_cut(&cut).unwrap();
        assert_eq!(next.piece_count(), 3);
        let sizes: Vec<usize> = next.pieces().values().map(Polyomino::len).collect();
        assert_eq!(sizes, vec![3, 1, 1]);
        assert_eq!(next.history()[0].span, (0, 3));
        assert_eq!(state.piece_count(), 1, "input state is untouched");
    }

    #[test]
    fn loose_span_is_tightened() {
        let state = DissectionState::new(u_pentomino(), CutModel::FullLine);
        let cut = CutSegment { target: CutTarget::Piece(PieceId(0)), axis: Axis::Horizontal, line: 1, span: (-4, 9) };
        let next = state.apply_cut(&cut).unwrap();
        assert_eq!(next.history()[0].span, (0, 3));
        // A FULL_LINE cut must take every boundary on its line.
        let short = CutSegment { span: (0, 1), ..cut };
        assert!(matches!(state.apply_cut(&short), Err(DissectionError::IllegalCut(_))));
    }

    #[test]
    fn global_cut_hits_every_piece() {
        let top = Polyomino::placed([(0, 1), (1, 1)]).unwrap();
        let bottom = Polyomino::placed([(0, 0), (1, 0)]).unwrap();
        let state = DissectionState::from_pieces(vec![top, bottom], CutModel::GlobalLine).unwrap();
        let cut = CutSegment { target: CutTarget::Global, axis: Axis::Vertical, line: 1, span: (0, 2) };
        let next = state.apply_cut(&cut).unwrap();
        assert_eq!(next.piece_count(), 4);
        assert!(next.is_finished());
    }

    #[test]
    fn wrong_model_targets() {
        let per_piece = DissectionState::new(domino(), CutModel::SingleSplit);
        let global = CutSegment { target: CutTarget::Global, axis: Axis::Vertical, line: 1, span: (0, 1) };
        assert!(matches!(per_piece.apply_cut(&global), Err(DissectionError::WrongModel { .. })));
        let line = DissectionState::new(domino(), CutModel::GlobalLine);
        let local = CutSegment { target: CutTarget::Piece(PieceId(0)), ..global };
        assert!(matches!(line.apply_cut(&local), Err(DissectionError::WrongModel { .. })));
    }

    #[test]
    fn overlapping_pieces_rejected() {
        let err = DissectionState::from_pieces(vec![domino(), Polyomino::monomino()], CutModel::GlobalLine);
        assert_eq!(err, Err(DissectionError::Overlap(Cell::new(0, 0))));
    }

    #[test]
    fn lower_bound() {
        assert_eq!(single_split_lower_bound(&domino()), 1);
        assert_eq!(single_split_lower_bound(&Polyomino::monomino()), 0);
        assert_eq!(single_split_lower_bound(&Polyomino::rectangle(7, 1).unwrap()), 6);
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_dissect(&domino()).len(), 1);
        assert_eq!(greedy_dissect(&poly(&[(0, 0), (0, 1), (1, 0)])).len(), 2);
        let row = greedy_dissect(&Polyomino::rectangle(5, 1).unwrap());
        assert_eq!(row.len(), 4);
        let mut lines: Vec<i32> = row.iter().map(|c| c.line).collect();
        lines.sort_unstable();
        assert_eq!(lines, vec![1, 2, 3, 4]);
        assert!(row.iter().all(|c| c.axis == Axis::Vertical));
        // No leaf in a 2x2 block: the first cut must halve it.
        let sq = greedy_dissect(&square());
        assert_eq!(sq.len(), 3);
        assert_eq!(sq[0].span, (0, 2));
    }

    #[test]
    fn min_cut_examples() {
        let solver = Solver::default();
        for model in CutModel::ALL {
            let r = solver.min_cuts(&Polyomino::monomino(), model).unwrap();
            assert_eq!(r, MinCutResult { count: 0, witness: vec![] });
        }
        assert_eq!(solver.min_cuts(&square(), CutModel::SingleSplit).unwrap().count, 3);
        assert_eq!(solver.min_cuts(&u_pentomino(), CutModel::FullLine).unwrap().count, 3);
        assert_eq!(solver.min_cuts(&u_pentomino(), CutModel::SingleSplit).unwrap().count, 4);
        let global = solver.min_cuts(&square(), CutModel::GlobalLine).unwrap();
        assert_eq!(global.count, 2);
        assert!(global.witness.iter().all(|c| c.target == CutTarget::Global));
    }

    #[test]
    fn caps_are_enforced() {
        let solver = Solver::new(SearchCaps { per_piece: 4, global: 3 });
        assert!(matches!(
            solver.min_cuts(&u_pentomino(), CutModel::FullLine),
            Err(DissectionError::CapExceeded { cells: 5, cap: 4, .. })
        ));
        assert!(matches!(
            solver.min_cuts(&square(), CutModel::GlobalLine),
            Err(DissectionError::CapExceeded { cells: 4, cap: 3, .. })
        ));
        assert!(solver.min_cuts(&square(), CutModel::FullLine).is_ok());
    }

    #[test]
    fn hints() {
        let solver = Solver::default();
        assert_eq!(solver.hint(&DissectionState::new(domino(), CutModel::SingleSplit)).unwrap(), 1);
        let u = DissectionState::new(u_pentomino(), CutModel::FullLine);
        assert_eq!(solver.hint(&u).unwrap(), 3);
        let finished = DissectionState::new(Polyomino::monomino(), CutModel::GlobalLine);
        assert_eq!(solver.hint(&finished).unwrap(), 0);
        let sq = DissectionState::new(square(), CutModel::GlobalLine);
        assert_eq!(solver.hint(&sq).unwrap(), 2);
    }

    #[test]
    fn model_parsing() {
        assert_eq!("single-split".parse::<CutModel>(), Ok(CutModel::SingleSplit));
        assert_eq!("FULL_LINE".parse::<CutModel>(), Ok(CutModel::FullLine));
        assert_eq!("global".parse::<CutModel>(), Ok(CutModel::GlobalLine));
        assert!("diagonal".parse::<CutModel>().is_err());
    }

    #[test]
    fn cut_wire_format() {
        let cut = CutSegment { target: CutTarget::Piece(PieceId(3)), axis: Axis::Horizontal, line: 1, span: (0, 3) };
        let json = serde_json::to_string(&cut).unwrap();
        assert_eq!(json, r#"{"target":"3","axis":"H","line":1,"span":[0,3]}"#);
        assert_eq!(serde_json::from_str::<CutSegment>(&json).unwrap(), cut);
        let global: CutSegment =
            serde_json::from_str(r#"{"target":"GLOBAL","axis":"V","line":2,"span":[0,1]}"#).unwrap();
        assert_eq!(global.target, CutTarget::Global);
        assert!(serde_json::from_str::<CutSegment>(r#"{"target":"x","axis":"V","line":2,"span":[0,1]}"#).is_err());
    }

    #[test]
    fn survey_csv_header() {
        let report = Solver::default().survey(2, CutModel::FullLine, 1).unwrap();
        let csv = report.to_csv();
        assert!(csv.starts_with("n,shape_key,min_cuts,n_minus_1,matches\n1,#,0,0,true\n"));
        assert_eq!(report.rows.len(), 3);
        assert_eq!(report.flagged().count(), 0);
    }
}
