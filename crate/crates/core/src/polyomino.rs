//! Polyominoes on the integer grid.
//!
//! A cell `(x, y)` is the unit square `[x, x+1] x [y, y+1]`. The `y` axis points up, so in
//! the ASCII form the first row printed is the one with the largest `y`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest `n` [`enumerate_fixed`] accepts unless the caller raises it.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyominoError {
    #[error("a polyomino needs at least one cell")]
    EmptyInput,
    #[error("cell ({}, {}) appears more than once", .0.x, .0.y)]
    DuplicateCell(Cell),
    #[error("cells are not 4-connected")]
    Disconnected,
    #[error("n = {n} exceeds the configured cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("cannot parse polyomino: {0}")]
    Parse(String),
}

/// One unit square of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(i32, i32)", into = "(i32, i32)")]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }

    pub fn neighbors(self) -> [Cell; 4] {
        [
            Cell::new(self.x + 1, self.y),
            Cell::new(self.x - 1, self.y),
            Cell::new(self.x, self.y + 1),
            Cell::new(self.x, self.y - 1),
        ]
    }

    pub fn is_adjacent(self, other: Cell) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }
}

impl From<(i32, i32)> for Cell {
    fn from((x, y): (i32, i32)) -> Self {
        Cell { x, y }
    }
}

impl From<Cell> for (i32, i32) {
    fn from(c: Cell) -> Self {
        (c.x, c.y)
    }
}

/// A finite, 4-connected, duplicate-free set of cells.
///
/// Cells are kept sorted. [`Polyomino::from_cells`] also translates the shape so that its
/// minimum coordinates are zero; [`Polyomino::placed`] keeps absolute coordinates, which is
/// what pieces of an in-progress dissection need.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawCells", into = "RawCells")]
pub struct Polyomino {
    cells: Vec<Cell>,
}

#[derive(Serialize, Deserialize)]
struct RawCells {
    cells: Vec<Cell>,
}

impl TryFrom<RawCells> for Polyomino {
    type Error = PolyominoError;

    fn try_from(raw: RawCells) -> Result<Self, Self::Error> {
        Polyomino::placed(raw.cells)
    }
}

impl From<Polyomino> for RawCells {
    fn from(p: Polyomino) -> Self {
        RawCells { cells: p.cells }
    }
}

impl Polyomino {
    /// Validates `cells` and normalizes the result to the origin.
    pub fn from_cells<I, C>(cells: I) -> Result<Self, PolyominoError>
    where
        I: IntoIterator<Item = C>,
        C: Into<Cell>,
    {
        Ok(Self::placed(cells)?.normalized())
    }

    /// Validates `cells` without moving them.
    pub fn placed<I, C>(cells: I) -> Result<Self, PolyominoError>
    where
        I: IntoIterator<Item = C>,
        C: Into<Cell>,
    {
        let mut cells: Vec<Cell> = cells.into_iter().map(Into::into).collect();
        if cells.is_empty() {
            return Err(PolyominoError::EmptyInput);
        }
        cells.sort_unstable();
        if let Some(w) = cells.windows(2).find(|w| w[0] == w[1]) {
            return Err(PolyominoError::DuplicateCell(w[0]));
        }
        if !is_connected(&cells) {
            return Err(PolyominoError::Disconnected);
        }
        Ok(Polyomino { cells })
    }

    /// Builds from cells already known to be sorted, unique and connected.
    pub(crate) fn from_sorted_unchecked(cells: Vec<Cell>) -> Self {
        debug_assert!(cells.windows(2).all(|w| w[0] < w[1]));
        Polyomino { cells }
    }

    pub fn monomino() -> Self {
        Polyomino { cells: vec![Cell::new(0, 0)] }
    }

    /// A `width x height` rectangle anchored at the origin.
    pub fn rectangle(width: u32, height: u32) -> Result<Self, PolyominoError> {
        let cells = (0..width as i32).flat_map(|x| (0..height as i32).map(move |y| Cell::new(x, y)));
        Self::from_cells(cells)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.cells.len() == 1
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }

    /// `(min_x, min_y, max_x, max_y)` over the cells.
    pub fn bounds(&self) -> (i32, i32, i32, i32) {
        let min_x = self.cells.iter().map(|c| c.x).min().unwrap_or(0);
        let min_y = self.cells.iter().map(|c| c.y).min().unwrap_or(0);
        let max_x = self.cells.iter().map(|c| c.x).max().unwrap_or(0);
        let max_y = self.cells.iter().map(|c| c.y).max().unwrap_or(0);
        (min_x, min_y, max_x, max_y)
    }

    pub fn is_normalized(&self) -> bool {
        let (min_x, min_y, _, _) = self.bounds();
        min_x == 0 && min_y == 0
    }

    pub fn normalized(&self) -> Self {
        let (min_x, min_y, _, _) = self.bounds();
        self.translated(-min_x, -min_y)
    }

    pub fn translated(&self, dx: i32, dy: i32) -> Self {
        // Translation preserves the (x, y) order.
        Polyomino {
            cells: self.cells.iter().map(|c| Cell::new(c.x + dx, c.y + dy)).collect(),
        }
    }

    /// Applies one of the eight dihedral symmetries and renormalizes.
    pub fn transformed(&self, symmetry: Symmetry) -> Self {
        let mut cells: Vec<Cell> = self.cells.iter().map(|&c| symmetry.apply(c)).collect();
        cells.sort_unstable();
        Polyomino { cells }.normalized()
    }

    /// Internal edges, each reported once with `a < b`.
    pub fn internal_edges(&self) -> Vec<InternalEdge> {
        let mut edges = Vec::new();
        for &c in &self.cells {
            for other in [Cell::new(c.x + 1, c.y), Cell::new(c.x, c.y + 1)] {
                if self.contains(other) {
                    edges.push(InternalEdge { a: c, b: other });
                }
            }
        }
        edges
    }

    /// True when some empty cell is enclosed by the shape.
    pub fn has_holes(&self) -> bool {
        let (min_x, min_y, max_x, max_y) = self.bounds();
        let (lo_x, lo_y, hi_x, hi_y) = (min_x - 1, min_y - 1, max_x + 1, max_y + 1);
        let width = (hi_x - lo_x + 1) as usize;
        let height = (hi_y - lo_y + 1) as usize;
        let index = |c: Cell| (c.y - lo_y) as usize * width + (c.x - lo_x) as usize;
        let mut seen = vec![false; width * height];
        let start = Cell::new(lo_x, lo_y);
        seen[index(start)] = true;
        let mut queue = VecDeque::from([start]);
        let mut outside = 1usize;
        while let Some(c) = queue.pop_front() {
            for n in c.neighbors() {
                if n.x < lo_x || n.x > hi_x || n.y < lo_y || n.y > hi_y {
                    continue;
                }
                if !seen[index(n)] && !self.contains(n) {
                    seen[index(n)] = true;
                    outside += 1;
                    queue.push_back(n);
                }
            }
        }
        outside + self.len() < width * height
    }

    /// ASCII grid with `#` for cells and `.` for gaps, top row first.
    pub fn to_ascii(&self) -> String {
        self.ascii_rows().join("\n")
    }

    /// Compact single-line form of the ASCII grid, rows joined by `/`.
    pub fn shape_key(&self) -> String {
        self.normalized().ascii_rows().join("/")
    }

    fn ascii_rows(&self) -> Vec<String> {
        let (min_x, min_y, max_x, max_y) = self.bounds();
        (min_y..=max_y)
            .rev()
            .map(|y| {
                (min_x..=max_x)
                    .map(|x| if self.contains(Cell::new(x, y)) { '#' } else { '.' })
                    .collect()
            })
            .collect()
    }

    /// Parses the ASCII grid format. Blank lines are skipped and the result is normalized.
    pub fn parse_ascii(text: &str) -> Result<Self, PolyominoError> {
        let rows: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let mut cells = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            let y = (rows.len() - 1 - r) as i32;
            for (x, ch) in row.chars().enumerate() {
                match ch {
                    '#' => cells.push(Cell::new(x as i32, y)),
                    '.' => {}
                    other => {
                        return Err(PolyominoError::Parse(format!(
                            "unexpected character {other:?} in row {}",
                            r + 1
                        )))
                    }
                }
            }
        }
        Self::from_cells(cells)
    }

    /// Parses the JSON `{"cells": [[x, y], ...]}` form and normalizes it.
    pub fn parse_json(text: &str) -> Result<Self, PolyominoError> {
        let raw: RawCells =
            serde_json::from_str(text).map_err(|e| PolyominoError::Parse(e.to_string()))?;
        Self::from_cells(raw.cells)
    }

    /// Accepts either text format, sniffing JSON by its leading brace.
    pub fn parse(text: &str) -> Result<Self, PolyominoError> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_ascii(text)
        }
    }
}

impl fmt::Display for Polyomino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ascii())
    }
}

/// Connectivity check over a sorted, duplicate-free cell list.
pub(crate) fn is_connected(sorted: &[Cell]) -> bool {
    if sorted.is_empty() {
        return false;
    }
    let mut seen = vec![false; sorted.len()];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut reached = 1;
    while let Some(i) = stack.pop() {
        for n in sorted[i].neighbors() {
            if let Ok(j) = sorted.binary_search(&n) {
                if !seen[j] {
                    seen[j] = true;
                    reached += 1;
                    stack.push(j);
                }
            }
        }
    }
    reached == sorted.len()
}

/// A pair of edge-adjacent cells of one polyomino, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InternalEdge {
    pub a: Cell,
    pub b: Cell,
}

/// Cells as nodes, shared boundaries as edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub nodes: Vec<Cell>,
    pub edges: Vec<InternalEdge>,
}

impl DualGraph {
    pub fn is_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut components = self.nodes.len();
        for e in &self.edges {
            let (Ok(a), Ok(b)) = (self.nodes.binary_search(&e.a), self.nodes.binary_search(&e.b)) else {
                continue;
            };
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
        components == 1
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.nodes.len()
    }
}

pub fn dual_graph(p: &Polyomino) -> DualGraph {
    DualGraph { nodes: p.cells().to_vec(), edges: p.internal_edges() }
}

/// The eight symmetries of the square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Identity,
    Rotate90,
    Rotate180,
    Rotate270,
    FlipX,
    FlipY,
    Transpose,
    AntiTranspose,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::Rotate90,
        Symmetry::Rotate180,
        Symmetry::Rotate270,
        Symmetry::FlipX,
        Symmetry::FlipY,
        Symmetry::Transpose,
        Symmetry::AntiTranspose,
    ];

    pub fn apply(self, c: Cell) -> Cell {
        let (x, y) = (c.x, c.y);
        match self {
            Symmetry::Identity => Cell::new(x, y),
            Symmetry::Rotate90 => Cell::new(-y, x),
            Symmetry::Rotate180 => Cell::new(-x, -y),
            Symmetry::Rotate270 => Cell::new(y, -x),
            Symmetry::FlipX => Cell::new(-x, y),
            Symmetry::FlipY => Cell::new(x, -y),
            Symmetry::Transpose => Cell::new(y, x),
            Symmetry::AntiTranspose => Cell::new(-y, -x),
        }
    }
}

/// Comparable identity of a shape, insensitive to translation and optionally to symmetry.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ShapeKey(Vec<Cell>);

pub fn canonical_key(p: &Polyomino, up_to_symmetry: bool) -> ShapeKey {
    if up_to_symmetry {
        let best = Symmetry::ALL
            .iter()
            .map(|&s| p.transformed(s).cells)
            .min()
            .expect("eight symmetries");
        ShapeKey(best)
    } else {
        ShapeKey(p.normalized().cells)
    }
}

/// All fixed polyominoes with `n` cells, normalized and sorted by their cell lists.
pub fn enumerate_fixed(n: usize, cap: usize) -> Result<Vec<Polyomino>, PolyominoError> {
    if n == 0 {
        return Err(PolyominoError::EmptyInput);
    }
    if n > cap {
        return Err(PolyominoError::CapExceeded { n, cap });
    }
    let mut level: BTreeSet<Vec<Cell>> = BTreeSet::from([vec![Cell::new(0, 0)]]);
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for cells in &level {
            for c in cells {
                for grown in c.neighbors() {
                    if cells.binary_search(&grown).is_ok() {
                        continue;
                    }
                    let mut bigger = cells.clone();
                    bigger.push(grown);
                    bigger.sort_unstable();
                    next.insert(Polyomino { cells: bigger }.normalized().cells);
                }
            }
        }
        level = next;
    }
    Ok(level.into_iter().map(Polyomino::from_sorted_unchecked).collect())
}
