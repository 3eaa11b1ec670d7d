//! Exact polyomino dissection search and a set of recreational-mathematics solvers.
//!
//! * [`polyomino`]: validated cell sets, normalization, canonical keys and fixed enumeration.
//! * [`dissection`]: straight-line cut models, move generation, exact minimum-cut search and
//!   the greedy `n - 1` construction.
//! * [`probability`]: Monty Hall and birthday-problem calculations and simulators.
//! * [`combinatorics`]: Tower of Hanoi, N-queens, knight's tours, queen domination, magic
//!   squares and linear equations.

pub mod combinatorics;
pub mod dissection;
pub mod polyomino;
pub mod presets;
pub mod probability;
pub mod rng;

pub use dissection::{
    greedy_dissect, min_cuts, single_split_lower_bound, survey_conjecture, Axis, CutModel, CutSegment,
    CutTarget, DissectionError, DissectionState, MinCutResult, PieceId, SearchCaps, Solver, SurveyReport,
};
pub use polyomino::{canonical_key, dual_graph, enumerate_fixed, Cell, Polyomino, PolyominoError, ShapeKey};
