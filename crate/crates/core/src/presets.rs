//! Named shapes used by the CLI and the service catalog.

use crate::polyomino::{Polyomino, PolyominoError};

/// Names accepted by [`preset`], besides `row-N`.
pub const PRESET_NAMES: [&str; 5] = ["monomino", "domino", "l-tromino", "square-tetromino", "u-pentomino"];

/// Looks up a named shape. `row-N` is a `1 x N` strip.
pub fn preset(name: &str) -> Option<Polyomino> {
    let cells: Vec<(i32, i32)> = match name.to_ascii_lowercase().as_str() {
        "monomino" => vec![(0, 0)],
        "domino" => vec![(0, 0), (1, 0)],
        "l-tromino" => vec![(0, 0), (0, 1), (1, 0)],
        "square-tetromino" | "square" | "2x2" => vec![(0, 0), (1, 0), (0, 1), (1, 1)],
        "u-pentomino" => vec![(0, 0), (1, 0), (2, 0), (0, 1), (2, 1)],
        other => {
            let n: u32 = other.strip_prefix("row-")?.parse().ok().filter(|&n| n >= 1)?;
            return Polyomino::rectangle(n, 1).ok();
        }
    };
    Some(Polyomino::from_cells(cells).expect("presets are valid"))
}

/// Resolves a preset name, or else parses `text` as a shape in ASCII or JSON form.
pub fn preset_or_parse(name_or_text: &str) -> Result<Polyomino, PolyominoError> {
    match preset(name_or_text.trim()) {
        Some(p) => Ok(p),
        None => Polyomino::parse(name_or_text),
    }
}
