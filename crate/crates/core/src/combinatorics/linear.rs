use num_rational::Rational64;

use super::LabError;

/// Solves `a * x + b = c` for `x`.
pub fn solve_linear(a: Rational64, b: Rational64, c: Rational64) -> Result<Rational64, LabError> {
    if a != Rational64::from_integer(0) {
        return Ok((c - b) / a);
    }
    if b == c {
        Err(LabError::Indeterminate)
    } else {
        Err(LabError::NoUniqueSolution(format!("{b} = {c}")))
    }
}
