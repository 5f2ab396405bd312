//! Shared fixtures for the benchmarks.

use maxavg::normest::seeded_start;
use maxavg::operators::{DirectionFilter, RectFamily, ScaleGrid};
use maxavg::{DirectionSet, GridField};

/// Uniform `directions`-slope family with five heights and eight eccentricities.
pub fn uniform_family(n: usize, directions: usize) -> RectFamily {
    let dirs = DirectionSet::uniform(directions).expect("positive count");
    let scales = ScaleGrid::dyadic(2.0 / 3.0, 5, 0..=7, 3).expect("valid scales");
    RectFamily::directional(n, &dirs, &scales, DirectionFilter::All).expect("nonempty family")
}

/// Positive pseudo-random field of side `n`.
pub fn field(n: usize) -> GridField {
    seeded_start(n, 1)
}
