//! Fixture builders shared by the benchmark targets.

use bertrand_lab::expr::CurveSpec;
use bertrand_lab::fixtures;
use bertrand_lab::framed::{CurvatureExprs, FramedInit};
use bertrand_lab::geom::Grid;

pub fn helix_with_grid(n: usize) -> (CurveSpec, Grid) {
    let curve = fixtures::helix();
    let grid = Grid::uniform(curve.t0, curve.t1, n).expect("valid grid");
    (curve, grid)
}

pub fn framed_example_with_grid(n: usize) -> (CurvatureExprs, FramedInit, Grid) {
    let (curv, init) = fixtures::framed_example(1.0, 2.0);
    let grid = fixtures::half_open_period_grid(n).expect("valid grid");
    (curv, init, grid)
}
