//! Hand-built measures shared by unit tests.

use crate::measure::TriMeasure;
use crate::trilattice::{stub_edge, Chirality, EdgeRef, LatticePoint, Side};

pub fn edge(a: (i32, i32), b: (i32, i32)) -> EdgeRef {
    EdgeRef::between(LatticePoint::new(a.0, a.1), LatticePoint::new(b.0, b.1)).unwrap()
}

fn stub(side: Side, j: u32, r: u32) -> EdgeRef {
    stub_edge(side, j, r, Chirality::Plus).unwrap()
}

/// Straight line down the B side of `Δ_2`, fed by the corner stubs.
pub fn w1() -> TriMeasure {
    TriMeasure::from_densities(
        2,
        Chirality::Plus,
        [
            (stub(Side::B, 0, 2), 1),
            (stub(Side::C, 0, 2), 1),
            (stub(Side::A, 2, 2), 1),
            (edge((2, 0), (2, 1)), 1),
            (edge((2, 1), (2, 2)), 1),
        ],
    )
    .unwrap()
}

/// Diagonal from `A_1` to the top corner with a branch at `(2,1)`.
pub fn w2() -> TriMeasure {
    TriMeasure::from_densities(
        2,
        Chirality::Plus,
        [
            (stub(Side::A, 1, 2), 1),
            (stub(Side::B, 1, 2), 1),
            (stub(Side::C, 0, 2), 1),
            (edge((1, 0), (2, 1)), 1),
            (edge((2, 1), (2, 2)), 1),
        ],
    )
    .unwrap()
}
