#![allow(dead_code)]

use hivepoly::trilattice::stub_edge;
use hivepoly::{Chirality, EdgeRef, LatticePoint, SetTriple, Side, TriMeasure};

pub fn edge(a: (i32, i32), b: (i32, i32)) -> EdgeRef {
    EdgeRef::between(LatticePoint::new(a.0, a.1), LatticePoint::new(b.0, b.1)).unwrap()
}

pub fn stub(side: Side, j: u32, r: u32) -> EdgeRef {
    stub_edge(side, j, r, Chirality::Plus).unwrap()
}

/// One unit of mass along side B with stubs at `B_0`, `C_0` and `A_2`.
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

pub fn triple(n: u32, i: &[u32], j: &[u32], k: &[u32]) -> SetTriple {
    SetTriple::new(n, i.to_vec(), j.to_vec(), k.to_vec()).unwrap()
}
