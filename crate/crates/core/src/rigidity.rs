//! Rigidity read off the support: no point with six support edges and no
//! closed path made entirely of evil turns.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::invalid;
use crate::measure::TriMeasure;
use crate::trilattice::{incident_edges, Direction, EdgeRef, LatticePoint};
use crate::Result;

/// A small edge traversed from `from` to `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DirectedEdge {
    pub from: LatticePoint,
    pub to: LatticePoint,
}

impl DirectedEdge {
    pub fn edge(self) -> EdgeRef {
        EdgeRef::between(self.from, self.to).expect("directed edges join neighbours")
    }
}

/// Obstruction to rigidity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    SixEdges { point: LatticePoint },
    /// Closed loop `p0 p1 … pk` with `pk = p0`.
    EvilLoop { points: Vec<LatticePoint> },
}

fn has(m: &TriMeasure, p: LatticePoint, d: Direction) -> bool {
    m.in_support(EdgeRef::from_directed(p, d))
}

/// Whether `A, B, C` is an evil turn of `m`. Angles are measured at `B` from
/// the ray `B→A`, turning in the clockwise sense of the measure's chirality.
pub fn is_evil_turn(m: &TriMeasure, a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Result<bool> {
    let da = b.direction_to(a).ok_or_else(|| invalid(format!("{a} and {b} are not adjacent")))?;
    let dc = b.direction_to(c).ok_or_else(|| invalid(format!("{b} and {c} are not adjacent")))?;
    Ok(evil(m, b, da, dc))
}

fn evil(m: &TriMeasure, b: LatticePoint, da: Direction, dc: Direction) -> bool {
    let ch = m.chirality();
    let cw = |k: i32| da.clockwise(k, ch);
    let on = |k: i32| has(m, b, cw(k));
    if dc == da {
        return on(2) && on(3) && on(4);
    }
    dc == cw(2)
        || dc == cw(3)
        || (dc == cw(-2) && on(2))
        || (dc == cw(-1) && on(2) && on(3))
}

/// Directed support edges with arcs along evil turns.
pub struct TurnGraph {
    pub nodes: Vec<DirectedEdge>,
    pub arcs: Vec<Vec<usize>>,
}

impl TurnGraph {
    pub fn new(m: &TriMeasure) -> Self {
        let mut nodes = Vec::with_capacity(2 * m.support_len());
        for e in m.support() {
            let (p, q) = e.endpoints();
            nodes.push(DirectedEdge { from: p, to: q });
            nodes.push(DirectedEdge { from: q, to: p });
        }
        nodes.sort();
        let index: HashMap<DirectedEdge, usize> =
            nodes.iter().enumerate().map(|(i, d)| (*d, i)).collect();
        let arcs = nodes
            .iter()
            .map(|n| {
                let b = n.to;
                let da = b.direction_to(n.from).expect("adjacent");
                incident_edges(b)
                    .into_iter()
                    .filter(|(dc, e)| m.in_support(*e) && evil(m, b, da, *dc))
                    .map(|(dc, _)| index[&DirectedEdge { from: b, to: b.step(dc) }])
                    .collect()
            })
            .collect();
        Self { nodes, arcs }
    }

    /// Some directed cycle, as node indices, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let n = self.nodes.len();
        let mut mark = vec![Mark::New; n];
        let mut parent = vec![usize::MAX; n];
        for start in 0..n {
            if mark[start] != Mark::New {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            mark[start] = Mark::Active;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < self.arcs[v].len() {
                    let w = self.arcs[v][*next];
                    *next += 1;
                    match mark[w] {
                        Mark::New => {
                            mark[w] = Mark::Active;
                            parent[w] = v;
                            stack.push((w, 0));
                        }
                        Mark::Active => {
                            let mut cycle = vec![v];
                            let mut x = v;
                            while x != w {
                                x = parent[x];
                                cycle.push(x);
                            }
                            cycle.reverse();
                            return Some(cycle);
                        }
                        Mark::Done => {}
                    }
                } else {
                    mark[v] = Mark::Done;
                    stack.pop();
                }
            }
        }
        None
    }
}

pub fn find_witness(m: &TriMeasure) -> Option<Witness> {
    for e in m.support() {
        let (p, q) = e.endpoints();
        for x in [p, q] {
            if incident_edges(x).iter().all(|(_, f)| m.in_support(*f)) {
                return Some(Witness::SixEdges { point: x });
            }
        }
    }
    let g = TurnGraph::new(m);
    g.find_cycle().map(|cycle| {
        let mut points: Vec<LatticePoint> = cycle.iter().map(|&i| g.nodes[i].from).collect();
        points.push(points[0]);
        Witness::EvilLoop { points }
    })
}

/// The zero measure counts as rigid: it is the only measure of weight zero.
pub fn is_rigid(m: &TriMeasure) -> bool {
    find_witness(m).is_none()
}

/// Every cyclic consecutive triple of the loop is an evil turn.
pub fn loop_is_evil(m: &TriMeasure, points: &[LatticePoint]) -> bool {
    let k = points.len().saturating_sub(1);
    if k < 2 || points[0] != points[k] {
        return false;
    }
    (0..k).all(|i| {
        let a = points[(i + k - 1) % k];
        let b = points[i];
        let c = points[(i + 1) % k];
        EdgeRef::between(a, b).is_some_and(|e| m.in_support(e))
            && is_evil_turn(m, a, b, c).unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hive::enumerate_measures;
    use crate::measure::{BoundaryData, SetTriple};
    use crate::testutil::{edge, w2};
    use crate::trilattice::Chirality;

    fn p(x: i32, y: i32) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn star_at(c: LatticePoint) -> TriMeasure {
        let entries = incident_edges(c).map(|(_, e)| (e, 1));
        TriMeasure::from_densities(4, Chirality::Plus, entries).unwrap()
    }

    #[test]
    fn turn_cases() {
        let m = star_at(p(2, 1));
        let b = p(2, 1);
        let a = b.step(Direction::new(0));
        // Collinear continuation.
        assert!(is_evil_turn(&m, a, b, b.step(Direction::new(3))).unwrap());
        // 120° clockwise from the ray B→A.
        assert!(is_evil_turn(&m, a, b, b.step(Direction::new(-2))).unwrap());
        assert!(is_evil_turn(&m, a, b, p(0, 0)).is_err());
    }

    #[test]
    fn counterclockwise_turn_needs_the_clockwise_edge() {
        let b = p(2, 1);
        let a = b.step(Direction::new(0));
        let c = b.step(Direction::new(2));
        let only_two = TriMeasure::from_densities(
            4,
            Chirality::Plus,
            [(EdgeRef::between(a, b).unwrap(), 1), (EdgeRef::between(b, c).unwrap(), 1)],
        )
        .unwrap();
        assert!(!is_evil_turn(&only_two, a, b, c).unwrap());
        let with_cw = only_two
            .add(&TriMeasure::from_densities(4, Chirality::Plus, [(EdgeRef::from_directed(b, Direction::new(-2)), 1)]).unwrap())
            .unwrap();
        assert!(is_evil_turn(&with_cw, a, b, c).unwrap());
    }

    #[test]
    fn w2_is_rigid() {
        assert!(is_rigid(&w2()));
        assert!(is_rigid(&TriMeasure::zero(2, Chirality::Plus)));
    }

    #[test]
    fn six_edges_block_rigidity() {
        assert_eq!(find_witness(&star_at(p(2, 1))), Some(Witness::SixEdges { point: p(2, 1) }));
    }

    #[test]
    fn the_two_measures_of_246_are_not_rigid() {
        let s = SetTriple::new(6, vec![2, 4, 6], vec![2, 4, 6], vec![2, 4, 6]).unwrap();
        let ms = enumerate_measures(&BoundaryData::from_sets(&s, Chirality::Plus));
        assert_eq!(ms.len(), 2);
        for m in &ms {
            match find_witness(m) {
                Some(Witness::EvilLoop { points }) => assert!(loop_is_evil(m, &points)),
                Some(Witness::SixEdges { .. }) => {}
                None => panic!("{m} reported rigid"),
            }
        }
    }

    #[test]
    fn single_edge_turns_are_not_loops() {
        let m = TriMeasure::from_densities(2, Chirality::Plus, [(edge((1, 0), (2, 1)), 1)]).unwrap();
        assert!(find_witness(&m).is_none());
    }
}
