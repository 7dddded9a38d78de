//! Coordinates on the triangular lattice and the triangle `Δ_r`.
//!
//! A lattice point `(x, y)` stands for `x·u + y·v` where `u + v + w = 0`,
//! `u` points along the positive x-axis and `v` sits at 120°. The six unit
//! steps are indexed counterclockwise starting from `u`:
//!
//! ```text
//!   d0 = u = (1,0)    d1 = -w = (1,1)   d2 = v = (0,1)
//!   d3 = -u = (-1,0)  d4 = w = (-1,-1)  d5 = -v = (0,-1)
//! ```
//!
//! `Δ_r` is the closed triangle with corners `0`, `r·u` and `r·u + r·v`; a
//! point belongs to it iff `0 <= y <= x <= r`. Its sides are labelled
//! `A` (bottom, `A_j = (j, 0)`), `B` (right, `B_j = (r, j)`) and `C`
//! (diagonal, `C_j = (r-j, r-j)`).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point `x·u + y·v` of the triangular lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i32,
    pub y: i32,
}

impl LatticePoint {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn step(self, dir: Direction) -> Self {
        let (dx, dy) = dir.offset();
        Self::new(self.x + dx, self.y + dy)
    }

    pub fn in_triangle(self, r: u32) -> bool {
        let r = r as i32;
        0 <= self.y && self.y <= self.x && self.x <= r
    }

    /// Direction of the unit step from `self` to `other`, if they are neighbours.
    pub fn direction_to(self, other: LatticePoint) -> Option<Direction> {
        let d = (other.x - self.x, other.y - self.y);
        Direction::ALL.into_iter().find(|k| k.offset() == d)
    }

    /// The sides of `Δ_r` this point lies on, with its index along each side.
    pub fn sides(self, r: u32) -> Vec<(Side, u32)> {
        let mut out = Vec::with_capacity(2);
        if !self.in_triangle(r) {
            return out;
        }
        let ri = r as i32;
        if self.y == 0 {
            out.push((Side::A, self.x as u32));
        }
        if self.x == ri {
            out.push((Side::B, self.y as u32));
        }
        if self.x == self.y {
            out.push((Side::C, (ri - self.x) as u32));
        }
        out
    }

    /// Reflection of `Δ_r` across its bisector through `B_r = C_0`.
    ///
    /// Swaps the B and C sides, fixes the A side setwise (`A_j ↦ A_{r-j}`),
    /// and exchanges the two chiralities.
    pub fn mirror(self, r: u32) -> Self {
        Self::new(r as i32 - self.x + self.y, self.y)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// One of the six unit directions, `k` sitting at `60·k` degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction(u8);

impl Direction {
    pub const ALL: [Direction; 6] = [
        Direction(0),
        Direction(1),
        Direction(2),
        Direction(3),
        Direction(4),
        Direction(5),
    ];

    pub fn new(k: i32) -> Self {
        Direction(k.rem_euclid(6) as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn offset(self) -> (i32, i32) {
        match self.0 {
            0 => (1, 0),
            1 => (1, 1),
            2 => (0, 1),
            3 => (-1, 0),
            4 => (-1, -1),
            _ => (0, -1),
        }
    }

    /// Counterclockwise rotation by `steps · 60°`.
    pub fn rotate(self, steps: i32) -> Self {
        Direction::new(self.0 as i32 + steps)
    }

    pub fn opposite(self) -> Self {
        self.rotate(3)
    }

    /// Rotation by `steps · 60°` in the clockwise sense of `chirality`.
    ///
    /// For `Plus` measures this is the planar clockwise sense; in `Star`
    /// measures every clockwise word reads counterclockwise.
    pub fn clockwise(self, steps: i32, chirality: Chirality) -> Self {
        match chirality {
            Chirality::Plus => self.rotate(-steps),
            Chirality::Star => self.rotate(steps),
        }
    }

    /// Image under [`LatticePoint::mirror`].
    pub fn mirror(self) -> Self {
        Direction::new(3 - self.0 as i32)
    }
}

/// The three sides of `Δ_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
    C,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::A, Side::B, Side::C];

    /// The `j`-th boundary point on this side.
    pub fn point(self, j: u32, r: u32) -> LatticePoint {
        let (j, r) = (j as i32, r as i32);
        match self {
            Side::A => LatticePoint::new(j, 0),
            Side::B => LatticePoint::new(r, j),
            Side::C => LatticePoint::new(r - j, r - j),
        }
    }

    /// Outward stub direction of this side for the given chirality.
    pub fn stub_direction(self, chirality: Chirality) -> Direction {
        let k = match (self, chirality) {
            (Side::A, Chirality::Plus) => 4,
            (Side::A, Chirality::Star) => 5,
            (Side::B, Chirality::Plus) => 0,
            (Side::B, Chirality::Star) => 1,
            (Side::C, Chirality::Plus) => 2,
            (Side::C, Chirality::Star) => 3,
        };
        Direction(k)
    }

    pub fn index(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
            Side::C => 2,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Side::A => "A",
            Side::B => "B",
            Side::C => "C",
        };
        f.write_str(s)
    }
}

/// Measures in `M_r` (`Plus`) or in its mirror image `M_r*` (`Star`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    Plus,
    Star,
}

impl Chirality {
    pub fn flip(self) -> Self {
        match self {
            Chirality::Plus => Chirality::Star,
            Chirality::Star => Chirality::Plus,
        }
    }
}

/// An undirected small edge, stored as `base → base + d_axis` with `axis < 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub base: LatticePoint,
    pub axis: u8,
}

impl EdgeRef {
    /// Canonical form of the edge leaving `p` in direction `dir`.
    pub fn from_directed(p: LatticePoint, dir: Direction) -> Self {
        if dir.0 < 3 {
            EdgeRef { base: p, axis: dir.0 }
        } else {
            EdgeRef { base: p.step(dir), axis: dir.0 - 3 }
        }
    }

    pub fn between(p: LatticePoint, q: LatticePoint) -> Option<Self> {
        p.direction_to(q).map(|d| Self::from_directed(p, d))
    }

    pub fn endpoints(self) -> (LatticePoint, LatticePoint) {
        (self.base, self.base.step(Direction(self.axis)))
    }

    /// The endpoint other than `p`, if `p` is an endpoint.
    pub fn other_end(self, p: LatticePoint) -> Option<LatticePoint> {
        let (a, b) = self.endpoints();
        if p == a {
            Some(b)
        } else if p == b {
            Some(a)
        } else {
            None
        }
    }

    pub fn shared_point(self, other: EdgeRef) -> Option<LatticePoint> {
        if self == other {
            return None;
        }
        let (a, b) = self.endpoints();
        let (c, d) = other.endpoints();
        if a == c || a == d {
            Some(a)
        } else if b == c || b == d {
            Some(b)
        } else {
            None
        }
    }

    pub fn mirror(self, r: u32) -> Self {
        let (a, b) = self.endpoints();
        EdgeRef::between(a.mirror(r), b.mirror(r)).expect("mirror preserves adjacency")
    }

    /// How this edge sits relative to `Δ_r`.
    pub fn classify(self, r: u32) -> EdgeKind {
        let (a, b) = self.endpoints();
        match (a.in_triangle(r), b.in_triangle(r)) {
            (true, true) => EdgeKind::Interior,
            (false, false) => EdgeKind::Exterior,
            (inside_a, _) => {
                let (p, q) = if inside_a { (a, b) } else { (b, a) };
                let dir = p.direction_to(q).expect("edge endpoints are adjacent");
                for (side, j) in p.sides(r) {
                    for chirality in [Chirality::Plus, Chirality::Star] {
                        if side.stub_direction(chirality) == dir {
                            return EdgeKind::Stub { side, j, chirality };
                        }
                    }
                }
                unreachable!("every edge leaving Δ_r is a stub of one chirality")
            }
        }
    }

    /// Whether the edge may carry mass for a measure of size `r` and `chirality`.
    pub fn in_domain(self, r: u32, chirality: Chirality) -> bool {
        match self.classify(r) {
            EdgeKind::Interior => true,
            EdgeKind::Stub { chirality: c, .. } => c == chirality,
            EdgeKind::Exterior => false,
        }
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.endpoints();
        write!(f, "{a}-{b}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    /// Both endpoints in `Δ_r`.
    Interior,
    /// Exactly one endpoint on side `side` at index `j`, pointing outward.
    Stub { side: Side, j: u32, chirality: Chirality },
    /// Neither endpoint in `Δ_r`.
    Exterior,
}

/// The exterior stub at `side_j` for the given chirality.
///
/// `Plus` stubs are `A_jX_j`, `B_jY_j`, `C_jZ_j`; `Star` stubs are
/// `A_jX_{j+1}`, `B_jY_{j+1}`, `C_jZ_{j+1}`.
pub fn stub_edge(side: Side, j: u32, r: u32, chirality: Chirality) -> Result<EdgeRef> {
    if j > r {
        return Err(Error::InvalidInput(format!("stub index {j} exceeds r = {r}")));
    }
    let p = side.point(j, r);
    Ok(EdgeRef::from_directed(p, side.stub_direction(chirality)))
}

/// The six edges at `p`, indexed by direction.
pub fn incident_edges(p: LatticePoint) -> [(Direction, EdgeRef); 6] {
    Direction::ALL.map(|d| (d, EdgeRef::from_directed(p, d)))
}

/// Lattice points of `Δ_r` in raster order (increasing `y`, then `x`).
pub fn triangle_points(r: u32) -> Vec<LatticePoint> {
    let ri = r as i32;
    let mut pts = Vec::with_capacity(((r + 1) * (r + 2) / 2) as usize);
    for y in 0..=ri {
        for x in y..=ri {
            pts.push(LatticePoint::new(x, y));
        }
    }
    pts
}

/// All small edges with both endpoints in `Δ_r`, in canonical order.
pub fn interior_edges(r: u32) -> Vec<EdgeRef> {
    let mut out: Vec<EdgeRef> = triangle_points(r)
        .into_iter()
        .flat_map(|p| {
            (0..3u8)
                .map(move |axis| EdgeRef { base: p, axis })
                .filter(move |e| e.classify(r) == EdgeKind::Interior)
        })
        .collect();
    out.sort();
    out
}

/// Every edge a measure of this size and chirality may charge, in canonical order.
pub fn domain_edges(r: u32, chirality: Chirality) -> Vec<EdgeRef> {
    let mut out = interior_edges(r);
    for side in Side::ALL {
        for j in 0..=r {
            out.push(stub_edge(side, j, r, chirality).expect("index in range"));
        }
    }
    out.sort();
    out.dedup();
    out
}
