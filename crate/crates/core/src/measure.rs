//! Balanced integer measures on `Δ_r` and the two ways of writing down their
//! boundary: cumulative stub masses `(ω, α, β, γ)` and set triples `(n, I, J, K)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{internal, invalid};
use crate::trilattice::{
    incident_edges, stub_edge, triangle_points, Chirality, EdgeRef, LatticePoint, Side,
};
use crate::Result;

/// A nonnegative integer density on the small edges of `Δ_r` and the stubs
/// of one chirality. Only positive entries are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriMeasure {
    r: u32,
    chirality: Chirality,
    densities: BTreeMap<EdgeRef, u64>,
}

/// Points where the balance condition fails.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BalanceReport {
    pub violations: Vec<LatticePoint>,
}

impl BalanceReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl TriMeasure {
    pub fn zero(r: u32, chirality: Chirality) -> Self {
        Self { r, chirality, densities: BTreeMap::new() }
    }

    /// Builds a measure from `(edge, density)` pairs, rejecting edges outside
    /// the domain. Repeated edges accumulate.
    pub fn from_densities<I>(r: u32, chirality: Chirality, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (EdgeRef, u64)>,
    {
        let mut m = Self::zero(r, chirality);
        for (e, d) in entries {
            if !e.in_domain(r, chirality) {
                return Err(invalid(format!("edge {e} is outside the domain of this measure")));
            }
            if d > 0 {
                let slot = m.densities.entry(e).or_insert(0);
                *slot = slot.checked_add(d).ok_or_else(|| invalid("density overflow"))?;
            }
        }
        Ok(m)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    pub fn density(&self, e: EdgeRef) -> u64 {
        self.densities.get(&e).copied().unwrap_or(0)
    }

    pub fn in_support(&self, e: EdgeRef) -> bool {
        self.densities.contains_key(&e)
    }

    /// Positive entries in canonical edge order.
    pub fn entries(&self) -> impl Iterator<Item = (EdgeRef, u64)> + '_ {
        self.densities.iter().map(|(e, d)| (*e, *d))
    }

    pub fn support(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.densities.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.densities.len()
    }

    pub fn is_zero(&self) -> bool {
        self.densities.is_empty()
    }

    pub fn stub_mass(&self, side: Side, j: u32) -> u64 {
        stub_edge(side, j, self.r, self.chirality).map(|e| self.density(e)).unwrap_or(0)
    }

    /// Lattice points of `Δ_r` where the balance condition fails.
    pub fn validate(&self) -> BalanceReport {
        let violations = triangle_points(self.r)
            .into_iter()
            .filter(|&p| !self.balanced_at(p))
            .collect();
        BalanceReport { violations }
    }

    fn balanced_at(&self, p: LatticePoint) -> bool {
        let m = incident_edges(p).map(|(_, e)| self.density(e) as i128);
        let d0 = m[0] - m[3];
        d0 == m[4] - m[1] && d0 == m[2] - m[5]
    }

    /// The common stub sum of the three sides.
    pub fn weight(&self) -> Result<u64> {
        let sums = Side::ALL.map(|s| (0..=self.r).map(|j| self.stub_mass(s, j)).sum::<u64>());
        if sums[0] != sums[1] || sums[0] != sums[2] {
            return Err(internal(format!("side stub sums disagree: {sums:?}")));
        }
        Ok(sums[0])
    }

    pub fn boundary(&self) -> Result<BoundaryData> {
        let omega = self.weight()?;
        let r = self.r;
        let side_vec = |side: Side| -> Vec<u64> {
            (1..=r)
                .map(|l| match self.chirality {
                    Chirality::Plus => (0..l).map(|j| self.stub_mass(side, j)).sum(),
                    Chirality::Star => (r + 1 - l..=r).map(|j| self.stub_mass(side, j)).sum(),
                })
                .collect()
        };
        Ok(BoundaryData {
            r,
            chirality: self.chirality,
            omega,
            alpha: side_vec(Side::A),
            beta: side_vec(Side::B),
            gamma: side_vec(Side::C),
        })
    }

    pub fn sets(&self) -> Result<SetTriple> {
        Ok(self.boundary()?.to_sets())
    }

    /// Number of boundary chamber facets the measure avoids.
    pub fn attachment_count(&self) -> Result<u32> {
        Ok(self.boundary()?.attachment_count())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.r != other.r || self.chirality != other.chirality {
            return Err(invalid(format!(
                "measures of size {} ({:?}) and {} ({:?}) cannot be combined",
                self.r, self.chirality, other.r, other.chirality
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Self::from_densities(self.r, self.chirality, self.entries().chain(other.entries()))
    }

    pub fn scale(&self, c: u64) -> Result<Self> {
        let mut out = Self::zero(self.r, self.chirality);
        for (e, d) in self.entries() {
            let v = d.checked_mul(c).ok_or_else(|| invalid("density overflow"))?;
            if v > 0 {
                out.densities.insert(e, v);
            }
        }
        Ok(out)
    }

    /// Pointwise difference; fails unless `self >= other` everywhere.
    pub fn subtract(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, d) in other.entries() {
            let have = out.density(e);
            if have < d {
                return Err(invalid(format!("negative density on {e}: {have} - {d}")));
            }
            if have == d {
                out.densities.remove(&e);
            } else {
                out.densities.insert(e, have - d);
            }
        }
        Ok(out)
    }

    /// `self >= other` pointwise.
    pub fn dominates(&self, other: &Self) -> bool {
        other.entries().all(|(e, d)| self.density(e) >= d)
    }

    /// Image under the reflection swapping the B and C sides; flips chirality.
    pub fn mirror(&self) -> Self {
        let densities = self.entries().map(|(e, d)| (e.mirror(self.r), d)).collect();
        Self { r: self.r, chirality: self.chirality.flip(), densities }
    }

    pub fn to_file(&self) -> MeasureFile {
        MeasureFile {
            r: self.r,
            chirality: self.chirality,
            edges: self
                .entries()
                .map(|(e, d)| EdgeEntry { x: e.base.x, y: e.base.y, axis: e.axis, density: d })
                .collect(),
        }
    }

    pub fn from_file(f: &MeasureFile) -> Result<Self> {
        let mut entries = Vec::with_capacity(f.edges.len());
        for e in &f.edges {
            if e.axis > 2 {
                return Err(invalid(format!("axis {} is not canonical", e.axis)));
            }
            entries.push((EdgeRef { base: LatticePoint::new(e.x, e.y), axis: e.axis }, e.density));
        }
        Self::from_densities(f.r, f.chirality, entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("measure serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: MeasureFile =
            serde_json::from_str(s).map_err(|e| invalid(format!("measure JSON: {e}")))?;
        Self::from_file(&f)
    }
}

impl fmt::Display for TriMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={} {:?} {{", self.r, self.chirality)?;
        for (i, (e, d)) in self.entries().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}:{d}")?;
        }
        f.write_str("}")
    }
}

/// Serialized form of a [`TriMeasure`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureFile {
    pub r: u32,
    pub chirality: Chirality,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub x: i32,
    pub y: i32,
    pub axis: u8,
    pub density: u64,
}

/// Weight and cumulative stub masses of a measure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryData {
    pub r: u32,
    pub chirality: Chirality,
    pub omega: u64,
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
    pub gamma: Vec<u64>,
}

impl BoundaryData {
    pub fn new(
        r: u32,
        chirality: Chirality,
        omega: u64,
        alpha: Vec<u64>,
        beta: Vec<u64>,
        gamma: Vec<u64>,
    ) -> Result<Self> {
        let b = Self { r, chirality, omega, alpha, beta, gamma };
        b.check()?;
        Ok(b)
    }

    fn check(&self) -> Result<()> {
        for (name, v) in [("alpha", &self.alpha), ("beta", &self.beta), ("gamma", &self.gamma)] {
            if v.len() != self.r as usize {
                return Err(invalid(format!("{name} has length {}, expected {}", v.len(), self.r)));
            }
            if v.windows(2).any(|w| w[0] > w[1]) {
                return Err(invalid(format!("{name} is not nondecreasing")));
            }
            if v.last().is_some_and(|&x| x > self.omega) {
                return Err(invalid(format!("{name} exceeds the weight {}", self.omega)));
            }
        }
        Ok(())
    }

    pub fn side(&self, side: Side) -> &[u64] {
        match side {
            Side::A => &self.alpha,
            Side::B => &self.beta,
            Side::C => &self.gamma,
        }
    }

    /// Stub masses `j = 0..=r` on one side implied by the cumulative sums.
    pub fn stub_masses(&self, side: Side) -> Vec<u64> {
        let v = self.side(side);
        let r = self.r as usize;
        let ext = |l: usize| -> u64 {
            if l == 0 {
                0
            } else if l <= r {
                v[l - 1]
            } else {
                self.omega
            }
        };
        (0..=r)
            .map(|j| match self.chirality {
                Chirality::Plus => ext(j + 1) - ext(j),
                Chirality::Star => ext(r + 1 - j) - ext(r - j),
            })
            .collect()
    }

    pub fn to_sets(&self) -> SetTriple {
        let n = self.r + self.omega as u32;
        let conv = |v: &[u64]| v.iter().enumerate().map(|(l, &a)| a as u32 + l as u32 + 1).collect();
        SetTriple { n, i: conv(&self.alpha), j: conv(&self.beta), k: conv(&self.gamma) }
    }

    pub fn from_sets(s: &SetTriple, chirality: Chirality) -> Self {
        let conv = |v: &[u32]| v.iter().enumerate().map(|(l, &x)| (x - l as u32 - 1) as u64).collect();
        Self {
            r: s.r(),
            chirality,
            omega: (s.n - s.r()) as u64,
            alpha: conv(&s.i),
            beta: conv(&s.j),
            gamma: conv(&s.k),
        }
    }

    /// Count of facet equalities `v_ℓ = v_{ℓ+1}` and `v_r = ω` that fail,
    /// summed over the three sides.
    pub fn attachment_count(&self) -> u32 {
        Side::ALL
            .iter()
            .map(|&s| {
                let v = self.side(s);
                let steps = v.windows(2).filter(|w| w[0] != w[1]).count() as u32;
                let last = v.last().copied().unwrap_or(0);
                steps + u32::from(last != self.omega)
            })
            .sum()
    }
}

/// The problem `(n, I, J, K)` with `I, J, K` strictly increasing subsets of
/// `{1..n}` of a common size `r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SetTriple {
    pub n: u32,
    #[serde(rename = "I")]
    pub i: Vec<u32>,
    #[serde(rename = "J")]
    pub j: Vec<u32>,
    #[serde(rename = "K")]
    pub k: Vec<u32>,
}

impl SetTriple {
    pub fn new(n: u32, i: Vec<u32>, j: Vec<u32>, k: Vec<u32>) -> Result<Self> {
        let s = Self { n, i, j, k };
        s.check()?;
        Ok(s)
    }

    pub fn check(&self) -> Result<()> {
        let r = self.i.len();
        if self.j.len() != r || self.k.len() != r {
            return Err(invalid("I, J, K must have equal sizes"));
        }
        for (name, v) in [("I", &self.i), ("J", &self.j), ("K", &self.k)] {
            if v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid(format!("{name} is not strictly increasing")));
            }
            if v.first().is_some_and(|&x| x < 1) || v.last().is_some_and(|&x| x > self.n) {
                return Err(invalid(format!("{name} is not a subset of 1..={}", self.n)));
            }
        }
        Ok(())
    }

    pub fn r(&self) -> u32 {
        self.i.len() as u32
    }

    pub fn side(&self, side: Side) -> &[u32] {
        match side {
            Side::A => &self.i,
            Side::B => &self.j,
            Side::C => &self.k,
        }
    }

    pub fn sides(&self) -> [&[u32]; 3] {
        [&self.i, &self.j, &self.k]
    }

    /// `Σ (I(ℓ)−ℓ) + (J(ℓ)−ℓ) + (K(ℓ)−ℓ) = 2r(n−r)`.
    pub fn trace_identity(&self) -> bool {
        let r = self.r() as i64;
        let lhs: i64 = self
            .sides()
            .iter()
            .flat_map(|v| v.iter().enumerate().map(|(l, &x)| x as i64 - l as i64 - 1))
            .sum();
        lhs == 2 * r * (self.n as i64 - r)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: SetTriple =
            serde_json::from_str(s).map_err(|e| invalid(format!("problem JSON: {e}")))?;
        t.check()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("set triple serializes")
    }
}

impl fmt::Display for SetTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "n={} I={{{}}} J={{{}}} K={{{}}}", self.n, show(&self.i), show(&self.j), show(&self.k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::testutil::{edge, w1, w2};

    fn pt(x: i32, y: i32) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn stub(side: Side, j: u32) -> EdgeRef {
        stub_edge(side, j, 2, Chirality::Plus).unwrap()
    }

    #[test]
    fn hand_measures_balance() {
        assert!(w1().validate().is_ok());
        assert!(w2().validate().is_ok());
        assert!(TriMeasure::zero(3, Chirality::Plus).validate().is_ok());
    }

    #[test]
    fn y_vertex_balances_and_bare_turn_does_not() {
        // Tripod at (1,0) inside Δ_2 reaching the three sides.
        let p = pt(1, 0);
        let y = TriMeasure::from_densities(
            2,
            Chirality::Plus,
            [
                (edge((1, 0), (2, 0)), 1),
                (stub(Side::B, 0), 1),
                (edge((1, 0), (0, -1)), 1),
                (edge((1, 0), (1, 1)), 1),
                (stub(Side::C, 1), 1),
            ],
        )
        .unwrap();
        assert!(y.validate().is_ok(), "{:?}", y.validate());
        let turn = TriMeasure::from_densities(
            2,
            Chirality::Plus,
            [(edge((1, 0), (2, 0)), 1), (edge((1, 0), (1, 1)), 1)],
        )
        .unwrap();
        assert!(turn.validate().violations.contains(&p));
    }

    #[test]
    fn boundaries_of_hand_measures() {
        let b1 = w1().boundary().unwrap();
        assert_eq!((b1.omega, &b1.alpha, &b1.beta, &b1.gamma), (1, &vec![0, 0], &vec![1, 1], &vec![1, 1]));
        let b2 = w2().boundary().unwrap();
        assert_eq!((b2.omega, &b2.alpha, &b2.beta, &b2.gamma), (1, &vec![0, 1], &vec![0, 1], &vec![1, 1]));
        let z = TriMeasure::zero(3, Chirality::Plus).boundary().unwrap();
        assert_eq!((z.omega, z.alpha), (0, vec![0, 0, 0]));
    }

    #[test]
    fn set_conversions() {
        let b = BoundaryData::new(2, Chirality::Plus, 1, vec![0, 1], vec![0, 1], vec![1, 1]).unwrap();
        let s = b.to_sets();
        assert_eq!(s, SetTriple::new(3, vec![1, 3], vec![1, 3], vec![2, 3]).unwrap());
        assert_eq!(BoundaryData::from_sets(&s, Chirality::Plus), b);
        let s = SetTriple::new(6, vec![2, 4, 6], vec![2, 4, 6], vec![2, 4, 6]).unwrap();
        let b = BoundaryData::from_sets(&s, Chirality::Plus);
        assert_eq!((b.r, b.omega, b.alpha.clone()), (3, 3, vec![1, 2, 3]));
        let b0 = BoundaryData::new(3, Chirality::Plus, 0, vec![0; 3], vec![0; 3], vec![0; 3]).unwrap();
        assert_eq!(b0.to_sets().i, vec![1, 2, 3]);
        assert!(BoundaryData::new(2, Chirality::Plus, 1, vec![1, 0], vec![0, 1], vec![0, 1]).is_err());
        assert!(SetTriple::new(3, vec![2, 1], vec![1, 2], vec![1, 2]).is_err());
    }

    #[test]
    fn stub_masses_invert_boundary() {
        for ch in [Chirality::Plus, Chirality::Star] {
            let b = BoundaryData::new(3, ch, 4, vec![0, 2, 2], vec![1, 1, 4], vec![3, 3, 3]).unwrap();
            let m = TriMeasure::from_densities(
                3,
                ch,
                Side::ALL.iter().flat_map(|&s| {
                    b.stub_masses(s)
                        .into_iter()
                        .enumerate()
                        .map(move |(j, d)| (stub_edge(s, j as u32, 3, ch).unwrap(), d))
                }),
            )
            .unwrap();
            assert_eq!(m.boundary().unwrap(), b);
        }
    }

    #[test]
    fn attachment_counts() {
        assert_eq!(w1().attachment_count().unwrap(), 1);
        assert_eq!(w2().attachment_count().unwrap(), 2);
        assert_eq!(TriMeasure::zero(2, Chirality::Plus).attachment_count().unwrap(), 0);
    }

    #[test]
    fn arithmetic() {
        let s = w1().add(&w2()).unwrap();
        assert!(s.validate().is_ok());
        let b = s.boundary().unwrap();
        assert_eq!((b.omega, b.alpha, b.beta, b.gamma), (2, vec![0, 1], vec![1, 2], vec![2, 2]));
        let t = w1().scale(3).unwrap();
        assert_eq!(t.weight().unwrap(), 3);
        assert!(t.entries().all(|(_, d)| d == 3));
        assert_eq!(s.subtract(&w2()).unwrap(), w1());
        assert!(w1().subtract(&w2()).is_err());
        assert!(w1().add(&TriMeasure::zero(3, Chirality::Plus)).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let m = w2();
        assert_eq!(TriMeasure::from_json(&m.to_json()).unwrap(), m);
        let bad = r#"{"r":2,"chirality":"plus","edges":[{"x":5,"y":5,"axis":0,"density":1}]}"#;
        assert!(TriMeasure::from_json(bad).is_err());
        let s = SetTriple::from_json(r#"{"n":3,"I":[1,3],"J":[1,3],"K":[2,3]}"#).unwrap();
        assert_eq!(s.r(), 2);
    }

    #[test]
    fn mirror_swaps_chirality_and_b_c() {
        let m = w2();
        let mm = m.mirror();
        assert_eq!(mm.chirality(), Chirality::Star);
        assert!(mm.validate().is_ok());
        let b = m.boundary().unwrap();
        let bm = mm.boundary().unwrap();
        assert_eq!(bm.alpha, b.alpha);
        assert_eq!(bm.beta, b.gamma);
        assert_eq!(bm.gamma, b.beta);
        assert_eq!(mm.mirror(), m);
    }
}
