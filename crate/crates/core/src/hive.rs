//! Exhaustive enumeration of integer measures with prescribed boundary,
//! Littlewood-Richardson coefficients, the recursive Horn test, and the
//! honeycomb attached to a measure.

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;

use crate::error::{internal, invalid};
use crate::measure::{BoundaryData, SetTriple, TriMeasure};
use crate::trilattice::{
    incident_edges, stub_edge, triangle_points, Chirality, EdgeKind, EdgeRef, LatticePoint, Side,
};
use crate::Result;

#[derive(Clone, Copy, Debug)]
enum Slot {
    Zero,
    Fixed(u64),
    Var(usize),
}

/// Upper limit on individual densities during the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityBound {
    /// Densities at most the weight.
    Weight,
    /// Densities at most `k` times the weight.
    Multiple(u64),
    /// Only the nonnegativity constraints.
    Unbounded,
}

struct Search<'a> {
    slots: &'a [[Slot; 6]],
    flux: &'a [Vec<(Slot, i64, i64)>],
    bound: Option<i64>,
    vars: &'a mut Vec<u64>,
}

impl Search<'_> {
    fn value(&self, s: Slot) -> i64 {
        match s {
            Slot::Zero => 0,
            Slot::Fixed(v) => v as i64,
            Slot::Var(i) => self.vars[i] as i64,
        }
    }

    fn run(&mut self, at: usize, visit: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        // Zero tension across the boundary of the unvisited region.
        let (mut fx, mut fy) = (0i64, 0i64);
        for &(slot, dx, dy) in &self.flux[at] {
            let v = self.value(slot);
            fx += v * dx;
            fy += v * dy;
        }
        if fx != 0 || fy != 0 {
            return true;
        }
        if at == self.slots.len() {
            return visit(self.vars);
        }
        let s = self.slots[at];
        let (m3, m4, m5) = (self.value(s[3]), self.value(s[4]), self.value(s[5]));
        // Forward densities as functions of the common difference D.
        let forward = |d: i64| [m3 + d, m4 - d, m5 + d];
        let mut forced: Option<i64> = None;
        for k in 0..3 {
            let v = match s[k] {
                Slot::Zero => 0,
                Slot::Fixed(v) => v as i64,
                Slot::Var(_) => continue,
            };
            let d = match k {
                0 => v - m3,
                1 => m4 - v,
                _ => v - m5,
            };
            match forced {
                Some(f) if f != d => return true,
                _ => forced = Some(d),
            }
        }
        let (lo, hi) = match forced {
            Some(d) => (d, d),
            None => {
                let mut lo = (-m3).max(-m5);
                let mut hi = m4;
                if let Some(b) = self.bound {
                    lo = lo.max(m4 - b);
                    hi = hi.min(b - m3).min(b - m5);
                }
                (lo, hi)
            }
        };
        for d in lo..=hi {
            let f = forward(d);
            if f.iter().any(|&x| x < 0) || self.bound.is_some_and(|b| f.iter().any(|&x| x > b)) {
                continue;
            }
            for k in 0..3 {
                if let Slot::Var(i) = s[k] {
                    self.vars[i] = f[k] as u64;
                }
            }
            if !self.run(at + 1, visit) {
                return false;
            }
        }
        true
    }
}

/// Precomputed layout for enumerating measures with one boundary.
struct Layout {
    vars: Vec<EdgeRef>,
    fixed: Vec<(EdgeRef, u64)>,
    slots: Vec<[Slot; 6]>,
    /// For each raster position `t`, the edges leaving the points `t..`,
    /// with their outward step.
    flux: Vec<Vec<(Slot, i64, i64)>>,
}

impl Layout {
    fn new(b: &BoundaryData) -> Self {
        let r = b.r;
        let mut fixed_map: HashMap<EdgeRef, u64> = HashMap::new();
        for side in Side::ALL {
            for (j, mass) in b.stub_masses(side).into_iter().enumerate() {
                let e = stub_edge(side, j as u32, r, b.chirality).expect("index in range");
                fixed_map.insert(e, mass);
            }
        }
        let mut var_index: HashMap<EdgeRef, usize> = HashMap::new();
        let mut vars = Vec::new();
        let mut slots = Vec::new();
        for p in triangle_points(r) {
            let mut row = [Slot::Zero; 6];
            for (d, e) in incident_edges(p) {
                let k = d.index();
                row[k] = match e.classify(r) {
                    EdgeKind::Interior => {
                        let next = vars.len();
                        let idx = *var_index.entry(e).or_insert_with(|| {
                            vars.push(e);
                            next
                        });
                        Slot::Var(idx)
                    }
                    EdgeKind::Stub { chirality, .. } if chirality == b.chirality => {
                        Slot::Fixed(fixed_map[&e])
                    }
                    _ => Slot::Zero,
                };
            }
            slots.push(row);
        }
        let points = triangle_points(r);
        let order: HashMap<LatticePoint, usize> =
            points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let flux = (0..=points.len())
            .map(|t| {
                let mut out = Vec::new();
                for (i, p) in points.iter().enumerate().skip(t) {
                    for (d, _) in incident_edges(*p) {
                        let q = p.step(d);
                        let outside = order.get(&q).is_none_or(|&k| k < t);
                        let slot = slots[i][d.index()];
                        if outside && !matches!(slot, Slot::Zero) {
                            let (dx, dy) = d.offset();
                            out.push((slot, dx as i64, dy as i64));
                        }
                    }
                }
                out
            })
            .collect();
        let mut fixed: Vec<(EdgeRef, u64)> = fixed_map.into_iter().filter(|&(_, v)| v > 0).collect();
        fixed.sort();
        Self { vars, fixed, slots, flux }
    }

    fn measure(&self, b: &BoundaryData, vals: &[u64]) -> TriMeasure {
        let entries = self.fixed.iter().copied().chain(self.vars.iter().copied().zip(vals.iter().copied()));
        TriMeasure::from_densities(b.r, b.chirality, entries).expect("layout edges lie in the domain")
    }

    fn visit(&self, b: &BoundaryData, bound: DensityBound, visit: &mut dyn FnMut(&[u64]) -> bool) {
        let w = b.omega as i64;
        let bound = match bound {
            DensityBound::Weight => Some(w),
            DensityBound::Multiple(k) => Some(w * k as i64),
            DensityBound::Unbounded => None,
        };
        let mut vals = vec![0u64; self.vars.len()];
        let mut s = Search { slots: &self.slots, flux: &self.flux, bound, vars: &mut vals };
        s.run(0, visit);
    }
}

fn well_formed(b: &BoundaryData) -> bool {
    BoundaryData::new(b.r, b.chirality, b.omega, b.alpha.clone(), b.beta.clone(), b.gamma.clone())
        .is_ok()
}

/// All integer measures with boundary `b`, in lexicographic order of their
/// canonical edge lists.
pub fn enumerate_measures(b: &BoundaryData) -> Vec<TriMeasure> {
    enumerate_measures_with(b, DensityBound::Weight)
}

pub fn enumerate_measures_with(b: &BoundaryData, bound: DensityBound) -> Vec<TriMeasure> {
    if !well_formed(b) {
        return Vec::new();
    }
    let layout = Layout::new(b);
    let mut out = Vec::new();
    layout.visit(b, bound, &mut |vals| {
        out.push(layout.measure(b, vals));
        true
    });
    out.sort_by(|x, y| x.entries().cmp(y.entries()));
    out
}

/// Number of integer measures with boundary `b`.
pub fn count_measures(b: &BoundaryData, bound: DensityBound) -> u64 {
    if !well_formed(b) {
        return 0;
    }
    let layout = Layout::new(b);
    let mut count = 0u64;
    layout.visit(b, bound, &mut |_| {
        count += 1;
        true
    });
    count
}

/// Stops after `limit` measures; cheap test for "exactly one".
pub fn count_measures_up_to(b: &BoundaryData, limit: u64) -> u64 {
    if !well_formed(b) {
        return 0;
    }
    let layout = Layout::new(b);
    let mut count = 0u64;
    layout.visit(b, DensityBound::Weight, &mut |_| {
        count += 1;
        count < limit
    });
    count
}

/// The unique measure with boundary `b`, or an internal error naming the count.
pub fn unique_measure(b: &BoundaryData) -> Result<TriMeasure> {
    let mut found = enumerate_measures(b);
    if found.len() != 1 {
        return Err(internal(format!(
            "expected exactly one measure with boundary {:?}, found {}",
            b,
            found.len()
        )));
    }
    Ok(found.pop().expect("length checked"))
}

pub fn lr_coeff(s: &SetTriple) -> u64 {
    if !s.trace_identity() {
        return 0;
    }
    count_measures(&BoundaryData::from_sets(s, Chirality::Plus), DensityBound::Weight)
}

/// Every strictly increasing `r`-subset of `1..=n`, in lexicographic order.
pub fn subsets(n: u32, r: u32) -> Vec<Vec<u32>> {
    fn go(start: u32, n: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for x in start..=n + 1 - left {
            cur.push(x);
            go(x + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= n {
        go(1, n, r, &mut Vec::with_capacity(r as usize), &mut out);
    }
    out
}

/// Memoized recursive Horn test for `c_IJK > 0`.
#[derive(Default)]
pub struct HornOracle {
    memo: HashMap<SetTriple, bool>,
}

impl HornOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn positive(&mut self, s: &SetTriple) -> bool {
        if let Some(&v) = self.memo.get(s) {
            return v;
        }
        let v = self.compute(s);
        self.memo.insert(s.clone(), v);
        v
    }

    fn compute(&mut self, s: &SetTriple) -> bool {
        if !s.trace_identity() {
            return false;
        }
        let (n, r) = (s.n as i64, s.r());
        for sz in 1..r {
            let subs = subsets(r, sz);
            for a in &subs {
                for b in &subs {
                    for c in &subs {
                        let inner = SetTriple { n: r, i: a.clone(), j: b.clone(), k: c.clone() };
                        if !self.positive(&inner) {
                            continue;
                        }
                        let lhs: i64 = (0..sz as usize)
                            .map(|l| {
                                let l1 = l as i64 + 1;
                                (s.i[a[l] as usize - 1] as i64 - l1)
                                    + (s.j[b[l] as usize - 1] as i64 - l1)
                                    + (s.k[c[l] as usize - 1] as i64 - l1)
                            })
                            .sum();
                        let szi = sz as i64;
                        if lhs < 2 * szi * (n - szi) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

pub fn horn_positive(s: &SetTriple) -> bool {
    HornOracle::new().positive(s)
}

pub type Rational = Ratio<i64>;

/// Rational values on the small edges of `Δ_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Honeycomb {
    pub r: u32,
    pub values: BTreeMap<EdgeRef, Rational>,
}

fn e(x: i32, y: i32, axis: u8) -> EdgeRef {
    EdgeRef { base: LatticePoint::new(x, y), axis }
}

impl Honeycomb {
    pub fn get(&self, edge: EdgeRef) -> Rational {
        self.values[&edge]
    }

    /// Small triangles of `Δ_r`, each as three vertices.
    fn triangles(&self) -> Vec<[LatticePoint; 3]> {
        let r = self.r;
        let mut out = Vec::new();
        for p in triangle_points(r) {
            let (x, y) = (p.x, p.y);
            for tri in [
                [p, LatticePoint::new(x + 1, y), LatticePoint::new(x + 1, y + 1)],
                [p, LatticePoint::new(x + 1, y + 1), LatticePoint::new(x, y + 1)],
            ] {
                if tri.iter().all(|q| q.in_triangle(r)) {
                    out.push(tri);
                }
            }
        }
        out
    }

    /// Rhombi `(A, B, C, D)` in the three orientations, all vertices in `Δ_r`.
    fn rhombi(&self) -> Vec<[LatticePoint; 4]> {
        let r = self.r;
        let mut out = Vec::new();
        for a in triangle_points(r) {
            let (x, y) = (a.x, a.y);
            let p = LatticePoint::new;
            for q in [
                [a, p(x + 1, y), p(x, y - 1), p(x - 1, y - 1)],
                [a, p(x, y + 1), p(x + 1, y + 1), p(x + 1, y)],
                [a, p(x - 1, y - 1), p(x - 1, y), p(x, y + 1)],
            ] {
                if q.iter().all(|v| v.in_triangle(r)) {
                    out.push(q);
                }
            }
        }
        out
    }

    fn h(&self, a: LatticePoint, b: LatticePoint) -> Rational {
        self.get(EdgeRef::between(a, b).expect("adjacent vertices"))
    }

    /// Triangle sums vanish, and in every rhombus `ABCD` split along `AC` the
    /// differences `h(AB)-h(CD)` and `h(AD)-h(BC)` agree and are nonnegative.
    /// The second difference is forced by the triangle sums on `ABC` and `ACD`.
    pub fn check_axioms(&self) -> Result<()> {
        for [a, b, c] in self.triangles() {
            let s = self.h(a, b) + self.h(a, c) + self.h(b, c);
            if s != Rational::from_integer(0) {
                return Err(internal(format!("triangle {a}{b}{c} sums to {s}")));
            }
        }
        for [a, b, c, d] in self.rhombi() {
            let lhs = self.h(a, b) - self.h(c, d);
            let rhs = self.h(a, d) - self.h(b, c);
            if lhs != rhs || lhs < Rational::from_integer(0) {
                return Err(internal(format!("rhombus at {a}: {lhs} vs {rhs}")));
            }
        }
        Ok(())
    }

    /// The boundary values and diagonal densities match `m`.
    pub fn check_against(&self, m: &TriMeasure) -> Result<()> {
        let b = m.boundary()?;
        let third = Rational::new(2 * b.omega as i64, 3);
        let r = self.r;
        for side in Side::ALL {
            for l in 1..=r {
                let want = Rational::from_integer(b.side(side)[l as usize - 1] as i64) - third;
                let got = self.h(side.point(l - 1, r), side.point(l, r));
                if got != want {
                    return Err(internal(format!("side {side} value {l}: {got} != {want}")));
                }
            }
        }
        for [a, b, c, d] in self.rhombi() {
            let diag = m.density(EdgeRef::between(a, c).expect("adjacent")) as i64;
            if self.h(a, b) - self.h(c, d) != Rational::from_integer(diag) {
                return Err(internal(format!("rhombus at {a} does not reproduce density {diag}")));
            }
        }
        Ok(())
    }
}

/// The honeycomb of a `Plus` measure, propagated inward from the three sides
/// and checked against the axioms.
pub fn honeycomb_from_measure(m: &TriMeasure) -> Result<Honeycomb> {
    if m.chirality() != Chirality::Plus {
        return Err(invalid("honeycombs are defined for Plus measures"));
    }
    let b = m.boundary()?;
    let r = b.r as i32;
    let third = Rational::new(2 * b.omega as i64, 3);
    let dens = |edge: EdgeRef| Rational::from_integer(m.density(edge) as i64);
    let mut values = BTreeMap::new();
    // Axis 0 edges climb from side A.
    for y in 0..r {
        for x in y..r {
            let v = if y == 0 {
                Rational::from_integer(b.alpha[x as usize] as i64) - third
            } else {
                values[&e(x - 1, y - 1, 0)] + dens(e(x, y - 1, 2))
            };
            values.insert(e(x, y, 0), v);
        }
    }
    // Axis 2 edges move left from side B.
    for x in (1..=r).rev() {
        for y in 0..x {
            let v = if x == r {
                Rational::from_integer(b.beta[y as usize] as i64) - third
            } else {
                values[&e(x + 1, y, 2)] + dens(e(x, y, 1))
            };
            values.insert(e(x, y, 2), v);
        }
    }
    // Axis 1 edges descend from side C.
    for a in 0..r {
        for bb in (0..=a).rev() {
            let v = if a == bb {
                Rational::from_integer(b.gamma[(r - a - 1) as usize] as i64) - third
            } else {
                values[&e(a, bb + 1, 1)] + dens(e(a, bb + 1, 0))
            };
            values.insert(e(a, bb, 1), v);
        }
    }
    let h = Honeycomb { r: b.r, values };
    h.check_axioms()?;
    h.check_against(m)?;
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::w2;

    fn st(n: u32, i: &[u32], j: &[u32], k: &[u32]) -> SetTriple {
        SetTriple::new(n, i.to_vec(), j.to_vec(), k.to_vec()).unwrap()
    }

    #[test]
    fn w2_is_the_only_measure_of_its_boundary() {
        let b = BoundaryData::from_sets(&st(3, &[1, 3], &[1, 3], &[2, 3]), Chirality::Plus);
        assert_eq!(enumerate_measures(&b), vec![w2()]);
    }

    #[test]
    fn lr_examples() {
        assert_eq!(lr_coeff(&st(6, &[2, 4, 6], &[2, 4, 6], &[2, 4, 6])), 2);
        assert_eq!(lr_coeff(&st(3, &[2], &[2], &[3])), 1);
        assert_eq!(lr_coeff(&st(2, &[1], &[1], &[1])), 0);
        let zero = BoundaryData::from_sets(&st(3, &[1, 2, 3], &[1, 2, 3], &[1, 2, 3]), Chirality::Plus);
        assert_eq!(enumerate_measures(&zero), vec![TriMeasure::zero(3, Chirality::Plus)]);
    }

    #[test]
    fn r_zero_is_a_tripod() {
        let s = st(2, &[], &[], &[]);
        assert_eq!(lr_coeff(&s), 1);
        let m = unique_measure(&BoundaryData::from_sets(&s, Chirality::Plus)).unwrap();
        assert_eq!(m.weight().unwrap(), 2);
    }

    #[test]
    fn horn_examples() {
        assert!(horn_positive(&st(3, &[2], &[2], &[3])));
        assert!(horn_positive(&st(1, &[1], &[1], &[1])));
        assert!(!horn_positive(&st(2, &[1], &[1], &[1])));
    }

    #[test]
    fn enumerated_measures_reproduce_boundary() {
        let b = BoundaryData::from_sets(&st(6, &[2, 4, 6], &[2, 4, 6], &[2, 4, 6]), Chirality::Plus);
        for m in enumerate_measures(&b) {
            assert!(m.validate().is_ok());
            assert_eq!(m.boundary().unwrap(), b);
        }
    }

    #[test]
    fn star_enumeration_matches_mirror() {
        let s = st(5, &[1, 3, 5], &[2, 4, 5], &[2, 3, 5]);
        let plus = enumerate_measures(&BoundaryData::from_sets(&s, Chirality::Plus));
        let swapped = SetTriple { n: s.n, i: s.i.clone(), j: s.k.clone(), k: s.j.clone() };
        let star = enumerate_measures(&BoundaryData::from_sets(&swapped, Chirality::Star));
        let mut mirrored: Vec<TriMeasure> = plus.iter().map(|m| m.mirror()).collect();
        mirrored.sort_by(|x, y| x.entries().cmp(y.entries()));
        assert_eq!(star, mirrored);
    }

    #[test]
    fn honeycomb_of_w2() {
        let h = honeycomb_from_measure(&w2()).unwrap();
        assert_eq!(h.get(e(0, 0, 0)), Rational::new(-2, 3));
        assert_eq!(h.get(e(1, 0, 0)), Rational::new(1, 3));
        let z = honeycomb_from_measure(&TriMeasure::zero(1, Chirality::Plus)).unwrap();
        assert!(z.values.values().all(|v| *v == Rational::from_integer(0)));
    }

    #[test]
    fn subsets_count() {
        assert_eq!(subsets(5, 2).len(), 10);
        assert_eq!(subsets(3, 0), vec![Vec::<u32>::new()]);
    }
}
