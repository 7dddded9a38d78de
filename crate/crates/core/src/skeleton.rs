//! Descendance between support edges, root edges, the path-count measures
//! `μ_e`, and the ordered decomposition of a rigid measure.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{internal, invalid};
use crate::measure::TriMeasure;
use crate::rigidity::is_rigid;
use crate::trilattice::{incident_edges, Chirality, Direction, EdgeRef, LatticePoint};
use crate::Result;

/// Work limit for simple-path enumeration in [`mu_of_root`].
pub const DEFAULT_PATH_CAP: u64 = 50_000_000;

fn density_at(m: &TriMeasure, p: LatticePoint, d: Direction) -> u64 {
    m.density(EdgeRef::from_directed(p, d))
}

/// The relation `e →_m f` for two edges meeting at a point `B`.
pub fn step_rel(m: &TriMeasure, e: EdgeRef, f: EdgeRef) -> Result<bool> {
    let b = e
        .shared_point(f)
        .ok_or_else(|| invalid(format!("edges {e} and {f} do not meet")))?;
    Ok(step_at(m, b, e, f))
}

fn step_at(m: &TriMeasure, b: LatticePoint, e: EdgeRef, f: EdgeRef) -> bool {
    let a = b.direction_to(e.other_end(b).expect("b on e")).expect("adjacent");
    let c = b.direction_to(f.other_end(b).expect("b on f")).expect("adjacent");
    if c == a.rotate(2) || c == a.rotate(-2) {
        density_at(m, b, a.opposite()) == 0
    } else if c == a.opposite() {
        density_at(m, b, c.rotate(1)) == 0 || density_at(m, b, c.rotate(-1)) == 0
    } else {
        false
    }
}

/// Support edges with the descendance arcs between them.
struct Descendance {
    edges: Vec<EdgeRef>,
    index: HashMap<EdgeRef, usize>,
    /// `arcs[i]` holds `(j, shared point)` for each `edges[i] → edges[j]`.
    arcs: Vec<Vec<(usize, LatticePoint)>>,
}

impl Descendance {
    fn new(m: &TriMeasure) -> Self {
        let edges: Vec<EdgeRef> = m.support().collect();
        let index: HashMap<EdgeRef, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let arcs = edges
            .iter()
            .map(|&e| {
                let (p, q) = e.endpoints();
                let mut out = Vec::new();
                for b in [p, q] {
                    for (_, f) in incident_edges(b) {
                        if f != e && m.in_support(f) && step_at(m, b, e, f) {
                            out.push((index[&f], b));
                        }
                    }
                }
                out
            })
            .collect();
        Self { edges, index, arcs }
    }

    /// Tarjan's strongly connected components; `comp[i]` is the class of edge `i`.
    fn classes(&self) -> (Vec<usize>, usize) {
        let n = self.edges.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut ncomp = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut k)) = call.last_mut() {
                if *k < self.arcs[v].len() {
                    let w = self.arcs[v][*k].0;
                    *k += 1;
                    if index[w] == usize::MAX {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(u, _)) = call.last() {
                        low[u] = low[u].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp[w] = ncomp;
                            if w == v {
                                break;
                            }
                        }
                        ncomp += 1;
                    }
                }
            }
        }
        (comp, ncomp)
    }
}

/// One representative per minimal descendance class, in canonical order.
pub fn roots(m: &TriMeasure) -> Result<Vec<EdgeRef>> {
    if m.is_zero() {
        return Err(invalid("the zero measure has no roots"));
    }
    if !is_rigid(m) {
        return Err(invalid("roots are defined here for rigid measures"));
    }
    Ok(minimal_classes(m))
}

fn minimal_classes(m: &TriMeasure) -> Vec<EdgeRef> {
    let g = Descendance::new(m);
    let (comp, ncomp) = g.classes();
    let mut has_parent = vec![false; ncomp];
    for (i, out) in g.arcs.iter().enumerate() {
        for &(j, _) in out {
            if comp[i] != comp[j] {
                has_parent[comp[j]] = true;
            }
        }
    }
    let mut best: BTreeMap<usize, EdgeRef> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        if !has_parent[comp[i]] {
            best.entry(comp[i]).and_modify(|b| *b = (*b).min(*e)).or_insert(*e);
        }
    }
    let mut out: Vec<EdgeRef> = best.into_values().collect();
    out.sort();
    out
}

/// Path-count measure of a root: `μ(f)` is the number of descendance paths
/// from `e` to `f` that never repeat an edge.
pub fn mu_of_root(m: &TriMeasure, e: EdgeRef) -> Result<TriMeasure> {
    mu_of_root_capped(m, e, DEFAULT_PATH_CAP)
}

pub fn mu_of_root_capped(m: &TriMeasure, e: EdgeRef, cap: u64) -> Result<TriMeasure> {
    let g = Descendance::new(m);
    let start = *g
        .index
        .get(&e)
        .ok_or_else(|| invalid(format!("edge {e} is not in the support")))?;
    let mut counts = vec![0u64; g.edges.len()];
    counts[start] = 1;
    let mut used = vec![false; g.edges.len()];
    used[start] = true;
    let mut work = 0u64;
    let (p, q) = e.endpoints();
    for head in [p, q] {
        walk(&g, start, head, &mut used, &mut counts, &mut work, cap)?;
    }
    let entries = g.edges.iter().copied().zip(counts.iter().copied());
    TriMeasure::from_densities(m.r(), m.chirality(), entries)
}

/// Extends a path whose last edge is `at`, currently pointing into `head`.
fn walk(
    g: &Descendance,
    at: usize,
    head: LatticePoint,
    used: &mut [bool],
    counts: &mut [u64],
    work: &mut u64,
    cap: u64,
) -> Result<()> {
    for &(next, b) in &g.arcs[at] {
        if b != head || used[next] {
            continue;
        }
        *work += 1;
        if *work > cap {
            return Err(internal(format!("descendance path enumeration exceeded {cap} steps")));
        }
        counts[next] += 1;
        used[next] = true;
        let far = g.edges[next].other_end(b).expect("b on edge");
        walk(g, next, far, used, counts, work, cap)?;
        used[next] = false;
    }
    Ok(())
}

/// Whether every measure supported inside `supp(m)` is a multiple of `m`.
pub fn is_extremal(m: &TriMeasure) -> bool {
    !m.is_zero() && support_nullity(m) == 1
}

/// Dimension of the space of balanced real densities on `supp(m)`.
pub fn support_nullity(m: &TriMeasure) -> usize {
    let edges: Vec<EdgeRef> = m.support().collect();
    let col: HashMap<EdgeRef, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let points: BTreeSet<LatticePoint> = edges
        .iter()
        .flat_map(|e| {
            let (a, b) = e.endpoints();
            [a, b]
        })
        .filter(|p| p.in_triangle(m.r()))
        .collect();
    let mut rows: Vec<Vec<Ratio<i64>>> = Vec::new();
    for p in points {
        let coeff = |k: usize| incident_edges(p)[k].1;
        // m0 - m3 - m4 + m1 = 0 and m0 - m3 - m2 + m5 = 0.
        for eq in [[(0, 1), (3, -1), (4, -1), (1, 1)], [(0, 1), (3, -1), (2, -1), (5, 1)]] {
            let mut row = vec![Ratio::from_integer(0); edges.len()];
            for (k, s) in eq {
                if let Some(&c) = col.get(&coeff(k)) {
                    row[c] += Ratio::from_integer(s);
                }
            }
            rows.push(row);
        }
    }
    edges.len() - rank(rows)
}

fn rank(mut rows: Vec<Vec<Ratio<i64>>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != Ratio::from_integer(0)) else {
            continue;
        };
        rows.swap(rank, piv);
        let pv = rows[rank][c];
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != Ratio::from_integer(0) {
                let f = rows[i][c] / pv;
                for k in c..ncols {
                    let delta = rows[rank][k] * f;
                    rows[i][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A root edge, its path-count measure and its multiplicity in `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalComponent {
    pub root: EdgeRef,
    #[serde(serialize_with = "as_measure_file")]
    pub mu: TriMeasure,
    pub coeff: u64,
}

fn as_measure_file<S: serde::Serializer>(m: &TriMeasure, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.to_file().serialize(s)
}

impl ExtremalComponent {
    pub fn scaled(&self) -> TriMeasure {
        self.mu.scale(self.coeff).expect("component fits inside the measure")
    }
}

/// Components listed along a linear extension of the precedence order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Precedence {
    pub components: Vec<ExtremalComponent>,
    /// Pairs `(i, j)` with `S_i ≺0 S_j`, as positions in `components`.
    pub relations: Vec<(usize, usize)>,
}

/// Collinear line directions (as `0..3`) through `x` in the support of `s`.
fn lines_through(s: &TriMeasure, x: LatticePoint) -> Vec<Direction> {
    (0..3)
        .map(Direction::new)
        .filter(|&d| {
            s.in_support(EdgeRef::from_directed(x, d)) && s.in_support(EdgeRef::from_directed(x, d.opposite()))
        })
        .collect()
}

/// `S1 ≺0 S2`: at some shared point `X`, a straight line of `S1` lies 60°
/// clockwise from a straight line of `S2`.
pub fn precedes0(s1: &TriMeasure, s2: &TriMeasure, chirality: Chirality) -> bool {
    let pts: BTreeSet<LatticePoint> = s1
        .support()
        .flat_map(|e| {
            let (a, b) = e.endpoints();
            [a, b]
        })
        .collect();
    pts.into_iter().any(|x| {
        let l1 = lines_through(s1, x);
        if l1.is_empty() {
            return false;
        }
        let l2 = lines_through(s2, x);
        l1.iter().any(|&a| {
            l2.iter().any(|&c| {
                let cw = c.clockwise(1, chirality);
                a == cw || a == cw.opposite()
            })
        })
    })
}

/// Decomposition `m = Σ coeff·μ_root`, ordered compatibly with `≺0`.
pub fn decompose(m: &TriMeasure) -> Result<Precedence> {
    let rs = roots(m)?;
    let mut comps = Vec::with_capacity(rs.len());
    for root in rs {
        let mu = mu_of_root(m, root)?;
        comps.push(ExtremalComponent { root, coeff: m.density(root), mu });
    }
    let mut total = TriMeasure::zero(m.r(), m.chirality());
    for c in &comps {
        total = total.add(&c.scaled())?;
    }
    if &total != m {
        return Err(internal(format!("root decomposition does not sum to the measure: {total} vs {m}")));
    }
    let n = comps.len();
    let mut succ = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && precedes0(&comps[i].mu, &comps[j].mu, m.chirality()) {
                succ[i].push(j);
                indeg[j] += 1;
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<(EdgeRef, usize)>> =
        (0..n).filter(|&i| indeg[i] == 0).map(|i| Reverse((comps[i].root, i))).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse((_, i))) = heap.pop() {
        order.push(i);
        for &j in &succ[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                heap.push(Reverse((comps[j].root, j)));
            }
        }
    }
    if order.len() != n {
        return Err(internal("the precedence relation between skeletons has a cycle"));
    }
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut relations: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| succ[i].iter().map(move |&j| (i, j)))
        .map(|(i, j)| (pos[&i], pos[&j]))
        .collect();
    relations.sort();
    let components = order.into_iter().map(|i| comps[i].clone()).collect();
    Ok(Precedence { components, relations })
}
