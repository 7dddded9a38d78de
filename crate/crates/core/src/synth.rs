//! Lattice polynomials in three flags and the recursive construction of a
//! polynomial solving a Schubert problem with `c_IJK = 1`.
//!
//! The recursion works on the unique measure of the problem. A measure of
//! weight zero gives the top element; an extremal measure with a single
//! attachment point gives one flag subspace; other extremal measures pass to
//! the dual problem and come back through De Morgan; everything else splits
//! off its first extremal component and composes the two smaller answers.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{internal, invalid};
use crate::hive::{lr_coeff, unique_measure};
use crate::measure::{BoundaryData, SetTriple, TriMeasure};
use crate::skeleton::{decompose, is_extremal, Precedence};
use crate::trilattice::{Chirality, Side};
use crate::{Error, Result};

/// One of the three flags; `E`, `F`, `G` pair with `I`, `J`, `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flag {
    E,
    F,
    G,
}

impl Flag {
    pub const ALL: [Flag; 3] = [Flag::E, Flag::F, Flag::G];

    pub fn of_side(side: Side) -> Self {
        match side {
            Side::A => Flag::E,
            Side::B => Flag::F,
            Side::C => Flag::G,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Var(Flag, u32),
    Meet(usize, usize),
    Join(usize, usize),
    Top,
    Bottom,
}

/// Hash-consing node pool with on-the-fly simplification.
#[derive(Default)]
pub struct PolyBuilder {
    nodes: Vec<Node>,
    lookup: HashMap<Node, usize>,
}

impl PolyBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&self, id: usize) -> Node {
        self.nodes[id]
    }

    fn intern(&mut self, node: Node) -> usize {
        if let Some(&id) = self.lookup.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node);
        self.lookup.insert(node, id);
        id
    }

    pub fn top(&mut self) -> usize {
        self.intern(Node::Top)
    }

    pub fn bottom(&mut self) -> usize {
        self.intern(Node::Bottom)
    }

    /// `X_j` in ambient dimension `n`, with `X_0 = ⊥` and `X_n = ⊤`.
    pub fn var(&mut self, n: u32, flag: Flag, j: u32) -> usize {
        if j == 0 {
            self.bottom()
        } else if j >= n {
            self.top()
        } else {
            self.intern(Node::Var(flag, j))
        }
    }

    pub fn meet(&mut self, a: usize, b: usize) -> usize {
        self.combine(a, b, true)
    }

    pub fn join(&mut self, a: usize, b: usize) -> usize {
        self.combine(a, b, false)
    }

    fn combine(&mut self, a: usize, b: usize, is_meet: bool) -> usize {
        if a == b {
            return a;
        }
        let (absorbing, neutral) = if is_meet { (Node::Bottom, Node::Top) } else { (Node::Top, Node::Bottom) };
        let (na, nb) = (self.nodes[a], self.nodes[b]);
        if na == absorbing || nb == absorbing {
            return self.intern(absorbing);
        }
        if na == neutral {
            return b;
        }
        if nb == neutral {
            return a;
        }
        let mut ops = Vec::new();
        self.operands(a, is_meet, &mut ops);
        self.operands(b, is_meet, &mut ops);
        ops.sort_unstable();
        ops.dedup();
        // Within one flag only the smallest (meet) or largest (join) index matters.
        let mut best: [Option<(u32, usize)>; 3] = [None; 3];
        ops.retain(|&id| match self.nodes[id] {
            Node::Var(f, j) => {
                let slot = &mut best[f.index()];
                if slot.is_none_or(|(k, _)| if is_meet { j < k } else { j > k }) {
                    *slot = Some((j, id));
                }
                false
            }
            _ => true,
        });
        ops.extend(best.iter().flatten().map(|&(_, id)| id));
        // Absorption: x ∧ (y ∨ …) = x when x ≤ y, dually for joins.
        let below = |nodes: &[Node], x: usize, y: usize| {
            x == y
                || matches!((nodes[x], nodes[y]), (Node::Var(f, i), Node::Var(g, j))
                    if f == g && (if is_meet { i <= j } else { i >= j }))
        };
        let snapshot = ops.clone();
        ops.retain(|&y| {
            let mut inner = Vec::new();
            match self.nodes[y] {
                Node::Join(..) if is_meet => self.operands(y, false, &mut inner),
                Node::Meet(..) if !is_meet => self.operands(y, true, &mut inner),
                _ => return true,
            }
            !snapshot.iter().any(|&x| x != y && inner.iter().any(|&z| below(&self.nodes, x, z)))
        });
        ops.sort_by_key(|&id| match self.nodes[id] {
            Node::Var(f, j) => (0, f.index(), j as usize),
            _ => (1, 0, id),
        });
        let mut acc = ops[0];
        for &x in &ops[1..] {
            acc = self.intern(if is_meet { Node::Meet(acc, x) } else { Node::Join(acc, x) });
        }
        acc
    }

    /// Operands of the maximal chain of `is_meet` operations under `id`.
    fn operands(&self, id: usize, is_meet: bool, out: &mut Vec<usize>) {
        match self.nodes[id] {
            Node::Meet(a, b) if is_meet => {
                self.operands(a, true, out);
                self.operands(b, true, out);
            }
            Node::Join(a, b) if !is_meet => {
                self.operands(a, false, out);
                self.operands(b, false, out);
            }
            _ => out.push(id),
        }
    }

    /// Rebuilds the DAG under `root`, replacing leaves via `leaf` and
    /// optionally exchanging meet and join.
    fn rewrite(
        &mut self,
        root: usize,
        swap_ops: bool,
        leaf: &mut dyn FnMut(&mut PolyBuilder, Node) -> usize,
    ) -> usize {
        let mut memo: HashMap<usize, usize> = HashMap::new();
        self.rewrite_rec(root, swap_ops, leaf, &mut memo)
    }

    fn rewrite_rec(
        &mut self,
        id: usize,
        swap_ops: bool,
        leaf: &mut dyn FnMut(&mut PolyBuilder, Node) -> usize,
        memo: &mut HashMap<usize, usize>,
    ) -> usize {
        if let Some(&v) = memo.get(&id) {
            return v;
        }
        let out = match self.nodes[id] {
            Node::Meet(a, b) | Node::Join(a, b) => {
                let is_meet = matches!(self.nodes[id], Node::Meet(..)) != swap_ops;
                let x = self.rewrite_rec(a, swap_ops, leaf, memo);
                let y = self.rewrite_rec(b, swap_ops, leaf, memo);
                self.combine(x, y, is_meet)
            }
            n => leaf(self, n),
        };
        memo.insert(id, out);
        out
    }

    /// Meet ↔ join, `X_j ↦ X_{n−j}`, `⊤ ↔ ⊥`.
    pub fn de_morgan(&mut self, root: usize, n: u32) -> usize {
        self.rewrite(root, true, &mut |b, node| match node {
            Node::Var(f, j) => b.var(n, f, n - j),
            Node::Top => b.bottom(),
            Node::Bottom => b.top(),
            _ => unreachable!("leaves only"),
        })
    }

    /// Exchanges the `F` and `G` variables.
    pub fn swap_fg(&mut self, root: usize, n: u32) -> usize {
        self.rewrite(root, false, &mut |b, node| match node {
            Node::Var(Flag::F, j) => b.var(n, Flag::G, j),
            Node::Var(Flag::G, j) => b.var(n, Flag::F, j),
            other => b.intern(other),
        })
    }

    /// Reads `root` (over the flags restricted to `p1`) in the ambient flags:
    /// `X_ℓ ↦ p1 ∧ X_{sets[X][ℓ−1]}`, `⊤ ↦ p1`.
    fn substitute(&mut self, root: usize, p1: usize, n: u32, sets: &[Vec<u32>; 3]) -> usize {
        self.rewrite(root, false, &mut |b, node| match node {
            Node::Var(f, l) => {
                let v = b.var(n, f, sets[f.index()][l as usize - 1]);
                b.meet(p1, v)
            }
            Node::Top => p1,
            Node::Bottom => b.bottom(),
            _ => unreachable!("leaves only"),
        })
    }

    /// Embeds a standalone polynomial.
    pub fn import(&mut self, p: &LatticePoly) -> usize {
        let mut ids = Vec::with_capacity(p.nodes.len());
        for node in &p.nodes {
            let id = match *node {
                Node::Var(f, j) => self.var(p.n, f, j),
                Node::Meet(a, b) => self.meet(ids[a], ids[b]),
                Node::Join(a, b) => self.join(ids[a], ids[b]),
                Node::Top => self.top(),
                Node::Bottom => self.bottom(),
            };
            ids.push(id);
        }
        ids[p.root]
    }

    /// The sub-DAG under `root` as a compact polynomial.
    pub fn extract(&self, root: usize, n: u32) -> LatticePoly {
        let mut keep = vec![false; root + 1];
        keep[root] = true;
        for id in (0..=root).rev() {
            if keep[id] {
                if let Node::Meet(a, b) | Node::Join(a, b) = self.nodes[id] {
                    keep[a] = true;
                    keep[b] = true;
                }
            }
        }
        let mut remap = vec![usize::MAX; root + 1];
        let mut nodes = Vec::new();
        for id in 0..=root {
            if !keep[id] {
                continue;
            }
            remap[id] = nodes.len();
            nodes.push(match self.nodes[id] {
                Node::Meet(a, b) => Node::Meet(remap[a], remap[b]),
                Node::Join(a, b) => Node::Join(remap[a], remap[b]),
                other => other,
            });
        }
        LatticePoly { n, root: remap[root], nodes }
    }
}

/// A lattice polynomial in the flag variables `E_j, F_j, G_j`, stored as a
/// DAG whose children always precede their parents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoly {
    pub n: u32,
    nodes: Vec<Node>,
    root: usize,
}

impl LatticePoly {
    /// Builds from raw nodes, checking child order and index ranges.
    pub fn from_nodes(n: u32, nodes: Vec<Node>, root: usize) -> Result<Self> {
        if root >= nodes.len() {
            return Err(invalid("root index out of range"));
        }
        for (i, node) in nodes.iter().enumerate() {
            match *node {
                Node::Meet(a, b) | Node::Join(a, b) if a >= i || b >= i => {
                    return Err(invalid(format!("node {i} refers forward")));
                }
                Node::Var(_, j) if j > n => {
                    return Err(invalid(format!("variable index {j} exceeds n = {n}")));
                }
                _ => {}
            }
        }
        Ok(Self { n, nodes, root })
    }

    pub fn var(n: u32, flag: Flag, j: u32) -> Self {
        Self::build(n, |b| b.var(n, flag, j))
    }

    pub fn top(n: u32) -> Self {
        Self::build(n, |b| b.top())
    }

    pub fn bottom(n: u32) -> Self {
        Self::build(n, |b| b.bottom())
    }

    fn build(n: u32, f: impl FnOnce(&mut PolyBuilder) -> usize) -> Self {
        let mut b = PolyBuilder::new();
        let root = f(&mut b);
        b.extract(root, n)
    }

    /// Binary operation between polynomials over the same `n`.
    pub fn meet(&self, other: &Self) -> Self {
        self.binary(other, true)
    }

    pub fn join(&self, other: &Self) -> Self {
        self.binary(other, false)
    }

    fn binary(&self, other: &Self, is_meet: bool) -> Self {
        let n = self.n.max(other.n);
        Self::build(n, |b| {
            let x = b.import(self);
            let y = b.import(other);
            b.combine(x, y, is_meet)
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Flag absorption, constants and idempotence, applied bottom-up.
    pub fn normalize(&self) -> Self {
        Self::build(self.n, |b| b.import(self))
    }

    pub fn de_morgan(&self) -> Self {
        Self::build(self.n, |b| {
            let r = b.import(self);
            b.de_morgan(r, self.n)
        })
    }

    pub fn max_index(&self) -> u32 {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Var(_, j) => Some(*j),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Infix form with `∧`, `∨`, `1` for top and `0` for bottom. Chains of
    /// one operation print without inner parentheses.
    pub fn to_text(&self) -> String {
        let mut memo: Vec<String> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let s = match *node {
                Node::Var(f, j) => format!("{f:?}{j}"),
                Node::Top => "1".to_string(),
                Node::Bottom => "0".to_string(),
                Node::Meet(a, b) | Node::Join(a, b) => {
                    let is_meet = matches!(node, Node::Meet(..));
                    let part = |c: usize| match self.nodes[c] {
                        Node::Meet(..) if !is_meet => format!("({})", memo[c]),
                        Node::Join(..) if is_meet => format!("({})", memo[c]),
                        _ => memo[c].clone(),
                    };
                    let mut s = String::new();
                    let _ = write!(s, "{} {} {}", part(a), if is_meet { "∧" } else { "∨" }, part(b));
                    s
                }
            };
            memo.push(s);
        }
        memo.swap_remove(self.root)
    }

    pub fn to_file(&self) -> PolyFile {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match *n {
                Node::Var(flag, index) => NodeFile::Var { flag, index },
                Node::Meet(a, b) => NodeFile::Meet { args: [a, b] },
                Node::Join(a, b) => NodeFile::Join { args: [a, b] },
                Node::Top => NodeFile::Top,
                Node::Bottom => NodeFile::Bottom,
            })
            .collect();
        PolyFile { n: self.n, nodes, root: self.root }
    }

    pub fn from_file(f: &PolyFile) -> Result<Self> {
        let nodes = f
            .nodes
            .iter()
            .map(|n| match *n {
                NodeFile::Var { flag, index } => Node::Var(flag, index),
                NodeFile::Meet { args } => Node::Meet(args[0], args[1]),
                NodeFile::Join { args } => Node::Join(args[0], args[1]),
                NodeFile::Top => Node::Top,
                NodeFile::Bottom => Node::Bottom,
            })
            .collect();
        Self::from_nodes(f.n, nodes, f.root)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("polynomial serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: PolyFile = serde_json::from_str(s).map_err(|e| invalid(format!("polynomial JSON: {e}")))?;
        Self::from_file(&f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFile {
    pub n: u32,
    pub nodes: Vec<NodeFile>,
    pub root: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum NodeFile {
    Var { flag: Flag, index: u32 },
    Meet { args: [usize; 2] },
    Join { args: [usize; 2] },
    Top,
    Bottom,
}

/// `I* = {n+1−i : i ∉ I}` on each of the three sets.
pub fn dual_sets(s: &SetTriple) -> SetTriple {
    let dual = |v: &[u32]| -> Vec<u32> {
        let mut out: Vec<u32> = (1..=s.n).filter(|i| !v.contains(i)).map(|i| s.n + 1 - i).collect();
        out.sort_unstable();
        out
    };
    SetTriple { n: s.n, i: dual(&s.i), j: dual(&s.j), k: dual(&s.k) }
}

/// The unique measure of opposite chirality carrying the dual sets.
pub fn dual_measure(m: &TriMeasure) -> Result<TriMeasure> {
    let s = dual_sets(&m.sets()?);
    unique_measure(&BoundaryData::from_sets(&s, m.chirality().flip()))
}

fn swap_jk(s: &SetTriple) -> SetTriple {
    SetTriple { n: s.n, i: s.i.clone(), j: s.k.clone(), k: s.j.clone() }
}

/// Bookkeeping for splitting off the first extremal component of a `Plus` measure.
#[derive(Clone, Debug)]
pub struct ReductionData {
    /// First component times its coefficient.
    pub mu1: TriMeasure,
    pub m_prime: TriMeasure,
    pub r1: u32,
    /// Stub positions `ℓ(i)`, `i = 0..=r`, on sides A, B, C.
    pub positions: [Vec<u32>; 3],
    pub stretched: TriMeasure,
    pub stretched_sets: SetTriple,
    pub prime_sets: SetTriple,
}

pub fn reduction_data(m: &TriMeasure, decomposition: &Precedence) -> Result<ReductionData> {
    if m.chirality() != Chirality::Plus {
        return Err(invalid("reduction is carried out on Plus measures"));
    }
    let first = decomposition
        .components
        .first()
        .ok_or_else(|| invalid("empty decomposition"))?;
    if decomposition.components.len() < 2 {
        return Err(invalid("reduction needs at least two components"));
    }
    let mu1 = first.scaled();
    let m_prime = m.subtract(&mu1)?;
    let r = m.r();
    let r1 = r + m_prime.weight()? as u32;
    let omega1 = mu1.weight()?;
    let mut positions: [Vec<u32>; 3] = Default::default();
    let mut sides: [Vec<u64>; 3] = Default::default();
    for side in Side::ALL {
        let mut stubs = vec![0u64; r1 as usize + 1];
        let mut pos = Vec::with_capacity(r as usize + 1);
        let mut l = 0u32;
        for i in 0..=r {
            pos.push(l);
            stubs[l as usize] += mu1.stub_mass(side, i);
            l += 1 + m_prime.stub_mass(side, i) as u32;
        }
        let cumulative: Vec<u64> = (1..=r1 as usize).map(|l| stubs[..l].iter().sum()).collect();
        positions[side.index()] = pos;
        sides[side.index()] = cumulative;
    }
    let [alpha, beta, gamma] = sides;
    let b = BoundaryData::new(r1, Chirality::Plus, omega1, alpha, beta, gamma)?;
    let stretched = unique_measure(&b)?;
    let stretched_sets = b.to_sets();
    let prime_sets = m_prime.sets()?;
    let sets = m.sets()?;
    if prime_sets.n != r1 {
        return Err(internal("the remainder does not live on the stretched triangle"));
    }
    for side in Side::ALL {
        let (big, one, prime) = (sets.side(side), stretched_sets.side(side), prime_sets.side(side));
        for t in 0..r as usize {
            if one[prime[t] as usize - 1] != big[t] {
                return Err(internal(format!("anchor identity fails on side {side} at t = {}", t + 1)));
            }
        }
        let a_prime: Vec<u64> = (0..=r).map(|i| m_prime.stub_mass(side, i)).collect();
        let a_one: Vec<u64> = (0..=r).map(|i| mu1.stub_mass(side, i)).collect();
        if a_prime[r as usize] == 0 && closed_form_stretched_set(&a_one, &a_prime) != one {
            return Err(internal(format!("stretched set on side {side} disagrees with the closed form")));
        }
    }
    Ok(ReductionData { mu1, m_prime, r1, positions, stretched, stretched_sets, prime_sets })
}

/// Union of runs `{s + Σ_{ℓ<j} a1_ℓ + Σ_{ℓ≤j−2}(a'_ℓ+1) : s = 1..=a'_{j−1}+1}`
/// over `j = 1..=r`.
fn closed_form_stretched_set(a_one: &[u64], a_prime: &[u64]) -> Vec<u32> {
    let r = a_one.len() - 1;
    let mut out = Vec::new();
    for j in 1..=r {
        let base: u64 = a_one[..j].iter().sum::<u64>() + a_prime[..j - 1].iter().map(|a| a + 1).sum::<u64>();
        for s in 1..=a_prime[j - 1] + 1 {
            out.push((s + base) as u32);
        }
    }
    out
}

/// Counters collected during one synthesis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SynthStats {
    pub max_depth: usize,
    pub base_cases: usize,
    pub dual_steps: usize,
    pub reductions: usize,
}

/// Memoizing synthesizer; results are shared across calls.
#[derive(Default)]
pub struct Synthesizer {
    builder: PolyBuilder,
    memo: HashMap<SetTriple, usize>,
    pub stats: SynthStats,
}

impl Synthesizer {
    pub fn new() -> Self {
        Self::default()
    }

    /// A polynomial for `s`; requires `c_IJK = 1`.
    pub fn synthesize(&mut self, s: &SetTriple) -> Result<LatticePoly> {
        s.check()?;
        match lr_coeff(s) {
            0 => return Err(Error::Infeasible(format!("no measure carries {s}"))),
            1 => {}
            c => return Err(Error::Unsupported(c)),
        }
        let root = self.plus(s, 1)?;
        Ok(self.builder.extract(root, s.n))
    }

    fn plus(&mut self, s: &SetTriple, depth: usize) -> Result<usize> {
        if let Some(&id) = self.memo.get(s) {
            return Ok(id);
        }
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let (n, r) = (s.n, s.r());
        let id = if r == 0 {
            self.builder.bottom()
        } else if r == n {
            self.builder.top()
        } else {
            let m = unique_measure(&BoundaryData::from_sets(s, Chirality::Plus))?;
            if is_extremal(&m) {
                if m.attachment_count()? == 1 {
                    self.base_case(s)?
                } else {
                    self.dual_step(s, depth)?
                }
            } else {
                self.reduce(&m, depth)?
            }
        };
        self.memo.insert(s.clone(), id);
        Ok(id)
    }

    fn base_case(&mut self, s: &SetTriple) -> Result<usize> {
        let r = s.r();
        let full: Vec<u32> = (1..=r).collect();
        let sides: Vec<Side> = Side::ALL.into_iter().filter(|&x| s.side(x) == full.as_slice()).collect();
        if sides.len() != 1 {
            return Err(internal(format!("single-attachment skeleton {s} has {} full sides", sides.len())));
        }
        self.stats.base_cases += 1;
        Ok(self.builder.var(s.n, Flag::of_side(sides[0]), r))
    }

    fn dual_step(&mut self, s: &SetTriple, depth: usize) -> Result<usize> {
        let ds = dual_sets(s);
        // The Star measure of `ds` is the mirror of the Plus measure of `ds` with J, K swapped.
        let mirrored = swap_jk(&ds);
        let dual_plus = unique_measure(&BoundaryData::from_sets(&mirrored, Chirality::Plus))?;
        if is_extremal(&dual_plus) {
            return Err(internal(format!("both {s} and its dual are extremal with several attachment points")));
        }
        self.stats.dual_steps += 1;
        let q = self.plus(&mirrored, depth + 1)?;
        let q = self.builder.swap_fg(q, s.n);
        Ok(self.builder.de_morgan(q, s.n))
    }

    fn reduce(&mut self, m: &TriMeasure, depth: usize) -> Result<usize> {
        let d = decompose(m)?;
        let rd = reduction_data(m, &d)?;
        self.stats.reductions += 1;
        let p1 = self.plus(&rd.stretched_sets, depth + 1)?;
        let p_prime = self.plus(&rd.prime_sets, depth + 1)?;
        let sets = [rd.stretched_sets.i.clone(), rd.stretched_sets.j.clone(), rd.stretched_sets.k.clone()];
        Ok(self.builder.substitute(p_prime, p1, rd.stretched_sets.n, &sets))
    }
}

/// One-shot synthesis with statistics.
pub fn synthesize_with_stats(s: &SetTriple) -> Result<(LatticePoly, SynthStats)> {
    let mut syn = Synthesizer::new();
    let p = syn.synthesize(s)?;
    Ok((p, syn.stats))
}

pub fn synthesize(s: &SetTriple) -> Result<LatticePoly> {
    Synthesizer::new().synthesize(s)
}
