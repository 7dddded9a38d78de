//! Exact subspace arithmetic over a prime field, evaluation of lattice
//! polynomials on random flags, intersection-pattern checks, and a
//! floating-point eigenvalue check of the Horn inequalities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{internal, invalid};
use crate::hive::{lr_coeff, subsets};
use crate::measure::SetTriple;
use crate::synth::{Flag, LatticePoly, Node};
use crate::Result;

pub const DEFAULT_PRIME: u64 = 1_000_003;

/// Integers modulo a prime `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        Self { p: DEFAULT_PRIME }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(invalid(format!("{p} is not a prime below 2^32")));
        }
        Ok(Self { p })
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    fn inv(self, a: u64) -> u64 {
        let (mut base, mut e, mut acc) = (a % self.p, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(self, rows: &mut Vec<Vec<u64>>, ncols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..ncols {
            let Some(pr) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(rank, pr);
            let inv = self.inv(rows[rank][c]);
            for x in rows[rank].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..rows.len() {
                if i != rank && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for k in c..ncols {
                        let t = self.mul(f, rows[rank][k]);
                        rows[i][k] = self.sub(rows[i][k], t);
                    }
                }
            }
            pivots.push(c);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        pivots
    }
}

/// A subspace of `F_p^n`, stored by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: PrimeField,
    n: usize,
    rows: Vec<Vec<u64>>,
}

impl Subspace {
    pub fn span(field: PrimeField, n: usize, vectors: Vec<Vec<u64>>) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != n) {
            return Err(invalid("vector length differs from the ambient dimension"));
        }
        let mut rows: Vec<Vec<u64>> = vectors.into_iter().map(|v| v.into_iter().map(|x| x % field.p).collect()).collect();
        field.rref(&mut rows, n);
        Ok(Self { field, n, rows })
    }

    pub fn zero(field: PrimeField, n: usize) -> Self {
        Self { field, n, rows: Vec::new() }
    }

    pub fn full(field: PrimeField, n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
        Self { field, n, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.field != other.field {
            return Err(invalid("subspaces live in different spaces"));
        }
        Ok(())
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        self.field.rref(&mut rows, self.n);
        Ok(Self { field: self.field, n: self.n, rows })
    }

    /// Intersection by the Zassenhaus construction.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.n;
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(self.dim() + other.dim());
        for u in &self.rows {
            rows.push(u.iter().chain(u.iter()).copied().collect());
        }
        for v in &other.rows {
            rows.push(v.iter().copied().chain(std::iter::repeat_n(0, n)).collect());
        }
        self.field.rref(&mut rows, 2 * n);
        let inter: Vec<Vec<u64>> = rows
            .into_iter()
            .filter(|r| r[..n].iter().all(|&x| x == 0))
            .map(|r| r[n..].to_vec())
            .collect();
        Self::span(self.field, n, inter)
    }

    /// Vectors pairing to zero with every vector of the subspace.
    pub fn annihilator(&self) -> Self {
        let n = self.n;
        let mut rows = self.rows.clone();
        let pivots = self.field.rref(&mut rows, n);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = self.field.sub(0, row[f]);
            }
            basis.push(v);
        }
        Self::span(self.field, n, basis).expect("lengths agree")
    }

    pub fn contains(&self, other: &Self) -> Result<bool> {
        Ok(self.join(other)?.dim() == self.dim())
    }
}

/// A complete flag `E_0 ⊂ … ⊂ E_n`, `E_j` spanned by the first `j` columns
/// of an invertible matrix.
#[derive(Clone, Debug)]
pub struct FlagBasis {
    pub n: usize,
    /// Column vectors.
    pub columns: Vec<Vec<u64>>,
    levels: Vec<Subspace>,
}

impl FlagBasis {
    pub fn new(field: PrimeField, columns: Vec<Vec<u64>>) -> Result<Self> {
        let n = columns.len();
        let mut levels = Vec::with_capacity(n + 1);
        for j in 0..=n {
            levels.push(Subspace::span(field, n, columns[..j].to_vec())?);
        }
        if levels[n].dim() != n {
            return Err(invalid("flag basis is singular"));
        }
        Ok(Self { n, columns, levels })
    }

    pub fn level(&self, j: usize) -> &Subspace {
        &self.levels[j]
    }

    /// The flag `ann(E_{n−j})`.
    pub fn annihilator_flag(&self) -> Self {
        let levels: Vec<Subspace> = (0..=self.n).map(|j| self.levels[self.n - j].annihilator()).collect();
        Self { n: self.n, columns: Vec::new(), levels }
    }
}

/// Three flags over one field.
#[derive(Clone, Debug)]
pub struct Flags {
    pub field: PrimeField,
    pub flags: [FlagBasis; 3],
}

impl Flags {
    pub fn get(&self, f: Flag) -> &FlagBasis {
        &self.flags[f.index()]
    }

    pub fn annihilators(&self) -> Self {
        Self { field: self.field, flags: self.flags.clone().map(|f| f.annihilator_flag()) }
    }
}

fn random_matrix(field: PrimeField, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..field.p)).collect()).collect()
}

/// Three independent random flags, reproducible from `seed`.
pub fn random_flags(field: PrimeField, n: usize, seed: u64) -> Flags {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flags = [(); 3].map(|_| loop {
        if let Ok(f) = FlagBasis::new(field, random_matrix(field, n, n, &mut rng)) {
            break f;
        }
    });
    Flags { field, flags }
}

/// Bottom-up evaluation with `X_j ↦ X_j` of the corresponding flag.
pub fn eval(p: &LatticePoly, flags: &Flags) -> Result<Subspace> {
    let n = flags.flags[0].n;
    if p.max_index() as usize > n {
        return Err(invalid(format!("polynomial index {} exceeds n = {n}", p.max_index())));
    }
    let mut vals: Vec<Subspace> = Vec::with_capacity(p.nodes().len());
    for node in p.nodes() {
        let v = match *node {
            Node::Var(f, j) => flags.get(f).level(j as usize).clone(),
            Node::Top => Subspace::full(flags.field, n),
            Node::Bottom => Subspace::zero(flags.field, n),
            Node::Meet(a, b) => vals[a].meet(&vals[b])?,
            Node::Join(a, b) => vals[a].join(&vals[b])?,
        };
        vals.push(v);
    }
    Ok(vals.swap_remove(p.root()))
}

/// `φ_I(i) = #{ℓ : I(ℓ) ≤ i}`.
pub fn phi(set: &[u32], i: u32) -> usize {
    set.iter().filter(|&&x| x <= i).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternMismatch {
    pub flag: Flag,
    pub index: u32,
    pub expected: usize,
    pub observed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternReport {
    pub dim: usize,
    pub expected_dim: usize,
    pub mismatches: Vec<PatternMismatch>,
}

impl PatternReport {
    pub fn pass(&self) -> bool {
        self.dim == self.expected_dim && self.mismatches.is_empty()
    }
}

/// Compares `dim(P ∧ X_i)` with `φ` of the matching set for every `i` and flag.
pub fn check_pattern(p: &Subspace, flags: &Flags, s: &SetTriple) -> Result<PatternReport> {
    let mut mismatches = Vec::new();
    for f in Flag::ALL {
        let set = match f {
            Flag::E => &s.i,
            Flag::F => &s.j,
            Flag::G => &s.k,
        };
        for i in 0..=s.n {
            let observed = p.meet(flags.get(f).level(i as usize))?.dim();
            let expected = phi(set, i);
            if observed != expected {
                mismatches.push(PatternMismatch { flag: f, index: i, expected, observed });
            }
        }
    }
    Ok(PatternReport { dim: p.dim(), expected_dim: s.r() as usize, mismatches })
}

/// `dim(P ∧ E_{I(ℓ)}) ≥ ℓ` for every `ℓ`.
pub fn schubert_member(p: &Subspace, flag: &FlagBasis, set: &[u32]) -> Result<bool> {
    if p.dim() != set.len() {
        return Ok(false);
    }
    for (l, &i) in set.iter().enumerate() {
        if p.meet(flag.level(i as usize))?.dim() < l + 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A uniformly random subspace of dimension `d`.
pub fn random_subspace(field: PrimeField, n: usize, d: usize, rng: &mut ChaCha8Rng) -> Subspace {
    loop {
        let s = Subspace::span(field, n, random_matrix(field, d, n, rng)).expect("lengths agree");
        if s.dim() == d {
            return s;
        }
    }
}

/// Trials in which two random subspaces of dimensions `a`, `b` fail to meet
/// in dimension `max(0, a+b−n)`.
pub fn generic_meet_dim_trial(field: PrimeField, n: usize, a: usize, b: usize, trials: usize, seed: u64) -> Result<usize> {
    if a > n || b > n {
        return Err(invalid("subspace dimension exceeds n"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let want = (a + b).saturating_sub(n);
    let mut failures = 0;
    for _ in 0..trials {
        let u = random_subspace(field, n, a, &mut rng);
        let v = random_subspace(field, n, b, &mut rng);
        if u.meet(&v)?.dim() != want {
            failures += 1;
        }
    }
    Ok(failures)
}

/// Outcome of checking one polynomial on several seeded flag triples.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub triple: SetTriple,
    pub prime: u64,
    pub seeds: Vec<u64>,
    pub passed: Vec<bool>,
    pub dims: Vec<usize>,
    pub first_failure: Option<PatternReport>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.passed.iter().all(|&b| b)
    }
}

/// Evaluates `p` on flags drawn from `seeds` and checks the pattern of `s`.
pub fn verify_polynomial(p: &LatticePoly, s: &SetTriple, field: PrimeField, seeds: &[u64]) -> Result<VerifyReport> {
    let mut passed = Vec::with_capacity(seeds.len());
    let mut dims = Vec::with_capacity(seeds.len());
    let mut first_failure = None;
    for &seed in seeds {
        let flags = random_flags(field, s.n as usize, seed);
        let v = eval(p, &flags)?;
        let rep = check_pattern(&v, &flags, s)?;
        dims.push(v.dim());
        passed.push(rep.pass());
        if !rep.pass() && first_failure.is_none() {
            first_failure = Some(rep);
        }
    }
    Ok(VerifyReport { triple: s.clone(), prime: field.modulus(), seeds: seeds.to_vec(), passed, dims, first_failure })
}

/// Block averages `λ^{(n)}(j) = (1/N) Σ_{block j} λ`, with `τ(1) = 1`.
pub fn coarsen(lambda: &[f64], n: usize) -> Result<Vec<f64>> {
    let big = lambda.len();
    if n == 0 || !big.is_multiple_of(n) {
        return Err(invalid(format!("{n} does not divide {big}")));
    }
    let block = big / n;
    Ok(lambda.chunks(block).map(|c| c.iter().sum::<f64>() / big as f64).collect())
}

/// Eigenvalues of a symmetric matrix, nonincreasing, by cyclic Jacobi sweeps.
pub fn symmetric_eigenvalues(a: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let total: f64 = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-12 * total.max(f64::MIN_POSITIVE);
    let off = |m: &Vec<Vec<f64>>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i][j] * m[i][j];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&m) > tol {
        sweeps += 1;
        if sweeps > 100 {
            return Err(internal("Jacobi eigenvalue iteration did not converge"));
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let g: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect()).collect();
    (0..n).map(|i| (0..n).map(|j| (g[i][j] + g[j][i]) / 2.0).collect()).collect()
}

/// Every triple of proper nonempty subsets of `1..=n` with `c_IJK = 1`.
pub fn unit_triples(n: u32) -> Vec<SetTriple> {
    let mut out = Vec::new();
    for r in 1..n {
        let subs = subsets(n, r);
        for i in &subs {
            for j in &subs {
                for k in &subs {
                    let s = SetTriple { n, i: i.clone(), j: j.clone(), k: k.clone() };
                    if lr_coeff(&s) == 1 {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct HornReport {
    pub size: usize,
    pub blocks: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub inequalities_checked: usize,
    pub violations: usize,
    /// Largest value of `(Σ_I λ_A + Σ_J λ_B + Σ_K λ_C) / scale`; nonpositive
    /// when every inequality holds.
    pub max_relative_margin: f64,
}

/// Samples `A`, `B` symmetric with Gaussian entries and `C = −A−B`, and checks
/// `Σ_I λ_A^{(n)} + Σ_J λ_B^{(n)} + Σ_K λ_C^{(n)} ≤ tol·scale` for every
/// `c_IJK = 1` triple and every `n` in `blocks`.
pub fn horn_numeric_check(size: usize, blocks: &[usize], trials: usize, tol: f64, seed: u64) -> Result<HornReport> {
    let tables: Vec<(usize, Vec<SetTriple>)> = blocks
        .iter()
        .map(|&n| {
            if n == 0 || !size.is_multiple_of(n) {
                Err(invalid(format!("{n} does not divide {size}")))
            } else {
                Ok((n, unit_triples(n as u32)))
            }
        })
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut checked, mut violations, mut worst) = (0, 0, f64::NEG_INFINITY);
    for _ in 0..trials {
        let a = random_symmetric(size, &mut rng);
        let b = random_symmetric(size, &mut rng);
        let c: Vec<Vec<f64>> = (0..size).map(|i| (0..size).map(|j| -a[i][j] - b[i][j]).collect()).collect();
        let norm = |m: &Vec<Vec<f64>>| m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
        let scale = norm(&a).max(norm(&b)).max(1.0);
        let spectra = [symmetric_eigenvalues(&a)?, symmetric_eigenvalues(&b)?, symmetric_eigenvalues(&c)?];
        for (n, triples) in &tables {
            let co: Vec<Vec<f64>> = spectra.iter().map(|l| coarsen(l, *n)).collect::<Result<_>>()?;
            for s in triples {
                let sum = |l: &Vec<f64>, set: &[u32]| set.iter().map(|&i| l[i as usize - 1]).sum::<f64>();
                let v = sum(&co[0], &s.i) + sum(&co[1], &s.j) + sum(&co[2], &s.k);
                let rel = v / scale;
                checked += 1;
                worst = worst.max(rel);
                if rel > tol {
                    violations += 1;
                }
            }
        }
    }
    Ok(HornReport {
        size,
        blocks: blocks.to_vec(),
        trials,
        seed,
        inequalities_checked: checked,
        violations,
        max_relative_margin: worst,
    })
}
