//! Brute-force ground truth: weighted counts of rooted maps of any genus with marked
//! boundaries, by enumerating rotation systems σ on 2m labeled darts against the fixed
//! edge involution α = (0 1)(2 3)⋯.
//!
//! Counts are made on labeled structures and divided by 2^m·m!, the relabelings that
//! preserve α. Root darts make that action free, so the quotient is an integer whenever
//! a boundary-face is marked.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::disk::{TrumpetMatrix, WeightSpec};
use crate::error::{Error, Result};
use crate::rational::{factorial, Q};
use crate::series::{Grading, Monomial, Order, Series};
use crate::table::{canonical, f_to_t, CoefficientTable, Provenance, TableKind};

/// Largest edge count the enumerator accepts.
pub const MMAX_GUARD: u32 = 6;
/// Edge count used when none is given.
pub const DEFAULT_MMAX: u32 = 5;

const MAX_DARTS: usize = 2 * MMAX_GUARD as usize;

/// A rotation system σ on darts 0..2m; edges pair 2i with 2i + 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DartStructure {
    sigma: Vec<u8>,
}

fn alpha(d: u8) -> u8 {
    d ^ 1
}

fn cycles(n: usize, next: impl Fn(u8) -> u8) -> Vec<Vec<u8>> {
    let mut seen = [false; MAX_DARTS];
    let mut out = Vec::new();
    for start in 0..n as u8 {
        if seen[start as usize] {
            continue;
        }
        let mut c = Vec::new();
        let mut d = start;
        while !seen[d as usize] {
            seen[d as usize] = true;
            c.push(d);
            d = next(d);
        }
        out.push(c);
    }
    out
}

impl DartStructure {
    pub fn new(sigma: Vec<u8>) -> Result<DartStructure> {
        let n = sigma.len();
        if n % 2 == 1 || n > MAX_DARTS {
            return Err(Error::InvalidIndex(format!("{n} darts")));
        }
        let mut hit = vec![false; n];
        for &d in &sigma {
            if d as usize >= n || std::mem::replace(&mut hit[d as usize], true) {
                return Err(Error::InvalidIndex(format!("{sigma:?} is not a permutation")));
            }
        }
        Ok(DartStructure { sigma })
    }

    pub fn edges(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn sigma(&self) -> &[u8] {
        &self.sigma
    }

    pub fn vertices(&self) -> Vec<Vec<u8>> {
        cycles(self.sigma.len(), |d| self.sigma[d as usize])
    }

    /// Cycles of σ∘α; a face's degree is its cycle length.
    pub fn faces(&self) -> Vec<Vec<u8>> {
        cycles(self.sigma.len(), |d| self.sigma[alpha(d) as usize])
    }

    pub fn is_connected(&self) -> bool {
        connected(&self.sigma)
    }

    /// Genus of the surface, `None` when disconnected.
    pub fn genus(&self) -> Option<u32> {
        if !self.is_connected() {
            return None;
        }
        let chi = self.vertices().len() as i64 - self.edges() as i64 + self.faces().len() as i64;
        Some(((2 - chi) / 2) as u32)
    }
}

fn connected(sigma: &[u8]) -> bool {
    let n = sigma.len();
    if n == 0 {
        return true;
    }
    let mut seen = [false; MAX_DARTS];
    let mut stack = [0u8; MAX_DARTS];
    let mut top = 1;
    seen[0] = true;
    let mut count = 1;
    while top > 0 {
        top -= 1;
        let d = stack[top];
        for e in [sigma[d as usize], alpha(d)] {
            if !seen[e as usize] {
                seen[e as usize] = true;
                stack[top] = e;
                top += 1;
                count += 1;
            }
        }
    }
    count == n
}

/// Vertex count and face degrees of σ, without allocating.
fn shape(sigma: &[u8], degrees: &mut Vec<u8>) -> usize {
    let n = sigma.len();
    let mut seen = [false; MAX_DARTS];
    let mut v = 0;
    for start in 0..n {
        if !seen[start] {
            v += 1;
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                d = sigma[d] as usize;
            }
        }
    }
    seen = [false; MAX_DARTS];
    degrees.clear();
    for start in 0..n {
        if !seen[start] {
            let mut len = 0u8;
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                len += 1;
                d = sigma[alpha(d as u8) as usize] as usize;
            }
            degrees.push(len);
        }
    }
    v
}

/// Which marked configurations one enumeration pass collects.
#[derive(Clone, Debug)]
struct Pass {
    genus: u32,
    /// Boundary-face degrees in order; `None` collects every non-increasing sequence.
    target: Option<Vec<u32>>,
    faces: usize,
    vertices: usize,
    lmax: u32,
    active: Vec<bool>,
}

/// Monomial data: the t exponent and the inner face degree counts.
type MonoKey = (u32, Vec<u8>);
type Tally = HashMap<(Vec<u32>, u32, MonoKey), u128>;

impl Pass {
    fn visit(&self, sigma: &[u8], degrees: &mut Vec<u8>, tally: &mut Tally) {
        let m = sigma.len() / 2;
        let v = shape(sigma, degrees);
        if v + degrees.len() + 2 * self.genus as usize != m + 2 || v < self.vertices || !connected(sigma) {
            return;
        }
        let falling: u128 = (0..self.vertices).map(|i| (v - i) as u128).product();
        let mut chosen = Vec::with_capacity(self.faces);
        self.choose(degrees, &mut chosen, m, v, falling, tally);
    }

    fn choose(&self, degrees: &[u8], chosen: &mut Vec<usize>, m: usize, v: usize, weight: u128, tally: &mut Tally) {
        let i = chosen.len();
        if i == self.faces {
            let mut inner = vec![0u8; 2 * m + 1];
            for (f, &d) in degrees.iter().enumerate() {
                if !chosen.contains(&f) {
                    if !self.active.get(d as usize).copied().unwrap_or(false) {
                        return;
                    }
                    inner[d as usize] += 1;
                }
            }
            let mut key: Vec<u32> = chosen.iter().map(|&f| degrees[f] as u32).collect();
            key.extend(std::iter::repeat(0).take(self.vertices));
            let mono = ((v - self.vertices) as u32, inner);
            *tally.entry((key, m as u32, mono)).or_insert(0) += weight;
            return;
        }
        for (f, &d) in degrees.iter().enumerate() {
            let d = d as u32;
            if chosen.contains(&f) {
                continue;
            }
            let fits = match &self.target {
                Some(t) => t[i] == d,
                None => d <= self.lmax && chosen.last().map_or(true, |&p| degrees[p] as u32 >= d),
            };
            if fits {
                chosen.push(f);
                self.choose(degrees, chosen, m, v, weight * d as u128, tally);
                chosen.pop();
            }
        }
    }

    /// All σ on 2m darts with σ(0) = first, by Heap's algorithm on the rest.
    fn run_partition(&self, m: usize, first: u8) -> Tally {
        let n = 2 * m;
        let mut tally = Tally::new();
        let mut degrees = Vec::with_capacity(n);
        let mut sigma: Vec<u8> = std::iter::once(first).chain((0..n as u8).filter(|&d| d != first)).collect();
        let k = n - 1;
        let mut c = vec![0usize; k];
        self.visit(&sigma, &mut degrees, &mut tally);
        let mut i = 0;
        while i < k {
            if c[i] < i {
                if i % 2 == 0 {
                    sigma.swap(1, 1 + i);
                } else {
                    sigma.swap(1 + c[i], 1 + i);
                }
                self.visit(&sigma, &mut degrees, &mut tally);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        tally
    }

    fn run(&self, mmax: u32) -> BTreeMap<(Vec<u32>, u32, MonoKey), u128> {
        let mut out = BTreeMap::new();
        // The vertex map: one vertex, no edges, one face of degree zero.
        if self.genus == 0 && self.faces == 0 && self.vertices <= 1 {
            let key = vec![0; self.vertices];
            out.insert((key, 0, ((1 - self.vertices) as u32, vec![0u8])), 1);
        }
        for m in 1..=mmax as usize {
            let merged = (0..2 * m as u8)
                .into_par_iter()
                .map(|first| self.run_partition(m, first))
                .reduce(Tally::new, |mut a, b| {
                    for (k, c) in b {
                        *a.entry(k).or_insert(0) += c;
                    }
                    a
                });
            out.extend(merged);
        }
        out
    }
}

/// Raw labeled counts of one census pass, before division.
#[derive(Clone, Debug)]
pub struct CensusCounts {
    pub genus: u32,
    pub faces: usize,
    pub vertices: usize,
    pub mmax: u32,
    /// (key, edges, t exponent, inner degree counts) → labeled count.
    raw: BTreeMap<(Vec<u32>, u32, MonoKey), u128>,
}

impl CensusCounts {
    /// Census order in the total grading: mmax + 2 − 2g − n − s.
    pub fn order(&self) -> Order {
        Order::integer(self.mmax as i64 + 2 - 2 * self.genus as i64 - (self.faces + self.vertices) as i64)
    }

    pub fn keys(&self) -> Vec<Vec<u32>> {
        let mut ks: Vec<Vec<u32>> = self.raw.keys().map(|(k, _, _)| k.clone()).collect();
        ks.dedup();
        ks
    }

    /// Labeled count per edge number for one key.
    pub fn raw_by_edges(&self, key: &[u32]) -> BTreeMap<u32, u128> {
        let mut out = BTreeMap::new();
        for ((k, m, _), c) in &self.raw {
            if k == key {
                *out.entry(*m).or_insert(0) += c;
            }
        }
        out
    }

    /// The weighted series for one key, divided by 2^m·m!.
    pub fn series(&self, key: &[u32], order: Order) -> Result<Series> {
        let mut terms = Vec::new();
        for ((k, m, (t_exp, inner)), c) in &self.raw {
            if k != key {
                continue;
            }
            let divisor = BigInt::from(2u32).pow(*m) * factorial(*m as u64);
            let count = BigInt::from(*c);
            let coef = if self.faces > 0 {
                let (quot, rem) = count.div_rem(&divisor);
                if !rem.is_zero() {
                    return Err(Error::Indivisible { count: count.to_string(), divisor: divisor.to_string() });
                }
                Q::from(quot)
            } else {
                // Marked vertices alone leave automorphisms; the quotient is Σ 1/|Aut|.
                Q::new(count, divisor)
            };
            let faces = inner.iter().enumerate().filter(|(d, &e)| *d > 0 && e > 0).map(|(d, &e)| (d as u16, e as u16));
            terms.push((Monomial::new(2 * *t_exp as i32, faces), coef));
        }
        Ok(Series::from_terms(Grading::Total, order, terms))
    }

    pub fn to_json_value(&self, key: &[u32]) -> serde_json::Value {
        serde_json::json!({
            "genus": self.genus,
            "boundary_faces": self.faces,
            "boundary_vertices": self.vertices,
            "mmax": self.mmax,
            "raw_counts": self.raw_by_edges(key).into_iter().map(|(m, c)| serde_json::json!({
                "edges": m,
                "labeled": c.to_string(),
                "divisor": (BigInt::from(2u32).pow(m) * factorial(m as u64)).to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn check_scale(mmax: u32, spec: &WeightSpec) -> Result<()> {
    if mmax > MMAX_GUARD {
        return Err(Error::ScaleExceeded(mmax));
    }
    if spec.grading() != Grading::Total {
        return Err(Error::UnsupportedCase("the census is truncated by edge count and needs the total grading".into()));
    }
    Ok(())
}

fn active_mask(spec: &WeightSpec, mmax: u32) -> Vec<bool> {
    (0..=2 * mmax as u16).map(|k| k > 0 && spec.is_active(k)).collect()
}

fn effective_order(counts: &CensusCounts, spec: &WeightSpec) -> Order {
    counts.order().min(spec.order())
}

/// Labeled counts with boundary-faces of the given degrees (in this order) and
/// `vertices` marked vertices.
pub fn census_counts(genus: u32, lengths: &[u32], vertices: usize, mmax: u32, spec: &WeightSpec) -> Result<CensusCounts> {
    check_scale(mmax, spec)?;
    if lengths.contains(&0) {
        return Err(Error::InvalidIndex(format!("{lengths:?}: boundary-faces have positive degree")));
    }
    if lengths.is_empty() && vertices == 0 {
        return Err(Error::InvalidIndex("at least one boundary is needed".into()));
    }
    let pass = Pass {
        genus,
        target: Some(lengths.to_vec()),
        faces: lengths.len(),
        vertices,
        lmax: lengths.iter().copied().max().unwrap_or(0),
        active: active_mask(spec, mmax),
    };
    Ok(CensusCounts { genus, faces: lengths.len(), vertices, mmax, raw: pass.run(mmax) })
}

/// Rooted boundary-faces of degrees `lengths` and `vertices` boundary-vertices, genus g,
/// exact through grade mmax + 2 − 2g − n − s in the total grading.
pub fn census_f(genus: u32, lengths: &[u32], vertices: usize, mmax: u32, spec: &WeightSpec) -> Result<Series> {
    let counts = census_counts(genus, lengths, vertices, mmax, spec)?;
    let mut key = lengths.to_vec();
    key.extend(std::iter::repeat(0).take(vertices));
    counts.series(&key, effective_order(&counts, spec))
}

/// The F table with `n` boundaries of which `zeros` are boundary-vertices, all face
/// degrees ≤ lmax, from a single enumeration.
pub fn census_f_table(genus: u32, n: usize, zeros: usize, lmax: u32, mmax: u32, spec: &WeightSpec) -> Result<CoefficientTable> {
    check_scale(mmax, spec)?;
    if n == 0 || zeros > n {
        return Err(Error::InvalidIndex(format!("{n} boundaries with {zeros} vertices")));
    }
    let pass = Pass {
        genus,
        target: None,
        faces: n - zeros,
        vertices: zeros,
        lmax,
        active: active_mask(spec, mmax),
    };
    let counts = CensusCounts { genus, faces: n - zeros, vertices: zeros, mmax, raw: pass.run(mmax) };
    let order = effective_order(&counts, spec);
    let mut table = CoefficientTable::new(TableKind::F, genus, n);
    for key in CoefficientTable::full_keys(n, zeros, lmax) {
        table.insert(&key, counts.series(&key, order)?, Provenance::Oracle)?;
    }
    Ok(table)
}

/// The T table seeded by the census: F up to lmax, then the trumpet inversion and the
/// rooting division.
pub fn census_t_table(
    genus: u32,
    n: usize,
    zeros: usize,
    lmax: u32,
    mmax: u32,
    spec: &WeightSpec,
    matrix: &TrumpetMatrix,
) -> Result<CoefficientTable> {
    if lmax > matrix.lmax() {
        return Err(Error::IndexBeyondLmax { len: lmax, lmax: matrix.lmax() });
    }
    f_to_t(&census_f_table(genus, n, zeros, lmax, mmax, spec)?, matrix)
}

/// One T entry from the census; zeros in `lengths` are boundary-vertices.
pub fn census_t(genus: u32, lengths: &[u32], spec: &WeightSpec, mmax: u32, matrix: &TrumpetMatrix) -> Result<Series> {
    let key = canonical(lengths);
    let zeros = key.iter().filter(|&&l| l == 0).count();
    let lmax = key.first().copied().unwrap_or(0);
    let table = census_t_table(genus, key.len(), zeros, lmax, mmax, spec, matrix)?;
    table.require(&key).cloned()
}

/// Transitive labeled σ on 2m darts, by genus.
pub fn genus_distribution(m: u32) -> Result<BTreeMap<u32, u128>> {
    if m > MMAX_GUARD {
        return Err(Error::ScaleExceeded(m));
    }
    let n = 2 * m as usize;
    let parts: Vec<BTreeMap<u32, u128>> = (0..n as u8)
        .into_par_iter()
        .map(|first| {
            let mut out = BTreeMap::new();
            let mut degrees = Vec::new();
            let mut sigma: Vec<u8> = std::iter::once(first).chain((0..n as u8).filter(|&d| d != first)).collect();
            let mut record = |s: &[u8], degrees: &mut Vec<u8>| {
                if connected(s) {
                    let v = shape(s, degrees);
                    *out.entry(((m as usize + 2 - v - degrees.len()) / 2) as u32).or_insert(0) += 1;
                }
            };
            let k = n - 1;
            let mut c = vec![0usize; k];
            record(&sigma, &mut degrees);
            let mut i = 0;
            while i < k {
                if c[i] < i {
                    if i % 2 == 0 {
                        sigma.swap(1, 1 + i);
                    } else {
                        sigma.swap(1 + c[i], 1 + i);
                    }
                    record(&sigma, &mut degrees);
                    c[i] += 1;
                    i = 0;
                } else {
                    c[i] = 0;
                    i += 1;
                }
            }
            out
        })
        .collect();
    let mut total = BTreeMap::new();
    for p in parts {
        for (g, c) in p {
            *total.entry(g).or_insert(0) += c;
        }
    }
    Ok(total)
}

/// Transitive labeled σ on 2m darts, counted directly from all permutations.
pub fn transitive_count(m: u32) -> Result<u128> {
    genus_distribution(m).map(|d| d.values().sum())
}
