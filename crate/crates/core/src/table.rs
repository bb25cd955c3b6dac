//! Tables of series indexed by boundary lengths, and the trumpet transforms between
//! tight and ordinary boundaries.
//!
//! Keys are stored sorted in decreasing order, so boundary-vertices (length 0) trail.
//! Queries accept any permutation.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::disk::{DiskData, TrumpetMatrix};
use crate::error::{Error, Result};
use crate::rational::q;
use crate::series::{Grading, Order, Series};

/// What a table holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TableKind {
    /// Tight boundaries, unrooted.
    T,
    /// Tight boundaries, rooted: T times the product of the positive lengths.
    THat,
    /// Ordinary rooted boundaries; a trailing zero means one t-derivative.
    F,
    /// T divided by R^{Σℓ/2}.
    Tau,
    /// T̂ divided by R^{Σℓ/2}.
    TauHat,
}

/// Where an entry came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Insertion,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub series: Series,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    kind: TableKind,
    genus: u32,
    n: usize,
    entries: BTreeMap<Vec<u32>, Entry>,
}

/// Canonical key: lengths sorted in decreasing order.
pub fn canonical(ls: &[u32]) -> Vec<u32> {
    let mut k = ls.to_vec();
    k.sort_unstable_by(|a, b| b.cmp(a));
    k
}

fn rooting_factor(key: &[u32]) -> i64 {
    key.iter().filter(|&&l| l > 0).map(|&l| l as i64).product()
}

impl CoefficientTable {
    pub fn new(kind: TableKind, genus: u32, n: usize) -> CoefficientTable {
        CoefficientTable { kind, genus, n, entries: BTreeMap::new() }
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Number of boundaries, counting boundary-vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, lengths: &[u32], series: Series, provenance: Provenance) -> Result<()> {
        if lengths.len() != self.n {
            return Err(Error::InvalidIndex(format!("{lengths:?} has {} entries, table expects {}", lengths.len(), self.n)));
        }
        self.entries.insert(canonical(lengths), Entry { series, provenance });
        Ok(())
    }

    pub fn get(&self, lengths: &[u32]) -> Option<&Series> {
        self.entries.get(&canonical(lengths)).map(|e| &e.series)
    }

    pub fn entry(&self, lengths: &[u32]) -> Option<&Entry> {
        self.entries.get(&canonical(lengths))
    }

    /// Like `get`, but a missing entry is an error naming the key.
    pub fn require(&self, lengths: &[u32]) -> Result<&Series> {
        self.get(lengths).ok_or_else(|| Error::MissingDependency(canonical(lengths)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &Entry)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.entries.keys()
    }

    /// Keys with every length at most `lmax`, `zeros` of them equal to zero, in canonical form.
    pub fn full_keys(n: usize, zeros: usize, lmax: u32) -> Vec<Vec<u32>> {
        fn rec(left: usize, hi: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for l in (1..=hi).rev() {
                cur.push(l);
                rec(left - 1, l, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if zeros <= n {
            rec(n - zeros, lmax, &mut Vec::new(), &mut out);
        }
        for k in &mut out {
            k.extend(std::iter::repeat(0).take(zeros));
        }
        out
    }

    /// Apply `f` to every entry, keeping keys and provenance.
    pub fn map(&self, kind: TableKind, f: impl Fn(&[u32], &Series) -> Result<Series> + Sync) -> Result<CoefficientTable> {
        let entries = self
            .entries
            .par_iter()
            .map(|(k, e)| Ok((k.clone(), Entry { series: f(k, &e.series)?, provenance: e.provenance })))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(CoefficientTable { kind, genus: self.genus, n: self.n, entries })
    }

    /// Every entry agrees with the other table's entry at the common order, and the key sets match.
    pub fn agrees_with(&self, other: &CoefficientTable) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().all(|(k, e)| other.entries.get(k).is_some_and(|o| e.series.agrees_with(&o.series)))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "genus": self.genus,
            "n": self.n,
            "entries": self.entries.iter().map(|(k, e)| serde_json::json!({
                "lengths": k,
                "provenance": e.provenance,
                "series": e.series,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Least trustworthy provenance among the inputs.
fn merge_provenance(it: impl IntoIterator<Item = Provenance>) -> Provenance {
    it.into_iter().max().unwrap_or(Provenance::ClosedForm)
}

/// Apply a lower-triangular matrix factor-wise on positive indices; zero indices pass through.
fn transform(
    table: &CoefficientTable,
    kind: TableKind,
    matrix: &TrumpetMatrix,
    pick: fn(&TrumpetMatrix, u32, u32) -> Result<&Series>,
) -> Result<CoefficientTable> {
    for k in table.keys() {
        if let Some(&big) = k.first() {
            if big > matrix.lmax() {
                return Err(Error::IndexBeyondLmax { len: big, lmax: matrix.lmax() });
            }
        }
    }
    // Work on the full set of orderings so each pass touches one position.
    let mut full: BTreeMap<Vec<u32>, (Series, BTreeSet<Provenance>)> = BTreeMap::new();
    for (k, e) in table.iter() {
        for p in distinct_permutations(k) {
            full.insert(p, (e.series.clone(), BTreeSet::from([e.provenance])));
        }
    }
    let keys: Vec<Vec<u32>> = full.keys().cloned().collect();
    for d in 0..table.n {
        let next = keys
            .par_iter()
            .map(|key| {
                let big = key[d];
                if big == 0 {
                    return Ok((key.clone(), full[key].clone()));
                }
                let mut acc: Option<Series> = None;
                let mut prov = BTreeSet::new();
                for l in 1..=big {
                    let mut src = key.clone();
                    src[d] = l;
                    let (s, p) = full.get(&src).ok_or_else(|| Error::MissingDependency(canonical(&src)))?;
                    let term = pick(matrix, big, l)?.mul_ref(s);
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.add_ref(&term),
                    });
                    prov.extend(p.iter().copied());
                }
                Ok((key.clone(), (acc.expect("big ≥ 1"), prov)))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        full = next;
    }
    let mut out = CoefficientTable::new(kind, table.genus, table.n);
    for k in table.keys() {
        let (s, p) = &full[k];
        out.entries.insert(k.clone(), Entry { series: s.clone(), provenance: merge_provenance(p.iter().copied()) });
    }
    Ok(out)
}

fn distinct_permutations(key: &[u32]) -> Vec<Vec<u32>> {
    let mut out = BTreeSet::new();
    for perm in crate::poly::permutations(key.len()) {
        out.insert(perm.iter().map(|&i| key[i]).collect::<Vec<_>>());
    }
    out.into_iter().collect()
}

/// T̂ from T by the rooting factor ∏ℓᵢ over positive lengths.
pub fn t_to_that(t: &CoefficientTable) -> Result<CoefficientTable> {
    expect_kind(t, &[TableKind::T])?;
    t.map(TableKind::THat, |k, s| Ok(s.scale_int(rooting_factor(k))))
}

/// T from T̂.
pub fn that_to_t(t: &CoefficientTable) -> Result<CoefficientTable> {
    expect_kind(t, &[TableKind::THat])?;
    t.map(TableKind::T, |k, s| Ok(s.scale(&(q(1) / q(rooting_factor(k))))))
}

fn expect_kind(t: &CoefficientTable, allowed: &[TableKind]) -> Result<()> {
    if allowed.contains(&t.kind) {
        Ok(())
    } else {
        Err(Error::InvalidIndex(format!("table of kind {:?}, expected one of {allowed:?}", t.kind)))
    }
}

/// F_{L⃗} = Σ A_{L₁,ℓ₁}⋯A_{Lₙ,ℓₙ} T̂_{ℓ⃗}; keys with zeros give t-derivatives of F.
/// Accepts T or T̂ tables. Every entry below a key must be present.
pub fn t_to_f(t: &CoefficientTable, matrix: &TrumpetMatrix) -> Result<CoefficientTable> {
    expect_kind(t, &[TableKind::T, TableKind::THat])?;
    let that = if t.kind == TableKind::T { t_to_that(t)? } else { t.clone() };
    transform(&that, TableKind::F, matrix, TrumpetMatrix::a)
}

/// The inverse of `t_to_f`, returning a T table.
pub fn f_to_t(f: &CoefficientTable, matrix: &TrumpetMatrix) -> Result<CoefficientTable> {
    f_to_that(f, matrix).and_then(|h| that_to_t(&h))
}

/// T̂ from F by applying A⁻¹ factor-wise.
pub fn f_to_that(f: &CoefficientTable, matrix: &TrumpetMatrix) -> Result<CoefficientTable> {
    expect_kind(f, &[TableKind::F])?;
    transform(f, TableKind::THat, matrix, TrumpetMatrix::inv)
}

/// τ̂_{ℓ⃗} = T̂_{ℓ⃗}·R^{−Σℓᵢ/2} from an F table.
pub fn zhukovsky_extract(f: &CoefficientTable, matrix: &TrumpetMatrix, data: &DiskData) -> Result<CoefficientTable> {
    let that = f_to_that(f, matrix)?;
    divide_by_r_half_powers(&that, TableKind::TauHat, data)
}

/// τ from T, or τ̂ from T̂.
pub fn to_tau(t: &CoefficientTable, data: &DiskData) -> Result<CoefficientTable> {
    let kind = match t.kind {
        TableKind::T => TableKind::Tau,
        TableKind::THat => TableKind::TauHat,
        _ => return Err(Error::InvalidIndex(format!("cannot form τ from a {:?} table", t.kind))),
    };
    divide_by_r_half_powers(t, kind, data)
}

fn divide_by_r_half_powers(t: &CoefficientTable, kind: TableKind, data: &DiskData) -> Result<CoefficientTable> {
    let rinv_sqrt = data.sqrt_r().recip()?;
    let order = data.spec().order();
    t.map(kind, |k, s| {
        let sum: u32 = k.iter().sum();
        Ok(s.mul_ref(&rinv_sqrt.pow_u(sum).truncate(order)))
    })
}

/// Table of zeros of the given shape, for tests and padding.
pub fn zero_table(kind: TableKind, genus: u32, keys: &[Vec<u32>], g: Grading) -> CoefficientTable {
    let mut t = CoefficientTable::new(kind, genus, keys.first().map_or(0, Vec::len));
    for k in keys {
        t.entries
            .insert(canonical(k), Entry { series: Series::zero(g, Order::EXACT), provenance: Provenance::ClosedForm });
    }
    t
}
