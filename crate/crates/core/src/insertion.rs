//! Tight boundary insertion: the operators D_m and the recursions that add one
//! boundary-vertex or boundary-face at fixed genus.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::closed::{cylinder, genus1_f, pants, strict_pants};
use crate::disk::{solve_rs, trumpet_matrix, DiskData, TrumpetMatrix, WeightSpec};
use crate::error::{Error, Result};
use crate::rational::q;
use crate::series::Series;
use crate::table::{canonical, CoefficientTable, Provenance, TableKind};

/// D_m = Σ_{M ≤ m} (A⁻¹)_{m,M}(M/m) ∂/∂t_M, and D_0 = ∂/∂t.
#[derive(Clone, Debug, PartialEq)]
pub struct InsertionOperator {
    m: u32,
    row: Vec<(u16, Series)>,
}

pub fn build_d(m: u32, matrix: &TrumpetMatrix) -> Result<InsertionOperator> {
    if m == 0 {
        return Ok(InsertionOperator { m, row: Vec::new() });
    }
    if m > matrix.lmax() {
        return Err(Error::IndexBeyondLmax { len: m, lmax: matrix.lmax() });
    }
    let mut row = Vec::new();
    for big in 1..=m {
        let c = matrix.inv(m, big)?.scale(&(q(big as i64) / q(m as i64)));
        if !c.is_zero() {
            row.push((big as u16, c));
        }
    }
    Ok(InsertionOperator { m, row })
}

impl InsertionOperator {
    pub fn m(&self) -> u32 {
        self.m
    }

    /// True for D_0 = ∂/∂t.
    pub fn is_vertex(&self) -> bool {
        self.m == 0
    }

    /// Nonzero coefficients (M, (A⁻¹)_{m,M}·M/m).
    pub fn coefficients(&self) -> &[(u16, Series)] {
        &self.row
    }

    /// Apply to a series computed under `data`'s weights. Every t_M with a nonzero
    /// coefficient must be active, since the derivative is taken in that variable.
    pub fn apply(&self, x: &Series, data: &DiskData) -> Result<Series> {
        if self.m == 0 {
            return Ok(x.derive_t());
        }
        let mut acc = Series::zero(x.grading(), x.order());
        for (big, c) in &self.row {
            if !data.spec().is_active(*big) {
                return Err(Error::MissingWeight(*big as u32));
            }
            acc = acc.add_ref(&c.mul_ref(&x.derive_face(*big)));
        }
        Ok(acc)
    }
}

/// A weight specification with every face degree up to `lmax` switched on, so that
/// insertion operators can differentiate in them.
pub fn insertion_spec(spec: &WeightSpec, lmax: u32) -> Result<WeightSpec> {
    spec.with_active(spec.active().iter().copied().chain(1..=lmax as u16))
}

/// Σ_i Σ_{m<ℓ_i} m·T⁽⁰⁾_{ℓ_i,new|m}·T_{…,m,…}, shared by both recursions.
fn separating_terms(
    key: &[u32],
    new: u32,
    lookup: &mut dyn FnMut(&[u32]) -> Result<Series>,
    data: &DiskData,
) -> Result<Series> {
    let mut acc = Series::zero(data.grading(), data.spec().order());
    for i in 0..key.len() {
        for m in 1..key[i] {
            let mut smaller = key.to_vec();
            smaller[i] = m;
            let t = lookup(&smaller)?;
            if t.is_zero() {
                continue;
            }
            let sp = strict_pants(key[i], new, m, data)?;
            acc = acc.add_ref(&sp.mul_ref(&t).scale_int(m as i64));
        }
    }
    Ok(acc)
}

/// One step of either recursion: T_{ℓ⃗,new} from T_{ℓ⃗} = `value` and the smaller entries
/// returned by `lookup`. `new = 0` inserts a boundary-vertex.
pub fn insert_boundary(
    key: &[u32],
    value: &Series,
    new: u32,
    lookup: &mut dyn FnMut(&[u32]) -> Result<Series>,
    data: &DiskData,
    matrix: &TrumpetMatrix,
) -> Result<Series> {
    let d = build_d(new, matrix)?;
    Ok(d.apply(value, data)?.add_ref(&separating_terms(key, new, lookup, data)?))
}

fn check_chi(table: &CoefficientTable) -> Result<()> {
    let chi = 2 - 2 * table.genus() as i64 - table.n() as i64;
    if chi > 0 {
        return Err(Error::AssumptionViolated(format!(
            "insertion needs 2 − 2g − n ≤ 0, got g = {}, n = {}",
            table.genus(),
            table.n()
        )));
    }
    Ok(())
}

fn from_table<'a>(table: &'a CoefficientTable) -> impl FnMut(&[u32]) -> Result<Series> + 'a {
    move |k: &[u32]| table.require(k).cloned()
}

/// T_{ℓ⃗,0} = ∂_t T_{ℓ⃗} + Σ_i Σ_{m<ℓ_i} m·T⁽⁰⁾_{ℓ_i,0|m}·T_{…,m,…} for every key of the table.
pub fn add_boundary_vertex(table: &CoefficientTable, data: &DiskData) -> Result<CoefficientTable> {
    add_boundary(table, 0, data, None)
}

/// T_{ℓ⃗,ℓ} = D_ℓ T_{ℓ⃗} + Σ_i Σ_{m<ℓ_i} m·T⁽⁰⁾_{ℓ_i,ℓ|m}·T_{…,m,…} for every key of the table.
pub fn add_boundary_face(
    table: &CoefficientTable,
    l: u32,
    data: &DiskData,
    matrix: &TrumpetMatrix,
) -> Result<CoefficientTable> {
    add_boundary(table, l, data, Some(matrix))
}

fn add_boundary(
    table: &CoefficientTable,
    l: u32,
    data: &DiskData,
    matrix: Option<&TrumpetMatrix>,
) -> Result<CoefficientTable> {
    if table.kind() != TableKind::T {
        return Err(Error::InvalidIndex(format!("insertion acts on T tables, got {:?}", table.kind())));
    }
    check_chi(table)?;
    let d = match matrix {
        Some(m) => build_d(l, m)?,
        None => InsertionOperator { m: 0, row: Vec::new() },
    };
    let mut out = CoefficientTable::new(TableKind::T, table.genus(), table.n() + 1);
    for (key, entry) in table.iter() {
        if table.genus() == 0 && key.len() == 2 && (key[0] == 0) != (key[1] == 0) {
            // A tight face opposite a boundary-vertex on a cylinder has no length-0 separating
            // path to account for, so the recursion does not reach this source.
            return Err(Error::AssumptionViolated(format!("no insertion from the cylinder {key:?}")));
        }
        let mut lookup = from_table(table);
        let v = d.apply(&entry.series, data)?.add_ref(&separating_terms(key, l, &mut lookup, data)?);
        let mut new_key = key.clone();
        new_key.push(l);
        let prov = if entry.provenance == Provenance::Oracle { Provenance::Oracle } else { Provenance::Insertion };
        out.insert(&new_key, v, prov)?;
    }
    Ok(out)
}

/// Where the recursion starts.
#[derive(Clone, Debug)]
pub enum Base {
    /// Pants for genus 0, the genus-one series without boundary for genus 1.
    ClosedForm,
    /// A T table of the requested genus, for instance from the census.
    Oracle(CoefficientTable),
}

/// Memoizing builder for T⁽ᵍ⁾ at fixed genus.
pub struct TightBuilder<'a> {
    genus: u32,
    data: &'a DiskData,
    matrix: &'a TrumpetMatrix,
    base: Base,
    base_n: usize,
    memo: HashMap<Vec<u32>, Series>,
    stack: Vec<Vec<u32>>,
    deps: BTreeMap<Vec<u32>, BTreeSet<Vec<u32>>>,
}

impl<'a> TightBuilder<'a> {
    /// `data` must have every face weight that the inserted lengths need (see `insertion_spec`).
    pub fn new(genus: u32, base: Base, data: &'a DiskData, matrix: &'a TrumpetMatrix) -> Result<TightBuilder<'a>> {
        let base_n = match (&base, genus) {
            (Base::Oracle(t), _) => {
                if t.genus() != genus || t.kind() != TableKind::T {
                    return Err(Error::InvalidIndex(format!("oracle table is {:?} of genus {}", t.kind(), t.genus())));
                }
                t.n()
            }
            (Base::ClosedForm, 0) => 3,
            (Base::ClosedForm, 1) => 0,
            (Base::ClosedForm, g) => return Err(Error::UnsupportedGenus(g)),
        };
        Ok(TightBuilder { genus, data, matrix, base, base_n, memo: HashMap::new(), stack: Vec::new(), deps: BTreeMap::new() })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Number of boundaries of the base case.
    pub fn base_n(&self) -> usize {
        self.base_n
    }

    /// T⁽ᵍ⁾ at the given lengths; the smallest length is inserted last.
    pub fn get(&mut self, lengths: &[u32]) -> Result<Series> {
        let key = canonical(lengths);
        if let Some(top) = self.stack.last() {
            self.deps.entry(top.clone()).or_default().insert(key.clone());
        }
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        self.deps.entry(key.clone()).or_default();
        self.stack.push(key.clone());
        let v = self.compute(&key);
        self.stack.pop();
        let v = v?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }

    /// Every entry computed so far with the entries it was built from, as JSON.
    pub fn trace_json(&self) -> serde_json::Value {
        let nodes: Vec<serde_json::Value> = self
            .deps
            .iter()
            .map(|(k, ds)| serde_json::json!({ "lengths": k, "depends_on": ds.iter().collect::<Vec<_>>() }))
            .collect();
        serde_json::json!({ "genus": self.genus, "base_n": self.base_n, "nodes": nodes })
    }

    fn compute(&mut self, key: &[u32]) -> Result<Series> {
        if key.len() < self.base_n {
            Err(Error::UnsupportedCase(format!(
                "genus {} with {} boundaries lies below the base case",
                self.genus,
                key.len()
            )))
        } else if key.len() == self.base_n {
            self.base_value(key)
        } else {
            self.insert_at(key, key.len() - 1)
        }
    }

    /// T⁽ᵍ⁾ with `lengths[idx]` inserted last; the rest is built by `get`.
    pub fn get_inserting(&mut self, lengths: &[u32], idx: usize) -> Result<Series> {
        if lengths.len() <= self.base_n {
            return self.get(lengths);
        }
        self.insert_at(lengths, idx)
    }

    fn insert_at(&mut self, lengths: &[u32], idx: usize) -> Result<Series> {
        let new = lengths[idx];
        let mut rest = lengths.to_vec();
        rest.remove(idx);
        let prev = self.get(&rest)?;
        let (data, matrix) = (self.data, self.matrix);
        let mut lookup = |k: &[u32]| self.get(k);
        insert_boundary(&rest, &prev, new, &mut lookup, data, matrix)
    }

    fn base_value(&self, key: &[u32]) -> Result<Series> {
        match &self.base {
            Base::Oracle(t) => t.require(key).cloned(),
            Base::ClosedForm if self.genus == 0 => pants(key[0], key[1], key[2], self.data),
            Base::ClosedForm => genus1_f(self.data),
        }
    }
}

/// T⁽ᵍ⁾ at the given lengths for a weight specification, solving with every needed face
/// weight switched on and setting the extra ones back to zero at the end.
pub fn build_t(genus: u32, lengths: &[u32], base: Base, spec: &WeightSpec) -> Result<Series> {
    let lmax = lengths.iter().copied().max().unwrap_or(0).max(1);
    let ext = insertion_spec(spec, lmax)?;
    let data = solve_rs(&ext)?;
    let matrix = trumpet_matrix(lmax, &data)?;
    let mut b = TightBuilder::new(genus, base, &data, &matrix)?;
    let v = b.get(lengths)?;
    let keep = |k: u16| spec.is_active(k);
    Ok(v.restrict_faces(&keep))
}

/// The cylinder table over lengths ≤ lmax, zeros included when `mixed` is set.
/// Only the keys without a lone zero can be grown by insertion.
pub fn cylinder_table(lmax: u32, mixed: bool, data: &DiskData) -> Result<CoefficientTable> {
    let mut t = CoefficientTable::new(TableKind::T, 0, 2);
    let zeros: &[usize] = if mixed { &[0, 1, 2] } else { &[0, 2] };
    for &z in zeros {
        for k in CoefficientTable::full_keys(2, z, lmax) {
            t.insert(&k, cylinder(k[0], k[1], data)?, Provenance::ClosedForm)?;
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed::{genus1_t_bipartite, tgen};
    use crate::poly::bnk;
    use crate::rational::{binomial, factorial, qi, sign, Q};
    use crate::series::{Grading, Order};

    /// D_ℓ R and D_ℓ S written out by parity.
    fn d_on_r_s(l: u32, d: &DiskData) -> (Series, Series) {
        let r = |k: u32| d.r().pow_u(k);
        if l % 2 == 0 {
            (r(l / 2).mul_ref(&d.r_d(1)), r(l / 2).mul_ref(&d.s_d(1)))
        } else {
            (r((l + 1) / 2).mul_ref(&d.s_d(1)), r((l - 1) / 2).mul_ref(&d.r_d(1)))
        }
    }

    fn q_value(k: usize, m: i64) -> Q {
        crate::poly::pk_uni(k, crate::poly::Family::Q).eval(&q(m * m))
    }

    fn ext_data(active: &[u16], lmax: u32, n: i64) -> (DiskData, TrumpetMatrix) {
        let spec = insertion_spec(&WeightSpec::faces(active.iter().copied(), n).unwrap(), lmax).unwrap();
        let d = solve_rs(&spec).unwrap();
        let m = trumpet_matrix(lmax, &d).unwrap();
        (d, m)
    }

    #[test]
    fn operator_rows() {
        let (d, m) = ext_data(&[2, 4], 4, 3);
        let one = Series::one(Grading::Faces, Order::EXACT);
        let d1 = build_d(1, &m).unwrap();
        assert_eq!(d1.coefficients().len(), 1);
        assert_eq!(d1.coefficients()[0].0, 1);
        assert!(d1.coefficients()[0].1.agrees_with(&one));
        // Only even weights: D₂ = ∂/∂t₂ and D₄ = ∂/∂t₄ − 2R ∂/∂t₂.
        let b = solve_rs(&WeightSpec::faces([2, 4], 3).unwrap()).unwrap();
        let mb = trumpet_matrix(4, &b).unwrap();
        let d2 = build_d(2, &mb).unwrap();
        assert_eq!(d2.coefficients().len(), 1);
        assert!(d2.coefficients()[0].1.agrees_with(&one));
        let d4 = build_d(4, &mb).unwrap();
        assert_eq!(d4.coefficients().iter().map(|c| c.0).collect::<Vec<_>>(), vec![2, 4]);
        assert!(d4.coefficients()[0].1.agrees_with(&b.r().scale_int(-2)));
        assert!(build_d(0, &m).unwrap().is_vertex());
        assert_eq!(build_d(5, &m).unwrap_err(), Error::IndexBeyondLmax { len: 5, lmax: 4 });
        let _ = d;
    }

    #[test]
    fn bipartite_operator_closed_form() {
        // D_{2ℓ} = Σ_i (−1)^{ℓ+i} binom(ℓ+i−1, ℓ−i) R^{ℓ−i} ∂/∂t_{2i}.
        let b = solve_rs(&WeightSpec::faces([2, 4, 6, 8], 3).unwrap()).unwrap();
        let m = trumpet_matrix(8, &b).unwrap();
        for l in 1..=4i64 {
            let d = build_d(2 * l as u32, &m).unwrap();
            for (big, c) in d.coefficients() {
                let i = *big as i64 / 2;
                assert_eq!(*big % 2, 0);
                let want = b.r().pow_u((l - i) as u32).scale(&(sign(l + i) * qi(binomial(l + i - 1, l - i))));
                assert!(c.agrees_with(&want), "ℓ={l} i={i}");
            }
        }
    }

    #[test]
    fn operator_on_r_and_s() {
        let (d, m) = ext_data(&[1, 2, 3], 6, 4);
        for l in 0..=6 {
            let op = build_d(l, &m).unwrap();
            let (dr, ds) = d_on_r_s(l, &d);
            assert!(op.apply(d.r(), &d).unwrap().agrees_with(&dr), "D_{l} R");
            assert!(op.apply(d.s(), &d).unwrap().agrees_with(&ds), "D_{l} S");
        }
        let op = build_d(1, &m).unwrap();
        assert!(op.apply(d.s(), &d).unwrap().agrees_with(&d.r_d(1)));
    }

    #[test]
    fn operator_on_derivatives_bipartite() {
        // D_{2m} R^{(j)} = R^{m+1} Σ_k k! q_k(m) b_{j+1,k+1}.
        let b = solve_rs(&WeightSpec::faces([2, 4, 6], 4).unwrap()).unwrap();
        let m = trumpet_matrix(6, &b).unwrap();
        let derivs = b.r_derivs(4);
        for mm in 1..=3i64 {
            let op = build_d(2 * mm as u32, &m).unwrap();
            for j in 0..=2usize {
                let lhs = op.apply(&b.r_d(j), &b).unwrap();
                let mut rhs = Series::zero(Grading::Faces, Order::EXACT);
                for k in 0..=j {
                    let c = qi(factorial(k as u64)) * q_value(k, mm);
                    rhs = rhs.add_ref(&bnk(j + 1, k + 1, &derivs, b.r()).unwrap().scale(&c));
                }
                rhs = rhs.mul_ref(&b.r().pow_u(mm as u32 + 1));
                assert!(lhs.agrees_with(&rhs), "m={mm} j={j}");
            }
        }
    }

    #[test]
    fn missing_weight_is_reported() {
        let b = solve_rs(&WeightSpec::faces([4], 3).unwrap()).unwrap();
        let m = trumpet_matrix(2, &b).unwrap();
        let op = build_d(2, &m).unwrap();
        assert_eq!(op.apply(b.r(), &b), Err(Error::MissingWeight(2)));
    }

    #[test]
    fn vertex_insertion_from_pants() {
        // T_{1,1,1,0} = ∂_t(R S′) with no separating terms.
        let (d, _) = ext_data(&[1, 2, 3], 2, 4);
        let mut t = CoefficientTable::new(TableKind::T, 0, 3);
        t.insert(&[1, 1, 1], pants(1, 1, 1, &d).unwrap(), Provenance::ClosedForm).unwrap();
        let out = add_boundary_vertex(&t, &d).unwrap();
        let want = d.r_d(1).mul_ref(&d.s_d(1)).add_ref(&d.r().mul_ref(&d.s_d(2)));
        assert!(out.get(&[1, 1, 1, 0]).unwrap().agrees_with(&want));
        assert_eq!(out.entry(&[0, 1, 1, 1]).unwrap().provenance, Provenance::Insertion);
        // A sparse table reports what it lacks.
        let mut sparse = CoefficientTable::new(TableKind::T, 0, 3);
        sparse.insert(&[3, 1, 1], pants(3, 1, 1, &d).unwrap(), Provenance::ClosedForm).unwrap();
        assert!(matches!(add_boundary_vertex(&sparse, &d), Err(Error::MissingDependency(_))));
        // Zero tables propagate zeros.
        let z = crate::table::zero_table(TableKind::T, 1, &[vec![2, 1]], Grading::Faces);
        let mut zz = z.clone();
        zz.insert(&[1, 1], Series::zero(Grading::Faces, Order::EXACT), Provenance::ClosedForm).unwrap();
        let out = add_boundary_vertex(&zz, &d).unwrap();
        assert!(out.iter().all(|(_, e)| e.series.is_zero()));
    }

    #[test]
    fn cylinder_grows_into_pants() {
        let (d, m) = ext_data(&[1, 2, 3], 4, 4);
        let cyl = cylinder_table(4, false, &d).unwrap();
        let with_vertex = add_boundary_vertex(&cyl, &d).unwrap();
        for (k, e) in with_vertex.iter() {
            assert!(e.series.agrees_with(&pants(k[0], k[1], k[2], &d).unwrap()), "{k:?}");
        }
        for l in 1..=4 {
            let with_face = add_boundary_face(&cyl, l, &d, &m).unwrap();
            for (k, e) in with_face.iter() {
                assert!(e.series.agrees_with(&pants(k[0], k[1], k[2], &d).unwrap()), "{k:?}");
            }
        }
        let mixed = cylinder_table(2, true, &d).unwrap();
        assert!(matches!(add_boundary_vertex(&mixed, &d), Err(Error::AssumptionViolated(_))));
        assert!(cylinder(2, 0, &d).unwrap().is_zero());
        let planar_disk = CoefficientTable::new(TableKind::T, 0, 1);
        assert!(matches!(add_boundary_vertex(&planar_disk, &d), Err(Error::AssumptionViolated(_))));
    }

    /// The separating terms written out by parity of the new length.
    fn parity_form(key: &[u32], new: u32, t: &CoefficientTable, d: &DiskData) -> Series {
        let r = |k: i64| d.r().pow_u(k as u32);
        let mut acc = Series::zero(Grading::Faces, Order::EXACT);
        for i in 0..key.len() {
            let li = key[i] as i64;
            let ln = new as i64;
            for mi in 1..li {
                let mut small = key.to_vec();
                small[i] = mi as u32;
                let tv = t.get(&small).unwrap();
                let same = (li - mi) % 2 == 1; // m ≡ ℓ_i − 1
                let f = if ln % 2 == 0 {
                    if same {
                        r((li + ln - mi - 1) / 2).mul_ref(&d.s_d(1))
                    } else {
                        r((li + ln - mi) / 2 - 1).mul_ref(&d.r_d(1))
                    }
                } else if same {
                    r((li + ln - mi) / 2 - 1).mul_ref(&d.r_d(1))
                } else {
                    r((li + ln - mi - 1) / 2).mul_ref(&d.s_d(1))
                };
                acc = acc.add_ref(&f.mul_ref(tv).scale_int(mi));
            }
        }
        acc
    }

    #[test]
    fn parity_forms_agree() {
        let (d, m) = ext_data(&[1, 2, 3], 4, 3);
        let mut t = CoefficientTable::new(TableKind::T, 0, 3);
        for k in CoefficientTable::full_keys(3, 0, 4) {
            t.insert(&k, pants(k[0], k[1], k[2], &d).unwrap(), Provenance::ClosedForm).unwrap();
        }
        for new in 0..=4u32 {
            let grown = if new == 0 { add_boundary_vertex(&t, &d) } else { add_boundary_face(&t, new, &d, &m) }.unwrap();
            for k in t.keys() {
                let op = build_d(new, &m).unwrap();
                let want = op.apply(t.get(k).unwrap(), &d).unwrap().add_ref(&parity_form(k, new, &t, &d));
                let mut full = k.clone();
                full.push(new);
                assert!(grown.get(&full).unwrap().agrees_with(&want), "{full:?}");
            }
        }
    }

    #[test]
    fn bipartite_growth_reproduces_general_formula() {
        let (d, m) = ext_data(&[2, 4], 6, 4);
        let keep = |k: u16| k == 2 || k == 4;
        let b = solve_rs(&WeightSpec::faces([2, 4], 4).unwrap()).unwrap();
        let mut builder = TightBuilder::new(0, Base::ClosedForm, &d, &m).unwrap();
        for key in [vec![2u32, 2, 2, 2], vec![4, 2, 2, 0], vec![6, 2, 0, 0], vec![2, 2, 2, 2, 0], vec![4, 2, 2, 2, 2]] {
            let v = builder.get(&key).unwrap().restrict_faces(&keep);
            assert!(v.agrees_with(&tgen(&key, &b).unwrap()), "{key:?}");
        }
    }

    #[test]
    fn insertion_order_does_not_matter() {
        let (d, m) = ext_data(&[1, 2, 3], 4, 3);
        let mut builder = TightBuilder::new(0, Base::ClosedForm, &d, &m).unwrap();
        let key = [3u32, 2, 1, 0];
        let first = builder.get(&key).unwrap();
        for idx in 0..4 {
            assert!(builder.get_inserting(&key, idx).unwrap().agrees_with(&first), "idx {idx}");
        }
    }

    #[test]
    fn genus_one_single_boundary() {
        let spec = WeightSpec::faces([2, 4], 4).unwrap();
        let b = solve_rs(&spec).unwrap();
        for l in 0..=3u32 {
            let v = build_t(1, &[2 * l], Base::ClosedForm, &spec).unwrap();
            assert!(v.agrees_with(&genus1_t_bipartite(2 * l, &b).unwrap()), "ℓ = {l}");
        }
        assert_eq!(build_t(2, &[1], Base::ClosedForm, &spec).unwrap_err(), Error::UnsupportedGenus(2));
        assert!(matches!(build_t(0, &[2, 2], Base::ClosedForm, &spec), Err(Error::UnsupportedCase(_))));
    }

    #[test]
    fn marked_trumpet_identity() {
        // ∂_t A_{L,ℓ} = Σ_{m>ℓ} A_{L,m}·m·T⁽⁰⁾_{m,0|ℓ}.
        let (d, m) = ext_data(&[1, 2, 3], 6, 4);
        for big in 1..=6u32 {
            for l in 1..=big {
                let lhs = m.a(big, l).unwrap().derive_t();
                let mut rhs = Series::zero(Grading::Faces, Order::EXACT);
                for mm in l + 1..=big {
                    let sp = strict_pants(mm, 0, l, &d).unwrap();
                    rhs = rhs.add_ref(&m.a(big, mm).unwrap().mul_ref(&sp).scale_int(mm as i64));
                }
                assert!(lhs.agrees_with(&rhs), "L={big} ℓ={l}");
            }
        }
    }
}
