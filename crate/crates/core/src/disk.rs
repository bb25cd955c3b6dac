//! The disk series R and S, their t-derivatives, and the trumpet coefficients
//! A_{L,ℓ} = [z^ℓ](z + S + R/z)^L with the unitriangular matrix they form.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{binomial, multinomial, qi};
use crate::series::{sum_series, Grading, Order, Series};

/// Active face weights, truncation order and grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpec {
    active: BTreeSet<u16>,
    order: Order,
    grading: Grading,
}

impl WeightSpec {
    pub fn new(active: impl IntoIterator<Item = u16>, order: Order, grading: Grading) -> Result<WeightSpec> {
        let active: BTreeSet<u16> = active.into_iter().collect();
        if active.contains(&0) {
            return Err(Error::InvalidIndex("face weight index must be at least 1".into()));
        }
        if order.doubled() < 2 {
            return Err(Error::InsufficientOrder(format!("truncation order {order} below 1")));
        }
        Ok(WeightSpec { active, order, grading })
    }

    /// Face-count grading at integer order `n`, the usual setting for map computations.
    pub fn faces(active: impl IntoIterator<Item = u16>, n: i64) -> Result<WeightSpec> {
        WeightSpec::new(active, Order::integer(n), Grading::Faces)
    }

    /// Total-degree grading at integer order `n`.
    pub fn total(active: impl IntoIterator<Item = u16>, n: i64) -> Result<WeightSpec> {
        WeightSpec::new(active, Order::integer(n), Grading::Total)
    }

    pub fn active(&self) -> &BTreeSet<u16> {
        &self.active
    }

    pub fn is_active(&self, k: u16) -> bool {
        self.active.contains(&k)
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    /// Every active face degree is even.
    pub fn is_bipartite(&self) -> bool {
        self.active.iter().all(|k| k % 2 == 0)
    }

    pub fn max_degree(&self) -> u16 {
        self.active.iter().copied().max().unwrap_or(0)
    }

    pub fn with_active(&self, active: impl IntoIterator<Item = u16>) -> Result<WeightSpec> {
        WeightSpec::new(active, self.order, self.grading)
    }

    pub fn with_order(&self, order: Order) -> Result<WeightSpec> {
        WeightSpec::new(self.active.iter().copied(), order, self.grading)
    }

    /// The vertex weight t, exact.
    pub fn t(&self) -> Series {
        Series::t_pow2(self.grading, 2)
    }

    /// The face weight t_k, exact.
    pub fn tk(&self, k: u16) -> Series {
        Series::face(self.grading, k)
    }

    pub fn constant(&self, c: crate::rational::Q) -> Series {
        Series::constant(self.grading, Order::EXACT, c)
    }
}

/// [z^j](z + S + R/z)^p from powers of S and R.
pub fn trinomial_coeff(p: u32, j: i64, s_pows: &[Series], r_pows: &[Series]) -> Series {
    // a − c = j, a + b + c = p.
    let p = p as i64;
    let mut terms = Vec::new();
    for c in 0..=p {
        let a = c + j;
        let b = p - a - c;
        if a < 0 || b < 0 {
            continue;
        }
        let m = qi(multinomial(&[a, b, c]));
        terms.push(s_pows[b as usize].mul_ref(&r_pows[c as usize]).scale(&m));
    }
    let g = s_pows.first().map_or(Grading::Total, |s| s.grading());
    sum_series(g, terms)
}

fn powers(x: &Series, n: usize, order: Order) -> Vec<Series> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Series::one(x.grading(), Order::EXACT));
    for i in 1..=n {
        let next = out[i - 1].mul_ref(x).truncate(order);
        out.push(next);
    }
    out
}

/// R, S and cached t-derivatives for a weight specification.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskData {
    spec: WeightSpec,
    r_derivs: Vec<Series>,
    s_derivs: Vec<Series>,
    sqrt_r: Series,
    sweeps: usize,
}

/// Number of derivatives cached by `solve_rs`.
pub const DEFAULT_DERIVATIVES: usize = 8;

/// Solve the disk equations by full sweeps from (R, S) = (t, 0).
pub fn solve_rs(spec: &WeightSpec) -> Result<DiskData> {
    let n = spec.order;
    let g = spec.grading;
    let t = spec.t();
    // Every sweep fixes at least one more grade, plus one sweep to observe stationarity.
    let cap = ((n.doubled() + 1) / 2 + 2) as usize;
    let (r, s, sweeps) = if spec.is_bipartite() {
        let mut r = t.truncate(n);
        let mut sweeps = 0;
        loop {
            if sweeps >= cap {
                return Err(Error::NonConvergence(sweeps));
            }
            sweeps += 1;
            let pows = powers(&r, (spec.max_degree() / 2) as usize, n);
            let mut next = t.clone();
            for &k in &spec.active {
                let j = (k / 2) as i64;
                let c = qi(binomial(2 * j - 1, j));
                next = next.add_ref(&spec.tk(k).mul_ref(&pows[j as usize]).scale(&c));
            }
            let next = next.truncate(n);
            if next == r {
                break;
            }
            r = next;
        }
        (r, Series::zero(g, n), sweeps)
    } else {
        let mut r = t.truncate(n);
        let mut s = Series::zero(g, n);
        let mut sweeps = 0;
        loop {
            if sweeps >= cap {
                return Err(Error::NonConvergence(sweeps));
            }
            sweeps += 1;
            let p = spec.max_degree() as usize;
            let rp = powers(&r, p, n);
            let sp = powers(&s, p, n);
            let mut nr = t.clone();
            let mut ns = Series::zero(g, Order::EXACT);
            for &k in &spec.active {
                let tk = spec.tk(k);
                nr = nr.add_ref(&tk.mul_ref(&trinomial_coeff(k as u32 - 1, -1, &sp, &rp)));
                ns = ns.add_ref(&tk.mul_ref(&trinomial_coeff(k as u32 - 1, 0, &sp, &rp)));
            }
            let (nr, ns) = (nr.truncate(n), ns.truncate(n));
            if nr == r && ns == s {
                break;
            }
            r = nr;
            s = ns;
        }
        (r, s, sweeps)
    };
    let sqrt_r = r.sqrt()?;
    let data = DiskData { spec: spec.clone(), r_derivs: vec![r], s_derivs: vec![s], sqrt_r, sweeps };
    Ok(data.derivatives(DEFAULT_DERIVATIVES))
}

impl DiskData {
    pub fn spec(&self) -> &WeightSpec {
        &self.spec
    }

    pub fn grading(&self) -> Grading {
        self.spec.grading
    }

    pub fn r(&self) -> &Series {
        &self.r_derivs[0]
    }

    pub fn s(&self) -> &Series {
        &self.s_derivs[0]
    }

    /// R^{1/2}, with a half-integer t-exponent.
    pub fn sqrt_r(&self) -> &Series {
        &self.sqrt_r
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn cached_derivatives(&self) -> usize {
        self.r_derivs.len() - 1
    }

    /// A new value caching R^{(k)} and S^{(k)} for k ≤ kmax.
    pub fn derivatives(&self, kmax: usize) -> DiskData {
        let mut out = self.clone();
        while out.r_derivs.len() <= kmax {
            let r = out.r_derivs.last().unwrap().derive_t();
            let s = out.s_derivs.last().unwrap().derive_t();
            out.r_derivs.push(r);
            out.s_derivs.push(s);
        }
        out
    }

    /// R^{(k)}, from the cache when available.
    pub fn r_d(&self, k: usize) -> Series {
        match self.r_derivs.get(k) {
            Some(s) => s.clone(),
            None => self.r_derivs.last().unwrap().derive_t_n(k + 1 - self.r_derivs.len()),
        }
    }

    /// S^{(k)}, from the cache when available.
    pub fn s_d(&self, k: usize) -> Series {
        match self.s_derivs.get(k) {
            Some(s) => s.clone(),
            None => self.s_derivs.last().unwrap().derive_t_n(k + 1 - self.s_derivs.len()),
        }
    }

    /// R^{(1)}, …, R^{(k)}.
    pub fn r_derivs(&self, k: usize) -> Vec<Series> {
        (1..=k).map(|i| self.r_d(i)).collect()
    }

    pub fn t(&self) -> Series {
        self.spec.t()
    }

    /// A_{L,ℓ} = [z^ℓ](z + S + R/z)^L.
    pub fn trumpet(&self, big_l: u32, l: u32) -> Result<Series> {
        if big_l < 1 || l < 1 {
            return Err(Error::InvalidIndex(format!("A_{{{big_l},{l}}} needs positive indices")));
        }
        let order = self.spec.order;
        let rp = powers(self.r(), big_l as usize, order);
        let sp = powers(self.s(), big_l as usize, order);
        Ok(trinomial_coeff(big_l, l as i64, &sp, &rp))
    }

    /// Residuals of both disk equations; zero through the truncation order when solved.
    pub fn residuals(&self) -> (Series, Series) {
        let p = self.spec.max_degree() as usize;
        let n = self.spec.order;
        let rp = powers(self.r(), p, n);
        let sp = powers(self.s(), p, n);
        let mut er = self.t().sub_ref(self.r());
        let mut es = self.s().neg_ref();
        for &k in &self.spec.active {
            let tk = self.spec.tk(k);
            er = er.add_ref(&tk.mul_ref(&trinomial_coeff(k as u32 - 1, -1, &sp, &rp)));
            es = es.add_ref(&tk.mul_ref(&trinomial_coeff(k as u32 - 1, 0, &sp, &rp)));
        }
        (er.truncate(n), es.truncate(n))
    }

    /// The Zhukovsky map x(z) = γ(z + 1/z) + α as (α, γ) = (S, R^{1/2}).
    pub fn zhukovsky(&self) -> (Series, Series) {
        (self.s().clone(), self.sqrt_r.clone())
    }

    pub fn to_json_value(&self, kmax: usize) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out<'a> {
            active: Vec<u16>,
            bipartite: bool,
            order: String,
            grading: Grading,
            sweeps: usize,
            #[serde(rename = "R")]
            r: &'a Series,
            #[serde(rename = "S")]
            s: &'a Series,
            #[serde(rename = "R_derivatives")]
            rd: Vec<Series>,
            #[serde(rename = "S_derivatives")]
            sd: Vec<Series>,
        }
        serde_json::to_value(Out {
            active: self.spec.active.iter().copied().collect(),
            bipartite: self.spec.is_bipartite(),
            order: self.spec.order.to_string(),
            grading: self.spec.grading,
            sweeps: self.sweeps,
            r: self.r(),
            s: self.s(),
            rd: (1..=kmax).map(|k| self.r_d(k)).collect(),
            sd: (1..=kmax).map(|k| self.s_d(k)).collect(),
        })
        .expect("serializable")
    }
}

/// The matrix (A_{L,ℓ})_{1≤ℓ≤L≤Lmax} and its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct TrumpetMatrix {
    lmax: u32,
    a: Vec<Vec<Series>>,
    inv: Vec<Vec<Series>>,
}

pub fn trumpet_matrix(lmax: u32, data: &DiskData) -> Result<TrumpetMatrix> {
    if lmax < 1 {
        return Err(Error::InvalidIndex("Lmax must be positive".into()));
    }
    let g = data.grading();
    let order = data.spec.order;
    let rp = powers(data.r(), lmax as usize, order);
    let sp = powers(data.s(), lmax as usize, order);
    let n = lmax as usize;
    // Row L, column ℓ (1-based, stored at [L−1][ℓ−1]); entries above the diagonal vanish.
    let mut a = vec![vec![Series::zero(g, Order::EXACT); n]; n];
    for big_l in 1..=n {
        for l in 1..=big_l {
            a[big_l - 1][l - 1] = trinomial_coeff(big_l as u32, l as i64, &sp, &rp);
        }
    }
    let mut inv = vec![vec![Series::zero(g, Order::EXACT); n]; n];
    for big_l in 1..=n {
        inv[big_l - 1][big_l - 1] = Series::one(g, Order::EXACT);
        for l in (1..big_l).rev() {
            let mut acc = Series::zero(g, Order::EXACT);
            for m in l..big_l {
                acc = acc.add_ref(&a[big_l - 1][m - 1].mul_ref(&inv[m - 1][l - 1]));
            }
            inv[big_l - 1][l - 1] = acc.neg_ref().truncate(order);
        }
    }
    Ok(TrumpetMatrix { lmax, a, inv })
}

impl TrumpetMatrix {
    pub fn lmax(&self) -> u32 {
        self.lmax
    }

    fn check(&self, big_l: u32, l: u32) -> Result<()> {
        if big_l < 1 || l < 1 {
            return Err(Error::InvalidIndex(format!("({big_l},{l})")));
        }
        if big_l > self.lmax || l > self.lmax {
            return Err(Error::IndexBeyondLmax { len: big_l.max(l), lmax: self.lmax });
        }
        Ok(())
    }

    /// A_{L,ℓ}.
    pub fn a(&self, big_l: u32, l: u32) -> Result<&Series> {
        self.check(big_l, l)?;
        Ok(&self.a[big_l as usize - 1][l as usize - 1])
    }

    /// (A⁻¹)_{L,ℓ}.
    pub fn inv(&self, big_l: u32, l: u32) -> Result<&Series> {
        self.check(big_l, l)?;
        Ok(&self.inv[big_l as usize - 1][l as usize - 1])
    }
}
