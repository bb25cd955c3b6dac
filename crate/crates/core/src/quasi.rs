//! Sampling τ⁽ᵍ⁾ = T⁽ᵍ⁾·R^{−Σℓ/2} on a grid and fitting the parity-dependent
//! quasi-polynomial that it must be, with the all-zero correction by χ(M_{g,n}).

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::closed::{cylinder, tgen, tgen_quasi};
use crate::disk::{solve_rs, trumpet_matrix, DiskData, WeightSpec};
use crate::error::{Error, Result};
use crate::insertion::{insertion_spec, Base, TightBuilder};
use crate::poly::{euler_characteristic, fit_quasipolynomial, permutations, QuasiPolynomial};
use crate::rational::Q;
use crate::series::{Order, Series};
use crate::table::{canonical, CoefficientTable};

/// Where the T values come from.
#[derive(Clone, Debug)]
pub enum Source {
    /// The insertion recursions from the genus-0 pants or the genus-1 series.
    Insertion,
    /// A T table of the requested genus, grown by insertion where needed.
    Oracle(CoefficientTable),
    /// The planar bipartite or quasi-bipartite formulas (genus 0, n ≥ 3).
    ClosedForm,
}

/// Samples τ at every ℓ⃗ ∈ {0..lmax}ⁿ except the origin, together with T at the origin.
#[derive(Clone, Debug)]
pub struct Samples {
    pub genus: u32,
    pub n: usize,
    pub lmax: u32,
    pub tau: BTreeMap<Vec<i64>, Series>,
    pub t_at_zero: Series,
}

/// Result of a fit with its checks.
#[derive(Clone, Debug)]
pub struct QuasiReport {
    pub genus: u32,
    pub n: usize,
    pub poly: QuasiPolynomial<Series>,
    pub degree_bound: u32,
    pub symmetric: bool,
    /// Samples not used for interpolation, all reproduced exactly by the fit.
    pub held_out: usize,
    pub chi: Q,
    pub zero_identity: bool,
}

impl QuasiReport {
    pub fn degree_ok(&self) -> bool {
        self.poly.degree().unwrap_or(0) <= self.degree_bound
    }

    pub fn passed(&self) -> bool {
        self.symmetric && self.degree_ok() && self.zero_identity
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "genus": self.genus,
            "n": self.n,
            "degree_bound": self.degree_bound,
            "degree": self.poly.degree(),
            "symmetric": self.symmetric,
            "held_out": self.held_out,
            "chi": self.chi.to_string(),
            "zero_identity": self.zero_identity,
            "quasipolynomial": self.poly.to_json_value(),
        })
    }
}

fn grid_keys(n: usize, lmax: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for zeros in 0..=n {
        out.extend(CoefficientTable::full_keys(n, zeros, lmax));
    }
    out
}

fn orderings(key: &[u32]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = permutations(key.len())
        .into_iter()
        .map(|p| p.iter().map(|&i| key[i] as i64).collect())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// T⁽ᵍ⁾ over the canonical grid keys, restricted to `spec`'s weights.
fn t_values(genus: u32, n: usize, lmax: u32, spec: &WeightSpec, source: &Source) -> Result<BTreeMap<Vec<u32>, Series>> {
    let keys = grid_keys(n, lmax);
    let mut out = BTreeMap::new();
    if let Source::ClosedForm = source {
        if genus != 0 {
            return Err(Error::UnsupportedGenus(genus));
        }
        let data = solve_rs(spec)?;
        for k in keys {
            let odd = k.iter().filter(|&&l| l % 2 == 1).count();
            let v = match odd {
                0 => tgen(&k, &data)?,
                2 => tgen_quasi(&k, &data)?,
                _ => Series::zero(data.grading(), Order::EXACT),
            };
            out.insert(k, v);
        }
        return Ok(out);
    }
    let ext = insertion_spec(spec, lmax)?;
    let data = solve_rs(&ext)?;
    let matrix = trumpet_matrix(lmax.max(1), &data)?;
    let base = match source {
        Source::Oracle(t) => Base::Oracle(t.clone()),
        _ => Base::ClosedForm,
    };
    let mut builder = TightBuilder::new(genus, base, &data, &matrix)?;
    let keep = |k: u16| spec.is_active(k);
    for k in keys {
        out.insert(k.clone(), builder.get(&k)?.restrict_faces(&keep));
    }
    Ok(out)
}

/// τ samples on {0..lmax}ⁿ, all truncated to their common order.
pub fn sample_tau(genus: u32, n: usize, lmax: u32, spec: &WeightSpec, source: &Source) -> Result<Samples> {
    let chi = 2 - 2 * genus as i64 - n as i64;
    if genus == 0 && n == 2 {
        return Err(Error::NotQuasiPolynomial("tight cylinders are not quasi-polynomial".into()));
    }
    if n == 0 || chi >= 0 {
        return Err(Error::OutOfRange { g: genus, n: n as u32 });
    }
    let data = solve_rs(spec)?;
    let t = t_values(genus, n, lmax, spec, source)?;
    let zero_key = vec![0u32; n];
    let mut tau = BTreeMap::new();
    for (k, v) in &t {
        if *k == zero_key {
            continue;
        }
        let sum: u32 = k.iter().sum();
        let scaled = v.mul_ref(&data.sqrt_r().pow_i(-(sum as i64))?);
        for o in orderings(k) {
            tau.insert(o, scaled.clone());
        }
    }
    let common = tau.values().map(Series::order).min().unwrap_or(Order::EXACT);
    for v in tau.values_mut() {
        *v = v.truncate(common);
    }
    let t_at_zero = t.get(&zero_key).cloned().ok_or_else(|| Error::MissingDependency(zero_key.clone()))?;
    Ok(Samples { genus, n, lmax, tau, t_at_zero })
}

/// Tight cylinder samples τ⁽⁰⁾_{ℓ₁,ℓ₂} = T⁽⁰⁾_{ℓ₁,ℓ₂} R^{−(ℓ₁+ℓ₂)/2}, which no quasi-polynomial fits.
pub fn cylinder_samples(lmax: u32, data: &DiskData) -> Result<BTreeMap<Vec<i64>, Series>> {
    let mut out = BTreeMap::new();
    for a in 0..=lmax {
        for b in 0..=lmax {
            if a + b == 0 {
                continue;
            }
            let v = cylinder(a, b, data)?.mul_ref(&data.sqrt_r().pow_i(-((a + b) as i64))?);
            out.insert(vec![a as i64, b as i64], v);
        }
    }
    let common = out.values().map(Series::order).min().unwrap_or(Order::EXACT);
    Ok(out.into_iter().map(|(k, v)| (k, v.truncate(common))).collect())
}

/// Fit the samples with total degree ≤ 3g − 3 + n and run the checks.
pub fn fit_samples(samples: &Samples) -> Result<QuasiReport> {
    let (g, n) = (samples.genus, samples.n);
    let bound = 3 * g as i64 - 3 + n as i64;
    if bound < 0 {
        return Err(Error::OutOfRange { g, n: n as u32 });
    }
    let poly = fit_quasipolynomial(&samples.tau, n, bound as usize)?;
    let side = bound as usize + 1;
    let grid = side.pow(n as u32);
    let held_out = samples.tau.len().saturating_sub(grid * poly.classes().count());
    let chi = euler_characteristic(g, n as u32)?;
    let at_zero = poly.eval(&vec![0; n]).ok_or_else(|| Error::InsufficientSamples("no all-even class".into()))?;
    let grading = samples.t_at_zero.grading();
    let pole = Series::t_pow2(grading, 2 * (2 - 2 * g as i32 - n as i32)).scale(&chi);
    let zero_identity = samples.t_at_zero.agrees_with(&at_zero.sub_ref(&pole));
    Ok(QuasiReport {
        genus: g,
        n,
        symmetric: poly.is_symmetric(),
        poly,
        degree_bound: bound as u32,
        held_out,
        chi,
        zero_identity,
    })
}

/// Sample, fit and check in one go.
pub fn quasipoly(genus: u32, n: usize, lmax: u32, spec: &WeightSpec, source: &Source) -> Result<QuasiReport> {
    fit_samples(&sample_tau(genus, n, lmax, spec, source)?)
}

/// Smallest grid bound leaving held-out samples in every parity class.
pub fn default_lmax(genus: u32, n: usize) -> u32 {
    let bound = (3 * genus as i64 - 3 + n as i64).max(0) as u32;
    2 * bound + 3
}

/// Coefficient-wise quasi-polynomiality in one length: every monomial known at all
/// samples is fitted per parity by a polynomial of degree ≤ `degree` in ℓ², and all
/// extra samples must be reproduced. Returns the number of monomials checked.
pub fn check_single_length(samples: &BTreeMap<i64, Series>, degree: usize) -> Result<usize> {
    let common = samples.values().map(Series::order).min().unwrap_or(Order::EXACT);
    let mut monomials = std::collections::BTreeSet::new();
    for v in samples.values() {
        for (m, _) in v.truncate(common).terms() {
            monomials.insert(m.clone());
        }
    }
    for m in &monomials {
        let coeffs: BTreeMap<Vec<i64>, Q> = samples
            .iter()
            .map(|(&l, v)| (vec![l], v.truncate(common).coefficient(m).unwrap_or_else(|_| Q::zero())))
            .collect();
        let by_parity = |p: i64| coeffs.iter().filter(|(k, _)| k[0] % 2 == p).count();
        let side = degree + 1;
        if by_parity(0) < side || by_parity(1) < side {
            return Err(Error::InsufficientSamples(format!("{} even and {} odd samples", by_parity(0), by_parity(1))));
        }
        fit_quasipolynomial(&coeffs, 1, degree)?;
    }
    Ok(monomials.len())
}

/// Canonical form of a key, for callers sampling by hand.
pub fn sample_key(ls: &[i64]) -> Vec<u32> {
    canonical(&ls.iter().map(|&l| l as u32).collect::<Vec<_>>())
}
