//! Spectral-curve coefficients, moments, the polynomials Q_h, the inverse system
//! Z(U(t)) = t, the polynomials P^{(a,b)} and the genus-one series from moments.

mod trees;

pub use trees::{inverse_tree_differential, invert_2x2, plane_trees, reference_systems, tree_formula_agrees, PlaneTree, PolyMap};

use num_traits::{One, Zero};
use serde_json::json;

use crate::disk::DiskData;
use crate::error::{Error, Result};
use crate::poly::{pk_uni, Family, MultiPoly, Ring, UniPoly};
use crate::rational::{binomial, factorial, falling, multinomial, q, qf, qi, sign, Q};
use crate::series::{LogSeries, Series};

fn sqrt_r_pow(data: &DiskData, p: i64) -> Result<Series> {
    if p >= 0 {
        Ok(data.sqrt_r().pow_u(p as u32).truncate(data.spec().order()))
    } else {
        data.sqrt_r().pow_i(p)
    }
}

/// u_0, …, u_kmax. Beyond the largest active degree only the δ-terms survive.
pub fn compute_uk(data: &DiskData, kmax: usize) -> Result<Vec<Series>> {
    let spec = data.spec();
    let order = spec.order();
    let s_pows: Vec<Series> = {
        let mut v = vec![Series::one(data.grading(), order)];
        for _ in 0..spec.max_degree() {
            let next = v.last().unwrap().mul_ref(data.s());
            v.push(next);
        }
        v
    };
    (0..=kmax as i64)
        .map(|k| {
            let mut u = match k {
                0 => data.s().clone(),
                1 => data.sqrt_r().clone(),
                _ => Series::zero(data.grading(), order),
            };
            for &i in spec.active().iter().filter(|&&i| i as i64 >= k + 1) {
                let i = i as i64;
                let mut inner = Series::zero(data.grading(), order);
                for j in k..=(i + k - 1) / 2 {
                    let c = multinomial(&[j, j - k, i - 1 + k - 2 * j]);
                    let term = sqrt_r_pow(data, 2 * j - k)?.mul_ref(&s_pows[(i - 1 + k - 2 * j) as usize]);
                    inner = inner.add_ref(&term.scale(&qi(c)));
                }
                u = u.sub_ref(&inner.mul_ref(&spec.tk(i as u16)));
            }
            Ok(u)
        })
        .collect()
}

/// The coefficients u_k together with M_{±,0} and the renormalized moments M̄_{±,h}.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentData {
    u: Vec<Series>,
    m0: [Series; 2],
    mbar: [Vec<Series>; 2],
}

fn side(plus: bool) -> usize {
    if plus {
        0
    } else {
        1
    }
}

fn pm(plus: bool, e: i64) -> Q {
    if plus {
        Q::one()
    } else {
        sign(e)
    }
}

impl MomentData {
    pub fn u(&self) -> &[Series] {
        &self.u
    }

    /// M_{+,0} or M_{−,0}.
    pub fn m0(&self, plus: bool) -> &Series {
        &self.m0[side(plus)]
    }

    /// M̄_{±,h} for 1 ≤ h ≤ hmax.
    pub fn mbar(&self, plus: bool, h: usize) -> Result<&Series> {
        if h == 0 {
            return Err(Error::InvalidIndex("renormalized moments start at h = 1".into()));
        }
        self.mbar[side(plus)]
            .get(h - 1)
            .ok_or_else(|| Error::InvalidIndex(format!("h = {h} beyond the computed range")))
    }

    pub fn hmax(&self) -> usize {
        self.mbar[0].len()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let list = |v: &[Series]| v.iter().map(|s| s.to_json_value()).collect::<Vec<_>>();
        json!({
            "u": list(&self.u),
            "M0": { "plus": self.m0[0].to_json_value(), "minus": self.m0[1].to_json_value() },
            "Mbar": { "plus": list(&self.mbar[0]), "minus": list(&self.mbar[1]) },
        })
    }
}

/// M_{±,0} = −y′(±1)/√R with y′(±1) = −Σ k u_k (±1)^{k−1}, and
/// M̄_{±,h} = −Σ_{k ≥ h+1} (±1)^{k+h+1} u_k binom(k+h, 2h+1).
pub fn moments(data: &DiskData, hmax: usize) -> Result<MomentData> {
    let kmax = (data.spec().max_degree() as usize).max(2).max(hmax + 1);
    let u = compute_uk(data, kmax)?;
    let g = data.grading();
    let order = data.spec().order();
    let mut m0 = Vec::new();
    let mut mbar = Vec::new();
    for plus in [true, false] {
        let yp = u
            .iter()
            .enumerate()
            .skip(1)
            .fold(Series::zero(g, order), |acc, (k, uk)| acc.add_ref(&uk.scale(&(q(k as i64) * pm(plus, k as i64 - 1)))));
        m0.push(yp.div(data.sqrt_r())?);
        let row = (1..=hmax)
            .map(|h| {
                u.iter().enumerate().skip(h + 1).fold(Series::zero(g, order), |acc, (k, uk)| {
                    let c = pm(plus, (k + h + 1) as i64) * qi(binomial((k + h) as i64, 2 * h as i64 + 1));
                    acc.sub_ref(&uk.scale(&c))
                })
            })
            .collect();
        mbar.push(row);
    }
    let [mp, mm]: [Series; 2] = m0.try_into().expect("two sides");
    let [bp, bm]: [Vec<Series>; 2] = mbar.try_into().expect("two sides");
    Ok(MomentData { u, m0: [mp, mm], mbar: [bp, bm] })
}

/// 1/(R·M_{±,0}) and R′/R ± S′/√R; the two agree.
pub fn moment_identity(md: &MomentData, data: &DiskData, plus: bool) -> Result<(Series, Series)> {
    let lhs = data.r().mul_ref(md.m0(plus)).recip()?;
    let x = data.r_d(1).div(data.r())?;
    let y = data.s_d(1).div(data.sqrt_r())?;
    let rhs = if plus { x.add_ref(&y) } else { x.sub_ref(&y) };
    Ok((lhs, rhs))
}

/// Genus one without boundary: −(1/24) ln(R² M_{+,0} M_{−,0} / t²).
pub fn genus1_from_moments(md: &MomentData, data: &DiskData) -> Result<Series> {
    let arg = data.r().mul_ref(data.r()).mul_ref(md.m0(true)).mul_ref(md.m0(false)).mul_t_pow2(-4);
    let log: LogSeries = arg.ln()?;
    log.scale(&qf(-1, 24)).into_series()
}

/// Coefficients of `target` (a polynomial in m²) in a triangular basis indexed by degree.
fn expand_in_basis(target: &UniPoly, basis: &[UniPoly]) -> Vec<Q> {
    let mut rest = target.clone();
    let mut alpha = vec![Q::zero(); basis.len()];
    for r in (0..basis.len()).rev() {
        let lead = basis[r].coeff(r);
        let c = rest.coeff(r) / lead;
        rest = rest.sub(&basis[r].scale(&c));
        alpha[r] = c;
    }
    debug_assert!(rest.is_zero());
    alpha
}

/// (h!²/(2h+1)!)·x·Σ_r α_r binom(x − 1, r) as a polynomial in x.
fn q_from_alpha(h: usize, alpha: &[Q]) -> UniPoly {
    let f = qi(factorial(h as u64));
    let pre = &f * &f / qi(factorial(2 * h as u64 + 1));
    let mut sum = UniPoly::zero();
    for (r, a) in alpha.iter().enumerate() {
        let mut b = UniPoly::constant(Q::one() / qi(factorial(r as u64)));
        for i in 1..=r as i64 {
            b = b.mul_linear(&q(i));
        }
        sum = sum.add(&b.scale(a));
    }
    sum.mul_linear(&Q::zero()).scale(&pre)
}

/// (Q_h^{[0]}, Q_h^{[1]}) such that
/// Σ_k binom(k+h, 2h+1) binom(j−1, (j−1+k)/2) = binom(j−1, (j−ε)/2) Q_h^{[ε]}((j−ε)/2),
/// the sum running over k ≥ 0 with k + ε odd and ε the parity of j.
pub fn qh_polynomials(h: usize) -> (UniPoly, UniPoly) {
    // p_h(2m) as a polynomial in m².
    let target = pk_uni(h, Family::P).compose_affine(&q(4), &Q::zero());
    let tilde: Vec<UniPoly> = (0..=h).map(|r| pk_uni(r, Family::PTilde)).collect();
    let plain: Vec<UniPoly> = (0..=h).map(|r| pk_uni(r, Family::P)).collect();
    let q0 = q_from_alpha(h, &expand_in_basis(&target, &tilde));
    let q1 = q_from_alpha(h, &expand_in_basis(&target, &plain));
    (q0, q1)
}

/// A monomial c·r^a·s^l of the inverse system.
#[derive(Clone, Debug, PartialEq)]
pub struct ZTerm {
    pub r_exp: u32,
    pub s_exp: u32,
    pub coef: Series,
}

/// Z = (Z₀, Z₁) with Z(R, S) = (t, t₁).
#[derive(Clone, Debug, PartialEq)]
pub struct ZSystem {
    parts: [Vec<ZTerm>; 2],
}

/// Z₀(r,s) = r − Σ_{i≥2} t_i Σ_{l ≡ i} binom(i−1; (i−l)/2, (i−l)/2 − 1, l) r^{(i−l)/2} s^l,
/// Z₁(r,s) = s − Σ_{i≥2} t_i Σ_{l ≡ i+1} binom(i−1; (i−l−1)/2, (i−l−1)/2, l) r^{(i−l−1)/2} s^l.
pub fn z_system(data: &DiskData) -> ZSystem {
    let spec = data.spec();
    let one = Series::one(data.grading(), spec.order());
    let mut parts = [
        vec![ZTerm { r_exp: 1, s_exp: 0, coef: one.clone() }],
        vec![ZTerm { r_exp: 0, s_exp: 1, coef: one }],
    ];
    for &i in spec.active().iter().filter(|&&i| i >= 2) {
        let i = i as i64;
        let ti = spec.tk(i as u16);
        for (eps, part) in parts.iter_mut().enumerate() {
            let eps = eps as i64;
            let mut l = (i + eps) % 2;
            while l <= i - 1 {
                let a = (i - l - eps) / 2;
                let b = (i - l + eps - 2) / 2;
                let c = multinomial(&[a, b, l]);
                if !c.is_zero() {
                    part.push(ZTerm { r_exp: a as u32, s_exp: l as u32, coef: ti.scale(&-qi(c)) });
                }
                l += 2;
            }
        }
    }
    ZSystem { parts }
}

impl ZSystem {
    pub fn terms(&self, eps: usize) -> &[ZTerm] {
        &self.parts[eps]
    }

    /// Σ c·w(a)·R^a·S^l over the terms of Z_ε, for a weight w on the r-exponent.
    fn eval_weighted(&self, eps: usize, data: &DiskData, w: &dyn Fn(u32) -> Q) -> Series {
        let order = data.spec().order();
        self.parts[eps].iter().fold(Series::zero(data.grading(), order), |acc, t| {
            let c = w(t.r_exp);
            if c.is_zero() {
                return acc;
            }
            let mono = data.r().pow_u(t.r_exp).mul_ref(&data.s().pow_u(t.s_exp)).truncate(order);
            acc.add_ref(&mono.mul_ref(&t.coef).scale(&c))
        })
    }

    /// Z_ε(R, S).
    pub fn eval(&self, eps: usize, data: &DiskData) -> Series {
        self.eval_weighted(eps, data, &|_| Q::one())
    }

    /// ∂^k Z_ε/∂r^k at (R, S).
    pub fn derive_r_at(&self, eps: usize, k: u32, data: &DiskData) -> Series {
        let order = data.spec().order();
        let mut acc = Series::zero(data.grading(), order);
        for t in self.parts[eps].iter().filter(|t| t.r_exp >= k) {
            let c = qi(falling(t.r_exp as i64, k));
            let mono = data.r().pow_u(t.r_exp - k).mul_ref(&data.s().pow_u(t.s_exp)).truncate(order);
            acc = acc.add_ref(&mono.mul_ref(&t.coef).scale(&c));
        }
        acc
    }

    /// Q(r∂_r) Z_ε evaluated at (R, S).
    pub fn apply_euler(&self, eps: usize, p: &UniPoly, data: &DiskData) -> Series {
        self.eval_weighted(eps, data, &|a| p.eval(&q(a as i64)))
    }
}

/// M̄_{±,h} through (±1)^h M̄_{±,h} = −Σ_ε (±1)^ε R^{(ε−1)/2} Q_h^{[ε]}(r∂_r) Z_ε |_{(R,S)}.
pub fn moment_via_operator(h: usize, plus: bool, z: &ZSystem, data: &DiskData) -> Result<Series> {
    if h == 0 {
        return Err(Error::InvalidIndex("the operator route needs h ≥ 1".into()));
    }
    let (q0, q1) = qh_polynomials(h);
    let e0 = z.apply_euler(0, &q0, data).div(data.sqrt_r())?;
    let e1 = z.apply_euler(1, &q1, data).scale(&pm(plus, 1));
    Ok(e0.add_ref(&e1).scale(&-pm(plus, h as i64)))
}

/// Compare both routes for every h ≤ hmax; the first disagreement is reported.
pub fn check_moment_routes(md: &MomentData, z: &ZSystem, data: &DiskData) -> Result<()> {
    for h in 1..=md.hmax() {
        for plus in [true, false] {
            if !moment_via_operator(h, plus, z, data)?.agrees_with(md.mbar(plus, h)?) {
                return Err(Error::MomentMismatch(h as u32));
            }
        }
    }
    Ok(())
}

/// Variable layout of P^{(a,b)}: x_k at k − 1 and y_k at width + k − 1, for 1 ≤ k ≤ width.
pub fn pab_index(width: usize, k: usize, is_y: bool) -> usize {
    if is_y {
        width + k - 1
    } else {
        k - 1
    }
}

/// P^{(a,b)} in 2·width variables, width = max(a + b, 1). Defined for b ≥ 0, and for
/// b = −1 when a ≥ 2 (P^{(a,−1)} = y_{a−1}).
pub fn pab_polynomial(a: usize, b: i64) -> Result<MultiPoly<Q>> {
    let width = ((a as i64 + b).max(1)) as usize;
    let n = 2 * width;
    let x = |k: usize| if k == 0 { MultiPoly::constant(n, Q::one()) } else { MultiPoly::var(n, pab_index(width, k, false)) };
    let y = |k: usize| MultiPoly::var(n, pab_index(width, k, true));
    if b < -1 || (b == -1 && a < 2) {
        return Err(Error::InvalidIndex(format!("P^({a},{b}) is not defined")));
    }
    if b == -1 {
        return Ok(y(a - 1));
    }
    let mut p = x(a);
    for bb in 0..b as usize {
        let mut next = p.mul(&y(1)).scale(&(qf(bb as i64, 2) + q(1)));
        for k in 1..=a + bb {
            let dx = p.derive(pab_index(width, k, false));
            if !dx.is_zero() {
                let mut f = MultiPoly::zero(n);
                for i in 0..k {
                    f = f.add(&x(i).mul(&y(k + 1 - i)).scale(&qi(binomial(k as i64, i as i64))));
                }
                next = next.add(&f.mul(&dx));
            }
            let dy = p.derive(pab_index(width, k, true));
            if !dy.is_zero() {
                let f = x(k + 1).sub(&y(1).mul(&y(k)).scale(&qf(1, 2)));
                next = next.add(&f.mul(&dy));
            }
        }
        p = next;
    }
    Ok(p)
}

/// Weighted degree of P^{(a,b)} with x_k and y_k of weight k, or `None` if it is not homogeneous.
pub fn pab_weight(p: &MultiPoly<Q>, width: usize) -> Option<u32> {
    let mut w = None;
    for (e, _) in p.terms() {
        let d: u32 = (0..2 * width).map(|i| e[i] * ((i % width) as u32 + 1)).sum();
        match w {
            None => w = Some(d),
            Some(v) if v != d => return None,
            _ => {}
        }
    }
    w.or(Some(0))
}

/// The ratios R^{(k)}/R and S^{(k)}/√R for 1 ≤ k ≤ width, laid out as in `pab_index`.
pub fn pab_arguments(data: &DiskData, width: usize) -> Result<Vec<Series>> {
    let mut v = Vec::with_capacity(2 * width);
    for k in 1..=width {
        v.push(data.r_d(k).div(data.r())?);
    }
    for k in 1..=width {
        v.push(data.s_d(k).div(data.sqrt_r())?);
    }
    Ok(v)
}

/// (d_t U)^{-1}_{i,j} = R^{−1−i/2+j/2} 𝒟(i,j) / ((R′/R)² − (S′/√R)²), with 𝒟 = R′/R for i + j
/// even and −S′/√R otherwise; U = (R, S), t = (t, t₁).
pub fn inverse_jacobian(data: &DiskData) -> Result<[[Series; 2]; 2]> {
    let x = data.r_d(1).div(data.r())?;
    let y = data.s_d(1).div(data.sqrt_r())?;
    let den = x.mul_ref(&x).sub_ref(&y.mul_ref(&y));
    let den_inv = den.recip().map_err(|_| Error::SingularDifferential)?;
    let entry = |i: i64, j: i64| -> Result<Series> {
        let d = if (i + j) % 2 == 0 { x.clone() } else { y.neg_ref() };
        Ok(sqrt_r_pow(data, -2 - i + j)?.mul_ref(&d).mul_ref(&den_inv))
    };
    Ok([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
}

#[cfg(test)]
mod tests;
