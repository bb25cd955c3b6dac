//! Explicit generating functions for maps with tight boundaries.
//!
//! All lengths are actual boundary lengths; half-lengths are used internally only.
//! Terms with a pole in t are combined in the Laurent-capable series ring and the
//! result is checked to be a genuine power series.

use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::Zero;

use crate::disk::{DiskData, TrumpetMatrix};
use crate::error::{Error, Result};
use crate::insertion::build_d;
use crate::poly::{bnk, pk_multi, pk_multi_tilde, MultiPoly};
use crate::rational::{binomial, factorial, q, qf, qi, sign, Q};
use crate::series::{LogSeries, Series};

fn r_pow(data: &DiskData, k: u32) -> Series {
    data.r().pow_u(k).truncate(data.spec().order())
}

fn t_inv(data: &DiskData) -> Series {
    Series::t_pow2(data.grading(), -2)
}

/// R^{d/2−1}R′ for even d, R^{(d−1)/2}S′ for odd d (d ≥ 1).
fn parity_branch(d: u32, data: &DiskData) -> Series {
    if d % 2 == 0 {
        r_pow(data, d / 2 - 1).mul_ref(&data.r_d(1))
    } else {
        r_pow(data, (d - 1) / 2).mul_ref(&data.s_d(1))
    }
}

/// Pairs of pants: three unrooted tight boundaries of lengths ℓ₁, ℓ₂, ℓ₃ (zeros allowed).
pub fn pants(l1: u32, l2: u32, l3: u32, data: &DiskData) -> Result<Series> {
    let sum = l1 + l2 + l3;
    if sum == 0 {
        // R′/R − 1/t, the pole cancels.
        let v = data.r_d(1).div(data.r())?.sub_ref(&t_inv(data));
        return v.expect_power_series("pants with three boundary-vertices");
    }
    Ok(parity_branch(sum, data))
}

/// Pants with the third boundary strictly tight; needs ℓ₁ + ℓ₂ > ℓ₃.
pub fn strict_pants(l1: u32, l2: u32, l3: u32, data: &DiskData) -> Result<Series> {
    if l1 + l2 <= l3 {
        return Err(Error::AssumptionViolated(format!("strict pants need {l1} + {l2} > {l3}")));
    }
    Ok(parity_branch(l1 + l2 - l3, data))
}

/// Pants with the second and third boundaries strictly tight; needs ℓ₁ > ℓ₂ + ℓ₃.
pub fn double_strict(l1: u32, l2: u32, l3: u32, data: &DiskData) -> Result<Series> {
    if l1 <= l2 + l3 {
        return Err(Error::AssumptionViolated(format!("doubly strict pants need {l1} > {l2} + {l3}")));
    }
    Ok(parity_branch(l1 - l2 - l3, data))
}

/// Tight cylinders: R^ℓ/ℓ on the diagonal, ln(R/t) at (0, 0), zero elsewhere.
pub fn cylinder(l1: u32, l2: u32, data: &DiskData) -> Result<Series> {
    let g = data.grading();
    if l1 == 0 && l2 == 0 {
        let ratio = data.r().mul_ref(&t_inv(data));
        return ratio.ln()?.into_series();
    }
    if l1 != l2 {
        return Ok(Series::zero(g, data.spec().order()));
    }
    Ok(r_pow(data, l1).scale(&qf(1, l1 as i64)))
}

fn require_bipartite(data: &DiskData) -> Result<()> {
    if data.spec().is_bipartite() {
        Ok(())
    } else {
        Err(Error::NonBipartiteWeights)
    }
}

/// Rooted (not necessarily tight) boundaries of the given positive lengths, planar,
/// bipartite or quasi-bipartite, with `s` extra t-derivatives for boundary-vertices.
pub fn collet_fusy(lengths: &[u32], s: usize, data: &DiskData) -> Result<Series> {
    require_bipartite(data)?;
    if lengths.is_empty() || lengths.contains(&0) {
        return Err(Error::InvalidIndex(format!("{lengths:?}: lengths must be positive")));
    }
    let odd: Vec<u32> = lengths.iter().copied().filter(|l| l % 2 == 1).collect();
    if odd.len() != 0 && odd.len() != 2 {
        return Err(Error::UnsupportedCase(format!("{} odd boundaries; only 0 or 2 are covered", odd.len())));
    }
    let n = lengths.len();
    let derivs = n as i64 - 2 + s as i64;
    if derivs < -1 {
        return Err(Error::UnsupportedCase(format!("{n} boundaries and {s} vertices")));
    }
    let total: u32 = lengths.iter().sum();
    let big_sum = total / 2;
    // ∏Lᵢ / ΣLᵢ with Lᵢ = ℓᵢ/2.
    let mut c = Q::from(lengths.iter().map(|&l| num_bigint::BigInt::from(l)).product::<num_bigint::BigInt>())
        / qi(num_bigint::BigInt::from(2).pow(n as u32))
        / qf(total as i64, 2);
    for &l in lengths {
        c *= if l % 2 == 0 {
            qi(binomial(l as i64, l as i64 / 2))
        } else {
            q(2) * qi(binomial(l as i64 - 1, (l as i64 - 1) / 2))
        };
    }
    let base = r_pow(data, big_sum).scale(&c);
    if derivs < 0 {
        // A single boundary: no map is without vertices, so the antiderivative vanishes at t = 0.
        return base.integrate_t();
    }
    Ok(base.derive_t_n(derivs as usize))
}

fn halves(lengths: &[u32]) -> Vec<i64> {
    lengths.iter().map(|&l| l as i64 / 2).collect()
}

/// The length-independent parts of the planar formulas at fixed n: the polynomials
/// P_k, P̃_k and the series k!·b_{n−2,k+1}. Evaluating many keys through one
/// instance avoids rebuilding them.
pub struct PlanarTight<'a> {
    data: &'a DiskData,
    n: usize,
    p: Vec<MultiPoly<Q>>,
    p_tilde: Vec<MultiPoly<Q>>,
    b: Vec<Series>,
    r_pows: RefCell<HashMap<u32, Series>>,
}

impl<'a> PlanarTight<'a> {
    pub fn new(n: usize, data: &'a DiskData) -> Result<PlanarTight<'a>> {
        require_bipartite(data)?;
        if n < 3 {
            return Err(Error::UnsupportedCase(format!("general formula needs n ≥ 3, got {n}")));
        }
        let derivs = data.r_derivs(n - 2);
        let b = (0..=n - 3)
            .map(|k| Ok(bnk(n - 2, k + 1, &derivs, data.r())?.scale(&qi(factorial(k as u64)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(PlanarTight {
            data,
            n,
            p: (0..=n - 3).map(|k| pk_multi(k, n)).collect(),
            p_tilde: (0..=n - 3).map(|k| pk_multi_tilde(k, n)).collect(),
            b,
            r_pows: RefCell::new(HashMap::new()),
        })
    }

    fn r_pow(&self, k: u32) -> Series {
        self.r_pows.borrow_mut().entry(k).or_insert_with(|| r_pow(self.data, k)).clone()
    }

    fn check_len(&self, lengths: &[u32]) -> Result<()> {
        if lengths.len() != self.n {
            return Err(Error::InvalidIndex(format!("{lengths:?}: expected {} lengths", self.n)));
        }
        Ok(())
    }

    fn combine(&self, polys: &[MultiPoly<Q>], x: &[Q]) -> Series {
        let mut acc = Series::zero(self.data.grading(), self.data.spec().order());
        for (p, b) in polys.iter().zip(&self.b) {
            let c = p.eval(x);
            if !c.is_zero() {
                acc = acc.add_ref(&b.scale(&c));
            }
        }
        acc
    }

    /// Bipartite tight boundaries of even lengths (zeros allowed).
    pub fn even(&self, lengths: &[u32]) -> Result<Series> {
        self.check_len(lengths)?;
        if lengths.iter().any(|l| l % 2 == 1) {
            return Err(Error::InvalidIndex(format!("{lengths:?}: lengths must be even")));
        }
        let h = halves(lengths);
        let sq: Vec<Q> = h.iter().map(|l| q(l * l)).collect();
        let sum: i64 = h.iter().sum();
        let mut out = self.r_pow(sum as u32).mul_ref(&self.combine(&self.p, &sq));
        if sum == 0 {
            let n = self.n;
            let c = sign(n as i64) * qi(factorial(n as u64 - 3));
            out = out.add_ref(&Series::t_pow2(self.data.grading(), -2 * (n as i32 - 2)).scale(&c));
        }
        out.expect_power_series("bipartite tight boundaries")
    }

    /// Quasi-bipartite variant: exactly two odd lengths.
    pub fn two_odd(&self, lengths: &[u32]) -> Result<Series> {
        self.check_len(lengths)?;
        let (odd, even): (Vec<u32>, Vec<u32>) = lengths.iter().partition(|&&l| l % 2 == 1);
        if odd.len() != 2 {
            return Err(Error::InvalidIndex(format!("{lengths:?}: need exactly two odd lengths")));
        }
        // Squares of half-lengths, odd slots first.
        let sq: Vec<Q> = odd.iter().chain(even.iter()).map(|&l| qf((l * l) as i64, 4)).collect();
        let total: u32 = lengths.iter().sum();
        self.r_pow(total / 2)
            .mul_ref(&self.combine(&self.p_tilde, &sq))
            .expect_power_series("quasi-bipartite tight boundaries")
    }

    /// Any planar key under bipartite weights: zero for an odd number of odd lengths,
    /// `None` for four or more.
    pub fn eval(&self, lengths: &[u32]) -> Option<Result<Series>> {
        match lengths.iter().filter(|&&l| l % 2 == 1).count() {
            0 => Some(self.even(lengths)),
            2 => Some(self.two_odd(lengths)),
            c if c % 2 == 1 => Some(Ok(Series::zero(self.data.grading(), self.data.spec().order()))),
            _ => None,
        }
    }
}

/// Bipartite tight boundaries of even lengths (zeros allowed), n ≥ 3.
pub fn tgen(lengths: &[u32], data: &DiskData) -> Result<Series> {
    PlanarTight::new(lengths.len(), data)?.even(lengths)
}

/// Quasi-bipartite variant: exactly two odd lengths, any number of even ones, n ≥ 3.
pub fn tgen_quasi(lengths: &[u32], data: &DiskData) -> Result<Series> {
    PlanarTight::new(lengths.len(), data)?.two_odd(lengths)
}

/// (R′/R)² − (S′/√R)², which is t⁻² times a unit.
fn genus1_argument(data: &DiskData) -> Result<Series> {
    let x = data.r_d(1).div(data.r())?;
    let s1 = data.s_d(1);
    let y2 = s1.mul_ref(&s1).div(data.r())?;
    Ok(x.mul_ref(&x).sub_ref(&y2))
}

/// Maps of genus one without boundary: (1/24)ln((R′/R)² − (S′/√R)²) + ln(t)/12.
pub fn genus1_f(data: &DiskData) -> Result<Series> {
    let log = genus1_argument(data)?.ln()?.scale(&qf(1, 24));
    let ln_t = LogSeries::new(qf(1, 12), Series::zero(data.grading(), data.spec().order()));
    log.add(&ln_t).into_series()
}

/// Bipartite genus one without boundary: ln(tR′/R)/12.
pub fn genus1_f_bipartite(data: &DiskData) -> Result<Series> {
    require_bipartite(data)?;
    let arg = data.r_d(1).div(data.r())?.mul_t_pow2(2);
    Ok(arg.ln()?.into_series()?.scale(&qf(1, 12)))
}

/// Genus one with one tight boundary of length ℓ, through the insertion operator D_ℓ
/// acting on R′/R and S′/√R. The weights t_M for M ≤ ℓ must be active.
pub fn genus1_t(l: u32, data: &DiskData, matrix: &TrumpetMatrix) -> Result<Series> {
    let d = build_d(l, matrix)?;
    let x = data.r_d(1).div(data.r())?;
    let y = data.s_d(1).div(data.sqrt_r())?;
    let num = x.mul_ref(&d.apply(&x, data)?).sub_ref(&y.mul_ref(&d.apply(&y, data)?));
    let den = genus1_argument(data)?.scale_int(12);
    let mut out = num.div(&den)?;
    if l == 0 {
        out = out.add_ref(&t_inv(data).scale(&qf(1, 12)));
    }
    out.expect_power_series("genus one, one boundary")
}

/// Bipartite genus one with one tight boundary of even length ℓ:
/// (R^h/12)((h² − 1)R′/R + R″/R′) + δ_{h,0}/(12t) with h = ℓ/2.
pub fn genus1_t_bipartite(l: u32, data: &DiskData) -> Result<Series> {
    require_bipartite(data)?;
    if l % 2 == 1 {
        return Err(Error::InvalidIndex(format!("length {l} must be even")));
    }
    let h = (l / 2) as i64;
    let r1 = data.r_d(1);
    let inner = r1
        .div(data.r())?
        .scale(&q(h * h - 1))
        .add_ref(&data.r_d(2).div(&r1)?);
    let mut out = r_pow(data, h as u32).mul_ref(&inner).scale(&qf(1, 12));
    if h == 0 {
        out = out.add_ref(&t_inv(data).scale(&qf(1, 12)));
    }
    out.expect_power_series("bipartite genus one, one boundary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::{solve_rs, trumpet_matrix, WeightSpec};
    use crate::rational::q;
    use crate::series::{Grading, Order};
    use crate::table::{t_to_f, CoefficientTable, Provenance, TableKind};

    fn data(active: &[u16], n: i64) -> DiskData {
        solve_rs(&WeightSpec::faces(active.iter().copied(), n).unwrap()).unwrap()
    }

    #[test]
    fn pants_values() {
        let d = data(&[1, 2, 3, 4], 4);
        let (r, r1, s1) = (d.r(), d.r_d(1), d.s_d(1));
        assert!(pants(2, 2, 2, &d).unwrap().agrees_with(&r.mul_ref(r).mul_ref(&r1)));
        assert!(pants(1, 1, 0, &d).unwrap().agrees_with(&r1));
        assert!(pants(1, 0, 0, &d).unwrap().agrees_with(&s1));
        assert!(pants(1, 1, 1, &d).unwrap().agrees_with(&r.mul_ref(&s1)));
        // Symmetric in its arguments.
        assert_eq!(pants(3, 1, 2, &d).unwrap(), pants(2, 3, 1, &d).unwrap());
        let bare = data(&[], 4);
        assert!(pants(0, 0, 0, &bare).unwrap().is_zero());
        // With faces, R′/R − 1/t = ∂_t ln(R/t).
        let log = cylinder(0, 0, &d).unwrap().derive_t();
        assert!(pants(0, 0, 0, &d).unwrap().agrees_with(&log));
        assert!(!log.is_zero());
    }

    #[test]
    fn strict_pants_values() {
        let d = data(&[1, 2, 3], 4);
        assert!(strict_pants(3, 0, 1, &d).unwrap().agrees_with(&d.r_d(1)));
        assert!(strict_pants(2, 0, 1, &d).unwrap().agrees_with(&d.s_d(1)));
        assert!(matches!(strict_pants(1, 1, 2, &d), Err(Error::AssumptionViolated(_))));
        assert!(matches!(double_strict(3, 1, 2, &d), Err(Error::AssumptionViolated(_))));
        assert!(double_strict(5, 1, 2, &d).unwrap().agrees_with(&d.r_d(1)));
        // T_{2a,2b,2c} = R^{2c} T_{2a,2b|2c} for a + b > c.
        for (a, b, c) in [(2u32, 2, 1), (3, 1, 2), (4, 0, 3), (3, 2, 4)] {
            let lhs = pants(a, b, c, &d).unwrap();
            let rhs = r_pow(&d, c).mul_ref(&strict_pants(a, b, c, &d).unwrap());
            assert!(lhs.agrees_with(&rhs), "({a},{b}|{c})");
        }
    }

    #[test]
    fn cylinder_values() {
        let d = data(&[2, 3], 4);
        assert!(cylinder(3, 3, &d).unwrap().agrees_with(&r_pow(&d, 3).scale(&qf(1, 3))));
        assert!(cylinder(2, 4, &d).unwrap().is_zero());
        assert!(cylinder(0, 0, &data(&[], 4)).unwrap().is_zero());
    }

    #[test]
    fn collet_fusy_values() {
        let d = data(&[2, 4], 4);
        let r = d.r();
        assert!(collet_fusy(&[2, 2], 0, &d).unwrap().agrees_with(&r.mul_ref(r).scale_int(2)));
        let r3 = r_pow(&d, 2).mul_ref(&d.r_d(1)).scale_int(8);
        assert!(collet_fusy(&[2, 2, 2], 0, &d).unwrap().agrees_with(&r3));
        // One boundary: the single edge is the only map without inner faces, weight t².
        let f2 = collet_fusy(&[2], 0, &d).unwrap();
        assert!(f2.derive_t().agrees_with(&collet_fusy(&[2], 1, &d).unwrap()));
        assert!(f2.restrict_faces(&|_| false).agrees_with(&Series::t_pow2(d.grading(), 4)));
        assert!(matches!(collet_fusy(&[], 0, &d), Err(Error::InvalidIndex(_))));
        assert_eq!(collet_fusy(&[2, 2], 0, &data(&[3], 3)), Err(Error::NonBipartiteWeights));
        assert!(collet_fusy(&[1, 2], 0, &d).is_err());
        // Two boundaries agree with trumpets glued on the cylinder.
        let m = trumpet_matrix(6, &d).unwrap();
        let mut t = CoefficientTable::new(TableKind::T, 0, 2);
        for k in CoefficientTable::full_keys(2, 0, 6) {
            t.insert(&k, cylinder(k[0], k[1], &d).unwrap(), Provenance::ClosedForm).unwrap();
        }
        let f = t_to_f(&t, &m).unwrap();
        for (a, b) in [(2u32, 2u32), (4, 2), (6, 4), (3, 1), (5, 3)] {
            assert!(collet_fusy(&[a, b], 0, &d).unwrap().agrees_with(f.get(&[a, b]).unwrap()), "({a},{b})");
        }
    }

    #[test]
    fn collet_fusy_three_boundaries_match_pants() {
        let d = data(&[2, 4, 6], 4);
        let m = trumpet_matrix(6, &d).unwrap();
        let mut t = CoefficientTable::new(TableKind::T, 0, 3);
        for k in CoefficientTable::full_keys(3, 0, 6) {
            t.insert(&k, pants(k[0], k[1], k[2], &d).unwrap(), Provenance::ClosedForm).unwrap();
        }
        let f = t_to_f(&t, &m).unwrap();
        for key in [[2u32, 2, 2], [4, 2, 2], [6, 4, 2], [3, 3, 2], [5, 1, 4]] {
            assert!(collet_fusy(&key, 0, &d).unwrap().agrees_with(f.get(&key).unwrap()), "{key:?}");
        }
    }

    #[test]
    fn tgen_small_n() {
        let d = data(&[2, 4], 5);
        // n = 3 is the pants formula.
        for key in [[2u32, 2, 2], [4, 2, 0], [0, 0, 0], [6, 0, 0]] {
            assert!(tgen(&key, &d).unwrap().agrees_with(&pants(key[0], key[1], key[2], &d).unwrap()), "{key:?}");
        }
        // n = 4: R^Σ((Σℓ² − 1)R′²/R² + R″/R) + δ/t².
        let (r, r1, r2) = (d.r(), d.r_d(1), d.r_d(2));
        let rinv = r.recip().unwrap();
        for key in [[2u32, 2, 2, 2], [4, 2, 0, 0], [0, 0, 0, 0], [6, 4, 2, 2]] {
            let h = halves(&key);
            let s2: i64 = h.iter().map(|x| x * x).sum();
            let mut want = r1
                .mul_ref(&r1)
                .mul_ref(&rinv)
                .mul_ref(&rinv)
                .scale(&q(s2 - 1))
                .add_ref(&r2.mul_ref(&rinv))
                .mul_ref(&r_pow(&d, h.iter().sum::<i64>() as u32));
            if h.iter().all(|&x| x == 0) {
                want = want.add_ref(&Series::t_pow2(Grading::Faces, -4));
            }
            assert!(tgen(&key, &d).unwrap().agrees_with(&want), "{key:?}");
        }
    }

    #[test]
    fn tgen_without_faces() {
        // R = t: (n−3)! p_{n−3}(ℓ/2) t^{Σℓ/2 − n + 2}, zero when all lengths vanish.
        let d = data(&[], 6);
        for key in [vec![2u32, 2, 2, 2], vec![4, 2, 0, 0, 2], vec![0, 0, 0, 0, 0], vec![2, 0, 0, 0, 0]] {
            let n = key.len();
            let h = halves(&key);
            let pk = pk_multi(n - 3, n).eval_int(&h.iter().map(|x| x * x).collect::<Vec<_>>());
            let sum: i64 = h.iter().sum();
            let got = tgen(&key, &d).unwrap();
            if sum == 0 {
                assert!(got.is_zero());
            } else {
                let want = Series::t_pow2(Grading::Faces, 2 * (sum as i32 - n as i32 + 2))
                    .scale(&(pk * qi(factorial(n as u64 - 3))));
                assert!(got.agrees_with(&want), "{key:?}");
            }
        }
    }

    #[test]
    fn tgen_quasi_four_boundaries() {
        // The constant −1 of the four-boundary formula becomes −1/2.
        let d = data(&[2, 4], 5);
        let (r1, r2) = (d.r_d(1), d.r_d(2));
        let rinv = d.r().recip().unwrap();
        for key in [[1u32, 1, 2, 2], [3, 1, 0, 0], [1, 5, 4, 2]] {
            let s2: Q = key.iter().map(|&l| qf((l * l) as i64, 4)).sum();
            let want = r1
                .mul_ref(&r1)
                .mul_ref(&rinv)
                .mul_ref(&rinv)
                .scale(&(s2 - qf(1, 2)))
                .add_ref(&r2.mul_ref(&rinv))
                .mul_ref(&r_pow(&d, key.iter().sum::<u32>() / 2));
            assert!(tgen_quasi(&key, &d).unwrap().agrees_with(&want), "{key:?}");
        }
        // Three boundaries: the odd pants branch.
        assert!(tgen_quasi(&[1, 1, 0], &d).unwrap().agrees_with(&d.r_d(1)));
        assert!(tgen_quasi(&[2, 2, 2], &d).is_err());
    }

    #[test]
    fn genus1_values() {
        assert!(genus1_f(&data(&[], 5)).unwrap().is_zero());
        for active in [vec![4u16], vec![2, 4]] {
            let d = data(&active, 5);
            let f = genus1_f(&d).unwrap();
            assert!(f.agrees_with(&genus1_f_bipartite(&d).unwrap()));
            assert!(!f.is_zero());
        }
        // t4 alone: the one-vertex torus with a single quadrangle has 4 rootings and
        // one rooted map, so it is weighted 1/4.
        let d = data(&[4], 3);
        let f = genus1_f(&d).unwrap();
        let m = crate::series::Monomial::new(2, [(4, 1)]);
        assert_eq!(f.coefficient(&m).unwrap(), qf(1, 4));
        let nb = genus1_f(&data(&[3], 4)).unwrap();
        assert!(!nb.is_zero());
        assert!(genus1_f_bipartite(&data(&[3], 4)).is_err());
    }

    #[test]
    fn genus1_boundary_matches_bipartite_form() {
        let d = data(&[2, 4, 6], 4);
        let m = trumpet_matrix(6, &d).unwrap();
        for l in [0u32, 2, 4, 6] {
            let a = genus1_t(l, &d, &m).unwrap();
            let b = genus1_t_bipartite(l, &d).unwrap();
            assert!(a.agrees_with(&b), "ℓ = {l}");
        }
        // T⁽¹⁾₀ = ∂_t F⁽¹⁾.
        let f = genus1_f(&d).unwrap();
        assert!(genus1_t(0, &d, &m).unwrap().agrees_with(&f.derive_t()));
        assert_eq!(genus1_t(2, &data(&[4], 4), &trumpet_matrix(4, &data(&[4], 4)).unwrap()), Err(Error::MissingWeight(2)));
    }

    #[test]
    fn orders_are_recorded() {
        let d = solve_rs(&WeightSpec::total([4], 6).unwrap()).unwrap();
        let p = pants(2, 2, 2, &d).unwrap();
        assert!(p.order() <= Order::integer(6));
        assert!(p.is_power_series());
    }
}
