use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{MultiPoly, UniPoly};
use crate::error::{Error, Result};
use crate::rational::{bernoulli, factorial, q, qf, qi, sign, Q};

/// The three univariate families, all written in the variable x = ℓ².
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// ∏_{i=1}^k (ℓ² − i²) / (k!)²
    P,
    /// ∏_{i=0}^{k−1} (ℓ² − i²) / (k!)²
    Q,
    /// ∏_{i=1}^k (ℓ² − (i − ½)²) / (k!)²
    PTilde,
}

/// Univariate p_k, q_k or p̃_k as a polynomial in ℓ².
pub fn pk_uni(k: usize, family: Family) -> UniPoly {
    let roots: Vec<Q> = match family {
        Family::P => (1..=k as i64).map(|i| q(i * i)).collect(),
        Family::Q => (0..k as i64).map(|i| q(i * i)).collect(),
        Family::PTilde => (1..=k as i64).map(|i| qf((2 * i - 1) * (2 * i - 1), 4)).collect(),
    };
    let f = qi(factorial(k as u64));
    let norm = Q::one() / (&f * &f);
    roots.iter().fold(UniPoly::constant(Q::one()), |acc, r| acc.mul_linear(r)).scale(&norm)
}

fn convolve(first: &[Family], rest: Family, k: usize, n: usize) -> MultiPoly<Q> {
    // partial[j] = Σ over compositions of j into the variables seen so far.
    let family_of = |i: usize| if i < first.len() { first[i] } else { rest };
    let mut partial: Vec<MultiPoly<Q>> = (0..=k).map(|j| pk_uni(j, family_of(0)).lift(n, 0)).collect();
    for var in 1..n {
        let fam: Vec<MultiPoly<Q>> = (0..=k).map(|j| pk_uni(j, family_of(var)).lift(n, var)).collect();
        partial = (0..=k)
            .map(|j| (0..=j).fold(MultiPoly::zero(n), |acc, a| acc.add(&partial[a].mul(&fam[j - a]))))
            .collect();
    }
    partial.swap_remove(k)
}

/// p_k(ℓ_1, …, ℓ_n) = Σ p_{k_1}(ℓ_1) q_{k_2}(ℓ_2) ⋯ q_{k_n}(ℓ_n), in the squares ℓ_i².
pub fn pk_multi(k: usize, n: usize) -> MultiPoly<Q> {
    assert!(n >= 1, "need at least one variable");
    convolve(&[Family::P], Family::Q, k, n)
}

/// p̃_k(ℓ_1, ℓ_2; ℓ_3, …) with the first two slots using p̃ and the rest q.
pub fn pk_multi_tilde(k: usize, n: usize) -> MultiPoly<Q> {
    assert!(n >= 2, "need at least two variables");
    convolve(&[Family::PTilde, Family::PTilde], Family::Q, k, n)
}

fn eval_sq(p: &MultiPoly<Q>, ls: &[i64]) -> Q {
    p.eval_int(&ls.iter().map(|l| l * l).collect::<Vec<_>>())
}

/// Check the string equation
/// (k+1) p_{k+1}(ℓ) = (Σℓ_i − k − 1) p_k(ℓ) + Σ_i Σ_{0<m<ℓ_i} 2m p_k(…, m, …)
/// at every point of `grid`.
pub fn string_equation_check(k: usize, n: usize, grid: &[Vec<i64>]) -> bool {
    let pk = pk_multi(k, n);
    let pk1 = pk_multi(k + 1, n);
    let mut seen: HashMap<Vec<i64>, Q> = HashMap::new();
    let mut value = |v: &[i64]| seen.entry(v.to_vec()).or_insert_with(|| eval_sq(&pk, v)).clone();
    grid.iter().all(|ls| {
        assert_eq!(ls.len(), n);
        let lhs = q(k as i64 + 1) * eval_sq(&pk1, ls);
        let sum: i64 = ls.iter().sum();
        let mut rhs = q(sum - k as i64 - 1) * value(ls);
        for i in 0..n {
            for m in 1..ls[i] {
                let mut v = ls.to_vec();
                v[i] = m;
                rhs += q(2 * m) * value(&v);
            }
        }
        lhs == rhs
    })
}

/// The string equation for all k ≤ kmax, 1 ≤ n ≤ nmax and 0 ≤ ℓ_i ≤ lmax.
pub fn string_equation_grid(kmax: usize, nmax: usize, lmax: i64) -> bool {
    (0..=kmax).all(|k| {
        (1..=nmax).all(|n| {
            let grid = sorted_tuples(n, lmax);
            string_equation_check(k, n, &grid)
        })
    })
}

/// Nondecreasing tuples of length n with entries in 0..=lmax.
pub(crate) fn sorted_tuples(n: usize, lmax: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn rec(i: usize, lo: i64, lmax: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in lo..=lmax {
            cur[i] = v;
            rec(i + 1, v, lmax, cur, out);
        }
    }
    rec(0, 0, lmax, &mut cur, &mut out);
    out
}

/// Orbifold Euler characteristic of the moduli space of genus g curves with n marked points.
pub fn euler_characteristic(g: u32, n: u32) -> Result<Q> {
    if 2 - 2 * g as i64 - n as i64 >= 0 {
        return Err(Error::OutOfRange { g, n });
    }
    let s = sign(n as i64 - 1);
    if g == 0 {
        return Ok(s * qi(factorial(n as u64 - 3)));
    }
    let b = bernoulli(2 * g as usize);
    let zeta = -&b[2 * g as usize] / q(2 * g as i64);
    let ratio = qi(factorial((2 * g + n - 3) as u64)) / qi(factorial((2 * g - 2) as u64));
    let out = s * ratio * zeta;
    debug_assert!(!out.is_zero());
    Ok(out)
}
