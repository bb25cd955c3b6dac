use num_traits::{One, Zero};

use super::UniPoly;
use crate::error::{Error, Result};
use crate::rational::{bernoulli, binomial, q, qf, qi, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i64) -> Parity {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Σ_{i=0}^{N−1} i^p as a polynomial in N (Faulhaber, with 0⁰ = 1).
fn power_sum(p: usize, bern: &[Q]) -> UniPoly {
    let mut c = vec![Q::zero(); p + 2];
    for (j, b) in bern.iter().enumerate().take(p + 1) {
        c[p + 1 - j] = qi(binomial(p as i64 + 1, j as i64)) * b / q(p as i64 + 1);
    }
    UniPoly::new(c)
}

/// Σ_{i=0}^{N−1} (2i + 1)^p as a polynomial in N.
fn odd_power_sum(p: usize, bern: &[Q]) -> UniPoly {
    (0..=p).fold(UniPoly::zero(), |acc, r| {
        let c = qi(binomial(p as i64, r as i64)) * qi(num_bigint::BigInt::from(2).pow(r as u32));
        acc.add(&power_sum(r, bern).scale(&c))
    })
}

/// Σ_{0<m<ℓ, m ≡ m_parity} m·P(m²), plus (ℓ/2)·P(ℓ²) when `boundary` is set, as a
/// polynomial in ℓ² valid for ℓ of parity `l_parity`.
///
/// Only four combinations give a polynomial in ℓ²: even m with the boundary term
/// and odd m without it (ℓ even), even m without it and odd m with it (ℓ odd).
pub fn discrete_sum(p: &UniPoly, m_parity: Parity, boundary: bool, l_parity: Parity) -> Result<UniPoly> {
    let expected = match (m_parity, boundary) {
        (Parity::Even, true) | (Parity::Odd, false) => Parity::Even,
        (Parity::Even, false) | (Parity::Odd, true) => Parity::Odd,
    };
    if expected != l_parity {
        return Err(Error::ParityMismatch);
    }
    let deg = p.degree().map_or(0, |d| d + 1);
    let bern = bernoulli(2 * deg + 2);
    // Polynomial in n, where ℓ = 2n (even) or ℓ = 2n + 1 (odd).
    let mut in_n = UniPoly::zero();
    for (j, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = 2 * j + 1;
        let two_e = qi(num_bigint::BigInt::from(2).pow(e as u32));
        let s = match (m_parity, l_parity) {
            // m = 2i, 1 ≤ i ≤ n − 1
            (Parity::Even, Parity::Even) => power_sum(e, &bern).scale(&two_e),
            // m = 2i, 1 ≤ i ≤ n
            (Parity::Even, Parity::Odd) => power_sum(e, &bern).compose_affine(&Q::one(), &Q::one()).scale(&two_e),
            // m = 2i + 1, 0 ≤ i ≤ n − 1, in both cases
            (Parity::Odd, _) => odd_power_sum(e, &bern),
        };
        in_n = in_n.add(&s.scale(c));
    }
    // Substitute n = (ℓ − ℓ0)/2.
    let shift = match l_parity {
        Parity::Even => Q::zero(),
        Parity::Odd => qf(-1, 2),
    };
    let mut in_l = in_n.compose_affine(&qf(1, 2), &shift);
    if boundary {
        // (ℓ/2)·Σ c_j ℓ^{2j}
        let mut v = vec![Q::zero(); 2 * deg + 2];
        for (j, c) in p.coeffs().iter().enumerate() {
            v[2 * j + 1] += c / q(2);
        }
        in_l = in_l.add(&UniPoly::new(v));
    }
    in_l.even_part_in_square()
        .ok_or_else(|| Error::NotQuasiPolynomial("discrete sum left an odd power of the length".into()))
}
