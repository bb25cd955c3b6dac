//! Exact rational helpers: binomials, factorials, Bernoulli numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used throughout.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: BigInt) -> Q {
    Q::from_integer(n)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient with the convention that it vanishes outside 0 ≤ k ≤ n.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Multinomial coefficient (Σ parts)! / ∏ parts!; zero if any part is negative.
pub fn multinomial(parts: &[i64]) -> BigInt {
    if parts.iter().any(|&p| p < 0) {
        return BigInt::zero();
    }
    let mut total = 0i64;
    let mut acc = BigInt::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

/// Generalized binomial x(x−1)…(x−k+1)/k! for rational x.
pub fn binomial_q(x: &Q, k: u32) -> Q {
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * (x - q(i as i64)) / q(i as i64 + 1);
    }
    acc
}

/// Falling factorial n(n−1)…(n−k+1) on integers.
pub fn falling(n: i64, k: u32) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, i| acc * (n - i))
}

/// Bernoulli numbers B_0..=B_n with B_1 = −1/2.
pub fn bernoulli(n: usize) -> Vec<Q> {
    let mut b: Vec<Q> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Q::one());
            continue;
        }
        let mut s = Q::zero();
        for (k, bk) in b.iter().enumerate() {
            s += qi(binomial(m as i64 + 1, k as i64)) * bk;
        }
        b.push(-s / q(m as i64 + 1));
    }
    b
}

/// Exact square root of a nonnegative rational, if it exists.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// `(-1)^k` as a rational.
pub fn sign(k: i64) -> Q {
    if k.is_even() {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Parse "p/q" or "p" into a rational.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().ok()?;
            let d: BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(qi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, 6), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(multinomial(&[1, 2, 0]), BigInt::from(3));
        assert_eq!(multinomial(&[2, 0, 1]), BigInt::from(3));
        assert_eq!(binomial_q(&qf(1, 2), 2), qf(-1, 8));
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(6);
        assert_eq!(b[1], qf(-1, 2));
        assert_eq!(b[2], qf(1, 6));
        assert_eq!(b[3], q(0));
        assert_eq!(b[4], qf(-1, 30));
        assert_eq!(b[6], qf(1, 42));
    }

    #[test]
    fn square_roots() {
        assert_eq!(rational_sqrt(&qf(9, 4)), Some(qf(3, 2)));
        assert_eq!(rational_sqrt(&q(2)), None);
        assert_eq!(rational_sqrt(&q(-1)), None);
    }
}
