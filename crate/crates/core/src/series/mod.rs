//! Truncated multivariate power series over exact rationals.
//!
//! Variables are the vertex weight `t` (half-integer exponents, stored doubled and
//! allowed to be negative) and the face weights `t_k`, `k ≥ 1` (nonnegative integer
//! exponents). A series knows every coefficient of grade at most its truncation
//! order; everything above is unknown and never stored.

mod json;
mod log;
mod monomial;

pub use log::LogSeries;
pub use monomial::Monomial;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, qf, rational_sqrt, Q};

/// How monomials are graded for truncation.
///
/// `Total` gives `t` and every `t_k` degree one. `Faces` gives `t` degree zero and
/// every `t_k` degree one, so the grade counts inner faces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    #[default]
    Total,
    Faces,
}

impl Grading {
    /// Doubled grade contributed by `t^{t2/2}`.
    pub fn t_weight(self, t2: i64) -> i64 {
        match self {
            Grading::Total => t2,
            Grading::Faces => 0,
        }
    }
}

/// Truncation order, stored doubled so half-integer orders are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order(i64);

impl Order {
    /// Order of an exactly known (polynomial) series.
    pub const EXACT: Order = Order(i64::MAX / 4);

    pub fn integer(n: i64) -> Order {
        Order(2 * n)
    }

    pub fn from_doubled(d: i64) -> Order {
        if d >= Self::EXACT.0 / 2 {
            Self::EXACT
        } else {
            Order(d)
        }
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_exact(self) -> bool {
        self.0 >= Self::EXACT.0 / 2
    }

    /// Shift by a doubled amount; exact stays exact.
    pub fn shift(self, d: i64) -> Order {
        if self.is_exact() {
            self
        } else {
            Order(self.0 + d)
        }
    }

    pub fn parse(s: &str) -> Option<Order> {
        let s = s.trim();
        if s == "exact" {
            return Some(Self::EXACT);
        }
        match s.split_once('/') {
            Some((p, "2")) => p.trim().parse().ok().map(Order::from_doubled),
            Some(_) => None,
            None => s.parse::<i64>().ok().map(Order::integer),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "exact")
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// A truncated series. Immutable once built; every operation returns a new value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    grading: Grading,
    order: Order,
    terms: BTreeMap<Monomial, Q>,
}

/// Result of factoring `a = c·t^{e2/2}·(1 + w)` with `w` of positive valuation.
struct Lead {
    coeff: Q,
    t2: i32,
    rest: Series,
}

impl Series {
    pub fn zero(grading: Grading, order: Order) -> Series {
        Series { grading, order, terms: BTreeMap::new() }
    }

    pub fn constant(grading: Grading, order: Order, c: Q) -> Series {
        Series::monomial(grading, order, Monomial::one(), c)
    }

    pub fn one(grading: Grading, order: Order) -> Series {
        Series::constant(grading, order, Q::one())
    }

    pub fn monomial(grading: Grading, order: Order, m: Monomial, c: Q) -> Series {
        Series::from_terms(grading, order, std::iter::once((m, c)))
    }

    /// `t^{t2/2}` known exactly.
    pub fn t_pow2(grading: Grading, t2: i32) -> Series {
        Series::monomial(grading, Order::EXACT, Monomial::t_pow2(t2), Q::one())
    }

    /// The face weight `t_k` known exactly.
    pub fn face(grading: Grading, k: u16) -> Series {
        Series::monomial(grading, Order::EXACT, Monomial::face(k, 1), Q::one())
    }

    /// Collect terms, summing duplicates, dropping zeros and anything beyond `order`.
    pub fn from_terms(grading: Grading, order: Order, it: impl IntoIterator<Item = (Monomial, Q)>) -> Series {
        let mut terms: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, c) in it {
            if m.grade2(grading) > order.doubled() {
                continue;
            }
            *terms.entry(m).or_insert_with(Q::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Series { grading, order, terms }
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same grading and exact zero, convenient as an accumulator seed.
    pub fn zero_like(&self) -> Series {
        Series::zero(self.grading, Order::EXACT)
    }

    pub fn constant_like(&self, c: Q) -> Series {
        Series::constant(self.grading, Order::EXACT, c)
    }

    /// Smallest doubled grade among stored terms.
    pub fn valuation2(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.grade2(self.grading)).min()
    }

    /// Valuation for order bookkeeping: an empty series is zero through its order.
    fn val_bound(&self) -> i64 {
        self.valuation2().unwrap_or(self.order.doubled())
    }

    pub fn truncate(&self, order: Order) -> Series {
        let order = order.min(self.order);
        let g = self.grading;
        Series {
            grading: g,
            order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.grade2(g) <= order.doubled())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Declare a tighter known order without touching low terms.
    pub fn with_order(&self, order: Order) -> Series {
        self.truncate(order)
    }

    /// An exact constant grades the same either way, so it combines with either grading.
    fn is_neutral(&self) -> bool {
        self.order.is_exact() && self.terms.keys().all(|m| *m == Monomial::one())
    }

    fn joint_grading(&self, other: &Series) -> Grading {
        if self.is_neutral() {
            other.grading
        } else if other.is_neutral() {
            self.grading
        } else {
            assert_eq!(self.grading, other.grading, "mixing series of different gradings");
            self.grading
        }
    }

    pub fn add_ref(&self, other: &Series) -> Series {
        let g = self.joint_grading(other);
        let order = self.order.min(other.order);
        let mut terms = BTreeMap::new();
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            if m.grade2(g) <= order.doubled() {
                *terms.entry(m.clone()).or_insert_with(Q::zero) += c;
            }
        }
        terms.retain(|_, c: &mut Q| !c.is_zero());
        Series { grading: g, order, terms }
    }

    pub fn neg_ref(&self) -> Series {
        Series {
            grading: self.grading,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub_ref(&self, other: &Series) -> Series {
        self.add_ref(&other.neg_ref())
    }

    pub fn scale(&self, c: &Q) -> Series {
        if c.is_zero() {
            return Series::zero(self.grading, self.order);
        }
        Series {
            grading: self.grading,
            order: self.order,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Series {
        self.scale(&q(n))
    }

    /// Product, exact through min(N_a + v_b, N_b + v_a).
    pub fn mul_ref(&self, other: &Series) -> Series {
        let g = self.joint_grading(other);
        if (self.is_neutral() && self.is_empty()) || (other.is_neutral() && other.is_empty()) {
            return Series::zero(g, Order::EXACT);
        }
        let order = Order::from_doubled(
            (self.order.doubled().saturating_add(other.val_bound()))
                .min(other.order.doubled().saturating_add(self.val_bound())),
        );
        let order = if self.order.is_exact() && other.order.is_exact() { Order::EXACT } else { order };
        let cap = order.doubled();
        let mut a: Vec<(i64, &Monomial, &Q)> = self.terms.iter().map(|(m, c)| (m.grade2(g), m, c)).collect();
        let mut b: Vec<(i64, &Monomial, &Q)> = other.terms.iter().map(|(m, c)| (m.grade2(g), m, c)).collect();
        a.sort_by_key(|x| x.0);
        b.sort_by_key(|x| x.0);
        let mut terms: BTreeMap<Monomial, Q> = BTreeMap::new();
        if let Some(bmin) = b.first().map(|x| x.0) {
            for (ga, ma, ca) in &a {
                if ga + bmin > cap {
                    break;
                }
                for (gb, mb, cb) in &b {
                    if ga + gb > cap {
                        break;
                    }
                    let prod = *ca * *cb;
                    match terms.entry(ma.mul(mb)) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(prod);
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            *e.get_mut() += prod;
                        }
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Series { grading: g, order, terms }
    }

    /// Multiply by the monomial `c·m`, shifting the order by its grade.
    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Series {
        let g = self.grading;
        if c.is_zero() {
            return Series::zero(g, self.order.shift(m.grade2(g)));
        }
        Series {
            grading: g,
            order: self.order.shift(m.grade2(g)),
            terms: self.terms.iter().map(|(x, y)| (x.mul(m), y * c)).collect(),
        }
    }

    /// Multiply by `t^{t2/2}`.
    pub fn mul_t_pow2(&self, t2: i32) -> Series {
        self.mul_monomial(&Monomial::t_pow2(t2), &Q::one())
    }

    pub fn pow_u(&self, n: u32) -> Series {
        let mut result = Series::one(self.grading, Order::EXACT);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        result
    }

    /// Integer power; negative exponents go through `recip`.
    pub fn pow_i(&self, n: i64) -> Result<Series> {
        if n >= 0 {
            Ok(self.pow_u(n as u32))
        } else {
            Ok(self.recip()?.pow_u((-n) as u32))
        }
    }

    fn lead(&self) -> Option<Lead> {
        let g = self.grading;
        let v = self.valuation2()?;
        let mut at_min = self.terms.iter().filter(|(m, _)| m.grade2(g) == v);
        let (m0, c0) = at_min.next()?;
        if at_min.next().is_some() || !m0.faces().is_empty() {
            return None;
        }
        let t2 = m0.t2();
        let inv = Q::one() / c0;
        let shift = Monomial::t_pow2(-t2);
        let rest_order = self.order.shift(-v);
        let rest = Series {
            grading: g,
            order: rest_order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| *m != m0)
                .map(|(m, c)| (m.mul(&shift), c * &inv))
                .collect(),
        };
        Some(Lead { coeff: c0.clone(), t2, rest })
    }

    /// (1 + w)^α by the binomial series, w of positive valuation.
    fn unit_pow(w: &Series, alpha: &Q) -> Result<Series> {
        let mut total = Series::one(w.grading, w.order);
        if w.is_zero() {
            return Ok(total);
        }
        if w.order.is_exact() {
            return Err(Error::UnboundedExpansion);
        }
        let mut term = total.clone();
        let mut j = 0u32;
        loop {
            j += 1;
            let coef = (alpha - q(j as i64 - 1)) / q(j as i64);
            if coef.is_zero() {
                break;
            }
            term = term.mul_ref(w).truncate(w.order).scale(&coef);
            if term.is_zero() {
                break;
            }
            total = total.add_ref(&term);
        }
        Ok(total)
    }

    /// Rational power. Needs a single leading monomial `c·t^e` with `c^α` rational
    /// and `e·α` a half-integer.
    pub fn pow_q(&self, alpha: &Q) -> Result<Series> {
        let lead = self.lead().ok_or(Error::NotInvertible)?;
        let c = if alpha.is_integer() {
            let n = alpha.to_integer();
            let n: i64 = n.try_into().map_err(|_| Error::InvalidRange("exponent".into()))?;
            if n >= 0 {
                num_traits::pow::pow(lead.coeff.clone(), n as usize)
            } else {
                Q::one() / num_traits::pow::pow(lead.coeff.clone(), (-n) as usize)
            }
        } else if alpha.denom() == &num_bigint::BigInt::from(2) {
            let r = rational_sqrt(&lead.coeff).ok_or(Error::NotASquare)?;
            let n: i64 = alpha.numer().try_into().map_err(|_| Error::InvalidRange("exponent".into()))?;
            if n >= 0 {
                num_traits::pow::pow(r, n as usize)
            } else {
                Q::one() / num_traits::pow::pow(r, (-n) as usize)
            }
        } else {
            return Err(Error::InvalidRange(format!("exponent {alpha}")));
        };
        let e = q(lead.t2 as i64) * alpha;
        if !e.is_integer() {
            return Err(Error::NotASquare);
        }
        let t2: i64 = e.to_integer().try_into().map_err(|_| Error::InvalidRange("exponent".into()))?;
        let u = Series::unit_pow(&lead.rest, alpha)?;
        Ok(u.mul_monomial(&Monomial::t_pow2(t2 as i32), &c))
    }

    /// Multiplicative inverse of a series with a single leading monomial `c·t^e`.
    pub fn recip(&self) -> Result<Series> {
        self.pow_q(&q(-1))
    }

    /// Inverse of a series with nonzero constant term.
    pub fn invert(&self) -> Result<Series> {
        if self.terms.get(&Monomial::one()).is_none() {
            return Err(Error::ZeroConstantTerm);
        }
        self.recip()
    }

    pub fn sqrt(&self) -> Result<Series> {
        self.pow_q(&qf(1, 2)).map_err(|e| match e {
            Error::NotInvertible => Error::NotASquare,
            other => other,
        })
    }

    /// `a^{p/2}` for an integer p.
    pub fn pow_half(&self, p: i64) -> Result<Series> {
        if p % 2 == 0 {
            self.pow_i(p / 2)
        } else {
            self.pow_q(&qf(p, 2))
        }
    }

    pub fn div(&self, other: &Series) -> Result<Series> {
        Ok(self.mul_ref(&other.recip()?))
    }

    /// ∂/∂t with half-integer exponents allowed.
    pub fn derive_t(&self) -> Series {
        let g = self.grading;
        let order = self.order.shift(-g.t_weight(2));
        Series::from_terms(
            g,
            order,
            self.terms
                .iter()
                .filter(|(m, _)| m.t2() != 0)
                .map(|(m, c)| (m.with_t2(m.t2() - 2), c * qf(m.t2() as i64, 2))),
        )
    }

    /// ∂/∂t refusing half-integer exponents.
    pub fn derive_t_integral(&self) -> Result<Series> {
        if self.terms.keys().any(|m| m.t2() % 2 != 0) {
            return Err(Error::HalfIntegerDifferentiation);
        }
        Ok(self.derive_t())
    }

    /// Antiderivative in t vanishing at t = 0; fails on a t⁻¹ term.
    pub fn integrate_t(&self) -> Result<Series> {
        if self.terms.keys().any(|m| m.t2() == -2) {
            return Err(Error::UnsupportedCase("antiderivative of t⁻¹".into()));
        }
        let g = self.grading;
        let order = self.order.shift(g.t_weight(2));
        Ok(Series::from_terms(
            g,
            order,
            self.terms.iter().map(|(m, c)| (m.with_t2(m.t2() + 2), c / qf(m.t2() as i64 + 2, 2))),
        ))
    }

    pub fn derive_t_n(&self, n: usize) -> Series {
        (0..n).fold(self.clone(), |acc, _| acc.derive_t())
    }

    /// ∂/∂t_k.
    pub fn derive_face(&self, k: u16) -> Series {
        let order = self.order.shift(-2);
        Series::from_terms(
            self.grading,
            order,
            self.terms.iter().filter_map(|(m, c)| {
                let e = m.face_exp(k);
                if e == 0 {
                    None
                } else {
                    Some((m.with_face_exp(k, e - 1), c * q(e as i64)))
                }
            }),
        )
    }

    pub fn coefficient(&self, m: &Monomial) -> Result<Q> {
        let g2 = m.grade2(self.grading);
        if g2 > self.order.doubled() {
            return Err(Error::BeyondTruncation { grade2: g2, order2: self.order.doubled() });
        }
        Ok(self.terms.get(m).cloned().unwrap_or_else(Q::zero))
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Q::zero)
    }

    /// True when no stored term has a negative t-exponent.
    pub fn is_power_series(&self) -> bool {
        self.terms.keys().all(|m| m.t2() >= 0)
    }

    pub fn expect_power_series(self, what: &str) -> Result<Series> {
        if self.is_power_series() {
            Ok(self)
        } else {
            Err(Error::NotAPowerSeries(what.to_string()))
        }
    }

    /// Evaluate every face weight outside `keep` at zero.
    pub fn restrict_faces(&self, keep: &dyn Fn(u16) -> bool) -> Series {
        Series {
            grading: self.grading,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.faces().iter().all(|&(k, _)| keep(k)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Equality up to the common truncation order.
    pub fn agrees_with(&self, other: &Series) -> bool {
        let o = self.order.min(other.order);
        self.truncate(o).terms == other.truncate(o).terms
    }

    /// Logarithm of `t^m·(1 + w)`.
    pub fn ln(&self) -> Result<LogSeries> {
        let lead = self.lead().ok_or_else(|| Error::LogOfNonUnit(self.to_string()))?;
        if !lead.coeff.is_one() {
            return Err(Error::LogOfNonUnit(format!("leading coefficient {}", lead.coeff)));
        }
        let w = &lead.rest;
        let mut total = Series::zero(self.grading, w.order);
        if !w.is_zero() {
            if w.order.is_exact() {
                return Err(Error::UnboundedExpansion);
            }
            let mut power = Series::one(self.grading, w.order);
            let mut j = 1i64;
            loop {
                power = power.mul_ref(w).truncate(w.order);
                if power.is_zero() {
                    break;
                }
                let c = if j % 2 == 1 { qf(1, j) } else { qf(-1, j) };
                total = total.add_ref(&power.scale(&c));
                j += 1;
            }
        }
        Ok(LogSeries::new(qf(lead.t2 as i64, 2), total))
    }

    /// Terms in output order: by grade, then monomial key.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Q)> {
        let g = self.grading;
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| (a.0.grade2(g), a.0).cmp(&(b.0.grade2(g), b.0)));
        v
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = m.to_string();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        if !self.order.is_exact() {
            write!(f, " + O[{}]", self.order)?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $imp:ident) => {
        impl $tr<&Series> for &Series {
            type Output = Series;
            fn $f(self, rhs: &Series) -> Series {
                self.$imp(rhs)
            }
        }
        impl $tr<Series> for Series {
            type Output = Series;
            fn $f(self, rhs: Series) -> Series {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&Series> for Series {
            type Output = Series;
            fn $f(self, rhs: &Series) -> Series {
                (&self).$imp(rhs)
            }
        }
        impl $tr<Series> for &Series {
            type Output = Series;
            fn $f(self, rhs: Series) -> Series {
                self.$imp(&rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.neg_ref()
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.neg_ref()
    }
}

/// Sum of an iterator of series, seeded with an exact zero of the given grading.
pub fn sum_series<'a>(grading: Grading, it: impl IntoIterator<Item = Series>) -> Series {
    it.into_iter().fold(Series::zero(grading, Order::EXACT), |acc, s| acc.add_ref(&s))
}

#[cfg(test)]
mod tests;
