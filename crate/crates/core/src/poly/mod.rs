//! Polynomials with exact coefficients: Bell polynomials, the p/q/p̃ families,
//! discrete sums, Euler characteristics and parity-dependent quasi-polynomials.

mod bell;
mod discrete;
mod families;
mod quasi;

pub use bell::{bell, bnk, faa_di_bruno};
pub use discrete::{discrete_sum, Parity};
pub use families::{euler_characteristic, pk_multi, pk_multi_tilde, pk_uni, string_equation_check, string_equation_grid, Family};
pub use quasi::{fit_quasipolynomial, QuasiPolynomial};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{q, Q};
use crate::series::Series;

/// Coefficient rings used by the polynomial types: exact rationals and series.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_elem() -> Self;
    fn from_q(c: &Q) -> Self;
    fn vanishes(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Q) -> Self;
    fn to_json_value(&self) -> serde_json::Value;

    fn one_elem() -> Self {
        Self::from_q(&Q::one())
    }

    fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    /// Equality as far as both sides are known.
    fn agrees(&self, other: &Self) -> bool {
        self == other
    }
}

impl Ring for Q {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn from_q(c: &Q) -> Self {
        c.clone()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Q) -> Self {
        self * c
    }
    fn to_json_value(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

impl Ring for Series {
    fn zero_elem() -> Self {
        Series::zero(Default::default(), crate::series::Order::EXACT)
    }
    fn from_q(c: &Q) -> Self {
        Series::constant(Default::default(), crate::series::Order::EXACT, c.clone())
    }
    fn vanishes(&self) -> bool {
        Series::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.sub_ref(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn scale(&self, c: &Q) -> Self {
        Series::scale(self, c)
    }
    fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("series serialization cannot fail")
    }
    fn agrees(&self, other: &Self) -> bool {
        self.agrees_with(other)
    }
}

/// Dense univariate polynomial with rational coefficients, index = power.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Q>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Q>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> UniPoly {
        UniPoly::default()
    }

    pub fn constant(c: Q) -> UniPoly {
        UniPoly::new(vec![c])
    }

    /// The variable itself.
    pub fn x() -> UniPoly {
        UniPoly::new(vec![Q::zero(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// Multiply by `(x − a)`.
    pub fn mul_linear(&self, a: &Q) -> UniPoly {
        self.mul(&UniPoly::new(vec![-a.clone(), Q::one()]))
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    /// `p(a·x + b)`.
    pub fn compose_affine(&self, a: &Q, b: &Q) -> UniPoly {
        let lin = UniPoly::new(vec![b.clone(), a.clone()]);
        self.coeffs.iter().rev().fold(UniPoly::zero(), |acc, c| acc.mul(&lin).add(&UniPoly::constant(c.clone())))
    }

    /// Rewrite an even polynomial `Σ c_{2j} x^{2j}` as `Σ c_{2j} y^j`; `None` if an odd power is present.
    pub fn even_part_in_square(&self) -> Option<UniPoly> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        Some(UniPoly::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    /// View as a multivariate polynomial in variable `var` of `arity`.
    pub fn lift(&self, arity: usize, var: usize) -> MultiPoly<Q> {
        MultiPoly::from_terms(
            arity,
            self.coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0u32; arity];
                e[var] = i as u32;
                (e, c.clone())
            }),
        )
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Sparse multivariate polynomial keyed by exponent vectors of fixed length.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<C> {
    arity: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Ring> MultiPoly<C> {
    pub fn zero(arity: usize) -> Self {
        MultiPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: C) -> Self {
        Self::from_terms(arity, std::iter::once((vec![0; arity], c)))
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::from_terms(arity, std::iter::once((e, C::one_elem())))
    }

    pub fn from_terms(arity: usize, it: impl IntoIterator<Item = (Vec<u32>, C)>) -> Self {
        let mut terms: BTreeMap<Vec<u32>, C> = BTreeMap::new();
        for (e, c) in it {
            assert_eq!(e.len(), arity, "exponent vector of wrong length");
            match terms.get_mut(&e) {
                Some(x) => *x = x.add(&c),
                None => {
                    terms.insert(e, c);
                }
            }
        }
        terms.retain(|_, c| !c.vanishes());
        MultiPoly { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero_elem)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        Self::from_terms(self.arity, self.terms.iter().chain(other.terms.iter()).map(|(e, c)| (e.clone(), c.clone())))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_terms(self.arity, self.terms.iter().map(|(e, x)| (e.clone(), x.scale(c))))
    }

    /// Partial derivative in variable `var`.
    pub fn derive(&self, var: usize) -> Self {
        Self::from_terms(
            self.arity,
            self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, c)| {
                let mut f = e.clone();
                f[var] -= 1;
                (f, c.scale(&q(e[var] as i64)))
            }),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.push((e, ca.mul(cb)));
            }
        }
        Self::from_terms(self.arity, out)
    }

    /// Evaluate at rational points.
    pub fn eval(&self, x: &[Q]) -> C {
        assert_eq!(x.len(), self.arity);
        self.terms.iter().fold(C::zero_elem(), |acc, (e, c)| {
            let m = e.iter().zip(x).fold(Q::one(), |m, (&k, xi)| m * num_traits::pow::pow(xi.clone(), k as usize));
            acc.add(&c.scale(&m))
        })
    }

    /// Rename variables: variable `i` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        Self::from_terms(
            self.arity,
            self.terms.iter().map(|(e, c)| {
                let mut f = vec![0; self.arity];
                for (i, &k) in e.iter().enumerate() {
                    f[perm[i]] = k;
                }
                (f, c.clone())
            }),
        )
    }

    /// Substitute a rational value for variable `var`, dropping it.
    pub fn substitute(&self, var: usize, value: &Q) -> Self {
        Self::from_terms(
            self.arity - 1,
            self.terms.iter().map(|(e, c)| {
                let mut f = e.clone();
                let k = f.remove(var);
                (f, c.scale(&num_traits::pow::pow(value.clone(), k as usize)))
            }),
        )
    }

    /// Invariance under every permutation of the variables.
    pub fn is_symmetric(&self) -> bool {
        permutations(self.arity).iter().all(|p| &self.permute(p) == self)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| serde_json::json!({ "exps": e, "coef": c.to_json_value() }))
                .collect(),
        )
    }
}

impl MultiPoly<Q> {
    /// Evaluate with ring-valued variables.
    pub fn eval_ring<R: Ring>(&self, x: &[R]) -> R {
        assert_eq!(x.len(), self.arity);
        let mut powers: Vec<Vec<R>> = x.iter().map(|xi| vec![R::one_elem(), xi.clone()]).collect();
        let mut acc = R::zero_elem();
        for (e, c) in &self.terms {
            let mut m = R::from_q(c);
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&x[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    m = m.mul(&powers[i][k as usize]);
                }
            }
            acc = acc.add(&m);
        }
        acc
    }

    /// Evaluate at integers.
    pub fn eval_int(&self, x: &[i64]) -> Q {
        self.eval(&x.iter().map(|&v| q(v)).collect::<Vec<_>>())
    }
}

impl<C: Ring + fmt::Display> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
                    .collect();
                if vars.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}
