use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::{permutations, MultiPoly, Ring, UniPoly};
use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// A parity-dependent quasi-polynomial in n lengths: one polynomial in ℓ_1², …, ℓ_n²
/// for each set of positions holding odd lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiPolynomial<C> {
    arity: usize,
    classes: BTreeMap<Vec<usize>, MultiPoly<C>>,
}

/// Positions of odd entries.
pub fn odd_positions(ls: &[i64]) -> Vec<usize> {
    ls.iter().enumerate().filter(|(_, &l)| l.rem_euclid(2) == 1).map(|(i, _)| i).collect()
}

impl<C: Ring> QuasiPolynomial<C> {
    pub fn new(arity: usize, classes: BTreeMap<Vec<usize>, MultiPoly<C>>) -> Self {
        assert!(classes.values().all(|p| p.arity() == arity));
        QuasiPolynomial { arity, classes }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn classes(&self) -> impl Iterator<Item = (&Vec<usize>, &MultiPoly<C>)> {
        self.classes.iter()
    }

    pub fn class(&self, odd: &[usize]) -> Option<&MultiPoly<C>> {
        self.classes.get(odd)
    }

    /// Value at the given lengths; `None` if that parity class was never fitted.
    pub fn eval(&self, ls: &[i64]) -> Option<C> {
        assert_eq!(ls.len(), self.arity);
        let p = self.classes.get(&odd_positions(ls))?;
        Some(p.eval(&ls.iter().map(|l| q(l * l)).collect::<Vec<_>>()))
    }

    /// Highest total degree in the squared variables across classes.
    pub fn degree(&self) -> Option<u32> {
        self.classes.values().filter_map(|p| p.total_degree()).max()
    }

    /// Invariance under simultaneous permutation of the variables and the parity classes.
    /// Classes whose image was not fitted are skipped.
    pub fn is_symmetric(&self) -> bool {
        permutations(self.arity).iter().all(|perm| {
            self.classes.iter().all(|(odd, p)| {
                let mut image: Vec<usize> = odd.iter().map(|&i| perm[i]).collect();
                image.sort_unstable();
                match self.classes.get(&image) {
                    Some(other) => &p.permute(perm) == other,
                    None => true,
                }
            })
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "arity": self.arity,
            "classes": self.classes.iter().map(|(odd, p)| serde_json::json!({
                "odd_positions": odd,
                "poly": p.to_json_value(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Lagrange basis on the nodes, expressed in the monomial basis.
fn lagrange_basis(nodes: &[Q]) -> Vec<UniPoly> {
    (0..nodes.len())
        .map(|j| {
            let mut p = UniPoly::constant(Q::one());
            let mut denom = Q::one();
            for (i, xi) in nodes.iter().enumerate() {
                if i != j {
                    p = p.mul_linear(xi);
                    denom *= &nodes[j] - xi;
                }
            }
            p.scale(&(Q::one() / denom))
        })
        .collect()
}

/// Fit one parity class on a tensor grid. `axes[i]` are the chosen lengths for variable i.
fn fit_tensor<C: Ring>(axes: &[Vec<i64>], values: &BTreeMap<Vec<i64>, C>) -> MultiPoly<C> {
    let n = axes.len();
    let side = axes[0].len();
    let total = side.pow(n as u32);
    // Flattened grid, index = Σ idx_i · side^i.
    let mut grid: Vec<C> = (0..total)
        .map(|flat| {
            let pt: Vec<i64> = (0..n).map(|i| axes[i][(flat / side.pow(i as u32)) % side]).collect();
            values[&pt].clone()
        })
        .collect();
    for (i, axis) in axes.iter().enumerate() {
        let nodes: Vec<Q> = axis.iter().map(|l| q(l * l)).collect();
        let basis = lagrange_basis(&nodes);
        let stride = side.pow(i as u32);
        let mut next = vec![C::zero_elem(); total];
        for flat in 0..total {
            if (flat / stride) % side != 0 {
                continue;
            }
            // Fiber along variable i starting at `flat`.
            for (j, b) in basis.iter().enumerate() {
                let v = &grid[flat + j * stride];
                if v.vanishes() {
                    continue;
                }
                for (power, c) in b.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        let slot = flat + power * stride;
                        next[slot] = next[slot].add(&v.scale(c));
                    }
                }
            }
        }
        grid = next;
    }
    MultiPoly::from_terms(
        n,
        grid.into_iter().enumerate().map(|(flat, c)| {
            let e: Vec<u32> = (0..n).map(|i| ((flat / side.pow(i as u32)) % side) as u32).collect();
            (e, c)
        }),
    )
}

/// Fit a parity-dependent quasi-polynomial of total degree ≤ `degree` (in the squared
/// lengths) to the samples, class by class. Each class needs a full tensor grid of
/// side `degree + 1`; every remaining sample of the class must be reproduced exactly.
pub fn fit_quasipolynomial<C: Ring>(
    samples: &BTreeMap<Vec<i64>, C>,
    arity: usize,
    degree: usize,
) -> Result<QuasiPolynomial<C>> {
    let mut by_class: BTreeMap<Vec<usize>, BTreeMap<Vec<i64>, C>> = BTreeMap::new();
    for (ls, v) in samples {
        if ls.len() != arity || ls.iter().any(|&l| l < 0) {
            return Err(Error::InvalidIndex(format!("{ls:?}")));
        }
        by_class.entry(odd_positions(ls)).or_default().insert(ls.clone(), v.clone());
    }
    let side = degree + 1;
    let mut classes = BTreeMap::new();
    for (odd, pts) in by_class {
        let candidates: Vec<Vec<i64>> = (0..arity)
            .map(|i| pts.keys().map(|ls| ls[i]).collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        let shortest = candidates.iter().map(Vec::len).min().unwrap_or(0);
        // Slide a window of `side` values per axis until the tensor grid is fully sampled.
        let axes = (0..=shortest.saturating_sub(side))
            .map(|o| candidates.iter().map(|c| c[o..o + side].to_vec()).collect::<Vec<_>>())
            .find(|axes| tensor_points(axes).iter().all(|pt| pts.contains_key(pt)))
            .ok_or_else(|| Error::InsufficientSamples(format!("class {odd:?} lacks a tensor grid of side {side}")))?;
        let poly = fit_tensor(&axes, &pts);
        if let Some(d) = poly.total_degree() {
            if d as usize > degree {
                return Err(Error::NotQuasiPolynomial(format!("class {odd:?} needs total degree {d} > {degree}")));
            }
        }
        for (ls, v) in &pts {
            let x: Vec<Q> = ls.iter().map(|l| q(l * l)).collect();
            if !poly.eval(&x).agrees(v) {
                return Err(Error::NotQuasiPolynomial(format!("residual at {ls:?} in class {odd:?}")));
            }
        }
        classes.insert(odd, poly);
    }
    Ok(QuasiPolynomial { arity, classes })
}

fn tensor_points(axes: &[Vec<i64>]) -> Vec<Vec<i64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.into_iter()
            .flat_map(|pt| {
                axis.iter().map(move |&v| {
                    let mut p = pt.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}
