//! Higher differentials of a compositional inverse as sums over decorated planted trees.
//!
//! With f and g inverse to each other, every internal vertex of arity k ≥ 2 carries
//! −(1/k!)∂^k f, every edge carries an entry of (d f)^{-1}, and leaves carry the
//! variables being differentiated.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Ring;
use crate::rational::{factorial, falling, q, qf, qi, Q};

/// Largest number of leaves enumerated.
pub const MAX_LEAVES: usize = 6;

/// Planted plane tree whose internal vertices have arity at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneTree {
    children: Vec<PlaneTree>,
}

impl PlaneTree {
    pub fn leaf() -> PlaneTree {
        PlaneTree { children: Vec::new() }
    }

    pub fn node(children: Vec<PlaneTree>) -> PlaneTree {
        assert!(children.len() >= 2, "internal vertices have arity ≥ 2");
        PlaneTree { children }
    }

    pub fn children(&self) -> &[PlaneTree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn leaves(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(PlaneTree::leaves).sum()
        }
    }

    pub fn vertices(&self) -> usize {
        1 + self.children.iter().map(PlaneTree::vertices).sum::<usize>()
    }
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (1..=total.saturating_sub(parts - 1))
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// All planted plane trees with `k` leaves (little Schröder numbers 1, 1, 3, 11, 45, …).
pub fn plane_trees(k: usize) -> Vec<PlaneTree> {
    match k {
        0 => Vec::new(),
        1 => vec![PlaneTree::leaf()],
        _ => {
            let mut out = Vec::new();
            for arity in 2..=k {
                for comp in compositions(k, arity) {
                    let mut partial: Vec<Vec<PlaneTree>> = vec![Vec::new()];
                    for &part in &comp {
                        let subs = plane_trees(part);
                        partial = partial
                            .into_iter()
                            .flat_map(|pre| {
                                subs.iter().map(move |s| {
                                    let mut v = pre.clone();
                                    v.push(s.clone());
                                    v
                                })
                            })
                            .collect();
                    }
                    out.extend(partial.into_iter().map(PlaneTree::node));
                }
            }
            out
        }
    }
}

fn distinct_arrangements(counts: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        if c > 0 {
            let mut rest = counts.to_vec();
            rest[i] -= 1;
            for mut tail in distinct_arrangements(&rest) {
                tail.insert(0, i);
                out.push(tail);
            }
        }
    }
    out
}

fn index_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..k).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|pre| {
                (0..n).map(move |i| {
                    let mut v = pre.clone();
                    v.push(i);
                    v
                })
            })
            .collect()
    })
}

struct Ctx<'a, R> {
    inv: &'a [Vec<R>],
    diff: &'a dyn Fn(usize, &[usize]) -> R,
}

impl<R: Ring> Ctx<'_, R> {
    /// Value of the subtree for every bottom label i, consuming leaf labels in order.
    fn eval(&self, t: &PlaneTree, labels: &mut std::slice::Iter<'_, usize>) -> Vec<R> {
        let n = self.inv.len();
        let top: Vec<R> = if t.is_leaf() {
            let l = *labels.next().expect("one label per leaf");
            (0..n).map(|j| if j == l { R::one_elem() } else { R::zero_elem() }).collect()
        } else {
            let kids: Vec<Vec<R>> = t.children.iter().map(|c| self.eval(c, labels)).collect();
            let k = kids.len();
            let w = -Q::one() / qi(factorial(k as u64));
            (0..n)
                .map(|j| {
                    let mut acc = R::zero_elem();
                    for idx in index_tuples(n, k) {
                        let mut term = (self.diff)(j, &idx);
                        if term.vanishes() {
                            continue;
                        }
                        for (kid, &i) in kids.iter().zip(&idx) {
                            term = term.mul(&kid[i]);
                        }
                        acc = acc.add(&term);
                    }
                    acc.scale(&w)
                })
                .collect()
        };
        (0..n)
            .map(|i| (0..n).fold(R::zero_elem(), |acc, j| acc.add(&self.inv[i][j].mul(&top[j]))))
            .collect()
    }
}

/// ∂^k g_ε / ∂y_1^{c_1}⋯∂y_n^{c_n} at y = f(x), from `inv` = (d f(x))^{-1} and
/// `diff(j, [i_1, …, i_m])` = ∂^m f_j / ∂x_{i_1}⋯∂x_{i_m} at x.
///
/// Plane trees are summed with every ordering of the leaf labels and the total is
/// multiplied by c_1!⋯c_n!, the derivative of the monomial y^c.
pub fn inverse_tree_differential<R: Ring>(
    inv: &[Vec<R>],
    diff: &dyn Fn(usize, &[usize]) -> R,
    c: &[usize],
    eps: usize,
) -> Result<R> {
    let n = inv.len();
    if c.len() != n || eps >= n || inv.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidIndex(format!("{n} coordinates, multi-index {c:?}, target {eps}")));
    }
    let k: usize = c.iter().sum();
    if k == 0 {
        return Err(Error::InvalidIndex("at least one derivative is needed".into()));
    }
    if k > MAX_LEAVES {
        return Err(Error::UnsupportedCase(format!("tree enumeration is limited to {MAX_LEAVES} leaves")));
    }
    let ctx = Ctx { inv, diff };
    let arrangements = distinct_arrangements(c);
    let mut acc = R::zero_elem();
    for t in plane_trees(k) {
        for labels in &arrangements {
            acc = acc.add(&ctx.eval(&t, &mut labels.iter())[eps]);
        }
    }
    let mult = c.iter().fold(Q::one(), |m, &ci| m * qi(factorial(ci as u64)));
    Ok(acc.scale(&mult))
}

/// Inverse of a 2×2 rational matrix.
pub fn invert_2x2(m: &[[Q; 2]; 2]) -> Result<[[Q; 2]; 2]> {
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    if det.is_zero() {
        return Err(Error::SingularDifferential);
    }
    let d = Q::one() / det;
    Ok([[&m[1][1] * &d, -&m[0][1] * &d], [-&m[1][0] * &d, &m[0][0] * &d]])
}

/// A polynomial map of two variables.
#[derive(Clone, Debug)]
pub struct PolyMap(pub Vec<Vec<((u32, u32), Q)>>);

impl PolyMap {
    /// ∂^{|idx|} f_j / ∂x_{i_1}⋯ at a point.
    pub fn derivative(&self, j: usize, idx: &[usize], at: &[Q; 2]) -> Q {
        let a = idx.iter().filter(|&&i| i == 0).count() as u32;
        let b = idx.len() as u32 - a;
        self.0[j].iter().fold(Q::zero(), |acc, ((e1, e2), c)| {
            if *e1 < a || *e2 < b {
                return acc;
            }
            let f = qi(falling(*e1 as i64, a) * falling(*e2 as i64, b));
            acc + c * f * pow(&at[0], e1 - a) * pow(&at[1], e2 - b)
        })
    }
}

fn pow(x: &Q, e: u32) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * x)
}

type Bi = BTreeMap<(u32, u32), Q>;

fn bi_mul(a: &Bi, b: &Bi, k: u32) -> Bi {
    let mut out = Bi::new();
    for ((a1, a2), x) in a {
        for ((b1, b2), y) in b {
            if a1 + a2 + b1 + b2 <= k {
                *out.entry((a1 + b1, a2 + b2)).or_insert_with(Q::zero) += x * y;
            }
        }
    }
    out
}

/// Derivatives of the inverse of x′ ↦ f(x₀ + x′) − f(x₀) by fixed-point iteration.
fn direct_inverse(f: &PolyMap, at: &[Q; 2], k: u32) -> Result<[Bi; 2]> {
    // Taylor coefficients at x₀, split into the linear part and the rest.
    let mut taylor: [Bi; 2] = [Bi::new(), Bi::new()];
    for (j, t) in taylor.iter_mut().enumerate() {
        for a in 0..=k {
            for b in 0..=k - a {
                if a + b == 0 {
                    continue;
                }
                let idx: Vec<usize> = std::iter::repeat(0).take(a as usize).chain(std::iter::repeat(1).take(b as usize)).collect();
                let d = f.derivative(j, &idx, at) / qi(factorial(a as u64) * factorial(b as u64));
                if !d.is_zero() {
                    t.insert((a, b), d);
                }
            }
        }
    }
    let lin = [[taylor[0].get(&(1, 0)).cloned().unwrap_or_default(), taylor[0].get(&(0, 1)).cloned().unwrap_or_default()], [
        taylor[1].get(&(1, 0)).cloned().unwrap_or_default(),
        taylor[1].get(&(0, 1)).cloned().unwrap_or_default(),
    ]];
    let inv = invert_2x2(&lin)?;
    let mut g: [Bi; 2] = [Bi::new(), Bi::new()];
    for _ in 0..=k {
        // g = A⁻¹(y − N(g)).
        let mut rhs: [Bi; 2] = [BTreeMap::from([((1, 0), q(1))]), BTreeMap::from([((0, 1), q(1))])];
        for j in 0..2 {
            for ((a, b), c) in &taylor[j] {
                if a + b < 2 {
                    continue;
                }
                let mut m: Bi = BTreeMap::from([((0, 0), q(1))]);
                for _ in 0..*a {
                    m = bi_mul(&m, &g[0], k);
                }
                for _ in 0..*b {
                    m = bi_mul(&m, &g[1], k);
                }
                for (e, v) in m {
                    *rhs[j].entry(e).or_insert_with(Q::zero) -= c * v;
                }
            }
        }
        let mut next: [Bi; 2] = [Bi::new(), Bi::new()];
        for (i, out) in next.iter_mut().enumerate() {
            for (j, part) in rhs.iter().enumerate() {
                for (e, v) in part {
                    *out.entry(*e).or_insert_with(Q::zero) += &inv[i][j] * v;
                }
            }
        }
        g = next;
    }
    Ok(g)
}

/// Compare the tree formula with direct inversion of f near `at`, for every
/// multi-index of total order ≤ kmax.
pub fn tree_formula_agrees(f: &PolyMap, at: [Q; 2], kmax: u32) -> Result<bool> {
    let jac = [[f.derivative(0, &[0], &at), f.derivative(0, &[1], &at)], [f.derivative(1, &[0], &at), f.derivative(1, &[1], &at)]];
    let inv = invert_2x2(&jac)?;
    let inv: Vec<Vec<Q>> = inv.iter().map(|r| r.to_vec()).collect();
    let g = direct_inverse(f, &at, kmax)?;
    let diff = |j: usize, idx: &[usize]| f.derivative(j, idx, &at);
    for k in 1..=kmax {
        for c0 in 0..=k {
            let c = [c0 as usize, (k - c0) as usize];
            for eps in 0..2 {
                let tree = inverse_tree_differential(&inv, &diff, &c, eps)?;
                let coef = g[eps].get(&(c0, k - c0)).cloned().unwrap_or_default();
                if tree != coef * qi(factorial(c0 as u64) * factorial((k - c0) as u64)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The two polynomial systems used as references: x − y², y − x² at the origin, and
/// a mixed cubic system at (1/2, −1).
pub fn reference_systems() -> Vec<(PolyMap, [Q; 2])> {
    vec![
        (PolyMap(vec![vec![((1, 0), q(1)), ((0, 2), q(-1))], vec![((0, 1), q(1)), ((2, 0), q(-1))]]), [q(0), q(0)]),
        (
            PolyMap(vec![
                vec![((1, 0), q(2)), ((0, 1), q(1)), ((1, 1), q(1)), ((0, 3), q(-1))],
                vec![((0, 1), q(1)), ((2, 0), q(-1)), ((2, 1), q(3))],
            ]),
            [qf(1, 2), q(-1)],
        ),
    ]
}
