use super::{MultiPoly, Ring};
use crate::error::{Error, Result};
use crate::rational::{binomial, qi, Q};
use crate::series::Series;

/// Partial exponential Bell polynomial B_{n,k}(r_1, …, r_{n−k+1}).
pub fn bell(n: usize, k: usize) -> Result<MultiPoly<Q>> {
    if k < 1 || k > n {
        return Err(Error::InvalidRange(format!("bell({n},{k}) needs 1 <= k <= n")));
    }
    let arity = n - k + 1;
    // B_{m,j} for m ≤ n, j ≤ k, all in `n` variables; r_i multiplies a block of size i.
    let wide = n;
    let mut table: Vec<Vec<MultiPoly<Q>>> = vec![vec![MultiPoly::zero(wide); k + 1]; n + 1];
    table[0][0] = MultiPoly::constant(wide, crate::rational::q(1));
    for m in 1..=n {
        for j in 1..=k.min(m) {
            let mut acc = MultiPoly::zero(wide);
            for i in 1..=(m - j + 1) {
                let prev = &table[m - i][j - 1];
                if prev.is_zero() {
                    continue;
                }
                let c = qi(binomial(m as i64 - 1, i as i64 - 1));
                acc = acc.add(&prev.mul(&MultiPoly::var(wide, i - 1)).scale(&c));
            }
            table[m][j] = acc;
        }
    }
    let full = std::mem::replace(&mut table[n][k], MultiPoly::zero(wide));
    Ok(MultiPoly::from_terms(arity, full.terms().map(|(e, c)| (e[..arity].to_vec(), c.clone()))))
}

/// b_{n,k} = B_{n,k}(R′/R, R″/R, …) with `derivs[i]` the (i+1)-th t-derivative of R.
pub fn bnk(n: usize, k: usize, derivs: &[Series], r: &Series) -> Result<Series> {
    let b = bell(n, k)?;
    let need = n - k + 1;
    if derivs.len() < need {
        return Err(Error::InsufficientOrders { need, have: derivs.len() });
    }
    let rinv = r.recip()?;
    let vals: Vec<Series> = derivs[..need].iter().map(|d| d.mul_ref(&rinv)).collect();
    Ok(b.eval_ring(&vals))
}

/// n-th derivative of f∘g given `outer[k−1] = f^{(k)}(g)` and `inner[i−1] = g^{(i)}`.
pub fn faa_di_bruno<R: Ring>(outer: &[R], inner: &[R], n: usize) -> Result<R> {
    if outer.len() < n {
        return Err(Error::InsufficientOrders { need: n, have: outer.len() });
    }
    if inner.len() < n {
        return Err(Error::InsufficientOrders { need: n, have: inner.len() });
    }
    let mut acc = R::zero_elem();
    for k in 1..=n {
        let b = bell(n, k)?;
        acc = acc.add(&outer[k - 1].mul(&b.eval_ring(&inner[..n - k + 1])));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use crate::series::{Grading, Monomial, Order};
    use std::collections::BTreeMap;

    /// Sum over set partitions of {0..n-1} into k blocks, listing block sizes.
    fn partitions_by_blocks(n: usize, k: usize) -> BTreeMap<Vec<u32>, u64> {
        fn rec(i: usize, n: usize, blocks: &mut Vec<u32>, k: usize, out: &mut BTreeMap<Vec<u32>, u64>) {
            if i == n {
                if blocks.len() == k {
                    let mut e = vec![0u32; n - k + 1];
                    for &b in blocks.iter() {
                        e[b as usize - 1] += 1;
                    }
                    *out.entry(e).or_default() += 1;
                }
                return;
            }
            for j in 0..blocks.len() {
                blocks[j] += 1;
                rec(i + 1, n, blocks, k, out);
                blocks[j] -= 1;
            }
            if blocks.len() < k {
                blocks.push(1);
                rec(i + 1, n, blocks, k, out);
                blocks.pop();
            }
        }
        let mut out = BTreeMap::new();
        rec(0, n, &mut Vec::new(), k, &mut out);
        out
    }

    #[test]
    fn table_entries() {
        let b42 = bell(4, 2).unwrap();
        assert_eq!(b42.coeff(&[1, 0, 1]), q(4));
        assert_eq!(b42.coeff(&[0, 2, 0]), q(3));
        assert_eq!(b42.terms().count(), 2);
        assert_eq!(bell(3, 3).unwrap().coeff(&[3]), q(1));
        for n in 1..=8 {
            let b = bell(n, n).unwrap();
            assert_eq!(b.terms().count(), 1);
            assert_eq!(b.coeff(&[n as u32]), q(1));
        }
        assert!(bell(3, 0).is_err());
        assert!(bell(2, 3).is_err());
    }

    #[test]
    fn matches_set_partitions() {
        for n in 1..=8 {
            let mut total = 0u64;
            for k in 1..=n {
                let b = bell(n, k).unwrap();
                let oracle = partitions_by_blocks(n, k);
                let got: BTreeMap<Vec<u32>, u64> =
                    b.terms().map(|(e, c)| (e.clone(), c.to_integer().try_into().unwrap())).collect();
                assert_eq!(got, oracle, "B_{n},{k}");
                assert!(b.terms().all(|(_, c)| c.is_integer() && *c > q(0)));
                total += oracle.values().sum::<u64>();
            }
            let bell_numbers = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140];
            assert_eq!(total, bell_numbers[n]);
        }
    }

    fn r_t4() -> Series {
        let m = |t2, e| Monomial::new(t2, [(4, e)]);
        Series::from_terms(Grading::Total, Order::integer(5), [(m(2, 0), q(1)), (m(4, 1), q(3)), (m(6, 2), q(18))])
    }

    #[test]
    fn bnk_values() {
        let r = r_t4();
        let d: Vec<Series> = (1..=3).map(|i| r.derive_t_n(i)).collect();
        let b11 = bnk(1, 1, &d, &r).unwrap();
        assert!(b11.agrees_with(&d[0].div(&r).unwrap()));
        let b21 = bnk(2, 1, &d, &r).unwrap();
        assert!(b21.agrees_with(&d[1].div(&r).unwrap()));
        // R″ = 6t4 + 108 t4² t, so R″/R starts 6 t4 t^{-1}.
        assert_eq!(b21.coefficient(&Monomial::new(-2, [(4, 1)])).unwrap(), q(6));

        // No face weights: R = t gives b_{n,k} = t^{-k} δ_{n,k}.
        let t = Series::t_pow2(Grading::Total, 2).truncate(Order::integer(6));
        let dt: Vec<Series> = (1..=4).map(|i| t.derive_t_n(i)).collect();
        for n in 1..=4 {
            for k in 1..=n {
                let b = bnk(n, k, &dt, &t).unwrap();
                if n == k {
                    assert!(b.agrees_with(&Series::t_pow2(Grading::Total, -2 * k as i32)));
                } else {
                    assert!(b.is_zero());
                }
            }
        }
        assert_eq!(bnk(3, 1, &d[..2], &r), Err(Error::InsufficientOrders { need: 3, have: 2 }));
    }

    #[test]
    fn chain_rule_low_orders() {
        let (f1, f2, g1, g2) = (q(2), q(3), q(5), q(7));
        assert_eq!(faa_di_bruno(&[f1.clone()], &[g1.clone()], 1).unwrap(), &f1 * &g1);
        assert_eq!(
            faa_di_bruno(&[f1.clone(), f2.clone()], &[g1.clone(), g2.clone()], 2).unwrap(),
            &f2 * &g1 * &g1 + &f1 * &g2
        );
        assert!(faa_di_bruno(&[f1], &[g1, g2], 2).is_err());
    }

    #[test]
    fn second_derivative_of_log() {
        // f = ln, g = R: f^{(k)}(R) = (−1)^{k−1}(k−1)!/R^k.
        let r = r_t4();
        let rinv = r.recip().unwrap();
        let outer = vec![rinv.clone(), rinv.mul_ref(&rinv).scale(&qf(-1, 1))];
        let inner = vec![r.derive_t(), r.derive_t_n(2)];
        let fdb = faa_di_bruno(&outer, &inner, 2).unwrap();
        let direct = r.ln().unwrap().derive_t().derive_t();
        assert!(fdb.agrees_with(&direct));
        assert_eq!(fdb.order().min(direct.order()), Order::integer(2));
        assert!(!fdb.is_zero());
    }
}
