use super::*;
use crate::closed::genus1_f;
use crate::disk::{solve_rs, WeightSpec};
use crate::series::{Grading, Order};

fn solve(active: &[u16], n: i64) -> DiskData {
    solve_rs(&WeightSpec::faces(active.iter().copied(), n).unwrap()).unwrap()
}

#[test]
fn spectral_coefficients() {
    let empty = solve(&[], 4);
    let u = compute_uk(&empty, 3).unwrap();
    assert!(u[0].is_zero());
    assert!(u[1].agrees_with(&empty.sqrt_r()));
    assert!(u[2].is_zero() && u[3].is_zero());

    let cubic = solve(&[3], 5);
    let u = compute_uk(&cubic, 4).unwrap();
    assert!(u[2].agrees_with(&cubic.r().mul_ref(&cubic.spec().tk(3)).neg_ref()));
    assert!(u[3].is_zero() && u[4].is_zero());

    for active in [&[1u16, 2, 3, 4][..], &[3, 4], &[2, 5]] {
        let d = solve(active, 5);
        let u = compute_uk(&d, 6).unwrap();
        assert!(u[0].is_zero(), "u_0 for {active:?}");
        assert!(u[1].agrees_with(&d.t().div(d.sqrt_r()).unwrap()), "u_1 for {active:?}");
        let top = *active.iter().max().unwrap() as usize;
        assert!(u[top..].iter().all(Series::is_zero));
    }
}

#[test]
fn zeroth_moments() {
    let empty = solve(&[], 4);
    let md = moments(&empty, 2).unwrap();
    let one = Series::one(Grading::Faces, Order::EXACT);
    assert!(md.m0(true).agrees_with(&one) && md.m0(false).agrees_with(&one));
    assert!(md.mbar(true, 1).unwrap().is_zero() && md.mbar(false, 2).unwrap().is_zero());
    for active in [&[3u16, 4][..], &[4], &[1, 2, 3, 4], &[2, 3, 5]] {
        let d = solve(active, 6);
        let md = moments(&d, 2).unwrap();
        for plus in [true, false] {
            let (l, r) = moment_identity(&md, &d, plus).unwrap();
            assert!(l.agrees_with(&r), "{active:?} {plus}");
        }
    }
    // Quartic weights: u_k vanishes for k ≥ 4, so M̄_{±,h} does for h ≥ 3.
    let d = solve(&[4], 5);
    let md = moments(&d, 4).unwrap();
    assert!(!md.mbar(true, 2).unwrap().is_zero());
    assert!(md.mbar(true, 3).unwrap().is_zero() && md.mbar(false, 4).unwrap().is_zero());
    assert!(matches!(md.mbar(true, 0), Err(Error::InvalidIndex(_))));
    assert!(matches!(md.mbar(true, 5), Err(Error::InvalidIndex(_))));
}

#[test]
fn genus_one_from_moments() {
    let empty = solve(&[], 4);
    assert!(genus1_from_moments(&moments(&empty, 0).unwrap(), &empty).unwrap().is_zero());
    for active in [&[4u16][..], &[3], &[3, 4], &[1, 2, 3]] {
        let d = solve(active, 6);
        let md = moments(&d, 0).unwrap();
        assert!(genus1_from_moments(&md, &d).unwrap().agrees_with(&genus1_f(&d).unwrap()), "{active:?}");
    }
}

fn brute_lhs(h: i64, j: i64) -> Q {
    let eps = j % 2;
    let mut acc = Q::zero();
    let mut k = 1 - eps;
    while k <= j - 1 {
        acc += qi(binomial(k + h, 2 * h + 1) * binomial(j - 1, (j - 1 + k) / 2));
        k += 2;
    }
    acc
}

#[test]
fn binomial_identity() {
    for h in 0..=4usize {
        let (q0, q1) = qh_polynomials(h);
        for j in 1..=12i64 {
            let eps = j % 2;
            let x = q((j - eps) / 2);
            let qp = if eps == 0 { &q0 } else { &q1 };
            let rhs = qi(binomial(j - 1, (j - eps) / 2)) * qp.eval(&x);
            assert_eq!(brute_lhs(h as i64, j), rhs, "h = {h}, j = {j}");
        }
    }
    for h in 1..=5 {
        let (q0, q1) = qh_polynomials(h);
        assert!(q0.eval(&q(1)).is_zero());
        assert_eq!(q0.degree(), Some(h + 1));
        assert_eq!(q1.degree(), Some(h + 1));
    }
}

#[test]
fn inverse_system() {
    let d = solve(&[2], 5);
    let z = z_system(&d);
    assert_eq!(z.terms(0).len(), 2);
    assert_eq!((z.terms(0)[1].r_exp, z.terms(0)[1].s_exp), (1, 0));
    assert!(z.terms(0)[1].coef.agrees_with(&d.spec().tk(2).neg_ref()));

    let d = solve(&[3], 5);
    let z = z_system(&d);
    let t3 = d.spec().tk(3);
    let got: Vec<(u32, u32, Series)> = z.terms(1).iter().map(|t| (t.r_exp, t.s_exp, t.coef.clone())).collect();
    assert_eq!(got.len(), 3);
    assert!(got.iter().any(|(a, l, c)| (*a, *l) == (1, 0) && c.agrees_with(&t3.scale_int(-2))));
    assert!(got.iter().any(|(a, l, c)| (*a, *l) == (0, 2) && c.agrees_with(&t3.neg_ref())));

    for active in [&[][..], &[3u16, 4], &[1, 2, 3, 4], &[2, 5, 6]] {
        let d = solve(active, 5);
        let z = z_system(&d);
        assert!(z.eval(0, &d).agrees_with(&d.t()), "{active:?}");
        let t1 = if d.spec().is_active(1) { d.spec().tk(1) } else { Series::zero(Grading::Faces, Order::EXACT) };
        assert!(z.eval(1, &d).agrees_with(&t1), "{active:?}");
    }
}

#[test]
fn moment_routes_agree() {
    for active in [&[][..], &[4u16], &[3, 4], &[1, 2, 3, 4, 5]] {
        let d = solve(active, 5);
        let md = moments(&d, 3).unwrap();
        let z = z_system(&d);
        check_moment_routes(&md, &z, &d).unwrap();
    }
}

#[test]
fn moment_route_mismatch_is_reported() {
    let d = solve(&[3, 4], 4);
    let other = solve(&[4], 4);
    let md = moments(&d, 2).unwrap();
    let z = z_system(&other);
    assert!(matches!(check_moment_routes(&md, &z, &other), Err(Error::MomentMismatch(_))));
}

fn x_var(width: usize, k: usize) -> MultiPoly<Q> {
    MultiPoly::var(2 * width, pab_index(width, k, false))
}

fn y_var(width: usize, k: usize) -> MultiPoly<Q> {
    MultiPoly::var(2 * width, pab_index(width, k, true))
}

#[test]
fn pab_small_cases() {
    assert_eq!(pab_polynomial(1, 0).unwrap(), x_var(1, 1));
    assert_eq!(pab_polynomial(0, 1).unwrap(), y_var(1, 1));
    let p02 = pab_polynomial(0, 2).unwrap();
    assert_eq!(p02, y_var(2, 1).mul(&y_var(2, 1)).add(&x_var(2, 2)));
    assert_eq!(pab_polynomial(3, -1).unwrap(), y_var(2, 2));
    assert!(matches!(pab_polynomial(1, -1), Err(Error::InvalidIndex(_))));
    assert!(matches!(pab_polynomial(2, -2), Err(Error::InvalidIndex(_))));
    for a in 0..=4usize {
        for b in 0..=(4 - a) as i64 {
            let width = (a as i64 + b).max(1) as usize;
            let want = if a == 0 && b == 0 { 0 } else { (a as i64 + b) as u32 };
            assert_eq!(pab_weight(&pab_polynomial(a, b).unwrap(), width), Some(want), "({a},{b})");
        }
    }
}

fn mixed_derivative(x: &Series, a: usize, b: usize) -> Series {
    let mut v = x.derive_t_n(a);
    for _ in 0..b {
        v = v.derive_face(1);
    }
    v
}

#[test]
fn pab_series_identities() {
    let d = solve(&[1, 2, 3], 6);
    for a in 0..=3usize {
        for b in 0..=3 - a {
            let width = (a + b).max(1);
            let args = pab_arguments(&d, width).unwrap();
            let p = pab_polynomial(a, b as i64).unwrap();
            let lhs = mixed_derivative(d.r(), a, b);
            let rhs = d.sqrt_r().pow_u(b as u32 + 2).mul_ref(&p.eval_ring(&args));
            assert!(lhs.agrees_with(&rhs), "R: ({a},{b})");
            if a + b > 0 {
                let ps = pab_polynomial(a + 1, b as i64 - 1).unwrap();
                let args_s = pab_arguments(&d, (a + b).max(1)).unwrap();
                let rhs = d.sqrt_r().pow_u(b as u32 + 1).mul_ref(&ps.eval_ring(&args_s));
                assert!(mixed_derivative(d.s(), a, b).agrees_with(&rhs), "S: ({a},{b})");
            }
        }
    }
    // ∂R/∂t₁ = R S′ and ∂S/∂t₁ = R′.
    assert!(d.r().derive_face(1).agrees_with(&d.r().mul_ref(&d.s_d(1))));
    assert!(d.s().derive_face(1).agrees_with(&d.r_d(1)));
}

#[test]
fn jacobian_structure() {
    let d = solve(&[1, 2, 3, 4], 5);
    let inv = inverse_jacobian(&d).unwrap();
    let du = [[d.r_d(1), d.r().derive_face(1)], [d.s_d(1), d.s().derive_face(1)]];
    for i in 0..2 {
        for j in 0..2 {
            let e = du[i][0].mul_ref(&inv[0][j]).add_ref(&du[i][1].mul_ref(&inv[1][j]));
            let want = if i == j { Series::one(Grading::Faces, Order::EXACT) } else { Series::zero(Grading::Faces, Order::EXACT) };
            assert!(e.agrees_with(&want), "({i},{j})");
        }
    }
}

#[test]
fn tree_formula_on_the_disk_system() {
    // ∂^k Z_ε/∂r^k at U(t) from the derivatives of U = (R, S) in (t, t₁).
    let d = solve(&[1, 2, 3, 4], 5);
    let z = z_system(&d);
    let inv = inverse_jacobian(&d).unwrap();
    let rows: Vec<Vec<Series>> = inv.iter().map(|r| r.to_vec()).collect();
    let u = [d.r().clone(), d.s().clone()];
    let diff = |j: usize, idx: &[usize]| {
        let a = idx.iter().filter(|&&i| i == 0).count();
        mixed_derivative(&u[j], a, idx.len() - a)
    };
    for k in 1..=3usize {
        for eps in 0..2 {
            let tree = inverse_tree_differential(&rows, &diff, &[k, 0], eps).unwrap();
            assert!(tree.agrees_with(&z.derive_r_at(eps, k as u32, &d)), "k = {k}, ε = {eps}");
        }
    }
}
