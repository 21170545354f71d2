use num_rational::BigRational;

use super::*;
use crate::quiver::p_series;

fn dv(v: &[u32]) -> DimVector {
    DimVector::new(v.to_vec())
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn rf_poly(c: &[i64]) -> RationalFunction {
    RationalFunction::from_qpoly(&QPoly::from_ints(c))
}

fn kronecker_ctx(h: u32) -> CountingContext {
    CountingContext::new(Quiver::kronecker(), Stability::new(vec![1, 0]), half(), h).unwrap()
}

#[test]
fn t_examples() {
    let ctx = CountingContext::unstable(Quiver::loops(1), 3).unwrap();
    assert!(ctx.t_alpha(&dv(&[0])).is_one());
    assert_eq!(ctx.t_alpha(&dv(&[1])), rf_poly(&[0, 1]) / rf_poly(&[-1, 1]));
    assert_eq!(gl_order_poly(2), QPoly::from_ints(&[0, 1, -1, -1, 1]));
}

#[test]
fn zero_stability_r_is_bar_tp() {
    for q in [Quiver::loops(2), Quiver::linear_a(2), Quiver::kronecker()] {
        let ctx = CountingContext::unstable(q, 4).unwrap();
        let r = ctx.r_series().unwrap();
        for a in ctx.cone() {
            assert_eq!(r.coeff(&a), ctx.t_alpha(&a));
        }
        let btp = p_series(ctx.trunc()).apply_t(ctx.form()).unwrap().bar();
        assert_eq!(r, btp);
    }
}

#[test]
fn r_examples_with_stability() {
    let k = kronecker_ctx(4);
    assert_eq!(k.r_alpha(&dv(&[1, 1])).unwrap(), rf_poly(&[1, 1]) / rf_poly(&[-1, 1]));
    let a2 = CountingContext::new(Quiver::linear_a(2), Stability::new(vec![1, 0]), half(), 4).unwrap();
    assert_eq!(a2.r_alpha(&dv(&[1, 1])).unwrap(), rf_poly(&[-1, 1]).inv().unwrap());
    assert!(matches!(k.r_alpha(&dv(&[1, 0])), Err(CountingError::SlopeMismatch { .. })));
    assert!(k.r_alpha(&dv(&[0, 0])).unwrap().is_one());
    assert!(CountingContext::new(Quiver::kronecker(), Stability::new(vec![1, 0]), BigRational::from_integer(3.into()), 4)
        .is_err());
}

#[test]
fn dp_matches_enumeration() {
    let configs = [
        (Quiver::kronecker(), vec![1, 0], half()),
        (Quiver::linear_a(2), vec![0, 1], half()),
        (Quiver::from_matrix(vec![vec![1, 1], vec![1, 0]]).unwrap(), vec![1, 0], half()),
        (Quiver::linear_a(3), vec![2, 1, 0], BigRational::from_integer(1.into())),
        (Quiver::linear_a(3), vec![0, 1, 2], BigRational::from_integer(1.into())),
        (Quiver::loops(2), vec![0], BigRational::from_integer(0.into())),
    ];
    for (q, theta, mu) in configs {
        let ctx = CountingContext::new(q, Stability::new(theta), mu, 5).unwrap();
        for a in ctx.cone() {
            assert_eq!(ctx.r_alpha(&a).unwrap(), ctx.r_alpha_enumerated(&a).unwrap(), "{a}");
        }
    }
}

fn a_of(table: &CountTable, a: &[u32]) -> QPoly {
    table.get(&dv(a)).cloned().unwrap()
}

#[test]
fn a_for_acyclic_is_simple_vertices() {
    for q in [Quiver::linear_a(2), Quiver::linear_a(3), Quiver::kronecker()] {
        let ctx = CountingContext::unstable(q, 4).unwrap();
        let table = ctx.a_series().unwrap();
        for (a, p) in table.entries() {
            let expected = if a.height() == 1 { QPoly::one() } else { QPoly::zero() };
            assert_eq!(p, &expected, "{a}");
        }
    }
}

#[test]
fn a_for_loop_quivers() {
    let one = CountingContext::unstable(Quiver::loops(1), 5).unwrap().a_series().unwrap();
    assert_eq!(a_of(&one, &[1]), QPoly::from_ints(&[0, 1]));
    for d in 2..=5 {
        assert_eq!(a_of(&one, &[d]), QPoly::zero());
    }
    for m in 2..=4u32 {
        let t = CountingContext::unstable(Quiver::loops(m), 3).unwrap().a_series().unwrap();
        assert_eq!(a_of(&t, &[1]), QPoly::monomial(BigRational::from_integer(1.into()), m as usize));
    }
    let t = CountingContext::unstable(Quiver::loops(2), 2).unwrap().a_series().unwrap();
    assert!(a_of(&t, &[2]).has_integer_coefficients());
}

#[test]
fn a_for_kronecker_cone() {
    let table = kronecker_ctx(6).a_series().unwrap();
    assert_eq!(a_of(&table, &[1, 1]), QPoly::from_ints(&[1, 1]));
    assert_eq!(a_of(&table, &[2, 2]), QPoly::zero());
    assert_eq!(a_of(&table, &[3, 3]), QPoly::zero());
    // stable classes with End = F_{q^2}: the degree-2 points of P^1
    let s = s_of_dim(&table, &dv(&[2, 2]), 2).unwrap();
    assert_eq!(s, QPoly::new(vec![0.into(), (-1).into(), 1.into()].into_iter().map(|n: i64| BigRational::new(n.into(), 2.into())).collect()));
    assert!(matches!(s_of_dim(&table, &dv(&[3, 3]), 2), Err(CountingError::NotDivisible { .. })));
}

#[test]
fn r_exp_round_trip() {
    for ctx in [kronecker_ctx(4), CountingContext::unstable(Quiver::loops(2), 4).unwrap()] {
        let r = ctx.r_series().unwrap();
        let a = ctx.a_from_r(&r).unwrap();
        let inv = RationalFunction::one_minus_q_pow(1).inv().unwrap();
        let e = a.to_series(ctx.trunc()).unwrap().scale(&inv).exp().unwrap();
        assert_eq!(r.twisted_mul(&e, ctx.form()).unwrap(), Series::one(ctx.trunc()));
    }
}

#[test]
fn adams_identity_for_s() {
    let table = CountingContext::unstable(Quiver::loops(2), 4).unwrap().a_series().unwrap();
    let a1 = a_of(&table, &[1]);
    assert_eq!(s_alpha_r(&table, &dv(&[1]), 1).unwrap(), a1);
    for r in 1..=4 {
        let mut sum = QPoly::zero();
        for k in divisors(r) {
            let s = s_alpha_r(&table, &dv(&[1]), k).unwrap();
            sum = sum.add(&s.mul(&QPoly::from_ints(&[k as i64])));
        }
        assert_eq!(sum, a1.adams(r));
    }
}

#[test]
fn f_algorithms_agree() {
    for q in [Quiver::loops(2), Quiver::loops(3), Quiver::linear_a(2)] {
        let ctx = CountingContext::unstable(q, 5).unwrap();
        let table = ctx.a_series().unwrap();
        let direct = f_series(&ctx, &table).unwrap();
        let rec = f_recursive(&ctx).unwrap();
        assert_eq!(direct, rec);
        let slice = specialize_at_one(&direct, 0).unwrap().remove(0);
        assert_eq!(slice, f_at_one(&ctx).unwrap());
    }
    let k = kronecker_ctx(2);
    assert_eq!(f_recursive(&k).err(), Some(CountingError::NonzeroStability));
}

#[test]
fn f_at_one_for_loops() {
    for m in 1..=4u32 {
        let ctx = CountingContext::unstable(Quiver::loops(m), 6).unwrap();
        let f = f_at_one(&ctx).unwrap();
        let expected = Series::from_terms(
            ctx.trunc(),
            [
                (dv(&[0]), BigRational::from_integer(1.into())),
                (dv(&[1]), BigRational::from_integer((-(m as i64)).into())),
            ],
        )
        .unwrap();
        assert_eq!(f, expected);
        let f0 = q1_expansion(&ctx, 1).unwrap().remove(0);
        assert_eq!(f0, expected);
    }
}

#[test]
fn linear_term_counts_necklaces() {
    let table = CountingContext::unstable(Quiver::loops(2), 5).unwrap().a_series().unwrap();
    let report = positivity_report(&table, Some(2));
    for e in &report.entries {
        if e.alpha.height() >= 2 {
            assert_eq!(e.linear_matches_necklace, Some(true));
            assert!(e.constant_term.is_zero());
        }
    }
}
