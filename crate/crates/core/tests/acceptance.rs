//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit status
//! if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use quiver_count::arith::{binomial, divisors};
use quiver_count::counting::{
    f1_conjecture_series, f_at_one, f_recursive, f_series, positivity_report, q1_expansion, s_alpha_r,
    scaled_degree_report, specialize_at_one, CountingContext,
};
use quiver_count::oracle::{census, count_stable_with_r, Census, OracleConfig};
use quiver_count::qfield::{QPoly, RationalFunction};
use quiver_count::quiver::{p_lambda_series, p_series, qbinom_vec, QBinomTop, Quiver, Stability};
use quiver_count::series::{DimVector, Series, TruncationSpec};

type Outcome = Result<String, String>;

const CASES: u32 = 50;

fn runner() -> TestRunner {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn dv(v: &[u32]) -> DimVector {
    DimVector::new(v.to_vec())
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn coeff() -> impl Strategy<Value = RationalFunction> {
    (prop::collection::vec(-2i64..=2, 3), any::<bool>()).prop_map(|(c, divide)| {
        let p = RationalFunction::from_qpoly(&QPoly::from_ints(&c));
        if divide {
            &p / &RationalFunction::one_minus_q_pow(1)
        } else {
            p
        }
    })
}

/// Sparse random series in one or two variables up to height `h`.
fn series(h: u32, with_constant: bool) -> impl Strategy<Value = Series> {
    (1usize..=2).prop_flat_map(move |n| {
        let t = TruncationSpec::new(n, h).unwrap();
        let support = t.support();
        prop::collection::vec(prop::option::weighted(0.5, coeff()), support.len()).prop_map(move |cs| {
            let terms = support
                .iter()
                .cloned()
                .zip(cs)
                .filter(|(a, _)| with_constant || !a.is_zero())
                .filter_map(|(a, c)| c.map(|c| (a, c)));
            Series::from_terms(&t, terms.collect::<Vec<_>>()).unwrap()
        })
    })
}

fn pair_on_same_trunc(h: u32) -> impl Strategy<Value = (Series, Series)> {
    series(h, false).prop_flat_map(move |a| {
        let t = a.trunc().clone();
        let support = t.support();
        prop::collection::vec(prop::option::weighted(0.5, coeff()), support.len()).prop_map(move |cs| {
            let terms = support.iter().cloned().zip(cs).skip(1).filter_map(|(al, c)| c.map(|c| (al, c)));
            (a.clone(), Series::from_terms(&t, terms.collect::<Vec<_>>()).unwrap())
        })
    })
}

fn run_cases<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<String, String> {
    runner()
        .run(&strategy, test)
        .map(|()| format!("{name}: {CASES} cases"))
        .map_err(|e| format!("{name}: {e}"))
}

fn criterion_1() -> Outcome {
    let h = 5;
    let mut notes = Vec::new();
    notes.push(run_cases("Exp/Log inverse", series(h, false), |a| {
        prop_assert_eq!(a.exp().unwrap().log().unwrap(), a.clone());
        let f = Series::one(a.trunc()).add(&a).unwrap();
        prop_assert_eq!(f.log().unwrap().exp().unwrap(), f);
        Ok(())
    })?);
    notes.push(run_cases("Exp(a+b) = Exp(a)Exp(b)", pair_on_same_trunc(h), |(a, b)| {
        let lhs = a.add(&b).unwrap().exp().unwrap();
        let rhs = a.exp().unwrap().mul(&b.exp().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })?);
    notes.push(run_cases("power formula", pair_on_same_trunc(h), |(a, g)| {
        // g may have a constant term
        let f = Series::one(a.trunc()).add(&a).unwrap();
        let g = g.add(&Series::constant(g.trunc(), RationalFunction::from_int(2) + RationalFunction::q())).unwrap();
        let lhs = f.pow(&g).unwrap();
        let mut rhs = Series::one(f.trunc());
        for (i, gd) in g.power_formula_exponents().iter().enumerate() {
            let d = i as u32 + 1;
            rhs = rhs.mul(&f.adams(d).pow_plain(gd).unwrap()).unwrap();
        }
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })?);
    notes.push(run_cases("p = Exp(Σx_i/(1-q)), p(n;x) = Exp((1-q^{n+1})/(1-q) x)", (1usize..=3, -12i64..=12), |(n, k)| {
        let t = TruncationSpec::new(n, h).unwrap();
        let inv = RationalFunction::one_minus_q_pow(1).inv().unwrap();
        let xs = Series::from_terms(&t, (0..n).map(|i| (DimVector::unit(n, i), inv.clone()))).unwrap();
        prop_assert_eq!(xs.exp().unwrap(), p_series(&t));
        let t1 = TruncationSpec::new(1, h).unwrap();
        let c = &(RationalFunction::one() - RationalFunction::q_pow(k + 1)) * &inv;
        let e = Series::monomial(&t1, dv(&[1]), c).unwrap().exp().unwrap();
        prop_assert_eq!(e, p_lambda_series(&[k], &t1).unwrap());
        Ok(())
    })?);
    notes.push(run_cases("p(λ) = p S_λ(bar p)", prop::collection::vec(-6i64..=6, 1..=3), |lambda| {
        let t = TruncationSpec::new(lambda.len(), h).unwrap();
        let p = p_series(&t);
        let rhs = p.mul(&p.bar().apply_s_lambda(&lambda).unwrap()).unwrap();
        prop_assert_eq!(p_lambda_series(&lambda, &t).unwrap(), rhs);
        Ok(())
    })?);
    Ok(notes.join("; "))
}

fn three_cycle() -> Quiver {
    Quiver::from_matrix(vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).unwrap()
}

fn criterion_2() -> Outcome {
    let quivers = [
        ("1-loop", Quiver::loops(1), 6),
        ("2-loop", Quiver::loops(2), 6),
        ("A2", Quiver::linear_a(2), 6),
        ("A3", Quiver::linear_a(3), 5),
        ("Kronecker", Quiver::kronecker(), 6),
        ("3-cycle", three_cycle(), 5),
    ];
    for (name, q, h) in quivers {
        let ctx = CountingContext::unstable(q, h).unwrap();
        let r = ctx.r_series().unwrap();
        let btp = p_series(ctx.trunc()).apply_t(ctx.form()).unwrap().bar();
        ensure(r == btp, || format!("{name}: r differs from bar(Tp)"))?;
    }
    let mut checked = 0;
    for (name, q) in [("A2", Quiver::linear_a(2)), ("A3", Quiver::linear_a(3)), ("Kronecker", Quiver::kronecker())] {
        let ctx = CountingContext::unstable(q, 6).unwrap();
        let p = p_series(ctx.trunc());
        let btp = p.apply_t(ctx.form()).unwrap().bar();
        let prod = btp.twisted_mul(&p, ctx.form()).unwrap();
        ensure(prod == Series::one(ctx.trunc()), || format!("{name}: bar(Tp) ∘ p != 1"))?;
        for alpha in ctx.cone() {
            let top: Vec<QBinomTop> = ctx.form().apply(&alpha).into_iter().map(|v| QBinomTop::Finite(-v)).collect();
            let b = qbinom_vec(&top, &alpha).unwrap();
            ensure(b.is_zero(), || format!("{name}: [-Rα, α] = {b} at {alpha}"))?;
            checked += 1;
        }
    }
    Ok(format!("r = bar(Tp) on 6 quivers; bar(Tp)∘p = 1 and [-Rα,α] = 0 on {checked} vectors"))
}

struct GridConfig {
    name: &'static str,
    quiver: Quiver,
    theta: Stability,
    mu: BigRational,
}

fn grid() -> Vec<GridConfig> {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut out = Vec::new();
    for (name, q) in [
        ("1-loop", Quiver::loops(1)),
        ("2-loop", Quiver::loops(2)),
        ("A2", Quiver::linear_a(2)),
        ("Kronecker", Quiver::kronecker()),
    ] {
        let n = q.num_vertices();
        out.push(GridConfig { name, quiver: q.clone(), theta: Stability::zero(n), mu: BigRational::zero() });
        if n == 2 {
            out.push(GridConfig { name, quiver: q, theta: Stability::new(vec![1, 0]), mu: half.clone() });
        }
    }
    out
}

/// Heights required by the grid: 4 at `p = 2` for one-vertex quivers,
/// 3 otherwise; `(2,2)` at `p = 2` is added for the two-vertex quivers.
fn in_grid(cfg: &GridConfig, alpha: &DimVector, p: u32) -> bool {
    let h = alpha.height();
    h <= 3 || (p == 2 && h == 4 && (cfg.quiver.num_vertices() == 1 || *alpha == dv(&[2, 2])))
}

struct GridRow {
    config: String,
    alpha: DimVector,
    p: u32,
    r_formula: BigRational,
    a_formula: BigRational,
    census: Census,
}

fn run_grid() -> Result<Vec<GridRow>, String> {
    let mut rows = Vec::new();
    for cfg in grid() {
        let ctx = CountingContext::new(cfg.quiver.clone(), cfg.theta.clone(), cfg.mu.clone(), 4).map_err(|e| e.to_string())?;
        let table = ctx.a_series().map_err(|e| e.to_string())?;
        for alpha in ctx.cone() {
            for p in [2u32, 3] {
                if !in_grid(&cfg, &alpha, p) {
                    continue;
                }
                let q = rat(p as i64);
                let c = census(&cfg.quiver, &alpha, &cfg.theta, p, &OracleConfig::default())
                    .map_err(|e| format!("{} {alpha} p={p}: {e}", cfg.name))?;
                rows.push(GridRow {
                    config: format!("{} θ={:?}", cfg.name, cfg.theta.theta),
                    alpha: alpha.clone(),
                    p,
                    r_formula: ctx.r_alpha(&alpha).unwrap().eval(&q).unwrap(),
                    a_formula: table.get(&alpha).unwrap().eval(&q),
                    census: c,
                });
            }
        }
    }
    Ok(rows)
}

fn criterion_3(rows: &[GridRow]) -> Outcome {
    for row in rows {
        let oracle = row.census.semistable_ratio();
        ensure(oracle == row.r_formula, || {
            format!("{} {} p={}: r = {} but oracle {}", row.config, row.alpha, row.p, row.r_formula, oracle)
        })?;
    }
    Ok(format!("{} (config, α, p) cells", rows.len()))
}

fn criterion_4(rows: &[GridRow]) -> Outcome {
    for row in rows {
        let oracle = row.census.stable_classes(1).map_err(|e| e.to_string())?;
        ensure(BigRational::from_integer(oracle.clone()) == row.a_formula, || {
            format!("{} {} p={}: a = {} but oracle {}", row.config, row.alpha, row.p, row.a_formula, oracle)
        })?;
    }
    let one = CountingContext::unstable(Quiver::loops(1), 6).unwrap().a_series().unwrap();
    for d in 1..=6u32 {
        let expected = if d == 1 { QPoly::from_ints(&[0, 1]) } else { QPoly::zero() };
        ensure(one.get(&dv(&[d])) == Some(&expected), || format!("1-loop a_{d} is not {expected}"))?;
    }
    Ok(format!("{} cells; 1-loop a_1 = q, a_d = 0 for 2 <= d <= 6", rows.len()))
}

fn criterion_5() -> Outcome {
    let mut n = 0;
    for cfg in grid() {
        let ctx = CountingContext::new(cfg.quiver, cfg.theta, cfg.mu, 6).map_err(|e| e.to_string())?;
        let r = ctx.r_series().unwrap();
        let a = ctx.a_series().map_err(|e| e.to_string())?;
        let inv = RationalFunction::one_minus_q_pow(1).inv().unwrap();
        let e = a.to_series(ctx.trunc()).unwrap().scale(&inv).exp().unwrap();
        ensure(r.twisted_mul(&e, ctx.form()).unwrap() == Series::one(ctx.trunc()), || {
            format!("{}: r ∘ Exp(a/(1-q)) != 1", cfg.name)
        })?;
        n += 1;
    }
    Ok(format!("{n} configurations to height 6"))
}

fn criterion_6() -> Outcome {
    let mut quivers: Vec<(String, Quiver)> = (1..=4).map(|m| (format!("{m}-loop"), Quiver::loops(m))).collect();
    quivers.push(("A2".into(), Quiver::linear_a(2)));
    for (name, q) in quivers {
        let ctx = CountingContext::unstable(q, 6).unwrap();
        let table = ctx.a_series().map_err(|e| e.to_string())?;
        let direct = f_series(&ctx, &table).map_err(|e| format!("{name}: {e}"))?;
        let rec = f_recursive(&ctx).map_err(|e| format!("{name}: {e}"))?;
        ensure(direct == rec, || format!("{name}: f_series != f_recursive"))?;
        let slice = specialize_at_one(&direct, 0).map_err(|e| format!("{name}: {e}"))?.remove(0);
        ensure(slice == f_at_one(&ctx).unwrap(), || format!("{name}: f_at_one != Taylor slice"))?;
    }
    Ok("m-loop (m = 1..4) and A2 to height 6, no pole at q = 1".into())
}

fn criterion_7() -> Outcome {
    for m in 1..=4u32 {
        let ctx = CountingContext::unstable(Quiver::loops(m), 8).unwrap();
        let expected = Series::from_terms(ctx.trunc(), [(dv(&[0]), rat(1)), (dv(&[1]), rat(-(m as i64)))]).unwrap();
        ensure(f_at_one(&ctx).unwrap() == expected, || format!("{m}-loop: q = 1 recursion"))?;
        let table = ctx.a_series().map_err(|e| e.to_string())?;
        let f = f_series(&ctx, &table).map_err(|e| e.to_string())?;
        let slice = specialize_at_one(&f, 0).unwrap().remove(0);
        ensure(slice == expected, || format!("{m}-loop: Taylor specialization"))?;
        for n in 1..=8u32 {
            // coefficient of x^n in (1-x)^e (1 - m x), e = n - mn - 1
            let e = n as i64 - (m * n) as i64 - 1;
            let c = |k: u32| -> BigInt { binomial(e, k) * if k % 2 == 0 { 1 } else { -1 } };
            let total: BigInt = c(n) - BigInt::from(m) * c(n - 1);
            ensure(total.is_zero(), || format!("m={m} n={n}: coefficient {total}"))?;
        }
    }
    Ok("1 - mx to height 8 for m = 1..4 by both routes; binomial identity for n <= 8".into())
}

/// Aperiodic words of length `d` over `m` letters, up to rotation.
fn brute_force_necklaces(m: u32, d: u32) -> BigInt {
    let total = (m as u64).pow(d);
    let mut aperiodic = 0u64;
    for code in 0..total {
        let mut w = Vec::with_capacity(d as usize);
        let mut c = code;
        for _ in 0..d {
            w.push(c % m as u64);
            c /= m as u64;
        }
        let periodic = (1..d).any(|s| d % s == 0 && (0..d as usize).all(|i| w[i] == w[(i + s as usize) % d as usize]));
        if !periodic {
            aperiodic += 1;
        }
    }
    BigInt::from(aperiodic / d as u64)
}

fn criterion_8() -> Outcome {
    for m in [2u32, 3] {
        let table = CountingContext::unstable(Quiver::loops(m), 6).unwrap().a_series().map_err(|e| e.to_string())?;
        for d in 2..=6u32 {
            let c = table.get(&dv(&[d])).unwrap().in_qminus1_basis();
            let at = |i: usize| c.get(i).cloned().unwrap_or_else(BigRational::zero);
            let expected = brute_force_necklaces(m, d);
            ensure(at(0).is_zero(), || format!("m={m} d={d}: constant term {}", at(0)))?;
            ensure(at(1) == BigRational::from_integer(expected.clone()), || {
                format!("m={m} d={d}: linear term {} vs {expected} necklaces", at(1))
            })?;
        }
    }
    Ok("m = 2, 3 and 2 <= d <= 6".into())
}

fn criterion_9() -> Outcome {
    let mut notes = Vec::new();
    for m in [2u32, 3] {
        let ctx = CountingContext::unstable(Quiver::loops(m), 6).unwrap();
        let table = ctx.a_series().map_err(|e| e.to_string())?;
        let report = positivity_report(&table, Some(m));
        let negative: Vec<String> =
            report.entries.iter().filter(|e| !e.all_nonnegative).map(|e| e.alpha.to_string()).collect();
        notes.push(if negative.is_empty() {
            format!("m={m}: a_d in N[q-1] for d <= 6")
        } else {
            format!("m={m}: negative (q-1)-coefficients at {}", negative.join(" "))
        });
        let slices = q1_expansion(&ctx, 2).map_err(|e| e.to_string())?;
        let f1_ok = slices[1] == f1_conjecture_series(m as u64, ctx.trunc());
        notes.push(format!("m={m}: f_1 {} C(m,2)t(t-1)/(1-mt)^2 to t^6", if f1_ok { "matches" } else { "differs from" }));
        for (n, f) in slices.iter().enumerate() {
            let d = scaled_degree_report(f, m as u64, n);
            let seen = d.observed_degree.map_or("none".to_string(), |k| k.to_string());
            notes.push(format!("m={m}: deg_t f_{n}(1-mt)^{} = {seen} (height {})", d.exponent, d.max_height));
        }
    }
    Ok(format!("reported: {}", notes.join("; ")))
}

fn criterion_10() -> Outcome {
    let q = Quiver::loops(2);
    let ctx = CountingContext::unstable(q.clone(), 4).unwrap();
    let table = ctx.a_series().map_err(|e| e.to_string())?;
    let one = dv(&[1]);
    let a1 = table.get(&one).unwrap().clone();
    let s: Vec<QPoly> = (1..=4).map(|r| s_alpha_r(&table, &one, r)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    for r in 1..=4u32 {
        let mut sum = QPoly::zero();
        for k in divisors(r) {
            sum = sum.add(&s[k as usize - 1].mul(&QPoly::from_ints(&[k as i64])));
        }
        ensure(sum == a1.adams(r), || format!("ψ_{r}(a_1) != Σ k s_(k,k)"))?;
    }
    let t = ctx.trunc().clone();
    let strategy = prop::collection::vec(prop::option::weighted(0.6, coeff()), 4);
    let g = Series::constant(&t, RationalFunction::from_qpoly(&a1));
    let pow_check = run_cases("Pow(f, a_1) = Π ψ_r(f)^{s_(r,r)}", strategy, |cs| {
        let terms = (1..=4u32).zip(cs).filter_map(|(d, c)| c.map(|c| (dv(&[d]), c)));
        let f = Series::one(&t).add(&Series::from_terms(&t, terms.collect::<Vec<_>>()).unwrap()).unwrap();
        let lhs = f.pow(&g).unwrap();
        let mut rhs = Series::one(&t);
        for r in 1..=4u32 {
            let e = Series::constant(&t, RationalFunction::from_qpoly(&s[r as usize - 1]));
            rhs = rhs.mul(&f.adams(r).pow_plain(&e).unwrap()).unwrap();
        }
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })?;
    for p in [2u32, 3] {
        let oracle = count_stable_with_r(&q, &dv(&[2]), &Stability::zero(1), p, 2, &OracleConfig::default())
            .map_err(|e| e.to_string())?;
        let formula = s[1].eval(&rat(p as i64));
        ensure(BigRational::from_integer(oracle.clone()) == formula, || {
            format!("s_(2,2) at p={p}: formula {formula}, oracle {oracle}")
        })?;
    }
    Ok(format!("Adams identity for r <= 4; {pow_check}; s_(2,2) oracle match at p = 2, 3"))
}

fn report(n: u32, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panic: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match result {
        Ok(detail) => {
            println!("criterion {n:2}: PASS ({secs:.1}s) {detail}");
            true
        }
        Err(detail) => {
            println!("criterion {n:2}: FAIL ({secs:.1}s) {detail}");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut ok = BTreeSet::new();
    let mut record = |n: u32, passed: bool| {
        if !passed {
            ok.insert(n);
        }
    };
    record(1, report(1, criterion_1));
    record(2, report(2, criterion_2));
    let grid = run_grid();
    record(3, report(3, || criterion_3(grid.as_ref().map_err(Clone::clone)?)));
    record(4, report(4, || criterion_4(grid.as_ref().map_err(Clone::clone)?)));
    record(5, report(5, criterion_5));
    record(6, report(6, criterion_6));
    record(7, report(7, criterion_7));
    record(8, report(8, criterion_8));
    record(9, report(9, criterion_9));
    record(10, report(10, criterion_10));
    if ok.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {ok:?}");
        ExitCode::FAILURE
    }
}
