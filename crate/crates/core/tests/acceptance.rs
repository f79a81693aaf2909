//! Acceptance suite: one pass/fail line per criterion. Exits nonzero if any
//! criterion fails.

#[path = "common/props.rs"]
mod props;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use borcherds::arith::{chi_m4, divisors, sigma_chi, twisted_sum};
use borcherds::basis::{basis_family, eisenstein_g, p1m_at_zero, pairing_combination, Cusp, EisensteinVariant};
use borcherds::cyclo::CycNum;
use borcherds::eta::{generator, theta_series, EtaQuotient, Generator, SL2Matrix, ThetaKind};
use borcherds::lift::{constant_term_formula, k1_constant_term, lift_family, DiscClass};
use borcherds::product::{
    block_mismatch, boundary_limit, fj_mul, lift_of_f1, product_from_lift, product_weight, required_lift_prec,
    scale_weyl,
};
use borcherds::series::QSeries;
use borcherds::weyl::{positive_reps, weyl_vector};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn int(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lead(s: &QSeries) -> Option<(Rational64, CycNum)> {
    s.leading().map(|(e, c)| (e, c.clone()))
}

fn criterion_1() -> Outcome {
    let prec = int(50);
    let expect = [
        (Generator::Theta1, int(1)),
        (Generator::Theta2, int(0)),
        (Generator::PhiInf, int(-1)),
        (Generator::Theta3, int(0)),
        (Generator::Phi0, int(1)),
        (Generator::PhiHalf, int(1)),
    ];
    for (g, e) in expect {
        let s = generator(g, prec).map_err(|x| x.to_string())?;
        ensure(lead(&s) == Some((e, CycNum::one())), || format!("{} leads with {:?}", g.name(), lead(&s)))?;
    }
    let t00 = theta_series(ThetaKind::T00, prec);
    let t01 = theta_series(ThetaKind::T01, prec);
    let t10 = theta_series(ThetaKind::T10, prec);
    let p = |s: &QSeries, n| s.pow(n).unwrap();
    let sixteenth = CycNum::from_ratio(r(1, 16));
    let g = |x| generator(x, prec).unwrap();
    let same = |a: &QSeries, b: &QSeries| {
        a.agrees_with(b) && a.prec().is_some_and(|x| x >= prec) && b.prec().is_some_and(|x| x >= prec)
    };
    ensure(same(&g(Generator::Theta2), &p(&t00, 2)), || "theta2 != theta00^2".into())?;
    ensure(same(&g(Generator::Theta1), &p(&t10, 4).scale(&sixteenth)), || "theta1 != theta10^4/16".into())?;
    ensure(same(&g(Generator::Theta3), &p(&t01, 4)), || "theta3 != theta01^4".into())?;
    ensure(same(&p(&t00, 4), &p(&t01, 4).add(&p(&t10, 4))), || "Jacobi identity fails".into())
}

fn f11() -> EtaQuotient {
    Generator::Theta2.eta_quotient().mul(&Generator::Theta1.eta_quotient().pow(-1).unwrap())
}

fn criterion_2() -> Outcome {
    let s = f11().slash(-1, &SL2Matrix::S, int(2)).map_err(|e| e.to_string())?;
    let c = CycNum::i().scale(&BigRational::from_integer(BigInt::from(32)));
    let golden = [
        (int(0), 1),
        (r(1, 4), 12),
        (r(1, 2), 76),
        (r(3, 4), 352),
        (int(1), 1356),
        (r(5, 4), 4600),
        (r(3, 2), 14176),
        (r(7, 4), 40512),
    ];
    let want = QSeries::from_terms(golden.map(|(e, k)| (e, &c * &CycNum::from_int(k))), int(2));
    ensure(s == want, || format!("S-slash: {s}"))?;
    let d = f11().slash(-1, &SL2Matrix::DELTA, int(3)).map_err(|e| e.to_string())?;
    let want = QSeries::from_terms(
        [(r(1, 2), 64), (r(3, 2), -512), (r(5, 2), 2688)].map(|(e, k)| (e, CycNum::from_int(k))),
        int(3),
    );
    ensure(d == want, || format!("delta-slash: {d}"))
}

fn criterion_3() -> Outcome {
    for (k, count) in [(1u32, 8usize), (3, 4)] {
        let first = (k as u64).div_ceil(2);
        let fam = lift_family(k, count, int(1)).map_err(|e| e.to_string())?;
        for (f, v) in fam {
            let pole = first + f.m as u64 - 1;
            let principal = BTreeMap::from([(pole, CycNum::one())]);
            let own = f.expansion.coeff(int(0)).map_err(|e| e.to_string())?;
            let formula = constant_term_formula(k, &principal, &own).map_err(|e| e.to_string())?;
            let series = v.coeff(int(0), DiscClass::Zero).map_err(|e| e.to_string())?;
            ensure(series == formula, || format!("k={k} m={}: series {series} vs formula {formula}", f.m))?;
            if k == 1 && f.m == 1 {
                ensure(series == CycNum::from_int(68), || format!("c(0, phi_0) = {series}"))?;
                ensure(k1_constant_term(&principal) == series, || "divisor sum disagrees".into())?;
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    for k in 1..=5u32 {
        let fam = basis_family(Cusp::Inf, k, 10, int(3)).map_err(|e| e.to_string())?;
        for f in fam {
            f.check_shape().map_err(|e| format!("k={k} m={}: {e}", f.m))?;
            if k % 2 == 1 {
                let half = f.slash(&SL2Matrix::DELTA, int(2)).map_err(|e| e.to_string())?;
                let ord = half.ord();
                ensure(ord.is_none_or(|o| o > int(0)), || format!("k={k} m={}: delta-slash ord {ord:?}", f.m))?;
            }
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let fam = basis_family(Cusp::Inf, 1, 21, int(1)).map_err(|e| e.to_string())?;
    let g = eisenstein_g(EisensteinVariant::TwistNOverD, int(23));
    for m in 0..=20u64 {
        let n = m + 1;
        let d: i64 = divisors(n).into_iter().map(|d| chi_m4((n / d) as i64) * (d * d) as i64).sum();
        let d1: i64 = divisors(n).into_iter().map(|d| chi_m4(d as i64) * (d * d) as i64).sum();
        let f = &fam[m as usize];
        let poly = f.poly.at_zero().clone();
        ensure(poly == CycNum::from_int(d) && p1m_at_zero(m) == d, || format!("P_1,{m}(0) = {poly}, want {d}"))?;
        ensure(g.coeff(int(n as i64)).unwrap() == CycNum::from_int(d), || format!("g coefficient at {n}"))?;
        if m >= 1 {
            let h = pairing_combination(m as u32, int(1)).map_err(|e| e.to_string())?;
            let a = h.coeff(int(-1)).map_err(|e| e.to_string())?;
            ensure(-a.clone() == CycNum::from_int(d), || format!("m={m}: -a(-1) = {}", -a))?;
        }
        let c0 = f.expansion.coeff(int(0)).map_err(|e| e.to_string())?;
        ensure(c0 == CycNum::from_int(4 * d1), || format!("m={m}: constant term {c0}, want {}", 4 * d1))?;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let w = weyl_vector(1).map_err(|e| e.to_string())?;
    ensure(
        (w.rho_e3, w.rho_e4, w.rho_v0.re, w.rho_v0.im) == (r(-23, 8), int(2), int(-1), int(0)),
        || format!("weyl_vector(1) = {w:?}"),
    )?;
    for m in 1..=50 {
        let w = weyl_vector(m).map_err(|e| e.to_string())?;
        ensure((w.rho_e3 * int(24)).is_integer() && (w.rho_e4 * int(6)).is_integer(), || {
            format!("m={m}: denominators {w:?}")
        })?;
    }
    for m in 1..=200 {
        let n = positive_reps(m).len() as i64;
        ensure(n == sigma_chi(m), || format!("m={m}: {n} representations vs {}", sigma_chi(m)))?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let p = int(5);
    let mut failures = Vec::new();
    for (m, weight) in [(1u64, 34i64), (2, 130), (3, 240)] {
        let lift = lift_of_f1(m, required_lift_prec(m, p, p).unwrap()).map_err(|e| e.to_string())?;
        let c0 = lift.coeff(int(0), DiscClass::Zero).map_err(|e| e.to_string())?;
        if product_weight(m) != weight || c0 != CycNum::from_int(2 * weight) || twisted_sum(m, 64, 4) != 2 * weight {
            failures.push(format!("(a) m={m}: weight {} vs {weight}, c(0,phi_0) = {c0}", product_weight(m)));
        }
        let w = weyl_vector(m).map_err(|e| e.to_string())?;
        let psi = product_from_lift(m, &lift, &w, p, p).map_err(|e| e.to_string())?;
        let lim = boundary_limit(m, p).map_err(|e| e.to_string())?;
        if let Some((t, got, want)) = block_mismatch(m, &psi, &lim).map_err(|e| e.to_string())? {
            failures.push(format!("(b) m={m}: block coefficient at t^({t}) is {got}, boundary limit has {want}"));
        }
        let two = CycNum::from_int(2);
        let doubled =
            product_from_lift(m, &lift.scale(&two), &scale_weyl(&w, 2), p, p).map_err(|e| e.to_string())?;
        let square = fj_mul(&psi, &psi).map_err(|e| e.to_string())?;
        if doubled != square {
            failures.push(format!("(c) m={m}: doubled lift does not square the product"));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    for (name, suite) in props::all_suites() {
        if let Err(e) = suite() {
            failures.push(format!("{name}: {e}"));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 generator expansions and theta identities", criterion_1, Duration::from_secs(5)),
        ("2 slash golden values", criterion_2, Duration::from_secs(5)),
        ("3 lift constant terms", criterion_3, Duration::from_secs(30)),
        ("4 basis triangularity", criterion_4, Duration::from_secs(60)),
        ("5 pairing identities", criterion_5, Duration::from_secs(60)),
        ("6 Weyl data", criterion_6, Duration::from_secs(5)),
        ("7 product consistency", criterion_7, Duration::from_secs(300)),
        ("8 property suites", criterion_8, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= budget, || format!("took {elapsed:.2?}, budget {budget:?}"))
        });
        match outcome {
            Ok(()) => println!("criterion {name}: PASS ({elapsed:.2?})"),
            Err(e) => {
                failed += 1;
                println!("criterion {name}: FAIL ({elapsed:.2?}) {e}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
