//! Randomized property suites, shared by the `properties` and `acceptance`
//! targets. Every suite runs 1000 cases from a fixed ChaCha seed.

use borcherds::cyclo::CycNum;
use borcherds::series::QSeries;
use borcherds::weyl::{chamber_margin, in_chamber, in_positive_cone, ChamberPoint, KVector};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

pub const CASES: u32 = 1000;

pub type Suite = fn() -> Result<(), String>;

fn runner(seed: u8) -> TestRunner {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn report<V: std::fmt::Debug>(r: Result<(), TestError<V>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

pub fn cyc() -> impl Strategy<Value = CycNum> {
    prop::collection::vec((-6i64..=6, 1i64..=4), 8).prop_map(|v| {
        let coords: [BigRational; 8] =
            std::array::from_fn(|j| BigRational::new(BigInt::from(v[j].0), BigInt::from(v[j].1)));
        CycNum::from_coords(&coords)
    })
}

/// Sparse series in `q^{1/ram}` with small coefficients.
pub fn series() -> impl Strategy<Value = QSeries> {
    (
        prop::sample::select(vec![1i64, 2, 4]),
        prop::collection::vec((-3i64..12, -5i64..=5, 0usize..8), 1..6),
        -2i64..14,
    )
        .prop_map(|(ram, raw, p)| {
            let prec = Rational64::new(p, ram).max(Rational64::new(raw[0].0 + 1, ram));
            let terms = raw.into_iter().map(|(e, c, j)| {
                let coeff = &CycNum::from_int(c) * &CycNum::zeta_pow(j as i64);
                (Rational64::new(e, ram), coeff)
            });
            QSeries::from_terms(terms, prec)
        })
        .prop_filter("no stored terms", |s| !s.is_zero())
}

pub fn series_ring_axioms() -> Result<(), String> {
    report(runner(11).run(&(series(), series(), series()), |(a, b, c)| {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&b.add(&c)).agrees_with(&a.mul(&b).add(&a.mul(&c))));
        prop_assert!(a.sub(&a).terms().next().is_none());
        prop_assert_eq!(a.mul(&QSeries::one()), a.clone());
        let inv = a.inv().unwrap();
        prop_assert!(a.mul(&inv).agrees_with(&QSeries::one()));
        Ok(())
    }))
}

pub fn cyclotomic_field_axioms() -> Result<(), String> {
    report(runner(23).run(&(cyc(), cyc(), cyc()), |(a, b, c)| {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &CycNum::one(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).galois(5), &a.galois(5) * &b.galois(5));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), CycNum::one());
            prop_assert!(a.norm().is_positive());
            prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        }
        Ok(())
    }))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Points `(y1, y3, y4)` on a grid of mesh 1/64 with `y1` reaching well below
/// the chamber floor.
fn chamber_point() -> impl Strategy<Value = (u64, ChamberPoint)> {
    (1u64..=6, -64i64..=64, -64i64..=64, -640i64..=128).prop_map(|(m, a, b, c)| {
        let y3 = rat(a, 64);
        let y4 = rat(b, 64);
        let y1 = rat(c, 64) - BigRational::from_integer(BigInt::from(m as i64 + 2));
        (m, ChamberPoint::new(y1, y3, y4))
    })
}

/// A point with margin above 1/1000 stays on the same side of every wall under
/// perturbations of size 10^-6 in each coordinate.
pub fn chamber_perturbation_stability() -> Result<(), String> {
    let eps = rat(1, 1_000_000);
    let safe = rat(1, 1000);
    report(runner(37).run(&(chamber_point(), 0u8..27), |((m, p), dir)| {
        prop_assume!(-p.domain_value() > safe);
        let inside = in_chamber(m, &p).unwrap();
        let margin = chamber_margin(m, &p).unwrap();
        prop_assert_eq!(inside, margin.is_positive());
        prop_assume!(margin.abs() > safe);
        let step = |d: u8| match d {
            0 => -eps.clone(),
            1 => BigRational::zero(),
            _ => eps.clone(),
        };
        let (d1, d3, d4) = (dir % 3, (dir / 3) % 3, dir / 9);
        let q = ChamberPoint::new(&p.y1 + step(d1), &p.y3 + step(d3), &p.y4 + step(d4));
        prop_assert_eq!(in_chamber(m, &q).unwrap(), inside);
        Ok(())
    }))
}

pub fn cone_antisymmetry() -> Result<(), String> {
    report(runner(41).run(&(-20i64..=20, -20i64..=20, -20i64..=20, -20i64..=20), |(a, b, c, d)| {
        let l = KVector::new(a, b, c, d);
        let (pos, neg) = (in_positive_cone(&l), in_positive_cone(&l.neg()));
        if (a, b, c, d) == (0, 0, 0, 0) {
            prop_assert!(!pos && !neg);
        } else {
            prop_assert!(pos != neg);
        }
        prop_assert_eq!(l.norm(), l.neg().norm());
        prop_assert_eq!(l.eligible(1), l.neg().eligible(1));
        Ok(())
    }))
}

#[allow(dead_code)]
pub fn all_suites() -> Vec<(&'static str, Suite)> {
    vec![
        ("series ring axioms", series_ring_axioms),
        ("cyclotomic field axioms", cyclotomic_field_axioms),
        ("chamber perturbation stability", chamber_perturbation_stability),
        ("cone antisymmetry", cone_antisymmetry),
    ]
}
