//! Vector-valued lifts of scalar forms for the Weil representation attached
//! to the discriminant module Z[i]/2Z[i] with `Q(z) = z zbar / 4`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arith::twisted_sum;
use crate::basis::{basis_family, BasisElement, Cusp};
use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::eta::SL2Matrix;
use crate::series::QSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiscClass {
    Zero,
    One,
    I,
    OnePlusI,
}

impl DiscClass {
    pub const ALL: [DiscClass; 4] = [DiscClass::Zero, DiscClass::One, DiscClass::I, DiscClass::OnePlusI];

    /// Class of `x + y i`.
    pub fn from_xy(x: i64, y: i64) -> DiscClass {
        match (x.rem_euclid(2), y.rem_euclid(2)) {
            (0, 0) => DiscClass::Zero,
            (1, 0) => DiscClass::One,
            (0, 1) => DiscClass::I,
            _ => DiscClass::OnePlusI,
        }
    }

    pub fn xy(self) -> (i64, i64) {
        match self {
            DiscClass::Zero => (0, 0),
            DiscClass::One => (1, 0),
            DiscClass::I => (0, 1),
            DiscClass::OnePlusI => (1, 1),
        }
    }

    /// `Q(mu)` modulo 1.
    pub fn norm(self) -> Rational64 {
        let (x, y) = self.xy();
        Rational64::new(x * x + y * y, 4)
    }

    /// `(mu, beta)` modulo 1.
    pub fn pairing(self, other: DiscClass) -> Rational64 {
        let ((a, b), (c, d)) = (self.xy(), other.xy());
        let r = Rational64::new(a * c + b * d, 2);
        r - r.floor()
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            DiscClass::Zero => "0",
            DiscClass::One => "1",
            DiscClass::I => "i",
            DiscClass::OnePlusI => "1+i",
        }
    }
}

impl fmt::Display for DiscClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DiscClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DiscClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown class '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VVForm {
    comps: [QSeries; 4],
}

impl VVForm {
    pub fn new(comps: [QSeries; 4]) -> Self {
        VVForm { comps }
    }

    pub fn comp(&self, mu: DiscClass) -> &QSeries {
        &self.comps[mu.index()]
    }

    /// `c(n, phi_mu)`.
    pub fn coeff(&self, n: Rational64, mu: DiscClass) -> Result<CycNum> {
        self.comp(mu).coeff(n)
    }

    pub fn scale(&self, c: &CycNum) -> VVForm {
        VVForm { comps: self.comps.clone().map(|s| s.scale(c)) }
    }

    pub fn add(&self, other: &VVForm) -> VVForm {
        VVForm { comps: std::array::from_fn(|j| self.comps[j].add(&other.comps[j])) }
    }

    /// Smallest precision over the components.
    pub fn prec(&self) -> Option<Rational64> {
        self.comps.iter().filter_map(|s| s.prec()).min()
    }

    /// Terms with negative exponent, ordered by class then exponent.
    pub fn principal_part(&self) -> Vec<(DiscClass, Rational64, CycNum)> {
        DiscClass::ALL
            .into_iter()
            .flat_map(|mu| {
                self.comp(mu)
                    .terms()
                    .take_while(|(e, _)| *e < Rational64::zero())
                    .map(move |(e, c)| (mu, e, c.clone()))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// Every stored exponent of `phi_mu` is congruent to `-Q(mu)` modulo 1.
    pub fn support_ok(&self) -> bool {
        DiscClass::ALL.into_iter().all(|mu| {
            self.comp(mu).terms().all(|(e, _)| (e + mu.norm()).is_integer())
        })
    }
}

impl Serialize for VVForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        for mu in DiscClass::ALL {
            map.serialize_entry(mu.name(), self.comp(mu))?;
        }
        map.end()
    }
}

/// `(F_0, F_2, F_3)`: the parts of a `q_4`-series with `4e` congruent to 0, 2, 3 mod 4.
pub fn split_components(s: &QSeries) -> Result<(QSeries, QSeries, QSeries)> {
    if 4 % s.ram() != 0 {
        return Err(Error::InvalidArgument(format!("ramification {} does not divide 4", s.ram())));
    }
    let part = |j: i64| {
        s.filter_exponents(move |e| {
            let k = e * Rational64::from_integer(4);
            k.is_integer() && k.to_integer().rem_euclid(4) == j
        })
    };
    Ok((part(0), part(2), part(3)))
}

fn minus_two_i() -> CycNum {
    CycNum::i().scale(&BigRational::from_integer(BigInt::from(-2)))
}

/// Assembles the lift from `F`, `F|S` and `F|delta`.
pub fn assemble_lift(f: &QSeries, f_s: &QSeries, f_half: &QSeries) -> Result<VVForm> {
    let (f0, f2, f3) = split_components(f_s)?;
    let c = minus_two_i();
    let phi0 = f0.scale(&c).add(f);
    let phi1 = f3.scale(&c);
    let phi1i = f2.scale(&c).sub(f_half);
    Ok(VVForm::new([phi0, phi1.clone(), phi1, phi1i]))
}

/// The Gamma0(4)-lift of an element with poles only at infinity, odd `k`.
pub fn gamma0_lift(f: &BasisElement, prec: Rational64) -> Result<VVForm> {
    if f.k.is_multiple_of(2) {
        return Err(Error::EvenWeightLift(f.k));
    }
    if f.cusp != Cusp::Inf {
        return Err(Error::InvalidArgument("lift needs poles only at infinity".into()));
    }
    let f_s = f.slash(&SL2Matrix::S, prec)?;
    let f_half = f.slash(&SL2Matrix::DELTA, prec)?;
    let own = if f.expansion.prec().is_some_and(|p| p < prec) {
        return Err(Error::InsufficientPrecision {
            requested: prec,
            prec: f.expansion.prec().unwrap(),
        });
    } else {
        f.expansion.truncate(prec)
    };
    assemble_lift(&own, &f_s, &f_half)
}

/// `F_{k,m}` for `m` in `1..=count` together with their lifts.
pub fn lift_family(k: u32, count: usize, prec: Rational64) -> Result<Vec<(BasisElement, VVForm)>> {
    basis_family(Cusp::Inf, k, count, prec)?
        .into_iter()
        .map(|f| {
            let v = gamma0_lift(&f, prec)?;
            Ok((f, v))
        })
        .collect()
}

/// `sum_n c(-n) sum_{d|n} (64 chi(n/d) + 4 chi(d)) d^2`, weight `-1` only.
pub fn k1_constant_term(principal: &BTreeMap<u64, CycNum>) -> CycNum {
    let mut acc = CycNum::zero();
    for (&n, c) in principal {
        acc += &(c * &CycNum::from_int(twisted_sum(n, 64, 4)));
    }
    acc
}

/// `-(8i)^{k+1} sum_{n >= (k+1)/2} c(-n) P_{k, n-(k+1)/2}(0) + c(0)` for odd
/// `k`, with `principal` mapping `n` to `c(-n)`. For `k = 1` the divisor-sum
/// form is evaluated as well and must agree.
pub fn constant_term_formula(k: u32, principal: &BTreeMap<u64, CycNum>, c0: &CycNum) -> Result<CycNum> {
    if k.is_multiple_of(2) {
        return Err(Error::EvenWeightLift(k));
    }
    let first = (k as u64).div_ceil(2);
    let top = principal.keys().copied().filter(|&n| n >= first).max();
    let mut sum = CycNum::zero();
    if let Some(top) = top {
        // P_{k,j} for j = 0..=top-first
        let fam = basis_family(Cusp::Inf, k, (top - first + 1) as usize, Rational64::zero())?;
        for (&n, c) in principal.range(first..) {
            let p0 = fam[(n - first) as usize].poly.at_zero();
            sum += &(c * p0);
        }
    }
    let eight_i = CycNum::i().scale(&BigRational::from_integer(BigInt::from(8)));
    let value = &(-&eight_i.pow(k as i64 + 1)?) * &sum + c0.clone();
    if k == 1 {
        let alt = k1_constant_term(principal);
        if alt != value {
            return Err(Error::Consistency(format!(
                "constant term {value} disagrees with divisor-sum form {alt}"
            )));
        }
    }
    Ok(value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeilGenerator {
    T,
    S,
}

pub type Matrix4 = [[CycNum; 4]; 4];

/// Matrix of `rho(g)` in the basis `phi_0, phi_1, phi_i, phi_{1+i}`; column
/// `mu` is the image of `phi_mu`.
pub fn weil_rep(g: WeilGenerator) -> Matrix4 {
    let mut m: Matrix4 = Default::default();
    match g {
        WeilGenerator::T => {
            for mu in DiscClass::ALL {
                m[mu.index()][mu.index()] = CycNum::root_of_unity(-mu.norm()).expect("quarter");
            }
        }
        WeilGenerator::S => {
            let half_i = CycNum::i().scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
            for mu in DiscClass::ALL {
                for beta in DiscClass::ALL {
                    let e = CycNum::root_of_unity(mu.pairing(beta)).expect("half");
                    m[beta.index()][mu.index()] = &half_i * &e;
                }
            }
        }
    }
    m
}

pub fn mat_mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out: Matrix4 = Default::default();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for (l, bl) in b.iter().enumerate() {
                *cell += &(&a[i][l] * &bl[j]);
            }
        }
    }
    out
}
