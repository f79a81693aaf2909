//! Lattice-side data for the unitary group of signature (2,1) over Q(i): the
//! Weyl chamber `W_m`, the positive cone, Weyl vectors and Heegner divisors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};
use serde::Serialize;

pub use crate::arith::{sigma1, sigma_chi, twisted_sum};
use crate::arith::exact_sqrt;
use crate::cyclo::ser_ratio;
use crate::error::{Error, Result};

/// `l1 e3 - l2 e4 + (l3 + i l4)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KVector {
    pub l1: i64,
    pub l2: i64,
    pub l3: i64,
    pub l4: i64,
}

impl KVector {
    pub fn new(l1: i64, l2: i64, l3: i64, l4: i64) -> Self {
        KVector { l1, l2, l3, l4 }
    }

    pub fn norm(&self) -> Rational64 {
        Rational64::new(-4 * self.l1 * self.l2 + self.l3 * self.l3 + self.l4 * self.l4, 4)
    }

    pub fn neg(&self) -> Self {
        KVector::new(-self.l1, -self.l2, -self.l3, -self.l4)
    }

    /// Norm `m` with even `l3, l4`, or nonpositive norm.
    pub fn eligible(&self, m: u64) -> bool {
        let q = self.norm();
        (q == Rational64::from_integer(m as i64) && self.l3 % 2 == 0 && self.l4 % 2 == 0)
            || q <= Rational64::zero()
    }
}

/// Lexicographic sign test on `(l2, l1, l3, l4)`.
pub fn in_positive_cone(lambda: &KVector) -> bool {
    let key = [lambda.l2, lambda.l1, lambda.l3, lambda.l4];
    key.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// The point `y1 e3 + e4 + (y3 + i y4)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberPoint {
    pub y1: BigRational,
    pub y3: BigRational,
    pub y4: BigRational,
}

impl ChamberPoint {
    pub fn new(y1: BigRational, y3: BigRational, y4: BigRational) -> Self {
        ChamberPoint { y1, y3, y4 }
    }

    pub fn from_ratios(y1: Rational64, y3: Rational64, y4: Rational64) -> Self {
        let big = |r: Rational64| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
        ChamberPoint::new(big(y1), big(y3), big(y4))
    }

    /// `y1 + y3^2 + y4^2`, negative exactly on the domain.
    pub fn domain_value(&self) -> BigRational {
        &self.y1 + &self.y3 * &self.y3 + &self.y4 * &self.y4
    }
}

/// All `(t, h)` with `t^2 + h^2 = m`, ordered.
pub fn two_square_reps(m: u64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let bound = exact_sqrt(m).unwrap_or(((m as f64).sqrt()) as u64) as i64 + 1;
    for t in -bound..=bound {
        for h in -bound..=bound {
            if (t * t + h * h) as u64 == m {
                out.push((t, h));
            }
        }
    }
    out
}

fn min_shifted_square(y: &BigRational) -> BigRational {
    // min over integers r of r^2 + 2 r y, attained at floor or ceil of -y
    let target = -y;
    [target.floor(), target.ceil()]
        .into_iter()
        .map(|r| &r * &r + BigRational::from_integer(BigInt::from(2)) * &r * y)
        .min()
        .expect("two candidates")
}

/// Smallest slack among the strict inequalities cutting out `W_m`; the point
/// lies in the chamber exactly when this is positive.
pub fn chamber_margin(m: u64, p: &ChamberPoint) -> Result<BigRational> {
    if !p.domain_value().is_negative() {
        return Err(Error::NotInDomain(p.domain_value().to_string()));
    }
    let big = |n: i64| BigRational::from_integer(BigInt::from(n));
    let mut slacks = Vec::new();
    let floor_min = min_shifted_square(&p.y3) + min_shifted_square(&p.y4) - big(m as i64);
    slacks.push(floor_min - &p.y1);
    for (t, h) in two_square_reps(m) {
        slacks.push(big(1) + big(2 * t) * &p.y3 + big(2 * h) * &p.y4);
        if t > 0 {
            slacks.push(big(t) * &p.y3 + big(h) * &p.y4);
        }
    }
    if exact_sqrt(m).is_some() {
        slacks.push(p.y4.clone());
    }
    Ok(slacks.into_iter().min().expect("at least one slack"))
}

pub fn in_chamber(m: u64, p: &ChamberPoint) -> Result<bool> {
    Ok(chamber_margin(m, p)?.is_positive())
}

/// Gaussian rational `re + im i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Gaussian {
    #[serde(serialize_with = "ser_ratio")]
    pub re: Rational64,
    #[serde(serialize_with = "ser_ratio")]
    pub im: Rational64,
}

impl Gaussian {
    pub fn new(re: Rational64, im: Rational64) -> Self {
        Gaussian { re, im }
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re, -self.im)
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", self.im);
        }
        let sep = if self.im < Rational64::zero() { "" } else { "+" };
        write!(f, "{}{}{}*i", self.re, sep, self.im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeylVector {
    #[serde(serialize_with = "ser_ratio")]
    pub rho_e3: Rational64,
    #[serde(serialize_with = "ser_ratio")]
    pub rho_e4: Rational64,
    pub rho_v0: Gaussian,
}

/// `(t, h)` with `t > 0`, `h >= 0`, `t^2 + h^2 = m`.
pub fn positive_reps(m: u64) -> Vec<(i64, i64)> {
    two_square_reps(m).into_iter().filter(|&(t, h)| t > 0 && h >= 0).collect()
}

pub fn weyl_vector(m: u64) -> Result<WeylVector> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let ts = twisted_sum(m, 16, 1);
    let sc = sigma_chi(m);
    let conv: i64 = (1..m).map(|k| sigma_chi(k) * sigma1(m - k)).sum();
    let rho_e3 = Rational64::new(-ts, 6) - Rational64::new(sc, 24);
    let rho_e4 = Rational64::new(sc - 6 * sigma1(m) - 24 * conv + ts, 6);
    let t_sum: i64 = positive_reps(m).into_iter().map(|(t, _)| t).sum();
    Ok(WeylVector {
        rho_e3,
        rho_e4,
        rho_v0: Gaussian::new(Rational64::from_integer(-t_sum), Rational64::zero()),
    })
}

/// A component of `H(m, 0)`: the integer data and its two defining real
/// equations, as coefficient vectors on `(1, Re sigma, Im sigma, Re tau, Im tau)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeegnerSolution {
    pub tuple: [i64; 6],
    pub eq_re: [i64; 5],
    pub eq_im: [i64; 5],
}

impl HeegnerSolution {
    fn new(t: [i64; 6]) -> Self {
        let [r1, s1, r2, s2, r3, s3] = t;
        HeegnerSolution {
            tuple: t,
            eq_re: [r1, 2 * r2, 2 * s2, s3, -r3],
            eq_im: [s1, -2 * s2, 2 * r2, r3, s3],
        }
    }
}

/// `(r1, s1, r2, s2, r3, s3)` with entries bounded by `height` and
/// `r1 r3 + s1 s3 + r2^2 + s2^2 = m`, in lexicographic order.
pub fn heegner_solutions(m: u64, height: u64) -> Vec<HeegnerSolution> {
    let h = height as i64;
    let m = m as i64;
    let mut out = Vec::new();
    for r1 in -h..=h {
        for s1 in -h..=h {
            for r2 in -h..=h {
                for s2 in -h..=h {
                    for r3 in -h..=h {
                        let rest = m - r1 * r3 - r2 * r2 - s2 * s2;
                        if s1 == 0 {
                            if rest == 0 {
                                out.extend((-h..=h).map(|s3| HeegnerSolution::new([r1, s1, r2, s2, r3, s3])));
                            }
                        } else if rest.is_multiple_of(&s1) {
                            let s3 = rest / s1;
                            if s3.abs() <= h {
                                out.push(HeegnerSolution::new([r1, s1, r2, s2, r3, s3]));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}
