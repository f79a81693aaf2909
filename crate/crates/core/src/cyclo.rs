//! Exact arithmetic in the cyclotomic field Q(zeta_24).
//!
//! Elements are stored in the power basis `1, z, ..., z^7` where `z = e(1/24)`
//! is a root of the 24th cyclotomic polynomial `x^8 - x^4 + 1`. The
//! coordinates share one positive denominator and the whole representation is
//! kept reduced, so equality is coordinate comparison.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Degree of Q(zeta_24) over Q.
pub const DEGREE: usize = 8;

/// Units of (Z/24Z)^*, indexing the Galois group.
pub const GALOIS_UNITS: [i64; 8] = [1, 5, 7, 11, 13, 17, 19, 23];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    num: [BigInt; DEGREE],
    den: BigInt,
}

/// `x^j mod (x^8 - x^4 + 1)` for `j = 0..24`.
fn zeta_table() -> &'static [[i64; DEGREE]; 24] {
    static TABLE: OnceLock<[[i64; DEGREE]; 24]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [[0i64; DEGREE]; 24];
        let mut cur = [0i64; DEGREE];
        cur[0] = 1;
        for row in table.iter_mut() {
            *row = cur;
            // multiply by x, then fold x^8 = x^4 - 1
            let top = cur[DEGREE - 1];
            for j in (1..DEGREE).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            cur[4] += top;
            cur[0] -= top;
        }
        table
    })
}

fn reduce_wide(mut wide: Vec<BigInt>) -> [BigInt; DEGREE] {
    for k in (DEGREE..wide.len()).rev() {
        let c = std::mem::take(&mut wide[k]);
        if c.is_zero() {
            continue;
        }
        wide[k - 4] += &c;
        wide[k - 8] -= c;
    }
    wide.truncate(DEGREE);
    let mut out: [BigInt; DEGREE] = Default::default();
    for (o, w) in out.iter_mut().zip(wide) {
        *o = w;
    }
    out
}

impl CycNum {
    fn from_parts(num: [BigInt; DEGREE], den: BigInt) -> Self {
        let mut x = CycNum { num, den };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in self.num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in self.num.iter() {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    return;
                }
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for c in self.num.iter_mut() {
                if !c.is_zero() {
                    *c /= &g;
                }
            }
        }
    }

    pub fn zero() -> Self {
        CycNum { num: Default::default(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        let mut num: [BigInt; DEGREE] = Default::default();
        num[0] = n;
        CycNum { num, den: BigInt::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        let mut num: [BigInt; DEGREE] = Default::default();
        num[0] = r.numer().clone();
        Self::from_parts(num, r.denom().clone())
    }

    pub fn from_ratio(r: Rational64) -> Self {
        Self::from_rational(&BigRational::new((*r.numer()).into(), (*r.denom()).into()))
    }

    /// Builds an element from its eight power-basis coordinates.
    pub fn from_coords(coords: &[BigRational; DEGREE]) -> Self {
        let den = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num: [BigInt; DEGREE] = Default::default();
        for (n, c) in num.iter_mut().zip(coords) {
            *n = c.numer() * (&den / c.denom());
        }
        Self::from_parts(num, den)
    }

    pub fn coords(&self) -> [BigRational; DEGREE] {
        let mut out: [BigRational; DEGREE] = Default::default();
        for (o, n) in out.iter_mut().zip(&self.num) {
            *o = BigRational::new(n.clone(), self.den.clone());
        }
        out
    }

    /// `z^j` for the generator `z = e(1/24)`.
    pub fn zeta_pow(j: i64) -> Self {
        let row = &zeta_table()[j.rem_euclid(24) as usize];
        let mut num: [BigInt; DEGREE] = Default::default();
        for (n, &c) in num.iter_mut().zip(row) {
            *n = BigInt::from(c);
        }
        CycNum { num, den: BigInt::one() }
    }

    pub fn i() -> Self {
        Self::zeta_pow(6)
    }

    /// Gaussian rational `re + im*i`.
    pub fn gaussian(re: &BigRational, im: &BigRational) -> Self {
        Self::from_rational(re) + Self::from_rational(im) * Self::i()
    }

    /// `e(r) = exp(2 pi i r)`; requires `24 r` to be an integer.
    pub fn root_of_unity(r: Rational64) -> Result<Self> {
        let scaled = r * Rational64::from_integer(24);
        if !scaled.is_integer() {
            return Err(Error::NotA24thRoot(r));
        }
        Ok(Self::zeta_pow(scaled.to_integer()))
    }

    /// Square root of a nonnegative rational whose squarefree kernel divides 6.
    pub fn sqrt_rational(r: &BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::SqrtNotRepresentable(r.to_integer().to_i64().unwrap_or(i64::MIN)));
        }
        if r.is_zero() {
            return Ok(Self::zero());
        }
        // sqrt(a/b) = sqrt(a*b)/b
        let n = r.numer() * r.denom();
        let (square_root, kernel) = split_square(&n);
        let radical = match kernel.to_i64() {
            Some(1) => Self::one(),
            // 2 cos(pi/4), 2 cos(pi/6)
            Some(2) => Self::zeta_pow(3) + Self::zeta_pow(21),
            Some(3) => Self::zeta_pow(2) + Self::zeta_pow(22),
            Some(6) => {
                (Self::zeta_pow(3) + Self::zeta_pow(21)) * (Self::zeta_pow(2) + Self::zeta_pow(22))
            }
            other => return Err(Error::SqrtNotRepresentable(other.unwrap_or(i64::MAX))),
        };
        Ok(radical.scale(&BigRational::new(square_root, r.denom().clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        (self.is_rational() && self.den.is_one()).then(|| self.num[0].clone())
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() || self.is_zero() {
            return Self::zero();
        }
        let mut num = self.num.clone();
        for c in num.iter_mut() {
            if !c.is_zero() {
                *c *= r.numer();
            }
        }
        Self::from_parts(num, &self.den * r.denom())
    }

    fn scale_int(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        let mut num = self.num.clone();
        for c in num.iter_mut() {
            if !c.is_zero() {
                *c *= n;
            }
        }
        Self::from_parts(num, self.den.clone())
    }

    /// Applies the automorphism `z -> z^k`, `gcd(k, 24) = 1`.
    pub fn galois(&self, k: i64) -> Self {
        let mut wide: [BigInt; DEGREE] = Default::default();
        let table = zeta_table();
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &table[(j as i64 * k).rem_euclid(24) as usize];
            for (w, &t) in wide.iter_mut().zip(row) {
                if t != 0 {
                    *w += c * t;
                }
            }
        }
        Self::from_parts(wide, self.den.clone())
    }

    /// Complex conjugation, `z -> z^{-1}`.
    pub fn conj(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        self.galois(23)
    }

    /// Field norm to Q.
    pub fn norm(&self) -> BigRational {
        let prod = GALOIS_UNITS.iter().fold(Self::one(), |acc, &k| acc * self.galois(k));
        prod.to_rational().expect("norm lies in Q")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            let r = BigRational::new(self.den.clone(), self.num[0].clone());
            return Ok(Self::from_rational(&r));
        }
        // a^{-1} = (prod of the other conjugates) / N(a)
        let cofactor =
            GALOIS_UNITS[1..].iter().fold(Self::one(), |acc, &k| acc * self.galois(k));
        let n = (self * &cofactor).to_rational().expect("norm lies in Q");
        Ok(cofactor.scale(&n.recip()))
    }

    pub fn pow(&self, mut e: i64) -> Result<Self> {
        let mut base = if e < 0 {
            e = -e;
            self.inv()?
        } else {
            self.clone()
        };
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Floating-point approximation, for display only.
    pub fn to_complex_approx(&self) -> (f64, f64) {
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let (mut re, mut im) = (0.0, 0.0);
        for (j, c) in self.num.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN) / den;
            let angle = std::f64::consts::TAU * j as f64 / 24.0;
            re += v * angle.cos();
            im += v * angle.sin();
        }
        (re, im)
    }

    /// `num/den` strings for each coordinate.
    pub fn to_strings(&self) -> [String; DEGREE] {
        let mut out: [String; DEGREE] = Default::default();
        for (o, c) in out.iter_mut().zip(self.coords()) {
            *o = format!("{}/{}", c.numer(), c.denom());
        }
        out
    }

    pub fn from_strings(items: &[String]) -> Result<Self> {
        if items.len() != DEGREE {
            return Err(Error::InvalidArgument(format!(
                "expected {DEGREE} coordinates, got {}",
                items.len()
            )));
        }
        let mut coords: [BigRational; DEGREE] = Default::default();
        for (c, s) in coords.iter_mut().zip(items) {
            *c = parse_big_rational(s)?;
        }
        Ok(Self::from_coords(&coords))
    }
}

/// Writes `n = s^2 * k` with `k` squarefree; returns `(s, k)`.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.abs();
    let mut root = BigInt::one();
    let mut kernel = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut count = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            count += 1;
        }
        for _ in 0..count / 2 {
            root *= &p;
        }
        if count % 2 == 1 {
            kernel *= &p;
        }
        p += 1;
    }
    kernel *= rest;
    (root, kernel)
}

pub fn parse_big_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::RationalParse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| err())?)),
    }
}

pub fn parse_rational64(s: &str) -> Result<Rational64> {
    let r = parse_big_rational(s)?;
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
        _ => Err(Error::RationalParse(s.to_string())),
    }
}

/// `"a/b"`, the canonical string form of an exact rational.
pub fn ratio_string(r: &Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ser_ratio<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(r))
}

impl Default for CycNum {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CycNum {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigInt> for CycNum {
    fn from(n: BigInt) -> Self {
        Self::from_bigint(n)
    }
}

impl From<Rational64> for CycNum {
    fn from(r: Rational64) -> Self {
        Self::from_ratio(r)
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &'a CycNum) -> CycNum {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            let mut num = self.num.clone();
            for (a, b) in num.iter_mut().zip(&rhs.num) {
                if !b.is_zero() {
                    *a += b;
                }
            }
            return CycNum::from_parts(num, self.den.clone());
        }
        let mut num: [BigInt; DEGREE] = Default::default();
        for ((o, a), b) in num.iter_mut().zip(&self.num).zip(&rhs.num) {
            *o = a * &rhs.den + b * &self.den;
        }
        CycNum::from_parts(num, &self.den * &rhs.den)
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &'a CycNum) -> CycNum {
        if self.is_zero() || rhs.is_zero() {
            return CycNum::zero();
        }
        if self.is_rational() {
            return rhs.scale(&BigRational::new(self.num[0].clone(), self.den.clone()));
        }
        if rhs.is_rational() {
            return self.scale(&BigRational::new(rhs.num[0].clone(), rhs.den.clone()));
        }
        let mut wide = vec![BigInt::zero(); 2 * DEGREE - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    wide[i + j] += a * b;
                }
            }
        }
        CycNum::from_parts(reduce_wide(wide), &self.den * &rhs.den)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        let mut num = self.num.clone();
        for c in num.iter_mut() {
            *c = -std::mem::take(c);
        }
        CycNum { num, den: self.den.clone() }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &'a CycNum) -> CycNum {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &'a CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, rhs: &CycNum) {
        *self = &*self * rhs;
    }
}

impl Mul<&BigInt> for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &BigInt) -> CycNum {
        self.scale_int(rhs)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycNum {
    /// Rationals print plainly, Gaussian rationals as `a+b*i`, anything else
    /// as a polynomial in `z = e(1/24)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = self.coords();
        if self.is_rational() {
            return write!(f, "{}", fmt_rational(&coords[0]));
        }
        let gaussian = coords.iter().enumerate().all(|(j, c)| j == 0 || j == 6 || c.is_zero());
        if gaussian {
            let (re, im) = (&coords[0], &coords[6]);
            let imag = if im.is_one() {
                "i".to_string()
            } else if (-im).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rational(im))
            };
            if re.is_zero() {
                return write!(f, "{imag}");
            }
            let sep = if imag.starts_with('-') { "" } else { "+" };
            return write!(f, "{}{}{}", fmt_rational(re), sep, imag);
        }
        let mut first = true;
        for (j, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = match j {
                0 => fmt_rational(c),
                1 => format!("{}*z", fmt_rational(c)),
                _ => format!("{}*z^{}", fmt_rational(c), j),
            };
            if !first && !body.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{body}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum({self})")
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(deserializer)?;
        CycNum::from_strings(&items).map_err(serde::de::Error::custom)
    }
}
