//! Truncated Puiseux-Laurent series in one variable `q` with coefficients in
//! Q(zeta_24).
//!
//! A [`QSeries`] carries a ramification index `N`: every exponent is an
//! integer multiple of `1/N`. Precision is explicit. A series with precision
//! `p` knows every coefficient below `q^p` and nothing at or above it; asking
//! for a coefficient at or beyond `p` is an error rather than a silent zero.
//! Exact series (finite sums, the zero series) carry no precision bound.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cyclo::CycNum;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct QSeries {
    ram: i64,
    /// Exponent times `ram` -> nonzero coefficient.
    terms: BTreeMap<i64, CycNum>,
    /// Precision times `ram`; `None` for exact series.
    prec: Option<i64>,
}

fn ratio(k: i64, n: i64) -> Rational64 {
    Rational64::new(k, n)
}

/// `k/n` for an exponent expressed at ramification `n`, rescaled to `target`.
fn rekey(k: i64, from: i64, to: i64) -> i64 {
    debug_assert_eq!(to % from, 0);
    k * (to / from)
}

fn key_of(e: Rational64, ram: i64) -> Option<i64> {
    let scaled = e * Rational64::from_integer(ram);
    scaled.is_integer().then(|| scaled.to_integer())
}

/// Ceiling of `e * ram`, the smallest key at or above exponent `e`.
fn ceil_key(e: Rational64, ram: i64) -> i64 {
    (e * Rational64::from_integer(ram)).ceil().to_integer()
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl QSeries {
    pub fn zero() -> Self {
        QSeries { ram: 1, terms: BTreeMap::new(), prec: None }
    }

    pub fn one() -> Self {
        Self::monomial(CycNum::one(), Rational64::zero())
    }

    /// Exact single term `c q^e`.
    pub fn monomial(c: CycNum, e: Rational64) -> Self {
        let ram = *e.denom();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(*e.numer(), c);
        }
        QSeries { ram, terms, prec: None }
    }

    /// Exact finite sum.
    pub fn exact<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Rational64, CycNum)>,
    {
        let items: Vec<_> = terms.into_iter().collect();
        let ram = items.iter().fold(1i64, |acc, (e, _)| acc.lcm(e.denom()));
        let mut out = QSeries { ram, terms: BTreeMap::new(), prec: None };
        for (e, c) in items {
            let k = key_of(e, ram).expect("ram is a common denominator");
            out.add_term(k, &c);
        }
        out
    }

    /// Series known below `q^prec`; terms at or above `prec` are dropped.
    pub fn from_terms<I>(terms: I, prec: Rational64) -> Self
    where
        I: IntoIterator<Item = (Rational64, CycNum)>,
    {
        Self::exact(terms).truncate(prec)
    }

    fn add_term(&mut self, k: i64, c: &CycNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-expresses the series at a ramification index that `ram` divides.
    fn at_ram(&self, ram: i64) -> QSeries {
        if ram == self.ram {
            return self.clone();
        }
        QSeries {
            ram,
            terms: self.terms.iter().map(|(&k, c)| (rekey(k, self.ram, ram), c.clone())).collect(),
            prec: self.prec.map(|p| rekey(p, self.ram, ram)),
        }
    }

    pub fn ram(&self) -> i64 {
        self.ram
    }

    pub fn prec(&self) -> Option<Rational64> {
        self.prec.map(|p| ratio(p, self.ram))
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent with a nonzero stored coefficient.
    pub fn ord(&self) -> Option<Rational64> {
        self.terms.keys().next().map(|&k| ratio(k, self.ram))
    }

    pub fn leading(&self) -> Option<(Rational64, &CycNum)> {
        self.terms.iter().next().map(|(&k, c)| (ratio(k, self.ram), c))
    }

    pub fn terms(&self) -> impl Iterator<Item = (Rational64, &CycNum)> + '_ {
        self.terms.iter().map(move |(&k, c)| (ratio(k, self.ram), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `q^e`; an error at or beyond the precision.
    pub fn coeff(&self, e: Rational64) -> Result<CycNum> {
        if let Some(p) = self.prec() {
            if e >= p {
                return Err(Error::InsufficientPrecision { requested: e, prec: p });
            }
        }
        Ok(key_of(e, self.ram)
            .and_then(|k| self.terms.get(&k).cloned())
            .unwrap_or_else(CycNum::zero))
    }

    /// Drops every term at or above `q^p` and lowers the precision to `p`.
    pub fn truncate(&self, p: Rational64) -> QSeries {
        let ram = self.ram.lcm(p.denom());
        let mut out = self.at_ram(ram);
        let pk = key_of(p, ram).expect("lcm ram");
        let pk = min_prec(out.prec, Some(pk));
        if let Some(pk) = pk {
            out.terms = out.terms.split_off(&i64::MIN).into_iter().filter(|(k, _)| *k < pk).collect();
        }
        out.prec = pk;
        out
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            ram: self.ram,
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
            prec: self.prec,
        }
    }

    pub fn scale(&self, c: &CycNum) -> QSeries {
        if c.is_zero() {
            return QSeries { ram: self.ram, terms: BTreeMap::new(), prec: self.prec };
        }
        QSeries {
            ram: self.ram,
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let ram = self.ram.lcm(&other.ram);
        let mut out = self.at_ram(ram);
        let b = other.at_ram(ram);
        out.prec = min_prec(out.prec, b.prec);
        for (k, c) in b.terms {
            out.add_term(k, &c);
        }
        if let Some(p) = out.prec {
            out.terms.retain(|&k, _| k < p);
        }
        out
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    /// Cauchy product. The result is known below
    /// `min(prec(a) + ord(b), prec(b) + ord(a))`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let ram = self.ram.lcm(&other.ram);
        let a = self.at_ram(ram);
        let b = other.at_ram(ram);
        let (oa, ob) = match (a.terms.keys().next(), b.terms.keys().next()) {
            (Some(&x), Some(&y)) => (x, y),
            _ => return QSeries { ram, terms: BTreeMap::new(), prec: None },
        };
        let prec = min_prec(a.prec.map(|p| p + ob), b.prec.map(|p| p + oa));
        let mut acc: BTreeMap<i64, CycNum> = BTreeMap::new();
        let bt: Vec<(i64, &CycNum)> = b.terms.iter().map(|(&k, c)| (k, c)).collect();
        for (&ka, ca) in a.terms.iter() {
            for &(kb, cb) in bt.iter() {
                let k = ka + kb;
                if prec.is_some_and(|p| k >= p) {
                    break;
                }
                let prod = ca * cb;
                match acc.entry(k) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += &prod;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        QSeries { ram, terms: acc, prec }
    }

    /// Multiplicative inverse. Exact inputs must be monomials; use
    /// [`QSeries::inv_to`] for exact polynomials.
    pub fn inv(&self) -> Result<QSeries> {
        let (v, _) = self.leading().ok_or(Error::NotInvertible)?;
        match self.prec {
            Some(p) => self.inv_rel(p - key_of(v, self.ram).unwrap()),
            None if self.terms.len() == 1 => self.inv_rel(i64::MAX),
            None => Err(Error::InfiniteExpansion(self.to_string())),
        }
    }

    /// Inverse known at least below `q^prec`.
    pub fn inv_to(&self, prec: Rational64) -> Result<QSeries> {
        let (v, _) = self.leading().ok_or(Error::NotInvertible)?;
        // inverse of c q^v (1 + ...) known to relative precision r has prec r - v
        let rel = prec + v;
        let ram = self.ram.lcm(rel.denom());
        let me = self.at_ram(ram);
        let r = ceil_key(rel, ram).max(1);
        let have = me.prec.map(|p| p - key_of(v, ram).unwrap()).unwrap_or(i64::MAX);
        me.inv_rel(r.min(have))
    }

    /// Inverse to relative precision `rel` (in ram units).
    fn inv_rel(&self, rel: i64) -> Result<QSeries> {
        let (&vk, lead) = self.terms.iter().next().ok_or(Error::NotInvertible)?;
        let lead_inv = lead.inv()?;
        if self.terms.len() == 1 && rel == i64::MAX {
            let mut terms = BTreeMap::new();
            terms.insert(-vk, lead_inv);
            return Ok(QSeries { ram: self.ram, terms, prec: None });
        }
        let u: Vec<(i64, CycNum)> = self
            .terms
            .iter()
            .skip(1)
            .filter(|(&k, _)| k - vk < rel)
            .map(|(&k, c)| (k - vk, c * &lead_inv))
            .collect();
        let len = rel.max(0) as usize;
        let mut b: Vec<CycNum> = Vec::with_capacity(len);
        for n in 0..len as i64 {
            if n == 0 {
                b.push(CycNum::one());
                continue;
            }
            let mut s = CycNum::zero();
            for (j, uj) in u.iter() {
                if *j > n {
                    break;
                }
                let prev = &b[(n - j) as usize];
                if !prev.is_zero() {
                    s += &(uj * prev);
                }
            }
            b.push(-s);
        }
        let terms = b
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n as i64 - vk, c * &lead_inv))
            .collect();
        Ok(QSeries { ram: self.ram, terms, prec: Some(rel - 2 * vk + vk) })
    }

    pub fn pow(&self, n: i64) -> Result<QSeries> {
        if n == 0 {
            return Ok(QSeries::one());
        }
        let base = if n < 0 { self.inv()? } else { self.clone() };
        Ok(base.pow_nonneg(n.unsigned_abs()))
    }

    fn pow_nonneg(&self, mut e: u64) -> QSeries {
        let mut acc = QSeries::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitutes `tau -> m tau`: every exponent and the precision scale by `m`.
    pub fn rescale(&self, m: Rational64) -> Result<QSeries> {
        if m <= Rational64::zero() {
            return Err(Error::NonPositiveExponent(m));
        }
        let (a, b) = (*m.numer(), *m.denom());
        let big_ram = self.ram * b;
        let mut g = big_ram.gcd(&a);
        // keep integrality of every key a*k/g
        for &k in self.terms.keys().chain(self.prec.iter()) {
            g = g.gcd(&(k * a));
        }
        let g = g.gcd(&big_ram).max(1);
        let g = if a % g == 0 { g } else { 1 };
        Ok(QSeries {
            ram: big_ram / g,
            terms: self.terms.iter().map(|(&k, c)| (k * a / g, c.clone())).collect(),
            prec: self.prec.map(|p| p * a / g),
        })
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: Rational64) -> QSeries {
        let ram = self.ram.lcm(e.denom());
        let me = self.at_ram(ram);
        let d = key_of(e, ram).unwrap();
        QSeries {
            ram,
            terms: me.terms.into_iter().map(|(k, c)| (k + d, c)).collect(),
            prec: me.prec.map(|p| p + d),
        }
    }

    /// Multiplies the coefficient at `q^e` by `e(step * e)`.
    pub fn twist(&self, step: Rational64) -> Result<QSeries> {
        let mut terms = BTreeMap::new();
        for (&k, c) in self.terms.iter() {
            let phase = CycNum::root_of_unity(step * ratio(k, self.ram))?;
            terms.insert(k, c * &phase);
        }
        Ok(QSeries { ram: self.ram, terms, prec: self.prec })
    }

    /// Terms whose exponent `e` satisfies `pred(e)`; precision unchanged.
    pub fn filter_exponents<F: Fn(Rational64) -> bool>(&self, pred: F) -> QSeries {
        QSeries {
            ram: self.ram,
            terms: self
                .terms
                .iter()
                .filter(|(&k, _)| pred(ratio(k, self.ram)))
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
            prec: self.prec,
        }
    }

    /// True when every coefficient below `min(prec(a), prec(b))` agrees.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        let ram = self.ram.lcm(&other.ram);
        let a = self.at_ram(ram);
        let b = other.at_ram(ram);
        let p = min_prec(a.prec, b.prec);
        let below = |k: &i64| p.is_none_or(|p| *k < p);
        let lhs: Vec<_> = a.terms.iter().filter(|(k, _)| below(k)).collect();
        let rhs: Vec<_> = b.terms.iter().filter(|(k, _)| below(k)).collect();
        lhs == rhs
    }

    /// `(1 - c q^e)^n` to precision `prec` via the binomial series.
    pub fn one_minus_monomial_pow(
        e: Rational64,
        c: &CycNum,
        n: i64,
        prec: Rational64,
    ) -> Result<QSeries> {
        if e <= Rational64::zero() {
            return Err(Error::NonPositiveExponent(e));
        }
        let mut terms = Vec::new();
        let mut binom = BigRational::one();
        let mut power = CycNum::one();
        let minus_c = -c;
        let mut j: i64 = 0;
        while e * Rational64::from_integer(j) < prec {
            if binom.is_zero() {
                break;
            }
            terms.push((e * Rational64::from_integer(j), power.scale(&binom)));
            // C(n, j+1) = C(n, j) (n - j) / (j + 1)
            binom *= BigRational::new(BigInt::from(n - j), BigInt::from(j + 1));
            power = &power * &minus_c;
            j += 1;
        }
        Ok(QSeries::from_terms(terms, prec))
    }
}

impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.prec() != other.prec() {
            return false;
        }
        let ram = self.ram.lcm(&other.ram);
        self.at_ram(ram).terms == other.at_ram(ram).terms
    }
}

fn fmt_exp(e: Rational64) -> String {
    if e.is_integer() {
        e.to_integer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

impl fmt::Display for QSeries {
    /// `c_e * q^(e) + ...` in increasing exponent order, then `O(q^(prec))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms()
            .map(|(e, c)| {
                let s = c.to_string();
                let needs_paren = s.len() > 1 && s[1..].contains(['+', '-']);
                let s = if needs_paren { format!("({s})") } else { s };
                format!("{s} * q^({})", fmt_exp(e))
            })
            .collect();
        if let Some(p) = self.prec() {
            parts.push(format!("O(q^({}))", fmt_exp(p)));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries[ram {}]({self})", self.ram)
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    exp: String,
    coeff: &'a CycNum,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermJson<'_>> = self
            .terms()
            .map(|(e, c)| TermJson { exp: format!("{}/{}", e.numer(), e.denom()), coeff: c })
            .collect();
        let mut st = serializer.serialize_struct("QSeries", 3)?;
        st.serialize_field("prec", &self.prec().map(|p| format!("{}/{}", p.numer(), p.denom())))?;
        st.serialize_field("ram", &self.ram)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// Signed sum helper used by tests and callers building integer series.
pub fn integer_series<I: IntoIterator<Item = (i64, i64)>>(terms: I, prec: i64) -> QSeries {
    QSeries::from_terms(
        terms.into_iter().map(|(e, c)| (Rational64::from_integer(e), CycNum::from_int(c))),
        Rational64::from_integer(prec),
    )
}

impl QSeries {
    /// Coefficients as integers below the precision, for integer series.
    pub fn integer_coeffs(&self) -> Option<Vec<(Rational64, BigInt)>> {
        self.terms().map(|(e, c)| c.to_integer().map(|n| (e, n))).collect()
    }

    pub fn abs_max_coeff_bits(&self) -> u64 {
        self.terms()
            .filter_map(|(_, c)| c.to_integer())
            .map(|n| n.abs().bits())
            .max()
            .unwrap_or(0)
    }
}
