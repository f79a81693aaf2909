//! Borcherds products on the unitary group U(2,1) over Q(i), expanded as
//! truncated series in `q = e(tau)`, `t = e(i)` and `e(sigma u)`.
//!
//! Precision is tracked on a two-parameter region: a term `q^a t^b` is known
//! when `a < prec_q` and `b + slope a < prec_t`. Every factor of the product
//! other than the leading monomial has `a >= 0` and `b + m a >= 0`, so the
//! product is well defined modulo the complement of such a region.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::twisted_sum;
use crate::basis::canonical_basis_inf;
use crate::cyclo::{ratio_string, CycNum};
use crate::error::{Error, Result};
use crate::lift::{gamma0_lift, DiscClass, VVForm};
use crate::weyl::{two_square_reps, weyl_vector, Gaussian, WeylVector};

/// Scale of the stored q- and t-exponents.
const DEN: i64 = 24;

/// `q^(q24/24) t^(t24/24) e(sigma (w_re + i w_im)/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FJMonomial {
    pub q24: i64,
    pub t24: i64,
    pub w_re2: i64,
    pub w_im2: i64,
}

impl FJMonomial {
    pub const ONE: FJMonomial = FJMonomial { q24: 0, t24: 0, w_re2: 0, w_im2: 0 };

    pub fn new(q: Rational64, t: Rational64, w: Gaussian) -> Result<Self> {
        let scaled = |r: Rational64, d: i64, what: &str| {
            let s = r * Rational64::from_integer(d);
            if s.is_integer() {
                Ok(s.to_integer())
            } else {
                Err(Error::InvalidArgument(format!("{what} exponent {r} outside 1/{d} Z")))
            }
        };
        Ok(FJMonomial {
            q24: scaled(q, DEN, "q")?,
            t24: scaled(t, DEN, "t")?,
            w_re2: scaled(w.re, 2, "w")?,
            w_im2: scaled(w.im, 2, "w")?,
        })
    }

    /// Integer exponents `q^n1 t^n2 e(sigma (a + b i)/2)`.
    pub fn integral(n1: i64, n2: i64, a: i64, b: i64) -> Self {
        FJMonomial { q24: DEN * n1, t24: DEN * n2, w_re2: a, w_im2: b }
    }

    pub fn qexp(&self) -> Rational64 {
        Rational64::new(self.q24, DEN)
    }

    pub fn texp(&self) -> Rational64 {
        Rational64::new(self.t24, DEN)
    }

    pub fn wexp(&self) -> Gaussian {
        Gaussian::new(Rational64::new(self.w_re2, 2), Rational64::new(self.w_im2, 2))
    }

    pub fn mul(&self, o: &FJMonomial) -> FJMonomial {
        FJMonomial {
            q24: self.q24 + o.q24,
            t24: self.t24 + o.t24,
            w_re2: self.w_re2 + o.w_re2,
            w_im2: self.w_im2 + o.w_im2,
        }
    }

    fn pow(&self, j: i64) -> FJMonomial {
        FJMonomial {
            q24: self.q24 * j,
            t24: self.t24 * j,
            w_re2: self.w_re2 * j,
            w_im2: self.w_im2 * j,
        }
    }

    fn v24(&self, slope: i64) -> i64 {
        self.t24 + slope * self.q24
    }
}

impl fmt::Display for FJMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^({}) t^({}) w^({})", self.qexp(), self.texp(), self.wexp())
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Truncated trivariate series with integer coefficients. `None` precisions
/// mean the series is exact in that direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FJSeries {
    terms: BTreeMap<FJMonomial, BigInt>,
    prec_q24: Option<i64>,
    prec_v24: Option<i64>,
    slope: i64,
}

impl FJSeries {
    pub fn one() -> Self {
        FJSeries::monomial(FJMonomial::ONE, BigInt::one())
    }

    pub fn monomial(x: FJMonomial, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(x, c);
        }
        FJSeries { terms, prec_q24: None, prec_v24: None, slope: 0 }
    }

    /// An empty region: everything at or beyond `(prec_q24, prec_v24)` is unknown.
    pub fn with_region(
        terms: impl IntoIterator<Item = (FJMonomial, BigInt)>,
        prec_q24: Option<i64>,
        prec_v24: Option<i64>,
        slope: i64,
    ) -> Self {
        let mut s = FJSeries { terms: BTreeMap::new(), prec_q24, prec_v24, slope };
        for (x, c) in terms {
            s.add_term(x, c);
        }
        s.prune();
        s
    }

    fn add_term(&mut self, x: FJMonomial, c: BigInt) {
        let e = self.terms.entry(x).or_insert_with(BigInt::zero);
        *e += c;
    }

    fn prune(&mut self) {
        let (pq, pv, slope) = (self.prec_q24, self.prec_v24, self.slope);
        self.terms.retain(|x, c| {
            !c.is_zero() && pq.is_none_or(|p| x.q24 < p) && pv.is_none_or(|p| x.v24(slope) < p)
        });
    }

    pub fn in_region(&self, x: &FJMonomial) -> bool {
        self.prec_q24.is_none_or(|p| x.q24 < p) && self.prec_v24.is_none_or(|p| x.v24(self.slope) < p)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FJMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, x: &FJMonomial) -> Result<BigInt> {
        if !self.in_region(x) {
            return Err(Error::IncompatiblePrecision(format!("{x} lies outside the known region")));
        }
        Ok(self.terms.get(x).cloned().unwrap_or_default())
    }

    /// Bound on q-exponents, as a rational.
    pub fn prec_q(&self) -> Option<Rational64> {
        self.prec_q24.map(|p| Rational64::new(p, DEN))
    }

    /// Bound on `texp + slope * qexp`.
    pub fn prec_t(&self) -> Option<Rational64> {
        self.prec_v24.map(|p| Rational64::new(p, DEN))
    }

    pub fn slope(&self) -> i64 {
        self.slope
    }

    fn min_q24(&self) -> Option<i64> {
        self.terms.keys().map(|x| x.q24).min()
    }

    pub fn scale(&self, c: &BigInt) -> FJSeries {
        let mut s = self.clone();
        for v in s.terms.values_mut() {
            *v *= c;
        }
        s.prune();
        s
    }

    /// Coefficients of `q^qexp e(sigma w)` as a t-series, keyed by `24 texp`.
    pub fn t_slice(&self, q24: i64, w_re2: i64, w_im2: i64) -> BTreeMap<i64, BigInt> {
        self.terms
            .iter()
            .filter(|(x, _)| x.q24 == q24 && x.w_re2 == w_re2 && x.w_im2 == w_im2)
            .map(|(x, c)| (x.t24, c.clone()))
            .collect()
    }

    /// Upper bound on `24 texp` for the known part of a fixed-q slice.
    pub fn t_bound_at(&self, q24: i64) -> Option<i64> {
        self.prec_v24.map(|p| p - self.slope * q24)
    }

    pub fn same_region(&self, other: &FJSeries) -> bool {
        self.prec_q24 == other.prec_q24 && self.prec_v24 == other.prec_v24 && self.slope == other.slope
    }
}

/// Cauchy product. The known regions are offset by the other factor's minimal
/// exponents, which act as valuations.
pub fn fj_mul(a: &FJSeries, b: &FJSeries) -> Result<FJSeries> {
    let slope = match (a.prec_v24, b.prec_v24) {
        (Some(_), Some(_)) if a.slope != b.slope => {
            return Err(Error::IncompatiblePrecision(format!("slopes {} and {}", a.slope, b.slope)));
        }
        (Some(_), _) => a.slope,
        (None, Some(_)) => b.slope,
        (None, None) => a.slope.max(b.slope),
    };
    if a.is_zero() || b.is_zero() {
        return Ok(FJSeries { terms: BTreeMap::new(), prec_q24: None, prec_v24: None, slope });
    }
    let (qa, qb) = (a.min_q24().unwrap(), b.min_q24().unwrap());
    let va = a.terms.keys().map(|x| x.v24(slope)).min().unwrap();
    let vb = b.terms.keys().map(|x| x.v24(slope)).min().unwrap();
    let prec_q24 = min_opt(a.prec_q24.map(|p| p + qb), b.prec_q24.map(|p| p + qa));
    let prec_v24 = min_opt(a.prec_v24.map(|p| p + vb), b.prec_v24.map(|p| p + va));
    let mut out = FJSeries { terms: BTreeMap::new(), prec_q24, prec_v24, slope };
    for (x, cx) in &a.terms {
        for (y, cy) in &b.terms {
            let z = x.mul(y);
            if out.in_region(&z) {
                out.add_term(z, cx * cy);
            }
        }
    }
    out.prune();
    Ok(out)
}

/// `c (c-1) ... (c-j+1) / j!`.
fn binomial(c: &BigInt, j: i64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..j {
        num *= c - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// `(1 - x)^e` on the region `(prec_q24, prec_v24)` with the given slope.
pub fn one_minus_pow(
    x: FJMonomial,
    e: &BigInt,
    prec_q24: Option<i64>,
    prec_v24: Option<i64>,
    slope: i64,
) -> Result<FJSeries> {
    let region = FJSeries { terms: BTreeMap::new(), prec_q24, prec_v24, slope };
    let grows = x.q24 > 0 || x.v24(slope) > 0;
    if x.q24 < 0 || x.v24(slope) < 0 {
        return Err(Error::InvalidArgument(format!("factor 1 - {x} has negative degree")));
    }
    let finite = !e.is_negative();
    if !finite && !(grows && ((prec_q24.is_some() && x.q24 > 0) || (prec_v24.is_some() && x.v24(slope) > 0))) {
        return Err(Error::InfiniteExpansion(format!("(1 - {x})^({e})")));
    }
    let mut terms = Vec::new();
    let mut j = 0i64;
    let mut complete = false;
    loop {
        if finite && BigInt::from(j) > *e {
            complete = true;
            break;
        }
        let xj = x.pow(j);
        if !region.in_region(&xj) {
            break;
        }
        let mut c = binomial(e, j);
        if j % 2 == 1 {
            c = -c;
        }
        terms.push((xj, c));
        j += 1;
    }
    Ok(if complete {
        FJSeries::with_region(terms, None, None, slope)
    } else {
        FJSeries::with_region(terms, prec_q24, prec_v24, slope)
    })
}

impl fmt::Display for FJSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c = c.to_string();
            if c.starts_with('-') {
                write!(f, "({c}) * {x}")?;
            } else {
                write!(f, "{c} * {x}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        match (self.prec_q(), self.prec_t()) {
            (None, None) => Ok(()),
            (pq, pt) => {
                let show = |p: Option<Rational64>| p.map_or("oo".to_string(), |r| r.to_string());
                write!(f, " + O(q^({}), t q^{}: {})", show(pq), self.slope, show(pt))
            }
        }
    }
}

struct TermJson<'a>(&'a FJMonomial, &'a BigInt);

impl Serialize for TermJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let w = self.0.wexp();
        let mut st = serializer.serialize_struct("term", 4)?;
        st.serialize_field("coeff", &CycNum::from_bigint(self.1.clone()))?;
        st.serialize_field("q", &ratio_string(&self.0.qexp()))?;
        st.serialize_field("t", &ratio_string(&self.0.texp()))?;
        st.serialize_field("w", &[ratio_string(&w.re), ratio_string(&w.im)])?;
        st.end()
    }
}

impl Serialize for FJSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("FJSeries", 4)?;
        st.serialize_field("prec_q", &self.prec_q().map(|r| ratio_string(&r)))?;
        st.serialize_field("prec_t", &self.prec_t().map(|r| ratio_string(&r)))?;
        st.serialize_field("t_slope", &self.slope)?;
        let terms: Vec<TermJson<'_>> = self.terms.iter().map(|(x, c)| TermJson(x, c)).collect();
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

fn integer_coeff(v: &VVForm, n: Rational64, mu: DiscClass) -> Result<BigInt> {
    let c = v.coeff(n, mu)?;
    c.to_integer().ok_or_else(|| Error::NotAnInteger(c.to_string()))
}

/// Truncation of a product computation, relative to the leading monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Region {
    pub prec_q24: i64,
    pub prec_v24: i64,
    pub slope: i64,
}

impl Region {
    /// `qexp < prec_q`, `texp + m qexp < prec_t`.
    pub fn new(m: u64, prec_q: Rational64, prec_t: Rational64) -> Result<Self> {
        if !prec_q.is_positive() || !prec_t.is_positive() {
            return Err(Error::InvalidArgument("product precisions must be positive".into()));
        }
        let up = |r: Rational64| (r * Rational64::from_integer(DEN)).ceil().to_integer();
        Ok(Region { prec_q24: up(prec_q), prec_v24: up(prec_t), slope: m as i64 })
    }

    fn contains(&self, n1: i64, n2: i64) -> bool {
        DEN * n1 < self.prec_q24 && DEN * (n2 + self.slope * n1) < self.prec_v24
    }

    /// Largest `n1 n2` over `A_5` indices inside the region.
    pub fn max_index(&self, m: i64) -> i64 {
        a5_rows(m, self).map(|(n1, n2)| n1 * n2).max().unwrap_or(0).max(0)
    }
}

/// `(n1, n2)` with `n1 >= 1`, `n1 n2 >= -m`, inside the region.
fn a5_rows(m: i64, r: &Region) -> impl Iterator<Item = (i64, i64)> + '_ {
    (1..).take_while(move |&n1| DEN * n1 < r.prec_q24).flat_map(move |n1| {
        let lo = Integer::div_ceil(&-m, &n1);
        (lo..).take_while(move |&n2| r.contains(n1, n2)).map(move |n2| (n1, n2))
    })
}

/// `e(i rho_e3 - rho_e4 tau + conj(rho) sigma)`.
pub fn factor_a1(w: &WeylVector) -> Result<FJSeries> {
    let x = FJMonomial::new(-w.rho_e4, w.rho_e3, w.rho_v0.conj())?;
    Ok(FJSeries::monomial(x, BigInt::one()))
}

fn a2_with(m: u64, e: &BigInt) -> Result<FJSeries> {
    match crate::arith::exact_sqrt(m) {
        Some(s) => one_minus_pow(FJMonomial::integral(0, 0, 0, -2 * s as i64), e, None, None, 0),
        None => Ok(FJSeries::one()),
    }
}

/// `1 - e(-i sigma sqrt(m))` for square `m`, else 1.
pub fn factor_a2(m: u64) -> Result<FJSeries> {
    a2_with(m, &BigInt::one())
}

fn a3_with(m: u64, e: &BigInt) -> Result<FJSeries> {
    let mut acc = FJSeries::one();
    for (k3, k4) in two_square_reps(m).into_iter().filter(|&(a, b)| a > 0 && b > 0) {
        for sign in [1, -1] {
            let f = one_minus_pow(FJMonomial::integral(0, 0, 2 * k3, 2 * sign * k4), e, None, None, 0)?;
            acc = fj_mul(&acc, &f)?;
        }
    }
    Ok(acc)
}

/// `prod [1 - e(sigma (k3 + i k4))][1 - e(sigma (k3 - i k4))]` over `k3, k4 > 0`.
pub fn factor_a3(m: u64) -> Result<FJSeries> {
    a3_with(m, &BigInt::one())
}

fn a4_with(m: u64, e: &BigInt, c00: &BigInt, r: &Region) -> Result<FJSeries> {
    let mut acc = FJSeries::one();
    let (pv, slope) = (Some(r.prec_v24), r.slope);
    for n2 in (1..).take_while(|&n2| DEN * n2 < r.prec_v24) {
        for (n3, n4) in two_square_reps(m) {
            let x = FJMonomial::integral(0, n2, 2 * n3, -2 * n4);
            acc = fj_mul(&acc, &one_minus_pow(x, e, None, pv, slope)?)?;
        }
        let x = FJMonomial::integral(0, n2, 0, 0);
        acc = fj_mul(&acc, &one_minus_pow(x, c00, None, pv, slope)?)?;
    }
    if acc.prec_v24.is_none() {
        acc.prec_v24 = pv;
        acc.slope = slope;
        acc.prune();
    }
    Ok(acc)
}

/// `prod_{n3^2+n4^2=m, n2>0} [1 - t^n2 e(sigma (n3 - i n4))] prod_{n2>0} (1 - t^n2)^{c(0,0)}`.
pub fn factor_a4(m: u64, lift: &VVForm, prec_t: Rational64) -> Result<FJSeries> {
    let r = Region::new(m, Rational64::one(), prec_t)?;
    let e = integer_coeff(lift, Rational64::from_integer(-(m as i64)), DiscClass::Zero)?;
    let c00 = integer_coeff(lift, Rational64::zero(), DiscClass::Zero)?;
    a4_with(m, &e, &c00, &r)
}

fn a5_in(m: u64, lift: &VVForm, r: &Region) -> Result<FJSeries> {
    let mi = m as i64;
    let mut acc = FJSeries::one();
    let (pq, pv, slope) = (Some(r.prec_q24), Some(r.prec_v24), r.slope);
    for (n1, n2) in a5_rows(mi, r) {
        // c(n1 n2 - N/4) vanishes below -m, so N <= 4 (m + n1 n2)
        let bound = 4 * (mi + n1 * n2);
        let side = (bound as f64).sqrt() as i64 + 1;
        for n3 in -side..=side {
            for n4 in -side..=side {
                let norm = n3 * n3 + n4 * n4;
                if norm > bound {
                    continue;
                }
                let n = Rational64::new(4 * n1 * n2 - norm, 4);
                let mu = DiscClass::from_xy(n3, n4);
                let c = integer_coeff(lift, n, mu)?;
                if c.is_zero() {
                    continue;
                }
                let x = FJMonomial::integral(n1, n2, n3, -n4);
                acc = fj_mul(&acc, &one_minus_pow(x, &c, pq, pv, slope)?)?;
            }
        }
    }
    if acc.prec_q24.is_none() {
        acc.prec_q24 = pq;
        acc.prec_v24 = pv;
        acc.slope = slope;
        acc.prune();
    }
    Ok(acc)
}

/// `prod_{n1 > 0} [1 - q^n1 t^n2 e(sigma (n3 - i n4)/2)]^{c(n1 n2 - (n3^2+n4^2)/4, phi_mu)}`.
pub fn factor_a5(m: u64, lift: &VVForm, prec_q: Rational64, prec_t: Rational64) -> Result<FJSeries> {
    a5_in(m, lift, &Region::new(m, prec_q, prec_t)?)
}

/// Lift precision needed by `A_4 A_5` on a region.
pub fn required_lift_prec(m: u64, prec_q: Rational64, prec_t: Rational64) -> Result<Rational64> {
    let r = Region::new(m, prec_q, prec_t)?;
    Ok(Rational64::from_integer(r.max_index(m as i64) + 1))
}

/// The lift of `F_{1,m}`, to the given precision.
pub fn lift_of_f1(m: u64, prec: Rational64) -> Result<VVForm> {
    let f = canonical_basis_inf(1, m as u32, prec)?;
    gamma0_lift(&f, prec)
}

/// `A_1 ... A_5` for an arbitrary lift with principal part `e q^{-m}` on
/// `phi_0`, given its Weyl vector. The region is relative to `A_1`.
pub fn product_from_lift(
    m: u64,
    lift: &VVForm,
    weyl: &WeylVector,
    prec_q: Rational64,
    prec_t: Rational64,
) -> Result<FJSeries> {
    let r = Region::new(m, prec_q, prec_t)?;
    let need = Rational64::from_integer(r.max_index(m as i64) + 1);
    if let Some(p) = lift.prec().filter(|&p| p < need) {
        return Err(Error::InsufficientPrecision { requested: need, prec: p });
    }
    let e = integer_coeff(lift, Rational64::from_integer(-(m as i64)), DiscClass::Zero)?;
    let c00 = integer_coeff(lift, Rational64::zero(), DiscClass::Zero)?;
    let expected = &e * BigInt::from(twisted_sum(m, 64, 4));
    if c00 != expected {
        return Err(Error::Consistency(format!("c(0, phi_0) = {c00}, expected {expected}")));
    }
    let mut acc = fj_mul(&a2_with(m, &e)?, &a3_with(m, &e)?)?;
    acc = fj_mul(&acc, &a4_with(m, &e, &c00, &r)?)?;
    acc = fj_mul(&acc, &a5_in(m, lift, &r)?)?;
    fj_mul(&factor_a1(weyl)?, &acc)
}

/// `Psi(tau, sigma; F_m)` with `C = 1`.
pub fn borcherds_product(m: u64, prec_q: Rational64, prec_t: Rational64) -> Result<FJSeries> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let lift = lift_of_f1(m, required_lift_prec(m, prec_q, prec_t)?)?;
    product_from_lift(m, &lift, &weyl_vector(m)?, prec_q, prec_t)
}

/// The Weyl vector of `e` times the input.
pub fn scale_weyl(w: &WeylVector, e: i64) -> WeylVector {
    let k = Rational64::from_integer(e);
    WeylVector {
        rho_e3: w.rho_e3 * k,
        rho_e4: w.rho_e4 * k,
        rho_v0: Gaussian::new(w.rho_v0.re * k, w.rho_v0.im * k),
    }
}

/// `c(0, phi_0)/2`.
pub fn product_weight(m: u64) -> i64 {
    let half = twisted_sum(m, 64, 4) / 2;
    let split = twisted_sum(m, 32, 0) + twisted_sum(m, 0, 2);
    assert_eq!(half, split, "weight formulas disagree at m = {m}");
    half
}

/// `t^{rho_e3} prod_{k >= 1} (1 - t^k)^{c(0, phi_0)}`, known for
/// `texp - rho_e3 < prec_t`.
pub fn boundary_limit(m: u64, prec_t: Rational64) -> Result<FJSeries> {
    let w = weyl_vector(m)?;
    let r = Region::new(m, Rational64::one(), prec_t)?;
    let c00 = BigInt::from(twisted_sum(m, 64, 4));
    let mut acc = FJSeries::one();
    for k in (1..).take_while(|&k| DEN * k < r.prec_v24) {
        let f = one_minus_pow(FJMonomial::integral(0, k, 0, 0), &c00, None, Some(r.prec_v24), r.slope)?;
        acc = fj_mul(&acc, &f)?;
    }
    if acc.prec_v24.is_none() {
        acc.prec_v24 = Some(r.prec_v24);
        acc.slope = r.slope;
    }
    let lead = FJMonomial::new(Rational64::zero(), w.rho_e3, Gaussian::new(Rational64::zero(), Rational64::zero()))?;
    fj_mul(&FJSeries::monomial(lead, BigInt::one()), &acc)
}

/// Compares the `(qexp = -rho_e4, wexp = conj(rho))` block of a product with
/// the boundary limit; returns the first mismatching `(texp, block, limit)`.
pub fn block_mismatch(
    m: u64,
    psi: &FJSeries,
    limit: &FJSeries,
) -> Result<Option<(Rational64, BigInt, BigInt)>> {
    let w = weyl_vector(m)?;
    let a1 = FJMonomial::new(-w.rho_e4, w.rho_e3, w.rho_v0.conj())?;
    let block = psi.t_slice(a1.q24, a1.w_re2, a1.w_im2);
    let lim = limit.t_slice(0, 0, 0);
    let top = min_opt(psi.t_bound_at(a1.q24), limit.t_bound_at(0)).unwrap_or(a1.t24);
    for t24 in a1.t24..top {
        let b = block.get(&t24).cloned().unwrap_or_default();
        let l = lim.get(&t24).cloned().unwrap_or_default();
        if b != l {
            return Ok(Some((Rational64::new(t24, DEN), b, l)));
        }
    }
    Ok(None)
}

impl FJSeries {
    /// Highest `|coefficient|` bit length, for reporting.
    pub fn max_bits(&self) -> u64 {
        self.terms.values().map(|c| c.bits()).max().unwrap_or(0)
    }

    /// Coefficient as `i64` when it fits.
    pub fn coeff_i64(&self, x: &FJMonomial) -> Option<i64> {
        self.terms.get(x).and_then(|c| c.to_i64())
    }
}
