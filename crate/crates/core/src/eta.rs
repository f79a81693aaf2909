//! Dedekind eta quotients, Jacobi theta series, the generator forms for
//! Gamma0(4) and the slash action of SL2(Z) on eta quotients.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::series::QSeries;

fn int(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SL2Matrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl SL2Matrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::NotInSl2([a, b, c, d]));
        }
        Ok(SL2Matrix { a, b, c, d })
    }

    pub const IDENTITY: SL2Matrix = SL2Matrix { a: 1, b: 0, c: 0, d: 1 };
    pub const T: SL2Matrix = SL2Matrix { a: 1, b: 1, c: 0, d: 1 };
    pub const S: SL2Matrix = SL2Matrix { a: 0, b: -1, c: 1, d: 0 };
    /// The cusp-1/2 matrix `(1 0; 2 1)`.
    pub const DELTA: SL2Matrix = SL2Matrix { a: 1, b: 0, c: 2, d: 1 };

    pub fn mul(&self, o: &SL2Matrix) -> SL2Matrix {
        SL2Matrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> SL2Matrix {
        SL2Matrix { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> SL2Matrix {
        SL2Matrix { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl FromStr for SL2Matrix {
    type Err = Error;

    /// `a,b,c,d` or one of `S`, `T`, `delta`, `I`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "S" => return Ok(Self::S),
            "T" => return Ok(Self::T),
            "delta" => return Ok(Self::DELTA),
            "I" | "id" => return Ok(Self::IDENTITY),
            _ => {}
        }
        let parts: Vec<i64> = s
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidArgument(format!("matrix '{s}'")))?;
        match parts.as_slice() {
            [a, b, c, d] => SL2Matrix::new(*a, *b, *c, *d),
            _ => Err(Error::InvalidArgument(format!("matrix '{s}' needs four entries"))),
        }
    }
}

/// `prod_m eta(m tau)^{r_m}` times a scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    exps: BTreeMap<u64, i64>,
    pub scalar: CycNum,
}

impl EtaQuotient {
    pub fn new<I: IntoIterator<Item = (u64, i64)>>(factors: I) -> Self {
        let mut q = EtaQuotient { exps: BTreeMap::new(), scalar: CycNum::one() };
        for (m, r) in factors {
            q.push(m, r);
        }
        q
    }

    fn push(&mut self, m: u64, r: i64) {
        assert!(m > 0, "eta level must be positive");
        let e = self.exps.entry(m).or_insert(0);
        *e += r;
        if *e == 0 {
            self.exps.remove(&m);
        }
    }

    pub fn with_scalar(mut self, c: CycNum) -> Self {
        self.scalar = c;
        self
    }

    pub fn exps(&self) -> &BTreeMap<u64, i64> {
        &self.exps
    }

    pub fn mul(&self, other: &EtaQuotient) -> EtaQuotient {
        let mut out = self.clone();
        for (&m, &r) in other.exps.iter() {
            out.push(m, r);
        }
        out.scalar = &self.scalar * &other.scalar;
        out
    }

    pub fn pow(&self, n: i64) -> Result<EtaQuotient> {
        let mut out = EtaQuotient::new(self.exps.iter().map(|(&m, &r)| (m, r * n)));
        out.scalar = self.scalar.pow(n)?;
        Ok(out)
    }

    /// Twice the weight, `sum r_m`.
    pub fn twice_weight(&self) -> i64 {
        self.exps.values().sum()
    }

    /// Order at infinity, `sum m r_m / 24`.
    pub fn order(&self) -> Rational64 {
        self.exps.iter().map(|(&m, &r)| Rational64::new(m as i64 * r, 24)).sum()
    }

    pub fn expansion(&self, prec: Rational64) -> Result<QSeries> {
        self.slash(self.twice_weight() / 2, &SL2Matrix::IDENTITY, prec)
            .or_else(|e| match e {
                // weight is irrelevant at the identity
                Error::HalfIntegralWeight(_) => self.expand_plain(prec),
                other => Err(other),
            })
    }

    fn expand_plain(&self, prec: Rational64) -> Result<QSeries> {
        let pieces: Vec<EtaPiece> =
            self.exps.iter().map(|(&m, &r)| EtaPiece { g: m as i64, b: 0, d: 1, r }).collect();
        Ok(expand_pieces(&pieces, prec)?.scale(&self.scalar))
    }

    /// `(c tau + d)^{-weight} f(gamma tau)` as a series in a fractional power
    /// of `q`. The weight must equal half the sum of the exponents.
    pub fn slash(&self, weight: i64, gamma: &SL2Matrix, prec: Rational64) -> Result<QSeries> {
        let tw = self.twice_weight();
        if tw % 2 != 0 {
            return Err(Error::HalfIntegralWeight(tw));
        }
        if tw / 2 != weight {
            return Err(Error::WeightMismatch { requested: weight, actual: tw / 2 });
        }
        let mut g = *gamma;
        let mut sign = 1i64;
        if g.c < 0 || (g.c == 0 && g.d < 0) {
            g = g.neg();
            if weight % 2 != 0 {
                sign = -1;
            }
        }
        // total phase e(phase) and the rational whose square root divides out
        let mut phase = Rational64::zero();
        let mut radicand = BigRational::one();
        let mut pieces = Vec::new();
        for (&m, &r) in self.exps.iter() {
            let m = m as i64;
            let (ma, mb) = (m * g.a, m * g.b);
            let gg = ma.gcd(&g.c);
            let (top, bottom) = (ma / gg, g.c / gg);
            let ext = top.extended_gcd(&bottom);
            // top * x + bottom * y = 1, gamma' = (top, -y; bottom, x)
            let (delta, beta) = if ext.gcd == 1 { (ext.x, -ext.y) } else { (-ext.x, ext.y) };
            let b_prime = delta * mb - beta * g.d;
            let d_prime = m / gg;
            if bottom != 0 {
                phase += eta_multiplier_phase(top, beta, bottom, delta) * int(r);
                radicand *= BigRational::from_integer(BigInt::from(d_prime)).pow(r as i32);
            }
            // eta((g tau + b')/D) = e(b'/(24 D)) q^{g/(24D)} prod (1 - e(b' n/D) q^{g n/D})
            phase += Rational64::new(b_prime * r, 24 * d_prime);
            pieces.push(EtaPiece { g: gg, b: b_prime, d: d_prime, r });
        }
        if g.c != 0 {
            // (-i)^{1/2} per eta factor
            phase -= Rational64::new(weight, 4);
        }
        let phase = phase - phase.floor();
        let mut scalar = CycNum::root_of_unity(phase)?;
        scalar = &scalar * &CycNum::sqrt_rational(&radicand.recip())?;
        scalar = &scalar * &self.scalar;
        if sign < 0 {
            scalar = -scalar;
        }
        Ok(expand_pieces(&pieces, prec)?.scale(&scalar))
    }
}

/// `eta((g tau + b)/d)^r` without its leading root of unity.
struct EtaPiece {
    g: i64,
    b: i64,
    d: i64,
    r: i64,
}

fn expand_pieces(pieces: &[EtaPiece], prec: Rational64) -> Result<QSeries> {
    let ord: Rational64 =
        pieces.iter().map(|p| Rational64::new(p.g * p.r, 24 * p.d)).sum();
    let rel = prec - ord;
    if rel <= Rational64::zero() {
        return Ok(QSeries::from_terms(std::iter::empty(), prec));
    }
    let mut acc = QSeries::one().truncate(rel);
    for p in pieces {
        let scale = Rational64::new(p.g, p.d);
        let inner = euler_product(rel / scale);
        let inner = inner.twist(Rational64::new(p.b, p.d))?.rescale(scale)?;
        acc = acc.mul(&inner.pow(p.r)?);
    }
    Ok(acc.shift(ord))
}

/// `prod_{n>=1} (1 - q^n)` below `q^prec` via the pentagonal number theorem.
pub fn euler_product(prec: Rational64) -> QSeries {
    let mut terms = Vec::new();
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = kk * (3 * kk - 1) / 2;
            if int(e) < prec {
                any = true;
                let sign = if kk % 2 == 0 { 1 } else { -1 };
                terms.push((int(e), CycNum::from_int(sign)));
            }
        }
        if !any && k > 0 {
            break;
        }
        k += 1;
    }
    QSeries::from_terms(terms, prec)
}

/// `eta(tau) = q^{1/24} prod (1 - q^n)`.
pub fn eta_expansion(prec: Rational64) -> QSeries {
    let shift = Rational64::new(1, 24);
    euler_product(prec - shift).shift(shift)
}

/// Dedekind sum `s(d, c)` for `c > 0`.
pub fn dedekind_sum(d: i64, c: i64) -> Rational64 {
    let saw = |x: Rational64| {
        if x.is_integer() {
            Rational64::zero()
        } else {
            x - x.floor() - Rational64::new(1, 2)
        }
    };
    (1..c).map(|k| saw(Rational64::new(k, c)) * saw(Rational64::new(d * k, c))).sum()
}

/// `eta(gamma tau) = e(phase) (-i (c tau + d))^{1/2} eta(tau)` for `c > 0`.
pub fn eta_multiplier_phase(a: i64, _b: i64, c: i64, d: i64) -> Rational64 {
    debug_assert!(c > 0);
    Rational64::new(a + d, 24 * c) - dedekind_sum(d, c) / int(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaKind {
    T00,
    T01,
    T10,
}

/// Jacobi theta series by direct lattice summation.
pub fn theta_series(kind: ThetaKind, prec: Rational64) -> QSeries {
    let mut terms = Vec::new();
    let mut n: i64 = 0;
    loop {
        let (e, c) = match kind {
            ThetaKind::T00 => (int(n * n), if n == 0 { 1 } else { 2 }),
            ThetaKind::T01 => (int(n * n), if n == 0 { 1 } else if n % 2 == 0 { 2 } else { -2 }),
            ThetaKind::T10 => (Rational64::new((2 * n + 1) * (2 * n + 1), 4), 2),
        };
        if e >= prec {
            break;
        }
        terms.push((e, CycNum::from_int(c)));
        n += 1;
    }
    QSeries::from_terms(terms, prec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Theta1,
    Theta2,
    PhiInf,
    Theta3,
    Phi0,
    PhiHalf,
}

impl Generator {
    pub const ALL: [Generator; 6] = [
        Generator::Theta1,
        Generator::Theta2,
        Generator::PhiInf,
        Generator::Theta3,
        Generator::Phi0,
        Generator::PhiHalf,
    ];

    pub fn eta_quotient(self) -> EtaQuotient {
        match self {
            Generator::Theta1 => EtaQuotient::new([(4, 8), (2, -4)]),
            Generator::Theta2 => EtaQuotient::new([(2, 10), (1, -4), (4, -4)]),
            Generator::PhiInf => EtaQuotient::new([(1, 8), (4, -8)]),
            Generator::Theta3 => EtaQuotient::new([(1, 8), (2, -4)]),
            Generator::Phi0 => EtaQuotient::new([(4, 8), (1, -8)]),
            Generator::PhiHalf => EtaQuotient::new([(1, 8), (4, 16), (2, -24)]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::Theta1 => "theta1",
            Generator::Theta2 => "theta2",
            Generator::PhiInf => "phi_inf",
            Generator::Theta3 => "theta3",
            Generator::Phi0 => "phi0",
            Generator::PhiHalf => "phi_half",
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Generator::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown generator '{s}'")))
    }
}

pub fn generator(g: Generator, prec: Rational64) -> Result<QSeries> {
    g.eta_quotient().expansion(prec)
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.scalar.is_one() {
            parts.push(format!("({})", self.scalar));
        }
        parts.extend(self.exps.iter().map(|(m, r)| format!("eta({m})^{r}")));
        if parts.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl FromStr for EtaQuotient {
    type Err = Error;

    /// `eta(1)^8*eta(4)^-8`; exponents default to 1 and may be parenthesized.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::EtaParse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut q = EtaQuotient::new([]);
        for factor in compact.split('*') {
            let rest = factor.strip_prefix("eta(").ok_or_else(err)?;
            let (level, tail) = rest.split_once(')').ok_or_else(err)?;
            let level: u64 = level.parse().map_err(|_| err())?;
            if level == 0 {
                return Err(err());
            }
            let r: i64 = if tail.is_empty() {
                1
            } else {
                let e = tail.strip_prefix('^').ok_or_else(err)?;
                let e = e.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(e);
                e.parse().map_err(|_| err())?
            };
            q.push(level, r);
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    /// theta2 / theta1 = eta(1)^-4 eta(2)^14 eta(4)^-12
    fn f11() -> EtaQuotient {
        Generator::Theta2.eta_quotient().mul(&Generator::Theta1.eta_quotient().pow(-1).unwrap())
    }

    fn scaled(c: CycNum, terms: &[(Rational64, i64)], prec: Rational64) -> QSeries {
        QSeries::from_terms(terms.iter().map(|&(e, n)| (e, &c * &CycNum::from_int(n))), prec)
    }

    #[test]
    fn eta_basics() {
        let e = eta_expansion(int(10));
        assert_eq!(e.ram(), 24);
        assert_eq!(e.ord(), Some(r(1, 24)));
        assert_eq!(e.coeff(r(25, 24)).unwrap(), CycNum::from_int(-1));
        for (_, c) in e.terms() {
            assert!(c == &CycNum::one() || c == &CycNum::from_int(-1));
        }
    }

    #[test]
    fn pentagonal_matches_naive_product() {
        let prec = int(30);
        let mut naive = QSeries::one().truncate(prec);
        for n in 1..30 {
            let f = QSeries::one_minus_monomial_pow(int(n), &CycNum::one(), 1, prec).unwrap();
            naive = naive.mul(&f);
        }
        assert_eq!(naive, euler_product(prec));
    }

    #[test]
    fn theta_windows() {
        let t00 = theta_series(ThetaKind::T00, int(9));
        assert_eq!(t00, QSeries::from_terms([(int(0), 1), (int(1), 2), (int(4), 2)].map(|(e, c)| (e, CycNum::from_int(c))), int(9)));
        let t01 = theta_series(ThetaKind::T01, int(9));
        assert_eq!(t01.coeff(int(1)).unwrap(), CycNum::from_int(-2));
        assert_eq!(t01.coeff(int(4)).unwrap(), CycNum::from_int(2));
        let t10 = theta_series(ThetaKind::T10, int(5));
        assert_eq!(t10.ord(), Some(r(1, 4)));
        assert_eq!(t10.coeff(r(9, 4)).unwrap(), CycNum::from_int(2));
    }

    #[test]
    fn generator_leading_terms() {
        let prec = int(6);
        let t1 = generator(Generator::Theta1, prec).unwrap();
        assert_eq!(t1.leading().map(|(e, c)| (e, c.clone())), Some((int(1), CycNum::one())));
        let pinf = generator(Generator::PhiInf, prec).unwrap();
        assert_eq!(pinf.leading().map(|(e, c)| (e, c.clone())), Some((int(-1), CycNum::one())));
        let t2 = generator(Generator::Theta2, prec).unwrap();
        assert!(t2.agrees_with(&theta_series(ThetaKind::T00, prec).pow(2).unwrap()));
        for g in [Generator::Phi0, Generator::PhiHalf] {
            let s = generator(g, prec).unwrap();
            assert_eq!(s.ord(), Some(int(1)));
        }
    }

    #[test]
    fn theta_identities() {
        let prec = int(20);
        let t00 = theta_series(ThetaKind::T00, prec);
        let t01 = theta_series(ThetaKind::T01, prec);
        let t10 = theta_series(ThetaKind::T10, prec);
        let lhs = t00.pow(4).unwrap();
        let rhs = t01.pow(4).unwrap().add(&t10.pow(4).unwrap());
        assert!(lhs.agrees_with(&rhs));
        let sixteenth = CycNum::from_ratio(r(1, 16));
        assert!(generator(Generator::Theta1, prec).unwrap().agrees_with(&t10.pow(4).unwrap().scale(&sixteenth)));
        assert!(generator(Generator::Theta3, prec).unwrap().agrees_with(&t01.pow(4).unwrap()));
        let prod = generator(Generator::PhiInf, prec).unwrap().mul(&generator(Generator::Phi0, prec).unwrap());
        assert!(prod.agrees_with(&QSeries::one()));
    }

    #[test]
    fn identity_slash_is_expansion() {
        let f = f11();
        let prec = int(8);
        let direct = generator(Generator::Theta2, prec)
            .unwrap()
            .mul(&generator(Generator::Theta1, int(10)).unwrap().inv().unwrap());
        let slashed = f.slash(-1, &SL2Matrix::IDENTITY, prec).unwrap();
        assert!(slashed.agrees_with(&direct));
        assert_eq!(slashed.prec(), Some(prec));
    }

    #[test]
    fn s_slash_golden() {
        let got = f11().slash(-1, &SL2Matrix::S, int(2)).unwrap();
        let c = CycNum::i().scale(&BigRational::from_integer(32.into()));
        let expected = scaled(
            c,
            &[
                (int(0), 1),
                (r(1, 4), 12),
                (r(2, 4), 76),
                (r(3, 4), 352),
                (int(1), 1356),
                (r(5, 4), 4600),
                (r(6, 4), 14176),
                (r(7, 4), 40512),
            ],
            int(2),
        );
        assert_eq!(got, expected);
        assert_eq!(got.ram(), 4);
    }

    #[test]
    fn delta_slash_golden() {
        let got = f11().slash(-1, &SL2Matrix::DELTA, int(3)).unwrap();
        let expected = scaled(CycNum::from_int(64), &[(r(1, 2), 1), (r(3, 2), -8), (r(5, 2), 42)], int(3));
        assert_eq!(got, expected);
    }

    #[test]
    fn gamma0_4_acts_by_character() {
        // F_{1,1} has character chi_{-4} under Gamma0(4)
        let f = f11();
        let prec = int(4);
        let base = f.expansion(prec).unwrap();
        for (a, b, c, d) in [(1, 1, 4, 5), (3, 1, 8, 3), (5, 2, 12, 5), (-1, 0, 4, -1), (1, -1, -4, 5)] {
            let g = SL2Matrix::new(a, b, c, d).unwrap();
            let chi = if d.rem_euclid(4) == 1 { 1 } else { -1 };
            let got = f.slash(-1, &g, prec).unwrap();
            assert_eq!(got, base.scale(&CycNum::from_int(chi)), "gamma = {g:?}");
        }
    }

    #[test]
    fn slash_by_translation_composes() {
        let f = f11();
        let prec = int(3);
        let s = f.slash(-1, &SL2Matrix::S, prec).unwrap();
        let st = f.slash(-1, &SL2Matrix::S.mul(&SL2Matrix::T), prec).unwrap();
        assert_eq!(st, s.twist(int(1)).unwrap());
    }

    #[test]
    fn weight_checks() {
        let f = f11();
        assert!(matches!(f.slash(2, &SL2Matrix::S, int(1)), Err(Error::WeightMismatch { .. })));
        let odd = EtaQuotient::new([(1, 1)]);
        assert!(matches!(odd.slash(0, &SL2Matrix::S, int(1)), Err(Error::HalfIntegralWeight(1))));
        assert!(odd.expansion(int(2)).is_ok());
    }

    #[test]
    fn parse_and_print() {
        let q: EtaQuotient = "eta(1)^8*eta(4)^-8".parse().unwrap();
        assert_eq!(q, Generator::PhiInf.eta_quotient());
        assert_eq!(q.to_string(), "eta(1)^8*eta(4)^-8");
        let q2: EtaQuotient = "eta(2) * eta(4)^(3)".parse().unwrap();
        assert_eq!(q2.exps().get(&2), Some(&1));
        assert_eq!(q2.exps().get(&4), Some(&3));
        assert!("eta(1)^1/2".parse::<EtaQuotient>().is_err());
        assert!("eta(0)^2".parse::<EtaQuotient>().is_err());
        assert!("theta(1)".parse::<EtaQuotient>().is_err());
    }

    #[test]
    fn matrices() {
        assert!(SL2Matrix::new(1, 1, 1, 1).is_err());
        let g = SL2Matrix::new(3, 1, 8, 3).unwrap();
        assert_eq!(g.mul(&g.inverse()), SL2Matrix::IDENTITY);
        assert_eq!("0,-1,1,0".parse::<SL2Matrix>().unwrap(), SL2Matrix::S);
        assert_eq!(dedekind_sum(1, 1), Rational64::zero());
        assert_eq!(dedekind_sum(1, 3), r(1, 18));
    }
}
