//! Canonical bases of weakly holomorphic forms of weight `-k` on Gamma0(4)
//! with poles at a single cusp.
//!
//! Every basis element has the shape `B * P(X)` where `B` is a fixed eta
//! quotient of weight `-k`, `X` is a weight-zero hauptmodul with a simple pole
//! at the chosen cusp, and `P` is monic. The polynomials are built one degree
//! at a time: multiply the previous element by `X` and cancel the coefficients
//! that fall into the gap between the pole and the regular part using the
//! earlier elements. The gap is checked to be exactly zero before an element
//! is returned.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{chi_m4, divisors};
use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::eta::{EtaQuotient, Generator, SL2Matrix};
use crate::series::QSeries;

fn int(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cusp {
    Inf,
    Zero,
    Half,
}

impl Cusp {
    /// Matrix carrying infinity to the cusp.
    pub fn matrix(self) -> SL2Matrix {
        match self {
            Cusp::Inf => SL2Matrix::IDENTITY,
            Cusp::Zero => SL2Matrix::S,
            Cusp::Half => SL2Matrix::DELTA,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Cusp::Inf => "inf",
            Cusp::Zero => "0",
            Cusp::Half => "half",
        }
    }

    /// Smallest admissible index.
    pub fn first_index(self) -> u32 {
        match self {
            Cusp::Inf => 1,
            Cusp::Zero | Cusp::Half => 0,
        }
    }

    /// Spacing of the pole orders, in units of `q` at the cusp.
    fn step(self) -> Rational64 {
        match self {
            Cusp::Zero => Rational64::new(1, 4),
            Cusp::Inf | Cusp::Half => int(1),
        }
    }

    fn generators(self, k: u32) -> (EtaQuotient, EtaQuotient) {
        let k = k as i64;
        let theta = |g: Generator, n: i64| g.eta_quotient().pow(n).expect("unit scalar");
        match (self, k % 2 == 1) {
            (Cusp::Inf, true) => (
                Generator::Theta2.eta_quotient().mul(&theta(Generator::Theta1, -(k + 1) / 2)),
                Generator::PhiInf.eta_quotient(),
            ),
            (Cusp::Inf, false) => (theta(Generator::Theta1, -k / 2), Generator::PhiInf.eta_quotient()),
            (Cusp::Zero, true) => (
                Generator::Theta2.eta_quotient().mul(&theta(Generator::Theta3, -(k + 1) / 2)),
                Generator::Phi0.eta_quotient(),
            ),
            (Cusp::Zero, false) => (theta(Generator::Theta3, -k / 2), Generator::Phi0.eta_quotient()),
            (Cusp::Half, _) => (theta(Generator::Theta2, -k), Generator::PhiHalf.eta_quotient()),
        }
    }
}

impl FromStr for Cusp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" => Ok(Cusp::Inf),
            "0" | "zero" => Ok(Cusp::Zero),
            "half" | "1/2" => Ok(Cusp::Half),
            _ => Err(Error::InvalidArgument(format!("unknown cusp '{s}'"))),
        }
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Polynomial with leading coefficient 1, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicPoly {
    coeffs: Vec<CycNum>,
}

impl MonicPoly {
    pub fn one() -> Self {
        MonicPoly { coeffs: vec![CycNum::one()] }
    }

    pub fn from_coeffs(coeffs: Vec<CycNum>) -> Result<Self> {
        match coeffs.last() {
            Some(c) if c.is_one() => Ok(MonicPoly { coeffs }),
            _ => Err(Error::InvalidArgument("polynomial is not monic".into())),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    pub fn at_zero(&self) -> &CycNum {
        &self.coeffs[0]
    }

    fn times_x(&self) -> MonicPoly {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(CycNum::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        MonicPoly { coeffs }
    }

    /// Subtracts `c * other`; `other` must have lower degree.
    fn sub_scaled(&mut self, other: &MonicPoly, c: &CycNum) {
        debug_assert!(other.degree() < self.degree());
        for (a, b) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *a -= &(b * c);
        }
    }

    /// `P(x)` by Horner's rule.
    pub fn eval(&self, x: &QSeries) -> QSeries {
        let mut acc = QSeries::monomial(CycNum::one(), Rational64::zero());
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x).add(&QSeries::monomial(c.clone(), Rational64::zero()));
        }
        acc
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match j {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{j}"),
            };
            let part = match (c.is_one(), j) {
                (true, 0) => "1".to_string(),
                (true, _) => mono,
                (false, 0) => format!("({c})"),
                (false, _) => format!("({c})*{mono}"),
            };
            parts.push(part);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for MonicPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisElement {
    pub k: u32,
    pub m: u32,
    pub cusp: Cusp,
    pub poly: MonicPoly,
    /// Expansion at infinity.
    pub expansion: QSeries,
    /// Expansion of the slash by the cusp matrix (equal to `expansion` at infinity).
    pub cusp_expansion: QSeries,
    /// Coefficient of the pole in `cusp_expansion`.
    pub lead: CycNum,
}

fn base_order(cusp: Cusp, k: u32) -> Rational64 {
    let k = k as i64;
    match (cusp, k % 2 == 1) {
        (Cusp::Inf, true) => int(-(k + 1) / 2),
        (Cusp::Inf, false) => int(-k / 2),
        (Cusp::Zero, true) => Rational64::new(-(k + 1) / 2, 4),
        (Cusp::Zero, false) => Rational64::new(-k / 2, 4),
        (Cusp::Half, _) => Rational64::new(-k, 2),
    }
}

impl BasisElement {
    fn degree(&self) -> i64 {
        self.poly.degree() as i64
    }

    /// Exponent of the single pole term of `cusp_expansion`.
    pub fn principal_exponent(&self) -> Rational64 {
        base_order(self.cusp, self.k) - self.cusp.step() * int(self.degree())
    }

    /// First exponent of the regular part of `cusp_expansion`.
    pub fn regular_start(&self) -> Rational64 {
        base_order(self.cusp, self.k) + self.cusp.step()
    }

    /// Checks the triangular shape: one pole term, nothing else below the
    /// regular part.
    pub fn check_shape(&self) -> Result<()> {
        check_gap(&self.cusp_expansion, self.principal_exponent(), self.regular_start())
    }
}

fn check_gap(s: &QSeries, pole: Rational64, regular: Rational64) -> Result<()> {
    if s.prec().is_some_and(|p| p < regular) {
        return Err(Error::InsufficientPrecision { requested: regular, prec: s.prec().unwrap() });
    }
    for (e, c) in s.terms() {
        if e >= regular {
            break;
        }
        if e != pole {
            return Err(Error::Triangularity(format!("nonzero coefficient {c} at q^({e})")));
        }
    }
    match s.leading() {
        Some((e, _)) if e == pole => Ok(()),
        _ => Err(Error::Triangularity(format!("no pole term at q^({pole})"))),
    }
}

struct Family {
    polys: Vec<MonicPoly>,
    slashed: Vec<QSeries>,
    leads: Vec<CycNum>,
}

/// Polynomials of degree `0..=jmax` with every slashed element known below `target`.
fn build_family(cusp: Cusp, k: u32, jmax: usize, target: Rational64) -> Result<Family> {
    let (b, x) = cusp.generators(k);
    let gamma = cusp.matrix();
    let s = cusp.step();
    let e0 = base_order(cusp, k);
    let regular = e0 + s;
    let target = target.max(regular);
    let mut extra = int(2);
    loop {
        let span = s * int(jmax as i64) + extra;
        let bs = b.slash(-(k as i64), &gamma, target + span)?;
        let xs = x.slash(0, &gamma, target - e0 + span)?;
        if bs.ord() != Some(e0) || xs.ord() != Some(-s) {
            return Err(Error::Consistency(format!(
                "generator orders at cusp {cusp}: {:?}, {:?}",
                bs.ord(),
                xs.ord()
            )));
        }
        let lb = bs.leading().unwrap().1.clone();
        let lx = xs.leading().unwrap().1.clone();
        let mut fam = Family { polys: vec![MonicPoly::one()], slashed: vec![bs], leads: vec![lb] };
        for j in 1..=jmax {
            let mut e = fam.slashed[j - 1].mul(&xs);
            let mut p = fam.polys[j - 1].times_x();
            for i in (0..j).rev() {
                let n = e0 - s * int(i as i64);
                let d = e.coeff(n)?;
                if d.is_zero() {
                    continue;
                }
                let c = &d * &fam.leads[i].inv()?;
                e = e.sub(&fam.slashed[i].scale(&c));
                p.sub_scaled(&fam.polys[i], &c);
            }
            let lead = &fam.leads[j - 1] * &lx;
            fam.polys.push(p);
            fam.slashed.push(e);
            fam.leads.push(lead);
        }
        let short = fam.slashed.iter().any(|f| f.prec().is_some_and(|p| p < target));
        if !short {
            for (j, f) in fam.slashed.iter().enumerate() {
                check_gap(f, e0 - s * int(j as i64), regular)?;
            }
            return Ok(fam);
        }
        extra *= int(2);
    }
}

/// Basis elements with indices `first_index ..` (`count` of them), expansions below `prec`.
pub fn basis_family(cusp: Cusp, k: u32, count: usize, prec: Rational64) -> Result<Vec<BasisElement>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let fam = build_family(cusp, k, count - 1, prec)?;
    let own = match cusp {
        Cusp::Inf => None,
        _ => {
            let (b, x) = cusp.generators(k);
            Some((b.expansion(prec)?, x.expansion(prec)?))
        }
    };
    let mut out = Vec::with_capacity(count);
    for (j, ((poly, slashed), lead)) in fam.polys.into_iter().zip(fam.slashed).zip(fam.leads).enumerate() {
        let cusp_expansion = slashed.truncate(prec);
        let expansion = match &own {
            None => cusp_expansion.clone(),
            Some((b, x)) => b.mul(&poly.eval(x)).truncate(prec),
        };
        out.push(BasisElement {
            k,
            m: cusp.first_index() + j as u32,
            cusp,
            poly,
            expansion,
            cusp_expansion,
            lead,
        });
    }
    Ok(out)
}

impl BasisElement {
    /// `B|gamma * P(X|gamma)`, the weight `-k` slash of this element.
    pub fn slash(&self, gamma: &SL2Matrix, prec: Rational64) -> Result<QSeries> {
        let (b, x) = self.cusp.generators(self.k);
        let deg = int(self.poly.degree() as i64);
        let zero = Rational64::zero();
        let ox = x.slash(0, gamma, int(1))?.ord().unwrap_or(zero);
        let ob = b.slash(-(self.k as i64), gamma, int(1))?.ord().unwrap_or(zero);
        let pad = -(ox.min(zero)) * (deg + int(1)) - ob.min(zero) - ox.min(zero) * deg + int(1);
        let bs = b.slash(-(self.k as i64), gamma, prec + pad)?;
        let xs = x.slash(0, gamma, prec + pad)?;
        let out = bs.mul(&self.poly.eval(&xs));
        match out.prec() {
            Some(p) if p < prec => Err(Error::InsufficientPrecision { requested: prec, prec: p }),
            _ => Ok(out.truncate(prec)),
        }
    }
}

pub fn canonical_basis(cusp: Cusp, k: u32, m: u32, prec: Rational64) -> Result<BasisElement> {
    if m < cusp.first_index() {
        return Err(Error::InvalidArgument(format!(
            "index m = {m} below {} at cusp {cusp}",
            cusp.first_index()
        )));
    }
    let count = (m - cusp.first_index() + 1) as usize;
    Ok(basis_family(cusp, k, count, prec)?.pop().expect("nonempty family"))
}

/// `F_{k,m} = q^{-(k+1)/2-m+1} + O(q^{-(k-1)/2})` for odd `k`, `m >= 1`.
pub fn canonical_basis_inf(k: u32, m: u32, prec: Rational64) -> Result<BasisElement> {
    canonical_basis(Cusp::Inf, k, m, prec)
}

/// Poles only at the cusp 0; `m >= 0`.
pub fn canonical_basis_cusp0(k: u32, m: u32, prec: Rational64) -> Result<BasisElement> {
    canonical_basis(Cusp::Zero, k, m, prec)
}

/// Poles only at the cusp 1/2; `m >= 0`.
pub fn canonical_basis_half(k: u32, m: u32, prec: Rational64) -> Result<BasisElement> {
    canonical_basis(Cusp::Half, k, m, prec)
}

/// `sum_{d | m+1} chi((m+1)/d) d^2`.
pub fn p1m_at_zero(m: u64) -> i64 {
    let n = m + 1;
    divisors(n)
        .into_iter()
        .map(|d| chi_m4((n / d) as i64) * (d * d) as i64)
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EisensteinVariant {
    /// `sum_n (sum_{d|n} chi(n/d) d^2) q^n`.
    TwistNOverD,
    /// `1 + 4 sum_n (sum_{d|n} chi(d) d^2) q^n`.
    TwistD,
}

pub fn eisenstein_g(variant: EisensteinVariant, prec: Rational64) -> QSeries {
    let top = prec.ceil().to_integer();
    let mut terms = Vec::new();
    if variant == EisensteinVariant::TwistD {
        terms.push((Rational64::zero(), CycNum::one()));
    }
    for n in 1..top.max(1) {
        let c: i64 = divisors(n as u64)
            .into_iter()
            .map(|d| {
                let tw = match variant {
                    EisensteinVariant::TwistNOverD => chi_m4(n / d as i64),
                    EisensteinVariant::TwistD => 4 * chi_m4(d as i64),
                };
                tw * (d * d) as i64
            })
            .sum();
        terms.push((int(n), CycNum::from_int(c)));
    }
    QSeries::from_terms(terms, prec)
}

/// `theta2/theta1 * phi_inf^m` plus lower multiples, cancelled down to
/// `q^{-m-1} + a(-1) q^{-1} + O(1)`.
pub fn pairing_combination(m: u32, prec: Rational64) -> Result<QSeries> {
    if m == 0 {
        return Err(Error::InvalidArgument("pairing needs m >= 1".into()));
    }
    let (b, x) = Cusp::Inf.generators(1);
    let work = prec + int(m as i64 + 3);
    let b = b.expansion(work)?;
    let x = x.expansion(work)?;
    let mut powers = vec![b];
    for l in 1..=m as usize {
        let next = powers[l - 1].mul(&x);
        powers.push(next);
    }
    let mut h = powers[m as usize].clone();
    for l in (1..m as usize).rev() {
        let c = h.coeff(int(-(l as i64) - 1))?;
        if !c.is_zero() {
            h = h.sub(&powers[l].scale(&c));
        }
    }
    Ok(h.truncate(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eta::generator;

    fn lead_of(s: &QSeries) -> (Rational64, CycNum) {
        let (e, c) = s.leading().unwrap();
        (e, c.clone())
    }

    #[test]
    fn first_inf_element_is_theta2_over_theta1() {
        let f = canonical_basis_inf(1, 1, int(6)).unwrap();
        let direct = generator(Generator::Theta2, int(8))
            .unwrap()
            .mul(&generator(Generator::Theta1, int(8)).unwrap().inv().unwrap());
        assert!(f.expansion.agrees_with(&direct));
        assert_eq!(lead_of(&f.expansion), (int(-1), CycNum::one()));
        assert_eq!(f.poly, MonicPoly::one());
    }

    #[test]
    fn k1_has_single_pole() {
        for f in basis_family(Cusp::Inf, 1, 6, int(3)).unwrap() {
            assert_eq!(lead_of(&f.expansion), (int(-(f.m as i64)), CycNum::one()));
            for n in 1..f.m as i64 {
                assert!(f.expansion.coeff(int(-n)).unwrap().is_zero());
            }
            f.check_shape().unwrap();
        }
    }

    #[test]
    fn k2_shape() {
        let f = canonical_basis_inf(2, 1, int(4)).unwrap();
        assert_eq!(lead_of(&f.expansion), (int(-1), CycNum::one()));
        f.check_shape().unwrap();
        assert_eq!(f.regular_start(), int(0));
    }

    #[test]
    fn cusp0_elements() {
        let f = canonical_basis_cusp0(1, 0, int(4)).unwrap();
        let direct = generator(Generator::Theta2, int(4))
            .unwrap()
            .mul(&generator(Generator::Theta3, int(4)).unwrap().inv().unwrap());
        assert!(f.expansion.agrees_with(&direct));
        for k in 1..=4 {
            for f in basis_family(Cusp::Zero, k, 4, int(3)).unwrap() {
                assert!(f.expansion.ord().is_none_or(|o| o >= int(0)));
                f.check_shape().unwrap();
                let expected = Rational64::new(-((k as i64 + 1) / 2) - f.m as i64, 4);
                let expected = if k % 2 == 0 { Rational64::new(-(k as i64) / 2 - f.m as i64, 4) } else { expected };
                assert_eq!(f.cusp_expansion.ord(), Some(expected));
            }
        }
    }

    #[test]
    fn half_elements() {
        let f = canonical_basis_half(1, 0, int(4)).unwrap();
        let direct = generator(Generator::Theta2, int(4)).unwrap().inv().unwrap();
        assert!(f.expansion.agrees_with(&direct));
        for k in 1..=4 {
            for f in basis_family(Cusp::Half, k, 4, int(3)).unwrap() {
                assert!(f.expansion.ord().is_none_or(|o| o >= int(0)));
                f.check_shape().unwrap();
                assert_eq!(f.cusp_expansion.ord(), Some(Rational64::new(-(k as i64), 2) - int(f.m as i64)));
            }
        }
    }

    #[test]
    fn index_bounds() {
        assert!(canonical_basis_inf(1, 0, int(2)).is_err());
        assert!(canonical_basis_inf(0, 1, int(2)).is_err());
    }

    #[test]
    fn precision_independence() {
        let a = canonical_basis_inf(3, 4, int(3)).unwrap();
        let b = canonical_basis_inf(3, 4, int(7)).unwrap();
        assert_eq!(a.poly, b.poly);
        assert!(a.expansion.agrees_with(&b.expansion));
    }

    #[test]
    fn divisor_values() {
        assert_eq!(p1m_at_zero(0), 1);
        assert_eq!(p1m_at_zero(1), 4);
        assert_eq!(p1m_at_zero(3), 16);
    }

    #[test]
    fn eisenstein_values() {
        let g = eisenstein_g(EisensteinVariant::TwistNOverD, int(5));
        assert_eq!(g.coeff(int(1)).unwrap(), CycNum::one());
        assert_eq!(g.coeff(int(2)).unwrap(), CycNum::from_int(4));
        let g1 = eisenstein_g(EisensteinVariant::TwistD, int(5));
        assert_eq!(g1.coeff(int(0)).unwrap(), CycNum::one());
        assert_eq!(g1.coeff(int(1)).unwrap(), CycNum::from_int(4));
    }

    #[test]
    fn pairing_small() {
        let g = eisenstein_g(EisensteinVariant::TwistNOverD, int(12));
        for m in 1..=5 {
            let h = pairing_combination(m, int(1)).unwrap();
            assert_eq!(lead_of(&h), (int(-(m as i64) - 1), CycNum::one()));
            let a = h.coeff(int(-1)).unwrap();
            assert_eq!(a, -g.coeff(int(m as i64 + 1)).unwrap());
        }
    }

    #[test]
    fn poly_display() {
        let p = MonicPoly::from_coeffs(vec![CycNum::from_int(-4), CycNum::zero(), CycNum::one()]).unwrap();
        assert_eq!(p.to_string(), "x^2 + (-4)");
        assert!(MonicPoly::from_coeffs(vec![CycNum::from_int(2)]).is_err());
    }
}
