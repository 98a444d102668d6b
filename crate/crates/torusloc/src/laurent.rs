//! Sparse Laurent polynomials and factored rational functions
//! `t^p · N(t) / ∏ (1 − t^ν)^m` over exact rationals.
//!
//! Coefficients may be affine-linear in named unknowns. Denominator directions are
//! stored with their first nonzero coordinate positive; the numerator is stored as
//! an honest polynomial, its componentwise minimal exponent moved into the prefactor.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::weights::{fmt_rational, int, unimodular_pair_to_axis, Rational, Weight, WeightError};

/// Integer exponent vector of a monomial.
pub type Exponent = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("product of two coefficients that both involve unknowns")]
    NonlinearUnknowns,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("denominator direction must be nonzero")]
    ZeroFactor,
    #[error("denominator factors {} do not divide the numerator", fmt_factors(.0))]
    NotDivisible(Vec<Exponent>),
    #[error("coefficients involve unknowns {0:?}; specialize and solve first")]
    HasUnknowns(Vec<String>),
    #[error("specialization collapses the factor (1 - t^{})", fmt_exp(.0))]
    CollapsedFactor(Exponent),
    #[error("vanishing conditions need a univariate function, got rank {0}")]
    NotUnivariate(usize),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

fn fmt_factors(fs: &[Exponent]) -> String {
    fs.iter().map(|f| format!("(1-t^{})", fmt_exp(f))).collect::<Vec<_>>().join(" ")
}

fn fmt_exp(e: &[i64]) -> String {
    if e.len() == 1 {
        e[0].to_string()
    } else {
        format!("({})", e.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
    }
}

/// Affine-linear expression `constant + Σ coeff·symbol`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coefficient {
    pub constant: Rational,
    pub linear: BTreeMap<String, Rational>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::default()
    }

    pub fn constant(q: Rational) -> Self {
        Coefficient { constant: q, linear: BTreeMap::new() }
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient::constant(int(n))
    }

    /// The unknown `symbol` with coefficient 1.
    pub fn unknown(symbol: &str) -> Self {
        let mut linear = BTreeMap::new();
        linear.insert(symbol.to_string(), Rational::one());
        Coefficient { constant: Rational::zero(), linear }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.is_empty()
    }

    pub fn is_numeric(&self) -> bool {
        self.linear.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &String> {
        self.linear.keys()
    }

    pub fn add_assign(&mut self, other: &Coefficient) {
        self.constant += &other.constant;
        for (s, q) in &other.linear {
            let e = self.linear.entry(s.clone()).or_insert_with(Rational::zero);
            *e += q;
            if e.is_zero() {
                self.linear.remove(s);
            }
        }
    }

    pub fn scale(&self, q: &Rational) -> Coefficient {
        if q.is_zero() {
            return Coefficient::zero();
        }
        Coefficient {
            constant: &self.constant * q,
            linear: self.linear.iter().map(|(s, c)| (s.clone(), c * q)).collect(),
        }
    }

    pub fn neg(&self) -> Coefficient {
        self.scale(&-Rational::one())
    }

    pub fn mul(&self, other: &Coefficient) -> Result<Coefficient, LaurentError> {
        match (self.is_numeric(), other.is_numeric()) {
            (true, _) => Ok(other.scale(&self.constant)),
            (false, true) => Ok(self.scale(&other.constant)),
            (false, false) => Err(LaurentError::NonlinearUnknowns),
        }
    }

    /// Substitutes numeric values for unknowns; unassigned symbols remain.
    pub fn substitute(&self, values: &BTreeMap<String, Rational>) -> Coefficient {
        let mut out = Coefficient::constant(self.constant.clone());
        for (s, c) in &self.linear {
            match values.get(s) {
                Some(v) => out.constant += c * v,
                None => {
                    out.linear.insert(s.clone(), c.clone());
                }
            }
        }
        out
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (s, c) in &self.linear {
            parts.push(if c.is_one() {
                s.clone()
            } else if *c == -Rational::one() {
                format!("-{s}")
            } else {
                format!("{}{s}", fmt_rational(c))
            });
        }
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(fmt_rational(&self.constant));
        }
        let joined = parts.join(" + ").replace("+ -", "- ");
        if parts.len() > 1 {
            write!(f, "({joined})")
        } else {
            write!(f, "{joined}")
        }
    }
}

impl Serialize for Coefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            constant: String,
            linear: BTreeMap<String, String>,
        }
        Repr {
            constant: fmt_rational(&self.constant),
            linear: self.linear.iter().map(|(k, v)| (k.clone(), fmt_rational(v))).collect(),
        }
        .serialize(s)
    }
}

/// Finite sum of monomials `c · t^e` with no zero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Exponent, Coefficient>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        LaurentPoly::monomial(vec![0; rank], Coefficient::from_int(1))
    }

    pub fn monomial(exp: Exponent, coeff: Coefficient) -> Self {
        let mut p = LaurentPoly::zero(exp.len());
        p.add_term(exp, &coeff);
        p
    }

    /// Builds a polynomial from `(exponent, integer coefficient)` pairs.
    pub fn from_int_terms(rank: usize, terms: &[(Exponent, i64)]) -> Self {
        let mut p = LaurentPoly::zero(rank);
        for (e, c) in terms {
            assert_eq!(e.len(), rank, "exponent of the wrong rank");
            p.add_term(e.clone(), &Coefficient::from_int(*c));
        }
        p
    }

    /// Univariate polynomial from coefficients of `t^0, t^1, …`.
    pub fn univariate(coeffs: &[i64]) -> Self {
        let terms: Vec<(Exponent, i64)> = coeffs.iter().enumerate().map(|(i, &c)| (vec![i as i64], c)).collect();
        LaurentPoly::from_int_terms(1, &terms)
    }

    /// `1 − t^ν`.
    pub fn one_minus(nu: &[i64]) -> Self {
        let mut p = LaurentPoly::one(nu.len());
        p.add_term(nu.to_vec(), &Coefficient::from_int(-1));
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Coefficient> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: &[i64]) -> Coefficient {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn is_numeric(&self) -> bool {
        self.terms.values().all(Coefficient::is_numeric)
    }

    pub fn unknowns(&self) -> Vec<String> {
        let mut v: Vec<String> = self.terms.values().flat_map(|c| c.symbols().cloned()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn add_term(&mut self, exp: Exponent, coeff: &Coefficient) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_default();
        slot.add_assign(coeff);
        if slot.is_zero() {
            let key = self.terms.iter().find(|(_, c)| c.is_zero()).map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    fn check_rank(&self, other: &LaurentPoly) -> Result<(), LaurentError> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(LaurentError::RankMismatch(self.rank, other.rank))
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, q: &Rational) -> LaurentPoly {
        if q.is_zero() {
            return LaurentPoly::zero(self.rank);
        }
        LaurentPoly { rank: self.rank, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.scale(q))).collect() }
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_rank(other)?;
        let mut out = LaurentPoly::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &c1.mul(c2)?);
            }
        }
        Ok(out)
    }

    /// Multiplication by the monomial `t^shift`.
    pub fn shift(&self, shift: &[i64]) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Applies a linear map to every exponent, merging collisions.
    pub fn map_exponents(&self, new_rank: usize, f: impl Fn(&[i64]) -> Exponent) -> LaurentPoly {
        let mut out = LaurentPoly::zero(new_rank);
        for (e, c) in &self.terms {
            out.add_term(f(e), c);
        }
        out
    }

    /// Componentwise minimum of the exponents (zero vector for the zero polynomial).
    pub fn min_exponent(&self) -> Exponent {
        let mut m: Option<Exponent> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(m) => m.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.rank])
    }

    /// Value at `t = (1, …, 1)`.
    pub fn eval_at_ones(&self) -> Coefficient {
        let mut acc = Coefficient::zero();
        for c in self.terms.values() {
            acc.add_assign(c);
        }
        acc
    }

    pub fn substitute(&self, values: &BTreeMap<String, Rational>) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.rank);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &c.substitute(values));
        }
        out
    }
}

fn fmt_monomial(e: &[i64]) -> String {
    if e.iter().all(|&x| x == 0) {
        String::new()
    } else if e.len() == 1 {
        if e[0] == 1 {
            "t".to_string()
        } else {
            format!("t^{}", e[0])
        }
    } else {
        format!("t^{}", fmt_exp(e))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mono = fmt_monomial(e);
            let (neg, body) = if c.is_numeric() {
                let neg = c.constant.is_negative();
                let a = c.constant.abs();
                let body = if mono.is_empty() {
                    fmt_rational(&a)
                } else if a.is_one() {
                    mono
                } else {
                    format!("{}{mono}", fmt_rational(&a))
                };
                (neg, body)
            } else if c.constant.is_zero() && c.linear.len() == 1 {
                let (sym, q) = c.linear.iter().next().unwrap();
                let a = q.abs();
                let scale = if a.is_one() { String::new() } else { fmt_rational(&a) };
                (q.is_negative(), format!("{scale}{sym}{mono}"))
            } else {
                (false, format!("{c}{mono}"))
            };
            if first {
                write!(f, "{}{body}", if neg { "-" } else { "" })?;
            } else {
                write!(f, " {} {body}", if neg { "-" } else { "+" })?;
            }
            first = false;
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            exp: &'a Exponent,
            coeff: &'a Coefficient,
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            rank: usize,
            terms: Vec<Term<'a>>,
        }
        Repr { rank: self.rank, terms: self.terms.iter().map(|(exp, coeff)| Term { exp, coeff }).collect() }.serialize(s)
    }
}

/// Whether the first nonzero coordinate is positive.
pub fn is_positive_direction(nu: &[i64]) -> bool {
    nu.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// Divides by `1 − t^ν` after moving `ν` to a coordinate axis by a unimodular map.
pub fn divide_by_factor(p: &LaurentPoly, nu: &[i64]) -> Result<(LaurentPoly, bool), LaurentError> {
    if nu.len() != p.rank {
        return Err(LaurentError::RankMismatch(p.rank, nu.len()));
    }
    if nu.iter().all(|&x| x == 0) {
        return Err(LaurentError::ZeroFactor);
    }
    let g = nu.iter().fold(0i64, |a, &b| a.gcd(&b));
    let uni = unimodular_pair_to_axis(&Weight::from_ints(nu))?;
    let apply = |m: &Vec<Vec<i64>>, e: &[i64]| -> Exponent {
        m.iter().map(|row| row.iter().zip(e).map(|(a, b)| a * b).sum()).collect()
    };
    // In the new variables the factor is 1 − s_1^g; group by the remaining exponents.
    let mut fibers: BTreeMap<Exponent, BTreeMap<i64, Coefficient>> = BTreeMap::new();
    for (e, c) in &p.terms {
        let f = apply(&uni.forward, e);
        fibers.entry(f[1..].to_vec()).or_default().insert(f[0], c.clone());
    }
    let mut quotient = LaurentPoly::zero(p.rank);
    for (rest, col) in fibers {
        let lo = *col.keys().next().unwrap();
        let hi = *col.keys().next_back().unwrap();
        // f_k = q_k − q_{k−g}  ⇒  q_k = f_k + q_{k−g}, and q vanishes above hi − g.
        let mut q: BTreeMap<i64, Coefficient> = BTreeMap::new();
        for k in lo..=hi {
            let mut qk = col.get(&k).cloned().unwrap_or_default();
            if let Some(prev) = q.get(&(k - g)) {
                qk.add_assign(prev);
            }
            if k > hi - g {
                if !qk.is_zero() {
                    return Ok((LaurentPoly::zero(p.rank), false));
                }
            } else if !qk.is_zero() {
                q.insert(k, qk);
            }
        }
        for (k, c) in q {
            let mut e = vec![k];
            e.extend(&rest);
            quotient.add_term(apply(&uni.inverse, &e), &c);
        }
    }
    Ok((quotient, true))
}

/// `t^prefactor · numerator / ∏ (1 − t^ν)^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    rank: usize,
    numerator: LaurentPoly,
    denominator: BTreeMap<Exponent, u32>,
    prefactor: Exponent,
}

impl RationalFn {
    pub fn zero(rank: usize) -> Self {
        RationalFn::from_poly(LaurentPoly::zero(rank))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let rank = p.rank;
        let mut f = RationalFn { rank, numerator: p, denominator: BTreeMap::new(), prefactor: vec![0; rank] };
        f.canonicalize();
        f
    }

    /// `numerator / ∏ (1 − t^ν)^m` for arbitrary nonzero directions `ν`.
    pub fn new(numerator: LaurentPoly, factors: &[(Exponent, u32)]) -> Result<Self, LaurentError> {
        let rank = numerator.rank;
        let mut num = numerator;
        let mut denominator: BTreeMap<Exponent, u32> = BTreeMap::new();
        for (nu, m) in factors {
            if nu.len() != rank {
                return Err(LaurentError::RankMismatch(rank, nu.len()));
            }
            if nu.iter().all(|&x| x == 0) {
                return Err(LaurentError::ZeroFactor);
            }
            if *m == 0 {
                continue;
            }
            if is_positive_direction(nu) {
                *denominator.entry(nu.clone()).or_insert(0) += m;
            } else {
                // 1/(1 − t^ν) = −t^{−ν} / (1 − t^{−ν})
                let flipped: Exponent = nu.iter().map(|x| -x).collect();
                let shift: Exponent = flipped.iter().map(|x| x * i64::from(*m)).collect();
                num = num.shift(&shift);
                if m % 2 == 1 {
                    num = num.neg();
                }
                *denominator.entry(flipped).or_insert(0) += m;
            }
        }
        let mut f = RationalFn { rank, numerator: num, denominator, prefactor: vec![0; rank] };
        f.canonicalize();
        Ok(f)
    }

    /// `coeff · t^μ / ∏ (1 − t^ν)^m`.
    pub fn term(mu: &[i64], coeff: Coefficient, factors: &[(Exponent, u32)]) -> Result<Self, LaurentError> {
        RationalFn::new(LaurentPoly::monomial(mu.to_vec(), coeff), factors)
    }

    fn canonicalize(&mut self) {
        let m = self.numerator.min_exponent();
        let neg: Exponent = m.iter().map(|x| -x).collect();
        self.numerator = self.numerator.shift(&neg);
        self.prefactor = self.prefactor.iter().zip(&m).map(|(a, b)| a + b).collect();
        if self.numerator.is_zero() {
            self.prefactor = vec![0; self.rank];
            self.denominator.clear();
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Numerator with the prefactor shifted back in.
    pub fn laurent_numerator(&self) -> LaurentPoly {
        self.numerator.shift(&self.prefactor)
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn prefactor(&self) -> &Exponent {
        &self.prefactor
    }

    pub fn denominator_factors(&self) -> &BTreeMap<Exponent, u32> {
        &self.denominator
    }

    pub fn is_numeric(&self) -> bool {
        self.numerator.is_numeric()
    }

    pub fn unknowns(&self) -> Vec<String> {
        self.numerator.unknowns()
    }

    /// The product of the denominator factors as a polynomial.
    pub fn denominator_poly(&self) -> LaurentPoly {
        let mut d = LaurentPoly::one(self.rank);
        for (nu, m) in &self.denominator {
            for _ in 0..*m {
                d = d.mul(&LaurentPoly::one_minus(nu)).expect("numeric factors");
            }
        }
        d
    }

    /// Sum over a common denominator (the factorwise maximum of multiplicities).
    pub fn add(&self, other: &RationalFn) -> Result<RationalFn, LaurentError> {
        if self.rank != other.rank {
            return Err(LaurentError::RankMismatch(self.rank, other.rank));
        }
        let mut denominator = self.denominator.clone();
        for (nu, m) in &other.denominator {
            let e = denominator.entry(nu.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |f: &RationalFn| -> Result<LaurentPoly, LaurentError> {
            let mut num = f.laurent_numerator();
            for (nu, m) in &denominator {
                let have = f.denominator.get(nu).copied().unwrap_or(0);
                for _ in have..*m {
                    num = num.mul(&LaurentPoly::one_minus(nu))?;
                }
            }
            Ok(num)
        };
        let num = lift(self)?.add(&lift(other)?)?;
        let mut f = RationalFn { rank: self.rank, numerator: num, denominator, prefactor: vec![0; self.rank] };
        f.canonicalize();
        Ok(f)
    }

    /// Sum of many terms, added in order.
    pub fn sum<'a>(rank: usize, terms: impl IntoIterator<Item = &'a RationalFn>) -> Result<RationalFn, LaurentError> {
        let mut acc = RationalFn::zero(rank);
        for t in terms {
            acc = acc.add(t)?;
        }
        Ok(acc)
    }

    pub fn scale_coeff(&self, c: &Coefficient) -> Result<RationalFn, LaurentError> {
        let p = LaurentPoly::monomial(vec![0; self.rank], c.clone());
        let mut f = self.clone();
        f.numerator = f.numerator.mul(&p)?;
        f.canonicalize();
        Ok(f)
    }

    pub fn mul(&self, other: &RationalFn) -> Result<RationalFn, LaurentError> {
        if self.rank != other.rank {
            return Err(LaurentError::RankMismatch(self.rank, other.rank));
        }
        let mut denominator = self.denominator.clone();
        for (nu, m) in &other.denominator {
            *denominator.entry(nu.clone()).or_insert(0) += m;
        }
        let num = self.laurent_numerator().mul(&other.laurent_numerator())?;
        let mut f = RationalFn { rank: self.rank, numerator: num, denominator, prefactor: vec![0; self.rank] };
        f.canonicalize();
        Ok(f)
    }

    /// Semantic equality by cross-multiplication.
    pub fn equals(&self, other: &RationalFn) -> Result<bool, LaurentError> {
        let a = self.laurent_numerator().mul(&other.denominator_poly())?;
        let b = other.laurent_numerator().mul(&self.denominator_poly())?;
        Ok(a == b)
    }

    pub fn substitute(&self, values: &BTreeMap<String, Rational>) -> RationalFn {
        let mut f = self.clone();
        f.numerator = f.numerator.substitute(values);
        f.canonicalize();
        f
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.laurent_numerator();
        let num_s = if num.len() == 1 {
            let (e, c) = num.terms().iter().next().unwrap();
            let mono = fmt_monomial(e);
            match (c.is_numeric() && c.constant.is_one(), mono.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => mono,
                _ => format!("{num}"),
            }
        } else {
            format!("({num})")
        };
        if self.denominator.is_empty() {
            return write!(f, "{num_s}");
        }
        let dens: Vec<String> = self
            .denominator
            .iter()
            .map(|(nu, m)| {
                let base = format!("(1-{})", fmt_monomial(nu));
                if *m == 1 {
                    base
                } else {
                    format!("{base}^{m}")
                }
            })
            .collect();
        write!(f, "{num_s}/({})", dens.join(" "))
    }
}

impl Serialize for RationalFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Factor<'a> {
            nu: &'a Exponent,
            mult: u32,
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            rank: usize,
            numerator: &'a LaurentPoly,
            denominator_factors: Vec<Factor<'a>>,
            monomial_prefactor: &'a Exponent,
        }
        Repr {
            rank: self.rank,
            numerator: &self.numerator,
            denominator_factors: self.denominator.iter().map(|(nu, m)| Factor { nu, mult: *m }).collect(),
            monomial_prefactor: &self.prefactor,
        }
        .serialize(s)
    }
}

/// Cancels every denominator factor. On failure, all factors that cannot be
/// cancelled in any order are reported.
pub fn to_laurent(f: &RationalFn) -> Result<LaurentPoly, LaurentError> {
    if !f.is_numeric() {
        return Err(LaurentError::HasUnknowns(f.unknowns()));
    }
    let mut remaining: Vec<Exponent> = Vec::new();
    for (nu, m) in &f.denominator {
        remaining.extend(std::iter::repeat(nu.clone()).take(*m as usize));
    }
    let mut p = f.numerator.clone();
    loop {
        let mut progressed = false;
        let mut still = Vec::new();
        for nu in remaining {
            let (q, ok) = divide_by_factor(&p, &nu)?;
            if ok {
                p = q;
                progressed = true;
            } else {
                still.push(nu);
            }
        }
        remaining = still;
        if remaining.is_empty() {
            return Ok(p.shift(&f.prefactor));
        }
        if !progressed {
            return Err(LaurentError::NotDivisible(remaining));
        }
    }
}

/// Substitutes `t_i ↦ s^{λ_i}`.
pub fn specialize(f: &RationalFn, lambda: &[i64]) -> Result<RationalFn, LaurentError> {
    if lambda.len() != f.rank {
        return Err(LaurentError::RankMismatch(f.rank, lambda.len()));
    }
    let dot = |e: &[i64]| -> i64 { e.iter().zip(lambda).map(|(a, b)| a * b).sum() };
    let num = f.laurent_numerator().map_exponents(1, |e| vec![dot(e)]);
    let mut factors = Vec::new();
    for (nu, m) in &f.denominator {
        let k = dot(nu);
        if k == 0 {
            return Err(LaurentError::CollapsedFactor(nu.clone()));
        }
        factors.push((vec![k], *m));
    }
    RationalFn::new(num, &factors)
}

/// Affine-linear equation `Σ coeff·symbol + constant = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LinearEquation {
    pub lhs: Coefficient,
}

impl LinearEquation {
    /// Scales to coprime integers with a positive leading coefficient.
    pub fn normalized(c: Coefficient) -> LinearEquation {
        let all: Vec<&Rational> = c.linear.values().chain(std::iter::once(&c.constant)).collect();
        let l = all.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let g = all.iter().fold(BigInt::zero(), |acc, q| acc.gcd(&(q.numer() * &l / q.denom())));
        if g.is_zero() {
            return LinearEquation { lhs: c };
        }
        let lead_neg = c.linear.values().next().map_or(c.constant.is_negative(), |q| q.is_negative());
        let mut factor = Rational::new(l, g);
        if lead_neg {
            factor = -factor;
        }
        LinearEquation { lhs: c.scale(&factor) }
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs.is_zero()
    }

    /// `0 = c` with `c ≠ 0`.
    pub fn is_contradiction(&self) -> bool {
        self.lhs.linear.is_empty() && !self.lhs.constant.is_zero()
    }
}

impl fmt::Display for LinearEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lin = Coefficient { constant: Rational::zero(), linear: self.lhs.linear.clone() };
        let shown = format!("{lin}");
        let shown = shown.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(&shown).to_string();
        write!(f, "{shown} = {}", fmt_rational(&-self.lhs.constant.clone()))
    }
}

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Conditions, affine-linear in the unknowns, for a univariate rational function
/// to be a Laurent polynomial: the numerator vanishes at `t = 1` to the order of the
/// denominator, and its remainder modulo the cyclotomic part of the denominator is zero.
pub fn laurent_conditions(f: &RationalFn) -> Result<Vec<LinearEquation>, LaurentError> {
    if f.rank != 1 {
        return Err(LaurentError::NotUnivariate(f.rank));
    }
    // Coefficients of the honest polynomial numerator, t^0 upwards.
    let deg = f.numerator.terms().keys().map(|e| e[0]).max().unwrap_or(0);
    let coeffs: Vec<Coefficient> = (0..=deg).map(|k| f.numerator.coefficient(&[k])).collect();
    let order: u32 = f.denominator.values().sum();
    let mut eqs = Vec::new();
    for j in 0..i64::from(order) {
        let mut c = Coefficient::zero();
        for (e, ce) in coeffs.iter().enumerate() {
            let b = binomial(e as i64, j);
            if !b.is_zero() {
                c.add_assign(&ce.scale(&Rational::from_integer(b)));
            }
        }
        eqs.push(c);
    }
    // Cyclotomic part: ∏ (1 + t + … + t^{k−1})^m, monic with integer coefficients.
    let mut cyc: Vec<Rational> = vec![Rational::one()];
    for (nu, m) in &f.denominator {
        let k = nu[0] as usize;
        for _ in 0..*m {
            let mut next = vec![Rational::zero(); cyc.len() + k - 1];
            for (i, a) in cyc.iter().enumerate() {
                for j in 0..k {
                    next[i + j] += a;
                }
            }
            cyc = next;
        }
    }
    let dc = cyc.len() - 1;
    if dc > 0 {
        let mut r = coeffs.clone();
        while r.len() > dc {
            let top = r.len() - 1;
            let lead = r[top].clone();
            if !lead.is_zero() {
                for (i, a) in cyc.iter().enumerate() {
                    r[top - dc + i].add_assign(&lead.scale(&-a.clone()));
                }
            }
            r.pop();
        }
        eqs.extend(r);
    }
    let mut out: Vec<LinearEquation> =
        eqs.into_iter().map(LinearEquation::normalized).filter(|e| !e.is_trivial()).collect();
    out.dedup();
    Ok(out)
}

/// Outcome of solving an affine-linear system exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LinearSolution {
    Unique(BTreeMap<String, String>),
    Underdetermined { residual: Vec<String> },
    Inconsistent { residual: Vec<String> },
}

/// Gaussian elimination over the rationals. On success the values are returned as
/// exact rationals keyed by symbol.
pub fn solve_linear_system(
    eqs: &[LinearEquation],
    unknowns: &[String],
) -> Result<BTreeMap<String, Rational>, LinearSolution> {
    let n = unknowns.len();
    let mut rows: Vec<Vec<Rational>> = eqs
        .iter()
        .map(|e| {
            let mut r: Vec<Rational> =
                unknowns.iter().map(|u| e.lhs.linear.get(u).cloned().unwrap_or_else(Rational::zero)).collect();
            r.push(-e.lhs.constant.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let pv = rows[r][col].clone();
        for c in 0..=n {
            rows[r][c] = &rows[r][c] / &pv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let fct = rows[i][col].clone();
                for c in 0..=n {
                    let t = &fct * &rows[r][c];
                    rows[i][c] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let residual: Vec<String> = rows
        .iter()
        .map(|row| {
            let mut c = Coefficient::constant(-row[n].clone());
            for (i, u) in unknowns.iter().enumerate() {
                if !row[i].is_zero() {
                    c.linear.insert(u.clone(), row[i].clone());
                }
            }
            LinearEquation { lhs: c }.to_string()
        })
        .collect();
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return Err(LinearSolution::Inconsistent { residual });
    }
    if pivots.len() < n {
        return Err(LinearSolution::Underdetermined { residual: residual[..r].to_vec() });
    }
    Ok(unknowns.iter().enumerate().map(|(i, u)| (u.clone(), rows[i][n].clone())).collect())
}

/// The integer value of an exact rational, if integral and small.
pub fn as_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}
