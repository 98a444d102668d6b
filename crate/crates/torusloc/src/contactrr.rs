//! Riemann–Roch for contact manifolds of dimension `2n + 1`.
//!
//! Classes live in the truncated graded ring `Q[ℓ, c₂F, c₄F, …, c_{2n}F]` with
//! `ℓ = c₁(L)` of degree 1 and `c_{2k}F` of degree `2k`; products above degree `2n + 1`
//! vanish. Top-degree monomials are opaque intersection numbers, except `ℓ^{2n+1}`,
//! which is named `deg`. The values `p(1)` and `p(2)` appear as symbols `p1` and `p2`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::laurent::Coefficient;
use crate::weights::{fmt_rational, int, rat, Rational};

pub const DEGREE: &str = "deg";
pub const P1: &str = "p1";
pub const P2: &str = "p2";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContactError {
    #[error("n must be at least 1")]
    BadN,
    #[error("only available for n in {supported}, got {n}")]
    Unsupported { n: usize, supported: &'static str },
    #[error("the vanishing constraints are inconsistent")]
    Inconsistent,
    #[error("{what} is not determined by deg, p(1) and p(2): remaining {rest}")]
    Undetermined { what: String, rest: String },
}

pub type Result<T> = std::result::Result<T, ContactError>;

/// Exponents of `[ℓ, c₂F, c₄F, …, c_{2n}F]`.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernExpression {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

fn mono_degree(m: &Monomial) -> usize {
    m.iter().enumerate().map(|(i, &e)| e as usize * if i == 0 { 1 } else { 2 * i }).sum()
}

impl ChernExpression {
    pub fn zero(n: usize) -> Self {
        ChernExpression { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, q: Rational) -> Self {
        let mut e = ChernExpression::zero(n);
        e.add_term(vec![0; n + 1], q);
        e
    }

    /// `ℓ^k`.
    pub fn ell_power(n: usize, k: u32) -> Self {
        let mut m = vec![0; n + 1];
        m[0] = k;
        let mut e = ChernExpression::zero(n);
        e.add_term(m, Rational::one());
        e
    }

    /// The even class `c_{2k}(F)`, `1 <= k <= n`.
    pub fn even_class(n: usize, k: usize) -> Self {
        assert!((1..=n).contains(&k));
        let mut m = vec![0; n + 1];
        m[k] = 1;
        let mut e = ChernExpression::zero(n);
        e.add_term(m, Rational::one());
        e
    }

    pub fn top_degree(&self) -> usize {
        2 * self.n + 1
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, q: Rational) {
        if q.is_zero() || mono_degree(&m) > self.top_degree() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += q;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &ChernExpression) -> ChernExpression {
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.add_term(m.clone(), q.clone());
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> ChernExpression {
        let mut out = ChernExpression::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * q);
        }
        out
    }

    pub fn mul(&self, other: &ChernExpression) -> ChernExpression {
        let mut out = ChernExpression::zero(self.n);
        for (m1, q1) in &self.terms {
            for (m2, q2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, q1 * q2);
            }
        }
        out
    }

    /// Homogeneous part of degree `k`.
    pub fn graded_part(&self, k: usize) -> ChernExpression {
        ChernExpression {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| mono_degree(m) == k).map(|(m, q)| (m.clone(), q.clone())).collect(),
        }
    }

    /// `exp` of an expression without constant term.
    pub fn exp(&self) -> ChernExpression {
        assert!(self.coefficient(&vec![0; self.n + 1]).is_zero(), "exp needs a nilpotent argument");
        let mut out = ChernExpression::constant(self.n, Rational::one());
        let mut power = ChernExpression::constant(self.n, Rational::one());
        for i in 1..=self.top_degree() {
            power = power.mul(self).scale(&rat(1, i as i64));
            if power.terms.is_empty() {
                break;
            }
            out = out.add(&power);
        }
        out
    }

    /// Reads off the top-degree part as a linear form in intersection symbols.
    pub fn integrate(&self) -> Coefficient {
        let mut c = Coefficient::zero();
        for (m, q) in &self.terms {
            if mono_degree(m) == self.top_degree() {
                let mut term = Coefficient::unknown(&symbol_name(m));
                term = term.scale(q);
                c.add_assign(&term);
            }
        }
        c
    }
}

fn generator_name(i: usize) -> String {
    if i == 0 {
        "c1L".to_string()
    } else {
        format!("c{}F", 2 * i)
    }
}

fn monomial_name(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for i in (0..m.len()).rev() {
        match m[i] {
            0 => {}
            1 => parts.push(generator_name(i)),
            e => parts.push(format!("{}^{e}", generator_name(i))),
        }
    }
    parts.join("*")
}

/// Name of a top-degree intersection number.
fn symbol_name(m: &Monomial) -> String {
    if m[1..].iter().all(|&e| e == 0) {
        DEGREE.to_string()
    } else {
        monomial_name(m)
    }
}

impl fmt::Display for ChernExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Higher F-classes first, then by descending power of c1L.
        let mut ts: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        ts.sort_by(|a, b| {
            let ka: Vec<u32> = a.0[1..].iter().rev().copied().collect();
            let kb: Vec<u32> = b.0[1..].iter().rev().copied().collect();
            kb.cmp(&ka).then(a.0[0].cmp(&b.0[0]))
        });
        for (i, (m, q)) in ts.into_iter().enumerate() {
            let name = monomial_name(m);
            let a = q.abs();
            let body = match (name.is_empty(), a.is_one()) {
                (true, _) => fmt_rational(&a),
                (false, true) => name,
                (false, false) => format!("{}*{name}", fmt_rational(&a)),
            };
            let sign = if q.is_negative() { "-" } else { "+" };
            if i == 0 {
                write!(f, "{}{body}", if q.is_negative() { "-" } else { "" })?;
            } else {
                write!(f, " {sign} {body}")?;
            }
        }
        Ok(())
    }
}

fn binomial(n: i64, k: i64) -> Rational {
    if k < 0 || k > n {
        return Rational::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(r)
}

/// All Chern classes `c_1(F) … c_{2n}(F)` of the rank-`2n` bundle `F ≅ F* ⊗ L`, with the odd
/// ones expressed through the even ones and `ℓ` (index `j` holds `c_j`, index 0 holds 1).
pub fn chern_classes_of_f(n: usize) -> Result<Vec<ChernExpression>> {
    if n == 0 {
        return Err(ContactError::BadN);
    }
    let rank = 2 * n as i64;
    let mut c: Vec<ChernExpression> = vec![ChernExpression::constant(n, Rational::one())];
    for j in 1..=2 * n {
        if j % 2 == 0 {
            c.push(ChernExpression::even_class(n, j / 2));
            continue;
        }
        // c_j(F* ⊗ L) = Σ_k (−1)^k C(2n−k, j−k) c_k ℓ^{j−k}; equating with c_j for odd j:
        // 2 c_j = Σ_{k<j} (−1)^k C(2n−k, j−k) c_k ℓ^{j−k}.
        let mut acc = ChernExpression::zero(n);
        for (k, ck) in c.iter().enumerate() {
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            let coeff = sign * binomial(rank - k as i64, (j - k) as i64) / int(2);
            acc = acc.add(&ck.mul(&ChernExpression::ell_power(n, (j - k) as u32)).scale(&coeff));
        }
        c.push(acc);
    }
    Ok(c)
}

/// `(j, c_j(F))` for odd `j`.
pub fn odd_chern_relations(n: usize) -> Result<Vec<(usize, ChernExpression)>> {
    let c = chern_classes_of_f(n)?;
    Ok((1..=2 * n).step_by(2).map(|j| (j, c[j].clone())).collect())
}

/// Coefficients `a_k` of `log(x / (1 − e^{−x}))`, for `k = 0..=deg`.
fn log_todd_series(deg: usize) -> Vec<Rational> {
    // u = (1 − e^{−x})/x − 1 = Σ_{k≥1} (−1)^k x^k / (k+1)!
    let mut fact = BigInt::one();
    let mut u = vec![Rational::zero(); deg + 1];
    for k in 1..=deg {
        fact *= BigInt::from(k as u64 + 1);
        let q = Rational::new(BigInt::one(), fact.clone());
        u[k] = if k % 2 == 0 { q } else { -q };
    }
    let mul = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); deg + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(deg + 1 - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    // log(x/(1−e^{−x})) = −log(1 + u) = Σ_{i≥1} (−1)^i u^i / i
    let mut out = vec![Rational::zero(); deg + 1];
    let mut power = u.clone();
    for i in 1..=deg {
        let s = if i % 2 == 0 { rat(1, i as i64) } else { rat(-1, i as i64) };
        for k in 0..=deg {
            out[k] += &power[k] * &s;
        }
        power = mul(&power, &u);
    }
    out
}

/// Todd class of the tangent bundle, `td(F) · td(L)`.
pub fn todd_class(n: usize) -> Result<ChernExpression> {
    let d = 2 * n + 1;
    let c = chern_classes_of_f(n)?;
    let e = |i: usize| if i < c.len() { c[i].clone() } else { ChernExpression::zero(n) };
    // Newton: p_k = Σ_{i=1}^{k−1} (−1)^{i−1} e_i p_{k−i} + (−1)^{k−1} k e_k
    let mut p: Vec<ChernExpression> = vec![ChernExpression::zero(n)];
    for k in 1..=d {
        let mut acc = e(k).scale(&int(if k % 2 == 1 { k as i64 } else { -(k as i64) }));
        for i in 1..k {
            let s = if i % 2 == 1 { int(1) } else { int(-1) };
            acc = acc.add(&e(i).mul(&p[k - i]).scale(&s));
        }
        p.push(acc);
    }
    let a = log_todd_series(d);
    let mut x = ChernExpression::zero(n);
    for k in 1..=d {
        x = x.add(&p[k].add(&ChernExpression::ell_power(n, k as u32)).scale(&a[k]));
    }
    Ok(x.exp())
}

fn factorial(k: usize) -> Rational {
    Rational::from_integer((1..=k as u64).map(BigInt::from).product())
}

/// Row-reduced constraint system; pivots are chosen in the given symbol order.
#[derive(Clone, Debug)]
struct Reducer {
    rows: Vec<(String, Coefficient)>,
    redundant: usize,
}

impl Reducer {
    fn new(eqs: Vec<Coefficient>, order: &[String]) -> Result<Reducer> {
        let mut pending = eqs;
        let mut rows: Vec<(String, Coefficient)> = Vec::new();
        for sym in order {
            let Some(idx) = pending.iter().position(|e| e.linear.contains_key(sym)) else { continue };
            let row = pending.remove(idx);
            let pv = row.linear[sym].clone();
            let row = row.scale(&(Rational::one() / pv));
            let eliminate = |c: &Coefficient| -> Coefficient {
                match c.linear.get(sym) {
                    Some(q) => {
                        let mut out = c.clone();
                        out.add_assign(&row.scale(&-q.clone()));
                        out
                    }
                    None => c.clone(),
                }
            };
            pending = pending.iter().map(eliminate).collect();
            for (_, r) in rows.iter_mut() {
                *r = eliminate(r);
            }
            rows.push((sym.clone(), row));
        }
        let mut redundant = 0;
        for e in &pending {
            if !e.linear.is_empty() {
                // A symbol outside the ordering; keep it as an irreducible constraint.
                return Err(ContactError::Undetermined { what: "constraint".into(), rest: e.to_string() });
            }
            if !e.constant.is_zero() {
                return Err(ContactError::Inconsistent);
            }
            redundant += 1;
        }
        Ok(Reducer { rows, redundant })
    }

    fn reduce(&self, c: &Coefficient) -> Coefficient {
        let mut out = c.clone();
        for (sym, row) in &self.rows {
            if let Some(q) = out.linear.get(sym).cloned() {
                out.add_assign(&row.scale(&-q));
            }
        }
        out
    }
}

fn keeps_only(c: &Coefficient, allowed: &[&str]) -> bool {
    c.linear.keys().all(|s| allowed.contains(&s.as_str()))
}

/// `p(m) = χ(L^m)` for a contact manifold of dimension `2n + 1` with `Pic = Z·L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertPoly {
    pub n: usize,
    pub dim: usize,
    /// Coefficients of `m^0, …, m^dim`.
    pub monomial_coeffs: Vec<Coefficient>,
    /// Coefficients `b_k` in `p(m) = Σ b_k C(m + k, k)`.
    pub binomial_coeffs: Vec<Coefficient>,
    /// Number of vanishing constraints implied by the others.
    pub redundant_constraints: usize,
    /// Whether `n` lies in the range `1..=5` with independent reference values.
    pub verified: bool,
    #[serde(skip)]
    reducer_rows: Vec<(String, Coefficient)>,
}

/// Free symbols kept in the result: `deg`, `p1`, and `p2` from `n = 5` on.
fn kept_symbols(n: usize) -> Vec<&'static str> {
    if n >= 5 {
        vec![DEGREE, P1, P2]
    } else {
        vec![DEGREE, P1]
    }
}

fn poly_eval(coeffs: &[Coefficient], m: &Rational) -> Coefficient {
    let mut acc = Coefficient::zero();
    let mut pow = Rational::one();
    for c in coeffs {
        acc.add_assign(&c.scale(&pow));
        pow *= m;
    }
    acc
}

/// Coefficients of `C(m + k, k)` as a polynomial in `m`.
fn binomial_poly(k: usize) -> Vec<Rational> {
    let mut p = vec![Rational::one()];
    for i in 1..=k {
        let mut next = vec![Rational::zero(); p.len() + 1];
        for (j, a) in p.iter().enumerate() {
            next[j] += a * int(i as i64);
            next[j + 1] += a;
        }
        p = next;
    }
    let f = factorial(k);
    p.into_iter().map(|a| a / &f).collect()
}

pub fn hilbert_polynomial(n: usize) -> Result<HilbertPoly> {
    if n == 0 {
        return Err(ContactError::BadN);
    }
    let d = 2 * n + 1;
    let td = todd_class(n)?;
    let mut coeffs = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let part = td.graded_part(d - j).mul(&ChernExpression::ell_power(n, j as u32));
        coeffs.push(part.integrate().scale(&(Rational::one() / factorial(j))));
    }
    let kept = kept_symbols(n);
    let mut constraints = Vec::new();
    let mut p0 = poly_eval(&coeffs, &Rational::zero());
    p0.add_assign(&Coefficient::from_int(-1));
    constraints.push(p0);
    // χ(L^{−k}) vanishes for 0 < k < n + 1.
    for k in 1..=n.min(2) as i64 {
        constraints.push(poly_eval(&coeffs, &int(-k)));
    }
    let mut p1 = poly_eval(&coeffs, &int(1));
    p1.add_assign(&Coefficient::unknown(P1).neg());
    constraints.push(p1);
    if kept.contains(&P2) {
        let mut p2 = poly_eval(&coeffs, &int(2));
        p2.add_assign(&Coefficient::unknown(P2).neg());
        constraints.push(p2);
    }
    // Pivot on opaque intersection numbers first, then on p2, p1, and deg last.
    let mut order: Vec<String> = {
        let mut all: Vec<String> = coeffs.iter().flat_map(|c| c.symbols().cloned()).collect();
        all.sort();
        all.dedup();
        all.into_iter().filter(|s| !kept.contains(&s.as_str())).collect()
    };
    order.extend(kept.iter().rev().map(|s| s.to_string()));
    let reducer = Reducer::new(constraints, &order)?;
    let monomial_coeffs: Vec<Coefficient> = coeffs.iter().map(|c| reducer.reduce(c)).collect();
    // Beyond the verified range the residual intersection numbers stay in the result.
    for (j, c) in monomial_coeffs.iter().enumerate() {
        if n <= 5 && !keeps_only(c, &kept) {
            return Err(ContactError::Undetermined { what: format!("coefficient of m^{j}"), rest: c.to_string() });
        }
    }
    // Peel off C(m+k,k) from the top degree down.
    let mut rest = monomial_coeffs.clone();
    let mut binomial_coeffs = vec![Coefficient::zero(); d + 1];
    for k in (0..=d).rev() {
        let b = rest[k].scale(&factorial(k));
        for (i, q) in binomial_poly(k).iter().enumerate() {
            rest[i].add_assign(&b.scale(&-q.clone()));
        }
        binomial_coeffs[k] = b;
    }
    Ok(HilbertPoly {
        n,
        dim: d,
        monomial_coeffs,
        binomial_coeffs,
        redundant_constraints: reducer.redundant,
        verified: n <= 5,
        reducer_rows: reducer.rows,
    })
}

impl HilbertPoly {
    /// `p(m)` at a rational argument, affine in `deg`, `p1`, `p2`.
    pub fn eval(&self, m: &Rational) -> Coefficient {
        poly_eval(&self.monomial_coeffs, m)
    }

    /// `p(m)` with numeric values substituted for the symbols.
    pub fn eval_numeric(&self, m: &Rational, values: &BTreeMap<String, Rational>) -> Coefficient {
        self.eval(m).substitute(values)
    }

    /// Rewrites an intersection-number form through the vanishing constraints.
    fn reduce(&self, c: &Coefficient) -> Coefficient {
        Reducer { rows: self.reducer_rows.clone(), redundant: 0 }.reduce(c)
    }
}

impl fmt::Display for HilbertPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in (0..=self.dim).rev() {
            let c = &self.binomial_coeffs[k];
            if c.is_zero() {
                continue;
            }
            let binom = format!("C(m+{k},{k})");
            let (neg, body) = signed_body(c);
            let term = if body == "1" { binom } else { format!("{body}*{binom}") };
            if first {
                write!(f, "{}{term}", if neg { "-" } else { "" })?;
            } else {
                write!(f, " {} {term}", if neg { "-" } else { "+" })?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Splits a coefficient into a sign and a body with a positive leading part.
fn signed_body(c: &Coefficient) -> (bool, String) {
    let lead_neg = c.linear.values().next().map_or(c.constant.is_negative(), |q| q.is_negative());
    let shown = if lead_neg { c.neg() } else { c.clone() };
    let s = shown.to_string();
    let s = if c.linear.len() + usize::from(!c.constant.is_zero()) > 1 { s } else { s.trim_matches(|ch| ch == '(' || ch == ')').to_string() };
    (lead_neg, s)
}

/// An identity `lhs = rhs` between intersection numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionIdentity {
    pub lhs: String,
    pub rhs: Coefficient,
}

impl fmt::Display for IntersectionIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rhs.to_string();
        write!(f, "{} = {}", self.lhs, r.trim_start_matches('(').trim_end_matches(')'))
    }
}

/// `c₁(TX)² ℓ^{d−2}` and `c₂(TX) ℓ^{d−2}` as forms in `deg` and `p1` (and `p2`),
/// using `c(TX) = c(F)(1 + ℓ)`.
fn tangent_forms(hp: &HilbertPoly) -> Result<(Coefficient, Coefficient)> {
    let n = hp.n;
    let d = hp.dim;
    let c = chern_classes_of_f(n)?;
    let ell = ChernExpression::ell_power(n, 1);
    let c1 = c[1].add(&ell);
    let c2 = c[2].add(&c[1].mul(&ell));
    let tail = ChernExpression::ell_power(n, (d - 2) as u32);
    let c1sq = hp.reduce(&c1.mul(&c1).mul(&tail).integrate());
    let c2l = hp.reduce(&c2.mul(&tail).integrate());
    let kept = kept_symbols(n);
    for (what, form) in [("c1(TX)^2", &c1sq), ("c2(TX)", &c2l)] {
        if !keeps_only(form, &kept) {
            return Err(ContactError::Undetermined { what: what.into(), rest: form.to_string() });
        }
    }
    Ok((c1sq, c2l))
}

pub fn intersection_identities(n: usize) -> Result<Vec<IntersectionIdentity>> {
    if !(3..=4).contains(&n) {
        return Err(ContactError::Unsupported { n, supported: "3..=4" });
    }
    let hp = hilbert_polynomial(n)?;
    let (c1sq, c2l) = tangent_forms(&hp)?;
    let tail = format!("c1(L)^{}", hp.dim - 2);
    Ok(vec![
        IntersectionIdentity { lhs: format!("c1(TX)^2*{tail}"), rhs: c1sq },
        IntersectionIdentity { lhs: format!("c2(TX)*{tail}"), rhs: c2l },
    ])
}

/// The Bogomolov–Gieseker form `(2d·c₂ − (d−1)·c₁²)·ℓ^{d−2} >= 0`, scaled to coprime integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BgBound {
    pub n: usize,
    /// Nonnegative by the inequality.
    pub form: Coefficient,
    /// `(a, b)` with `p1 >= a + b·deg`, when the form involves `p1` but not `p2`.
    pub p1_lower: Option<(String, String)>,
    #[serde(skip)]
    p1_lower_exact: Option<(Rational, Rational)>,
}

pub fn bg_bound(n: usize) -> Result<BgBound> {
    if !(3..=5).contains(&n) {
        return Err(ContactError::Unsupported { n, supported: "3..=5" });
    }
    let hp = hilbert_polynomial(n)?;
    let d = hp.dim as i64;
    let (c1sq, c2l) = tangent_forms(&hp)?;
    let mut form = c2l.scale(&int(2 * d));
    form.add_assign(&c1sq.scale(&int(-(d - 1))));
    let form = primitive_positive_multiple(&form);
    let p1_lower_exact = match (form.linear.get(P1), form.linear.contains_key(P2)) {
        (Some(a), false) if a.is_positive() => {
            let c = -&form.constant / a;
            let b = -form.linear.get(DEGREE).cloned().unwrap_or_else(Rational::zero) / a;
            Some((c, b))
        }
        _ => None,
    };
    let p1_lower = p1_lower_exact.as_ref().map(|(a, b)| (fmt_rational(a), fmt_rational(b)));
    Ok(BgBound { n, form, p1_lower, p1_lower_exact })
}

/// Divides by the positive content so that all coefficients are coprime integers.
fn primitive_positive_multiple(c: &Coefficient) -> Coefficient {
    let all: Vec<&Rational> = c.linear.values().chain(std::iter::once(&c.constant)).collect();
    let l = all.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let g = all.iter().fold(BigInt::zero(), |acc, q| acc.gcd(&(q.numer() * &l / q.denom())));
    if g.is_zero() {
        return c.clone();
    }
    c.scale(&Rational::new(l, g))
}

impl BgBound {
    /// Smallest integer `p(1)` allowed for the given degree.
    pub fn min_p1(&self, degree: i64) -> Option<i64> {
        let (a, b) = self.p1_lower_exact.as_ref()?;
        (a + b * int(degree)).ceil().to_integer().to_i64()
    }

    /// Whether numeric values satisfy the inequality.
    pub fn holds(&self, values: &BTreeMap<String, Rational>) -> Option<bool> {
        let v = self.form.substitute(values);
        v.is_numeric().then(|| !v.constant.is_negative())
    }
}

impl fmt::Display for BgBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((a, b)) = &self.p1_lower_exact {
            return write!(f, "p1 >= {} + {}*{DEGREE}", fmt_rational(a), fmt_rational(b));
        }
        let side = |positive: bool| -> String {
            let mut parts: Vec<String> = Vec::new();
            let mut push = |q: &Rational, name: &str| {
                if q.is_positive() == positive && !q.is_zero() {
                    let a = q.abs();
                    parts.push(if name.is_empty() {
                        fmt_rational(&a)
                    } else if a.is_one() {
                        name.to_string()
                    } else {
                        format!("{}{name}", fmt_rational(&a))
                    });
                }
            };
            for (s, q) in self.form.linear.iter().rev() {
                push(q, s);
            }
            push(&self.form.constant, "");
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        };
        write!(f, "{} >= {}", side(true), side(false))
    }
}

/// Integrality of the binomial-basis coefficients as a congruence on `deg`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityVerdict {
    /// `deg ≡ 0 (mod modulus)` is necessary.
    pub modulus: i64,
    pub congruence: String,
    pub pass: Option<bool>,
}

/// For `n = 4`, the Hilbert polynomial is integer valued only if `deg` is even.
pub fn parity_check(n: usize, degree: Option<i64>) -> Result<ParityVerdict> {
    if n != 4 {
        return Err(ContactError::Unsupported { n, supported: "4" });
    }
    let hp = hilbert_polynomial(n)?;
    let mut modulus = BigInt::one();
    for b in &hp.binomial_coeffs {
        let others_integral = b.constant.is_integer()
            && b.linear.iter().filter(|(s, _)| s.as_str() != DEGREE).all(|(_, q)| q.is_integer());
        if !others_integral {
            return Err(ContactError::Undetermined { what: "integrality condition".into(), rest: b.to_string() });
        }
        if let Some(q) = b.linear.get(DEGREE) {
            modulus = modulus.lcm(q.denom());
        }
    }
    let modulus = modulus.to_i64().expect("small modulus");
    let pass = degree.map(|d| d.rem_euclid(modulus) == 0);
    Ok(ParityVerdict { modulus, congruence: format!("{DEGREE} = 0 (mod {modulus})"), pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(n: usize, ell: u32, classes: &[(usize, u32)]) -> Monomial {
        let mut m = vec![0; n + 1];
        m[0] = ell;
        for &(k, e) in classes {
            m[k] = e;
        }
        m
    }

    fn expr(n: usize, terms: &[(Monomial, i64)]) -> ChernExpression {
        let mut e = ChernExpression::zero(n);
        for (m, q) in terms {
            e.add_term(m.clone(), int(*q));
        }
        e
    }

    #[test]
    fn odd_relations_in_dimension_seven() {
        let r = odd_chern_relations(3).unwrap();
        assert_eq!(r[0].1, expr(3, &[(mono(3, 1, &[]), 3)]));
        assert_eq!(r[1].1, expr(3, &[(mono(3, 1, &[(1, 1)]), 2), (mono(3, 3, &[]), -5)]));
        assert_eq!(r[2].1, expr(3, &[(mono(3, 1, &[(2, 1)]), 1), (mono(3, 3, &[(1, 1)]), -1), (mono(3, 5, &[]), 3)]));
        assert_eq!(r[1].1.to_string(), "2*c2F*c1L - 5*c1L^3");
    }

    #[test]
    fn odd_relations_in_dimension_nine() {
        let r = odd_chern_relations(4).unwrap();
        assert_eq!(r[0].1, expr(4, &[(mono(4, 1, &[]), 4)]));
        assert_eq!(r[1].1, expr(4, &[(mono(4, 1, &[(1, 1)]), 3), (mono(4, 3, &[]), -14)]));
        assert_eq!(
            r[2].1,
            expr(4, &[(mono(4, 1, &[(2, 1)]), 2), (mono(4, 3, &[(1, 1)]), -5), (mono(4, 5, &[]), 28)])
        );
        assert_eq!(
            r[3].1,
            expr(
                4,
                &[(mono(4, 1, &[(3, 1)]), 1), (mono(4, 3, &[(2, 1)]), -1), (mono(4, 5, &[(1, 1)]), 3), (mono(4, 7, &[]), -17)]
            )
        );
    }

    #[test]
    fn rank_two_relation_by_expansion() {
        // Chern roots x, y with {x, y} = {ℓ − x, ℓ − y}: c₁ = x + y, and c₁(F*⊗L) = 2ℓ − c₁.
        // Equality gives c₁ = ℓ.
        assert_eq!(odd_chern_relations(1).unwrap()[0].1, ChernExpression::ell_power(1, 1));
    }

    #[test]
    fn todd_series_matches_bernoulli_numbers() {
        // Expanding x/(1−e^{−x}) = 1 + x/2 + x²/12 − x⁴/720 + … and taking log.
        let a = log_todd_series(5);
        assert_eq!(&a[1..5], &[rat(1, 2), rat(-1, 24), Rational::zero(), rat(1, 2880)]);
    }

    #[test]
    fn binomial_polynomials() {
        assert_eq!(binomial_poly(2), vec![int(1), rat(3, 2), rat(1, 2)]);
    }

    #[test]
    fn serre_symmetry_of_the_hilbert_polynomials() {
        for n in 1..=5 {
            let hp = hilbert_polynomial(n).unwrap();
            let sign = if hp.dim % 2 == 0 { int(1) } else { int(-1) };
            for m in -6i64..=6 {
                let lhs = hp.eval(&int(m));
                let rhs = hp.eval(&int(-(n as i64 + 1) - m)).scale(&sign);
                assert_eq!(lhs, rhs, "n={n}, m={m}");
            }
        }
    }

    #[test]
    fn constraints_hold_and_p1_is_reproduced() {
        for n in 1..=5 {
            let hp = hilbert_polynomial(n).unwrap();
            assert_eq!(hp.eval(&int(0)), Coefficient::from_int(1));
            assert!(hp.eval(&int(-1)).is_zero());
            assert!(hp.eval(&int(-2)).is_zero() || n == 1);
        }
        let hp = hilbert_polynomial(3).unwrap();
        assert_eq!(hp.eval(&int(1)), Coefficient::unknown(P1));
        assert_eq!(hp.monomial_coeffs[7].linear[DEGREE], Rational::one() / factorial(7));
    }

    #[test]
    fn projective_three_space_is_the_dimension_three_case() {
        // P³ with L = O(2): deg = 8 and p(m) = C(2m+3, 3).
        let hp = hilbert_polynomial(1).unwrap();
        let vals = BTreeMap::from([(DEGREE.to_string(), int(8)), (P1.to_string(), int(10))]);
        for m in 0..6 {
            let want = binomial(2 * m + 3, 3);
            assert_eq!(hp.eval_numeric(&int(m), &vals), Coefficient::constant(want));
        }
        // Half-integer arguments are the powers of O(1).
        assert_eq!(hp.eval_numeric(&rat(1, 2), &vals), Coefficient::constant(int(4)));
        assert_eq!(hp.eval_numeric(&rat(3, 2), &vals), Coefficient::constant(int(20)));
        assert_eq!(hp.eval_numeric(&rat(-1, 2), &vals), Coefficient::constant(int(0)));
        assert_eq!(hp.eval_numeric(&rat(-5, 2), &vals), Coefficient::constant(int(-4)));
    }

    #[test]
    fn trivial_index_check() {
        let ids = intersection_identities(3).unwrap();
        assert_eq!(ids[0].rhs, Coefficient::unknown(DEGREE).scale(&int(16)));
        assert!(intersection_identities(5).is_err());
    }

    #[test]
    fn parity_verdicts() {
        let v = parity_check(4, Some(6)).unwrap();
        assert_eq!((v.modulus, v.pass), (2, Some(true)));
        assert_eq!(parity_check(4, Some(7)).unwrap().pass, Some(false));
        assert_eq!(parity_check(4, None).unwrap().congruence, "deg = 0 (mod 2)");
    }

    #[test]
    fn bg_thresholds_at_multiples_of_21() {
        let b = bg_bound(3).unwrap();
        for k in 1..=5 {
            assert_eq!(b.min_p1(21 * k), Some(4 + 5 * k));
        }
    }

    fn lin(deg: Rational, p1: i64, p2: i64, c: i64) -> Coefficient {
        let mut out = Coefficient::from_int(c);
        out.add_assign(&Coefficient::unknown(DEGREE).scale(&deg));
        out.add_assign(&Coefficient::unknown(P1).scale(&int(p1)));
        out.add_assign(&Coefficient::unknown(P2).scale(&int(p2)));
        out
    }

    fn check_binomial(n: usize, expected: &[(usize, Coefficient)]) {
        let hp = hilbert_polynomial(n).unwrap();
        for k in 0..=hp.dim {
            let want = expected.iter().find(|(j, _)| *j == k).map(|(_, c)| c.clone()).unwrap_or_else(Coefficient::zero);
            assert_eq!(hp.binomial_coeffs[k], want, "n={n}, k={k}");
        }
    }

    #[test]
    fn hilbert_polynomial_dimension_seven() {
        check_binomial(
            3,
            &[
                (7, lin(int(1), 0, 0, 0)),
                (6, lin(int(-2), 0, 0, 0)),
                (5, lin(int(1), 1, 0, -4)),
                (4, lin(int(0), -1, 0, 4)),
                (3, lin(int(0), 0, 0, 1)),
            ],
        );
        assert_eq!(hilbert_polynomial(3).unwrap().redundant_constraints, 1);
    }

    #[test]
    fn hilbert_polynomial_dimension_nine() {
        check_binomial(
            4,
            &[
                (9, lin(int(1), 0, 0, 0)),
                (8, lin(rat(-5, 2), 0, 0, 0)),
                (7, lin(int(2), 2, 0, -14)),
                (6, lin(rat(-1, 2), -3, 0, 21)),
                (5, lin(int(0), 1, 0, -5)),
                (4, lin(int(0), 0, 0, -1)),
            ],
        );
    }

    #[test]
    fn hilbert_polynomial_dimension_eleven() {
        check_binomial(
            5,
            &[
                (11, lin(int(1), 0, 0, 0)),
                (10, lin(int(-3), 0, 0, 0)),
                (9, lin(int(3), -8, 1, 27)),
                (8, lin(int(-1), 16, -2, -54)),
                (7, lin(int(0), -7, 1, 21)),
                (6, lin(int(0), -1, 0, 6)),
                (5, lin(int(0), 0, 0, 1)),
            ],
        );
        assert!(hilbert_polynomial(5).unwrap().verified);
        assert!(!hilbert_polynomial(6).unwrap().verified);
    }

    #[test]
    fn tangent_intersection_identities() {
        let seven = intersection_identities(3).unwrap();
        assert_eq!(seven[0].rhs, lin(int(16), 0, 0, 0));
        assert_eq!(seven[1].rhs, lin(int(4), 12, 0, -48));
        let nine = intersection_identities(4).unwrap();
        assert_eq!(nine[0].rhs, lin(int(25), 0, 0, 0));
        assert_eq!(nine[1].rhs, lin(int(9), 24, 0, -168));
        assert_eq!(seven[1].to_string(), "c2(TX)*c1(L)^5 = 4deg + 12p1 - 48");
    }

    #[test]
    fn bg_bounds() {
        let seven = bg_bound(3).unwrap();
        assert_eq!(seven.to_string(), "p1 >= 4 + 5/21*deg");
        let nine = bg_bound(4).unwrap();
        assert_eq!(nine.to_string(), "p1 >= 7 + 19/216*deg");
        let eleven = bg_bound(5).unwrap();
        assert_eq!(eleven.form, lin(int(-4), -88, 11, 297));
        assert_eq!(eleven.to_string(), "11p2 + 297 >= 88p1 + 4deg");
        assert!(bg_bound(2).is_err());
    }

    #[test]
    fn integer_corollaries_of_bg() {
        let seven = bg_bound(3).unwrap();
        let nine = bg_bound(4).unwrap();
        for deg in 1..=100 {
            assert!(seven.min_p1(deg).unwrap() >= 5);
            if deg % 2 == 0 {
                assert!(nine.min_p1(deg).unwrap() >= 8);
            }
        }
        assert_eq!(seven.min_p1(1), Some(5));
        assert_eq!(nine.min_p1(2), Some(8));
    }

    proptest::proptest! {
        #[test]
        fn integer_values_at_integers_for_even_degree(deg in 1i64..200, p1 in -50i64..200, m in -10i64..10) {
            let hp = hilbert_polynomial(4).unwrap();
            let vals = BTreeMap::from([(DEGREE.to_string(), int(2 * deg)), (P1.to_string(), int(p1))]);
            let v = hp.eval_numeric(&int(m), &vals);
            proptest::prop_assert!(v.is_numeric() && v.constant.is_integer());
        }
    }
}
