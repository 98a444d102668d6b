//! Fixed-point data, compass calculus and equivariant Euler characteristics.
//!
//! Conventions: a compass lists the torus weights on the conormal space of a fixed
//! component, so on `P¹` with `O(1)` the point of weight `0` has compass `{1}`.
//! The point contribution is `t^μ / ∏ (1 − t^ν)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{
    laurent_conditions, solve_linear_system, specialize, to_laurent, Coefficient, Exponent, LaurentError,
    LaurentPoly, LinearEquation, LinearSolution, RationalFn,
};
use crate::polytope::{tangent_cone, Polytope, PolytopeError};
use crate::weights::{fmt_rational, int, project, Lattice, Projection, Rational, Weight, WeightError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizeError {
    #[error("{label}: compass entry is the zero weight")]
    ZeroCompassEntry { label: String },
    #[error("{label}: compass entry with multiplicity 0")]
    ZeroMultiplicity { label: String },
    #[error("{label}: weight of rank {found}, data has rank {expected}")]
    RankMismatch { label: String, expected: usize, found: usize },
    #[error("{label}: compass has {found} entries, expected {expected}")]
    CompassSize { label: String, expected: usize, found: usize },
    #[error("{label}: localization needs integral weights")]
    NotIntegral { label: String },
    #[error("two fixed components, one isolated: the other must have dimension {expected}, found {found}")]
    TwoComponents { expected: usize, found: usize },
    #[error("invalid fixed-point file: {0}")]
    Json(String),
    #[error("{0} is not a vertex of the polytope")]
    NotAVertex(String),
    #[error("the data has unknown multiplicities {0:?}")]
    HasUnknowns(Vec<String>),
    #[error("the data has no unknown multiplicities")]
    NoUnknowns,
    #[error("multiplicities are not determined; remaining system: {}", .0.join("; "))]
    Underdetermined(Vec<String>),
    #[error("the vanishing conditions are inconsistent: {}", .0.join("; "))]
    Inconsistent(Vec<String>),
    #[error("multiplicity {symbol} = {value} is not a nonnegative integer")]
    InvalidSolution { symbol: String, value: String },
    #[error("{0}")]
    WrongShape(String),
    #[error("compass entry {0} maps to zero but is not in the span of the recorded kernel")]
    KernelIncomplete(String),
    #[error("{label}: fixed component is not isolated after projection ({count} zero weights)")]
    NotIsolated { label: String, count: u32 },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

pub type Result<T> = std::result::Result<T, LocalizeError>;

/// A weight with its multiplicity in a compass.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CompassEntry {
    pub nu: Weight,
    pub mult: u32,
}

/// Multiset of nonzero weights. Entries are merged and sorted, so equality is
/// multiset equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct Compass {
    entries: Vec<CompassEntry>,
}

impl<'de> Deserialize<'de> for Compass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<CompassEntry>::deserialize(d)?;
        Compass::new(raw).map_err(serde::de::Error::custom)
    }
}

impl Compass {
    pub fn new(entries: Vec<CompassEntry>) -> Result<Self> {
        let mut merged: BTreeMap<Weight, u32> = BTreeMap::new();
        for e in entries {
            if e.nu.is_zero() {
                return Err(LocalizeError::ZeroCompassEntry { label: "compass".into() });
            }
            if e.mult == 0 {
                return Err(LocalizeError::ZeroMultiplicity { label: "compass".into() });
            }
            *merged.entry(e.nu).or_insert(0) += e.mult;
        }
        Ok(Compass { entries: merged.into_iter().map(|(nu, mult)| CompassEntry { nu, mult }).collect() })
    }

    /// Counts repeated weights.
    pub fn from_weights(ws: impl IntoIterator<Item = Weight>) -> Result<Self> {
        Compass::new(ws.into_iter().map(|nu| CompassEntry { nu, mult: 1 }).collect())
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Compass::from_weights(rows.iter().map(|r| Weight::from_ints(r)))
    }

    pub fn empty() -> Self {
        Compass::default()
    }

    pub fn entries(&self) -> &[CompassEntry] {
        &self.entries
    }

    /// Total size counted with multiplicity.
    pub fn size(&self) -> usize {
        self.entries.iter().map(|e| e.mult as usize).sum()
    }

    pub fn multiplicity(&self, nu: &Weight) -> u32 {
        self.entries.iter().find(|e| &e.nu == nu).map_or(0, |e| e.mult)
    }

    /// Every weight repeated according to its multiplicity.
    pub fn expanded(&self) -> Vec<Weight> {
        self.entries.iter().flat_map(|e| std::iter::repeat(e.nu.clone()).take(e.mult as usize)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for Compass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| if e.mult == 1 { e.nu.to_string() } else { format!("{}^{}", e.nu, e.mult) })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub label: String,
    pub mu: Weight,
    pub compass: Compass,
}

impl FixedPoint {
    pub fn new(label: impl Into<String>, mu: Weight, compass: Compass) -> Self {
        FixedPoint { label: label.into(), mu, compass }
    }
}

/// One summand of the conormal bundle of a fixed curve: torus weight, rank and degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConormalSummand {
    pub nu: Weight,
    pub rank: u32,
    pub c1: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedCurve {
    pub label: String,
    pub mu: Weight,
    pub genus: u32,
    pub degree: i64,
    pub conormal: Vec<ConormalSummand>,
}

/// `symbol` copies of an isolated fixed point with the given weight and compass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnknownTemplate {
    pub symbol: String,
    pub mu: Weight,
    pub compass: Compass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointData {
    pub rank: usize,
    pub ambient_dim: usize,
    pub points: Vec<FixedPoint>,
    #[serde(default)]
    pub curves: Vec<FixedCurve>,
    #[serde(default)]
    pub unknowns: Vec<UnknownTemplate>,
    /// Character lattice when it is not `Z^rank`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Lattice>,
}

fn check_rank(label: &str, w: &Weight, rank: usize) -> Result<()> {
    if w.rank() == rank {
        Ok(())
    } else {
        Err(LocalizeError::RankMismatch { label: label.to_string(), expected: rank, found: w.rank() })
    }
}

fn check_compass(label: &str, c: &Compass, rank: usize, expected: usize) -> Result<()> {
    for e in c.entries() {
        check_rank(label, &e.nu, rank)?;
    }
    if c.size() != expected {
        return Err(LocalizeError::CompassSize { label: label.to_string(), expected, found: c.size() });
    }
    Ok(())
}

impl FixedPointData {
    pub fn new(rank: usize, ambient_dim: usize) -> Self {
        FixedPointData { rank, ambient_dim, points: vec![], curves: vec![], unknowns: vec![], lattice: None }
    }

    /// Parses and validates the JSON fixed-point format.
    pub fn from_json(s: &str) -> Result<Self> {
        let data: FixedPointData = serde_json::from_str(s).map_err(|e| LocalizeError::Json(e.to_string()))?;
        data.validate()?;
        Ok(data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixed-point data serializes")
    }

    /// Checks ranks, compass sizes and the two-component rule for rank 1.
    pub fn validate(&self) -> Result<()> {
        let d = self.ambient_dim;
        for p in &self.points {
            check_rank(&p.label, &p.mu, self.rank)?;
            check_compass(&p.label, &p.compass, self.rank, d)?;
        }
        for u in &self.unknowns {
            check_rank(&u.symbol, &u.mu, self.rank)?;
            check_compass(&u.symbol, &u.compass, self.rank, d)?;
        }
        for c in &self.curves {
            check_rank(&c.label, &c.mu, self.rank)?;
            let mut total = 0usize;
            for s in &c.conormal {
                check_rank(&c.label, &s.nu, self.rank)?;
                if s.nu.is_zero() {
                    return Err(LocalizeError::ZeroCompassEntry { label: c.label.clone() });
                }
                if s.rank == 0 {
                    return Err(LocalizeError::ZeroMultiplicity { label: c.label.clone() });
                }
                total += s.rank as usize;
            }
            if total + 1 != d {
                return Err(LocalizeError::CompassSize {
                    label: c.label.clone(),
                    expected: d.saturating_sub(1),
                    found: total,
                });
            }
        }
        if self.rank == 1 && d >= 1 && self.unknowns.is_empty() && self.points.len() + self.curves.len() == 2 && !self.points.is_empty() {
            let other = if self.points.len() == 2 { 0 } else { 1 };
            if other != d - 1 {
                return Err(LocalizeError::TwoComponents { expected: d - 1, found: other });
            }
        }
        Ok(())
    }

    /// Data for `L^m`: weights of the linearization and curve degrees scale by `m`.
    pub fn power(&self, m: i64) -> FixedPointData {
        let mut out = self.clone();
        for p in &mut out.points {
            p.mu = p.mu.scale_int(m);
        }
        for u in &mut out.unknowns {
            u.mu = u.mu.scale_int(m);
        }
        for c in &mut out.curves {
            c.mu = c.mu.scale_int(m);
            c.degree *= m;
        }
        out
    }

    pub fn unknown_symbols(&self) -> Vec<String> {
        let set: BTreeSet<String> = self.unknowns.iter().map(|u| u.symbol.clone()).collect();
        set.into_iter().collect()
    }

    /// Weights of all fixed components, with repetition.
    pub fn weights(&self) -> Vec<Weight> {
        self.points
            .iter()
            .map(|p| p.mu.clone())
            .chain(self.curves.iter().map(|c| c.mu.clone()))
            .chain(self.unknowns.iter().map(|u| u.mu.clone()))
            .collect()
    }

    pub fn point_at(&self, mu: &Weight) -> Option<&FixedPoint> {
        self.points.iter().find(|p| &p.mu == mu)
    }
}

fn integral(label: &str, w: &Weight) -> Result<Exponent> {
    w.to_i64().ok_or_else(|| LocalizeError::NotIntegral { label: label.to_string() })
}

fn compass_factors(label: &str, c: &Compass) -> Result<Vec<(Exponent, u32)>> {
    c.entries().iter().map(|e| Ok((integral(label, &e.nu)?, e.mult))).collect()
}

enum Component<'a> {
    Point(&'a FixedPoint),
    Curve(&'a FixedCurve),
    Unknown(&'a UnknownTemplate),
}

fn component_term(c: &Component<'_>) -> Result<RationalFn> {
    match c {
        Component::Point(p) => {
            Ok(RationalFn::term(&integral(&p.label, &p.mu)?, Coefficient::from_int(1), &compass_factors(&p.label, &p.compass)?)?)
        }
        Component::Unknown(u) => Ok(RationalFn::term(
            &integral(&u.symbol, &u.mu)?,
            Coefficient::unknown(&u.symbol),
            &compass_factors(&u.symbol, &u.compass)?,
        )?),
        Component::Curve(cv) => {
            // t^μ/∏(1−t^ν)^r · (1 − g + deg + Σ n/(t^{−ν} − 1)), with n/(t^{−ν}−1) = n t^ν/(1−t^ν).
            let mu = integral(&cv.label, &cv.mu)?;
            let mut factors = Vec::new();
            for s in &cv.conormal {
                factors.push((integral(&cv.label, &s.nu)?, s.rank));
            }
            let base = 1 - i64::from(cv.genus) + cv.degree;
            let mut acc = RationalFn::term(&mu, Coefficient::from_int(base), &factors)?;
            for (s, (nu, _)) in cv.conormal.iter().zip(&factors) {
                let mut f = factors.clone();
                f.push((nu.clone(), 1));
                let shifted: Exponent = mu.iter().zip(nu).map(|(a, b)| a + b).collect();
                acc = acc.add(&RationalFn::term(&shifted, Coefficient::from_int(s.c1), &f)?)?;
            }
            Ok(acc)
        }
    }
}

/// The localization sum over all fixed components. Unknown templates contribute
/// their symbol as a coefficient.
pub fn euler_characteristic(data: &FixedPointData) -> Result<RationalFn> {
    data.validate()?;
    let comps: Vec<Component<'_>> = data
        .points
        .iter()
        .map(Component::Point)
        .chain(data.curves.iter().map(Component::Curve))
        .chain(data.unknowns.iter().map(Component::Unknown))
        .collect();
    let terms: Vec<RationalFn> = comps.par_iter().map(component_term).collect::<Result<_>>()?;
    // Sums over a common denominator are canonical, so the reduction order is immaterial.
    let rank = data.rank;
    terms
        .into_par_iter()
        .map(Ok)
        .reduce(|| Ok(RationalFn::zero(rank)), |a: Result<RationalFn>, b: Result<RationalFn>| Ok(a?.add(&b?)?))
}

/// The character as a Laurent polynomial; fails when the data are inconsistent.
pub fn certify_laurent(data: &FixedPointData) -> Result<LaurentPoly> {
    if !data.unknowns.is_empty() {
        return Err(LocalizeError::HasUnknowns(data.unknown_symbols()));
    }
    Ok(to_laurent(&euler_characteristic(data)?)?)
}

/// Outcome of solving for unknown multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicitySolution {
    pub values: BTreeMap<String, i64>,
    pub conditions: Vec<String>,
    pub character: LaurentPoly,
}

/// Solves the vanishing conditions of the specialized character for the unknowns.
pub fn solve_multiplicities(data: &FixedPointData, lambda: &[i64]) -> Result<MultiplicitySolution> {
    let symbols = data.unknown_symbols();
    if symbols.is_empty() {
        return Err(LocalizeError::NoUnknowns);
    }
    let f = euler_characteristic(data)?;
    let g = specialize(&f, lambda)?;
    let eqs: Vec<LinearEquation> = laurent_conditions(&g)?;
    let sol = solve_linear_system(&eqs, &symbols).map_err(|e| match e {
        LinearSolution::Underdetermined { residual } => LocalizeError::Underdetermined(residual),
        LinearSolution::Inconsistent { residual } => LocalizeError::Inconsistent(residual),
        LinearSolution::Unique(_) => unreachable!("unique solutions are returned as Ok"),
    })?;
    let mut values = BTreeMap::new();
    for (s, q) in &sol {
        let v = if q.is_integer() && !q.is_negative() { q.to_integer().to_i64() } else { None };
        match v {
            Some(v) => {
                values.insert(s.clone(), v);
            }
            None => return Err(LocalizeError::InvalidSolution { symbol: s.clone(), value: fmt_rational(q) }),
        }
    }
    let character = to_laurent(&f.substitute(&sol))?;
    Ok(MultiplicitySolution { values, conditions: eqs.iter().map(ToString::to_string).collect(), character })
}

/// Pairing of compass entries summing to `−μ`, plus the leftover entry `−μ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContactPairing {
    pub pairs: Vec<(Weight, Weight)>,
    pub singleton: Weight,
}

/// Matches a fixed point's compass against the contact pattern. Pair classes
/// `{x, −μ−x}` are disjoint, so the matching exists iff the counts balance.
pub fn contact_dual_check(p: &FixedPoint) -> Option<ContactPairing> {
    let target = -&p.mu;
    if p.compass.size() % 2 == 0 || p.compass.multiplicity(&target) != 1 {
        return None;
    }
    let mut pairs = Vec::new();
    for e in p.compass.entries() {
        if e.nu == target {
            continue;
        }
        let partner = &target - &e.nu;
        if partner == e.nu {
            if e.mult % 2 != 0 {
                return None;
            }
            pairs.extend(std::iter::repeat((e.nu.clone(), partner)).take(e.mult as usize / 2));
        } else if p.compass.multiplicity(&partner) != e.mult {
            return None;
        } else if e.nu < partner {
            pairs.extend(std::iter::repeat((e.nu.clone(), partner)).take(e.mult as usize));
        }
    }
    Some(ContactPairing { pairs, singleton: target })
}

/// Splits a compass along a projection: images of entries not killed, and the
/// killed entries written in the coordinates of the kernel basis.
pub fn project_compass(c: &Compass, p: &Projection) -> Result<(Compass, Compass)> {
    let mut image = Vec::new();
    let mut kernel = Vec::new();
    for e in c.entries() {
        let w = project(p, &e.nu)?;
        if w.is_zero() {
            let k = kernel_coordinates(&p.kernel_basis, &e.nu).ok_or_else(|| LocalizeError::KernelIncomplete(e.nu.to_string()))?;
            kernel.push(CompassEntry { nu: k, mult: e.mult });
        } else {
            image.push(CompassEntry { nu: w, mult: e.mult });
        }
    }
    Ok((Compass::new(image)?, Compass::new(kernel)?))
}

/// Coordinates of `w` in the (linearly independent) basis, if it lies in the span.
fn kernel_coordinates(basis: &[Weight], w: &Weight) -> Option<Weight> {
    let n = basis.len();
    let rows = w.rank();
    // Augmented system: columns are basis vectors, last column is w.
    let mut m: Vec<Vec<Rational>> =
        (0..rows).map(|i| basis.iter().map(|b| b.coord(i).clone()).chain([w.coord(i).clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let pv = m[r][col].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &pv;
        }
        for i in 0..rows {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..=n {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[n].is_zero()) || pivots.len() < n {
        return None;
    }
    let mut coords = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        coords[c] = m[i][n].clone();
    }
    Some(Weight::new(coords))
}

/// Pushes point data along a projection. Every fixed point must stay isolated.
pub fn project_data(data: &FixedPointData, p: &Projection) -> Result<FixedPointData> {
    let mut out = FixedPointData::new(p.target_rank(), data.ambient_dim);
    for pt in &data.points {
        let (image, kernel) = project_compass(&pt.compass, p)?;
        if !kernel.is_empty() {
            return Err(LocalizeError::NotIsolated { label: pt.label.clone(), count: kernel.size() as u32 });
        }
        out.points.push(FixedPoint::new(pt.label.clone(), project(p, &pt.mu)?, image));
    }
    if !data.curves.is_empty() || !data.unknowns.is_empty() {
        return Err(LocalizeError::WrongShape("only isolated fixed points can be projected".into()));
    }
    Ok(out)
}

/// Which cone conditions a compass must satisfy at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeMode {
    /// Every entry lies in the tangent cone `σ`.
    Torus,
    /// Additionally every entry lies in `−μ − σ`, and `−μ` occurs exactly once.
    Contact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeViolation {
    pub nu: Weight,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeCertificate {
    pub vertex: Weight,
    pub mode: ConeMode,
    pub violations: Vec<ConeViolation>,
    pub pass: bool,
}

pub fn compass_cone_certificate(p: &FixedPoint, delta: &Polytope, mode: ConeMode) -> Result<ConeCertificate> {
    if delta.vertex_index(&p.mu).is_none() {
        return Err(LocalizeError::NotAVertex(p.mu.to_string()));
    }
    let sigma = tangent_cone(delta, &p.mu)?;
    let minus_mu = -&p.mu;
    let mut violations = Vec::new();
    for e in p.compass.entries() {
        if !sigma.contains(&e.nu) {
            violations.push(ConeViolation { nu: e.nu.clone(), reason: "outside the tangent cone".into() });
        } else if mode == ConeMode::Contact && !sigma.contains(&(&minus_mu - &e.nu)) {
            violations.push(ConeViolation { nu: e.nu.clone(), reason: "outside the reflected cone -mu - sigma".into() });
        }
    }
    if mode == ConeMode::Contact && !p.compass.is_empty() {
        let m = p.compass.multiplicity(&minus_mu);
        if m != 1 {
            violations.push(ConeViolation { nu: minus_mu, reason: format!("-mu occurs {m} times, expected once") });
        }
    }
    let pass = violations.is_empty();
    Ok(ConeCertificate { vertex: p.mu.clone(), mode, violations, pass })
}

/// Weight of the anticanonical linearization: minus the compass sum.
pub fn anticanonical_weight(p: &FixedPoint) -> Weight {
    let mut acc = Weight::zero(p.mu.rank());
    for e in p.compass.entries() {
        acc += &e.nu.scale_int(-i64::from(e.mult));
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelComparison {
    pub matched: bool,
    pub reason: Option<String>,
    /// Equality of the localization sums, computed when the data match and carry no unknowns.
    pub characters_agree: Option<bool>,
}

fn point_keys(d: &FixedPointData) -> Vec<(Weight, Compass)> {
    let mut v: Vec<(Weight, Compass)> = d.points.iter().map(|p| (p.mu.clone(), p.compass.clone())).collect();
    v.sort();
    v
}

fn curve_keys(d: &FixedPointData) -> Vec<(Weight, u32, i64, Vec<ConormalSummand>)> {
    let mut v: Vec<_> = d
        .curves
        .iter()
        .map(|c| {
            let mut n = c.conormal.clone();
            n.sort();
            (c.mu.clone(), c.genus, c.degree, n)
        })
        .collect();
    v.sort();
    v
}

fn unknown_keys(d: &FixedPointData) -> Vec<(String, Weight, Compass)> {
    let mut v: Vec<_> = d.unknowns.iter().map(|u| (u.symbol.clone(), u.mu.clone(), u.compass.clone())).collect();
    v.sort();
    v
}

/// Exact comparison of fixed-point data up to relabeling.
pub fn compare_models(a: &FixedPointData, b: &FixedPointData) -> Result<ModelComparison> {
    let mismatch = |r: String| Ok(ModelComparison { matched: false, reason: Some(r), characters_agree: None });
    if a.rank != b.rank || a.ambient_dim != b.ambient_dim {
        return mismatch(format!("rank/dimension {}/{} vs {}/{}", a.rank, a.ambient_dim, b.rank, b.ambient_dim));
    }
    let (pa, pb) = (point_keys(a), point_keys(b));
    if pa != pb {
        let only_a: Vec<String> = pa.iter().filter(|k| !pb.contains(k)).map(|(m, c)| format!("{m} {c}")).collect();
        let only_b: Vec<String> = pb.iter().filter(|k| !pa.contains(k)).map(|(m, c)| format!("{m} {c}")).collect();
        return mismatch(format!(
            "{} vs {} points; only in first: [{}]; only in second: [{}]",
            pa.len(),
            pb.len(),
            only_a.join("; "),
            only_b.join("; ")
        ));
    }
    if curve_keys(a) != curve_keys(b) {
        return mismatch("fixed curves differ".into());
    }
    if unknown_keys(a) != unknown_keys(b) {
        return mismatch("unknown templates differ".into());
    }
    let characters_agree = if a.unknowns.is_empty() {
        Some(euler_characteristic(a)?.equals(&euler_characteristic(b)?)?)
    } else {
        None
    };
    Ok(ModelComparison { matched: true, reason: None, characters_agree })
}

/// Verdict for rank-one data whose weights span an interval of length 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IntervalCase {
    /// The projective line with `O(1)`.
    P1O1,
    /// The projective line with `O(2)`.
    P1O2,
    Pd { d: usize },
    Qd { d: usize },
    Inconsistent { reason: String },
}

fn signed_values(c: &Compass, sign: i64) -> Option<Vec<i64>> {
    let mut v: Vec<i64> = c
        .expanded()
        .iter()
        .map(|w| w.to_i64().map(|x| x[0] * sign))
        .collect::<Option<_>>()?;
    v.sort();
    Some(v)
}

pub fn classify_interval_case(data: &FixedPointData) -> Result<IntervalCase> {
    if data.rank != 1 {
        return Err(LocalizeError::WrongShape(format!("interval classification needs rank 1, got {}", data.rank)));
    }
    data.validate()?;
    let bad = |r: &str| Ok(IntervalCase::Inconsistent { reason: r.to_string() });
    let ws = data.weights();
    let (Some(lo), Some(hi)) = (ws.iter().min(), ws.iter().max()) else {
        return bad("no fixed components");
    };
    if hi.coord(0) - lo.coord(0) != int(2) {
        return bad("the weights do not span an interval of length 2");
    }
    let extremal = |w: &Weight| -> Option<&FixedPoint> {
        let at: Vec<usize> = ws.iter().enumerate().filter(|(_, x)| *x == w).map(|(i, _)| i).collect();
        if at.len() != 1 || at[0] >= data.points.len() {
            None
        } else {
            Some(&data.points[at[0]])
        }
    };
    let (Some(source), Some(sink)) = (extremal(lo), extremal(hi)) else {
        return bad("extremal components must be single points");
    };
    let d = data.ambient_dim;
    let (Some(s), Some(t)) = (signed_values(&source.compass, 1), signed_values(&sink.compass, -1)) else {
        return bad("non-integral compass");
    };
    if s != t {
        return bad("source and sink compasses are not opposite");
    }
    let ones = |k: usize| vec![1i64; k];
    let mut p_template = ones(d.saturating_sub(1));
    p_template.push(2);
    Ok(match d {
        1 if s == [2] => IntervalCase::P1O1,
        1 if s == [1] => IntervalCase::P1O2,
        _ if d >= 2 && s == p_template => IntervalCase::Pd { d },
        _ if d >= 3 && s == ones(d) => IntervalCase::Qd { d },
        _ => IntervalCase::Inconsistent { reason: format!("extremal compass {s:?} matches no template") },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadricVerdict {
    pub pass: bool,
    pub violations: Vec<String>,
    /// Multiplicity of the zero weight in the space of sections.
    pub h0_zero: i64,
    /// Dimension of the recognized quadric.
    pub d: Option<i64>,
}

/// Recognizes quadric data on the cross-polytope `conv(±x_1, …, ±x_r)`.
pub fn quadric_recognition(data: &FixedPointData, delta: &Polytope, h0_zero: Option<i64>) -> Result<QuadricVerdict> {
    let r = data.rank;
    let verts = &delta.vertices;
    let independent = delta.dim() == r;
    if verts.len() != 2 * r || !independent || verts.iter().any(|v| delta.vertex_index(&-v).is_none()) {
        return Err(LocalizeError::WrongShape("the polytope is not a cross-polytope conv(±x_i)".into()));
    }
    let mut violations = Vec::new();
    for v in verts {
        let at: Vec<&FixedPoint> = data.points.iter().filter(|p| &p.mu == v).collect();
        let curve_here = data.curves.iter().any(|c| &c.mu == v);
        if at.len() != 1 || curve_here {
            violations.push(format!("vertex {v}: extremal component is not a single point"));
            continue;
        }
        let forbidden = v.scale_int(-2);
        if at[0].compass.multiplicity(&forbidden) > 0 {
            violations.push(format!("vertex {v}: compass contains {forbidden}"));
        }
    }
    let h0 = match h0_zero {
        Some(h) => h,
        None => {
            let c = certify_laurent(data)?.coefficient(&vec![0; r]);
            c.constant.to_integer().to_i64().unwrap_or(0)
        }
    };
    let pass = violations.is_empty() && data.ambient_dim >= 2;
    let d = pass.then(|| 2 * r as i64 + h0 - 2);
    Ok(QuadricVerdict { pass, violations, h0_zero: h0, d })
}

/// The coefficient sum of a numeric Laurent polynomial.
pub fn dimension_at_identity(p: &LaurentPoly) -> Rational {
    p.eval_at_ones().constant
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::hull;
    use proptest::prelude::*;

    fn w(xs: &[i64]) -> Weight {
        Weight::from_ints(xs)
    }

    fn pt(label: &str, mu: &[i64], compass: &[&[i64]]) -> FixedPoint {
        FixedPoint::new(label, w(mu), Compass::from_int_rows(compass).unwrap())
    }

    fn p1() -> FixedPointData {
        let mut d = FixedPointData::new(1, 1);
        d.points = vec![pt("0", &[0], &[&[1]]), pt("1", &[1], &[&[-1]])];
        d
    }

    fn hirzebruch() -> FixedPointData {
        let mut d = FixedPointData::new(1, 2);
        d.points = vec![pt("source", &[0], &[&[1], &[1]]), pt("sink", &[3], &[&[-1], &[-1]])];
        d.unknowns = vec![
            UnknownTemplate { symbol: "a".into(), mu: w(&[1]), compass: Compass::from_int_rows(&[&[-1], &[1]]).unwrap() },
            UnknownTemplate { symbol: "b".into(), mu: w(&[2]), compass: Compass::from_int_rows(&[&[-1], &[1]]).unwrap() },
        ];
        d
    }

    #[test]
    fn projective_line_character() {
        let f = euler_characteristic(&p1()).unwrap();
        assert_eq!(to_laurent(&f).unwrap(), LaurentPoly::univariate(&[1, 1]));
        assert_eq!(dimension_at_identity(&certify_laurent(&p1()).unwrap()), int(2));
    }

    #[test]
    fn surface_symbolic_sum_and_solution() {
        let f = euler_characteristic(&hirzebruch()).unwrap();
        assert_eq!(f.to_string(), "(1 - at^2 - bt^3 + t^5)/((1-t)^2)");
        let sol = solve_multiplicities(&hirzebruch(), &[1]).unwrap();
        assert_eq!(sol.values, BTreeMap::from([("a".to_string(), 1), ("b".to_string(), 1)]));
        assert_eq!(sol.character, LaurentPoly::univariate(&[1, 2, 2, 1]));
    }

    #[test]
    fn free_unknown_is_underdetermined() {
        let mut d = FixedPointData::new(1, 0);
        d.points = vec![pt("p", &[0], &[])];
        d.unknowns = vec![UnknownTemplate { symbol: "k".into(), mu: w(&[1]), compass: Compass::empty() }];
        assert!(matches!(solve_multiplicities(&d, &[1]), Err(LocalizeError::Underdetermined(_))));
    }

    #[test]
    fn fixed_line_in_the_plane() {
        // Weights (0,0,1) on P²: a fixed line of weight 0 and a point of weight −1.
        let mut d = FixedPointData::new(1, 2);
        d.points = vec![pt("point", &[-1], &[&[1], &[1]])];
        d.curves = vec![FixedCurve {
            label: "line".into(),
            mu: w(&[0]),
            genus: 0,
            degree: 1,
            conormal: vec![ConormalSummand { nu: w(&[-1]), rank: 1, c1: -1 }],
        }];
        let chi = certify_laurent(&d).unwrap();
        assert_eq!(chi, LaurentPoly::from_int_terms(1, &[(vec![-1], 1), (vec![0], 2)]));
    }

    #[test]
    fn corrupted_data_is_not_certified() {
        let mut d = p1();
        d.points[1].compass = Compass::from_int_rows(&[&[-2]]).unwrap();
        assert!(matches!(
            certify_laurent(&d),
            Err(LocalizeError::Laurent(LaurentError::NotDivisible(_)))
        ));
    }

    #[test]
    fn validation_rules() {
        let mut d = p1();
        d.ambient_dim = 2;
        assert!(matches!(d.validate(), Err(LocalizeError::CompassSize { .. })));
        let mut two = FixedPointData::new(1, 3);
        two.points = vec![pt("a", &[0], &[&[1], &[1], &[1]]), pt("b", &[1], &[&[-1], &[-1], &[-1]])];
        assert!(matches!(two.validate(), Err(LocalizeError::TwoComponents { expected: 2, found: 0 })));
        assert!(Compass::from_int_rows(&[&[0, 0]]).is_err());
        let json = r#"{"rank":1,"ambient_dim":1,"points":[{"label":"x","mu":[0],"compass":[{"nu":[0],"mult":1}]}]}"#;
        assert!(FixedPointData::from_json(json).is_err());
        let mut half = p1();
        half.points[0].mu = Weight::from_fracs(&[(1, 2)]);
        assert!(matches!(euler_characteristic(&half), Err(LocalizeError::NotIntegral { .. })));
    }

    #[test]
    fn json_round_trip() {
        let d = hirzebruch();
        let back = FixedPointData::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        let json = r#"{"rank":1,"ambient_dim":1,"points":[
            {"label":"0","mu":[0],"compass":[{"nu":[1],"mult":1}]},
            {"label":"1","mu":["1"],"compass":[{"nu":["-1"],"mult":1}]}]}"#;
        assert_eq!(FixedPointData::from_json(json).unwrap(), p1());
    }

    #[test]
    fn contact_pairing_examples() {
        let b3 = pt(
            "e1+e2",
            &[1, 1, 0],
            &[&[-1, 0, 1], &[-1, 0, -1], &[0, -1, 1], &[0, -1, -1], &[-1, 0, 0], &[0, -1, 0], &[-1, -1, 0]],
        );
        let pairing = contact_dual_check(&b3).unwrap();
        assert_eq!(pairing.singleton, w(&[-1, -1, 0]));
        assert_eq!(pairing.pairs.len(), 3);
        assert!(pairing.pairs.contains(&(w(&[-1, 0, 0]), w(&[0, -1, 0]))));
        assert!(pairing.pairs.contains(&(w(&[-1, 0, -1]), w(&[0, -1, 1]))));
        assert!(pairing.pairs.iter().all(|(a, b)| a + b == w(&[-1, -1, 0])));
        // P³ with weights (0,1,2,4) at the source: compass (1,2,4), μ = 0.
        assert!(contact_dual_check(&pt("src", &[0], &[&[1], &[2], &[4]])).is_none());
        let trivial = contact_dual_check(&pt("x", &[1], &[&[-1]])).unwrap();
        assert!(trivial.pairs.is_empty());
    }

    #[test]
    fn projection_splits_compasses() {
        let c = Compass::from_int_rows(&[
            &[-1, 0, 1],
            &[-1, 0, -1],
            &[0, -1, 1],
            &[0, -1, -1],
            &[-1, 0, 0],
            &[0, -1, 0],
            &[-1, -1, 0],
        ])
        .unwrap();
        let p = Projection::new(3, vec![w(&[0, 1, 0])], vec![w(&[1, 0, 0]), w(&[0, 0, 1])]).unwrap();
        let (image, kernel) = project_compass(&c, &p).unwrap();
        assert_eq!(kernel, Compass::from_int_rows(&[&[-1, 1], &[-1, -1], &[-1, 0]]).unwrap());
        assert_eq!(image.size(), 4);
        let (image, kernel) = project_compass(&c, &Projection::identity(3)).unwrap();
        assert_eq!((image, kernel.size()), (c.clone(), 0));
        let zero = Projection::new(3, vec![], (0..3).map(|i| Weight::unit(3, i)).collect()).unwrap();
        let (image, kernel) = project_compass(&c, &zero).unwrap();
        assert_eq!((image.size(), kernel), (0, c));
    }

    fn cross(r: usize) -> Polytope {
        hull(&(0..r).flat_map(|i| [Weight::unit(r, i), -Weight::unit(r, i)]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cone_certificates() {
        let q5 = pt("e1", &[1, 0, 0], &[&[-1, 0, 0], &[-1, 1, 0], &[-1, -1, 0], &[-1, 0, 1], &[-1, 0, -1]]);
        let cert = compass_cone_certificate(&q5, &cross(3), ConeMode::Torus).unwrap();
        assert!(cert.pass, "{cert:?}");
        let point = hull(&[w(&[0])]).unwrap();
        assert!(compass_cone_certificate(&pt("x", &[0], &[]), &point, ConeMode::Contact).unwrap().pass);
        assert!(matches!(
            compass_cone_certificate(&pt("x", &[0, 0, 0], &[]), &cross(3), ConeMode::Torus),
            Err(LocalizeError::NotAVertex(_))
        ));
    }

    #[test]
    fn anticanonical_examples() {
        assert_eq!(anticanonical_weight(&pt("x", &[0], &[&[1]])), w(&[-1]));
        let q5 = pt("e1", &[1, 0, 0], &[&[-1, 0, 0], &[-1, 1, 0], &[-1, -1, 0], &[-1, 0, 1], &[-1, 0, -1]]);
        assert_eq!(anticanonical_weight(&q5), w(&[5, 0, 0]));
        assert_eq!(anticanonical_weight(&pt("s", &[0, 0], &[&[1, 2], &[-1, -2]])), w(&[0, 0]));
    }

    #[test]
    fn interval_classification() {
        let line = |d: usize, src: &[&[i64]], snk: &[&[i64]]| {
            let mut data = FixedPointData::new(1, d);
            data.points = vec![pt("src", &[0], src), pt("snk", &[2], snk)];
            data
        };
        assert_eq!(classify_interval_case(&line(1, &[&[2]], &[&[-2]])).unwrap(), IntervalCase::P1O1);
        let mut o2 = line(1, &[&[1]], &[&[-1]]);
        o2.points.push(pt("mid", &[1], &[&[1]]));
        o2.points[2].compass = Compass::from_int_rows(&[&[-1]]).unwrap();
        // Three fixed points on P¹ are impossible, but the verdict only reads the extremes.
        assert_eq!(classify_interval_case(&o2).unwrap(), IntervalCase::P1O2);
        let mut bad = line(2, &[&[1], &[3]], &[&[-1], &[-3]]);
        bad.curves.push(FixedCurve {
            label: "mid".into(),
            mu: w(&[1]),
            genus: 0,
            degree: 1,
            conormal: vec![ConormalSummand { nu: w(&[1]), rank: 1, c1: -1 }],
        });
        assert!(matches!(classify_interval_case(&bad).unwrap(), IntervalCase::Inconsistent { .. }));
    }

    proptest! {
        #[test]
        fn relabeling_and_reordering_preserve_comparison(seed in 0usize..24, shift in -3i64..=3) {
            let mut d = FixedPointData::new(1, 1);
            d.points = vec![pt("a", &[shift], &[&[1]]), pt("b", &[shift + 1], &[&[-1]])];
            let mut e = d.clone();
            e.points.rotate_left(seed % 2);
            for (i, p) in e.points.iter_mut().enumerate() {
                p.label = format!("q{}", i + seed);
            }
            let cmp = compare_models(&d, &e).unwrap();
            prop_assert!(cmp.matched);
            prop_assert_eq!(cmp.characters_agree, Some(true));
        }

        #[test]
        fn powers_of_the_line_bundle_on_p1(m in 1i64..8) {
            let chi = certify_laurent(&p1().power(m)).unwrap();
            prop_assert_eq!(dimension_at_identity(&chi), int(m + 1));
        }
    }
}
