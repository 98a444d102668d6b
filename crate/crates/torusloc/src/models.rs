//! Explicit fixed-point data for reference spaces: projective spaces, quadrics,
//! adjoint varieties of types B and D, and their restrictions to a rank-2 torus
//! whose weights form the hexagonal pattern of `G₂`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::localize::{
    project_data, Compass, CompassEntry, ConormalSummand, FixedCurve, FixedPoint, FixedPointData, LocalizeError,
    UnknownTemplate,
};
use crate::rootsys::{Family, RootSystemType};
use crate::weights::{Lattice, Projection, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("component P(V) of dimension {0} is neither a point nor a curve")]
    ComponentTooLarge(u32),
    #[error("the action has a single fixed component")]
    TrivialAction,
    #[error("weights must be strictly increasing with positive multiplicities")]
    BadWeights,
    #[error("quadric models need r >= 2, got {0}")]
    QuadricRank(usize),
    #[error("adjoint models exist here for B_r (r >= 3) and D_r (r >= 4), not {0}")]
    AdjointType(String),
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error(transparent)]
    Localize(#[from] LocalizeError),
}

pub type Result<T> = std::result::Result<T, ModelError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Odd,
    Even,
}

/// A catalog entry with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelSpec {
    /// Diagonal action on `P(⊕ V_i)` with weight `a_i` on `V_i` of dimension `d_i`.
    ProjectiveSpace { weights: Vec<(i64, u32)> },
    Quadric { parity: Parity, r: usize },
    AdjointBD { ty: RootSystemType },
    DowngradeB3toG2,
    DowngradeD4toG2,
}

impl ModelSpec {
    pub fn build(&self) -> Result<FixedPointData> {
        match self {
            ModelSpec::ProjectiveSpace { weights } => projective_space_data(weights),
            ModelSpec::Quadric { parity, r } => quadric_data(*parity, *r),
            ModelSpec::AdjointBD { ty } => adjoint_bd_data(*ty),
            ModelSpec::DowngradeB3toG2 => downgraded_g2_data(G2Source::B3),
            ModelSpec::DowngradeD4toG2 => downgraded_g2_data(G2Source::D4),
        }
    }

    /// Parses catalog names: `pspace` (weights supplied separately, as `a` or `a^d`
    /// separated by commas), `quadric-odd-<r>`, `quadric-even-<r>`, `adjoint-B<r>`,
    /// `adjoint-D<r>`, `g2-from-B3`, `g2-from-D4`.
    pub fn parse(name: &str, weights: Option<&str>) -> Result<ModelSpec> {
        let unknown = || ModelError::UnknownModel(name.to_string());
        if name == "pspace" {
            let w = weights.ok_or_else(unknown)?;
            return Ok(ModelSpec::ProjectiveSpace { weights: parse_weight_list(w).ok_or(ModelError::BadWeights)? });
        }
        if name == "g2-from-B3" {
            return Ok(ModelSpec::DowngradeB3toG2);
        }
        if name == "g2-from-D4" {
            return Ok(ModelSpec::DowngradeD4toG2);
        }
        if let Some(r) = name.strip_prefix("quadric-odd-") {
            return Ok(ModelSpec::Quadric { parity: Parity::Odd, r: r.parse().map_err(|_| unknown())? });
        }
        if let Some(r) = name.strip_prefix("quadric-even-") {
            return Ok(ModelSpec::Quadric { parity: Parity::Even, r: r.parse().map_err(|_| unknown())? });
        }
        if let Some(t) = name.strip_prefix("adjoint-") {
            let ty = RootSystemType::from_str(t).map_err(|_| unknown())?;
            return Ok(ModelSpec::AdjointBD { ty });
        }
        Err(unknown())
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::ProjectiveSpace { weights } => {
                let ws: Vec<String> =
                    weights.iter().map(|(a, d)| if *d == 1 { a.to_string() } else { format!("{a}^{d}") }).collect();
                write!(f, "pspace[{}]", ws.join(","))
            }
            ModelSpec::Quadric { parity: Parity::Odd, r } => write!(f, "quadric-odd-{r}"),
            ModelSpec::Quadric { parity: Parity::Even, r } => write!(f, "quadric-even-{r}"),
            ModelSpec::AdjointBD { ty } => write!(f, "adjoint-{ty}"),
            ModelSpec::DowngradeB3toG2 => write!(f, "g2-from-B3"),
            ModelSpec::DowngradeD4toG2 => write!(f, "g2-from-D4"),
        }
    }
}

/// Parses `0,1^2,2` into `[(0,1),(1,2),(2,1)]`.
pub fn parse_weight_list(s: &str) -> Option<Vec<(i64, u32)>> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            match part.split_once('^') {
                Some((a, d)) => Some((a.trim().parse().ok()?, d.trim().parse().ok()?)),
                None => Some((part.parse().ok()?, 1)),
            }
        })
        .collect()
}

/// Fixed data of `P(⊕ V_i)`, weight `a_i` on `V_i`, with `O(1)`.
///
/// `P(V_i)` has weight `−a_i` and compass `(a_i − a_j)^{d_j}`; lines carry genus 0,
/// degree 1 and conormal summands of rank `d_j` and degree `−d_j`.
pub fn projective_space_data(weights: &[(i64, u32)]) -> Result<FixedPointData> {
    if weights.iter().any(|&(_, d)| d == 0) || weights.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(ModelError::BadWeights);
    }
    if weights.len() < 2 {
        return Err(ModelError::TrivialAction);
    }
    let dim = weights.iter().map(|&(_, d)| d as usize).sum::<usize>() - 1;
    let mut data = FixedPointData::new(1, dim);
    for (i, &(a, d)) in weights.iter().enumerate() {
        let others = weights.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &(b, m))| (a - b, m));
        let label = format!("P(V[{a}])");
        let mu = Weight::from_ints(&[-a]);
        match d {
            1 => {
                let entries = others.map(|(nu, m)| CompassEntry { nu: Weight::from_ints(&[nu]), mult: m }).collect();
                data.points.push(FixedPoint::new(label, mu, Compass::new(entries)?));
            }
            2 => {
                let conormal = others
                    .map(|(nu, m)| ConormalSummand { nu: Weight::from_ints(&[nu]), rank: m, c1: -i64::from(m) })
                    .collect();
                data.curves.push(FixedCurve { label, mu, genus: 0, degree: 1, conormal });
            }
            _ => return Err(ModelError::ComponentTooLarge(d - 1)),
        }
    }
    data.validate()?;
    Ok(data)
}

fn signed_unit(r: usize, i: usize, s: i64) -> Weight {
    Weight::unit(r, i).scale_int(s)
}

/// Quadrics `Q^{2r−1}` (odd) and `Q^{2r−2}` (even) with `2r` fixed points `±e_i`.
/// The even case records the lattice of vectors with even coordinate sum.
pub fn quadric_data(parity: Parity, r: usize) -> Result<FixedPointData> {
    if r < 2 {
        return Err(ModelError::QuadricRank(r));
    }
    let dim = match parity {
        Parity::Odd => 2 * r - 1,
        Parity::Even => 2 * r - 2,
    };
    let mut data = FixedPointData::new(r, dim);
    for i in 0..r {
        for s in [1, -1] {
            let v = signed_unit(r, i, s);
            let mut ws = Vec::new();
            if parity == Parity::Odd {
                ws.push(-&v);
            }
            for j in (0..r).filter(|&j| j != i) {
                for t in [1, -1] {
                    ws.push(&signed_unit(r, j, t) - &v);
                }
            }
            data.points.push(FixedPoint::new(format!("{}e{}", if s > 0 { "+" } else { "-" }, i + 1), v, Compass::from_weights(ws)?));
        }
    }
    if parity == Parity::Even {
        let mut gens = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                gens.push(&Weight::unit(r, i) + &Weight::unit(r, j));
                gens.push(&Weight::unit(r, i) - &Weight::unit(r, j));
            }
        }
        data.lattice = Some(Lattice::new(r, gens).map_err(LocalizeError::from)?);
    }
    data.validate()?;
    Ok(data)
}

/// Compass at the long root `v = s e_a + t e_b` of `B_r` or `D_r`:
/// `±e_i − s e_a`, `±e_i − t e_b` for `i ∉ {a, b}`, and `−v`; type B adds `−s e_a`, `−t e_b`.
pub fn adjoint_compass(family: Family, r: usize, a: usize, s: i64, b: usize, t: i64) -> Result<Compass> {
    let ea = signed_unit(r, a, s);
    let eb = signed_unit(r, b, t);
    let v = &ea + &eb;
    let mut ws = vec![-&v];
    for i in (0..r).filter(|&i| i != a && i != b) {
        for u in [1, -1] {
            let ei = signed_unit(r, i, u);
            ws.push(&ei - &ea);
            ws.push(&ei - &eb);
        }
    }
    if family == Family::B {
        ws.push(-&ea);
        ws.push(-&eb);
    }
    Ok(Compass::from_weights(ws)?)
}

/// One fixed point per long root, with the compass transported from `e₁ + e₂` by
/// the signed permutation taking `e₁ + e₂` to that root.
pub fn adjoint_bd_data(ty: RootSystemType) -> Result<FixedPointData> {
    let r = ty.rank;
    let dim = match (ty.family, r) {
        (Family::B, r) if r >= 3 => 4 * r - 5,
        (Family::D, r) if r >= 4 => 4 * r - 7,
        _ => return Err(ModelError::AdjointType(ty.to_string())),
    };
    let mut data = FixedPointData::new(r, dim);
    for a in 0..r {
        for b in a + 1..r {
            for (s, t) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let v = &signed_unit(r, a, s) + &signed_unit(r, b, t);
                let compass = adjoint_compass(ty.family, r, a, s, b, t)?;
                data.points.push(FixedPoint::new(v.to_string(), v, compass));
            }
        }
    }
    data.validate()?;
    Ok(data)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum G2Source {
    B3,
    D4,
}

/// Restriction to the rank-2 torus `x ↦ (x₁ + x₂, x₁ + x₃)`.
pub fn g2_projection(source: G2Source) -> Projection {
    let (n, kernel) = match source {
        G2Source::B3 => (3, vec![Weight::from_ints(&[1, -1, -1])]),
        G2Source::D4 => (4, vec![Weight::from_ints(&[1, -1, -1, -1]), Weight::from_ints(&[0, 0, 0, 1])]),
    };
    let mut r1 = vec![0i64; n];
    let mut r2 = vec![0i64; n];
    r1[0] = 1;
    r1[1] = 1;
    r2[0] = 1;
    r2[2] = 1;
    Projection::new(n, vec![Weight::from_ints(&r1), Weight::from_ints(&r2)], kernel).expect("kernel is annihilated")
}

/// Adjoint data of `B₃` or `D₄` pushed to the rank-2 torus; colliding images stay
/// distinct points.
pub fn downgraded_g2_data(source: G2Source) -> Result<FixedPointData> {
    let ty = match source {
        G2Source::B3 => RootSystemType { family: Family::B, rank: 3 },
        G2Source::D4 => RootSystemType { family: Family::D, rank: 4 },
    };
    let full = adjoint_bd_data(ty)?;
    Ok(project_data(&full, &g2_projection(source))?)
}

/// Outer hexagon `α_i`, in cyclic order.
pub const HEX_OUTER: [[i64; 2]; 6] = [[2, 1], [1, 2], [-1, 1], [-2, -1], [-1, -2], [1, -1]];
/// Inner hexagon `β_i`; `β_i` lies between `α_{i−1}` and `α_i`.
pub const HEX_INNER: [[i64; 2]; 6] = [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]];

/// Rank-2 data assembled from the tabulated compasses at the hexagon points, for
/// ambient dimension 7 (one point over each `β_i`) or 9 (three points over each `β_i`).
pub fn g2_table_data(dim: usize) -> Result<FixedPointData> {
    assert!(dim == 7 || dim == 9, "tabulated only for dimensions 7 and 9");
    let heavy = if dim == 7 { 2 } else { 3 };
    let a = |i: usize| Weight::from_ints(&HEX_OUTER[i % 6]);
    let b = |i: usize| Weight::from_ints(&HEX_INNER[i % 6]);
    let entry = |nu: Weight, mult: u32| CompassEntry { nu, mult };
    let mut data = FixedPointData::new(2, dim);
    for i in 0..6 {
        let ai = a(i);
        let c = Compass::new(vec![
            entry(&a(i + 1) - &ai, 1),
            entry(&a(i + 5) - &ai, 1),
            entry(-&ai, 1),
            entry(&b(i) - &ai, heavy),
            entry(&b(i + 1) - &ai, heavy),
        ])?;
        data.points.push(FixedPoint::new(format!("alpha{i}"), ai, c));
    }
    for i in 0..6 {
        let bi = b(i);
        let side = if dim == 7 { 1 } else { 2 };
        let c = Compass::new(vec![
            entry(&a(i) - &bi, 1),
            entry(&a(i + 5) - &bi, 1),
            entry(&b(i + 1) - &bi, side),
            entry(&b(i + 5) - &bi, side),
            entry(&b(i + 2) - &bi, 1),
            entry(&b(i + 4) - &bi, 1),
            entry(-&bi, 1),
        ])?;
        for copy in 0..(if dim == 7 { 1 } else { 3 }) {
            data.points.push(FixedPoint::new(format!("beta{i}.{copy}"), bi.clone(), c.clone()));
        }
    }
    data.validate()?;
    Ok(data)
}

fn template(symbol: &str, mu: i64, compass: &[i64]) -> UnknownTemplate {
    UnknownTemplate {
        symbol: symbol.into(),
        mu: Weight::from_ints(&[mu]),
        compass: Compass::from_weights(compass.iter().map(|&x| Weight::from_ints(&[x]))).expect("nonzero"),
    }
}

fn rank_one_point(label: &str, mu: i64, compass: &[i64]) -> FixedPoint {
    let c = Compass::from_weights(compass.iter().map(|&x| Weight::from_ints(&[x]))).expect("nonzero");
    FixedPoint::new(label, Weight::from_ints(&[mu]), c)
}

/// A surface with a `C*`-action: a source, `a` points of weight 1, `b` points of
/// weight 2, and a sink of weight 3.
pub fn surface_with_unknowns() -> FixedPointData {
    let mut d = FixedPointData::new(1, 2);
    d.points = vec![rank_one_point("source", 0, &[1, 1]), rank_one_point("sink", 3, &[-1, -1])];
    d.unknowns = vec![template("a", 1, &[-1, 1]), template("b", 2, &[-1, 1])];
    d
}

/// A threefold with a `C*`-action: a source, `a` points of weight 1 with compass
/// `(1,1,−1)`, `b` points of weight 2 with compass `(1,−1,−1)`, and a sink of weight 3.
pub fn threefold_with_unknowns() -> FixedPointData {
    let mut d = FixedPointData::new(1, 3);
    d.points = vec![rank_one_point("source", 0, &[1, 1, 1]), rank_one_point("sink", 3, &[-1, -1, -1])];
    d.unknowns = vec![template("a", 1, &[1, 1, -1]), template("b", 2, &[1, -1, -1])];
    d
}

/// `Q³ ⊂ P⁴` under weights `(0,1,1,1,2)`: two points and a fixed conic of degree 2
/// whose conormal bundle splits into two summands of degree −2.
pub fn quadric_threefold_with_conic() -> FixedPointData {
    let mut d = FixedPointData::new(1, 3);
    d.points = vec![rank_one_point("top", 0, &[-1, -1, -1]), rank_one_point("bottom", -2, &[1, 1, 1])];
    d.curves = vec![FixedCurve {
        label: "conic".into(),
        mu: Weight::from_ints(&[-1]),
        genus: 0,
        degree: 2,
        conormal: vec![
            ConormalSummand { nu: Weight::from_ints(&[1]), rank: 1, c1: -2 },
            ConormalSummand { nu: Weight::from_ints(&[-1]), rank: 1, c1: -2 },
        ],
    }];
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;
    use crate::localize::{
        certify_laurent, classify_interval_case, compare_models, contact_dual_check, dimension_at_identity,
        IntervalCase,
    };
    use crate::rootsys::{build, reflect};
    use crate::weights::int;

    #[test]
    fn projective_space_examples() {
        let p3 = projective_space_data(&[(0, 1), (1, 2), (2, 1)]).unwrap();
        assert_eq!((p3.points.len(), p3.curves.len()), (2, 1));
        assert_eq!(p3.points[1].compass, Compass::from_int_rows(&[&[1], &[1], &[2]]).unwrap());
        assert_eq!(classify_interval_case(&p3).unwrap(), IntervalCase::Pd { d: 3 });
        let line = projective_space_data(&[(0, 1), (1, 1)]).unwrap();
        assert_eq!(line.points.len(), 2);
        assert_eq!(dimension_at_identity(&certify_laurent(&line).unwrap()), int(2));
        assert_eq!(projective_space_data(&[(0, 2)]), Err(ModelError::TrivialAction));
        assert_eq!(projective_space_data(&[(0, 1), (1, 3), (2, 1)]), Err(ModelError::ComponentTooLarge(2)));
    }

    #[test]
    fn projective_space_characters_count_coordinates() {
        // The character is Σ d_i t^{−a_i}, read off the representation.
        for ws in [vec![(0, 1), (1, 1), (3, 2)], vec![(-1, 2), (0, 1), (2, 2)], vec![(0, 1), (2, 1), (5, 1), (6, 1)]] {
            let chi = certify_laurent(&projective_space_data(&ws).unwrap()).unwrap();
            let expected: Vec<(Vec<i64>, i64)> = ws.iter().map(|&(a, d)| (vec![-a], i64::from(d))).collect();
            assert_eq!(chi, LaurentPoly::from_int_terms(1, &expected));
        }
    }

    #[test]
    fn quadric_examples() {
        let q5 = quadric_data(Parity::Odd, 3).unwrap();
        assert!(q5.points.iter().all(|p| p.compass.size() == 5));
        assert_eq!(dimension_at_identity(&certify_laurent(&q5).unwrap()), int(7));
        let q6 = quadric_data(Parity::Even, 4).unwrap();
        assert!(q6.points.iter().all(|p| p.compass.size() == 6));
        assert!(q6.lattice.is_some());
        assert_eq!(dimension_at_identity(&certify_laurent(&q6).unwrap()), int(8));
        assert_eq!(quadric_data(Parity::Odd, 1), Err(ModelError::QuadricRank(1)));
    }

    #[test]
    fn adjoint_models_sit_on_long_roots() {
        for (family, r, dim) in [(Family::B, 3, 7), (Family::D, 4, 9), (Family::B, 4, 11)] {
            let ty = RootSystemType::new(family, r).unwrap();
            let data = adjoint_bd_data(ty).unwrap();
            let mut mus: Vec<Weight> = data.points.iter().map(|p| p.mu.clone()).collect();
            mus.sort();
            assert_eq!(mus, build(ty).unwrap().long_roots);
            assert!(data.points.iter().all(|p| p.compass.size() == dim));
            assert!(data.points.iter().all(|p| contact_dual_check(p).is_some()));
        }
        assert!(adjoint_bd_data(RootSystemType::new(Family::C, 3).unwrap()).is_err());
    }

    #[test]
    fn adjoint_characters_are_weyl_invariant() {
        let ty = RootSystemType::new(Family::B, 3).unwrap();
        let chi = certify_laurent(&adjoint_bd_data(ty).unwrap()).unwrap();
        let rs = build(ty).unwrap();
        for alpha in rs.simple_roots() {
            let moved = chi.map_exponents(3, |e| reflect(&alpha, &Weight::from_ints(e)).to_i64().unwrap());
            assert_eq!(moved, chi);
        }
        let mut expected: Vec<(Vec<i64>, i64)> = rs.roots.iter().map(|a| (a.to_i64().unwrap(), 1)).collect();
        expected.push((vec![0, 0, 0], 3));
        assert_eq!(chi, LaurentPoly::from_int_terms(3, &expected));
    }

    #[test]
    fn downgraded_data_matches_tables() {
        let b3 = downgraded_g2_data(G2Source::B3).unwrap();
        assert_eq!(b3.points.len(), 12);
        let cmp = compare_models(&b3, &g2_table_data(7).unwrap()).unwrap();
        assert!(cmp.matched, "{:?}", cmp.reason);
        let d4 = downgraded_g2_data(G2Source::D4).unwrap();
        assert_eq!(d4.points.len(), 24);
        let cmp = compare_models(&d4, &g2_table_data(9).unwrap()).unwrap();
        assert!(cmp.matched, "{:?}", cmp.reason);
        assert_eq!(cmp.characters_agree, Some(true));
    }

    #[test]
    fn conic_fixture_character() {
        let chi = certify_laurent(&quadric_threefold_with_conic()).unwrap();
        assert_eq!(chi, LaurentPoly::from_int_terms(1, &[(vec![0], 1), (vec![-1], 3), (vec![-2], 1)]));
    }

    #[test]
    fn spec_names_round_trip() {
        for name in ["quadric-odd-3", "quadric-even-4", "adjoint-B3", "adjoint-D4", "g2-from-B3", "g2-from-D4"] {
            assert_eq!(ModelSpec::parse(name, None).unwrap().to_string(), name);
        }
        let p = ModelSpec::parse("pspace", Some("0,1^2,2")).unwrap();
        assert_eq!(p, ModelSpec::ProjectiveSpace { weights: vec![(0, 1), (1, 2), (2, 1)] });
        assert!(ModelSpec::parse("adjoint-Q3", None).is_err());
    }
}
