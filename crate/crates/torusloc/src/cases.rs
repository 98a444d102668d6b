//! Named, reproducible computations with exact expected values.
//!
//! Each case runs a pipeline across the other modules and records one [`Check`] per
//! expected value. A check passes only on exact equality.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::contactrr::{self, DEGREE, P1, P2};
use crate::laurent::{Coefficient, LaurentPoly, RationalFn};
use crate::localize::{
    certify_laurent, classify_interval_case, compare_models, compass_cone_certificate, contact_dual_check,
    dimension_at_identity, euler_characteristic, quadric_recognition, solve_multiplicities, Compass, ConeMode,
    FixedPoint, FixedPointData, IntervalCase,
};
use crate::models::{
    adjoint_bd_data, downgraded_g2_data, g2_projection, g2_table_data, projective_space_data, quadric_data,
    quadric_threefold_with_conic, surface_with_unknowns, threefold_with_unknowns, G2Source, Parity,
};
use crate::polytope::{compass_candidates, edges_at_vertex, face_by_support, hull, lattice_points, BoundingBox};
use crate::rootsys::{build, root_polytope, Family, RootSystemType};
use crate::weights::{fmt_rational, int, project, rat, Rational, Weight};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    /// A value quoted from the published computation.
    Published,
    /// A value that follows from a one-line argument.
    Elementary,
    /// A value produced by an independent computation inside the test.
    Independent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub computed: Value,
    pub expected: Value,
    pub origin: Origin,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub case_name: String,
    pub module: String,
    pub summary: String,
    pub inputs: Value,
    pub checks: Vec<Check>,
    /// Set when the pipeline itself failed before all checks ran.
    pub error: Option<String>,
    /// True iff there is no error and every check passed.
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaseError {
    #[error("unknown case {0:?}")]
    Unknown(String),
}

/// Accumulates checks while a pipeline runs.
#[derive(Default)]
pub struct Checks {
    checks: Vec<Check>,
}

impl Checks {
    pub fn record(&mut self, name: impl Into<String>, computed: impl Serialize, expected: impl Serialize, pass: bool, origin: Origin) {
        self.checks.push(Check {
            name: name.into(),
            computed: to_value(&computed),
            expected: to_value(&expected),
            origin,
            pass,
        });
    }

    pub fn eq<T: Serialize + PartialEq>(&mut self, name: impl Into<String>, computed: T, expected: T, origin: Origin) {
        let pass = computed == expected;
        self.record(name, computed, expected, pass, origin);
    }

    pub fn holds(&mut self, name: impl Into<String>, value: bool, origin: Origin) {
        self.eq(name, value, true, origin);
    }
}


fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or_else(|e| Value::String(format!("unserializable: {e}")))
}

type Pipeline = fn(&mut Checks) -> Result<Value, String>;

/// A registry entry: the pipeline records its own expectations.
pub struct CaseDef {
    pub name: &'static str,
    pub module: &'static str,
    pub summary: &'static str,
    run: Pipeline,
}

pub fn registry() -> &'static [CaseDef] {
    &REGISTRY
}

static REGISTRY: [CaseDef; 15] = [
    CaseDef { name: "e-series-edges", module: "polytope", summary: "edges at a vertex of the E6, E7, E8 and F4 root polytopes", run: e_series_edges },
    CaseDef { name: "f4-compass-candidates", module: "polytope", summary: "admissible compass entries at e1+e2 for F4", run: f4_compass_candidates },
    CaseDef { name: "root-polytope-lattice-points", module: "polytope", summary: "weight lattice points in the B3 root polytope and in the A_r facets {e0*+e1* = 1}", run: root_polytope_lattice_points },
    CaseDef { name: "hirzebruch-localization", module: "laurent", summary: "surface with a C*-action: the unknown counts at weights 1 and 2", run: hirzebruch_localization },
    CaseDef { name: "threefold-localization", module: "laurent", summary: "threefold with a C*-action: the unknown counts at weights 1 and 2", run: threefold_localization },
    CaseDef { name: "adjoint-characters", module: "models", summary: "characters of the B3 and D4 adjoint varieties", run: adjoint_characters },
    CaseDef { name: "g2-downgrades", module: "models", summary: "restriction of B3 and D4 adjoint data to a G2 torus against the tabulated data", run: g2_downgrades },
    CaseDef { name: "g2-sevenfold-h0", module: "models", summary: "sections of L on the sevenfold with a G2-torus action", run: g2_sevenfold_h0 },
    CaseDef { name: "g2-ninefold-h0", module: "models", summary: "sections of L on the ninefold with a G2-torus action", run: g2_ninefold_h0 },
    CaseDef { name: "contact-duality", module: "localize", summary: "compass pairing x + y = -mu at every fixed point of the contact catalog", run: contact_duality },
    CaseDef { name: "quadric-and-interval", module: "localize", summary: "quadric recognition on cross-polytopes and the Delta = [0,2] classification", run: quadric_and_interval },
    CaseDef { name: "hrr-formulas", module: "contactrr", summary: "Hilbert polynomials, tangent intersection numbers and BG bounds in dimensions 7, 9, 11", run: hrr_formulas },
    CaseDef { name: "hrr-localization-consistency", module: "contactrr", summary: "localization values of chi(L^m) against the contact Hilbert polynomials", run: hrr_localization_consistency },
    CaseDef { name: "negative-fixtures", module: "localize", summary: "data that must be rejected: C3 cone violation, A_r facet count, corrupted compasses", run: negative_fixtures },
    CaseDef { name: "projective-space-characters", module: "models", summary: "characters of projective spaces under diagonal weights", run: projective_space_characters },
];

/// Case names in registry order, optionally restricted to one module.
pub fn list_cases(module: Option<&str>) -> Vec<&'static CaseDef> {
    REGISTRY.iter().filter(|c| module.map_or(true, |m| m.is_empty() || c.module == m)).collect()
}

pub fn run_case(name: &str) -> Result<CaseReport, CaseError> {
    let def = REGISTRY.iter().find(|c| c.name == name).ok_or_else(|| CaseError::Unknown(name.to_string()))?;
    let mut checks = Checks::default();
    let outcome = (def.run)(&mut checks);
    let (inputs, error) = match outcome {
        Ok(v) => (v, None),
        Err(e) => (Value::Null, Some(e)),
    };
    let pass = error.is_none() && !checks.checks.is_empty() && checks.checks.iter().all(|c| c.pass);
    Ok(CaseReport {
        case_name: def.name.to_string(),
        module: def.module.to_string(),
        summary: def.summary.to_string(),
        inputs,
        checks: checks.checks,
        error,
        pass,
    })
}

/// Runs the named cases concurrently; reports come back sorted by case name.
pub fn run_cases(names: &[&str]) -> Result<Vec<CaseReport>, CaseError> {
    let mut reports = names.par_iter().map(|n| run_case(n)).collect::<Result<Vec<_>, _>>()?;
    reports.sort_by(|a, b| a.case_name.cmp(&b.case_name));
    Ok(reports)
}

pub fn run_all() -> Vec<CaseReport> {
    let names: Vec<&str> = REGISTRY.iter().map(|c| c.name).collect();
    run_cases(&names).expect("registry names are known")
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ty(s: &str) -> Result<RootSystemType, String> {
    s.parse().map_err(err)
}

fn e_series_edges(c: &mut Checks) -> Result<Value, String> {
    for (name, expected) in [("E6", 20usize), ("E7", 32), ("E8", 56)] {
        let p = root_polytope(&build(ty(name)?).map_err(err)?);
        let v = p.vertices[0].clone();
        let n = edges_at_vertex(&p, &v).map_err(err)?.len();
        c.eq(format!("{name} edges at {v}"), n, expected, Origin::Published);
    }
    let f4 = build(ty("F4")?).map_err(err)?;
    let p = root_polytope(&f4);
    let v = Weight::from_ints(&[1, 1, 0, 0]);
    c.holds("e1+e2 is a long root of F4", f4.long_roots.contains(&v), Origin::Elementary);
    c.eq("F4 edges at e1+e2", edges_at_vertex(&p, &v).map_err(err)?.len(), 8, Origin::Published);
    Ok(json!({"types": ["E6", "E7", "E8", "F4"]}))
}

fn f4_compass_candidates(c: &mut Checks) -> Result<Value, String> {
    let f4 = build(ty("F4")?).map_err(err)?;
    let p = root_polytope(&f4);
    let v = Weight::from_ints(&[1, 1, 0, 0]);
    let pts = compass_candidates(&p, &v, &f4.weight_lattice, &BoundingBox::cube(4, 2)).map_err(err)?;
    c.eq("number of candidates", pts.len(), 14, Origin::Published);
    let h = Weight::from_ints(&[1, 1, 0, 0]);
    let values: Vec<String> = pts.iter().map(|x| fmt_rational(&h.dot(x))).collect();
    c.holds("all on (e1*+e2*)(u) = -1", values.iter().all(|s| s == "-1"), Origin::Published);
    c.record("candidates", pts.iter().map(ToString::to_string).collect::<Vec<_>>(), "14 points", pts.len() == 14, Origin::Published);
    Ok(json!({"type": "F4", "vertex": v.to_string(), "box_radius": 2}))
}

fn root_polytope_lattice_points(c: &mut Checks) -> Result<Value, String> {
    let b3 = build(ty("B3")?).map_err(err)?;
    let n = lattice_points(&root_polytope(&b3), &b3.weight_lattice).map_err(err)?.len();
    c.eq("B3 lattice points", n, 27, Origin::Published);
    for r in 3..=6usize {
        let a = build(RootSystemType::new(Family::A, r).map_err(err)?).map_err(err)?;
        let p = root_polytope(&a);
        let mut normal = vec![0i64; r + 1];
        normal[0] = 1;
        normal[1] = 1;
        let face = face_by_support(&p, &Weight::from_ints(&normal)).map_err(err)?;
        let pts = lattice_points(&face.polytope(), &a.weight_lattice).map_err(err)?;
        c.eq(format!("A{r} facet vertices"), face.vertices.len(), 2 * (r - 1), Origin::Published);
        if r == 3 {
            c.eq("A3 facet lattice points", pts.len(), 5, Origin::Published);
            let mid = Weight::from_fracs(&[(1, 2), (1, 2), (-1, 2), (-1, 2)]);
            c.holds(format!("A3 facet contains {mid}"), pts.contains(&mid), Origin::Published);
        } else {
            c.eq(format!("A{r} facet lattice points"), pts.len(), 2 * (r - 1), Origin::Published);
        }
    }
    Ok(json!({"b3_lattice": "Z^3 + Z(1/2,1/2,1/2)", "facet_normal": "e0* + e1*"}))
}

fn solution_map(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn hirzebruch_localization(c: &mut Checks) -> Result<Value, String> {
    let data = surface_with_unknowns();
    let f = euler_characteristic(&data).map_err(err)?;
    // (1 − a t² − b t³ + t⁵)/(t − 1)², built independently of the fixed-point sum.
    let mut num = LaurentPoly::from_int_terms(1, &[(vec![0], 1), (vec![5], 1)]);
    num.add_term(vec![2], &Coefficient::unknown("a").neg());
    num.add_term(vec![3], &Coefficient::unknown("b").neg());
    let expected = RationalFn::new(num, &[(vec![1], 2)]).map_err(err)?;
    c.record("symbolic sum", f.to_string(), expected.to_string(), f.equals(&expected).map_err(err)?, Origin::Published);
    let sol = solve_multiplicities(&data, &[1]).map_err(err)?;
    c.eq("solution", sol.values.clone(), solution_map(&[("a", 1), ("b", 1)]), Origin::Published);
    c.eq("character", sol.character.to_string(), LaurentPoly::univariate(&[1, 2, 2, 1]).to_string(), Origin::Independent);
    Ok(json!({"data": data, "conditions": sol.conditions}))
}

fn threefold_localization(c: &mut Checks) -> Result<Value, String> {
    let data = threefold_with_unknowns();
    let f = euler_characteristic(&data).map_err(err)?;
    // (t⁶ − b t⁴ + a t² − 1)/(t − 1)³ equals (1 − a t² + b t⁴ − t⁶)/(1 − t)³.
    let mut num = LaurentPoly::from_int_terms(1, &[(vec![0], 1), (vec![6], -1)]);
    num.add_term(vec![2], &Coefficient::unknown("a").neg());
    num.add_term(vec![4], &Coefficient::unknown("b"));
    let expected = RationalFn::new(num, &[(vec![1], 3)]).map_err(err)?;
    c.record("symbolic sum", f.to_string(), expected.to_string(), f.equals(&expected).map_err(err)?, Origin::Published);
    let sol = solve_multiplicities(&data, &[1]).map_err(err)?;
    c.eq("solution", sol.values.clone(), solution_map(&[("a", 3), ("b", 3)]), Origin::Published);
    c.eq("character", sol.character.clone(), LaurentPoly::univariate(&[1, 3, 3, 1]), Origin::Published);
    Ok(json!({"data": data, "conditions": sol.conditions}))
}

fn adjoint_characters(c: &mut Checks) -> Result<Value, String> {
    for (name, h0, r) in [("B3", 21, 3i64), ("D4", 28, 4)] {
        let t = ty(name)?;
        let data = adjoint_bd_data(t).map_err(err)?;
        let chi = certify_laurent(&data).map_err(err)?;
        c.eq(format!("{name} h0"), fmt_rational(&dimension_at_identity(&chi)), h0.to_string(), Origin::Published);
        let rs = build(t).map_err(err)?;
        let vertex_ok = rs.long_roots.iter().all(|v| chi.coefficient(&v.to_i64().unwrap_or_default()) == Coefficient::from_int(1));
        c.holds(format!("{name} coefficient 1 at each vertex"), vertex_ok, Origin::Published);
        c.eq(format!("{name} coefficient at 0"), chi.coefficient(&vec![0; rs.ambient_rank]), Coefficient::from_int(r), Origin::Published);
        // Adjoint representation: every root once, zero r times.
        let mut adj = LaurentPoly::zero(rs.ambient_rank);
        for a in &rs.roots {
            adj.add_term(a.to_i64().ok_or("non-integral root")?, &Coefficient::from_int(1));
        }
        adj.add_term(vec![0; rs.ambient_rank], &Coefficient::from_int(r));
        c.eq(format!("{name} character equals the adjoint character"), chi, adj, Origin::Independent);
    }
    Ok(json!({"types": ["B3", "D4"]}))
}

fn g2_downgrades(c: &mut Checks) -> Result<Value, String> {
    for (source, dim, extremal, inner) in [(G2Source::B3, 7, 6usize, 6usize), (G2Source::D4, 9, 6, 18)] {
        let down = downgraded_g2_data(source).map_err(err)?;
        let table = g2_table_data(dim).map_err(err)?;
        let outer: Vec<Weight> = crate::models::HEX_OUTER.iter().map(|x| Weight::from_ints(x)).collect();
        let n_outer = down.points.iter().filter(|p| outer.contains(&p.mu)).count();
        c.eq(format!("{source:?}: extremal points"), n_outer, extremal, Origin::Published);
        c.eq(format!("{source:?}: inner points"), down.points.len() - n_outer, inner, Origin::Published);
        let cmp = compare_models(&down, &table).map_err(err)?;
        c.record(format!("{source:?}: matches the dimension-{dim} table"), &cmp, "matched", cmp.matched, Origin::Published);
        c.eq(format!("{source:?}: characters agree"), cmp.characters_agree, Some(true), Origin::Independent);
    }
    Ok(json!({"projection": "(x1+x2, x1+x3)"}))
}

fn g2_h0(c: &mut Checks, dim: usize, expected: i64) -> Result<Value, String> {
    let data = g2_table_data(dim).map_err(err)?;
    let chi = certify_laurent(&data).map_err(err)?;
    c.eq("h0(L)", fmt_rational(&dimension_at_identity(&chi)), expected.to_string(), Origin::Published);
    // The adjoint character of the source group, pushed through the G2 projection.
    let (source, name) = if dim == 7 { (G2Source::B3, "B3") } else { (G2Source::D4, "D4") };
    let proj = g2_projection(source);
    let mut pushed = LaurentPoly::zero(2);
    for (e, q) in certify_laurent(&adjoint_bd_data(ty(name)?).map_err(err)?).map_err(err)?.terms() {
        let image = project(&proj, &Weight::from_ints(e)).map_err(err)?;
        pushed.add_term(image.to_i64().ok_or("non-integral image")?, q);
    }
    c.eq(format!("character equals the projected {name} adjoint character"), chi, pushed, Origin::Independent);
    Ok(json!({"dimension": dim, "points": data.points.len()}))
}

fn g2_sevenfold_h0(c: &mut Checks) -> Result<Value, String> {
    g2_h0(c, 7, 21)
}

fn g2_ninefold_h0(c: &mut Checks) -> Result<Value, String> {
    g2_h0(c, 9, 28)
}

fn contact_catalog() -> Result<Vec<(String, FixedPointData)>, String> {
    let mut out = Vec::new();
    for name in ["B3", "B4", "D4", "D5"] {
        out.push((format!("adjoint-{name}"), adjoint_bd_data(ty(name)?).map_err(err)?));
    }
    out.push(("g2-from-B3".into(), downgraded_g2_data(G2Source::B3).map_err(err)?));
    out.push(("g2-from-D4".into(), downgraded_g2_data(G2Source::D4).map_err(err)?));
    Ok(out)
}

fn contact_duality(c: &mut Checks) -> Result<Value, String> {
    let catalog = contact_catalog()?;
    for (name, data) in &catalog {
        let failing: Vec<String> = data.points.iter().filter(|p| contact_dual_check(p).is_none()).map(|p| p.label.clone()).collect();
        c.eq(format!("{name}: points without a pairing"), failing, vec![], Origin::Published);
    }
    // Doubling −μ breaks the pattern.
    let p = &catalog[0].1.points[0];
    let mut entries = p.compass.entries().to_vec();
    let target = -&p.mu;
    for e in entries.iter_mut() {
        if e.nu == target {
            e.mult += 1;
        }
    }
    let perturbed = FixedPoint::new("perturbed", p.mu.clone(), Compass::new(entries).map_err(err)?);
    c.eq("perturbed point has no pairing", contact_dual_check(&perturbed).is_none(), true, Origin::Elementary);
    Ok(json!({"models": catalog.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>()}))
}

fn quadric_and_interval(c: &mut Checks) -> Result<Value, String> {
    for (parity, r, d) in [(Parity::Odd, 3usize, 5i64), (Parity::Even, 4, 6)] {
        let data = quadric_data(parity, r).map_err(err)?;
        let delta = hull(&data.weights()).map_err(err)?;
        let v = quadric_recognition(&data, &delta, None).map_err(err)?;
        c.eq(format!("Q{d} recognized dimension"), v.d, Some(d), Origin::Elementary);
        let certs_ok = data
            .points
            .iter()
            .map(|p| compass_cone_certificate(p, &delta, ConeMode::Torus).map(|x| x.pass))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        c.holds(format!("Q{d} compasses lie in the tangent cones"), certs_ok.iter().all(|&b| b), Origin::Elementary);
    }
    for d in [2usize, 3] {
        let mut w = vec![(0, 1), (1, d as u32 - 1), (2, 1)];
        w.retain(|x| x.1 > 0);
        let data = projective_space_data(&w).map_err(err)?;
        // Shift to μ in [0,2]: pspace data puts the coordinate of weight a at −a.
        let data = shift_rank_one(&data, 2);
        c.eq(format!("P{d} with weights (0,1^{},2)", d - 1), classify_interval_case(&data).map_err(err)?, IntervalCase::Pd { d }, Origin::Published);
    }
    let q3 = shift_rank_one(&quadric_threefold_with_conic(), 2);
    c.eq("Q3 with weights (0,1,1,1,2)", classify_interval_case(&q3).map_err(err)?, IntervalCase::Qd { d: 3 }, Origin::Published);
    Ok(json!({"quadrics": ["Q5", "Q6"], "intervals": ["P2", "P3", "Q3"]}))
}

fn shift_rank_one(data: &FixedPointData, by: i64) -> FixedPointData {
    let s = Weight::from_ints(&[by]);
    let mut out = data.clone();
    for p in &mut out.points {
        p.mu = &p.mu + &s;
    }
    for cv in &mut out.curves {
        cv.mu = &cv.mu + &s;
    }
    for u in &mut out.unknowns {
        u.mu = &u.mu + &s;
    }
    out
}

fn lin(deg: Rational, p1: i64, p2: i64, constant: i64) -> Coefficient {
    let mut out = Coefficient::from_int(constant);
    out.add_assign(&Coefficient::unknown(DEGREE).scale(&deg));
    out.add_assign(&Coefficient::unknown(P1).scale(&int(p1)));
    out.add_assign(&Coefficient::unknown(P2).scale(&int(p2)));
    out
}

fn hrr_formulas(c: &mut Checks) -> Result<Value, String> {
    let expected: [(usize, Vec<(usize, Coefficient)>); 3] = [
        (
            3,
            vec![
                (7, lin(int(1), 0, 0, 0)),
                (6, lin(int(-2), 0, 0, 0)),
                (5, lin(int(1), 1, 0, -4)),
                (4, lin(int(0), -1, 0, 4)),
                (3, lin(int(0), 0, 0, 1)),
            ],
        ),
        (
            4,
            vec![
                (9, lin(int(1), 0, 0, 0)),
                (8, lin(rat(-5, 2), 0, 0, 0)),
                (7, lin(int(2), 2, 0, -14)),
                (6, lin(rat(-1, 2), -3, 0, 21)),
                (5, lin(int(0), 1, 0, -5)),
                (4, lin(int(0), 0, 0, -1)),
            ],
        ),
        (
            5,
            vec![
                (11, lin(int(1), 0, 0, 0)),
                (10, lin(int(-3), 0, 0, 0)),
                (9, lin(int(3), -8, 1, 27)),
                (8, lin(int(-1), 16, -2, -54)),
                (7, lin(int(0), -7, 1, 21)),
                (6, lin(int(0), -1, 0, 6)),
                (5, lin(int(0), 0, 0, 1)),
            ],
        ),
    ];
    for (n, coeffs) in &expected {
        let hp = contactrr::hilbert_polynomial(*n).map_err(err)?;
        let want: Vec<Coefficient> =
            (0..=hp.dim).map(|k| coeffs.iter().find(|(j, _)| *j == k).map_or_else(Coefficient::zero, |(_, q)| q.clone())).collect();
        let pass = hp.binomial_coeffs == want;
        let shown: Vec<String> = hp.binomial_coeffs.iter().map(ToString::to_string).collect();
        let wanted: Vec<String> = want.iter().map(ToString::to_string).collect();
        c.record(format!("dim {} Hilbert polynomial in the C(m+k,k) basis", hp.dim), shown, wanted, pass, Origin::Published);
    }
    for (n, c1sq, c2) in [(3usize, lin(int(16), 0, 0, 0), lin(int(4), 12, 0, -48)), (4, lin(int(25), 0, 0, 0), lin(int(9), 24, 0, -168))] {
        let ids = contactrr::intersection_identities(n).map_err(err)?;
        c.record(ids[0].lhs.clone(), ids[0].rhs.to_string(), c1sq.to_string(), ids[0].rhs == c1sq, Origin::Published);
        c.record(ids[1].lhs.clone(), ids[1].rhs.to_string(), c2.to_string(), ids[1].rhs == c2, Origin::Published);
    }
    for (n, shown) in [(3usize, "p1 >= 4 + 5/21*deg"), (4, "p1 >= 7 + 19/216*deg"), (5, "11p2 + 297 >= 88p1 + 4deg")] {
        let b = contactrr::bg_bound(n).map_err(err)?;
        c.eq(format!("BG bound in dimension {}", 2 * n + 1), b.to_string(), shown.to_string(), Origin::Published);
    }
    let seven = contactrr::bg_bound(3).map_err(err)?;
    let nine = contactrr::bg_bound(4).map_err(err)?;
    let min7 = (1..=100).filter_map(|d| seven.min_p1(d)).min();
    let even: Vec<i64> = (1..=100).filter(|&d| contactrr::parity_check(4, Some(d)).map(|v| v.pass == Some(true)).unwrap_or(false)).collect();
    let min9 = even.iter().filter_map(|&d| nine.min_p1(d)).min();
    c.eq("dim 7: least admissible p(1) over deg in 1..100", min7, Some(5), Origin::Published);
    c.eq("dim 9: least admissible p(1) over even deg in 2..100", min9, Some(8), Origin::Published);
    c.eq("dim 9: admissible degrees are the even ones", even.len(), 50, Origin::Published);
    Ok(json!({"dimensions": [7, 9, 11]}))
}

/// Localization value of `χ(L^m)`.
fn chi_power(data: &FixedPointData, m: i64) -> Result<Rational, String> {
    Ok(dimension_at_identity(&certify_laurent(&data.power(m)).map_err(err)?))
}

fn hrr_localization_consistency(c: &mut Checks) -> Result<Value, String> {
    let mut solved = BTreeMap::new();
    for (name, n) in [("B3", 3usize), ("D4", 4)] {
        let data = adjoint_bd_data(ty(name)?).map_err(err)?;
        let hp = contactrr::hilbert_polynomial(n).map_err(err)?;
        let chi: Vec<Rational> = (1..=3).map(|m| chi_power(&data, m)).collect::<Result<_, _>>()?;
        let with_p1 = BTreeMap::from([(P1.to_string(), chi[0].clone())]);
        let at2 = hp.eval_numeric(&int(2), &with_p1);
        let a = at2.linear.get(DEGREE).cloned().ok_or("p(2) does not involve deg")?;
        let deg = (&chi[1] - &at2.constant) / a;
        c.holds(format!("{name}: deg from p(1), p(2) is a positive integer"), deg.is_integer() && deg > int(0), Origin::Independent);
        let mut vals = with_p1.clone();
        vals.insert(DEGREE.to_string(), deg.clone());
        let predicted = hp.eval_numeric(&int(3), &vals);
        c.eq(format!("{name}: p(3) from the polynomial equals localization"), predicted, Coefficient::constant(chi[2].clone()), Origin::Independent);
        solved.insert(name, json!({"chi": chi.iter().map(fmt_rational).collect::<Vec<_>>(), "deg": fmt_rational(&deg)}));
    }
    Ok(json!(solved))
}

fn negative_fixtures(c: &mut Checks) -> Result<Value, String> {
    // C3 at the long root 2e1, with a compass shaped like the B/D adjoint pattern.
    let c3 = build(ty("C3")?).map_err(err)?;
    let delta = root_polytope(&c3);
    let compass = Compass::from_int_rows(&[&[-2, 0, 0], &[-2, 2, 0], &[-1, 0, 1], &[-1, 0, -1], &[-1, -1, 0]]).map_err(err)?;
    let p = FixedPoint::new("2e1", Weight::from_ints(&[2, 0, 0]), compass);
    let cert = compass_cone_certificate(&p, &delta, ConeMode::Contact).map_err(err)?;
    c.record("C3 compass at 2e1 violates the contact cone condition", &cert.violations, "at least one violation", !cert.pass, Origin::Published);
    for r in [4usize, 5] {
        let a = build(RootSystemType::new(Family::A, r).map_err(err)?).map_err(err)?;
        let mut normal = vec![0i64; r + 1];
        normal[0] = 1;
        normal[1] = 1;
        let face = face_by_support(&root_polytope(&a), &Weight::from_ints(&normal)).map_err(err)?;
        let k = face.vertices.len();
        c.record(format!("A{r}: facet has {k} vertices, a toric facet would need {r}"), k, format!("!= {r}"), k != r && k == 2 * (r - 1), Origin::Published);
    }
    let mut q5 = quadric_data(Parity::Odd, 3).map_err(err)?;
    let first = &mut q5.points[0];
    let mut entries = first.compass.entries().to_vec();
    entries[0].nu = -&entries[0].nu;
    first.compass = Compass::new(entries).map_err(err)?;
    let res = certify_laurent(&q5);
    c.record("corrupted Q5 data is not certified", res.as_ref().err().map(ToString::to_string), "an error", res.is_err(), Origin::Elementary);
    Ok(json!({"c3_vertex": "2e1", "a_ranks": [4, 5]}))
}

fn projective_space_characters(c: &mut Checks) -> Result<Value, String> {
    for w in [vec![(0, 1), (1, 1)], vec![(0, 1), (1, 1), (2, 1)], vec![(0, 1), (1, 2), (3, 1)]] {
        let data = projective_space_data(&w).map_err(err)?;
        let chi = certify_laurent(&data).map_err(err)?;
        let mut want = LaurentPoly::zero(1);
        for &(a, d) in &w {
            want.add_term(vec![-a], &Coefficient::from_int(d as i64));
        }
        c.eq(format!("weights {w:?}"), chi, want, Origin::Elementary);
    }
    Ok(json!({}))
}
