use std::collections::BTreeSet;

use proptest::prelude::*;
use torusloc::polytope::{edges_at_vertex, hull, lattice_points, Polytope};
use torusloc::rootsys::{build, flatten_sum_zero, root_polytope, RootSystem, RootSystemType};
use torusloc::weights::{int, primitive_direction, Rational, Weight};

fn ty(s: &str) -> RootSystemType {
    s.parse().unwrap()
}

/// Rank of a list of rational vectors by plain Gaussian elimination.
fn rank_of(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != int(0)) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][c] != int(0) {
                let f = &m[i][c] / &m[rank][c];
                for j in 0..cols {
                    let d = &f * &m[rank][j];
                    m[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn diffs(points: &[&Weight]) -> Vec<Vec<Rational>> {
    points[1..].iter().map(|p| (*p - points[0]).coords().to_vec()).collect()
}

/// Facets of a full-dimensional rank-3 polytope by exhaustive search over vertex triples.
fn brute_facets(vertices: &[Weight]) -> BTreeSet<Vec<usize>> {
    let n = vertices.len();
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (u, v) = (&vertices[b] - &vertices[a], &vertices[c] - &vertices[a]);
                let (u, v) = (u.coords(), v.coords());
                let normal = Weight::new(vec![
                    &u[1] * &v[2] - &u[2] * &v[1],
                    &u[2] * &v[0] - &u[0] * &v[2],
                    &u[0] * &v[1] - &u[1] * &v[0],
                ]);
                if normal.is_zero() {
                    continue;
                }
                let h = normal.dot(&vertices[a]);
                let side: Vec<std::cmp::Ordering> = vertices.iter().map(|x| normal.dot(x).cmp(&h)).collect();
                let above = side.iter().any(|s| s.is_gt());
                let below = side.iter().any(|s| s.is_lt());
                if above != below {
                    out.insert((0..n).filter(|&i| side[i].is_eq()).collect());
                }
            }
        }
    }
    out
}

fn rank_three_examples() -> Vec<(String, Polytope)> {
    let mut out = Vec::new();
    for name in ["B3", "C3"] {
        out.push((name.to_string(), root_polytope(&build(ty(name)).unwrap())));
    }
    let a3 = build(ty("A3")).unwrap();
    let flat: Vec<Weight> = a3.roots.iter().map(flatten_sum_zero).collect();
    out.push(("A3".into(), hull(&flat).unwrap()));
    let cube: Vec<Weight> =
        (0..8).map(|m: i64| Weight::from_ints(&[if m & 1 == 0 { -1 } else { 1 }, if m & 2 == 0 { -1 } else { 1 }, if m & 4 == 0 { -1 } else { 1 }])).collect();
    out.push(("cube".into(), hull(&cube).unwrap()));
    out
}

#[test]
fn facets_agree_with_exhaustive_search_in_rank_three() {
    for (name, p) in rank_three_examples() {
        let ours: BTreeSet<Vec<usize>> = (0..p.facets.len()).map(|f| p.facet_vertices(f)).collect();
        assert_eq!(ours, brute_facets(&p.vertices), "{name}");
    }
}

#[test]
fn edges_agree_with_exhaustive_search_in_rank_three() {
    for (name, p) in rank_three_examples() {
        let facets = brute_facets(&p.vertices);
        for (i, v) in p.vertices.iter().enumerate() {
            // w is adjacent to v iff the facets containing both meet exactly in {v, w}.
            let mut brute: Vec<Weight> = Vec::new();
            for (j, w) in p.vertices.iter().enumerate() {
                if i == j {
                    continue;
                }
                let common: Vec<&Vec<usize>> = facets.iter().filter(|f| f.contains(&i) && f.contains(&j)).collect();
                if common.len() < 2 {
                    continue;
                }
                let meet: BTreeSet<usize> =
                    (0..p.vertices.len()).filter(|k| common.iter().all(|f| f.contains(k))).collect();
                if meet == BTreeSet::from([i, j]) {
                    brute.push(primitive_direction(&(w - v)).unwrap());
                }
            }
            brute.sort();
            assert_eq!(edges_at_vertex(&p, v).unwrap(), brute, "{name} at {v}");
        }
    }
}

fn all_small_types() -> Vec<RootSystem> {
    ["A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2", "F4"].iter().map(|s| build(ty(s)).unwrap()).collect()
}

#[test]
fn hull_round_trip_and_incidence_cross_validation() {
    for rs in all_small_types() {
        let p = root_polytope(&rs);
        assert_eq!(hull(&p.vertices).unwrap(), p, "{}", rs.ty);
        let d = p.dim();
        for v in &p.vertices {
            let normals: Vec<Vec<Rational>> =
                p.facets.iter().filter(|h| h.tight_at(v)).map(|h| h.normal.coords().to_vec()).collect();
            assert!(rank_of(&normals) >= d, "{}: vertex {v} on too few independent facets", rs.ty);
        }
        for f in 0..p.facets.len() {
            let vs: Vec<&Weight> = p.facet_vertices(f).iter().map(|&i| &p.vertices[i]).collect();
            assert!(rank_of(&diffs(&vs)) + 1 >= d, "{}: facet {f} is not spanned", rs.ty);
        }
    }
}

#[test]
fn edge_directions_are_pairwise_non_parallel_and_hit_neighbors() {
    for rs in all_small_types() {
        let p = root_polytope(&rs);
        for v in &p.vertices {
            let dirs = edges_at_vertex(&p, v).unwrap();
            for (i, a) in dirs.iter().enumerate() {
                for b in &dirs[i + 1..] {
                    assert!(!a.is_parallel_to(b), "{}: parallel edges at {v}", rs.ty);
                }
                assert!(p.vertices.iter().any(|w| w != v && (w - v).is_positive_multiple_of(a)), "{}", rs.ty);
            }
            assert!(dirs.len() >= p.dim(), "{}: vertex {v} has {} edges", rs.ty, dirs.len());
        }
    }
}

#[test]
fn simply_laced_edges_match_roots_at_sixty_degrees() {
    // At a root v of a simply-laced system the edges run to the roots w with (v, w) = 1.
    for name in ["A3", "A5", "D4", "D5", "D6", "E6", "E7"] {
        let rs = build(ty(name)).unwrap();
        let p = root_polytope(&rs);
        let v = &rs.roots[0];
        let expected = rs.roots.iter().filter(|w| v.dot(w) == int(1)).count();
        assert_eq!(edges_at_vertex(&p, v).unwrap().len(), expected, "{name}");
    }
}

#[test]
fn ehrhart_counts_grow_with_dilation() {
    for rs in all_small_types() {
        let p = root_polytope(&rs);
        let counts: Vec<usize> =
            (1..=3).map(|m| lattice_points(&p.dilate(m).unwrap(), &rs.weight_lattice).unwrap().len()).collect();
        assert!(counts.windows(2).all(|w| w[0] < w[1]), "{}: {counts:?}", rs.ty);
    }
}

#[test]
fn vertices_are_roots_and_short_roots_are_not_vertices() {
    for name in ["A3", "A4", "D4", "D5", "E6", "B3", "B4", "C3", "C4", "G2", "F4"] {
        let rs = build(ty(name)).unwrap();
        let p = root_polytope(&rs);
        assert!(p.vertices.iter().all(|v| rs.roots.contains(v)), "{name}");
        if rs.short_roots.is_empty() {
            assert_eq!(p.vertices.len(), rs.roots.len(), "{name}");
        } else {
            let mut vs = p.vertices.clone();
            vs.sort();
            assert_eq!(vs, rs.long_roots, "{name}");
        }
    }
    // B_r: every ±e_i lies on a facet.
    for name in ["B3", "B4", "B5"] {
        let rs = build(ty(name)).unwrap();
        let p = root_polytope(&rs);
        for s in &rs.short_roots {
            assert!(p.facets.iter().any(|h| h.tight_at(s)), "{name}: {s} is interior");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Random point clouds in rank 3: the hull contains its input and its facets match exhaustive search.
    #[test]
    fn random_hulls_match_exhaustive_facets(raw in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 5..10)) {
        let pts: Vec<Weight> = raw.iter().map(|x| Weight::from_ints(x)).collect();
        let p = hull(&pts).unwrap();
        for x in &pts {
            prop_assert!(p.contains(x));
        }
        if p.dim() == 3 {
            let ours: BTreeSet<Vec<usize>> = (0..p.facets.len()).map(|f| p.facet_vertices(f)).collect();
            prop_assert_eq!(ours, brute_facets(&p.vertices));
        }
    }
}
