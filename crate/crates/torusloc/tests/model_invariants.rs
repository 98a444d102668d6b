use proptest::prelude::*;
use torusloc::laurent::LaurentPoly;
use torusloc::localize::{anticanonical_weight, certify_laurent, dimension_at_identity, FixedPointData};
use torusloc::models::{adjoint_bd_data, projective_space_data, quadric_data, quadric_threefold_with_conic, Parity};
use torusloc::rootsys::{build, reflect, RootSystemType};
use torusloc::weights::{int, Weight};

/// `(χ(t)² + χ(t²)) / 2`, the character of the symmetric square.
fn sym_square(chi: &LaurentPoly) -> LaurentPoly {
    let doubled = chi.map_exponents(chi.rank(), |e| e.iter().map(|x| 2 * x).collect());
    chi.mul(chi).unwrap().add(&doubled).unwrap().scale(&torusloc::weights::rat(1, 2))
}

fn vector_character(r: usize, with_zero: bool) -> LaurentPoly {
    let mut terms: Vec<(Vec<i64>, i64)> = Vec::new();
    for i in 0..r {
        for s in [1, -1] {
            let mut e = vec![0; r];
            e[i] = s;
            terms.push((e, 1));
        }
    }
    if with_zero {
        terms.push((vec![0; r], 1));
    }
    LaurentPoly::from_int_terms(r, &terms)
}

fn assert_weyl_invariant(chi: &LaurentPoly, ty: RootSystemType) {
    let rs = build(ty).unwrap();
    for alpha in rs.simple_roots() {
        let moved = chi.map_exponents(chi.rank(), |e| reflect(&alpha, &Weight::from_ints(e)).to_i64().unwrap());
        assert_eq!(&moved, chi, "{ty} reflection in {alpha}");
    }
}

#[test]
fn adjoint_characters_are_the_adjoint_representation() {
    for (name, dim) in [("B3", 21), ("B4", 36), ("B5", 55), ("D4", 28), ("D5", 45)] {
        let ty: RootSystemType = name.parse().unwrap();
        let r = ty.rank;
        let chi = certify_laurent(&adjoint_bd_data(ty).unwrap()).unwrap();
        let rs = build(ty).unwrap();
        let mut expected: Vec<(Vec<i64>, i64)> = rs.roots.iter().map(|a| (a.to_i64().unwrap(), 1)).collect();
        expected.push((vec![0; r], r as i64));
        assert_eq!(chi, LaurentPoly::from_int_terms(r, &expected), "{name}");
        assert_eq!(dimension_at_identity(&chi), int(dim), "{name}");
        assert_weyl_invariant(&chi, ty);
    }
}

#[test]
fn quadric_characters_are_the_vector_representation() {
    for r in 2..=4 {
        let odd = certify_laurent(&quadric_data(Parity::Odd, r).unwrap()).unwrap();
        assert_eq!(odd, vector_character(r, true), "odd r = {r}");
        assert_weyl_invariant(&odd, format!("B{r}").parse().unwrap());
    }
    for r in 3..=5 {
        let even = certify_laurent(&quadric_data(Parity::Even, r).unwrap()).unwrap();
        assert_eq!(even, vector_character(r, false), "even r = {r}");
        if r >= 4 {
            assert_weyl_invariant(&even, format!("D{r}").parse().unwrap());
        }
    }
}

#[test]
fn quadric_second_power_is_the_traceless_symmetric_square() {
    // On Q ⊂ P(V), H⁰(O(2)) = Sym²V* modulo the quadric equation.
    let data = quadric_data(Parity::Odd, 2).unwrap();
    let v = certify_laurent(&data).unwrap();
    let expected = sym_square(&v).sub(&LaurentPoly::one(2)).unwrap();
    assert_eq!(certify_laurent(&data.power(2)).unwrap(), expected);
}

/// Anticanonical weights at the two extremal points of a rank-one interval model.
fn end_coefficients(data: &FixedPointData) -> (i64, i64) {
    let mut pts: Vec<_> = data.points.iter().collect();
    pts.sort_by(|a, b| a.mu.cmp(&b.mu));
    let c = |i: usize| anticanonical_weight(pts[i]).to_i64().unwrap()[0];
    (c(0), c(pts.len() - 1))
}

#[test]
fn fano_index_at_the_ends_of_an_interval() {
    for (ws, d) in [(vec![(0, 1), (1, 1), (2, 1)], 2i64), (vec![(0, 1), (1, 2), (2, 1)], 3)] {
        let (lo, hi) = end_coefficients(&projective_space_data(&ws).unwrap());
        assert_eq!((lo.abs(), hi.abs()), (d + 1, d + 1), "P^{d}");
        assert_eq!(lo, -hi);
    }
    let (lo, hi) = end_coefficients(&quadric_threefold_with_conic());
    assert_eq!((lo.abs(), hi.abs()), (3, 3), "Q^3");
    assert_eq!(lo, -hi);
}

fn weight_list() -> impl Strategy<Value = Vec<(i64, u32)>> {
    prop::collection::btree_map(-6i64..=6, 1u32..=2, 2..6).prop_map(|m| m.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// The character of `P(⊕ V_i)` lists the coordinate weights, and its square power their symmetric square.
    #[test]
    fn projective_space_powers(ws in weight_list()) {
        let data = projective_space_data(&ws).unwrap();
        let chi = certify_laurent(&data).unwrap();
        let expected: Vec<(Vec<i64>, i64)> = ws.iter().map(|&(a, d)| (vec![-a], i64::from(d))).collect();
        prop_assert_eq!(&chi, &LaurentPoly::from_int_terms(1, &expected));
        let n: i64 = ws.iter().map(|&(_, d)| i64::from(d)).sum();
        prop_assert_eq!(dimension_at_identity(&chi), int(n));
        let chi2 = certify_laurent(&data.power(2)).unwrap();
        prop_assert_eq!(dimension_at_identity(&chi2), int(n * (n + 1) / 2));
        prop_assert_eq!(chi2, sym_square(&chi));
    }
}
