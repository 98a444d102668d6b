//! Root systems of the simple types in Bourbaki coordinates, with weight lattices,
//! long/short classification and root polytopes.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polytope::{hull, Polytope};
use crate::weights::{int, rat, Lattice, Rational, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSystemError {
    #[error("{family:?}{rank} is not a simple root system type")]
    InvalidType { family: Family, rank: usize },
    #[error("cannot parse root system type from {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootSystemType {
    pub family: Family,
    pub rank: usize,
}

impl RootSystemType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(RootSystemType { family, rank })
        } else {
            Err(RootSystemError::InvalidType { family, rank })
        }
    }

    /// The type this one coincides with, for the low-rank overlaps `B2 = C2` and `D3 = A3`.
    pub fn alias_of(&self) -> Option<RootSystemType> {
        match (self.family, self.rank) {
            (Family::B, 2) => Some(RootSystemType { family: Family::C, rank: 2 }),
            (Family::D, 3) => Some(RootSystemType { family: Family::A, rank: 3 }),
            _ => None,
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for RootSystemType {
    type Err = RootSystemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RootSystemError::Parse(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().trim_start_matches('_').parse().map_err(|_| bad())?;
        RootSystemType::new(family, rank)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystem {
    #[serde(rename = "type")]
    pub ty: RootSystemType,
    pub ambient_rank: usize,
    pub roots: Vec<Weight>,
    #[serde(rename = "long")]
    pub long_roots: Vec<Weight>,
    #[serde(rename = "short")]
    pub short_roots: Vec<Weight>,
    #[serde(rename = "lattice")]
    pub weight_lattice: Lattice,
    pub alias_of: Option<RootSystemType>,
}

fn pm_pairs(n: usize, range: std::ops::Range<usize>) -> Vec<Weight> {
    let mut out = Vec::new();
    for i in range.clone() {
        for j in range.clone() {
            if i >= j {
                continue;
            }
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![0i64; n];
                v[i] = si;
                v[j] = sj;
                out.push(Weight::from_ints(&v));
            }
        }
    }
    out
}

fn pm_units(n: usize, coeff: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    for i in 0..n {
        for s in [1, -1] {
            let mut v = vec![0i64; n];
            v[i] = s * coeff;
            out.push(Weight::from_ints(&v));
        }
    }
    out
}

/// Half-integer vectors `½(±1, …, ±1)` on the coordinates in `free`, with fixed
/// entries elsewhere, keeping sign patterns whose number of minus signs among
/// `free` has the given parity.
fn half_spin(n: usize, free: &[usize], fixed: &[(usize, i64)], minus_parity: usize) -> Vec<Weight> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << free.len()) {
        if (mask.count_ones() as usize) % 2 != minus_parity {
            continue;
        }
        let mut v = vec![Rational::zero(); n];
        for (k, &i) in free.iter().enumerate() {
            v[i] = if mask & (1 << k) != 0 { rat(-1, 2) } else { rat(1, 2) };
        }
        for &(i, s) in fixed {
            v[i] = rat(s, 2);
        }
        out.push(Weight::new(v));
    }
    out
}

fn with_negatives(v: Vec<Weight>) -> Vec<Weight> {
    let mut out: Vec<Weight> = v.iter().map(|w| -w).collect();
    out.extend(v);
    out
}

/// Builds the standard realization of a simple root system.
pub fn build(ty: RootSystemType) -> Result<RootSystem, RootSystemError> {
    let ty = RootSystemType::new(ty.family, ty.rank)?;
    let r = ty.rank;
    let (ambient, roots, extra_gens): (usize, Vec<Weight>, Vec<Weight>) = match ty.family {
        Family::A => {
            let n = r + 1;
            let mut roots = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        roots.push(&Weight::unit(n, i) - &Weight::unit(n, j));
                    }
                }
            }
            let minuscule = &Weight::unit(n, 0) - &Weight::constant(n, 1, n as i64);
            (n, roots, vec![minuscule])
        }
        Family::B => {
            let mut roots = pm_pairs(r, 0..r);
            roots.extend(pm_units(r, 1));
            (r, roots, vec![Weight::constant(r, 1, 2)])
        }
        Family::C => {
            let mut roots = pm_pairs(r, 0..r);
            roots.extend(pm_units(r, 2));
            (r, roots, (0..r).map(|i| Weight::unit(r, i)).collect())
        }
        Family::D => (r, pm_pairs(r, 0..r), vec![Weight::constant(r, 1, 2), Weight::unit(r, 0)]),
        Family::E => {
            let n = 8;
            match r {
                8 => {
                    let mut roots = pm_pairs(n, 0..8);
                    roots.extend(half_spin(n, &(0..8).collect::<Vec<_>>(), &[], 0));
                    (n, roots, vec![])
                }
                7 => {
                    let mut roots = pm_pairs(n, 0..6);
                    let e78 = &Weight::unit(n, 6) - &Weight::unit(n, 7);
                    roots.push(e78.clone());
                    roots.push(-&e78);
                    let spin = half_spin(n, &(0..6).collect::<Vec<_>>(), &[(6, 1), (7, -1)], 1);
                    roots.extend(with_negatives(spin));
                    let omega7 = &Weight::unit(n, 5) + &e78.scale(&rat(-1, 2));
                    (n, roots, vec![omega7])
                }
                _ => {
                    let mut roots = pm_pairs(n, 0..5);
                    let spin = half_spin(n, &(0..5).collect::<Vec<_>>(), &[(5, -1), (6, -1), (7, 1)], 0);
                    roots.extend(with_negatives(spin));
                    let omega1 = Weight::new(
                        (0..8).map(|i| match i {
                            5 | 6 => rat(-2, 3),
                            7 => rat(2, 3),
                            _ => int(0),
                        })
                        .collect(),
                    );
                    (n, roots, vec![omega1])
                }
            }
        }
        Family::F => {
            let mut roots = pm_pairs(4, 0..4);
            roots.extend(pm_units(4, 1));
            roots.extend(half_spin(4, &[0, 1, 2, 3], &[], 0));
            roots.extend(half_spin(4, &[0, 1, 2, 3], &[], 1));
            (4, roots, vec![])
        }
        Family::G => {
            let n = 3;
            let e = |i: usize| Weight::unit(n, i);
            let mut roots = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        roots.push(&e(i) - &e(j));
                    }
                }
                let others: Vec<usize> = (0..3).filter(|&j| j != i).collect();
                let long = &(&e(i).scale_int(2) - &e(others[0])) - &e(others[1]);
                roots.push(-&long);
                roots.push(long);
            }
            (n, roots, vec![])
        }
    };
    let mut roots = roots;
    roots.sort();
    roots.dedup();
    let max_norm = roots.iter().map(Weight::norm2).max().expect("nonempty root system");
    let (long_roots, short_roots): (Vec<Weight>, Vec<Weight>) = if ty.is_simply_laced() {
        (roots.clone(), vec![])
    } else {
        roots.iter().cloned().partition(|w| w.norm2() == max_norm)
    };
    let mut gens = roots.clone();
    gens.extend(extra_gens);
    let weight_lattice = Lattice::new(ambient, gens).expect("root lattice generators have the ambient rank");
    Ok(RootSystem { ty, ambient_rank: ambient, roots, long_roots, short_roots, weight_lattice, alias_of: ty.alias_of() })
}

/// Convex hull of all roots.
pub fn root_polytope(rs: &RootSystem) -> Polytope {
    hull(&rs.roots).expect("roots share the ambient rank")
}

/// Drops the last coordinate; injective on the sum-zero hyperplane carrying type A.
pub fn flatten_sum_zero(w: &Weight) -> Weight {
    Weight::new(w.coords()[..w.rank() - 1].to_vec())
}

impl RootSystem {
    /// Simple roots for the positive system cut out by a fixed generic functional.
    pub fn simple_roots(&self) -> Vec<Weight> {
        // Functional with rapidly growing rational weights; no root is orthogonal to it.
        let n = self.ambient_rank;
        let f = Weight::new((0..n).map(|i| int(1i64 << (3 * (n - i)) as u32) + rat(1, 3 + i as i64)).collect());
        let positive: Vec<&Weight> = self.roots.iter().filter(|w| w.dot(&f) > Rational::zero()).collect();
        let is_sum = |a: &Weight| positive.iter().any(|b| positive.contains(&&(a - *b)));
        positive.iter().filter(|a| !is_sum(a)).map(|w| (*w).clone()).collect()
    }
}

/// Orthogonal reflection of `x` in the hyperplane perpendicular to `alpha`.
pub fn reflect(alpha: &Weight, x: &Weight) -> Weight {
    let c = x.dot(alpha) * int(2) / alpha.norm2();
    x - &alpha.scale(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::lattice_contains;

    fn sys(s: &str) -> RootSystem {
        build(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn root_counts_match_closed_forms() {
        for r in 1..=7usize {
            assert_eq!(sys(&format!("A{r}")).roots.len(), r * (r + 1));
        }
        for r in 2..=7usize {
            assert_eq!(sys(&format!("B{r}")).roots.len(), 2 * r * r);
            assert_eq!(sys(&format!("C{r}")).roots.len(), 2 * r * r);
        }
        for r in 3..=7usize {
            assert_eq!(sys(&format!("D{r}")).roots.len(), 2 * r * (r - 1));
        }
        assert_eq!(sys("E6").roots.len(), 72);
        assert_eq!(sys("E7").roots.len(), 126);
        assert_eq!(sys("F4").roots.len(), 48);
        assert_eq!(sys("G2").roots.len(), 12);
    }

    #[test]
    fn e8_matches_norm_enumeration() {
        // Independent oracle: all vectors of squared norm 2 in the even unimodular
        // lattice (integer or all-half-integer coordinates, even coordinate sum).
        let mut count = 0;
        let ints = [-1i64, 0, 1];
        fn rec(i: usize, acc: &mut Vec<i64>, out: &mut usize, ints: &[i64]) {
            if i == 8 {
                let n2: i64 = acc.iter().map(|x| x * x).sum();
                let s: i64 = acc.iter().sum();
                if n2 == 2 && s % 2 == 0 {
                    *out += 1;
                }
                return;
            }
            for &x in ints {
                acc.push(x);
                rec(i + 1, acc, out, ints);
                acc.pop();
            }
        }
        rec(0, &mut vec![], &mut count, &ints);
        // Half-integer vectors with entries ±1/2 have norm 2; even sum means even minus count.
        count += (0u32..256).filter(|m| m.count_ones() % 2 == 0).count();
        let e8 = sys("E8");
        assert_eq!(count, 240);
        assert_eq!(e8.roots.len(), count);
        assert!(e8.roots.iter().all(|w| w.norm2() == int(2)));
    }

    #[test]
    fn long_and_short_roots() {
        let a2 = sys("A2");
        assert_eq!(a2.long_roots.len(), 6);
        assert!(a2.short_roots.is_empty());
        let b3 = sys("B3");
        assert_eq!((b3.long_roots.len(), b3.short_roots.len()), (12, 6));
        let c3 = sys("C3");
        assert_eq!(c3.long_roots.len(), 6);
        assert!(c3.long_roots.iter().all(|w| w.norm2() == int(4)));
        let g2 = sys("G2");
        assert_eq!((g2.long_roots.len(), g2.short_roots.len()), (6, 6));
        let f4 = sys("F4");
        assert_eq!((f4.long_roots.len(), f4.short_roots.len()), (24, 24));
    }

    #[test]
    fn roots_closed_under_negation_and_in_lattice() {
        for name in ["A1", "A3", "B2", "B4", "C3", "D3", "D5", "E6", "E7", "E8", "F4", "G2"] {
            let rs = sys(name);
            for w in &rs.roots {
                assert!(rs.roots.contains(&-w), "{name}: {w}");
                assert!(lattice_contains(&rs.weight_lattice, w).unwrap());
            }
            assert_eq!(rs.long_roots.len() + rs.short_roots.len(), rs.roots.len());
        }
    }

    #[test]
    fn weight_lattice_generators() {
        let a3 = sys("A3");
        let half = Weight::from_fracs(&[(1, 2), (1, 2), (-1, 2), (-1, 2)]);
        assert!(lattice_contains(&a3.weight_lattice, &half).unwrap());
        let b3 = sys("B3");
        assert!(lattice_contains(&b3.weight_lattice, &Weight::constant(3, 1, 2)).unwrap());
        let c3 = sys("C3");
        assert!(!lattice_contains(&c3.weight_lattice, &Weight::constant(3, 1, 2)).unwrap());
        let e7 = sys("E7");
        assert!(!e7.roots.iter().any(|w| *w == e7.weight_lattice.generators[126]));
    }

    #[test]
    fn aliases_and_invalid_types() {
        assert_eq!(sys("B2").alias_of, Some("C2".parse().unwrap()));
        assert_eq!(sys("D3").alias_of, Some("A3".parse().unwrap()));
        assert_eq!(sys("B3").alias_of, None);
        assert!("E9".parse::<RootSystemType>().is_err());
        assert!("F3".parse::<RootSystemType>().is_err());
        assert!("D2".parse::<RootSystemType>().is_err());
        assert!("X2".parse::<RootSystemType>().is_err());
    }

    #[test]
    fn simple_roots_and_reflections_preserve_roots() {
        for (name, rank) in [("A3", 3), ("B3", 3), ("C3", 3), ("D4", 4), ("G2", 2), ("F4", 4), ("E6", 6)] {
            let rs = sys(name);
            let simple = rs.simple_roots();
            assert_eq!(simple.len(), rank, "{name}");
            let mut sorted = rs.roots.clone();
            sorted.sort();
            for a in &simple {
                let mut img: Vec<Weight> = rs.roots.iter().map(|x| reflect(a, x)).collect();
                img.sort();
                assert_eq!(img, sorted, "{name}");
            }
        }
    }

    #[test]
    fn json_schema_fields() {
        let v = serde_json::to_value(sys("B3")).unwrap();
        for key in ["type", "roots", "long", "short", "lattice"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
