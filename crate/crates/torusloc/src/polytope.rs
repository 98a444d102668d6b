//! Exact polytope engine: convex hulls by double description, faces, edges at a
//! vertex, tangent cones and lattice-point enumeration.
//!
//! Hull computations run on integer coordinates: the input is scaled by the
//! common denominator of all coordinates and projected to a coordinate subset on
//! which the affine hull maps injectively. All arithmetic is checked `i128`;
//! an overflow is reported as an error, never wrapped.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::weights::{
    primitive_direction, scaled_integer_coords, IntLattice, Lattice, Rational, Weight, WeightError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("no points given")]
    Empty,
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("{0} is not a vertex of the polytope")]
    NotAVertex(String),
    #[error("integer overflow during exact polytope arithmetic")]
    Overflow,
    #[error("the zero vector does not define a supporting hyperplane")]
    ZeroNormal,
}

/// A linear inequality `normal · x <= offset` (or equality, in an affine hull).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Weight,
    #[serde(with = "crate::weights::rational_serde")]
    pub offset: Rational,
}

impl Halfspace {
    pub fn value(&self, x: &Weight) -> Rational {
        self.normal.dot(x)
    }
    pub fn satisfied_by(&self, x: &Weight) -> bool {
        self.value(x) <= self.offset
    }
    pub fn tight_at(&self, x: &Weight) -> bool {
        self.value(x) == self.offset
    }
}

/// Bounded polytope with matching vertex and facet descriptions.
///
/// `equations` cut out the affine hull when the polytope is not full-dimensional;
/// each facet normal is then supported on the coordinates used for the intrinsic
/// hull computation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Polytope {
    pub ambient_rank: usize,
    pub vertices: Vec<Weight>,
    pub facets: Vec<Halfspace>,
    pub equations: Vec<Halfspace>,
    #[serde(skip)]
    geometry: Geometry,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank
            && self.vertices == other.vertices
            && self.facets == other.facets
            && self.equations == other.equations
    }
}

/// Integer data retained from the hull computation for incidence queries.
#[derive(Clone, Debug, Default)]
struct Geometry {
    dim: usize,
    /// Facet normals in the intrinsic integer coordinates.
    int_normals: Vec<Vec<i128>>,
    /// For each vertex, the indices of the facets containing it.
    vertex_facets: Vec<Vec<usize>>,
}

/// A face singled out by a supporting functional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub normal: Weight,
    #[serde(with = "crate::weights::rational_serde")]
    pub offset: Rational,
    pub vertex_indices: Vec<usize>,
    pub vertices: Vec<Weight>,
}

impl Face {
    /// The face as a polytope in its own right.
    pub fn polytope(&self) -> Polytope {
        hull(&self.vertices).expect("a face has at least one vertex")
    }
}

/// A polyhedral cone with apex, in both descriptions.
///
/// Membership: `n · (x − apex) <= 0` for every inequality normal and `= 0` for every
/// equation normal. Generators are primitive integer directions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    pub apex: Weight,
    pub generators: Vec<Weight>,
    pub inequalities: Vec<Weight>,
    pub equations: Vec<Weight>,
}

impl Cone {
    pub fn contains(&self, x: &Weight) -> bool {
        let d = x - &self.apex;
        self.inequalities.iter().all(|n| n.dot(&d) <= Rational::zero())
            && self.equations.iter().all(|n| n.dot(&d).is_zero())
    }

    /// The image under `x ↦ −x`.
    pub fn negated(&self) -> Cone {
        Cone {
            apex: -&self.apex,
            generators: self.generators.iter().map(|g| -g).collect(),
            inequalities: self.inequalities.iter().map(|n| -n).collect(),
            equations: self.equations.clone(),
        }
    }

    /// The image under `x ↦ x + shift`.
    pub fn translated(&self, shift: &Weight) -> Cone {
        Cone { apex: &self.apex + shift, ..self.clone() }
    }
}

/// Axis-parallel box `lo <= x <= hi` bounding a lattice search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lo: Weight,
    pub hi: Weight,
}

impl BoundingBox {
    pub fn cube(rank: usize, radius: i64) -> Self {
        BoundingBox { lo: Weight::constant(rank, -radius, 1), hi: Weight::constant(rank, radius, 1) }
    }
}

fn ck(x: Option<i128>) -> Result<i128, PolytopeError> {
    x.ok_or(PolytopeError::Overflow)
}

fn gcd_vec(v: &[i128]) -> i128 {
    v.iter().fold(0i128, |g, &x| g.gcd(&x))
}

fn make_primitive(v: &mut [i128]) {
    let g = gcd_vec(v);
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

/// Rank of a set of integer rows by fraction-free elimination.
fn int_rank(mut rows: Vec<Vec<i128>>) -> Result<usize, PolytopeError> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in rows.iter_mut().skip(rank + 1) {
            let f = r[col];
            if f == 0 {
                continue;
            }
            for c in col..ncols {
                r[c] = ck(ck(r[c].checked_mul(pivot[col]))?.checked_sub(ck(f.checked_mul(pivot[c]))?))?;
            }
            make_primitive(r);
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    Ok(rank)
}

/// Fixed-size bitset over input constraint indices.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            (0..64).filter(move |b| w & (1u64 << b) != 0).map(move |b| k * 64 + b)
        })
    }
}

struct Ray {
    z: Vec<i128>,
    zeros: Bits,
}

/// Facets `a · q <= b` of the convex hull of full-dimensional integer points in `Z^k`.
///
/// Double description on the homogenized polar cone `{(b, a) : b − a·q_i >= 0}`:
/// constraints are inserted in input order and new rays are created only from
/// adjacent pairs, adjacency decided by the rank of the common active constraints.
fn dd_facets(points: &[Vec<i128>], k: usize) -> Result<Vec<(Vec<i128>, i128)>, PolytopeError> {
    let m = points.len();
    let rows: Vec<Vec<i128>> = points
        .iter()
        .map(|q| std::iter::once(1).chain(q.iter().map(|x| -x)).collect())
        .collect();
    let dim = k + 1;
    // Greedy choice of dim linearly independent rows.
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut trial: Vec<Vec<i128>> = basis.iter().map(|&j| rows[j].clone()).collect();
        trial.push(rows[i].clone());
        if int_rank(trial)? == basis.len() + 1 {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    debug_assert_eq!(basis.len(), dim, "points must affinely span");
    // Initial rays: columns of the inverse of the basis matrix.
    let a0: Vec<Vec<Rational>> = basis
        .iter()
        .map(|&i| rows[i].iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
        .collect();
    let inv = rational_inverse(&a0);
    let mut rays: Vec<Ray> = Vec::with_capacity(dim);
    for j in 0..dim {
        let col: Vec<Rational> = (0..dim).map(|i| inv[i][j].clone()).collect();
        let l = col.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut z: Vec<i128> = col
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer().to_i128().ok_or(PolytopeError::Overflow))
            .collect::<Result<_, _>>()?;
        make_primitive(&mut z);
        let mut zeros = Bits::new(m);
        for (pos, &bi) in basis.iter().enumerate() {
            if pos != j {
                zeros.set(bi);
            }
        }
        rays.push(Ray { z, zeros });
    }
    let in_basis: Vec<bool> = (0..m).map(|i| basis.contains(&i)).collect();
    for h in 0..m {
        if in_basis[h] {
            continue;
        }
        let row = &rows[h];
        let mut vals = Vec::with_capacity(rays.len());
        for r in &rays {
            let mut s: i128 = 0;
            for (a, b) in row.iter().zip(&r.z) {
                s = ck(s.checked_add(ck(a.checked_mul(*b))?))?;
            }
            vals.push(s);
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        if neg.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                if vals[i] == 0 {
                    r.zeros.set(h);
                }
            }
            continue;
        }
        let mut new_rays: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.and(&rays[n].zeros);
                if (common.count() as usize) < dim - 2 {
                    continue;
                }
                let active: Vec<Vec<i128>> = common.iter().map(|i| rows[i].clone()).collect();
                if int_rank(active)? != dim - 2 {
                    continue;
                }
                let (sp, sn) = (vals[p], -vals[n]);
                let mut z = Vec::with_capacity(dim);
                for (a, b) in rays[n].z.iter().zip(&rays[p].z) {
                    z.push(ck(ck(sp.checked_mul(*a))?.checked_add(ck(sn.checked_mul(*b))?))?);
                }
                make_primitive(&mut z);
                let mut zeros = common;
                zeros.set(h);
                new_rays.push(Ray { z, zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(pos.len() + new_rays.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            match vals[i].cmp(&0) {
                Ordering::Greater => kept.push(r),
                Ordering::Equal => {
                    r.zeros.set(h);
                    kept.push(r);
                }
                Ordering::Less => {}
            }
        }
        kept.extend(new_rays);
        rays = kept;
    }
    Ok(rays.into_iter().map(|r| (r.z[1..].to_vec(), r.z[0])).collect())
}

fn rational_inverse(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero()).expect("invertible basis matrix");
        m.swap(col, p);
        let pv = m[col][col].clone();
        for c in 0..2 * n {
            m[col][c] = &m[col][c] / &pv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for c in 0..2 * n {
                    let t = &f * &m[col][c];
                    m[i][c] -= t;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Reduced row echelon form of rational rows; returns the nonzero rows and pivot columns.
fn rref(mut rows: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let pv = rows[r][col].clone();
        for c in 0..ncols {
            rows[r][c] = &rows[r][c] / &pv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in 0..ncols {
                    let t = &f * &rows[r][c];
                    rows[i][c] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn big_to_rational(x: i128) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// Scales a rational normal to a primitive integer vector, adjusting the offset.
fn normalize_halfspace(normal: Weight, offset: Rational) -> Halfspace {
    let l = normal.denominator_lcm();
    let scaled = normal.scale(&Rational::from_integer(l.clone()));
    let g = scaled.coords().iter().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
    let factor = Rational::new(l, g);
    Halfspace { normal: normal.scale(&factor), offset: offset * factor }
}

/// Convex hull of a finite point set, with irredundant facets and minimal vertex set.
pub fn hull(points: &[Weight]) -> Result<Polytope, PolytopeError> {
    let first = points.first().ok_or(PolytopeError::Empty)?;
    let n = first.rank();
    for p in points {
        p.check_rank(n)?;
    }
    let mut pts: Vec<Weight> = points.to_vec();
    pts.sort();
    pts.dedup();
    let scale_big = pts.iter().fold(BigInt::one(), |acc, p| acc.lcm(&p.denominator_lcm()));
    let scale = scale_big.to_i128().ok_or(PolytopeError::Overflow)?;
    let ipts: Vec<Vec<i128>> = pts.iter().map(|p| scaled_integer_coords(p, scale)).collect::<Result<_, _>>()?;

    // Affine hull: directions from the first point, in reduced echelon form.
    let diffs: Vec<Vec<Rational>> = ipts[1..]
        .iter()
        .map(|q| q.iter().zip(&ipts[0]).map(|(a, b)| big_to_rational(a - b)).collect())
        .collect();
    let (echelon, pivots) = if diffs.is_empty() { (vec![], vec![]) } else { rref(diffs) };
    let k = pivots.len();
    let scale_q = big_to_rational(scale);
    let base = &pts[0];
    let mut equations = Vec::new();
    for j in (0..n).filter(|j| !pivots.contains(j)) {
        // x_j − Σ_c E[c][j] x_{pivot c} is constant on the affine hull.
        let mut normal = vec![Rational::zero(); n];
        normal[j] = Rational::one();
        for (c, &pc) in pivots.iter().enumerate() {
            normal[pc] = -echelon[c][j].clone();
        }
        let normal = Weight::new(normal);
        let offset = normal.dot(base);
        equations.push(normalize_halfspace(normal, offset));
    }
    equations.sort();

    if k == 0 {
        return Ok(Polytope {
            ambient_rank: n,
            vertices: vec![base.clone()],
            facets: vec![],
            equations,
            geometry: Geometry { dim: 0, int_normals: vec![], vertex_facets: vec![vec![]] },
        });
    }

    let proj: Vec<Vec<i128>> = ipts.iter().map(|q| pivots.iter().map(|&c| q[c]).collect()).collect();
    let raw = dd_facets(&proj, k)?;
    let mut facets: Vec<(Halfspace, Vec<i128>)> = raw
        .into_iter()
        .map(|(a, b)| {
            let mut normal = vec![Rational::zero(); n];
            for (c, &pc) in pivots.iter().enumerate() {
                normal[pc] = big_to_rational(a[c]);
            }
            let hs = normalize_halfspace(Weight::new(normal), big_to_rational(b) / &scale_q);
            (hs, a)
        })
        .collect();
    facets.sort_by(|x, y| x.0.cmp(&y.0));
    facets.dedup_by(|x, y| x.0 == y.0);

    // Vertices: input points whose tight facets have full rank k.
    let raw_offsets: Vec<i128> = facets_raw_offsets(&facets, &proj)?;
    let mut vertices = Vec::new();
    let mut vertex_facets = Vec::new();
    for (p, q) in pts.iter().zip(&proj) {
        let mut tight: Vec<usize> = Vec::new();
        for (f, (_, a)) in facets.iter().enumerate() {
            if dot_i128(a, q)? == raw_offsets[f] {
                tight.push(f);
            }
        }
        let normals: Vec<Vec<i128>> = tight.iter().map(|&f| facets[f].1.clone()).collect();
        if int_rank(normals)? == k {
            vertices.push(p.clone());
            vertex_facets.push(tight);
        }
    }
    let int_normals = facets.iter().map(|f| f.1.clone()).collect();
    Ok(Polytope {
        ambient_rank: n,
        vertices,
        facets: facets.into_iter().map(|f| f.0).collect(),
        equations,
        geometry: Geometry { dim: k, int_normals, vertex_facets },
    })
}

fn dot_i128(a: &[i128], b: &[i128]) -> Result<i128, PolytopeError> {
    let mut s: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        s = ck(s.checked_add(ck(x.checked_mul(*y))?))?;
    }
    Ok(s)
}

/// Offsets of the integer facet normals, read off as the maximum over the points.
fn facets_raw_offsets(facets: &[(Halfspace, Vec<i128>)], proj: &[Vec<i128>]) -> Result<Vec<i128>, PolytopeError> {
    facets
        .iter()
        .map(|(_, a)| {
            let mut best: Option<i128> = None;
            for q in proj {
                let v = dot_i128(a, q)?;
                best = Some(best.map_or(v, |b| b.max(v)));
            }
            Ok(best.expect("nonempty point set"))
        })
        .collect()
}

impl Polytope {
    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.geometry.dim
    }

    pub fn contains(&self, x: &Weight) -> bool {
        x.rank() == self.ambient_rank
            && self.equations.iter().all(|e| e.tight_at(x))
            && self.facets.iter().all(|f| f.satisfied_by(x))
    }

    pub fn vertex_index(&self, v: &Weight) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    /// Indices of the facets containing vertex `v`.
    pub fn facets_at(&self, v: &Weight) -> Result<&[usize], PolytopeError> {
        let i = self.vertex_index(v).ok_or_else(|| PolytopeError::NotAVertex(v.to_string()))?;
        Ok(&self.geometry.vertex_facets[i])
    }

    /// Indices of the vertices lying on facet `f`.
    pub fn facet_vertices(&self, f: usize) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.geometry.vertex_facets[v].contains(&f)).collect()
    }

    /// The dilation `m · P`.
    pub fn dilate(&self, m: i64) -> Result<Polytope, PolytopeError> {
        hull(&self.vertices.iter().map(|v| v.scale_int(m)).collect::<Vec<_>>())
    }

    /// Whether vertices `i` and `j` span an edge.
    fn is_edge(&self, i: usize, j: usize) -> Result<bool, PolytopeError> {
        let fj = &self.geometry.vertex_facets[j];
        let common: Vec<Vec<i128>> = self.geometry.vertex_facets[i]
            .iter()
            .filter(|f| fj.binary_search(f).is_ok())
            .map(|&f| self.geometry.int_normals[f].clone())
            .collect();
        if self.dim() == 1 {
            return Ok(true);
        }
        if common.len() + 1 < self.dim() {
            return Ok(false);
        }
        Ok(int_rank(common)? + 1 == self.dim())
    }

    /// Vertices joined to `v` by an edge.
    pub fn neighbors(&self, v: &Weight) -> Result<Vec<Weight>, PolytopeError> {
        let i = self.vertex_index(v).ok_or_else(|| PolytopeError::NotAVertex(v.to_string()))?;
        let mut out = Vec::new();
        for j in 0..self.vertices.len() {
            if j != i && self.is_edge(i, j)? {
                out.push(self.vertices[j].clone());
            }
        }
        Ok(out)
    }
}

/// Primitive directions of the edges leaving vertex `v`, sorted.
pub fn edges_at_vertex(p: &Polytope, v: &Weight) -> Result<Vec<Weight>, PolytopeError> {
    let mut dirs = p
        .neighbors(v)?
        .iter()
        .map(|w| primitive_direction(&(w - v)))
        .collect::<Result<Vec<_>, _>>()?;
    dirs.sort();
    Ok(dirs)
}

/// All points of `l` inside `p`.
pub fn lattice_points(p: &Polytope, l: &Lattice) -> Result<Vec<Weight>, PolytopeError> {
    let n = p.ambient_rank;
    let lo = Weight::new((0..n).map(|i| p.vertices.iter().map(|v| v.coord(i).clone()).min().unwrap()).collect());
    let hi = Weight::new((0..n).map(|i| p.vertices.iter().map(|v| v.coord(i).clone()).max().unwrap()).collect());
    enumerate_box(l, &BoundingBox { lo, hi }, |x| p.contains(x))
}

/// Lattice points of `l` in the box satisfying `keep`, in lexicographic order.
pub fn enumerate_box(
    l: &Lattice,
    bound: &BoundingBox,
    keep: impl Fn(&Weight) -> bool,
) -> Result<Vec<Weight>, PolytopeError> {
    let lat = l.echelon()?;
    bound.lo.check_rank(lat.ambient)?;
    bound.hi.check_rank(lat.ambient)?;
    let s = big_to_rational(lat.scale);
    let lo: Vec<i128> = bound
        .lo
        .coords()
        .iter()
        .map(|c| (c * &s).ceil().to_integer().to_i128().ok_or(PolytopeError::Overflow))
        .collect::<Result<_, _>>()?;
    let hi: Vec<i128> = bound
        .hi
        .coords()
        .iter()
        .map(|c| (c * &s).floor().to_integer().to_i128().ok_or(PolytopeError::Overflow))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    let mut partial = vec![0i128; lat.ambient];
    enumerate_rec(&lat, &lo, &hi, 0, 0, &mut partial, &mut |x| {
        let w = lat.unscale(x);
        if keep(&w) {
            out.push(w);
        }
    });
    out.sort();
    Ok(out)
}

fn enumerate_rec(
    lat: &IntLattice,
    lo: &[i128],
    hi: &[i128],
    row: usize,
    first_col: usize,
    partial: &mut Vec<i128>,
    emit: &mut dyn FnMut(&[i128]),
) {
    // Columns before the next pivot are final once rows < `row` are chosen.
    let stop = lat.pivots.get(row).copied().unwrap_or(lat.ambient);
    for c in first_col..stop {
        if partial[c] < lo[c] || partial[c] > hi[c] {
            return;
        }
    }
    if row == lat.rows.len() {
        emit(partial);
        return;
    }
    let pc = stop;
    let b = &lat.rows[row];
    let step = b[pc];
    let cmin = Integer::div_ceil(&(lo[pc] - partial[pc]), &step);
    let cmax = Integer::div_floor(&(hi[pc] - partial[pc]), &step);
    for c in cmin..=cmax {
        for j in pc..lat.ambient {
            partial[j] += c * b[j];
        }
        enumerate_rec(lat, lo, hi, row + 1, pc, partial, emit);
        for j in pc..lat.ambient {
            partial[j] -= c * b[j];
        }
    }
}

/// The cone `R≥0 (P − v)` at a vertex.
pub fn tangent_cone(p: &Polytope, v: &Weight) -> Result<Cone, PolytopeError> {
    let facets = p.facets_at(v)?;
    let inequalities = facets.iter().map(|&f| p.facets[f].normal.clone()).collect();
    let equations = p.equations.iter().map(|e| e.normal.clone()).collect();
    Ok(Cone { apex: Weight::zero(p.ambient_rank), generators: edges_at_vertex(p, v)?, inequalities, equations })
}

/// Lattice points lying in both cones and in the box.
pub fn cone_intersect_lattice(c1: &Cone, c2: &Cone, l: &Lattice, bound: &BoundingBox) -> Result<Vec<Weight>, PolytopeError> {
    enumerate_box(l, bound, |x| c1.contains(x) && c2.contains(x))
}

/// The face of `p` on which `normal` attains its maximum.
pub fn face_by_support(p: &Polytope, normal: &Weight) -> Result<Face, PolytopeError> {
    normal.check_rank(p.ambient_rank)?;
    if normal.is_zero() {
        return Err(PolytopeError::ZeroNormal);
    }
    let offset = p.vertices.iter().map(|v| normal.dot(v)).max().expect("nonempty polytope");
    let vertex_indices: Vec<usize> = (0..p.vertices.len()).filter(|&i| normal.dot(&p.vertices[i]) == offset).collect();
    let vertices = vertex_indices.iter().map(|&i| p.vertices[i].clone()).collect();
    Ok(Face { normal: normal.clone(), offset, vertex_indices, vertices })
}

/// `σ ∩ (−v − σ)` for the tangent cone `σ` at `v`, excluding `0` and `−v`.
///
/// These are the admissible nonzero compass entries at a vertex of a contact
/// polytope besides the distinguished entry `−v`.
pub fn compass_candidates(p: &Polytope, v: &Weight, l: &Lattice, bound: &BoundingBox) -> Result<Vec<Weight>, PolytopeError> {
    let sigma = tangent_cone(p, v)?;
    let dual = sigma.negated().translated(&-v);
    let minus_v = -v;
    let mut pts = cone_intersect_lattice(&sigma, &dual, l, bound)?;
    pts.retain(|x| !x.is_zero() && *x != minus_v);
    Ok(pts)
}
