//! Rational weight vectors, weight lattices, lattice projections and
//! unimodular changes of basis.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational number, always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Builds the rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational, WeightError> {
    let s = s.trim();
    let bad = || WeightError::Parse(s.to_string());
    match s.split_once('/') {
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Serde adapter writing a [`Rational`] as a `"p/q"` string.
pub mod rational_serde {
    use super::{fmt_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("dimension mismatch: expected rank {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the zero vector has no primitive direction")]
    ZeroVector,
    #[error("weight {0} is not integral")]
    NotIntegral(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("projection matrix does not annihilate kernel vector {0}")]
    KernelNotAnnihilated(String),
    #[error("integer overflow in exact lattice arithmetic")]
    Overflow,
    #[error("lattice needs at least one generator and positive rank")]
    EmptyLattice,
}

/// A vector of rational coordinates in a fixed ambient rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    coords: Vec<Rational>,
}

impl Weight {
    pub fn new(coords: Vec<Rational>) -> Self {
        Weight { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Weight { coords: vec![Rational::zero(); rank] }
    }

    /// The standard basis vector `e_i` of the given rank.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut w = Weight::zero(rank);
        w.coords[i] = Rational::one();
        w
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Weight { coords: xs.iter().map(|&x| int(x)).collect() }
    }

    /// Coordinates given as `(numerator, denominator)` pairs.
    pub fn from_fracs(xs: &[(i64, i64)]) -> Self {
        Weight { coords: xs.iter().map(|&(n, d)| rat(n, d)).collect() }
    }

    /// Every coordinate equal to `num/den`.
    pub fn constant(rank: usize, num: i64, den: i64) -> Self {
        Weight { coords: vec![rat(num, den); rank] }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(Rational::is_integer)
    }

    /// Integer coordinates, if integral and representable in `i64`.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| if c.is_integer() { c.numer().to_i64() } else { None })
            .collect()
    }

    pub fn check_rank(&self, rank: usize) -> Result<(), WeightError> {
        if self.rank() == rank {
            Ok(())
        } else {
            Err(WeightError::DimensionMismatch { expected: rank, found: self.rank() })
        }
    }

    /// Standard inner product.
    pub fn dot(&self, other: &Weight) -> Rational {
        assert_eq!(self.rank(), other.rank(), "dot product of weights of different rank");
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, c: &Rational) -> Weight {
        Weight { coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn scale_int(&self, c: i64) -> Weight {
        self.scale(&int(c))
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// True when `self` is a positive rational multiple of `other`.
    pub fn is_positive_multiple_of(&self, other: &Weight) -> bool {
        if self.rank() != other.rank() || other.is_zero() {
            return false;
        }
        let i = other.coords.iter().position(|c| !c.is_zero()).unwrap();
        let lambda = &self.coords[i] / &other.coords[i];
        lambda.is_positive() && other.scale(&lambda) == *self
    }

    /// True when `self` and `other` span the same line through the origin.
    pub fn is_parallel_to(&self, other: &Weight) -> bool {
        self.is_positive_multiple_of(other) || self.is_positive_multiple_of(&-other)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", fmt_rational(c))?;
        }
        write!(f, ")")
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coords.iter().map(fmt_rational).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Entry {
            Int(i64),
            Str(String),
        }
        let entries = Vec::<Entry>::deserialize(d)?;
        let coords = entries
            .into_iter()
            .map(|e| match e {
                Entry::Int(n) => Ok(int(n)),
                Entry::Str(s) => parse_rational(&s),
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Weight { coords })
    }
}

impl<'a> Add<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.rank(), rhs.rank(), "adding weights of different rank");
        Weight { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        assert_eq!(self.rank(), rhs.rank(), "adding weights of different rank");
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
    }
}

impl<'a> Sub<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.rank(), rhs.rank(), "subtracting weights of different rank");
        Weight { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        &self - &rhs
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight { coords: self.coords.iter().map(|a| -a).collect() }
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        -&self
    }
}

impl Mul<&Weight> for &Rational {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        rhs.scale(self)
    }
}

/// Divides an integral nonzero weight by the gcd of its coordinates.
pub fn primitive_part(v: &Weight) -> Result<Weight, WeightError> {
    if !v.is_integral() {
        return Err(WeightError::NotIntegral(v.to_string()));
    }
    if v.is_zero() {
        return Err(WeightError::ZeroVector);
    }
    let g = v.coords.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
    Ok(v.scale(&Rational::new(BigInt::one(), g)))
}

/// Smallest positive multiple of `v` with coprime integer coordinates.
/// Accepts rational input; the direction is preserved.
pub fn primitive_direction(v: &Weight) -> Result<Weight, WeightError> {
    if v.is_zero() {
        return Err(WeightError::ZeroVector);
    }
    let l = v.denominator_lcm();
    primitive_part(&v.scale(&Rational::from_integer(l)))
}

/// Square integer matrix stored row-major.
pub type IntMatrix = Vec<Vec<i64>>;

/// Applies an integer matrix to an integer vector.
pub fn mat_vec(m: &IntMatrix, v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Exact determinant of an integer matrix (Bareiss elimination).
pub fn int_det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> =
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    // Returns (g, x, y) with a*x + b*y = g >= 0.
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// A unimodular matrix together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unimodular {
    pub forward: IntMatrix,
    pub inverse: IntMatrix,
}

/// Finds a unimodular `U` with `U · primitive_part(v) = e_1`.
pub fn unimodular_to_axis(v: &Weight) -> Result<IntMatrix, WeightError> {
    Ok(unimodular_pair_to_axis(v)?.forward)
}

/// As [`unimodular_to_axis`], also returning `U⁻¹`.
pub fn unimodular_pair_to_axis(v: &Weight) -> Result<Unimodular, WeightError> {
    let p = primitive_part(v)?;
    let mut w = p.to_i64().ok_or(WeightError::Overflow)?;
    let n = w.len();
    let mut fwd: IntMatrix = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut inv = fwd.clone();
    // Fold coordinates from the back into position 0 with 2x2 unimodular steps.
    for i in (1..n).rev() {
        let (a, b) = (w[i - 1], w[i]);
        if b == 0 {
            continue;
        }
        let (g, x, y) = ext_gcd(a, b);
        let (c, d) = (-b / g, a / g);
        // Row operation R = [[x, y], [c, d]] with det x*d - y*c = (a x + b y)/g = 1.
        for col in 0..n {
            let (r0, r1) = (fwd[i - 1][col], fwd[i][col]);
            fwd[i - 1][col] = x * r0 + y * r1;
            fwd[i][col] = c * r0 + d * r1;
        }
        // Inverse of R is [[d, -y], [-c, x]], applied as a column operation on the right.
        for row in inv.iter_mut() {
            let (c0, c1) = (row[i - 1], row[i]);
            row[i - 1] = c0 * d - c1 * c;
            row[i] = -c0 * y + c1 * x;
        }
        w[i - 1] = g;
        w[i] = 0;
    }
    if w[0] < 0 {
        for col in 0..n {
            fwd[0][col] = -fwd[0][col];
        }
        for row in inv.iter_mut() {
            row[0] = -row[0];
        }
    }
    Ok(Unimodular { forward: fwd, inverse: inv })
}

/// A lattice given by integer combinations of generator weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub rank: usize,
    pub generators: Vec<Weight>,
}

impl Lattice {
    pub fn new(rank: usize, generators: Vec<Weight>) -> Result<Self, WeightError> {
        if rank == 0 || generators.is_empty() {
            return Err(WeightError::EmptyLattice);
        }
        for g in &generators {
            g.check_rank(rank)?;
        }
        Ok(Lattice { rank, generators })
    }

    /// The standard lattice `Z^r`.
    pub fn standard(rank: usize) -> Self {
        Lattice { rank, generators: (0..rank).map(|i| Weight::unit(rank, i)).collect() }
    }

    /// `Z^r + Z·w0`, the translated-lattice presentation used for B/D weight lattices.
    pub fn standard_plus(rank: usize, w0: Weight) -> Self {
        let mut l = Lattice::standard(rank);
        l.generators.push(w0);
        l
    }

    /// Integer echelon basis of the lattice in coordinates scaled by a common denominator.
    pub fn echelon(&self) -> Result<IntLattice, WeightError> {
        IntLattice::from_generators(self.rank, &self.generators)
    }

    /// Rank of the subgroup spanned by the generators.
    pub fn intrinsic_rank(&self) -> Result<usize, WeightError> {
        Ok(self.echelon()?.rows.len())
    }
}

/// Decides whether `w` is an integer combination of the generators of `l`.
pub fn lattice_contains(l: &Lattice, w: &Weight) -> Result<bool, WeightError> {
    w.check_rank(l.rank)?;
    l.echelon()?.contains(w)
}

/// A lattice in scaled integer coordinates, stored as a row echelon basis.
///
/// A weight `w` belongs to the lattice iff `scale · w` is integral and lies in the
/// row span of `rows` over the integers. Each row `i` has its first nonzero entry
/// (positive) in column `pivots[i]`, and pivots strictly increase.
#[derive(Clone, Debug)]
pub struct IntLattice {
    pub scale: i128,
    pub ambient: usize,
    pub rows: Vec<Vec<i128>>,
    pub pivots: Vec<usize>,
}

fn checked(x: Option<i128>) -> Result<i128, WeightError> {
    x.ok_or(WeightError::Overflow)
}

impl IntLattice {
    pub fn from_generators(ambient: usize, gens: &[Weight]) -> Result<Self, WeightError> {
        let scale_big = gens.iter().fold(BigInt::one(), |acc, g| acc.lcm(&g.denominator_lcm()));
        let scale = scale_big.to_i128().ok_or(WeightError::Overflow)?;
        let mut rows: Vec<Vec<i128>> = Vec::with_capacity(gens.len());
        for g in gens {
            g.check_rank(ambient)?;
            rows.push(scaled_integer_coords(g, scale)?);
        }
        let mut basis = Vec::new();
        let mut pivots = Vec::new();
        let mut active = rows;
        for col in 0..ambient {
            // Euclid on column `col` across the active rows.
            loop {
                let nonzero: Vec<usize> = (0..active.len()).filter(|&i| active[i][col] != 0).collect();
                if nonzero.len() <= 1 {
                    break;
                }
                let piv = *nonzero.iter().min_by_key(|&&i| active[i][col].abs()).unwrap();
                let pv = active[piv][col];
                for &i in &nonzero {
                    if i == piv {
                        continue;
                    }
                    let q = active[i][col].div_euclid(pv);
                    for c in 0..ambient {
                        let sub = checked(q.checked_mul(active[piv][c]))?;
                        active[i][c] = checked(active[i][c].checked_sub(sub))?;
                    }
                }
            }
            if let Some(i) = (0..active.len()).find(|&i| active[i][col] != 0) {
                let mut row = active.swap_remove(i);
                if row[col] < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                // Reduce earlier rows in this column to keep entries small.
                for prev in basis.iter_mut() {
                    let prev: &mut Vec<i128> = prev;
                    let q = prev[col].div_euclid(row[col]);
                    if q != 0 {
                        for c in 0..ambient {
                            let sub = checked(q.checked_mul(row[c]))?;
                            prev[c] = checked(prev[c].checked_sub(sub))?;
                        }
                    }
                }
                basis.push(row);
                pivots.push(col);
            }
            active.retain(|r| r.iter().any(|&x| x != 0));
        }
        Ok(IntLattice { scale, ambient, rows: basis, pivots })
    }

    /// Membership for an already scaled integer vector.
    pub fn contains_scaled(&self, x: &[i128]) -> bool {
        let mut r = x.to_vec();
        let mut p = 0;
        for col in 0..self.ambient {
            if p < self.pivots.len() && self.pivots[p] == col {
                let row = &self.rows[p];
                if r[col] % row[col] != 0 {
                    return false;
                }
                let q = r[col] / row[col];
                for c in col..self.ambient {
                    r[c] -= q * row[c];
                }
                p += 1;
            } else if r[col] != 0 {
                return false;
            }
        }
        true
    }

    pub fn contains(&self, w: &Weight) -> Result<bool, WeightError> {
        w.check_rank(self.ambient)?;
        let s = Rational::from_integer(BigInt::from(self.scale));
        let scaled = w.scale(&s);
        if !scaled.is_integral() {
            return Ok(false);
        }
        let x = scaled_integer_coords(w, self.scale)?;
        Ok(self.contains_scaled(&x))
    }

    /// Converts a scaled integer vector back to a weight.
    pub fn unscale(&self, x: &[i128]) -> Weight {
        Weight::new(
            x.iter()
                .map(|&v| Rational::new(BigInt::from(v), BigInt::from(self.scale)))
                .collect(),
        )
    }
}

/// `scale · w` as integers; errors if not integral or too large.
pub fn scaled_integer_coords(w: &Weight, scale: i128) -> Result<Vec<i128>, WeightError> {
    let s = Rational::from_integer(BigInt::from(scale));
    w.coords()
        .iter()
        .map(|c| {
            let v = c * &s;
            if !v.is_integer() {
                return Err(WeightError::NotIntegral(w.to_string()));
            }
            v.numer().to_i128().ok_or(WeightError::Overflow)
        })
        .collect()
}

/// A linear map between weight spaces, with a recorded kernel basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Projection {
    /// Rows of the matrix; `matrix.len()` is the target rank.
    pub matrix: Vec<Weight>,
    pub kernel_basis: Vec<Weight>,
    pub source_rank: usize,
}

impl Projection {
    pub fn new(source_rank: usize, matrix: Vec<Weight>, kernel_basis: Vec<Weight>) -> Result<Self, WeightError> {
        for row in &matrix {
            row.check_rank(source_rank)?;
        }
        for k in &kernel_basis {
            k.check_rank(source_rank)?;
            if matrix.iter().any(|row| !row.dot(k).is_zero()) {
                return Err(WeightError::KernelNotAnnihilated(k.to_string()));
            }
        }
        Ok(Projection { matrix, kernel_basis, source_rank })
    }

    pub fn identity(rank: usize) -> Self {
        Projection { matrix: (0..rank).map(|i| Weight::unit(rank, i)).collect(), kernel_basis: vec![], source_rank: rank }
    }

    /// A single linear functional viewed as a projection to rank 1.
    pub fn functional(f: Weight) -> Self {
        let r = f.rank();
        Projection { matrix: vec![f], kernel_basis: vec![], source_rank: r }
    }

    pub fn target_rank(&self) -> usize {
        self.matrix.len()
    }

    /// Pushes a lattice forward along the projection.
    pub fn image_lattice(&self, l: &Lattice) -> Result<Lattice, WeightError> {
        let gens = l.generators.iter().map(|g| project(self, g)).collect::<Result<Vec<_>, _>>()?;
        Lattice::new(self.target_rank().max(1), gens)
    }
}

/// Applies the projection matrix to `w`.
pub fn project(p: &Projection, w: &Weight) -> Result<Weight, WeightError> {
    w.check_rank(p.source_rank)?;
    Ok(Weight::new(p.matrix.iter().map(|row| row.dot(w)).collect()))
}
