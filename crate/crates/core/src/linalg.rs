//! Exact integer and rational linear algebra.
//!
//! Everything here works over `BigInt` / `BigRational`; there is no floating
//! point anywhere in the crate. The Hermite normal form drives the kernel
//! computation, so kernel bases are saturated by construction.

use std::fmt;

use num::integer::Integer;
use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn rat(p: i64, q: i64) -> Rat {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_from_int(v: &Int) -> Rat {
    BigRational::from_integer(v.clone())
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_rows<T: Clone + Into<Int>>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Self {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn from_columns(cols: &[Vec<Int>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Int {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Int) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Int> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.entries[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn mul_rat_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Rat::zero();
                for (a, b) in self.entries[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                {
                    if !a.is_zero() {
                        acc += rat_from_int(a) * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(rat_from_int).collect())
            .collect()
    }

    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        det_rational(self.to_rational_rows()).to_integer()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Integer vector indexed by a fixed double-index set (J or I).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(pub Vec<Int>);

impl LatticeVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![Int::zero(); len])
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Small-entry view. Panics if an entry does not fit in `i64`.
    pub fn to_i64(&self) -> Vec<i64> {
        self.0
            .iter()
            .map(|x| i64::try_from(x).expect("lattice entry exceeds i64"))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Int) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }
}

/// Rational vector indexed by J.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector(pub Vec<Rat>);

impl RationalVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(fmt_rat).collect()
    }
}

/// Row Hermite normal form with transform: returns `(H, U)` with `U * m = H`,
/// `U` unimodular. Columns are processed in `col_order`; pivots are made
/// positive and the entries of earlier pivot rows in a pivot column are
/// reduced into `[0, pivot)`. Pivot ties go to the lowest row index.
fn row_hnf(m: &IntMatrix, col_order: &[usize]) -> (IntMatrix, IntMatrix, Vec<usize>) {
    let rows = m.rows;
    let mut h: Vec<Vec<Int>> = m.to_rows();
    let mut u: Vec<Vec<Int>> = IntMatrix::identity(rows).to_rows();
    let mut pivot_row = 0;
    let mut pivot_cols = Vec::new();

    let row_sub =
        |h: &mut Vec<Vec<Int>>, u: &mut Vec<Vec<Int>>, dst: usize, src: usize, q: &Int| {
            if q.is_zero() {
                return;
            }
            for k in 0..h[dst].len() {
                let t = &h[src][k] * q;
                h[dst][k] -= t;
            }
            for k in 0..u[dst].len() {
                let t = &u[src][k] * q;
                u[dst][k] -= t;
            }
        };

    for &c in col_order {
        if pivot_row >= rows {
            break;
        }
        loop {
            // smallest nonzero |entry| at or below pivot_row, lowest row on ties
            let mut best: Option<usize> = None;
            for r in pivot_row..rows {
                if h[r][c].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(r),
                    Some(b) if h[r][c].abs() < h[b][c].abs() => best = Some(r),
                    _ => {}
                }
            }
            let Some(b) = best else { break };
            h.swap(pivot_row, b);
            u.swap(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..rows {
                if h[r][c].is_zero() {
                    continue;
                }
                let q = &h[r][c] / &h[pivot_row][c];
                row_sub(&mut h, &mut u, r, pivot_row, &q);
                if !h[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[pivot_row][c].is_zero() {
            continue;
        }
        if h[pivot_row][c].is_negative() {
            for x in h[pivot_row].iter_mut() {
                *x = -x.clone();
            }
            for x in u[pivot_row].iter_mut() {
                *x = -x.clone();
            }
        }
        let p = h[pivot_row][c].clone();
        for r in 0..pivot_row {
            let q = h[r][c].div_floor(&p);
            row_sub(&mut h, &mut u, r, pivot_row, &q);
        }
        pivot_cols.push(c);
        pivot_row += 1;
    }
    (
        IntMatrix::from_rows(&h),
        IntMatrix::from_rows(&u),
        pivot_cols,
    )
}

/// Column Hermite normal form `H = m * U` together with the unimodular `U`.
pub fn hermite_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let t = m.transpose();
    let order: Vec<usize> = (0..t.cols()).collect();
    let (h, u, _) = row_hnf(&t, &order);
    (h.transpose(), u.transpose())
}

/// Column Hermite normal form; the column span over Z is preserved.
pub fn hermite_basis(m: &IntMatrix) -> IntMatrix {
    hermite_with_transform(m).0
}

/// Z-basis of `{v : m v = 0}`, saturated and in a canonical echelon form
/// (pivots read from the last coordinate backwards, positive).
pub fn kernel_basis(m: &IntMatrix) -> Result<Vec<LatticeVector>> {
    let t = m.transpose();
    let order: Vec<usize> = (0..t.cols()).collect();
    let (h, u, pivots) = row_hnf(&t, &order);
    let rank = pivots.len();
    if rank < m.rows() {
        return Err(Error::RankDeficient {
            rank,
            rows: m.rows(),
        });
    }
    let kernel: Vec<Vec<Int>> = (rank..h.rows()).map(|r| u.row(r)).collect();
    if kernel.is_empty() {
        return Ok(Vec::new());
    }
    Ok(canonical_lattice_basis(&kernel)
        .into_iter()
        .map(LatticeVector)
        .collect())
}

/// Echelon form of a lattice basis with pivots taken from the last
/// coordinate backwards; rows are returned ordered by pivot position.
pub fn canonical_lattice_basis(vs: &[Vec<Int>]) -> Vec<Vec<Int>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_rows(vs);
    let order: Vec<usize> = (0..m.cols()).rev().collect();
    let (h, _, pivots) = row_hnf(&m, &order);
    let mut rows: Vec<(usize, Vec<Int>)> = pivots
        .iter()
        .enumerate()
        .map(|(r, &c)| (c, h.row(r)))
        .collect();
    rows.sort_by_key(|(c, _)| *c);
    rows.into_iter().map(|(_, r)| r).collect()
}

/// Splits `v = plus - minus` with disjoint non-negative supports.
pub fn split_positive_negative(v: &LatticeVector) -> (LatticeVector, LatticeVector) {
    let plus =
        v.0.iter()
            .map(|x| {
                if x.is_positive() {
                    x.clone()
                } else {
                    Int::zero()
                }
            })
            .collect();
    let minus =
        v.0.iter()
            .map(|x| if x.is_negative() { -x } else { Int::zero() })
            .collect();
    (LatticeVector(plus), LatticeVector(minus))
}

/// True iff `vs` is a Z-basis of the lattice spanned by `lattice_basis`.
pub fn is_unimodular_lattice_basis(
    vs: &[LatticeVector],
    lattice_basis: &[LatticeVector],
) -> Result<bool> {
    if vs.len() != lattice_basis.len() {
        return Err(Error::DimensionMismatch {
            expected: lattice_basis.len(),
            got: vs.len(),
        });
    }
    if vs.is_empty() {
        return Ok(true);
    }
    let basis: Vec<Vec<Rat>> = lattice_basis
        .iter()
        .map(|b| b.0.iter().map(rat_from_int).collect())
        .collect();
    let mut change = Vec::with_capacity(vs.len());
    for v in vs {
        let target: Vec<Rat> = v.0.iter().map(rat_from_int).collect();
        match coordinates_in_span(&basis, &target) {
            Some(c) if c.iter().all(Rat::is_integer) => change.push(c),
            _ => return Ok(false),
        }
    }
    Ok(det_rational(change).abs().is_one())
}

/// True iff the Z-span of `vs` is saturated in Z^n (gcd of maximal minors is 1).
pub fn is_saturated(vs: &[LatticeVector]) -> bool {
    if vs.is_empty() {
        return true;
    }
    let k = vs.len();
    let n = vs[0].len();
    let mut g = Int::zero();
    for cols in combinations(n, k) {
        let minor: Vec<Vec<Rat>> = vs
            .iter()
            .map(|v| cols.iter().map(|&c| rat_from_int(&v.0[c])).collect())
            .collect();
        g = g.gcd(&det_rational(minor).to_integer());
        if g.is_one() {
            return true;
        }
    }
    g.is_one()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                let t = &f * &m[r][j];
                m[i][j] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rat>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

pub fn det_rational(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &piv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

pub fn det_int_rows(rows: &[Vec<Int>]) -> Int {
    det_rational(
        rows.iter()
            .map(|r| r.iter().map(rat_from_int).collect())
            .collect(),
    )
    .to_integer()
}

/// A particular solution of `a x = b`, free variables set to zero.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of the rational nullspace `{x : a x = 0}`.
pub fn nullspace(a: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Coordinates of `v` in the span of the (independent) `basis` vectors.
pub fn coordinates_in_span(basis: &[Vec<Rat>], v: &[Rat]) -> Option<Vec<Rat>> {
    if basis.is_empty() {
        return v.iter().all(Zero::is_zero).then(Vec::new);
    }
    // columns of the system are the basis vectors
    let rows = v.len();
    let a: Vec<Vec<Rat>> = (0..rows)
        .map(|i| basis.iter().map(|b| b[i].clone()).collect())
        .collect();
    let x = solve(&a, v)?;
    // verify exactly; `solve` ignores nothing but be explicit about membership
    for i in 0..rows {
        let s: Rat = basis.iter().zip(&x).map(|(b, c)| &b[i] * c).sum();
        if s != v[i] {
            return None;
        }
    }
    Some(x)
}

/// Clears denominators and divides by the content, keeping the direction.
pub fn primitive_integer(v: &[Rat]) -> Vec<Int> {
    let l = v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Int> = v
        .iter()
        .map(|x| (x * rat_from_int(&l)).to_integer())
        .collect();
    let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
