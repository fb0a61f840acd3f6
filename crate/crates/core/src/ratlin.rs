//! Exact linear algebra over the rationals.
//!
//! Everything funnels through a fraction-free elimination on integer rows:
//! each rational row is first scaled by the lcm of its denominators, and
//! after every row operation the row is divided by the gcd of its entries.
//! The elimination runs on `i128` with checked arithmetic and restarts on
//! `BigInt` when an intermediate value overflows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must equal rows * cols");
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            entries.extend(row);
        }
        Self::new(nrows, cols, entries)
    }

    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Self {
        Self::new(rows, cols, values.iter().map(|&v| rat(v)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
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

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Reduced row echelon form and the pivot columns in increasing order.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let rows = integer_rows(self);
        let (reduced, pivots) = reduce_integer_rows(rows, self.cols, true);
        let mut out = Self::zeros(self.rows, self.cols);
        for (r, (row, &pc)) in reduced.iter().zip(&pivots).enumerate() {
            let lead = &row[pc];
            for c in 0..self.cols {
                if !Zero::is_zero(&row[c]) {
                    out.set(r, c, Rational::new(row[c].clone(), lead.clone()));
                }
            }
        }
        (out, pivots)
    }

    pub fn rank(&self) -> usize {
        rank_of_integer_rows(integer_rows(self), self.cols)
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }
}

/// Kernel basis read off a matrix already in reduced row echelon form.
pub fn kernel_from_rref(r: &RationalMatrix, pivots: &[usize]) -> Vec<Vec<Rational>> {
    let mut is_pivot = vec![false; r.cols()];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..r.cols())
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); r.cols()];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                let e = r.get(row, free);
                if !e.is_zero() {
                    v[pc] = -e.clone();
                }
            }
            v
        })
        .collect()
}

/// Clears denominators row by row.
pub fn integer_rows(m: &RationalMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|r| clear_denominators(m.row(r))).collect()
}

/// Scales a rational vector by the lcm of its denominators.
pub fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| {
            if x.is_zero() {
                <BigInt as Zero>::zero()
            } else {
                x.numer() * (&lcm / x.denom())
            }
        })
        .collect()
}

/// Rank of an integer matrix given as rows of length `ncols`.
pub fn rank_of_integer_rows(rows: Vec<Vec<BigInt>>, ncols: usize) -> usize {
    reduce_integer_rows(rows, ncols, false).1.len()
}

/// Fraction-free echelon form. Rows of the result beyond the rank are
/// dropped; with `full` every pivot column is cleared above its pivot too.
pub fn reduce_integer_rows(
    rows: Vec<Vec<BigInt>>,
    ncols: usize,
    full: bool,
) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|row| row.iter().map(ToPrimitive::to_i128).collect())
        .collect();
    if let Some(mut small) = small {
        if let Some(pivots) = eliminate(&mut small, ncols, full) {
            small.truncate(pivots.len());
            let big = small
                .into_iter()
                .map(|row| row.into_iter().map(BigInt::from).collect())
                .collect();
            return (big, pivots);
        }
    }
    let mut big = rows;
    let pivots = eliminate(&mut big, ncols, full).expect("BigInt elimination cannot overflow");
    big.truncate(pivots.len());
    (big, pivots)
}

trait Scalar: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    /// `a * b - c * d`, or `None` on overflow.
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_one(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn negate(&self) -> Option<Self>;
    /// Rough size used to prefer small pivots.
    fn size(&self) -> u64;
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)
    }
    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.unsigned_abs(), other.unsigned_abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        // a <= max(|self|, |other|), which fits unless one input is i128::MIN
        a.min(i128::MAX as u128) as i128
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn negate(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn size(&self) -> u64 {
        128 - self.unsigned_abs().leading_zeros() as u64
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        Some(a * b - c * d)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn negate(&self) -> Option<Self> {
        Some(-self)
    }
    fn size(&self) -> u64 {
        self.bits()
    }
}

/// Divides a row by the gcd of its entries and makes the first nonzero
/// entry positive.
fn make_primitive<S: Scalar>(row: &mut [S]) -> Option<()> {
    let mut g = S::zero();
    for x in row.iter().filter(|x| !x.is_zero()) {
        g = if g.is_zero() { x.gcd(&x.clone()) } else { g.gcd(x) };
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return Some(());
    }
    let flip = row.iter().find(|x| !x.is_zero()).is_some_and(S::is_negative);
    if !g.is_one() || flip {
        for x in row.iter_mut().filter(|x| !x.is_zero()) {
            let q = x.div_exact(&g);
            *x = if flip { q.negate()? } else { q };
        }
    }
    Some(())
}

/// `target = p * target - f * source`, restricted to columns `from..`.
fn combine<S: Scalar>(target: &mut [S], source: &[S], p: &S, f: &S, from: usize) -> Option<()> {
    for c in from..target.len() {
        if source[c].is_zero() {
            if !target[c].is_zero() && !p.is_one() {
                target[c] = S::mul_sub(p, &target[c], &S::zero(), &S::zero())?;
            }
        } else {
            target[c] = S::mul_sub(p, &target[c], f, &source[c])?;
        }
    }
    Some(())
}

fn eliminate<S: Scalar>(rows: &mut [Vec<S>], ncols: usize, full: bool) -> Option<Vec<usize>> {
    for row in rows.iter_mut() {
        make_primitive(row)?;
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        // The reduced form does not depend on which row supplies the pivot;
        // the smallest entry keeps intermediate values short.
        let best = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| (rows[i][c].size(), i));
        let Some(best) = best else { continue };
        rows.swap(r, best);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let p = pivot_row[c].clone();
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            combine(row, pivot_row, &p, &f, c)?;
            make_primitive(row)?;
        }
        pivots.push(c);
        r += 1;
    }
    if full {
        for k in (0..pivots.len()).rev() {
            let pc = pivots[k];
            let (head, tail) = rows.split_at_mut(k);
            let pivot_row = &tail[0];
            let p = pivot_row[pc].clone();
            for (i, row) in head.iter_mut().enumerate() {
                if row[pc].is_zero() {
                    continue;
                }
                let f = row[pc].clone();
                combine(row, pivot_row, &p, &f, pivots[i])?;
                make_primitive(row)?;
            }
        }
    }
    Some(pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[i64]) -> RationalMatrix {
        RationalMatrix::from_i64(rows, cols, v)
    }

    #[test]
    fn rref_identity() {
        let (r, p) = RationalMatrix::identity(2).rref();
        assert_eq!(r, RationalMatrix::identity(2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rref_zero() {
        let (r, p) = RationalMatrix::zeros(2, 3).rref();
        assert!(r.is_zero());
        assert!(p.is_empty());
    }

    #[test]
    fn rref_rank_one() {
        let (r, p) = m(2, 2, &[1, 2, 2, 4]).rref();
        assert_eq!(r, m(2, 2, &[1, 2, 0, 0]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_fractions() {
        // [[2,1],[4,3]] is invertible; [[2,1,1]] scales to [1,1/2,1/2]
        let (r, p) = m(1, 3, &[2, 1, 1]).rref();
        assert_eq!(p, vec![0]);
        assert_eq!(r.get(0, 1), &Rational::new(1.into(), 2.into()));
        assert_eq!(m(2, 2, &[2, 1, 4, 3]).rank(), 2);
    }

    #[test]
    fn ranks() {
        assert_eq!(RationalMatrix::identity(3).rank(), 3);
        assert_eq!(m(2, 2, &[1, 2, 2, 4]).rank(), 1);
        assert_eq!(RationalMatrix::zeros(0, 5).rank(), 0);
    }

    #[test]
    fn kernels() {
        let k = m(1, 3, &[1, 1, 1]).kernel_basis();
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![rat(-1), rat(1), rat(0)]);
        assert_eq!(k[1], vec![rat(-1), rat(0), rat(1)]);

        assert!(m(2, 2, &[2, 1, 4, 3]).kernel_basis().is_empty());

        let k = m(2, 2, &[1, 2, 2, 4]).kernel_basis();
        assert_eq!(k, vec![vec![rat(-2), rat(1)]]);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 3;
        let a = m(3, 3, &[big, big - 1, 7, big - 5, big, 3, 11, 13, big - 9]);
        let (_, p) = a.rref();
        assert_eq!(p.len(), a.rank());
        for v in a.kernel_basis() {
            assert!(a.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }
}
