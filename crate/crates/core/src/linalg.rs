//! Dense matrices: exact integer matrices, boolean powers, and a small
//! Gaussian elimination kernel generic over `f64` and exact rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Square or rectangular integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data = rows.into_iter().flatten().collect::<Vec<_>>();
        assert_eq!(data.len(), r * c, "ragged rows");
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn row_sum(&self, i: usize) -> i64 {
        self.row(i).iter().sum()
    }

    /// Sub-matrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }

    /// Exact product; `None` on overflow.
    pub fn checked_mul(&self, other: &IntMatrix) -> Option<IntMatrix> {
        assert_eq!(self.cols, other.rows);
        let mut m = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a.checked_mul(other.get(k, j))?;
                    let idx = i * m.cols + j;
                    m.data[idx] = m.data[idx].checked_add(p)?;
                }
            }
        }
        Some(m)
    }

    pub fn checked_pow(&self, k: usize) -> Option<IntMatrix> {
        let mut acc = IntMatrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.checked_mul(self)?;
        }
        Some(acc)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn to_bool(&self) -> BoolMatrix {
        BoolMatrix {
            n: self.rows,
            data: self.data.iter().map(|&x| x > 0).collect(),
        }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x as f64).collect(),
        }
    }

    pub fn to_rational(&self) -> Mat<BigRational> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| BigRational::from_integer(x.into())).collect(),
        }
    }

    /// Characteristic polynomial det(xI − A), coefficients from the leading
    /// term down, computed division-free by the Samuelson-Berkowitz recursion.
    pub fn char_poly(&self) -> Vec<BigInt> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let a = |i: usize, j: usize| BigInt::from(self.get(i, j));
        // p holds the polynomial for the trailing principal submatrix.
        let mut p: Vec<BigInt> = vec![BigInt::one()];
        for s in (0..n).rev() {
            let size = n - s;
            // Toeplitz first column: 1, -a_ss, -R C, -R A1 C, ...
            let mut col = vec![BigInt::one(), -a(s, s)];
            let idx: Vec<usize> = (s + 1..n).collect();
            let mut v: Vec<BigInt> = idx.iter().map(|&i| a(i, s)).collect();
            for _ in 0..size.saturating_sub(1) {
                let rc: BigInt = idx.iter().zip(&v).map(|(&j, x)| a(s, j) * x).sum();
                col.push(-rc);
                v = idx
                    .iter()
                    .map(|&i| idx.iter().zip(&v).map(|(&j, x)| a(i, j) * x).sum())
                    .collect();
            }
            col.truncate(size + 1);
            let mut q = vec![BigInt::zero(); size + 1];
            for (i, qi) in q.iter_mut().enumerate() {
                for j in 0..p.len() {
                    if i >= j && i - j < col.len() {
                        *qi += &col[i - j] * &p[j];
                    }
                }
            }
            p = q;
        }
        p
    }
}

/// Boolean square matrix for reachability and primitivity tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    n: usize,
    data: Vec<bool>,
}

impl BoolMatrix {
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        let n = self.n;
        let mut data = vec![false; n * n];
        for i in 0..n {
            for k in 0..n {
                if self.get(i, k) {
                    for j in 0..n {
                        if other.get(k, j) {
                            data[i * n + j] = true;
                        }
                    }
                }
            }
        }
        BoolMatrix { n, data }
    }

    pub fn all_true(&self) -> bool {
        self.data.iter().all(|&b| b)
    }
}

/// Whether a nonnegative square matrix is primitive, checked with boolean
/// powers up to the Wielandt bound.
pub fn is_primitive(m: &IntMatrix) -> bool {
    let n = m.rows();
    if n == 0 {
        return false;
    }
    let b = m.to_bool();
    let bound = (n - 1) * (n - 1) + 1;
    let mut p = b.clone();
    for _ in 1..bound {
        p = p.mul(&b);
    }
    p.all_true()
}

/// Field elements usable by the elimination kernel.
pub trait Scalar: Clone + Debug + PartialEq {
    fn zero_val() -> Self;
    fn one_val() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn magnitude(&self) -> f64;
    /// Treated as zero during pivoting, relative to `scale`.
    fn negligible(&self, scale: f64) -> bool;
    fn approx(&self) -> f64;
    fn positive(&self) -> bool;
}

impl Scalar for f64 {
    fn zero_val() -> Self {
        0.0
    }
    fn one_val() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-9 * scale.max(1.0)
    }
    fn approx(&self) -> f64 {
        *self
    }
    fn positive(&self) -> bool {
        *self > 0.0
    }
}

impl Scalar for BigRational {
    fn zero_val() -> Self {
        Zero::zero()
    }
    fn one_val() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
    fn approx(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

/// Dense matrix over a `Scalar`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero_val(); rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Mat::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero_val(), |acc, j| acc.add(&self.get(i, j).mul(&x[j])))
            })
            .collect()
    }

    /// θI − A.
    pub fn shifted(&self, theta: &T) -> Self {
        let mut m = Mat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = T::zero_val().sub(self.get(i, j));
                m.set(i, j, if i == j { v.add(theta) } else { v });
            }
        }
        m
    }

    fn scale(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let scale = self.scale();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let (best, mag) = (r..self.rows)
                .map(|i| (i, self.get(i, c).magnitude()))
                .fold((r, -1.0), |a, b| if b.1 > a.1 { b } else { a });
            if self.get(best, c).negligible(scale) || mag < 0.0 {
                for i in r..self.rows {
                    self.set(i, c, T::zero_val());
                }
                continue;
            }
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, best * self.cols + j);
            }
            let p = self.get(r, c).clone();
            for j in 0..self.cols {
                let v = self.get(r, j).div(&p);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r {
                    let f = self.get(i, c).clone();
                    if f == T::zero_val() {
                        continue;
                    }
                    for j in 0..self.cols {
                        let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Solves `self · x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        Some((0..n).map(|i| aug.get(i, n).clone()).collect())
    }

    /// A nonzero vector of the (numerical) null space, if any.
    pub fn null_vector(&self) -> Option<Vec<T>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free = (0..m.cols).find(|c| !pivots.contains(c))?;
        let mut x = vec![T::zero_val(); m.cols];
        x[free] = T::one_val();
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = T::zero_val().sub(m.get(r, free));
        }
        Some(x)
    }
}
