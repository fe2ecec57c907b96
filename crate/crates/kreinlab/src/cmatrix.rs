//! Dense complex matrices sized for desk-scale representations, plus the few
//! spectral tools the rest of the crate needs (a 2x2 eigensolver and a
//! scaling-and-squaring matrix exponential).

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Scalar;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            entries: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex::one());
        }
        m
    }

    pub fn from_diag(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds a matrix from nested rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Shape {
                    op: "from_rows",
                    left: (1, c),
                    right: (1, row.len()),
                });
            }
            entries.extend_from_slice(row);
        }
        Ok(CMatrix {
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Shape {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a + b)
            .collect();
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Shape {
                op: "sub",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a - b)
            .collect();
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    /// Matrix product. Zero entries of the left factor are skipped, so
    /// products of monomial (0/1) matrices cost O(n^2).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.entries[i * self.cols + k];
                if aik.is_zero() {
                    continue;
                }
                let orow = k * other.cols;
                let trow = i * other.cols;
                for j in 0..other.cols {
                    out.entries[trow + j] = out.entries[trow + j] + aik * other.entries[orow + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if self.cols != v.len() {
            return Err(Error::Shape {
                op: "mul_vec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        let mut out = vec![Complex::zero(); self.rows];
        for i in 0..self.rows {
            let row = i * self.cols;
            let mut acc = Complex::zero();
            for j in 0..self.cols {
                let a = self.entries[row + j];
                if !a.is_zero() {
                    acc = acc + a * v[j];
                }
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Hermitian conjugate: `out[i][j] = conj(self[j][i])`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        let n = self.rows.min(self.cols);
        let mut t = Complex::zero();
        for i in 0..n {
            t = t + self.at(i, i);
        }
        t
    }

    pub fn frobenius_norm(&self) -> T {
        let mut s = T::zero();
        for e in &self.entries {
            s = s + e.norm_sqr();
        }
        s.sqrt()
    }

    /// Frobenius norm of the difference, as a residual metric.
    pub fn diff_norm(&self, other: &Self) -> Result<T> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    /// Kronecker product, with `self` on the slow (leading) index.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.at(k, l));
                    }
                }
            }
        }
        out
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Result<Complex<T>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut det = Complex::<T>::one();
        for col in 0..n {
            let mut piv = col;
            let mut best = a[col * n + col].norm_sqr();
            for r in (col + 1)..n {
                let m = a[r * n + col].norm_sqr();
                if m > best {
                    best = m;
                    piv = r;
                }
            }
            if best.is_zero() {
                return Ok(Complex::zero());
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det = det * p;
            for r in (col + 1)..n {
                let factor = a[r * n + col] / p;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j] * factor;
                    a[r * n + j] = a[r * n + j] - v;
                }
            }
        }
        Ok(det)
    }

    /// Matrix exponential by scaling-and-squaring over a Taylor sum whose
    /// truncation error on the scaled block stays below `tol` in Frobenius
    /// norm.
    pub fn mat_exp(&self, tol: T) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if !(tol > T::zero()) {
            return Err(Error::Domain("mat_exp requires tol > 0".into()));
        }
        let n = self.rows;
        let norm = self.frobenius_norm();
        let half = T::approx(0.5);
        let mut squarings = 0u32;
        let mut scale = T::one();
        while norm * scale > half && squarings < 64 {
            scale = scale * half;
            squarings += 1;
        }
        let scaled = self.scale(Complex::new(scale, T::zero()));

        let mut sum = Self::identity(n);
        let mut term = Self::identity(n);
        let mut k = 1usize;
        loop {
            term = term.mul(&scaled)?;
            let inv_k = Complex::new(T::one() / T::approx(k as f64), T::zero());
            term = term.scale(inv_k);
            sum = sum.add(&term)?;
            if term.frobenius_norm() <= tol {
                break;
            }
            k += 1;
            if k > 512 {
                return Err(Error::Domain(
                    "mat_exp Taylor series failed to converge".into(),
                ));
            }
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum)?;
        }
        Ok(sum)
    }
}

/// Hermitian inner product, conjugate-linear in the FIRST argument.
pub fn inner<T: Scalar>(v: &[Complex<T>], w: &[Complex<T>]) -> Result<Complex<T>> {
    if v.len() != w.len() {
        return Err(Error::Shape {
            op: "inner",
            left: (v.len(), 1),
            right: (w.len(), 1),
        });
    }
    let mut acc = Complex::zero();
    for (a, b) in v.iter().zip(w.iter()) {
        acc = acc + a.conj() * b;
    }
    Ok(acc)
}

pub fn vec_norm<T: Scalar>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()
}

pub fn vec_sub<T: Scalar>(v: &[Complex<T>], w: &[Complex<T>]) -> Vec<Complex<T>> {
    v.iter().zip(w.iter()).map(|(a, b)| a - b).collect()
}

pub fn vec_add<T: Scalar>(v: &[Complex<T>], w: &[Complex<T>]) -> Vec<Complex<T>> {
    v.iter().zip(w.iter()).map(|(a, b)| a + b).collect()
}

pub fn vec_scale<T: Scalar>(c: Complex<T>, v: &[Complex<T>]) -> Vec<Complex<T>> {
    v.iter().map(|a| a * c).collect()
}

/// Eigenvalue data of a 2x2 matrix. A defective matrix reports its double
/// eigenvalue twice with a single eigenvector.
#[derive(Clone, Debug)]
pub struct Eig2x2<T: Scalar> {
    pub values: [Complex<T>; 2],
    pub vectors: Vec<Vec<Complex<T>>>,
    pub defective: bool,
    pub discriminant: Complex<T>,
}

/// Eigenvalues and eigenvectors of a 2x2 matrix via the quadratic formula on
/// the characteristic polynomial.
pub fn eig2x2<T: Scalar>(a: &CMatrix<T>) -> Result<Eig2x2<T>> {
    if a.shape() != (2, 2) {
        return Err(Error::Shape {
            op: "eig2x2",
            left: a.shape(),
            right: (2, 2),
        });
    }
    let tr = a.trace();
    let det = a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0);
    let four = Complex::new(T::approx(4.0), T::zero());
    let disc = tr * tr - four * det;

    let scale = T::one() + tr.norm_sqr() + T::approx(4.0) * det.norm();
    let double_root = disc.norm() <= T::approx(1e-12) * scale;

    let half = Complex::new(T::approx(0.5), T::zero());
    if double_root {
        let lam = tr * half;
        match eigvec2(a, lam) {
            Some(v) => Ok(Eig2x2 {
                values: [lam, lam],
                vectors: vec![v],
                defective: true,
                discriminant: disc,
            }),
            // A - lam*I vanished: scalar matrix, fully diagonalizable.
            None => Ok(Eig2x2 {
                values: [lam, lam],
                vectors: vec![basis2(0), basis2(1)],
                defective: false,
                discriminant: disc,
            }),
        }
    } else {
        let mut sq = disc.sqrt();
        // Align the root with tr so the larger eigenvalue avoids cancellation.
        if (tr.conj() * sq).re < T::zero() {
            sq = -sq;
        }
        let lam1 = (tr + sq) * half;
        let lam2 = if lam1.norm_sqr() > T::zero() {
            det / lam1
        } else {
            (tr - sq) * half
        };
        let v1 = eigvec2(a, lam1).unwrap_or_else(|| basis2(0));
        let v2 = eigvec2(a, lam2).unwrap_or_else(|| basis2(1));
        Ok(Eig2x2 {
            values: [lam1, lam2],
            vectors: vec![v1, v2],
            defective: false,
            discriminant: disc,
        })
    }
}

fn basis2<T: Scalar>(i: usize) -> Vec<Complex<T>> {
    let mut v = vec![Complex::zero(); 2];
    v[i] = Complex::one();
    v
}

/// Unit eigenvector of a 2x2 matrix for eigenvalue `lam`, or `None` when
/// `a - lam*I` is numerically zero.
fn eigvec2<T: Scalar>(a: &CMatrix<T>, lam: Complex<T>) -> Option<Vec<Complex<T>>> {
    let c1 = [a.at(0, 1), lam - a.at(0, 0)];
    let c2 = [lam - a.at(1, 1), a.at(1, 0)];
    let n1 = c1[0].norm_sqr() + c1[1].norm_sqr();
    let n2 = c2[0].norm_sqr() + c2[1].norm_sqr();
    let scale = T::one() + lam.norm_sqr() + a.frobenius_norm() * a.frobenius_norm();
    let floor = T::approx(1e-28) * scale;
    let (v, n) = if n1 >= n2 { (c1, n1) } else { (c2, n2) };
    if n <= floor {
        return None;
    }
    let inv = Complex::new(T::one() / n.sqrt(), T::zero());
    Some(vec![v[0] * inv, v[1] * inv])
}
