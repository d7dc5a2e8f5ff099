//! Small dense complex matrices (2x2, 3x3 and 4x4) and the handful of
//! decompositions the two-qubit measures need.
//!
//! Everything here is dependency-free apart from `num-complex`. The Hermitian
//! eigensolver is cyclic Jacobi, which at these sizes is accurate to a few ulps
//! and never needs a fallback path.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative off-diagonal Frobenius mass at which Jacobi sweeps stop.
pub const JACOBI_TOL: f64 = 1e-14;
/// Allowed relative anti-Hermitian part for inputs to the Hermitian routines.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Eigenvalues above `-PSD_CLAMP` are treated as roundoff and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

pub(crate) const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// One of the two qubits of a bipartite system. `A` is the left Kronecker factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Qubit {
    #[default]
    A,
    B,
}

/// Dense row-major complex matrix with 2, 3 or 4 rows and columns.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

fn supported(n: usize) -> bool {
    (2..=4).contains(&n)
}

impl ComplexMatrix {
    /// Build a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if !supported(rows) || !supported(cols) || data.len() != rows * cols {
            return Err(Error::DimensionUnsupported { rows, cols });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<const R: usize, const C: usize>(rows: [[Complex64; C]; R]) -> Result<Self> {
        Self::new(R, C, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows<const R: usize, const C: usize>(rows: [[f64; C]; R]) -> Result<Self> {
        Self::new(R, C, rows.iter().flatten().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = c(v, 0.0);
        }
        m
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m[(i, j)] = ui * vj.conj();
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ‖m − m†‖_F, or infinity for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// (m + m†)/2. Removes roundoff asymmetry after products.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut m = Self::zeros(self.rows, self.cols);
        for (out, (a, b)) in m.data.iter_mut().zip(self.data.iter().zip(&adj.data)) {
            *out = (a + b) * 0.5;
        }
        m
    }

    /// Re Tr(self · other) without forming the product.
    pub fn trace_product_re(&self, other: &Self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += (self[(i, k)] * other[(k, i)]).re;
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::default() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// 3x3 real symmetric matrix, stored in full.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealSymmetricMatrix3([[f64; 3]; 3]);

impl RealSymmetricMatrix3 {
    /// Rejects entries that are not exactly symmetric as stored.
    pub fn new(entries: [[f64; 3]; 3]) -> Result<Self> {
        if entries.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        for i in 0..3 {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::NotHermitian {
                        deviation: (entries[i][j] - entries[j][i]).abs(),
                    });
                }
            }
        }
        Ok(Self(entries))
    }

    /// The Gram matrix AᵀA, symmetrized exactly.
    pub fn gram(a: &[[f64; 3]; 3]) -> Self {
        let mut g = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let v: f64 = (0..3).map(|k| a[k][i] * a[k][j]).sum();
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        Self(g)
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues in descending order,
/// eigenvectors as the matching columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// V diag(f(λ)) V†.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() || !supported(m.rows) {
        return Err(Error::DimensionUnsupported {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL * m.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.rows {
        for j in 0..a.cols {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of a_pq, then
/// applies the classic real rotation that zeroes it.
fn jacobi(m: &ComplexMatrix) -> HermitianEigen {
    let n = m.rows;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm().max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let phase = apq / g;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                let pc = phase.conj();

                // A <- A V
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cs - akq * pc * sn;
                    a[(k, q)] = akp * sn + akq * pc * cs;
                }
                // A <- V† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * cs - aqk * phase * sn;
                    a[(q, k)] = apk * sn + aqk * phase * cs;
                }
                a[(p, q)] = Complex64::default();
                a[(q, p)] = Complex64::default();
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * cs - vkq * pc * sn;
                    v[(k, q)] = vkp * sn + vkq * pc * cs;
                }
            }
        }
    }

    // Sort descending; ties keep original index order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, dst)] = v[(k, src)];
        }
    }
    HermitianEigen { values, vectors }
}

/// Eigenvalues and eigenvectors of a Hermitian matrix, descending.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    Ok(jacobi(m))
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|e| e.values)
}

/// Principal square root of a positive semidefinite matrix. Eigenvalues in
/// `[-PSD_CLAMP, 0)` are clamped to zero.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min < -PSD_CLAMP {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(eig.map_values(|x| x.max(0.0).sqrt()).hermitian_part())
}

/// Kronecker product a ⊗ b of two 2x2 matrices; `a` acts on qubit A.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    for m in [a, b] {
        if m.rows != 2 || m.cols != 2 {
            return Err(Error::DimensionUnsupported {
                rows: m.rows,
                cols: m.cols,
            });
        }
    }
    let mut out = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Reduced 2x2 matrix of the qubit `keep`, tracing out the other one.
pub fn partial_trace(rho: &ComplexMatrix, keep: Qubit) -> Result<ComplexMatrix> {
    if rho.rows != 4 || rho.cols != 4 {
        return Err(Error::DimensionUnsupported {
            rows: rho.rows,
            cols: rho.cols,
        });
    }
    let mut out = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = match keep {
                Qubit::A => rho[(2 * i, 2 * j)] + rho[(2 * i + 1, 2 * j + 1)],
                Qubit::B => rho[(i, j)] + rho[(2 + i, 2 + j)],
            };
        }
    }
    Ok(out)
}

/// Eigenvalues of a real symmetric 3x3 matrix, descending.
pub fn sym3_eigenvalues(m: &RealSymmetricMatrix3) -> [f64; 3] {
    let cm = ComplexMatrix {
        rows: 3,
        cols: 3,
        data: m.0.iter().flatten().map(|&x| c(x, 0.0)).collect(),
    };
    let values = jacobi(&cm).values;
    [values[0], values[1], values[2]]
}

/// Singular values of a square matrix, descending, by one-sided (Hestenes)
/// Jacobi. Small singular values come out with absolute error on the order of
/// machine epsilon times the largest one, without the square-root blow-up of
/// going through the eigenvalues of A†A.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.cols;
    let rows = m.rows;
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| m.column(j)).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = (0..rows).map(|k| cols[p][k].conj() * cols[q][k]).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for k in 0..rows {
                    let x = cols[p][k];
                    let y = cols[q][k] * phase.conj();
                    cols[p][k] = x * cs - y * sn;
                    cols[q][k] = x * sn + y * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = cols
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Householder QR of a square matrix: returns (Q, R) with Q unitary and R upper
/// triangular. The diagonal of R is not normalized to be real.
pub fn qr(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    assert!(m.is_square(), "qr expects a square matrix");
    let n = m.rows;
    let mut r = m.clone();
    let mut q = ComplexMatrix::identity(n);

    for k in 0..n.saturating_sub(1) {
        let norm: f64 = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() == 0.0 {
            c(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| if i < k { c(0.0, 0.0) } else { r[(i, k)] })
            .collect();
        v[k] -= alpha;
        let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm == 0.0 {
            continue;
        }
        // R <- (I - 2vv†/v†v) R
        for j in 0..n {
            let dot: Complex64 = (k..n).map(|i| v[i].conj() * r[(i, j)]).sum();
            let f = dot * (2.0 / vnorm);
            for i in k..n {
                r[(i, j)] -= v[i] * f;
            }
        }
        // Q <- Q (I - 2vv†/v†v)
        for i in 0..n {
            let dot: Complex64 = (k..n).map(|j| q[(i, j)] * v[j]).sum();
            let f = dot * (2.0 / vnorm);
            for j in k..n {
                q[(i, j)] -= f * v[j].conj();
            }
        }
    }
    for i in 1..n {
        for j in 0..i {
            r[(i, j)] = Complex64::default();
        }
    }
    (q, r)
}

/// The Pauli matrices σx, σy, σz.
pub fn pauli() -> [ComplexMatrix; 3] {
    let sx = ComplexMatrix {
        rows: 2,
        cols: 2,
        data: vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
    };
    let sy = ComplexMatrix {
        rows: 2,
        cols: 2,
        data: vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
    };
    let sz = ComplexMatrix {
        rows: 2,
        cols: 2,
        data: vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
    };
    [sx, sy, sz]
}
