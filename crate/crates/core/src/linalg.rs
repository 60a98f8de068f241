//! Dense real linear algebra used by every other module.
//!
//! Everything here works on small matrices (a few hundred rows at most), so
//! the implementations favour robustness and certifiability over speed:
//! cyclic Jacobi rotations for symmetric eigenproblems, and a pseudo-inverse
//! built from the eigendecomposition of `MᵀM` with singular values below
//! `SV_TRUNCATION * sigma_max` treated as zero.

use crate::error::{Error, Result};

/// Relative threshold below which singular values are treated as zero.
pub const SV_TRUNCATION: f64 = 1e-10;

/// Relative tolerance for symmetry checks.
pub const SYMMETRY_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 100;

/// Dense row-major matrix of `f64`.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:>12.6} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from nested rows, rejecting ragged or non-finite input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Dimension("matrix needs at least one row".into()));
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Error::Dimension("matrix needs at least one column".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    cols
                )));
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::Dimension(format!("non-finite entry in row {}", i)));
                }
                data.push(v);
            }
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Column vector from a slice.
    pub fn column(v: &[f64]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += aik * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let mut acc = 0.0;
            for j in 0..self.cols {
                acc += self.get(i, j) * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// `Mᵀ v` without forming the transpose.
    pub fn tr_matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, v.len(), "tr_matvec dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let vi = v[i];
            if vi == 0.0 {
                continue;
            }
            for j in 0..self.cols {
                out[j] += self.get(i, j) * vi;
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: f64) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `(M + Mᵀ)/2`, used to keep iterates symmetric against rounding drift.
    pub fn symmetrized(&self) -> Matrix {
        assert!(self.is_square());
        Matrix::from_fn(self.rows, self.cols, |i, j| 0.5 * (self.get(i, j) + self.get(j, i)))
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        assert!(r1 <= self.rows && c1 <= self.cols && r0 <= r1 && c0 <= c1);
        Matrix::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn trace(&self) -> f64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// `[[a, b], [c, d]]` as one matrix.
pub fn block2x2(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
    assert_eq!(a.rows(), b.rows());
    assert_eq!(c.rows(), d.rows());
    assert_eq!(a.cols(), c.cols());
    assert_eq!(b.cols(), d.cols());
    let mut out = Matrix::zeros(a.rows() + c.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j));
        }
        for j in 0..b.cols() {
            out.set(i, a.cols() + j, b.get(i, j));
        }
    }
    for i in 0..c.rows() {
        for j in 0..c.cols() {
            out.set(a.rows() + i, j, c.get(i, j));
        }
        for j in 0..d.cols() {
            out.set(a.rows() + i, a.cols() + j, d.get(i, j));
        }
    }
    out
}

/// Block-diagonal of two matrices.
pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let za = Matrix::zeros(a.rows(), b.cols());
    let zb = Matrix::zeros(b.rows(), a.cols());
    block2x2(a, &za, &zb, b)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn vec_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Result of a symmetric eigendecomposition `M = V D Vᵀ`.
///
/// Eigenvalues are sorted ascending; eigenvectors are the matching columns
/// of an orthonormal `V`.
#[derive(Clone, Debug)]
pub struct SymEigResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

fn check_symmetric(m: &Matrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "expected square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let asym = m.max_asymmetry();
    let tol = SYMMETRY_TOL * (1.0 + m.max_norm());
    if asym > tol {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
pub fn sym_eig(m: &Matrix) -> Result<SymEigResult> {
    check_symmetric(m)?;
    let n = m.rows();
    if n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }

    let mut a = m.symmetrized();
    let mut v = Matrix::identity(n);
    let mut d: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];
    let scale = 1.0 + m.max_norm();

    for sweep in 0..MAX_JACOBI_SWEEPS {
        let mut sm = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                sm += a.get(p, q).abs();
            }
        }
        if sm <= 1e-13 * scale {
            return Ok(sort_eigenpairs(d, v));
        }
        let tresh = if sweep < 3 { 0.2 * sm / (n * n) as f64 } else { 0.0 };

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let g = 100.0 * apq.abs();
                // skip rotations that no longer change the diagonal
                if sweep > 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a.set(p, q, 0.0);
                    continue;
                }
                if apq.abs() <= tresh {
                    continue;
                }
                let mut h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a.set(p, q, 0.0);

                let rotate = |a: &mut Matrix, i: usize, j: usize, k: usize, l: usize| {
                    let g = a.get(i, j);
                    let h = a.get(k, l);
                    a.set(i, j, g - s * (h + g * tau));
                    a.set(k, l, h + s * (g - h * tau));
                };
                for j in 0..p {
                    rotate(&mut a, j, p, j, q);
                }
                for j in (p + 1)..q {
                    rotate(&mut a, p, j, j, q);
                }
                for j in (q + 1)..n {
                    rotate(&mut a, p, j, q, j);
                }
                for j in 0..n {
                    rotate(&mut v, j, p, j, q);
                }
            }
        }

        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }
    Err(Error::EigNoConvergence(MAX_JACOBI_SWEEPS))
}

fn sort_eigenpairs(d: Vec<f64>, v: Matrix) -> SymEigResult {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let eigenvectors = Matrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    SymEigResult { eigenvalues, eigenvectors }
}

/// Moore–Penrose pseudo-inverse via the eigendecomposition of `MᵀM`.
///
/// Singular values below `SV_TRUNCATION * sigma_max` are dropped, so the
/// result is well defined for every real matrix including rank-deficient
/// and zero ones.
pub fn pinv(m: &Matrix) -> Matrix {
    let gram = m.transpose().matmul(m);
    let eig = sym_eig(&gram).expect("MᵀM is symmetric by construction");
    let sigma_sq_max = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
    let out_rows = m.cols();
    let out_cols = m.rows();
    if sigma_sq_max <= 0.0 {
        return Matrix::zeros(out_rows, out_cols);
    }
    let cutoff_sq = SV_TRUNCATION * SV_TRUNCATION * sigma_sq_max;
    let mut out = Matrix::zeros(out_rows, out_cols);
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam <= cutoff_sq {
            continue;
        }
        let vk: Vec<f64> = (0..m.cols()).map(|i| eig.eigenvectors.get(i, k)).collect();
        let wk = m.matvec(&vk);
        let inv = 1.0 / lam;
        for i in 0..out_rows {
            for j in 0..out_cols {
                let cur = out.get(i, j);
                out.set(i, j, cur + inv * vk[i] * wk[j]);
            }
        }
    }
    out
}

/// Positive-semidefiniteness test: smallest eigenvalue at least
/// `-tol * (1 + max|entry|)`.
pub fn is_psd(m: &Matrix, tol: f64) -> Result<bool> {
    let eig = sym_eig(m)?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    Ok(min >= -tol * (1.0 + m.max_norm()))
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &Matrix) -> Result<f64> {
    let eig = sym_eig(m)?;
    Ok(eig.eigenvalues[0])
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    let mut out = Matrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a.get(i, j);
            if aij == 0.0 {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out.set(i * rb + k, j * cb + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
        assert!((a - b).abs() <= tol, "{}: {} vs {} (tol {})", what, a, b, tol);
    }

    fn assert_mat_close(a: &Matrix, b: &Matrix, tol: f64, what: &str) {
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()), "{}: shape", what);
        let diff = a.sub(b).max_norm();
        assert!(diff <= tol, "{}: max diff {} > {}", what, diff, tol);
    }

    #[test]
    fn sym_eig_identity() {
        let eig = sym_eig(&Matrix::identity(2)).unwrap();
        assert_close(eig.eigenvalues[0], 1.0, 1e-12, "eig 0");
        assert_close(eig.eigenvalues[1], 1.0, 1e-12, "eig 1");
    }

    #[test]
    fn sym_eig_diagonal_sorted_ascending() {
        let eig = sym_eig(&Matrix::diag(&[-3.0, 5.0])).unwrap();
        assert_close(eig.eigenvalues[0], -3.0, 1e-12, "eig 0");
        assert_close(eig.eigenvalues[1], 5.0, 1e-12, "eig 1");
    }

    #[test]
    fn sym_eig_two_by_two() {
        // roots of the characteristic polynomial l^2 - 2l - 3 = (l+1)(l-3)
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        let eig = sym_eig(&m).unwrap();
        assert_close(eig.eigenvalues[0], -1.0, 1e-10, "eig 0");
        assert_close(eig.eigenvalues[1], 3.0, 1e-10, "eig 1");
    }

    #[test]
    fn sym_eig_rejects_asymmetric() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(sym_eig(&m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn sym_eig_rejects_non_square() {
        let m = Matrix::zeros(2, 3);
        assert!(matches!(sym_eig(&m), Err(Error::Dimension(_))));
    }

    fn eig_certificates(m: &Matrix) {
        let eig = sym_eig(m).unwrap();
        let v = &eig.eigenvectors;
        let vtv = v.transpose().matmul(v);
        assert!(vtv.sub(&Matrix::identity(m.rows())).max_norm() <= 1e-10, "orthonormality");
        let mv = m.matmul(v);
        let vd = v.matmul(&Matrix::diag(&eig.eigenvalues));
        assert!(
            mv.sub(&vd).max_norm() <= 1e-8 * (1.0 + m.max_norm()),
            "MV = VD residual"
        );
        let recon = vd.matmul(&v.transpose());
        assert!(recon.sub(m).max_norm() <= 1e-8 * (1.0 + m.max_norm()), "reconstruction");
    }

    #[test]
    fn sym_eig_certificates_on_fixed_cases() {
        eig_certificates(&Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap());
        eig_certificates(&Matrix::from_rows(&[
            vec![4.0, 1.0, -2.0],
            vec![1.0, 2.0, 0.5],
            vec![-2.0, 0.5, 3.0],
        ])
        .unwrap());
    }

    fn penrose_residual(m: &Matrix, p: &Matrix) -> f64 {
        let mpm = m.matmul(p).matmul(m).sub(m).max_norm();
        let pmp = p.matmul(m).matmul(p).sub(p).max_norm();
        let mp = m.matmul(p);
        let sym1 = mp.sub(&mp.transpose()).max_norm();
        let pm = p.matmul(m);
        let sym2 = pm.sub(&pm.transpose()).max_norm();
        mpm.max(pmp).max(sym1).max(sym2)
    }

    #[test]
    fn pinv_identity() {
        let p = pinv(&Matrix::identity(3));
        assert_mat_close(&p, &Matrix::identity(3), 1e-12, "pinv(I)");
    }

    #[test]
    fn pinv_zero() {
        let p = pinv(&Matrix::zeros(2, 2));
        assert_mat_close(&p, &Matrix::zeros(2, 2), 0.0, "pinv(0)");
    }

    #[test]
    fn pinv_rank_deficient_diagonal() {
        let m = Matrix::diag(&[2.0, 0.0]);
        let p = pinv(&m);
        assert_mat_close(&p, &Matrix::diag(&[0.5, 0.0]), 1e-12, "pinv diag(2,0)");
        assert!(penrose_residual(&m, &p) <= 1e-8, "Penrose conditions");
    }

    #[test]
    fn pinv_rectangular_penrose() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![0.5, -1.0, 2.0]]).unwrap();
        let p = pinv(&m);
        assert_eq!((p.rows(), p.cols()), (3, 2));
        assert!(penrose_residual(&m, &p) <= 1e-8, "Penrose conditions");
    }

    #[test]
    fn is_psd_examples() {
        assert!(is_psd(&Matrix::identity(2), 1e-9).unwrap());
        assert!(!is_psd(&Matrix::identity(2).scale(-1.0), 1e-9).unwrap());
        // min eigenvalue -1 from the characteristic polynomial
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(!is_psd(&m, 1e-9).unwrap());
        assert!(is_psd(&m, 1e-9).is_ok());
        let asym = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(is_psd(&asym, 1e-9).is_err());
    }

    #[test]
    fn kron_identities() {
        let i6 = kron(&Matrix::identity(2), &Matrix::identity(3));
        assert_mat_close(&i6, &Matrix::identity(6), 0.0, "I2 kron I3");

        let m = Matrix::from_rows(&[vec![1.0, -2.0], vec![3.0, 0.5]]).unwrap();
        let two_m = kron(&Matrix::from_rows(&[vec![2.0]]).unwrap(), &m);
        assert_mat_close(&two_m, &m.scale(2.0), 0.0, "scalar kron");
    }

    #[test]
    fn kron_block_permutation() {
        let swap = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let k = kron(&swap, &Matrix::identity(2));
        // entry (i*2+r, j*2+c) = swap[i,j] * I[r,c]
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..2 {
                    for c in 0..2 {
                        let expect = swap.get(i, j) * if r == c { 1.0 } else { 0.0 };
                        assert_close(k.get(i * 2 + r, j * 2 + c), expect, 0.0, "kron entry");
                    }
                }
            }
        }
    }

    #[test]
    fn block2x2_layout() {
        let a = Matrix::identity(2);
        let b = Matrix::zeros(2, 1);
        let c = Matrix::zeros(1, 2);
        let d = Matrix::from_rows(&[vec![7.0]]).unwrap();
        let m = block2x2(&a, &b, &c, &d);
        assert_eq!((m.rows(), m.cols()), (3, 3));
        assert_close(m.get(2, 2), 7.0, 0.0, "d block");
        assert_close(m.get(0, 0), 1.0, 0.0, "a block");
    }

    fn seeded_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Matrix::from_fn(rows, cols, |_, _| rng.gen_range(-2.0..2.0))
    }

    #[test]
    fn pinv_is_an_involution_on_random_matrices() {
        for seed in 0..20 {
            let m = seeded_matrix(5, 5, seed);
            let pp = pinv(&pinv(&m));
            let err = pp.sub(&m).max_norm();
            assert!(err <= 1e-7, "seed {}: pinv(pinv(M)) error {}", seed, err);
        }
    }

    #[test]
    fn random_gram_matrices_are_psd() {
        for seed in 100..140 {
            let v = seeded_matrix(4, 4, seed);
            let gram = v.transpose().matmul(&v).symmetrized();
            assert!(is_psd(&gram, 1e-9).unwrap(), "seed {}", seed);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn kron_mixed_product(values in proptest::collection::vec(-2.0f64..2.0, 24)) {
            let a = Matrix::from_fn(2, 2, |i, j| values[i * 2 + j]);
            let b = Matrix::from_fn(2, 3, |i, j| values[4 + i * 3 + j]);
            let c = Matrix::from_fn(2, 2, |i, j| values[10 + i * 2 + j]);
            let d = Matrix::from_fn(3, 2, |i, j| values[14 + i * 2 + j]);
            let lhs = kron(&a, &b).matmul(&kron(&c, &d));
            let rhs = kron(&a.matmul(&c), &b.matmul(&d));
            prop_assert!(lhs.sub(&rhs).max_norm() <= 1e-9);
        }

        #[test]
        fn sym_eig_reconstructs_random_symmetric(values in proptest::collection::vec(-3.0f64..3.0, 16)) {
            let raw = Matrix::from_fn(4, 4, |i, j| values[i * 4 + j]);
            let m = raw.symmetrized();
            let eig = sym_eig(&m).unwrap();
            let v = &eig.eigenvectors;
            prop_assert!(v.transpose().matmul(v).sub(&Matrix::identity(4)).max_norm() <= 1e-10);
            let recon = v.matmul(&Matrix::diag(&eig.eigenvalues)).matmul(&v.transpose());
            prop_assert!(recon.sub(&m).max_norm() <= 1e-8 * (1.0 + m.max_norm()));
        }
    }
}
