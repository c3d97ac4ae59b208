//! Small dense least-squares routines for the regression model. Matrices are
//! tiny (at most 5 columns), so clarity wins over blocking.

use alloc::vec;
use alloc::vec::Vec;

/// Column-major `rows x cols` matrix.
#[derive(Clone, Debug)]
pub(crate) struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_columns(columns: &[Vec<f64>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            debug_assert_eq!(c.len(), rows);
            data.extend_from_slice(c);
        }
        Self {
            rows,
            cols: columns.len(),
            data,
        }
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn first_columns(&self, k: usize) -> Self {
        Self {
            rows: self.rows,
            cols: k,
            data: self.data[..k * self.rows].to_vec(),
        }
    }

    /// `AᵀA` as a row-major `cols x cols` array.
    pub fn gram(&self) -> Vec<f64> {
        let k = self.cols;
        let mut g = vec![0.0; k * k];
        for i in 0..k {
            for j in i..k {
                let v = dot(self.column(i), self.column(j));
                g[i * k + j] = v;
                g[j * k + i] = v;
            }
        }
        g
    }

    /// `Aᵀy`.
    pub fn t_mul(&self, y: &[f64]) -> Vec<f64> {
        (0..self.cols).map(|j| dot(self.column(j), y)).collect()
    }

    /// `Ax`.
    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.column(j)) {
                *o += a * xj;
            }
        }
        out
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Eigenvalues of a symmetric row-major `k x k` matrix by cyclic Jacobi.
pub(crate) fn symmetric_eigenvalues(a: &[f64], k: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..k)
            .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * k + j] * m[i * k + j])
            .sum();
        let scale: f64 = (0..k).map(|i| m[i * k + i] * m[i * k + i]).sum();
        if off <= 1e-30 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..k {
            for q in p + 1..k {
                let apq = m[p * k + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * k + q] - m[p * k + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for r in 0..k {
                    let (mrp, mrq) = (m[r * k + p], m[r * k + q]);
                    m[r * k + p] = c * mrp - s * mrq;
                    m[r * k + q] = s * mrp + c * mrq;
                }
                for r in 0..k {
                    let (mpr, mqr) = (m[p * k + r], m[q * k + r]);
                    m[p * k + r] = c * mpr - s * mqr;
                    m[q * k + r] = s * mpr + c * mqr;
                }
            }
        }
    }
    (0..k).map(|i| m[i * k + i]).collect()
}

/// 2-norm condition number of a symmetric positive semi-definite matrix;
/// infinite when singular.
pub(crate) fn spd_condition(a: &[f64], k: usize) -> f64 {
    let eig = symmetric_eigenvalues(a, k);
    let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solves `Ax = b` for symmetric positive definite row-major `A`.
pub(crate) fn cholesky_solve(a: &[f64], b: &[f64], k: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let s: f64 = (0..j).map(|p| l[i * k + p] * l[j * k + p]).sum();
            if i == j {
                let d = a[i * k + i] - s;
                if d <= 0.0 {
                    return None;
                }
                l[i * k + i] = libm::sqrt(d);
            } else {
                l[i * k + j] = (a[i * k + j] - s) / l[j * k + j];
            }
        }
    }
    let mut z = vec![0.0; k];
    for i in 0..k {
        let s: f64 = (0..i).map(|p| l[i * k + p] * z[p]).sum();
        z[i] = (b[i] - s) / l[i * k + i];
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|p| l[p * k + i] * x[p]).sum();
        x[i] = (z[i] - s) / l[i * k + i];
    }
    Some(x)
}

/// Relative size below which a Householder pivot marks a dependent column.
const RANK_TOLERANCE: f64 = 1e-9;

/// Least squares `min ‖Ax − y‖` by Householder QR.
///
/// `Err(j)` when column `j` lies (numerically) in the span of columns `0..j`.
pub(crate) fn qr_least_squares(a: &Matrix, y: &[f64]) -> Result<Vec<f64>, usize> {
    let (n, k) = (a.rows, a.cols);
    let mut r = a.clone();
    let mut qty = y.to_vec();
    let column_norms: Vec<f64> = (0..k).map(|j| norm(a.column(j))).collect();
    for j in 0..k {
        if j >= n {
            return Err(j);
        }
        let alpha = {
            let col = &r.column(j)[j..];
            let nrm = norm(col);
            if col[0] > 0.0 {
                -nrm
            } else {
                nrm
            }
        };
        if alpha.abs() <= RANK_TOLERANCE * column_norms[j].max(f64::MIN_POSITIVE) {
            return Err(j);
        }
        let mut v: Vec<f64> = r.column(j)[j..].to_vec();
        v[0] -= alpha;
        let vnorm2 = dot(&v, &v);
        if vnorm2 > 0.0 {
            for c in j..k {
                let col = &mut r.column_mut(c)[j..];
                let f = 2.0 * dot(&v, col) / vnorm2;
                for (x, vi) in col.iter_mut().zip(&v) {
                    *x -= f * vi;
                }
            }
            let tail = &mut qty[j..];
            let f = 2.0 * dot(&v, tail) / vnorm2;
            for (x, vi) in tail.iter_mut().zip(&v) {
                *x -= f * vi;
            }
        }
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|p| r.column(p)[i] * x[p]).sum();
        x[i] = (qty[i] - s) / r.column(i)[i];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_diagonal_and_2x2() {
        let mut e = symmetric_eigenvalues(&[2.0, 1.0, 1.0, 2.0], 2);
        e.sort_by(f64::total_cmp);
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 3.0).abs() < 1e-12);
        assert!((spd_condition(&[4.0, 0.0, 0.0, 1.0], 2) - 4.0).abs() < 1e-12);
        assert_eq!(spd_condition(&[1.0, 1.0, 1.0, 1.0], 2), f64::INFINITY);
    }

    #[test]
    fn cholesky_and_qr_agree() {
        let a = Matrix::from_columns(&[vec![1.0, 1.0, 1.0, 1.0], vec![0.0, 1.0, 2.0, 3.0]]);
        let y = [1.0, 3.0, 5.0, 7.0];
        let x1 = cholesky_solve(&a.gram(), &a.t_mul(&y), 2).unwrap();
        let x2 = qr_least_squares(&a, &y).unwrap();
        for (p, q) in x1.iter().zip(&x2) {
            assert!((p - q).abs() < 1e-12);
        }
        assert!((x2[0] - 1.0).abs() < 1e-12 && (x2[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn qr_flags_dependent_column() {
        let a = Matrix::from_columns(&[
            vec![1.0, 1.0, 1.0],
            vec![1.0, 2.0, 4.0],
            vec![2.0, 4.0, 8.0],
        ]);
        assert_eq!(qr_least_squares(&a, &[1.0, 2.0, 3.0]), Err(2));
    }
}
