//! Dense complex linear solves behind a common strategy interface.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::Registry;

/// Pivot (or singular value) ratio beyond which a system counts as singular.
pub const SINGULAR_RATIO: f64 = 1e14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    Direct,
    MinNorm,
}

/// A factorization ready to be applied to any number of right-hand sides.
pub trait Factored: Send + Sync {
    fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64>;
    /// Ratio of the largest to the smallest pivot / retained singular value.
    fn condition_estimate(&self) -> f64;
    fn method(&self) -> Method;
}

pub trait SolveStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    /// Factors a row-major `rows × cols` matrix.
    fn factor(&self, matrix: &[Vec<Complex64>]) -> Result<Box<dyn Factored>>;
}

pub fn strategies() -> Registry<dyn SolveStrategy> {
    let mut r: Registry<dyn SolveStrategy> = Registry::new("solve strategy");
    r.register("direct", "LU with partial pivoting (square systems)", || Box::new(DirectLu));
    r.register("min-norm", "minimum-norm least squares via SVD", || Box::new(MinNormSvd));
    r
}

fn shape(matrix: &[Vec<Complex64>]) -> Result<(usize, usize)> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, |r| r.len());
    if rows == 0 || cols == 0 || matrix.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidProblem("matrix must be non-empty and rectangular".into()));
    }
    Ok((rows, cols))
}

pub struct DirectLu;

/// `P A = L U` packed in one matrix, unit diagonal on `L`.
pub struct LuFactors {
    lu: Vec<Vec<Complex64>>,
    perm: Vec<usize>,
    condition: f64,
}

impl SolveStrategy for DirectLu {
    fn name(&self) -> &'static str {
        "direct"
    }

    fn factor(&self, matrix: &[Vec<Complex64>]) -> Result<Box<dyn Factored>> {
        Ok(Box::new(lu_factor(matrix)?))
    }
}

pub fn lu_factor(matrix: &[Vec<Complex64>]) -> Result<LuFactors> {
    let (n, cols) = shape(matrix)?;
    if n != cols {
        return Err(Error::InvalidProblem(format!(
            "direct solve needs a square system, got {n}x{cols}"
        )));
    }
    let mut a = matrix.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut max_pivot: f64 = 0.0;
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))
            .unwrap();
        a.swap(k, p);
        perm.swap(k, p);
        let pivot = a[k][k];
        let size = pivot.norm();
        max_pivot = max_pivot.max(size);
        min_pivot = min_pivot.min(size);
        if size == 0.0 {
            return Err(Error::SingularSystem {
                condition: f64::INFINITY,
            });
        }
        for i in k + 1..n {
            let factor = a[i][k] / pivot;
            a[i][k] = factor;
            for j in k + 1..n {
                let upd = factor * a[k][j];
                a[i][j] -= upd;
            }
        }
    }
    let condition = max_pivot / min_pivot;
    if !(condition < SINGULAR_RATIO) {
        return Err(Error::SingularSystem { condition });
    }
    Ok(LuFactors {
        lu: a,
        perm,
        condition,
    })
}

impl Factored for LuFactors {
    fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.len();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let upd = self.lu[i][j] * x[j];
                x[i] -= upd;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let upd = self.lu[i][j] * x[j];
                x[i] -= upd;
            }
            x[i] /= self.lu[i][i];
        }
        x
    }

    fn condition_estimate(&self) -> f64 {
        self.condition
    }

    fn method(&self) -> Method {
        Method::Direct
    }
}

pub struct MinNormSvd;

/// Pseudo-inverse pieces `V Σ⁺ Uᴴ` of a full-row-rank matrix.
pub struct SvdFactors {
    u: DMatrix<Complex64>,
    v_t: DMatrix<Complex64>,
    singular: Vec<f64>,
    condition: f64,
}

impl SolveStrategy for MinNormSvd {
    fn name(&self) -> &'static str {
        "min-norm"
    }

    fn factor(&self, matrix: &[Vec<Complex64>]) -> Result<Box<dyn Factored>> {
        Ok(Box::new(svd_factor(matrix)?))
    }
}

pub fn svd_factor(matrix: &[Vec<Complex64>]) -> Result<SvdFactors> {
    let (rows, cols) = shape(matrix)?;
    if rows > cols {
        return Err(Error::InvalidProblem(format!(
            "min-norm solve needs rows <= cols, got {rows}x{cols}"
        )));
    }
    let m = DMatrix::from_fn(rows, cols, |i, j| matrix[i][j]);
    let svd = m.svd(true, true);
    let singular: Vec<f64> = svd.singular_values.iter().copied().collect();
    let largest = singular.iter().cloned().fold(0.0, f64::max);
    let smallest = singular.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = largest / smallest;
    // every row must stay reachable, otherwise some moment cannot be matched
    if !(condition < SINGULAR_RATIO) || singular.len() < rows {
        return Err(Error::SingularSystem { condition });
    }
    Ok(SvdFactors {
        u: svd.u.expect("u requested"),
        v_t: svd.v_t.expect("v_t requested"),
        singular,
        condition,
    })
}

impl Factored for SvdFactors {
    fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let k = self.singular.len();
        let mut w = vec![Complex64::new(0.0, 0.0); k];
        for (j, wj) in w.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, b) in rhs.iter().enumerate() {
                acc += self.u[(i, j)].conj() * b;
            }
            *wj = acc / self.singular[j];
        }
        let cols = self.v_t.ncols();
        (0..cols)
            .map(|c| (0..k).map(|j| self.v_t[(j, c)].conj() * w[j]).sum())
            .collect()
    }

    fn condition_estimate(&self) -> f64 {
        self.condition
    }

    fn method(&self) -> Method {
        Method::MinNorm
    }
}

pub fn mat_vec(matrix: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    matrix
        .iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> Vec<Vec<Complex64>> {
        vec![
            vec![c(0.0, 1.0), c(2.0, 0.0), c(1.0, -1.0)],
            vec![c(3.0, 0.5), c(-1.0, 0.0), c(0.0, 2.0)],
            vec![c(1.0, 1.0), c(1.0, 1.0), c(4.0, 0.0)],
        ]
    }

    #[test]
    fn lu_solves_with_pivoting() {
        let a = sample();
        let x = vec![c(1.0, -2.0), c(0.5, 0.0), c(-3.0, 1.0)];
        let b = mat_vec(&a, &x);
        let f = DirectLu.factor(&a).unwrap();
        let got = f.solve(&b);
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).norm() < 1e-13);
        }
        assert!(f.condition_estimate() >= 1.0);
        assert_eq!(f.method(), Method::Direct);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]];
        assert!(matches!(DirectLu.factor(&a), Err(Error::SingularSystem { .. })));
        assert!(matches!(MinNormSvd.factor(&a), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn min_norm_solution_is_orthogonal_to_kernel() {
        let a = vec![
            vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, -1.0), c(3.0, 0.0)],
        ];
        let b = vec![c(1.0, 1.0), c(-2.0, 0.5)];
        let f = MinNormSvd.factor(&a).unwrap();
        let x = f.solve(&b);
        let back = mat_vec(&a, &x);
        for (g, e) in back.iter().zip(&b) {
            assert!((g - e).norm() < 1e-13);
        }
        // x lies in the row space: x = Aᴴ y for y solving (A Aᴴ) y = b
        let gram: Vec<Vec<Complex64>> = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| (0..4).map(|k| a[i][k] * a[j][k].conj()).sum())
                    .collect()
            })
            .collect();
        let y = DirectLu.factor(&gram).unwrap().solve(&b);
        for k in 0..4 {
            let expected: Complex64 = (0..2).map(|i| a[i][k].conj() * y[i]).sum();
            assert!((x[k] - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn shape_errors() {
        let wide = vec![vec![c(1.0, 0.0), c(2.0, 0.0)]];
        assert!(DirectLu.factor(&wide).is_err());
        let tall = vec![vec![c(1.0, 0.0)], vec![c(2.0, 0.0)]];
        assert!(MinNormSvd.factor(&tall).is_err());
        assert!(DirectLu.factor(&[]).is_err());
        assert!(strategies().get("min-norm").is_ok());
    }
}
