//! Small dense linear-algebra helpers on top of `nalgebra`.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::math;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Largest `|m_ij - conj(m_ji)|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

pub fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    Ok(())
}

/// Symmetrized copy `(M + M^dagger) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted descending.
///
/// The eigenvector matrix has the matching column order.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Eigenvalues only, sorted descending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Determinant through partial-pivoted LU.
pub fn determinant(m: &CMatrix) -> C64 {
    if m.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

/// Principal submatrix on the given (0-based) indices.
pub fn principal_submatrix(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

/// Result of a diagonally pivoted Cholesky factorization `P A P^T = L L^dagger`.
pub struct PivotedCholesky {
    /// `perm[i]` is the original row placed at position `i`.
    pub perm: Vec<usize>,
    /// `k x rank` lower-trapezoidal factor in permuted order, real nonnegative diagonal.
    pub factor: CMatrix,
}

impl PivotedCholesky {
    pub fn rank(&self) -> usize {
        self.factor.ncols()
    }

    /// Row of the factor belonging to original index `i`.
    pub fn row_of(&self, i: usize) -> Vec<C64> {
        let pos = self.perm.iter().position(|&p| p == i).expect("index in permutation");
        self.factor.row(pos).iter().copied().collect()
    }
}

/// Pivoted Cholesky of a Hermitian PSD matrix.
///
/// Stops once the largest remaining Schur-complement diagonal drops below `tol`.
pub fn pivoted_cholesky(a: &CMatrix, tol: f64) -> PivotedCholesky {
    let k = a.nrows();
    let mut work = hermitian_part(a);
    let mut perm: Vec<usize> = (0..k).collect();
    let mut columns: Vec<Vec<C64>> = Vec::new();

    for step in 0..k {
        let (piv, dmax) = (step..k)
            .map(|i| (i, work[(i, i)].re))
            .fold((step, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        if dmax <= tol {
            break;
        }
        if piv != step {
            work.swap_rows(step, piv);
            work.swap_columns(step, piv);
            perm.swap(step, piv);
            for col in columns.iter_mut() {
                col.swap(step, piv);
            }
        }
        let d = math::sqrt(dmax);
        let mut col = alloc::vec![C64::new(0.0, 0.0); k];
        col[step] = C64::new(d, 0.0);
        for i in step + 1..k {
            col[i] = work[(i, step)] / d;
        }
        for i in step + 1..k {
            for j in step + 1..k {
                let upd = col[i] * col[j].conj();
                work[(i, j)] -= upd;
            }
        }
        columns.push(col);
    }

    let rank = columns.len();
    let factor = CMatrix::from_fn(k, rank, |r, c| columns[c][r]);
    PivotedCholesky { perm, factor }
}

/// Roots of the monic polynomial `x^n + c[n-1] x^(n-1) + ... + c[0]` as companion-matrix eigenvalues.
pub fn companion_roots(lower_coeffs: &[f64]) -> Vec<C64> {
    let n = lower_coeffs.len();
    if n == 0 {
        return Vec::new();
    }
    let companion = DMatrix::<f64>::from_fn(n, n, |r, c| {
        if r == 0 {
            -lower_coeffs[n - 1 - c]
        } else if r == c + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion.complex_eigenvalues().iter().copied().collect()
}

/// Evaluate a monic polynomial and its derivative with Horner's rule.
fn horner(lower_coeffs: &[f64], z: C64) -> (C64, C64) {
    let mut p = C64::new(1.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in lower_coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let z = s - a;
    (s, (a - (s - z)) + (b - z))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, math::fma(a, b, -p))
}

/// Monic polynomial and derivative at a real point. The value uses
/// compensated Horner, accurate as if computed in twice the working precision.
pub fn compensated_horner(lower_coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut s = 1.0;
    let mut c = 0.0;
    let mut dp = 0.0;
    for &a in lower_coeffs.iter().rev() {
        dp = dp * x + (s + c);
        let (p, pi) = two_prod(s, x);
        let (t, sigma) = two_sum(p, a);
        s = t;
        c = c * x + (pi + sigma);
    }
    (s + c, dp)
}

/// Newton steps on a real root estimate with compensated evaluation.
///
/// The estimate is returned unchanged if Newton wanders further than
/// `max_move`, which guards against hopping to a neighbouring root.
pub fn refine_real_root(lower_coeffs: &[f64], x0: f64, max_move: f64) -> f64 {
    let mut x = x0;
    for _ in 0..4 {
        let (p, dp) = compensated_horner(lower_coeffs, x);
        if p == 0.0 || dp == 0.0 {
            break;
        }
        let step = p / dp;
        if !step.is_finite() {
            return x0;
        }
        x -= step;
        if math::abs(x - x0) > max_move {
            return x0;
        }
        if math::abs(step) <= f64::EPSILON * math::abs(x) {
            break;
        }
    }
    x
}

/// Double-double number `hi + lo` with `|lo| <= ulp(hi) / 2`.
type Dd = (f64, f64);

fn dd_mul(a: Dd, b: Dd) -> Dd {
    let (p, e) = two_prod(a.0, b.0);
    let e = e + (a.0 * b.1 + a.1 * b.0);
    let (hi, lo) = two_sum(p, e);
    (hi, lo)
}

fn dd_add(a: Dd, b: f64) -> Dd {
    let (s, e) = two_sum(a.0, b);
    two_sum(s, e + a.1)
}

/// A real root refined to double-double accuracy, returned as `(hi, lo)`.
///
/// Starts from `x0` (already accurate to working precision) and applies
/// Newton steps with the polynomial evaluated in double-double.
pub fn refine_real_root_dd(lower_coeffs: &[f64], x0: f64) -> (f64, f64) {
    let mut x: Dd = (x0, 0.0);
    for _ in 0..3 {
        let mut p: Dd = (1.0, 0.0);
        for &a in lower_coeffs.iter().rev() {
            p = dd_add(dd_mul(p, x), a);
        }
        let (_, dp) = compensated_horner(lower_coeffs, x.0);
        if dp == 0.0 {
            break;
        }
        let step = (p.0 + p.1) / dp;
        if !step.is_finite() || math::abs(step) > 1e-9 * (1.0 + math::abs(x0)) {
            break;
        }
        x = dd_add(x, -step);
    }
    x
}

/// Aberth-Ehrlich refinement of a full set of root estimates.
///
/// Simultaneous iteration keeps close roots from collapsing onto each other.
pub fn aberth_polish(lower_coeffs: &[f64], roots: &mut [C64], iterations: usize) {
    let n = roots.len();
    for _ in 0..iterations {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(lower_coeffs, roots[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut repulse = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let d = roots[k] - roots[j];
                    if d.norm() > 0.0 {
                        repulse += C64::new(1.0, 0.0) / d;
                    }
                }
            }
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulse);
            if step.re.is_finite() && step.im.is_finite() {
                roots[k] -= step;
                max_step = max_step.max(step.norm() / roots[k].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
}
