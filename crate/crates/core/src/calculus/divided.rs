//! Newton divided differences, including confluent (repeated) nodes.
//!
//! `f[x_1, ..., x_n]` is the leading coefficient of the degree `n-1`
//! interpolant. For distinct nodes it equals `sum_k f(x_k) / prod_{i != k} (x_k - x_i)`;
//! for a node repeated `j + 1` times the table uses `f^(j) / j!`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Node gaps below this are merged and treated as coincident.
pub const CONFLUENCE_TOL: f64 = 1e-8;

/// A scalar function with derivatives on demand.
pub trait Smooth {
    /// The `order`-th derivative at `x`, or `None` where it is not finite.
    fn derivative(&self, order: usize, x: f64) -> Option<f64>;

    fn value(&self, x: f64) -> Option<f64> {
        self.derivative(0, x)
    }
}

/// `f(x) = log_coef * x^power * ln x + pow_coef * x^power` on `x > 0`.
///
/// At `x = 0` the finite limits are used (`x^m ln x -> 0` for `m > 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XPowLog {
    pub power: i32,
    pub log_coef: f64,
    pub pow_coef: f64,
}

impl XPowLog {
    /// `x^m ln x`.
    pub fn xm_logx(m: u32) -> Self {
        Self {
            power: m as i32,
            log_coef: 1.0,
            pow_coef: 0.0,
        }
    }

    /// `x^m`.
    pub fn monomial(m: u32) -> Self {
        Self {
            power: m as i32,
            log_coef: 0.0,
            pow_coef: 1.0,
        }
    }

    pub fn scaled(self, c: f64) -> Self {
        Self {
            power: self.power,
            log_coef: self.log_coef * c,
            pow_coef: self.pow_coef * c,
        }
    }

    /// Coefficients `(a, b, p)` of the `order`-th derivative `a x^p ln x + b x^p`.
    pub fn derivative_terms(&self, order: usize) -> (f64, f64, i32) {
        let (mut a, mut b, mut p) = (self.log_coef, self.pow_coef, self.power);
        for _ in 0..order {
            let pf = p as f64;
            // d/dx [a x^p ln x + b x^p] = a p x^(p-1) ln x + (a + b p) x^(p-1)
            let next_a = a * pf;
            let next_b = a + b * pf;
            a = next_a;
            b = next_b;
            p -= 1;
        }
        (a, b, p)
    }
}

impl Smooth for XPowLog {
    fn derivative(&self, order: usize, x: f64) -> Option<f64> {
        let (a, b, p) = self.derivative_terms(order);
        if x > 0.0 {
            let xp = math::powi(x, p);
            let log_term = if a == 0.0 { 0.0 } else { a * xp * math::ln(x) };
            return Some(log_term + b * xp);
        }
        if x < 0.0 {
            return None;
        }
        let log_term = if a == 0.0 || p > 0 { Some(0.0) } else { None };
        let pow_term = if b == 0.0 || p > 0 {
            Some(0.0)
        } else if p == 0 {
            Some(b)
        } else {
            None
        };
        Some(log_term? + pow_term?)
    }
}

/// The `j`-th derivative of `x^m ln x` at `x > 0`.
pub fn xm_logx_derivative(m: u32, j: usize, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::DerivativeUnavailable { order: j, x });
    }
    XPowLog::xm_logx(m)
        .derivative(j, x)
        .ok_or(Error::DerivativeUnavailable { order: j, x })
}

/// Sorted nodes with near-coincident clusters replaced by their mean.
pub fn merge_nodes(nodes: &[f64]) -> Vec<f64> {
    let mut z: Vec<f64> = nodes.to_vec();
    z.sort_by(|a, b| a.total_cmp(b));
    let mut start = 0;
    while start < z.len() {
        let mut end = start + 1;
        while end < z.len() && z[end] - z[end - 1] < CONFLUENCE_TOL {
            end += 1;
        }
        if end - start > 1 {
            let mean = z[start..end].iter().sum::<f64>() / (end - start) as f64;
            for v in &mut z[start..end] {
                *v = mean;
            }
        }
        start = end;
    }
    z
}

/// Full triangular Newton table; `rows[j][i] = f[z_i, ..., z_(i+j)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DividedDifferenceTable {
    nodes: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl DividedDifferenceTable {
    /// Builds the table on the merged, sorted nodes.
    pub fn build<F: Smooth + ?Sized>(f: &F, nodes: &[f64]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("no nodes".into()));
        }
        let z = merge_nodes(nodes);
        let n = z.len();
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
        let first = z
            .iter()
            .map(|&x| f.value(x).ok_or(Error::DerivativeUnavailable { order: 0, x }))
            .collect::<Result<Vec<_>>>()?;
        rows.push(first);
        for j in 1..n {
            let prev = &rows[j - 1];
            let mut row = Vec::with_capacity(n - j);
            for i in 0..n - j {
                let width = z[i + j] - z[i];
                let v = if width == 0.0 {
                    let d = f
                        .derivative(j, z[i])
                        .ok_or(Error::DerivativeUnavailable { order: j, x: z[i] })?;
                    d / math::factorial(j)
                } else {
                    (prev[i + 1] - prev[i]) / width
                };
                row.push(v);
            }
            rows.push(row);
        }
        Ok(Self { nodes: z, rows })
    }

    /// Merged nodes in ascending order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Newton-form coefficients `f[z_0], f[z_0, z_1], ...`.
    pub fn newton_coefficients(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0]).collect()
    }

    /// `f[z_0, ..., z_(n-1)]`.
    pub fn leading(&self) -> f64 {
        self.rows[self.rows.len() - 1][0]
    }

    /// Evaluates the interpolating polynomial at `x`.
    pub fn interpolate(&self, x: f64) -> f64 {
        let c = self.newton_coefficients();
        let mut acc = c[c.len() - 1];
        for i in (0..c.len() - 1).rev() {
            acc = acc * (x - self.nodes[i]) + c[i];
        }
        acc
    }
}

/// Leading Newton coefficient of `f` on `nodes`, confluent where nodes coincide.
pub fn divided_difference<F: Smooth + ?Sized>(f: &F, nodes: &[f64]) -> Result<f64> {
    Ok(DividedDifferenceTable::build(f, nodes)?.leading())
}

/// The explicit sum `sum_k f(x_k) / prod_{i != k} (x_k - x_i)` for distinct nodes.
pub fn lagrange_sum<F: Smooth + ?Sized>(f: &F, nodes: &[f64]) -> Result<f64> {
    check_distinct(nodes)?;
    let mut total = 0.0;
    for (k, &xk) in nodes.iter().enumerate() {
        let fx = f.value(xk).ok_or(Error::DerivativeUnavailable { order: 0, x: xk })?;
        total += fx / node_product(nodes, k);
    }
    Ok(total)
}

/// `prod_{i != k} (x_k - x_i)`.
pub fn node_product(nodes: &[f64], k: usize) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, &xi)| nodes[k] - xi)
        .product()
}

/// Fails when two nodes are closer than [`CONFLUENCE_TOL`].
pub fn check_distinct(nodes: &[f64]) -> Result<()> {
    let mut z = nodes.to_vec();
    z.sort_by(|a, b| a.total_cmp(b));
    for w in z.windows(2) {
        if w[1] - w[0] < CONFLUENCE_TOL {
            return Err(Error::CoincidentNodes(w[0], w[1]));
        }
    }
    Ok(())
}

/// Complete homogeneous symmetric polynomials `h_0..=h_max` of `y`.
fn complete_homogeneous(y: &[f64], max: usize) -> Vec<f64> {
    let mut h = alloc::vec![0.0; max + 1];
    h[0] = 1.0;
    for &v in y {
        for r in 1..=max {
            h[r] += v * h[r - 1];
        }
    }
    h
}

/// Divided difference through the Taylor expansion of `f` about `center`.
///
/// Since `(y)^j` on `n` nodes has divided difference `h_(j-n+1)(y)`, the value
/// is `sum_(j >= n-1) f^(j)(center)/j! * h_(j-n+1)(x - center)`. Valid when all
/// nodes lie well inside the radius of convergence; the series is truncated
/// once terms fall below roundoff or after `max_terms` terms.
pub fn divided_difference_series<F: Smooth + ?Sized>(
    f: &F,
    nodes: &[f64],
    center: f64,
    max_terms: usize,
) -> Result<f64> {
    let n = nodes.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no nodes".into()));
    }
    // j! overflows past 170.
    let max_terms = max_terms.min(170usize.saturating_sub(n - 1));
    let y: Vec<f64> = nodes.iter().map(|&x| x - center).collect();
    let h = complete_homogeneous(&y, max_terms);
    let mut total = 0.0;
    let mut quiet = 0;
    for r in 0..=max_terms {
        let j = r + n - 1;
        let d = f
            .derivative(j, center)
            .ok_or(Error::DerivativeUnavailable { order: j, x: center })?;
        let term = d / math::factorial(j) * h[r];
        total += term;
        if math::abs(term) <= 1e-17 * math::abs(total) {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    struct Square;
    impl Smooth for Square {
        fn derivative(&self, order: usize, x: f64) -> Option<f64> {
            Some(match order {
                0 => x * x,
                1 => 2.0 * x,
                2 => 2.0,
                _ => 0.0,
            })
        }
    }

    #[test]
    fn square_on_two_nodes() {
        let d = divided_difference(&Square, &[0.3, 0.9]).unwrap();
        assert!((d - 1.2).abs() < 1e-15);
        // Confluent: f[a, a] = f'(a).
        let d = divided_difference(&Square, &[0.3, 0.3]).unwrap();
        assert!((d - 0.6).abs() < 1e-15);
    }

    #[test]
    fn xn_gives_sum_of_nodes() {
        let nodes = [0.11, 0.52, 0.27, 0.9, 0.33];
        let d = divided_difference(&XPowLog::monomial(5), &nodes).unwrap();
        let s1: f64 = nodes.iter().sum();
        assert!((d - s1).abs() < 1e-12);
        let l = lagrange_sum(&XPowLog::monomial(5), &nodes).unwrap();
        assert!((l - s1).abs() < 1e-12);
    }

    #[test]
    fn table_interpolates() {
        let f = XPowLog::xm_logx(3);
        let nodes = [0.2, 0.5, 0.7, 0.9];
        let t = DividedDifferenceTable::build(&f, &nodes).unwrap();
        for &x in &nodes {
            assert!((t.interpolate(x) - f.value(x).unwrap()).abs() < 1e-14);
        }
        let t = DividedDifferenceTable::build(&f, &[0.5, 0.5, 0.8]).unwrap();
        // Hermite data: value and slope at the double node.
        let h = 1e-6;
        let slope = (t.interpolate(0.5 + h) - t.interpolate(0.5 - h)) / (2.0 * h);
        assert!((slope - f.derivative(1, 0.5).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn derivative_hand_values() {
        assert!((xm_logx_derivative(1, 1, core::f64::consts::E).unwrap() - 2.0).abs() < 1e-15);
        assert!((xm_logx_derivative(2, 2, 1.0).unwrap() - 3.0).abs() < 1e-15);
        // (x^2 ln x)''' = 2 / x
        assert!((xm_logx_derivative(2, 3, 0.25).unwrap() - 8.0).abs() < 1e-13);
        assert!(xm_logx_derivative(2, 1, 0.0).is_err());
    }

    #[test]
    fn limits_at_zero() {
        let f = XPowLog::xm_logx(2);
        assert_eq!(f.derivative(0, 0.0), Some(0.0));
        assert_eq!(f.derivative(1, 0.0), Some(0.0));
        assert_eq!(f.derivative(2, 0.0), None);
        assert_eq!(XPowLog::xm_logx(0).derivative(0, 0.0), None);
    }

    #[test]
    fn merge_clusters() {
        let z = merge_nodes(&[0.3 + 1e-12, 0.7, 0.3]);
        assert_eq!(z[0], z[1]);
        assert!((z[0] - 0.3).abs() < 1e-12);
        assert_eq!(z[2], 0.7);
    }

    #[test]
    fn distinctness_check() {
        assert!(check_distinct(&[0.1, 0.2]).is_ok());
        assert!(matches!(
            check_distinct(&[0.1, 0.1 + 1e-10]),
            Err(Error::CoincidentNodes(_, _))
        ));
    }

    #[test]
    fn series_matches_table_away_from_singularity() {
        let f = XPowLog::xm_logx(2);
        let nodes = vec![5.1, 5.4, 5.25, 5.9];
        let table = divided_difference(&f, &nodes).unwrap();
        let series = divided_difference_series(&f, &nodes, 5.4, 80).unwrap();
        assert!((table - series).abs() < 1e-10 * series.abs(), "{table} vs {series}");
    }
}
