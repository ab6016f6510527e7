//! Squared complex volumes: principal minors of the overlap matrix.
//!
//! For a subset `u = {u_1 < ... < u_i}` of the states, `alpha_u = det A_u` is
//! the squared modulus of the volume spanned by those states. Weighted by the
//! probabilities they rebuild the symmetric polynomials of the spectrum,
//! `s_i = sum_{|u| = i} p_u1 ... p_ui alpha_u`, and through them the entropy
//! becomes a function of the volumes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::calculus;
use crate::ensemble::{self, Ensemble, OverlapMatrix};
use crate::error::{Error, Result};
use crate::linalg;
use crate::math;
use crate::spectral::SymmetricPolys;

/// Imaginary part of a minor above which we report a numerical-integrity failure.
pub const IMAG_TOL: f64 = 1e-8;

/// A strictly increasing set of 1-based state labels with at least two elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetIndex(Vec<usize>);

impl SubsetIndex {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::InvalidSubset(format!(
                "{labels:?} has fewer than two labels"
            )));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSubset(format!("{labels:?} is not strictly increasing")));
        }
        if labels[0] < 1 || labels[labels.len() - 1] > k {
            return Err(Error::InvalidSubset(format!("{labels:?} has labels outside 1..={k}")));
        }
        Ok(Self(labels))
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|l| l - 1).collect()
    }
}

impl core::fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// All `alpha_u` with `2 <= |u| <= n`, keyed by subset.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeInvariants {
    k: usize,
    n: usize,
    values: BTreeMap<SubsetIndex, f64>,
}

impl VolumeInvariants {
    /// Assembles invariants from explicit values (for perturbation studies).
    pub fn from_values(k: usize, n: usize, values: BTreeMap<SubsetIndex, f64>) -> Self {
        Self { k, n, values }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `alpha_u`; subsets larger than `n` are exactly zero.
    pub fn get(&self, u: &SubsetIndex) -> Option<f64> {
        if u.size() > self.n {
            return Some(0.0);
        }
        self.values.get(u).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SubsetIndex, f64)> {
        self.values.iter().map(|(k, v)| (k, *v))
    }

    pub fn set(&mut self, u: SubsetIndex, value: f64) {
        self.values.insert(u, value);
    }
}

/// All `size`-element subsets of `1..=k` in lexicographic order.
pub fn subsets(k: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size == 0 || size > k {
        return out;
    }
    let mut cur: Vec<usize> = (1..=size).collect();
    loop {
        out.push(cur.clone());
        let mut i = size;
        while i > 0 && cur[i - 1] == k - size + i {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// `det A_u` for the principal submatrix on `u`.
pub fn alpha(a: &OverlapMatrix, u: &SubsetIndex) -> Result<f64> {
    if u.labels()[u.size() - 1] > a.size() {
        return Err(Error::InvalidSubset(format!("{u} exceeds k = {}", a.size())));
    }
    let sub = linalg::principal_submatrix(a.as_matrix(), &u.zero_based());
    let det = linalg::determinant(&sub);
    if math::abs(det.im) > IMAG_TOL {
        return Err(Error::ComplexDeterminant(det.im));
    }
    Ok(det.re)
}

/// Every `alpha_u` with `2 <= |u| <= n`: `tau(k, n)` entries.
pub fn all_alphas(a: &OverlapMatrix, n: usize) -> Result<VolumeInvariants> {
    let k = a.size();
    let mut values = BTreeMap::new();
    for size in 2..=n.min(k) {
        for labels in subsets(k, size) {
            let u = SubsetIndex(labels);
            let v = alpha(a, &u)?;
            values.insert(u, v);
        }
    }
    Ok(VolumeInvariants { k, n, values })
}

/// `s_i = sum_{|u| = i} (prod_{j in u} p_j) alpha_u`, with `alpha` of a singleton equal to 1.
pub fn symmetric_polys_from_alphas(v: &VolumeInvariants, probs: &[f64]) -> Result<SymmetricPolys> {
    if probs.len() != v.k {
        return Err(Error::ProbabilityCount {
            count: probs.len(),
            states: v.k,
        });
    }
    let mut s = alloc::vec![0.0; v.n + 1];
    s[0] = 1.0;
    if v.n >= 1 {
        s[1] = probs.iter().sum();
    }
    for size in 2..=v.n.min(v.k) {
        let mut acc = 0.0;
        for labels in subsets(v.k, size) {
            let weight: f64 = labels.iter().map(|&l| probs[l - 1]).product();
            let u = SubsetIndex(labels);
            let value = v
                .values
                .get(&u)
                .copied()
                .ok_or_else(|| Error::IncompleteInvariants(u.0.clone()))?;
            acc += weight * value;
        }
        s[size] = acc;
    }
    SymmetricPolys::new(s)
}

/// `dS/d alpha_u = (prod_{j in u} p_j) dS/ds_|u|`, evaluated on the ensemble's spectrum.
pub fn ds_dalpha(e: &Ensemble, u: &SubsetIndex) -> Result<f64> {
    if u.labels()[u.size() - 1] > e.len() {
        return Err(Error::InvalidSubset(format!("{u} exceeds k = {}", e.len())));
    }
    let x = calculus::ensemble_spectrum(e)?;
    if u.size() > x.len() {
        return Err(Error::IndexOutOfRange {
            index: u.size(),
            lo: 2,
            hi: x.len(),
        });
    }
    let weight: f64 = u.labels().iter().map(|&l| e.probs()[l - 1]).product();
    Ok(weight * calculus::ds_ds(&x, u.size())?)
}

/// The volume invariants of an ensemble in its ambient dimension.
pub fn ensemble_alphas(e: &Ensemble) -> Result<VolumeInvariants> {
    all_alphas(&ensemble::overlap_matrix(e), e.dimension())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CMatrix, C64};
    use alloc::vec;

    fn pair_with_overlap(r: f64, phase: f64) -> OverlapMatrix {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = C64::new(r * phase.cos(), r * phase.sin());
        m[(1, 0)] = m[(0, 1)].conj();
        OverlapMatrix::new(m).unwrap()
    }

    #[test]
    fn pair_minors() {
        let u = SubsetIndex::new(vec![1, 2], 2).unwrap();
        assert!((alpha(&pair_with_overlap(0.0, 0.0), &u).unwrap() - 1.0).abs() < 1e-15);
        assert!(alpha(&pair_with_overlap(1.0, 0.3), &u).unwrap().abs() < 1e-15);
        let r = 0.42;
        assert!((alpha(&pair_with_overlap(r, 1.1), &u).unwrap() - (1.0 - r * r)).abs() < 1e-15);
    }

    #[test]
    fn subset_validation() {
        assert!(SubsetIndex::new(vec![1], 3).is_err());
        assert!(SubsetIndex::new(vec![2, 1], 3).is_err());
        assert!(SubsetIndex::new(vec![1, 4], 3).is_err());
        assert!(SubsetIndex::new(vec![0, 1], 3).is_err());
    }

    #[test]
    fn alpha_counts() {
        let a = OverlapMatrix::new(CMatrix::identity(4, 4)).unwrap();
        assert_eq!(all_alphas(&a, 4).unwrap().len(), 11);
        assert_eq!(all_alphas(&a, 2).unwrap().len(), 6);
        let a3 = OverlapMatrix::new(CMatrix::identity(3, 3)).unwrap();
        let v = all_alphas(&a3, 3).unwrap();
        let keys: Vec<Vec<usize>> = v.iter().map(|(u, _)| u.labels().to_vec()).collect();
        assert_eq!(keys, vec![vec![1, 2], vec![1, 2, 3], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(5, 3).len(), 10);
        assert_eq!(subsets(3, 3), vec![vec![1, 2, 3]]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn orthonormal_triple_polys() {
        let a = OverlapMatrix::new(CMatrix::identity(3, 3)).unwrap();
        let v = all_alphas(&a, 3).unwrap();
        let s = symmetric_polys_from_alphas(&v, &[1.0 / 3.0; 3]).unwrap();
        assert!((s.get(1) - 1.0).abs() < 1e-15);
        assert!((s.get(2) - 1.0 / 3.0).abs() < 1e-15);
        assert!((s.get(3) - 1.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn incomplete_invariants_rejected() {
        let a = OverlapMatrix::new(CMatrix::identity(3, 3)).unwrap();
        let mut v = all_alphas(&a, 3).unwrap();
        v.values.remove(&SubsetIndex(vec![1, 3]));
        assert!(matches!(
            symmetric_polys_from_alphas(&v, &[1.0 / 3.0; 3]),
            Err(Error::IncompleteInvariants(_))
        ));
    }

    #[test]
    fn oversized_subsets_are_zero() {
        let a = OverlapMatrix::new(CMatrix::identity(4, 4)).unwrap();
        let v = all_alphas(&a, 2).unwrap();
        let u = SubsetIndex::new(vec![1, 2, 3], 4).unwrap();
        assert_eq!(v.get(&u), Some(0.0));
    }
}
