//! Volume invariants, entropy derivatives and subentropy of finite ensembles
//! of pure quantum states.
//!
//! The von Neumann entropy of an ensemble `{p_i, |psi_i>}` depends on the
//! states only through the principal minors `alpha_u = det A_u` of the overlap
//! matrix `A`, via the symmetric polynomials of the spectrum:
//!
//! ```text
//! s_i = sum_{|u| = i} p_u1 ... p_ui alpha_u,   dS/ds_q > 0 for q >= 2
//! ```
//!
//! so each squared volume is a monotone measure of redundancy. This crate
//! computes all of these objects and the derivative identities around them.
//!
//! The crate is `no_std` and needs only `alloc`.
//!
//! ```
//! use ensemble_vol_core::{calculus, spectral::Spectrum};
//!
//! let x = Spectrum::new(vec![0.6, 0.4]).unwrap();
//! let d = calculus::ds_ds(&x, 2).unwrap();
//! assert!((d - 1.5f64.ln() / 0.2).abs() < 1e-12);
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod calculus;
pub mod ensemble;
pub mod error;
pub mod explorer;
pub mod geometry;
pub mod linalg;
pub mod math;
pub mod spectral;
pub mod volumes;

pub use ensemble::{Ensemble, GramMatrix, OverlapMatrix, ProbMode, PureState};
pub use error::{Error, Result};
pub use spectral::{Spectrum, SymmetricPolys};
pub use volumes::{SubsetIndex, VolumeInvariants};
