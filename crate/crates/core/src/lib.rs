//! Coherence quantifiers for small density matrices.
//!
//! * [`measures`]: l1-norm and relative entropy coherence, qubit closed forms.
//! * [`roof`]: convex-roof upper bounds by optimizing over pure-state
//!   decompositions, plus a brute-force qubit oracle.
//! * [`decide`]: exact decision of whether the l1 coherence of a qutrit state
//!   equals its convex roof, with witness decompositions or certificates.
//! * [`matcore`]: the Hermitian linear algebra underneath.
//! * [`cli`]: the `coherence-roof` command line, usable as a library.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod cli;
pub mod decide;
pub mod error;
pub mod matcore;
pub mod measures;
pub mod random;
pub mod roof;

pub use error::{Error, Result};
pub use matcore::{ComplexHermitian, DensityMatrix, Spectrum};
pub use measures::{BlochVector, PureStateFunctional};
pub use roof::{PureEnsemble, RoofOptions, RoofResult};
