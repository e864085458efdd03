//! From a quadrature mirror filter to a wavelet basis, entirely in the
//! frequency domain, with every identity along the way measured numerically.
//!
//! The pipeline:
//!
//! 1. [`filters`]: the filter itself. QMF identity, conjugate mirror,
//!    built-ins (`haar`, `db4`, `shannon`), file format.
//! 2. [`circle_space`]: discretized `L^2` of the circle and the isometry
//!    pair `f(z) -> sqrt(2) m_i(z) f(z^2)` with its Cuntz relations.
//! 3. [`scaling`]: the scaling function as a truncated infinite product on
//!    a dyadic grid, with refinement and periodization residuals.
//! 4. [`mra`]: the multiresolution ladder. Level embeddings, dilation,
//!    the wavelet profile and its dilates/translates, Gram matrices, and the
//!    inverse transform to the time domain.
//! 5. [`cascade`]: the analysis/synthesis pyramid on coefficient windows
//!    (perfect reconstruction).
//! 6. [`report`] / [`verify`]: named residual checks and the profile-driven
//!    verification suite.

pub mod cascade;
pub mod circle_space;
pub mod filters;
pub mod mra;
pub mod report;
pub mod scaling;
pub mod verify;

mod num_fmt;

pub use cascade::Pyramid;
pub use circle_space::CircleFunction;
pub use filters::{Filter, FilterKind};
pub use mra::WaveletSystem;
pub use report::VerificationReport;
pub use scaling::{LineFunction, LineGrid};
pub use verify::{Profile, VerifyOptions};
