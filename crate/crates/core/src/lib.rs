//! Harmonic extensions of boundary correspondences onto Jordan curves.
//!
//! A nondecreasing `f` with `f(t + 2 pi) = f(t) + l` and the arc-length
//! parameterization `g` of a curve give boundary data `F = g o f` on the unit
//! circle. The crate evaluates the Poisson extension `w = P[F]`, the boundary
//! operator `T[f]` whose positivity makes `w` a diffeomorphism, the
//! quasiconformality constants of `w`, and checks injectivity on grids.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod curve;
pub mod error;
pub mod field;
pub mod geom;
pub mod hilbert;
pub mod map;
pub mod poisson;
pub mod qc;
pub mod verify;

pub use curve::{CurveSpec, JordanCurve};
pub use error::{Error, Result};
pub use field::CircleField;
pub use map::{compose_with_curve, BoundaryCorrespondence, BoundaryMap, MapSpec};
pub use poisson::HarmonicExtension;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/boundary-maps.md")]
    mod boundary_maps {}
    #[doc = include_str!("../../../book/src/extension.md")]
    mod extension {}
    #[doc = include_str!("../../../book/src/boundary-operator.md")]
    mod boundary_operator {}
    #[doc = include_str!("../../../book/src/quasiconformality.md")]
    mod quasiconformality {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
