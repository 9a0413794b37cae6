//! Stabilized cut discontinuous Galerkin methods for Poisson boundary-value
//! and two-phase interface problems on unfitted simplicial meshes.

// `!(x > 0.0)` is used deliberately so that NaN parameters are rejected
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::large_enum_variant,
    clippy::needless_range_loop
)]

pub mod assembly;
pub mod geometry;
pub mod linalg;
pub mod mesh;
pub mod quadrature;
pub mod real;
pub mod simplex;
pub mod space;
pub mod study;
