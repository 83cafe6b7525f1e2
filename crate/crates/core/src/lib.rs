//! Correlation kernels of the Dyson Brownian minor process and Warren's
//! process, with the tools used to check them: contour and series
//! representations, a brute-force discrete Eynard–Mehta oracle, and Monte
//! Carlo simulators.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contour_quadrature;
pub mod correlation;
pub mod error;
pub mod eynard_mehta_oracle;
pub mod minor_kernels;
pub mod monte_carlo;
pub mod quadrature;
pub mod special_functions;

pub use error::{Error, Result};
pub use minor_kernels::{
    compare_representations, kernel_adbm, kernel_bead, kernel_dbm, kernel_warren,
    representation_grid, spacelike_compare, BeadParam, Gauge, Kernel, KernelEvalConfig,
    KernelFamily, Representation, SpaceTimePoint, SpacelikeOrder,
};
