//! Numerical toolkit for the Mittag-Leffler function family and the
//! processes it governs: fractional relaxation with its spectral
//! representations, Wright/M-function kernels of time-fractional diffusion,
//! the fractional Poisson renewal process, and continuous-time random walk
//! rescaling operators with their universality identities.

pub mod error;
pub mod gamma;
pub mod ml;
pub mod numerics;
pub mod cli;
pub mod ctrw;
pub mod diffusion;
pub mod relaxation;
pub mod renewal;
pub mod wright;
pub mod rng;

pub use error::{MlqError, Result};
pub use numerics::{QuadResult, Tolerance};
