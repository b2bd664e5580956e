//! Generalized p-trigonometric functions and the basis properties of the
//! rescaled p-cosine family.

// `!(x > a)` is used deliberately: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fourier;
pub mod operator;
pub mod quadrature;
pub mod regularity;
pub mod thresholds;
pub mod trig;
pub mod zeta;

pub use error::{Error, Result};
pub use trig::{c_p, m_p, pi_p, u_p, v_p, EvalConfig, PExponent};
