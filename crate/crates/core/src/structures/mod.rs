//! ω^n-automatic structures: presentations, convolution, a first-order
//! compiler and model checker, and builders for concrete structures.

mod builders;
mod convolve;
mod formula;
mod presentation;

pub use builders::{
    build_bn, build_lex, build_ln, build_omega_omega, compare_sequences, omega_omega_code, oracle_in_in,
};
pub use convolve::{convolve, unconvolve};
pub use formula::Formula;
pub use presentation::{diagonal, CheckOutcome, CheckStatus, Presentation, Report};
