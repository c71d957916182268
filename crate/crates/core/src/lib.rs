//! Exact simulation of the discrete-time Hadamard walk on the line, a
//! Bessel-function oracle for its long-time distribution, and the observables
//! used to study survival-probability decay and coin-position entanglement.

pub mod analytic;
pub mod cli;
pub mod observables;
pub mod walk;

pub use num_complex::Complex64;
