//! The screw function Ψ(t) of the Riemann xi-function, evaluated from the
//! primes and from the zeros, together with the diagnostics built on it:
//! explicit-formula identities, moments and Li coefficients, Hankel
//! determinants and the spectra of the associated integral operator.

pub mod dd;
pub mod error;
pub mod mangoldt;
pub mod moments;
pub mod operator;
pub mod quad;
pub mod specfun;
pub mod weil;
pub mod zerotable;

pub use error::{Error, ErrorClass, Result};
