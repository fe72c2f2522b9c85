//! Two-bit bit flipping (TBF) decoders for LDPC codes on the binary symmetric
//! channel.
//!
//! The crate covers the whole design loop: Tanner graph handling
//! ([`tanner`]), the TBF algorithm class and its decoder ([`tbf`]), trapping
//! set profile construction ([`profiles`]), algorithm ranking and collection
//! selection ([`selection`]), and the parallel decoder with its Monte Carlo
//! and exhaustive evaluation harness ([`decoder`]).

pub mod tanner;
pub mod tbf;
pub mod profiles;
pub mod selection;
pub mod decoder;
