//! Zero-divisor graphs of `Z_n`: construction, divisor partitions, exact
//! quotient spectra, and continuous-time quantum walk state transfer.

pub mod arithmetic;
#[cfg(feature = "oracle")]
pub mod checks;
pub mod classify;
pub mod error;
pub mod graph;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod partitions;
pub mod poly;
pub mod spectral;
pub mod walk;

pub use error::{Error, Result};
