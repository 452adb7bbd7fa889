//! Exact full-rank tests and rational rank realization for interval
//! matrices with rational endpoints.

pub mod cli;
pub mod error;
pub mod format;
pub mod lab;
pub mod linalg;
pub mod number;
pub mod realize;
pub mod rohn;

pub use error::{Error, Result};
