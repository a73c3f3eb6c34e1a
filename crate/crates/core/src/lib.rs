//! Pairwise dependence analysis for high-dimensional time series:
//! ARMA-GARCH margins, t copulas, zenpaths and zenplots.

pub mod cli;
pub mod dataset;
pub mod dependence;
pub mod distributions;
pub mod error;
pub mod gof;
pub mod io;
pub mod margins;
pub mod optim;
pub mod synth;
pub mod zenpath;
pub mod zenplot;

pub use error::{Error, Result};
