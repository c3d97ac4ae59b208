//! File formats, reports and the command-line front end for
//! [`poolforge_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod report;
pub mod trec_io;

pub use error::{Error, Result};
pub use poolforge_core;
