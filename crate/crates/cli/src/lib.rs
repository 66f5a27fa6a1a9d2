//! File formats, timed census runs and the `commvar` command line on top of
//! [`commvar_core`].

pub mod census;
pub mod cli;
pub mod format;
