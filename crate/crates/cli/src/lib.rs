//! File formats, parallel Monte-Carlo drivers and the `edepth` command line
//! for the `extremal-depth` crate.

pub mod cli;
pub mod export;
pub mod io;
pub mod parallel;
pub mod plotdata;

pub use cli::{run, Cli};
