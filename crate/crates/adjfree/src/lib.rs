//! Experiment drivers, CSV/JSON formats and the `adjfree` command line on
//! top of [`adjfree_core`].

pub mod cli;
pub mod experiments;
pub mod io;
pub mod parallel;
pub mod selfcheck;
