//! File output, table reproduction and the command line for
//! [`schrelax_core`].

pub mod cli;
pub mod io;
pub mod tables;
