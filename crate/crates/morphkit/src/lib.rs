//! Command line, file handling and the local HTTP service around
//! `morphkit-core`.

pub mod cli;
pub mod payload;
pub mod pipeline;
pub mod serve;
pub mod tokenize;
