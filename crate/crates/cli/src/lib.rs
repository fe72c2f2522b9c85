//! Library half of the command-line tool, shared with the fuzz targets.

pub mod config;
