//! Command-line toolkit around `spectral-core`: spec parsing, JSON and DOT
//! formats, the enumeration cache, the built-in corpus and exports.

pub mod cache;
pub mod corpus;
pub mod error;
pub mod export;
pub mod formats;
pub mod parse;
pub mod run;
