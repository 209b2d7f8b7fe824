//! Dependency-parse driven information extraction and evaluation.
//!
//! The engine extracts named entities (noun collection + taxonomy hypernym
//! lookup) and subject–predicate–object triples (a rule cascade over
//! enhanced dependency graphs) from parsed corpora, builds sequence-labeling
//! datasets (gazetteer annotation, BILUO→BIO conversion, SRL frame
//! broadcasting, class weights), and scores heuristic or externally produced
//! predictions against keyword/position benchmarks with a custom metric
//! suite.
//!
//! The `depex` binary wires these pieces into batch commands; see the
//! repository README for the file formats and CLI usage.

pub mod corpus;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod ner;
pub mod parser_client;
pub mod report;
pub mod runner;
pub mod srl;

pub use error::{Error, Result};
