//! Bankruptcy risk from the language of 10-K MD&A sections.
//!
//! The pipeline runs from EDGAR index parsing and filing download
//! ([`ingest`]), through markup removal and MD&A extraction ([`textprep`]),
//! dictionary features ([`lexicon`]) and labelled datasets ([`dataset`]), to
//! logistic regression ([`glm`]) and evaluation ([`eval`]).

pub mod dataset;
pub mod eval;
pub mod glm;
pub mod ingest;
pub mod lexicon;
pub mod rng;
pub mod stats;
pub mod textprep;
