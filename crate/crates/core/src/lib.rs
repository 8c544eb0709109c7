//! Transcript normalization, synthetic telegraphic-sentence generation and
//! evaluation.
//!
//! The pipeline: [`chat_norm`] turns transcript tiers into clean sentences,
//! an external tagger annotates them as CoNLL-U ([`ud_parse`]), [`degrade`]
//! derives original/synthetic pairs, and [`evalkit`] / [`distinguish`]
//! measure completions and dataset separability. [`cli`] wires it together.

pub mod chat_norm;
pub mod cli;
pub mod contractions;
pub mod degrade;
pub mod distinguish;
pub mod error;
pub mod evalkit;
pub mod textmorph;
pub mod ud_parse;

pub use error::{Error, Result};
