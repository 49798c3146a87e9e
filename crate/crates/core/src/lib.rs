//! lexchoice learns which description of a named entity fits a context.
//!
//! The pipeline extracts (entity, description) pairs from text with
//! shallow patterns, aggregates them into per-entity profiles, tags each
//! description with synset offsets from a hypernym taxonomy, learns rules
//! correlating contextual indicators with those offsets, and uses the
//! predicted offsets to pick a description out of an entity's profile.

pub mod chooser;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod evaluator;
pub mod extractor;
pub mod indicators;
pub mod learner;
pub mod profiles;
pub mod taxonomy;

pub use error::{LexError, Result};
