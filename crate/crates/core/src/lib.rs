//! Claim/evidence veracity classification with affect-neutralizing
//! preprocessing and an emotion attention branch.
//!
//! The crate is organised as a pipeline: [`corpus`] reads and splits
//! records, [`preprocess`] rewrites their text, [`emolex`] turns snippets
//! into emotion vectors, [`model`] trains the attention classifier and
//! [`eval`] runs the claim-versus-evidence experiments.

pub mod corpus;
pub mod emolex;
pub mod error;
pub mod eval;
pub mod model;
pub mod preprocess;

pub use corpus::{ClaimRecord, DatasetSplit, RawLabel, Snippet, Source, VeracityLabel};
pub use emolex::{AffectLexicon, Emotion, EmotionMode, EmotionVector};
pub use error::{Error, Result};
pub use eval::{ExperimentResult, NamedDataset, Report};
pub use model::{InputMode, Model, TextContext, TrainConfig};
pub use preprocess::{Pipeline, Resources, Step};
