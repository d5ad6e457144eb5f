//! Claim/evidence records, veracity labels and dataset plumbing.
//!
//! A [`ClaimRecord`] pairs one claim with up to ten ranked evidence snippets.
//! Source datasets use a five-point veracity scale which is collapsed onto
//! three classes before training.

mod io;
mod split;
mod synthetic;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{emit, emit_to_path, emit_to_string, ingest, ingest_reader, ingest_str};
pub use split::{split, DatasetSplit};
pub use synthetic::{generate_synthetic, SYNTHETIC_DEFAULT_VOCAB};

/// Maximum number of evidence snippets per claim.
pub const MAX_SNIPPETS: usize = 10;

/// The five-point veracity scale used by the fact-checking sources.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RawLabel {
    False,
    MostlyFalse,
    Mixture,
    MostlyTrue,
    True,
}

impl RawLabel {
    pub const ALL: [RawLabel; 5] = [
        RawLabel::False,
        RawLabel::MostlyFalse,
        RawLabel::Mixture,
        RawLabel::MostlyTrue,
        RawLabel::True,
    ];

    /// Canonical wire spelling.
    pub fn as_str(self) -> &'static str {
        match self {
            RawLabel::False => "false",
            RawLabel::MostlyFalse => "mostly false",
            RawLabel::Mixture => "mixture",
            RawLabel::MostlyTrue => "mostly true",
            RawLabel::True => "true",
        }
    }
}

impl FromStr for RawLabel {
    type Err = Error;

    /// Case-insensitive; underscores, hyphens and runs of spaces are interchangeable.
    fn from_str(s: &str) -> Result<Self> {
        let normalized = s
            .to_lowercase()
            .replace(['_', '-'], " ")
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ");
        match normalized.as_str() {
            "false" => Ok(RawLabel::False),
            "mostly false" => Ok(RawLabel::MostlyFalse),
            "mixture" => Ok(RawLabel::Mixture),
            "mostly true" => Ok(RawLabel::MostlyTrue),
            "true" => Ok(RawLabel::True),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

impl fmt::Display for RawLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Collapsed three-class label. Class indices follow `[False, Mixture, True]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VeracityLabel {
    False,
    Mixture,
    True,
}

impl VeracityLabel {
    pub const COUNT: usize = 3;
    pub const ALL: [VeracityLabel; 3] = [
        VeracityLabel::False,
        VeracityLabel::Mixture,
        VeracityLabel::True,
    ];

    pub fn class_index(self) -> usize {
        match self {
            VeracityLabel::False => 0,
            VeracityLabel::Mixture => 1,
            VeracityLabel::True => 2,
        }
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    /// The raw label with the same name, which collapses back onto `self`.
    pub fn natural_raw(self) -> RawLabel {
        match self {
            VeracityLabel::False => RawLabel::False,
            VeracityLabel::Mixture => RawLabel::Mixture,
            VeracityLabel::True => RawLabel::True,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VeracityLabel::False => "false",
            VeracityLabel::Mixture => "mixture",
            VeracityLabel::True => "true",
        }
    }
}

impl fmt::Display for VeracityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Collapse the five-point scale onto three classes, keeping the endpoints
/// and folding each "mostly" label into its neighbouring endpoint.
pub fn collapse_label(raw: RawLabel) -> VeracityLabel {
    match raw {
        RawLabel::False | RawLabel::MostlyFalse => VeracityLabel::False,
        RawLabel::Mixture => VeracityLabel::Mixture,
        RawLabel::MostlyTrue | RawLabel::True => VeracityLabel::True,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    Snopes,
    PolitiFact,
    Synthetic,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Snopes => "snopes",
            Source::PolitiFact => "pomt",
            Source::Synthetic => "synthetic",
        }
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "snopes" | "snes" => Ok(Source::Snopes),
            "pomt" | "politifact" => Ok(Source::PolitiFact),
            "synthetic" => Ok(Source::Synthetic),
            other => Err(Error::InvalidArgument(format!("unknown source {other:?}"))),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snippet {
    /// Search rank, 1-based.
    pub rank: u8,
    /// Snippet text; empty means the result was missing.
    pub text: String,
}

impl Snippet {
    pub fn new(rank: u8, text: impl Into<String>) -> Self {
        Snippet {
            rank,
            text: text.into(),
        }
    }

    pub fn is_missing(&self) -> bool {
        self.text.trim().is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimRecord {
    pub id: String,
    pub claim_text: String,
    pub raw_label: RawLabel,
    pub label: VeracityLabel,
    pub snippets: Vec<Snippet>,
    pub source: Source,
}

impl ClaimRecord {
    /// Validates snippet ranks and sorts snippets by rank. The collapsed
    /// label is derived from `raw_label`.
    pub fn new(
        id: impl Into<String>,
        claim_text: impl Into<String>,
        raw_label: RawLabel,
        mut snippets: Vec<Snippet>,
        source: Source,
    ) -> Result<Self> {
        let id = id.into();
        let invalid = |message: String| Error::InvalidRecord {
            id: id.clone(),
            message,
        };
        if snippets.len() > MAX_SNIPPETS {
            return Err(invalid(format!(
                "{} snippets, at most {MAX_SNIPPETS} allowed",
                snippets.len()
            )));
        }
        snippets.sort_by_key(|s| s.rank);
        for (i, snippet) in snippets.iter().enumerate() {
            if snippet.rank == 0 || usize::from(snippet.rank) > MAX_SNIPPETS {
                return Err(invalid(format!(
                    "snippet rank {} outside 1..={MAX_SNIPPETS}",
                    snippet.rank
                )));
            }
            if i > 0 && snippets[i - 1].rank == snippet.rank {
                return Err(invalid(format!("duplicate snippet rank {}", snippet.rank)));
            }
        }
        Ok(ClaimRecord {
            claim_text: claim_text.into(),
            raw_label,
            label: collapse_label(raw_label),
            snippets,
            source,
            id,
        })
    }

    /// Keep only the `k` best-ranked snippets.
    pub fn truncated(&self, k: usize) -> ClaimRecord {
        let mut record = self.clone();
        record.snippets.truncate(k);
        record
    }
}
