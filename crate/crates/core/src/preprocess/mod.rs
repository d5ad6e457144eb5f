//! Tokenization, tagging and the four affect-neutralizing transforms.
//!
//! A [`Pipeline`] is an ordered list of [`Step`]s, each applied at most
//! once. Steps that look at part-of-speech tags (NEG and POS) re-tag the
//! current token stream before running, so earlier deletions can change
//! the context later steps see. This is what makes `pos,stop` and
//! `stop,pos` distinguishable.

mod resources;
mod stem;
mod tagger;
mod tokenize;
mod transforms;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::ClaimRecord;
use crate::error::{Error, Result};

pub use resources::{AntonymLexicon, Resources, Stoplist};
pub use stem::stem;
pub use tagger::{tag_pos, Tag, TagLexicon};
pub use tokenize::tokenize;
pub use transforms::{apply_neg, apply_pos_filter, apply_stem, apply_stop};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Case-folded surface.
    pub lower: String,
    pub tag: Option<Tag>,
    /// Set once the token has been through the stemmer.
    pub stemmed: bool,
}

impl Token {
    pub fn new(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        Token {
            lower: surface.to_lowercase(),
            surface,
            tag: None,
            stemmed: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    Neg,
    Pos,
    Stop,
    Stem,
}

impl Step {
    pub const ALL: [Step; 4] = [Step::Neg, Step::Pos, Step::Stop, Step::Stem];

    pub fn name(self) -> &'static str {
        match self {
            Step::Neg => "neg",
            Step::Pos => "pos",
            Step::Stop => "stop",
            Step::Stem => "stem",
        }
    }

    fn needs_tags(self) -> bool {
        matches!(self, Step::Neg | Step::Pos)
    }
}

impl FromStr for Step {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "neg" => Ok(Step::Neg),
            "pos" => Ok(Step::Pos),
            "stop" => Ok(Step::Stop),
            "stem" => Ok(Step::Stem),
            _ => Err(Error::UnknownStep(s.trim().to_string())),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered transform steps; empty is the "none" baseline.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Pipeline {
    steps: Vec<Step>,
}

impl Pipeline {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        for (i, step) in steps.iter().enumerate() {
            if steps[..i].contains(step) {
                return Err(Error::DuplicateStep(step.name()));
            }
        }
        Ok(Pipeline { steps })
    }

    pub fn none() -> Self {
        Pipeline::default()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The same pipeline minus stemming: the token stream emotion lookups
    /// run on, since stems no longer match lexicon entries.
    pub fn featurization_view(&self) -> Pipeline {
        Pipeline {
            steps: self
                .steps
                .iter()
                .copied()
                .filter(|s| *s != Step::Stem)
                .collect(),
        }
    }

    /// Parse a `;`-separated list of pipelines, e.g. `none;pos;stop;pos,stop`.
    pub fn parse_list(s: &str) -> Result<Vec<Pipeline>> {
        s.split(';').map(str::parse).collect()
    }

    /// Fail with a configuration error if a step's resource is missing.
    pub fn check_resources(&self, resources: &Resources) -> Result<()> {
        for step in &self.steps {
            let missing = match step {
                Step::Neg if resources.antonyms.is_none() => Some("antonym lexicon"),
                Step::Stop if resources.stoplist.is_none() => Some("stoplist"),
                _ => None,
            }
            .or_else(|| (step.needs_tags() && resources.tagger.is_none()).then_some("tag lexicon"));
            if let Some(resource) = missing {
                return Err(Error::MissingResource {
                    step: step.name(),
                    resource,
                });
            }
        }
        Ok(())
    }
}

impl FromStr for Pipeline {
    type Err = Error;

    /// Comma-separated, order-significant step names. `""` and `none` are
    /// the empty pipeline.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.eq_ignore_ascii_case("none") {
            return Ok(Pipeline::none());
        }
        let steps = s.split(',').map(str::parse).collect::<Result<Vec<_>>>()?;
        Pipeline::new(steps)
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return f.write_str("none");
        }
        let names: Vec<&str> = self.steps.iter().map(|s| s.name()).collect();
        f.write_str(&names.join(","))
    }
}

impl Serialize for Pipeline {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Pipeline {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Apply the pipeline's steps to an already tokenized stream.
pub fn apply_steps(
    tokens: Vec<Token>,
    pipeline: &Pipeline,
    resources: &Resources,
) -> Result<Vec<Token>> {
    pipeline.check_resources(resources)?;
    let mut tokens = tokens;
    for step in pipeline.steps() {
        if step.needs_tags() {
            let tagger = resources.tagger.as_ref().expect("checked above");
            tokens = tag_pos(&tokens, tagger);
        }
        tokens = match step {
            Step::Neg => apply_neg(&tokens, resources.antonyms.as_ref().expect("checked above")),
            Step::Pos => apply_pos_filter(&tokens),
            Step::Stop => apply_stop(&tokens, resources.stoplist.as_ref().expect("checked above")),
            Step::Stem => apply_stem(&tokens),
        };
    }
    Ok(tokens)
}

/// Tokenize `text` and run the pipeline over it.
pub fn run_pipeline_tokens(
    text: &str,
    pipeline: &Pipeline,
    resources: &Resources,
) -> Result<Vec<Token>> {
    apply_steps(tokenize(text), pipeline, resources)
}

/// Tokenize, transform and re-join with single spaces.
pub fn run_pipeline(text: &str, pipeline: &Pipeline, resources: &Resources) -> Result<String> {
    let tokens = run_pipeline_tokens(text, pipeline, resources)?;
    Ok(detokenize(&tokens))
}

pub fn detokenize(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| t.surface.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Which texts of a record a pipeline is applied to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApplyTo {
    #[default]
    Both,
    Claim,
    Evidence,
}

impl FromStr for ApplyTo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "both" => Ok(ApplyTo::Both),
            "claim" => Ok(ApplyTo::Claim),
            "evidence" => Ok(ApplyTo::Evidence),
            other => Err(Error::InvalidArgument(format!(
                "unknown target {other:?} (expected both, claim or evidence)"
            ))),
        }
    }
}

/// Run the pipeline over a record's claim and/or snippets.
pub fn preprocess_record(
    record: &ClaimRecord,
    pipeline: &Pipeline,
    resources: &Resources,
    apply_to: ApplyTo,
) -> Result<ClaimRecord> {
    let mut out = record.clone();
    if apply_to != ApplyTo::Evidence {
        out.claim_text = run_pipeline(&record.claim_text, pipeline, resources)?;
    }
    if apply_to != ApplyTo::Claim {
        for snippet in &mut out.snippets {
            snippet.text = run_pipeline(&snippet.text, pipeline, resources)?;
        }
    }
    Ok(out)
}
