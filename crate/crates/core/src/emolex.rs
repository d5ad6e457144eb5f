//! Affect-intensity lexicon and per-snippet emotion vectors.
//!
//! Two vector flavours are built from the same lexicon. EmoLexi counts
//! lexicon hits per emotion; EmoInt sums their intensities. Both are raw
//! sums over the token stream.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Index};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{ClaimRecord, MAX_SNIPPETS};
use crate::error::{Error, Result};
use crate::preprocess::{run_pipeline_tokens, Pipeline, Resources};

const FIXTURE_LEXICON: &str = include_str!("../data/affect_fixture.tsv");

/// The eight basic emotions, in their fixed vector order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
}

impl Emotion {
    pub const COUNT: usize = 8;

    pub const ALL: [Emotion; 8] = [
        Emotion::Anger,
        Emotion::Anticipation,
        Emotion::Disgust,
        Emotion::Fear,
        Emotion::Joy,
        Emotion::Sadness,
        Emotion::Surprise,
        Emotion::Trust,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Emotion::Anger => "anger",
            Emotion::Anticipation => "anticipation",
            Emotion::Disgust => "disgust",
            Emotion::Fear => "fear",
            Emotion::Joy => "joy",
            Emotion::Sadness => "sadness",
            Emotion::Surprise => "surprise",
            Emotion::Trust => "trust",
        }
    }
}

impl FromStr for Emotion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Emotion::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown emotion {s:?}")))
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EmotionVector(pub [f64; Emotion::COUNT]);

impl EmotionVector {
    pub fn zeros() -> Self {
        Self::default()
    }

    pub fn as_array(&self) -> &[f64; Emotion::COUNT] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.0.iter_mut().for_each(|v| *v *= factor);
        self
    }
}

impl Index<Emotion> for EmotionVector {
    type Output = f64;

    fn index(&self, emotion: Emotion) -> &f64 {
        &self.0[emotion.index()]
    }
}

impl AddAssign for EmotionVector {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Add for EmotionVector {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

/// How snippets feed the emotion attention branch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmotionMode {
    /// Branch disabled.
    #[default]
    None,
    /// Hit counts.
    Lexi,
    /// Summed intensities.
    Int,
}

impl EmotionMode {
    pub const ALL: [EmotionMode; 3] = [EmotionMode::None, EmotionMode::Lexi, EmotionMode::Int];

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionMode::None => "none",
            EmotionMode::Lexi => "lexi",
            EmotionMode::Int => "int",
        }
    }

    /// Accepts `none`, `lexi`/`emolexi` and `int`/`emoint`; `;` or `,` separated.
    pub fn parse_list(s: &str) -> Result<Vec<EmotionMode>> {
        s.split([';', ','])
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect()
    }
}

impl FromStr for EmotionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" => Ok(EmotionMode::None),
            "lexi" | "emolexi" => Ok(EmotionMode::Lexi),
            "int" | "emoint" => Ok(EmotionMode::Int),
            other => Err(Error::InvalidArgument(format!(
                "unknown emotion mode {other:?} (expected none, lexi or int)"
            ))),
        }
    }
}

impl fmt::Display for EmotionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Lowercase term -> (emotion, intensity) pairs.
#[derive(Clone, Debug, Default)]
pub struct AffectLexicon {
    entries: HashMap<String, Vec<(Emotion, f64)>>,
    duplicates: usize,
}

impl AffectLexicon {
    /// Parse tab-separated lines of term, emotion and score.
    ///
    /// The score and emotion columns may come in either order; the
    /// distributed lexicon puts the score second. A first line whose first
    /// field is `term` is a header. A repeated (term, emotion) pair keeps
    /// the last score and is counted in [`duplicates`](Self::duplicates).
    pub fn parse(text: &str) -> Result<Self> {
        let mut lex = AffectLexicon::default();
        let mut seen_content = false;
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if !seen_content && fields[0].eq_ignore_ascii_case("term") {
                seen_content = true;
                continue;
            }
            seen_content = true;
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            if fields.len() != 3 {
                return Err(err(format!(
                    "expected 3 tab-separated fields, got {}",
                    fields.len()
                )));
            }
            let (emotion, score) = match fields[2].parse::<f64>() {
                Ok(score) => (fields[1], score),
                Err(_) => (
                    fields[2],
                    fields[1]
                        .parse::<f64>()
                        .map_err(|_| err(format!("no numeric score in {line:?}")))?,
                ),
            };
            let emotion: Emotion = emotion.parse().map_err(|e: Error| err(e.to_string()))?;
            if !(0.0..=1.0).contains(&score) {
                return Err(err(format!("intensity {score} outside [0, 1]")));
            }
            lex.insert(fields[0].to_lowercase(), emotion, score);
        }
        Ok(lex)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let lex = Self::parse(&text)?;
        if lex.duplicates > 0 {
            log::warn!(
                "{}: {} duplicate (term, emotion) pairs, last occurrence kept",
                path.display(),
                lex.duplicates
            );
        }
        Ok(lex)
    }

    /// The 40-term miniature lexicon used by tests and examples.
    pub fn fixture() -> Self {
        Self::parse(FIXTURE_LEXICON).expect("fixture lexicon is well formed")
    }

    fn insert(&mut self, term: String, emotion: Emotion, score: f64) {
        let pairs = self.entries.entry(term).or_default();
        match pairs.iter_mut().find(|(e, _)| *e == emotion) {
            Some(slot) => {
                slot.1 = score;
                self.duplicates += 1;
            }
            None => {
                pairs.push((emotion, score));
                pairs.sort_by_key(|(e, _)| *e);
            }
        }
    }

    pub fn get(&self, term: &str) -> &[(Emotion, f64)] {
        self.entries.get(term).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of distinct terms.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    /// Emotion vector for `tokens` under `mode`; `None` gives zeros.
    pub fn vector<S: AsRef<str>>(&self, tokens: &[S], mode: EmotionMode) -> EmotionVector {
        let mut v = EmotionVector::zeros();
        if mode == EmotionMode::None {
            return v;
        }
        for token in tokens {
            for &(emotion, score) in self.get(token.as_ref()) {
                v.0[emotion.index()] += match mode {
                    EmotionMode::Lexi => 1.0,
                    _ => score,
                };
            }
        }
        v
    }
}

/// Count lexicon hits per emotion.
pub fn emo_lexi<S: AsRef<str>>(tokens: &[S], lex: &AffectLexicon) -> EmotionVector {
    lex.vector(tokens, EmotionMode::Lexi)
}

/// Sum lexicon intensities per emotion.
pub fn emo_int<S: AsRef<str>>(tokens: &[S], lex: &AffectLexicon) -> EmotionVector {
    lex.vector(tokens, EmotionMode::Int)
}

/// One emotion vector per snippet slot, zero-padded to [`MAX_SNIPPETS`].
///
/// Snippets go through the pipeline minus any stemming, then lookup is on
/// lowercase tokens. With `normalize` each vector is divided by its
/// snippet's token count.
pub fn featurize_record(
    record: &ClaimRecord,
    lex: &AffectLexicon,
    mode: EmotionMode,
    pipeline: &Pipeline,
    resources: &Resources,
    normalize: bool,
) -> Result<Vec<EmotionVector>> {
    let view = pipeline.featurization_view();
    let mut out = vec![EmotionVector::zeros(); MAX_SNIPPETS];
    if mode == EmotionMode::None {
        return Ok(out);
    }
    for (slot, snippet) in out.iter_mut().zip(&record.snippets) {
        let tokens = run_pipeline_tokens(&snippet.text, &view, resources)?;
        let lower: Vec<&str> = tokens.iter().map(|t| t.lower.as_str()).collect();
        let v = lex.vector(&lower, mode);
        *slot = if normalize && !lower.is_empty() {
            v.scaled(1.0 / lower.len() as f64)
        } else {
            v
        };
    }
    Ok(out)
}
