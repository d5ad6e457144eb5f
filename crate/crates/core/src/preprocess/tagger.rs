use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Token;
use crate::error::{Error, Result};

const BUNDLED_TAG_LEXICON: &str = include_str!("../../data/tag_lexicon.tsv");

/// Coarse part-of-speech tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Other,
}

impl Tag {
    pub fn code(self) -> &'static str {
        match self {
            Tag::Noun => "N",
            Tag::Verb => "V",
            Tag::Adjective => "ADJ",
            Tag::Adverb => "ADV",
            Tag::Other => "O",
        }
    }

    /// Nouns, verbs and adjectives.
    pub fn is_content(self) -> bool {
        matches!(self, Tag::Noun | Tag::Verb | Tag::Adjective)
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N" => Ok(Tag::Noun),
            "V" => Ok(Tag::Verb),
            "ADJ" => Ok(Tag::Adjective),
            "ADV" => Ok(Tag::Adverb),
            "O" => Ok(Tag::Other),
            other => Err(Error::InvalidArgument(format!("unknown tag {other:?}"))),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Word -> most frequent coarse tag.
#[derive(Clone, Debug, Default)]
pub struct TagLexicon {
    entries: HashMap<String, Tag>,
}

const DETERMINERS: [&str; 14] = [
    "a", "an", "the", "this", "that", "these", "those", "my", "your", "his", "her", "its", "our",
    "their",
];

impl TagLexicon {
    /// Parse `word<TAB>tag` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (word, tag) = line.split_once('\t').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected word<TAB>tag".into(),
            })?;
            let tag = tag.trim().parse().map_err(|e: Error| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            entries.insert(word.trim().to_lowercase(), tag);
        }
        Ok(TagLexicon { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_TAG_LEXICON).expect("bundled tag lexicon is well formed")
    }

    pub fn get(&self, word: &str) -> Option<Tag> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Tag one token given its left neighbour.
    fn tag_one(&self, token: &Token, prev: Option<&Token>) -> Tag {
        if !token.lower.chars().any(char::is_alphabetic) {
            return Tag::Other;
        }
        if let Some(tag) = self.get(&token.lower) {
            return tag;
        }
        let word = token.lower.as_str();
        let after_determiner = prev.is_some_and(|p| DETERMINERS.contains(&p.lower.as_str()));
        // Adverbs do not follow determiners: "the zorbly cat".
        if word.ends_with("ly") {
            return if after_determiner {
                Tag::Adjective
            } else {
                Tag::Adverb
            };
        }
        if word.ends_with("ing") || word.ends_with("ed") {
            return Tag::Verb;
        }
        if ["ous", "ful", "ive", "able"]
            .iter()
            .any(|s| word.ends_with(s))
        {
            return Tag::Adjective;
        }
        // Capitalized mid-sentence words are names, and the default for
        // anything else unknown is also a noun.
        Tag::Noun
    }
}

/// Tag every token in context. Tokens that were stemmed keep the tag they
/// received before stemming.
pub fn tag_pos(tokens: &[Token], lexicon: &TagLexicon) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::with_capacity(tokens.len());
    for (i, token) in tokens.iter().enumerate() {
        let mut token = token.clone();
        if !(token.stemmed && token.tag.is_some()) {
            let prev = i.checked_sub(1).map(|j| &tokens[j]);
            token.tag = Some(lexicon.tag_one(&token, prev));
        }
        out.push(token);
    }
    out
}
