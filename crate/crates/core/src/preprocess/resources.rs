use std::collections::{HashMap, HashSet};
use std::path::Path;

use super::stem::stem;
use super::tagger::TagLexicon;
use crate::error::{Error, Result};

const BUNDLED_STOPWORDS: &str = include_str!("../../data/stopwords_en.txt");
const BUNDLED_ANTONYMS: &str = include_str!("../../data/antonyms_en.tsv");

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Lowercase stopwords, one per line in the source file.
#[derive(Clone, Debug, Default)]
pub struct Stoplist {
    words: HashSet<String>,
}

impl Stoplist {
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_lowercase)
            .collect();
        Stoplist { words }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::parse(&read(path.as_ref())?))
    }

    /// The vendored 179-word English list.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_STOPWORDS)
    }

    pub fn bundled_source() -> &'static str {
        BUNDLED_STOPWORDS
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for Stoplist {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Stoplist {
            words: iter.into_iter().map(|s| s.into().to_lowercase()).collect(),
        }
    }
}

/// Lowercase word -> lowercase antonym. Lookups fall back to the stem of
/// the word, matched against the stems of the entries.
#[derive(Clone, Debug, Default)]
pub struct AntonymLexicon {
    entries: HashMap<String, String>,
    by_stem: HashMap<String, String>,
}

impl AntonymLexicon {
    pub fn from_pairs<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut entries = HashMap::new();
        for (word, antonym) in pairs {
            let word = word.into().to_lowercase();
            let antonym = antonym.into().to_lowercase();
            if word == antonym {
                return Err(Error::InvalidArgument(format!(
                    "antonym entry maps {word:?} to itself"
                )));
            }
            entries.insert(word, antonym);
        }
        let mut keys: Vec<&String> = entries.keys().collect();
        keys.sort();
        let mut by_stem = HashMap::new();
        for key in keys {
            by_stem
                .entry(stem(key))
                .or_insert_with(|| entries[key].clone());
        }
        Ok(AntonymLexicon { entries, by_stem })
    }

    /// Parse `word<TAB>antonym` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (word, antonym) = line.split_once('\t').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected word<TAB>antonym".into(),
            })?;
            let (word, antonym) = (word.trim(), antonym.trim());
            if word.eq_ignore_ascii_case(antonym) {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("{word:?} maps to itself"),
                });
            }
            pairs.push((word.to_string(), antonym.to_string()));
        }
        Self::from_pairs(pairs)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read(path.as_ref())?)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_ANTONYMS).expect("bundled antonym lexicon is well formed")
    }

    pub fn lookup(&self, lower: &str) -> Option<&str> {
        self.entries
            .get(lower)
            .or_else(|| self.by_stem.get(&stem(lower)))
            .map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Immutable lexical resources shared by all pipeline steps. A step whose
/// resource is absent fails with a configuration error naming the step.
#[derive(Clone, Debug, Default)]
pub struct Resources {
    pub tagger: Option<TagLexicon>,
    pub stoplist: Option<Stoplist>,
    pub antonyms: Option<AntonymLexicon>,
}

impl Resources {
    /// Everything vendored with the crate.
    pub fn bundled() -> Self {
        Resources {
            tagger: Some(TagLexicon::bundled()),
            stoplist: Some(Stoplist::bundled()),
            antonyms: Some(AntonymLexicon::bundled()),
        }
    }
}
