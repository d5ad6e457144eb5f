use std::collections::HashMap;

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes
        .iter()
        .fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

/// Token -> embedding row. Known tokens take rows `0..len`; anything else
/// hashes into one of `buckets` rows after them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocab {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
    buckets: usize,
}

impl Vocab {
    /// Tokens in first-seen order.
    pub fn build<'a>(tokens: impl IntoIterator<Item = &'a str>, buckets: usize) -> Self {
        let mut vocab = Vocab {
            buckets,
            ..Vocab::default()
        };
        for token in tokens {
            if !vocab.index.contains_key(token) {
                vocab.index.insert(token.to_string(), vocab.tokens.len());
                vocab.tokens.push(token.to_string());
            }
        }
        vocab
    }

    pub fn from_tokens(tokens: Vec<String>, buckets: usize) -> Self {
        let index = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocab {
            tokens,
            index,
            buckets,
        }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn buckets(&self) -> usize {
        self.buckets
    }

    /// Rows in the embedding table.
    pub fn rows(&self) -> usize {
        self.tokens.len() + self.buckets
    }

    /// Embedding row for `token`, or `None` for an unseen token when there
    /// are no hash buckets.
    pub fn row(&self, token: &str) -> Option<usize> {
        match self.index.get(token) {
            Some(&i) => Some(i),
            None if self.buckets > 0 => {
                Some(self.tokens.len() + (fnv1a(token.as_bytes()) % self.buckets as u64) as usize)
            }
            None => None,
        }
    }

    pub fn rows_for<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<usize> {
        tokens.iter().filter_map(|t| self.row(t.as_ref())).collect()
    }
}
