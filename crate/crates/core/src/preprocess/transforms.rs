use super::resources::{AntonymLexicon, Stoplist};
use super::stem::stem;
use super::Token;

const NEGATION_CUES: [&str; 4] = ["not", "no", "never", "n't"];
const NEGATION_WINDOW: usize = 3;

fn is_cue(token: &Token) -> bool {
    NEGATION_CUES.contains(&token.lower.as_str())
}

fn match_case(template: &str, word: &str) -> String {
    let mut chars = word.chars();
    match (template.chars().next(), chars.next()) {
        (Some(t), Some(first)) if t.is_uppercase() => first.to_uppercase().chain(chars).collect(),
        _ => word.to_string(),
    }
}

/// Rewrite negations as antonyms: "not happy" -> "sad".
///
/// Each cue looks ahead up to three tokens, stopping at the next cue, for
/// a noun, verb or adjective with a known antonym. When one is found the
/// cue is dropped and the target replaced; otherwise both stay as they
/// are. Resolution runs left to right and never overlaps.
pub fn apply_neg(tokens: &[Token], antonyms: &AntonymLexicon) -> Vec<Token> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if !is_cue(&tokens[i]) {
            out.push(tokens[i].clone());
            i += 1;
            continue;
        }
        let window_end = (i + NEGATION_WINDOW).min(tokens.len() - 1);
        let target = (i + 1..=window_end)
            .take_while(|&j| !is_cue(&tokens[j]))
            .find_map(|j| {
                let token = &tokens[j];
                let eligible = token.tag.is_some_and(|t| t.is_content());
                eligible
                    .then(|| antonyms.lookup(&token.lower))
                    .flatten()
                    .map(|antonym| (j, antonym))
            });
        match target {
            Some((j, antonym)) => {
                out.extend(tokens[i + 1..j].iter().cloned());
                let original = &tokens[j];
                out.push(Token {
                    surface: match_case(&original.surface, antonym),
                    lower: antonym.to_string(),
                    tag: original.tag,
                    stemmed: false,
                });
                i = j + 1;
            }
            None => {
                out.push(tokens[i].clone());
                i += 1;
            }
        }
    }
    out
}

/// Keep only nouns, verbs and adjectives.
pub fn apply_pos_filter(tokens: &[Token]) -> Vec<Token> {
    tokens
        .iter()
        .filter(|t| t.tag.is_some_and(|tag| tag.is_content()))
        .cloned()
        .collect()
}

pub fn apply_stop(tokens: &[Token], stoplist: &Stoplist) -> Vec<Token> {
    tokens
        .iter()
        .filter(|t| !stoplist.contains(&t.lower))
        .cloned()
        .collect()
}

/// Replace every token by its Snowball stem; tags are kept.
pub fn apply_stem(tokens: &[Token]) -> Vec<Token> {
    tokens
        .iter()
        .map(|t| {
            let s = stem(&t.lower);
            Token {
                surface: s.clone(),
                lower: s,
                tag: t.tag,
                stemmed: true,
            }
        })
        .collect()
}
