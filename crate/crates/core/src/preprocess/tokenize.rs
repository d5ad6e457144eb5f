use super::Token;

fn is_edge_punct(c: char) -> bool {
    !c.is_alphanumeric()
}

const NEGATION_CLITICS: [&str; 2] = ["n't", "n\u{2019}t"];

/// Whitespace tokenizer. Leading and trailing punctuation characters become
/// their own tokens, and a trailing "n't" clitic is split off
/// ("don't" -> "do", "n't"). Other contractions stay whole.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let start = chunk
            .char_indices()
            .find(|&(_, c)| !is_edge_punct(c))
            .map(|(i, _)| i);
        let Some(start) = start else {
            tokens.extend(chunk.chars().map(|c| Token::new(c.to_string())));
            continue;
        };
        let end = chunk
            .char_indices()
            .rev()
            .find(|&(_, c)| !is_edge_punct(c))
            .map(|(i, c)| i + c.len_utf8())
            .unwrap();

        tokens.extend(chunk[..start].chars().map(|c| Token::new(c.to_string())));
        let core = &chunk[start..end];
        let lower = core.to_lowercase();
        match NEGATION_CLITICS
            .iter()
            .find(|clitic| lower.ends_with(*clitic) && lower.len() > clitic.len())
        {
            Some(clitic) => {
                let split = core.len() - clitic.len();
                tokens.push(Token::new(&core[..split]));
                tokens.push(Token::new("n't"));
            }
            None => tokens.push(Token::new(core)),
        }
        tokens.extend(chunk[end..].chars().map(|c| Token::new(c.to_string())));
    }
    tokens
}
