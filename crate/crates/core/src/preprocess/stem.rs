//! English Snowball (Porter2) stemmer.
//!
//! Follows the classic published algorithm, including its table of
//! exceptional words, and tracks the R1/R2 regions the same way the NLTK
//! implementation does so that outputs agree on every word.

const VOWELS: &[char] = &['a', 'e', 'i', 'o', 'u', 'y'];
const DOUBLES: [&str; 9] = ["bb", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt"];
const LI_ENDING: &[char] = &['c', 'd', 'e', 'g', 'h', 'k', 'm', 'n', 'r', 't'];

const SPECIAL_WORDS: [(&str, &str); 40] = [
    ("skis", "ski"),
    ("skies", "sky"),
    ("dying", "die"),
    ("lying", "lie"),
    ("tying", "tie"),
    ("idly", "idl"),
    ("gently", "gentl"),
    ("ugly", "ugli"),
    ("early", "earli"),
    ("only", "onli"),
    ("singly", "singl"),
    ("sky", "sky"),
    ("news", "news"),
    ("howe", "howe"),
    ("atlas", "atlas"),
    ("cosmos", "cosmos"),
    ("bias", "bias"),
    ("andes", "andes"),
    ("inning", "inning"),
    ("innings", "inning"),
    ("outing", "outing"),
    ("outings", "outing"),
    ("canning", "canning"),
    ("cannings", "canning"),
    ("herring", "herring"),
    ("herrings", "herring"),
    ("earring", "earring"),
    ("earrings", "earring"),
    ("proceed", "proceed"),
    ("proceeds", "proceed"),
    ("proceeded", "proceed"),
    ("proceeding", "proceed"),
    ("exceed", "exceed"),
    ("exceeds", "exceed"),
    ("exceeded", "exceed"),
    ("exceeding", "exceed"),
    ("succeed", "succeed"),
    ("succeeds", "succeed"),
    ("succeeded", "succeed"),
    ("succeeding", "succeed"),
];

const STEP0: [&str; 3] = ["'s'", "'s", "'"];
const STEP1A: [&str; 6] = ["sses", "ied", "ies", "us", "ss", "s"];
const STEP1B: [&str; 6] = ["eedly", "ingly", "edly", "eed", "ing", "ed"];
const STEP2: [&str; 24] = [
    "ization", "ational", "fulness", "ousness", "iveness", "tional", "biliti", "lessli", "entli",
    "ation", "alism", "aliti", "ousli", "iviti", "fulli", "enci", "anci", "abli", "izer", "ator",
    "alli", "bli", "ogi", "li",
];
const STEP3: [&str; 9] = [
    "ational", "tional", "alize", "icate", "iciti", "ative", "ical", "ness", "ful",
];
const STEP4: [&str; 18] = [
    "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ism", "ate", "iti", "ous",
    "ive", "ize", "ion", "al", "er", "ic",
];

fn is_vowel(c: char) -> bool {
    VOWELS.contains(&c)
}

/// A word buffer plus its R1 and R2 suffix regions, each kept as its own
/// character string.
struct Buf {
    word: Vec<char>,
    r1: Vec<char>,
    r2: Vec<char>,
}

fn ends_with(s: &[char], suffix: &str) -> bool {
    let n = suffix.chars().count();
    s.len() >= n && s[s.len() - n..].iter().copied().eq(suffix.chars())
}

fn chop(s: &mut Vec<char>, n: usize) {
    let keep = s.len().saturating_sub(n);
    s.truncate(keep);
}

/// Replace the last `n` chars with `with`; a region shorter than `n`
/// becomes empty.
fn replace_tail(s: &mut Vec<char>, n: usize, with: &str) {
    if s.len() >= n {
        s.truncate(s.len() - n);
        s.extend(with.chars());
    } else {
        s.clear();
    }
}

impl Buf {
    fn ends_with(&self, suffix: &str) -> bool {
        ends_with(&self.word, suffix)
    }

    fn chop(&mut self, n: usize) {
        chop(&mut self.word, n);
        chop(&mut self.r1, n);
        chop(&mut self.r2, n);
    }

    fn replace(&mut self, suffix: &str, with: &str) {
        let n = suffix.chars().count();
        replace_tail(&mut self.word, n, with);
        replace_tail(&mut self.r1, n, with);
        replace_tail(&mut self.r2, n, with);
    }

    /// Like `replace`, but a too-short R2 becomes "e" rather than empty,
    /// as the reference implementation does for the -ate and -ive rewrites.
    fn replace_keep_e(&mut self, suffix: &str, with: &str) {
        let short_r2 = self.r2.len() < suffix.chars().count();
        self.replace(suffix, with);
        if short_r2 {
            self.r2 = vec!['e'];
        }
    }

    fn char_from_end(&self, k: usize) -> Option<char> {
        self.word.len().checked_sub(k).map(|i| self.word[i])
    }
}

fn region_after_vc(s: &[char]) -> Vec<char> {
    for i in 1..s.len() {
        if !is_vowel(s[i]) && is_vowel(s[i - 1]) {
            return s[i + 1..].to_vec();
        }
    }
    Vec::new()
}

fn regions(word: &[char]) -> (Vec<char>, Vec<char>) {
    let s: String = word.iter().collect();
    let r1 = if s.starts_with("gener") || s.starts_with("arsen") {
        word[5..].to_vec()
    } else if s.starts_with("commun") {
        word[6..].to_vec()
    } else {
        region_after_vc(word)
    };
    let r2 = region_after_vc(&r1);
    (r1, r2)
}

fn ends_in_short_syllable(w: &[char]) -> bool {
    match w.len() {
        0 | 1 => false,
        2 => is_vowel(w[0]) && !is_vowel(w[1]),
        n => {
            let (a, b, c) = (w[n - 3], w[n - 2], w[n - 1]);
            !is_vowel(c) && !matches!(c, 'w' | 'x' | 'Y') && is_vowel(b) && !is_vowel(a)
        }
    }
}

/// Stem one word. Input is lowercased first.
pub fn stem(word: &str) -> String {
    let lower = word.to_lowercase();
    if lower.chars().count() <= 2 {
        return lower;
    }
    if let Some((_, s)) = SPECIAL_WORDS.iter().find(|(w, _)| *w == lower) {
        return (*s).to_string();
    }

    let mut w: Vec<char> = lower
        .chars()
        .map(|c| match c {
            '\u{2019}' | '\u{2018}' | '\u{201B}' => '\'',
            c => c,
        })
        .collect();
    if w.first() == Some(&'\'') {
        w.remove(0);
    }
    if w.first() == Some(&'y') {
        w[0] = 'Y';
    }
    for i in 1..w.len() {
        if is_vowel(w[i - 1]) && w[i] == 'y' {
            w[i] = 'Y';
        }
    }
    let (r1, r2) = regions(&w);
    let mut b = Buf { word: w, r1, r2 };

    step0(&mut b);
    step1a(&mut b);
    step1b(&mut b);
    step1c(&mut b);
    step2(&mut b);
    step3(&mut b);
    step4(&mut b);
    step5(&mut b);

    b.word
        .into_iter()
        .map(|c| if c == 'Y' { 'y' } else { c })
        .collect()
}

fn step0(b: &mut Buf) {
    if let Some(suffix) = STEP0.iter().find(|s| b.ends_with(s)) {
        b.chop(suffix.chars().count());
    }
}

fn step1a(b: &mut Buf) {
    let Some(&suffix) = STEP1A.iter().find(|s| b.ends_with(s)) else {
        return;
    };
    match suffix {
        "sses" => b.chop(2),
        "ied" | "ies" => {
            if b.word.len() - 3 > 1 {
                b.chop(2);
            } else {
                b.chop(1);
            }
        }
        "s" => {
            let stem = &b.word[..b.word.len().saturating_sub(2)];
            if stem.iter().any(|&c| is_vowel(c)) {
                b.chop(1);
            }
        }
        _ => {}
    }
}

fn step1b(b: &mut Buf) {
    let Some(&suffix) = STEP1B.iter().find(|s| b.ends_with(s)) else {
        return;
    };
    let n = suffix.chars().count();
    if suffix == "eed" || suffix == "eedly" {
        if ends_with(&b.r1, suffix) {
            b.replace(suffix, "ee");
        }
        return;
    }
    if !b.word[..b.word.len() - n].iter().any(|&c| is_vowel(c)) {
        return;
    }
    b.chop(n);
    if b.ends_with("at") || b.ends_with("bl") || b.ends_with("iz") {
        b.word.push('e');
        b.r1.push('e');
        if b.word.len() > 5 || b.r1.len() >= 3 {
            b.r2.push('e');
        }
    } else if DOUBLES.iter().any(|d| b.ends_with(d)) {
        b.chop(1);
    } else if b.r1.is_empty() && ends_in_short_syllable(&b.word) {
        b.word.push('e');
        if !b.r1.is_empty() {
            b.r1.push('e');
        }
        if !b.r2.is_empty() {
            b.r2.push('e');
        }
    }
}

fn step1c(b: &mut Buf) {
    let n = b.word.len();
    if n > 2 && matches!(b.word[n - 1], 'y' | 'Y') && !is_vowel(b.word[n - 2]) {
        b.word[n - 1] = 'i';
        replace_tail(&mut b.r1, 1, "i");
        replace_tail(&mut b.r2, 1, "i");
    }
}

fn step2(b: &mut Buf) {
    let Some(&suffix) = STEP2.iter().find(|s| b.ends_with(s)) else {
        return;
    };
    if !ends_with(&b.r1, suffix) {
        return;
    }
    match suffix {
        "tional" => b.chop(2),
        "enci" | "anci" | "abli" => b.replace("i", "e"),
        "entli" => b.chop(2),
        "izer" | "ization" => b.replace(suffix, "ize"),
        "ational" | "ation" | "ator" => b.replace_keep_e(suffix, "ate"),
        "alism" | "aliti" | "alli" => b.replace(suffix, "al"),
        "fulness" => b.chop(4),
        "ousli" | "ousness" => b.replace(suffix, "ous"),
        "iveness" | "iviti" => b.replace_keep_e(suffix, "ive"),
        "biliti" | "bli" => b.replace(suffix, "ble"),
        "ogi" => {
            if b.char_from_end(4) == Some('l') {
                b.chop(1);
            }
        }
        "fulli" | "lessli" => b.chop(2),
        "li" => {
            if b.char_from_end(3).is_some_and(|c| LI_ENDING.contains(&c)) {
                b.chop(2);
            }
        }
        _ => unreachable!("unhandled step 2 suffix {suffix}"),
    }
}

fn step3(b: &mut Buf) {
    let Some(&suffix) = STEP3.iter().find(|s| b.ends_with(s)) else {
        return;
    };
    if !ends_with(&b.r1, suffix) {
        return;
    }
    match suffix {
        "tional" => b.chop(2),
        "ational" => b.replace(suffix, "ate"),
        "alize" => b.chop(3),
        "icate" | "iciti" | "ical" => b.replace(suffix, "ic"),
        "ful" | "ness" => b.chop(suffix.len()),
        "ative" => {
            if ends_with(&b.r2, suffix) {
                b.chop(5);
            }
        }
        _ => unreachable!("unhandled step 3 suffix {suffix}"),
    }
}

fn step4(b: &mut Buf) {
    let Some(&suffix) = STEP4.iter().find(|s| b.ends_with(s)) else {
        return;
    };
    if !ends_with(&b.r2, suffix) {
        return;
    }
    if suffix == "ion" {
        if matches!(b.char_from_end(4), Some('s' | 't')) {
            b.chop(3);
        }
    } else {
        b.chop(suffix.len());
    }
}

fn step5(b: &mut Buf) {
    let n = b.word.len();
    let double_l = b.r2.last() == Some(&'l') && n >= 2 && b.word[n - 2] == 'l';
    if double_l || b.r2.last() == Some(&'e') {
        b.word.pop();
    } else if b.r1.last() == Some(&'e') && n >= 4 {
        let w = &b.word;
        if is_vowel(w[n - 2])
            || matches!(w[n - 2], 'w' | 'x' | 'Y')
            || !is_vowel(w[n - 3])
            || is_vowel(w[n - 4])
        {
            b.word.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_stems() {
        for (word, expected) in [
            ("running", "run"),
            ("ponies", "poni"),
            ("run", "run"),
            ("caresses", "caress"),
            ("generously", "generous"),
            ("happiness", "happi"),
            ("skies", "sky"),
            ("news", "news"),
            ("consignment", "consign"),
            ("knavish", "knavish"),
            ("communism", "communism"),
            ("arsenal", "arsenal"),
            ("added", "ad"),
        ] {
            assert_eq!(stem(word), expected, "{word}");
        }
    }

    #[test]
    fn short_words_and_case() {
        assert_eq!(stem("at"), "at");
        assert_eq!(stem("Running"), "run");
        assert_eq!(stem(""), "");
    }

    #[test]
    fn apostrophes() {
        assert_eq!(stem("dog's"), "dog");
        assert_eq!(stem("dogs'"), "dog");
        assert_eq!(stem("'tis"), "tis");
        assert_eq!(stem("n't"), "n't");
    }

    #[test]
    fn y_handling() {
        assert_eq!(stem("youth"), "youth");
        assert_eq!(stem("sayings"), "say");
        assert_eq!(stem("cry"), "cri");
        assert_eq!(stem("by"), "by");
    }
}
