//! Synthetic claim/evidence corpora where the label is only recoverable
//! from the claim and its evidence together.
//!
//! Opinions sit on a four-step scale: awful, bad, good, great. Each record
//! is about one entity. Most of its snippets report a single opinion
//! of that entity; the rest are distractors about other entities. The
//! claim states its own opinion of the entity, and the label is their
//! agreement: the same opinion is true, the same direction with a
//! different strength is a mixture (overstated or understated), and the
//! opposite direction is false.
//!
//! The evidence is drawn before the label and the claim is then written to
//! realize the label, so evidence alone carries no information about it.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ClaimRecord, RawLabel, Snippet, Source, VeracityLabel, MAX_SNIPPETS};
use crate::error::{Error, Result};

pub const SYNTHETIC_DEFAULT_VOCAB: usize = 40;

/// Weakest to strongest: negative half first.
const SCALE: [&str; 4] = ["awful", "bad", "good", "great"];
const SPEAKERS: [&str; 4] = ["reports", "sources", "officials", "witnesses"];
const FIXED_WORDS: usize = SCALE.len() + SPEAKERS.len() + 2; // + "say", "is"
/// Snippets about the claimed entity; the remainder are distractors.
const MIN_ON_TOPIC: usize = 6;

const ONSETS: [&str; 12] = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "t", "z"];
const NUCLEI: [&str; 5] = ["a", "e", "i", "o", "u"];

/// Deterministic pronounceable pseudo-words: CV-CV-C shapes, all distinct.
fn entity_names(count: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(count);
    'outer: for (i, a) in ONSETS.iter().enumerate() {
        for b in NUCLEI {
            for c in ONSETS.iter().skip(i % 3) {
                for d in NUCLEI {
                    if names.len() == count {
                        break 'outer;
                    }
                    names.push(format!("{a}{b}{c}{d}x"));
                }
            }
        }
    }
    names
}

fn positive(level: usize) -> bool {
    level >= SCALE.len() / 2
}

/// The other strength in the same direction: awful <-> bad, good <-> great.
fn same_direction(level: usize) -> usize {
    level ^ 1
}

/// Generate `n` balanced synthetic records over a vocabulary of
/// `vocab_size` distinct word types.
pub fn generate_synthetic(n: usize, vocab_size: usize, seed: u64) -> Result<Vec<ClaimRecord>> {
    if n < 30 {
        return Err(Error::InvalidArgument(format!(
            "synthetic corpus needs n >= 30, got {n}"
        )));
    }
    if vocab_size < 20 {
        return Err(Error::InvalidArgument(format!(
            "synthetic corpus needs vocab_size >= 20, got {vocab_size}"
        )));
    }
    let entities = entity_names(vocab_size - FIXED_WORDS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut labels: Vec<VeracityLabel> = (0..n)
        .map(|i| VeracityLabel::ALL[i % VeracityLabel::COUNT])
        .collect();
    labels.shuffle(&mut rng);

    let mut records = Vec::with_capacity(n);
    for (i, label) in labels.into_iter().enumerate() {
        // Evidence first, independent of the label.
        let entity = entities.choose(&mut rng).unwrap();
        let evidence_level = rng.random_range(0..SCALE.len());
        let on_topic = rng.random_range(MIN_ON_TOPIC..=MAX_SNIPPETS - 2);
        let mut texts = Vec::with_capacity(MAX_SNIPPETS);
        for slot in 0..MAX_SNIPPETS {
            let speaker = SPEAKERS.choose(&mut rng).unwrap();
            let (about, level) = if slot < on_topic {
                (entity, evidence_level)
            } else {
                let other = loop {
                    let e = entities.choose(&mut rng).unwrap();
                    if e != entity {
                        break e;
                    }
                };
                (other, rng.random_range(0..SCALE.len()))
            };
            texts.push(format!("{speaker} say {about} is {}", SCALE[level]));
        }
        texts.shuffle(&mut rng);
        let snippets = texts
            .into_iter()
            .enumerate()
            .map(|(slot, text)| Snippet::new((slot + 1) as u8, text))
            .collect();

        // Then the claim that realizes the label.
        let claim_level = match label {
            VeracityLabel::True => evidence_level,
            VeracityLabel::Mixture => same_direction(evidence_level),
            VeracityLabel::False => {
                let opposite: Vec<usize> = (0..SCALE.len())
                    .filter(|&l| positive(l) != positive(evidence_level))
                    .collect();
                *opposite.choose(&mut rng).unwrap()
            }
        };
        let claim = format!("{entity} is {}", SCALE[claim_level]);
        let raw = match label {
            VeracityLabel::False => RawLabel::False,
            VeracityLabel::Mixture => RawLabel::Mixture,
            VeracityLabel::True => RawLabel::True,
        };
        records.push(ClaimRecord::new(
            format!("syn-{seed}-{i:05}"),
            claim,
            raw,
            snippets,
            Source::Synthetic,
        )?);
    }
    Ok(records)
}
