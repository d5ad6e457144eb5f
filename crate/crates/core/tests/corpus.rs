use std::collections::{BTreeMap, HashSet};

use gutcheck::corpus::{emit_to_string, generate_synthetic, ingest_str, split};
use gutcheck::{ClaimRecord, RawLabel, Snippet, Source, VeracityLabel};
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Pearson chi-square independence test; returns the p-value.
fn independence_p_value(table: &BTreeMap<String, [f64; 3]>) -> f64 {
    let rows: Vec<&[f64; 3]> = table.values().collect();
    let total: f64 = rows.iter().flat_map(|r| r.iter()).sum();
    let col: Vec<f64> = (0..3).map(|j| rows.iter().map(|r| r[j]).sum()).collect();
    let mut stat = 0.0;
    for r in &rows {
        let row_sum: f64 = r.iter().sum();
        for j in 0..3 {
            let expected = row_sum * col[j] / total;
            stat += (r[j] - expected).powi(2) / expected;
        }
    }
    let df = ((rows.len() - 1) * 2) as f64;
    1.0 - ChiSquared::new(df).unwrap().cdf(stat)
}

/// `(entity, opinion)` of a snippet or claim, read straight off the text.
fn subject_and_opinion(text: &str) -> (&str, &str) {
    let words: Vec<&str> = text.split_whitespace().collect();
    let is = words.iter().position(|&w| w == "is").expect("has 'is'");
    (words[is - 1], words[is + 1])
}

/// The most common `(entity, opinion)` among a record's snippets.
fn plurality(record: &ClaimRecord) -> (String, String) {
    let mut counts: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for s in &record.snippets {
        *counts.entry(subject_and_opinion(&s.text)).or_default() += 1;
    }
    let ((e, o), _) = counts.into_iter().max_by_key(|(_, c)| *c).unwrap();
    (e.to_string(), o.to_string())
}

fn contingency(
    records: &[ClaimRecord],
    feature: impl Fn(&ClaimRecord) -> String,
) -> BTreeMap<String, [f64; 3]> {
    let mut table: BTreeMap<String, [f64; 3]> = BTreeMap::new();
    for r in records {
        table.entry(feature(r)).or_default()[r.label.class_index()] += 1.0;
    }
    table
}

#[test]
fn evidence_alone_is_independent_of_the_label() {
    let records = generate_synthetic(3000, 40, 11).unwrap();
    let by_opinion = contingency(&records, |r| plurality(r).1);
    let by_entity = contingency(&records, |r| plurality(r).0);
    let by_positive_count = contingency(&records, |r| {
        r.snippets
            .iter()
            .filter(|s| matches!(subject_and_opinion(&s.text).1, "good" | "great"))
            .count()
            .to_string()
    });
    for (name, table) in [
        ("opinion", &by_opinion),
        ("entity", &by_entity),
        ("positive count", &by_positive_count),
    ] {
        let p = independence_p_value(table);
        assert!(p > 0.01, "{name}: p = {p}");
    }
}

#[test]
fn claim_and_evidence_together_determine_the_label() {
    let records = generate_synthetic(600, 40, 11).unwrap();
    let mut seen: BTreeMap<(String, String), VeracityLabel> = BTreeMap::new();
    for r in &records {
        let (entity, evidence) = plurality(r);
        let (claimed_entity, claimed) = subject_and_opinion(&r.claim_text);
        assert_eq!(entity, claimed_entity);
        let key = (evidence, claimed.to_string());
        assert_eq!(*seen.entry(key).or_insert(r.label), r.label);
    }
    let table = contingency(&records, |r| {
        format!(
            "{}/{}",
            plurality(r).1,
            subject_and_opinion(&r.claim_text).1
        )
    });
    assert!(independence_p_value(&table) < 1e-6);
}

fn arb_record(index: usize) -> impl Strategy<Value = ClaimRecord> {
    let text = "[a-zA-Z0-9 ,.'\"\\\\é!?-]{0,30}";
    (
        text,
        prop::sample::select(RawLabel::ALL.to_vec()),
        prop::sample::select(vec![Source::Snopes, Source::PolitiFact, Source::Synthetic]),
        prop::sample::subsequence((1u8..=10).collect::<Vec<_>>(), 0..=10),
        prop::collection::vec(text, 10),
    )
        .prop_map(move |(claim, raw, source, ranks, texts)| {
            let snippets = ranks
                .into_iter()
                .zip(texts)
                .map(|(rank, t)| Snippet::new(rank, t))
                .collect();
            ClaimRecord::new(format!("r{index}"), claim, raw, snippets, source).unwrap()
        })
}

fn arb_corpus() -> impl Strategy<Value = Vec<ClaimRecord>> {
    (0usize..8).prop_flat_map(|n| (0..n).map(arb_record).collect::<Vec<_>>())
}

proptest! {
    #[test]
    fn ingest_inverts_emit(records in arb_corpus()) {
        let text = emit_to_string(&records);
        let back = ingest_str(&text).unwrap();
        prop_assert_eq!(&back, &records);
        prop_assert_eq!(emit_to_string(&back), text);
    }

    #[test]
    fn split_partitions_for_every_seed(seed in any::<u64>(), n in 30usize..120) {
        let records = generate_synthetic(n, 30, seed % 1000).unwrap();
        let s = split(&records, [0.8, 0.1, 0.1], seed).unwrap();
        let ids: Vec<&str> = s.train.iter().chain(&s.dev).chain(&s.test).map(|r| r.id.as_str()).collect();
        prop_assert_eq!(ids.len(), n);
        let unique: HashSet<&str> = ids.iter().copied().collect();
        prop_assert_eq!(unique.len(), n);
        prop_assert!(records.iter().all(|r| unique.contains(r.id.as_str())));
    }

    #[test]
    fn synthetic_labels_are_balanced(n in 30usize..400, seed in 0u64..50) {
        let records = generate_synthetic(n, 20 + (seed as usize % 30), seed).unwrap();
        prop_assert_eq!(records.len(), n);
        for label in VeracityLabel::ALL {
            let c = records.iter().filter(|r| r.label == label).count() as f64;
            prop_assert!((c - n as f64 / 3.0).abs() <= 1.0);
        }
    }
}
