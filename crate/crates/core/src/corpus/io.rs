use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ClaimRecord, RawLabel, Snippet, Source, MAX_SNIPPETS};
use crate::error::{Error, Result};

// Field order here is the wire key order.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireRecord<'a> {
    #[serde(borrow)]
    id: std::borrow::Cow<'a, str>,
    #[serde(borrow)]
    claim: std::borrow::Cow<'a, str>,
    #[serde(borrow)]
    label: std::borrow::Cow<'a, str>,
    #[serde(borrow)]
    source: std::borrow::Cow<'a, str>,
    snippets: Vec<WireSnippet<'a>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireSnippet<'a> {
    rank: i64,
    #[serde(borrow)]
    text: std::borrow::Cow<'a, str>,
}

fn parse_line(line: &str, line_no: usize) -> Result<ClaimRecord> {
    let err = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    let wire: WireRecord = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
    if wire.snippets.len() > MAX_SNIPPETS {
        return Err(err(format!(
            "{} snippets, at most {MAX_SNIPPETS} allowed",
            wire.snippets.len()
        )));
    }
    let raw_label: RawLabel = wire.label.parse().map_err(|e: Error| err(e.to_string()))?;
    let source: Source = wire.source.parse().map_err(|e: Error| err(e.to_string()))?;
    let snippets = wire
        .snippets
        .into_iter()
        .map(|s| {
            let rank = u8::try_from(s.rank)
                .ok()
                .filter(|r| (1..=MAX_SNIPPETS as u8).contains(r))
                .ok_or_else(|| {
                    err(format!(
                        "snippet rank {} outside 1..={MAX_SNIPPETS}",
                        s.rank
                    ))
                })?;
            Ok(Snippet::new(rank, s.text.into_owned()))
        })
        .collect::<Result<Vec<_>>>()?;
    ClaimRecord::new(
        wire.id.into_owned(),
        wire.claim.into_owned(),
        raw_label,
        snippets,
        source,
    )
    .map_err(|e| err(e.to_string()))
}

/// Read line-delimited records. Blank lines are skipped; line numbers in
/// errors are 1-based.
pub fn ingest_reader(reader: impl BufRead) -> Result<Vec<ClaimRecord>> {
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record = parse_line(&line, line_no)?;
        if !seen.insert(record.id.clone()) {
            return Err(Error::DuplicateId {
                line: line_no,
                id: record.id,
            });
        }
        records.push(record);
    }
    Ok(records)
}

pub fn ingest_str(text: &str) -> Result<Vec<ClaimRecord>> {
    ingest_reader(text.as_bytes())
}

pub fn ingest(path: impl AsRef<Path>) -> Result<Vec<ClaimRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_reader(BufReader::new(file))
}

fn to_wire(record: &ClaimRecord) -> WireRecord<'_> {
    WireRecord {
        id: record.id.as_str().into(),
        claim: record.claim_text.as_str().into(),
        label: record.raw_label.as_str().into(),
        source: record.source.as_str().into(),
        snippets: record
            .snippets
            .iter()
            .map(|s| WireSnippet {
                rank: i64::from(s.rank),
                text: s.text.as_str().into(),
            })
            .collect(),
    }
}

/// Write one compact JSON object per line, keys in wire order.
pub fn emit(records: &[ClaimRecord], mut writer: impl Write) -> std::io::Result<()> {
    for record in records {
        serde_json::to_writer(&mut writer, &to_wire(record))?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}

pub fn emit_to_string(records: &[ClaimRecord]) -> String {
    let mut buf = Vec::new();
    emit(records, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn emit_to_path(records: &[ClaimRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    emit(records, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::VeracityLabel;

    const TWO: &str = concat!(
        r#"{"id":"a1","claim":"The moon is cheese","label":"false","source":"snopes","snippets":[{"rank":1,"text":"no it is not"}]}"#,
        "\n",
        r#"{"id":"a2","claim":"Water is wet","label":"mostly true","source":"pomt","snippets":[]}"#,
        "\n"
    );

    #[test]
    fn two_valid_lines() {
        let records = ingest_str(TWO).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[1].label, VeracityLabel::True);
        assert_eq!(records[1].raw_label, RawLabel::MostlyTrue);
        assert_eq!(records[1].source, Source::PolitiFact);
    }

    #[test]
    fn emit_is_byte_stable() {
        let records = ingest_str(TWO).unwrap();
        assert_eq!(emit_to_string(&records), TWO);
    }

    #[test]
    fn eleven_snippets_names_the_line() {
        let snippets: Vec<String> = (1..=11)
            .map(|r| format!(r#"{{"rank":{r},"text":"s"}}"#))
            .collect();
        let bad = format!(
            r#"{{"id":"x","claim":"c","label":"true","source":"snopes","snippets":[{}]}}"#,
            snippets.join(",")
        );
        let text = format!("{}{bad}\n", TWO);
        match ingest_str(&text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_ids_and_unknown_labels_are_rejected() {
        let first = TWO.lines().next().unwrap();
        let dup = format!("{first}\n{first}\n");
        assert!(matches!(
            ingest_str(&dup),
            Err(Error::DuplicateId { line: 2, .. })
        ));

        let unknown = first.replace(r#""false""#, r#""pants on fire""#);
        assert!(matches!(
            ingest_str(&unknown),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            ingest_str("{not json}\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn rank_out_of_range_is_a_parse_error() {
        let line = r#"{"id":"a","claim":"c","label":"true","source":"snopes","snippets":[{"rank":11,"text":"s"}]}"#;
        assert!(matches!(
            ingest_str(line),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
