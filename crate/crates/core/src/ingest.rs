//! Reading one system's types and sizes from JSON, CSV or TSV.
//!
//! JSON input is an array of objects:
//!
//! ```json
//! [{"types": "a", "counts": 3}, {"types": "b", "counts": 1}]
//! ```
//!
//! `rank` may replace `counts` for systems that only publish ranks; `probs`
//! is accepted and ignored when `counts` is present. Delimited input has the
//! header `types,counts` (or `types,rank`).

use std::borrow::Cow;
use std::cmp::Ordering;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rayon::slice::ParallelSliceMut;
use serde::de::{self, DeserializeSeed, SeqAccess, Visitor};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::Label;

/// Default upper bound on a single input file (2 GiB).
pub const DEFAULT_MAX_BYTES: u64 = 2 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Json,
    Csv,
    Tsv,
}

impl Format {
    fn delimiter(self) -> u8 {
        match self {
            Format::Tsv => b'\t',
            _ => b',',
        }
    }
}

/// Picks the input format from a file name's extension (case-insensitive).
pub fn detect_format(filename: &str) -> Result<Format> {
    let ext = Path::new(filename)
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("json") => Ok(Format::Json),
        Some("csv") => Ok(Format::Csv),
        Some("tsv") => Ok(Format::Tsv),
        _ => Err(Error::UnsupportedFormat {
            found: filename.to_string(),
        }),
    }
}

/// Whether entry values are sizes to be ranked or ranks given up front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceKind {
    Counts,
    Ranks,
}

/// One type and its value: a count when the list holds sizes, a rank when it
/// holds pre-assigned ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub label: Label,
    pub value: f64,
}

impl Entry {
    pub fn new(label: &str, value: f64) -> Self {
        Entry {
            label: Arc::from(label),
            value,
        }
    }
}

/// A validated system: unique labels, finite non-negative values, no zero
/// counts, at least one entry.
#[derive(Debug, Clone)]
pub struct RankedList {
    name: String,
    entries: Vec<Entry>,
    source_kind: SourceKind,
    /// Entry indices sorted by label.
    by_label: Vec<u32>,
}

impl PartialEq for RankedList {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.source_kind == other.source_kind
            && self.entries == other.entries
    }
}

/// A validated list together with the labels dropped because their count
/// was exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub list: RankedList,
    pub dropped: Vec<String>,
}

impl RankedList {
    /// Validates `entries`, dropping zero counts.
    pub fn ingest(
        name: impl Into<String>,
        entries: Vec<Entry>,
        source_kind: SourceKind,
    ) -> Result<Ingested> {
        validate(name.into(), entries, source_kind)
    }

    pub fn from_counts<'a>(
        name: impl Into<String>,
        pairs: impl IntoIterator<Item = (&'a str, f64)>,
    ) -> Result<RankedList> {
        let entries = pairs.into_iter().map(|(l, v)| Entry::new(l, v)).collect();
        Ok(Self::ingest(name, entries, SourceKind::Counts)?.list)
    }

    pub fn from_ranks<'a>(
        name: impl Into<String>,
        pairs: impl IntoIterator<Item = (&'a str, f64)>,
    ) -> Result<RankedList> {
        let entries = pairs.into_iter().map(|(l, v)| Entry::new(l, v)).collect();
        Ok(Self::ingest(name, entries, SourceKind::Ranks)?.list)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// Entries in input order.
    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn source_kind(&self) -> SourceKind {
        self.source_kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry indices in ascending label order.
    pub fn label_order(&self) -> &[u32] {
        &self.by_label
    }

    pub fn get(&self, label: &str) -> Option<&Entry> {
        self.by_label
            .binary_search_by(|&i| self.entries[i as usize].label.as_ref().cmp(label))
            .ok()
            .map(|pos| &self.entries[self.by_label[pos] as usize])
    }

    /// Writes the list back out in `format`. Parsing the result yields an
    /// equal list.
    pub fn serialize(&self, format: Format) -> String {
        let value_key = match self.source_kind {
            SourceKind::Counts => "counts",
            SourceKind::Ranks => "rank",
        };
        match format {
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .entries
                    .iter()
                    .map(|e| serde_json::json!({ "types": &*e.label, value_key: e.value }))
                    .collect();
                serde_json::to_string(&rows).expect("entries serialize")
            }
            Format::Csv | Format::Tsv => {
                let mut w = csv::WriterBuilder::new()
                    .delimiter(format.delimiter())
                    .from_writer(Vec::new());
                w.write_record(["types", value_key])
                    .expect("in-memory write");
                for e in &self.entries {
                    w.write_record([&*e.label, &e.value.to_string()])
                        .expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
            }
        }
    }
}

/// Parses and validates one system.
pub fn parse_ranked_list(raw: &[u8], format: Format, name: &str) -> Result<Ingested> {
    let text = std::str::from_utf8(raw).map_err(|e| Error::Utf8 {
        offset: e.valid_up_to(),
    })?;
    let (entries, kind) = match format {
        Format::Json => parse_json(text)?,
        Format::Csv | Format::Tsv => parse_delimited(text, format.delimiter())?,
    };
    validate(name.to_string(), entries, kind)
}

/// Reads a file, enforcing `max_bytes`, and parses it with the format given
/// by its extension. The list is named after the file stem.
pub fn load_file(path: &Path, max_bytes: u64) -> Result<Ingested> {
    let display = path.display().to_string();
    let format = detect_format(&display)?;
    let io_err = |e: std::io::Error| Error::Io {
        path: display.clone(),
        message: e.to_string(),
    };
    let size = std::fs::metadata(path).map_err(io_err)?.len();
    if size > max_bytes {
        return Err(Error::TooLarge {
            size,
            limit: max_bytes,
        });
    }
    let raw = std::fs::read(path).map_err(io_err)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_ranked_list(&raw, format, &name)
}

fn validate(name: String, entries: Vec<Entry>, kind: SourceKind) -> Result<Ingested> {
    if entries.len() > u32::MAX as usize {
        return Err(Error::Options(format!(
            "{} entries exceed the supported maximum",
            entries.len()
        )));
    }
    for e in &entries {
        check_value(e, kind)?;
    }
    let order = sort_by_label(&entries);
    if let Some(w) = order
        .windows(2)
        .find(|w| entries[w[0] as usize].label == entries[w[1] as usize].label)
    {
        return Err(Error::Duplicate {
            label: entries[w[0] as usize].label.to_string(),
        });
    }

    let mut dropped = Vec::new();
    let (entries, by_label) = if entries.iter().any(|e| e.value == 0.0) {
        // Zero counts are rare; rebuild the permutation only when needed.
        let mut kept = Vec::with_capacity(entries.len());
        for e in entries {
            if e.value == 0.0 {
                dropped.push(e.label.to_string());
            } else {
                kept.push(e);
            }
        }
        let order = sort_by_label(&kept);
        (kept, order)
    } else {
        (entries, order)
    };
    if entries.is_empty() {
        return Err(Error::Empty);
    }
    Ok(Ingested {
        list: RankedList {
            name,
            entries,
            source_kind: kind,
            by_label,
        },
        dropped,
    })
}

fn check_value(e: &Entry, kind: SourceKind) -> Result<()> {
    let bad = |message: &str| {
        Err(Error::Value {
            label: e.label.to_string(),
            message: message.to_string(),
        })
    };
    if !e.value.is_finite() {
        return bad("value must be finite");
    }
    match kind {
        SourceKind::Counts if e.value < 0.0 => bad("count must be non-negative"),
        SourceKind::Ranks if e.value < 1.0 => bad("rank must be at least 1"),
        _ => Ok(()),
    }
}

/// Big-endian first eight bytes of a label, zero padded. Comparing keys
/// agrees with comparing the labels whenever the keys differ.
fn prefix_key(label: &str) -> u64 {
    let mut buf = [0u8; 8];
    let bytes = label.as_bytes();
    let n = bytes.len().min(8);
    buf[..n].copy_from_slice(&bytes[..n]);
    u64::from_be_bytes(buf)
}

pub(crate) fn sort_by_label(entries: &[Entry]) -> Vec<u32> {
    let mut keyed: Vec<(u64, u32)> = entries
        .iter()
        .enumerate()
        .map(|(i, e)| (prefix_key(&e.label), i as u32))
        .collect();
    keyed.par_sort_unstable_by(|a, b| match a.0.cmp(&b.0) {
        Ordering::Equal => entries[a.1 as usize]
            .label
            .cmp(&entries[b.1 as usize].label),
        other => other,
    });
    keyed.into_iter().map(|(_, i)| i).collect()
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Deserialize)]
struct RawRecord<'a> {
    #[serde(borrow)]
    types: Cow<'a, str>,
    #[serde(default)]
    counts: Option<f64>,
    #[serde(default)]
    rank: Option<f64>,
    #[serde(default)]
    probs: Option<f64>,
}

#[derive(Default)]
struct JsonSink {
    entries: Vec<Entry>,
    kind: Option<SourceKind>,
    /// 1-based index of the record being read.
    record: usize,
}

impl<'de> DeserializeSeed<'de> for &mut JsonSink {
    type Value = ();

    fn deserialize<D: de::Deserializer<'de>>(self, deserializer: D) -> Result<(), D::Error> {
        deserializer.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for &mut JsonSink {
    type Value = ();

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an array of {\"types\": ..., \"counts\": ...} objects")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<(), A::Error> {
        if let Some(n) = seq.size_hint() {
            self.entries.reserve(n);
        }
        loop {
            self.record += 1;
            let Some(raw) = seq.next_element::<RawRecord<'de>>()? else {
                break;
            };
            let (kind, value) = match (raw.counts, raw.rank, raw.probs) {
                (Some(c), _, _) => (SourceKind::Counts, c),
                (None, Some(r), _) => (SourceKind::Ranks, r),
                (None, None, Some(p)) => (SourceKind::Counts, p),
                (None, None, None) => {
                    return Err(de::Error::custom("record has neither `counts` nor `rank`"))
                }
            };
            match self.kind {
                None => self.kind = Some(kind),
                Some(k) if k != kind => {
                    return Err(de::Error::custom("records mix `counts` and `rank`"))
                }
                _ => {}
            }
            self.entries.push(Entry::new(&raw.types, value));
        }
        self.record = 0;
        Ok(())
    }
}

fn parse_json(text: &str) -> Result<(Vec<Entry>, SourceKind)> {
    let mut de = serde_json::Deserializer::from_str(text);
    let mut sink = JsonSink::default();
    let outcome = (&mut sink).deserialize(&mut de).and_then(|()| de.end());
    match outcome {
        Ok(()) => Ok((sink.entries, sink.kind.unwrap_or(SourceKind::Counts))),
        Err(e) => Err(Error::Parse {
            record: sink.record,
            line: e.line() as u64,
            message: e.to_string(),
        }),
    }
}

// ---------------------------------------------------------------------------
// CSV / TSV

fn parse_delimited(text: &str, delimiter: u8) -> Result<(Vec<Entry>, SourceKind)> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .from_reader(text.as_bytes());
    let csv_err = |record: usize, e: csv::Error| Error::Parse {
        record,
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    };

    let header = reader.headers().map_err(|e| csv_err(0, e))?.clone();
    let sep = if delimiter == b'\t' { "\\t" } else { "," };
    let kind = match (header.len(), header.get(0), header.get(1)) {
        (2, Some("types"), Some("counts")) => SourceKind::Counts,
        (2, Some("types"), Some("rank")) => SourceKind::Ranks,
        _ => {
            return Err(Error::Parse {
                record: 0,
                line: 1,
                message: format!("expected header `types{sep}counts` or `types{sep}rank`"),
            })
        }
    };

    let mut entries = Vec::new();
    let mut row = csv::StringRecord::new();
    let mut record = 0;
    loop {
        record += 1;
        match reader.read_record(&mut row) {
            Ok(true) => {}
            Ok(false) => break,
            Err(e) => return Err(csv_err(record, e)),
        }
        let field = row.get(1).unwrap_or_default().trim();
        let value: f64 = field.parse().map_err(|_| Error::Parse {
            record,
            line: row.position().map_or(0, |p| p.line()),
            message: format!("cannot parse {field:?} as a number"),
        })?;
        entries.push(Entry::new(&row[0], value));
    }
    Ok((entries, kind))
}
