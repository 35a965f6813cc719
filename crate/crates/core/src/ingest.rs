//! Line-delimited record parsing and single-pass stream replay.
//!
//! JSONL is the canonical input, one object per line:
//!
//! ```text
//! {"timestamp":"2018-02-11T00:00:00Z","hashtags":["#ProChoice"]}
//! {"timestamp":1518307200,"text":"hi #a #LongTag"}
//! ```
//!
//! CSV input has a `timestamp,hashtags` header with `;`-joined tags. Paths
//! ending in `.gz` are decompressed transparently and `-` reads stdin.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use flate2::read::MultiGzDecoder;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analytics::{DriftEngine, Snapshot};
use crate::error::{Error, Result};
use crate::normalize::{extract_raw_hashtags, RawTag};

const MAX_DIAGNOSTICS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Text(String),
    Hashtags(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamRecord {
    pub timestamp: DateTime<Utc>,
    pub payload: Payload,
}

impl StreamRecord {
    /// Raw tags: extracted from text, or taken as-is from a pre-extracted list.
    pub fn raw_tags(&self) -> Vec<RawTag> {
        match &self.payload {
            Payload::Text(text) => extract_raw_hashtags(text),
            Payload::Hashtags(tags) => tags
                .iter()
                .filter_map(|t| RawTag::new(t.as_str()).ok())
                .collect(),
        }
    }

    /// Canonical JSONL encoding (no trailing newline).
    pub fn to_json_line(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            timestamp: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            text: Option<&'a str>,
            #[serde(skip_serializing_if = "Option::is_none")]
            hashtags: Option<&'a [String]>,
        }
        let (text, hashtags) = match &self.payload {
            Payload::Text(t) => (Some(t.as_str()), None),
            Payload::Hashtags(h) => (None, Some(h.as_slice())),
        };
        let timestamp = self
            .timestamp
            .to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
        serde_json::to_string(&Line {
            timestamp,
            text,
            hashtags,
        })
        .expect("plain data serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    #[default]
    Jsonl,
    Csv,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" | "json" | "ndjson" => Ok(Self::Jsonl),
            "csv" => Ok(Self::Csv),
            other => Err(Error::InvalidConfig(format!(
                "unknown input format {other:?}"
            ))),
        }
    }
}

/// Field names (JSONL keys, dot-separated for nesting, or CSV column names).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FieldMap {
    pub timestamp: String,
    pub text: String,
    pub hashtags: String,
}

impl Default for FieldMap {
    fn default() -> Self {
        Self {
            timestamp: "timestamp".into(),
            text: "text".into(),
            hashtags: "hashtags".into(),
        }
    }
}

/// Accepts RFC 3339, naive ISO-8601 (taken as UTC), a bare date, the
/// `Wed Oct 10 20:19:24 +0000 2018` API style, or integer epoch seconds.
pub fn parse_timestamp(s: &str) -> std::result::Result<DateTime<Utc>, String> {
    let s = s.trim();
    if let Ok(secs) = s.parse::<i64>() {
        return DateTime::from_timestamp(secs, 0)
            .ok_or_else(|| format!("epoch {secs} out of range"));
    }
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Ok(t.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Ok(t.and_utc());
        }
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Ok(d.and_hms_opt(0, 0, 0).expect("midnight").and_utc());
    }
    if let Ok(t) = DateTime::parse_from_str(s, "%a %b %d %H:%M:%S %z %Y") {
        return Ok(t.with_timezone(&Utc));
    }
    Err(format!("unparseable timestamp {s:?}"))
}

fn lookup<'a>(value: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.')
        .try_fold(value, |v, key| v.get(key))
        .filter(|v| !v.is_null())
}

fn json_timestamp(value: &Value) -> std::result::Result<DateTime<Utc>, String> {
    match value {
        Value::String(s) => parse_timestamp(s),
        Value::Number(n) => {
            let secs = n
                .as_i64()
                .or_else(|| n.as_f64().map(|f| f.floor() as i64))
                .ok_or_else(|| format!("bad epoch {n}"))?;
            DateTime::from_timestamp(secs, 0).ok_or_else(|| format!("epoch {secs} out of range"))
        }
        other => Err(format!("timestamp must be a string or number, got {other}")),
    }
}

fn json_tags(value: &Value) -> std::result::Result<Vec<String>, String> {
    let items = value.as_array().ok_or("hashtags must be an array")?;
    items
        .iter()
        .map(|item| match item {
            Value::String(s) => Ok(s.clone()),
            // Entity objects as delivered by social-media APIs.
            Value::Object(o) => o
                .get("text")
                .or_else(|| o.get("tag"))
                .and_then(Value::as_str)
                .map(str::to_owned)
                .ok_or_else(|| "hashtag object without text/tag".to_string()),
            other => Err(format!("hashtag must be a string, got {other}")),
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct CsvColumns {
    timestamp: usize,
    hashtags: Option<usize>,
    text: Option<usize>,
}

/// Parses lines of one source. CSV parsers learn their column layout from the header.
#[derive(Debug, Clone)]
pub struct RecordParser {
    format: InputFormat,
    fields: FieldMap,
    columns: Option<CsvColumns>,
}

impl RecordParser {
    pub fn new(format: InputFormat, fields: FieldMap) -> Self {
        Self {
            format,
            fields,
            columns: None,
        }
    }

    pub fn format(&self) -> InputFormat {
        self.format
    }

    fn needs_header(&self) -> bool {
        self.format == InputFormat::Csv && self.columns.is_none()
    }

    /// Reads a CSV header line; fails if the timestamp column or both payload columns are missing.
    pub fn read_header(&mut self, line: &str) -> std::result::Result<(), String> {
        let header = split_csv(line)?;
        let find = |name: &str| header.iter().position(|h| h.trim() == name);
        let timestamp = find(&self.fields.timestamp)
            .ok_or_else(|| format!("CSV header lacks {:?} column", self.fields.timestamp))?;
        let hashtags = find(&self.fields.hashtags);
        let text = find(&self.fields.text);
        if hashtags.is_none() && text.is_none() {
            return Err(format!(
                "CSV header lacks both {:?} and {:?} columns",
                self.fields.hashtags, self.fields.text
            ));
        }
        self.columns = Some(CsvColumns {
            timestamp,
            hashtags,
            text,
        });
        Ok(())
    }

    pub fn parse(&self, line: &str) -> std::result::Result<StreamRecord, String> {
        match self.format {
            InputFormat::Jsonl => self.parse_json(line),
            InputFormat::Csv => self.parse_csv(line),
        }
    }

    fn parse_json(&self, line: &str) -> std::result::Result<StreamRecord, String> {
        let value: Value = serde_json::from_str(line).map_err(|e| format!("invalid JSON: {e}"))?;
        if !value.is_object() {
            return Err("record must be a JSON object".into());
        }
        let timestamp = lookup(&value, &self.fields.timestamp)
            .ok_or_else(|| format!("missing {:?}", self.fields.timestamp))
            .and_then(json_timestamp)?;
        let text = lookup(&value, &self.fields.text);
        let tags = lookup(&value, &self.fields.hashtags);
        let payload = match (text, tags) {
            (Some(_), Some(_)) => return Err("record has both text and hashtags".into()),
            (None, None) => return Err("record has neither text nor hashtags".into()),
            (Some(t), None) => Payload::Text(t.as_str().ok_or("text must be a string")?.to_owned()),
            (None, Some(h)) => Payload::Hashtags(json_tags(h)?),
        };
        Ok(StreamRecord { timestamp, payload })
    }

    fn parse_csv(&self, line: &str) -> std::result::Result<StreamRecord, String> {
        let cols = self.columns.unwrap_or(CsvColumns {
            timestamp: 0,
            hashtags: Some(1),
            text: None,
        });
        let fields = split_csv(line)?;
        let get = |i: usize| fields.get(i).map(String::as_str).filter(|s| !s.is_empty());
        let timestamp = parse_timestamp(get(cols.timestamp).ok_or("missing timestamp field")?)?;
        let tags = cols.hashtags.and_then(get);
        let text = cols.text.and_then(get);
        let payload = match (text, tags) {
            (Some(_), Some(_)) => return Err("record has both text and hashtags".into()),
            (Some(t), None) => Payload::Text(t.to_owned()),
            (None, Some(h)) => Payload::Hashtags(
                h.split(';')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(str::to_owned)
                    .collect(),
            ),
            // An empty tag column is a post without hashtags.
            (None, None) if cols.hashtags.is_some() => Payload::Hashtags(Vec::new()),
            (None, None) => Payload::Text(String::new()),
        };
        Ok(StreamRecord { timestamp, payload })
    }
}

fn split_csv(line: &str) -> std::result::Result<Vec<String>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(line.as_bytes());
    let mut record = csv::StringRecord::new();
    match reader.read_record(&mut record) {
        Ok(true) => Ok(record.iter().map(str::to_owned).collect()),
        Ok(false) => Err("empty CSV line".into()),
        Err(e) => Err(format!("invalid CSV: {e}")),
    }
}

/// Parses one line with the default field names (CSV: `timestamp,hashtags`).
pub fn parse_record(line_no: u64, line: &str, format: InputFormat) -> Result<StreamRecord> {
    RecordParser::new(format, FieldMap::default())
        .parse(line)
        .map_err(|message| Error::Parse {
            line: line_no,
            message,
        })
}

/// Opens a path for reading; `-` is stdin and `*.gz` is gunzipped.
pub fn open_input(path: &Path) -> io::Result<Box<dyn BufRead + Send>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let file = File::open(path)?;
    if path.extension().is_some_and(|e| e == "gz") {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RunReport {
    /// Non-blank record lines, excluding CSV headers.
    pub lines_read: u64,
    pub posts_processed: u64,
    pub skipped: u64,
    pub snapshots_emitted: u64,
    /// The first diagnostics for skipped lines.
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub snapshots: Vec<Snapshot>,
}

/// Drives a [`DriftEngine`] over one or more sources in order.
pub struct StreamRunner<'e> {
    engine: &'e mut DriftEngine,
    format: InputFormat,
    fields: FieldMap,
    report: RunReport,
    snapshots: Vec<Snapshot>,
}

impl<'e> StreamRunner<'e> {
    pub fn new(engine: &'e mut DriftEngine, format: InputFormat, fields: FieldMap) -> Self {
        Self {
            engine,
            format,
            fields,
            report: RunReport::default(),
            snapshots: Vec::new(),
        }
    }

    fn skip(&mut self, line_no: u64, message: impl Into<String>) {
        self.report.skipped += 1;
        if self.report.diagnostics.len() < MAX_DIAGNOSTICS {
            self.report.diagnostics.push(
                Error::Parse {
                    line: line_no,
                    message: message.into(),
                }
                .to_string(),
            );
        }
    }

    /// Feeds a single already-parsed record.
    pub fn push_record(&mut self, line_no: u64, record: &StreamRecord) {
        self.report.lines_read += 1;
        let raw = record.raw_tags();
        match self.engine.ingest(record.timestamp, &raw) {
            Ok(snapshot) => {
                self.report.posts_processed += 1;
                if let Some(s) = snapshot {
                    self.report.snapshots_emitted += 1;
                    self.snapshots.push(s);
                }
            }
            Err(e) => self.skip(line_no, e.to_string()),
        }
    }

    /// Reads every line of `source`. Only I/O failures are fatal; bad lines are skipped.
    pub fn feed<R: BufRead>(&mut self, mut source: R) -> Result<()> {
        let mut parser = RecordParser::new(self.format, self.fields.clone());
        let mut buf = Vec::new();
        let mut line_no = 0u64;
        loop {
            buf.clear();
            if source.read_until(b'\n', &mut buf)? == 0 {
                break;
            }
            line_no += 1;
            let Ok(line) = std::str::from_utf8(&buf) else {
                self.report.lines_read += 1;
                self.skip(line_no, "line is not valid UTF-8");
                continue;
            };
            let line = line.trim_end_matches(['\n', '\r']);
            if line.trim().is_empty() {
                continue;
            }
            if parser.needs_header() {
                if let Err(message) = parser.read_header(line) {
                    return Err(Error::Parse {
                        line: line_no,
                        message,
                    });
                }
                continue;
            }
            match parser.parse(line) {
                Ok(record) => self.push_record(line_no, &record),
                Err(message) => {
                    self.report.lines_read += 1;
                    self.skip(line_no, message);
                }
            }
        }
        Ok(())
    }

    /// Flushes the last period and returns everything collected.
    pub fn finish(mut self) -> RunOutcome {
        if let Some(s) = self.engine.finalize() {
            self.report.snapshots_emitted += 1;
            self.snapshots.push(s);
        }
        RunOutcome {
            report: self.report,
            snapshots: self.snapshots,
        }
    }
}

/// Replays one source through `engine` and flushes the final period.
pub fn run_stream<R: BufRead>(
    source: R,
    format: InputFormat,
    engine: &mut DriftEngine,
) -> Result<RunOutcome> {
    let mut runner = StreamRunner::new(engine, format, FieldMap::default());
    runner.feed(source)?;
    Ok(runner.finish())
}
