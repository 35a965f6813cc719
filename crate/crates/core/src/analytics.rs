//! Per-period tallies, snapshots and drift summaries.
//!
//! The live graph is never reset at a period boundary. A rollover freezes a
//! copy of it, runs community detection on the copy, and starts a new tally.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use chrono::{DateTime, Datelike, Duration, Utc};
use serde::{Deserialize, Serialize, Serializer};

use crate::community::{best_partition, FrozenGraph, ScoredPartition};
use crate::error::{Error, Result};
use crate::graph::{GraphConfig, WindowedGraph};
use crate::normalize::{prepare_post, NormalizedHashtag, PostRecord, RawTag, DEFAULT_MIN_LEN};

pub const DEFAULT_TOP_K: usize = 5;
pub const DEFAULT_QUERY_TAG: &str = "mybodymychoice";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cadence {
    #[default]
    Year,
    Month,
}

impl std::str::FromStr for Cadence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "year" | "yearly" => Ok(Self::Year),
            "month" | "monthly" => Ok(Self::Month),
            other => Err(Error::InvalidConfig(format!("unknown cadence {other:?}"))),
        }
    }
}

/// A calendar year or month, in UTC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PeriodLabel {
    Year(i32),
    Month { year: i32, month: u32 },
}

impl PeriodLabel {
    pub fn of(timestamp: DateTime<Utc>, cadence: Cadence) -> Self {
        match cadence {
            Cadence::Year => Self::Year(timestamp.year()),
            Cadence::Month => Self::Month {
                year: timestamp.year(),
                month: timestamp.month(),
            },
        }
    }

    pub fn cadence(&self) -> Cadence {
        match self {
            Self::Year(_) => Cadence::Year,
            Self::Month { .. } => Cadence::Month,
        }
    }
}

impl fmt::Display for PeriodLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Year(y) => write!(f, "{y}"),
            Self::Month { year, month } => write!(f, "{year}-{month:02}"),
        }
    }
}

impl Serialize for PeriodLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Number of posts containing each tag within one period.
#[derive(Debug, Clone)]
pub struct PeriodTally {
    period: PeriodLabel,
    counts: HashMap<NormalizedHashtag, u64>,
    posts: u64,
}

impl PeriodTally {
    pub fn new(period: PeriodLabel) -> Self {
        Self {
            period,
            counts: HashMap::new(),
            posts: 0,
        }
    }

    pub fn period(&self) -> PeriodLabel {
        self.period
    }

    /// Counts each tag of the post once. The post must fall in this period.
    pub fn record_post(&mut self, post: &PostRecord) -> Result<()> {
        let period = PeriodLabel::of(post.timestamp(), self.period.cadence());
        if period != self.period {
            return Err(Error::PeriodMismatch {
                tally: self.period,
                post: period,
            });
        }
        self.record_attributed(post);
        Ok(())
    }

    // Records a post already attributed to this period (late posts within slack).
    fn record_attributed(&mut self, post: &PostRecord) {
        self.posts += 1;
        for tag in post.hashtags() {
            *self.counts.entry(tag.clone()).or_default() += 1;
        }
    }

    pub fn count(&self, tag: &str) -> u64 {
        self.counts.get(tag).copied().unwrap_or(0)
    }

    pub fn posts(&self) -> u64 {
        self.posts
    }

    pub fn distinct_tags(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// The `k` most frequent tags, count descending then tag ascending.
    pub fn top_k(&self, k: usize) -> Vec<(String, u64)> {
        let mut all: Vec<(&NormalizedHashtag, u64)> =
            self.counts.iter().map(|(t, &c)| (t, c)).collect();
        all.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        all.into_iter()
            .take(k)
            .map(|(t, c)| (t.as_str().to_owned(), c))
            .collect()
    }
}

/// The frozen record of one completed period.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub period: PeriodLabel,
    pub posts: u64,
    pub node_count: usize,
    pub edge_count: usize,
    pub best: ScoredPartition,
    pub top_communities: Vec<Vec<String>>,
    pub top_tags: Vec<(String, u64)>,
    pub graph: FrozenGraph,
}

impl Snapshot {
    /// Runs community detection on `graph` and assembles the period record.
    pub fn build(graph: FrozenGraph, tally: &PeriodTally, k: usize) -> Self {
        let best = best_partition(&graph);
        let top_communities = best
            .partition
            .communities()
            .iter()
            .take(k)
            .cloned()
            .collect();
        Self {
            period: tally.period(),
            posts: tally.posts(),
            node_count: graph.node_count(),
            edge_count: graph.edge_count(),
            best,
            top_communities,
            top_tags: tally.top_k(k),
            graph,
        }
    }

    pub fn largest_community(&self) -> &[String] {
        self.best.partition.largest().unwrap_or(&[])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftSummary {
    pub from: PeriodLabel,
    pub to: PeriodLabel,
    /// Jaccard similarity of the two largest communities.
    pub largest_overlap: f64,
    /// Nodes in `to`'s graph but not in `from`'s.
    pub new_tags: usize,
    /// Nodes in `from`'s graph but not in `to`'s.
    pub vanished_tags: usize,
}

/// Jaccard similarity; two empty sets count as identical.
pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

pub fn drift_summary(prev: &Snapshot, cur: &Snapshot) -> DriftSummary {
    let a: BTreeSet<&str> = prev
        .largest_community()
        .iter()
        .map(String::as_str)
        .collect();
    let b: BTreeSet<&str> = cur.largest_community().iter().map(String::as_str).collect();
    let before: BTreeSet<&str> = prev.graph.nodes().iter().map(String::as_str).collect();
    let after: BTreeSet<&str> = cur.graph.nodes().iter().map(String::as_str).collect();
    DriftSummary {
        from: prev.period,
        to: cur.period,
        largest_overlap: jaccard(&a, &b),
        new_tags: after.difference(&before).count(),
        vanished_tags: before.difference(&after).count(),
    }
}

/// Summaries for each consecutive pair of snapshots.
pub fn drift_report(snapshots: &[Snapshot]) -> Vec<DriftSummary> {
    snapshots
        .windows(2)
        .map(|w| drift_summary(&w[0], &w[1]))
        .collect()
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub graph: GraphConfig,
    pub query_tag: Option<NormalizedHashtag>,
    pub min_len: usize,
    pub cadence: Cadence,
    pub top_k: usize,
    /// How far a timestamp may fall behind the latest one seen before the
    /// record is rejected. Late records within the slack join the current period.
    pub slack: Duration,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            graph: GraphConfig::default(),
            query_tag: Some(NormalizedHashtag::parse(DEFAULT_QUERY_TAG, 1).expect("canonical")),
            min_len: DEFAULT_MIN_LEN,
            cadence: Cadence::Year,
            top_k: DEFAULT_TOP_K,
            slack: Duration::hours(24),
        }
    }
}

/// Single-writer stream state: the live graph plus the current period tally.
#[derive(Debug, Clone)]
pub struct DriftEngine {
    config: EngineConfig,
    graph: WindowedGraph,
    tally: Option<PeriodTally>,
    latest: Option<DateTime<Utc>>,
}

impl DriftEngine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        if config.min_len == 0 {
            return Err(Error::InvalidConfig("min_len must be at least 1".into()));
        }
        let graph = WindowedGraph::new(config.graph)?;
        Ok(Self {
            config,
            graph,
            tally: None,
            latest: None,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn graph(&self) -> &WindowedGraph {
        &self.graph
    }

    pub fn tally(&self) -> Option<&PeriodTally> {
        self.tally.as_ref()
    }

    /// Normalizes raw tags into a post using the configured query tag and length.
    pub fn prepare<'a, I>(&self, timestamp: DateTime<Utc>, raw_tags: I) -> PostRecord
    where
        I: IntoIterator<Item = &'a RawTag>,
    {
        prepare_post(
            timestamp,
            raw_tags,
            self.config.query_tag.as_ref(),
            self.config.min_len,
        )
    }

    pub fn ingest<'a, I>(
        &mut self,
        timestamp: DateTime<Utc>,
        raw_tags: I,
    ) -> Result<Option<Snapshot>>
    where
        I: IntoIterator<Item = &'a RawTag>,
    {
        let post = self.prepare(timestamp, raw_tags);
        self.ingest_post(&post)
    }

    /// Rolls the period over if needed, tallies the post, then adds it to the graph.
    /// Returns the snapshot of the period that just completed, if any.
    pub fn ingest_post(&mut self, post: &PostRecord) -> Result<Option<Snapshot>> {
        let snapshot = self.maybe_rollover(post.timestamp())?;
        self.tally
            .as_mut()
            .expect("rollover opens a tally")
            .record_attributed(post);
        self.graph.add_post(post);
        Ok(snapshot)
    }

    /// Checks ordering and opens a new period when `timestamp` moves past the
    /// current one. Does not record anything.
    pub fn maybe_rollover(&mut self, timestamp: DateTime<Utc>) -> Result<Option<Snapshot>> {
        if let Some(latest) = self.latest {
            let behind = latest - timestamp;
            if behind > self.config.slack {
                return Err(Error::TimestampRegression {
                    timestamp: timestamp.to_rfc3339(),
                    behind_secs: behind.num_seconds(),
                    slack_secs: self.config.slack.num_seconds(),
                });
            }
        }
        self.latest = Some(self.latest.map_or(timestamp, |l| l.max(timestamp)));

        let period = PeriodLabel::of(timestamp, self.config.cadence);
        match &self.tally {
            None => {
                self.tally = Some(PeriodTally::new(period));
                Ok(None)
            }
            Some(current) if period > current.period() => {
                let done = self
                    .tally
                    .replace(PeriodTally::new(period))
                    .expect("checked above");
                Ok(Some(Snapshot::build(
                    self.graph.freeze(),
                    &done,
                    self.config.top_k,
                )))
            }
            Some(_) => Ok(None),
        }
    }

    /// Emits the snapshot of the open period. Later calls return `None` until
    /// another post opens a new period.
    pub fn finalize(&mut self) -> Option<Snapshot> {
        let done = self.tally.take()?;
        Some(Snapshot::build(
            self.graph.freeze(),
            &done,
            self.config.top_k,
        ))
    }
}
