//! Streaming hashtag co-occurrence graphs and drift analysis.
//!
//! Posts flow through [`normalize`] into a [`graph::WindowedGraph`], a bounded
//! co-occurrence graph whose nodes age out unless they keep co-occurring.
//! At every period boundary the [`analytics::DriftEngine`] freezes the graph,
//! runs Girvan-Newman ([`community`]) on the copy and records a
//! [`analytics::Snapshot`]. The live graph carries over into the next period.

pub mod analytics;
pub mod community;
pub mod error;
pub mod export;
pub mod graph;
pub mod ingest;
pub mod normalize;
pub mod synth;

pub use analytics::{
    drift_report, drift_summary, Cadence, DriftEngine, DriftSummary, EngineConfig, PeriodLabel,
    PeriodTally, Snapshot,
};
pub use community::{
    best_partition, edge_betweenness, girvan_newman, modularity, Dendrogram, FrozenGraph,
    Partition, ScoredPartition,
};
pub use error::{Error, Result};
pub use export::{export_graph, report_to_json, snapshot_to_json, ExportFormat};
pub use graph::{GraphConfig, GraphStats, PromotionStatus, WindowedGraph};
pub use ingest::{
    open_input, parse_record, run_stream, FieldMap, InputFormat, RunOutcome, RunReport,
    StreamRecord, StreamRunner,
};
pub use normalize::{
    extract_raw_hashtags, normalize, prepare_post, NormalizedHashtag, PostRecord, RawTag,
};
pub use synth::{generate_synthetic, SynthConfig};
