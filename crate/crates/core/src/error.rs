use thiserror::Error;

use crate::analytics::PeriodLabel;

#[derive(Debug, Error)]
pub enum Error {
    #[error("raw hashtag must not be empty")]
    EmptyRawTag,
    #[error("not a canonical hashtag: {0:?}")]
    InvalidHashtag(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid graph config: {0}")]
    InvalidConfig(String),
    #[error("evict_oldest called on a window holding {nodes} of {capacity} nodes")]
    WindowNotFull { nodes: usize, capacity: usize },
    #[error("modularity is undefined for a graph without edges")]
    EdgelessGraph,
    #[error("partition does not cover the graph's nodes exactly")]
    InvalidPartition,
    #[error("post belongs to period {post} but tally is for {tally}")]
    PeriodMismatch {
        tally: PeriodLabel,
        post: PeriodLabel,
    },
    #[error(
        "timestamp {timestamp} regresses {behind_secs}s behind the stream (slack {slack_secs}s)"
    )]
    TimestampRegression {
        timestamp: String,
        behind_secs: i64,
        slack_secs: i64,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("invalid synthetic stream config: {0}")]
    InvalidSynthConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
