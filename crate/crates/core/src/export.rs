//! Deterministic serialization of graphs, snapshots and run reports.
//!
//! Nodes and edges are always emitted in lexicographic order and JSON keys in
//! declaration order, so identical inputs produce identical bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::analytics::{DriftSummary, Snapshot};
use crate::community::{FrozenGraph, Partition};
use crate::error::{Error, Result};
use crate::ingest::RunReport;

/// Fill colors cycled by community index.
pub const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    GraphMl,
    Dot,
    Json,
}

impl ExportFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            Self::GraphMl => "graphml",
            Self::Dot => "dot",
            Self::Json => "json",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "graphml" => Ok(Self::GraphMl),
            "dot" => Ok(Self::Dot),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidConfig(format!(
                "unknown export format {other:?}"
            ))),
        }
    }
}

/// Rounds to 6 decimals and folds negative zero.
fn round6(x: f64) -> f64 {
    let r = (x * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn ser_round6<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round6(*x))
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("plain data serializes");
    out.push('\n');
    out
}

// Community index per node, `None` for nodes the partition does not mention.
fn community_of(g: &FrozenGraph, partition: &Partition) -> Vec<Option<usize>> {
    let mut out = vec![None; g.node_count()];
    for (c, members) in partition.communities().iter().enumerate() {
        for m in members {
            if let Some(i) = g.index_of(m) {
                out[i] = Some(c);
            }
        }
    }
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn export_graph(g: &FrozenGraph, partition: &Partition, format: ExportFormat) -> String {
    match format {
        ExportFormat::GraphMl => to_graphml(g, partition),
        ExportFormat::Dot => to_dot(g, partition),
        ExportFormat::Json => to_json(g, partition),
    }
}

fn to_graphml(g: &FrozenGraph, partition: &Partition) -> String {
    let community = community_of(g, partition);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str(
        "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n",
    );
    out.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
    for (tag, c) in g.nodes().iter().zip(&community) {
        let c = c.map_or(-1, |c| c as i64);
        let _ = writeln!(
            out,
            "    <node id=\"{}\"><data key=\"community\">{c}</data></node>",
            xml_escape(tag)
        );
    }
    for (a, b) in g.edges() {
        let _ = writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\"/>",
            xml_escape(a),
            xml_escape(b)
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn to_dot(g: &FrozenGraph, partition: &Partition) -> String {
    let community = community_of(g, partition);
    let mut out = String::from("graph hashtags {\n  node [style=filled];\n");
    for (tag, c) in g.nodes().iter().zip(&community) {
        match c {
            Some(c) => {
                let color = PALETTE[c % PALETTE.len()];
                let _ = writeln!(
                    out,
                    "  \"{}\" [fillcolor=\"{color}\", community={c}];",
                    dot_escape(tag)
                );
            }
            None => {
                let _ = writeln!(out, "  \"{}\";", dot_escape(tag));
            }
        }
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  \"{}\" -- \"{}\";", dot_escape(a), dot_escape(b));
    }
    out.push_str("}\n");
    out
}

fn to_json(g: &FrozenGraph, partition: &Partition) -> String {
    #[derive(Serialize)]
    struct Node<'a> {
        tag: &'a str,
        community: Option<usize>,
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        nodes: Vec<Node<'a>>,
        edges: Vec<[&'a str; 2]>,
    }
    let community = community_of(g, partition);
    let doc = Doc {
        nodes: g
            .nodes()
            .iter()
            .zip(community)
            .map(|(tag, community)| Node { tag, community })
            .collect(),
        edges: g.edges().map(|(a, b)| [a, b]).collect(),
    };
    to_pretty(&doc)
}

#[derive(Serialize)]
struct CommunityDoc<'a> {
    size: usize,
    members: &'a [String],
}

#[derive(Serialize)]
struct TagDoc<'a> {
    tag: &'a str,
    count: u64,
}

#[derive(Serialize)]
struct SnapshotDoc<'a> {
    period: String,
    posts: u64,
    node_count: usize,
    edge_count: usize,
    community_count: usize,
    #[serde(serialize_with = "ser_round6")]
    modularity: f64,
    top_communities: Vec<CommunityDoc<'a>>,
    top_tags: Vec<TagDoc<'a>>,
}

/// Snapshot document. Keys: `period`, `posts`, `node_count`, `edge_count`,
/// `community_count`, `modularity` (6 decimals), `top_communities`
/// (`size`, `members`), `top_tags` (`tag`, `count`).
pub fn snapshot_to_json(s: &Snapshot) -> String {
    let doc = SnapshotDoc {
        period: s.period.to_string(),
        posts: s.posts,
        node_count: s.node_count,
        edge_count: s.edge_count,
        community_count: s.best.partition.len(),
        modularity: s.best.modularity,
        top_communities: s
            .top_communities
            .iter()
            .map(|c| CommunityDoc {
                size: c.len(),
                members: c,
            })
            .collect(),
        top_tags: s
            .top_tags
            .iter()
            .map(|(tag, count)| TagDoc { tag, count: *count })
            .collect(),
    };
    to_pretty(&doc)
}

#[derive(Serialize)]
struct DriftDoc {
    from: String,
    to: String,
    #[serde(serialize_with = "ser_round6")]
    largest_overlap: f64,
    new_tags: usize,
    vanished_tags: usize,
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    lines_read: u64,
    posts_processed: u64,
    skipped: u64,
    snapshots_emitted: u64,
    periods: Vec<String>,
    drift: Vec<DriftDoc>,
    diagnostics: &'a [String],
}

pub fn report_to_json(
    report: &RunReport,
    snapshots: &[Snapshot],
    drift: &[DriftSummary],
) -> String {
    let doc = ReportDoc {
        lines_read: report.lines_read,
        posts_processed: report.posts_processed,
        skipped: report.skipped,
        snapshots_emitted: report.snapshots_emitted,
        periods: snapshots.iter().map(|s| s.period.to_string()).collect(),
        drift: drift
            .iter()
            .map(|d| DriftDoc {
                from: d.from.to_string(),
                to: d.to.to_string(),
                largest_overlap: d.largest_overlap,
                new_tags: d.new_tags,
                vanished_tags: d.vanished_tags,
            })
            .collect(),
        diagnostics: &report.diagnostics,
    };
    to_pretty(&doc)
}
