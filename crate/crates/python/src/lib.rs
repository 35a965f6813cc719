//! Python bindings: `import hashdrift`.

use std::collections::HashMap;
use std::path::PathBuf;

use chrono::{DateTime, Utc};
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use hashdrift_core as core;
use hashdrift_core::analytics::{Cadence, DriftEngine, EngineConfig};
use hashdrift_core::graph::GraphConfig;
use hashdrift_core::normalize::{NormalizedHashtag, RawTag, DEFAULT_MIN_LEN};

fn to_py(err: core::Error) -> PyErr {
    match err {
        core::Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn raw_tags(tags: &[String]) -> Vec<RawTag> {
    tags.iter()
        .filter_map(|t| RawTag::new(t.as_str()).ok())
        .collect()
}

fn query(tag: Option<&str>) -> PyResult<Option<NormalizedHashtag>> {
    match tag {
        None | Some("") => Ok(None),
        Some(t) => core::normalize::normalize_str(t, 1)
            .map(Some)
            .ok_or_else(|| PyValueError::new_err(format!("invalid query tag {t:?}"))),
    }
}

#[pyfunction]
fn extract_raw_hashtags(text: &str) -> Vec<String> {
    core::extract_raw_hashtags(text)
        .into_iter()
        .map(|t| t.to_string())
        .collect()
}

#[pyfunction]
#[pyo3(signature = (tag, min_len = DEFAULT_MIN_LEN))]
fn normalize(tag: &str, min_len: usize) -> Option<String> {
    core::normalize::normalize_str(tag, min_len).map(NormalizedHashtag::into_string)
}

/// Normalizes, drops the query tag and deduplicates.
#[pyfunction]
#[pyo3(signature = (tags, query_tag = None, min_len = DEFAULT_MIN_LEN))]
fn prepare_post(
    tags: Vec<String>,
    query_tag: Option<&str>,
    min_len: usize,
) -> PyResult<Vec<String>> {
    let q = query(query_tag)?;
    let post = core::prepare_post(chrono_epoch(), &raw_tags(&tags), q.as_ref(), min_len);
    Ok(post
        .hashtags()
        .iter()
        .map(|t| t.as_str().to_owned())
        .collect())
}

fn chrono_epoch() -> DateTime<Utc> {
    DateTime::<Utc>::UNIX_EPOCH
}

#[pyclass(name = "FrozenGraph", module = "hashdrift", frozen)]
struct PyFrozenGraph {
    inner: core::FrozenGraph,
}

#[pymethods]
impl PyFrozenGraph {
    #[new]
    fn new(nodes: Vec<String>, edges: Vec<(String, String)>) -> PyResult<Self> {
        core::FrozenGraph::new(nodes, edges)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    fn nodes(&self) -> Vec<String> {
        self.inner.nodes().to_vec()
    }

    fn edges(&self) -> Vec<(String, String)> {
        self.inner
            .edges()
            .map(|(a, b)| (a.to_owned(), b.to_owned()))
            .collect()
    }

    fn edge_betweenness(&self) -> HashMap<(String, String), f64> {
        core::edge_betweenness(&self.inner).into_iter().collect()
    }

    /// Dendrogram levels, each a list of communities.
    fn girvan_newman(&self) -> Vec<Vec<Vec<String>>> {
        core::girvan_newman(&self.inner)
            .levels
            .into_iter()
            .map(|p| p.communities().to_vec())
            .collect()
    }

    /// `(communities, modularity)` of the best dendrogram level.
    fn best_partition(&self) -> (Vec<Vec<String>>, f64) {
        let best = core::best_partition(&self.inner);
        (best.partition.communities().to_vec(), best.modularity)
    }

    fn modularity(&self, communities: Vec<Vec<String>>) -> PyResult<f64> {
        core::modularity(&self.inner, &core::Partition::new(communities)).map_err(to_py)
    }

    /// Serializes as `graphml`, `dot` or `json`, colored by `communities`
    /// (the best partition when omitted).
    #[pyo3(signature = (format = "graphml", communities = None))]
    fn export(&self, format: &str, communities: Option<Vec<Vec<String>>>) -> PyResult<String> {
        let format: core::ExportFormat = format.parse().map_err(to_py)?;
        let partition = match communities {
            Some(c) => core::Partition::new(c),
            None => core::best_partition(&self.inner).partition,
        };
        Ok(core::export_graph(&self.inner, &partition, format))
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "FrozenGraph(nodes={}, edges={})",
            self.inner.node_count(),
            self.inner.edge_count()
        )
    }
}

#[pyclass(name = "WindowedGraph", module = "hashdrift")]
struct PyWindowedGraph {
    inner: core::WindowedGraph,
    min_len: usize,
}

#[pymethods]
impl PyWindowedGraph {
    #[new]
    #[pyo3(signature = (window_size = 200, min_freq = 5, pregraph_cap = 10_000, literal_counting = false, min_len = DEFAULT_MIN_LEN))]
    fn new(
        window_size: usize,
        min_freq: u32,
        pregraph_cap: usize,
        literal_counting: bool,
        min_len: usize,
    ) -> PyResult<Self> {
        let cfg = GraphConfig {
            window_size,
            min_freq,
            pregraph_cap,
            literal_counting,
        };
        let inner = core::WindowedGraph::new(cfg).map_err(to_py)?;
        Ok(Self { inner, min_len })
    }

    /// Adds one post given its raw tags; returns `(promoted, evicted)`.
    fn add_post(&mut self, tags: Vec<String>) -> (Vec<String>, Vec<String>) {
        let post = core::prepare_post(chrono_epoch(), &raw_tags(&tags), None, self.min_len);
        let out = self.inner.add_post(&post);
        let names =
            |v: Vec<NormalizedHashtag>| v.into_iter().map(NormalizedHashtag::into_string).collect();
        (names(out.promoted), names(out.evicted))
    }

    fn grow_old(&mut self) {
        self.inner.grow_old();
    }

    /// Returns `"already_node"`, `"still_pregraph"` or `"promoted"`.
    fn observe_tag(&mut self, tag: &str) -> PyResult<&'static str> {
        let tag = NormalizedHashtag::parse(tag, 1).map_err(to_py)?;
        Ok(match self.inner.observe_tag(&tag) {
            core::PromotionStatus::AlreadyNode => "already_node",
            core::PromotionStatus::StillPregraph => "still_pregraph",
            core::PromotionStatus::Promoted => "promoted",
        })
    }

    fn evict_oldest(&mut self) -> PyResult<String> {
        self.inner
            .evict_oldest()
            .map(NormalizedHashtag::into_string)
            .map_err(to_py)
    }

    /// `(node_count, edge_count, pregraph_count, post_seq)`
    fn stats(&self) -> (usize, usize, usize, u64) {
        let s = self.inner.stats();
        (s.node_count, s.edge_count, s.pregraph_count, s.post_seq)
    }

    fn age(&self, tag: &str) -> Option<u64> {
        self.inner.age(tag)
    }

    fn pregraph_count(&self, tag: &str) -> Option<u32> {
        self.inner.pregraph_count(tag)
    }

    /// `(tag, age)` pairs sorted by tag.
    fn nodes(&self) -> Vec<(String, u64)> {
        self.inner
            .nodes()
            .into_iter()
            .map(|n| (n.tag.into_string(), n.age))
            .collect()
    }

    fn edges(&self) -> Vec<(String, String)> {
        self.inner
            .edges()
            .into_iter()
            .map(|(a, b)| (a.into_string(), b.into_string()))
            .collect()
    }

    fn freeze(&self) -> PyFrozenGraph {
        PyFrozenGraph {
            inner: self.inner.freeze(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }
}

fn engine_config(
    window_size: usize,
    min_freq: u32,
    min_len: usize,
    query_tag: Option<&str>,
    cadence: &str,
    top_k: usize,
) -> PyResult<EngineConfig> {
    Ok(EngineConfig {
        graph: GraphConfig {
            window_size,
            min_freq,
            ..GraphConfig::default()
        },
        query_tag: query(query_tag)?,
        min_len,
        cadence: cadence.parse::<Cadence>().map_err(to_py)?,
        top_k,
        ..EngineConfig::default()
    })
}

/// Period-aware stream engine; snapshots are returned as JSON strings.
#[pyclass(name = "Engine", module = "hashdrift")]
struct PyEngine {
    inner: DriftEngine,
}

#[pymethods]
impl PyEngine {
    #[new]
    #[pyo3(signature = (window_size = 200, min_freq = 5, min_len = DEFAULT_MIN_LEN, query_tag = Some("mybodymychoice"), cadence = "year", top_k = 5))]
    fn new(
        window_size: usize,
        min_freq: u32,
        min_len: usize,
        query_tag: Option<&str>,
        cadence: &str,
        top_k: usize,
    ) -> PyResult<Self> {
        let cfg = engine_config(window_size, min_freq, min_len, query_tag, cadence, top_k)?;
        Ok(Self {
            inner: DriftEngine::new(cfg).map_err(to_py)?,
        })
    }

    /// Ingests one post (ISO-8601 or epoch timestamp, raw tags). Returns the
    /// snapshot JSON of a period that just completed, if any.
    fn ingest(&mut self, timestamp: &str, tags: Vec<String>) -> PyResult<Option<String>> {
        let ts = core::ingest::parse_timestamp(timestamp).map_err(PyValueError::new_err)?;
        let snap = self.inner.ingest(ts, &raw_tags(&tags)).map_err(to_py)?;
        Ok(snap.as_ref().map(core::snapshot_to_json))
    }

    fn finalize(&mut self) -> Option<String> {
        self.inner.finalize().as_ref().map(core::snapshot_to_json)
    }

    fn stats(&self) -> (usize, usize, usize, u64) {
        let s = self.inner.graph().stats();
        (s.node_count, s.edge_count, s.pregraph_count, s.post_seq)
    }

    fn freeze(&self) -> PyFrozenGraph {
        PyFrozenGraph {
            inner: self.inner.graph().freeze(),
        }
    }
}

/// Replays a JSONL/CSV file. Returns `(report_json, [snapshot_json, ...])`.
#[pyfunction]
#[pyo3(signature = (path, format = "jsonl", window_size = 200, min_freq = 5, min_len = DEFAULT_MIN_LEN, query_tag = Some("mybodymychoice"), cadence = "year", top_k = 5))]
#[allow(clippy::too_many_arguments)]
fn run_file(
    path: PathBuf,
    format: &str,
    window_size: usize,
    min_freq: u32,
    min_len: usize,
    query_tag: Option<&str>,
    cadence: &str,
    top_k: usize,
) -> PyResult<(String, Vec<String>)> {
    let cfg = engine_config(window_size, min_freq, min_len, query_tag, cadence, top_k)?;
    let mut engine = DriftEngine::new(cfg).map_err(to_py)?;
    let format: core::InputFormat = format.parse().map_err(to_py)?;
    let source = core::open_input(&path)
        .map_err(|e| PyIOError::new_err(format!("{}: {e}", path.display())))?;
    let outcome = core::run_stream(source, format, &mut engine).map_err(to_py)?;
    let drift = core::drift_report(&outcome.snapshots);
    let report = core::report_to_json(&outcome.report, &outcome.snapshots, &drift);
    Ok((
        report,
        outcome
            .snapshots
            .iter()
            .map(core::snapshot_to_json)
            .collect(),
    ))
}

/// Synthetic JSONL lines from the built-in drifting topic pools.
#[pyfunction]
#[pyo3(signature = (seed = 42, posts = 1000, phases = 1))]
fn synth(seed: u64, posts: u64, phases: usize) -> PyResult<Vec<String>> {
    let cfg = core::SynthConfig::demo(seed, posts, phases);
    Ok(core::generate_synthetic(cfg)
        .map_err(to_py)?
        .map(|r| r.to_json_line())
        .collect())
}

#[pymodule]
fn hashdrift(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(extract_raw_hashtags, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(prepare_post, m)?)?;
    m.add_function(wrap_pyfunction!(run_file, m)?)?;
    m.add_function(wrap_pyfunction!(synth, m)?)?;
    m.add_class::<PyFrozenGraph>()?;
    m.add_class::<PyWindowedGraph>()?;
    m.add_class::<PyEngine>()?;
    Ok(())
}
