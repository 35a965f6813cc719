//! Girvan-Newman community detection over immutable graph snapshots.

mod betweenness;
mod girvan_newman;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

pub use betweenness::edge_betweenness;
pub use girvan_newman::{best_partition, girvan_newman};

/// An immutable, simple, undirected graph over string-labelled nodes.
///
/// Nodes are kept in sorted order and edges are `(u, v)` index pairs with
/// `u < v`, sorted, so edge order is the lexicographic order of tag pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrozenGraph {
    nodes: Vec<String>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl FrozenGraph {
    pub fn new<N, E, S>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let nodes: BTreeSet<String> = nodes.into_iter().map(Into::into).collect();
        let nodes: Vec<String> = nodes.into_iter().collect();
        let index = |tag: &str| {
            nodes
                .binary_search_by(|n| n.as_str().cmp(tag))
                .map_err(|_| Error::InvalidGraph(format!("edge endpoint {tag:?} is not a node")))
        };
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            let (i, j) = (index(&a)?, index(&b)?);
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop on {a:?}")));
            }
            edge_set.insert((i.min(j), i.max(j)));
        }
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for &(u, v) in &edge_set {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Ok(Self {
            nodes,
            edges: edge_set.into_iter().collect(),
            adjacency,
        })
    }

    /// Builds a graph whose node set is exactly the edge endpoints.
    pub fn from_edges<S: AsRef<str>>(edges: &[(S, S)]) -> Result<Self> {
        let nodes: Vec<String> = edges
            .iter()
            .flat_map(|(a, b)| [a.as_ref().to_owned(), b.as_ref().to_owned()])
            .collect();
        Self::new(
            nodes,
            edges
                .iter()
                .map(|(a, b)| (a.as_ref().to_owned(), b.as_ref().to_owned())),
        )
    }

    pub fn empty() -> Self {
        Self {
            nodes: Vec::new(),
            edges: Vec::new(),
            adjacency: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges
            .iter()
            .map(|&(u, v)| (self.nodes[u].as_str(), self.nodes[v].as_str()))
    }

    pub fn index_of(&self, tag: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.as_str().cmp(tag)).ok()
    }

    pub(crate) fn edge_indices(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, tag: &str) -> Option<usize> {
        self.index_of(tag).map(|i| self.adjacency[i].len())
    }

    /// Connected components as a canonical partition.
    pub fn components(&self) -> Partition {
        let mut seen = vec![false; self.nodes.len()];
        let mut communities = Vec::new();
        for start in 0..self.nodes.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut members = Vec::new();
            while let Some(u) = stack.pop() {
                members.push(self.nodes[u].clone());
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            communities.push(members);
        }
        Partition::new(communities)
    }
}

/// Disjoint node sets, canonically ordered: members sorted, communities by
/// size descending then by smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Partition {
    communities: Vec<Vec<String>>,
}

impl Partition {
    pub fn new(communities: Vec<Vec<String>>) -> Self {
        let mut communities: Vec<Vec<String>> = communities
            .into_iter()
            .filter(|c| !c.is_empty())
            .map(|mut c| {
                c.sort();
                c.dedup();
                c
            })
            .collect();
        communities.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
        Self { communities }
    }

    pub fn singletons(g: &FrozenGraph) -> Self {
        Self::new(g.nodes().iter().map(|n| vec![n.clone()]).collect())
    }

    pub fn communities(&self) -> &[Vec<String>] {
        &self.communities
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    pub fn largest(&self) -> Option<&[String]> {
        self.communities.first().map(Vec::as_slice)
    }

    /// Community index of every node of `g`, or an error if the partition is
    /// not an exact cover of `g`'s nodes.
    pub fn membership(&self, g: &FrozenGraph) -> Result<Vec<usize>> {
        let mut membership = vec![usize::MAX; g.node_count()];
        let mut covered = 0;
        for (c, members) in self.communities.iter().enumerate() {
            for m in members {
                let i = g.index_of(m).ok_or(Error::InvalidPartition)?;
                if membership[i] != usize::MAX {
                    return Err(Error::InvalidPartition);
                }
                membership[i] = c;
                covered += 1;
            }
        }
        if covered != g.node_count() {
            return Err(Error::InvalidPartition);
        }
        Ok(membership)
    }

    /// True when every community of `self` lies inside one community of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        let mut owner = std::collections::HashMap::new();
        for (c, members) in coarser.communities.iter().enumerate() {
            for m in members {
                owner.insert(m.as_str(), c);
            }
        }
        self.communities.iter().all(|members| {
            let first = owner.get(members[0].as_str());
            first.is_some() && members.iter().all(|m| owner.get(m.as_str()) == first)
        })
    }
}

/// Partitions observed during edge removal, one per increase in component count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dendrogram {
    pub levels: Vec<Partition>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredPartition {
    pub partition: Partition,
    pub modularity: f64,
}

/// Newman-Girvan modularity of `p` against all edges of `g`.
pub fn modularity(g: &FrozenGraph, p: &Partition) -> Result<f64> {
    let membership = p.membership(g)?;
    modularity_of(g, &membership, p.len())
}

pub(crate) fn modularity_of(
    g: &FrozenGraph,
    membership: &[usize],
    communities: usize,
) -> Result<f64> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::EdgelessGraph);
    }
    let mut internal = vec![0usize; communities];
    let mut degree = vec![0usize; communities];
    for &(u, v) in g.edge_indices() {
        if membership[u] == membership[v] {
            internal[membership[u]] += 1;
        }
        degree[membership[u]] += 1;
        degree[membership[v]] += 1;
    }
    let m = m as f64;
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| e as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}
