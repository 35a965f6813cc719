//! Brandes edge betweenness for unweighted, undirected graphs.

use std::collections::{BTreeMap, VecDeque};

use super::FrozenGraph;

/// Edge betweenness over unordered node pairs: for every edge, the sum over
/// pairs `{s, t}` of the fraction of shortest `s`-`t` paths that use it.
///
/// Keys are `(smaller, larger)` tag pairs.
pub fn edge_betweenness(g: &FrozenGraph) -> BTreeMap<(String, String), f64> {
    let adjacency = indexed_adjacency(g.node_count(), g.edge_indices());
    let mut scores = vec![0.0; g.edge_count()];
    let mut work = BrandesWork::new(g.node_count());
    for s in 0..g.node_count() {
        work.accumulate_from(s, &adjacency, &mut scores);
    }
    g.edges()
        .zip(scores)
        .map(|((a, b), score)| ((a.to_owned(), b.to_owned()), score / 2.0))
        .collect()
}

/// `(neighbor, edge id)` lists.
pub(crate) fn indexed_adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut adjacency = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adjacency[u].push((v, id));
        adjacency[v].push((u, id));
    }
    adjacency
}

/// Scratch buffers reused across single-source passes.
pub(crate) struct BrandesWork {
    dist: Vec<i64>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    preds: Vec<Vec<(usize, usize)>>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl BrandesWork {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            dist: vec![-1; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            preds: vec![Vec::new(); n],
            order: Vec::with_capacity(n),
            queue: VecDeque::with_capacity(n),
        }
    }

    /// Adds the dependencies of source `s` onto `scores` (ordered-pair
    /// convention: halve the final sum for unordered pairs).
    pub(crate) fn accumulate_from(
        &mut self,
        s: usize,
        adjacency: &[Vec<(usize, usize)>],
        scores: &mut [f64],
    ) {
        for &v in &self.order {
            self.dist[v] = -1;
            self.sigma[v] = 0.0;
            self.delta[v] = 0.0;
            self.preds[v].clear();
        }
        self.order.clear();

        self.dist[s] = 0;
        self.sigma[s] = 1.0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            for &(w, e) in &adjacency[v] {
                if self.dist[w] < 0 {
                    self.dist[w] = self.dist[v] + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push((v, e));
                }
            }
        }

        for &w in self.order.iter().rev() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &(v, e) in &self.preds[w] {
                let c = self.sigma[v] * coeff;
                scores[e] += c;
                self.delta[v] += c;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(a: &str, b: &str) -> (String, String) {
        (a.to_owned(), b.to_owned())
    }

    #[test]
    fn small_examples() {
        let g = FrozenGraph::from_edges(&[("a", "b")]).unwrap();
        assert_eq!(edge_betweenness(&g)[&key("a", "b")], 1.0);

        let g = FrozenGraph::from_edges(&[("a", "b"), ("b", "c")]).unwrap();
        let bc = edge_betweenness(&g);
        assert_eq!((bc[&key("a", "b")], bc[&key("b", "c")]), (2.0, 2.0));

        let g = FrozenGraph::from_edges(&[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        assert!(edge_betweenness(&g).values().all(|&v| v == 1.0));
    }

    #[test]
    fn barbell_bridge_carries_cross_pairs() {
        let bc = edge_betweenness(&super::super::tests::barbell());
        assert_eq!(bc[&key("c", "d")], 9.0);
        assert!(bc.iter().all(|(k, &v)| k == &key("c", "d") || v < 9.0));
    }

    #[test]
    fn square_splits_paths_evenly() {
        // a-b-d and a-c-d are both shortest for the pair {a, d}.
        let g = FrozenGraph::from_edges(&[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]).unwrap();
        assert!(edge_betweenness(&g)
            .values()
            .all(|&v| (v - 2.0).abs() < 1e-12));
    }

    #[test]
    fn disconnected_pairs_contribute_nothing() {
        let g = FrozenGraph::new(["a", "b", "c", "d"], [("a", "b"), ("c", "d")]).unwrap();
        assert!(edge_betweenness(&g).values().all(|&v| v == 1.0));
        assert!(edge_betweenness(&FrozenGraph::empty()).is_empty());
    }
}
