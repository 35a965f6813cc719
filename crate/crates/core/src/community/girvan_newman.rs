use super::betweenness::{indexed_adjacency, BrandesWork};
use super::{modularity, Dendrogram, FrozenGraph, Partition, ScoredPartition};

// Scores closer than this (relative) are treated as tied.
const SCORE_TOLERANCE: f64 = 1e-9;
const MODULARITY_TOLERANCE: f64 = 1e-12;

/// Removes the highest-betweenness edge one at a time until no edges remain,
/// recording a level each time the number of components grows.
///
/// Ties go to the lexicographically smallest `(u, v)` tag pair. After a
/// removal only the components containing the removed edge's endpoints are
/// rescored, since no shortest path crosses between components.
pub fn girvan_newman(g: &FrozenGraph) -> Dendrogram {
    let n = g.node_count();
    let m = g.edge_count();
    let edges = g.edge_indices();
    let mut adjacency = indexed_adjacency(n, edges);
    let mut alive = vec![true; m];
    let mut scores = vec![0.0; m];
    let mut work = BrandesWork::new(n);
    for s in 0..n {
        work.accumulate_from(s, &adjacency, &mut scores);
    }

    let mut levels = vec![g.components()];
    let mut remaining = m;
    let mut seen = vec![false; n];
    while remaining > 0 {
        let mut best: Option<usize> = None;
        for e in (0..m).filter(|&e| alive[e]) {
            best = match best {
                Some(b) if scores[e] <= scores[b] + SCORE_TOLERANCE * scores[b].max(1.0) => Some(b),
                _ => Some(e),
            };
        }
        let removed = best.expect("an edge remains");
        alive[removed] = false;
        remaining -= 1;
        let (u, v) = edges[removed];
        adjacency[u].retain(|&(_, id)| id != removed);
        adjacency[v].retain(|&(_, id)| id != removed);

        let mut affected = reachable(u, &adjacency, &mut seen);
        let split = !seen[v];
        if split {
            affected.extend(reachable(v, &adjacency, &mut seen));
        }
        for &x in &affected {
            seen[x] = false;
        }
        affected.sort_unstable();
        for &x in &affected {
            for &(_, id) in &adjacency[x] {
                scores[id] = 0.0;
            }
        }
        for &x in &affected {
            work.accumulate_from(x, &adjacency, &mut scores);
        }

        if split {
            levels.push(components(g, &adjacency));
        }
    }
    Dendrogram { levels }
}

// Marks and returns every node reachable from `start`. Callers clear `seen`.
fn reachable(start: usize, adjacency: &[Vec<(usize, usize)>], seen: &mut [bool]) -> Vec<usize> {
    let mut out = vec![start];
    seen[start] = true;
    let mut i = 0;
    while i < out.len() {
        for &(w, _) in &adjacency[out[i]] {
            if !seen[w] {
                seen[w] = true;
                out.push(w);
            }
        }
        i += 1;
    }
    out
}

fn components(g: &FrozenGraph, adjacency: &[Vec<(usize, usize)>]) -> Partition {
    let mut seen = vec![false; g.node_count()];
    let mut communities = Vec::new();
    for start in 0..g.node_count() {
        if !seen[start] {
            let members = reachable(start, adjacency, &mut seen);
            communities.push(members.into_iter().map(|i| g.nodes()[i].clone()).collect());
        }
    }
    Partition::new(communities)
}

/// The dendrogram level with the highest modularity against the original
/// edges. Ties keep the level with fewer communities. Edgeless graphs yield
/// all singletons with modularity 0.
pub fn best_partition(g: &FrozenGraph) -> ScoredPartition {
    if g.edge_count() == 0 {
        return ScoredPartition {
            partition: Partition::singletons(g),
            modularity: 0.0,
        };
    }
    let mut best: Option<ScoredPartition> = None;
    for level in girvan_newman(g).levels {
        let q = modularity(g, &level).expect("dendrogram levels cover the graph");
        if best
            .as_ref()
            .is_none_or(|b| q > b.modularity + MODULARITY_TOLERANCE)
        {
            best = Some(ScoredPartition {
                partition: level,
                modularity: q,
            });
        }
    }
    best.expect("dendrogram has at least one level")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::tests::barbell;
    use approx::assert_abs_diff_eq;

    fn sets(p: &Partition) -> Vec<Vec<&str>> {
        p.communities()
            .iter()
            .map(|c| c.iter().map(String::as_str).collect())
            .collect()
    }

    #[test]
    fn single_edge_dendrogram() {
        let g = FrozenGraph::from_edges(&[("a", "b")]).unwrap();
        let d = girvan_newman(&g);
        assert_eq!(d.levels.len(), 2);
        assert_eq!(sets(&d.levels[0]), [vec!["a", "b"]]);
        assert_eq!(sets(&d.levels[1]), [vec!["a"], vec!["b"]]);
    }

    #[test]
    fn barbell_splits_at_bridge() {
        let d = girvan_newman(&barbell());
        assert_eq!(
            sets(&d.levels[1]),
            [vec!["a", "b", "c"], vec!["d", "e", "f"]]
        );
        assert_eq!(d.levels.last().unwrap().len(), 6);
    }

    #[test]
    fn path_tie_breaks_lexicographically() {
        let g = FrozenGraph::from_edges(&[("a", "b"), ("b", "c")]).unwrap();
        let d = girvan_newman(&g);
        assert_eq!(sets(&d.levels[1]), [vec!["b", "c"], vec!["a"]]);
    }

    #[test]
    fn disconnected_graph_starts_from_components() {
        let g = FrozenGraph::new(["a", "b", "c", "d", "e"], [("a", "b"), ("c", "d")]).unwrap();
        let d = girvan_newman(&g);
        assert_eq!(d.levels[0].len(), 3);
        assert_eq!(
            d.levels.iter().map(Partition::len).collect::<Vec<_>>(),
            [3, 4, 5]
        );
        for pair in d.levels.windows(2) {
            assert!(pair[1].refines(&pair[0]));
        }
    }

    #[test]
    fn best_partition_examples() {
        let best = best_partition(&barbell());
        assert_eq!(
            sets(&best.partition),
            [vec!["a", "b", "c"], vec!["d", "e", "f"]]
        );
        assert_abs_diff_eq!(best.modularity, 0.357_142_857, epsilon = 1e-9);

        let g = FrozenGraph::new(["a", "b"], Vec::<(&str, &str)>::new()).unwrap();
        let best = best_partition(&g);
        assert_eq!(best.partition.len(), 2);
        assert_eq!(best.modularity, 0.0);

        let g = FrozenGraph::from_edges(&[("a", "b")]).unwrap();
        let best = best_partition(&g);
        assert_eq!(sets(&best.partition), [vec!["a", "b"]]);
        assert_abs_diff_eq!(best.modularity, 0.0, epsilon = 1e-12);

        let best = best_partition(&FrozenGraph::empty());
        assert!(best.partition.is_empty());
    }
}
