//! Brute-force edge betweenness: enumerates every shortest path explicitly.

use std::collections::{BTreeMap, VecDeque};

pub type Scores = BTreeMap<(String, String), f64>;

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                q.push_back(v);
            }
        }
    }
    dist
}

// Walks every path from `u` to `t` that follows the distance layers from `t`.
fn walk(
    adj: &[Vec<usize>],
    to_t: &[Option<usize>],
    u: usize,
    t: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if u == t {
        out.push(path.clone());
        return;
    }
    let d = to_t[u].unwrap();
    for &v in &adj[u] {
        if to_t[v] == Some(d - 1) {
            path.push(v);
            walk(adj, to_t, v, t, path, out);
            path.pop();
        }
    }
}

/// `nodes` sorted; `edges` as `(i, j)` indices.
pub fn brute_force(nodes: &[String], edges: &[(usize, usize)]) -> Scores {
    let n = nodes.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let key = |a: usize, b: usize| {
        let (a, b) = (a.min(b), a.max(b));
        (nodes[a].clone(), nodes[b].clone())
    };
    let mut scores: Scores = edges.iter().map(|&(a, b)| (key(a, b), 0.0)).collect();
    for s in 0..n {
        for t in s + 1..n {
            let to_t = bfs(&adj, t);
            if to_t[s].is_none() {
                continue;
            }
            let mut paths = Vec::new();
            walk(&adj, &to_t, s, t, &mut vec![s], &mut paths);
            let total = paths.len() as f64;
            for p in &paths {
                for w in p.windows(2) {
                    *scores.get_mut(&key(w[0], w[1])).unwrap() += 1.0 / total;
                }
            }
        }
    }
    scores
}

pub fn max_abs_diff(a: &Scores, b: &Scores) -> f64 {
    assert_eq!(a.len(), b.len(), "edge sets differ");
    a.iter()
        .map(|(k, v)| (v - b.get(k).expect("edge present in both")).abs())
        .fold(0.0, f64::max)
}
