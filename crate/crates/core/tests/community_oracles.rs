mod support;

use hashdrift_core::{
    best_partition, edge_betweenness, girvan_newman, modularity, FrozenGraph, Partition,
};
use proptest::prelude::*;
use support::oracle::{brute_force, max_abs_diff};

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("n{i:02}")).collect()
}

fn build(n: usize, edges: &[(usize, usize)]) -> FrozenGraph {
    let nodes = names(n);
    FrozenGraph::new(
        nodes.clone(),
        edges
            .iter()
            .map(|&(a, b)| (nodes[a].clone(), nodes[b].clone())),
    )
    .unwrap()
}

fn arb_graph(max_nodes: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1..=max_nodes).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        let k = pairs.len();
        (Just(n), proptest::sample::subsequence(pairs, 0..=k))
    })
}

// Random labelled tree: node i > 0 attaches to a parent among 0..i.
fn arb_tree() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..14).prop_flat_map(|n| {
        proptest::collection::vec(any::<prop::sample::Index>(), n - 1).prop_map(move |parents| {
            (
                n,
                parents
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (p.index(i + 1), i + 1))
                    .collect(),
            )
        })
    })
}

proptest! {
    #[test]
    fn brandes_matches_path_enumeration((n, edges) in arb_graph(8)) {
        let g = build(n, &edges);
        let oracle = brute_force(g.nodes(), &edges);
        prop_assert!(max_abs_diff(&edge_betweenness(&g), &oracle) <= 1e-9);
    }

    #[test]
    fn bridges_score_side_product((n, edges) in arb_tree()) {
        let g = build(n, &edges);
        let scores = edge_betweenness(&g);
        for &(a, b) in &edges {
            // Size of the side containing `b` once the edge is cut.
            let rest: Vec<(usize, usize)> = edges.iter().copied().filter(|&e| e != (a, b)).collect();
            let side = build(n, &rest).components().communities().iter()
                .find(|c| c.contains(&g.nodes()[b])).unwrap().len();
            let key = (g.nodes()[a.min(b)].clone(), g.nodes()[a.max(b)].clone());
            prop_assert_eq!(scores[&key], (side * (n - side)) as f64);
        }
    }

    #[test]
    fn dendrogram_refines_down_to_singletons((n, edges) in arb_graph(9)) {
        let g = build(n, &edges);
        let d = girvan_newman(&g);
        prop_assert_eq!(&d.levels[0], &g.components());
        prop_assert_eq!(d.levels.last().unwrap().len(), n);
        for pair in d.levels.windows(2) {
            prop_assert!(pair[1].len() > pair[0].len());
            prop_assert!(pair[1].refines(&pair[0]));
        }
        prop_assert_eq!(girvan_newman(&g), d);
    }

    #[test]
    fn modularity_stays_in_range((n, edges) in arb_graph(9), labels in proptest::collection::vec(0usize..4, 9)) {
        prop_assume!(!edges.is_empty());
        let g = build(n, &edges);
        let mut groups = vec![Vec::new(); 4];
        for (i, name) in g.nodes().iter().enumerate() {
            groups[labels[i]].push(name.clone());
        }
        let q = modularity(&g, &Partition::new(groups)).unwrap();
        prop_assert!((-0.5..1.0).contains(&q), "q = {}", q);
        let whole = modularity(&g, &Partition::new(vec![g.nodes().to_vec()])).unwrap();
        prop_assert!(whole.abs() <= 1e-12);
        let best = best_partition(&g);
        prop_assert!(best.modularity >= whole - 1e-12);
    }
}
