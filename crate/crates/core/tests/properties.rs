use isopath::solver::regularize_with;
use isopath::*;
use proptest::prelude::*;

fn block_graph(
    max_blocks: usize,
    max_size: usize,
    max_label: u32,
) -> impl Strategy<Value = (Graph, VertexLabeling)> {
    (1..=max_blocks, 2..=max_size, 0..=max_label, any::<u64>()).prop_map(
        move |(block_count, max_block_size, max_label, seed)| {
            random_block_graph(&GeneratorParams {
                block_count,
                min_block_size: 2,
                max_block_size,
                max_label,
                seed,
            })
            .unwrap()
        },
    )
}

/// Disjoint union, the second graph shifted past the first.
fn union(a: &(Graph, VertexLabeling), b: &(Graph, VertexLabeling)) -> (Graph, VertexLabeling) {
    let shift = a.0.vertex_count();
    let mut edges: Vec<_> = a.0.edges().collect();
    edges.extend(b.0.edges().map(|(u, v)| (u + shift, v + shift)));
    let mut labels = a.1.as_slice().to_vec();
    labels.extend_from_slice(b.1.as_slice());
    (
        Graph::from_edges(shift + b.0.vertex_count(), &edges).unwrap(),
        VertexLabeling::from(labels),
    )
}

fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..=2 * n).prop_map(move |pairs| {
            let edges: Vec<_> = pairs.into_iter().filter(|(u, v)| u != v).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn cut_vertices_by_deletion(g: &Graph) -> Vec<usize> {
    let base = connected_components(g).len();
    (0..g.vertex_count())
        .filter(|&v| {
            let keep: Vec<usize> = (0..g.vertex_count()).filter(|&u| u != v).collect();
            connected_components(&g.induced_subgraph(&keep)).len() > base
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bfs_is_a_metric(g in any_graph(12)) {
        let n = g.vertex_count();
        let d: Vec<Vec<usize>> = (0..n).map(|s| bfs_distances(&g, s)).collect();
        for u in 0..n {
            prop_assert_eq!(d[u][u], 0);
            for v in 0..n {
                prop_assert_eq!(d[u][v], d[v][u]);
                for w in 0..n {
                    if d[u][w] != UNREACHABLE && d[w][v] != UNREACHABLE {
                        prop_assert!(d[u][v] <= d[u][w] + d[w][v]);
                    }
                }
            }
        }
    }

    #[test]
    fn cut_vertices_match_deletion(g in any_graph(8)) {
        let bc = blocks_and_cut_vertices(&g);
        prop_assert_eq!(bc.cut_vertices(), cut_vertices_by_deletion(&g));
    }

    #[test]
    fn blocks_partition_the_edges(g in any_graph(10)) {
        let bc = blocks_and_cut_vertices(&g);
        for (u, v) in g.edges() {
            let b = bc.edge_block(&g, u, v).unwrap();
            prop_assert!(bc.block(b).contains(&u) && bc.block(b).contains(&v));
            prop_assert_eq!(bc.edge_block(&g, v, u), Some(b));
        }
    }

    #[test]
    fn common_block_matches_membership(g in any_graph(10)) {
        let bc = blocks_and_cut_vertices(&g);
        let n = g.vertex_count();
        for u in 0..n {
            prop_assert_eq!(bc.common_block(u, u), None);
            for v in (0..n).filter(|&v| v != u) {
                let shared = (0..bc.block_count())
                    .find(|&b| bc.block(b).contains(&u) && bc.block(b).contains(&v));
                prop_assert_eq!(bc.common_block(u, v), shared);
            }
        }
    }

    #[test]
    fn reversed_isometric_paths_stay_isometric(g in any_graph(10)) {
        for p in enumerate_isometric_paths(&g).unwrap() {
            prop_assert!(is_isometric_path(&g, &p));
            prop_assert!(is_isometric_path(&g, &p.reversed()));
        }
    }

    #[test]
    fn block_graphs_have_one_shortest_path_per_pair((g, _) in block_graph(5, 4, 0)) {
        prop_assume!(g.vertex_count() <= 8);
        let n = g.vertex_count();
        prop_assert_eq!(enumerate_isometric_paths(&g).unwrap().len(), n + n * (n - 1) / 2);
    }

    #[test]
    fn regularize_is_idempotent_and_monotone((g, f) in block_graph(20, 5, 3)) {
        let once = regularize(&g, &f);
        prop_assert_eq!(regularize(&g, &once), once.clone());
        let bc = blocks_and_cut_vertices(&g);
        for v in 0..g.vertex_count() {
            prop_assert!(once.get(v) >= f.get(v));
            if bc.is_cut_vertex(v) {
                prop_assert_eq!(once.get(v), f.get(v));
            } else {
                prop_assert!(once.get(v) >= 1);
            }
        }
    }

    #[test]
    fn peel_conserves_label_mass(a in block_graph(15, 5, 3), b in block_graph(6, 4, 3)) {
        let (g, f) = union(&a, &b);
        let bc = blocks_and_cut_vertices(&g);
        let regular = regularize_with(&bc, &f);
        let outcome = peel(&g, &bc, &regular).unwrap();
        prop_assert_eq!(outcome.roots.len(), 2);
        let rooted: u64 = outcome.roots.iter().map(|r| u64::from(r.label)).sum();
        prop_assert_eq!(rooted, u64::from(s_value(&regular).unwrap()));
        prop_assert_eq!(outcome.frames.len() + outcome.roots.len(), g.vertex_count());
    }

    #[test]
    fn value_law_and_endpoint_accounting(a in block_graph(15, 5, 3), b in block_graph(6, 4, 3)) {
        for (g, f) in [a.clone(), union(&a, &b)] {
            let sol = solve(&g, &f).unwrap();
            let expected: u64 = connected_components(&g)
                .iter()
                .map(|part| part.iter().map(|&v| u64::from(sol.regularized.get(v))).sum::<u64>().div_ceil(2))
                .sum();
            prop_assert_eq!(sol.value, expected);
            prop_assert_eq!(sol.cover.len(), sol.value);
            prop_assert!(!sol.used_fallback);
            prop_assert!(verify_cover(&g, &f, &sol.cover).is_valid());
            prop_assert!(verify_cover(&g, &sol.regularized, &sol.cover).is_valid());

            // Every path spends both ends on demand, except one per odd component.
            let s = u64::from(s_value(&sol.regularized).unwrap());
            prop_assert!(2 * sol.value >= s);
            prop_assert!(2 * sol.value - s <= connected_components(&g).len() as u64);
        }
    }

    #[test]
    fn emitted_paths_turn_only_at_cut_vertices((g, f) in block_graph(25, 5, 2)) {
        let sol = solve(&g, &f).unwrap();
        let bc = blocks_and_cut_vertices(&g);
        for p in sol.cover.paths() {
            prop_assert!(is_isometric_path(&g, p));
            let vs = p.vertices();
            if vs.len() > 2 {
                prop_assert!(vs[1..vs.len() - 1].iter().all(|&v| bc.is_cut_vertex(v)));
            }
        }
    }

    #[test]
    fn text_and_structured_covers_agree((g, f) in block_graph(10, 4, 3)) {
        let sol = solve(&g, &f).unwrap();
        let (value, parsed) = parse_cover_text(&write_cover_text(sol.value, &sol.cover)).unwrap();
        prop_assert_eq!(value, Some(sol.value));
        let doc = StructuredOutput::new(sol.value, &sol.cover, sol.regularized.as_slice(), true);
        let json = serde_json::to_string(&doc).unwrap();
        let back: StructuredOutput = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.cover().canonical(), parsed.canonical());
        prop_assert_eq!(parsed.canonical(), sol.cover.canonical());
    }

    #[test]
    fn edge_list_round_trips(g in any_graph(15)) {
        prop_assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }
}
