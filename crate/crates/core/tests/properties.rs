use std::collections::HashSet;

use melonlab_core::ball::BallSkeleton;
use melonlab_core::depth::{
    ball_depths, depth_profile, depth_via_array, depth_via_subwords, pair_distance_bracket, stack_depth,
    stack_depth_profile,
};
use melonlab_core::graph::{MelonGraph, Parity};
use melonlab_core::sampler::{sample_simple_melon, sample_uniform_tree};
use melonlab_core::walk::exact_walk_distribution;
use melonlab_core::walk_algebra::{first_return_matrix, h_at_one, lambda_simple};
use melonlab_core::{Color, ColoredWord, Field, MelonTree, NodeId, RationalSeries};
use num_rational::BigRational;
use proptest::prelude::*;

fn tree_strategy(max_n: usize) -> impl Strategy<Value = MelonTree> {
    (2usize..=4, 1..=max_n, any::<u64>()).prop_map(|(d, n, seed)| sample_uniform_tree(d, n, seed).unwrap())
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = (usize, ColoredWord)> {
    (2usize..=6).prop_flat_map(move |d| {
        (Just(d), 0..=d, prop::collection::vec(0..=d, 0..max_len))
            .prop_map(|(d, r, ls)| (d, ColoredWord::from_values(r, &ls, d).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn words_locate_their_nodes(tree in tree_strategy(300)) {
        for v in tree.nodes() {
            let w = tree.word_of(v).unwrap();
            prop_assert_eq!(tree.find(&w), Some(v));
        }
    }

    #[test]
    fn serialization_round_trips(tree in tree_strategy(300)) {
        let line = tree.to_line();
        let back = MelonTree::parse_line(&line).unwrap();
        prop_assert_eq!(back.to_line(), line);
        prop_assert_eq!(back.len(), tree.len());
    }

    #[test]
    fn closed_graph_is_properly_colored(tree in tree_strategy(300)) {
        let g = MelonGraph::build(&tree, true);
        let d = tree.dim();
        prop_assert_eq!(g.vertex_count(), 2 * tree.len());
        prop_assert_eq!(g.edges().len(), (d + 1) * tree.len());
        let mut seen = HashSet::new();
        for e in g.edges() {
            prop_assert_ne!(g.parity(e.u as usize), g.parity(e.v as usize));
            prop_assert!(seen.insert((e.u, e.color)));
            prop_assert!(seen.insert((e.v, e.color)));
        }
        for v in 0..g.vertex_count() {
            prop_assert_eq!(g.degree(v), d + 1);
        }
    }

    #[test]
    fn open_graph_externals(tree in tree_strategy(100)) {
        let g = MelonGraph::build(&tree, false);
        let (i, o) = g.externals().unwrap();
        prop_assert_eq!(g.parity(i), Parity::Black);
        prop_assert_eq!(g.parity(o), Parity::White);
        prop_assert_eq!(g.degree(i), 1);
        prop_assert_eq!(g.degree(o), 1);
    }

    #[test]
    fn skeleton_counts(tree in tree_strategy(300)) {
        let s = BallSkeleton::build(&tree);
        let (n, d) = (tree.len(), tree.dim());
        prop_assert_eq!(s.vertex_count(), n + d);
        prop_assert_eq!(s.edge_count(), d * (d + 1) / 2 + d * (n - 1));
    }

    #[test]
    fn contour_walk_decodes_to_tree(tree in tree_strategy(300)) {
        let walk = tree.contour_walk();
        prop_assert!(walk.is_excursion());
        prop_assert_eq!(walk.values().len(), 2 * tree.len() + 1);
        let parents = walk.decode();
        let order = tree.lex_order();
        let pos: std::collections::HashMap<NodeId, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let expect: Vec<Option<usize>> = order.iter().map(|&v| tree.parent(v).map(|p| pos[&p])).collect();
        prop_assert_eq!(parents, expect);
    }

    #[test]
    fn array_and_subword_depths_agree((d, w) in word_strategy(2000)) {
        let (a, trace) = depth_via_array(&w, d).unwrap();
        let (b, _) = depth_via_subwords(&w, d).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(trace.len(), w.len() + 1);
    }

    #[test]
    fn depth_profile_steps((d, w) in word_strategy(500)) {
        let p = depth_profile(&w, d).unwrap();
        prop_assert_eq!(p[0], 0);
        let mut prev = w.root_letter();
        for (s, &c) in p.windows(2).zip(w.letters()) {
            prop_assert!(s[1] >= s[0]);
            // a repeated letter skips the parent's own vertex and may climb by 2
            let step = if c == prev { 2 } else { 1 };
            prop_assert!(s[1] <= s[0] + step);
            prev = c;
        }
    }

    #[test]
    fn stack_depth_lags((d, w) in word_strategy(500)) {
        prop_assert!(stack_depth(&w, d).unwrap() <= depth_via_array(&w, d).unwrap().0);
        let sp = stack_depth_profile(&w, d).unwrap();
        let dp = depth_profile(&w, d).unwrap();
        for (s, t) in sp.iter().zip(&dp) {
            prop_assert!(s <= t);
        }
    }

    #[test]
    fn ball_depth_equals_bfs(tree in tree_strategy(400)) {
        let s = BallSkeleton::build(&tree);
        let bfs = s.bfs_distances(s.root_vertex());
        let arr = ball_depths(&tree);
        for v in tree.nodes() {
            prop_assert_eq!(arr[v.index()], bfs[s.vertex_of(v)]);
        }
    }

    #[test]
    fn bracket_contains_bfs(tree in tree_strategy(300), picks in prop::collection::vec((any::<u32>(), any::<u32>()), 20)) {
        prop_assume!(tree.len() >= 2);
        let s = BallSkeleton::build(&tree);
        for (x, y) in picks {
            let a = NodeId(x % tree.len() as u32);
            let b = NodeId(y % tree.len() as u32);
            if a == b {
                continue;
            }
            let br = pair_distance_bracket(&tree, a, b).unwrap();
            let d = s.bfs_distances(s.vertex_of(a))[s.vertex_of(b)] as usize;
            prop_assert!(br.contains(d), "{:?} vs {}", br, d);
            prop_assert!(br.upper - br.lower <= 8);
        }
    }

    #[test]
    fn walk_rows_are_stochastic(tree in tree_strategy(40), start in any::<u16>()) {
        let g = MelonGraph::build(&tree, true);
        let start = start as usize % g.vertex_count();
        let rows = exact_walk_distribution::<f64>(&g, 30, start).unwrap();
        for (t, row) in rows.iter().enumerate() {
            let total: f64 = row.iter().sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
            if t % 2 == 1 {
                prop_assert_eq!(row[start], 0.0);
            }
        }
    }

    #[test]
    fn matrix_symmetric_and_constant_free(tree in tree_strategy(8)) {
        let m = first_return_matrix(&tree, 12).unwrap();
        prop_assert_eq!(&m.ob, &m.bo);
        for s in [&m.oo, &m.ob, &m.bo, &m.bb] {
            prop_assert!(s.coeff(0).is_zero());
            prop_assert!(s.coeffs().iter().all(|c| *c >= BigRational::from_i64(0)));
        }
    }

    #[test]
    fn simple_melons_reduce_to_lambda((d, p, seed) in (2usize..=4, 1usize..=6, any::<u64>())) {
        let t = sample_simple_melon(d, p, seed).unwrap();
        let m = first_return_matrix(&t, 14).unwrap();
        // a + bσ form
        prop_assert_eq!(&m.oo, &m.bb);
        let y = RationalSeries::var(14);
        let lam = lambda_simple(&t, &y).unwrap();
        prop_assert_eq!(lam, m.oo.add(&m.ob));
        let lam_neg = lambda_simple(&t, &y.neg()).unwrap();
        prop_assert_eq!(lam_neg, m.oo.sub(&m.ob));
    }

    #[test]
    fn h_counts_vertices((d, p, seed) in (2usize..=5, 1usize..=40, any::<u64>())) {
        let t = sample_simple_melon(d, p, seed).unwrap();
        prop_assert_eq!(h_at_one(&t).unwrap(), BigRational::from_i64(((d + 1) * p + 1) as i64));
    }
}

#[test]
fn sampler_is_deterministic() {
    for d in 2..=4 {
        let a = sample_uniform_tree(d, 500, 99).unwrap();
        let b = sample_uniform_tree(d, 500, 99).unwrap();
        assert_eq!(a.to_line(), b.to_line());
    }
}

#[test]
fn worked_word_round_trip() {
    let w: ColoredWord = "0;10132120312".parse().unwrap();
    assert_eq!(w.root_letter(), Color::ZERO);
    assert_eq!(w.to_string(), "0;10132120312");
}
