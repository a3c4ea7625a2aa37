use melonlab_core::coverage::{coverage_probability, lambda_delta, mean_block_length, sample_depths};
use melonlab_core::depth::{ball_depths, depth_via_subwords};
use melonlab_core::graph::MelonGraph;
use melonlab_core::sampler::{enumerate_trees, sample_uniform_tree, stream_rng, OffspringLaw};
use melonlab_core::walk::{exact_walk_distribution, graph_return_hits};
use melonlab_core::{BallSkeleton, ColoredWord, Exec, Field};
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

#[test]
fn coverage_rows_normalized() {
    for d in 2..=5 {
        for n in 0..=12u32 {
            let mut total = <BigRational as Field>::zero();
            for q in 0..=(d as u32 + 1) {
                let p = coverage_probability(n, q, d).unwrap();
                if n < q {
                    assert!(Field::is_zero(&p));
                }
                total += p;
            }
            assert!(total.is_one(), "D={d} n={n}");
        }
    }
}

#[test]
fn depth_matches_bfs_on_all_small_trees() {
    for d in [2, 3] {
        for n in 1..=5 {
            for tree in enumerate_trees(d, n).unwrap() {
                let s = BallSkeleton::build(&tree);
                let bfs = s.bfs_distances(s.root_vertex());
                let arr = ball_depths(&tree);
                for v in tree.nodes() {
                    assert_eq!(arr[v.index()], bfs[s.vertex_of(v)]);
                }
            }
        }
    }
}

#[test]
fn block_lengths_converge() {
    for d in [2usize, 3] {
        let mut rng = stream_rng(5, d as u64);
        let mut first = Vec::new();
        let mut rest = Vec::new();
        for _ in 0..200 {
            let letters: Vec<usize> = (0..2000).map(|_| rng.random_range(0..=d)).collect();
            let w = ColoredWord::from_values(0, &letters, d).unwrap();
            let (_, div) = depth_via_subwords(&w, d).unwrap();
            let ranges = div.ranges();
            first.push(ranges[1].len() as f64);
            // the final block is cut off by the end of the word
            for r in &ranges[2..ranges.len() - 1] {
                rest.push(r.len() as f64);
            }
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let expect = mean_block_length(d).unwrap().to_f64();
        assert!((mean(&rest) / expect - 1.0).abs() < 0.01, "D={d}: {} vs {expect}", mean(&rest));
        assert!((mean(&first) - d as f64).abs() < 0.4, "D={d}: {}", mean(&first));
    }
}

#[test]
fn child_counts_follow_defoliated_law() {
    for d in [2usize, 3] {
        let law = OffspringLaw::defoliated(d).unwrap();
        let mut hist = vec![0usize; d + 2];
        let mut total = 0usize;
        for seed in 0..20 {
            let tree = sample_uniform_tree(d, 5000, seed).unwrap();
            for v in tree.nodes() {
                hist[tree.children(v).count()] += 1;
                total += 1;
            }
        }
        let mut mean = 0.0;
        let mut second = 0.0;
        for (k, &h) in hist.iter().enumerate() {
            let freq = h as f64 / total as f64;
            let p = law.probability(k).to_f64();
            assert!((freq - p).abs() < 0.01, "D={d} k={k}: {freq} vs {p}");
            mean += k as f64 * freq;
            second += (k * k) as f64 * freq;
        }
        let var = second - mean * mean;
        assert!((var - law.variance().to_f64()).abs() < 0.02, "D={d}: variance {var}");
    }
}

#[test]
fn monte_carlo_matches_exact_walk() {
    let tree = sample_uniform_tree(3, 5, 17).unwrap();
    let g = MelonGraph::build(&tree, true);
    let t_max = 20;
    let nv = g.vertex_count();
    // exact return probability from a uniform start
    let mut exact = vec![0.0; t_max / 2 + 1];
    for s in 0..nv {
        let rows = exact_walk_distribution::<f64>(&g, t_max, s).unwrap();
        for k in 0..exact.len() {
            exact[k] += rows[2 * k][s] / nv as f64;
        }
    }
    let walkers = 200_000;
    let hits = graph_return_hits(&g, t_max, walkers, &mut stream_rng(3, 0));
    for k in 1..exact.len() {
        let p = hits[k] as f64 / walkers as f64;
        let sigma = (exact[k] * (1.0 - exact[k]) / walkers as f64).sqrt();
        assert!((p - exact[k]).abs() <= 4.0 * sigma, "t={}: {p} vs {}", 2 * k, exact[k]);
    }
}

#[test]
fn depth_ratio_concentrates() {
    let sizes = [256, 1024, 4096, 16384];
    let s = sample_depths(2, &sizes, 60, 21, Exec::default()).unwrap();
    let spread: Vec<f64> = (0..sizes.len())
        .map(|i| {
            let r: Vec<f64> = s.ball[i].iter().zip(&s.tree[i]).map(|(b, t)| b / t).collect();
            let m = r.iter().sum::<f64>() / r.len() as f64;
            r.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (r.len() - 1) as f64
        })
        .collect();
    assert!(spread[3] < spread[0], "{spread:?}");
    let limit = lambda_delta(2).unwrap().to_f64();
    assert!((s.ball_tree_increment_ratio() / limit - 1.0).abs() < 0.05);
}
