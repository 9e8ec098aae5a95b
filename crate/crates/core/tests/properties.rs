mod common;

use common::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;
use ricci::curvature::{
    default_epsilon, forman_cell_edge, forman_edge, kernel, lly_edge, lly_limit_estimate, CurvatureVector,
    TwoCellComplex,
};
use ricci::distance::all_pairs;
use ricci::flow::{forman_flow_exact, normalized_trajectory, time_grid, FormanSolution};
use ricci::generators::random_tree;
use ricci::io::{parse_graph, write_graph};
use ricci::spectral::{
    build_flow_matrix, classify_convergence, classify_lambda, classify_tree_uniform, curvature_bounds, eigendecompose,
    ConvergenceClass, DEFAULT_TOL_ZERO,
};
use ricci::surgery::{apply_surgery, surgery_scan};
use ricci::{MeasuredGraph, MetricAssignment};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn shortest_distance_is_a_metric(seed in any::<u64>(), n in 2usize..10) {
        let mut r = rng(seed);
        let g = if n > 2 { weighted_cyclic_graph(&mut r, n) } else { weighted_tree(&mut r, n) };
        let w = random_metric(&mut r, g.num_edges(), 0.1, 5.0);
        let d = all_pairs(&g, &w);
        for u in 0..n {
            prop_assert_eq!(d[u][u], 0.0);
            for v in 0..n {
                prop_assert!(d[u][v] > 0.0 || u == v);
                prop_assert!((d[u][v] - d[v][u]).abs() <= 1e-12 * d[u][v].max(1.0));
                for x in 0..n {
                    prop_assert!(d[u][v] <= d[u][x] + d[x][v] + 1e-12);
                }
            }
        }
        for (e, edge) in g.edges().iter().enumerate() {
            prop_assert!(d[edge.u][edge.v] <= w[e]);
        }
    }

    #[test]
    fn surgery_leaves_a_nondegenerate_metric(seed in any::<u64>(), n in 3usize..9) {
        let mut r = rng(seed);
        let g = weighted_cyclic_graph(&mut r, n);
        let w = random_metric(&mut r, g.num_edges(), 0.1, 5.0);
        let out = apply_surgery(&g, &w, 0.0).unwrap();
        prop_assert!(surgery_scan(&out.graph, &out.metric).unwrap().is_empty());
        prop_assert_eq!(out.graph.num_edges() + out.events.len(), g.num_edges());
        prop_assert_eq!(out.graph.num_vertices(), g.num_vertices());
    }

    #[test]
    fn forman_is_scale_invariant(seed in any::<u64>(), n in 2usize..10, c in 0.01f64..100.0) {
        let mut r = rng(seed);
        let g = if n > 2 { weighted_cyclic_graph(&mut r, n) } else { weighted_tree(&mut r, n) };
        let w = random_metric(&mut r, g.num_edges(), 0.1, 5.0);
        let wc = w.scaled(c).unwrap();
        for e in 0..g.num_edges() {
            let a = forman_edge(&g, &w, e).unwrap();
            let b = forman_edge(&g, &wc, e).unwrap();
            prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
        }
    }

    #[test]
    fn empty_complex_matches_graph_formula(seed in any::<u64>(), n in 3usize..9) {
        let mut r = rng(seed);
        let g = weighted_cyclic_graph(&mut r, n);
        let w = random_metric(&mut r, g.num_edges(), 0.1, 5.0);
        let k = TwoCellComplex::new(g.clone(), vec![]).unwrap();
        for e in 0..g.num_edges() {
            prop_assert_eq!(forman_cell_edge(&k, &w, e).unwrap(), forman_edge(&g, &w, e).unwrap());
        }
    }

    #[test]
    fn kernels_are_probability_measures(seed in any::<u64>(), n in 2usize..10, frac in 0.01f64..0.99) {
        let mut r = rng(seed);
        let g = if n > 2 { weighted_cyclic_graph(&mut r, n) } else { weighted_tree(&mut r, n) };
        let eps = frac / g.max_deg_measure();
        for x in 0..n {
            let k = kernel(&g, x, eps).unwrap();
            prop_assert!((k.total_mass() - 1.0).abs() < 1e-12);
            for &(_, m) in k.support() {
                prop_assert!((0.0..=1.0).contains(&m));
            }
        }
    }

    #[test]
    fn perron_pair_is_simple_and_positive(seed in any::<u64>(), n in 2usize..10) {
        let mut r = rng(seed);
        let g = if n > 2 && r.gen_bool(0.5) { weighted_cyclic_graph(&mut r, n) } else { weighted_tree(&mut r, n) };
        let sd = eigendecompose(&build_flow_matrix(&g)).unwrap();
        if let Some(gap) = sd.spectral_gap() {
            prop_assert!(gap > 0.0);
        }
        prop_assert!(sd.perron_vector().iter().all(|&p| p > 0.0));
    }

    #[test]
    fn eigenpairs_satisfy_the_eigen_equation(seed in any::<u64>(), n in 2usize..10) {
        let mut r = rng(seed);
        let g = if n > 2 { weighted_cyclic_graph(&mut r, n) } else { weighted_tree(&mut r, n) };
        let fm = build_flow_matrix(&g);
        prop_assert!((&fm.ftilde - fm.ftilde.transpose()).amax() <= 1e-12);
        let sd = eigendecompose(&fm).unwrap();
        for i in 0..sd.dim() {
            let p = sd.eigenvectors.column(i);
            let res = &fm.ftilde * p - p * sd.eigenvalues[i];
            prop_assert!(res.amax() < 1e-9);
        }
    }

    #[test]
    fn gerschgorin_brackets_the_limit(seed in any::<u64>(), n in 2usize..10) {
        let mut r = rng(seed);
        let g = if n > 2 && r.gen_bool(0.5) { weighted_cyclic_graph(&mut r, n) } else { weighted_tree(&mut r, n) };
        let fm = build_flow_matrix(&g);
        let sd = eigendecompose(&fm).unwrap();
        let m = sd.dim();
        for &lambda in &sd.eigenvalues {
            let inside = (0..m).any(|i| {
                let radius: f64 = (0..m).filter(|&j| j != i).map(|j| fm.ftilde[(i, j)].abs()).sum();
                (lambda - fm.ftilde[(i, i)]).abs() <= radius + 1e-9
            });
            prop_assert!(inside);
        }
        let b = curvature_bounds(&g);
        let k = -sd.lambda_max();
        prop_assert!(b.lower <= k + 1e-9 && k <= b.upper + 1e-9, "{} <= {} <= {}", b.lower, k, b.upper);
    }

    #[test]
    fn spectral_solution_solves_the_linear_flow(seed in any::<u64>(), n in 2usize..9, t in 0.0f64..2.0) {
        let mut r = rng(seed);
        let g = if n > 2 { weighted_cyclic_graph(&mut r, n) } else { weighted_tree(&mut r, n) };
        let w0 = random_metric(&mut r, g.num_edges(), 0.1, 5.0);
        let sol = FormanSolution::new(&g, &w0).unwrap();
        let m = sol.sd.dim();
        let p = &sol.sd.eigenvectors;
        let mw0 = DVector::from_iterator(m, (0..m).map(|j| w0[j] * sol.fm.m_sqrt[j]));
        let expo = DMatrix::from_diagonal(&DVector::from_iterator(m, sol.sd.eigenvalues.iter().map(|l| (l * t).exp())));
        let dexpo = DMatrix::from_diagonal(&DVector::from_iterator(m, sol.sd.eigenvalues.iter().map(|l| l * (l * t).exp())));
        let minv = DMatrix::from_diagonal(&sol.fm.m_sqrt.map(|x| 1.0 / x));
        let omega = &minv * p * expo * p.transpose() * &mw0;
        let domega = &minv * p * dexpo * p.transpose() * &mw0;
        let w = sol.weights(t).unwrap();
        let scale = omega.amax().max(1.0);
        for l in 0..m {
            prop_assert!((w[l] - omega[l]).abs() <= 1e-10 * scale);
        }
        prop_assert!((domega - &sol.fm.f * &omega).amax() <= 1e-8 * scale);
    }

    #[test]
    fn forman_flow_stays_positive(seed in any::<u64>(), n in 2usize..10) {
        let mut r = rng(seed);
        let g = if n > 2 && r.gen_bool(0.5) { weighted_cyclic_graph(&mut r, n) } else { weighted_tree(&mut r, n) };
        let w0 = random_metric(&mut r, g.num_edges(), 0.01, 5.0);
        let traj = forman_flow_exact(&g, &w0, &[0.0, 0.1, 0.5, 1.0, 3.0, 10.0]).unwrap();
        for s in &traj.samples {
            prop_assert!(s.weights.as_slice().iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn limiting_metric_ignores_initial_data(seed in any::<u64>(), n in 2usize..10) {
        let mut r = rng(seed);
        let g = if n > 2 && r.gen_bool(0.5) { weighted_cyclic_graph(&mut r, n) } else { weighted_tree(&mut r, n) };
        let a = random_metric(&mut r, g.num_edges(), 0.01, 5.0);
        let b = random_metric(&mut r, g.num_edges(), 0.01, 5.0);
        let ra = classify_convergence(&g, &a, DEFAULT_TOL_ZERO).unwrap();
        let rb = classify_convergence(&g, &b, DEFAULT_TOL_ZERO).unwrap();
        let total: f64 = ra.limiting_normalized_metric.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for (x, y) in ra.limiting_normalized_metric.iter().zip(&rb.limiting_normalized_metric) {
            prop_assert!(*x > 0.0);
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn uniform_tree_flow_matrix_is_shifted_line_graph(seed in any::<u64>(), n in 2usize..12) {
        let mut r = rng(seed);
        let g = MeasuredGraph::uniform(n, &random_tree(&mut r, n)).unwrap();
        let fm = build_flow_matrix(&g);
        let b = g.line_graph_adjacency();
        prop_assert_eq!(&fm.f + DMatrix::identity(n - 1, n - 1) * 2.0, b.clone());
        let top = eigendecompose(&fm).unwrap().lambda_max() + 2.0;
        prop_assert!(top >= g.max_degree() as f64 - 1.0 - 1e-12);
    }

    #[test]
    fn tree_case_matches_spectrum(seed in any::<u64>(), n in 2usize..11) {
        let mut r = rng(seed);
        let g = MeasuredGraph::uniform(n, &random_tree(&mut r, n)).unwrap();
        let case = classify_tree_uniform(&g).unwrap();
        let lm = eigendecompose(&build_flow_matrix(&g)).unwrap().lambda_max();
        prop_assert_eq!(case.expected_class(), classify_lambda(lm, DEFAULT_TOL_ZERO));
    }

    #[test]
    fn normalisation_sums_to_one_and_keeps_curvature(seed in any::<u64>(), n in 2usize..8) {
        let mut r = rng(seed);
        let g = weighted_tree(&mut r, n);
        let w0 = random_metric(&mut r, g.num_edges(), 0.1, 5.0);
        let traj = forman_flow_exact(&g, &w0, &[0.0, 0.5, 1.0]).unwrap();
        let norm = normalized_trajectory(&traj);
        for (a, b) in traj.samples.iter().zip(&norm.samples) {
            prop_assert!((b.weights.total() - 1.0).abs() < 1e-12);
            prop_assert_eq!(&a.curvature, &b.curvature);
        }
    }

    #[test]
    fn graph_files_round_trip(seed in any::<u64>(), n in 2usize..10) {
        let mut r = rng(seed);
        let g = if n > 2 { weighted_cyclic_graph(&mut r, n) } else { weighted_tree(&mut r, n) };
        let w = random_metric(&mut r, g.num_edges(), 0.1, 5.0);
        let text = write_graph(&g, Some(&w)).unwrap();
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(back.graph.num_edges(), g.num_edges());
        for e in 0..g.num_edges() {
            prop_assert_eq!(back.graph.edge_label(e), g.edge_label(e));
            prop_assert!((back.graph.m2(e) - g.m2(e)).abs() <= 1e-11 * g.m2(e));
            prop_assert!((back.initial_metric.as_ref().unwrap()[e] - w[e]).abs() <= 1e-11 * w[e]);
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn lly_is_scale_invariant(seed in any::<u64>(), n in 3usize..8, c in 0.1f64..10.0) {
        let mut r = rng(seed);
        let g = weighted_cyclic_graph(&mut r, n);
        let w = nondegenerate_metric(&mut r, g.num_edges());
        let wc = w.scaled(c).unwrap();
        for e in 0..g.num_edges() {
            let a = lly_edge(&g, &w, e).unwrap();
            let b = lly_edge(&g, &wc, e).unwrap();
            prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0));
        }
    }

    #[test]
    fn lly_equals_forman_on_trees(seed in any::<u64>(), n in 2usize..12) {
        let mut r = rng(seed);
        let g = weighted_tree(&mut r, n);
        let w = random_metric(&mut r, g.num_edges(), 0.1, 5.0);
        for e in 0..g.num_edges() {
            let a = lly_edge(&g, &w, e).unwrap();
            let b = forman_edge(&g, &w, e).unwrap();
            prop_assert!((a - b).abs() < 1e-8, "edge {}: {} vs {}", e, a, b);
        }
    }

    #[test]
    fn lly_dominates_forman(seed in any::<u64>(), n in 3usize..9) {
        let mut r = rng(seed);
        let g = weighted_cyclic_graph(&mut r, n);
        let w = nondegenerate_metric(&mut r, g.num_edges());
        for e in 0..g.num_edges() {
            prop_assert!(lly_edge(&g, &w, e).unwrap() >= forman_edge(&g, &w, e).unwrap() - 1e-8);
        }
    }

    #[test]
    fn lly_matches_transport_limit(seed in any::<u64>(), n in 3usize..13) {
        let mut r = rng(seed);
        let g = weighted_cyclic_graph(&mut r, n.min(9));
        let w = nondegenerate_metric(&mut r, g.num_edges());
        let eps = default_epsilon(&g);
        for e in 0..g.num_edges() {
            let a = lly_edge(&g, &w, e).unwrap();
            let b = lly_limit_estimate(&g, &w, e, eps).unwrap();
            prop_assert!((a - b).abs() < 1e-6, "edge {}: {} vs {}", e, a, b);
        }
    }

    #[test]
    fn total_weight_follows_curvature(seed in any::<u64>(), n in 2usize..8) {
        let mut r = rng(seed);
        let g = if n > 2 { weighted_cyclic_graph(&mut r, n) } else { weighted_tree(&mut r, n) };
        let w0 = random_metric(&mut r, g.num_edges(), 0.5, 2.0);
        let h = 1e-3;
        let traj = forman_flow_exact(&g, &w0, &time_grid(0.2, h)).unwrap();
        let s = &traj.samples;
        let scale = s.iter().map(|x| x.weights.total()).fold(1.0, f64::max);
        let total = |j: usize| s[j].weights.total();
        for k in 2..s.len() - 2 {
            let d = (total(k - 2) - 8.0 * total(k - 1) + 8.0 * total(k + 1) - total(k + 2)) / (12.0 * h);
            let rhs: f64 = -s[k].curvature.values.iter().zip(s[k].weights.as_slice()).map(|(k, w)| k * w).sum::<f64>();
            prop_assert!((d - rhs).abs() < 1e-5 * scale);
        }
    }
}

#[test]
fn curvature_vector_matches_per_edge_calls() {
    let mut r = rng(11);
    let g = weighted_cyclic_graph(&mut r, 6);
    let w = nondegenerate_metric(&mut r, g.num_edges());
    let f = CurvatureVector::forman(&g, &w).unwrap();
    let l = CurvatureVector::lly(&g, &w).unwrap();
    for e in 0..g.num_edges() {
        assert_eq!(f.values[e], forman_edge(&g, &w, e).unwrap());
        assert_eq!(l.values[e], lly_edge(&g, &w, e).unwrap());
    }
}

#[test]
fn classification_matches_sign_of_lambda() {
    let mut r = rng(5);
    for _ in 0..30 {
        let n = r.gen_range(2..9);
        let g = weighted_tree(&mut r, n);
        let w = MetricAssignment::constant(g.num_edges(), 1.0).unwrap();
        let rep = classify_convergence(&g, &w, DEFAULT_TOL_ZERO).unwrap();
        let expect = if rep.lambda_max < -DEFAULT_TOL_ZERO {
            ConvergenceClass::Vanishing
        } else if rep.lambda_max > DEFAULT_TOL_ZERO {
            ConvergenceClass::Divergent
        } else {
            ConvergenceClass::ConstantMetric
        };
        assert_eq!(rep.classification, expect);
    }
}
