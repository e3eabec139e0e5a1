mod common;

use common::*;
use qwalk_core::continuum::{self, SemicircleDensity};
use qwalk_core::generate::{self, GraphModel};
use qwalk_core::rng::rng_from_seed;
use qwalk_core::spectral::{self, eigendecompose, laplacian};
use qwalk_core::transport::{self, GridSpec, TimeGrid};
use qwalk_core::ConnectivityPolicy;

#[test]
fn bessel_oracles_match_reference_values() {
    // Reference values from an independent special-function library.
    for (x, j1) in [
        (0.5, 0.24226845767487387),
        (3.7, 0.05383398774546181),
        (40.2, 0.12436716212207066),
        (400.0, -0.009222058428585565),
    ] {
        assert!(
            (bessel_j1(x) - j1).abs() < 1e-13,
            "J1({x}) = {}",
            bessel_j1(x)
        );
    }
    for (x, i1e) in [(400.0, 0.01992839895890354), (2.5, 0.20658464953126654)] {
        assert!((scaled_bessel_i1(x) / i1e - 1.0).abs() < 1e-12, "I1e({x})");
    }
}

#[test]
fn expm_oracle_on_closed_forms() {
    let k2 = generate::generate_complete(2).unwrap();
    let p = classical_oracle(&k2, 1.0);
    assert!((p[[0, 0]] - 0.5 * (1.0 + (-2.0f64).exp())).abs() < 1e-14);
    let q = quantum_oracle(&k2, 0.3);
    assert!((q[[0, 0]] - 0.3f64.cos().powi(2)).abs() < 1e-14);
}

#[test]
fn transition_matrices_match_matrix_exponential() {
    let mut rng = rng_from_seed(41);
    for (i, n) in [3usize, 7, 12, 20, 30].into_iter().enumerate() {
        let g = generate::generate_er(n, 0.35, &mut rng).unwrap();
        let s = eigendecompose(&laplacian(&g)).unwrap();
        let grid = TimeGrid::from_points(vec![0.0, 0.1, 1.0, 5.0, 20.0]).unwrap();
        let p = transport::classical_transition(&s, &grid);
        let pi = transport::quantum_transition(&s, &grid);
        for (k, &t) in grid.points().iter().enumerate() {
            let dp = max_abs_diff(&p.values[k], &classical_oracle(&g, t));
            let dq = max_abs_diff(&pi.values[k], &quantum_oracle(&g, t));
            assert!(
                dp < 1e-8 && dq < 1e-8,
                "case {i} n={n} t={t}: {dp:e} {dq:e}"
            );
        }
    }
}

#[test]
fn connected_graph_counts() {
    let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
    assert_eq!(counts, [1, 1, 2, 6, 21, 112]);
}

#[test]
fn long_time_average_matches_time_integration_on_small_graphs() {
    for g in connected_graphs(4) {
        let s = eigendecompose(&laplacian(&g)).unwrap();
        let chi = transport::long_time_average(&s).chi;
        let avg = time_averaged_transition(&g, 1e4, 0.05);
        let d = max_abs_diff(&chi, &avg);
        assert!(d < 2e-3, "{:?}: {d:e}", g.edges().collect::<Vec<_>>());
    }
}

#[test]
fn continuum_classical_matches_bessel_i1() {
    let grid = GridSpec::POWER_LAW.build().unwrap();
    for kbar in [4.0, 9.0] {
        let d = SemicircleDensity::sparse(kbar).unwrap();
        let series = continuum::continuum_classical(&d, &grid).unwrap();
        for (t, v) in series.iter() {
            let want = classical_continuum_oracle(kbar, d.sigma, t);
            if want < 1e-290 {
                continue;
            }
            assert!(
                (v / want - 1.0).abs() < 1e-8,
                "kbar={kbar} t={t}: {v:e} vs {want:e}"
            );
        }
    }
}

#[test]
fn continuum_amplitude_matches_bessel_j1() {
    let grid = GridSpec::POWER_LAW.build().unwrap();
    let d = SemicircleDensity::sparse(4.0).unwrap();
    let series = continuum::continuum_amplitude(&d, &grid).unwrap();
    for (t, v) in series.iter() {
        let want = amplitude_continuum_oracle(d.sigma, t);
        // Absolute slack for points sitting on a zero of J₁.
        assert!(
            (v - want).abs() <= 1e-6 * want + 1e-13,
            "t={t}: {v:e} vs {want:e}"
        );
    }
}

#[test]
fn maxima_spacing_follows_bessel_zeros() {
    let d = SemicircleDensity::sparse(4.0).unwrap();
    let grid = TimeGrid::linear(100.0, d.oscillation_period() / 40.0).unwrap();
    let series = continuum::continuum_amplitude(&d, &grid).unwrap();
    let maxima = continuum::extract_local_maxima(&series, Some(d.oscillation_period())).unwrap();
    let tail: Vec<f64> = maxima
        .windows(2)
        .rev()
        .take(10)
        .map(|w| w[1].0 - w[0].0)
        .collect();
    for gap in tail {
        // Successive extrema of J₁(4t)² sit π/4 apart asymptotically.
        assert!((gap - std::f64::consts::PI / 4.0).abs() < 0.01, "{gap}");
    }
}

#[test]
fn er_mean_degree_over_many_seeds() {
    let model = GraphModel::Er {
        n: 100,
        p: 10.0 / 99.0,
    };
    let means: Vec<f64> = (0..1000)
        .map(|s| {
            model
                .sample(s, ConnectivityPolicy::None)
                .unwrap()
                .graph
                .average_degree()
        })
        .collect();
    let mean = means.iter().sum::<f64>() / 1000.0;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / 999.0;
    let se = (var / 1000.0).sqrt();
    assert!((mean - 10.0).abs() < 0.1, "{mean}");
    assert!((mean - 10.0).abs() < 3.0 * se, "{mean} ± {se}");
}

#[test]
fn configuration_small_cases() {
    for seed in 0..50 {
        let mut rng = rng_from_seed(seed);
        let g = generate::generate_configuration(4, 2, &mut rng).unwrap();
        // The only 2-regular simple graph on 4 nodes is a 4-cycle.
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_connected());
        let tri = generate::generate_configuration(3, 2, &mut rng).unwrap();
        assert_eq!(tri.edges().collect::<Vec<_>>(), [(0, 1), (0, 2), (1, 2)]);
    }
}

#[test]
fn edge_interchange_keeps_degree_histogram() {
    let mut rng = rng_from_seed(3);
    let g = generate::generate_er(100, 0.1, &mut rng).unwrap();
    let h = generate::randomize_by_edge_interchange(&g, 10 * g.edge_count(), &mut rng);
    let mut a = g.degrees();
    let mut b = h.degrees();
    a.sort_unstable();
    b.sort_unstable();
    assert_eq!(a, b);
    assert_ne!(g, h);
}

#[test]
fn complete_minus_m_edge_counts() {
    let mut rng = rng_from_seed(9);
    assert_eq!(
        generate::generate_complete_minus_m(100, 0, &mut rng)
            .unwrap()
            .edge_count(),
        4950
    );
    assert_eq!(
        generate::generate_complete_minus_m(100, 200, &mut rng)
            .unwrap()
            .edge_count(),
        4750
    );
    assert_eq!(
        generate::generate_complete_minus_m(4, 6, &mut rng)
            .unwrap()
            .edge_count(),
        0
    );
    assert!(generate::generate_complete_minus_m(4, 7, &mut rng).is_err());
}

#[test]
fn degeneracy_classes_on_known_spectra() {
    let k = eigendecompose(&laplacian(&generate::generate_complete(100).unwrap())).unwrap();
    let classes: Vec<_> = k.degeneracy_classes().to_vec();
    assert_eq!(classes, [0..1, 1..100]);

    let mut rng = rng_from_seed(5);
    let g = generate::generate_er(100, 0.1, &mut rng).unwrap();
    let s = eigendecompose(&laplacian(&g)).unwrap();
    let eigs = s.eigenvalues();
    let tol = s.degeneracy_tol();
    // Any class of size > 1 must be backed by genuinely tiny gaps.
    for c in s.degeneracy_classes() {
        for i in c.start + 1..c.end {
            assert!(eigs[i] - eigs[i - 1] <= tol);
        }
        if c.end < eigs.len() {
            assert!(eigs[c.end] - eigs[c.end - 1] > tol);
        }
    }
    // Zero eigenvalues are exactly the components (isolated nodes included).
    assert_eq!(s.zero_count(1e-8), g.component_count());
}

#[test]
fn eigenvalue_paths_agree() {
    let mut rng = rng_from_seed(17);
    let g = generate::generate_er(150, 0.08, &mut rng).unwrap();
    let a = laplacian(&g);
    let full = eigendecompose(&a).unwrap();
    let fast = spectral::eigenvalues(&a).unwrap();
    for (x, y) in full.eigenvalues().iter().zip(&fast) {
        assert!((x - y).abs() < 1e-9);
    }
}
