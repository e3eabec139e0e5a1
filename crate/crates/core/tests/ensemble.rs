use qwalk_core::ensemble::{self, chi_distribution, EnsembleConfig};
use qwalk_core::generate::GraphModel;
use qwalk_core::transport::GridSpec;

const K100: f64 = 0.9802;

fn plateau_chi(model: GraphModel, seed: u64, realizations: usize) -> ndarray::Array2<f64> {
    let cfg = EnsembleConfig {
        grid: GridSpec::Linear {
            tmax: 10.0,
            step: 1.0,
        },
        ..EnsembleConfig::new(model, seed, realizations)
    };
    ensemble::run_ensemble(&cfg).unwrap().mean_chi
}

#[test]
fn config_offdiagonal_peak_sits_above_er() {
    let er = plateau_chi(
        GraphModel::Er {
            n: 100,
            p: 10.0 / 99.0,
        },
        1,
        30,
    );
    let cfg = plateau_chi(GraphModel::Config { n: 100, k: 10 }, 2, 30);
    let range = (0.005, 0.015);
    let peak = |chi| {
        chi_distribution(chi, 50, range, (0.02, 0.1))
            .unwrap()
            .offdiag
            .peak_center()
            .unwrap()
    };
    let (a, b) = (peak(&er), peak(&cfg));
    assert!(a < b, "ER peak {a} vs configuration peak {b}");
}

#[test]
fn degree_scan_is_flat_and_separates_models() {
    let scan = ensemble::scan_chi_vs_degree(100, &[10, 40, 70, 99], 10, 5).unwrap();
    let last = scan.rows.last().unwrap();
    assert!((last.er.mean - K100).abs() < 1e-9);
    assert!((last.config.mean - K100).abs() < 1e-9);
    let sparse = &scan.rows[..3];
    for row in sparse {
        assert!(row.er.mean > row.config.mean, "k={}", row.parameter);
    }
    let er: Vec<f64> = sparse.iter().map(|r| r.er.mean).collect();
    let spread =
        er.iter().cloned().fold(f64::MIN, f64::max) - er.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 0.02, "{er:?}");
}

#[test]
fn edge_removal_starts_at_complete_graph_and_saturates() {
    let scan = ensemble::edge_removal_scan(100, &[0, 50, 100, 150, 200, 2000], 10, 3, (0.0, 200.0))
        .unwrap();
    let first = &scan.rows[0].stats;
    assert!(
        (first.mean - K100).abs() < 1e-12 && first.std < 1e-12,
        "{first:?}"
    );
    let means: Vec<f64> = scan.rows.iter().map(|r| r.stats.mean).collect();
    assert!(means.windows(2).all(|w| w[1] < w[0]), "{means:?}");
    let saturated = *means.last().unwrap();
    assert!((0.04..0.09).contains(&saturated), "{saturated}");
    assert!(scan.fit.beta > 0.0);
}

#[test]
fn size_and_degree_scans_agree_at_shared_point() {
    let size = ensemble::scan_chi_vs_size(&[60, 80, 100], 50, 20, 8, None).unwrap();
    let degree = ensemble::scan_chi_vs_degree(100, &[50], 20, 9).unwrap();
    let a = &size.rows[2];
    let b = &degree.rows[0];
    assert_eq!(a.parameter, 100.0);
    for (x, y) in [(&a.er, &b.er), (&a.config, &b.config)] {
        let se = ((x.std.powi(2) + y.std.powi(2)) / 20.0).sqrt();
        assert!(
            (x.mean - y.mean).abs() < 4.0 * se + 1e-12,
            "{} vs {} (se {se})",
            x.mean,
            y.mean
        );
    }
}

#[test]
fn scans_reproduce_from_seed() {
    let a = ensemble::scan_chi_vs_degree(30, &[5, 10], 4, 77).unwrap();
    let b = ensemble::scan_chi_vs_degree(30, &[5, 10], 4, 77).unwrap();
    assert_eq!(a.rows, b.rows);
    let c = ensemble::scan_chi_vs_degree(30, &[5, 10], 4, 78).unwrap();
    assert_ne!(a.rows, c.rows);
}
