use spdc_mux::emission::herald_probabilities;
use spdc_mux::error::Error;
use spdc_mux::oracle::{build_chain, optimized_power, rates_at, stationary_rates, ChainSpec};

#[test]
fn stationary_vector_is_a_fixed_point() {
    for &(s, m, k, n) in &[(100, 4, 3, 0.049), (6, 2, 2, 0.2), (20, 1, 2, 0.3), (11, 6, 3, 0.5), (3, 1, 3, 0.01)] {
        let spec = ChainSpec::new(s, m, k, n).unwrap();
        let chain = build_chain(&spec).unwrap();
        let r = stationary_rates(&spec).unwrap();
        let pi = &r.distribution;
        assert!(pi.iter().all(|&p| p >= 0.0));
        assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        for j in 0..pi.len() {
            let flow: f64 = (0..pi.len()).map(|i| pi[i] * chain.transition[i][j]).sum();
            assert!((flow - pi[j]).abs() < 1e-10, "S={s} m={m} state {j}");
        }
    }
}

#[test]
fn more_storage_never_hurts() {
    for &(s, m, n) in &[(100, 4, 0.049), (20, 3, 0.2), (8, 2, 0.25)] {
        let base = ChainSpec::new(s, m, 3, n).unwrap();
        let lacks: Vec<f64> = (0..=6)
            .map(|c| stationary_rates(&ChainSpec { capacity: c, ..base.clone() }).unwrap().lack_rate)
            .collect();
        assert!(lacks.windows(2).all(|w| w[1] < w[0]), "S={s} m={m}: {lacks:?}");
    }
}

#[test]
fn rates_are_monotone_in_pump_power() {
    let grid: Vec<f64> = (1..=100).map(|i| i as f64 / 100.0).collect();
    let rates: Vec<_> = grid.iter().map(|&n| rates_at(100, 4, 3, n).unwrap()).collect();
    for w in rates.windows(2) {
        assert!(w[1].lack_rate < w[0].lack_rate);
        assert!(w[1].multi_rate > w[0].multi_rate);
    }
}

#[test]
fn reference_optimum() {
    let p = optimized_power(100, 4, 3, 1e-5).unwrap();
    assert!((0.044..=0.056).contains(&p.mean_pairs), "{}", p.mean_pairs);
    assert!((p.rates.lack_rate - p.rates.multi_rate).abs() < 1e-5);
    assert!((0.019..=0.029).contains(&p.rates.lack_rate));
}

/// Root of `e^-N (2 + N) = 1` by Newton's method: the single memoryless
/// source balances `1 - p_herald` against `p_multi`.
fn single_source_root() -> f64 {
    let mut n: f64 = 1.0;
    for _ in 0..50 {
        let f = (-n).exp() * (2.0 + n) - 1.0;
        let df = -(-n).exp() * (1.0 + n);
        n -= f / df;
    }
    n
}

#[test]
fn single_source_optimum_matches_closed_form() {
    let root = single_source_root();
    for k in 1..=3 {
        let p = optimized_power(1, 1, k, 1e-10).unwrap();
        assert!((p.mean_pairs - root).abs() < 1e-6, "K={k}: {} vs {root}", p.mean_pairs);
        let hp = herald_probabilities(p.mean_pairs).unwrap();
        assert!((1.0 - hp.p_herald - hp.p_multi).abs() < 1e-9);
    }
}

#[test]
fn no_crossing_is_a_search_error() {
    // One source cannot feed eight slots: lack stays near 7/8.
    let r = optimized_power(1, 8, 3, 1e-6);
    assert!(matches!(r, Err(Error::Search(_))), "{r:?}");
}

#[test]
fn exact_multi_identity() {
    let r = rates_at(50, 4, 3, 0.08).unwrap();
    let hp = herald_probabilities(0.08).unwrap();
    assert!((r.relative_multi_rate() - hp.multi_fraction()).abs() < 1e-14);
}
