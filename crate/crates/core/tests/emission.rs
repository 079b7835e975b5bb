use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spdc_mux::emission::{herald_probabilities, pair_pmf, sample_cycle_emissions, sample_pairs};

#[test]
fn sampler_frequencies_match_pmf() {
    let n_draws = 1_000_000u64;
    let mean = 0.3;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut counts = [0u64; 3];
    for _ in 0..n_draws {
        let k = sample_pairs(mean, &mut rng) as usize;
        if k < 3 {
            counts[k] += 1;
        }
    }
    for (k, &c) in counts.iter().enumerate() {
        let p = pair_pmf(k as u32, mean).unwrap();
        let freq = c as f64 / n_draws as f64;
        let se = (p * (1.0 - p) / n_draws as f64).sqrt();
        assert!((freq - p).abs() < 4.0 * se, "n={k}: freq {freq} pmf {p}");
    }
}

#[test]
fn sample_mean_converges() {
    let mean = 0.05;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let batch = sample_cycle_emissions(1_000_000, mean, 0, &mut rng).unwrap();
    let avg = batch.pair_counts.iter().map(|&c| f64::from(c)).sum::<f64>() / 1e6;
    assert!((avg - mean).abs() < 3.0 * (mean / 1e6).sqrt(), "{avg}");
}

#[test]
fn heralds_at_reference_point_average_s_times_p() {
    let hp = herald_probabilities(0.049).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cycles = 20_000;
    let total: usize = (0..cycles)
        .map(|c| {
            let b = sample_cycle_emissions(100, 0.049, c, &mut rng).unwrap();
            b.pair_counts.iter().filter(|&&n| n > 0).count()
        })
        .sum();
    let avg = total as f64 / cycles as f64;
    let expected = 100.0 * hp.p_herald;
    let se = (100.0 * hp.p_herald * (1.0 - hp.p_herald) / cycles as f64).sqrt();
    assert!((avg - expected).abs() < 4.0 * se, "{avg} vs {expected}");
}

proptest! {
    #[test]
    fn pmf_sums_to_one(mean in 1e-6f64..=1.0) {
        let s: f64 = (0..=50).map(|k| pair_pmf(k, mean).unwrap()).sum();
        prop_assert!((1.0 - 1e-12..=1.0 + 1e-15).contains(&s));
    }

    #[test]
    fn herald_probabilities_ordered_and_increasing(a in 1e-4f64..2.0, b in 1e-4f64..2.0) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (p, q) = (herald_probabilities(lo).unwrap(), herald_probabilities(hi).unwrap());
        prop_assert!(0.0 < p.p_multi && p.p_multi < p.p_herald && p.p_herald < 1.0);
        prop_assert!(p.p_herald < q.p_herald);
        prop_assert!(p.p_multi < q.p_multi);
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>(), sources in 1usize..200, mean in 0.001f64..1.0) {
        let a = sample_cycle_emissions(sources, mean, 0, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = sample_cycle_emissions(sources, mean, 0, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(a.pair_counts.len(), sources);
        prop_assert_eq!(a, b);
    }
}
