//! Randomized end-to-end stress: products with tight clusters, zeros
//! hugging the search boundary, and forced multiplicities, all under a
//! small per-region cap so subdivision and verification work hard. Seeds
//! are fixed, so failures reproduce exactly.

use holozero::*;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type C = Complex64;

fn run_case(zeros: Vec<C>, cap: u32, seed: u64) {
    let omega = Rectangle::new(-1.0, 1.0, -1.0, 1.0).unwrap();
    let cfg = EngineConfig {
        max_zeros_per_region: cap,
        seed,
        ..EngineConfig::default()
    };
    let fh = demos::product_handle(zeros.clone());
    let (records, report) = find_zeros(&fh, omega, &cfg)
        .unwrap_or_else(|e| panic!("seed {seed}: engine failed: {e}"));
    let total: u32 = records.iter().map(|r| r.multiplicity).sum();
    assert_eq!(total as usize, zeros.len(), "seed {seed}: wrong total multiplicity");
    assert_eq!(report.root_count, Some(zeros.len() as u32), "seed {seed}");
    for z in &zeros {
        let d = records
            .iter()
            .map(|r| (r.location - z).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(d <= 1e-7, "seed {seed}: zero {z} missed by {d:.2e}");
    }
}

#[test]
fn random_simple_zero_products() {
    for case in 0..12u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1_000 + case);
        let n = rng.random_range(1..=12usize);
        let zeros: Vec<C> = (0..n)
            .map(|_| C::new(rng.random_range(-0.95..0.95), rng.random_range(-0.95..0.95)))
            .collect();
        run_case(zeros, rng.random_range(1..=4), case);
    }
}

#[test]
fn clusters_boundary_huggers_and_multiplicities() {
    for case in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(9_000 + case);
        let mut zeros: Vec<C> = Vec::new();
        // a pair separated by as little as ~3e-4
        let anchor = C::new(rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7));
        let sep = 10f64.powf(rng.random_range(-3.5..-2.0));
        zeros.push(anchor);
        zeros.push(anchor + C::new(sep, 0.43 * sep));
        // a zero within ~1e-3 of the right edge
        zeros.push(C::new(
            1.0 - 10f64.powf(rng.random_range(-3.0..-2.0)),
            rng.random_range(-0.8..0.8),
        ));
        // a triple zero
        let triple = C::new(rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6));
        zeros.extend([triple; 3]);
        for _ in 0..rng.random_range(0..5usize) {
            zeros.push(C::new(rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9)));
        }
        run_case(zeros, 4, 9_000 + case);
    }
}
