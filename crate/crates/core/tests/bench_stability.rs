use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stereoquilt::*;

// Kept in its own binary so no other test competes for the CPU. Needs an
// otherwise idle machine: `cargo test --test bench_stability -- --ignored`.

#[test]
#[ignore = "timing protocol; needs an idle machine"]
fn benchmark_ratio_is_stable_across_runs() {
    let cal = load_calibration(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/reference_calibration.json"
    ))
    .unwrap();
    let layout = QuiltLayout::new(4, 8, 512, 256).unwrap();
    let quilt = {
        let mut data = vec![0u8; 2048 * 2048 * 3];
        ChaCha8Rng::seed_from_u64(32).fill_bytes(&mut data);
        Quilt::new(RasterImage::new(2048, 2048, data).unwrap(), layout).unwrap()
    };
    let first = benchmark(&cal, layout, &quilt, 10).unwrap();
    let second = benchmark(&cal, layout, &quilt, 10).unwrap();
    let a = first.lut_median_secs / first.direct_median_secs;
    let b = second.lut_median_secs / second.direct_median_secs;
    assert!(
        (a / b - 1.0).abs() <= 0.2,
        "ratios {a:.4} and {b:.4} differ by more than 20%"
    );
    assert_eq!(first.parallel.len(), 3);
    assert!(first.to_string().contains("speedup"));
}
