//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stereoquilt::flow::{decode_flo, encode_flo};
use stereoquilt::lut::{time_median, time_medians_interleaved};
use stereoquilt::morph::view_time;
use stereoquilt::pipeline::estimate_stereo_flow;
use stereoquilt::synthetic::{graded_views, shifted_pair, stereo_scene};
use stereoquilt::*;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn reference_calibration() -> Calibration {
    load_calibration(fixture("reference_calibration.json")).expect("reference calibration")
}

fn random_quilt(layout: QuiltLayout, rng: &mut ChaCha8Rng) -> Quilt {
    let mut data = vec![0u8; layout.quilt_width() as usize * layout.quilt_height() as usize * 3];
    rng.fill_bytes(&mut data);
    let image = RasterImage::new(layout.quilt_width(), layout.quilt_height(), data).unwrap();
    Quilt::new(image, layout).unwrap()
}

fn reference_layout() -> QuiltLayout {
    QuiltLayout::new(4, 8, 512, 256).unwrap()
}

/// 1. apply_lut is byte-identical to the direct renderer.
fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    let cal = reference_calibration();
    let quilt = random_quilt(reference_layout(), &mut rng);
    let lut = build_lut(&cal, reference_layout()).unwrap();
    let full_ok = apply_lut(&lut, &quilt).unwrap() == render_native_direct(&quilt, &cal).unwrap();

    let layout = QuiltLayout::new(4, 8, 16, 8).unwrap();
    let mut small_ok = 0;
    for _ in 0..100 {
        let pitch = rng.random_range(3.0..=64.0);
        let slope = rng.random_range(-0.5..=0.5);
        let offset = rng.random_range(-pitch..=pitch);
        let cal = Calibration::new(pitch, slope, offset, 32, 64, 40).unwrap();
        let quilt = random_quilt(layout, &mut rng);
        let lut = build_lut(&cal, layout).unwrap();
        let mapper = SubpixelMapper::new(&cal, layout).unwrap();
        let direct = render_native_direct(&quilt, &cal).unwrap();
        let table = apply_lut(&lut, &quilt).unwrap();

        let mut all = direct == table;
        for y in 0..40 {
            for x in 0..64 {
                for c in 0..3 {
                    let (qx, qy) = mapper.map(x, y, c as u32);
                    all &= lut.entry(x, y, c) == (qx as u16, qy as u16);
                }
            }
        }
        small_ok += all as usize;
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::check(
        full_ok && small_ok == 100 && secs < 60.0,
        format!(
            "2560x1600 reference identical: {full_ok}; small calibrations identical: {small_ok}/100; {secs:.1}s (limit 60s)"
        ),
    )
}

/// 2. Median LUT time ≤ 0.77 × median direct time.
fn lut_speedup() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cal = reference_calibration();
    let quilt = random_quilt(reference_layout(), &mut rng);
    let lut = build_lut(&cal, reference_layout()).unwrap();

    let [direct, table] = time_medians_interleaved(
        10,
        [
            &mut || drop(render_native_direct(&quilt, &cal).unwrap()),
            &mut || drop(apply_lut(&lut, &quilt).unwrap()),
        ],
    );
    let ratio = table / direct;
    let secs = start.elapsed().as_secs_f64();
    Outcome::check(
        ratio <= 0.77 && secs < 120.0,
        format!(
            "direct {direct:.4}s, lut {table:.4}s, lut/direct {ratio:.3} (limit 0.77, speedup {:.2}x); {secs:.1}s (limit 120s)",
            direct / table
        ),
    )
}

/// 3. Four bands match serial output, and are faster on ≥4 cores.
fn parallel_bands() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cal = reference_calibration();
    let quilt = random_quilt(reference_layout(), &mut rng);
    let lut = build_lut(&cal, reference_layout()).unwrap();

    let serial = apply_lut(&lut, &quilt).unwrap();
    let identical = apply_lut_parallel(&lut, &quilt, 4).unwrap() == serial
        && apply_lut_parallel(&lut, &quilt, 1).unwrap() == serial;

    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let one = time_median(5, || apply_lut_parallel(&lut, &quilt, 1).unwrap());
    let four = time_median(5, || apply_lut_parallel(&lut, &quilt, 4).unwrap());
    if cores >= 4 {
        Outcome::check(
            identical && four < one,
            format!(
                "identical: {identical}; 1 band {one:.4}s, 4 bands {four:.4}s on {cores} cores"
            ),
        )
    } else {
        Outcome::check(
            identical,
            format!(
                "identical: {identical}; speed clause needs >=4 cores, only {cores} available \
                 (1 band {one:.4}s, 4 bands {four:.4}s, not asserted)"
            ),
        )
    }
}

/// 4. Endpoint exactness and the zero-flow cross-dissolve at frame 16.
fn morph_endpoints() -> Outcome {
    let pair = stereo_scene(512, 256, 3.0, 7.0, 4);
    let (fwd, bwd) = estimate_stereo_flow(&pair, &FlowParams::default()).unwrap();
    let views = generate_views(&pair, &fwd, &bwd, 32).unwrap();
    let endpoints = views.count() == 32
        && views.views()[0] == *pair.left()
        && views.views()[31] == *pair.right();

    let zero = FlowField::zeros(512, 256);
    let dissolve = generate_views(&pair, &zero, &zero, 32).unwrap();
    let t = view_time(16, 32);
    let mismatches = dissolve.views()[16]
        .data()
        .iter()
        .zip(pair.left().data().iter().zip(pair.right().data()))
        .filter(|(&m, (&l, &r))| m != ((1.0 - t) * l as f64 + t * r as f64).round() as u8)
        .count();
    Outcome::check(
        endpoints && mismatches == 0,
        format!(
            "frame 0 == L and frame 31 == R: {endpoints}; frame 16 blend mismatches: {mismatches}"
        ),
    )
}

/// 5. Shift (3, 0) recovered to < 0.5 px EPE; identical pair ≤ 0.1 px.
fn flow_accuracy() -> Outcome {
    let start = Instant::now();
    let (a, b) = shifted_pair(256, 256, 3.0, 0.0, 5);
    let (la, lb) = (to_grayscale(&a), to_grayscale(&b));
    let params = FlowParams::default();
    let flow = estimate_flow(&la, &lb, &params).unwrap();
    let mut epe = 0.0;
    let mut n = 0.0;
    for y in 5..251 {
        for x in 5..251 {
            let (u, v) = flow.get(x, y);
            epe += (u as f64 - 3.0).hypot(v as f64);
            n += 1.0;
        }
    }
    let epe = epe / n;
    let still = estimate_flow(&la, &la, &params).unwrap().mean_magnitude();
    let secs = start.elapsed().as_secs_f64();
    Outcome::check(
        epe < 0.5 && still <= 0.1 && flow.is_finite(),
        format!("shift EPE {epe:.4}px (limit 0.5); zero-motion magnitude {still:.2e}px (limit 0.1); {secs:.2}s"),
    )
}

/// 6. 32 tiles of 512x256 make a 2048x2048 quilt, bottom-left first.
fn quilt_geometry() -> Outcome {
    let views = graded_views(32, 512, 256, 8);
    let quilt = assemble_quilt(&views, reference_layout()).unwrap();
    let img = quilt.image();
    let dims = img.dims() == (2048, 2048);
    let bottom_left = img.pixel(0, 2047) == [0; 3] && img.pixel(511, 1792) == [0; 3];
    let top_right = img.pixel(2047, 0) == [248; 3] && img.pixel(1536, 255) == [248; 3];
    let roundtrip = extract_views(&quilt) == views;
    Outcome::check(
        dims && bottom_left && top_right && roundtrip,
        format!(
            "2048x2048: {dims}; view 0 bottom-left: {bottom_left}; view 31 top-right: {top_right}; roundtrip: {roundtrip}"
        ),
    )
}

/// 7. `.flo` and LUT files roundtrip; hand-built `.flo`; LUT file size.
fn format_fidelity() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let (w, h) = (37, 19);
    let u = (0..w * h)
        .map(|_| rng.random_range(-50.0f32..50.0))
        .collect();
    let v = (0..w * h)
        .map(|_| rng.random_range(-50.0f32..50.0))
        .collect();
    let field = FlowField::new(w, h, u, v).unwrap();
    let flo_path = dir.path().join("f.flo");
    write_flo(&field, &flo_path).unwrap();
    let flo_ok = read_flo(&flo_path).unwrap() == field
        && encode_flo(&read_flo(&flo_path).unwrap()) == std::fs::read(&flo_path).unwrap();

    let mut hand = Vec::new();
    hand.extend_from_slice(&202021.25f32.to_le_bytes());
    hand.extend_from_slice(&1i32.to_le_bytes());
    hand.extend_from_slice(&1i32.to_le_bytes());
    hand.extend_from_slice(&2.5f32.to_le_bytes());
    hand.extend_from_slice(&(-1.0f32).to_le_bytes());
    let parsed = decode_flo(&hand).unwrap();
    let hand_ok = hand.len() == 20 && parsed.get(0, 0) == (2.5, -1.0);

    let cal = reference_calibration();
    let lut = build_lut(&cal, reference_layout()).unwrap();
    let lut_path = dir.path().join("t.lut");
    save_lut(&lut, &lut_path).unwrap();
    let size = std::fs::metadata(&lut_path).unwrap().len();
    let expected = 24 + 3 * 2560 * 1600 * 4;
    let lut_ok = load_lut(&lut_path).unwrap() == lut;
    Outcome::check(
        flo_ok && hand_ok && lut_ok && size == expected,
        format!(
            ".flo roundtrip: {flo_ok}; 20-byte fixture -> (2.5, -1.0): {hand_ok}; LUT roundtrip: {lut_ok}; LUT size {size} (expected {expected})"
        ),
    )
}

/// 8. View formula: identity case, negative modulo, periodicity.
fn view_formula_units() -> Outcome {
    let identity = Calibration::new(32.0, 0.0, 0.0, 32, 4096, 8).unwrap();
    let identity_ok = (0..3 * 4096u32).all(|i| {
        let n = view_number_at(i as f64, 0.0, &identity);
        n == (i % 32) as f64
    });

    let shifted = Calibration::new(4.0, 0.0, 1.0, 4, 8, 8).unwrap();
    let negative_ok = view_number_at(0.0, 0.0, &shifted) == 3.0
        && (0..200).all(|j| {
            let c = Calibration::new(7.5, 0.45, 3.0, 32, 8, 8).unwrap();
            (0.0..32.0).contains(&view_number_at(0.0, j as f64, &c))
        });

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..100_000 {
        let pitch = rng.random_range(3.0..64.0);
        let cal = Calibration::new(
            pitch,
            rng.random_range(-0.5..0.5),
            rng.random_range(-pitch..pitch),
            32,
            8,
            8,
        )
        .unwrap();
        let i = rng.random_range(0..7680) as f64;
        let j = rng.random_range(0..1600) as f64;
        let a = view_number_at(i, j, &cal);
        let b = view_number_at(i + pitch, j, &cal);
        let gap = (a - b).abs();
        worst = worst.max(gap.min(32.0 - gap) / 32.0);
    }
    Outcome::check(
        identity_ok && negative_ok && worst <= 1e-9,
        format!(
            "identity i -> i mod 32: {identity_ok}; negative modulo in [0, pitch): {negative_ok}; worst periodicity error {worst:.2e} (limit 1e-9 relative)"
        ),
    )
}

type Criterion = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 LUT speedup", lut_speedup),
        ("3 parallel bands", parallel_bands),
        ("4 morph endpoints", morph_endpoints),
        ("5 flow accuracy", flow_accuracy),
        ("6 quilt geometry", quilt_geometry),
        ("7 format fidelity", format_fidelity),
        ("8 view formula", view_formula_units),
    ];

    let mut failures = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::check(false, format!("panicked: {msg}"))
        });
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", outcome.detail);
        failures += !outcome.pass as usize;
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
