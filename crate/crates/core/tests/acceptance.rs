//! Acceptance suite: one test per shipping criterion, each printing the
//! measured value against its threshold (run with `--nocapture` to see the
//! numbers for passing tests too).
//!
//! The 256x256 fixture photo is checked in at `tests/data/photo_256.png`;
//! `regenerate_fixture_photo` (ignored by default) rebuilds it from the
//! deterministic generator below.

use std::f64::consts::TAU;
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tractbrush::config::parse_config_str;
use tractbrush::field::{coherence, eigen2, structure_tensor};
use tractbrush::geom::{point_segment_distance, Point};
use tractbrush::pipeline::{
    cell_grid, smoothness_metric, stylize, LayerParams, StylizationConfig,
};
use tractbrush::raster::{
    decode_image, encode_png, gaussian_blur, ColorImage, GaussianKernel, ScalarImage,
};
use tractbrush::render::{mean_cell_distance, CellRect};
use tractbrush::stroke::{eval_cubic, fit_bezier, rdp_simplify, CubicBezier};
use tractbrush::tracer::{trace_bidirectional, trace_bidirectional_with_stats, TracerConfig};

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/photo_256.png")
}

fn load_fixture() -> ColorImage {
    let path = fixture_path();
    let bytes = std::fs::read(&path).unwrap_or_else(|e| {
        panic!(
            "missing test fixture {} ({e}); run `cargo test -p tractbrush --test acceptance \
             regenerate_fixture_photo -- --ignored` to rebuild it"
        , path.display())
    });
    let img = decode_image(&bytes).expect("fixture decodes");
    assert_eq!((img.width(), img.height()), (256, 256), "fixture must be 256x256");
    img
}

/// Deterministic synthetic photo: smooth colour ramps (so coarse layers see
/// coherent large-scale gradients), an oriented fine texture (so fine layers
/// see local structure), and hash noise for a photographic feel. Values are
/// integers in [25, 190], comfortably darker than the white canvas.
fn synth_photo(size: usize) -> ColorImage {
    fn hash2(x: u64, y: u64) -> f64 {
        let mut v = x
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(y.wrapping_mul(0xBF58_476D_1CE4_E5B9));
        v ^= v >> 31;
        v = v.wrapping_mul(0x94D0_49BB_1331_11EB);
        v ^= v >> 29;
        (v >> 32) as f64 / u32::MAX as f64 - 0.5
    }

    let mut img = ColorImage::new(size, size, [0.0; 3]);
    let n = (size - 1) as f64;
    let (sin_t, cos_t) = 0.6f64.sin_cos();
    for y in 0..size {
        for x in 0..size {
            let nx = x as f64 / n;
            let ny = y as f64 / n;
            let texture = 8.0 * (TAU * (x as f64 * cos_t + y as f64 * sin_t) / 12.0).sin();
            let noise = 8.0 * hash2(x as u64, y as u64);
            let r = 50.0 + 100.0 * nx + 18.0 * (TAU * ny * 1.3).sin();
            let g = 45.0 + 110.0 * ny + 12.0 * (TAU * nx * 1.1 + 1.0).sin();
            let b = 70.0 + 45.0 * nx * ny + 14.0 * (TAU * (nx + ny) * 0.8).sin();
            let px = [r, g, b].map(|v| (v + texture + noise).round().clamp(25.0, 190.0));
            img.set(x, y, px);
        }
    }
    img
}

fn random_scalar_image(w: usize, h: usize, rng: &mut ChaCha8Rng) -> ScalarImage {
    ScalarImage::from_vec(w, h, (0..w * h).map(|_| rng.random_range(0.0..255.0)).collect())
}

/// Mean per-pixel RGB distance over the whole image.
fn mean_image_distance(a: &ColorImage, b: &ColorImage) -> f64 {
    let rect = CellRect { x: 0, y: 0, w: a.width(), h: a.height() };
    mean_cell_distance(a, b, rect).expect("full-canvas distance")
}

/// Minimum distance from `p` to a Bezier chain, by dense sampling
/// (`samples` points per segment). An upper bound on the true distance.
fn dist_to_chain(p: Point, chain: &[CubicBezier], samples: usize) -> f64 {
    let mut best = f64::INFINITY;
    for seg in chain {
        for k in 0..=samples {
            let q = eval_cubic(seg, k as f64 / samples as f64);
            best = best.min((p - q).norm());
        }
    }
    best
}

#[test]
#[ignore = "writes tests/data/photo_256.png; run explicitly to regenerate"]
fn regenerate_fixture_photo() {
    let img = synth_photo(256);
    let bytes = encode_png(&img).expect("encode fixture");
    let path = fixture_path();
    std::fs::create_dir_all(path.parent().unwrap()).expect("create data dir");
    std::fs::write(&path, bytes).expect("write fixture");
    println!("wrote {}", path.display());
}

// ---------------------------------------------------------------------------
// 1. Eigendecomposition oracle
// ---------------------------------------------------------------------------

#[test]
fn acceptance_01_eigen_reconstruction_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE16E);
    let start = Instant::now();
    let mut max_rel = 0.0f64;
    for _ in 0..1000 {
        let sxx = rng.random_range(-10.0..10.0);
        let sxy = rng.random_range(-10.0..10.0);
        let syy = rng.random_range(-10.0..10.0);
        let e = eigen2(sxx, sxy, syy);
        assert!(e.lambda1 <= e.lambda2, "eigenvalues out of order for {sxx},{sxy},{syy}");

        let m00 = e.lambda1 * e.v1.x * e.v1.x + e.lambda2 * e.v2.x * e.v2.x;
        let m01 = e.lambda1 * e.v1.x * e.v1.y + e.lambda2 * e.v2.x * e.v2.y;
        let m11 = e.lambda1 * e.v1.y * e.v1.y + e.lambda2 * e.v2.y * e.v2.y;
        let err =
            ((m00 - sxx).powi(2) + 2.0 * (m01 - sxy).powi(2) + (m11 - syy).powi(2)).sqrt();
        let scale = (sxx * sxx + 2.0 * sxy * sxy + syy * syy).sqrt().max(1e-12);
        max_rel = max_rel.max(err / scale);
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 1: max relative reconstruction error {max_rel:.3e} (<= 1e-7), \
         1000 tensors in {elapsed:.3}s (< 1s)"
    );
    assert!(max_rel <= 1e-7, "reconstruction error {max_rel:.3e} exceeds 1e-7");
    assert!(elapsed < 1.0, "eigen oracle took {elapsed:.3}s");
}

// ---------------------------------------------------------------------------
// 2. Orientation-tensor field vs brute-force reference
// ---------------------------------------------------------------------------

/// Full 2D nested-loop convolution with a separable kernel `hk (x) * vk (y)`,
/// replicating edge pixels — an independent reference for the library's
/// separable implementation.
fn conv2_reference(img: &ScalarImage, hk: &[f64], vk: &[f64]) -> ScalarImage {
    let (w, h) = (img.width(), img.height());
    let rx = (hk.len() / 2) as i64;
    let ry = (vk.len() / 2) as i64;
    let mut out = ScalarImage::new(w, h, 0.0);
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let mut acc = 0.0;
            for (kv, &tv) in vk.iter().enumerate() {
                for (kh, &th) in hk.iter().enumerate() {
                    let sx = (x + kh as i64 - rx).clamp(0, w as i64 - 1) as usize;
                    let sy = (y + kv as i64 - ry).clamp(0, h as i64 - 1) as usize;
                    acc += tv * th * img.get(sx, sy);
                }
            }
            out.set(x as usize, y as usize, acc);
        }
    }
    out
}

fn reference_tensor_planes(
    img: &ScalarImage,
    sigma_d: f64,
    rho: f64,
) -> (ScalarImage, ScalarImage, ScalarImage) {
    let smooth = GaussianKernel::new(sigma_d).unwrap();
    let deriv = GaussianKernel::derivative(sigma_d).unwrap();
    // Step 1: derivative-of-Gaussian gradients.
    let ix = conv2_reference(img, deriv.taps(), smooth.taps());
    let iy = conv2_reference(img, smooth.taps(), deriv.taps());
    // Step 2: gradient outer products.
    let (w, h) = (img.width(), img.height());
    let mut jxx = ScalarImage::new(w, h, 0.0);
    let mut jxy = ScalarImage::new(w, h, 0.0);
    let mut jyy = ScalarImage::new(w, h, 0.0);
    for y in 0..h {
        for x in 0..w {
            let (gx, gy) = (ix.get(x, y), iy.get(x, y));
            jxx.set(x, y, gx * gx);
            jxy.set(x, y, gx * gy);
            jyy.set(x, y, gy * gy);
        }
    }
    // Step 3: Gaussian smoothing of each tensor component.
    let k = GaussianKernel::new(rho).unwrap();
    (
        conv2_reference(&jxx, k.taps(), k.taps()),
        conv2_reference(&jxy, k.taps(), k.taps()),
        conv2_reference(&jyy, k.taps(), k.taps()),
    )
}

#[test]
fn acceptance_02_structure_tensor_matches_bruteforce_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x57A7);
    let mut max_abs = 0.0f64;
    for _ in 0..20 {
        let img = random_scalar_image(64, 64, &mut rng);
        let field = structure_tensor(&img, 1.0, 1.0).unwrap();
        let (rxx, rxy, ryy) = reference_tensor_planes(&img, 1.0, 1.0);
        for y in 0..64 {
            for x in 0..64 {
                let (sxx, sxy, syy) = field.components(x, y);
                max_abs = max_abs
                    .max((sxx - rxx.get(x, y)).abs())
                    .max((sxy - rxy.get(x, y)).abs())
                    .max((syy - ryy.get(x, y)).abs());
            }
        }
    }
    println!("criterion 2: max |module - reference| = {max_abs:.3e} (<= 1e-9) over 20 images");
    assert!(max_abs <= 1e-9, "deviation {max_abs:.3e} from brute-force reference");
}

// ---------------------------------------------------------------------------
// 3. Rotation equivariance
// ---------------------------------------------------------------------------

#[test]
fn acceptance_03_rotation_equivariance_90deg() {
    // Diagonal stripes exercise every tensor component.
    let w = 64usize;
    let mut img = ScalarImage::new(w, w, 0.0);
    for y in 0..w {
        for x in 0..w {
            img.set(x, y, 127.5 + 100.0 * (TAU * (0.3 * x as f64 + 0.7 * y as f64) / 8.0).sin());
        }
    }
    // J(a, b) = I(w-1-b, a), i.e. the grid map (x, y) -> (y, w-1-x) with
    // rotation matrix R = [[0, 1], [-1, 0]].
    let mut rot = ScalarImage::new(w, w, 0.0);
    for b in 0..w {
        for a in 0..w {
            rot.set(a, b, img.get(w - 1 - b, a));
        }
    }

    let field = structure_tensor(&img, 1.0, 1.0).unwrap();
    let field_rot = structure_tensor(&rot, 1.0, 1.0).unwrap();

    // R S R^T with R above maps (sxx, sxy, syy) -> (syy, -sxy, sxx).
    let margin = 8;
    let mut max_abs = 0.0f64;
    for yp in margin..w - margin {
        for xp in margin..w - margin {
            let (x, y) = (w - 1 - yp, xp);
            let (sxx, sxy, syy) = field.components(x, y);
            let (txx, txy, tyy) = field_rot.components(xp, yp);
            max_abs = max_abs
                .max((txx - syy).abs())
                .max((txy - (-sxy)).abs())
                .max((tyy - sxx).abs());
        }
    }
    println!("criterion 3: max |S' - R S R^T| = {max_abs:.3e} (<= 1e-3) at interior pixels");
    assert!(max_abs <= 1e-3, "rotation equivariance violated by {max_abs:.3e}");
}

// ---------------------------------------------------------------------------
// 4. Coherence properties
// ---------------------------------------------------------------------------

#[test]
fn acceptance_04_coherence_range_and_exact_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE16E);
    for _ in 0..1000 {
        let sxx = rng.random_range(-10.0..10.0);
        let sxy = rng.random_range(-10.0..10.0);
        let syy = rng.random_range(-10.0..10.0);
        let e = eigen2(sxx, sxy, syy);
        let a = coherence(e.lambda1, e.lambda2);
        assert!((0.0..=1.0).contains(&a), "coherence {a} outside [0,1]");
    }
    assert_eq!(coherence(0.0, 5.0), 1.0, "rank-1 tensor must have coherence exactly 1");
    assert_eq!(coherence(3.0, 3.0), 0.0, "isotropic tensor must have coherence exactly 0");
    assert_eq!(coherence(7.0, 7.0), 0.0);
    assert_eq!(coherence(1.0, 3.0), 0.25, "coherence(1,3) must be exactly 0.25");
    println!("criterion 4: coherence in [0,1] on 1000 tensors; exact values 1, 0, 0.25 hold");
}

// ---------------------------------------------------------------------------
// 5. Tracer accuracy on concentric rings
// ---------------------------------------------------------------------------

fn rings_image(size: usize, period: f64) -> ScalarImage {
    let c = (size - 1) as f64 / 2.0;
    let mut img = ScalarImage::new(size, size, 0.0);
    for y in 0..size {
        for x in 0..size {
            let r = (x as f64 - c).hypot(y as f64 - c);
            img.set(x, y, 127.5 + 127.5 * (TAU * r / period).sin());
        }
    }
    img
}

/// Max deviation of any tract point from its seed radius over 20 seeds.
fn rings_max_deviation(error_tol: f64) -> f64 {
    let size = 128usize;
    let c = (size - 1) as f64 / 2.0;
    let centre = Point::new(c, c);
    let field = structure_tensor(&rings_image(size, 10.0), 1.0, 1.0).unwrap();
    let cfg = TracerConfig {
        max_length: 100.0,
        coherence_min: 0.5,
        initial_step: 1.0,
        min_step: 0.1,
        max_step: 2.0,
        error_tol,
    };
    let golden = 2.399_963_229_728_653;
    let mut max_dev = 0.0f64;
    for k in 0..20 {
        let radius = 10.0 + 20.0 * k as f64 / 19.0;
        let phi = golden * k as f64;
        let seed = centre + Point::new(phi.cos(), phi.sin()) * radius;
        let tract = trace_bidirectional(&field, seed, &cfg)
            .unwrap_or_else(|e| panic!("seed {k} (radius {radius:.2}) failed: {e}"));
        assert!(tract.len() >= 2, "seed {k} produced a degenerate tract");
        let seed_radius = (seed - centre).norm();
        for &p in tract.points() {
            max_dev = max_dev.max(((p - centre).norm() - seed_radius).abs());
        }
    }
    max_dev
}

#[test]
fn acceptance_05_tracer_follows_concentric_rings() {
    let dev = rings_max_deviation(0.1);
    let dev_halved = rings_max_deviation(0.05);
    println!(
        "criterion 5: max radial deviation {dev:.3} px (<= 1.5); with halved error_tol \
         {dev_halved:.3} px (<= {:.3})",
        dev * 1.1
    );
    assert!(dev <= 1.5, "radial deviation {dev:.3} px exceeds 1.5 px");
    assert!(
        dev_halved <= dev * 1.1 + 1e-9,
        "halving error_tol worsened deviation from {dev:.3} to {dev_halved:.3}"
    );
}

// ---------------------------------------------------------------------------
// 6. Stopping soundness fuzz
// ---------------------------------------------------------------------------

#[test]
fn acceptance_06_tracer_stopping_soundness_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF022);
    let size = 96usize;
    let fields: Vec<_> = (0..5)
        .map(|_| {
            let noise = random_scalar_image(size, size, &mut rng);
            let img = gaussian_blur(&noise, 2.5).unwrap();
            structure_tensor(&img, 1.0, 1.0).unwrap()
        })
        .collect();

    let mut traced = 0u32;
    let mut forced_accepts = 0u32;
    let mut attempts = 0u32;
    let coherence_min = 0.5;
    while traced < 50 && attempts < 4000 {
        attempts += 1;
        let field = &fields[rng.random_range(0..fields.len())];
        let seed = Point::new(
            rng.random_range(0.0..(size - 1) as f64),
            rng.random_range(0.0..(size - 1) as f64),
        );
        let max_length = rng.random_range(20.0..120.0);
        let cfg = TracerConfig {
            max_length,
            coherence_min,
            initial_step: 1.0,
            min_step: 0.1,
            max_step: 2.0,
            error_tol: 0.1,
        };
        let Ok((tract, stats)) = trace_bidirectional_with_stats(field, seed, &cfg) else {
            continue; // rejected seed: a legitimate outcome, try another
        };
        traced += 1;
        forced_accepts += stats.forced_min_step_accepts;
        let hi = (size - 1) as f64;
        for &p in tract.points() {
            assert!(
                (0.0..=hi).contains(&p.x) && (0.0..=hi).contains(&p.y),
                "tract point ({}, {}) left the {size}x{size} domain",
                p.x,
                p.y
            );
        }
        assert!(
            stats.min_accepted_coherence >= coherence_min,
            "accepted an evaluation at coherence {} < {coherence_min}",
            stats.min_accepted_coherence
        );
        assert!(
            tract.arc_length() <= max_length + cfg.error_tol,
            "arc {} exceeds budget {max_length} + tol",
            tract.arc_length()
        );
    }
    println!(
        "criterion 6: {traced}/50 tracts in {attempts} attempts; all points in-domain, \
         no sub-threshold acceptances; {forced_accepts} forced min-step acceptances (reported)"
    );
    assert_eq!(traced, 50, "fuzz suite could not seed 50 tracts");
}

// ---------------------------------------------------------------------------
// 7. Polyline simplification bound
// ---------------------------------------------------------------------------

fn min_dist_to_polyline(p: Point, chain: &[Point]) -> f64 {
    chain
        .windows(2)
        .map(|w| point_segment_distance(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

fn is_subsequence(sub: &[Point], full: &[Point]) -> bool {
    let mut it = full.iter();
    sub.iter().all(|s| it.any(|f| f == s))
}

#[test]
fn acceptance_07_rdp_distance_bound_subsequence_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x20D7);
    let mut max_removed_dist_ratio = 0.0f64;
    for case in 0..500 {
        let n = rng.random_range(2..=40);
        let pts: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.random_range(0.0..100.0), rng.random_range(0.0..100.0)))
            .collect();
        let eps = rng.random_range(0.05..5.0);
        let simp = rdp_simplify(&pts, eps).unwrap();

        assert!(is_subsequence(&simp, &pts), "case {case}: output is not a subsequence");
        for p in &pts {
            let d = min_dist_to_polyline(*p, &simp);
            assert!(
                d <= eps + 1e-12,
                "case {case}: removed point at distance {d} > epsilon {eps}"
            );
            max_removed_dist_ratio = max_removed_dist_ratio.max(d / eps);
        }
        let again = rdp_simplify(&simp, eps).unwrap();
        assert_eq!(again, simp, "case {case}: simplification is not idempotent");
    }
    println!(
        "criterion 7: 500 polylines; worst removed-point distance = \
         {:.1}% of epsilon (<= 100%); subsequence and idempotence hold",
        max_removed_dist_ratio * 100.0
    );
}

// ---------------------------------------------------------------------------
// 8. Bezier fit bound
// ---------------------------------------------------------------------------

fn assert_fit_bound(pts: &[Point], max_error: f64, label: &str) -> f64 {
    let chain = fit_bezier(pts, max_error).unwrap_or_else(|e| panic!("{label}: fit failed: {e}"));
    let mut worst = 0.0f64;
    for p in pts {
        let d = dist_to_chain(*p, &chain, 1000);
        assert!(
            d <= max_error * (1.0 + 1e-6) + 1e-9,
            "{label}: input point at distance {d} > max_error {max_error}"
        );
        worst = worst.max(d);
    }
    worst
}

#[test]
fn acceptance_08_bezier_fit_distance_bound() {
    // Straight line with uneven spacing.
    let mut rng = ChaCha8Rng::seed_from_u64(0xBE21);
    let mut t = 0.0;
    let line: Vec<Point> = (0..30)
        .map(|_| {
            t += rng.random_range(0.5..2.0);
            Point::new(t, 0.4 * t)
        })
        .collect();
    let w_line = assert_fit_bound(&line, 0.5, "line");

    // Quarter and half circle arcs.
    let arc = |from: f64, to: f64, n: usize| -> Vec<Point> {
        (0..n)
            .map(|i| {
                let a = from + (to - from) * i as f64 / (n - 1) as f64;
                Point::new(30.0 + 25.0 * a.cos(), 30.0 + 25.0 * a.sin())
            })
            .collect()
    };
    let w_q = assert_fit_bound(&arc(0.0, TAU / 4.0, 60), 0.5, "quarter circle");
    let w_h = assert_fit_bound(&arc(0.0, TAU / 2.0, 90), 1.0, "half circle");

    // Random smooth tracts: bounded-curvature random walks.
    let mut w_rand = 0.0f64;
    for case in 0..10 {
        let mut heading = rng.random_range(0.0..TAU);
        let mut p = Point::new(rng.random_range(40.0..60.0), rng.random_range(40.0..60.0));
        let mut pts = vec![p];
        for _ in 0..59 {
            heading += rng.random_range(-0.15..0.15);
            p = p + Point::new(heading.cos(), heading.sin()) * 1.2;
            pts.push(p);
        }
        w_rand = w_rand.max(assert_fit_bound(&pts, 1.0, &format!("random tract {case}")));
    }
    println!(
        "criterion 8: worst input-point distance: line {w_line:.4} (<= 0.5), quarter \
         {w_q:.4} (<= 0.5), half {w_h:.4} (<= 1.0), random {w_rand:.4} (<= 1.0)"
    );
}

// ---------------------------------------------------------------------------
// 9. End-to-end determinism
// ---------------------------------------------------------------------------

#[test]
fn acceptance_09_end_to_end_determinism_and_seed_sensitivity() {
    let original = load_fixture();
    let cfg = StylizationConfig { rng_seed: 42, ..StylizationConfig::default() };

    let (canvas_a, _) = stylize(&original, &cfg).unwrap();
    let (canvas_b, _) = stylize(&original, &cfg).unwrap();
    let png_a = encode_png(canvas_a.image()).unwrap();
    let png_b = encode_png(canvas_b.image()).unwrap();
    assert_eq!(png_a, png_b, "same seed must give byte-identical PNG output");

    let other = StylizationConfig { rng_seed: 43, ..StylizationConfig::default() };
    let (canvas_c, _) = stylize(&original, &other).unwrap();
    let png_c = encode_png(canvas_c.image()).unwrap();
    assert_ne!(png_a, png_c, "changing the seed must change the PNG output");
    println!(
        "criterion 9: two seed-42 runs byte-identical ({} bytes); seed 43 differs",
        png_a.len()
    );
}

// ---------------------------------------------------------------------------
// 10. Orientation smoothing produces smoother strokes than raw gradients
// ---------------------------------------------------------------------------

#[test]
fn acceptance_10_structure_tensor_strokes_smoother_than_gradient() {
    // Vertical stripes plus per-pixel noise: raw gradient directions jitter,
    // tensor smoothing irons them out.
    let size = 128usize;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut img = ColorImage::new(size, size, [0.0; 3]);
    for y in 0..size {
        for x in 0..size {
            let v = (127.5
                + 55.0 * (TAU * x as f64 / 12.0).sin()
                + rng.random_range(-20.0..20.0))
            .clamp(0.0, 255.0);
            img.set(x, y, [v, v, v]);
        }
    }
    let base = StylizationConfig {
        layers: vec![LayerParams {
            scale_factor: 1.0,
            stroke_length: 60.0,
            stroke_width: 5.0,
            color_threshold: 50.0,
        }],
        rng_seed: 11,
        ..StylizationConfig::default()
    };
    let st_cfg = StylizationConfig { field_kind: "structure_tensor".into(), ..base.clone() };
    let gr_cfg = StylizationConfig { field_kind: "gradient".into(), ..base };

    let (_, st_records) = stylize(&img, &st_cfg).unwrap();
    let (_, gr_records) = stylize(&img, &gr_cfg).unwrap();
    assert!(st_records.len() >= 50, "too few tensor-field strokes: {}", st_records.len());
    assert!(gr_records.len() >= 50, "too few gradient-field strokes: {}", gr_records.len());

    let m_st = smoothness_metric(&st_records).unwrap();
    let m_gr = smoothness_metric(&gr_records).unwrap();
    println!(
        "criterion 10: jaggedness structure_tensor {m_st:.4} vs gradient {m_gr:.4} \
         (need st < 0.9 * gradient = {:.4})",
        0.9 * m_gr
    );
    assert!(
        m_st < 0.9 * m_gr,
        "tensor strokes ({m_st:.4}) are not 10% smoother than gradient strokes ({m_gr:.4})"
    );
}

// ---------------------------------------------------------------------------
// 11. Default parameter table
// ---------------------------------------------------------------------------

#[test]
fn acceptance_11_default_config_matches_standard_table() {
    let expected = [
        (10.0, 1000.0, 50.0, 100.0),
        (5.0, 500.0, 25.0, 100.0),
        (1.0, 100.0, 5.0, 50.0),
        (0.5, 100.0, 2.5, 50.0),
    ];
    for (label, cfg) in [
        ("StylizationConfig::default()", StylizationConfig::default()),
        ("empty config file", parse_config_str("").unwrap()),
    ] {
        assert_eq!(cfg.layers.len(), 4, "{label}: expected 4 layers");
        for (i, (scale, length, width, threshold)) in expected.iter().enumerate() {
            let l = &cfg.layers[i];
            assert_eq!(
                (l.scale_factor, l.stroke_length, l.stroke_width, l.color_threshold),
                (*scale, *length, *width, *threshold),
                "{label}: layer {} differs from the standard table",
                i + 1
            );
        }
    }
    println!("criterion 11: default config is exactly the standard 4-layer table");
}

// ---------------------------------------------------------------------------
// 12. Coverage refinement
// ---------------------------------------------------------------------------

#[test]
fn acceptance_12_coverage_refines_monotonically_and_layer1_paints_90pct() {
    let original = load_fixture();
    let full = StylizationConfig { rng_seed: 42, ..StylizationConfig::default() };

    let white = ColorImage::new(original.width(), original.height(), full.background);
    let mut distances = vec![mean_image_distance(&original, &white)];

    // Per-layer RNG streams make a k-layer prefix run identical to the first
    // k layers of the full run, so prefix runs recover the intermediate
    // canvases.
    let mut layer1_painted = 0usize;
    for k in 1..=full.layers.len() {
        let cfg = StylizationConfig { layers: full.layers[..k].to_vec(), ..full.clone() };
        let (canvas, records) = stylize(&original, &cfg).unwrap();
        distances.push(mean_image_distance(&original, canvas.image()));
        if k == 1 {
            layer1_painted = records.iter().filter(|r| r.layer == 0).count();
        }
    }

    let cells = cell_grid(original.width(), original.height(), full.layers[0].stroke_width)
        .unwrap()
        .len();
    let fraction = layer1_painted as f64 / cells as f64;

    let chain: Vec<String> = distances.iter().map(|d| format!("{d:.2}")).collect();
    println!(
        "criterion 12: mean RGB distance after each layer: {} (non-increasing); \
         layer 1 painted {layer1_painted}/{cells} cells = {:.1}% (>= 90%)",
        chain.join(" -> "),
        fraction * 100.0
    );
    for w in distances.windows(2) {
        assert!(
            w[1] <= w[0] + 1e-9,
            "coverage regressed: distance rose from {:.4} to {:.4}",
            w[0],
            w[1]
        );
    }
    assert!(fraction >= 0.9, "layer 1 painted only {:.1}% of cells", fraction * 100.0);
}

// ---------------------------------------------------------------------------
// 13. Performance sanity
// ---------------------------------------------------------------------------

#[test]
fn acceptance_13_full_run_performance_sanity() {
    let original = synth_photo(512);
    let cfg = StylizationConfig { rng_seed: 42, ..StylizationConfig::default() };
    let start = Instant::now();
    let (canvas, records) = stylize(&original, &cfg).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert_eq!((canvas.width(), canvas.height()), (512, 512));
    println!(
        "criterion 13: 512x512 four-layer run took {elapsed:.2}s (< 60s), {} strokes",
        records.len()
    );
    assert!(elapsed < 60.0, "default 512x512 run took {elapsed:.2}s");
}
