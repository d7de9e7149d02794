//! Exact precursor areas against a seeded floating-point Monte-Carlo
//! estimate, within three standard deviations.

use kakeya_core::construction::{precursor_region, PrecursorSpec};
use kakeya_core::measure::{union_area, ConvexPoly, Region};
use kakeya_core::numeric::rat_to_f64;
use kakeya_core::{Caps, Dyadic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_f64(poly: &ConvexPoly) -> Vec<(f64, f64)> {
    poly.vertices().iter().map(|v| (rat_to_f64(&v.x), rat_to_f64(&v.y))).collect()
}

fn inside(poly: &[(f64, f64)], x: f64, y: f64) -> bool {
    (0..poly.len()).all(|i| {
        let (ax, ay) = poly[i];
        let (bx, by) = poly[(i + 1) % poly.len()];
        (bx - ax) * (y - ay) - (by - ay) * (x - ax) >= 0.0
    })
}

fn estimate(region: &Region, samples: u32, seed: u64) -> (f64, f64) {
    let bbox = region.bbox().expect("nonempty region");
    let (x0, y0, x1, y1) = (rat_to_f64(&bbox.x0), rat_to_f64(&bbox.y0), rat_to_f64(&bbox.x1), rat_to_f64(&bbox.y1));
    let polys: Vec<Vec<(f64, f64)>> = region.polys.iter().map(to_f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u32;
    for _ in 0..samples {
        let x = rng.gen_range(x0..x1);
        let y = rng.gen_range(y0..y1);
        if polys.iter().any(|p| inside(p, x, y)) {
            hits += 1;
        }
    }
    let box_area = (x1 - x0) * (y1 - y0);
    let p = f64::from(hits) / f64::from(samples);
    (p * box_area, box_area * (p * (1.0 - p) / f64::from(samples)).sqrt())
}

#[test]
fn precursor_areas_agree_with_sampling() {
    let caps = Caps::default();
    let cases = [
        PrecursorSpec::coupled(1, Dyadic::zero()).unwrap(),
        PrecursorSpec::coupled(1, Dyadic::from_int(-1)).unwrap(),
        PrecursorSpec::decoupled(2, Dyadic::new(3, 2), 6).unwrap(),
    ];
    for (n, spec) in cases.iter().enumerate() {
        let region = precursor_region(spec, &caps).unwrap();
        let exact = rat_to_f64(&union_area(&region, &caps).unwrap());
        let (est, sigma) = estimate(&region, 1_000_000, 17 + n as u64);
        assert!((est - exact).abs() <= 3.0 * sigma, "m={} xhat={}: exact {exact}, sampled {est} +- {sigma}", spec.m, spec.xhat);
    }
}
