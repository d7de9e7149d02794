//! The production sweep against the all-crossings reference on random
//! inputs, plus additivity and translation checks.

use kakeya_core::construction::{piece_of, precursor_region, tube_hexagon, Line, PrecursorSpec};
use kakeya_core::martingale::DyadicSquare;
use kakeya_core::measure::exhaustive::union_area_exhaustive;
use kakeya_core::measure::{union_area, union_area_in_rect, ConvexPoly, Rect, Region};
use kakeya_core::numeric::{int, rat, Rat};
use kakeya_core::{Caps, Dyadic};
use proptest::prelude::*;

fn tube(slope_num: i64, icpt: (i64, i64), delta_exp: i64, x_lo: (i64, i64), width: (i64, i64)) -> ConvexPoly {
    let line = Line { slope: Dyadic::new(slope_num, 4), intercept: rat(icpt.0, icpt.1) };
    let delta = rat(1, 1 << delta_exp);
    let lo = rat(x_lo.0, x_lo.1);
    let hi = &lo + rat(width.0, width.1);
    tube_hexagon(&line, &delta, &lo, &hi)
}

fn arb_tube() -> impl Strategy<Value = ConvexPoly> {
    (0i64..16, (-8i64..8, 1i64..9), 1i64..5, (-4i64..4, 1i64..5), (1i64..6, 1i64..5))
        .prop_map(|(s, c, d, x, w)| tube(s, c, d, x, w))
}

fn arb_rect() -> impl Strategy<Value = ConvexPoly> {
    (-8i64..8, -8i64..8, 1i64..8, 1i64..8, 1i64..5).prop_map(|(x, y, w, h, den)| {
        Rect::new(rat(x, den), rat(y, den), rat(x + w, den), rat(y + h, den)).to_poly().unwrap()
    })
}

fn arb_square() -> impl Strategy<Value = Rect> {
    (0u32..4, 0i64..16, 0i64..16).prop_map(|(r, u, v)| {
        let n = 1i64 << r;
        let (u, v) = (u % n, v % n);
        Rect::new(rat(u, n), rat(v, n), rat(u + 1, n), rat(v + 1, n))
    })
}

/// Tubes of one family share a strip, the configuration the precursors use.
fn arb_family() -> impl Strategy<Value = Vec<ConvexPoly>> {
    (1i64..6, (-2i64..2, 1i64..3), proptest::collection::vec((0i64..16, -16i64..16), 1..10)).prop_map(
        |(d, x, lines)| lines.into_iter().map(|(s, c)| tube(s, (c, 16), d, x, (1, 2))).collect(),
    )
}

/// Thin, nearly parallel tubes over one strip, like a precursor's.
fn arb_thin_family() -> impl Strategy<Value = Vec<ConvexPoly>> {
    (6i64..10, 20i64..44, proptest::collection::vec((0i64..12, -64i64..64), 2..12)).prop_map(
        |(d, base, lines)| {
            lines
                .into_iter()
                .map(|(ds, c)| {
                    let line = Line { slope: Dyadic::new(base + ds, 6), intercept: rat(c, 1024) };
                    tube_hexagon(&line, &rat(1, 1 << d), &rat(1, 4), &rat(1, 2))
                })
                .collect()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn sweep_matches_reference_on_tubes(polys in proptest::collection::vec(arb_tube(), 1..8)) {
        let caps = Caps::default();
        let region = Region::new(polys);
        prop_assert_eq!(union_area(&region, &caps).unwrap(), union_area_exhaustive(&region.polys));
    }

    #[test]
    fn sweep_matches_reference_on_families(polys in arb_family(), sq in arb_square()) {
        let caps = Caps::default();
        let region = Region::new(polys);
        prop_assert_eq!(union_area(&region, &caps).unwrap(), union_area_exhaustive(&region.polys));
        let clipped = region.translated(&rat(1, 2), &rat(1, 2)).clipped(&sq);
        prop_assert_eq!(union_area(&clipped, &caps).unwrap(), union_area_exhaustive(&clipped.polys));
    }

    #[test]
    fn sweep_matches_reference_on_mixed(
        tubes in proptest::collection::vec(arb_tube(), 0..5),
        rects in proptest::collection::vec(arb_rect(), 0..5),
    ) {
        let caps = Caps::default();
        let region = Region::new(tubes.into_iter().chain(rects).collect());
        prop_assert_eq!(union_area(&region, &caps).unwrap(), union_area_exhaustive(&region.polys));
    }

    #[test]
    fn sweep_matches_reference_on_thin_families(polys in arb_thin_family(), sq in arb_square()) {
        let caps = Caps::default();
        let region = Region::new(polys);
        prop_assert_eq!(union_area(&region, &caps).unwrap(), union_area_exhaustive(&region.polys));
        let clipped = region.clipped(&sq);
        prop_assert_eq!(union_area(&clipped, &caps).unwrap(), union_area_exhaustive(&clipped.polys));
    }

    #[test]
    fn area_is_additive_over_dyadic_children(polys in arb_family(), sq in arb_square()) {
        let caps = Caps::default();
        let region = Region::new(polys).translated(&rat(1, 2), &rat(1, 2));
        let whole = union_area_in_rect(&region, &sq, &caps).unwrap();
        let mid_x = (&sq.x0 + &sq.x1) / int(2);
        let mid_y = (&sq.y0 + &sq.y1) / int(2);
        let parts: Rat = [
            Rect::new(sq.x0.clone(), sq.y0.clone(), mid_x.clone(), mid_y.clone()),
            Rect::new(mid_x.clone(), sq.y0.clone(), sq.x1.clone(), mid_y.clone()),
            Rect::new(sq.x0.clone(), mid_y.clone(), mid_x.clone(), sq.y1.clone()),
            Rect::new(mid_x, mid_y, sq.x1.clone(), sq.y1.clone()),
        ]
        .iter()
        .map(|q| union_area_in_rect(&region, q, &caps).unwrap())
        .sum();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn area_is_translation_invariant(polys in arb_family(), dx in -20i64..20, dy in -20i64..20, den in 1i64..7) {
        let caps = Caps::default();
        let region = Region::new(polys);
        let moved = region.translated(&rat(dx, den), &rat(dy, den));
        prop_assert_eq!(union_area(&region, &caps).unwrap(), union_area(&moved, &caps).unwrap());
    }
}

/// Real precursor pieces, clipped to every square down to level 2.
#[test]
fn sweep_matches_reference_on_precursor_pieces() {
    let caps = Caps::default();
    for (m, num, k) in [(1u32, 0i64, 3u64), (1, 1, 4), (2, 1, 5), (2, -3, 5), (3, 2, 4)] {
        let spec = PrecursorSpec::decoupled(m, Dyadic::new(num, m), k).unwrap();
        let region = precursor_region(&spec, &caps).unwrap();
        let piece = piece_of(&region, &spec, 0);
        for r in 0..=2u32 {
            for q in DyadicSquare::all_at(r) {
                let clipped = piece.clipped(&q.rect());
                assert_eq!(
                    union_area(&clipped, &caps).unwrap(),
                    union_area_exhaustive(&clipped.polys),
                    "m={m} xhat={num}/2^{m} k={k} {q:?}"
                );
            }
        }
    }
}
