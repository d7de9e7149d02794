//! Reference union area: cut the x-axis at every vertex and at every pairwise
//! edge crossing, then integrate the union length slab by slab from its value
//! at the slab midpoint. Cubic in the edge count; meant for checking the
//! production sweep on small inputs.

use num_traits::Zero;

use super::{ConvexPoly, Point};
use crate::numeric::{int, Rat};

/// Abscissa where segments `p0p1` and `q0q1` meet, when they cross at a
/// single point.
fn segment_crossing_x(p0: &Point, p1: &Point, q0: &Point, q1: &Point) -> Option<Rat> {
    let rx = &p1.x - &p0.x;
    let ry = &p1.y - &p0.y;
    let sx = &q1.x - &q0.x;
    let sy = &q1.y - &q0.y;
    let den = &rx * &sy - &ry * &sx;
    if den.is_zero() {
        return None;
    }
    let qpx = &q0.x - &p0.x;
    let qpy = &q0.y - &p0.y;
    let t = (&qpx * &sy - &qpy * &sx) / &den;
    let u = (&qpx * &ry - &qpy * &rx) / &den;
    let unit = int(1);
    let inside = |v: &Rat| v >= &Rat::zero() && v <= &unit;
    (inside(&t) && inside(&u)).then(|| &p0.x + t * rx)
}

/// Vertical extent of a convex polygon at abscissa `x`.
fn section(poly: &ConvexPoly, x: &Rat) -> Option<(Rat, Rat)> {
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for (a, b) in poly.edges() {
        let (l, r) = if a.x <= b.x { (a, b) } else { (b, a) };
        if l.x == r.x || x < &l.x || x > &r.x {
            continue;
        }
        let y = &l.y + (&r.y - &l.y) * (x - &l.x) / (&r.x - &l.x);
        if lo.as_ref().is_none_or(|v| &y < v) {
            lo = Some(y.clone());
        }
        if hi.as_ref().is_none_or(|v| &y > v) {
            hi = Some(y);
        }
    }
    lo.zip(hi)
}

fn union_length(mut ivs: Vec<(Rat, Rat)>) -> Rat {
    ivs.sort();
    let mut total = Rat::zero();
    let mut cur: Option<(Rat, Rat)> = None;
    for (lo, hi) in ivs {
        match cur.as_mut() {
            Some((_, chi)) if lo <= *chi => {
                if hi > *chi {
                    *chi = hi;
                }
            }
            _ => {
                if let Some((clo, chi)) = cur.take() {
                    total += chi - clo;
                }
                cur = Some((lo, hi));
            }
        }
    }
    if let Some((clo, chi)) = cur {
        total += chi - clo;
    }
    total
}

pub fn union_area_exhaustive(polys: &[ConvexPoly]) -> Rat {
    let edges: Vec<(&Point, &Point)> = polys.iter().flat_map(|p| p.edges()).collect();
    let mut xs: Vec<Rat> = polys.iter().flat_map(|p| p.vertices().iter().map(|v| v.x.clone())).collect();
    for i in 0..edges.len() {
        for j in (i + 1)..edges.len() {
            let (p0, p1) = edges[i];
            let (q0, q1) = edges[j];
            if let Some(x) = segment_crossing_x(p0, p1, q0, q1) {
                xs.push(x);
            }
        }
    }
    xs.sort();
    xs.dedup();
    let mut area = Rat::zero();
    for w in xs.windows(2) {
        let mid = (&w[0] + &w[1]) / int(2);
        let ivs: Vec<(Rat, Rat)> = polys.iter().filter_map(|p| section(p, &mid)).collect();
        area += (&w[1] - &w[0]) * union_length(ivs);
    }
    area
}
