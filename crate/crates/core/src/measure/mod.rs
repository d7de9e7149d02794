//! Exact measure of finite unions of convex polygons with rational vertices.
//!
//! Areas are computed by a vertical-slab sweep (see [`sweep`]); a brute-force
//! sweep over every pairwise edge crossing lives in [`exhaustive`] and serves
//! as an independent oracle.

pub mod exhaustive;
mod sweep;

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::numeric::{int, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn translated(&self, dx: &Rat, dy: &Rat) -> Point {
        Point { x: &self.x + dx, y: &self.y + dy }
    }
}

/// `(b - a) x (c - a)`; positive when `a, b, c` turn counter-clockwise.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Rat {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

/// Closed axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x0: Rat,
    pub y0: Rat,
    pub x1: Rat,
    pub y1: Rat,
}

impl Rect {
    pub fn new(x0: Rat, y0: Rat, x1: Rat, y1: Rat) -> Self {
        debug_assert!(x0 <= x1 && y0 <= y1);
        Rect { x0, y0, x1, y1 }
    }

    pub fn unit() -> Self {
        Rect::new(int(0), int(0), int(1), int(1))
    }

    pub fn area(&self) -> Rat {
        (&self.x1 - &self.x0) * (&self.y1 - &self.y0)
    }

    /// True when the interiors overlap.
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.x0 < other.x1 && other.x0 < self.x1 && self.y0 < other.y1 && other.y0 < self.y1
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.x0 <= other.x0 && other.x1 <= self.x1 && self.y0 <= other.y0 && other.y1 <= self.y1
    }

    pub fn to_poly(&self) -> Option<ConvexPoly> {
        ConvexPoly::new(vec![
            Point::new(self.x0.clone(), self.y0.clone()),
            Point::new(self.x1.clone(), self.y0.clone()),
            Point::new(self.x1.clone(), self.y1.clone()),
            Point::new(self.x0.clone(), self.y1.clone()),
        ])
        .ok()
    }
}

/// Strictly convex polygon, vertices counter-clockwise, no repeats.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvexPoly {
    vertices: Vec<Point>,
}

impl ConvexPoly {
    /// Accepts a counter-clockwise convex vertex list. Repeated and collinear
    /// vertices are dropped; a result with zero area is rejected.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let cleaned = simplify(vertices)
            .ok_or_else(|| Error::InvalidPolygon("fewer than three distinct corners".into()))?;
        let n = cleaned.len();
        for i in 0..n {
            let turn = orient(&cleaned[i], &cleaned[(i + 1) % n], &cleaned[(i + 2) % n]);
            if !turn.is_positive() {
                return Err(Error::InvalidPolygon("not convex and counter-clockwise".into()));
            }
        }
        Ok(ConvexPoly { vertices: cleaned })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn bbox(&self) -> Rect {
        let mut it = self.vertices.iter();
        let first = it.next().expect("polygon has vertices");
        let (mut x0, mut y0, mut x1, mut y1) =
            (first.x.clone(), first.y.clone(), first.x.clone(), first.y.clone());
        for p in it {
            if p.x < x0 {
                x0 = p.x.clone();
            }
            if p.x > x1 {
                x1 = p.x.clone();
            }
            if p.y < y0 {
                y0 = p.y.clone();
            }
            if p.y > y1 {
                y1 = p.y.clone();
            }
        }
        Rect::new(x0, y0, x1, y1)
    }

    pub fn translated(&self, dx: &Rat, dy: &Rat) -> ConvexPoly {
        ConvexPoly { vertices: self.vertices.iter().map(|p| p.translated(dx, dy)).collect() }
    }
}

/// Removes repeated and collinear vertices; `None` if fewer than three remain.
fn simplify(mut vs: Vec<Point>) -> Option<Vec<Point>> {
    vs.dedup();
    while vs.len() > 1 && vs.first() == vs.last() {
        vs.pop();
    }
    let mut changed = true;
    while changed && vs.len() >= 3 {
        changed = false;
        let n = vs.len();
        for i in 0..n {
            let prev = &vs[(i + n - 1) % n];
            let next = &vs[(i + 1) % n];
            if prev == next || orient(prev, &vs[i], next).is_zero() {
                vs.remove(i);
                changed = true;
                break;
            }
        }
    }
    (vs.len() >= 3).then_some(vs)
}

/// Shoelace area.
pub fn poly_area(p: &ConvexPoly) -> Rat {
    let twice = p.edges().fold(Rat::zero(), |acc, (a, b)| acc + (&a.x * &b.y - &b.x * &a.y));
    twice / int(2)
}

/// Keeps the part of `poly` where `side(p) >= 0`; `side` must be affine.
fn clip_halfplane(poly: &[Point], side: impl Fn(&Point) -> Rat) -> Vec<Point> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let cur = &poly[i];
        let next = &poly[(i + 1) % n];
        let fc = side(cur);
        let fn_ = side(next);
        if !fc.is_negative() {
            out.push(cur.clone());
        }
        if (fc.is_negative() && fn_.is_positive()) || (fc.is_positive() && fn_.is_negative()) {
            let t = &fc / (&fc - &fn_);
            out.push(Point::new(
                &cur.x + &t * (&next.x - &cur.x),
                &cur.y + &t * (&next.y - &cur.y),
            ));
        }
    }
    out
}

/// Intersection of a convex polygon with a closed rectangle, or `None` when
/// that intersection has zero area.
pub fn clip_poly_rect(p: &ConvexPoly, rect: &Rect) -> Option<ConvexPoly> {
    let bb = p.bbox();
    if !bb.overlaps(rect) {
        return None;
    }
    if rect.contains_rect(&bb) {
        return Some(p.clone());
    }
    let mut vs = p.vertices.clone();
    vs = clip_halfplane(&vs, |q| &q.x - &rect.x0);
    vs = clip_halfplane(&vs, |q| &rect.x1 - &q.x);
    vs = clip_halfplane(&vs, |q| &q.y - &rect.y0);
    vs = clip_halfplane(&vs, |q| &rect.y1 - &q.y);
    simplify(vs).map(|vertices| ConvexPoly { vertices })
}

/// A finite union of closed convex polygons. The empty list is the empty set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Region {
    pub polys: Vec<ConvexPoly>,
}

impl Region {
    pub fn new(polys: Vec<ConvexPoly>) -> Self {
        Region { polys }
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.polys.iter().map(|p| p.vertices.len()).sum()
    }

    pub fn translated(&self, dx: &Rat, dy: &Rat) -> Region {
        Region { polys: self.polys.iter().map(|p| p.translated(dx, dy)).collect() }
    }

    pub fn clipped(&self, rect: &Rect) -> Region {
        Region { polys: self.polys.iter().filter_map(|p| clip_poly_rect(p, rect)).collect() }
    }

    /// Sum of the polygon areas; an upper bound on the union area.
    pub fn area_sum(&self) -> Rat {
        self.polys.iter().map(poly_area).sum()
    }

    pub fn bbox(&self) -> Option<Rect> {
        let mut boxes = self.polys.iter().map(ConvexPoly::bbox);
        let first = boxes.next()?;
        Some(boxes.fold(first, |acc, b| {
            Rect::new(
                acc.x0.min(b.x0),
                acc.y0.min(b.y0),
                acc.x1.max(b.x1),
                acc.y1.max(b.y1),
            )
        }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Strictly inside some polygon.
    Interior,
    /// Inside or on the boundary of some polygon.
    Closed,
}

pub fn contains_point(r: &Region, pt: &Point, mode: Membership) -> bool {
    r.polys.iter().any(|poly| {
        poly.edges().all(|(a, b)| match orient(a, b, pt).cmp(&Rat::zero()) {
            Ordering::Greater => true,
            Ordering::Equal => mode == Membership::Closed,
            Ordering::Less => false,
        })
    })
}

fn check_vertices(r: &Region, caps: &Caps) -> Result<()> {
    let n = r.vertex_count();
    if n > caps.max_vertices {
        return Err(Error::CapExceeded {
            what: "union area",
            requested: format!("{n} vertices"),
            cap: caps.max_vertices.to_string(),
        });
    }
    Ok(())
}

/// Exact Lebesgue measure of the union.
pub fn union_area(r: &Region, caps: &Caps) -> Result<Rat> {
    check_vertices(r, caps)?;
    Ok(sweep::union_area(&r.polys))
}

/// Exact measure of the union intersected with `rect`.
pub fn union_area_in_rect(r: &Region, rect: &Rect, caps: &Caps) -> Result<Rat> {
    check_vertices(r, caps)?;
    let clipped = r.clipped(rect);
    Ok(sweep::union_area(&clipped.polys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn pt(x: Rat, y: Rat) -> Point {
        Point::new(x, y)
    }

    fn square(x0: Rat, y0: Rat, x1: Rat, y1: Rat) -> ConvexPoly {
        Rect::new(x0, y0, x1, y1).to_poly().unwrap()
    }

    fn unit() -> ConvexPoly {
        square(int(0), int(0), int(1), int(1))
    }

    #[test]
    fn areas() {
        assert_eq!(poly_area(&unit()), int(1));
        let tri = ConvexPoly::new(vec![pt(int(0), int(0)), pt(int(1), int(0)), pt(int(0), int(1))])
            .unwrap();
        assert_eq!(poly_area(&tri), rat(1, 2));
    }

    #[test]
    fn rejects_clockwise_and_degenerate() {
        let cw = vec![pt(int(0), int(0)), pt(int(0), int(1)), pt(int(1), int(0))];
        assert!(ConvexPoly::new(cw).is_err());
        let flat = vec![pt(int(0), int(0)), pt(int(1), int(0)), pt(int(2), int(0))];
        assert!(ConvexPoly::new(flat).is_err());
        // a collinear extra corner is dropped, not rejected
        let sq = vec![
            pt(int(0), int(0)),
            pt(rat(1, 2), int(0)),
            pt(int(1), int(0)),
            pt(int(1), int(1)),
            pt(int(0), int(1)),
            pt(int(0), int(0)),
        ];
        assert_eq!(ConvexPoly::new(sq).unwrap().vertices().len(), 4);
    }

    #[test]
    fn clipping() {
        let big = square(int(0), int(0), int(2), int(2));
        let c = clip_poly_rect(&big, &Rect::unit()).unwrap();
        assert_eq!(poly_area(&c), int(1));

        let tri = ConvexPoly::new(vec![pt(int(0), int(0)), pt(int(2), int(0)), pt(int(0), int(2))])
            .unwrap();
        // the cut along x + y = 2 only removes the corner above it
        let c = clip_poly_rect(&tri, &Rect::unit()).unwrap();
        assert_eq!(poly_area(&c), int(1));
        let c = clip_poly_rect(&tri, &Rect::new(int(0), int(0), rat(3, 2), rat(3, 2))).unwrap();
        assert_eq!(poly_area(&c), int(2) - rat(1, 4));

        let far = square(int(5), int(5), int(6), int(6));
        assert!(clip_poly_rect(&far, &Rect::unit()).is_none());
        // touching along an edge has zero area
        let adj = square(int(1), int(0), int(2), int(1));
        assert!(clip_poly_rect(&adj, &Rect::unit()).is_none());
    }

    #[test]
    fn membership() {
        let r = Region::new(vec![unit()]);
        assert!(contains_point(&r, &pt(rat(1, 2), rat(1, 2)), Membership::Interior));
        let corner = pt(int(0), int(0));
        assert!(!contains_point(&r, &corner, Membership::Interior));
        assert!(contains_point(&r, &corner, Membership::Closed));
        assert!(!contains_point(&r, &pt(int(2), int(0)), Membership::Closed));
        assert!(!contains_point(&Region::default(), &corner, Membership::Closed));
    }

    #[test]
    fn union_examples() {
        let caps = Caps::default();
        let two = Region::new(vec![unit(), square(int(2), int(0), int(3), int(1))]);
        assert_eq!(union_area(&two, &caps).unwrap(), int(2));
        let same = Region::new(vec![unit(), unit()]);
        assert_eq!(union_area(&same, &caps).unwrap(), int(1));
        let shifted = Region::new(vec![unit(), square(rat(1, 2), int(0), rat(3, 2), int(1))]);
        assert_eq!(union_area(&shifted, &caps).unwrap(), rat(3, 2));
        assert_eq!(union_area(&Region::default(), &caps).unwrap(), int(0));
    }

    #[test]
    fn union_in_rect_examples() {
        let caps = Caps::default();
        let r = Region::new(vec![unit()]);
        let far = Rect::new(int(3), int(3), int(4), int(4));
        assert_eq!(union_area_in_rect(&r, &far, &caps).unwrap(), int(0));
        let q = Rect::new(int(0), int(0), rat(1, 2), rat(1, 2));
        assert_eq!(union_area_in_rect(&r, &q, &caps).unwrap(), rat(1, 4));
    }

    #[test]
    fn vertex_cap() {
        let caps = Caps { max_vertices: 7, ..Caps::default() };
        let two = Region::new(vec![unit(), unit()]);
        assert!(union_area(&two, &caps).unwrap_err().is_cap());
    }
}
