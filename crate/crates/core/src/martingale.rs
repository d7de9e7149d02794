//! Martingales on the dyadic squares of `[0, 1)^2` with exact rational values.
//!
//! A martingale `d` satisfies `d(Q) = (1/4) sum d(child)` over the four
//! children of every square. Three kinds are provided: the open set
//! martingale of a polygonal region, the average of the `2^m` open set
//! martingales of the translated precursor pieces over one unit column, and
//! the discounted sum of those averages truncated at a given level.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::caps::Caps;
use crate::construction::{piece_of, precursor_region, PrecursorSpec};
use crate::error::{Error, Result};
use crate::measure::{union_area, union_area_in_rect, Point, Rect, Region};
use crate::numeric::{floor_rat, fmt_rat, int, pow2, pow4, Dyadic, Rat};

/// Deepest supported square level; keeps `u`, `v` and `4^r` in range.
pub const MAX_SQUARE_LEVEL: u32 = 62;

/// `Q_r(u, v) = 2^-r ([u, u + 1) x [v, v + 1))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicSquare {
    pub r: u32,
    pub u: u64,
    pub v: u64,
}

impl DyadicSquare {
    pub fn new(r: u32, u: u64, v: u64) -> Result<Self> {
        if r > MAX_SQUARE_LEVEL {
            return Err(Error::OutOfRange(format!("square level {r} > {MAX_SQUARE_LEVEL}")));
        }
        if u >> r != 0 || v >> r != 0 {
            return Err(Error::OutOfRange(format!("square ({r}, {u}, {v}) outside the unit square")));
        }
        Ok(DyadicSquare { r, u, v })
    }

    pub fn root() -> Self {
        DyadicSquare { r: 0, u: 0, v: 0 }
    }

    /// Children in the order `(0,0), (1,0), (0,1), (1,1)` of `(alpha, beta)`.
    pub fn children(&self) -> [DyadicSquare; 4] {
        assert!(self.r < MAX_SQUARE_LEVEL, "children beyond the deepest level");
        let (r, u, v) = (self.r + 1, 2 * self.u, 2 * self.v);
        [
            DyadicSquare { r, u, v },
            DyadicSquare { r, u: u + 1, v },
            DyadicSquare { r, u, v: v + 1 },
            DyadicSquare { r, u: u + 1, v: v + 1 },
        ]
    }

    /// The closed square; boundaries are null sets for every area query.
    pub fn rect(&self) -> Rect {
        let side = pow2(-i64::from(self.r));
        let x0 = Rat::from_integer(self.u.into()) * &side;
        let y0 = Rat::from_integer(self.v.into()) * &side;
        Rect::new(x0.clone(), y0.clone(), x0 + &side, y0 + side)
    }

    /// The level-`r` square containing `pt`, using half-open cells.
    pub fn containing(pt: &Point, r: u32) -> Result<Self> {
        let unit = int(1);
        let inside = |c: &Rat| !c.is_negative() && c < &unit;
        if !(inside(&pt.x) && inside(&pt.y)) {
            return Err(Error::OutOfRange(format!(
                "point ({}, {}) outside [0,1)^2",
                fmt_rat(&pt.x),
                fmt_rat(&pt.y)
            )));
        }
        if r > MAX_SQUARE_LEVEL {
            return Err(Error::OutOfRange(format!("square level {r} > {MAX_SQUARE_LEVEL}")));
        }
        let scale = pow2(i64::from(r));
        let cell = |c: &Rat| floor_rat(&(c * &scale)).to_u64().expect("cell index below 2^r");
        Ok(DyadicSquare { r, u: cell(&pt.x), v: cell(&pt.y) })
    }

    /// Every square of level `r`, row by row.
    pub fn all_at(r: u32) -> impl Iterator<Item = DyadicSquare> {
        assert!(r <= 31, "enumerating level {r} is not supported");
        let n = 1u64 << r;
        (0..n).flat_map(move |v| (0..n).map(move |u| DyadicSquare { r, u, v }))
    }
}

fn zigzag(i: i64) -> u128 {
    if i >= 0 {
        2 * i as u128
    } else {
        2 * (-(i as i128)) as u128 - 1
    }
}

fn unzigzag(z: u128) -> i64 {
    if z % 2 == 0 {
        (z / 2) as i64
    } else {
        -(((z + 1) / 2) as i64)
    }
}

/// Bijection `Z^2 -> N`: Cantor pairing of the zigzag images.
pub fn pair(i: i64, j: i64) -> u128 {
    let (x, y) = (zigzag(i), zigzag(j));
    (x + y) * (x + y + 1) / 2 + y
}

pub fn unpair(p: u128) -> (i64, i64) {
    let w = ((8 * p + 1).sqrt() - 1) / 2;
    let y = p - w * (w + 1) / 2;
    (unzigzag(w - y), unzigzag(y))
}

/// Anything evaluable on dyadic squares.
pub trait Martingale: Send + Sync {
    fn value(&self, q: &DyadicSquare) -> Result<Rat>;
}

/// `d_E(Q_r) = 4^r lambda(E & Q_r) / lambda(E)`, and 0 when `lambda(E) = 0`.
pub struct OpenSetMartingale {
    region: Region,
    total: Rat,
    caps: Caps,
    measures: Mutex<HashMap<DyadicSquare, Rat>>,
}

impl OpenSetMartingale {
    /// `region` is clipped to the unit square first.
    pub fn new(region: &Region, caps: &Caps) -> Result<Self> {
        let region = region.clipped(&Rect::unit());
        let total = union_area(&region, caps)?;
        Ok(OpenSetMartingale { region, total, caps: caps.clone(), measures: Mutex::default() })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    /// `lambda(E)` after clipping.
    pub fn total_measure(&self) -> &Rat {
        &self.total
    }

    /// `lambda(E & Q)`, memoized per square.
    pub fn measure_in(&self, q: &DyadicSquare) -> Result<Rat> {
        if let Some(v) = self.measures.lock().expect("cache lock").get(q) {
            return Ok(v.clone());
        }
        let v = if self.total.is_zero() {
            Rat::zero()
        } else {
            union_area_in_rect(&self.region, &q.rect(), &self.caps)?
        };
        self.measures.lock().expect("cache lock").insert(*q, v.clone());
        Ok(v)
    }
}

impl Martingale for OpenSetMartingale {
    fn value(&self, q: &DyadicSquare) -> Result<Rat> {
        if self.total.is_zero() {
            return Ok(Rat::zero());
        }
        Ok(pow4(q.r) * self.measure_in(q)? / &self.total)
    }
}

/// The open set martingale by its top-down recursion: initial capital 0 or
/// 1, then each child receives `4 d(parent) lambda(E & child) / lambda(E & parent)`
/// unless the parent's value is 0. `measure` returns `lambda(E & Q)`.
pub fn osm_recursive(q: &DyadicSquare, measure: impl Fn(&DyadicSquare) -> Rat) -> Rat {
    let root = DyadicSquare::root();
    let mut value = if measure(&root).is_zero() { Rat::zero() } else { Rat::one() };
    let mut parent = root;
    for level in 1..=q.r {
        let shift = q.r - level;
        let child = DyadicSquare { r: level, u: q.u >> shift, v: q.v >> shift };
        if !value.is_zero() {
            value = int(4) * value * measure(&child) / measure(&parent);
        }
        parent = child;
    }
    value
}

/// `d_{m,i,j}`: the mean of the open set martingales of the pieces
/// `F~_{m, xhat, j}` for `xhat` in `2^-m Z & [i, i + 1)`.
pub struct AveragedMartingale {
    pub m: u32,
    pub i: i64,
    pub j: i64,
    pieces: Vec<(PrecursorSpec, OpenSetMartingale)>,
}

impl AveragedMartingale {
    /// Pieces whose coupled `k` exceeds `k_cap` are built at `k = k_cap`.
    pub fn new(m: u32, i: i64, j: i64, k_cap: Option<u64>, caps: &Caps) -> Result<Self> {
        if m > 30 {
            return Err(Error::OutOfRange(format!("averaging level {m} too large")));
        }
        let base = BigInt::from(i) << m;
        let specs: Vec<PrecursorSpec> = (0..1u64 << m)
            .map(|t| PrecursorSpec::coupled_or_clamped(m, Dyadic::new(&base + t, m), k_cap))
            .collect::<Result<_>>()?;
        let pieces = specs
            .into_par_iter()
            .map(|spec| {
                let region = precursor_region(&spec, caps)?;
                let osm = OpenSetMartingale::new(&piece_of(&region, &spec, j), caps)?;
                Ok((spec, osm))
            })
            .collect::<Result<_>>()?;
        Ok(AveragedMartingale { m, i, j, pieces })
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&PrecursorSpec, &OpenSetMartingale)> {
        self.pieces.iter().map(|(s, o)| (s, o))
    }

    /// True when every piece uses its coupled `k`.
    pub fn is_coupled(&self) -> bool {
        self.pieces.iter().all(|(s, _)| s.is_coupled())
    }
}

impl Martingale for AveragedMartingale {
    fn value(&self, q: &DyadicSquare) -> Result<Rat> {
        let values: Vec<Rat> = self.pieces.par_iter().map(|(_, osm)| osm.value(q)).collect::<Result<_>>()?;
        Ok(values.into_iter().sum::<Rat>() * pow2(-i64::from(self.m)))
    }
}

/// One term `2^(-m - pi(i,j)) d_{m,i,j}` of the master sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight {
    pub m: u32,
    pub i: i64,
    pub j: i64,
    pub pi: u128,
    pub weight: Rat,
}

/// All `(m, i, j)` with `1 <= m <= m_max` and `pi(i, j) < m`, ordered by `m`
/// then `pi`.
pub fn weight_table(m_max: u32) -> Vec<Weight> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        for p in 0..u128::from(m) {
            let (i, j) = unpair(p);
            out.push(Weight { m, i, j, pi: p, weight: pow2(-i64::from(m) - p as i64) });
        }
    }
    out
}

/// Value of one master-sum term at a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerValue {
    pub term: Weight,
    pub averaged: Rat,
    pub coupled: bool,
}

/// The master sum truncated after layer `m_max`.
pub struct MasterMartingale {
    pub m_max: u32,
    layers: Vec<(Weight, AveragedMartingale)>,
}

impl MasterMartingale {
    pub fn new(m_max: u32, k_cap: Option<u64>, caps: &Caps) -> Result<Self> {
        let layers = weight_table(m_max)
            .into_iter()
            .map(|w| {
                let avg = AveragedMartingale::new(w.m, w.i, w.j, k_cap, caps)?;
                Ok((w, avg))
            })
            .collect::<Result<_>>()?;
        Ok(MasterMartingale { m_max, layers })
    }

    pub fn layer_values(&self, q: &DyadicSquare) -> Result<Vec<LayerValue>> {
        self.layers
            .iter()
            .map(|(w, avg)| {
                Ok(LayerValue { term: w.clone(), averaged: avg.value(q)?, coupled: avg.is_coupled() })
            })
            .collect()
    }

    /// `4^r sum_{m > m_max} 2^(1-m) = 4^r 2^(1 - m_max)`: bounds the omitted
    /// layers since each averaged martingale is at most `4^r` and the
    /// weights of one layer sum to less than `2^(1-m)`.
    pub fn tail_bound(&self, q: &DyadicSquare) -> Rat {
        tail_bound(q.r, self.m_max)
    }
}

pub fn tail_bound(r: u32, m_max: u32) -> Rat {
    pow4(r) * pow2(1 - i64::from(m_max))
}

impl Martingale for MasterMartingale {
    fn value(&self, q: &DyadicSquare) -> Result<Rat> {
        Ok(self.layer_values(q)?.into_iter().map(|l| l.term.weight * l.averaged).sum())
    }
}

/// Description of a martingale to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MartingaleSpec {
    OpenSet(Region),
    Averaged { m: u32, i: i64, j: i64, k_cap: Option<u64> },
    MasterTruncated { m_max: u32, k_cap: Option<u64> },
}

impl MartingaleSpec {
    pub fn build(&self, caps: &Caps) -> Result<Box<dyn Martingale>> {
        Ok(match self {
            MartingaleSpec::OpenSet(region) => Box::new(OpenSetMartingale::new(region, caps)?),
            MartingaleSpec::Averaged { m, i, j, k_cap } => {
                Box::new(AveragedMartingale::new(*m, *i, *j, *k_cap, caps)?)
            }
            MartingaleSpec::MasterTruncated { m_max, k_cap } => {
                Box::new(MasterMartingale::new(*m_max, *k_cap, caps)?)
            }
        })
    }

    pub fn describe(&self) -> String {
        let cap = |k: &Option<u64>| k.map(|k| format!(", k_cap={k}")).unwrap_or_default();
        match self {
            MartingaleSpec::OpenSet(r) => format!("OpenSet({} polygons)", r.polys.len()),
            MartingaleSpec::Averaged { m, i, j, k_cap } => format!("Averaged(m={m}, i={i}, j={j}{})", cap(k_cap)),
            MartingaleSpec::MasterTruncated { m_max, k_cap } => {
                format!("MasterTruncated(m_max={m_max}{})", cap(k_cap))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub r: u32,
    pub square: DyadicSquare,
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub point: Point,
    pub records: Vec<TraceRecord>,
    /// Set when evaluation stopped early on a cap.
    pub truncated: Option<Error>,
}

impl Trace {
    /// Smallest `r0` such that every record from `r0` on equals `target`.
    pub fn stabilization_index(&self, target: &Rat) -> Option<u32> {
        self.settled_from(|v| v == target)
    }

    /// Smallest `r0` such that every record from `r0` on is at least `floor`.
    pub fn threshold_index(&self, floor: &Rat) -> Option<u32> {
        self.settled_from(|v| v >= floor)
    }

    fn settled_from(&self, holds: impl Fn(&Rat) -> bool) -> Option<u32> {
        let mut first = None;
        for rec in self.records.iter().rev() {
            if !holds(&rec.value) {
                break;
            }
            first = Some(rec.r);
        }
        first
    }
}

/// Values of `d` on the squares containing `pt` at levels `0..=r_max`.
pub fn trace(d: &dyn Martingale, pt: &Point, r_max: u32) -> Result<Trace> {
    let mut records = Vec::new();
    let mut truncated = None;
    for r in 0..=r_max {
        let square = DyadicSquare::containing(pt, r)?;
        match d.value(&square) {
            Ok(value) => records.push(TraceRecord { r, square, value }),
            Err(e) if e.is_cap() => {
                truncated = Some(e);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Trace { point: pt.clone(), records, truncated })
}

/// A square where `d(Q)` differs from the mean over its children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFailure {
    pub square: DyadicSquare,
    pub value: Rat,
    pub children_mean: Rat,
}

/// A square where `d(Q) > 4^r d(Q_0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthFailure {
    pub square: DyadicSquare,
    pub value: Rat,
    pub bound: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub r_max: u32,
    pub initial_capital: Rat,
    /// Squares with `r < r_max` whose children were compared.
    pub parents_checked: usize,
    /// Squares with `r <= r_max` compared against the growth bound.
    pub squares_bounded: usize,
    pub identity_failures: Vec<IdentityFailure>,
    pub growth_failures: Vec<GrowthFailure>,
    /// Largest `d(Q) / (4^r d(Q_0))` over all squares; at most 1 exactly
    /// when the growth bound holds. `None` if `d(Q_0) = 0`.
    pub max_growth: Option<Rat>,
}

impl IdentityReport {
    pub fn identity_holds(&self) -> bool {
        self.identity_failures.is_empty()
    }

    pub fn growth_holds(&self) -> bool {
        self.growth_failures.is_empty()
    }
}

/// Evaluates `d` on every square with `r <= r_max` and checks the averaging
/// identity on all squares with `r < r_max` and the growth bound on all.
pub fn verify_martingale_identity(d: &dyn Martingale, r_max: u32) -> Result<IdentityReport> {
    if r_max > 10 {
        return Err(Error::CapExceeded {
            what: "identity check",
            requested: format!("levels up to {r_max}"),
            cap: "10".into(),
        });
    }
    let mut levels: Vec<Vec<Rat>> = Vec::new();
    for r in 0..=r_max {
        let squares: Vec<DyadicSquare> = DyadicSquare::all_at(r).collect();
        levels.push(squares.par_iter().map(|q| d.value(q)).collect::<Result<_>>()?);
    }
    let at = |q: &DyadicSquare| &levels[q.r as usize][(q.v * (1u64 << q.r) + q.u) as usize];
    let initial = levels[0][0].clone();

    let mut identity_failures = Vec::new();
    let mut parents_checked = 0;
    for r in 0..r_max {
        for q in DyadicSquare::all_at(r) {
            parents_checked += 1;
            let mean = q.children().iter().map(|c| at(c).clone()).sum::<Rat>() / int(4);
            if &mean != at(&q) {
                identity_failures.push(IdentityFailure { square: q, value: at(&q).clone(), children_mean: mean });
            }
        }
    }

    let mut growth_failures = Vec::new();
    let mut squares_bounded = 0;
    let mut max_growth: Option<Rat> = None;
    for r in 0..=r_max {
        let bound = pow4(r) * &initial;
        for q in DyadicSquare::all_at(r) {
            squares_bounded += 1;
            let v = at(&q);
            if v > &bound {
                growth_failures.push(GrowthFailure { square: q, value: v.clone(), bound: bound.clone() });
            }
            if !initial.is_zero() {
                let ratio = v / &bound;
                if max_growth.as_ref().is_none_or(|m| &ratio > m) {
                    max_growth = Some(ratio);
                }
            }
        }
    }
    Ok(IdentityReport {
        r_max,
        initial_capital: initial,
        parents_checked,
        squares_bounded,
        identity_failures,
        growth_failures,
        max_growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;
    use proptest::prelude::*;

    fn quarter_square() -> Region {
        Region::new(vec![Rect::new(int(0), int(0), rat(1, 2), rat(1, 2)).to_poly().unwrap()])
    }

    fn sq(r: u32, u: u64, v: u64) -> DyadicSquare {
        DyadicSquare::new(r, u, v).unwrap()
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pair(0, 0), 0);
        assert_eq!(pair(-1, 0), 1);
        assert_eq!(pair(0, -1), 2);
        assert_eq!(pair(1, 0), 3);
        assert_eq!(unpair(2), (0, -1));
    }

    #[test]
    fn pairing_is_a_bijection_on_a_box() {
        let mut seen = std::collections::HashSet::new();
        for i in -20..=20 {
            for j in -20..=20 {
                let p = pair(i, j);
                assert_eq!(unpair(p), (i, j));
                assert!(seen.insert(p));
            }
        }
        for p in 0..5000u128 {
            let (i, j) = unpair(p);
            assert_eq!(pair(i, j), p);
        }
    }

    #[test]
    fn pair_weights_sum_below_two() {
        for big_m in 1..=64u32 {
            let s: Rat = (0..u128::from(big_m)).map(|p| pow2(-(p as i64))).sum();
            assert!(s < int(2));
        }
    }

    #[test]
    fn weight_table_layers() {
        let t = weight_table(3);
        let ids: Vec<(u32, i64, i64)> = t.iter().map(|w| (w.m, w.i, w.j)).collect();
        assert_eq!(ids, vec![(1, 0, 0), (2, 0, 0), (2, -1, 0), (3, 0, 0), (3, -1, 0), (3, 0, -1)]);
        assert_eq!(t[4].weight, rat(1, 16));
        assert!(weight_table(0).is_empty());
    }

    #[test]
    fn squares() {
        assert!(DyadicSquare::new(1, 2, 0).is_err());
        assert_eq!(sq(1, 1, 0).rect(), Rect::new(rat(1, 2), int(0), int(1), rat(1, 2)));
        let p = Point::new(rat(1, 2), rat(1, 4));
        assert_eq!(DyadicSquare::containing(&p, 1).unwrap(), sq(1, 1, 0));
        assert_eq!(DyadicSquare::containing(&p, 2).unwrap(), sq(2, 2, 1));
        assert!(DyadicSquare::containing(&Point::new(int(1), int(0)), 0).is_err());
        assert_eq!(DyadicSquare::all_at(2).count(), 16);
        assert_eq!(sq(0, 0, 0).children()[3], sq(1, 1, 1));
    }

    #[test]
    fn osm_examples() {
        let caps = Caps::default();
        let d = OpenSetMartingale::new(&quarter_square(), &caps).unwrap();
        assert_eq!(d.value(&sq(0, 0, 0)).unwrap(), int(1));
        assert_eq!(d.value(&sq(1, 0, 0)).unwrap(), int(4));
        assert_eq!(d.value(&sq(1, 1, 1)).unwrap(), int(0));
        assert_eq!(d.value(&sq(2, 0, 0)).unwrap(), int(4));
        let empty = OpenSetMartingale::new(&Region::default(), &caps).unwrap();
        assert_eq!(empty.value(&sq(0, 0, 0)).unwrap(), int(0));
    }

    #[test]
    fn osm_clips_on_entry() {
        let caps = Caps::default();
        let big = Region::new(vec![Rect::new(int(-1), int(-1), rat(1, 2), int(2)).to_poly().unwrap()]);
        let d = OpenSetMartingale::new(&big, &caps).unwrap();
        assert_eq!(d.total_measure(), &rat(1, 2));
        assert_eq!(d.value(&sq(1, 0, 1)).unwrap(), int(2));
    }

    #[test]
    fn identity_examples() {
        let caps = Caps::default();
        let unit = Region::new(vec![Rect::unit().to_poly().unwrap()]);
        let d = OpenSetMartingale::new(&unit, &caps).unwrap();
        let rep = verify_martingale_identity(&d, 3).unwrap();
        assert!(rep.identity_holds() && rep.growth_holds());
        assert_eq!(rep.max_growth, Some(int(1)));
        assert_eq!((rep.parents_checked, rep.squares_bounded), (21, 85));

        let d = OpenSetMartingale::new(&quarter_square(), &caps).unwrap();
        let rep = verify_martingale_identity(&d, 4).unwrap();
        assert!(rep.identity_holds() && rep.growth_holds());
        assert_eq!(rep.parents_checked, 85);
        // Q_1(0, 0) carries 4 = 4^1 d(Q_0): the bound is attained
        assert_eq!(rep.max_growth, Some(int(1)));
    }

    /// Not a martingale: the checker must say so.
    struct Level;
    impl Martingale for Level {
        fn value(&self, q: &DyadicSquare) -> Result<Rat> {
            Ok(int(i64::from(q.r)))
        }
    }

    #[test]
    fn identity_failures_are_reported() {
        let rep = verify_martingale_identity(&Level, 2).unwrap();
        assert_eq!(rep.identity_failures.len(), 5);
        assert_eq!(rep.max_growth, None);
    }

    #[test]
    fn averaged_examples() {
        let caps = Caps::default();
        let d = AveragedMartingale::new(1, 0, 0, None, &caps).unwrap();
        assert!(d.is_coupled());
        assert_eq!(d.value(&DyadicSquare::root()).unwrap(), int(1));
        let rep = verify_martingale_identity(&d, 3).unwrap();
        assert!(rep.identity_holds() && rep.growth_holds());
        // every piece is empty this far below the tubes
        let far = AveragedMartingale::new(1, 0, 40, None, &caps).unwrap();
        assert_eq!(far.value(&DyadicSquare::root()).unwrap(), int(0));
        // the column [1, 2) at m = 1 reaches beyond [-1, 1]
        assert!(AveragedMartingale::new(1, 1, 0, None, &caps).is_err());
    }

    #[test]
    fn master_examples() {
        let caps = Caps::default();
        let empty = MasterMartingale::new(0, Some(4), &caps).unwrap();
        assert_eq!(empty.value(&DyadicSquare::root()).unwrap(), int(0));
        let d = MasterMartingale::new(2, Some(4), &caps).unwrap();
        let v = d.value(&DyadicSquare::root()).unwrap();
        assert!(v <= int(4) && v.is_positive());
        for r in 0..4u32 {
            for t in 0..4u32 {
                assert_eq!(tail_bound(r, 2 * r + t + 1), pow2(-i64::from(t)));
            }
        }
        assert_eq!(d.tail_bound(&sq(1, 0, 0)), int(4) * pow2(-1));
    }

    #[test]
    fn trace_stabilizes_on_open_set() {
        let caps = Caps::default();
        let d = OpenSetMartingale::new(&quarter_square(), &caps).unwrap();
        let t = trace(&d, &Point::new(rat(1, 4), rat(1, 4)), 8).unwrap();
        assert_eq!(t.records.len(), 9);
        assert_eq!(t.stabilization_index(&int(4)), Some(1));
        let outside = trace(&d, &Point::new(rat(3, 4), rat(3, 4)), 4).unwrap();
        assert_eq!(outside.stabilization_index(&int(0)), Some(1));
        assert_eq!(outside.threshold_index(&int(1)), None);
    }

    #[test]
    fn closed_form_matches_recursion_exhaustively() {
        let caps = Caps::default();
        let region = Region::new(vec![
            Rect::new(rat(1, 3), rat(1, 5), rat(7, 8), rat(2, 3)).to_poly().unwrap(),
            Rect::new(rat(1, 10), rat(1, 2), rat(1, 2), rat(9, 10)).to_poly().unwrap(),
        ]);
        let d = OpenSetMartingale::new(&region, &caps).unwrap();
        for r in 0..=4 {
            for q in DyadicSquare::all_at(r) {
                let rec = osm_recursive(&q, |s| d.measure_in(s).unwrap());
                assert_eq!(d.value(&q).unwrap(), rec, "{q:?}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn pair_round_trips(i in -1_000_000i64..1_000_000, j in -1_000_000i64..1_000_000) {
            prop_assert_eq!(unpair(pair(i, j)), (i, j));
        }

        #[test]
        fn containing_square_holds_the_point(
            xn in 0i64..1000, yn in 0i64..1000, den in 1000i64..5000, r in 0u32..20,
        ) {
            let pt = Point::new(rat(xn, den), rat(yn, den));
            let q = DyadicSquare::containing(&pt, r).unwrap();
            let rect = q.rect();
            prop_assert!(rect.x0 <= pt.x && pt.x < rect.x1);
            prop_assert!(rect.y0 <= pt.y && pt.y < rect.y1);
        }
    }
}
