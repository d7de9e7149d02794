//! Intercept functions `b_k`, the line families `F_k`, and their tube
//! neighbourhoods restricted to vertical strips.
//!
//! `b_k(a) = sum_{n=1}^k (x_{n-1} - x_n) (a - 2^-n floor(2^n a))` and
//! `F_k` is the union of the `2^k` lines `y = a x + b_k(a)` with
//! `a` in `2^-k Z` inside `[0, 1)`. The precursor region for `(m, xhat)` is the
//! open l-infinity `delta`-neighbourhood, `delta = 2^(1-m-k)`, of `F_k`
//! restricted to the strip `[xhat, xhat + 2^-m)`, where `k` is the index of
//! `xhat` inside block `X_m`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::measure::{ConvexPoly, Point, Rect, Region};
use crate::numeric::{floor_rat, int, pow2, Dyadic, Rat};
use crate::sequence::{index_of, step_differences, SeqIndex};

/// The line of slope `slope` and y-intercept `intercept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub slope: Dyadic,
    pub intercept: Rat,
}

impl Line {
    pub fn y_at(&self, x: &Rat) -> Rat {
        self.slope.to_rat() * x + &self.intercept
    }
}

fn check_terms(k: u64, caps: &Caps) -> Result<usize> {
    if k > caps.max_block_len {
        return Err(Error::CapExceeded {
            what: "intercept sum",
            requested: format!("{k} terms"),
            cap: caps.max_block_len.to_string(),
        });
    }
    Ok(k as usize)
}

fn check_unit_interval(a: &Rat) -> Result<()> {
    if a.is_negative() || a > &int(1) {
        return Err(Error::OutOfRange(format!("slope {a} outside [0, 1]")));
    }
    Ok(())
}

/// `sum_n diffs[n-1] * (a - 2^-n floor(2^n a))` for a dyadic `a`. Terms with
/// `n >= exponent(a)` vanish and are skipped.
fn intercept_sum(diffs: &[Dyadic], a: &Dyadic) -> Dyadic {
    let e = a.exponent();
    let last = diffs.len().min(e.saturating_sub(1) as usize);
    let mut acc = Dyadic::zero();
    for n in 1..=last {
        let modulus = BigInt::one() << (e as usize - n);
        let saw = Dyadic::new(a.mantissa().mod_floor(&modulus), e);
        acc = &acc + &(&diffs[n - 1] * &saw);
    }
    acc
}

/// `b_k(a)` for any rational `a` in `[0, 1]`.
pub fn b_k(k: u64, a: &Rat, caps: &Caps) -> Result<Rat> {
    check_unit_interval(a)?;
    let terms = check_terms(k, caps)?;
    if let Some(d) = Dyadic::from_rat(a) {
        let needed = terms.min(d.exponent().saturating_sub(1) as usize);
        return Ok(intercept_sum(&step_differences(needed), &d).to_rat());
    }
    let diffs = step_differences(terms);
    let mut acc = Rat::zero();
    for (n, d) in diffs.iter().enumerate() {
        let scale = pow2(n as i64 + 1);
        let saw = a - Rat::from_integer(floor_rat(&(a * &scale))) / &scale;
        acc += d.to_rat() * saw;
    }
    Ok(acc)
}

/// `b(a)` for dyadic `a`: the infinite sum terminates at `n = exponent(a)`.
pub fn b_exact(a: &Dyadic, caps: &Caps) -> Result<Rat> {
    check_unit_interval(&a.to_rat())?;
    b_k(u64::from(a.exponent()), &a.to_rat(), caps)
}

/// The `2^k` lines of `F_k`, ordered by slope.
pub fn lines_of_fk(k: u64, caps: &Caps) -> Result<Vec<Line>> {
    let count = if k < 64 { 1u64 << k } else { u64::MAX };
    if k >= 64 || count > caps.max_lines {
        return Err(Error::CapExceeded {
            what: "line family",
            requested: format!("2^{k} lines"),
            cap: caps.max_lines.to_string(),
        });
    }
    let diffs = step_differences(k as usize);
    let k32 = k as u32;
    Ok((0..count)
        .into_par_iter()
        .map(|q| {
            let slope = Dyadic::new(q, k32);
            let intercept = intercept_sum(&diffs, &slope).to_rat();
            Line { slope, intercept }
        })
        .collect())
}

/// Closure of the l-infinity `delta`-neighbourhood of the segment of `line`
/// over `[x_lo, x_hi]`: a hexagon for positive slope, a rectangle for slope 0.
pub fn tube_hexagon(line: &Line, delta: &Rat, x_lo: &Rat, x_hi: &Rat) -> ConvexPoly {
    assert!(x_lo < x_hi && delta.is_positive() && !line.slope.is_negative());
    let p0 = Point::new(x_lo.clone(), line.y_at(x_lo));
    let p1 = Point::new(x_hi.clone(), line.y_at(x_hi));
    let corner = |p: &Point, sx: i8, sy: i8| {
        let off = |s: i8| if s > 0 { delta.clone() } else { -delta.clone() };
        p.translated(&off(sx), &off(sy))
    };
    let vertices = vec![
        corner(&p0, -1, -1),
        corner(&p0, 1, -1),
        corner(&p1, 1, -1),
        corner(&p1, 1, 1),
        corner(&p1, -1, 1),
        corner(&p0, -1, 1),
    ];
    ConvexPoly::new(vertices).expect("tube of a non-degenerate segment is convex")
}

/// Parameters of one precursor region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecursorSpec {
    pub m: u32,
    pub xhat: Dyadic,
    /// Line family index. Equals `index.k` in coupled mode.
    pub k: u64,
    /// Position of `xhat` in block `X_m`; `None` in decoupled mode.
    pub index: Option<SeqIndex>,
    pub delta: Dyadic,
}

fn tube_width(m: u32, k: u64) -> Result<Dyadic> {
    let e = u64::from(m) + k;
    if e == 0 {
        return Ok(Dyadic::from_int(2));
    }
    let e = u32::try_from(e - 1)
        .map_err(|_| Error::OutOfRange(format!("tube width exponent {e} too large")))?;
    Ok(Dyadic::pow2_neg(e))
}

fn check_xhat(m: u32, xhat: &Dyadic) -> Result<()> {
    if !xhat.is_n_dyadic(m) {
        return Err(Error::NotDyadic(format!("{xhat} (needs {m}-dyadic)")));
    }
    let bound = Dyadic::from_int(i64::from(m));
    if xhat > &bound || xhat < &-&bound {
        return Err(Error::OutOfRange(format!("{xhat} outside [-{m}, {m}]")));
    }
    Ok(())
}

impl PrecursorSpec {
    /// `k` resolved from `xhat = x_k` in block `X_m`.
    pub fn coupled(m: u32, xhat: Dyadic) -> Result<Self> {
        check_xhat(m, &xhat)?;
        let index = index_of(m, &xhat)?;
        let delta = tube_width(m, index.k)?;
        Ok(PrecursorSpec { m, xhat, k: index.k, index: Some(index), delta })
    }

    /// Arbitrary `k`, keeping `delta = 2^(1-m-k)`.
    pub fn decoupled(m: u32, xhat: Dyadic, k: u64) -> Result<Self> {
        check_xhat(m, &xhat)?;
        let delta = tube_width(m, k)?;
        Ok(PrecursorSpec { m, xhat, k, index: None, delta })
    }

    /// Coupled when `2^k` fits under `k_cap`, otherwise decoupled at
    /// `k = k_cap`.
    pub fn coupled_or_clamped(m: u32, xhat: Dyadic, k_cap: Option<u64>) -> Result<Self> {
        let spec = PrecursorSpec::coupled(m, xhat)?;
        match k_cap {
            Some(cap) if spec.k > cap => PrecursorSpec::decoupled(m, spec.xhat, cap),
            _ => Ok(spec),
        }
    }

    pub fn is_coupled(&self) -> bool {
        self.index.is_some()
    }

    pub fn strip(&self) -> (Rat, Rat) {
        let lo = self.xhat.to_rat();
        let hi = &lo + pow2(-i64::from(self.m));
        (lo, hi)
    }

    pub fn line_count(&self) -> Option<u64> {
        (self.k < 64).then(|| 1u64 << self.k)
    }
}

/// The tube union over the precursor's strip: one polygon per line of `F_k`.
pub fn precursor_region(spec: &PrecursorSpec, caps: &Caps) -> Result<Region> {
    let lines = lines_of_fk(spec.k, caps)?;
    let (lo, hi) = spec.strip();
    let delta = spec.delta.to_rat();
    Ok(Region::new(lines.par_iter().map(|l| tube_hexagon(l, &delta, &lo, &hi)).collect()))
}

/// The precursor translated by `(-floor(xhat), -j)` and cut to the unit square.
pub fn translated_piece(spec: &PrecursorSpec, j: i64, caps: &Caps) -> Result<Region> {
    Ok(piece_of(&precursor_region(spec, caps)?, spec, j))
}

/// As [`translated_piece`], from an already built precursor region.
pub fn piece_of(region: &Region, spec: &PrecursorSpec, j: i64) -> Region {
    let dx = -Rat::from_integer(spec.xhat.floor());
    let dy = -int(j);
    region.translated(&dx, &dy).clipped(&Rect::unit())
}

/// A planar point reduced into `[0, 1)^2` together with the integer shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedPoint {
    pub point01: Point,
    pub i: i64,
    pub j: i64,
}

pub fn fold_point(x: &Rat, y: &Rat) -> FoldedPoint {
    let fi = floor_rat(x);
    let fj = floor_rat(y);
    let point01 = Point::new(x - Rat::from_integer(fi.clone()), y - Rat::from_integer(fj.clone()));
    FoldedPoint {
        point01,
        i: fi.to_i64().expect("integer part fits in i64"),
        j: fj.to_i64().expect("integer part fits in i64"),
    }
}
