//! Vertical-slab sweep for the area of a union of convex polygons.
//!
//! The x-axis is first cut at every vertex abscissa. Inside such a slab each
//! polygon that spans it is a vertical interval `[lo(x), hi(x)]` with affine
//! endpoints, so the union length is piecewise linear in `x`; its kinks sit
//! at crossings of endpoint lines. Rather than enumerating every pairwise
//! crossing up front, slabs are split lazily:
//!
//! For a slab `[a, b]` with midpoint `m`, intervals are grouped into
//! connected components at `m`. Adjacent components whose separation does not
//! hold at both `a` and `b` are merged into one cluster. A cluster made of a
//! single component is *certified* when every member, taken in `lo(m)` order,
//! keeps touching the members before it at both ends (see [`certify`]).
//!
//! Those checks compare affine functions, so holding at both ends means
//! holding on the whole slab. The cluster's union is then exactly
//! `[min lo(x), max hi(x)]`, integrated through the upper and lower envelopes
//! of its endpoint lines. Any failed check names two lines whose order differs
//! between `m` and one end; their crossing lies strictly inside the slab and
//! the cluster is re-examined on both sides of it. Split points are crossings
//! of the finitely many input lines, so the recursion terminates.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{ConvexPoly, Point};
use crate::numeric::{int, Rat};

/// The line `y = slope * x + intercept`.
#[derive(Clone, Debug)]
struct RatLine {
    slope: Rat,
    intercept: Rat,
}

impl RatLine {
    fn through(a: &Point, b: &Point) -> RatLine {
        let slope = (&b.y - &a.y) / (&b.x - &a.x);
        let intercept = &a.y - &slope * &a.x;
        RatLine { slope, intercept }
    }
}

/// `y = (s x + c) / D` with a denominator `D` shared across one slab.
#[derive(Clone, Debug)]
struct IntLine {
    s: BigInt,
    c: BigInt,
    small: Option<(i64, i64)>,
}

impl IntLine {
    fn new(s: BigInt, c: BigInt) -> IntLine {
        let small = s.to_i64().zip(c.to_i64());
        IntLine { s, c, small }
    }

    /// Numerator of the value at `x = p / q`, over the common `D q`.
    fn key(&self, p: &BigInt, q: &BigInt) -> BigInt {
        &self.s * p + &self.c * q
    }

    fn negated(&self) -> IntLine {
        IntLine::new(-&self.s, -&self.c)
    }

    fn crossing(&self, other: &IntLine) -> Rat {
        Rat::new(&other.c - &self.c, &self.s - &other.s)
    }
}

#[derive(Clone, Debug)]
struct Interval {
    lo: IntLine,
    hi: IntLine,
}

#[derive(Clone, Copy, Debug)]
enum Side {
    Lo,
    Hi,
}

fn endpoint(ivs: &[Interval], id: u32, side: Side) -> &IntLine {
    let iv = &ivs[id as usize];
    match side {
        Side::Lo => &iv.lo,
        Side::Hi => &iv.hi,
    }
}

pub(super) fn union_area(polys: &[ConvexPoly]) -> Rat {
    let mut xs: Vec<Rat> = polys.iter().flat_map(|p| p.vertices().iter().map(|v| v.x.clone())).collect();
    xs.sort();
    xs.dedup();
    if xs.len() < 2 {
        return Rat::zero();
    }
    let nslabs = xs.len() - 1;

    let mut slabs: Vec<Vec<(RatLine, RatLine)>> = vec![Vec::new(); nslabs];
    for poly in polys {
        let lo_x = slab_index(&xs, &poly.bbox().x0);
        let hi_x = slab_index(&xs, &poly.bbox().x1);
        let span = hi_x - lo_x;
        let mut lower: Vec<Option<RatLine>> = vec![None; span];
        let mut upper: Vec<Option<RatLine>> = vec![None; span];
        for (a, b) in poly.edges() {
            if a.x == b.x {
                continue;
            }
            // counter-clockwise: rightward edges bound from below
            let (left, right, target) =
                if a.x < b.x { (a, b, &mut lower) } else { (b, a, &mut upper) };
            let line = RatLine::through(left, right);
            for s in slab_index(&xs, &left.x)..slab_index(&xs, &right.x) {
                target[s - lo_x] = Some(line.clone());
            }
        }
        for (i, (l, u)) in lower.into_iter().zip(upper).enumerate() {
            let (l, u) = (l.expect("lower chain covers span"), u.expect("upper chain covers span"));
            slabs[lo_x + i].push((l, u));
        }
    }

    let parts: Vec<Rat> = slabs
        .into_par_iter()
        .enumerate()
        .map(|(s, lines)| integrate_slab(&xs[s], &xs[s + 1], lines))
        .collect();
    sum_balanced(parts)
}

fn slab_index(xs: &[Rat], x: &Rat) -> usize {
    xs.binary_search(x).expect("abscissa is a breakpoint")
}

fn integrate_slab(x0: &Rat, x1: &Rat, lines: Vec<(RatLine, RatLine)>) -> Rat {
    if lines.is_empty() {
        return Rat::zero();
    }
    let denom = lines.iter().fold(BigInt::one(), |acc, (l, u)| {
        [&l.slope, &l.intercept, &u.slope, &u.intercept]
            .iter()
            .fold(acc, |acc, r| acc.lcm(r.denom()))
    });
    let to_int = |l: &RatLine| {
        IntLine::new(
            l.slope.numer() * (&denom / l.slope.denom()),
            l.intercept.numer() * (&denom / l.intercept.denom()),
        )
    };
    let ivs: Vec<Interval> =
        lines.iter().map(|(l, u)| Interval { lo: to_int(l), hi: to_int(u) }).collect();
    let all: Vec<u32> = (0..ivs.len() as u32).collect();
    certified_integral(x0, x1, &ivs, all, &denom)
}

/// Endpoint value numerator. All keys at one abscissa share a variant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Small(i128),
    Big(BigInt),
}

/// Values of every member's endpoints at one abscissa.
struct Keys {
    lo: Vec<Key>,
    hi: Vec<Key>,
}

fn keys_at(x: &Rat, ivs: &[Interval], members: &[u32]) -> Keys {
    let (p, q) = (x.numer(), x.denom());
    let small_x = p.to_i64().zip(q.to_i64());
    let all_small = small_x.is_some()
        && members.iter().all(|&i| ivs[i as usize].lo.small.is_some() && ivs[i as usize].hi.small.is_some());
    let key = |l: &IntLine| match (all_small, small_x, l.small) {
        // |s p| + |c q| < 2^127
        (true, Some((p, q)), Some((s, c))) => {
            Key::Small(i128::from(s) * i128::from(p) + i128::from(c) * i128::from(q))
        }
        _ => Key::Big(l.key(p, q)),
    };
    let (lo, hi) = members
        .iter()
        .map(|&i| {
            let iv = &ivs[i as usize];
            (key(&iv.lo), key(&iv.hi))
        })
        .unzip();
    Keys { lo, hi }
}

/// Running extremes over a set of member positions.
#[derive(Clone)]
struct Extremes {
    min_lo: [usize; 2],
    max_hi: [usize; 2],
}

impl Extremes {
    fn of(pos: usize) -> Self {
        Extremes { min_lo: [pos; 2], max_hi: [pos; 2] }
    }

    fn absorb(&mut self, other: &Extremes, ends: &[Keys; 2]) {
        for e in 0..2 {
            if ends[e].lo[other.min_lo[e]] < ends[e].lo[self.min_lo[e]] {
                self.min_lo[e] = other.min_lo[e];
            }
            if ends[e].hi[other.max_hi[e]] > ends[e].hi[self.max_hi[e]] {
                self.max_hi[e] = other.max_hi[e];
            }
        }
    }
}

struct Cluster {
    positions: Vec<usize>,
    ext: Extremes,
    split: Option<Rat>,
}

fn certified_integral(a: &Rat, b: &Rat, ivs: &[Interval], members: Vec<u32>, denom: &BigInt) -> Rat {
    let mut acc = FractionSum::default();
    let mut stack = vec![(a.clone(), b.clone(), members)];
    while let Some((a, b, members)) = stack.pop() {
        if a >= b || members.is_empty() {
            continue;
        }
        let m = (&a + &b) / int(2);
        let ends = [keys_at(&a, ivs, &members), keys_at(&b, ivs, &members)];
        let mid = keys_at(&m, ivs, &members);
        let split_at = |p: usize, sp: Side, q: usize, sq: Side| {
            let x = endpoint(ivs, members[p], sp).crossing(endpoint(ivs, members[q], sq));
            debug_assert!(a < x && x < b, "split point must lie inside the slab");
            if a < x && x < b {
                x
            } else {
                m.clone()
            }
        };

        let mut order: Vec<usize> = (0..members.len()).collect();
        order.sort_by(|&i, &j| mid.lo[i].cmp(&mid.lo[j]).then_with(|| mid.hi[i].cmp(&mid.hi[j])));

        let mut clusters: Vec<Cluster> = Vec::new();
        let mut reach: Option<&Key> = None;
        let mut comp: Vec<usize> = Vec::new();
        let mut comp_ext = Extremes::of(order[0]);
        // Adjacent clusters must stay apart on the whole slab: the lowest lo
        // of the upper one minus the highest hi of the lower one is concave,
        // so a gap at both ends is a gap throughout. A merge changes the
        // extremes of the merged cluster, so the check cascades downwards.
        let flush = |comp: Vec<usize>, ext: Extremes, clusters: &mut Vec<Cluster>| {
            clusters.push(Cluster { positions: comp, ext, split: None });
            while clusters.len() >= 2 {
                let upper = &clusters[clusters.len() - 1];
                let lower = &clusters[clusters.len() - 2];
                let overlaps_at =
                    |e: usize| ends[e].hi[lower.ext.max_hi[e]] > ends[e].lo[upper.ext.min_lo[e]];
                let Some(e) = (0..2).find(|&e| overlaps_at(e)) else { break };
                let split = lower
                    .split
                    .clone()
                    .or_else(|| upper.split.clone())
                    .unwrap_or_else(|| split_at(lower.ext.max_hi[e], Side::Hi, upper.ext.min_lo[e], Side::Lo));
                let upper = clusters.pop().expect("two clusters");
                let lower = clusters.last_mut().expect("two clusters");
                lower.split = Some(split);
                lower.ext.absorb(&upper.ext, &ends);
                lower.positions.extend(upper.positions);
            }
        };
        for &pos in &order {
            let starts_new = reach.is_some_and(|r| &mid.lo[pos] > r);
            if starts_new {
                flush(std::mem::take(&mut comp), comp_ext.clone(), &mut clusters);
                comp_ext = Extremes::of(pos);
                reach = None;
            }
            comp_ext.absorb(&Extremes::of(pos), &ends);
            if reach.is_none_or(|r| &mid.hi[pos] > r) {
                reach = Some(&mid.hi[pos]);
            }
            comp.push(pos);
        }
        flush(comp, comp_ext, &mut clusters);

        for cluster in clusters {
            let split = cluster.split.clone().or_else(|| certify(&cluster, &ends, &mid, &split_at));
            let ids: Vec<u32> = cluster.positions.iter().map(|&p| members[p]).collect();
            match split {
                Some(x) => {
                    stack.push((a.clone(), x.clone(), ids.clone()));
                    stack.push((x, b.clone(), ids));
                }
                None => {
                    let his = ids.iter().map(|&i| ivs[i as usize].hi.clone()).collect();
                    let neg_los = ids.iter().map(|&i| ivs[i as usize].lo.negated()).collect();
                    add_upper_envelope_integral(his, &a, &b, &mut acc);
                    add_upper_envelope_integral(neg_los, &a, &b, &mut acc);
                }
            }
        }
    }
    acc.total() / Rat::from_integer(denom.clone())
}

/// Checks that a single-component cluster stays connected on the whole slab.
///
/// Members are visited in order of `lo` at the midpoint. By induction the
/// members seen so far cover one interval `[L(x), R(x)]`; the next member
/// joins it wherever its `lo` stays below the `hi` of some earlier member and
/// its `hi` stays above the `lo` of some earlier member. Each such comparison
/// is between affine functions, so checking both ends suffices. Returns a
/// split abscissa on failure.
fn certify(
    cluster: &Cluster,
    ends: &[Keys; 2],
    mid: &Keys,
    split_at: &impl Fn(usize, Side, usize, Side) -> Rat,
) -> Option<Rat> {
    let first = cluster.positions[0];
    let mut best_mid = first;
    let mut best_hi = [first, first];
    let mut best_lo = [first, first];
    for &p in &cluster.positions[1..] {
        let under = |j: usize| (0..2).all(|e| ends[e].lo[p] <= ends[e].hi[j]);
        if ![best_mid, best_hi[0], best_hi[1]].into_iter().any(under) {
            // lo(p) <= hi(best_mid) at the midpoint, not at one end
            return Some(split_at(p, Side::Lo, best_mid, Side::Hi));
        }
        let over = |i: usize| (0..2).all(|e| ends[e].hi[p] >= ends[e].lo[i]);
        if ![first, best_lo[0], best_lo[1]].into_iter().any(over) {
            // hi(p) >= lo(p) >= lo(first) at the midpoint, not at one end
            return Some(split_at(p, Side::Hi, first, Side::Lo));
        }
        if mid.hi[p] > mid.hi[best_mid] {
            best_mid = p;
        }
        for e in 0..2 {
            if ends[e].hi[p] > ends[e].hi[best_hi[e]] {
                best_hi[e] = p;
            }
            if ends[e].lo[p] < ends[e].lo[best_lo[e]] {
                best_lo[e] = p;
            }
        }
    }
    None
}

/// Exact sum of fractions, kept as one numerator per distinct denominator.
#[derive(Default)]
struct FractionSum(HashMap<BigInt, BigInt>);

impl FractionSum {
    fn add(&mut self, num: BigInt, den: BigInt) {
        if !num.is_zero() {
            *self.0.entry(den).or_default() += num;
        }
    }

    fn total(self) -> Rat {
        sum_balanced(self.0.into_iter().map(|(d, n)| Rat::new(n, d)).collect())
    }
}

/// Adds `integral_a^b max_i (s_i x + c_i) dx` to `acc`.
///
/// With `F(x) = s x^2 / 2 + c x` per line and hull lines `t..=u` active on
/// `[a, b]`, the integral is `F_u(b) - F_t(a)` plus, at each breakpoint
/// between consecutive hull lines, `(F_i - F_{i+1})(x_i) = dc^2 / (2 ds)`
/// where `dc`, `ds > 0` are their intercept and slope differences.
fn add_upper_envelope_integral(mut lines: Vec<IntLine>, a: &Rat, b: &Rat, acc: &mut FractionSum) {
    lines.sort_by(|l, r| l.s.cmp(&r.s).then_with(|| l.c.cmp(&r.c)));
    // equal slopes: the last one has the largest intercept
    let mut dedup: Vec<IntLine> = Vec::with_capacity(lines.len());
    for l in lines {
        if dedup.last().is_some_and(|d| d.s == l.s) {
            dedup.pop();
        }
        dedup.push(l);
    }
    // l2 is hidden by l1 and l3 when crossing(l1, l3) <= crossing(l1, l2)
    let hidden = |l1: &IntLine, l2: &IntLine, l3: &IntLine| {
        (&l1.c - &l3.c) * (&l2.s - &l1.s) <= (&l1.c - &l2.c) * (&l3.s - &l1.s)
    };
    let mut hull: Vec<IntLine> = Vec::with_capacity(dedup.len());
    for l in dedup {
        while hull.len() >= 2 && hidden(&hull[hull.len() - 2], &hull[hull.len() - 1], &l) {
            hull.pop();
        }
        hull.push(l);
    }
    // breakpoint i lies right of p / q iff (c_i - c_{i+1}) q > p (s_{i+1} - s_i)
    let right_of = |i: usize, x: &Rat, strict: bool| {
        let lhs = (&hull[i].c - &hull[i + 1].c) * x.denom();
        let rhs = x.numer() * (&hull[i + 1].s - &hull[i].s);
        if strict {
            lhs > rhs
        } else {
            lhs >= rhs
        }
    };
    let last = hull.len() - 1;
    let first_active = (0..last).find(|&i| right_of(i, a, true)).unwrap_or(last);
    let last_active = (first_active..last).find(|&i| right_of(i, b, false)).unwrap_or(last);

    let mut antiderivative = |l: &IntLine, x: &Rat, sign: i8| {
        let (p, q) = (x.numer(), x.denom());
        let num = &l.s * p * p + BigInt::from(2) * &l.c * p * q;
        acc.add(if sign > 0 { num } else { -num }, BigInt::from(2) * q * q);
    };
    antiderivative(&hull[last_active], b, 1);
    antiderivative(&hull[first_active], a, -1);
    for i in first_active..last_active {
        let dc = &hull[i].c - &hull[i + 1].c;
        let ds = &hull[i + 1].s - &hull[i].s;
        acc.add(&dc * &dc, BigInt::from(2) * ds);
    }
}

/// Pairwise summation; keeps operand sizes balanced when denominators vary.
fn sum_balanced(mut parts: Vec<Rat>) -> Rat {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(x) = it.next() {
            next.push(match it.next() {
                Some(y) => x + y,
                None => x,
            });
        }
        parts = next;
    }
    parts.pop().unwrap_or_else(Rat::zero)
}
