//! Open set martingale traces settling at `1 / lambda(E)` inside `E` and at
//! 0 away from its closure.

use kakeya_core::martingale::{trace, OpenSetMartingale, Trace};
use kakeya_core::measure::{contains_point, Membership, Point};
use kakeya_core::numeric::fmt_rat;
use kakeya_core::Rat;
use num_traits::Zero;

use super::{fmt_point, parse_point, parse_region};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{Check, Report, Table, TraceJson};

pub const DEFAULT_REGION: &str = "rect:0,0,1/2,1/2";
pub const DEFAULT_POINT: &str = "1/4,1/4";
pub const DEFAULT_R_MAX: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Interior,
    OutsideClosure,
    Boundary,
}

pub fn trace_table(name: &str, t: &Trace) -> Table {
    let mut table = Table::new(name, &["r", "u", "v", "value"]);
    for rec in &t.records {
        table.push(vec![rec.r.to_string(), rec.square.u.to_string(), rec.square.v.to_string(), fmt_rat(&rec.value)]);
    }
    table
}

/// The limit of the trace at `pt`, when the point is not on the boundary.
pub fn expected_limit(d: &OpenSetMartingale, pt: &Point) -> (Location, Option<Rat>) {
    if d.total_measure().is_zero() {
        return (Location::OutsideClosure, Some(Rat::zero()));
    }
    if contains_point(d.region(), pt, Membership::Interior) {
        (Location::Interior, Some(d.total_measure().recip()))
    } else if !contains_point(d.region(), pt, Membership::Closed) {
        (Location::OutsideClosure, Some(Rat::zero()))
    } else {
        (Location::Boundary, None)
    }
}

pub fn run(region: &str, point: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    let r_max = cfg.r_max_or(DEFAULT_R_MAX);
    let mut rep = Report::new("theorem1", cfg);
    rep.param("region", region);
    rep.param("point", point);
    rep.param("r_max", r_max);
    let (reg, desc) = parse_region(region, cfg.effective_k_cap(), &cfg.caps)?;
    let pt = parse_point(point)?;
    let d = OpenSetMartingale::new(&reg, &cfg.caps)?;
    rep.param("measure", fmt_rat(d.total_measure()));
    let t = trace(&d, &pt, r_max)?;
    if let Some(e) = &t.truncated {
        rep.infeasible.push(format!("trace stopped early: {e}"));
    }
    let (loc, target) = expected_limit(&d, &pt);
    match &target {
        Some(target) => {
            let r0 = t.stabilization_index(target);
            let what = if loc == Location::Interior { "1/lambda(E)" } else { "0" };
            rep.param("r0", r0.map_or_else(|| "none".into(), |r| r.to_string()));
            rep.check(Check::found_by(
                format!("trace at {} settles at {what} = {} from r0", fmt_point(&pt), fmt_rat(target)),
                r0,
                r_max,
            ));
        }
        None => rep.note(format!("{} lies on the boundary of E; no limit is asserted", fmt_point(&pt))),
    }
    rep.tables.push(trace_table("trace", &t));
    rep.traces.push(TraceJson::new(&t, desc));
    Ok(rep)
}
