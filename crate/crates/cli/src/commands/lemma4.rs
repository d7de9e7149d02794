//! The averaged martingale of one unit column reaching `2^(m-2)` along a
//! point of `F`.

use kakeya_core::construction::{b_exact, fold_point, FoldedPoint};
use kakeya_core::martingale::{trace, AveragedMartingale, MartingaleSpec};
use kakeya_core::measure::Point;
use kakeya_core::numeric::{fmt_rat, int, parse_rat, pow2};
use kakeya_core::{Dyadic, Error};

use super::{fmt_dyadic, fmt_point, parse_dyadic, spec_json};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{Check, Report, TraceJson};

pub const DEFAULT_R_MAX: u32 = 12;

#[derive(Clone, Debug)]
pub struct Lemma4Args {
    pub m: u32,
    pub slope: String,
    pub x: String,
    pub i: Option<i64>,
    pub j: Option<i64>,
}

/// The point `(x, a x + b(a))` of `F` and its fold into the unit square.
pub fn point_on_f(slope: &str, x: &str, cfg: &RunConfig) -> Result<(Dyadic, Point, FoldedPoint), CliError> {
    let a = parse_dyadic(slope)?;
    let x = parse_rat(x)?;
    let b = b_exact(&a, &cfg.caps)?;
    if a.to_rat() >= int(1) {
        return Err(Error::OutOfRange(format!("slope {} outside [0, 1)", fmt_dyadic(&a))).into());
    }
    let y = a.to_rat() * &x + b;
    let folded = fold_point(&x, &y);
    Ok((a, Point::new(x, y), folded))
}

/// `m >= |i| + 1`.
pub fn check_level(m: u32, i: i64) -> Result<(), Error> {
    if i64::from(m) < i.abs() + 1 {
        return Err(Error::Precondition(format!("m = {m} needs m >= |i| + 1 = {}", i.abs() + 1)));
    }
    Ok(())
}

pub fn run(args: &Lemma4Args, cfg: &RunConfig) -> Result<Report, CliError> {
    let r_max = cfg.r_max_or(DEFAULT_R_MAX);
    let mut rep = Report::new("lemma4", cfg);
    let (a, pt, folded) = point_on_f(&args.slope, &args.x, cfg)?;
    for (given, actual, name) in [(args.i, folded.i, "i"), (args.j, folded.j, "j")] {
        if given.is_some_and(|g| g != actual) {
            return Err(Error::Precondition(format!(
                "{} lies in column {name} = {actual}, not {}",
                fmt_point(&pt),
                given.unwrap()
            ))
            .into());
        }
    }
    check_level(args.m, folded.i)?;
    rep.param("m", args.m);
    rep.param("slope", fmt_dyadic(&a));
    rep.param("point", fmt_point(&pt));
    rep.param("i", folded.i);
    rep.param("j", folded.j);
    rep.param("folded", fmt_point(&folded.point01));
    rep.param("r_max", r_max);

    let k_cap = cfg.effective_k_cap();
    let d = AveragedMartingale::new(args.m, folded.i, folded.j, k_cap, &cfg.caps)?;
    for (spec, osm) in d.pieces() {
        let mode = if spec.is_coupled() { "coupled" } else { "clamped" };
        rep.note(format!(
            "piece xhat={} k={} ({mode}), measure {}",
            fmt_dyadic(&spec.xhat),
            spec.k,
            fmt_rat(osm.total_measure())
        ));
    }
    let t = trace(&d, &folded.point01, r_max)?;
    if let Some(e) = &t.truncated {
        rep.infeasible.push(format!("trace stopped early: {e}"));
    }
    let floor = pow2(i64::from(args.m) - 2);
    let r0 = t.threshold_index(&floor);
    rep.param("r0", r0.map_or_else(|| "none".into(), |r| r.to_string()));
    let check = Check::found_by(format!("value >= 2^(m-2) = {} from r0 through r_max", fmt_rat(&floor)), r0, r_max);
    rep.check(if d.is_coupled() { check } else { check.reported() });
    if !d.is_coupled() {
        rep.note(format!("some pieces exceed k_cap = {k_cap:?}; the threshold is reported, not asserted"));
    }
    rep.tables.push(super::theorem1::trace_table("trace", &t));
    let spec = MartingaleSpec::Averaged { m: args.m, i: folded.i, j: folded.j, k_cap };
    rep.traces.push(TraceJson::new(&t, spec_json(&spec)));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kakeya_core::numeric::rat;

    fn quiet() -> RunConfig {
        RunConfig { timings: false, r_max: Some(8), ..RunConfig::default() }
    }

    fn args(slope: &str, x: &str) -> Lemma4Args {
        Lemma4Args { m: 1, slope: slope.into(), x: x.into(), i: None, j: None }
    }

    #[test]
    fn folds_points_of_f() {
        let (_, pt, f) = point_on_f("1/4", "1/4", &quiet()).unwrap();
        assert_eq!(pt, Point::new(rat(1, 4), rat(-3, 16)));
        assert_eq!((f.i, f.j), (0, -1));
        assert_eq!(f.point01, Point::new(rat(1, 4), rat(13, 16)));
    }

    #[test]
    fn horizontal_line_reaches_one_half() {
        let rep = run(&args("0", "1/4"), &quiet()).unwrap();
        assert!(rep.checks[0].asserted && rep.checks[0].pass, "{}", rep.to_text());
    }

    #[test]
    fn level_too_low_is_a_precondition_error() {
        let err = run(&Lemma4Args { m: 1, ..args("0", "-3/4") }, &quiet()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("m >= |i| + 1"));
    }

    #[test]
    fn wrong_column_is_rejected() {
        let err = run(&Lemma4Args { j: Some(0), ..args("1/4", "1/4") }, &quiet()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
