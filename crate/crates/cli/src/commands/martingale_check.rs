//! Exhaustive averaging-identity and growth checks.

use std::time::Instant;

use kakeya_core::martingale::{tail_bound, verify_martingale_identity, DyadicSquare, MartingaleSpec};
use kakeya_core::numeric::{fmt_rat, int};

use super::{elapsed_ms, parse_martingale_spec};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{Check, Report, Table};

pub const DEFAULT_R_MAX: u32 = 4;
pub const DEFAULT_SPECS: [&str; 4] = ["open:0,0,1/2,1/2", "averaged:1,0,0", "averaged:1,0,-1", "master:2"];

pub fn run(specs: &[String], cfg: &RunConfig) -> Result<Report, CliError> {
    let r_max = cfg.r_max_or(DEFAULT_R_MAX);
    let mut rep = Report::new("martingale-check", cfg);
    rep.param("r_max", r_max);
    let specs: Vec<String> =
        if specs.is_empty() { DEFAULT_SPECS.iter().map(|s| s.to_string()).collect() } else { specs.to_vec() };
    rep.param("specs", specs.join(" "));
    let mut table = Table::new(
        "summary",
        &[
            "spec",
            "initial_capital",
            "parents_checked",
            "squares_bounded",
            "identity_failures",
            "growth_failures",
            "max_growth",
        ],
    );
    for text in &specs {
        let spec = parse_martingale_spec(text, cfg.effective_k_cap())?;
        let start = Instant::now();
        let built = match spec.build(&cfg.caps) {
            Ok(d) => d,
            Err(e) if e.is_cap() => {
                rep.infeasible.push(format!("{text}: {e}"));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let report = match verify_martingale_identity(built.as_ref(), r_max) {
            Ok(r) => r,
            Err(e) if e.is_cap() => {
                rep.infeasible.push(format!("{text}: {e}"));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        rep.timing(text, elapsed_ms(start));
        let desc = spec.describe();
        rep.check(Check::count_eq(
            format!("{desc}: squares with d(Q) != mean of children, r < {r_max}"),
            report.identity_failures.len() as u64,
            0,
        ));
        rep.check(Check::count_eq(
            format!("{desc}: squares with d(Q) > 4^r d(Q_0), r <= {r_max}"),
            report.growth_failures.len() as u64,
            0,
        ));
        if let Some(g) = &report.max_growth {
            rep.check(Check::le(format!("{desc}: max d(Q) / (4^r d(Q_0))"), g, &int(1)).reported());
        }
        for f in report.identity_failures.iter().take(5) {
            rep.note(format!(
                "{desc}: Q_{}({}, {}) has value {} but children mean {}",
                f.square.r,
                f.square.u,
                f.square.v,
                fmt_rat(&f.value),
                fmt_rat(&f.children_mean)
            ));
        }
        if let MartingaleSpec::MasterTruncated { m_max, .. } = &spec {
            rep.check(Check::le(format!("{desc}: initial capital <= 4"), &report.initial_capital, &int(4)));
            let root = DyadicSquare::root();
            rep.note(format!(
                "{desc}: omitted layers add at most {} at Q_0 and {} at level {r_max}",
                fmt_rat(&tail_bound(root.r, *m_max)),
                fmt_rat(&tail_bound(r_max, *m_max))
            ));
        }
        table.push(vec![
            text.clone(),
            fmt_rat(&report.initial_capital),
            report.parents_checked.to_string(),
            report.squares_bounded.to_string(),
            report.identity_failures.len().to_string(),
            report.growth_failures.len().to_string(),
            report.max_growth.as_ref().map_or_else(|| "none".into(), fmt_rat),
        ]);
    }
    rep.tables.push(table);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_set_passes_at_depth_three() {
        let cfg = RunConfig { timings: false, r_max: Some(3), ..RunConfig::default() };
        let rep = run(&["open:0,0,1/2,1/2".to_string()], &cfg).unwrap();
        assert_eq!(rep.outcome().exit_code(), 0, "{}", rep.to_text());
        let row = &rep.table("summary").unwrap().rows[0];
        assert_eq!(row[1], "1/1");
        assert_eq!(row[2], "21");
        assert_eq!(row[3], "85");
    }

    #[test]
    fn deep_checks_are_infeasible() {
        let cfg = RunConfig { timings: false, r_max: Some(11), ..RunConfig::default() };
        let rep = run(&["open:0,0,1,1".to_string()], &cfg).unwrap();
        assert_eq!(rep.outcome().exit_code(), 2);
    }
}
