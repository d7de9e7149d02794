//! Sequence blocks and the block-index bound.

use kakeya_core::sequence::{block, block_offset, check_obs1};
use kakeya_core::Rat;
use num_bigint::BigInt;

use super::fmt_dyadic;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{Check, Report, Table};

/// Blocks listed in full.
pub const LISTED_LEVELS: u32 = 3;

pub fn run(m_hi: u32, cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = Report::new("seq", cfg);
    rep.param("m_hi", m_hi);

    let mut blocks = Table::new("blocks", &["level", "offset", "k", "x_k"]);
    for level in 0..=LISTED_LEVELS {
        let b = block(level, &cfg.caps)?;
        let start = block_offset(level);
        for (i, x) in b.elements.iter().enumerate() {
            blocks.push(vec![level.to_string(), i.to_string(), (start + i as u128).to_string(), fmt_dyadic(x)]);
        }
    }
    rep.tables.push(blocks);

    let obs = check_obs1(4, m_hi)?;
    let mut rows = Table::new("index_bound", &["m", "max_k", "bound", "short_count_sum"]);
    for row in &obs.rows {
        rows.push(vec![
            row.m.to_string(),
            row.max_k.to_string(),
            row.bound.to_string(),
            row.short_count_sum.to_string(),
        ]);
        let as_rat = |n: u128| Rat::from_integer(BigInt::from(n));
        rep.check(Check::le(format!("m={}: max index in X_m <= 4^m", row.m), &as_rat(row.max_k), &as_rat(row.bound)));
    }
    rep.tables.push(rows);
    rep.note(obs.note);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_and_bounds() {
        let rep = run(10, &RunConfig { timings: false, ..RunConfig::default() }).unwrap();
        let blocks = rep.table("blocks").unwrap();
        assert_eq!(blocks.rows.iter().filter(|r| r[0] == "1").count(), 6);
        assert_eq!(blocks.rows.len(), 1 + 6 + 20 + 56);
        let bound = rep.table("index_bound").unwrap();
        assert_eq!(bound.rows[0], vec!["4", "226", "256", "222"]);
        assert_eq!(rep.checks.len(), 7);
        assert!(rep.checks.iter().all(|c| c.pass));
    }
}
