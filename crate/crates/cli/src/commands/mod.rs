//! One function per subcommand, each producing a [`Report`](crate::report::Report).

use std::time::Instant;

use kakeya_core::construction::{translated_piece, PrecursorSpec};
use kakeya_core::martingale::MartingaleSpec;
use kakeya_core::measure::{Point, Rect, Region};
use kakeya_core::numeric::{fmt_rat, parse_rat};
use kakeya_core::{Caps, Dyadic, Error, Rat};
use serde_json::json;

use crate::error::CliError;

pub mod lemma2;
pub mod lemma4;
pub mod martingale_check;
pub mod render;
pub mod seq;
pub mod success_trend;
pub mod theorem1;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn fields<'a>(s: &'a str, n: usize, what: &str) -> Result<Vec<&'a str>, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(usage(format!("{what} needs {n} comma-separated values, got {s:?}")));
    }
    Ok(parts)
}

fn parse_int<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| usage(format!("{what}: not an integer: {s:?}")))
}

pub fn parse_point(s: &str) -> Result<Point, CliError> {
    let f = fields(s, 2, "point")?;
    Ok(Point::new(parse_rat(f[0])?, parse_rat(f[1])?))
}

pub fn parse_dyadic(s: &str) -> Result<Dyadic, CliError> {
    Ok(s.parse::<Dyadic>()?)
}

pub fn fmt_point(p: &Point) -> String {
    format!("({}, {})", fmt_rat(&p.x), fmt_rat(&p.y))
}

pub fn fmt_dyadic(d: &Dyadic) -> String {
    fmt_rat(&d.to_rat())
}

fn parse_rect(s: &str) -> Result<Rect, CliError> {
    let f = fields(s, 4, "rectangle")?;
    let v: Vec<Rat> = f.iter().map(|x| parse_rat(x)).collect::<Result<_, Error>>()?;
    if v[0] >= v[2] || v[1] >= v[3] {
        return Err(usage(format!("rectangle {s:?} is empty")));
    }
    Ok(Rect::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()))
}

/// `rect:x0,y0,x1,y1` or `piece:m,xhat,j`, the latter being the precursor
/// translated by `(-floor(xhat), -j)` into the unit square.
pub fn parse_region(s: &str, k_cap: Option<u64>, caps: &Caps) -> Result<(Region, serde_json::Value), CliError> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| usage(format!("region {s:?} lacks a kind prefix")))?;
    match kind {
        "rect" => {
            let r = parse_rect(rest)?;
            let poly = r.to_poly().expect("nonempty rectangle");
            let desc = json!({"kind": "open_set", "rect": [fmt_rat(&r.x0), fmt_rat(&r.y0), fmt_rat(&r.x1), fmt_rat(&r.y1)]});
            Ok((Region::new(vec![poly]), desc))
        }
        "piece" => {
            let f = fields(rest, 3, "piece")?;
            let m: u32 = parse_int(f[0], "m")?;
            let xhat = parse_dyadic(f[1])?;
            let j: i64 = parse_int(f[2], "j")?;
            let spec = PrecursorSpec::coupled_or_clamped(m, xhat, k_cap)?;
            let region = translated_piece(&spec, j, caps)?;
            let desc = json!({
                "kind": "open_set",
                "piece": {"m": m, "xhat": fmt_dyadic(&spec.xhat), "j": j, "k": spec.k, "coupled": spec.is_coupled()}
            });
            Ok((region, desc))
        }
        _ => Err(usage(format!("unknown region kind {kind:?}; use rect: or piece:"))),
    }
}

/// `open:x0,y0,x1,y1`, `averaged:m,i,j` or `master:m_max`.
pub fn parse_martingale_spec(s: &str, k_cap: Option<u64>) -> Result<MartingaleSpec, CliError> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| usage(format!("spec {s:?} lacks a kind prefix")))?;
    match kind {
        "open" => {
            let poly = parse_rect(rest)?.to_poly().expect("nonempty rectangle");
            Ok(MartingaleSpec::OpenSet(Region::new(vec![poly])))
        }
        "averaged" => {
            let f = fields(rest, 3, "averaged")?;
            Ok(MartingaleSpec::Averaged {
                m: parse_int(f[0], "m")?,
                i: parse_int(f[1], "i")?,
                j: parse_int(f[2], "j")?,
                k_cap,
            })
        }
        "master" => Ok(MartingaleSpec::MasterTruncated { m_max: parse_int(rest, "m_max")?, k_cap }),
        _ => Err(usage(format!("unknown spec kind {kind:?}; use open:, averaged: or master:"))),
    }
}

pub fn spec_json(spec: &MartingaleSpec) -> serde_json::Value {
    match spec {
        MartingaleSpec::OpenSet(r) => json!({"kind": "open_set", "polygons": r.polys.len()}),
        MartingaleSpec::Averaged { m, i, j, k_cap } => {
            json!({"kind": "averaged", "m": m, "i": i, "j": j, "k_cap": k_cap})
        }
        MartingaleSpec::MasterTruncated { m_max, k_cap } => {
            json!({"kind": "master_truncated", "m_max": m_max, "k_cap": k_cap})
        }
    }
}

/// `2^-m Z` inside `[-m, m]`.
pub fn valid_xhats(m: u32) -> Vec<Dyadic> {
    let lim = i64::from(m) << m;
    (-lim..=lim).map(|n| Dyadic::new(n, m)).collect()
}

pub fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}
