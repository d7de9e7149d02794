//! SVG figures: the intercept graph, the line family, and precursor regions.

use kakeya_core::construction::{b_k, lines_of_fk, piece_of, precursor_region, Line, PrecursorSpec};
use kakeya_core::measure::{Point, Rect, Region};
use kakeya_core::numeric::{fmt_rat, int, pow2, rat, rat_to_f64, Rat};
use kakeya_core::Dyadic;
use num_traits::{Signed, Zero};
use serde_json::json;

use super::{fmt_dyadic, parse_dyadic, usage};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{Artifact, Check, Report};
use crate::svg::Svg;

/// Line family index used by both figures.
pub const FIGURE_K: u64 = 8;
const CANVAS: f64 = 800.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    Figure1,
    Figure2,
    Region,
}

#[derive(Clone, Debug)]
pub struct RenderArgs {
    pub target: Target,
    pub m: Option<u32>,
    pub xhat: Option<String>,
    pub k_override: Option<u64>,
    /// Draw the piece translated by `(-floor(xhat), -j)` into the unit square.
    pub j: Option<i64>,
}

/// The points `(a, b_8(a))` for `a` in `2^-8 Z & [0, 1)`.
pub fn figure1_points(cfg: &RunConfig) -> Result<Vec<(Rat, Rat)>, CliError> {
    let n = 1i64 << FIGURE_K;
    (0..n)
        .map(|q| {
            let a = rat(q, n);
            let b = b_k(FIGURE_K, &a, &cfg.caps)?;
            Ok((a, b))
        })
        .collect()
}

fn figure1(rep: &mut Report, cfg: &RunConfig) -> Result<Artifact, CliError> {
    let pts = figure1_points(cfg)?;
    let lo = pts.iter().map(|p| &p.1).min().expect("256 points").clone();
    let hi = pts.iter().map(|p| &p.1).max().expect("256 points").clone();
    let pad = (&hi - &lo) / int(16);
    let (y0, y1) = (&lo - &pad, &hi + &pad);
    let x_pad = rat(1, 32);
    let (x0, x1) = (-x_pad.clone(), int(1) + &x_pad);
    let mut svg = Svg::new(CANVAS, CANVAS / 2.0, &x0, &y0, &x1, &y1);
    if y0 < Rat::zero() && y1 > Rat::zero() {
        svg.line(&Point::new(x0.clone(), Rat::zero()), &Point::new(x1.clone(), Rat::zero()), "axis");
    }
    svg.line(&Point::new(Rat::zero(), y0.clone()), &Point::new(Rat::zero(), y1.clone()), "axis");
    for (a, b) in &pts {
        svg.circle(a, b, 2.0, "point");
    }
    svg.text(&rat(1, 64), &(&hi + &pad / int(2)), &format!("b_8 in [{}, {}]", fmt_rat(&lo), fmt_rat(&hi)));
    rep.param("b_min", fmt_rat(&lo));
    rep.param("b_max", fmt_rat(&hi));
    rep.check(Check::count_eq("figure1: points (a, b_8(a)) drawn", pts.len() as u64, 1 << FIGURE_K));
    Ok(Artifact { file_name: "figure1.svg".into(), contents: svg.finish("Points (a, b_8(a))") })
}

/// The part of `line` inside `[-1, 1]^2`, if any. Slopes are nonnegative.
pub fn clip_to_square(line: &Line) -> Option<(Point, Point)> {
    let a = line.slope.to_rat();
    let b = &line.intercept;
    let one = int(1);
    let (mut lo, mut hi) = (-one.clone(), one.clone());
    if a.is_zero() {
        if b.abs() > one {
            return None;
        }
    } else {
        lo = lo.max((-&one - b) / &a);
        hi = hi.min((&one - b) / &a);
    }
    (lo <= hi).then(|| (Point::new(lo.clone(), line.y_at(&lo)), Point::new(hi.clone(), line.y_at(&hi))))
}

fn figure2(rep: &mut Report, cfg: &RunConfig) -> Result<Artifact, CliError> {
    let lines = lines_of_fk(FIGURE_K, &cfg.caps)?;
    let (lo, hi) = (-int(1), int(1));
    let mut svg = Svg::new(CANVAS, CANVAS, &lo, &lo, &hi, &hi);
    let corners = [(-1, -1), (1, -1), (1, 1), (-1, 1)].map(|(x, y)| Point::new(int(x), int(y)));
    for e in 0..4 {
        svg.line(&corners[e], &corners[(e + 1) % 4], "axis");
    }
    let mut drawn = 0u64;
    for line in &lines {
        if let Some((p, q)) = clip_to_square(line) {
            svg.line(&p, &q, "line");
            drawn += 1;
        }
    }
    rep.check(Check::count_eq("figure2: lines of F_8 meeting [-1,1]^2 drawn", drawn, lines.len() as u64));
    rep.check(Check::count_eq("figure2: lines in F_8", lines.len() as u64, 1 << FIGURE_K));
    Ok(Artifact { file_name: "figure2.svg".into(), contents: svg.finish("F_8 clipped to [-1,1]^2") })
}

fn grid_lines(svg: &mut Svg, view: &Rect, level: u32) {
    let step = pow2(-i64::from(level));
    let first = |v: &Rat| (v / &step).ceil().to_integer();
    let last = |v: &Rat| (v / &step).floor().to_integer();
    let mut n = first(&view.x0);
    while n <= last(&view.x1) {
        let x = Rat::from_integer(n.clone()) * &step;
        svg.line(&Point::new(x.clone(), view.y0.clone()), &Point::new(x, view.y1.clone()), "grid");
        n += 1;
    }
    let mut n = first(&view.y0);
    while n <= last(&view.y1) {
        let y = Rat::from_integer(n.clone()) * &step;
        svg.line(&Point::new(view.x0.clone(), y.clone()), &Point::new(view.x1.clone(), y), "grid");
        n += 1;
    }
}

fn region_json(spec: &PrecursorSpec, j: Option<i64>, region: &Region) -> serde_json::Value {
    let polys: Vec<Vec<[String; 2]>> = region
        .polys
        .iter()
        .map(|p| p.vertices().iter().map(|v| [fmt_rat(&v.x), fmt_rat(&v.y)]).collect())
        .collect();
    json!({
        "m": spec.m,
        "xhat": fmt_dyadic(&spec.xhat),
        "k": spec.k,
        "delta": fmt_dyadic(&spec.delta),
        "coupled": spec.is_coupled(),
        "j": j,
        "polygons": polys,
    })
}

fn region(args: &RenderArgs, rep: &mut Report, cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let m = args.m.ok_or_else(|| usage("render region needs --m and --xhat"))?;
    let xhat: Dyadic = parse_dyadic(args.xhat.as_deref().ok_or_else(|| usage("render region needs --xhat"))?)?;
    let spec = match args.k_override {
        Some(k) => PrecursorSpec::decoupled(m, xhat, k)?,
        None => PrecursorSpec::coupled(m, xhat)?,
    };
    rep.param("m", m);
    rep.param("xhat", fmt_dyadic(&spec.xhat));
    rep.param("k", spec.k);
    let full = precursor_region(&spec, &cfg.caps)?;
    rep.check(Check::count_eq("region: tubes built", full.polys.len() as u64, spec.line_count().unwrap_or(0)));
    let (shown, view) = match args.j {
        Some(j) => {
            rep.param("j", j);
            (piece_of(&full, &spec, j), Rect::unit())
        }
        None => {
            let b = full.bbox().expect("nonempty family");
            let pad = (&b.x1 - &b.x0).max(&b.y1 - &b.y0) / int(16);
            let view = Rect::new(&b.x0 - &pad, &b.y0 - &pad, &b.x1 + &pad, &b.y1 + &pad);
            (full, view)
        }
    };
    let width = &view.x1 - &view.x0;
    let height = &view.y1 - &view.y0;
    let aspect = rat_to_f64(&(height / &width)).clamp(0.05, 20.0);
    let mut svg = Svg::new(CANVAS, CANVAS * aspect, &view.x0, &view.y0, &view.x1, &view.y1);
    grid_lines(&mut svg, &view, cfg.r_max_or(3));
    for p in &shown.polys {
        svg.polygon(p.vertices(), "tube");
    }
    let x = spec.xhat.to_rat();
    let x_name = if x.is_integer() { x.numer().to_string() } else { format!("{}_{}", x.numer(), x.denom()) };
    let mut stem = format!("region_m{m}_xhat{x_name}");
    if let Some(j) = args.j {
        stem.push_str(&format!("_j{j}"));
    }
    rep.param("polygons_drawn", shown.polys.len());
    let title = format!("Precursor m={m} xhat={} k={}", fmt_dyadic(&spec.xhat), spec.k);
    let json_text = serde_json::to_string_pretty(&region_json(&spec, args.j, &shown))? + "\n";
    Ok(vec![
        Artifact { file_name: format!("{stem}.svg"), contents: svg.finish(&title) },
        Artifact { file_name: format!("{stem}.json"), contents: json_text },
    ])
}

pub fn run(args: &RenderArgs, cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = Report::new("render", cfg);
    let artifacts = match args.target {
        Target::Figure1 => {
            rep.param("target", "figure1");
            vec![figure1(&mut rep, cfg)?]
        }
        Target::Figure2 => {
            rep.param("target", "figure2");
            vec![figure2(&mut rep, cfg)?]
        }
        Target::Region => {
            rep.param("target", "region");
            region(args, &mut rep, cfg)?
        }
    };
    for a in &artifacts {
        rep.note(format!("artifact {}", a.file_name));
    }
    rep.artifacts = artifacts;
    Ok(rep)
}
