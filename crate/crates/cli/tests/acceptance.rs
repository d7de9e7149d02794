//! Acceptance suite: one PASS/FAIL line per criterion. Every comparison is
//! exact (tolerance 0); only wall-clock limits are inexact.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kakeya_cli::commands::lemma2::{self, grid_specs, trend_specs, Lemma2Args};
use kakeya_cli::commands::{lemma4, martingale_check, render, seq, theorem1};
use kakeya_cli::report::Report;
use kakeya_cli::RunConfig;
use kakeya_core::construction::{b_exact, fold_point, translated_piece, PrecursorSpec};
use kakeya_core::martingale::{
    osm_recursive, pair, tail_bound, unpair, DyadicSquare, Martingale, MasterMartingale, OpenSetMartingale,
};
use kakeya_core::measure::{contains_point, Membership, Rect, Region};
use kakeya_core::numeric::{fmt_rat, int, pow2, rat, Rat};
use kakeya_core::{Caps, Dyadic};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const IDENTITY_BUDGET: Duration = Duration::from_secs(300);
const CELL_BUDGET: Duration = Duration::from_secs(60);
const SEQ_BUDGET: Duration = Duration::from_secs(1);
const STABILIZE_BY: u32 = 12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn cfg() -> RunConfig {
    RunConfig { timings: false, ..RunConfig::default() }
}

fn asserted_pass(rep: &Report) -> bool {
    rep.checks.iter().filter(|c| c.asserted).all(|c| c.pass) && rep.infeasible.is_empty()
}

fn martingale_identity() -> (Outcome, Outcome) {
    let start = Instant::now();
    let cfg = RunConfig { r_max: Some(4), ..cfg() };
    let rep = martingale_check::run(&[], &cfg).expect("martingale-check runs");
    let took = start.elapsed();
    let summary = rep.table("summary").expect("summary table");
    let identity = rep.checks.iter().filter(|c| c.name.contains("mean of children")).collect::<Vec<_>>();
    let growth = rep.checks.iter().filter(|c| c.name.contains("d(Q) > 4^r d(Q_0)")).collect::<Vec<_>>();
    let all_85 = summary.rows.iter().all(|r| r[2] == "85");
    let id_ok = identity.len() == 4 && identity.iter().all(|c| c.pass) && all_85 && took < IDENTITY_BUDGET;
    let growth_ok = growth.len() == 4 && growth.iter().all(|c| c.pass);
    (
        outcome(id_ok, format!("4 specs x 85 parent squares, exact; {:.1} s (limit 300 s)", took.as_secs_f64())),
        outcome(growth_ok, format!("4 specs x 341 squares with r <= 4; max ratios {}", summary.rows.iter().map(|r| r[6].clone()).collect::<Vec<_>>().join(", "))),
    )
}

/// Area of a rectangle union inside `clip`, counted on the grid of all
/// rectangle coordinates.
fn rect_union_area(rects: &[Rect], clip: &Rect) -> Rat {
    let cut: Vec<Rect> = rects
        .iter()
        .filter_map(|r| {
            let x0 = r.x0.clone().max(clip.x0.clone());
            let y0 = r.y0.clone().max(clip.y0.clone());
            let x1 = r.x1.clone().min(clip.x1.clone());
            let y1 = r.y1.clone().min(clip.y1.clone());
            (x0 < x1 && y0 < y1).then(|| Rect::new(x0, y0, x1, y1))
        })
        .collect();
    let mut xs: Vec<Rat> = cut.iter().flat_map(|r| [r.x0.clone(), r.x1.clone()]).collect();
    let mut ys: Vec<Rat> = cut.iter().flat_map(|r| [r.y0.clone(), r.y1.clone()]).collect();
    xs.sort();
    xs.dedup();
    ys.sort();
    ys.dedup();
    let mut area = Rat::zero();
    for wx in xs.windows(2) {
        for wy in ys.windows(2) {
            if cut.iter().any(|r| r.x0 <= wx[0] && wx[1] <= r.x1 && r.y0 <= wy[0] && wy[1] <= r.y1) {
                area += (&wx[1] - &wx[0]) * (&wy[1] - &wy[0]);
            }
        }
    }
    area
}

fn oracle_equivalence() -> Outcome {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut compared = 0usize;
    for region_no in 0..20 {
        let den: i64 = rng.gen_range(5..40);
        let rects: Vec<Rect> = (0..rng.gen_range(1..5))
            .map(|_| {
                let (x, y) = (rng.gen_range(0..den), rng.gen_range(0..den));
                let (w, h) = (rng.gen_range(1..=den / 2 + 1), rng.gen_range(1..=den / 2 + 1));
                Rect::new(rat(x, den), rat(y, den), rat(x + w, den), rat(y + h, den))
            })
            .collect();
        let region = Region::new(rects.iter().map(|r| r.to_poly().expect("nonempty")).collect());
        let d = OpenSetMartingale::new(&region, &caps).expect("region within caps");
        for r in 0..=4 {
            for q in DyadicSquare::all_at(r) {
                let closed = d.value(&q).expect("value");
                let recursive = osm_recursive(&q, |s| rect_union_area(&rects, &s.rect()));
                if closed != recursive {
                    return outcome(
                        false,
                        format!("region {region_no}, {q:?}: closed form {} vs recursion {}", fmt_rat(&closed), fmt_rat(&recursive)),
                    );
                }
                compared += 1;
            }
        }
    }
    outcome(true, format!("20 seeded rectangle unions, {compared} squares, exact equality"))
}

/// Points of `F` strictly inside their folded `m = 1` pieces, in search order.
fn interior_points_of_f(count: usize) -> Vec<(String, String)> {
    let caps = Caps::default();
    let mut found = Vec::new();
    for xhat in [Dyadic::zero(), Dyadic::new(1, 1)] {
        let spec = PrecursorSpec::coupled(1, xhat.clone()).expect("valid xhat");
        for q in 0..16i64 {
            let a = Dyadic::new(q, 4);
            let x = xhat.to_rat() + rat(1, 8);
            let y = a.to_rat() * &x + b_exact(&a, &caps).expect("dyadic slope");
            let f = fold_point(&x, &y);
            let piece = translated_piece(&spec, f.j, &caps).expect("piece");
            if contains_point(&piece, &f.point01, Membership::Interior) {
                let region = format!("piece:1,{},{}", fmt_rat(&xhat.to_rat()), f.j);
                found.push((region, format!("{},{}", fmt_rat(&f.point01.x), fmt_rat(&f.point01.y))));
                if found.len() == count {
                    return found;
                }
            }
        }
    }
    found
}

fn stabilization() -> Outcome {
    let square = theorem1::run(theorem1::DEFAULT_REGION, theorem1::DEFAULT_POINT, &RunConfig { r_max: Some(8), ..cfg() })
        .expect("theorem1 runs");
    let values_ok = square.tables[0].rows.iter().skip(1).all(|r| r[3] == "4/1");
    let mut ok = asserted_pass(&square) && square.parameters["r0"] == "1" && values_ok;
    let mut details = vec![format!("(0,1/2)^2 at (1/4,1/4): r0 = {}", square.parameters["r0"])];
    let points = interior_points_of_f(3);
    ok &= points.len() == 3;
    for (region, point) in &points {
        let rep = theorem1::run(region, point, &RunConfig { r_max: Some(STABILIZE_BY), ..cfg() }).expect("theorem1 runs");
        let inside = rep.checks.first().is_some_and(|c| c.name.contains("1/lambda"));
        ok &= inside && asserted_pass(&rep);
        details.push(format!("{region} at ({point}): r0 = {}", rep.parameters["r0"]));
    }
    outcome(ok, details.join("; "))
}

fn lemma2_area() -> Outcome {
    let args = Lemma2Args::default();
    let c = cfg();
    let (specs, _) = grid_specs(false).expect("grid");
    let mut failures = Vec::new();
    let mut cells = 0;
    for spec in specs.iter().filter(|s| s.m <= 1) {
        assert!(spec.k <= 6 && spec.line_count() <= Some(64));
        let cell = lemma2::evaluate(spec, &args, &c).expect("cell within caps");
        cells += 1;
        if cell.area > lemma2::guaranteed_bound(spec.m) {
            failures.push(format!(
                "m={} xhat={}: area {} > {}",
                spec.m,
                fmt_rat(&spec.xhat.to_rat()),
                fmt_rat(&cell.area),
                fmt_rat(&lemma2::guaranteed_bound(spec.m))
            ));
        }
    }
    let mut slowest = Duration::ZERO;
    let mut bounded = true;
    for spec in trend_specs() {
        let start = Instant::now();
        let cell = lemma2::evaluate(&spec, &args, &c).expect("trend cell within caps");
        slowest = slowest.max(start.elapsed());
        bounded &= &cell.area * pow2(2 * i64::from(spec.m)) <= int(16);
    }
    let ok = failures.is_empty() && bounded && slowest < CELL_BUDGET;
    outcome(
        ok,
        format!(
            "{cells} coupled cells, {} over 2^(4-2m){}; trend area*4^m <= 16: {bounded}; slowest trend cell {:.1} s (limit 60 s)",
            failures.len(),
            if failures.is_empty() { String::new() } else { format!(" [{}]", failures.join("; ")) },
            slowest.as_secs_f64()
        ),
    )
}

fn lemma2_containment() -> Outcome {
    let args = Lemma2Args::default();
    let c = cfg();
    let mut inside = 0;
    let mut sampled = 0;
    for xhat in ["-1", "-1/2", "0", "1/2", "1"] {
        let spec = PrecursorSpec::coupled(1, xhat.parse().expect("dyadic")).expect("valid xhat");
        let cell = lemma2::evaluate(&spec, &args, &c).expect("cell");
        let s = cell.containment.expect("coupled cells are sampled");
        inside += s.inside;
        sampled += s.sampled;
    }
    outcome(inside == sampled && sampled == 5 * 64 * 16, format!("{inside} of {sampled} sampled points strictly inside"))
}

fn lemma4_threshold() -> Outcome {
    let c = RunConfig { r_max: Some(STABILIZE_BY), ..cfg() };
    let mut ok = true;
    let mut details = Vec::new();
    for (slope, x) in [("0", "1/4"), ("1/4", "1/4")] {
        let rep = lemma4::run(&lemma4::Lemma4Args { m: 1, slope: slope.into(), x: x.into(), i: Some(0), j: None }, &c)
            .expect("lemma4 runs");
        let asserted = rep.checks.iter().all(|ch| ch.asserted);
        ok &= asserted && asserted_pass(&rep);
        details.push(format!(
            "a={slope} x={x} -> column ({}, {}), r0 = {}",
            rep.parameters["i"], rep.parameters["j"], rep.parameters["r0"]
        ));
    }
    outcome(ok, details.join("; "))
}

fn lemma5_arithmetic() -> Outcome {
    let caps = Caps::default();
    let root = DyadicSquare::root();
    let mut values = Vec::new();
    let mut ok = true;
    for m_max in 0..=3 {
        let v = MasterMartingale::new(m_max, Some(8), &caps).and_then(|d| d.value(&root)).expect("master value");
        ok &= v <= int(4);
        values.push(fmt_rat(&v));
    }
    for r in 0..=3u32 {
        for t in 0..=3u32 {
            ok &= tail_bound(r, 2 * r + t + 1) == pow2(-i64::from(t));
        }
    }
    let mut partial = Rat::zero();
    for p in 0..64u128 {
        let (i, j) = unpair(p);
        ok &= pair(i, j) == p;
        partial += pow2(-(p as i64));
        ok &= partial < int(2);
    }
    outcome(ok, format!("d(Q_0) for m_max 0..3 = [{}]; 16 tail identities; partial weight sums < 2 up to 64", values.join(", ")))
}

fn observation1() -> Outcome {
    let start = Instant::now();
    let rep = seq::run(20, &cfg()).expect("seq runs");
    let took = start.elapsed();
    let rows = rep.table("index_bound").map_or(0, |t| t.rows.len());
    let noted = rep.notes.iter().any(|n| n.contains("undercounts by one"));
    outcome(
        asserted_pass(&rep) && rows == 17 && noted && took < SEQ_BUDGET,
        format!("m = 4..20 all within 4^m; counting note present: {noted}; {} ms (limit 1000)", took.as_millis()),
    )
}

fn figures() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for (target, class, element) in
        [(render::Target::Figure1, "point", "circle"), (render::Target::Figure2, "line", "line")]
    {
        let args = render::RenderArgs { target, m: None, xhat: None, k_override: None, j: None };
        let rep = render::run(&args, &cfg()).expect("render runs");
        let svg = &rep.artifacts[0].contents;
        match roxmltree::Document::parse(svg) {
            Ok(doc) => {
                let root_ok = doc.root_element().tag_name().name() == "svg";
                let marks = doc
                    .descendants()
                    .filter(|n| n.tag_name().name() == element && n.attribute("class") == Some(class))
                    .count();
                ok &= root_ok && marks == 256 && asserted_pass(&rep);
                details.push(format!("{}: {marks} {element} marks", rep.artifacts[0].file_name));
            }
            Err(e) => {
                ok = false;
                details.push(format!("{}: invalid XML: {e}", rep.artifacts[0].file_name));
            }
        }
    }
    outcome(ok, details.join("; "))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: u32, title: &str, o: Outcome| {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("[{tag}] criterion {n:>2}: {title}: {}", o.detail);
    };
    let (identity, growth) = martingale_identity();
    report(1, "martingale identity", identity);
    report(2, "closed form equals recursion", oracle_equivalence());
    report(3, "open set stabilization", stabilization());
    report(4, "precursor area bounds", lemma2_area());
    report(5, "precursor containment", lemma2_containment());
    report(6, "averaged threshold", lemma4_threshold());
    report(7, "master sum arithmetic", lemma5_arithmetic());
    report(8, "block index bound", observation1());
    report(9, "growth bound", growth);
    report(10, "figures", figures());
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
