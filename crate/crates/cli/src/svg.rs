//! Minimal SVG emission. Geometry stays exact until a coordinate is written,
//! then it is rounded to 12 significant digits.

use std::fmt::Write as _;

use kakeya_core::measure::Point;
use kakeya_core::numeric::rat_to_f64;
use kakeya_core::Rat;

/// `v` rounded to 12 significant digits, printed without exponent.
pub fn num(v: f64) -> String {
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".into()
    } else {
        format!("{rounded}")
    }
}

/// A drawing whose user coordinates `[x0, x1] x [y0, y1]` (y up) are mapped
/// onto a `width x height` pixel canvas (y down).
pub struct Svg {
    width: f64,
    height: f64,
    view: [f64; 4],
    body: String,
}

impl Svg {
    pub fn new(width: f64, height: f64, x0: &Rat, y0: &Rat, x1: &Rat, y1: &Rat) -> Svg {
        assert!(x0 < x1 && y0 < y1, "empty view");
        Svg {
            width,
            height,
            view: [rat_to_f64(x0), rat_to_f64(y0), rat_to_f64(x1), rat_to_f64(y1)],
            body: String::new(),
        }
    }

    fn px(&self, x: &Rat) -> String {
        let [x0, _, x1, _] = self.view;
        num((rat_to_f64(x) - x0) / (x1 - x0) * self.width)
    }

    fn py(&self, y: &Rat) -> String {
        let [_, y0, _, y1] = self.view;
        num((y1 - rat_to_f64(y)) / (y1 - y0) * self.height)
    }

    pub fn circle(&mut self, x: &Rat, y: &Rat, radius: f64, class: &str) {
        let (cx, cy) = (self.px(x), self.py(y));
        let _ = writeln!(self.body, r#"<circle class="{class}" cx="{cx}" cy="{cy}" r="{}"/>"#, num(radius));
    }

    pub fn line(&mut self, a: &Point, b: &Point, class: &str) {
        let (x1, y1, x2, y2) = (self.px(&a.x), self.py(&a.y), self.px(&b.x), self.py(&b.y));
        let _ = writeln!(self.body, r#"<line class="{class}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
    }

    pub fn polygon(&mut self, pts: &[Point], class: &str) {
        let coords: Vec<String> = pts.iter().map(|p| format!("{},{}", self.px(&p.x), self.py(&p.y))).collect();
        let _ = writeln!(self.body, r#"<polygon class="{class}" points="{}"/>"#, coords.join(" "));
    }

    pub fn text(&mut self, x: &Rat, y: &Rat, label: &str) {
        let (px, py) = (self.px(x), self.py(y));
        let _ = writeln!(self.body, r#"<text x="{px}" y="{py}" font-size="12">{}</text>"#, escape(label));
    }

    pub fn finish(self, title: &str) -> String {
        let (w, h) = (num(self.width), num(self.height));
        format!(
            concat!(
                r#"<?xml version="1.0" encoding="UTF-8"?>"#,
                "\n",
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
                "\n<title>{title}</title>\n",
                "<style>.axis{{stroke:#888;stroke-width:1}} .grid{{stroke:#ccc;stroke-width:0.5}} ",
                ".point{{fill:#000}} .line{{stroke:#000;stroke-width:0.3}} ",
                ".tube{{fill:#1f77b4;fill-opacity:0.35;stroke:none}}</style>\n",
                "{body}</svg>\n"
            ),
            w = w,
            h = h,
            title = escape(title),
            body = self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
