//! Static SVG rendering of a run. Coordinates are printed with fixed
//! precision, so identical records give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use navbench_core::world::{Bounds, Obstacle};
use navbench_core::Point;

use crate::runner::RunRecord;
use crate::{Error, Result};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;

struct Frame {
    bounds: Bounds,
    scale: f64,
}

impl Frame {
    fn x(&self, p: Point) -> f64 {
        MARGIN + (p.x - self.bounds.min.x) * self.scale
    }

    fn y(&self, p: Point) -> f64 {
        MARGIN + (self.bounds.max.y - p.y) * self.scale
    }

    fn len(&self, d: f64) -> f64 {
        d * self.scale
    }

    fn points(&self, pts: impl Iterator<Item = Point>) -> String {
        pts.map(|p| format!("{:.2},{:.2}", self.x(p), self.y(p)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn render_svg(record: &RunRecord) -> Result<String> {
    let samples = &record.log.samples;
    let (first, last) = match (samples.first(), samples.last()) {
        (Some(a), Some(b)) => (a.state.position(), b.state.position()),
        _ => return Err(Error::EmptyLog),
    };
    let world = &record.world;
    let f = Frame {
        bounds: world.bounds,
        scale: (WIDTH - 2.0 * MARGIN) / world.bounds.width(),
    };
    let height = 2.0 * MARGIN + f.len(world.bounds.height());
    let mut s = String::new();
    // Writing to a String cannot fail.
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}">"#
    );
    let _ = writeln!(
        s,
        r##"<rect id="bounds" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#fafafa" stroke="#333" stroke-width="2"/>"##,
        MARGIN,
        MARGIN,
        f.len(world.bounds.width()),
        f.len(world.bounds.height())
    );
    s.push_str("<g id=\"obstacles\" fill=\"#888\" stroke=\"#444\" stroke-width=\"2\">\n");
    for o in &world.obstacles {
        let _ = match o {
            Obstacle::Circle { center, radius } => writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}"/>"#,
                f.x(*center),
                f.y(*center),
                f.len(*radius)
            ),
            Obstacle::Segment { a, b } => writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                f.x(*a),
                f.y(*a),
                f.x(*b),
                f.y(*b)
            ),
        };
    }
    s.push_str("</g>\n");
    if !world.narrow_passages.is_empty() {
        s.push_str(
            "<g id=\"gates\" stroke=\"#c80\" stroke-width=\"2\" stroke-dasharray=\"6 4\">\n",
        );
        for g in &world.narrow_passages {
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                f.x(g.a),
                f.y(g.a),
                f.x(g.b),
                f.y(g.b)
            );
        }
        s.push_str("</g>\n");
    }
    let _ = writeln!(
        s,
        r##"<circle id="goal" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="#9d9" fill-opacity="0.6" stroke="#272"/>"##,
        f.x(world.goal),
        f.y(world.goal),
        f.len(world.goal_radius).max(3.0)
    );
    if let Some(reference) = record.log.reference_path.as_ref().filter(|r| !r.is_empty()) {
        let _ = writeln!(
            s,
            r##"<polyline id="reference" points="{}" fill="none" stroke="#39f" stroke-width="1.5" stroke-dasharray="4 3"/>"##,
            f.points(reference.iter().copied())
        );
    }
    let _ = writeln!(
        s,
        r##"<polyline id="trajectory" points="{}" fill="none" stroke="#d22" stroke-width="2"/>"##,
        f.points(samples.iter().map(|x| x.state.position()))
    );
    let _ = writeln!(
        s,
        r##"<circle id="start" cx="{:.2}" cy="{:.2}" r="5" fill="#22d"/>"##,
        f.x(first),
        f.y(first)
    );
    let _ = writeln!(
        s,
        r##"<rect id="end" x="{:.2}" y="{:.2}" width="10" height="10" fill="#d22"/>"##,
        f.x(last) - 5.0,
        f.y(last) - 5.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN:.0}" y="14" font-family="monospace" font-size="12">{} / {} / seed {} / {:?}</text>"#,
        escape(&record.scenario),
        record.controller,
        record.seed,
        record.log.outcome
    );
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn plot(record: &RunRecord, out: &Path) -> Result<()> {
    fs::write(out, render_svg(record)?)?;
    Ok(())
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
