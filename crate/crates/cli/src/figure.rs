//! SVG drawing of the minimizer for a rectangle.

use std::fmt::Write as _;

use anyhow::{ensure, Result};
use mdm_core::cases::{theorem_total_length, CASE3A};
use mdm_core::steiner::fermat_point;
use mdm_core::{IPoint, Interval, Pt};

pub const SEGMENTS: usize = 21;

#[derive(Debug, Clone, Copy)]
pub struct FigureSpec {
    pub width: f64,
    pub height: f64,
    pub r: f64,
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub spec: FigureSpec,
    pub segments: Vec<(Pt, Pt)>,
    /// The three angles at each corner's branching point.
    pub tripod_angles: Vec<Interval>,
    pub total: Interval,
}

/// Corner placement: origin and the images of the two local axes.
fn corners(w: f64, h: f64) -> [(Pt, Pt, Pt); 4] {
    [
        (Pt::new(0.0, 0.0), Pt::new(1.0, 0.0), Pt::new(0.0, 1.0)),
        (Pt::new(w, 0.0), Pt::new(-1.0, 0.0), Pt::new(0.0, 1.0)),
        (Pt::new(w, h), Pt::new(-1.0, 0.0), Pt::new(0.0, -1.0)),
        (Pt::new(0.0, h), Pt::new(1.0, 0.0), Pt::new(0.0, -1.0)),
    ]
}

struct Corner {
    w1: Pt,
    v: Pt,
    w2: Pt,
    q2: Pt,
    q1: Pt,
}

fn place(local: Pt, frame: (Pt, Pt, Pt), r: f64) -> Pt {
    let (o, e1, e2) = frame;
    o.add(e1.scale(local.x * r)).add(e2.scale(local.y * r))
}

pub fn build_figure(spec: FigureSpec) -> Result<Figure> {
    let total = theorem_total_length(spec.width, spec.height, spec.r)?;
    let c = CASE3A;
    // The printed branching point is rounded; the exact one makes 2pi/3 angles.
    let v = fermat_point(c.w1, c.w2, c.q2);

    let corners: Vec<Corner> = corners(spec.width, spec.height)
        .into_iter()
        .map(|f| Corner {
            w1: place(c.w1, f, spec.r),
            v: place(v, f, spec.r),
            w2: place(c.w2, f, spec.r),
            q2: place(c.q2, f, spec.r),
            q1: place(c.q1, f, spec.r),
        })
        .collect();

    let mut segments = Vec::with_capacity(SEGMENTS);
    let mut tripod_angles = Vec::new();
    for k in &corners {
        segments.push((k.w1, k.v));
        segments.push((k.v, k.w2));
        segments.push((k.v, k.q2));
        segments.push((k.q2, k.q1));
        let [w1, v, w2, q2] = [k.w1, k.v, k.w2, k.q2].map(|p| IPoint::point(p.x, p.y));
        tripod_angles.push(IPoint::angle(w1, v, w2)?);
        tripod_angles.push(IPoint::angle(w2, v, q2)?);
        tripod_angles.push(IPoint::angle(q2, v, w1)?);
    }
    // Horizontal sides join the W1 ends, vertical sides the W2 ends. The
    // bottom side carries the gap of length 2r that opens the cycle.
    let (bl, br, tr, tl) = (&corners[0], &corners[1], &corners[2], &corners[3]);
    let mid = 0.5 * spec.width;
    let yb = bl.w1.y;
    segments.push((bl.w1, Pt::new(mid - spec.r, yb)));
    segments.push((Pt::new(mid + spec.r, yb), br.w1));
    segments.push((tl.w1, tr.w1));
    segments.push((bl.w2, tl.w2));
    segments.push((br.w2, tr.w2));

    ensure!(segments.len() == SEGMENTS, "expected {SEGMENTS} segments, built {}", segments.len());
    for (a, b) in &segments {
        for p in [a, b] {
            ensure!(
                (0.0..=spec.width).contains(&p.x) && (0.0..=spec.height).contains(&p.y),
                "segment endpoint ({}, {}) outside the rectangle",
                p.x,
                p.y
            );
        }
    }
    Ok(Figure {
        spec,
        segments,
        tripod_angles,
        total,
    })
}

pub fn render_svg(fig: &Figure) -> String {
    let FigureSpec { width, height, r } = fig.spec;
    let scale = 800.0 / width.max(height);
    let margin = 20.0;
    let px = |p: Pt| (margin + p.x * scale, margin + (height - p.y) * scale);
    let (w, h) = (width * scale + 2.0 * margin, height * scale + 2.0 * margin + 30.0);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        s,
        r##"<rect x="{margin}" y="{margin}" width="{}" height="{}" fill="none" stroke="#888" stroke-width="1"/>"##,
        width * scale,
        height * scale
    );
    let _ = writeln!(s, r##"<g id="minimizer" stroke="#c00" stroke-width="1.5">"##);
    for (a, b) in &fig.segments {
        let (x1, y1) = px(*a);
        let (x2, y2) = px(*b);
        let _ = writeln!(s, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text x="{margin}" y="{}" font-family="sans-serif" font-size="14">{width} x {height}, r = {r}: length = {} (+ o(r))</text>"#,
        h - 10.0,
        fig.total.mid()
    );
    let _ = writeln!(s, "</svg>");
    s
}
