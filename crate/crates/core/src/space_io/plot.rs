//! SVG export of two-dimensional views of concepts.
//!
//! The α-cut of a fuzzified cuboid, seen on two dimensions, is its crisp
//! rectangle grown by a metric ball of radius `ε = ln(μ₀/α)/c`. Corners are
//! quarter ellipses when both dimensions share a domain and straight
//! diamond edges otherwise. A concept's outline is the part of each
//! cuboid's rounded rectangle that is not inside another cuboid's.
//!
//! Outlines are written in data coordinates under a single transform, so
//! the vertices in the file are exact.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::Space;
use crate::concepts::Concept;
use crate::error::{Error, Result};

const SEGMENTS: usize = 32;
const BISECTIONS: usize = 60;
const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];
const DASHES: [&str; 4] = ["", "6 3", "2 3", "8 3 2 3"];

/// Visible data range of a plot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlotView {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl PlotView {
    /// Smallest view holding every bounded core edge and α-cut of the given
    /// concepts, padded by 5%. Axes without any bounded extent span `[0, 1]`.
    pub fn fit(concepts: &[&Concept], dims: (usize, usize), alphas: &[f64]) -> Self {
        let mut ranges = [(f64::INFINITY, f64::NEG_INFINITY); 2];
        for concept in concepts {
            let metric = AxisMetric::new(concept, dims);
            let eps = alphas
                .iter()
                .filter(|&&a| a > 0.0 && a <= concept.mu0())
                .map(|&a| radius(concept, a))
                .fold(0.0, f64::max);
            for cuboid in concept.core().cuboids() {
                for (k, &d) in [dims.0, dims.1].iter().enumerate() {
                    let (lo, hi) = (cuboid.p_min()[d], cuboid.p_max()[d]);
                    if let (true, Some(s)) = (lo.is_finite() && hi.is_finite(), metric.scale[k]) {
                        ranges[k].0 = ranges[k].0.min(lo - eps / s);
                        ranges[k].1 = ranges[k].1.max(hi + eps / s);
                    }
                }
            }
        }
        let [x, y] = ranges.map(|(lo, hi)| {
            if lo > hi {
                (0.0, 1.0)
            } else {
                let pad = 0.05 * (hi - lo).max(1e-6);
                (lo - pad, hi + pad)
            }
        });
        PlotView { x, y }
    }
}

/// How distance on the two plotted dimensions is measured.
struct AxisMetric {
    /// `w_δ·√w_d` per axis, `None` when the concept ignores that dimension.
    scale: [Option<f64>; 2],
    same_domain: bool,
}

impl AxisMetric {
    fn new(concept: &Concept, dims: (usize, usize)) -> Self {
        let w = concept.weights();
        let scale = [dims.0, dims.1].map(|d| w.weights_of_dim(d).map(|(wdom, wd)| wdom * wd.sqrt()));
        let s = concept.structure();
        let same_domain = scale.iter().all(Option::is_some) && s.domain_of(dims.0) == s.domain_of(dims.1);
        AxisMetric { scale, same_domain }
    }

    fn combine(&self, a: f64, b: f64) -> f64 {
        if self.same_domain {
            a.hypot(b)
        } else {
            a + b
        }
    }

    /// Distance from `p` to the rectangle, or minus the depth of `p` inside
    /// it.
    fn signed_distance(&self, p: [f64; 2], rect: &Rect) -> f64 {
        let mut out = [0.0; 2];
        let mut depth = f64::INFINITY;
        for k in 0..2 {
            let Some(s) = self.scale[k] else { continue };
            let (lo, hi) = rect[k];
            if p[k] < lo {
                out[k] = (lo - p[k]) * s;
            } else if p[k] > hi {
                out[k] = (p[k] - hi) * s;
            } else {
                depth = depth.min((p[k] - lo).min(hi - p[k]) * s);
            }
        }
        let d = self.combine(out[0], out[1]);
        if d > 0.0 {
            d
        } else {
            -depth
        }
    }
}

type Rect = [(f64, f64); 2];

/// One piece of an outline, evaluated at `t ∈ [0, 1]`.
#[derive(Clone, Copy)]
enum Piece {
    Line([f64; 2], [f64; 2]),
    /// Corner arc around `center` from angle `from` to `from + π/2`.
    Arc {
        center: [f64; 2],
        radii: [f64; 2],
        from: f64,
        round: bool,
    },
}

impl Piece {
    fn at(&self, t: f64) -> [f64; 2] {
        match *self {
            Piece::Line(a, b) => [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])],
            Piece::Arc {
                center,
                radii,
                from,
                round,
            } => {
                let theta = from + t * FRAC_PI_2;
                let (sin, cos) = theta.sin_cos();
                let (u, v) = if round {
                    (cos, sin)
                } else {
                    (cos.signum() * cos * cos, sin.signum() * sin * sin)
                };
                [center[0] + radii[0] * u, center[1] + radii[1] * v]
            }
        }
    }
}

struct Curve {
    pieces: Vec<Piece>,
    closed: bool,
}

fn radius(concept: &Concept, alpha: f64) -> f64 {
    ((concept.mu0() / alpha).ln() / concept.c()).max(0.0)
}

fn curves_for(rect: &Rect, metric: &AxisMetric, eps: f64, view: &PlotView) -> Vec<Curve> {
    let [(x0, x1), (y0, y1)] = *rect;
    match metric.scale {
        [Some(sx), Some(sy)] => {
            let (rx, ry) = (eps / sx, eps / sy);
            let round = metric.same_domain;
            let arc = |center, from| Piece::Arc {
                center,
                radii: [rx, ry],
                from,
                round,
            };
            vec![Curve {
                pieces: vec![
                    Piece::Line([x0, y0 - ry], [x1, y0 - ry]),
                    arc([x1, y0], -FRAC_PI_2),
                    Piece::Line([x1 + rx, y0], [x1 + rx, y1]),
                    arc([x1, y1], 0.0),
                    Piece::Line([x1, y1 + ry], [x0, y1 + ry]),
                    arc([x0, y1], FRAC_PI_2),
                    Piece::Line([x0 - rx, y1], [x0 - rx, y0]),
                    arc([x0, y0], PI),
                ],
                closed: true,
            }]
        }
        [Some(sx), None] => {
            let (a, b) = (view.y.0, view.y.1);
            [x0 - eps / sx, x1 + eps / sx]
                .map(|x| Curve {
                    pieces: vec![Piece::Line([x, a], [x, b])],
                    closed: false,
                })
                .into()
        }
        [None, Some(sy)] => {
            let (a, b) = (view.x.0, view.x.1);
            [y0 - eps / sy, y1 + eps / sy]
                .map(|y| Curve {
                    pieces: vec![Piece::Line([a, y], [b, y])],
                    closed: false,
                })
                .into()
        }
        [None, None] => Vec::new(),
    }
}

/// Boundary of the concept's α-cut seen on dimensions `dims`, as polylines
/// in data coordinates. Closed outlines repeat their first vertex at the
/// end. Dimensions the concept does not constrain give straight bands
/// spanning `view`. An α above `μ₀` gives no outline.
pub fn alpha_cut_outline(
    concept: &Concept,
    dims: (usize, usize),
    alpha: f64,
    view: &PlotView,
) -> Result<Vec<Vec<[f64; 2]>>> {
    let n = concept.structure().n();
    for d in [dims.0, dims.1] {
        if d >= n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: d + 1,
            });
        }
    }
    if dims.0 == dims.1 {
        return Err(Error::InvalidParameter("plot needs two distinct dimensions".into()));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if alpha > concept.mu0() {
        return Ok(Vec::new());
    }
    let metric = AxisMetric::new(concept, dims);
    let eps = radius(concept, alpha);
    let rects: Vec<Rect> = concept
        .core()
        .cuboids()
        .iter()
        .map(|c| [(c.p_min()[dims.0], c.p_max()[dims.0]), (c.p_min()[dims.1], c.p_max()[dims.1])])
        .collect();
    let tolerance = 1e-9 * (1.0 + eps);

    let mut lines = Vec::new();
    for (i, rect) in rects.iter().enumerate() {
        // how far a point lies outside every other cuboid's α-cut
        let clearance = |p: [f64; 2]| {
            rects
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, r)| metric.signed_distance(p, r) - eps)
                .fold(f64::INFINITY, f64::min)
        };
        for curve in curves_for(rect, &metric, eps, view) {
            trace_visible(&curve, &clearance, tolerance, &mut lines);
        }
    }
    Ok(lines)
}

fn trace_visible(
    curve: &Curve,
    clearance: &dyn Fn([f64; 2]) -> f64,
    tolerance: f64,
    lines: &mut Vec<Vec<[f64; 2]>>,
) {
    let mut stations = Vec::new();
    for k in 0..curve.pieces.len() {
        for s in 0..SEGMENTS {
            stations.push((k, s as f64 / SEGMENTS as f64));
        }
    }
    if curve.closed {
        stations.push((0, 0.0));
    } else {
        stations.push((curve.pieces.len() - 1, 1.0));
    }
    let point = |&(k, t): &(usize, f64)| curve.pieces[k].at(t);
    let visible: Vec<bool> = stations
        .iter()
        .map(|st| clearance(point(st)) >= -tolerance)
        .collect();

    if visible.iter().all(|&v| v) {
        lines.push(dedup(stations.iter().map(point).collect()));
        return;
    }
    // walk closed curves from a hidden station so visible runs never wrap
    let order: Vec<usize> = if curve.closed {
        let m = stations.len() - 1;
        let start = visible.iter().position(|&v| !v).expect("some station is hidden");
        (start..=start + m).map(|i| i % m).collect()
    } else {
        (0..stations.len()).collect()
    };

    let mut run: Vec<[f64; 2]> = Vec::new();
    for w in 0..order.len() {
        let i = order[w];
        if w > 0 {
            let prev = order[w - 1];
            if visible[prev] != visible[i] {
                let crossing = bisect(curve, stations[prev], stations[i], clearance, visible[prev]);
                run.push(crossing);
                if visible[prev] {
                    lines.push(dedup(std::mem::take(&mut run)));
                }
            }
        }
        if visible[i] {
            run.push(point(&stations[i]));
        }
    }
    if run.len() > 1 {
        lines.push(dedup(run));
    }
    lines.retain(|l| l.len() > 1);
}

/// Point on the curve between two stations where visibility changes.
fn bisect(
    curve: &Curve,
    a: (usize, f64),
    b: (usize, f64),
    clearance: &dyn Fn([f64; 2]) -> f64,
    a_visible: bool,
) -> [f64; 2] {
    // neighbouring stations either share a piece or b starts the next one
    let (k, t0, t1) = if a.0 == b.0 && b.1 > a.1 {
        (a.0, a.1, b.1)
    } else {
        (a.0, a.1, a.1 + 1.0 / SEGMENTS as f64)
    };
    let piece = curve.pieces[k];
    let (mut lo, mut hi) = (t0, t1.min(1.0));
    for _ in 0..BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if (clearance(piece.at(mid)) >= 0.0) == a_visible {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    piece.at(0.5 * (lo + hi))
}

fn dedup(mut points: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    points.dedup();
    points
}

/// Renders the named concepts on two dimensions as an SVG document, with
/// crisp cores filled and one α-cut outline per requested α.
pub fn render_plot(
    space: &Space,
    concept_names: &[&str],
    dims: (&str, &str),
    alphas: &[f64],
) -> Result<String> {
    let structure = space.structure();
    let index = |name: &str| {
        structure
            .dimension_index(name)
            .ok_or_else(|| Error::UnknownDimension(name.to_string()))
    };
    let (dx, dy) = (index(dims.0)?, index(dims.1)?);
    if dx == dy {
        return Err(Error::InvalidParameter("plot needs two distinct dimensions".into()));
    }
    for &a in alphas {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {a}")));
        }
    }
    let concepts = concept_names
        .iter()
        .map(|name| space.concept(name))
        .collect::<Result<Vec<_>>>()?;
    let view = PlotView::fit(&concepts, (dx, dy), alphas);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = plot_w / (view.x.1 - view.x.0);
    let sy = plot_h / (view.y.1 - view.y.0);
    let px = |x: f64| LEFT + (x - view.x.0) * sx;
    let py = |y: f64| TOP + plot_h - (y - view.y.0) * sy;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<defs><clipPath id="plot-area"><rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}"/></clipPath></defs>
<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>
<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let x = view.x.0 + f * (view.x.1 - view.x.0);
        let y = view.y.0 + f * (view.y.1 - view.y.0);
        let (tx, ty) = (px(x), py(y));
        let _ = writeln!(
            svg,
            r#"<line x1="{tx:.2}" y1="{b}" x2="{tx:.2}" y2="{b2}" stroke="black"/><text x="{tx:.2}" y="{bt}" text-anchor="middle">{x:.2}</text>
<line x1="{LEFT}" y1="{ty:.2}" x2="{l2}" y2="{ty:.2}" stroke="black"/><text x="{lt}" y="{ty4:.2}" text-anchor="end">{y:.2}</text>"#,
            b = TOP + plot_h,
            b2 = TOP + plot_h + 5.0,
            bt = TOP + plot_h + 18.0,
            l2 = LEFT - 5.0,
            lt = LEFT - 8.0,
            ty4 = ty + 4.0,
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{cx}" y="{ly}" text-anchor="middle" font-size="14">{xl}</text>
<text x="18" y="{cy}" text-anchor="middle" font-size="14" transform="rotate(-90 18 {cy})">{yl}</text>"#,
        cx = LEFT + plot_w / 2.0,
        ly = HEIGHT - 15.0,
        cy = TOP + plot_h / 2.0,
        xl = escape(dims.0),
        yl = escape(dims.1),
    );

    let _ = writeln!(
        svg,
        r#"<g clip-path="url(#plot-area)"><g transform="matrix({sx} 0 0 {nsy} {ex} {ey})">"#,
        nsy = -sy,
        ex = LEFT - view.x.0 * sx,
        ey = TOP + plot_h + view.y.0 * sy,
    );
    for (ci, (name, concept)) in concept_names.iter().zip(&concepts).enumerate() {
        let color = PALETTE[ci % PALETTE.len()];
        let _ = writeln!(svg, r#"<g class="concept" data-name="{}">"#, escape(name));
        for cuboid in concept.core().cuboids() {
            let clip = |lo: f64, hi: f64, (a, b): (f64, f64)| (lo.max(a), hi.min(b));
            let (x0, x1) = clip(cuboid.p_min()[dx], cuboid.p_max()[dx], view.x);
            let (y0, y1) = clip(cuboid.p_min()[dy], cuboid.p_max()[dy], view.y);
            let _ = writeln!(
                svg,
                r#"<rect class="core" x="{x0}" y="{y0}" width="{w}" height="{h}" fill="{color}" fill-opacity="0.25" stroke="{color}" vector-effect="non-scaling-stroke"/>"#,
                w = (x1 - x0).max(0.0),
                h = (y1 - y0).max(0.0),
            );
        }
        for (ai, &alpha) in alphas.iter().enumerate() {
            let dash = DASHES[ai % DASHES.len()];
            for line in alpha_cut_outline(concept, (dx, dy), alpha, &view)? {
                let mut d = String::new();
                for (k, p) in line.iter().enumerate() {
                    let _ = write!(d, "{}{} {}", if k == 0 { "M" } else { " L" }, p[0], p[1]);
                }
                let _ = writeln!(
                    svg,
                    r#"<path class="alpha-cut" data-alpha="{alpha}" d="{d}" fill="none" stroke="{color}" stroke-width="1.5" stroke-dasharray="{dash}" vector-effect="non-scaling-stroke"/>"#
                );
            }
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</g></g>\n");

    let rows = concepts.len() + alphas.len();
    let _ = writeln!(
        svg,
        r#"<g class="legend"><rect x="{x}" y="{y}" width="140" height="{h}" fill="white" fill-opacity="0.85" stroke="gray"/>"#,
        x = WIDTH - RIGHT - 150.0,
        y = TOP + 10.0,
        h = 10.0 + 18.0 * rows as f64,
    );
    for (ci, name) in concept_names.iter().enumerate() {
        let y = TOP + 28.0 + 18.0 * ci as f64;
        let x = WIDTH - RIGHT - 140.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{x}" y="{ry}" width="14" height="10" fill="{c}" fill-opacity="0.5" stroke="{c}"/><text x="{tx}" y="{y}">{n}</text>"#,
            ry = y - 9.0,
            c = PALETTE[ci % PALETTE.len()],
            tx = x + 20.0,
            n = escape(name),
        );
    }
    for (ai, alpha) in alphas.iter().enumerate() {
        let y = TOP + 28.0 + 18.0 * (concepts.len() + ai) as f64;
        let x = WIDTH - RIGHT - 140.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{x}" y1="{ly}" x2="{x2}" y2="{ly}" stroke="black" stroke-dasharray="{dash}"/><text x="{tx}" y="{y}">α = {alpha}</text>"#,
            ly = y - 4.0,
            x2 = x + 14.0,
            dash = DASHES[ai % DASHES.len()],
            tx = x + 20.0,
        );
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}

/// Writes [`render_plot`] output to `path`.
pub fn export_plot(
    space: &Space,
    concept_names: &[&str],
    dims: (&str, &str),
    alphas: &[f64],
    path: impl AsRef<Path>,
) -> Result<()> {
    let svg = render_plot(space, concept_names, dims, alphas)?;
    let path = path.as_ref();
    fs::write(path, svg).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space_io::fruit_space;

    fn lift(concept: &Concept, dims: (usize, usize), p: [f64; 2]) -> Vec<f64> {
        let mut x: Vec<f64> = concept
            .core()
            .midpoint()
            .into_iter()
            .map(|v| if v.is_nan() { 0.0 } else { v })
            .collect();
        x[dims.0] = p[0];
        x[dims.1] = p[1];
        x
    }

    fn inside(poly: &[[f64; 2]], p: [f64; 2]) -> bool {
        let mut odd = false;
        for w in poly.windows(2) {
            let (a, b) = (w[0], w[1]);
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                if p[0] < x {
                    odd = !odd;
                }
            }
        }
        odd
    }

    #[test]
    fn vertices_sit_on_the_alpha_level() {
        let space = fruit_space();
        for (_, concept) in space.concepts() {
            for dims in [(0, 2), (0, 1), (1, 2)] {
                let view = PlotView::fit(&[concept], dims, &[0.25, 0.5]);
                for alpha in [0.25, 0.5, 0.9] {
                    for line in alpha_cut_outline(concept, dims, alpha, &view).unwrap() {
                        for p in line {
                            let m = concept.membership(&lift(concept, dims, p));
                            assert!((m - alpha).abs() < 1e-6, "{m} vs {alpha}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mu0_outline_is_the_core_rectangle() {
        let space = fruit_space();
        let pear = space.concept("pear").unwrap();
        let view = PlotView::fit(&[pear], (0, 2), &[1.0]);
        let lines = alpha_cut_outline(pear, (0, 2), 1.0, &view).unwrap();
        assert_eq!(lines.len(), 1);
        let corners = [[0.5, 0.35], [0.7, 0.35], [0.7, 0.45], [0.5, 0.45]];
        for p in &lines[0] {
            let on_edge = (p[0] - 0.5).abs() < 1e-9
                || (p[0] - 0.7).abs() < 1e-9
                || (p[1] - 0.35).abs() < 1e-9
                || (p[1] - 0.45).abs() < 1e-9;
            assert!(on_edge);
        }
        for c in corners {
            assert!(lines[0].iter().any(|p| (p[0] - c[0]).hypot(p[1] - c[1]) < 1e-9));
        }
    }

    #[test]
    fn lower_alpha_encloses_higher_alpha() {
        let space = fruit_space();
        let lemon = space.concept("lemon").unwrap();
        let view = PlotView::fit(&[lemon], (0, 2), &[0.25]);
        let outer = &alpha_cut_outline(lemon, (0, 2), 0.25, &view).unwrap()[0];
        let inner = &alpha_cut_outline(lemon, (0, 2), 0.5, &view).unwrap()[0];
        assert!(inner.iter().all(|&p| inside(outer, p)));
        assert!(!outer.iter().any(|&p| inside(inner, p)));
    }

    #[test]
    fn unconstrained_dimension_gives_a_band() {
        let space = fruit_space();
        let red = space.concept("red").unwrap();
        let view = PlotView { x: (0.0, 1.0), y: (0.0, 1.0) };
        let lines = alpha_cut_outline(red, (0, 2), 0.5, &view).unwrap();
        assert_eq!(lines.len(), 2);
        let eps = 2f64.ln() / 20.0;
        assert!((lines[0][0][0] - (0.9 - eps)).abs() < 1e-12);
        assert!((lines[1][0][0] - (1.0 + eps)).abs() < 1e-12);
    }

    #[test]
    fn svg_lists_every_concept() {
        let space = fruit_space();
        let names: Vec<&str> = space.concepts().keys().map(String::as_str).collect();
        let svg = render_plot(&space, &names, ("hue", "sweet"), &[0.5]).unwrap();
        assert!(svg.starts_with("<?xml"));
        for name in &names {
            assert!(svg.contains(&format!(r#"data-name="{name}""#)));
        }
        assert!(svg.contains(">hue</text>") && svg.contains(">sweet</text>"));
        assert!(render_plot(&space, &["plum"], ("hue", "sweet"), &[0.5]).is_err());
        assert!(render_plot(&space, &["pear"], ("hue", "weight"), &[0.5]).is_err());
    }
}
