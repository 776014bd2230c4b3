//! Static factor-map export as plain SVG 1.1 (no scripts).
//!
//! Row points are drawn as filled circles, column points as squares,
//! both labeled. Axis titles carry the dispersion share of each
//! plotted axis. The layout is a pure function of the decomposition,
//! so output bytes are stable across runs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use powerca::Decomposition;

use crate::error::{io_err, CliError, Result};
use crate::report::axis_percents;

/// Which axes to plot; `Single` draws a one-dimensional strip plot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapAxes {
    Pair(usize, usize),
    Single(usize),
}

impl MapAxes {
    /// Parses the `axes=1,2` / `axes=1` flag value.
    pub fn parse(spec: &str) -> Result<Self> {
        let rest = spec
            .strip_prefix("axes=")
            .ok_or_else(|| CliError::Usage(format!("expected axes=A[,B], found {spec:?}")))?;
        let parts: Vec<&str> = rest.split(',').collect();
        let parse_axis = |s: &str| -> Result<usize> {
            let axis: usize = s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad axis number {s:?}")))?;
            if axis == 0 {
                return Err(CliError::Usage("axes are 1-based".into()));
            }
            Ok(axis)
        };
        match parts.as_slice() {
            [one] => Ok(MapAxes::Single(parse_axis(one)?)),
            [one, two] => Ok(MapAxes::Pair(parse_axis(one)?, parse_axis(two)?)),
            _ => Err(CliError::Usage(format!(
                "expected one or two axes, found {spec:?}"
            ))),
        }
    }

    fn max_axis(&self) -> usize {
        match *self {
            MapAxes::Pair(a, b) => a.max(b),
            MapAxes::Single(a) => a,
        }
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 70.0;

const ROW_COLOR: &str = "#1f77b4";
const COL_COLOR: &str = "#d62728";

struct Frame {
    scale: f64,
    cx: f64,
    cy: f64,
    x_mid: f64,
    y_mid: f64,
}

impl Frame {
    /// Equal-aspect mapping of the padded data bounding box into the
    /// plot area, centered.
    fn fit(xs: &[f64], ys: &[f64]) -> Frame {
        let (mut xmin, mut xmax) = bounds(xs);
        let (mut ymin, mut ymax) = bounds(ys);
        pad(&mut xmin, &mut xmax);
        pad(&mut ymin, &mut ymax);
        let plot_w = WIDTH - 2.0 * MARGIN;
        let plot_h = HEIGHT - 2.0 * MARGIN;
        let scale = (plot_w / (xmax - xmin)).min(plot_h / (ymax - ymin));
        Frame {
            scale,
            cx: WIDTH / 2.0,
            cy: HEIGHT / 2.0,
            x_mid: (xmin + xmax) / 2.0,
            y_mid: (ymin + ymax) / 2.0,
        }
    }

    fn x(&self, v: f64) -> f64 {
        self.cx + (v - self.x_mid) * self.scale
    }

    fn y(&self, v: f64) -> f64 {
        // SVG y grows downward
        self.cy - (v - self.y_mid) * self.scale
    }
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        min = min.min(v);
        max = max.max(v);
    }
    (min, max)
}

fn pad(min: &mut f64, max: &mut f64) {
    let span = *max - *min;
    let pad = if span > 0.0 { 0.1 * span } else { 1.0 };
    *min -= pad;
    *max += pad;
}

fn coord(v: f64) -> String {
    format!("{v:.2}")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Point<'a> {
    x: f64,
    y: f64,
    label: &'a str,
}

fn render(
    title: &str,
    x_title: &str,
    y_title: &str,
    rows: &[Point<'_>],
    cols: &[Point<'_>],
) -> String {
    let xs: Vec<f64> = rows.iter().chain(cols).map(|p| p.x).collect();
    let ys: Vec<f64> = rows.iter().chain(cols).map(|p| p.y).collect();
    let frame = Frame::fit(&xs, &ys);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // origin cross-hairs in data space
    let x0 = frame.x(0.0);
    let y0 = frame.y(0.0);
    let _ = writeln!(
        svg,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#cccccc" stroke-width="1"/>"##,
        coord(MARGIN / 2.0),
        coord(y0),
        coord(WIDTH - MARGIN / 2.0),
        coord(y0)
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#cccccc" stroke-width="1"/>"##,
        coord(x0),
        coord(MARGIN / 2.0),
        coord(x0),
        coord(HEIGHT - MARGIN / 2.0)
    );

    let _ = writeln!(
        svg,
        r#"<text x="{}" y="30" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        coord(WIDTH / 2.0),
        xml_escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
        coord(WIDTH / 2.0),
        coord(HEIGHT - 20.0),
        xml_escape(x_title)
    );
    if !y_title.is_empty() {
        let _ = writeln!(
            svg,
            r#"<text x="20" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 20 {})">{}</text>"#,
            coord(HEIGHT / 2.0),
            coord(HEIGHT / 2.0),
            xml_escape(y_title)
        );
    }

    for p in rows {
        let (px, py) = (frame.x(p.x), frame.y(p.y));
        let _ = writeln!(
            svg,
            r#"<circle cx="{}" cy="{}" r="3.5" fill="{ROW_COLOR}"/>"#,
            coord(px),
            coord(py)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" fill="{ROW_COLOR}">{}</text>"#,
            coord(px + 5.0),
            coord(py - 4.0),
            xml_escape(p.label)
        );
    }
    for p in cols {
        let (px, py) = (frame.x(p.x), frame.y(p.y));
        let _ = writeln!(
            svg,
            r#"<rect x="{}" y="{}" width="6" height="6" fill="{COL_COLOR}"/>"#,
            coord(px - 3.0),
            coord(py - 3.0)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" fill="{COL_COLOR}">{}</text>"#,
            coord(px + 5.0),
            coord(py - 4.0),
            xml_escape(p.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Writes the factor map of the chosen axes.
///
/// Fails with [`CliError::NotEnoughAxes`] when a requested axis exceeds
/// the number of retained axes; a single-axis decomposition is plotted
/// by requesting `axes=1`.
pub fn emit_map(
    d: &Decomposition,
    row_labels: &[String],
    col_labels: &[String],
    axes: MapAxes,
    path: &Path,
) -> Result<()> {
    if axes.max_axis() > d.rank() {
        return Err(CliError::NotEnoughAxes {
            requested: axes.max_axis(),
            available: d.rank(),
        });
    }
    let percents = axis_percents(d);
    let title = format!("{} factor map ({})", d.method, d.source);

    let svg = match axes {
        MapAxes::Pair(a1, a2) => {
            let (i1, i2) = (a1 - 1, a2 - 1);
            let rows: Vec<Point<'_>> = row_labels
                .iter()
                .enumerate()
                .map(|(i, l)| Point {
                    x: d.axes[i1].f[i],
                    y: d.axes[i2].f[i],
                    label: l,
                })
                .collect();
            let cols: Vec<Point<'_>> = col_labels
                .iter()
                .enumerate()
                .map(|(j, l)| Point {
                    x: d.axes[i1].g[j],
                    y: d.axes[i2].g[j],
                    label: l,
                })
                .collect();
            render(
                &title,
                &format!("Axis {a1} ({:.2}%)", percents[i1]),
                &format!("Axis {a2} ({:.2}%)", percents[i2]),
                &rows,
                &cols,
            )
        }
        MapAxes::Single(a1) => {
            let i1 = a1 - 1;
            // strip plot: rows above the line, columns below
            let rows: Vec<Point<'_>> = row_labels
                .iter()
                .enumerate()
                .map(|(i, l)| Point {
                    x: d.axes[i1].f[i],
                    y: 1.0,
                    label: l,
                })
                .collect();
            let cols: Vec<Point<'_>> = col_labels
                .iter()
                .enumerate()
                .map(|(j, l)| Point {
                    x: d.axes[i1].g[j],
                    y: -1.0,
                    label: l,
                })
                .collect();
            render(
                &title,
                &format!("Axis {a1} ({:.2}%)", percents[i1]),
                "",
                &rows,
                &cols,
            )
        }
    };
    fs::write(path, svg).map_err(io_err(path))?;
    Ok(())
}
