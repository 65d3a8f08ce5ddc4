//! Static SVG rendering of sweep summaries and centroid trajectories.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::HarnessError;
use crate::experiment::{read_rows, SummaryRecord, TraceRow, TRACE_SCHEMA};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    KVsDelta,
    Trajectory,
}

impl FromStr for PlotKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "k_vs_delta" | "k-vs-delta" => Ok(PlotKind::KVsDelta),
            "trajectory" => Ok(PlotKind::Trajectory),
            _ => Err("expected k_vs_delta or trajectory".into()),
        }
    }
}

/// Renders `input` and writes the SVG to `output`. Nothing is written when
/// the input is empty or does not match `kind`.
pub fn emit_plot(
    input: &Path,
    kind: PlotKind,
    output: &Path,
    run: Option<u64>,
) -> Result<(), HarnessError> {
    let svg = match kind {
        PlotKind::KVsDelta => k_vs_delta_svg(input, &read_rows(input)?)?,
        PlotKind::Trajectory => {
            let goal = read_goal(input)?;
            trajectory_svg(input, &read_rows(input)?, goal, run)?
        }
    };
    fs::write(output, svg).map_err(|e| HarnessError::io(output, e))
}

/// Goal disc `(x, y, radius)` from a trace header comment, if recorded.
pub fn read_goal(path: &Path) -> Result<Option<(f64, f64, f64)>, HarnessError> {
    let file = fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut first = String::new();
    BufReader::new(file)
        .read_line(&mut first)
        .map_err(|e| HarnessError::io(path, e))?;
    let Some(meta) = first.trim().strip_prefix('#') else {
        return Ok(None);
    };
    let meta = meta.trim();
    if !meta.starts_with(TRACE_SCHEMA) {
        return Err(HarnessError::Schema {
            path: PathBuf::from(path),
            reason: format!("expected a `{TRACE_SCHEMA}` header"),
        });
    }
    let field = |name: &str| {
        meta.split_whitespace()
            .filter_map(|t| t.split_once('='))
            .find(|(k, _)| *k == name)
            .and_then(|(_, v)| v.parse::<f64>().ok())
    };
    Ok(
        match (field("goal_x"), field("goal_y"), field("goal_radius")) {
            (Some(x), Some(y), Some(r)) => Some((x, y, r)),
            _ => None,
        },
    )
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        (lo - 1.0, hi + 1.0)
    }
}

fn open_svg(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{title}</text>"#,
        WIDTH / 2.0
    );
    s
}

fn axes(s: &mut String, xlabel: &str, ylabel: &str) {
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<path class="axes" d="M{l} {t} L{l} {b} L{r} {b}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{ylabel}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
}

fn tick_x(s: &mut String, frame: &Frame, x: f64, label: &str) {
    let px = frame.px(x);
    let b = HEIGHT - MARGIN;
    let _ = writeln!(
        s,
        r#"<line x1="{px:.2}" y1="{b}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{label}</text>"#,
        b + 5.0,
        b + 18.0
    );
}

fn tick_y(s: &mut String, frame: &Frame, y: f64, label: &str) {
    let py = frame.py(y);
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{py:.2}" x2="{MARGIN}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{label}</text>"#,
        MARGIN - 5.0,
        MARGIN - 8.0,
        py + 4.0
    );
}

fn polyline(s: &mut String, class: &str, color: &str, dashed: bool, pts: &[(f64, f64)]) {
    let points: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let dash = if dashed {
        r#" stroke-dasharray="6 4""#
    } else {
        ""
    };
    let _ = writeln!(
        s,
        r#"<polyline class="{class}" points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
        points.join(" ")
    );
}

fn k_vs_delta_svg(path: &Path, rows: &[SummaryRecord]) -> Result<String, HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::EmptyCsv(path.into()));
    }
    if rows.iter().any(|r| r.delta_descent.is_none()) {
        return Err(HarnessError::Schema {
            path: path.into(),
            reason: "k_vs_delta needs a delta_descent value on every row".into(),
        });
    }
    let mut groups: Vec<(f64, Vec<&SummaryRecord>)> = Vec::new();
    for r in rows {
        match groups.iter_mut().find(|(d0, _)| *d0 == r.d0) {
            Some((_, g)) => g.push(r),
            None => groups.push((r.d0, vec![r])),
        }
    }
    let deltas = rows.iter().filter_map(|r| r.delta_descent);
    let (dmin, dmax) = deltas.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), d| {
        (a.min(d), b.max(d))
    });
    let ys: Vec<f64> = rows
        .iter()
        .flat_map(|r| [r.mean_steps, r.k_delta_bound])
        .flatten()
        .filter(|y| *y > 0.0)
        .collect();
    if ys.is_empty() {
        return Err(HarnessError::Schema {
            path: path.into(),
            reason: "no positive mean_steps or k_delta_bound values".into(),
        });
    }
    let lo = ys
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
        .log10()
        .floor();
    let hi = ys
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
        .log10()
        .ceil();
    let (x0, x1) = padded(dmin, dmax);
    let frame = Frame {
        x0,
        x1,
        y0: lo,
        y1: if hi > lo { hi } else { lo + 1.0 },
    };

    let mut s = open_svg("steps to target vs descent threshold");
    axes(&mut s, "delta", "steps (log scale)");
    for d in groups[0].1.iter().filter_map(|r| r.delta_descent) {
        tick_x(&mut s, &frame, d, &format!("{d}"));
    }
    let mut e = frame.y0;
    while e <= frame.y1 + 1e-9 {
        tick_y(&mut s, &frame, e, &format!("1e{e}"));
        e += 1.0;
    }
    for (i, (d0, group)) in groups.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let project = |f: fn(&SummaryRecord) -> Option<f64>| -> Vec<(f64, f64)> {
            group
                .iter()
                .filter_map(|r| match (r.delta_descent, f(r)) {
                    (Some(d), Some(y)) if y > 0.0 => Some((frame.px(d), frame.py(y.log10()))),
                    _ => None,
                })
                .collect()
        };
        polyline(
            &mut s,
            "simulated",
            color,
            false,
            &project(|r| r.mean_steps),
        );
        polyline(&mut s, "theory", color, true, &project(|r| r.k_delta_bound));
        let ly = MARGIN + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{color}">D0 = {d0}</text>"#,
            WIDTH - MARGIN - 70.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn trajectory_svg(
    path: &Path,
    rows: &[TraceRow],
    goal: Option<(f64, f64, f64)>,
    run: Option<u64>,
) -> Result<String, HarnessError> {
    let first = rows
        .first()
        .ok_or_else(|| HarnessError::EmptyCsv(path.into()))?;
    let run = run.unwrap_or(first.run_id);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.run_id == run)
        .map(|r| (r.centroid_x, r.centroid_y))
        .collect();
    if pts.is_empty() {
        return Err(HarnessError::Schema {
            path: path.into(),
            reason: format!("no rows for run {run}"),
        });
    }
    let mut xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let mut ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    if let Some((gx, gy, r)) = goal {
        xs.extend([gx - r, gx + r]);
        ys.extend([gy - r, gy + r]);
    }
    let min = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (x0, x1) = padded(min(&xs), max(&xs));
    let (y0, y1) = padded(min(&ys), max(&ys));
    // equal scale on both axes
    let span = (x1 - x0).max(y1 - y0);
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let frame = Frame {
        x0: cx - span / 2.0,
        x1: cx + span / 2.0,
        y0: cy - span / 2.0,
        y1: cy + span / 2.0,
    };
    let scale = (HEIGHT - 2.0 * MARGIN) / span;

    let mut s = open_svg(&format!("centroid trajectory, run {run}"));
    axes(&mut s, "x", "y");
    for x in [frame.x0, cx, frame.x1] {
        tick_x(&mut s, &frame, x, &format!("{x:.1}"));
    }
    for y in [frame.y0, cy, frame.y1] {
        tick_y(&mut s, &frame, y, &format!("{y:.1}"));
    }
    if let Some((gx, gy, r)) = goal {
        let _ = writeln!(
            s,
            r##"<circle class="goal" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="#2ca02c" fill-opacity="0.25" stroke="#2ca02c"/>"##,
            frame.px(gx),
            frame.py(gy),
            (r * scale).max(1.0)
        );
    }
    let screen: Vec<(f64, f64)> = pts
        .iter()
        .map(|&(x, y)| (frame.px(x), frame.py(y)))
        .collect();
    polyline(&mut s, "path", "#1f77b4", false, &screen);
    let _ = writeln!(
        s,
        r#"<circle class="start" cx="{:.2}" cy="{:.2}" r="4" fill="black"/>"#,
        screen[0].0, screen[0].1
    );
    s.push_str("</svg>\n");
    Ok(s)
}
