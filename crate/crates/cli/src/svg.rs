//! Standalone SVG line charts of one observable channel.

use std::fmt::Write as _;

use atomlaser::{ObservableRow, ObservableSeries, PathTag};
use serde::Serialize;

use crate::error::CliError;

pub const CHANNELS: [&str; 9] = ["re_a", "im_a", "n", "nn", "re_a2", "im_a2", "Q", "S1", "S2"];

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 460.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

type Extract = fn(&ObservableRow) -> Option<f64>;

fn extractor(channel: &str) -> Option<Extract> {
    Some(match channel {
        "re_a" => |r| Some(r.a.re),
        "im_a" => |r| Some(r.a.im),
        "n" => |r| Some(r.n),
        "nn" => |r| Some(r.nn),
        "re_a2" => |r| Some(r.a2.re),
        "im_a2" => |r| Some(r.a2.im),
        "Q" => |r| r.q,
        "S1" => |r| Some(r.s1),
        "S2" => |r| Some(r.s2),
        _ => return None,
    })
}

fn style(path: PathTag) -> (&'static str, &'static str) {
    match path {
        PathTag::ClosedForm => ("#1f77b4", ""),
        PathTag::Oracle => ("#d62728", " stroke-dasharray=\"6 3\""),
        PathTag::Exact => ("#2ca02c", " stroke-dasharray=\"2 2\""),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Tick step of the form {1, 2, 5}·10^k giving roughly `target` intervals.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac <= 1.0 {
        1.0
    } else if frac <= 2.0 {
        2.0
    } else if frac <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> (Vec<f64>, usize) {
    let step = nice_step(hi - lo, 5.0);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    ((first..=last).map(|k| k as f64 * step).collect(), decimals)
}

fn label(v: f64, decimals: usize) -> String {
    // + 0.0 turns -0.0 into 0.0
    format!("{:.*}", decimals, v + 0.0)
}

#[derive(Serialize)]
struct SeriesEcho<'a> {
    path: PathTag,
    model: &'a atomlaser::AtomLaser,
    grid: &'a atomlaser::TimeGrid,
    meta: &'a atomlaser::SeriesMeta,
}

#[derive(Serialize)]
struct PlotEcho<'a> {
    channel: &'a str,
    series: Vec<SeriesEcho<'a>>,
}

/// Renders `channel` of every series on shared axes. The resolved model,
/// grid and truncation metadata of each series is embedded as JSON in
/// `<metadata>`.
pub fn emit_svg(series: &[ObservableSeries], channel: &str) -> Result<Vec<u8>, CliError> {
    let get = extractor(channel).ok_or_else(|| CliError::UnknownChannel(channel.to_string()))?;
    assert!(!series.is_empty(), "emit_svg needs at least one series");

    let t_lo = series
        .iter()
        .map(|s| s.grid.t_start())
        .fold(f64::INFINITY, f64::min);
    let t_hi = series
        .iter()
        .map(|s| s.grid.t_end())
        .fold(f64::NEG_INFINITY, f64::max);
    let values = series
        .iter()
        .flat_map(|s| s.rows.iter().filter_map(get))
        .filter(|v| v.is_finite());
    let (mut y_lo, mut y_hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let crosses_zero = y_lo < 0.0 && y_hi > 0.0;
    if !y_lo.is_finite() {
        (y_lo, y_hi) = (-1.0, 1.0);
    } else if y_hi - y_lo <= f64::EPSILON * y_hi.abs().max(y_lo.abs()).max(1.0) {
        let pad = if y_lo == 0.0 { 1.0 } else { 0.1 * y_lo.abs() };
        (y_lo, y_hi) = (y_lo - pad, y_hi + pad);
    } else {
        let pad = 0.05 * (y_hi - y_lo);
        (y_lo, y_hi) = (y_lo - pad, y_hi + pad);
    }

    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |t: f64| LEFT + (t - t_lo) / (t_hi - t_lo) * pw;
    let sy = |v: f64| TOP + (y_hi - v) / (y_hi - y_lo) * ph;

    let mut o = String::new();
    let w = &mut o;
    writeln!(
        w,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    )
    .unwrap();
    let echo = PlotEcho {
        channel,
        series: series
            .iter()
            .map(|s| SeriesEcho {
                path: s.path,
                model: &s.model,
                grid: &s.grid,
                meta: &s.meta,
            })
            .collect(),
    };
    let json = serde_json::to_string(&echo).expect("serializable");
    writeln!(w, "<metadata>{}</metadata>", escape(&json)).unwrap();
    writeln!(w, "<title>{}</title>", escape(channel)).unwrap();
    writeln!(
        w,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    )
    .unwrap();

    // axes frame
    writeln!(
        w,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>"
    )
    .unwrap();
    let (xt, xd) = ticks(t_lo, t_hi);
    for t in xt {
        let x = sx(t);
        let yb = TOP + ph;
        writeln!(
            w,
            "<line x1=\"{x:.2}\" y1=\"{yb:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            yb + 5.0
        )
        .unwrap();
        writeln!(
            w,
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            yb + 20.0,
            label(t, xd)
        )
        .unwrap();
    }
    let (yt, yd) = ticks(y_lo, y_hi);
    for v in yt {
        let y = sy(v);
        writeln!(
            w,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{LEFT}\" y2=\"{y:.2}\" stroke=\"black\"/>",
            LEFT - 5.0
        )
        .unwrap();
        writeln!(
            w,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            LEFT - 8.0,
            y + 4.0,
            label(v, yd)
        )
        .unwrap();
    }
    writeln!(
        w,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">t</text>",
        LEFT + pw / 2.0,
        HEIGHT - 15.0
    )
    .unwrap();
    writeln!(
        w,
        "<text x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.2})\">{}</text>",
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(channel)
    )
    .unwrap();

    if crosses_zero {
        let y = sy(0.0);
        writeln!(
            w,
            "<line class=\"zero\" x1=\"{LEFT}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>",
            LEFT + pw
        )
        .unwrap();
    }

    for s in series {
        let (color, dash) = style(s.path);
        // undefined samples split the curve
        let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for r in &s.rows {
            match get(r).filter(|v| v.is_finite()) {
                Some(v) => segments.last_mut().unwrap().push((sx(r.t), sy(v))),
                None => {
                    if !segments.last().unwrap().is_empty() {
                        segments.push(Vec::new());
                    }
                }
            }
        }
        for seg in segments.iter().filter(|s| !s.is_empty()) {
            let pts: Vec<String> = seg.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            writeln!(
                w,
                "<polyline class=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"{dash} points=\"{}\"/>",
                s.path.as_str(),
                pts.join(" ")
            )
            .unwrap();
        }
    }

    for (i, s) in series.iter().enumerate() {
        let (color, dash) = style(s.path);
        let x = WIDTH - RIGHT + 15.0;
        let y = TOP + 15.0 + 20.0 * i as f64;
        writeln!(
            w,
            "<line x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"2\"{dash}/>",
            x + 25.0
        )
        .unwrap();
        writeln!(
            w,
            "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            x + 32.0,
            y + 4.0,
            s.path.as_str()
        )
        .unwrap();
    }
    w.push_str("</svg>\n");
    Ok(o.into_bytes())
}
