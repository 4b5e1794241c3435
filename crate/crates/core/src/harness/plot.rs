//! Minimal SVG output: box-whisker panels of sensitivity and log-scale
//! p-value scatters.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{io_err, Result};
use crate::eval::{boxplot_summary, BoxplotSummary};

use super::{fmt_f64, PValueRow, RunRecord};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 90.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    )
}

/// Maps `[lo, hi]` onto the plot area, `hi` at the top.
struct YAxis {
    lo: f64,
    hi: f64,
}

impl YAxis {
    fn y(&self, v: f64) -> f64 {
        let span = if self.hi > self.lo { self.hi - self.lo } else { 1.0 };
        let frac = (v - self.lo) / span;
        TOP + (1.0 - frac) * (HEIGHT - TOP - BOTTOM)
    }
}

fn axes(svg: &mut String, ticks: &[(f64, String)], axis: &YAxis, label: &str) {
    let x0 = LEFT;
    let (ytop, ybot) = (TOP, HEIGHT - BOTTOM);
    let _ = writeln!(svg, "<line x1=\"{x0}\" y1=\"{ytop}\" x2=\"{x0}\" y2=\"{ybot}\" stroke=\"black\"/>");
    let _ = writeln!(svg, "<line x1=\"{x0}\" y1=\"{ybot}\" x2=\"{}\" y2=\"{ybot}\" stroke=\"black\"/>", WIDTH - RIGHT);
    for (v, text) in ticks {
        let y = axis.y(*v);
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{}</text>",
            x0 - 4.0,
            y + 3.0,
            escape(text)
        );
    }
    let _ = writeln!(
        svg,
        "<text transform=\"translate(14 {:.2}) rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
        (ytop + ybot) / 2.0,
        escape(label)
    );
}

fn x_label(svg: &mut String, x: f64, text: &str) {
    let y = HEIGHT - BOTTOM + 12.0;
    let _ = writeln!(
        svg,
        "<text transform=\"translate({x:.2} {y:.2}) rotate(45)\" font-family=\"sans-serif\" font-size=\"10\">{}</text>",
        escape(text)
    );
}

/// One box glyph (`class="box"`) per entry, with whiskers, median line and
/// outlier points.
pub fn render_box_panel(title: &str, boxes: &[(String, BoxplotSummary)]) -> String {
    let lo = boxes.iter().map(|b| b.1.min).fold(0.0, f64::min);
    let hi = boxes.iter().map(|b| b.1.max).fold(1.0, f64::max);
    let axis = YAxis { lo, hi };
    let mut svg = header(title);
    let ticks: Vec<(f64, String)> = (0..=4).map(|i| lo + (hi - lo) * i as f64 / 4.0).map(|v| (v, format!("{v:.2}"))).collect();
    axes(&mut svg, &ticks, &axis, "sensitivity");
    let slot = (WIDTH - LEFT - RIGHT) / boxes.len().max(1) as f64;
    let half = (slot * 0.3).min(20.0);
    for (i, (label, b)) in boxes.iter().enumerate() {
        let cx = LEFT + slot * (i as f64 + 0.5);
        let (y_q1, y_q3, y_med) = (axis.y(b.q1), axis.y(b.q3), axis.y(b.median));
        let (y_wl, y_wh) = (axis.y(b.whisker_low), axis.y(b.whisker_high));
        let _ = writeln!(svg, "<g>");
        let _ = writeln!(svg, "<line x1=\"{cx:.2}\" y1=\"{y_wh:.2}\" x2=\"{cx:.2}\" y2=\"{y_q3:.2}\" stroke=\"black\"/>");
        let _ = writeln!(svg, "<line x1=\"{cx:.2}\" y1=\"{y_q1:.2}\" x2=\"{cx:.2}\" y2=\"{y_wl:.2}\" stroke=\"black\"/>");
        for y in [y_wl, y_wh] {
            let _ = writeln!(
                svg,
                "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>",
                cx - half / 2.0,
                cx + half / 2.0
            );
        }
        let _ = writeln!(
            svg,
            "<rect class=\"box\" x=\"{:.2}\" y=\"{y_q3:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#cfe0f3\" stroke=\"black\"/>",
            cx - half,
            2.0 * half,
            (y_q1 - y_q3).max(0.0)
        );
        let _ = writeln!(
            svg,
            "<line class=\"median\" x1=\"{:.2}\" y1=\"{y_med:.2}\" x2=\"{:.2}\" y2=\"{y_med:.2}\" stroke=\"black\" stroke-width=\"2\"/>",
            cx - half,
            cx + half
        );
        for &o in &b.outliers {
            let _ = writeln!(
                svg,
                "<circle class=\"outlier\" cx=\"{cx:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>",
                axis.y(o)
            );
        }
        let _ = writeln!(svg, "</g>");
        x_label(&mut svg, cx, label);
    }
    svg.push_str("</svg>\n");
    svg
}

/// Smallest p-value drawn; zeros are pinned here on the log axis.
const P_FLOOR: f64 = 1e-300;

/// p-values on a log10 axis with a horizontal reference line at `alpha`.
pub fn render_pvalue_panel(title: &str, points: &[(String, f64)], alpha: f64) -> String {
    let logs: Vec<f64> = points.iter().map(|p| p.1.max(P_FLOOR).log10()).collect();
    let lo = logs.iter().copied().fold(alpha.log10(), f64::min).floor() - 1.0;
    let axis = YAxis { lo, hi: 0.0 };
    let mut svg = header(title);
    let step = ((-lo) / 6.0).ceil().max(1.0) as i64;
    let ticks: Vec<(f64, String)> =
        (0..).map(|i: i64| -i * step).take_while(|&e| e as f64 >= lo).map(|e| (e as f64, format!("1e{e}"))).collect();
    axes(&mut svg, &ticks, &axis, "p-value");
    let ya = axis.y(alpha.log10());
    let _ = writeln!(
        svg,
        "<line class=\"alpha\" x1=\"{LEFT}\" y1=\"{ya:.2}\" x2=\"{}\" y2=\"{ya:.2}\" stroke=\"black\" stroke-width=\"1.5\"/>",
        WIDTH - RIGHT
    );
    let slot = (WIDTH - LEFT - RIGHT) / points.len().max(1) as f64;
    for (i, ((label, p), lp)) in points.iter().zip(&logs).enumerate() {
        let cx = LEFT + slot * (i as f64 + 0.5);
        let _ = writeln!(
            svg,
            "<circle class=\"pvalue\" cx=\"{cx:.2}\" cy=\"{:.2}\" r=\"3.5\" fill=\"#c0392b\"><title>{}</title></circle>",
            axis.y(*lp),
            fmt_f64(*p)
        );
        x_label(&mut svg, cx, label);
    }
    svg.push_str("</svg>\n");
    svg
}

fn group_in_order<K: PartialEq + Clone, T>(items: impl Iterator<Item = (K, T)>) -> Vec<(K, Vec<T>)> {
    let mut out: Vec<(K, Vec<T>)> = Vec::new();
    for (k, v) in items {
        match out.iter_mut().find(|g| g.0 == k) {
            Some(g) => g.1.push(v),
            None => out.push((k, vec![v])),
        }
    }
    out
}

/// Writes `box_<model>_<n_nodes>_<sigma>.svg` for every group of successful
/// records and `pvalues_<model>.svg` for every model in `pvalues`. Returns
/// the written paths.
pub fn emit_plots(records: &[RunRecord], pvalues: &[PValueRow], alpha: f64, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut written = Vec::new();
    let mut write = |name: String, svg: String| -> Result<()> {
        let path = out_dir.join(name);
        std::fs::write(&path, svg).map_err(io_err(&path))?;
        written.push(path);
        Ok(())
    };

    let panels = group_in_order(records.iter().map(|r| ((r.model, r.n_nodes, r.sigma.to_bits()), r)));
    for ((model, n_nodes, sigma), recs) in panels {
        let sigma = f64::from_bits(sigma);
        let cells = group_in_order(recs.into_iter().map(|r| ((r.topology.clone(), r.algorithm), r)));
        let mut boxes = Vec::new();
        for ((topology, algorithm), rs) in cells {
            let sample: Vec<f64> = rs.iter().filter(|r| r.is_ok()).filter_map(|r| r.sensitivity).collect();
            match boxplot_summary(&sample) {
                Some(b) => boxes.push((format!("{topology} {}", algorithm.as_str()), b)),
                None => log::warn!(
                    "no sensitivity values for {topology}/{} in {}, n={n_nodes}, sigma={}; box skipped",
                    algorithm.as_str(),
                    model.as_str(),
                    fmt_f64(sigma)
                ),
            }
        }
        if boxes.is_empty() {
            log::warn!("panel {} n={n_nodes} sigma={} is empty; skipped", model.as_str(), fmt_f64(sigma));
            continue;
        }
        let title = format!("{} model, {n_nodes} nodes, sigma = {}", model.as_str(), fmt_f64(sigma));
        write(format!("box_{}_{n_nodes}_{}.svg", model.as_str(), fmt_f64(sigma)), render_box_panel(&title, &boxes))?;
    }

    for (model, rows) in group_in_order(pvalues.iter().map(|r| (r.model, r))) {
        let points: Vec<(String, f64)> = rows
            .iter()
            .filter_map(|r| {
                let p = r.result.as_ref()?.p_value;
                Some((format!("n={} s={} {}", r.n_nodes, fmt_f64(r.sigma), r.algorithm.as_str()), p))
            })
            .collect();
        if points.is_empty() {
            log::warn!("no p-values for the {} model; scatter skipped", model.as_str());
            continue;
        }
        let first = rows[0];
        let title = format!("{} model: {} vs {}", model.as_str(), first.topology_a, first.topology_b);
        write(format!("pvalues_{}.svg", model.as_str()), render_pvalue_panel(&title, &points, alpha))?;
    }
    Ok(written)
}
