use std::path::Path;

use anyhow::{anyhow, Result};
use plotters::prelude::*;

/// One named polyline; `None` y-values break the line.
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, Option<f64>)>,
}

/// Longer series are thinned to about this many points before drawing.
const MAX_POINTS: usize = 2000;

impl Series {
    pub fn new(name: impl Into<String>, xs: &[f64], ys: &[Option<f64>]) -> Self {
        let n = xs.len().min(ys.len());
        let stride = n.div_ceil(MAX_POINTS).max(1);
        let mut points: Vec<_> = (0..n).step_by(stride).map(|i| (xs[i], ys[i])).collect();
        if n > 0 && (n - 1) % stride != 0 {
            points.push((xs[n - 1], ys[n - 1]));
        }
        Self { name: name.into(), points }
    }
}

/// Writes a static SVG line chart.
pub fn line_chart(path: &Path, title: &str, x_label: &str, y_label: &str, series: &[Series]) -> Result<()> {
    let finite = series.iter().flat_map(|s| s.points.iter()).filter_map(|(x, y)| y.map(|y| (*x, y)));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in finite.filter(|(x, y)| x.is_finite() && y.is_finite()) {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        return Err(anyhow!("nothing to plot for {}", path.display()));
    }
    let pad = |lo: f64, hi: f64| {
        let w = if hi > lo { 0.05 * (hi - lo) } else { 0.5 * lo.abs().max(1.0) };
        (lo - w, hi + w)
    };
    let ((x0, x1), (y0, y1)) = (pad(x0, x1), pad(y0, y1));

    let root = SVGBackend::new(path, (900, 560)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| anyhow!("{e}"))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(|e| anyhow!("{e}"))?;
    chart
        .configure_mesh()
        .x_desc(x_label)
        .y_desc(y_label)
        .draw()
        .map_err(|e| anyhow!("{e}"))?;
    for (i, s) in series.iter().enumerate() {
        let color = Palette99::pick(i).to_rgba();
        let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for (x, y) in &s.points {
            match y {
                Some(y) if y.is_finite() => segments.last_mut().expect("non-empty").push((*x, *y)),
                _ => segments.push(Vec::new()),
            }
        }
        let mut labelled = false;
        // Markers only where individual sweep points are readable.
        let marker = if s.points.len() <= 100 { 2 } else { 0 };
        for seg in segments.into_iter().filter(|s| !s.is_empty()) {
            let drawn = chart
                .draw_series(LineSeries::new(seg, color.stroke_width(2)).point_size(marker))
                .map_err(|e| anyhow!("{e}"))?;
            if !labelled {
                drawn.label(s.name.clone()).legend(move |(x, y)| {
                    PathElement::new(vec![(x, y), (x + 18, y)], color.stroke_width(2))
                });
                labelled = true;
            }
        }
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.85))
        .border_style(BLACK)
        .draw()
        .map_err(|e| anyhow!("{e}"))?;
    root.present().map_err(|e| anyhow!("{e}"))?;
    Ok(())
}
