//! Plot rendering. Every figure is drawn from a parsed CSV file, never from
//! in-memory state, so a plot can always be regenerated from its data
//! artifact. PNG and SVG backends render the same drawing.

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use anyhow::{anyhow, Context, Result};
use plotters::coord::Shift;
use plotters::prelude::*;
use plotters::style::register_font;

use crate::csvio::{read_csv, ParsedCsv};

const KIND_ORDER: [&str; 4] = ["TMSV", "1PAS", "2PAS", "2PR"];

fn kind_color(kind: &str) -> RGBColor {
    match kind {
        "TMSV" => RGBColor(120, 120, 120),
        "1PAS" => RGBColor(31, 119, 180),
        "2PAS" => RGBColor(214, 39, 40),
        "2PR" => RGBColor(140, 86, 75),
        _ => BLACK,
    }
}

/// Try to register a sans-serif font for the ab_glyph text rasterizer.
/// Returns false (and plots are skipped with a warning) when none is found.
pub fn fonts_available() -> bool {
    static FONTS: OnceLock<bool> = OnceLock::new();
    *FONTS.get_or_init(|| {
        let mut candidates: Vec<PathBuf> = Vec::new();
        if let Ok(custom) = std::env::var("CVMDI_FONT") {
            candidates.push(PathBuf::from(custom));
        }
        candidates.extend(
            [
                "/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf",
                "/usr/share/fonts/TTF/DejaVuSans.ttf",
                "/usr/share/fonts/dejavu/DejaVuSans.ttf",
                "/usr/local/share/fonts/DejaVuSans.ttf",
            ]
            .iter()
            .map(PathBuf::from),
        );
        for path in candidates {
            if let Ok(bytes) = std::fs::read(&path) {
                let leaked: &'static [u8] = Box::leak(bytes.into_boxed_slice());
                if register_font("sans-serif", FontStyle::Normal, leaked).is_ok() {
                    return true;
                }
            }
        }
        eprintln!("warning: no usable font found; plots will be skipped (set CVMDI_FONT)");
        false
    })
}

fn float_col(csv: &ParsedCsv, name: &str) -> Result<usize> {
    csv.column(name)
        .ok_or_else(|| anyhow!("CSV is missing column {name:?}"))
}

fn parse_cell(row: &[String], idx: usize) -> Option<f64> {
    row.get(idx).and_then(|s| s.parse::<f64>().ok())
}

/// Per-kind polyline extracted from a CSV.
struct Series {
    kind: String,
    points: Vec<(f64, f64)>,
}

fn extract_series(csv: &ParsedCsv, x_col: usize, kind_col: usize, y_col: usize) -> Vec<Series> {
    let mut out: Vec<Series> = Vec::new();
    for row in &csv.rows {
        let (Some(x), Some(y)) = (parse_cell(row, x_col), parse_cell(row, y_col)) else {
            continue;
        };
        let kind = row[kind_col].clone();
        match out.iter_mut().find(|s| s.kind == kind) {
            Some(series) => series.points.push((x, y)),
            None => out.push(Series {
                kind,
                points: vec![(x, y)],
            }),
        }
    }
    out.sort_by_key(|s| KIND_ORDER.iter().position(|k| *k == s.kind).unwrap_or(9));
    out
}

/// Log-negativity and success probability against transmissivity, one solid
/// and one dashed curve per heralded kind plus the flat baseline.
pub fn plot_logneg(csv_path: &Path, png: &Path, svg: &Path) -> Result<()> {
    let csv = read_csv(csv_path)?;
    let t = float_col(&csv, "T")?;
    let kind = float_col(&csv, "kind")?;
    let e_n = float_col(&csv, "E_N")?;
    let prob = float_col(&csv, "success_prob")?;
    let en_series = extract_series(&csv, t, kind, e_n);
    let p_series: Vec<Series> = extract_series(&csv, t, kind, prob)
        .into_iter()
        .filter(|s| s.kind != "TMSV")
        .collect();

    draw_logneg(
        BitMapBackend::new(png, (900, 600)).into_drawing_area(),
        &en_series,
        &p_series,
    )
    .with_context(|| format!("rendering {png:?}"))?;
    draw_logneg(
        SVGBackend::new(svg, (900, 600)).into_drawing_area(),
        &en_series,
        &p_series,
    )
    .with_context(|| format!("rendering {svg:?}"))?;
    Ok(())
}

fn draw_logneg<DB>(
    root: DrawingArea<DB, Shift>,
    en_series: &[Series],
    p_series: &[Series],
) -> Result<()>
where
    DB: DrawingBackend,
    DB::ErrorType: 'static,
{
    let x_range = axis_range(en_series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let y_max = en_series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .fold(1.0f64, f64::max);

    root.fill(&WHITE)?;
    let mut chart = ChartBuilder::on(&root)
        .margin(12)
        .caption("Log-negativity and heralding probability", ("sans-serif", 20))
        .x_label_area_size(40)
        .y_label_area_size(50)
        .build_cartesian_2d(x_range.0..x_range.1, 0.0..(1.08 * y_max))?;
    chart
        .configure_mesh()
        .x_desc("beam splitter transmissivity T")
        .y_desc("E_N (solid), success probability (dashed)")
        .draw()?;
    for series in en_series {
        let color = kind_color(&series.kind);
        chart
            .draw_series(LineSeries::new(series.points.clone(), color.stroke_width(2)))?
            .label(series.kind.clone())
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], color.stroke_width(2)));
    }
    for series in p_series {
        let color = kind_color(&series.kind);
        chart.draw_series(DashedLineSeries::new(
            series.points.iter().copied(),
            6,
            3,
            color.stroke_width(1),
        ))?;
    }
    chart
        .configure_series_labels()
        .border_style(BLACK)
        .background_style(WHITE.mix(0.85))
        .draw()?;
    root.present()?;
    Ok(())
}

/// Key rate against distance on a log axis, one curve per kind; points at or
/// below the positivity floor are dropped.
pub fn plot_distance(csv_path: &Path, png: &Path, svg: &Path) -> Result<()> {
    let csv = read_csv(csv_path)?;
    let l = float_col(&csv, "L_km")?;
    let kind = float_col(&csv, "kind")?;
    let skr = float_col(&csv, "skr")?;
    let mut series = extract_series(&csv, l, kind, skr);
    for s in series.iter_mut() {
        s.points.retain(|p| p.1 > 1e-10);
    }
    series.retain(|s| !s.points.is_empty());
    if series.is_empty() {
        return Err(anyhow!("no positive key rates to plot"));
    }

    draw_distance(BitMapBackend::new(png, (900, 600)).into_drawing_area(), &series)
        .with_context(|| format!("rendering {png:?}"))?;
    draw_distance(SVGBackend::new(svg, (900, 600)).into_drawing_area(), &series)
        .with_context(|| format!("rendering {svg:?}"))?;
    Ok(())
}

fn draw_distance<DB>(root: DrawingArea<DB, Shift>, series: &[Series]) -> Result<()>
where
    DB: DrawingBackend,
    DB::ErrorType: 'static,
{
    let x_max = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .fold(0.0f64, f64::max);
    let y_max = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .fold(1e-9f64, f64::max);

    root.fill(&WHITE)?;
    let mut chart = ChartBuilder::on(&root)
        .margin(12)
        .caption("Secret key rate vs distance", ("sans-serif", 20))
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(0.0..(x_max * 1.02), (1e-10..y_max * 2.0).log_scale())?;
    chart
        .configure_mesh()
        .x_desc("Alice-relay distance L (km)")
        .y_desc("SKR (bits/pulse)")
        .draw()?;
    for s in series {
        let color = kind_color(&s.kind);
        chart
            .draw_series(LineSeries::new(s.points.clone(), color.stroke_width(2)))?
            .label(s.kind.clone())
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], color.stroke_width(2)));
    }
    chart
        .configure_series_labels()
        .border_style(BLACK)
        .background_style(WHITE.mix(0.85))
        .draw()?;
    root.present()?;
    Ok(())
}

struct HeatData {
    cells: Vec<(f64, f64, Option<f64>)>,
    r_half_step: f64,
    a_half_step: f64,
    r_bounds: (f64, f64),
    a_bounds: (f64, f64),
    vmin: f64,
    vmax: f64,
    title: String,
    axis_desc: &'static str,
}

/// One heatmap of -log10(SKR) per state kind; infeasible cells are light gray.
/// Returns the list of written image paths.
pub fn plot_heatmaps(
    csv_path: &Path,
    out_dir: &Path,
    axis_name: &str,
    stem: &str,
) -> Result<Vec<PathBuf>> {
    let csv = read_csv(csv_path)?;
    let kind_col = float_col(&csv, "kind")?;
    let r_col = float_col(&csv, "r_db")?;
    let a_col = float_col(&csv, axis_name)?;
    let n_col = float_col(&csv, "neg_log10_skr")?;

    let mut written = Vec::new();
    for kind in KIND_ORDER {
        let cells: Vec<(f64, f64, Option<f64>)> = csv
            .rows
            .iter()
            .filter(|row| row[kind_col] == kind)
            .filter_map(|row| {
                let r = parse_cell(row, r_col)?;
                let a = parse_cell(row, a_col)?;
                Some((r, a, parse_cell(row, n_col)))
            })
            .collect();
        if cells.is_empty() {
            continue;
        }
        let mut rs: Vec<f64> = cells.iter().map(|c| c.0).collect();
        rs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        rs.dedup();
        let mut axes: Vec<f64> = cells.iter().map(|c| c.1).collect();
        axes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        axes.dedup();
        let (vmin, vmax) = value_range(cells.iter().filter_map(|c| c.2));
        let data = HeatData {
            r_half_step: grid_step(&rs) / 2.0,
            a_half_step: grid_step(&axes) / 2.0,
            r_bounds: (rs[0], rs[rs.len() - 1]),
            a_bounds: (axes[0], axes[axes.len() - 1]),
            cells,
            vmin,
            vmax,
            title: format!("-log10(SKR), {kind}  [{vmin:.1}..{vmax:.1}], gray = no key"),
            axis_desc: axis_label(axis_name),
        };

        let png = out_dir.join(format!("{stem}_{}.png", kind.to_lowercase()));
        let svg = out_dir.join(format!("{stem}_{}.svg", kind.to_lowercase()));
        draw_heatmap(BitMapBackend::new(&png, (800, 600)).into_drawing_area(), &data)
            .with_context(|| format!("rendering {png:?}"))?;
        draw_heatmap(SVGBackend::new(&svg, (800, 600)).into_drawing_area(), &data)
            .with_context(|| format!("rendering {svg:?}"))?;
        written.push(png);
        written.push(svg);
    }
    Ok(written)
}

fn draw_heatmap<DB>(root: DrawingArea<DB, Shift>, data: &HeatData) -> Result<()>
where
    DB: DrawingBackend,
    DB::ErrorType: 'static,
{
    root.fill(&WHITE)?;
    let mut chart = ChartBuilder::on(&root)
        .margin(12)
        .caption(&data.title, ("sans-serif", 18))
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(
            (data.r_bounds.0 - data.r_half_step)..(data.r_bounds.1 + data.r_half_step),
            (data.a_bounds.0 - data.a_half_step)..(data.a_bounds.1 + data.a_half_step),
        )?;
    chart
        .configure_mesh()
        .disable_mesh()
        .x_desc("initial squeezing (dB)")
        .y_desc(data.axis_desc)
        .draw()?;
    chart.draw_series(data.cells.iter().map(|&(r, a, v)| {
        let color = match v {
            Some(v) => heat_color(v, data.vmin, data.vmax),
            None => RGBColor(225, 225, 225),
        };
        Rectangle::new(
            [
                (r - data.r_half_step, a - data.a_half_step),
                (r + data.r_half_step, a + data.a_half_step),
            ],
            color.filled(),
        )
    }))?;
    root.present()?;
    Ok(())
}

fn axis_label(axis_name: &str) -> &'static str {
    match axis_name {
        "l_km" => "Alice-relay distance L (km)",
        "xi" => "total excess noise (SNU)",
        _ => "axis",
    }
}

fn axis_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() || lo == hi {
        (0.0, 1.0)
    } else {
        (lo, hi)
    }
}

fn grid_step(sorted: &[f64]) -> f64 {
    sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
        .max(1e-9)
        .min(1e9)
}

fn value_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = axis_range(values);
    if hi <= lo {
        (lo, lo + 1.0)
    } else {
        (lo, hi)
    }
}

/// Blue (small -log10 SKR = strong key) to dark red (weak key).
fn heat_color(v: f64, vmin: f64, vmax: f64) -> RGBColor {
    let t = ((v - vmin) / (vmax - vmin)).clamp(0.0, 1.0);
    let r = (40.0 + 200.0 * t) as u8;
    let g = (70.0 + 90.0 * (1.0 - t)) as u8;
    let b = (200.0 * (1.0 - t) + 30.0) as u8;
    RGBColor(r, g, b)
}
