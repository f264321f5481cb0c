//! `cvmdi heatmap`: -log10(SKR) over squeezing x distance or squeezing x noise.

use cvmdi_core::experiments::{evaluate_cell, linspace, TOptimizer, SKR_FLOOR};
use cvmdi_core::states::StateKind;

use crate::commands::{ensure_out_dir, setting};
use crate::config::Settings;
use crate::csvio::{write_csv, Cell, Table};
use crate::manifest::RunManifest;
use crate::runner::par_map;
use crate::{plot, usage_error, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapMode {
    /// Sweep the Alice-relay distance at fixed excess noise.
    Distance,
    /// Sweep the total excess noise at fixed distance.
    Noise,
}

impl HeatmapMode {
    pub fn axis_column(self) -> &'static str {
        match self {
            HeatmapMode::Distance => "l_km",
            HeatmapMode::Noise => "xi",
        }
    }

    fn stem(self) -> &'static str {
        match self {
            HeatmapMode::Distance => "heatmap_distance",
            HeatmapMode::Noise => "heatmap_noise",
        }
    }
}

pub struct HeatmapArgs {
    pub mode: HeatmapMode,
    pub r_db_min: f64,
    pub r_db_max: f64,
    pub r_db_points: usize,
    /// Swept-axis bounds; distance mode defaults to [0, 80] km, noise mode to
    /// [0, 0.04] SNU.
    pub axis_min: Option<f64>,
    pub axis_max: Option<f64>,
    pub axis_points: usize,
    /// The pinned value of the other axis (xi in distance mode, L in noise
    /// mode); defaults to the resolved settings.
    pub fixed: Option<f64>,
}

pub fn run(settings: &Settings, args: &HeatmapArgs) -> CliResult<i32> {
    if !(args.r_db_min >= 0.0 && args.r_db_max >= args.r_db_min) {
        return usage_error("squeezing range must satisfy 0 <= rdb-min <= rdb-max");
    }
    if args.r_db_points == 0 || args.axis_points == 0 {
        return usage_error("grid point counts must be at least 1");
    }
    let (axis_lo_default, axis_hi_default) = match args.mode {
        HeatmapMode::Distance => (0.0, 80.0),
        HeatmapMode::Noise => (0.0, 0.04),
    };
    let axis_lo = args.axis_min.unwrap_or(axis_lo_default);
    let axis_hi = args.axis_max.unwrap_or(axis_hi_default);
    if !(axis_lo >= 0.0 && axis_hi >= axis_lo) {
        return usage_error(format!("axis range [{axis_lo}, {axis_hi}] is invalid"));
    }
    let fixed = args.fixed.unwrap_or(match args.mode {
        HeatmapMode::Distance => settings.xi,
        HeatmapMode::Noise => settings.length_km,
    });
    if fixed < 0.0 {
        return usage_error(format!("--fixed {fixed} must be non-negative"));
    }
    ensure_out_dir(&settings.out_dir)?;

    let protocol = settings.protocol();
    let optimizer = TOptimizer::default();
    let r_grid = linspace(args.r_db_min, args.r_db_max, args.r_db_points);
    let axis_grid = linspace(axis_lo, axis_hi, args.axis_points);
    let mut cells: Vec<(StateKind, f64, f64)> =
        Vec::with_capacity(StateKind::ALL.len() * r_grid.len() * axis_grid.len());
    for &kind in &StateKind::ALL {
        for &r in &r_grid {
            for &a in &axis_grid {
                cells.push((kind, r, a));
            }
        }
    }
    let records = par_map(&cells, settings.threads, |&(kind, r, a)| {
        let (l, xi) = match args.mode {
            HeatmapMode::Distance => (a, fixed),
            HeatmapMode::Noise => (fixed, a),
        };
        evaluate_cell(kind, r, l, xi, &protocol, &optimizer)
    });

    let axis_col = args.mode.axis_column();
    let mut table = Table::new(vec![
        "kind",
        "r_db",
        axis_col,
        "skr",
        "neg_log10_skr",
        "t_star",
        "success_prob",
        "feasible",
    ]);
    for ((kind, r, a), record) in cells.iter().zip(records.iter()) {
        match record {
            Ok(rec) => {
                let feasible = rec.skr > SKR_FLOOR;
                table.push(vec![
                    Cell::Text(kind.name()),
                    Cell::Float(*r),
                    Cell::Float(*a),
                    Cell::Float(rec.skr),
                    if feasible {
                        Cell::Float(-rec.skr.log10())
                    } else {
                        Cell::Empty
                    },
                    rec.t_star.map_or(Cell::Empty, Cell::Float),
                    Cell::Float(rec.success_prob),
                    Cell::Int(feasible as i64),
                ]);
            }
            Err(e) => return Err(crate::CliError::Runtime(anyhow::anyhow!(e.clone()))),
        }
    }

    let mut manifest = RunManifest::new(
        "heatmap",
        vec![
            setting(
                "mode",
                match args.mode {
                    HeatmapMode::Distance => "distance",
                    HeatmapMode::Noise => "noise",
                },
            ),
            setting("r_db_min", args.r_db_min),
            setting("r_db_max", args.r_db_max),
            setting("r_db_points", args.r_db_points),
            setting("axis_min", axis_lo),
            setting("axis_max", axis_hi),
            setting("axis_points", args.axis_points),
            setting("fixed", fixed),
            setting("gamma", settings.gamma),
            setting("alpha_db_km", settings.alpha_db_km),
        ],
    );
    let csv_path = settings.out_dir.join(format!("{}.csv", args.mode.stem()));
    write_csv(&csv_path, &manifest.csv_comments(), &table)?;
    manifest.record_output(&csv_path);

    if args.r_db_points > 1 && args.axis_points > 1 && plot::fonts_available() {
        for image in plot::plot_heatmaps(&csv_path, &settings.out_dir, axis_col, args.mode.stem())? {
            manifest.record_output(&image);
        }
    }
    manifest.write_sidecar(
        &settings
            .out_dir
            .join(format!("{}.manifest.txt", args.mode.stem())),
    )?;
    println!(
        "heatmap: wrote {} ({} cells)",
        csv_path.display(),
        table.rows.len()
    );
    Ok(0)
}
