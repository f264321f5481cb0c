//! `cvmdi distance`: key rate against distance with per-point T optimization.

use cvmdi_core::experiments::{evaluate_cell, linspace, TOptimizer};
use cvmdi_core::states::StateKind;

use crate::commands::{ensure_out_dir, setting};
use crate::config::Settings;
use crate::csvio::{write_csv, Cell, Table};
use crate::manifest::RunManifest;
use crate::runner::par_map;
use crate::{plot, usage_error, CliResult};

pub struct DistanceArgs {
    pub r_db: f64,
    pub xi: f64,
    pub l_max: f64,
    pub points: usize,
}

pub fn run(settings: &Settings, args: &DistanceArgs) -> CliResult<i32> {
    if args.r_db < 0.0 {
        return usage_error(format!("--rdb {} must be non-negative", args.r_db));
    }
    if args.xi < 0.0 {
        return usage_error(format!("--xi {} must be non-negative", args.xi));
    }
    if !(args.l_max > 0.0) || args.points == 0 {
        return usage_error("--lmax must be positive and --points at least 1");
    }
    ensure_out_dir(&settings.out_dir)?;

    let protocol = settings.protocol();
    let optimizer = TOptimizer::default();
    let grid = linspace(0.0, args.l_max, args.points);
    let cells: Vec<(StateKind, f64)> = StateKind::ALL
        .iter()
        .flat_map(|&kind| grid.iter().map(move |&l| (kind, l)))
        .collect();
    let records = par_map(&cells, settings.threads, |&(kind, l)| {
        evaluate_cell(kind, args.r_db, l, args.xi, &protocol, &optimizer)
    });

    let mut table = Table::new(vec!["L_km", "kind", "skr", "t_star", "success_prob"]);
    for ((kind, l), record) in cells.iter().zip(records.iter()) {
        match record {
            Ok(r) => table.push(vec![
                Cell::Float(*l),
                Cell::Text(kind.name()),
                Cell::Float(r.skr),
                r.t_star.map_or(Cell::Empty, Cell::Float),
                Cell::Float(r.success_prob),
            ]),
            Err(e) => return Err(crate::CliError::Runtime(anyhow::anyhow!(e.clone()))),
        }
    }

    let mut manifest = RunManifest::new(
        "distance",
        vec![
            setting("r_db", args.r_db),
            setting("xi", args.xi),
            setting("gamma", settings.gamma),
            setting("alpha_db_km", settings.alpha_db_km),
            setting("l_max", args.l_max),
            setting("points", args.points),
        ],
    );
    let csv_path = settings.out_dir.join("distance.csv");
    write_csv(&csv_path, &manifest.csv_comments(), &table)?;
    manifest.record_output(&csv_path);

    let any_positive = table
        .rows
        .iter()
        .any(|row| matches!(row[2], Cell::Float(v) if v > 1e-10));
    if args.points > 1 && any_positive && plot::fonts_available() {
        let png = settings.out_dir.join("distance.png");
        let svg = settings.out_dir.join("distance.svg");
        plot::plot_distance(&csv_path, &png, &svg)?;
        manifest.record_output(&png);
        manifest.record_output(&svg);
    }
    manifest.write_sidecar(&settings.out_dir.join("distance.manifest.txt"))?;
    println!(
        "distance: wrote {} ({} rows)",
        csv_path.display(),
        table.rows.len()
    );
    Ok(0)
}
