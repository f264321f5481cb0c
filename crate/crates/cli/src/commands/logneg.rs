//! `cvmdi logneg`: entanglement/probability curves against transmissivity.

use cvmdi_core::experiments::{linspace, logneg_scan};
use cvmdi_core::states::StateKind;

use crate::commands::{ensure_out_dir, setting};
use crate::config::Settings;
use crate::csvio::{write_csv, Cell, Table};
use crate::manifest::RunManifest;
use crate::{plot, usage_error, CliResult};

pub struct LognegArgs {
    pub r_db: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

pub fn run(settings: &Settings, args: &LognegArgs) -> CliResult<i32> {
    if args.r_db < 0.0 {
        return usage_error(format!("--rdb {} must be non-negative", args.r_db));
    }
    if args.points == 0 {
        return usage_error("--points must be at least 1");
    }
    if !(args.t_min > 0.0 && args.t_max < 1.0 && (args.points == 1 || args.t_min < args.t_max)) {
        return usage_error(format!(
            "transmissivity range [{}, {}] must satisfy 0 < tmin < tmax < 1",
            args.t_min, args.t_max
        ));
    }
    ensure_out_dir(&settings.out_dir)?;

    let grid = linspace(args.t_min, args.t_max, args.points);
    let curves = logneg_scan(&StateKind::ALL, args.r_db, &grid)?;

    let mut table = Table::new(vec!["T", "kind", "E_N", "success_prob"]);
    for curve in &curves {
        for s in &curve.samples {
            table.push(vec![
                Cell::Float(s.t),
                Cell::Text(curve.kind.name()),
                Cell::Float(s.e_n),
                Cell::Float(s.success_prob),
            ]);
        }
    }

    let mut manifest = RunManifest::new(
        "logneg",
        vec![
            setting("r_db", args.r_db),
            setting("t_min", args.t_min),
            setting("t_max", args.t_max),
            setting("points", args.points),
        ],
    );
    let csv_path = settings.out_dir.join("logneg.csv");
    write_csv(&csv_path, &manifest.csv_comments(), &table)?;
    manifest.record_output(&csv_path);

    // a single-point grid yields a data row but nothing worth plotting
    if args.points > 1 && plot::fonts_available() {
        let png = settings.out_dir.join("logneg.png");
        let svg = settings.out_dir.join("logneg.svg");
        plot::plot_logneg(&csv_path, &png, &svg)?;
        manifest.record_output(&png);
        manifest.record_output(&svg);
    }
    manifest.write_sidecar(&settings.out_dir.join("logneg.manifest.txt"))?;
    println!(
        "logneg: wrote {} ({} rows)",
        csv_path.display(),
        table.rows.len()
    );
    Ok(0)
}
