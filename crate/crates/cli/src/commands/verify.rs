//! `cvmdi verify`: run the validation battery and write the report.

use std::io::Write;
use std::path::PathBuf;

use cvmdi_core::audit::{self, AuditSection, ValidationReport};

use crate::commands::{ensure_out_dir, setting};
use crate::config::Settings;
use crate::manifest::RunManifest;
use crate::CliResult;

pub fn run(settings: &Settings) -> CliResult<i32> {
    ensure_out_dir(&settings.out_dir)?;
    let report = audit::full_report()?;
    let path = settings.out_dir.join("validation_report.txt");
    write_report(&report, &path)?;

    let mut manifest = RunManifest::new("verify", vec![setting("out", settings.out_dir.display())]);
    manifest.record_output(&path);
    manifest.write_sidecar(&settings.out_dir.join("verify.manifest.txt"))?;

    let gates: usize = report
        .sections
        .iter()
        .map(|s| s.rows.iter().filter(|r| !r.expected_mismatch).count())
        .sum();
    if report.passed() {
        println!("verify: PASS ({gates} gates; report at {})", path.display());
        Ok(0)
    } else {
        println!("verify: FAIL (report at {})", path.display());
        Ok(1)
    }
}

fn write_report(report: &ValidationReport, path: &PathBuf) -> CliResult<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "validation report - cvmdi {}", crate::manifest::VERSION)?;
    writeln!(out, "{}", "=".repeat(68))?;
    for section in &report.sections {
        write_section(&mut out, section)?;
    }
    writeln!(
        out,
        "\noverall: {}",
        if report.passed() { "PASS" } else { "FAIL" }
    )?;
    Ok(())
}

fn write_section(out: &mut impl Write, section: &AuditSection) -> std::io::Result<()> {
    writeln!(out, "\nsection: {}", section.title)?;
    writeln!(out, "  tolerance: {}", section.tol_note)?;
    for row in &section.rows {
        let verdict = if row.expected_mismatch {
            "MISMATCH (expected)"
        } else if row.within {
            "PASS"
        } else {
            "FAIL"
        };
        writeln!(
            out,
            "  [{verdict}] {:<55} impl {:>18.12e}  ref {:>18.12e}  err {:.3e}",
            row.label, row.implementation, row.reference, row.err
        )?;
    }
    writeln!(
        out,
        "  section verdict: {} (worst gated error {:.3e})",
        if section.passed() { "PASS" } else { "FAIL" },
        section.worst_err()
    )
}
