//! Scenario runner behind the `xyquench` binary.

pub mod config;
pub mod error;
pub mod presets;
pub mod scans;
pub mod table;
pub mod validate;

use std::io::Write;

pub use config::{Grid, MiddleMode, ScanConfig, Scenario, Settings};
pub use error::{CliError, Result};
pub use table::Table;

pub fn metadata(cfg: &ScanConfig) -> Vec<(String, String)> {
    let mut meta = vec![
        ("tool".to_string(), format!("xyquench {}", env!("CARGO_PKG_VERSION"))),
        ("scenario".to_string(), cfg.scenario.name().to_string()),
    ];
    meta.extend(cfg.settings.echo().into_iter().map(|(k, v)| (format!("config {k}"), v)));
    meta
}

fn in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

/// Runs a scan and renders it as CSV bytes.
pub fn render_scan(cfg: &ScanConfig) -> Result<Vec<u8>> {
    let table = in_pool(cfg.jobs, || scans::run(cfg))??;
    let mut buf = Vec::new();
    table
        .write_csv(&metadata(cfg), &mut buf)
        .expect("writing to memory cannot fail");
    Ok(buf)
}

/// Runs the validation battery; the report lists one check per line.
pub fn render_validation(cfg: &ScanConfig) -> Result<(Vec<u8>, usize)> {
    let checks = in_pool(cfg.jobs, validate::run_battery)??;
    let mut buf = Vec::new();
    for c in &checks {
        writeln!(buf, "{}", c.line()).expect("writing to memory cannot fail");
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(buf, "{} of {} checks passed", checks.len() - failed, checks.len()).expect("in memory");
    Ok((buf, failed))
}

pub fn emit(cfg: &ScanConfig, bytes: &[u8]) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout().write_all(bytes).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

pub fn execute(cfg: &ScanConfig) -> Result<()> {
    if cfg.scenario == Scenario::Validate {
        let (report, failed) = render_validation(cfg)?;
        emit(cfg, &report)?;
        if failed > 0 {
            return Err(CliError::ValidationFailed(failed));
        }
        return Ok(());
    }
    let csv = render_scan(cfg)?;
    emit(cfg, &csv)
}
