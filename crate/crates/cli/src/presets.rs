//! Figure presets compiled into the binary.

use crate::config::{ScanConfig, Scenario, Settings};
use crate::error::{CliError, Result};

pub const PRESETS: [(&str, &str); 7] = [
    ("fig2", include_str!("../presets/fig2.conf")),
    ("fig3", include_str!("../presets/fig3.conf")),
    ("fig4", include_str!("../presets/fig4.conf")),
    ("fig5", include_str!("../presets/fig5.conf")),
    ("fig6", include_str!("../presets/fig6.conf")),
    ("fig7", include_str!("../presets/fig7.conf")),
    ("fig8", include_str!("../presets/fig8.conf")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn settings(name: &str) -> Result<Settings> {
    let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        let known: Vec<_> = names().collect();
        CliError::Config(format!("unknown preset '{name}' (known: {})", known.join(", ")))
    })?;
    Settings::parse(text, name)
}

/// Config whose scenario is taken from its own `scenario` entry.
pub fn self_describing(settings: Settings) -> Result<ScanConfig> {
    let scenario = settings
        .get("scenario")
        .ok_or_else(|| CliError::Config("config has no 'scenario' entry".into()))
        .and_then(Scenario::parse)?;
    ScanConfig::from_settings(scenario, settings)
}
