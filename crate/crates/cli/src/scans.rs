//! Scenario runners. Each returns a table whose rows follow grid order.

use rayon::prelude::*;
use xyquench::measures::{assemble_xstate, concurrence, qc_from_correlators, quantum_discord, QcValues, XStateDensity};
use xyquench::quench::{equilibrium_correlators, MiddleQuench, QuenchProtocol};
use xyquench::spectral::{self, CriticalTimes};
use xyquench::steady::{steady_double, steady_double_dephased_middle, steady_single};
use xyquench::ChainParams;

use crate::config::{MiddleMode, ScanConfig, Scenario};
use crate::error::{CliError, Result};
use crate::table::{format_float, Cell, Table};

fn par_rows<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Vec<Cell>> + Sync + Send) -> Result<Vec<Vec<Cell>>> {
    items.par_iter().map(f).collect()
}

fn table_from(columns: Vec<&'static str>, rows: Vec<Vec<Cell>>) -> Table {
    let mut t = Table::new(columns);
    for r in rows {
        t.push(r);
    }
    t
}

fn chain(cfg: &ScanConfig, h: f64) -> Result<ChainParams> {
    Ok(ChainParams::with_coupling(cfg.j, cfg.delta, h, cfg.n_sites)?)
}

fn protocol(cfg: &ScanConfig, hi: f64, middle: Option<(f64, f64)>, hf: f64) -> Result<QuenchProtocol> {
    let p = QuenchProtocol {
        j: cfg.j,
        delta: cfg.delta,
        n: cfg.n_sites,
        h_initial: hi,
        middle: middle.map(|(h, spend_time)| MiddleQuench { h, spend_time }),
        h_final: hf,
    };
    p.validate()?;
    Ok(p)
}

pub fn equilibrium_qc(cfg: &ScanConfig, h: f64) -> Result<QcValues> {
    Ok(qc_from_correlators(&equilibrium_correlators(&chain(cfg, h)?)?)?)
}

pub fn steady_qc(p: &QuenchProtocol) -> Result<QcValues> {
    let c = if p.is_double() { steady_double(p)? } else { steady_single(p)? };
    Ok(qc_from_correlators(&c.correlators)?)
}

fn qc_cells(q: &QcValues) -> Vec<Cell> {
    vec![
        q.concurrence.into(),
        q.discord.into(),
        q.mutual_info.into(),
        q.classical_corr.into(),
        q.converged.into(),
    ]
}

const QC_COLUMNS: [&str; 5] = ["concurrence", "discord", "mutual_info", "classical_corr", "converged"];

fn columns(provenance: &[&'static str], rest: &[&'static str]) -> Vec<&'static str> {
    ["j", "delta", "n_sites"]
        .iter()
        .chain(provenance)
        .chain(rest)
        .copied()
        .collect()
}

pub fn run(cfg: &ScanConfig) -> Result<Table> {
    match cfg.scenario {
        Scenario::Equilibrium => equilibrium(cfg),
        Scenario::SingleScan | Scenario::InitialScan => single(cfg),
        Scenario::DoubleTimeScan => double_time(cfg),
        Scenario::MiddleScan => middle(cfg),
        Scenario::Spectral => spectral_scan(cfg),
        Scenario::Loschmidt => loschmidt(cfg),
        Scenario::Validate => Err(CliError::Config("validate does not produce a scan".into())),
    }
}

fn base(cfg: &ScanConfig) -> Vec<Cell> {
    vec![cfg.j.into(), cfg.delta.into(), cfg.n_sites.into()]
}

fn equilibrium(cfg: &ScanConfig) -> Result<Table> {
    let rows = par_rows(&cfg.grid_points(), |&h| {
        let mut row = base(cfg);
        row.push(h.into());
        row.extend(qc_cells(&equilibrium_qc(cfg, h)?));
        Ok(row)
    })?;
    Ok(table_from(columns(&["h"], &QC_COLUMNS), rows))
}

fn single(cfg: &ScanConfig) -> Result<Table> {
    let grid = cfg.grid_points();
    let points: Vec<(f64, f64)> = if cfg.scenario == Scenario::SingleScan {
        cfg.hi.iter().flat_map(|&hi| grid.iter().map(move |&hf| (hi, hf))).collect()
    } else {
        cfg.hf.iter().flat_map(|&hf| grid.iter().map(move |&hi| (hi, hf))).collect()
    };
    let rows = par_rows(&points, |&(hi, hf)| {
        let q = steady_qc(&protocol(cfg, hi, None, hf)?)?;
        let eq_f = equilibrium_qc(cfg, hf)?;
        let eq_i = equilibrium_qc(cfg, hi)?;
        let mut row = base(cfg);
        row.extend([hi.into(), hf.into()]);
        row.extend(qc_cells(&q));
        row.extend([
            eq_f.concurrence.into(),
            eq_f.discord.into(),
            eq_i.concurrence.into(),
            eq_i.discord.into(),
        ]);
        Ok(row)
    })?;
    let mut rest = QC_COLUMNS.to_vec();
    rest.extend(["eq_concurrence_hf", "eq_discord_hf", "eq_concurrence_hi", "eq_discord_hi"]);
    Ok(table_from(columns(&["hi", "hf"], &rest), rows))
}

fn double_time(cfg: &ScanConfig) -> Result<Table> {
    let mut points = Vec::new();
    for &hi in &cfg.hi {
        for &hm in &cfg.hm {
            for &hf in &cfg.hf {
                for &t in &cfg.grid_points() {
                    points.push((hi, hm, hf, t));
                }
            }
        }
    }
    let rows = par_rows(&points, |&(hi, hm, hf, t)| {
        let q = steady_qc(&protocol(cfg, hi, Some((hm, t)), hf)?)?;
        let s = steady_qc(&protocol(cfg, hi, None, hf)?)?;
        let mut row = base(cfg);
        row.extend([hi.into(), hm.into(), hf.into(), t.into()]);
        row.extend(qc_cells(&q));
        row.extend([s.concurrence.into(), s.discord.into()]);
        Ok(row)
    })?;
    let mut rest = QC_COLUMNS.to_vec();
    rest.extend(["single_concurrence", "single_discord"]);
    Ok(table_from(columns(&["hi", "hm", "hf", "spend_time"], &rest), rows))
}

/// Best `(T, value)` of `f` on the grid `0, step, .., t_max`, refined by a
/// golden-section search on the neighbouring cells.
pub fn argmax_over_time(f: impl Fn(f64) -> Result<f64>, t_max: f64, step: f64) -> Result<(f64, f64)> {
    let count = (t_max / step + 1e-9).floor() as usize;
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 0..=count {
        let t = i as f64 * step;
        let v = f(t)?;
        if v > best.1 {
            best = (t, v);
        }
    }
    let (mut a, mut b) = ((best.0 - step).max(0.0), (best.0 + step).min(t_max));
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
    }
    for (t, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (t, v);
        }
    }
    Ok(best)
}

fn middle(cfg: &ScanConfig) -> Result<Table> {
    let mut points = Vec::new();
    for &hi in &cfg.hi {
        for &hf in &cfg.hf {
            for &hm in &cfg.grid_points() {
                points.push((hi, hf, hm));
            }
        }
    }
    let rows = par_rows(&points, |&(hi, hf, hm)| {
        let s = steady_qc(&protocol(cfg, hi, None, hf)?)?;
        let mut row = base(cfg);
        row.extend([hi.into(), hm.into(), hf.into(), cfg.mode.name().into()]);
        match cfg.mode {
            MiddleMode::Dephased => {
                let c = steady_double_dephased_middle(&protocol(cfg, hi, Some((hm, 0.0)), hf)?)?;
                let q = qc_from_correlators(&c.correlators)?;
                row.extend([Cell::Empty, q.concurrence.into(), Cell::Empty, q.discord.into()]);
            }
            MiddleMode::ArgmaxT => {
                let rho = |t: f64| -> Result<XStateDensity> {
                    Ok(assemble_xstate(&steady_double(&protocol(cfg, hi, Some((hm, t)), hf)?)?.correlators)?)
                };
                let (tc, c) = argmax_over_time(|t| Ok(concurrence(&rho(t)?)), cfg.t_max, cfg.t_step)?;
                let (tq, qd) = argmax_over_time(|t| Ok(quantum_discord(&rho(t)?).discord), cfg.t_max, cfg.t_step)?;
                row.extend([tc.into(), c.into(), tq.into(), qd.into()]);
            }
        }
        row.extend([s.concurrence.into(), s.discord.into()]);
        Ok(row)
    })?;
    Ok(table_from(
        columns(
            &["hi", "hm", "hf", "mode"],
            &[
                "spend_time_concurrence",
                "concurrence",
                "spend_time_discord",
                "discord",
                "single_concurrence",
                "single_discord",
            ],
        ),
        rows,
    ))
}

fn spectral_scan(cfg: &ScanConfig) -> Result<Table> {
    let g0_points: Vec<(f64, f64)> = cfg
        .hi
        .iter()
        .flat_map(|&hi| cfg.grid_points().into_iter().map(move |hf| (hi, hf)))
        .collect();
    let mut rows = par_rows(&g0_points, |&(hi, hf)| {
        let g0 = spectral::g0(&protocol(cfg, hi, None, hf)?)?;
        let c0 = equilibrium_qc(cfg, hf)?.concurrence;
        let mut row = base(cfg);
        row.extend([hi.into(), hf.into(), "g0".into(), 0usize.into(), g0.into(), g0.ln().into(), c0.into()]);
        Ok(row)
    })?;
    for &hi in &cfg.hi {
        for &hf in &cfg.hf {
            for s in spectral::g_max_per_sector(&protocol(cfg, hi, None, hf)?)? {
                let mut row = base(cfg);
                row.extend([
                    hi.into(),
                    hf.into(),
                    "profile".into(),
                    s.n_f.into(),
                    s.g_abs.into(),
                    s.log_g_abs.into(),
                    s.concurrence.into(),
                ]);
                rows.push(row);
            }
        }
    }
    Ok(table_from(
        columns(&["hi", "hf"], &["section", "n_f", "g_abs", "log_g_abs", "concurrence"]),
        rows,
    ))
}

fn loschmidt(cfg: &ScanConfig) -> Result<Table> {
    let middles: Vec<Option<(f64, f64)>> = if cfg.hm.is_empty() {
        vec![None]
    } else {
        cfg.hm
            .iter()
            .flat_map(|&hm| cfg.spend_time.iter().map(move |&t| Some((hm, t))))
            .collect()
    };
    let mut points = Vec::new();
    for &hi in &cfg.hi {
        for &m in &middles {
            for &hf in &cfg.grid_points() {
                points.push((hi, m, hf));
            }
        }
    }
    let rows = par_rows(&points, |&(hi, m, hf)| {
        let p = protocol(cfg, hi, m, hf)?;
        let (l, dephased) = if p.is_double() {
            (
                spectral::loschmidt_steady_double(&p)?,
                Some(spectral::loschmidt_steady_double_dephased(&p)?.rate),
            )
        } else {
            (spectral::loschmidt_steady_single(&p)?, None)
        };
        let mut row = base(cfg);
        row.extend([hi.into(), Cell::from(m.map(|x| x.0)), Cell::from(m.map(|x| x.1)), hf.into()]);
        row.extend([l.log_lbar.into(), l.rate.into(), dephased.into()]);
        match spectral::dqpt_critical_times(&p, cfg.critical_times)? {
            CriticalTimes::NoCriticalMode => {
                row.extend(["none".into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]);
            }
            CriticalTimes::Divergent { k_star } => {
                row.extend(["divergent".into(), k_star.into(), f64::INFINITY.into(), Cell::Empty, Cell::Empty]);
            }
            CriticalTimes::Found(modes) => {
                let first = modes
                    .iter()
                    .min_by(|a, b| a.times.first().unwrap_or(&f64::INFINITY).total_cmp(b.times.first().unwrap_or(&f64::INFINITY)))
                    .expect("non-empty");
                let times: Vec<String> = first.times.iter().map(|&t| format_float(t)).collect();
                row.extend([
                    "found".into(),
                    first.k_star.into(),
                    first.t_star.into(),
                    first.phase_shift.into(),
                    Cell::Text(times.join(";")),
                ]);
            }
        }
        Ok(row)
    })?;
    Ok(table_from(
        columns(
            &["hi", "hm", "spend_time", "hf"],
            &["log_lbar", "rate", "rate_dephased", "critical", "k_star", "t_star", "phase_shift", "critical_times"],
        ),
        rows,
    ))
}
