//! Free-fermion results against exact diagonalization on small rings.

use rayon::prelude::*;
use xyquench::measures::{assemble_xstate, concurrence, quantum_discord};
use xyquench::model::{ground_state_energy, ChainParams};
use xyquench::oracle::{self, diagonal_purity, EdQuench};
use xyquench::quench::{QuenchEngine, QuenchProtocol};
use xyquench::{spectral, steady};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }

    pub fn line(&self) -> String {
        format!(
            "{} {:<52} max_dev={:.3e} tol={:.0e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.deviation,
            self.tolerance
        )
    }
}

pub const TIMES: [f64; 4] = [0.0, 0.5, 1.0, 5.0];

pub fn battery(n: usize) -> Vec<QuenchProtocol> {
    vec![
        QuenchProtocol::single(0.5, n, 0.5, 2.0).expect("valid"),
        QuenchProtocol::single(0.5, n, 2.0, 0.5).expect("valid"),
        QuenchProtocol::double(0.5, n, 0.8, 1.5, 2.0, 5.0).expect("valid"),
        QuenchProtocol::double(0.5, n, 0.7, 2.0, 1.0, 0.5).expect("valid"),
    ]
}

pub fn label(p: &QuenchProtocol) -> String {
    match p.middle {
        Some(m) => format!("N={} {}->{}->{} T={}", p.n, p.h_initial, m.h, p.h_final, m.spend_time),
        None => format!("N={} {}->{}", p.n, p.h_initial, p.h_final),
    }
}

/// Deviations of one protocol over the standard times:
/// `[correlators, ρ entries, concurrence, discord]`.
pub fn dynamics_deviation(p: &QuenchProtocol) -> Result<[f64; 4]> {
    let engine = QuenchEngine::new(p)?;
    let ed = EdQuench::new(p)?;
    let mut dev = [0.0f64; 4];
    for t in TIMES {
        let ours = engine.correlators(t)?;
        let rho_ed = oracle::reduced_two_site(&ed.state_at(t)?, 0)?;
        let rho = assemble_xstate(&ours)?;
        let d = [
            ours.max_abs_diff(&oracle::correlators_from_rho(&rho_ed)),
            (rho.to_matrix() - rho_ed).iter().map(|c| c.norm()).fold(0.0, f64::max),
            (concurrence(&rho) - oracle::wootters_concurrence(&rho_ed)).abs(),
            (quantum_discord(&rho).discord - oracle::numeric_discord(&rho_ed).discord).abs(),
        ];
        for (a, b) in dev.iter_mut().zip(d) {
            *a = a.max(b);
        }
    }
    Ok(dev)
}

pub fn run_battery() -> Result<Vec<Check>> {
    let protocols: Vec<QuenchProtocol> = [8, 10].into_iter().flat_map(battery).collect();
    let dynamics: Vec<(String, [f64; 4])> = protocols
        .par_iter()
        .map(|p| Ok((label(p), dynamics_deviation(p)?)))
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();
    for (name, d) in dynamics {
        for (what, dev, tol) in [
            ("G, Z, f", d[0], 1e-8),
            ("rho entries", d[1], 1e-8),
            ("concurrence", d[2], 1e-6),
            ("discord", d[3], 1e-6),
        ] {
            checks.push(Check {
                name: format!("{what} {name}"),
                deviation: dev,
                tolerance: tol,
            });
        }
    }

    let mut energy = 0.0f64;
    for n in [8, 10] {
        for h in [0.25, 0.5, 1.0, 2.0] {
            for delta in [0.5, 1.0] {
                let params = ChainParams::new(delta, h, n)?;
                energy = energy.max((ground_state_energy(&params)? - oracle::ground_energies(&params)?.even).abs());
            }
        }
    }
    checks.push(Check {
        name: "ground energy N=8,10".into(),
        deviation: energy,
        tolerance: 1e-10,
    });

    for p in battery(8) {
        let ed = EdQuench::new(&p)?;
        let switch = ed.state_at_switch();
        let avg = oracle::correlators_from_rho(&ed.last.time_averaged_two_site(&switch, 0)?);
        checks.push(Check {
            name: format!("steady correlators {}", label(&p)),
            deviation: steady::steady_state(&p)?.correlators.max_abs_diff(&avg),
            tolerance: 1e-10,
        });
        let lbar = if p.is_double() {
            spectral::loschmidt_steady_double(&p)?
        } else {
            spectral::loschmidt_steady_single(&p)?
        };
        checks.push(Check {
            name: format!("steady echo {}", label(&p)),
            deviation: (lbar.lbar - diagonal_purity(&ed.last.diagonal_weights(&switch))).abs(),
            tolerance: 1e-8,
        });
        if !p.is_double() {
            checks.push(Check {
                name: format!("|g0| {}", label(&p)),
                deviation: (spectral::g0(&p)? - ed.last.ground_state().overlap(&ed.initial).norm()).abs(),
                tolerance: 1e-8,
            });
        }
    }
    Ok(checks)
}
