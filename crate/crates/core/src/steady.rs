//! Infinite-time averages of the pair correlators.
//!
//! Each momentum pair is written in the eigenbasis of the final
//! Hamiltonian, `ψ_k = α_k |g_k⟩ + β_k |e_k⟩`. The long-time average keeps
//! the populations `|α_k|²`, `|β_k|²` and drops the coherence `α_k β̄_k`,
//! which rotates as `e^{2iε_k t}`. Modes with `ε_k < 1e-12` do not rotate and
//! keep their coherence.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{self, GAPLESS_EPS};
use crate::quench::{PairCorrelators, QuenchEngine, QuenchProtocol};

/// Time-averaged correlators together with the protocol they belong to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyCorrelators {
    pub correlators: PairCorrelators,
    pub protocol: QuenchProtocol,
    /// Number of modes whose final energy is below the gapless threshold.
    pub stationary_modes: usize,
}

#[derive(Debug, Clone, Copy)]
struct FinalBasisState {
    alpha: Complex64,
    beta: Complex64,
    /// `T`-averaged `|α|²`, `|β|²`, `αβ̄` override the instantaneous values.
    populations: Option<(f64, f64, Complex64)>,
}

impl FinalBasisState {
    fn pure(alpha: Complex64, beta: Complex64) -> Self {
        Self {
            alpha,
            beta,
            populations: None,
        }
    }

    fn moments(&self) -> (f64, f64, Complex64) {
        self.populations.unwrap_or((
            self.alpha.norm_sqr(),
            self.beta.norm_sqr(),
            self.alpha * self.beta.conj(),
        ))
    }
}

/// Accumulates per-mode long-time averages into correlators.
struct SteadySum {
    n: usize,
    g: f64,
    z: f64,
    f: Complex64,
    stationary: usize,
}

impl SteadySum {
    fn new(n: usize) -> Self {
        Self {
            n,
            g: 0.0,
            z: 0.0,
            f: Complex64::new(0.0, 0.0),
            stationary: 0,
        }
    }

    fn add(&mut self, k: f64, theta_f: f64, eps_f: f64, state: FinalBasisState) {
        let (pa, pb, coh) = state.moments();
        let keep = if eps_f < GAPLESS_EPS {
            self.stationary += 1;
            1.0
        } else {
            0.0
        };
        let (s, c) = theta_f.sin_cos();
        // |v|² and i·u v̄ for ψ = α(cosθ, i sinθ) + β(sinθ, -i cosθ)
        let occ = pa * s * s + pb * c * c - keep * 2.0 * s * c * coh.re;
        let pair = Complex64::new(
            (pa - pb) * s * c - keep * coh.re * (c * c - s * s),
            -keep * coh.im,
        );
        self.g += occ;
        self.z += k.cos() * occ;
        self.f += k.sin() * pair;
    }

    fn finish(self, protocol: &QuenchProtocol) -> SteadyCorrelators {
        let norm = 2.0 / self.n as f64;
        SteadyCorrelators {
            correlators: PairCorrelators {
                g: norm * self.g,
                z: Complex64::new(norm * self.z, 0.0),
                f: -norm * self.f,
            },
            protocol: *protocol,
            stationary_modes: self.stationary,
        }
    }
}

/// Long-time average after the single quench `h_i → h_f`.
pub fn steady_single(protocol: &QuenchProtocol) -> Result<SteadyCorrelators> {
    if protocol.is_double() {
        return Err(Error::ProtocolKind { expected: "single" });
    }
    protocol.validate()?;
    let pi = protocol.params(protocol.h_initial);
    let pf = protocol.params(protocol.h_final);
    let mut sum = SteadySum::new(protocol.n);
    for k in model::momentum_grid(protocol.n)? {
        let fin = model::mode(&pf, k);
        let phi = fin.theta - model::bogoliubov_angle(&pi, k);
        let (sp, cp) = phi.sin_cos();
        let state = FinalBasisState::pure(Complex64::new(cp, 0.0), Complex64::new(sp, 0.0));
        sum.add(k, fin.theta, fin.eps, state);
    }
    Ok(sum.finish(protocol))
}

/// Long-time average over `t ≥ T` of a double quench at fixed `T`.
pub fn steady_double(protocol: &QuenchProtocol) -> Result<SteadyCorrelators> {
    double_average(protocol, false)
}

/// Double-quench average with the middle-stage phases `e^{±2iTε^m}` also
/// dropped, i.e. the system has dephased at `h_m` before the second quench.
/// The protocol's `T` is ignored.
pub fn steady_double_dephased_middle(protocol: &QuenchProtocol) -> Result<SteadyCorrelators> {
    double_average(protocol, true)
}

fn double_average(protocol: &QuenchProtocol, dephase_middle: bool) -> Result<SteadyCorrelators> {
    let Some(middle) = protocol.middle else {
        return Err(Error::ProtocolKind { expected: "double" });
    };
    protocol.validate()?;
    let pi = protocol.params(protocol.h_initial);
    let pm = protocol.params(middle.h);
    let pf = protocol.params(protocol.h_final);
    let mut sum = SteadySum::new(protocol.n);
    for k in model::momentum_grid(protocol.n)? {
        let ini = model::mode(&pi, k);
        let mid = model::mode(&pm, k);
        let fin = model::mode(&pf, k);
        let (sm, cm) = (mid.theta - ini.theta).sin_cos();
        let (sf, cf) = (fin.theta - mid.theta).sin_cos();
        let state = if dephase_middle && mid.eps >= GAPLESS_EPS {
            let pa = cm * cm * cf * cf + sm * sm * sf * sf;
            let pb = cm * cm * sf * sf + sm * sm * cf * cf;
            let coh = (cm * cm - sm * sm) * sf * cf;
            FinalBasisState {
                alpha: Complex64::new(0.0, 0.0),
                beta: Complex64::new(0.0, 0.0),
                populations: Some((pa, pb, Complex64::new(coh, 0.0))),
            }
        } else {
            let spend = if dephase_middle { 0.0 } else { middle.spend_time };
            let e = Complex64::from_polar(1.0, mid.eps * spend);
            let g = cm * e;
            let x = sm * e.conj();
            FinalBasisState::pure(g * cf - x * sf, g * sf + x * cf)
        };
        sum.add(k, fin.theta, fin.eps, state);
    }
    Ok(sum.finish(protocol))
}

/// Analytic steady state for either protocol kind at its own `T`.
pub fn steady_state(protocol: &QuenchProtocol) -> Result<SteadyCorrelators> {
    if protocol.is_double() {
        steady_double(protocol)
    } else {
        steady_single(protocol)
    }
}

/// Trapezoidal time average of the engine correlators.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeAverage {
    pub correlators: PairCorrelators,
    pub t0: f64,
    pub tau: f64,
    pub samples: usize,
    /// Longest single-mode period `π / min ε_k` of the final Hamiltonian.
    pub slowest_period: f64,
    pub warning: Option<String>,
}

pub const MIN_AVERAGE_SAMPLES: usize = 1000;
const SAMPLE_CHUNK: usize = 2048;

/// Average of the correlators over `[t0, t0 + tau]` with `samples` points.
///
/// Converges to the analytic steady state as `O(1/tau)`. A warning is
/// attached when the window holds fewer than ten periods of the slowest
/// final-state mode.
pub fn numeric_time_average(
    protocol: &QuenchProtocol,
    t0: f64,
    tau: f64,
    samples: usize,
) -> Result<TimeAverage> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidWindow(format!("tau must be positive, got {tau}")));
    }
    if samples < MIN_AVERAGE_SAMPLES {
        return Err(Error::InvalidWindow(format!(
            "need at least {MIN_AVERAGE_SAMPLES} samples, got {samples}"
        )));
    }
    if !(t0 >= 0.0) {
        return Err(Error::NegativeTime(t0));
    }
    let engine = QuenchEngine::new(protocol)?;
    let dt = tau / (samples - 1) as f64;

    let chunks: Vec<(f64, Complex64, Complex64)> = (0..samples.div_ceil(SAMPLE_CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * SAMPLE_CHUNK;
            let hi = (lo + SAMPLE_CHUNK).min(samples);
            let mut acc = (0.0, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for i in lo..hi {
                let w = if i == 0 || i == samples - 1 { 0.5 } else { 1.0 };
                let c = engine
                    .correlators(t0 + i as f64 * dt)
                    .expect("validated time window");
                acc.0 += w * c.g;
                acc.1 += w * c.z;
                acc.2 += w * c.f;
            }
            acc
        })
        .collect();
    let (mut g, mut z, mut f) = (0.0, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for (cg, cz, cf) in chunks {
        g += cg;
        z += cz;
        f += cf;
    }
    let scale = dt / tau;

    let min_eps = model::modes(&protocol.params(protocol.h_final))?
        .iter()
        .map(|m| m.eps)
        .fold(f64::INFINITY, f64::min);
    let slowest_period = std::f64::consts::PI / min_eps;
    let warning = (tau < 10.0 * slowest_period).then(|| {
        format!(
            "window {tau} spans fewer than ten periods of the slowest mode ({slowest_period:.3})"
        )
    });

    Ok(TimeAverage {
        correlators: PairCorrelators {
            g: g * scale,
            z: z * scale,
            f: f * scale,
        },
        t0,
        tau,
        samples,
        slowest_period,
        warning,
    })
}
