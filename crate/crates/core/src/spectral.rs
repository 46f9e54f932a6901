//! Expansion of the post-quench state in eigenstates of the final
//! Hamiltonian, and the Loschmidt echo built from it.
//!
//! Within mode `k` the initial pair state overlaps the final ground and
//! excited pair states with `cos Φ_k` and `sin Φ_k`, where
//! `Φ_k = θ_k(h_f) - θ_k(h_i)`. Eigenstates reachable from the initial state
//! are labelled by the set `S` of excited pairs, with
//!
//! ```text
//! |g_S| = Π_{k∈S} |sin Φ_k| · Π_{k∉S} |cos Φ_k|
//! ```
//!
//! and every other eigenstate has zero overlap.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::{assemble_xstate, concurrence};
use crate::model::{self, ChainParams, ModeData, GAPLESS_EPS};
use crate::quench::{PairCorrelators, QuenchProtocol};

/// Largest number of pair modes for exhaustive sector sums.
pub const MAX_ENUMERATION_PAIRS: usize = 24;
const ENUMERATION_BLOCK: u64 = 1 << 12;

fn require_single(protocol: &QuenchProtocol) -> Result<()> {
    protocol.validate()?;
    if protocol.is_double() {
        return Err(Error::ProtocolKind { expected: "single" });
    }
    Ok(())
}

fn require_double(protocol: &QuenchProtocol) -> Result<()> {
    protocol.validate()?;
    if !protocol.is_double() {
        return Err(Error::ProtocolKind { expected: "double" });
    }
    Ok(())
}

fn check_enumerable(pairs: usize) -> Result<()> {
    if pairs > MAX_ENUMERATION_PAIRS {
        return Err(Error::EnumerationTooLarge {
            pairs,
            max: MAX_ENUMERATION_PAIRS,
        });
    }
    Ok(())
}

/// `Φ_k` for every grid mode of a single quench.
pub fn overlap_angles(protocol: &QuenchProtocol) -> Result<Vec<f64>> {
    require_single(protocol)?;
    let initial = model::modes(&protocol.params(protocol.h_initial))?;
    let last = model::modes(&protocol.params(protocol.h_final))?;
    Ok(initial.iter().zip(&last).map(|(i, f)| f.theta - i.theta).collect())
}

/// `|g_0| = Π |cos Φ_k|`, the overlap with the final ground state.
pub fn g0(protocol: &QuenchProtocol) -> Result<f64> {
    Ok(overlap_angles(protocol)?
        .iter()
        .map(|phi| phi.cos().abs())
        .product())
}

/// One eigenstate sector of the final Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSector {
    /// Indices into the momentum grid of the excited pairs.
    pub excited: Vec<usize>,
    pub momenta: Vec<f64>,
    pub g_abs: f64,
    pub log_g_abs: f64,
    /// Quasiparticle number, twice the number of excited pairs.
    pub n_f: usize,
    pub concurrence: f64,
}

fn log_amplitude(phis: &[f64], excited: &[bool]) -> f64 {
    phis.iter()
        .zip(excited)
        .map(|(phi, &e)| if e { phi.sin().abs().ln() } else { phi.cos().abs().ln() })
        .sum()
}

/// `|g_S|` for the sector whose excited pairs are flagged in `excited`.
pub fn sector_amplitude(phis: &[f64], excited: &[bool]) -> f64 {
    log_amplitude(phis, excited).exp()
}

/// Correlators of the final-Hamiltonian eigenstate with pairs `excited`.
///
/// An excited pair carries occupation `cos² θ_k` instead of `sin² θ_k` and
/// the opposite sign of its pairing amplitude.
pub fn excited_state_correlators(params: &ChainParams, excited: &[bool]) -> Result<PairCorrelators> {
    let modes = model::modes(params)?;
    if excited.len() != modes.len() {
        return Err(Error::InvalidParameter(format!(
            "sector has {} flags, chain has {} pair modes",
            excited.len(),
            modes.len()
        )));
    }
    Ok(excited_from_modes(&modes, excited))
}

fn excited_from_modes(modes: &[ModeData], excited: &[bool]) -> PairCorrelators {
    let norm = 2.0 / (2 * modes.len()) as f64;
    let (mut g, mut z, mut f) = (0.0, 0.0, 0.0);
    for (m, &e) in modes.iter().zip(excited) {
        let (s, c) = m.theta.sin_cos();
        let occ = if e { c * c } else { s * s };
        let pair = if e { -s * c } else { s * c };
        g += occ;
        z += m.k.cos() * occ;
        f += m.k.sin() * pair;
    }
    PairCorrelators {
        g: norm * g,
        z: Complex64::new(norm * z, 0.0),
        f: Complex64::new(-norm * f, 0.0),
    }
}

fn concurrence_of(c: &PairCorrelators) -> Result<f64> {
    Ok(concurrence(&assemble_xstate(c)?))
}

pub fn excited_state_concurrence(params: &ChainParams, excited: &[bool]) -> Result<f64> {
    concurrence_of(&excited_state_correlators(params, excited)?)
}

/// For each pair count `m = 1..=N/2`, the sector with the largest `|g_S|`.
///
/// `|g_S|` is maximized by exciting the `m` pairs with the largest
/// `|tan Φ_k|`.
pub fn g_max_per_sector(protocol: &QuenchProtocol) -> Result<Vec<SpectralSector>> {
    let phis = overlap_angles(protocol)?;
    let last = model::modes(&protocol.params(protocol.h_final))?;
    let mut order: Vec<usize> = (0..phis.len()).collect();
    let tan = |i: usize| phis[i].sin().abs() / phis[i].cos().abs();
    order.sort_by(|&a, &b| tan(b).total_cmp(&tan(a)).then(a.cmp(&b)));

    let mut excited = vec![false; phis.len()];
    let mut out = Vec::with_capacity(phis.len());
    for (m, &idx) in order.iter().enumerate() {
        excited[idx] = true;
        let mut chosen = order[..=m].to_vec();
        chosen.sort_unstable();
        let log_g = log_amplitude(&phis, &excited);
        out.push(SpectralSector {
            momenta: chosen.iter().map(|&i| last[i].k).collect(),
            excited: chosen,
            g_abs: log_g.exp(),
            log_g_abs: log_g,
            n_f: 2 * (m + 1),
            concurrence: concurrence_of(&excited_from_modes(&last, &excited))?,
        });
    }
    Ok(out)
}

fn mask_flags(mask: u64, pairs: usize) -> Vec<bool> {
    (0..pairs).map(|b| (mask >> b) & 1 == 1).collect()
}

/// `|g_S|` for every sector, indexed by the bitmask of excited pairs.
pub fn sector_amplitudes(protocol: &QuenchProtocol) -> Result<Vec<f64>> {
    let phis = overlap_angles(protocol)?;
    check_enumerable(phis.len())?;
    Ok((0..1u64 << phis.len())
        .into_par_iter()
        .map(|mask| sector_amplitude(&phis, &mask_flags(mask, phis.len())))
        .collect())
}

/// `Σ_S |g_S|² C_S` over all sectors, with `Σ_S |g_S|²` as a by-product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceDecomposition {
    pub value: f64,
    pub norm: f64,
    pub sectors: u64,
}

pub fn steady_concurrence_decomposition(protocol: &QuenchProtocol) -> Result<ConcurrenceDecomposition> {
    let phis = overlap_angles(protocol)?;
    let pairs = phis.len();
    check_enumerable(pairs)?;
    let last = model::modes(&protocol.params(protocol.h_final))?;
    let sectors = 1u64 << pairs;
    let blocks = sectors.div_ceil(ENUMERATION_BLOCK);
    let partial: Vec<Result<(f64, f64)>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let (mut value, mut norm) = (0.0, 0.0);
            for mask in b * ENUMERATION_BLOCK..((b + 1) * ENUMERATION_BLOCK).min(sectors) {
                let flags = mask_flags(mask, pairs);
                let w = sector_amplitude(&phis, &flags).powi(2);
                norm += w;
                if w > 0.0 {
                    value += w * concurrence_of(&excited_from_modes(&last, &flags))?;
                }
            }
            Ok((value, norm))
        })
        .collect();
    let (mut value, mut norm) = (0.0, 0.0);
    for p in partial {
        let (v, n) = p?;
        value += v;
        norm += n;
    }
    Ok(ConcurrenceDecomposition {
        value,
        norm,
        sectors,
    })
}

/// Long-time average `L̄` of the Loschmidt echo and its rate `-ln(L̄)/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoschmidtSteady {
    pub lbar: f64,
    pub log_lbar: f64,
    pub rate: f64,
}

impl LoschmidtSteady {
    fn from_log(log_lbar: f64, n: usize) -> Self {
        Self {
            lbar: log_lbar.exp(),
            log_lbar,
            rate: -log_lbar / n as f64,
        }
    }
}

/// Per-mode populations `(1 ± D_k)/2` of the final eigenbasis give
/// `L̄ = Π_k (1 + D_k²)/2`.
fn loschmidt_from_d(d: impl Iterator<Item = f64>, n: usize) -> LoschmidtSteady {
    LoschmidtSteady::from_log(d.map(|d| (0.5 * (1.0 + d * d)).ln()).sum(), n)
}

/// `L̄ = Σ_S |g_S|⁴ = Π_k (cos⁴ Φ_k + sin⁴ Φ_k)`.
pub fn loschmidt_steady_single(protocol: &QuenchProtocol) -> Result<LoschmidtSteady> {
    let phis = overlap_angles(protocol)?;
    Ok(loschmidt_from_d(phis.iter().map(|p| (2.0 * p).cos()), protocol.n))
}

struct DoubleAngles {
    phi_m: f64,
    phi_f: f64,
    eps_m: f64,
}

fn double_angles(protocol: &QuenchProtocol) -> Result<Vec<DoubleAngles>> {
    require_double(protocol)?;
    let h_m = protocol.middle.map(|m| m.h).unwrap_or(protocol.h_final);
    let initial = model::modes(&protocol.params(protocol.h_initial))?;
    let middle = model::modes(&protocol.params(h_m))?;
    let last = model::modes(&protocol.params(protocol.h_final))?;
    Ok(initial
        .iter()
        .zip(&middle)
        .zip(&last)
        .map(|((i, m), f)| DoubleAngles {
            phi_m: m.theta - i.theta,
            phi_f: f.theta - m.theta,
            eps_m: m.eps,
        })
        .collect())
}

/// Long-time echo of the state reached at `T`, in the final eigenbasis.
pub fn loschmidt_steady_double(protocol: &QuenchProtocol) -> Result<LoschmidtSteady> {
    let angles = double_angles(protocol)?;
    let t = protocol.spend_time();
    let d = angles.iter().map(|a| {
        (2.0 * a.phi_m).cos() * (2.0 * a.phi_f).cos()
            - (2.0 * a.phi_m).sin() * (2.0 * a.phi_f).sin() * (2.0 * a.eps_m * t).cos()
    });
    Ok(loschmidt_from_d(d, protocol.n))
}

/// `Σ_q (Σ_p |g_p|² |⟨E_q^f|E_p^m⟩|²)²`: the middle stage fully dephased in
/// its own eigenbasis.
pub fn loschmidt_steady_double_dephased(protocol: &QuenchProtocol) -> Result<LoschmidtSteady> {
    let angles = double_angles(protocol)?;
    let d = angles
        .iter()
        .map(|a| (2.0 * a.phi_m).cos() * (2.0 * a.phi_f).cos());
    Ok(loschmidt_from_d(d, protocol.n))
}

// Two-level pair states in the basis (|0⟩, |k,-k⟩).
type Pair = [Complex64; 2];

fn ground_pair(theta: f64) -> Pair {
    [Complex64::new(theta.cos(), 0.0), Complex64::new(0.0, theta.sin())]
}

fn excited_pair(theta: f64) -> Pair {
    [Complex64::new(theta.sin(), 0.0), Complex64::new(0.0, -theta.cos())]
}

fn braket(a: &Pair, b: &Pair) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

/// Echo amplitude `⟨ψ₀|ψ(τ)⟩ = a e^{iετ} + b e^{-iετ}` of one mode during
/// the final stage, with `a` (`b`) the path through the final ground
/// (excited) pair state.
#[derive(Debug, Clone, Copy)]
struct EchoMode {
    a: Complex64,
    b: Complex64,
    eps: f64,
}

fn echo_mode(protocol: &QuenchProtocol, k: f64) -> EchoMode {
    let initial = model::mode(&protocol.params(protocol.h_initial), k);
    let last = model::mode(&protocol.params(protocol.h_final), k);
    let psi0 = ground_pair(initial.theta);
    let psi_t = match protocol.middle {
        Some(m) => {
            let mid = model::mode(&protocol.params(m.h), k);
            let (gm, em) = (ground_pair(mid.theta), excited_pair(mid.theta));
            let cg = braket(&gm, &psi0) * Complex64::from_polar(1.0, mid.eps * m.spend_time);
            let ce = braket(&em, &psi0) * Complex64::from_polar(1.0, -mid.eps * m.spend_time);
            [cg * gm[0] + ce * em[0], cg * gm[1] + ce * em[1]]
        }
        None => psi0,
    };
    let (gf, ef) = (ground_pair(last.theta), excited_pair(last.theta));
    EchoMode {
        a: braket(&psi0, &gf) * braket(&gf, &psi_t),
        b: braket(&psi0, &ef) * braket(&ef, &psi_t),
        eps: last.eps,
    }
}

/// Echo `|⟨Ψ(0)|Ψ(t)⟩|²` at one time, kept in log form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoschmidtPoint {
    pub t: f64,
    pub log_echo: f64,
    /// `-ln|⟨Ψ(0)|Ψ(t)⟩|² / N`.
    pub rate: f64,
}

pub fn loschmidt_echo(protocol: &QuenchProtocol, t: f64) -> Result<LoschmidtPoint> {
    protocol.validate()?;
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let grid = model::momentum_grid(protocol.n)?;
    let log_echo = match protocol.middle {
        Some(m) if t < m.spend_time => {
            let single = QuenchProtocol {
                middle: None,
                h_final: m.h,
                ..*protocol
            };
            grid.iter()
                .map(|&k| {
                    let e = echo_mode(&single, k);
                    echo_at(&e, t).norm_sqr().ln()
                })
                .sum()
        }
        _ => {
            let tau = t - protocol.spend_time();
            grid.iter()
                .map(|&k| echo_at(&echo_mode(protocol, k), tau).norm_sqr().ln())
                .sum::<f64>()
        }
    };
    Ok(LoschmidtPoint {
        t,
        log_echo,
        rate: -log_echo / protocol.n as f64,
    })
}

fn echo_at(e: &EchoMode, tau: f64) -> Complex64 {
    e.a * Complex64::from_polar(1.0, e.eps * tau) + e.b * Complex64::from_polar(1.0, -e.eps * tau)
}

/// Mode whose echo amplitude can vanish, and the times at which it does.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalMode {
    /// Root of `|a_k| = |b_k|` on the continuum.
    pub k_star: f64,
    pub nearest_grid_k: f64,
    pub eps: f64,
    /// `π / ε_{k*}`.
    pub t_star: f64,
    /// `arg(b/a)` at `k*`; zero for a single quench.
    pub phase_shift: f64,
    /// Critical times `t_l`, `l = 0..count`, measured from `t = 0`.
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CriticalTimes {
    NoCriticalMode,
    /// The critical mode sits where the final spectrum closes, so `t* = ∞`.
    Divergent { k_star: f64 },
    Found(Vec<CriticalMode>),
}

const ROOT_SCAN: usize = 4096;
const DIVERGENT_EPS: f64 = 1e-8;

/// Critical times of the echo after the last quench.
///
/// Roots of `|a_k| - |b_k|` are bracketed on a fine continuum scan and
/// bisected; `t_l = T + (π / 2ε)(2l + 1 + arg(b/a)/π)`.
pub fn dqpt_critical_times(protocol: &QuenchProtocol, count: usize) -> Result<CriticalTimes> {
    protocol.validate()?;
    let grid = model::momentum_grid(protocol.n)?;
    let imbalance = |k: f64| {
        let e = echo_mode(protocol, k);
        e.a.norm() - e.b.norm()
    };
    let pi = std::f64::consts::PI;
    let ks: Vec<f64> = (1..ROOT_SCAN).map(|i| pi * i as f64 / ROOT_SCAN as f64).collect();
    let values: Vec<f64> = ks.iter().map(|&k| imbalance(k)).collect();

    let mut modes = Vec::new();
    let mut divergent = None;
    for i in 0..ks.len() - 1 {
        if values[i] == 0.0 || values[i].signum() != values[i + 1].signum() {
            let k_star = bisect(&imbalance, ks[i], ks[i + 1]);
            let e = echo_mode(protocol, k_star);
            if e.eps < DIVERGENT_EPS {
                divergent = Some(k_star);
                continue;
            }
            let phase_shift = if e.a.norm() > 0.0 { (e.b / e.a).arg() } else { 0.0 };
            let t_star = pi / e.eps;
            let t0 = protocol.spend_time();
            modes.push(CriticalMode {
                k_star,
                nearest_grid_k: nearest(&grid, k_star),
                eps: e.eps,
                t_star,
                phase_shift,
                times: (0..count)
                    .map(|l| t0 + 0.5 * t_star * ((2 * l + 1) as f64 + phase_shift / pi))
                    .collect(),
            });
        }
    }
    if !modes.is_empty() {
        return Ok(CriticalTimes::Found(modes));
    }
    if let Some(k_star) = divergent {
        return Ok(CriticalTimes::Divergent { k_star });
    }
    // a root touching a gap-closing endpoint never changes sign
    let final_params = protocol.params(protocol.h_final);
    for edge in [0.0, pi] {
        if model::dispersion(&final_params, edge).2 < GAPLESS_EPS {
            let probe = if edge == 0.0 { 1e-9 } else { pi - 1e-9 };
            let e = echo_mode(protocol, probe);
            if (e.a.norm() - e.b.norm()).abs() < 1e-6 {
                return Ok(CriticalTimes::Divergent { k_star: edge });
            }
        }
    }
    Ok(CriticalTimes::NoCriticalMode)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || hi - lo < 1e-15 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn nearest(grid: &[f64], k: f64) -> f64 {
    grid.iter()
        .copied()
        .min_by(|a, b| (a - k).abs().total_cmp(&(b - k).abs()))
        .unwrap_or(k)
}
