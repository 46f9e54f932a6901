//! Hamiltonian parameters, momentum grid and Bogoliubov data of the
//! transverse-field XY chain
//!
//! ```text
//! H = -J Σ [(1+δ) SˣSˣ + (1-δ) SʸSʸ] - h Σ Sᶻ
//! ```
//!
//! on a periodic ring of `N` spins. After the Jordan–Wigner mapping
//! (spin up = occupied fermion) the even-parity sector has antiperiodic
//! fermions and decouples into two-level problems on momentum pairs
//! `(k, -k)` with `k = π(2m+1)/N`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Below this quasiparticle energy a mode is treated as gapless.
pub const GAPLESS_EPS: f64 = 1e-12;

/// Couplings and size of one XY chain Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    pub j: f64,
    pub delta: f64,
    pub h: f64,
    pub n: usize,
}

impl ChainParams {
    /// Chain with `J = 1`.
    pub fn new(delta: f64, h: f64, n: usize) -> Result<Self> {
        Self::with_coupling(1.0, delta, h, n)
    }

    pub fn with_coupling(j: f64, delta: f64, h: f64, n: usize) -> Result<Self> {
        let params = Self { j, delta, h, n };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_size(self.n)?;
        if !(self.j.is_finite() && self.j > 0.0) {
            return Err(Error::InvalidParameter(format!("J must be positive, got {}", self.j)));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::InvalidParameter(format!(
                "anisotropy must lie in [0, 1], got {}",
                self.delta
            )));
        }
        if !self.h.is_finite() {
            return Err(Error::InvalidParameter(format!("field must be finite, got {}", self.h)));
        }
        Ok(())
    }

    /// Same chain at a different transverse field.
    pub fn with_field(&self, h: f64) -> Self {
        Self { h, ..*self }
    }

    /// Field at which the ground state factorizes, `h² + (Jδ)² = J²`.
    pub fn factorizing_field(&self) -> f64 {
        (self.j * self.j - (self.j * self.delta).powi(2)).sqrt()
    }
}

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidChainSize(n));
    }
    Ok(())
}

/// Per-mode data of the diagonalized chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeData {
    pub k: f64,
    pub a: f64,
    pub b: f64,
    pub eps: f64,
    pub theta: f64,
}

/// Positive momenta `k_m = π(2m+1)/N`, `m = 0..N/2`.
pub fn momentum_grid(n: usize) -> Result<Vec<f64>> {
    check_size(n)?;
    Ok((0..n / 2)
        .map(|m| PI * (2 * m + 1) as f64 / n as f64)
        .collect())
}

/// `(A_k, B_k, ε_k)` with `A_k = -(J cos k + h)`, `B_k = Jδ sin k`.
pub fn dispersion(params: &ChainParams, k: f64) -> (f64, f64, f64) {
    let a = -(params.j * k.cos() + params.h);
    let b = params.j * params.delta * k.sin();
    (a, b, a.hypot(b))
}

/// Bogoliubov angle with `2θ_k = atan2(-B_k, A_k)`.
///
/// With this branch the pair-sector ground state of mode `k` is
/// `cos θ_k |0⟩ + i sin θ_k |k,-k⟩`, the state annihilated by
/// `α_k = cos θ_k a_k - i sin θ_k a†_{-k}`. Gapless modes return 0.
pub fn bogoliubov_angle(params: &ChainParams, k: f64) -> f64 {
    let (a, b, eps) = dispersion(params, k);
    if eps < GAPLESS_EPS {
        return 0.0;
    }
    0.5 * (-b).atan2(a)
}

pub fn mode(params: &ChainParams, k: f64) -> ModeData {
    let (a, b, eps) = dispersion(params, k);
    ModeData {
        k,
        a,
        b,
        eps,
        theta: bogoliubov_angle(params, k),
    }
}

/// Mode data for every positive momentum of the grid.
pub fn modes(params: &ChainParams) -> Result<Vec<ModeData>> {
    Ok(momentum_grid(params.n)?
        .into_iter()
        .map(|k| mode(params, k))
        .collect())
}

/// Even-sector ground energy `-Σ_{k>0} ε_k`.
pub fn ground_state_energy(params: &ChainParams) -> Result<f64> {
    Ok(-modes(params)?.iter().map(|m| m.eps).sum::<f64>())
}
