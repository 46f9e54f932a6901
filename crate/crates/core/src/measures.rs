//! Two-site reduced density matrix and its quantum-correlation measures.
//!
//! Basis order is `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` with the first label on site `i`
//! and spin up being an occupied fermion. In that basis
//!
//! ```text
//!       ⎛ X⁺  0   0   f̄  ⎞
//!   ρ = ⎜ 0   Y⁺  Z̄   0  ⎟
//!       ⎜ 0   Z   Y⁻  0  ⎟
//!       ⎝ f   0   0   X⁻ ⎠
//! ```
//!
//! Concurrence and discord are invariant under local unitaries, so the
//! discord routines first rotate local phases until `Z` and `f` are real and
//! non-negative. Entropies are in bits.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quench::PairCorrelators;

/// Eigenvalues above this (negative) threshold are clipped to zero.
pub const EIGEN_CLIP: f64 = 1e-10;
/// Assembled matrices with an eigenvalue below this are rejected.
pub const POSITIVITY_TOLERANCE: f64 = 1e-8;

/// X-shaped two-site density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateDensity {
    pub xp: f64,
    pub yp: f64,
    pub ym: f64,
    pub xm: f64,
    pub z: Complex64,
    pub f: Complex64,
}

/// Pauli expectation values of a phase-aligned X state.
///
/// `c1 = ⟨σˣσˣ⟩`, `c2 = ⟨σʸσʸ⟩`, `c3 = ⟨σᶻσᶻ⟩`, `c4 = ⟨σᶻ_{i+1}⟩` and
/// `a_z = ⟨σᶻ_i⟩`; for translation-invariant states `a_z = c4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub a_z: f64,
}

impl XStateDensity {
    /// Builds ρ from pair correlators, with `⟨n_i n_{i+1}⟩` from Wick's
    /// theorem: `X⁺ = G² - |Z|² + |f|²`.
    pub fn from_correlators(c: &PairCorrelators) -> Result<Self> {
        let xp = c.g * c.g - c.z.norm_sqr() + c.f.norm_sqr();
        let rho = Self {
            xp,
            yp: c.g - xp,
            ym: c.g - xp,
            xm: 1.0 - 2.0 * c.g + xp,
            z: c.z,
            f: c.f,
        };
        let lowest = rho.eigenvalues()[3];
        if lowest < -POSITIVITY_TOLERANCE {
            return Err(Error::NotPositive(lowest));
        }
        Ok(rho)
    }

    pub fn trace(&self) -> f64 {
        self.xp + self.yp + self.ym + self.xm
    }

    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        let r = |x: f64| Complex64::new(x, 0.0);
        let o = Complex64::new(0.0, 0.0);
        Matrix4::new(
            r(self.xp), o, o, self.f.conj(),
            o, r(self.yp), self.z.conj(), o,
            o, self.z, r(self.ym), o,
            self.f, o, o, r(self.xm),
        )
    }

    /// Local phase rotation `diag(e^{iα}, 1) ⊗ diag(e^{iβ}, 1)` making `Z`
    /// and `f` real and non-negative.
    pub fn phase_aligned(&self) -> Self {
        Self {
            z: Complex64::new(self.z.norm(), 0.0),
            f: Complex64::new(self.f.norm(), 0.0),
            ..*self
        }
    }

    /// The local phases `(α, β)` that realize [`Self::phase_aligned`].
    pub fn alignment_phases(&self) -> (f64, f64) {
        // Z picks up e^{i(α-β)}, f picks up e^{i(α+β)}
        let dz = -self.z.arg();
        let df = -self.f.arg();
        (0.5 * (df + dz), 0.5 * (df - dz))
    }

    pub fn coefficients(&self) -> CorrelationCoefficients {
        let z = self.z.norm();
        let f = self.f.norm();
        CorrelationCoefficients {
            c1: 2.0 * (z + f),
            c2: 2.0 * (z - f),
            c3: self.xp + self.xm - self.yp - self.ym,
            c4: self.xp - self.xm - self.yp + self.ym,
            a_z: self.xp - self.xm + self.yp - self.ym,
        }
    }

    /// Closed-form block eigenvalues, sorted descending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let outer_mid = 0.5 * (self.xp + self.xm);
        let outer_rad = (0.25 * (self.xp - self.xm).powi(2) + self.f.norm_sqr()).sqrt();
        let inner_mid = 0.5 * (self.yp + self.ym);
        let inner_rad = (0.25 * (self.yp - self.ym).powi(2) + self.z.norm_sqr()).sqrt();
        let mut ev = [
            outer_mid + outer_rad,
            outer_mid - outer_rad,
            inner_mid + inner_rad,
            inner_mid - inner_rad,
        ];
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }
}

pub fn assemble_xstate(c: &PairCorrelators) -> Result<XStateDensity> {
    XStateDensity::from_correlators(c)
}

pub fn xstate_eigenvalues(rho: &XStateDensity) -> [f64; 4] {
    rho.eigenvalues()
}

/// `C = max(0, 2(|Z| - √(X⁺X⁻)), 2(|f| - √(Y⁺Y⁻)))`.
pub fn concurrence(rho: &XStateDensity) -> f64 {
    let l1 = 2.0 * (rho.z.norm() - (rho.xp * rho.xm).max(0.0).sqrt());
    let l2 = 2.0 * (rho.f.norm() - (rho.yp * rho.ym).max(0.0).sqrt());
    l1.max(l2).max(0.0)
}

fn xlog2x(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// Entropy of a qubit with Bloch vector length `r`.
pub fn qubit_entropy(r: f64) -> f64 {
    let r = r.abs().min(1.0);
    -xlog2x(0.5 * (1.0 + r)) - xlog2x(0.5 * (1.0 - r))
}

/// Von Neumann entropy of a spectrum, clipping tiny negative eigenvalues.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> f64 {
    -eigenvalues
        .iter()
        .map(|&l| if (-EIGEN_CLIP..0.0).contains(&l) { 0.0 } else { l })
        .map(xlog2x)
        .sum::<f64>()
}

/// `I = S(ρ_i) + S(ρ_{i+1}) - S(ρ_{i,i+1})`.
pub fn mutual_information(rho: &XStateDensity) -> f64 {
    let c = rho.coefficients();
    qubit_entropy(c.a_z) + qubit_entropy(c.c4) - spectrum_entropy(&rho.eigenvalues())
}

/// Post-measurement data for projective measurement of site `i+1` along the
/// Bloch direction `(θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBranch {
    pub theta: f64,
    pub phi: f64,
    /// Bloch vectors `χ_{k'j}` of site `i` after outcome `k' = 0, 1`.
    pub chi: [[f64; 3]; 2],
    /// `|χ_{k'}|`.
    pub norms: [f64; 2],
    pub probabilities: [f64; 2],
}

impl MeasurementBranch {
    pub fn new(coeffs: &CorrelationCoefficients, theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let mut chi = [[0.0; 3]; 2];
        let mut norms = [0.0; 2];
        let mut probabilities = [0.0; 2];
        for (branch, sign) in [(0, 1.0), (1, -1.0)] {
            let denom = 1.0 + sign * coeffs.c4 * ct;
            probabilities[branch] = 0.5 * denom;
            if denom > 0.0 {
                chi[branch] = [
                    sign * coeffs.c1 * st * cp / denom,
                    sign * coeffs.c2 * st * sp / denom,
                    (sign * coeffs.c3 * ct + coeffs.a_z) / denom,
                ];
            }
            norms[branch] = chi[branch].iter().map(|x| x * x).sum::<f64>().sqrt();
        }
        Self {
            theta,
            phi,
            chi,
            norms,
            probabilities,
        }
    }

    /// Average conditional entropy `Σ p_{k'} S(ρ_{k'})`.
    pub fn conditional_entropy(&self) -> f64 {
        self.probabilities
            .iter()
            .zip(self.norms)
            .map(|(&p, r)| if p > 0.0 { p * qubit_entropy(r) } else { 0.0 })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalCorrelation {
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
    pub converged: bool,
}

const COARSE_GRID: usize = 64;
const REFINE_STARTS: usize = 4;
const REFINE_MIN_STEP: f64 = 1e-10;
const REFINE_MAX_ITER: usize = 10_000;

/// Maximal information about site `i` gained by a rank-1 projective
/// measurement on site `i+1`: coarse 64×64 grid in `(θ, φ)` followed by a
/// compass search from the best grid points.
pub fn classical_correlation(rho: &XStateDensity) -> ClassicalCorrelation {
    let coeffs = rho.phase_aligned().coefficients();
    let s_a = qubit_entropy(coeffs.a_z);
    let objective = |theta: f64, phi: f64| {
        s_a - MeasurementBranch::new(&coeffs, theta, phi).conditional_entropy()
    };

    let d_theta = std::f64::consts::PI / (COARSE_GRID - 1) as f64;
    let d_phi = 2.0 * std::f64::consts::PI / COARSE_GRID as f64;
    let mut grid: Vec<(f64, f64, f64)> = Vec::with_capacity(COARSE_GRID * COARSE_GRID);
    for i in 0..COARSE_GRID {
        for j in 0..COARSE_GRID {
            let (t, p) = (i as f64 * d_theta, j as f64 * d_phi);
            grid.push((objective(t, p), t, p));
        }
    }
    grid.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut best = ClassicalCorrelation {
        value: grid[0].0,
        theta: grid[0].1,
        phi: grid[0].2,
        converged: false,
    };
    for &(v0, t0, p0) in grid.iter().take(REFINE_STARTS) {
        let (value, theta, phi, converged) = compass_search(&objective, (v0, t0, p0), d_theta);
        if value > best.value || (value == best.value && converged) {
            best = ClassicalCorrelation {
                value,
                theta,
                phi,
                converged,
            };
        }
    }
    best
}

fn compass_search(
    objective: &impl Fn(f64, f64) -> f64,
    start: (f64, f64, f64),
    step0: f64,
) -> (f64, f64, f64, bool) {
    let (mut value, mut theta, mut phi) = start;
    let mut step = step0;
    for _ in 0..REFINE_MAX_ITER {
        if step < REFINE_MIN_STEP {
            return (value, theta, phi, true);
        }
        let mut moved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let t = (theta + dt).clamp(0.0, std::f64::consts::PI);
            let p = phi + dp;
            let v = objective(t, p);
            if v > value {
                value = v;
                theta = t;
                phi = p;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (value, theta, phi.rem_euclid(2.0 * std::f64::consts::PI), false)
}

/// Discord together with the pieces it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    pub discord: f64,
    pub mutual_info: f64,
    pub classical: ClassicalCorrelation,
}

/// `QD = I - C_cl`, with values in `[-1e-8, 0)` clamped to zero.
pub fn quantum_discord(rho: &XStateDensity) -> DiscordResult {
    let mutual_info = mutual_information(rho);
    let classical = classical_correlation(rho);
    let mut discord = mutual_info - classical.value;
    if (-1e-8..0.0).contains(&discord) {
        discord = 0.0;
    }
    DiscordResult {
        discord,
        mutual_info,
        classical,
    }
}

/// All correlation measures of one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcValues {
    pub concurrence: f64,
    pub discord: f64,
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub converged: bool,
}

pub fn qc_values(rho: &XStateDensity) -> QcValues {
    let d = quantum_discord(rho);
    QcValues {
        concurrence: concurrence(rho),
        discord: d.discord,
        mutual_info: d.mutual_info,
        classical_corr: d.classical.value,
        converged: d.classical.converged,
    }
}

/// Correlators straight to correlation measures.
pub fn qc_from_correlators(c: &PairCorrelators) -> Result<QcValues> {
    Ok(qc_values(&assemble_xstate(c)?))
}
