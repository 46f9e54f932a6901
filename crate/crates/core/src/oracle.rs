//! Dense exact-diagonalization reference for small rings.
//!
//! Works directly on spin configurations: bit `l` of a basis index is site
//! `l`, set bit = spin up. Nothing here uses the fermionic solution, so the
//! results are an independent check of the free-fermion engine. Only the
//! even-popcount block is kept for dynamics; the Hamiltonian conserves
//! `Π σᶻ` and every quench starts from the even-block ground state.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::spectrum_entropy;
use crate::model::{self, ChainParams};
use crate::quench::{PairCorrelators, QuenchProtocol};

pub const MAX_SITES: usize = 12;
/// Relative gap below which eigenvalues are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Spin configurations of one `Π σᶻ` sector, in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityBlock {
    pub n: usize,
    pub parity: Parity,
    pub states: Vec<usize>,
    lookup: Vec<usize>,
}

impl ParityBlock {
    pub fn new(n: usize, parity: Parity) -> Result<Self> {
        model::check_size(n)?;
        if n > MAX_SITES {
            return Err(Error::TooManySites {
                sites: n,
                max: MAX_SITES,
            });
        }
        let want = match parity {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        let states: Vec<usize> = (0..1usize << n)
            .filter(|s| s.count_ones() % 2 == want)
            .collect();
        let mut lookup = vec![usize::MAX; 1 << n];
        for (i, &s) in states.iter().enumerate() {
            lookup[s] = i;
        }
        Ok(Self {
            n,
            parity,
            states,
            lookup,
        })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, config: usize) -> Option<usize> {
        match self.lookup.get(config) {
            Some(&i) if i != usize::MAX => Some(i),
            _ => None,
        }
    }
}

/// Block of `H = -J Σ [(1+δ)SˣSˣ + (1-δ)SʸSʸ] - h Σ Sᶻ` on a ring.
///
/// On a bond, antiparallel spins swap with amplitude `-J/2` and parallel
/// spins flip together with amplitude `-Jδ/2`.
pub fn hamiltonian(params: &ChainParams, block: &ParityBlock) -> Result<DMatrix<f64>> {
    params.validate()?;
    if params.n != block.n {
        return Err(Error::InvalidParameter(format!(
            "block built for {} sites, chain has {}",
            block.n, params.n
        )));
    }
    let n = params.n;
    let dim = block.dim();
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for (col, &s) in block.states.iter().enumerate() {
        let up = s.count_ones() as f64;
        h[(col, col)] = -0.5 * params.h * (2.0 * up - n as f64);
        for l in 0..n {
            let r = (l + 1) % n;
            let flipped = s ^ (1 << l) ^ (1 << r);
            let parallel = ((s >> l) & 1) == ((s >> r) & 1);
            let amp = if parallel {
                -0.5 * params.j * params.delta
            } else {
                -0.5 * params.j
            };
            if let Some(row) = block.index_of(flipped) {
                h[(row, col)] += amp;
            }
        }
    }
    Ok(h)
}

/// Ascending eigenvalues of one block.
pub fn block_energies(params: &ChainParams, parity: Parity) -> Result<Vec<f64>> {
    let block = ParityBlock::new(params.n, parity)?;
    let mut ev: Vec<f64> = hamiltonian(params, &block)?
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundEnergies {
    pub even: f64,
    pub odd: f64,
}

impl GroundEnergies {
    pub fn global(&self) -> f64 {
        self.even.min(self.odd)
    }
}

/// Lowest eigenvalue of one block: dense for small blocks, Lanczos with
/// full reorthogonalization otherwise.
pub fn lowest_energy(params: &ChainParams, parity: Parity) -> Result<f64> {
    let block = ParityBlock::new(params.n, parity)?;
    if block.dim() <= 512 {
        return Ok(block_energies(params, parity)?[0]);
    }
    Ok(lanczos_lowest(&hamiltonian(params, &block)?))
}

fn lanczos_lowest(h: &DMatrix<f64>) -> f64 {
    let dim = h.nrows();
    // irregular start vector, so no symmetry sector is missed
    let mut v = DVector::from_fn(dim, |i, _| (1.3 * i as f64 + 0.7).sin() + (0.37 * (i * i) as f64).cos());
    v /= v.norm();
    let mut basis: Vec<DVector<f64>> = vec![v];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut previous = f64::INFINITY;
    let mut stable = 0;
    loop {
        let mut w = h * basis.last().unwrap();
        alpha.push(w.dot(basis.last().unwrap()));
        for _ in 0..2 {
            for b in &basis {
                let proj = w.dot(b);
                w.axpy(-proj, b, 1.0);
            }
        }
        let m = alpha.len();
        let tri = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let lowest = tri.symmetric_eigenvalues().min();
        let b = w.norm();
        stable = if (lowest - previous).abs() < 1e-14 * (1.0 + lowest.abs()) { stable + 1 } else { 0 };
        previous = lowest;
        if stable >= 3 || b < 1e-12 || m == dim {
            return lowest;
        }
        beta.push(b);
        basis.push(w / b);
    }
}

pub fn ground_energies(params: &ChainParams) -> Result<GroundEnergies> {
    Ok(GroundEnergies {
        even: lowest_energy(params, Parity::Even)?,
        odd: lowest_energy(params, Parity::Odd)?,
    })
}

/// Pure state on a parity block.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    pub block: Arc<ParityBlock>,
    pub amps: DVector<Complex64>,
}

impl DenseState {
    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &DenseState) -> Complex64 {
        self.amps.dotc(&other.amps)
    }
}

/// Full eigendecomposition of one block, energies ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub block: Arc<ParityBlock>,
    pub energies: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn new(params: &ChainParams, block: Arc<ParityBlock>) -> Result<Self> {
        let eig = hamiltonian(params, &block)?.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let energies = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
        let vectors = eig.eigenvectors.select_columns(&order);
        Ok(Self {
            block,
            energies,
            vectors,
        })
    }

    pub fn even(params: &ChainParams) -> Result<Self> {
        Self::new(params, Arc::new(ParityBlock::new(params.n, Parity::Even)?))
    }

    pub fn eigenstate(&self, index: usize) -> DenseState {
        DenseState {
            block: Arc::clone(&self.block),
            amps: self.vectors.column(index).map(|x| Complex64::new(x, 0.0)),
        }
    }

    pub fn ground_state(&self) -> DenseState {
        self.eigenstate(0)
    }

    /// Coefficients of `state` in the eigenbasis.
    pub fn coefficients(&self, state: &DenseState) -> DVector<Complex64> {
        let re = self.vectors.tr_mul(&state.amps.map(|c| c.re));
        let im = self.vectors.tr_mul(&state.amps.map(|c| c.im));
        re.zip_map(&im, Complex64::new)
    }

    fn from_coefficients(&self, coeffs: &DVector<Complex64>) -> DenseState {
        let re = &self.vectors * coeffs.map(|c| c.re);
        let im = &self.vectors * coeffs.map(|c| c.im);
        DenseState {
            block: Arc::clone(&self.block),
            amps: re.zip_map(&im, Complex64::new),
        }
    }

    /// `e^{-iHt} |state⟩`.
    pub fn evolve(&self, state: &DenseState, t: f64) -> DenseState {
        let mut c = self.coefficients(state);
        for (ci, &e) in c.iter_mut().zip(self.energies.iter()) {
            *ci *= Complex64::from_polar(1.0, -e * t);
        }
        self.from_coefficients(&c)
    }

    /// Ranges `[start, end)` of eigenvalues equal within [`DEGENERACY_TOL`].
    pub fn eigenspaces(&self) -> Vec<(usize, usize)> {
        let e = &self.energies;
        let mut spaces = Vec::new();
        let mut start = 0;
        for i in 1..=e.len() {
            if i == e.len() || e[i] - e[i - 1] > DEGENERACY_TOL * (1.0 + e[i].abs()) {
                spaces.push((start, i));
                start = i;
            }
        }
        spaces
    }

    /// Diagonal-ensemble weights `‖P_q ψ‖²`, one per eigenspace.
    pub fn diagonal_weights(&self, state: &DenseState) -> Vec<f64> {
        let c = self.coefficients(state);
        self.eigenspaces()
            .iter()
            .map(|&(a, b)| (a..b).map(|i| c[i].norm_sqr()).sum())
            .collect()
    }

    /// Infinite-time average of the two-site density matrix of `state`
    /// evolving under this Hamiltonian.
    pub fn time_averaged_two_site(&self, state: &DenseState, site: usize) -> Result<Matrix4<Complex64>> {
        let c = self.coefficients(state);
        let mut rho = Matrix4::zeros();
        for (a, b) in self.eigenspaces() {
            let mut part = DVector::zeros(c.len());
            part.rows_mut(a, b - a).copy_from(&c.rows(a, b - a));
            rho += reduced_two_site(&self.from_coefficients(&part), site)?;
        }
        Ok(rho)
    }
}

/// `Σ_q w_q²`: the long-time average of the Loschmidt echo.
pub fn diagonal_purity(weights: &[f64]) -> f64 {
    weights.iter().map(|w| w * w).sum()
}

/// A quench protocol solved by dense diagonalization.
#[derive(Debug, Clone)]
pub struct EdQuench {
    pub initial: DenseState,
    middle: Option<(Spectrum, f64)>,
    pub last: Spectrum,
}

impl EdQuench {
    pub fn new(protocol: &QuenchProtocol) -> Result<Self> {
        protocol.validate()?;
        let initial = Spectrum::even(&protocol.params(protocol.h_initial))?.ground_state();
        let middle = match protocol.middle {
            Some(m) => Some((Spectrum::even(&protocol.params(m.h))?, m.spend_time)),
            None => None,
        };
        let last = Spectrum::even(&protocol.params(protocol.h_final))?;
        Ok(Self {
            initial,
            middle,
            last,
        })
    }

    /// State at the start of the final stage.
    pub fn state_at_switch(&self) -> DenseState {
        match &self.middle {
            Some((spec, t)) => spec.evolve(&self.initial, *t),
            None => self.initial.clone(),
        }
    }

    pub fn state_at(&self, t: f64) -> Result<DenseState> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        Ok(match &self.middle {
            Some((spec, big_t)) if t < *big_t => spec.evolve(&self.initial, t),
            Some((_, big_t)) => self.last.evolve(&self.state_at_switch(), t - big_t),
            None => self.last.evolve(&self.initial, t),
        })
    }
}

fn two_site_index(a: usize, b: usize) -> usize {
    // |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩
    2 * (1 - a) + (1 - b)
}

/// Reduced density matrix of sites `site` and `site + 1` (mod `N`).
pub fn reduced_two_site(state: &DenseState, site: usize) -> Result<Matrix4<Complex64>> {
    let n = state.block.n;
    if site >= n {
        return Err(Error::SiteOutOfRange { site, sites: n });
    }
    let (i, j) = (site, (site + 1) % n);
    let mask = (1 << i) | (1 << j);
    let mut rho = Matrix4::zeros();
    for (col, &s) in state.block.states.iter().enumerate() {
        let psi = state.amps[col];
        if psi == Complex64::new(0.0, 0.0) {
            continue;
        }
        let (a, b) = ((s >> i) & 1, (s >> j) & 1);
        let rest = s & !mask;
        for a2 in 0..2 {
            for b2 in 0..2 {
                let s2 = rest | (a2 << i) | (b2 << j);
                if let Some(k) = state.block.index_of(s2) {
                    rho[(two_site_index(a, b), two_site_index(a2, b2))] += psi * state.amps[k].conj();
                }
            }
        }
    }
    Ok(rho)
}

/// `G`, `Z`, `f` read off a two-site density matrix.
pub fn correlators_from_rho(rho: &Matrix4<Complex64>) -> PairCorrelators {
    PairCorrelators {
        g: (rho[(0, 0)] + rho[(1, 1)]).re,
        z: rho[(2, 1)],
        f: rho[(3, 0)],
    }
}

pub fn pair_correlators(state: &DenseState, site: usize) -> Result<PairCorrelators> {
    Ok(correlators_from_rho(&reduced_two_site(state, site)?))
}

pub fn hermitian_eigenvalues(rho: &Matrix4<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = rho.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

fn sigma_y_y() -> Matrix4<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    Matrix4::new(o, o, o, -l, o, o, l, o, o, l, o, o, -l, o, o, o)
}

/// Wootters concurrence of an arbitrary two-qubit state.
pub fn wootters_concurrence(rho: &Matrix4<Complex64>) -> f64 {
    let eig = rho.symmetric_eigen();
    let sqrt_ev = eig.eigenvalues.map(|x| Complex64::new(x.max(0.0).sqrt(), 0.0));
    let sqrt_rho = eig.eigenvectors * Matrix4::from_diagonal(&sqrt_ev) * eig.eigenvectors.adjoint();
    let yy = sigma_y_y();
    let tilde = yy * rho.conjugate() * yy;
    let m = sqrt_rho * tilde * sqrt_rho;
    let m = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut lam: Vec<f64> = m
        .symmetric_eigenvalues()
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    (lam[0] - lam[1] - lam[2] - lam[3]).max(0.0)
}

fn partial_trace_second(rho: &Matrix4<Complex64>) -> Matrix2<Complex64> {
    Matrix2::from_fn(|a, a2| rho[(2 * a, 2 * a2)] + rho[(2 * a + 1, 2 * a2 + 1)])
}

fn partial_trace_first(rho: &Matrix4<Complex64>) -> Matrix2<Complex64> {
    Matrix2::from_fn(|b, b2| rho[(b, b2)] + rho[(2 + b, 2 + b2)])
}

fn qubit_entropy_of(m: &Matrix2<Complex64>) -> f64 {
    let ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    spectrum_entropy(&ev)
}

/// `S(A) + S(B) - S(AB)` in bits.
pub fn mutual_information(rho: &Matrix4<Complex64>) -> f64 {
    qubit_entropy_of(&partial_trace_second(rho)) + qubit_entropy_of(&partial_trace_first(rho))
        - spectrum_entropy(&hermitian_eigenvalues(rho))
}

/// Average entropy of the first qubit after a projective measurement of the
/// second along `(θ, φ)`.
fn conditional_entropy(rho: &Matrix4<Complex64>, theta: f64, phi: f64) -> f64 {
    let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let half = Complex64::new(0.5, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let n_sigma = Matrix2::new(
        Complex64::new(n[2], 0.0),
        n[0] - i * n[1],
        n[0] + i * n[1],
        Complex64::new(-n[2], 0.0),
    );
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        let proj = (Matrix2::identity() + n_sigma * Complex64::new(sign, 0.0)) * half;
        let cond = Matrix2::from_fn(|a, a2| {
            let mut acc = Complex64::new(0.0, 0.0);
            for b in 0..2 {
                for b2 in 0..2 {
                    acc += rho[(2 * a + b, 2 * a2 + b2)] * proj[(b2, b)];
                }
            }
            acc
        });
        let p = cond.trace().re;
        if p > 1e-14 {
            total += p * qubit_entropy_of(&(cond / Complex64::new(p, 0.0)));
        }
    }
    total
}

/// Numeric discord with measurement on the second qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericDiscord {
    pub discord: f64,
    pub mutual_info: f64,
    pub classical: f64,
}

pub fn numeric_discord(rho: &Matrix4<Complex64>) -> NumericDiscord {
    use std::f64::consts::PI;
    let objective = |x: [f64; 2]| conditional_entropy(rho, x[0], x[1]);
    let (nt, np) = (40, 80);
    let mut grid = Vec::with_capacity(nt * np);
    for a in 0..nt {
        for b in 0..np {
            let x = [PI * (a as f64 + 0.5) / nt as f64, 2.0 * PI * b as f64 / np as f64];
            grid.push((objective(x), x));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    let best = grid
        .iter()
        .take(3)
        .map(|&(_, x)| nelder_mead(&objective, x, 0.05))
        .fold(f64::INFINITY, f64::min)
        .min(grid[0].0);
    let s_a = qubit_entropy_of(&partial_trace_second(rho));
    let mutual_info = mutual_information(rho);
    let classical = s_a - best;
    NumericDiscord {
        discord: mutual_info - classical,
        mutual_info,
        classical,
    }
}

fn nelder_mead(f: &impl Fn([f64; 2]) -> f64, start: [f64; 2], scale: f64) -> f64 {
    let mut simplex = [
        start,
        [start[0] + scale, start[1]],
        [start[0], start[1] + scale],
    ];
    let mut values = simplex.map(f);
    for _ in 0..2000 {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = idx.map(|i| simplex[i]);
        values = idx.map(|i| values[i]);
        if (values[2] - values[0]).abs() < 1e-15 {
            break;
        }
        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let along = |t: f64| {
            [
                centroid[0] + t * (simplex[2][0] - centroid[0]),
                centroid[1] + t * (simplex[2][1] - centroid[1]),
            ]
        };
        let xr = along(-1.0);
        let fr = f(xr);
        if fr < values[0] {
            let xe = along(-2.0);
            let fe = f(xe);
            (simplex[2], values[2]) = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < values[1] {
            (simplex[2], values[2]) = (xr, fr);
        } else {
            let xc = along(0.5);
            let fc = f(xc);
            if fc < values[2] {
                (simplex[2], values[2]) = (xc, fc);
            } else {
                for k in 1..3 {
                    simplex[k] = [
                        0.5 * (simplex[0][0] + simplex[k][0]),
                        0.5 * (simplex[0][1] + simplex[k][1]),
                    ];
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    values.into_iter().fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn werner(p: f64) -> Matrix4<Complex64> {
        // p |ψ⁻⟩⟨ψ⁻| + (1-p) I/4
        let mut m = Matrix4::identity() * c((1.0 - p) / 4.0);
        m[(1, 1)] += c(p / 2.0);
        m[(2, 2)] += c(p / 2.0);
        m[(1, 2)] -= c(p / 2.0);
        m[(2, 1)] -= c(p / 2.0);
        m
    }

    #[test]
    fn block_dimensions_and_symmetry() {
        let p = ChainParams::new(0.5, 0.7, 6).unwrap();
        for parity in [Parity::Even, Parity::Odd] {
            let b = ParityBlock::new(6, parity).unwrap();
            assert_eq!(b.dim(), 32);
            let h = hamiltonian(&p, &b).unwrap();
            assert!((&h - h.transpose()).amax() == 0.0);
        }
        assert!(matches!(
            ParityBlock::new(14, Parity::Even),
            Err(Error::TooManySites { sites: 14, .. })
        ));
    }

    #[test]
    fn ising_ring_ground_energy() {
        // δ = 1, h = 0: -½ Σ σˣσˣ, ferromagnet with E = -N/2
        let p = ChainParams::new(1.0, 0.0, 8).unwrap();
        assert!((ground_energies(&p).unwrap().even + 4.0).abs() < 1e-12);
    }

    #[test]
    fn lanczos_matches_dense() {
        let p = ChainParams::new(0.3, 0.9, 10).unwrap();
        let block = ParityBlock::new(10, Parity::Odd).unwrap();
        let h = hamiltonian(&p, &block).unwrap();
        let dense = block_energies(&p, Parity::Odd).unwrap()[0];
        assert!((lanczos_lowest(&h) - dense).abs() < 1e-11);
    }

    #[test]
    fn strong_field_polarizes() {
        let p = ChainParams::new(0.5, 50.0, 6).unwrap();
        let spec = Spectrum::even(&p).unwrap();
        let rho = reduced_two_site(&spec.ground_state(), 0).unwrap();
        assert!((rho[(0, 0)].re - 1.0).abs() < 1e-3);
    }

    #[test]
    fn evolution_is_unitary_and_reversible() {
        let p = ChainParams::new(0.5, 0.3, 6).unwrap();
        let spec = Spectrum::even(&p).unwrap();
        let psi0 = Spectrum::even(&p.with_field(2.0)).unwrap().ground_state();
        let fwd = spec.evolve(&psi0, 1.7);
        assert!((fwd.norm() - 1.0).abs() < 1e-12);
        let back = spec.evolve(&fwd, -1.7);
        assert!((back.amps - psi0.amps).camax() < 1e-12);
    }

    #[test]
    fn two_site_matrix_is_a_density_matrix() {
        let p = ChainParams::new(0.5, 0.8, 8).unwrap();
        let rho = reduced_two_site(&Spectrum::even(&p).unwrap().ground_state(), 3).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!((rho - rho.adjoint()).camax() < 1e-14);
        assert!(hermitian_eigenvalues(&rho)[3] > -1e-12);
        // translation invariance
        let rho0 = reduced_two_site(&Spectrum::even(&p).unwrap().ground_state(), 7).unwrap();
        assert!((rho - rho0).camax() < 1e-10);
    }

    #[test]
    fn werner_state_measures() {
        for p in [0.0, 0.2, 1.0 / 3.0, 0.6, 0.9, 1.0] {
            let rho = werner(p);
            assert!((wootters_concurrence(&rho) - (1.5 * p - 0.5).max(0.0)).abs() < 1e-10);
            let l = |x: f64| if x > 0.0 { x.log2() } else { 0.0 };
            let qd = (1.0 - p) / 4.0 * l(1.0 - p) - (1.0 + p) / 2.0 * l(1.0 + p)
                + (1.0 + 3.0 * p) / 4.0 * l(1.0 + 3.0 * p);
            assert!((numeric_discord(&rho).discord - qd).abs() < 1e-9, "p = {p}");
        }
    }

    #[test]
    fn product_state_has_no_correlations() {
        let mut rho = Matrix4::zeros();
        // (0.7|↑⟩⟨↑| + 0.3|↓⟩⟨↓|) ⊗ (0.4|↑⟩⟨↑| + 0.6|↓⟩⟨↓|)
        for (i, w) in [0.28, 0.42, 0.12, 0.18].into_iter().enumerate() {
            rho[(i, i)] = c(w);
        }
        let d = numeric_discord(&rho);
        assert!(d.mutual_info.abs() < 1e-12);
        assert!(d.discord.abs() < 1e-12);
        assert_eq!(wootters_concurrence(&rho), 0.0);
    }

    #[test]
    fn diagonal_weights_sum_to_one() {
        let p = ChainParams::new(0.5, 2.0, 8).unwrap();
        let spec = Spectrum::even(&p).unwrap();
        let psi0 = Spectrum::even(&p.with_field(0.5)).unwrap().ground_state();
        let w = spec.diagonal_weights(&psi0);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let purity = diagonal_purity(&w);
        assert!(purity > 0.0 && purity <= 1.0);
        let avg = spec.time_averaged_two_site(&psi0, 0).unwrap();
        assert!((avg.trace().re - 1.0).abs() < 1e-12);
    }
}
