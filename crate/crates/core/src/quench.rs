//! Time-dependent nearest-neighbour correlators after single and double
//! field quenches.
//!
//! Every momentum pair evolves as an independent two-level system, so the
//! translation-averaged correlators
//!
//! ```text
//! G = ⟨a†_l a_l⟩,  Z = ⟨a†_l a_{l+1}⟩,  f = ⟨a†_l a†_{l+1}⟩
//! ```
//!
//! are sums of closed-form per-mode terms. The single-quench sums use the
//! Bogoliubov-angle form; the double quench composes the two-level
//! amplitudes `p, q` (final stage) and `P, Q` (after the middle stage).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{self, ChainParams, ModeData};

/// Field held during `0 ≤ t ≤ T` of a double quench.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiddleQuench {
    pub h: f64,
    pub spend_time: f64,
}

/// Field schedule `h_i → [h_m for T] → h_f` applied at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchProtocol {
    pub j: f64,
    pub delta: f64,
    pub n: usize,
    pub h_initial: f64,
    pub middle: Option<MiddleQuench>,
    pub h_final: f64,
}

impl QuenchProtocol {
    pub fn single(delta: f64, n: usize, h_initial: f64, h_final: f64) -> Result<Self> {
        let p = Self {
            j: 1.0,
            delta,
            n,
            h_initial,
            middle: None,
            h_final,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn double(
        delta: f64,
        n: usize,
        h_initial: f64,
        h_middle: f64,
        spend_time: f64,
        h_final: f64,
    ) -> Result<Self> {
        let p = Self {
            j: 1.0,
            delta,
            n,
            h_initial,
            middle: Some(MiddleQuench {
                h: h_middle,
                spend_time,
            }),
            h_final,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.params(self.h_initial).validate()?;
        self.params(self.h_final).validate()?;
        if let Some(m) = self.middle {
            self.params(m.h).validate()?;
            if !(m.spend_time.is_finite() && m.spend_time >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "spend time must be finite and non-negative, got {}",
                    m.spend_time
                )));
            }
        }
        Ok(())
    }

    /// Chain parameters at field `h` with this protocol's couplings.
    pub fn params(&self, h: f64) -> ChainParams {
        ChainParams {
            j: self.j,
            delta: self.delta,
            h,
            n: self.n,
        }
    }

    pub fn is_double(&self) -> bool {
        self.middle.is_some()
    }

    /// The single quench `h_i → h_f` obtained by removing the middle stage.
    pub fn without_middle(&self) -> Self {
        Self {
            middle: None,
            ..*self
        }
    }

    /// Same protocol with a different spending time; single quenches are
    /// returned unchanged.
    pub fn with_spend_time(&self, spend_time: f64) -> Self {
        let mut p = *self;
        if let Some(m) = p.middle.as_mut() {
            m.spend_time = spend_time;
        }
        p
    }

    pub fn spend_time(&self) -> f64 {
        self.middle.map_or(0.0, |m| m.spend_time)
    }
}

/// Translation-averaged nearest-neighbour fermionic correlators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCorrelators {
    pub g: f64,
    pub z: Complex64,
    pub f: Complex64,
}

impl PairCorrelators {
    pub const BOUND_SLACK: f64 = 1e-9;

    /// `0 ≤ G ≤ 1`, `|Z| ≤ √(G(1-G))`, `|f| ≤ 1/2`, all up to slack.
    pub fn within_bounds(&self) -> bool {
        let s = Self::BOUND_SLACK;
        let g = self.g;
        (-s..=1.0 + s).contains(&g)
            && self.z.norm() <= (g * (1.0 - g)).max(0.0).sqrt() + s
            && self.f.norm() <= 0.5 + s
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.g - other.g)
            .abs()
            .max((self.z - other.z).norm())
            .max((self.f - other.f).norm())
    }
}

/// Two-level amplitudes of one momentum pair after a double quench.
///
/// `|Q_k|²` is the pair occupation; `P_k` carries the vacuum component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeAmplitudes {
    pub k: f64,
    pub p: Complex64,
    pub q: Complex64,
    pub big_p: Complex64,
    pub big_q: Complex64,
    pub phi_final: f64,
    pub phi_middle: f64,
}

#[derive(Debug, Clone, Copy)]
struct EngineMode {
    cos_k: f64,
    sin_k: f64,
    k: f64,
    initial: ModeData,
    middle: Option<ModeData>,
    last: ModeData,
}

impl EngineMode {
    /// Stage that precedes the final field.
    fn pre_final(&self) -> &ModeData {
        self.middle.as_ref().unwrap_or(&self.initial)
    }
}

/// Precomputed per-mode data for repeated correlator evaluation.
#[derive(Debug, Clone)]
pub struct QuenchEngine {
    protocol: QuenchProtocol,
    modes: Vec<EngineMode>,
}

impl QuenchEngine {
    pub fn new(protocol: &QuenchProtocol) -> Result<Self> {
        protocol.validate()?;
        let grid = model::momentum_grid(protocol.n)?;
        let pi = protocol.params(protocol.h_initial);
        let pf = protocol.params(protocol.h_final);
        let pm = protocol.middle.map(|m| protocol.params(m.h));
        let modes = grid
            .into_iter()
            .map(|k| EngineMode {
                cos_k: k.cos(),
                sin_k: k.sin(),
                k,
                initial: model::mode(&pi, k),
                middle: pm.map(|p| model::mode(&p, k)),
                last: model::mode(&pf, k),
            })
            .collect();
        Ok(Self {
            protocol: *protocol,
            modes,
        })
    }

    pub fn protocol(&self) -> &QuenchProtocol {
        &self.protocol
    }

    /// Correlators at time `t` anywhere on the schedule; before `T` a double
    /// quench is the single quench `h_i → h_m`.
    pub fn correlators(&self, t: f64) -> Result<PairCorrelators> {
        if !(t >= 0.0) {
            return Err(Error::NegativeTime(t));
        }
        match self.protocol.middle {
            None => Ok(self.single_stage(t, false)),
            Some(m) if t < m.spend_time => Ok(self.single_stage(t, true)),
            Some(_) => Ok(self.double_stage(t)),
        }
    }

    /// Single-quench sums; `to_middle` selects the first leg `h_i → h_m`.
    fn single_stage(&self, t: f64, to_middle: bool) -> PairCorrelators {
        let norm = 1.0 / self.protocol.n as f64;
        let mut g = 0.0;
        let mut z = 0.0;
        let mut f = Complex64::new(0.0, 0.0);
        for m in &self.modes {
            let post = if to_middle {
                m.middle.as_ref().unwrap_or(&m.last)
            } else {
                &m.last
            };
            let phi = post.theta - m.initial.theta;
            let (s2t, c2t) = (2.0 * post.theta).sin_cos();
            let (s2p, c2p) = (2.0 * phi).sin_cos();
            let (swt, cwt) = (2.0 * post.eps * t).sin_cos();
            // 2|v_k|², the occupation of k and -k together
            let occ = 1.0 - c2t * c2p - s2t * s2p * cwt;
            g += occ;
            z += m.cos_k * occ;
            f += m.sin_k * Complex64::new(s2t * c2p - s2p * c2t * cwt, -s2p * swt);
        }
        PairCorrelators {
            g: norm * g,
            z: Complex64::new(norm * z, 0.0),
            f: -norm * f,
        }
    }

    fn double_stage(&self, t: f64) -> PairCorrelators {
        let norm = 2.0 / self.protocol.n as f64;
        let mut g = 0.0;
        let mut z = 0.0;
        let mut f = Complex64::new(0.0, 0.0);
        for m in &self.modes {
            let amp = self.amplitudes(m, t);
            let occ = amp.big_q.norm_sqr();
            g += occ;
            z += m.cos_k * occ;
            f += m.sin_k * (amp.big_q * amp.big_p).conj();
        }
        PairCorrelators {
            g: norm * g,
            z: Complex64::new(norm * z, 0.0),
            f: -norm * f,
        }
    }

    fn amplitudes(&self, m: &EngineMode, t: f64) -> ModeAmplitudes {
        let spend = self.protocol.spend_time();
        let pre = m.pre_final();
        let phi_f = m.last.theta - pre.theta;
        let phi_m = match m.middle {
            Some(mid) => mid.theta - m.initial.theta,
            None => 0.0,
        };
        let tau = t - spend;
        let ef = Complex64::from_polar(1.0, m.last.eps * tau);
        let (st, ct) = m.last.theta.sin_cos();
        let (sp, cp) = phi_f.sin_cos();
        let p = ct * cp * ef.conj() + st * sp * ef;
        let q = st * cp * ef - ct * sp * ef.conj();
        let em = match m.middle {
            Some(mid) => Complex64::from_polar(1.0, mid.eps * spend),
            None => Complex64::new(1.0, 0.0),
        };
        let (sm, cm) = phi_m.sin_cos();
        ModeAmplitudes {
            k: m.k,
            p,
            q,
            big_p: p * cm * em.conj() + q * sm * em,
            big_q: q * cm * em - p * sm * em.conj(),
            phi_final: phi_f,
            phi_middle: phi_m,
        }
    }

    /// Per-mode amplitudes for `t ≥ T`; a single quench is the `T = 0`,
    /// `Φ^m = 0` case.
    pub fn mode_amplitudes(&self, t: f64) -> Result<Vec<ModeAmplitudes>> {
        let spend = self.protocol.spend_time();
        if !(t >= spend) {
            return Err(Error::BeforeSecondQuench {
                t,
                spend_time: spend,
            });
        }
        Ok(self.modes.iter().map(|m| self.amplitudes(m, t)).collect())
    }

    /// Correlators from the amplitude representation, valid for `t ≥ T` of
    /// either protocol kind.
    pub fn correlators_from_amplitudes(&self, t: f64) -> Result<PairCorrelators> {
        let spend = self.protocol.spend_time();
        if !(t >= spend) {
            return Err(Error::BeforeSecondQuench {
                t,
                spend_time: spend,
            });
        }
        Ok(self.double_stage(t))
    }
}

/// Correlators of a single quench `h_i → h_f` at time `t ≥ 0`.
pub fn single_quench_correlators(protocol: &QuenchProtocol, t: f64) -> Result<PairCorrelators> {
    if protocol.is_double() {
        return Err(Error::ProtocolKind { expected: "single" });
    }
    QuenchEngine::new(protocol)?.correlators(t)
}

/// Correlators of a double quench at time `t ≥ T`.
pub fn double_quench_correlators(protocol: &QuenchProtocol, t: f64) -> Result<PairCorrelators> {
    let Some(m) = protocol.middle else {
        return Err(Error::ProtocolKind { expected: "double" });
    };
    if !(t >= m.spend_time) {
        return Err(Error::BeforeSecondQuench {
            t,
            spend_time: m.spend_time,
        });
    }
    QuenchEngine::new(protocol)?.correlators(t)
}

/// Ground-state correlators of `H(h)`.
pub fn equilibrium_correlators(params: &ChainParams) -> Result<PairCorrelators> {
    params.validate()?;
    let norm = 1.0 / params.n as f64;
    let (mut g, mut z, mut f) = (0.0, 0.0, 0.0);
    for m in model::modes(params)? {
        let (s2t, c2t) = (2.0 * m.theta).sin_cos();
        g += 1.0 - c2t;
        z += m.k.cos() * (1.0 - c2t);
        f += m.k.sin() * s2t;
    }
    Ok(PairCorrelators {
        g: norm * g,
        z: Complex64::new(norm * z, 0.0),
        f: Complex64::new(-norm * f, 0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_quench_is_stationary() {
        let p = QuenchProtocol::single(0.5, 40, 0.7, 0.7).unwrap();
        let eq = equilibrium_correlators(&p.params(0.7)).unwrap();
        for t in [0.0, 0.3, 7.0, 100.0] {
            let c = single_quench_correlators(&p, t).unwrap();
            assert!(c.max_abs_diff(&eq) < 1e-14, "t = {t}");
        }
    }

    #[test]
    fn initial_values_are_equilibrium() {
        let p = QuenchProtocol::single(0.5, 100, 0.5, 2.0).unwrap();
        let c = single_quench_correlators(&p, 0.0).unwrap();
        let eq = equilibrium_correlators(&p.params(0.5)).unwrap();
        assert!(c.max_abs_diff(&eq) < 1e-12);
        assert!(c.f.im.abs() < 1e-15);
    }

    #[test]
    fn rejects_negative_time_and_wrong_kind() {
        let s = QuenchProtocol::single(0.5, 8, 0.5, 2.0).unwrap();
        let d = QuenchProtocol::double(0.5, 8, 0.8, 1.5, 2.0, 5.0).unwrap();
        assert_eq!(single_quench_correlators(&s, -1.0), Err(Error::NegativeTime(-1.0)));
        assert!(matches!(
            single_quench_correlators(&d, 1.0),
            Err(Error::ProtocolKind { .. })
        ));
        assert!(matches!(
            double_quench_correlators(&d, 1.0),
            Err(Error::BeforeSecondQuench { .. })
        ));
        assert!(QuenchProtocol::double(0.5, 8, 0.8, 1.5, -2.0, 5.0).is_err());
    }

    #[test]
    fn zero_spend_time_reduces_to_single() {
        let d = QuenchProtocol::double(0.5, 60, 0.8, 1.5, 0.0, 5.0).unwrap();
        let s = QuenchProtocol::single(0.5, 60, 0.8, 5.0).unwrap();
        for t in [0.0, 0.4, 3.0, 17.5] {
            let a = double_quench_correlators(&d, t).unwrap();
            let b = single_quench_correlators(&s, t).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn middle_equal_final_reduces_to_single() {
        let d = QuenchProtocol::double(0.5, 60, 0.7, 0.5, 3.3, 0.5).unwrap();
        let s = QuenchProtocol::single(0.5, 60, 0.7, 0.5).unwrap();
        for t in [3.3, 4.0, 12.0] {
            let a = double_quench_correlators(&d, t).unwrap();
            let b = single_quench_correlators(&s, t).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn continuous_at_second_quench() {
        let d = QuenchProtocol::double(0.5, 80, 0.8, 1.5, 2.0, 5.0).unwrap();
        let e = QuenchEngine::new(&d).unwrap();
        let before = e.single_stage(2.0, true);
        let after = e.correlators(2.0).unwrap();
        assert!(before.max_abs_diff(&after) < 1e-12);
    }

    #[test]
    fn amplitudes_are_unitary() {
        let d = QuenchProtocol::double(0.5, 50, 0.7, 2.0, 1.0, 0.5).unwrap();
        let e = QuenchEngine::new(&d).unwrap();
        for t in [1.0, 2.5, 40.0] {
            for a in e.mode_amplitudes(t).unwrap() {
                assert!((a.p.norm_sqr() + a.q.norm_sqr() - 1.0).abs() < 1e-12);
                assert!((a.big_p.norm_sqr() + a.big_q.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn amplitude_route_matches_angle_route() {
        let s = QuenchProtocol::single(0.5, 64, 0.5, 2.0).unwrap();
        let e = QuenchEngine::new(&s).unwrap();
        for t in [0.0, 0.9, 6.0] {
            let a = e.correlators(t).unwrap();
            let b = e.correlators_from_amplitudes(t).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-13);
        }
    }

    #[test]
    fn bounds_hold_along_trajectory() {
        let d = QuenchProtocol::double(0.5, 100, 0.7, 2.0, 1.0, 0.5).unwrap();
        let e = QuenchEngine::new(&d).unwrap();
        for i in 0..200 {
            let c = e.correlators(0.1 * i as f64).unwrap();
            assert!(c.within_bounds(), "{c:?}");
        }
    }
}
