//! Closed-form X-state measures against brute force on the full 4x4 matrix.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use proptest::prelude::*;
use xyquench::measures::{concurrence, mutual_information, quantum_discord, XStateDensity};
use xyquench::oracle;

fn entropy2(m: &Matrix2<Complex64>) -> f64 {
    let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
    let r = (0.25 * (a - d) * (a - d) + m[(0, 1)].norm_sqr()).sqrt();
    [0.5 * (a + d) + r, 0.5 * (a + d) - r]
        .iter()
        .filter(|&&x| x > 1e-300)
        .map(|&x| -x * x.log2())
        .sum()
}

/// Outcome-averaged entropy of the first qubit after projecting the second
/// onto the Bloch direction (theta, phi) and its antipode.
fn conditional_entropy(rho: &Matrix4<Complex64>, theta: f64, phi: f64) -> f64 {
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        let (t, p) = if sign > 0.0 { (theta, phi) } else { (PI - theta, phi + PI) };
        let v = [Complex64::new((t / 2.0).cos(), 0.0), Complex64::from_polar((t / 2.0).sin(), p)];
        let mut cond = Matrix2::<Complex64>::zeros();
        for a in 0..2 {
            for b in 0..2 {
                for (x, vx) in v.iter().enumerate() {
                    for (y, vy) in v.iter().enumerate() {
                        cond[(a, b)] += vx.conj() * rho[(2 * a + x, 2 * b + y)] * vy;
                    }
                }
            }
        }
        let prob = cond.trace().re;
        if prob > 1e-300 {
            total += prob * entropy2(&(cond / Complex64::new(prob, 0.0)));
        }
    }
    total
}

/// 1024 x 512 sweep, then repeated local zooms around the best cell.
fn brute_min_conditional_entropy(rho: &Matrix4<Complex64>) -> f64 {
    let (nt, np) = (512, 1024);
    let (mut dt, mut dp) = (PI / (nt - 1) as f64, 2.0 * PI / np as f64);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..nt {
        for j in 0..np {
            let (t, p) = (i as f64 * dt, j as f64 * dp);
            let s = conditional_entropy(rho, t, p);
            if s < best.0 {
                best = (s, t, p);
            }
        }
    }
    for _ in 0..12 {
        let (_, t0, p0) = best;
        for i in -10..=10 {
            for j in -10..=10 {
                let t = (t0 + i as f64 * dt / 10.0).clamp(0.0, PI);
                let p = p0 + j as f64 * dp / 10.0;
                let s = conditional_entropy(rho, t, p);
                if s < best.0 {
                    best = (s, t, p);
                }
            }
        }
        dt /= 5.0;
        dp /= 5.0;
    }
    best.0
}

fn reduced_entropy_first(rho: &Matrix4<Complex64>) -> f64 {
    let mut m = Matrix2::<Complex64>::zeros();
    for a in 0..2 {
        for b in 0..2 {
            m[(a, b)] = rho[(2 * a, 2 * b)] + rho[(2 * a + 1, 2 * b + 1)];
        }
    }
    entropy2(&m)
}

fn xstates() -> impl Strategy<Value = XStateDensity> {
    (
        prop::array::uniform4(0.01f64..1.0),
        0.0f64..1.0,
        0.0f64..1.0,
        -PI..PI,
        -PI..PI,
    )
        .prop_map(|(w, zr, fr, za, fa)| {
            let s: f64 = w.iter().sum();
            let [xp, yp, ym, xm] = w.map(|x| x / s);
            XStateDensity {
                xp,
                yp,
                ym,
                xm,
                z: Complex64::from_polar(zr * (yp * ym).sqrt(), za),
                f: Complex64::from_polar(fr * (xp * xm).sqrt(), fa),
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn discord_matches_brute_force(rho in xstates()) {
        let m = rho.to_matrix();
        let qd = quantum_discord(&rho);
        let brute_classical = reduced_entropy_first(&m) - brute_min_conditional_entropy(&m);
        prop_assert!((qd.classical.value - brute_classical).abs() < 1e-7,
            "classical {} vs brute {}", qd.classical.value, brute_classical);
        let brute_discord = (oracle::mutual_information(&m) - brute_classical).max(0.0);
        prop_assert!((qd.discord - brute_discord).abs() < 1e-7);
    }

    #[test]
    fn concurrence_and_information_match_matrix_forms(rho in xstates()) {
        let m = rho.to_matrix();
        prop_assert!((concurrence(&rho) - oracle::wootters_concurrence(&m)).abs() < 1e-9);
        prop_assert!((mutual_information(&rho) - oracle::mutual_information(&m)).abs() < 1e-10);
        let nd = oracle::numeric_discord(&m);
        prop_assert!((quantum_discord(&rho).discord - nd.discord).abs() < 1e-6);
    }
}

#[test]
fn werner_like_state_is_symmetric_in_measurement_direction() {
    // p|psi+><psi+| + (1-p)/4, psi+ = (|ud> + |du>)/sqrt 2
    let p = 0.6;
    let rho = XStateDensity {
        xp: (1.0 - p) / 4.0,
        yp: (1.0 + p) / 4.0,
        ym: (1.0 + p) / 4.0,
        xm: (1.0 - p) / 4.0,
        z: Complex64::new(p / 2.0, 0.0),
        f: Complex64::new(0.0, 0.0),
    };
    let m = rho.to_matrix();
    let s0 = conditional_entropy(&m, 0.3, 1.1);
    let s1 = conditional_entropy(&m, 2.0, -0.4);
    assert!((s0 - s1).abs() < 1e-12);
    let want = (1.0 + p) / 2.0 * (1.0 + p).log2() + (1.0 - p) / 2.0 * (1.0 - p).log2();
    assert!((quantum_discord(&rho).classical.value - want).abs() < 1e-10);
}
