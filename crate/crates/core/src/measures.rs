//! Entanglement measures for two qubits and the fluctuation of entanglement.
//!
//! Concurrence has two routes: a closed form valid for the X-shaped final
//! state, and the general Wootters construction through the Hermitian matrix
//! `R = sqrt(sqrt(rho) rho~ sqrt(rho))`, whose eigenvalues are the square
//! roots of the spectrum of `rho rho~`. The second route is the oracle for
//! the first.
//!
//! All logarithms are base 2.

use crate::detector::JointState;
use crate::error::{Error, Result};
use crate::qmatrix::{
    hermitian_eigen, matrix_sqrt_psd, partial_trace, pauli_y, ComplexMatrix, Subsystem,
};

/// Concurrence at or below this value is indistinguishable from zero; the
/// ratio `qfe / concurrence` is left undefined there.
pub const CONCURRENCE_FLOOR: f64 = 1e-12;
/// Allowed disagreement between the analytic and numeric concurrence.
pub const ORACLE_TOL: f64 = 1e-9;
/// Default purity tolerance: largest eigenvalue must be at least `1 - PURITY_TOL`.
pub const PURITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSet {
    pub concurrence: f64,
    /// Von Neumann entropy of the joint state, in bits.
    pub entropy: f64,
    /// Fluctuation of entanglement, in bits.
    pub qfe: f64,
    /// `qfe / concurrence`, undefined when the concurrence vanishes.
    pub ratio: Option<f64>,
}

fn require_two_qubits(rho: &ComplexMatrix) -> Result<()> {
    if rho.dim() == 4 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: 4,
        })
    }
}

/// `(sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y)`.
pub fn spin_flip(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_two_qubits(rho)?;
    let yy = pauli_y().kron(&pauli_y())?;
    yy.matmul(&rho.conj())?.matmul(&yy)
}

/// Eigenvalues of `R`, descending and clamped at zero.
fn wootters_roots(rho: &ComplexMatrix) -> Result<[f64; 4]> {
    require_two_qubits(rho)?;
    rho.check_density()?;
    let flipped = spin_flip(rho)?;
    let root = matrix_sqrt_psd(rho)?;
    let inner = root.matmul(&flipped)?.matmul(&root)?;
    let inner = inner.add(&inner.adjoint())?.scale(0.5);
    let r = matrix_sqrt_psd(&inner)?;
    let values = hermitian_eigen(&r)?.values;
    Ok([0, 1, 2, 3].map(|k| values[k].max(0.0)))
}

/// Spectrum of `rho rho~` (descending), obtained as the squared eigenvalues
/// of the Hermitian `R` matrix.
pub fn wootters_spectrum(rho: &ComplexMatrix) -> Result<[f64; 4]> {
    Ok(wootters_roots(rho)?.map(|r| r * r))
}

/// General two-qubit concurrence.
pub fn concurrence_numeric(rho: &ComplexMatrix) -> Result<f64> {
    let [r1, r2, r3, r4] = wootters_roots(rho)?;
    Ok((r1 - r2 - r3 - r4).clamp(0.0, 1.0))
}

/// Closed-form spectrum of `rho rho~` for the final state:
/// `{4 mu^2 sin^2(2 theta), eta*upsilon, eta*upsilon, 0}`, sorted descending.
///
/// Note the `sin^2(2 theta)` in the first entry. Writing it as
/// `4 mu^2 sin^2(theta)` breaks the uncoupled limit, where the concurrence
/// must reduce to `|sin 2 theta|`.
pub fn analytic_eigenvalues(state: &JointState) -> [f64; 4] {
    let s2t = (2.0 * state.params().theta()).sin();
    let coherent = 4.0 * state.mu() * state.mu() * s2t * s2t;
    let thermal = state.eta() * state.upsilon();
    let mut values = [coherent, thermal, thermal, 0.0];
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// `max{0, 2 mu |sin 2 theta| - 2 sqrt(eta upsilon)}`.
pub fn concurrence_analytic(state: &JointState) -> f64 {
    let s2t = (2.0 * state.params().theta()).sin().abs();
    let c = 2.0 * state.mu() * s2t - 2.0 * (state.eta() * state.upsilon()).sqrt();
    c.clamp(0.0, 1.0)
}

fn check_pure(rho: &ComplexMatrix, tolerance: f64) -> Result<()> {
    require_two_qubits(rho)?;
    rho.check_density()?;
    let largest = hermitian_eigen(rho)?.values[0];
    if largest < 1.0 - tolerance {
        return Err(Error::NotPure { largest, tolerance });
    }
    Ok(())
}

/// `2 sqrt(det rho_A)` for a pure two-qubit state.
pub fn pure_concurrence(psi_rho: &ComplexMatrix, tolerance: f64) -> Result<f64> {
    check_pure(psi_rho, tolerance)?;
    let reduced = partial_trace(psi_rho, Subsystem::A)?;
    let det = reduced[(0, 0)] * reduced[(1, 1)] - reduced[(0, 1)] * reduced[(1, 0)];
    Ok((2.0 * det.re.max(0.0).sqrt()).min(1.0))
}

fn probabilities(rho: &ComplexMatrix) -> Result<Vec<f64>> {
    rho.check_density()?;
    Ok(hermitian_eigen(rho)?
        .values
        .into_iter()
        .map(|p| p.clamp(0.0, 1.0))
        .collect())
}

/// `-sum p log2 p` over the spectrum, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let h = probabilities(rho)?
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>();
    Ok(h.max(0.0))
}

/// Entropy of Alice's reduced state for a pure joint state.
pub fn entanglement_entropy_pure(psi_rho: &ComplexMatrix) -> Result<f64> {
    check_pure(psi_rho, PURITY_TOL)?;
    von_neumann_entropy(&partial_trace(psi_rho, Subsystem::A)?)
}

/// `C log2((1 + sqrt(1 - C^2)) / C)`, zero at both ends of `[0, 1]`.
pub fn qfe_from_concurrence(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::Domain {
            name: "concurrence",
            value: c,
            interval: "[0, 1]",
        });
    }
    if c == 0.0 || c == 1.0 {
        return Ok(0.0);
    }
    let root = ((1.0 - c) * (1.0 + c)).sqrt();
    Ok(c * ((1.0 + root) / c).log2())
}

/// Standard deviation of the entanglement entropy operator `-log2 rho_A`
/// in a pure state, evaluated from the Schmidt spectrum as
/// `sqrt(sum p (e - <e>)^2)` with `e = -log2 p`.
pub fn qfe_variance_pure(psi_rho: &ComplexMatrix) -> Result<f64> {
    check_pure(psi_rho, PURITY_TOL)?;
    let schmidt: Vec<f64> = probabilities(&partial_trace(psi_rho, Subsystem::A)?)?
        .into_iter()
        .filter(|&p| p > 0.0)
        .collect();
    let surprisal = |p: f64| -p.log2();
    let mean: f64 = schmidt.iter().map(|&p| p * surprisal(p)).sum();
    let var: f64 = schmidt
        .iter()
        .map(|&p| p * (surprisal(p) - mean).powi(2))
        .sum();
    Ok(var.max(0.0).sqrt())
}

fn assemble(concurrence: f64, rho: &ComplexMatrix) -> Result<MeasureSet> {
    let concurrence = if concurrence <= CONCURRENCE_FLOOR {
        0.0
    } else {
        concurrence
    };
    let qfe = qfe_from_concurrence(concurrence)?;
    Ok(MeasureSet {
        concurrence,
        entropy: von_neumann_entropy(rho)?,
        qfe,
        ratio: (concurrence > CONCURRENCE_FLOOR).then(|| qfe / concurrence),
    })
}

/// Measures at one parameter point, using the closed-form concurrence.
pub fn measure_state(state: &JointState) -> Result<MeasureSet> {
    assemble(concurrence_analytic(state), state.rho())
}

/// Like [`measure_state`], but also runs the numeric Wootters route and
/// fails when the two disagree by more than [`ORACLE_TOL`].
pub fn measure_state_checked(state: &JointState) -> Result<MeasureSet> {
    let analytic = concurrence_analytic(state);
    let numeric = concurrence_numeric(state.rho())?;
    let deviation = (analytic - numeric).abs();
    if deviation > ORACLE_TOL {
        return Err(Error::OracleDeviation {
            deviation,
            tolerance: ORACLE_TOL,
        });
    }
    assemble(analytic, state.rho())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::{build_final_state, DetectorParams};
    use crate::qmatrix::C64;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    // Frozen from a direct float evaluation of the weights and the X-state
    // concurrence at theta = pi/4, nu = 0.05, q = 0.5.
    const WORKED_C: f64 = 0.992_741_684_776_156_8;
    const WORKED_QFE: f64 = 0.173_085_754_165_372_7;
    const WORKED_RATIO: f64 = 0.174_351_250_501_181_5;
    const WORKED_4MU2: f64 = 0.992_541_977_546_839_6;
    const WORKED_ETA_UPSILON: f64 = 3.101_693_679_833_875_5e-6;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn bell() -> ComplexMatrix {
        let h = FRAC_1_SQRT_2;
        ComplexMatrix::pure_state(&[re(0.0), re(h), re(h), re(0.0)]).unwrap()
    }

    fn theta_state(theta: f64) -> ComplexMatrix {
        let (s, c) = theta.sin_cos();
        ComplexMatrix::pure_state(&[re(0.0), re(s), re(c), re(0.0)]).unwrap()
    }

    fn worked() -> JointState {
        build_final_state(&DetectorParams::new(FRAC_PI_4, 0.05, 0.5).unwrap()).unwrap()
    }

    #[test]
    fn spin_flip_reverses_diagonal() {
        let d = ComplexMatrix::from_real_diagonal(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[0.4, 0.3, 0.2, 0.1]).unwrap();
        assert!(spin_flip(&d).unwrap().max_abs_diff(&expected) < 1e-16);
    }

    #[test]
    fn spin_flip_is_an_involution() {
        let m = ComplexMatrix::from_fn(4, |i, j| {
            let v = C64::new((i * 4 + j) as f64 * 0.1, (i as f64 - j as f64) * 0.07);
            if i <= j {
                v
            } else {
                C64::new((j * 4 + i) as f64 * 0.1, (i as f64 - j as f64) * 0.07)
            }
        })
        .unwrap();
        let twice = spin_flip(&spin_flip(&m).unwrap()).unwrap();
        assert!(twice.max_abs_diff(&m) < 1e-15);
    }

    #[test]
    fn bell_state_is_spin_flip_invariant() {
        assert!(spin_flip(&bell()).unwrap().max_abs_diff(&bell()) < 1e-15);
        assert!(spin_flip(&ComplexMatrix::identity(2).unwrap()).is_err());
    }

    #[test]
    fn numeric_concurrence_known_states() {
        assert!((concurrence_numeric(&bell()).unwrap() - 1.0).abs() < 1e-12);
        let a = ComplexMatrix::pure_state(&[re(0.6), C64::new(0.0, 0.8)]).unwrap();
        let b = ComplexMatrix::pure_state(&[re(1.0), re(-2.0)]).unwrap();
        let product = a.kron(&b).unwrap();
        assert!(concurrence_numeric(&product).unwrap() < 1e-12);
        let mixed = ComplexMatrix::identity(4).unwrap().scale(0.25);
        assert_eq!(concurrence_numeric(&mixed).unwrap(), 0.0);
    }

    #[test]
    fn concurrence_worked_point_both_routes() {
        let st = worked();
        assert!((concurrence_analytic(&st) - WORKED_C).abs() < 1e-15);
        assert!((concurrence_numeric(st.rho()).unwrap() - WORKED_C).abs() < 1e-12);
        assert!((WORKED_C - 0.9927417).abs() < 5e-8);
    }

    #[test]
    fn analytic_eigenvalues_worked_and_limits() {
        let ev = analytic_eigenvalues(&worked());
        assert!((ev[0] - WORKED_4MU2).abs() < 1e-15);
        assert!((ev[1] - WORKED_ETA_UPSILON).abs() < 1e-18);
        assert_eq!(ev[1], ev[2]);
        assert_eq!(ev[3], 0.0);
        let numeric = wootters_spectrum(worked().rho()).unwrap();
        for (a, n) in ev.iter().zip(numeric.iter()) {
            assert!((a - n).abs() < 1e-12);
        }

        let theta = 0.4;
        let st = build_final_state(&DetectorParams::new(theta, 0.0, 0.3).unwrap()).unwrap();
        let ev = analytic_eigenvalues(&st);
        assert!((ev[0] - (2.0 * theta).sin().powi(2)).abs() < 1e-15);
        assert_eq!(&ev[1..], &[0.0, 0.0, 0.0]);

        let st = build_final_state(&DetectorParams::new(0.0, 0.05, 0.3).unwrap()).unwrap();
        assert_eq!(analytic_eigenvalues(&st), [0.0; 4]);
    }

    #[test]
    fn analytic_concurrence_without_coupling() {
        for theta in [0.1, 0.5, FRAC_PI_4, 1.3] {
            let st = build_final_state(&DetectorParams::new(theta, 0.0, 0.8).unwrap()).unwrap();
            assert!((concurrence_analytic(&st) - (2.0 * theta).sin().abs()).abs() < 1e-15);
        }
    }

    #[test]
    fn sudden_death_region_agrees_with_numeric() {
        let mut found = None;
        'scan: for i in 1..40 {
            let theta = FRAC_PI_2 * i as f64 / 40.0;
            for k in 0..100 {
                let q = 0.999 * k as f64 / 99.0;
                let st = build_final_state(&DetectorParams::new(theta, 0.3, q).unwrap()).unwrap();
                let s2t = (2.0 * theta).sin().abs();
                if 2.0 * st.mu() * s2t < 2.0 * (st.eta() * st.upsilon()).sqrt() {
                    found = Some(st);
                    break 'scan;
                }
            }
        }
        let st = found.expect("a sudden-death point exists at nu = 0.3");
        assert_eq!(concurrence_analytic(&st), 0.0);
        assert!(concurrence_numeric(st.rho()).unwrap() < 1e-9);
    }

    #[test]
    fn pure_concurrence_examples() {
        assert!((pure_concurrence(&bell(), PURITY_TOL).unwrap() - 1.0).abs() < 1e-15);
        let zero_zero = ComplexMatrix::pure_state(&[re(1.0), re(0.0), re(0.0), re(0.0)]).unwrap();
        assert_eq!(pure_concurrence(&zero_zero, PURITY_TOL).unwrap(), 0.0);
        let c = pure_concurrence(&theta_state(PI / 5.0), PURITY_TOL).unwrap();
        assert!((c - 0.9510565).abs() < 1e-7);
        assert!((c - concurrence_numeric(&theta_state(PI / 5.0)).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn pure_concurrence_rejects_mixed() {
        let mixed = ComplexMatrix::identity(4).unwrap().scale(0.25);
        assert!(matches!(
            pure_concurrence(&mixed, PURITY_TOL),
            Err(Error::NotPure { .. })
        ));
        assert!(entanglement_entropy_pure(&mixed).is_err());
        assert!(qfe_variance_pure(&mixed).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&bell()).unwrap().abs() < 1e-12);
        let half = ComplexMatrix::identity(2).unwrap().scale(0.5);
        assert!((von_neumann_entropy(&half).unwrap() - 1.0).abs() < 1e-15);
        let d = ComplexMatrix::from_real_diagonal(&[0.5, 0.25, 0.25, 0.0]).unwrap();
        assert!((von_neumann_entropy(&d).unwrap() - 1.5).abs() < 1e-15);
        assert!(von_neumann_entropy(&ComplexMatrix::identity(2).unwrap()).is_err());
    }

    #[test]
    fn entanglement_entropy_examples() {
        assert!((entanglement_entropy_pure(&bell()).unwrap() - 1.0).abs() < 1e-12);
        let product = ComplexMatrix::pure_state(&[re(0.0), re(1.0), re(0.0), re(0.0)]).unwrap();
        assert_eq!(entanglement_entropy_pure(&product).unwrap(), 0.0);
        let e = entanglement_entropy_pure(&theta_state(FRAC_PI_3)).unwrap();
        let h = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!((e - h).abs() < 1e-12);
        assert!((e - 0.8112781).abs() < 1e-7);
    }

    #[test]
    fn qfe_closed_form_examples() {
        assert_eq!(qfe_from_concurrence(1.0).unwrap(), 0.0);
        assert_eq!(qfe_from_concurrence(0.0).unwrap(), 0.0);
        let v = qfe_from_concurrence(0.6).unwrap();
        assert!((v - 0.6 * 3f64.log2()).abs() < 1e-15);
        assert!((v - 0.9509775).abs() < 1e-7);
        assert!(qfe_from_concurrence(1.0 + 1e-12).is_err());
        assert!(qfe_from_concurrence(-1e-12).is_err());
        assert!(qfe_from_concurrence(f64::NAN).is_err());
    }

    #[test]
    fn qfe_variance_examples() {
        // (1/sqrt 2)^2 is not exactly 1/2 in floating point
        assert!(qfe_variance_pure(&bell()).unwrap() < 1e-15);
        let exact_half = ComplexMatrix::from_fn(4, |i, j| {
            re(if (1..3).contains(&i) && (1..3).contains(&j) {
                0.5
            } else {
                0.0
            })
        })
        .unwrap();
        assert_eq!(qfe_variance_pure(&exact_half).unwrap(), 0.0);
        let product = ComplexMatrix::pure_state(&[re(1.0), re(0.0), re(0.0), re(0.0)]).unwrap();
        assert_eq!(qfe_variance_pure(&product).unwrap(), 0.0);
        let v = qfe_variance_pure(&theta_state(FRAC_PI_3)).unwrap();
        let expected = (3.0f64 / 16.0).sqrt() * 3f64.log2();
        assert!((v - expected).abs() < 1e-12);
        assert!((v - 0.6863089).abs() < 1e-7);
        let closed = qfe_from_concurrence((2.0 * FRAC_PI_3).sin()).unwrap();
        assert!((v - closed).abs() < 1e-10);
    }

    #[test]
    fn measure_state_examples() {
        let st = build_final_state(&DetectorParams::new(FRAC_PI_4, 0.0, 0.0).unwrap()).unwrap();
        let m = measure_state(&st).unwrap();
        assert!((m.concurrence - 1.0).abs() < 1e-15);
        assert!(m.entropy.abs() < 1e-12);
        assert!(m.qfe.abs() < 1e-7);
        assert!(m.ratio.unwrap().abs() < 1e-7);

        let m = measure_state_checked(&worked()).unwrap();
        assert!((m.concurrence - WORKED_C).abs() < 1e-15);
        assert!((m.qfe - WORKED_QFE).abs() < 1e-14);
        assert!((m.ratio.unwrap() - WORKED_RATIO).abs() < 1e-14);

        for q in [0.0, 0.5, 0.99] {
            let st = build_final_state(&DetectorParams::new(0.0, 0.05, q).unwrap()).unwrap();
            let m = measure_state(&st).unwrap();
            assert_eq!(m.concurrence, 0.0);
            assert_eq!(m.qfe, 0.0);
            assert_eq!(m.ratio, None);
        }
    }

    #[test]
    fn concurrence_floor_zeroes_roundoff_at_right_angle() {
        let st = build_final_state(&DetectorParams::new(FRAC_PI_2, 0.05, 0.5).unwrap()).unwrap();
        assert!(concurrence_analytic(&st) > 0.0);
        let m = measure_state(&st).unwrap();
        assert_eq!(m.concurrence, 0.0);
        assert_eq!(m.qfe, 0.0);
        assert_eq!(m.ratio, None);
    }
}
