//! The two-detector model: Alice stays inertial and switched off, Rob is
//! uniformly accelerated and couples to a massless scalar field for a finite
//! proper time. Only the closed-form end state after tracing out the field is
//! built here.
//!
//! Basis ordering throughout is `|0_A 0_R>, |0_A 1_R>, |1_A 0_R>, |1_A 1_R>`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmatrix::ComplexMatrix;

/// Agreement required between a supplied `q` and the one implied by `(omega, accel)`.
pub const Q_CONSISTENCY_TOL: f64 = 1e-12;
/// Soft perturbative bound on the effective coupling.
pub const NU_SQ_SOFT_LIMIT: f64 = 0.01;
/// Soft bound on `omega * delta` (the interaction should last many gap periods).
pub const OMEGA_DELTA_MIN: f64 = 100.0;

/// Model inputs. `q` is the canonical acceleration coordinate; the physical
/// symbols are carried along only when the caller supplies them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams {
    theta: f64,
    nu: f64,
    q: f64,
    omega: Option<f64>,
    accel: Option<f64>,
    epsilon: Option<f64>,
    delta: Option<f64>,
    kappa: Option<f64>,
}

fn check_q(q: f64) -> Result<()> {
    if (0.0..1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "q",
            value: q,
            interval: "[0, 1)",
        })
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(Error::Domain {
            name: "nu",
            value: nu,
            interval: "[0, 1)",
        });
    }
    if nu * nu >= 1.0 {
        return Err(Error::Domain {
            name: "nu",
            value: nu,
            interval: "[0, 1) (perturbation theory needs nu^2 << 1)",
        });
    }
    Ok(())
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            interval: "(0, inf)",
        })
    }
}

impl DetectorParams {
    pub fn new(theta: f64, nu: f64, q: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::Domain {
                name: "theta",
                value: theta,
                interval: "(-inf, inf)",
            });
        }
        check_nu(nu)?;
        check_q(q)?;
        Ok(Self {
            theta,
            nu,
            q,
            omega: None,
            accel: None,
            epsilon: None,
            delta: None,
            kappa: None,
        })
    }

    /// Parameters given by the energy gap and Rob's proper acceleration.
    pub fn from_acceleration(theta: f64, nu: f64, omega: f64, accel: f64) -> Result<Self> {
        let q = accel_to_q(omega, accel)?;
        let mut p = Self::new(theta, nu, q)?;
        p.omega = Some(omega);
        p.accel = Some(accel);
        Ok(p)
    }

    /// Parameters whose effective coupling comes from the microscopic
    /// constants via [`coupling_nu`].
    pub fn from_coupling(
        theta: f64,
        q: f64,
        epsilon: f64,
        omega: f64,
        delta: f64,
        kappa: f64,
    ) -> Result<Self> {
        let nu = coupling_nu(epsilon, omega, delta, kappa)?;
        let mut p = Self::new(theta, nu, q)?;
        p.omega = Some(omega);
        p.epsilon = Some(epsilon);
        p.delta = Some(delta);
        p.kappa = Some(kappa);
        Ok(p)
    }

    /// Attaches `(omega, accel)`; they must reproduce the stored `q`.
    pub fn with_gap_and_acceleration(mut self, omega: f64, accel: f64) -> Result<Self> {
        let implied = accel_to_q(omega, accel)?;
        if (implied - self.q).abs() > Q_CONSISTENCY_TOL {
            return Err(Error::InconsistentAcceleration { q: self.q, implied });
        }
        self.omega = Some(omega);
        self.accel = Some(accel);
        Ok(self)
    }

    /// Attaches `omega` alone, e.g. for the `omega * delta` validity check.
    pub fn with_gap(mut self, omega: f64) -> Result<Self> {
        check_positive("omega", omega)?;
        if let Some(accel) = self.accel {
            let implied = accel_to_q(omega, accel)?;
            if (implied - self.q).abs() > Q_CONSISTENCY_TOL {
                return Err(Error::InconsistentAcceleration { q: self.q, implied });
            }
        }
        self.omega = Some(omega);
        Ok(self)
    }

    pub fn with_interaction_time(mut self, delta: f64) -> Result<Self> {
        check_positive("delta", delta)?;
        self.delta = Some(delta);
        Ok(self)
    }

    /// Same parameters at a different `q`. A stored acceleration no longer
    /// applies and is dropped.
    pub fn with_q(mut self, q: f64) -> Result<Self> {
        check_q(q)?;
        self.q = q;
        self.accel = None;
        Ok(self)
    }

    pub fn with_theta(mut self, theta: f64) -> Result<Self> {
        let _ = Self::new(theta, self.nu, self.q)?;
        self.theta = theta;
        Ok(self)
    }

    pub fn with_nu(mut self, nu: f64) -> Result<Self> {
        check_nu(nu)?;
        self.nu = nu;
        self.epsilon = None;
        Ok(self)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn omega(&self) -> Option<f64> {
        self.omega
    }
    pub fn accel(&self) -> Option<f64> {
        self.accel
    }
    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }
    pub fn delta(&self) -> Option<f64> {
        self.delta
    }
    pub fn kappa(&self) -> Option<f64> {
        self.kappa
    }
}

/// `q = exp(-2 pi omega / a)`.
pub fn accel_to_q(omega: f64, accel: f64) -> Result<f64> {
    check_positive("omega", omega)?;
    check_positive("accel", accel)?;
    Ok((-2.0 * PI * omega / accel).exp())
}

/// Inverse of [`accel_to_q`]: `a = 2 pi omega / (-ln q)`.
pub fn q_to_accel(omega: f64, q: f64) -> Result<f64> {
    check_positive("omega", omega)?;
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain {
            name: "q",
            value: q,
            interval: "(0, 1)",
        });
    }
    Ok(2.0 * PI * omega / -q.ln())
}

/// Effective coupling `nu = sqrt(eps^2 omega delta / (2 pi) * exp(-omega^2 kappa^2))`.
pub fn coupling_nu(epsilon: f64, omega: f64, delta: f64, kappa: f64) -> Result<f64> {
    check_positive("omega", omega)?;
    check_positive("delta", delta)?;
    if !epsilon.is_finite() {
        return Err(Error::Domain {
            name: "epsilon",
            value: epsilon,
            interval: "(-inf, inf)",
        });
    }
    if !(kappa.is_finite() && kappa >= 0.0) {
        return Err(Error::Domain {
            name: "kappa",
            value: kappa,
            interval: "[0, inf)",
        });
    }
    let nu_sq = epsilon * epsilon * omega * delta / (2.0 * PI) * (-(omega * kappa).powi(2)).exp();
    Ok(nu_sq.sqrt())
}

/// The three weights of the final state; `2 mu + upsilon + eta = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub mu: f64,
    pub upsilon: f64,
    pub eta: f64,
}

pub fn model_weights(params: &DetectorParams) -> Weights {
    let (s, c) = params.theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let nu2 = params.nu * params.nu;
    let q = params.q;
    let denom = (1.0 - q) + nu2 * (s2 + q * c2);
    Weights {
        mu: (1.0 - q) / (2.0 * denom),
        upsilon: nu2 * q * c2 / denom,
        eta: nu2 * s2 / denom,
    }
}

/// Alice-Rob density matrix after Rob's detector has interacted with the
/// field and the field has been traced out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointState {
    rho: ComplexMatrix,
    weights: Weights,
    params: DetectorParams,
}

impl JointState {
    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }
    pub fn mu(&self) -> f64 {
        self.weights.mu
    }
    pub fn upsilon(&self) -> f64 {
        self.weights.upsilon
    }
    pub fn eta(&self) -> f64 {
        self.weights.eta
    }
    pub fn weights(&self) -> Weights {
        self.weights
    }
    pub fn params(&self) -> &DetectorParams {
        &self.params
    }
}

pub fn build_final_state(params: &DetectorParams) -> Result<JointState> {
    let w = model_weights(params);
    let (s, c) = params.theta.sin_cos();
    let re = |x: f64| Complex64::new(x, 0.0);
    let coherence = w.mu * (2.0 * params.theta).sin();
    let mut rho = ComplexMatrix::zeros(4)?;
    rho[(0, 0)] = re(w.eta);
    rho[(1, 1)] = re(2.0 * w.mu * s * s);
    rho[(2, 2)] = re(2.0 * w.mu * c * c);
    rho[(1, 2)] = re(coherence);
    rho[(2, 1)] = re(coherence);
    rho[(3, 3)] = re(w.upsilon);
    if rho.entries().any(|z| !z.re.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(JointState {
        rho,
        weights: w,
        params: *params,
    })
}

/// A point on Rob's world line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub tau: f64,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl TrajectoryPoint {
    /// `x^2 - t^2`, which equals `a^-2` on the world line.
    pub fn interval(&self) -> f64 {
        (self.x - self.t) * (self.x + self.t)
    }
}

pub fn trajectory_point(accel: f64, tau: f64) -> Result<TrajectoryPoint> {
    check_positive("accel", accel)?;
    let at = accel * tau;
    Ok(TrajectoryPoint {
        tau,
        t: at.sinh() / accel,
        x: at.cosh() / accel,
        y: 0.0,
        z: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValidityWarning {
    /// `nu^2` exceeds the soft perturbative bound.
    StrongCoupling { nu_sq: f64 },
    /// `omega * delta` is too small for the long-interaction approximation.
    ShortInteraction { omega_delta: f64 },
}

impl fmt::Display for ValidityWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::StrongCoupling { nu_sq } => write!(
                f,
                "nu^2 = {nu_sq} exceeds {NU_SQ_SOFT_LIMIT}; first-order perturbation theory may be inaccurate"
            ),
            Self::ShortInteraction { omega_delta } => write!(
                f,
                "omega*delta = {omega_delta} is below {OMEGA_DELTA_MIN}; the interaction time should be much longer than 1/omega"
            ),
        }
    }
}

/// Advisory checks on the perturbative regime. `nu^2 >= 1` is rejected at
/// construction and never reaches this point.
pub fn validity_check(params: &DetectorParams) -> Vec<ValidityWarning> {
    let mut warnings = Vec::new();
    let nu_sq = params.nu * params.nu;
    if nu_sq > NU_SQ_SOFT_LIMIT {
        warnings.push(ValidityWarning::StrongCoupling { nu_sq });
    }
    if let (Some(omega), Some(delta)) = (params.omega, params.delta) {
        let omega_delta = omega * delta;
        if omega_delta < OMEGA_DELTA_MIN {
            warnings.push(ValidityWarning::ShortInteraction { omega_delta });
        }
    }
    warnings
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn params_reject_out_of_domain() {
        assert!(matches!(
            DetectorParams::new(0.1, 0.05, 1.0),
            Err(Error::Domain { name: "q", .. })
        ));
        assert!(DetectorParams::new(0.1, 0.05, -0.1).is_err());
        assert!(DetectorParams::new(0.1, -0.05, 0.5).is_err());
        assert!(DetectorParams::new(0.1, 1.0, 0.5).is_err());
        assert!(DetectorParams::new(f64::NAN, 0.05, 0.5).is_err());
        assert!(DetectorParams::new(0.1, 0.05, 0.0).is_ok());
    }

    #[test]
    fn accel_q_limits() {
        assert_eq!(accel_to_q(1.0, 1e-3).unwrap(), 0.0);
        assert!(accel_to_q(1.0, 1e12).unwrap() > 1.0 - 1e-11);
        assert!(accel_to_q(1.0, 1e12).unwrap() < 1.0);
        assert!(accel_to_q(0.0, 1.0).is_err());
        assert!(accel_to_q(1.0, -1.0).is_err());
    }

    #[test]
    fn accel_q_worked_values() {
        let a_half = 2.0 * PI / std::f64::consts::LN_2;
        assert!(close(a_half, 9.064720283654388, 1e-12));
        assert!(close(accel_to_q(1.0, a_half).unwrap(), 0.5, 1e-15));
        assert!(close(q_to_accel(1.0, 0.5).unwrap(), a_half, 1e-12));
        assert!(close(
            q_to_accel(1.0, (-2.0 * PI).exp()).unwrap(),
            1.0,
            1e-15
        ));
        assert!(q_to_accel(1.0, 0.0).is_err());
        assert!(q_to_accel(1.0, 1.0).is_err());
    }

    #[test]
    fn q_accel_round_trip() {
        for k in 1..=9 {
            let q = k as f64 / 10.0;
            let a = q_to_accel(1.0, q).unwrap();
            let back = accel_to_q(1.0, a).unwrap();
            assert!(((back - q) / q).abs() <= 1e-12, "q={q} back={back}");
        }
    }

    #[test]
    fn inconsistent_acceleration_is_rejected() {
        let p = DetectorParams::new(0.3, 0.05, 0.5).unwrap();
        let a_half = 2.0 * PI / std::f64::consts::LN_2;
        assert!(p.with_gap_and_acceleration(1.0, a_half).is_ok());
        assert!(matches!(
            p.with_gap_and_acceleration(1.0, 5.0),
            Err(Error::InconsistentAcceleration { .. })
        ));
        let from_a = DetectorParams::from_acceleration(0.3, 0.05, 1.0, a_half).unwrap();
        assert!(close(from_a.q(), 0.5, 1e-15));
    }

    #[test]
    fn coupling_worked_values() {
        assert_eq!(coupling_nu(0.0, 1.0, 1.0, 0.5).unwrap(), 0.0);
        assert!(close(
            coupling_nu(1.0, 1.0, 2.0 * PI, 0.0).unwrap(),
            1.0,
            1e-15
        ));
        // sqrt(0.01 * pi / (2 pi) * e^-1)
        let expected = (0.005 * (-1.0f64).exp()).sqrt();
        assert!(close(
            coupling_nu(0.1, 1.0, PI, 1.0).unwrap(),
            expected,
            1e-15
        ));
        assert!(close(expected, 0.0428882, 1e-7));
        assert!(coupling_nu(0.1, 0.0, 1.0, 1.0).is_err());
        assert!(coupling_nu(0.1, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn weights_without_coupling() {
        for theta in [0.0, 0.3, FRAC_PI_4, 1.2] {
            for q in [0.0, 0.4, 0.99] {
                let w = model_weights(&DetectorParams::new(theta, 0.0, q).unwrap());
                assert_eq!((w.mu, w.upsilon, w.eta), (0.5, 0.0, 0.0));
            }
        }
    }

    #[test]
    fn weights_worked_values() {
        let w = model_weights(&DetectorParams::new(FRAC_PI_4, 0.05, 0.0).unwrap());
        assert!(close(w.mu, 0.5 / 1.00125, 1e-15));
        assert_eq!(w.upsilon, 0.0);
        assert!(close(w.eta, 0.00125 / 1.00125, 1e-15));
        assert!(close(2.0 * w.mu + w.eta, 1.0, 1e-15));

        let w = model_weights(&DetectorParams::new(FRAC_PI_4, 0.05, 0.5).unwrap());
        assert!(close(w.mu, 0.4981320, 5e-8));
        assert!(close(w.upsilon, 0.0012453, 5e-8));
        assert!(close(w.eta, 0.0024907, 5e-8));
        assert!(close(2.0 * w.mu + w.upsilon + w.eta, 1.0, 1e-15));
    }

    #[test]
    fn final_state_without_coupling_is_pure() {
        let theta = 0.37;
        let st = build_final_state(&DetectorParams::new(theta, 0.0, 0.6).unwrap()).unwrap();
        let (s, c) = theta.sin_cos();
        let re = |x: f64| Complex64::new(x, 0.0);
        let proj = ComplexMatrix::pure_state(&[re(0.0), re(s), re(c), re(0.0)]).unwrap();
        assert!(st.rho().max_abs_diff(&proj) <= 1e-14);
    }

    #[test]
    fn final_state_at_theta_zero_has_no_coherence() {
        let st = build_final_state(&DetectorParams::new(0.0, 0.05, 0.7).unwrap()).unwrap();
        let rho = st.rho();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(rho[(i, j)].norm(), 0.0);
                }
            }
        }
        assert_eq!(rho[(0, 0)].re, 0.0);
        assert_eq!(rho[(1, 1)].re, 0.0);
        assert!(rho.is_density());
    }

    #[test]
    fn final_state_worked_point() {
        let st = build_final_state(&DetectorParams::new(FRAC_PI_4, 0.05, 0.5).unwrap()).unwrap();
        let rho = st.rho();
        assert!(close(rho[(0, 0)].re, 0.0024907, 5e-8));
        assert!(close(rho[(1, 1)].re, 0.4981320, 5e-8));
        assert!(close(rho[(2, 2)].re, 0.4981320, 5e-8));
        assert!(close(rho[(3, 3)].re, 0.0012453, 5e-8));
        assert!(close(rho[(1, 2)].re, 0.4981320, 5e-8));
        assert_eq!(rho[(1, 2)], rho[(2, 1)]);
        assert!(rho.is_density());
    }

    #[test]
    fn trajectory_worked_points() {
        let p = trajectory_point(1.0, 0.0).unwrap();
        assert_eq!((p.t, p.x), (0.0, 1.0));
        let p = trajectory_point(2.0, 0.0).unwrap();
        assert_eq!((p.t, p.x), (0.0, 0.5));
        let p = trajectory_point(1.0, 1.0).unwrap();
        assert!(close(p.t, 1.175201, 1e-6));
        assert!(close(p.x, 1.543081, 1e-6));
        assert!(close(p.interval(), 1.0, 1e-15));
        assert_eq!((p.y, p.z), (0.0, 0.0));
        assert!(trajectory_point(0.0, 1.0).is_err());
    }

    #[test]
    fn validity_warnings() {
        let p = DetectorParams::new(0.3, 0.05, 0.2).unwrap();
        assert!(validity_check(&p).is_empty());
        let p = DetectorParams::new(0.3, 0.5, 0.2).unwrap();
        assert!(matches!(
            validity_check(&p).as_slice(),
            [ValidityWarning::StrongCoupling { .. }]
        ));
        let p = DetectorParams::new(0.3, 0.05, 0.2)
            .unwrap()
            .with_gap(1.0)
            .unwrap()
            .with_interaction_time(10.0)
            .unwrap();
        assert!(matches!(
            validity_check(&p).as_slice(),
            [ValidityWarning::ShortInteraction { omega_delta }] if *omega_delta == 10.0
        ));
    }
}
