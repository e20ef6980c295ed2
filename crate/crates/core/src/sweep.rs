//! One-dimensional parameter sweeps, the figure presets, QFE peak search and
//! the grid-wide oracle check.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::detector::{build_final_state, DetectorParams};
use crate::error::{Error, Result};
use crate::measures::{
    analytic_eigenvalues, concurrence_analytic, concurrence_numeric, measure_state,
    measure_state_checked, qfe_from_concurrence, wootters_spectrum,
};

/// Default upper end of q grids. The model is undefined at q = 1.
pub const Q_MAX_DEFAULT: f64 = 0.9999;
/// Samples in the coarse scan that seeds the golden-section refinement.
pub const COARSE_SCAN_POINTS: usize = 2000;
/// Location tolerance of the golden-section search.
pub const PEAK_LOCATION_TOL: f64 = 1e-8;
/// Coarse-scan differences smaller than this count as flat when judging
/// unimodality.
pub const UNIMODAL_SLACK: f64 = 1e-9;
/// Coupling used in every figure.
pub const FIGURE_NU: f64 = 0.05;
/// q of "final state II" as quoted in the body text; the preset uses the
/// figure caption value 0.8 instead.
pub const FIG2_BODY_TEXT_Q: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Q,
    Theta,
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" => Ok(Self::Q),
            "theta" => Ok(Self::Theta),
            other => Err(Error::Usage(format!(
                "unknown sweep variable '{other}' (expected q or theta)"
            ))),
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Q => "q",
            Self::Theta => "theta",
        })
    }
}

impl SweepVariable {
    fn apply(self, params: &DetectorParams, value: f64) -> Result<DetectorParams> {
        match self {
            Self::Q => params.with_q(value),
            Self::Theta => params.with_theta(value),
        }
    }

    fn check_interval(self, lo: f64, hi: f64) -> Result<()> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidSweep(format!(
                "need finite bounds with min < max, got [{lo}, {hi}]"
            )));
        }
        if self == Self::Q && !(lo >= 0.0 && hi < 1.0) {
            return Err(Error::InvalidSweep(format!(
                "q bounds [{lo}, {hi}] must lie inside [0, 1)"
            )));
        }
        Ok(())
    }
}

/// A uniform grid over one parameter, inclusive of both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    variable: SweepVariable,
    min: f64,
    max: f64,
    steps: usize,
    fixed: DetectorParams,
}

impl SweepSpec {
    pub fn new(
        variable: SweepVariable,
        min: f64,
        max: f64,
        steps: usize,
        fixed: DetectorParams,
    ) -> Result<Self> {
        variable.check_interval(min, max)?;
        if steps < 2 {
            return Err(Error::InvalidSweep(format!(
                "steps must be >= 2, got {steps}"
            )));
        }
        Ok(Self {
            variable,
            min,
            max,
            steps,
            fixed,
        })
    }

    pub fn variable(&self) -> SweepVariable {
        self.variable
    }
    pub fn min(&self) -> f64 {
        self.min
    }
    pub fn max(&self) -> f64 {
        self.max
    }
    pub fn steps(&self) -> usize {
        self.steps
    }
    pub fn fixed(&self) -> &DetectorParams {
        &self.fixed
    }

    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.min, self.max, self.steps)
    }
}

fn uniform_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    let last = steps - 1;
    (0..steps)
        .map(|i| {
            if i == last {
                max
            } else {
                min + (max - min) * i as f64 / last as f64
            }
        })
        .collect()
}

/// One evaluated parameter point; the column set of the CSV output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub q: f64,
    pub theta: f64,
    pub nu: f64,
    pub mu: f64,
    pub upsilon: f64,
    pub eta: f64,
    pub concurrence: f64,
    pub entropy: f64,
    pub qfe: f64,
    pub ratio: Option<f64>,
}

/// Whether each point is also evaluated through the numeric Wootters route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CrossCheck {
    #[default]
    Off,
    Numeric,
}

pub fn evaluate_point(params: &DetectorParams, check: CrossCheck) -> Result<SweepRecord> {
    let state = build_final_state(params)?;
    let m = match check {
        CrossCheck::Off => measure_state(&state)?,
        CrossCheck::Numeric => measure_state_checked(&state)?,
    };
    Ok(SweepRecord {
        q: params.q(),
        theta: params.theta(),
        nu: params.nu(),
        mu: state.mu(),
        upsilon: state.upsilon(),
        eta: state.eta(),
        concurrence: m.concurrence,
        entropy: m.entropy,
        qfe: m.qfe,
        ratio: m.ratio,
    })
}

/// Evaluates every grid point (in parallel) and returns the records in
/// ascending parameter order.
pub fn run_sweep(spec: &SweepSpec, check: CrossCheck) -> Result<Vec<SweepRecord>> {
    spec.grid()
        .into_par_iter()
        .map(|x| evaluate_point(&spec.variable.apply(&spec.fixed, x)?, check))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// QFE against q for three initial states.
    Fig1,
    /// QFE against theta at three accelerations.
    Fig2,
    /// Concurrence, QFE and their ratio against q at theta = pi/4.
    Fig3,
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Self::Fig1),
            "fig2" => Ok(Self::Fig2),
            "fig3" => Ok(Self::Fig3),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

pub fn figure_preset(which: Figure) -> Vec<SweepSpec> {
    let spec = |variable, min, max, steps, theta, q| {
        let fixed = DetectorParams::new(theta, FIGURE_NU, q).expect("preset parameters are valid");
        SweepSpec::new(variable, min, max, steps, fixed).expect("preset grids are valid")
    };
    match which {
        Figure::Fig1 => [FRAC_PI_3, FRAC_PI_4, PI / 5.0]
            .into_iter()
            .map(|theta| spec(SweepVariable::Q, 0.0, Q_MAX_DEFAULT, 2000, theta, 0.0))
            .collect(),
        Figure::Fig2 => [0.0, 0.5, 0.8]
            .into_iter()
            .map(|q| spec(SweepVariable::Theta, 0.0, FRAC_PI_2, 721, FRAC_PI_4, q))
            .collect(),
        Figure::Fig3 => vec![spec(
            SweepVariable::Q,
            0.0,
            Q_MAX_DEFAULT,
            2000,
            FRAC_PI_4,
            0.0,
        )],
    }
}

/// Maximizes `f` on `[lo, hi]` by golden-section search until the bracket
/// is narrower than `tol`. Returns the best point seen and its value.
pub fn golden_section_max<E>(
    mut f: impl FnMut(f64) -> std::result::Result<f64, E>,
    lo: f64,
    hi: f64,
    tol: f64,
) -> std::result::Result<(f64, f64), E> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid)?;
    Ok([(mid, fm), (c, fc), (d, fd)]
        .into_iter()
        .fold((mid, fm), |best, p| if p.1 > best.1 { p } else { best }))
}

/// Maximum of the QFE closed form over concurrence in (0, 1). It depends on
/// nothing else, so it bounds every QFE curve the model can produce.
pub fn universal_qfe_peak() -> (f64, f64) {
    golden_section_max(qfe_from_concurrence, 0.0, 1.0, 1e-12).expect("interior of [0, 1]")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakResult {
    pub variable: SweepVariable,
    pub location: f64,
    pub value: f64,
    /// Interval the golden-section search was run on.
    pub bracket: (f64, f64),
    pub diagnostic: Option<PeakDiagnostic>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PeakDiagnostic {
    /// The coarse profile rises and falls more than once; the highest of the
    /// other local maxima is reported.
    NotUnimodal {
        other_location: f64,
        other_value: f64,
    },
}

/// Indices where the discrete difference turns from rising to falling.
fn local_maxima(samples: &[f64]) -> Vec<usize> {
    let mut peaks = Vec::new();
    let mut rising_from = None;
    for i in 1..samples.len() {
        let d = samples[i] - samples[i - 1];
        if d > UNIMODAL_SLACK {
            rising_from = Some(i);
        } else if d < -UNIMODAL_SLACK {
            if let Some(top) = rising_from.take() {
                peaks.push(top);
            }
        }
    }
    peaks
}

fn qfe_at(fixed: &DetectorParams, variable: SweepVariable, x: f64) -> Result<f64> {
    let state = build_final_state(&variable.apply(fixed, x)?)?;
    Ok(measure_state(&state)?.qfe)
}

/// Locates the QFE maximum along `variable` inside `bracket`: a coarse scan
/// picks the best cell, golden-section refines it.
pub fn find_qfe_peak(
    fixed: &DetectorParams,
    variable: SweepVariable,
    bracket: (f64, f64),
) -> Result<PeakResult> {
    let (lo, hi) = bracket;
    variable.check_interval(lo, hi)?;

    let grid = uniform_grid(lo, hi, COARSE_SCAN_POINTS);
    let samples = grid
        .par_iter()
        .map(|&x| qfe_at(fixed, variable, x))
        .collect::<Result<Vec<f64>>>()?;
    let best = samples
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > samples[best] { i } else { best });
    let inner = (
        grid[best.saturating_sub(1)],
        grid[(best + 1).min(grid.len() - 1)],
    );

    let (mut location, mut value) = golden_section_max(
        |x| qfe_at(fixed, variable, x),
        inner.0,
        inner.1,
        PEAK_LOCATION_TOL,
    )?;
    if samples[best] > value {
        location = grid[best];
        value = samples[best];
    }
    let diagnostic = local_maxima(&samples)
        .into_iter()
        .filter(|&i| i != best && (i as isize - best as isize).abs() > 1)
        .max_by(|&i, &j| samples[i].total_cmp(&samples[j]))
        .map(|i| PeakDiagnostic::NotUnimodal {
            other_location: grid[i],
            other_value: samples[i],
        });
    Ok(PeakResult {
        variable,
        location,
        value,
        bracket: inner,
        diagnostic,
    })
}

/// Axes of the analytic-versus-numeric comparison grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleGrid {
    pub thetas: Vec<f64>,
    pub nus: Vec<f64>,
    pub qs: Vec<f64>,
}

impl Default for OracleGrid {
    /// 33 angles on `[0, pi/2]`, four couplings, 100 accelerations on `[0, 0.999]`.
    fn default() -> Self {
        Self {
            thetas: uniform_grid(0.0, FRAC_PI_2, 33),
            nus: vec![0.0, 0.01, 0.05, 0.1],
            qs: uniform_grid(0.0, 0.999, 100),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub points: usize,
    /// Largest `|C_analytic - C_numeric|`.
    pub max_concurrence_deviation: f64,
    /// Largest difference between the closed-form and numeric spectra of `rho rho~`.
    pub max_spectrum_deviation: f64,
}

pub fn oracle_grid_check(grid: &OracleGrid) -> Result<OracleReport> {
    let mut points = Vec::with_capacity(grid.thetas.len() * grid.nus.len() * grid.qs.len());
    for &theta in &grid.thetas {
        for &nu in &grid.nus {
            for &q in &grid.qs {
                points.push(DetectorParams::new(theta, nu, q)?);
            }
        }
    }
    let deviations = points
        .par_iter()
        .map(|p| {
            let state = build_final_state(p)?;
            let dc = (concurrence_analytic(&state) - concurrence_numeric(state.rho())?).abs();
            let numeric = wootters_spectrum(state.rho())?;
            let ds = analytic_eigenvalues(&state)
                .iter()
                .zip(numeric.iter())
                .map(|(a, n)| (a - n).abs())
                .fold(0.0, f64::max);
            Ok((dc, ds))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    Ok(OracleReport {
        points: deviations.len(),
        max_concurrence_deviation: deviations.iter().map(|d| d.0).fold(0.0, f64::max),
        max_spectrum_deviation: deviations.iter().map(|d| d.1).fold(0.0, f64::max),
    })
}
