//! Entanglement and the quantum fluctuation of entanglement (QFE) for two
//! Unruh-DeWitt detectors, where Alice's detector stays inertial and Rob's
//! is uniformly accelerated while coupled to a massless scalar field.
//!
//! The crate is organized bottom-up:
//!
//! - [`qmatrix`]: 2x2/4x4 complex matrices, partial trace, Jacobi
//!   eigensolver and PSD square root.
//! - [`detector`]: model parameters, the acceleration parameter
//!   `q = exp(-2 pi omega / a)`, Rob's world line and the final two-detector
//!   density matrix.
//! - [`measures`]: spin flip, concurrence (closed form and numeric Wootters
//!   route), von Neumann entropy and QFE.
//! - [`sweep`]: parameter sweeps, figure presets, QFE peak search and the
//!   grid-wide oracle check.
//! - [`cli`]: the `unruh-qfe` command line and CSV output.
//!
//! ```
//! use unruh_qfe::{build_final_state, measure_state, DetectorParams};
//!
//! let params = DetectorParams::new(std::f64::consts::FRAC_PI_4, 0.05, 0.5)?;
//! let state = build_final_state(&params)?;
//! let m = measure_state(&state)?;
//! assert!((m.concurrence - 0.9927417).abs() < 1e-7);
//! # Ok::<(), unruh_qfe::Error>(())
//! ```

pub mod cli;
pub mod detector;
pub mod error;
pub mod measures;
pub mod qmatrix;
pub mod sweep;

pub use detector::{build_final_state, DetectorParams, JointState};
pub use error::{Error, Result};
pub use measures::{measure_state, MeasureSet};
pub use qmatrix::ComplexMatrix;
pub use sweep::{run_sweep, CrossCheck, SweepRecord, SweepSpec, SweepVariable};
