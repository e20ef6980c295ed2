//! Sweep Rob's acceleration at fixed gap and print CSV to stdout.

use unruh_qfe::cli::write_csv;
use unruh_qfe::detector::{q_to_accel, DetectorParams};
use unruh_qfe::sweep::{run_sweep, CrossCheck, SweepSpec, SweepVariable};

fn main() -> unruh_qfe::Result<()> {
    let omega = 1.0;
    let fixed = DetectorParams::new(std::f64::consts::FRAC_PI_4, 0.05, 0.0)?;
    let spec = SweepSpec::new(SweepVariable::Q, 0.0, 0.999, 21, fixed)?;
    let records = run_sweep(&spec, CrossCheck::Numeric)?;

    for r in records.iter().filter(|r| r.q > 0.0).step_by(5) {
        eprintln!(
            "q = {:.3}  a/omega = {:.3}  C = {:.6}",
            r.q,
            q_to_accel(omega, r.q)?,
            r.concurrence
        );
    }
    write_csv(&records, std::io::stdout().lock())?;
    Ok(())
}
