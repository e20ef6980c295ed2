//! Where the fluctuation of entanglement peaks, along q and along theta.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

use unruh_qfe::detector::DetectorParams;
use unruh_qfe::sweep::{find_qfe_peak, universal_qfe_peak, SweepVariable, Q_MAX_DEFAULT};

fn main() -> unruh_qfe::Result<()> {
    let (c_star, qfe_star) = universal_qfe_peak();
    println!("closed-form maximum: qfe = {qfe_star:.7} at C = {c_star:.7}");

    for theta in [FRAC_PI_3, FRAC_PI_4, PI / 5.0] {
        let fixed = DetectorParams::new(theta, 0.05, 0.0)?;
        let peak = find_qfe_peak(&fixed, SweepVariable::Q, (0.0, Q_MAX_DEFAULT))?;
        println!(
            "theta = {theta:.4}: peak {:.7} at q = {:.6}",
            peak.value, peak.location
        );
    }

    // Along theta the profile has two maxima, one on each side of pi/4.
    let fixed = DetectorParams::new(FRAC_PI_4, 0.05, 0.5)?;
    let peak = find_qfe_peak(&fixed, SweepVariable::Theta, (0.0, FRAC_PI_2))?;
    println!(
        "q = 0.5: peak {:.7} at theta = {:.6}",
        peak.value, peak.location
    );
    if let Some(d) = peak.diagnostic {
        println!("  {d:?}");
    }
    Ok(())
}
