//! Final state and measures at one parameter point.
//!
//! cargo run --example single_point -- 0.785398 0.05 0.5

use unruh_qfe::detector::{build_final_state, validity_check, DetectorParams};
use unruh_qfe::measures::{concurrence_numeric, measure_state};

fn main() -> unruh_qfe::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let (theta, nu, q) = match args[..] {
        [t, n, q] => (t, n, q),
        _ => (std::f64::consts::FRAC_PI_4, 0.05, 0.5),
    };

    let params = DetectorParams::new(theta, nu, q)?;
    for w in validity_check(&params) {
        eprintln!("warning: {w}");
    }
    let state = build_final_state(&params)?;
    println!("rho =\n{:?}", state.rho());
    println!(
        "mu = {:.7}  upsilon = {:.7}  eta = {:.7}",
        state.mu(),
        state.upsilon(),
        state.eta()
    );

    let m = measure_state(&state)?;
    println!("concurrence (closed form) = {:.10}", m.concurrence);
    println!(
        "concurrence (Wootters)    = {:.10}",
        concurrence_numeric(state.rho())?
    );
    println!("entropy = {:.7} bits", m.entropy);
    println!("qfe     = {:.7} bits", m.qfe);
    match m.ratio {
        Some(r) => println!("qfe / C = {r:.7}"),
        None => println!("qfe / C undefined (separable)"),
    }
    Ok(())
}
