//! Rob's hyperbolic world line and how well x^2 - t^2 = 1/a^2 holds in
//! floating point.

use unruh_qfe::detector::trajectory_point;

fn main() -> unruh_qfe::Result<()> {
    for a in [0.5, 1.0, 2.0] {
        println!("a = {a}");
        for tau in [-5.0, -2.0, 0.0, 1.0, 2.0, 5.0] {
            let p = trajectory_point(a, tau)?;
            let rel = (p.interval() * a * a - 1.0).abs();
            println!(
                "  tau = {tau:>4}: t = {:>12.6} x = {:>12.6} rel. error {rel:.1e}",
                p.t, p.x
            );
        }
    }
    Ok(())
}
