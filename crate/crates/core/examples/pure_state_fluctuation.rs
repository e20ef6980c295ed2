//! For pure states the fluctuation of entanglement is the standard deviation
//! of -log2 rho_A; compare it with the closed form in the concurrence.

use num_complex::Complex64;
use unruh_qfe::measures::{
    entanglement_entropy_pure, pure_concurrence, qfe_from_concurrence, qfe_variance_pure,
    PURITY_TOL,
};
use unruh_qfe::qmatrix::ComplexMatrix;

fn main() -> unruh_qfe::Result<()> {
    println!("theta      C          E          sigma      closed");
    for k in 0..=8 {
        let theta = k as f64 * std::f64::consts::PI / 16.0;
        let (s, c) = theta.sin_cos();
        let amps = [0.0, s, c, 0.0].map(|x| Complex64::new(x, 0.0));
        let psi = ComplexMatrix::pure_state(&amps)?;
        let conc = pure_concurrence(&psi, PURITY_TOL)?;
        println!(
            "{theta:.6}  {conc:.6}  {:.6}  {:.6}  {:.6}",
            entanglement_entropy_pure(&psi)?,
            qfe_variance_pure(&psi)?,
            qfe_from_concurrence(conc)?
        );
    }
    Ok(())
}
