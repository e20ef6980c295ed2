//! Closed-form versus numeric (Wootters) concurrence over the standard grid.

use unruh_qfe::sweep::{oracle_grid_check, OracleGrid};

fn main() -> unruh_qfe::Result<()> {
    let grid = OracleGrid::default();
    let report = oracle_grid_check(&grid)?;
    println!(
        "{} points ({} angles x {} couplings x {} accelerations)",
        report.points,
        grid.thetas.len(),
        grid.nus.len(),
        grid.qs.len()
    );
    println!(
        "max |C_closed - C_numeric|   = {:.3e}",
        report.max_concurrence_deviation
    );
    println!(
        "max spectrum deviation        = {:.3e}",
        report.max_spectrum_deviation
    );
    Ok(())
}
