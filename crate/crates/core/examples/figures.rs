//! Writes the three figure presets as CSV files into a directory
//! (default: ./figures).

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use unruh_qfe::cli::write_csv;
use unruh_qfe::sweep::{figure_preset, run_sweep, CrossCheck, Figure};

fn main() -> unruh_qfe::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    fs::create_dir_all(&dir)?;
    for (name, which) in [
        ("fig1", Figure::Fig1),
        ("fig2", Figure::Fig2),
        ("fig3", Figure::Fig3),
    ] {
        let mut records = Vec::new();
        for spec in figure_preset(which) {
            records.extend(run_sweep(&spec, CrossCheck::Off)?);
        }
        let path = dir.join(format!("{name}.csv"));
        write_csv(&records, BufWriter::new(File::create(&path)?))?;
        println!("{} rows -> {}", records.len(), path.display());
    }
    Ok(())
}
