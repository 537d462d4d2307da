//! Writes the qubit relative entropy surfaces to `figure1.csv`.
//!
//! The surfaces only depend on |z|, so the grid covers 0 <= z <= r <= 1.

use coherence_roof::cli::commands::figure1_csv;
use coherence_roof::cli::figure1_rows;

fn main() -> std::io::Result<()> {
    let rows = figure1_rows(101);
    let worst = rows.iter().map(|r| r.diff).fold(f64::INFINITY, f64::min);
    let widest = rows.iter().max_by(|a, b| a.diff.total_cmp(&b.diff)).unwrap();
    println!("{} grid points, min diff {worst:e}", rows.len());
    println!("largest gap {:.6} at r = {}, z = {}", widest.diff, widest.r, widest.z);
    std::fs::write("figure1.csv", figure1_csv(&rows))?;
    println!("wrote figure1.csv");
    Ok(())
}
