//! Reading and writing JSON matrix files.

use coherence_roof::cli::MatrixFile;
use coherence_roof::random::{random_density_hs, rng_from_seed};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let upper = MatrixFile::parse(r#"{"dim": 2, "upper": [[0.6, 0], [0.1, -0.25], [0.4, 0]]}"#)?;
    let rho = upper.to_density(false)?;
    println!("from upper triangle: {}", MatrixFile::from_hermitian(&rho).to_json());

    let scaled = MatrixFile::parse(r#"{"dim": 2, "entries": [[3, 0], [1, 0], [1, 0], [1, 0]]}"#)?;
    println!("unnormalized rejected: {}", scaled.to_density(false).unwrap_err());
    println!("normalized trace: {}", scaled.to_density(true)?.trace());

    let rho = random_density_hs(3, &mut rng_from_seed(3));
    let text = MatrixFile::from_hermitian(&rho).to_json();
    let back = MatrixFile::parse(&text)?.to_hermitian()?;
    println!("round trip exact: {}", back == *rho.hermitian());
    Ok(())
}
