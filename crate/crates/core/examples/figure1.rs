// Writes the cat-state comparison data (Wigner and Pegg–Barnett phase
// distributions of `c(|−2⟩ + |8⟩)`) as a CSV file and reads it back.

use std::error::Error;
use std::f64::consts::PI;

use num_complex::Complex64;
use phasekit::analysis::negativity_report;
use phasekit::io::CsvTable;
use phasekit::pegg_barnett::pb_density;
use phasekit::wigner::phase_distribution_radial;
use phasekit::{PhaseGrid, PreparedState, StateSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let spec = StateSpec::Cat { alpha: Complex64::new(-2.0, 0.0), beta: Complex64::new(8.0, 0.0) };
    let cutoff = 160;
    let grid = PhaseGrid::new(-PI, 720)?;
    let PreparedState::Pure(psi) = spec.prepare(cutoff, 1e-10)? else {
        return Err("cat state is pure".into());
    };
    let wigner = phase_distribution_radial(&phasekit::DensityMatrix::from_pure(&psi), &grid)?;
    let pb = pb_density(&psi, &grid);
    let neg = negativity_report(&wigner);
    println!("∫P^W = {:.12}, ∫P_PB = {:.12}", wigner.integral(), pb.integral());
    println!(
        "P^W min {:.5} at θ = {:.4}; {:.1}% of the grid is negative",
        neg.min_value,
        neg.argmin,
        100.0 * neg.negative_fraction
    );

    let meta = vec![
        ("state".to_string(), spec.to_string()),
        ("cutoff".to_string(), cutoff.to_string()),
    ];
    let table = CsvTable::from_distributions(meta, &grid, &[("wigner", &wigner), ("pegg_barnett", &pb)]);
    let dir = std::env::temp_dir().join("phasekit-figure1-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("figure1_b.csv");
    table.write(&path)?;
    let back = CsvTable::read(&path)?;
    assert_eq!(back.column("wigner").as_deref(), Some(wigner.values.as_slice()));
    println!("wrote {}", path.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
