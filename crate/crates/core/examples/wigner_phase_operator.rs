// Builds the Wigner phase operator, shows that it is not positive and
// compares the trace route with the radial route.

use std::error::Error;
use std::f64::consts::PI;

use num_complex::Complex64;
use phasekit::phase_op::{rho_w_zero, trace_distribution, WignerPhaseOperator};
use phasekit::wigner::phase_distribution_radial;
use phasekit::{DensityMatrix, PhaseGrid, StateSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let small = rho_w_zero(2)?;
    for j in 0..=2 {
        let row: Vec<String> = (0..=2).map(|k| format!("{:9.6}", 2.0 * PI * small.get(j, k).re)).collect();
        println!("2π ρ_W(0) row {j}: [{}]", row.join(","));
    }
    println!("min eigenvalue of ρ_W(0) at cutoff 10: {:.6}", rho_w_zero(10)?.min_eigenvalue());

    let cutoff = 40;
    let op = WignerPhaseOperator::new(cutoff)?;
    let grid = PhaseGrid::new(-PI, 360)?;
    let state = StateSpec::Coherent { alpha: Complex64::new(1.0, 0.5) };
    let rho: DensityMatrix = state.prepare(cutoff, 1e-10)?.density();
    let by_trace = trace_distribution(&rho, &grid, &op)?;
    let by_radius = phase_distribution_radial(&rho, &grid)?;
    println!(
        "{state} at cutoff {cutoff}: max |trace − radial| = {:.2e}",
        by_trace.max_abs_diff(&by_radius)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
