// Weak equivalence: `Tr[A(θ) ρ_PB(φ)]` depends on `θ − φ` only when the
// family `A(θ)` is generated by phase conjugation.

use std::error::Error;
use std::f64::consts::PI;

use num_complex::Complex64;
use phasekit::analysis::weak_equivalence_scan;
use phasekit::fock::{phase_conjugate, Matrix};
use phasekit::phase_op::WignerPhaseOperator;
use phasekit::{OperatorMatrix, PhaseGrid};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cutoff = 8;
    let grid = PhaseGrid::new(-PI, 32)?;

    let rw = WignerPhaseOperator::new(cutoff)?;
    let score = weak_equivalence_scan(|t| rw.at(t), cutoff, &grid)?;
    println!("ρ_W(θ): {score:.2e}");

    let raw = Matrix::from_fn(cutoff + 1, cutoff + 1, |j, k| {
        Complex64::new((j * k) as f64 / 10.0, j as f64 - k as f64)
    });
    let seed = OperatorMatrix::new((&raw + raw.adjoint()).scale(0.5), true)?;
    let score = weak_equivalence_scan(|t| phase_conjugate(&seed, t), cutoff, &grid)?;
    println!("conjugated hermitian seed: {score:.2e}");

    let score = weak_equivalence_scan(|_| seed.clone(), cutoff, &grid)?;
    println!("constant family: {score:.3}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
