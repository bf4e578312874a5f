// The angle operator `Q`: its first moment reproduces the mean angle of the
// Wigner phase distribution, higher powers do not.

use std::error::Error;
use std::f64::consts::PI;

use phasekit::analysis::q_moment_mismatch_with;
use phasekit::phase_op::WignerPhaseOperator;
use phasekit::StateSpec;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("{:>6} {:>12} {:>12} {:>12} {:>10}", "cutoff", "p=1 gap", "<Q^2>", "∫θ²P^W", "p=2 gap");
    for cutoff in [10, 20, 40] {
        let op = WignerPhaseOperator::new(cutoff)?;
        let rho = StateSpec::Pair { n: 1 }.prepare(cutoff, 1e-10)?.density();
        let m1 = q_moment_mismatch_with(&rho, &op, -PI, 1)?;
        let m2 = q_moment_mismatch_with(&rho, &op, -PI, 2)?;
        println!("{cutoff:>6} {:>12.2e} {:>12.6} {:>12.6} {:>10.4}", m1.gap, m2.lhs, m2.rhs, m2.gap);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
