// Pegg–Barnett phase states, the phase density and convergence of the
// finite-`s` phase moments.

use std::error::Error;
use std::f64::consts::PI;

use phasekit::pegg_barnett::{closed_form_pair_state_pb, pb_basis, pb_density, phi_s_moment};
use phasekit::{PhaseGrid, PreparedState, StateSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let basis = pb_basis(8, -PI);
    println!(
        "s=8 phase basis: orthonormality {:.1e}, completeness {:.1e}",
        basis.orthonormality_deviation(),
        basis.completeness_deviation()
    );

    let PreparedState::Pure(psi) = StateSpec::Pair { n: 1 }.prepare(2, 1e-10)? else {
        return Err("pair state is pure".into());
    };
    let grid = PhaseGrid::new(-PI, 720)?;
    let density = pb_density(&psi, &grid);
    println!(
        "pair n=1: min P_PB = {:.2e}, max |P_PB − closed form| = {:.2e}",
        density.min(),
        density.max_abs_diff(&closed_form_pair_state_pb(1, &grid))
    );

    for s in [8, 64, 256, 1024] {
        let m = phi_s_moment(s, -PI, &psi, 2)?;
        println!("s={s:5}: ⟨φ_s²⟩ = {:.9}  (limit {:.9}, gap {:.2e})", m.finite, m.limit, (m.finite - m.limit).abs());
    }
    println!("π²/3 + 1/2 = {:.9}", PI * PI / 3.0 + 0.5);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
