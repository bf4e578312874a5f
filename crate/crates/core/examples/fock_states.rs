// Coherent and cat states on a truncated Fock space, with the tail-mass
// bookkeeping that decides how large the cutoff has to be.

use std::error::Error;

use num_complex::Complex64;
use phasekit::fock::{coherent_state, ladder_matrices, minimal_cutoff, poisson_tail, superpose};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let eps = 1e-10;
    for alpha in [1.0, 2.0, 8.0] {
        let mean = alpha * alpha;
        let cutoff = minimal_cutoff(mean, eps);
        println!("|α={alpha}⟩: mean photon number {mean}, minimal cutoff {cutoff}, tail {:.3e}", poisson_tail(mean, cutoff));
    }

    let alpha = Complex64::new(-2.0, 0.0);
    let beta = Complex64::new(8.0, 0.0);
    let cutoff = 160;
    let a = coherent_state(alpha, cutoff, eps)?;
    let b = coherent_state(beta, cutoff, eps)?;
    let cat = superpose(&[(Complex64::new(1.0, 0.0), &a), (Complex64::new(1.0, 0.0), &b)])?;
    println!("cat state c(|−2⟩+|8⟩): c = {:.12}, overlap ⟨α|β⟩ = {:.3e}", cat.normalization, a.inner(&b).norm());

    let ladder = ladder_matrices(cutoff);
    let psi = &cat.state;
    let mean_n: f64 = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| n as f64 * c.norm_sqr())
        .sum();
    let diag = ladder.n_op.get(10, 10).re;
    println!("⟨N⟩ of the cat state = {mean_n:.6} (N_10,10 = {diag})");

    match coherent_state(beta, 40, eps) {
        Err(e) => println!("cutoff 40 for |8⟩ is refused: {e}"),
        Ok(_) => return Err("cutoff 40 should be too small for |8⟩".into()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
