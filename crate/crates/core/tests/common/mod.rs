#![allow(dead_code)]

use num_complex::Complex64;
use phasekit::fock::{number_state, superpose, Matrix};
use phasekit::{OperatorMatrix, StateVector};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `(|0⟩ + |2n⟩)/√2`.
pub fn pair(n: usize, cutoff: usize) -> StateVector {
    let one = c(1.0, 0.0);
    superpose(&[(one, &number_state(0, cutoff).unwrap()), (one, &number_state(2 * n, cutoff).unwrap())])
        .unwrap()
        .state
}

/// Random normalized state supported on `0..=support`.
pub fn random_state<R: Rng>(rng: &mut R, support: usize, cutoff: usize) -> StateVector {
    let amps = (0..=cutoff)
        .map(|n| if n <= support { c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) } else { c(0.0, 0.0) })
        .collect();
    StateVector::from_amplitudes(amps).unwrap()
}

pub fn random_hermitian<R: Rng>(rng: &mut R, cutoff: usize) -> OperatorMatrix {
    let dim = cutoff + 1;
    let raw = Matrix::from_fn(dim, dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    OperatorMatrix::new((&raw + raw.adjoint()).scale(0.5), true).unwrap()
}

/// `(1/2π)(1 + 2^n n!/√((2n)!) cos 2nθ)`, coefficient from a running product.
pub fn pair_wigner_closed(n: usize, theta: f64) -> f64 {
    // 2^n n! / √((2n)!) = Π_{k=1}^{n} 2k / √((2k−1)·2k)
    let coef: f64 = (1..=n).map(|k| (2 * k) as f64 / (((2 * k - 1) * 2 * k) as f64).sqrt()).product();
    (1.0 + coef * (2.0 * n as f64 * theta).cos()) / (2.0 * std::f64::consts::PI)
}

pub fn pair_pb_closed(n: usize, theta: f64) -> f64 {
    (1.0 + (2.0 * n as f64 * theta).cos()) / (2.0 * std::f64::consts::PI)
}
