//! Pegg–Barnett phase states, phase density, the Hermitian phase operator
//! `φ_s` and its moments.
//!
//! Phase angles are `θ_m = θ0 + 2πm/(s+1)`, `m = 0..=s`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::distribution::{DistributionKind, PhaseDistribution, PhaseGrid};
use crate::error::{PhaseError, Result};
use crate::fock::{trace_product, DensityMatrix, Matrix, OperatorMatrix, StateVector};
use crate::special::gauss_legendre_panels;

/// Orthonormal phase states `|θ_m⟩ = (s+1)^{−1/2} Σ_{n=0}^{s} e^{inθ_m} |n⟩`.
#[derive(Debug, Clone)]
pub struct PBBasis {
    pub s: usize,
    pub theta0: f64,
    pub states: Vec<StateVector>,
}

impl PBBasis {
    pub fn theta(&self, m: usize) -> f64 {
        phase_angle(self.s, self.theta0, m)
    }

    /// `max |⟨θ_m|θ_m'⟩ − δ_mm'|`.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, sa) in self.states.iter().enumerate() {
            for (b, sb) in self.states.iter().enumerate() {
                let delta = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((sa.inner(sb) - delta).norm());
            }
        }
        worst
    }

    /// `max |Σ_m |θ_m⟩⟨θ_m| − 1|` element-wise.
    pub fn completeness_deviation(&self) -> f64 {
        let dim = self.s + 1;
        let mut sum = Matrix::zeros(dim, dim);
        for st in &self.states {
            let v = nalgebra::DVector::from_column_slice(st.amplitudes());
            sum += &v * v.adjoint();
        }
        (sum - Matrix::identity(dim, dim)).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub fn phase_angle(s: usize, theta0: f64, m: usize) -> f64 {
    theta0 + 2.0 * PI * m as f64 / (s as f64 + 1.0)
}

pub fn pb_basis(s: usize, theta0: f64) -> PBBasis {
    let scale = 1.0 / ((s + 1) as f64).sqrt();
    let states = (0..=s)
        .map(|m| {
            let theta = phase_angle(s, theta0, m);
            let amps = (0..=s)
                .map(|n| Complex64::from_polar(scale, n as f64 * theta))
                .collect();
            StateVector::from_amplitudes(amps).expect("phase state has unit norm")
        })
        .collect();
    PBBasis { s, theta0, states }
}

/// `Σ_n c_n e^{−inθ}`.
fn phase_amplitude(psi: &StateVector, theta: f64) -> Complex64 {
    psi.amplitudes()
        .iter()
        .enumerate()
        .map(|(n, &c)| c * Complex64::from_polar(1.0, -(n as f64) * theta))
        .sum()
}

fn density_at(psi: &StateVector, theta: f64) -> f64 {
    phase_amplitude(psi, theta).norm_sqr() / (2.0 * PI)
}

/// `P_PB(θ) = (1/2π) |Σ_n c_n e^{−inθ}|²` on the grid.
pub fn pb_density(psi: &StateVector, grid: &PhaseGrid) -> PhaseDistribution {
    PhaseDistribution::from_fn(*grid, DistributionKind::PeggBarnett, |t| density_at(psi, t))
}

/// `P_PB(θ) = Tr[ρ ρ_PB(θ)]` for a general density matrix.
pub fn pb_density_mixed(rho: &DensityMatrix, grid: &PhaseGrid) -> PhaseDistribution {
    PhaseDistribution::from_fn(*grid, DistributionKind::PeggBarnett, |t| {
        trace_product(rho.matrix(), pb_projector(t, rho.cutoff()).matrix()).re
    })
}

/// `(1/2π)[1 + cos(2nθ)]`, the phase density of `(|0⟩ + |2n⟩)/√2`.
pub fn closed_form_pair_state_pb(n: usize, grid: &PhaseGrid) -> PhaseDistribution {
    PhaseDistribution::from_fn(*grid, DistributionKind::ClosedForm, |t| {
        (1.0 + (2.0 * n as f64 * t).cos()) / (2.0 * PI)
    })
}

/// `φ_s = Σ_m θ_m |θ_m⟩⟨θ_m|`.
pub fn phi_s_matrix(s: usize, theta0: f64) -> OperatorMatrix {
    let basis = pb_basis(s, theta0);
    let dim = s + 1;
    let mut acc = Matrix::zeros(dim, dim);
    for (m, st) in basis.states.iter().enumerate() {
        let v = nalgebra::DVector::from_column_slice(st.amplitudes());
        acc += (&v * v.adjoint()).scale(basis.theta(m));
    }
    // Hermitian by construction; symmetrize the rounding.
    let herm = (&acc + acc.adjoint()).scale(0.5);
    OperatorMatrix::new(herm, true).expect("phase operator is hermitian")
}

/// Finite-`s` moment `⟨φ_s^p⟩` and the continuum moment `∫ θ^p P_PB dθ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PBMoment {
    pub finite: f64,
    pub limit: f64,
}

/// `⟨φ_s^p⟩ = Σ_m θ_m^p |⟨θ_m|ψ⟩|²` (spectral, no matrix power) together with the
/// continuum value from a composite Gauss–Legendre rule over `[θ0, θ0+2π]`.
pub fn phi_s_moment(s: usize, theta0: f64, psi: &StateVector, p: u32) -> Result<PBMoment> {
    if psi.cutoff() > s {
        return Err(PhaseError::CutoffTooSmall {
            cutoff: s,
            suggested: psi.cutoff(),
            reason: "state does not fit in the (s+1)-dimensional phase space".into(),
        });
    }
    let scale = 1.0 / (s as f64 + 1.0);
    let finite = (0..=s)
        .map(|m| {
            let theta = phase_angle(s, theta0, m);
            // ⟨θ_m|ψ⟩ = (s+1)^{−1/2} Σ_n e^{−inθ_m} c_n
            theta.powi(p as i32) * phase_amplitude(psi, theta).norm_sqr() * scale
        })
        .sum();
    Ok(PBMoment { finite, limit: pb_limit_moment(theta0, psi, p) })
}

/// `∫_{θ0}^{θ0+2π} θ^p P_PB(θ) dθ` by composite Gauss–Legendre quadrature.
pub fn pb_limit_moment(theta0: f64, psi: &StateVector, p: u32) -> f64 {
    let panels = 16 + 2 * psi.cutoff();
    let (nodes, weights) = gauss_legendre_panels(theta0, theta0 + 2.0 * PI, panels, 20);
    nodes
        .iter()
        .zip(&weights)
        .map(|(&t, &w)| w * t.powi(p as i32) * density_at(psi, t))
        .sum()
}

/// Continuum-normalized dyad `|θ⟩⟨θ|` with `|θ⟩ = (2π)^{−1/2} Σ_{n≤cutoff} e^{inθ}|n⟩`,
/// so that `Tr[ρ ρ_PB(θ)] = P_PB(θ)`.
pub fn pb_projector(theta: f64, cutoff: usize) -> OperatorMatrix {
    let scale = 1.0 / (2.0 * PI);
    let m = Matrix::from_fn(cutoff + 1, cutoff + 1, |j, k| {
        Complex64::from_polar(scale, (j as f64 - k as f64) * theta)
    });
    OperatorMatrix::new(m, true).expect("dyad is hermitian")
}
