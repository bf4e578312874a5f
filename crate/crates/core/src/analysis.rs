//! Comparative checks between the Wigner phase operator and the Pegg–Barnett
//! formalism: weak equivalence, the angle operator `Q`, moment mismatch and
//! negativity.

use num_complex::Complex64;

use crate::distribution::{PhaseDistribution, PhaseGrid};
use crate::error::Result;
use crate::fock::{check_cutoffs, trace_product, DensityMatrix, Matrix, OperatorMatrix};
use crate::pegg_barnett::pb_projector;
use crate::phase_op::{OperatorPath, WignerPhaseOperator};
use crate::special::{fourier_power_integral, wrap_angle};

/// Largest spread of `f(θ_i, φ_j) = Re Tr[A(θ_i) ρ_PB(φ_j)]` within a class of
/// equal `θ − φ`. Zero means `f` depends on `θ − φ` only.
///
/// Classes are grouped by `(i − j) mod M` on the grid indices.
pub fn weak_equivalence_scan<F>(op_at: F, cutoff: usize, grid: &PhaseGrid) -> Result<f64>
where
    F: Fn(f64) -> OperatorMatrix,
{
    let m = grid.count();
    let ops = grid
        .samples()
        .map(|t| {
            let op = op_at(t);
            check_cutoffs(op.cutoff(), cutoff).map(|_| op)
        })
        .collect::<Result<Vec<_>>>()?;
    let projectors: Vec<OperatorMatrix> = grid.samples().map(|t| pb_projector(t, cutoff)).collect();
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    for (i, op) in ops.iter().enumerate() {
        for (j, proj) in projectors.iter().enumerate() {
            let f = trace_product(op.matrix(), proj.matrix()).re;
            let class = (i + m - j) % m;
            lo[class] = lo[class].min(f);
            hi[class] = hi[class].max(f);
        }
    }
    Ok(lo.iter().zip(&hi).map(|(l, h)| h - l).fold(0.0, f64::max))
}

/// `M_p = ∫_{θ0}^{θ0+2π} θ^p ρ_W(θ) dθ`, element-wise `ρ_W(0)_jk I_p(j−k, θ0)`.
pub fn moment_operator(op: &WignerPhaseOperator, theta0: f64, p: u32) -> OperatorMatrix {
    let zero = op.zero().matrix();
    let dim = zero.nrows();
    let m = Matrix::from_fn(dim, dim, |j, k| {
        zero[(j, k)] * fourier_power_integral(p, j as i64 - k as i64, theta0)
    });
    // Hermitian up to rounding of the closed-form integrals.
    let herm = (&m + m.adjoint()).scale(0.5);
    OperatorMatrix::new(herm, true).expect("moment operator of a hermitian family")
}

/// The angle operator `Q = ∫ θ ρ_W(θ) dθ` over `[θ0, θ0 + 2π)`.
pub fn build_q(theta0: f64, cutoff: usize) -> Result<OperatorMatrix> {
    let op = OperatorPath::default().operator(cutoff)?;
    Ok(moment_operator(&op, theta0, 1))
}

/// `⟨Q^p⟩` against `∫ θ^p P^W(θ) dθ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentMismatch {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

pub fn q_moment_mismatch(rho: &DensityMatrix, theta0: f64, p: u32) -> Result<MomentMismatch> {
    let op = OperatorPath::default().operator(rho.cutoff())?;
    q_moment_mismatch_with(rho, &op, theta0, p)
}

/// As [`q_moment_mismatch`] with a prebuilt operator family.
pub fn q_moment_mismatch_with(
    rho: &DensityMatrix,
    op: &WignerPhaseOperator,
    theta0: f64,
    p: u32,
) -> Result<MomentMismatch> {
    assert!(p >= 1, "moment order must be >= 1");
    check_cutoffs(rho.cutoff(), op.cutoff())?;
    let q = moment_operator(op, theta0, 1);
    let lhs = trace_product(rho.matrix(), q.pow(p).matrix()).re;
    let rhs = trace_product(rho.matrix(), moment_operator(op, theta0, p).matrix()).re;
    Ok(MomentMismatch { lhs, rhs, gap: (lhs - rhs).abs() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityReport {
    pub min_value: f64,
    /// Grid angle of the minimum, wrapped into `[θ0, θ0 + 2π)`.
    pub argmin: f64,
    /// Fraction of grid samples below `−1e−12`.
    pub negative_fraction: f64,
}

pub fn negativity_report(dist: &PhaseDistribution) -> NegativityReport {
    let (imin, &min_value) = dist
        .values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty distribution");
    let negative = dist.values.iter().filter(|&&v| v < -1e-12).count();
    NegativityReport {
        min_value,
        argmin: wrap_angle(dist.grid.theta(imin), dist.grid.theta0()),
        negative_fraction: negative as f64 / dist.values.len() as f64,
    }
}

/// `Tr[ρ_shifted ρ_W(θ)] − Tr[ρ ρ_W(θ − φ)]`, maximized over the grid.
pub fn covariance_defect(
    rho: &DensityMatrix,
    op: &WignerPhaseOperator,
    phi: f64,
    grid: &PhaseGrid,
) -> Result<f64> {
    check_cutoffs(rho.cutoff(), op.cutoff())?;
    let shifted = rho.phase_shifted(phi);
    let mut worst: f64 = 0.0;
    for theta in grid.samples() {
        let a: Complex64 = trace_product(shifted.matrix(), op.at(theta).matrix());
        let b: Complex64 = trace_product(rho.matrix(), op.at(theta - phi).matrix());
        worst = worst.max((a - b).norm());
    }
    Ok(worst)
}
