//! Fock-basis Wigner function in polar coordinates `α = r e^{iθ}` and its
//! radial integral `P^W(θ) = ∫₀^∞ W(r, θ) r dr`.
//!
//! Normalization: `∫ W d²α = 1` and `W(0) = (2/π) Tr[ρ Π]` with `Π` the parity
//! operator. For `m = n + d ≥ n` the kernel multiplying `ρ_mn` is
//!
//! ```text
//! K_mn(r, θ) = (2/π) (−1)^n φ_n^(d)(4r²) e^{−idθ},
//! φ_n^(d)(x) = sqrt(n!/(n+d)!) x^{d/2} e^{−x/2} L_n^(d)(x),
//! ```
//!
//! and `K_nm = conj(K_mn)`. The phase factor `e^{−idθ}` makes a coherent
//! state `|β e^{iφ}⟩` peak at `θ = φ`, matching `e^{iNφ}` as a phase advance.

use std::f64::consts::{FRAC_2_PI, LN_2};

use num_complex::Complex64;

use crate::distribution::{DistributionKind, PhaseDistribution, PhaseGrid};
use crate::error::{PhaseError, Result};
use crate::fock::DensityMatrix;
use crate::special::{gauss_legendre_panels, ln_factorial, ln_gamma};

const PANEL_WIDTH: f64 = 0.5;
const PANEL_ORDER: usize = 24;
/// Log-decrement below the peak at which the Gaussian tail is cut.
const TAIL_DECADES_LN: f64 = 46.0;
const MOMENT_TOLERANCE: f64 = 1e-10;

/// Composite Gauss–Legendre rule on `[0, r_max]` for integrands of the form
/// `poly(r) e^{−2r²}`, validated on the monomials `r^q e^{−2r²}`.
#[derive(Debug, Clone)]
pub struct RadialQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub r_max: f64,
    pub order: usize,
    /// Largest monomial power validated by the construction sweep.
    pub max_power: usize,
}

impl RadialQuadrature {
    /// `Σ_i w_i f(r_i)` approximating `∫₀^∞ f(r) dr`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&r, &w)| w * f(r)).sum()
    }

    /// Relative error of the rule on `∫₀^∞ r^q e^{−2r²} dr = ½ 2^{−(q+1)/2} Γ((q+1)/2)`.
    pub fn moment_error(&self, q: usize) -> f64 {
        let ln_exact = gaussian_moment_ln(q);
        let ratio: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| w * (q as f64 * r.ln() - 2.0 * r * r - ln_exact).exp())
            .sum();
        (ratio - 1.0).abs()
    }
}

/// `ln ∫₀^∞ r^q e^{−2r²} dr`.
pub fn gaussian_moment_ln(q: usize) -> f64 {
    let s = (q as f64 + 1.0) / 2.0;
    -LN_2 - s * LN_2 + ln_gamma(s)
}

/// Builds and validates the radial rule for a state truncated at `cutoff`.
///
/// Integrands `r · W(r, θ)` contain powers up to `2·cutoff + 1`; the sweep also
/// checks `2·cutoff + 2` so that the `r dr` measure applied to `r^{2·cutoff+1}`
/// is covered.
pub fn build_radial_rule(cutoff: usize) -> Result<RadialQuadrature> {
    let max_power = 2 * cutoff + 2;
    let r_max = tail_cut(max_power).max(tail_cut(0));
    let panels = (r_max / PANEL_WIDTH).ceil() as usize;
    let (nodes, weights) = gauss_legendre_panels(0.0, r_max, panels, PANEL_ORDER);
    let rule = RadialQuadrature { nodes, weights, r_max, order: PANEL_ORDER, max_power };
    for q in 0..=max_power {
        let rel_err = rule.moment_error(q);
        if rel_err.is_nan() || rel_err > MOMENT_TOLERANCE {
            return Err(PhaseError::Quadrature { q, rel_err });
        }
    }
    Ok(rule)
}

/// Radius beyond the peak of `r^q e^{−2r²}` where it has dropped by `e^{−46}`.
fn tail_cut(q: usize) -> f64 {
    let q = q as f64;
    let log_f = |r: f64| if q == 0.0 { -2.0 * r * r } else { q * r.ln() - 2.0 * r * r };
    let peak = (q / 4.0).sqrt();
    let target = log_f(peak.max(f64::MIN_POSITIVE)) - TAIL_DECADES_LN;
    let (mut lo, mut hi) = (peak, peak + 10.0);
    while log_f(hi) > target {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if log_f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Radial parts `k[d][n] = (2/π)(−1)^n φ_n^(d)(4r²)` for `n + d ≤ cutoff`.
///
/// Uses the normalized three-term recurrence
/// `φ_{n+1} = [(2n+1+d−x) φ_n − sqrt(n(n+d)) φ_{n−1}] / sqrt((n+1)(n+d+1))`,
/// which keeps the Gaussian damping folded in and never forms raw `L_n`.
pub fn radial_kernel(cutoff: usize, r: f64) -> Vec<Vec<f64>> {
    let x = 4.0 * r * r;
    (0..=cutoff)
        .map(|d| {
            let len = cutoff - d + 1;
            let mut phi = Vec::with_capacity(len);
            let df = d as f64;
            let phi0 = if x == 0.0 {
                if d == 0 { 1.0 } else { 0.0 }
            } else {
                (0.5 * df * x.ln() - 0.5 * x - 0.5 * ln_factorial(d)).exp()
            };
            phi.push(phi0);
            if len > 1 {
                phi.push((1.0 + df - x) * phi0 / (1.0 + df).sqrt());
            }
            for n in 1..len.saturating_sub(1) {
                let nf = n as f64;
                let next = ((2.0 * nf + 1.0 + df - x) * phi[n]
                    - (nf * (nf + df)).sqrt() * phi[n - 1])
                    / ((nf + 1.0) * (nf + df + 1.0)).sqrt();
                phi.push(next);
            }
            phi.iter()
                .enumerate()
                .map(|(n, v)| if n % 2 == 0 { FRAC_2_PI * v } else { -FRAC_2_PI * v })
                .collect()
        })
        .collect()
}

/// Per-`r` diagonal sums `S_d = Σ_n ρ_{n+d,n} k[d][n]` and
/// `T_d = Σ_n ρ_{n,n+d} k[d][n]`, so that
/// `W(r, θ) = Σ_d (S_d e^{−idθ} + T_d e^{idθ})` with `T_0` omitted.
fn diagonal_sums(rho: &DensityMatrix, kernel: &[Vec<f64>]) -> (Vec<Complex64>, Vec<Complex64>) {
    let cutoff = rho.cutoff();
    let mut lower = Vec::with_capacity(cutoff + 1);
    let mut upper = Vec::with_capacity(cutoff + 1);
    for (d, row) in kernel.iter().enumerate() {
        let mut s = Complex64::new(0.0, 0.0);
        let mut t = Complex64::new(0.0, 0.0);
        for (n, &k) in row.iter().enumerate() {
            s += rho.get(n + d, n) * k;
            if d > 0 {
                t += rho.get(n, n + d) * k;
            }
        }
        lower.push(s);
        upper.push(t);
    }
    (lower, upper)
}

fn combine(lower: &[Complex64], upper: &[Complex64], theta: f64) -> Complex64 {
    let mut acc = lower[0];
    for d in 1..lower.len() {
        let e = Complex64::from_polar(1.0, -(d as f64) * theta);
        acc += lower[d] * e + upper[d] * e.conj();
    }
    acc
}

/// `W(r, θ)` for the given density matrix.
pub fn wigner_eval(rho: &DensityMatrix, r: f64, theta: f64) -> Result<f64> {
    assert!(r >= 0.0, "radius must be non-negative");
    let kernel = radial_kernel(rho.cutoff(), r);
    let (lower, upper) = diagonal_sums(rho, &kernel);
    let w = combine(&lower, &upper, theta);
    if w.im.abs() > 1e-8 {
        return Err(PhaseError::KernelInconsistency { residue: w.im.abs(), r, theta });
    }
    Ok(w.re)
}

/// `P^W(θ_i) = Σ_q w_q r_q W(r_q, θ_i)` on the grid, using a rule built for the
/// state's cutoff.
pub fn phase_distribution_radial(rho: &DensityMatrix, grid: &PhaseGrid) -> Result<PhaseDistribution> {
    let rule = build_radial_rule(rho.cutoff())?;
    phase_distribution_radial_with(rho, grid, &rule)
}

/// As [`phase_distribution_radial`] with a caller-supplied rule.
pub fn phase_distribution_radial_with(
    rho: &DensityMatrix,
    grid: &PhaseGrid,
    rule: &RadialQuadrature,
) -> Result<PhaseDistribution> {
    let dim = rho.cutoff() + 1;
    let mut lower = vec![Complex64::new(0.0, 0.0); dim];
    let mut upper = vec![Complex64::new(0.0, 0.0); dim];
    // Integrate each angular harmonic over r first (fixed node order), then
    // resum the harmonics at every θ.
    for (&r, &w) in rule.nodes.iter().zip(&rule.weights) {
        let kernel = radial_kernel(rho.cutoff(), r);
        let (s, t) = diagonal_sums(rho, &kernel);
        for d in 0..dim {
            lower[d] += s[d] * (w * r);
            upper[d] += t[d] * (w * r);
        }
    }
    let mut values = Vec::with_capacity(grid.count());
    for theta in grid.samples() {
        let p = combine(&lower, &upper, theta);
        if p.im.abs() > 1e-8 {
            return Err(PhaseError::KernelInconsistency { residue: p.im.abs(), r: f64::NAN, theta });
        }
        values.push(p.re);
    }
    Ok(PhaseDistribution::new(*grid, values, DistributionKind::WignerRadial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, number_state, superpose, StateVector, DEFAULT_EPS_TAIL};
    use std::f64::consts::PI;

    fn pure(psi: &StateVector) -> DensityMatrix {
        DensityMatrix::from_pure(psi)
    }

    fn pair(n: usize, cutoff: usize) -> StateVector {
        let one = Complex64::new(1.0, 0.0);
        let a = number_state(0, cutoff).unwrap();
        let b = number_state(2 * n, cutoff).unwrap();
        superpose(&[(one, &a), (one, &b)]).unwrap().state
    }

    /// Parity oracle: `(2/π) Σ_n (−1)^n ρ_nn`.
    fn parity_oracle(rho: &DensityMatrix) -> f64 {
        (0..=rho.cutoff())
            .map(|n| if n % 2 == 0 { rho.get(n, n).re } else { -rho.get(n, n).re })
            .sum::<f64>()
            * 2.0
            / PI
    }

    #[test]
    fn origin_values_match_parity() {
        let vac = pure(&number_state(0, 3).unwrap());
        let w = wigner_eval(&vac, 0.0, 1.234).unwrap();
        assert!((w - parity_oracle(&vac)).abs() < 1e-15);
        assert!((w - 2.0 / PI).abs() < 1e-15);

        let one = pure(&number_state(1, 3).unwrap());
        let w = wigner_eval(&one, 0.0, 0.0).unwrap();
        assert!((w + 2.0 / PI).abs() < 1e-15);

        let psi = StateVector::from_amplitudes(vec![
            Complex64::new(0.4, 0.1),
            Complex64::new(-0.2, 0.5),
            Complex64::new(0.3, 0.0),
            Complex64::new(0.1, -0.6),
        ])
        .unwrap();
        let rho = pure(&psi);
        for theta in [0.0, 1.0, -2.5] {
            let w = wigner_eval(&rho, 0.0, theta).unwrap();
            assert!((w - parity_oracle(&rho)).abs() < 1e-10);
        }
    }

    #[test]
    fn vacuum_gaussian() {
        let vac = pure(&number_state(0, 0).unwrap());
        let w = wigner_eval(&vac, 1.0, 0.0).unwrap();
        assert!((w - 2.0 / PI * (-2f64).exp()).abs() < 1e-15);
        assert!((w - 0.086157).abs() < 1e-6);
    }

    #[test]
    fn coherent_state_matches_displaced_gaussian() {
        // W for |β⟩ is (2/π) exp(−2|α − β|²).
        let beta = Complex64::from_polar(1.5, 0.7);
        let psi = coherent_state(beta, 50, DEFAULT_EPS_TAIL).unwrap();
        let rho = pure(&psi);
        for &(r, theta) in &[(0.0, 0.0), (1.5, 0.7), (1.2, 0.9), (2.0, -1.0), (0.5, 3.0)] {
            let alpha = Complex64::from_polar(r, theta);
            let exact = 2.0 / PI * (-2.0 * (alpha - beta).norm_sqr()).exp();
            let w = wigner_eval(&rho, r, theta).unwrap();
            assert!((w - exact).abs() < 1e-10, "r={r} θ={theta}: {w} vs {exact}");
        }
    }

    fn trapezoid_moment(q: usize) -> f64 {
        // high-resolution trapezoid on [0, 12]
        let n = 200_000;
        let h = 12.0 / n as f64;
        (0..=n)
            .map(|i| {
                let r = i as f64 * h;
                let f = r.powi(q as i32) * (-2.0 * r * r).exp();
                if i == 0 || i == n { 0.5 * f } else { f }
            })
            .sum::<f64>()
            * h
    }

    #[test]
    fn radial_rule_examples() {
        let rule = build_radial_rule(0).unwrap();
        assert!((rule.integrate(|r| r * (-2.0 * r * r).exp()) - 0.25).abs() < 1e-12);
        let rule = build_radial_rule(1).unwrap();
        let m2 = rule.integrate(|r| r * r * (-2.0 * r * r).exp());
        assert!((m2 - (2.0 * PI).sqrt() / 16.0).abs() < 1e-12);
        assert!((m2 - trapezoid_moment(2)).abs() < 1e-10);
        assert!((m2 - 0.156664).abs() < 1e-6);
        for cutoff in [0, 5, 40, 150] {
            let rule = build_radial_rule(cutoff).unwrap();
            let m0 = rule.integrate(|r| (-2.0 * r * r).exp());
            assert!((m0 - (PI / 8.0).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn radial_rule_measure_form() {
        // r dr measure: ∫ r^q e^{−2r²} r dr = ½ 2^{−(q+2)/2} Γ((q+2)/2)
        let cutoff = 30;
        let rule = build_radial_rule(cutoff).unwrap();
        for q in 0..=2 * cutoff + 1 {
            let exact = 0.5 * 2f64.powf(-(q as f64 + 2.0) / 2.0) * ln_gamma((q as f64 + 2.0) / 2.0).exp();
            let got = rule.integrate(|r| r.powi(q as i32 + 1) * (-2.0 * r * r).exp());
            assert!(((got - exact) / exact).abs() < 1e-10, "q={q}");
        }
    }

    #[test]
    fn number_states_are_uniform() {
        let grid = PhaseGrid::new(-PI, 32).unwrap();
        for n in [0, 1, 4, 9] {
            let rho = pure(&number_state(n, 10).unwrap());
            let d = phase_distribution_radial(&rho, &grid).unwrap();
            for v in &d.values {
                assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn pair_state_closed_form() {
        let grid = PhaseGrid::new(-PI, 720).unwrap();
        let rho = pure(&pair(1, 4));
        let d = phase_distribution_radial(&rho, &grid).unwrap();
        for (theta, v) in grid.samples().zip(&d.values) {
            let exact = (1.0 + 2f64.sqrt() * (2.0 * theta).cos()) / (2.0 * PI);
            assert!((v - exact).abs() < 1e-8);
        }
        assert!((d.min() - (1.0 - 2f64.sqrt()) / (2.0 * PI)).abs() < 1e-6);
        assert!((d.integral() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn coherent_peak_sets_phase_convention() {
        let grid = PhaseGrid::new(-PI, 360).unwrap();
        let psi = coherent_state(Complex64::new(0.0, 2.0), 60, DEFAULT_EPS_TAIL).unwrap();
        let d = phase_distribution_radial(&pure(&psi), &grid).unwrap();
        let (imax, _) = d
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert!((grid.theta(imax) - PI / 2.0).abs() <= grid.spacing() + 1e-12);
    }

    #[test]
    fn kernel_rows_stay_bounded_at_large_cutoff() {
        for r in [0.01, 3.0, 8.0, 11.0] {
            let k = radial_kernel(150, r);
            assert!(k.iter().flatten().all(|v| v.is_finite() && v.abs() <= FRAC_2_PI + 1e-12));
        }
    }
}
