//! The Wigner phase operator `ρ_W(θ)` as an explicit matrix on the truncated
//! Fock space, and the trace route `P^W(θ) = Tr[ρ ρ_W(θ)]`.
//!
//! The defining double series
//!
//! ```text
//! ρ_W(θ) = (1/2π) Σ_{m,n≥0} Σ_{l=0}^{n} (−1)^m 2^{m+n/2} Γ(n/2+1) e^{i(n−2l)θ}
//!          / (m! (n−l)! l!) · a†^{m+n−l} a^{m+l}
//! ```
//!
//! collapses to a finite sum on every Fock matrix element: `⟨j|…|k⟩` needs
//! `m + l ≤ k` and `n = j − k + 2l`, so `l ≤ k` and `m ≤ k − l`.
//!
//! The terms alternate in sign and grow roughly like `5^k` on the diagonal
//! while the elements stay `O(1)`, so a double-precision sum is only usable for
//! small cutoffs. [`Accumulation::Exact`] clears all denominators and sums the
//! terms as big integers, rounding once at the end.

use std::f64::consts::{LN_2, PI};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::distribution::{DistributionKind, PhaseDistribution, PhaseGrid};
use crate::error::{PhaseError, Result};
use crate::fock::{check_cutoffs, phase_conjugate, trace_product, DensityMatrix, Matrix, OperatorMatrix};
use crate::special::{ln_factorial, ln_gamma, CompensatedSum};

/// Largest cutoff the operator path accepts unless explicitly overridden.
pub const OPERATOR_MAX_CUTOFF: usize = 40;

const HERMITICITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Accumulation {
    /// Integer accumulation of the cleared sum; one rounding per element.
    #[default]
    Exact,
    /// Log-Γ coefficients with explicit sign, compensated `f64` summation in
    /// ascending `l`, then `m`.
    Float,
}

/// One matrix element of `ρ_W(0)` and the number of `(m, n, l)` terms summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementSum {
    pub value: f64,
    pub terms: usize,
}

/// Range of `l` with a non-empty `(m, n)` support for element `(j, k)`.
fn l_range(j: usize, k: usize) -> std::ops::RangeInclusive<usize> {
    k.saturating_sub(j)..=k
}

pub fn rho_w_zero_element(j: usize, k: usize, accumulation: Accumulation) -> ElementSum {
    match accumulation {
        Accumulation::Float => FloatTables::new(j.max(k)).element(j, k),
        Accumulation::Exact => ExactTables::new(j.max(k)).element(j, k),
    }
}

/// `ln n!` and `ln Γ(n/2 + 1)` for `n ≤ 2·cutoff`.
struct FloatTables {
    ln_fact: Vec<f64>,
    ln_gamma_half: Vec<f64>,
}

impl FloatTables {
    fn new(cutoff: usize) -> Self {
        let len = 2 * cutoff + 1;
        Self {
            ln_fact: (0..len).map(ln_factorial).collect(),
            ln_gamma_half: (0..len).map(|n| ln_gamma(0.5 * n as f64 + 1.0)).collect(),
        }
    }

    fn element(&self, j: usize, k: usize) -> ElementSum {
        let lf = &self.ln_fact;
        let mut acc = CompensatedSum::new();
        let mut terms = 0;
        let ln_2pi = (2.0 * PI).ln();
        for l in l_range(j, k) {
            let n = j + 2 * l - k;
            let base = 0.5 * n as f64 * LN_2 + self.ln_gamma_half[n] - ln_2pi - lf[n - l] - lf[l]
                + 0.5 * (lf[j] + lf[k]);
            for m in 0..=k - l {
                let rest = k - m - l; // = j − m − n + l
                let mag = (base + m as f64 * LN_2 - lf[m] - lf[rest]).exp();
                acc.add(if m % 2 == 0 { mag } else { -mag });
                terms += 1;
            }
        }
        ElementSum { value: acc.value(), terms }
    }
}

/// Factorials and `g(n) = 2^{n/2} Γ(n/2+1) / c_n` as big integers, where
/// `c_n = 1` for even `n` and `sqrt(π/2)` for odd `n`: `g(2t) = 2^t t!` and
/// `g(n) = n!!` for odd `n`.
struct ExactTables {
    fact: Vec<BigInt>,
    g: Vec<BigInt>,
}

impl ExactTables {
    fn new(cutoff: usize) -> Self {
        let mut fact = vec![BigInt::one()];
        for i in 1..=cutoff {
            let next = &fact[i - 1] * i;
            fact.push(next);
        }
        let mut g: Vec<BigInt> = Vec::with_capacity(2 * cutoff + 1);
        for n in 0..=2 * cutoff {
            let v = if n < 2 { BigInt::one() } else { &g[n - 2] * n };
            g.push(v);
        }
        Self { fact, g }
    }

    /// `ρ_W(0)_jk = c · S / (2π sqrt(j! k!))` with the integer
    /// `S = Σ_{l,m} (−2)^m g(n) · k!/(m! l! (k−m−l)!) · j!/(n−l)!`.
    fn element(&self, j: usize, k: usize) -> ElementSum {
        let mut sum = BigInt::zero();
        let mut terms = 0;
        for l in l_range(j, k) {
            let n = j + 2 * l - k;
            let binom_kl = &self.fact[k] / (&self.fact[l] * &self.fact[k - l]);
            let falling = &self.fact[j] / &self.fact[n - l];
            let mut term = &self.g[n] * binom_kl * falling;
            let free = k - l;
            for m in 0..=free {
                sum += &term;
                terms += 1;
                if m < free {
                    term *= -2 * (free - m) as i64;
                    term /= (m + 1) as i64;
                }
            }
        }
        let parity = if (j + k).is_multiple_of(2) { 1.0 } else { (PI / 2.0).sqrt() };
        let den = &self.fact[j] * &self.fact[k];
        let value = parity * signed_sqrt_ratio(&sum, &den) / (2.0 * PI);
        ElementSum { value, terms }
    }
}

/// `S / sqrt(den)` for big integers, correctly rounded to a few ulps.
fn signed_sqrt_ratio(s: &BigInt, den: &BigInt) -> f64 {
    if s.is_zero() {
        return 0.0;
    }
    let num = s * s;
    let mut shift = den.bits() as i64 - num.bits() as i64 + 120;
    let q = if shift > 0 {
        shift += shift & 1;
        (num << shift as usize) / den
    } else {
        shift = 0;
        num / den
    };
    let mag = libm::ldexp(q.to_f64().expect("finite quotient").sqrt(), -(shift / 2) as i32);
    if s.is_negative() { -mag } else { mag }
}

/// `ρ_W(0)` with exact accumulation.
pub fn rho_w_zero(cutoff: usize) -> Result<OperatorMatrix> {
    rho_w_zero_with(cutoff, Accumulation::Exact)
}

/// `ρ_W(0)` with the chosen accumulation. Fails with
/// [`PhaseError::CancellationOverflow`] if the result is not Hermitian within 1e-9.
pub fn rho_w_zero_with(cutoff: usize, accumulation: Accumulation) -> Result<OperatorMatrix> {
    let dim = cutoff + 1;
    let mut values = vec![0.0; dim * dim];
    let mut counts = vec![0usize; dim * dim];
    let (exact, float) = match accumulation {
        Accumulation::Exact => (Some(ExactTables::new(cutoff)), None),
        Accumulation::Float => (None, Some(FloatTables::new(cutoff))),
    };
    for j in 0..dim {
        for k in 0..dim {
            let e = match (&exact, &float) {
                (Some(t), _) => t.element(j, k),
                (_, Some(t)) => t.element(j, k),
                _ => unreachable!(),
            };
            values[j * dim + k] = e.value;
            counts[j * dim + k] = e.terms;
        }
    }

    let mut worst = (0.0, 0, 0);
    for j in 0..dim {
        for k in j + 1..dim {
            let dev = (values[j * dim + k] - values[k * dim + j]).abs();
            if dev.is_nan() || dev > worst.0 {
                worst = (dev, j, k);
            }
        }
    }
    let (deviation, row, col) = worst;
    if deviation.is_nan() || deviation > HERMITICITY_TOLERANCE || values.iter().any(|v| !v.is_finite()) {
        return Err(PhaseError::CancellationOverflow {
            cutoff,
            row,
            col,
            deviation,
            terms: counts[row * dim + col],
        });
    }
    let m = Matrix::from_fn(dim, dim, |j, k| values[j * dim + k].into());
    Ok(OperatorMatrix::new_unchecked(m, true))
}

/// `ρ_W(θ)` family evaluated by conjugating a cached `ρ_W(0)`.
#[derive(Debug, Clone)]
pub struct WignerPhaseOperator {
    zero: OperatorMatrix,
}

impl WignerPhaseOperator {
    pub fn new(cutoff: usize) -> Result<Self> {
        Self::with_accumulation(cutoff, Accumulation::Exact)
    }

    pub fn with_accumulation(cutoff: usize, accumulation: Accumulation) -> Result<Self> {
        Ok(Self { zero: rho_w_zero_with(cutoff, accumulation)? })
    }

    pub fn cutoff(&self) -> usize {
        self.zero.cutoff()
    }

    pub fn zero(&self) -> &OperatorMatrix {
        &self.zero
    }

    /// `e^{iNθ} ρ_W(0) e^{−iNθ}`.
    pub fn at(&self, theta: f64) -> OperatorMatrix {
        phase_conjugate(&self.zero, theta)
    }
}

pub fn rho_w(theta: f64, cutoff: usize) -> Result<OperatorMatrix> {
    Ok(WignerPhaseOperator::new(cutoff)?.at(theta))
}

/// Settings for the trace route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorPath {
    pub max_cutoff: usize,
    pub accumulation: Accumulation,
}

impl Default for OperatorPath {
    fn default() -> Self {
        Self { max_cutoff: OPERATOR_MAX_CUTOFF, accumulation: Accumulation::Exact }
    }
}

impl OperatorPath {
    pub fn check_range(&self, cutoff: usize) -> Result<()> {
        if cutoff > self.max_cutoff {
            return Err(PhaseError::PathUnavailable { cutoff, max: self.max_cutoff });
        }
        Ok(())
    }

    pub fn operator(&self, cutoff: usize) -> Result<WignerPhaseOperator> {
        self.check_range(cutoff)?;
        WignerPhaseOperator::with_accumulation(cutoff, self.accumulation)
    }
}

/// `P^W(θ_i) = Re Tr[ρ ρ_W(θ_i)]` with the default path settings.
pub fn phase_distribution_operator(rho: &DensityMatrix, grid: &PhaseGrid) -> Result<PhaseDistribution> {
    phase_distribution_operator_with(rho, grid, &OperatorPath::default())
}

pub fn phase_distribution_operator_with(
    rho: &DensityMatrix,
    grid: &PhaseGrid,
    path: &OperatorPath,
) -> Result<PhaseDistribution> {
    let op = path.operator(rho.cutoff())?;
    trace_distribution(rho, grid, &op)
}

/// Trace route against an already built operator family.
pub fn trace_distribution(
    rho: &DensityMatrix,
    grid: &PhaseGrid,
    op: &WignerPhaseOperator,
) -> Result<PhaseDistribution> {
    check_cutoffs(op.cutoff(), rho.cutoff())?;
    let mut values = Vec::with_capacity(grid.count());
    for theta in grid.samples() {
        let t = trace_product(rho.matrix(), op.at(theta).matrix());
        if t.im.abs() > 1e-8 {
            return Err(PhaseError::Validation(format!(
                "Tr[rho rho_W({theta})] has imaginary part {:e}",
                t.im
            )));
        }
        values.push(t.re);
    }
    Ok(PhaseDistribution::new(*grid, values, DistributionKind::WignerOperator))
}

/// `2^n n! / sqrt((2n)!)`, the harmonic weight of `P^W` for `(|0⟩ + |2n⟩)/√2`.
pub fn pair_state_coefficient(n: usize) -> f64 {
    (n as f64 * LN_2 + ln_factorial(n) - 0.5 * ln_factorial(2 * n)).exp()
}

/// `(1/2π)[1 + 2^n n!/sqrt((2n)!) cos(2nθ)]` for `(|0⟩ + |2n⟩)/√2`.
pub fn closed_form_pair_state(n: usize, grid: &PhaseGrid) -> PhaseDistribution {
    assert!(n >= 1, "pair state needs n >= 1");
    let coeff = pair_state_coefficient(n);
    PhaseDistribution::from_fn(*grid, DistributionKind::ClosedForm, |t| {
        (1.0 + coeff * (2.0 * n as f64 * t).cos()) / (2.0 * PI)
    })
}
