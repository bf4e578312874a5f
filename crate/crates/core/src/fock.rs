//! Truncated Fock-space representation: states, ladder operators, density
//! matrices, expectations and the exact phase-shift conjugation
//! `e^{iNθ} A e^{−iNθ}`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{PhaseError, Result};
use crate::special::ln_factorial;

pub type Matrix = DMatrix<Complex64>;

/// Default tolerated tail mass for truncated coherent states.
pub const DEFAULT_EPS_TAIL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Normalized pure state with amplitudes `c_0..=c_cutoff` in the Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    tail_mass: f64,
}

impl StateVector {
    /// Normalizes the given amplitudes. Fails if the vector is numerically zero.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        Self::with_tail(amps, 0.0)
    }

    fn with_tail(mut amps: Vec<Complex64>, tail_mass: f64) -> Result<Self> {
        if amps.is_empty() {
            return Err(PhaseError::Parse("state needs at least one amplitude".into()));
        }
        let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= 1e-12 {
            return Err(PhaseError::DegenerateSuperposition { norm });
        }
        // leave vectors that are normalized up to rounding untouched
        if (norm - 1.0).abs() > 2.0 * f64::EPSILON {
            amps.iter_mut().for_each(|c| *c /= norm);
        }
        Ok(Self { amps, tail_mass })
    }

    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amps.get(n).copied().unwrap_or(ZERO)
    }

    /// Probability mass discarded by the truncation, before renormalization.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`; states may have different cutoffs.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `e^{iNφ}|ψ⟩`, i.e. `c_n → e^{inφ} c_n`.
    pub fn phase_shifted(&self, phi: f64) -> StateVector {
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(n, &c)| c * Complex64::from_polar(1.0, n as f64 * phi))
            .collect();
        StateVector { amps, tail_mass: self.tail_mass }
    }

    /// Zero-pads to a larger cutoff. Shrinking is refused if it would drop weight.
    pub fn with_cutoff(&self, cutoff: usize) -> Result<StateVector> {
        if cutoff < self.cutoff() {
            let dropped: f64 = self.amps[cutoff + 1..].iter().map(|c| c.norm_sqr()).sum();
            if dropped > 1e-14 {
                return Err(PhaseError::CutoffTooSmall {
                    cutoff,
                    suggested: self.cutoff(),
                    reason: format!("state carries weight {dropped:e} above the cutoff"),
                });
            }
        }
        let mut amps = self.amps.clone();
        amps.resize(cutoff + 1, ZERO);
        Ok(StateVector { amps, tail_mass: self.tail_mass })
    }
}

/// `|n⟩` embedded at the given cutoff.
pub fn number_state(n: usize, cutoff: usize) -> Result<StateVector> {
    if n > cutoff {
        return Err(PhaseError::CutoffTooSmall {
            cutoff,
            suggested: n,
            reason: format!("number state |{n}> does not fit"),
        });
    }
    let mut amps = vec![ZERO; cutoff + 1];
    amps[n] = ONE;
    Ok(StateVector { amps, tail_mass: 0.0 })
}

/// Poisson mass `Σ_{n>cutoff} e^{−μ} μ^n / n!`, summed directly in log space.
pub fn poisson_tail(mean: f64, cutoff: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let ln_mean = mean.ln();
    let mut tail = 0.0;
    let mut n = cutoff + 1;
    loop {
        let term = (-mean + n as f64 * ln_mean - ln_factorial(n)).exp();
        tail += term;
        if n as f64 > mean && term <= tail * 1e-17 {
            break;
        }
        n += 1;
    }
    tail
}

/// Smallest cutoff whose Poisson tail for the given mean is below `eps_tail`.
pub fn minimal_cutoff(mean: f64, eps_tail: f64) -> usize {
    let mut cutoff = mean.floor() as usize;
    while poisson_tail(mean, cutoff) >= eps_tail {
        cutoff += 1;
    }
    cutoff
}

/// Truncated coherent state `|α⟩`, renormalized on the truncated space.
///
/// Amplitudes are evaluated as `exp(−|α|²/2 + n ln|α| − ½ ln n!)` so that large
/// `|α|` and `n` do not overflow.
pub fn coherent_state(alpha: Complex64, cutoff: usize, eps_tail: f64) -> Result<StateVector> {
    let mean = alpha.norm_sqr();
    let tail = poisson_tail(mean, cutoff);
    if tail >= eps_tail {
        return Err(PhaseError::CutoffTooSmall {
            cutoff,
            suggested: minimal_cutoff(mean, eps_tail),
            reason: format!("coherent state alpha={alpha} leaves tail mass {tail:e} >= {eps_tail:e}"),
        });
    }
    if mean == 0.0 {
        return number_state(0, cutoff);
    }
    let (modulus, phase) = alpha.to_polar();
    let ln_mod = modulus.ln();
    let amps = (0..=cutoff)
        .map(|n| {
            let ln_amp = -0.5 * mean + n as f64 * ln_mod - 0.5 * ln_factorial(n);
            Complex64::from_polar(ln_amp.exp(), n as f64 * phase)
        })
        .collect();
    StateVector::with_tail(amps, tail)
}

/// Result of [`superpose`]: the normalized state and the constant `c` that
/// normalizes the raw weighted sum.
#[derive(Debug, Clone)]
pub struct Superposition {
    pub state: StateVector,
    pub normalization: f64,
}

/// Normalized `c Σ_i w_i |ψ_i⟩`.
pub fn superpose(terms: &[(Complex64, &StateVector)]) -> Result<Superposition> {
    let first = terms
        .first()
        .ok_or_else(|| PhaseError::Parse("superposition needs at least one term".into()))?;
    let cutoff = first.1.cutoff();
    let mut amps = vec![ZERO; cutoff + 1];
    let mut tail: f64 = 0.0;
    for (w, s) in terms {
        if s.cutoff() != cutoff {
            return Err(PhaseError::CutoffMismatch { left: cutoff, right: s.cutoff() });
        }
        for (a, c) in amps.iter_mut().zip(s.amplitudes()) {
            *a += w * c;
        }
        tail = tail.max(s.tail_mass());
    }
    let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let state = StateVector::with_tail(amps, tail)?;
    Ok(Superposition { state, normalization: 1.0 / norm })
}

/// Hermitian, unit-trace, positive semidefinite matrix on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    elems: Matrix,
}

impl DensityMatrix {
    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        Self { elems: &v * v.adjoint() }
    }

    /// Validates a general matrix: Hermitian within 1e-12, trace 1 within 1e-10,
    /// no eigenvalue below −1e-10.
    pub fn from_matrix(elems: Matrix) -> Result<Self> {
        if !elems.is_square() || elems.nrows() == 0 {
            return Err(PhaseError::InvalidDensity("matrix must be square and non-empty".into()));
        }
        let dev = hermiticity_deviation(&elems);
        if dev > 1e-12 {
            return Err(PhaseError::InvalidDensity(format!("not hermitian (deviation {dev:e})")));
        }
        let tr = elems.trace();
        if (tr - ONE).norm() > 1e-10 {
            return Err(PhaseError::InvalidDensity(format!("trace {tr} != 1")));
        }
        let rho = Self { elems };
        let min = rho.min_eigenvalue();
        if min < -1e-10 {
            return Err(PhaseError::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub fn cutoff(&self) -> usize {
        self.elems.nrows() - 1
    }

    pub fn matrix(&self) -> &Matrix {
        &self.elems
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.elems[(j, k)]
    }

    /// `e^{iNφ} ρ e^{−iNφ}`.
    pub fn phase_shifted(&self, phi: f64) -> DensityMatrix {
        Self { elems: conjugate_elements(&self.elems, phi) }
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.elems)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// General complex matrix on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    elems: Matrix,
    hermitian_hint: bool,
}

impl OperatorMatrix {
    /// Wraps a matrix; with `hermitian_hint` the matrix must be Hermitian within 1e-10.
    pub fn new(elems: Matrix, hermitian_hint: bool) -> Result<Self> {
        if !elems.is_square() || elems.nrows() == 0 {
            return Err(PhaseError::Validation("operator matrix must be square and non-empty".into()));
        }
        if hermitian_hint {
            let dev = hermiticity_deviation(&elems);
            if dev > 1e-10 {
                return Err(PhaseError::Validation(format!(
                    "operator flagged hermitian deviates by {dev:e}"
                )));
            }
        }
        Ok(Self { elems, hermitian_hint })
    }

    pub(crate) fn new_unchecked(elems: Matrix, hermitian_hint: bool) -> Self {
        Self { elems, hermitian_hint }
    }

    pub fn identity(cutoff: usize) -> Self {
        Self { elems: Matrix::identity(cutoff + 1, cutoff + 1), hermitian_hint: true }
    }

    pub fn cutoff(&self) -> usize {
        self.elems.nrows() - 1
    }

    pub fn matrix(&self) -> &Matrix {
        &self.elems
    }

    pub fn into_matrix(self) -> Matrix {
        self.elems
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.elems[(j, k)]
    }

    pub fn hermitian_hint(&self) -> bool {
        self.hermitian_hint
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.elems)
    }

    /// Ascending eigenvalues of the Hermitian part `(A + A†)/2`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.elems + self.elems.adjoint()).scale(0.5);
        hermitian_eigenvalues(&h)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// `A^p` by repeated multiplication (`p = 0` gives the identity).
    pub fn pow(&self, p: u32) -> OperatorMatrix {
        let n = self.elems.nrows();
        let mut acc = Matrix::identity(n, n);
        for _ in 0..p {
            acc = &acc * &self.elems;
        }
        Self { elems: acc, hermitian_hint: self.hermitian_hint }
    }

    pub fn mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        check_cutoffs(self.cutoff(), other.cutoff())?;
        Ok(Self { elems: &self.elems * &other.elems, hermitian_hint: false })
    }
}

/// Truncated annihilation, creation and number operators.
#[derive(Debug, Clone)]
pub struct LadderSet {
    pub a: OperatorMatrix,
    pub a_dag: OperatorMatrix,
    pub n_op: OperatorMatrix,
}

pub fn ladder_matrices(cutoff: usize) -> LadderSet {
    let dim = cutoff + 1;
    let a = Matrix::from_fn(dim, dim, |j, k| {
        if k == j + 1 {
            Complex64::new((k as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let a_dag = a.adjoint();
    let n_op = &a_dag * &a;
    LadderSet {
        a: OperatorMatrix::new_unchecked(a, false),
        a_dag: OperatorMatrix::new_unchecked(a_dag, false),
        n_op: OperatorMatrix::new_unchecked(n_op, true),
    }
}

/// `e^{iNθ} A e^{−iNθ}`, evaluated element-wise as `B_jk = e^{i(j−k)θ} A_jk`.
pub fn phase_conjugate(op: &OperatorMatrix, theta: f64) -> OperatorMatrix {
    OperatorMatrix {
        elems: conjugate_elements(&op.elems, theta),
        hermitian_hint: op.hermitian_hint,
    }
}

fn conjugate_elements(m: &Matrix, theta: f64) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |j, k| {
        let d = j as f64 - k as f64;
        m[(j, k)] * Complex64::from_polar(1.0, d * theta)
    })
}

/// `Tr[ρ A]`.
pub fn expectation(op: &OperatorMatrix, rho: &DensityMatrix) -> Result<Complex64> {
    check_cutoffs(op.cutoff(), rho.cutoff())?;
    Ok(trace_product(&rho.elems, &op.elems))
}

/// `Tr[X Y] = Σ_jk X_jk Y_kj` without forming the product.
pub(crate) fn trace_product(x: &Matrix, y: &Matrix) -> Complex64 {
    let n = x.nrows();
    let mut acc = ZERO;
    for j in 0..n {
        for k in 0..n {
            acc += x[(j, k)] * y[(k, j)];
        }
    }
    acc
}

pub(crate) fn check_cutoffs(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(PhaseError::CutoffMismatch { left, right });
    }
    Ok(())
}

/// `max_jk |A_jk − conj(A_kj)|`.
pub fn hermiticity_deviation(m: &Matrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for k in j..n {
            worst = worst.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    worst
}

fn hermitian_eigenvalues(m: &Matrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn number_states() {
        let s = number_state(0, 4).unwrap();
        assert_eq!(s.amplitudes(), &[ONE, ZERO, ZERO, ZERO, ZERO]);
        let s = number_state(2, 4).unwrap();
        assert_eq!(s.amplitudes(), &[ZERO, ZERO, ONE, ZERO, ZERO]);
        assert!(matches!(number_state(5, 4), Err(PhaseError::CutoffTooSmall { .. })));
    }

    #[test]
    fn coherent_vacuum_and_unit() {
        let s = coherent_state(ZERO, 3, DEFAULT_EPS_TAIL).unwrap();
        assert_eq!(s.amplitudes(), &[ONE, ZERO, ZERO, ZERO]);

        let s = coherent_state(c(1.0), 30, DEFAULT_EPS_TAIL).unwrap();
        assert!((s.amplitude(0).re - (-0.5f64).exp()).abs() < 1e-12);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coherent_cutoff_too_small() {
        // Poisson(64) tail beyond 40 by direct summation of the pmf
        let direct: f64 = (41..400)
            .map(|n| (-64.0 + n as f64 * 64f64.ln() - ln_factorial(n)).exp())
            .sum();
        assert!(direct > 0.99);
        match coherent_state(c(8.0), 40, DEFAULT_EPS_TAIL) {
            Err(PhaseError::CutoffTooSmall { suggested, .. }) => {
                assert!(suggested > 64 && suggested < 160, "{suggested}");
                assert!(poisson_tail(64.0, suggested) < DEFAULT_EPS_TAIL);
                assert!(poisson_tail(64.0, suggested - 1) >= DEFAULT_EPS_TAIL);
            }
            other => panic!("expected error, got {other:?}"),
        }
    }

    #[test]
    fn large_coherent_amplitudes_are_finite() {
        let s = coherent_state(c(8.0), 160, DEFAULT_EPS_TAIL).unwrap();
        assert!(s.amplitudes().iter().all(|a| a.re.is_finite()));
        let mean: f64 = s
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum();
        assert!((mean - 64.0).abs() < 1e-8);
    }

    #[test]
    fn superpositions() {
        let s0 = number_state(0, 4).unwrap();
        let s2 = number_state(2, 4).unwrap();
        let sup = superpose(&[(ONE, &s0), (ONE, &s2)]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((sup.state.amplitude(0).re - h).abs() < 1e-15);
        assert!((sup.state.amplitude(2).re - h).abs() < 1e-15);
        assert!((sup.normalization - h).abs() < 1e-15);

        assert!(matches!(
            superpose(&[(ONE, &s0), (-ONE, &s0)]),
            Err(PhaseError::DegenerateSuperposition { .. })
        ));
    }

    #[test]
    fn cat_normalization_constant() {
        let a = coherent_state(c(-2.0), 150, DEFAULT_EPS_TAIL).unwrap();
        let b = coherent_state(c(8.0), 150, DEFAULT_EPS_TAIL).unwrap();
        // ⟨α|β⟩ = e^{−50} by direct amplitude inner product
        let overlap = a.inner(&b);
        assert!(overlap.norm() < 1e-20);
        let sup = superpose(&[(ONE, &a), (ONE, &b)]).unwrap();
        assert!((sup.normalization - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn ladder_entries() {
        let l = ladder_matrices(2);
        assert_eq!(l.a.get(0, 1), ONE);
        assert!((l.a.get(1, 2).re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(l.a.get(1, 0), ZERO);
        assert_eq!(l.a_dag.matrix(), &l.a.matrix().adjoint());
        for j in 0..3 {
            for k in 0..3 {
                let expect = if j == k { j as f64 } else { 0.0 };
                assert!((l.n_op.get(j, k) - c(expect)).norm() < 1e-15);
            }
        }
        let comm = l.a.matrix() * l.a_dag.matrix() - l.a_dag.matrix() * l.a.matrix();
        let diag: Vec<f64> = (0..3).map(|j| comm[(j, j)].re).collect();
        assert!((diag[0] - 1.0).abs() < 1e-14);
        assert!((diag[1] - 1.0).abs() < 1e-14);
        assert!((diag[2] + 2.0).abs() < 1e-14);
    }

    #[test]
    fn conjugation_examples() {
        let mut m = Matrix::zeros(3, 3);
        m[(0, 2)] = ONE;
        m[(1, 1)] = c(3.0);
        let a = OperatorMatrix::new(m.clone(), false).unwrap();
        assert_eq!(phase_conjugate(&a, 0.0).matrix(), &m);
        let b = phase_conjugate(&a, PI / 2.0);
        assert!((b.get(0, 2) - c(-1.0)).norm() < 1e-15);
        assert_eq!(b.get(1, 1), c(3.0));
    }

    #[test]
    fn expectation_examples() {
        let l = ladder_matrices(4);
        let rho = DensityMatrix::from_pure(&number_state(2, 4).unwrap());
        assert!((expectation(&l.n_op, &rho).unwrap() - c(2.0)).norm() < 1e-15);
        assert!((expectation(&OperatorMatrix::identity(4), &rho).unwrap() - ONE).norm() < 1e-15);

        let psi = coherent_state(c(1.0), 30, DEFAULT_EPS_TAIL).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let n = expectation(&ladder_matrices(30).n_op, &rho).unwrap();
        assert!((n.re - 1.0).abs() < 1e-8 && n.im.abs() < 1e-12);

        assert!(matches!(
            expectation(&l.n_op, &DensityMatrix::from_pure(&number_state(0, 3).unwrap())),
            Err(PhaseError::CutoffMismatch { .. })
        ));
    }

    #[test]
    fn pure_density_spectrum() {
        let psi = StateVector::from_amplitudes(vec![c(1.0), Complex64::new(0.3, -0.2), c(0.5)]).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let ev = rho.eigenvalues();
        assert!((ev[2] - 1.0).abs() < 1e-10);
        assert!(ev[..2].iter().all(|e| e.abs() < 1e-10));
        assert!(DensityMatrix::from_matrix(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn invalid_densities_rejected() {
        let mut m = Matrix::identity(2, 2).scale(0.5);
        m[(0, 1)] = c(0.1);
        assert!(DensityMatrix::from_matrix(m.clone()).is_err());
        m[(1, 0)] = c(0.1);
        assert!(DensityMatrix::from_matrix(m.clone()).is_ok());
        m[(0, 1)] = c(0.9);
        m[(1, 0)] = c(0.9);
        assert!(DensityMatrix::from_matrix(m).is_err());
        assert!(DensityMatrix::from_matrix(Matrix::identity(2, 2)).is_err());
    }

    #[test]
    fn padding_and_shrinking() {
        let s = number_state(1, 2).unwrap();
        assert_eq!(s.with_cutoff(5).unwrap().cutoff(), 5);
        assert_eq!(s.with_cutoff(1).unwrap().cutoff(), 1);
        assert!(s.with_cutoff(0).is_err());
    }
}
