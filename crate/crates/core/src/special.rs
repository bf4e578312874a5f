//! Special functions and small numerical helpers shared by the other modules.

use std::f64::consts::PI;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// Neumaier's variant of Kahan compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        iter.into_iter().for_each(|x| acc.add(x));
        acc
    }
}

/// Closed form of `∫_{θ0}^{θ0+2π} θ^p e^{iqθ} dθ`.
///
/// For `q ≠ 0` repeated integration by parts gives
/// `I_p = e^{iqθ0} ((θ0+2π)^p − θ0^p) / (iq) − (p / iq) I_{p−1}` with `I_0 = 0`.
pub fn fourier_power_integral(p: u32, q: i64, theta0: f64) -> Complex64 {
    let upper = theta0 + 2.0 * PI;
    if q == 0 {
        let k = p as i32 + 1;
        return Complex64::new((upper.powi(k) - theta0.powi(k)) / k as f64, 0.0);
    }
    let iq = Complex64::new(0.0, q as f64);
    let boundary = Complex64::from_polar(1.0, q as f64 * theta0);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..=p {
        let jump = upper.powi(k as i32) - theta0.powi(k as i32);
        acc = (boundary * jump - acc * k as f64) / iq;
    }
    acc
}

/// Composite Gauss–Legendre rule on `[a, b]` with `panels` equal panels of `order` points.
pub fn gauss_legendre_panels(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussLegendre::new(order.max(2)).expect("order >= 2");
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        for &(x, w) in rule.as_node_weight_pairs() {
            nodes.push(mid + 0.5 * width * x);
            weights.push(0.5 * width * w);
        }
    }
    (nodes, weights)
}

/// Wraps an angle into `[θ0, θ0 + 2π)`.
pub fn wrap_angle(theta: f64, theta0: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = (theta - theta0).rem_euclid(two_pi);
    if t >= two_pi {
        t -= two_pi;
    }
    theta0 + t
}
