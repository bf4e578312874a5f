//! Uniform phase grids and sampled phase distributions.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{PhaseError, Result};

/// `count` uniform samples `θ_i = θ0 + 2πi/count` on `[θ0, θ0 + 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGrid {
    theta0: f64,
    count: usize,
}

impl PhaseGrid {
    pub fn new(theta0: f64, count: usize) -> Result<Self> {
        if count < 4 {
            return Err(PhaseError::Parse(format!("phase grid needs at least 4 samples, got {count}")));
        }
        if !theta0.is_finite() {
            return Err(PhaseError::Parse("theta0 must be finite".into()));
        }
        Ok(Self { theta0, count })
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.count as f64
    }

    pub fn theta(&self, i: usize) -> f64 {
        self.theta0 + 2.0 * PI * i as f64 / self.count as f64
    }

    pub fn samples(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.theta(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    WignerRadial,
    WignerOperator,
    PeggBarnett,
    ClosedForm,
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::WignerRadial => "wigner_radial",
            Self::WignerOperator => "wigner_operator",
            Self::PeggBarnett => "pegg_barnett",
            Self::ClosedForm => "closed_form",
        })
    }
}

/// Density per radian sampled on a [`PhaseGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution {
    pub grid: PhaseGrid,
    pub values: Vec<f64>,
    pub kind: DistributionKind,
}

impl PhaseDistribution {
    pub fn new(grid: PhaseGrid, values: Vec<f64>, kind: DistributionKind) -> Self {
        assert_eq!(grid.count(), values.len(), "one value per grid sample");
        Self { grid, values, kind }
    }

    pub fn from_fn(grid: PhaseGrid, kind: DistributionKind, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.samples().map(f).collect();
        Self { grid, values, kind }
    }

    /// Periodic rectangle rule over one period.
    pub fn integral(&self) -> f64 {
        self.grid.spacing() * self.values.iter().sum::<f64>()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Distribution of the state rotated by `steps` grid spacings: value at
    /// index `i` is taken from index `i − steps` (circularly).
    pub fn translated(&self, steps: isize) -> PhaseDistribution {
        let m = self.values.len() as isize;
        let values = (0..m)
            .map(|i| self.values[(i - steps).rem_euclid(m) as usize])
            .collect();
        Self { grid: self.grid, values, kind: self.kind }
    }

    pub fn max_abs_diff(&self, other: &PhaseDistribution) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
