//! Sampled potentials on the half-line and the grid utilities shared by
//! every solver.
//!
//! A potential is stored as node values and treated as piecewise linear
//! between nodes, so cumulative integrals of `q`, `s q(s)` and `|q|` are
//! evaluated in closed form per segment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Decay class of a sampled potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    /// q(x) = 0 for x > support_radius.
    Compact,
    /// Integrable with weight (1+x); the usual scattering class.
    L11,
    /// Grows at infinity (purely discrete spectrum).
    Confining,
}

/// Cap on the discrete weighted norm used to certify the L11 class.
pub const L11_NORM_CAP: f64 = 1.0e6;

/// Real potential sampled on strictly increasing abscissas starting at 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialGrid {
    pub xs: Vec<f64>,
    pub qs: Vec<f64>,
    pub support_radius: Option<f64>,
    pub decay_class: DecayClass,
}

impl PotentialGrid {
    pub fn new(
        xs: Vec<f64>,
        qs: Vec<f64>,
        support_radius: Option<f64>,
        decay_class: DecayClass,
    ) -> Result<Self> {
        if xs.len() < 2 || xs.len() != qs.len() {
            return Err(Error::MalformedGrid(format!(
                "need matching xs/qs with at least 2 nodes, got {} and {}",
                xs.len(),
                qs.len()
            )));
        }
        if xs[0] != 0.0 {
            return Err(Error::MalformedGrid(format!(
                "xs must start at 0, got {}",
                xs[0]
            )));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::MalformedGrid(
                "xs must be strictly increasing".into(),
            ));
        }
        if qs.iter().any(|q| !q.is_finite()) {
            return Err(Error::MalformedGrid("qs must be finite".into()));
        }
        let grid = Self {
            xs,
            qs,
            support_radius,
            decay_class,
        };
        match decay_class {
            DecayClass::Compact => {
                let a = support_radius.ok_or_else(|| {
                    Error::MalformedGrid("compact potential needs a support radius".into())
                })?;
                if a <= 0.0 {
                    return Err(Error::MalformedGrid(
                        "support radius must be positive".into(),
                    ));
                }
                for (x, q) in grid.xs.iter().zip(&grid.qs) {
                    if *x > a && *q != 0.0 {
                        return Err(Error::MalformedGrid(format!(
                            "compact potential is nonzero at x = {x} > support radius {a}"
                        )));
                    }
                }
            }
            DecayClass::L11 => {
                let norm = grid.weighted_l1_norm();
                if !norm.is_finite() || norm > L11_NORM_CAP {
                    return Err(Error::MalformedGrid(format!(
                        "weighted norm sum (1+x)|q| dx = {norm:.3e} exceeds cap {L11_NORM_CAP:.1e}"
                    )));
                }
            }
            DecayClass::Confining => {}
        }
        Ok(grid)
    }

    /// Uniformly sampled potential built from a closure.
    pub fn from_fn(
        f: impl Fn(f64) -> f64,
        x_max: f64,
        n: usize,
        support_radius: Option<f64>,
        decay_class: DecayClass,
    ) -> Result<Self> {
        let xs: Vec<f64> = (0..=n).map(|i| x_max * i as f64 / n as f64).collect();
        let qs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, qs, support_radius, decay_class)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    pub fn max_abs(&self) -> f64 {
        self.qs.iter().fold(0.0_f64, |m, q| m.max(q.abs()))
    }

    /// Discrete version of the weighted norm defining the L11 class.
    pub fn weighted_l1_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 1..self.xs.len() {
            let dx = self.xs[i] - self.xs[i - 1];
            let w0 = (1.0 + self.xs[i - 1]) * self.qs[i - 1].abs();
            let w1 = (1.0 + self.xs[i]) * self.qs[i].abs();
            sum += 0.5 * (w0 + w1) * dx;
        }
        sum
    }

    /// Piecewise-linear interpolant; zero beyond the last node.
    pub fn value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.qs[0];
        }
        if x >= self.x_max() {
            return if self.decay_class == DecayClass::Confining {
                *self.qs.last().unwrap()
            } else {
                0.0
            };
        }
        let i = self.segment(x);
        let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.qs[i] * (1.0 - t) + self.qs[i + 1] * t
    }

    fn segment(&self, x: f64) -> usize {
        match self
            .xs
            .binary_search_by(|v| v.partial_cmp(&x).expect("finite grid"))
        {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        }
    }

    /// Exact integral of the piecewise-linear interpolant over [0, x].
    pub fn integral_to(&self, x: f64) -> f64 {
        self.integral_weighted(x, |_| 1.0)
    }

    /// Exact integral of s*q(s) over [0, x] for the interpolant.
    pub fn first_moment_to(&self, x: f64) -> f64 {
        let x = x.min(self.x_max());
        let mut sum = 0.0;
        for i in 1..self.xs.len() {
            let (x0, x1) = (self.xs[i - 1], self.xs[i]);
            if x0 >= x {
                break;
            }
            let hi = x1.min(x);
            let (q0, q1) = (self.qs[i - 1], self.qs[i]);
            let slope = (q1 - q0) / (x1 - x0);
            // integral of s*(q0 + slope*(s - x0)) over [x0, hi]
            let a = q0 - slope * x0;
            sum += a * (hi * hi - x0 * x0) / 2.0 + slope * (hi * hi * hi - x0 * x0 * x0) / 3.0;
        }
        sum
    }

    fn integral_weighted(&self, x: f64, w: impl Fn(f64) -> f64) -> f64 {
        let x = x.min(self.x_max());
        let mut sum = 0.0;
        for i in 1..self.xs.len() {
            let (x0, x1) = (self.xs[i - 1], self.xs[i]);
            if x0 >= x {
                break;
            }
            let hi = x1.min(x);
            let q0 = self.qs[i - 1];
            let qh = self.value(hi);
            sum += 0.5 * (w(x0) * q0 + w(hi) * qh) * (hi - x0);
        }
        sum
    }

    /// sigma(x) = integral of |q| over [x, infinity), for the interpolant.
    pub fn abs_tail_integral(&self, x: f64) -> f64 {
        let mut total = 0.0;
        let mut from = x.max(0.0);
        for i in 1..self.xs.len() {
            let (x0, x1) = (self.xs[i - 1], self.xs[i]);
            if x1 <= from {
                continue;
            }
            let lo = x0.max(from);
            let qlo = self.value(lo).abs();
            let q1 = self.qs[i].abs();
            total += 0.5 * (qlo + q1) * (x1 - lo);
            from = x1;
        }
        total
    }

    /// Resample onto a uniform grid with `n` panels over [0, x_max].
    pub fn resample_uniform(&self, x_max: f64, n: usize) -> Result<Self> {
        let xs: Vec<f64> = (0..=n).map(|i| x_max * i as f64 / n as f64).collect();
        let qs: Vec<f64> = xs.iter().map(|&x| self.value(x)).collect();
        Self::new(xs, qs, self.support_radius, self.decay_class)
    }
}

/// Uniform grid helper: n+1 nodes spanning [0, x_max].
pub fn uniform_grid(x_max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| x_max * i as f64 / n as f64).collect()
}

/// Uniform grid from `start` with step `h` and `n` nodes.
pub fn uniform_from(start: f64, h: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| start + h * i as f64).collect()
}

/// Step of a uniform grid; error if the grid is visibly nonuniform.
pub fn uniform_step(xs: &[f64]) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::MalformedGrid("grid needs at least 2 nodes".into()));
    }
    let h = xs[1] - xs[0];
    if h <= 0.0 {
        return Err(Error::MalformedGrid("grid must be increasing".into()));
    }
    for w in xs.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0) {
            return Err(Error::MalformedGrid(format!(
                "grid is not uniform: step {} vs {}",
                w[1] - w[0],
                h
            )));
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonincreasing_and_offset_grids() {
        assert!(PotentialGrid::new(vec![0.0, 1.0, 1.0], vec![0.0; 3], None, DecayClass::L11).is_err());
        assert!(PotentialGrid::new(vec![0.5, 1.0], vec![0.0; 2], None, DecayClass::L11).is_err());
    }

    #[test]
    fn compact_class_enforces_zero_tail() {
        let bad = PotentialGrid::new(
            vec![0.0, 1.0, 2.0],
            vec![1.0, 1.0, 1.0],
            Some(1.0),
            DecayClass::Compact,
        );
        assert!(bad.is_err());
        let ok = PotentialGrid::new(
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 0.0],
            Some(1.0),
            DecayClass::Compact,
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn piecewise_linear_integrals_are_exact() {
        // q(s) = s on [0, 2]: integral = x^2/2, first moment = x^3/3.
        let q = PotentialGrid::from_fn(|x| x, 2.0, 100, None, DecayClass::Confining).unwrap();
        assert!((q.integral_to(1.5) - 1.125).abs() < 1e-12);
        assert!((q.first_moment_to(1.5) - 1.5f64.powi(3) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tail_integral_matches_closed_form() {
        // q = -2 sech^2 x: integral of |q| over [x, inf) = 2(1 - tanh x) for the
        // exact function; the interpolant agrees to second order.
        let q = PotentialGrid::from_fn(
            |x| -2.0 / x.cosh().powi(2),
            20.0,
            4000,
            None,
            DecayClass::L11,
        )
        .unwrap();
        let got = q.abs_tail_integral(1.0);
        let want = 2.0 * (1.0 - 1.0f64.tanh());
        assert!((got - want).abs() < 1e-5, "got {got}, want {want}");
    }
}
