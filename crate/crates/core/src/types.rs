//! Domain data: scattering data, Jost data, spectral function, I-function
//! and triangular transformation kernels, with JSON-friendly encodings
//! (complex numbers serialize as [re, im] pairs).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serde adapter: Vec<Complex64> as a list of [re, im] pairs.
pub mod complex_pairs {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        Ok(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

/// Scattering data: S(k) on a positive k-grid, bound-state wavenumbers and
/// norming constants, and the winding index of S.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScatteringData {
    pub ks: Vec<f64>,
    #[serde(with = "complex_pairs")]
    pub s: Vec<Complex64>,
    /// bound-state k_j > 0 in ascending order
    pub bound_ks: Vec<f64>,
    /// norming constants s_j > 0, aligned with bound_ks
    pub norming: Vec<f64>,
    pub index: i64,
}

impl ScatteringData {
    pub fn check_shape(&self) -> Result<()> {
        if self.ks.is_empty() || self.ks.len() != self.s.len() {
            return Err(Error::MalformedGrid("ks/s length mismatch".into()));
        }
        if self.ks.windows(2).any(|w| w[1] <= w[0]) || self.ks[0] <= 0.0 {
            return Err(Error::MalformedGrid(
                "ks must be positive and increasing".into(),
            ));
        }
        if self.bound_ks.len() != self.norming.len() {
            return Err(Error::MalformedGrid(
                "bound_ks/norming length mismatch".into(),
            ));
        }
        if self.bound_ks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::MalformedGrid(
                "bound_ks must be strictly ascending".into(),
            ));
        }
        Ok(())
    }

    /// S extended to -k by Schwarz symmetry: S(-k) = conj(S(k)).
    pub fn s_at_neg(&self, i: usize) -> Complex64 {
        self.s[i].conj()
    }
}

/// Jost function data on the real axis plus its bound-state zeros.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JostData {
    pub ks: Vec<f64>,
    #[serde(with = "complex_pairs")]
    pub f: Vec<Complex64>,
    /// boundary derivative f'(0,k); empty when not computed
    #[serde(with = "complex_pairs", default)]
    pub fprime0: Vec<Complex64>,
    /// zeros ik_j stored as k_j > 0, ascending
    pub bound_ks: Vec<f64>,
    /// df/dk at ik_j, aligned with bound_ks
    #[serde(with = "complex_pairs", default)]
    pub fdot_at_bound: Vec<Complex64>,
    /// true when |f| vanishes at k -> 0+
    #[serde(default)]
    pub resonance: bool,
}

impl JostData {
    pub fn has_fprime(&self) -> bool {
        self.fprime0.len() == self.ks.len()
    }

    pub fn modulus_squared(&self) -> Vec<f64> {
        self.f.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// Spectral measure: absolutely continuous density on lambda >= 0 plus
/// discrete weights c_j at lambda = -k_j^2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralFunction {
    pub lambdas: Vec<f64>,
    /// d rho / d lambda on lambdas
    pub density: Vec<f64>,
    /// (-k_j^2, c_j) pairs, eigenvalues ascending
    pub discrete_points: Vec<(f64, f64)>,
}

impl SpectralFunction {
    /// Free density sqrt(lambda)/pi.
    pub fn free_density(lambda: f64) -> f64 {
        lambda.max(0.0).sqrt() / std::f64::consts::PI
    }
}

/// Boundary impedance I(k) = f'(0,k)/f(k) with its poles and residues.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IFunction {
    pub ks: Vec<f64>,
    #[serde(with = "complex_pairs")]
    pub values: Vec<Complex64>,
    /// pole positions ik_j stored as k_j > 0
    pub poles: Vec<f64>,
    /// residues a_j = i r_j, aligned with poles
    #[serde(with = "complex_pairs")]
    pub residues: Vec<Complex64>,
    /// pole at k = 0 present
    pub resonance: bool,
    /// residue at k = 0 when resonance is set
    #[serde(default)]
    pub residue_at_zero: Option<(f64, f64)>,
}

/// Orientation/type tag of a triangular transformation kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    /// A(x,y) on y >= x (maps e^{ikx} to the Jost solution)
    MarchenkoA,
    /// K(x,y) on 0 <= y <= x (maps sin(kx)/k to the regular solution)
    GelfandLevitanK,
    /// K(r,rho) on 0 <= rho <= r at fixed energy
    FixedEnergyK,
}

/// Triangular kernel sampled on a uniform grid. Rows follow the kernel's
/// natural orientation: for `MarchenkoA`, row i holds y >= x_i; otherwise
/// row i holds y <= x_i.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransformationKernel {
    pub xs: Vec<f64>,
    /// row i = kernel values along the second argument (see `row_ys`)
    pub values: Vec<Vec<f64>>,
    /// kernel on the diagonal y = x
    pub diagonal: Vec<f64>,
    pub kind: KernelKind,
    /// second-argument grid of row i starts at this offset into a virtual
    /// uniform grid with the same step as xs
    pub y_step: f64,
}

impl TransformationKernel {
    /// y-grid of row i.
    pub fn row_ys(&self, i: usize) -> Vec<f64> {
        match self.kind {
            KernelKind::MarchenkoA => {
                let y0 = self.xs[i];
                (0..self.values[i].len())
                    .map(|m| y0 + self.y_step * m as f64)
                    .collect()
            }
            _ => (0..self.values[i].len())
                .map(|m| self.y_step * m as f64)
                .collect(),
        }
    }

    /// Kernel value at (x_i, y) by linear interpolation along the row.
    pub fn value_at(&self, i: usize, y: f64) -> f64 {
        let row = &self.values[i];
        let y0 = match self.kind {
            KernelKind::MarchenkoA => self.xs[i],
            _ => 0.0,
        };
        let t = (y - y0) / self.y_step;
        if t <= 0.0 {
            return row[0];
        }
        let j = t.floor() as usize;
        if j + 1 >= row.len() {
            return *row.last().unwrap();
        }
        let frac = t - j as f64;
        row[j] * (1.0 - frac) + row[j + 1] * frac
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Outcome of one characterization check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

/// Report produced by `validate::validate_scattering_data`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn push(&mut self, name: &str, passed: bool, value: f64, threshold: f64) {
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            passed,
            value,
            threshold,
        });
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}
