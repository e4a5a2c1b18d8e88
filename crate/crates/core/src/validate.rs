//! Characterization checks on scattering data: unitarity, high-energy
//! limit, index/bound-state consistency, and finiteness of the norms of the
//! kernel profile F built from the data.

use crate::error::Result;
use crate::marchenko::{build_f, derivative_uniform};
use crate::types::{ScatteringData, ValidationReport};
use crate::winding::winding_index;

/// Caps for the discretized F-norm sum; data from a genuine potential sits
/// orders of magnitude below this.
pub const F_NORM_CAP: f64 = 1.0e4;

/// Run the full battery of characterization checks with tolerance `tol` on
/// the pointwise conditions. Condition failures are reported, not errors;
/// only malformed grids abort.
pub fn validate_scattering_data(sd: &ScatteringData, tol: f64) -> Result<ValidationReport> {
    sd.check_shape()?;
    let mut report = ValidationReport { checks: Vec::new() };

    // unitarity |S| = 1 (S(-k) = conj S(k) = 1/S(k) on the unit circle)
    let unit_dev = sd
        .s
        .iter()
        .map(|s| (s.norm() - 1.0).abs())
        .fold(0.0_f64, f64::max);
    report.push("unitarity", unit_dev < tol, unit_dev, tol);

    // S -> 1 at the grid end: the deviation must have decayed to well below
    // its value a quarter of the grid earlier (1 - S falls off like 1/k)
    let end_dev = (sd.s.last().unwrap() - 1.0).norm();
    let quarter = (sd.s[sd.ks.len() / 4] - 1.0).norm();
    let end_tol = tol.max(0.5 * quarter);
    report.push("s_at_infinity", end_dev <= end_tol, end_dev, end_tol);

    // positivity of bound-state data
    let positive = sd.bound_ks.iter().all(|k| *k > 0.0) && sd.norming.iter().all(|s| *s > 0.0);
    report.push("bound_data_positive", positive, 0.0, 0.0);

    // index consistency: ind S in {-2J, -2J-1}
    let j = sd.bound_ks.len() as i64;
    match winding_index(&sd.ks, &sd.s) {
        Ok(idx) => {
            let consistent = idx == -2 * j || idx == -2 * j - 1;
            report.push("index_consistent", consistent, idx as f64, -2.0 * j as f64);
            report.push(
                "index_matches_field",
                idx == sd.index,
                idx as f64,
                sd.index as f64,
            );
        }
        Err(e) => {
            report.push("index_consistent", false, f64::NAN, 0.0);
            report.push("index_error", false, 0.0, 0.0);
            let _ = e;
        }
    }

    // F-norm finiteness: ||F||_2 + ||F||_1 + ||F||_inf + ||x F'||_1
    let dx = 0.02;
    let n = 1500;
    let xs: Vec<f64> = (0..=n).map(|m| dx * m as f64).collect();
    match build_f(sd, &xs) {
        Ok(fs) => {
            let l1: f64 = fs.iter().map(|v| v.abs()).sum::<f64>() * dx;
            let l2: f64 = (fs.iter().map(|v| v * v).sum::<f64>() * dx).sqrt();
            let linf = fs.iter().map(|v| v.abs()).fold(0.0_f64, f64::max);
            let fp = derivative_uniform(&fs, dx);
            let xfp_l1: f64 = xs
                .iter()
                .zip(&fp)
                .map(|(x, d)| x * d.abs())
                .sum::<f64>()
                * dx;
            let total = l1 + l2 + linf + xfp_l1;
            report.push(
                "f_norms_finite",
                total.is_finite() && total < F_NORM_CAP,
                total,
                F_NORM_CAP,
            );
        }
        Err(_) => report.push("f_norms_finite", false, f64::INFINITY, F_NORM_CAP),
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn grid(n: usize, h: f64) -> Vec<f64> {
        (1..=n).map(|i| h * i as f64).collect()
    }

    #[test]
    fn free_data_passes_all_checks() {
        let ks = grid(20000, 0.01);
        let sd = ScatteringData {
            s: vec![Complex64::new(1.0, 0.0); ks.len()],
            ks,
            bound_ks: vec![],
            norming: vec![],
            index: 0,
        };
        let report = validate_scattering_data(&sd, 1e-8).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn bound_state_family_has_index_minus_two() {
        // S = (k+ik1)(k+inu1)/((k-ik1)(k-inu1)), k1 = 1, nu1 = sqrt(2)
        let ks = grid(20000, 0.01);
        let nu1 = 2.0_f64.sqrt();
        let s: Vec<Complex64> = ks
            .iter()
            .map(|&k| {
                (Complex64::new(k, 1.0) * Complex64::new(k, nu1))
                    / (Complex64::new(k, -1.0) * Complex64::new(k, -nu1))
            })
            .collect();
        let s1 = 4.0 * (1.0 + nu1) * (1.0 + nu1);
        let sd = ScatteringData {
            ks,
            s,
            bound_ks: vec![1.0],
            norming: vec![s1],
            index: -2,
        };
        let report = validate_scattering_data(&sd, 1e-8).unwrap();
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.get("index_consistent").unwrap().value, -2.0);
    }

    #[test]
    fn resonance_family_has_index_minus_one() {
        let ks = grid(20000, 0.01);
        let s: Vec<Complex64> = ks
            .iter()
            .map(|&k| Complex64::new(k, 1.0) / Complex64::new(k, -1.0))
            .collect();
        let sd = ScatteringData {
            ks,
            s,
            bound_ks: vec![],
            norming: vec![],
            index: -1,
        };
        let report = validate_scattering_data(&sd, 1e-8).unwrap();
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.get("index_consistent").unwrap().value, -1.0);
    }

    #[test]
    fn broken_unitarity_is_reported_not_fatal() {
        let ks = grid(2000, 0.01);
        let s: Vec<Complex64> = ks.iter().map(|_| Complex64::new(1.3, 0.0)).collect();
        let sd = ScatteringData {
            ks,
            s,
            bound_ks: vec![],
            norming: vec![],
            index: 0,
        };
        let report = validate_scattering_data(&sd, 1e-8).unwrap();
        assert!(!report.get("unitarity").unwrap().passed);
    }
}
