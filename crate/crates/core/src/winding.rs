//! Winding number of a unimodular function sampled on a positive k-grid.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Guard: the pre-rounding winding must sit this close to an integer.
pub const ROUNDING_GUARD: f64 = 0.1;

/// Minimum |g| at a node; below this the winding is undefined.
pub const ZERO_TOLERANCE: f64 = 1.0e-12;

/// Winding index of g over the full real axis, from samples on k > 0.
///
/// The argument increment along the grid is accumulated through phase
/// differences of consecutive samples and doubled, which is the full-axis
/// increment for functions with g(-k) = conj g(k). The raw value must land
/// within [`ROUNDING_GUARD`] of an integer.
pub fn winding_index(ks: &[f64], g: &[Complex64]) -> Result<i64> {
    if ks.len() != g.len() || ks.len() < 2 {
        return Err(Error::MalformedGrid(
            "winding needs matching grids with at least 2 nodes".into(),
        ));
    }
    let mut total = 0.0;
    for i in 0..g.len() {
        let m = g[i].norm();
        if m < ZERO_TOLERANCE {
            return Err(Error::ZeroCrossing { k: ks[i], value: m });
        }
        if i > 0 {
            let step = (g[i] / g[i - 1]).arg();
            total += step;
        }
    }
    // full-axis increment = 2 * increment over (0, infinity)
    let raw = total / std::f64::consts::PI;
    let rounded = raw.round();
    if (raw - rounded).abs() > ROUNDING_GUARD {
        return Err(Error::NonIntegerWinding {
            raw,
            guard: ROUNDING_GUARD,
        });
    }
    Ok(rounded as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::uniform_from;

    fn rational_s(ks: &[f64], zeros_upper: &[f64]) -> Vec<Complex64> {
        // product of (k + i nu)/(k - i nu) factors
        ks.iter()
            .map(|&k| {
                zeros_upper
                    .iter()
                    .map(|&nu| Complex64::new(k, nu) / Complex64::new(k, -nu))
                    .product()
            })
            .collect()
    }

    #[test]
    fn unit_function_has_zero_index() {
        let ks = uniform_from(0.01, 0.01, 2000);
        let g = vec![Complex64::new(1.0, 0.0); ks.len()];
        assert_eq!(winding_index(&ks, &g).unwrap(), 0);
    }

    #[test]
    fn bound_state_s_matrix_has_index_minus_two() {
        // S(k) = (k+ik1)(k+inu1)/((k-ik1)(k-inu1)), k1 = 1, nu1 = sqrt(2)
        let ks = uniform_from(0.005, 0.005, 40000);
        let g = rational_s(&ks, &[1.0, 2.0f64.sqrt()]);
        assert_eq!(winding_index(&ks, &g).unwrap(), -2);
    }

    #[test]
    fn resonance_s_matrix_has_index_minus_one() {
        let ks = uniform_from(0.005, 0.005, 40000);
        let g = rational_s(&ks, &[1.0]);
        assert_eq!(winding_index(&ks, &g).unwrap(), -1);
    }

    #[test]
    fn winding_is_additive_over_products() {
        let ks = uniform_from(0.005, 0.005, 40000);
        let g1 = rational_s(&ks, &[1.0]);
        let g2 = rational_s(&ks, &[0.5, 2.0]);
        let prod: Vec<Complex64> = g1.iter().zip(&g2).map(|(a, b)| a * b).collect();
        let i1 = winding_index(&ks, &g1).unwrap();
        let i2 = winding_index(&ks, &g2).unwrap();
        let ip = winding_index(&ks, &prod).unwrap();
        assert_eq!(ip, i1 + i2);
    }

    #[test]
    fn zero_crossing_is_reported() {
        let ks = vec![0.5, 1.0, 1.5];
        let g = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        assert!(matches!(
            winding_index(&ks, &g),
            Err(Error::ZeroCrossing { .. })
        ));
    }
}
