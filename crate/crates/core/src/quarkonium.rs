//! Recovery of a confining potential q(r) = r + p(r) from finitely many
//! bound-state energies and boundary slopes, via the degenerate-kernel
//! spectral equation: the measure difference against the reference problem
//! q0 = r has finitely many atoms, so the kernel equation collapses to a
//! small linear system per radius.

use serde::{Deserialize, Serialize};

use crate::airy::{airy_ai, airy_negated_zeros};
use crate::error::{Error, Result};
use crate::grid::{DecayClass, PotentialGrid};
use crate::linalg::LuFactors;
use crate::marchenko::derivative_uniform;

/// Bound-state data {E_j, s_j = u_j'(0)} of a confining potential.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuarkoniumData {
    pub energies: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl QuarkoniumData {
    pub fn check(&self) -> Result<()> {
        if self.energies.len() != self.slopes.len() || self.energies.is_empty() {
            return Err(Error::InvalidArgument(
                "energies/slopes must be nonempty and aligned".into(),
            ));
        }
        if self.energies.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "energies must be strictly increasing".into(),
            ));
        }
        if self.slopes.contains(&0.0) {
            return Err(Error::InvalidArgument("slopes must be nonzero".into()));
        }
        Ok(())
    }
}

/// Reference level of the unperturbed problem q0 = r: energy, slope, and
/// the norm of the regular eigenfunction.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceLevel {
    pub energy: f64,
    pub slope: f64,
    /// c_j = 1/Ai'(-E_j): phi_j(r) = c_j Ai(r - E_j)
    pub amplitude: f64,
}

/// First `n` levels of the linear reference potential: energies are the
/// negated Airy zeros, eigenfunctions c_j Ai(r - E_j), and the slopes come
/// from the normalization integral (they equal 1 analytically; the
/// quadrature value is kept as the numerical oracle).
pub fn airy_reference(n: usize) -> Vec<ReferenceLevel> {
    let zeros = airy_negated_zeros(n);
    zeros
        .iter()
        .map(|&e| {
            let amplitude = 1.0 / airy_ai(-e).1;
            // norm^2 = c^2 int_0^inf Ai^2(r - E) dr
            let h = 1.0e-3;
            let r_max = e + 14.0;
            let m = (r_max / h) as usize;
            let mut norm = 0.0;
            for i in 0..=m {
                let r = h * i as f64;
                let v = airy_ai(r - e).0;
                let w = if i == 0 || i == m { 0.5 * h } else { h };
                norm += w * v * v;
            }
            norm *= amplitude * amplitude;
            ReferenceLevel {
                energy: e,
                slope: 1.0 / norm.sqrt(),
                amplitude,
            }
        })
        .collect()
}

/// Regular solution of -phi'' + r phi = E phi, phi(0) = 0, phi'(0) = 1,
/// by RK4 on a uniform grid.
pub fn unperturbed_solution(e: f64, xs: &[f64]) -> Vec<f64> {
    assert!(xs.len() >= 2);
    let h = xs[1] - xs[0];
    let mut out = Vec::with_capacity(xs.len());
    let mut u = 0.0_f64;
    let mut up = 1.0_f64;
    out.push(u);
    let f = |x: f64, uu: f64| (x - e) * uu;
    for i in 0..xs.len() - 1 {
        let x0 = xs[i];
        let k1u = up;
        let k1p = f(x0, u);
        let k2u = up + 0.5 * h * k1p;
        let k2p = f(x0 + 0.5 * h, u + 0.5 * h * k1u);
        let k3u = up + 0.5 * h * k2p;
        let k3p = f(x0 + 0.5 * h, u + 0.5 * h * k2u);
        let k4u = up + h * k3p;
        let k4p = f(x0 + h, u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        up += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        out.push(u);
    }
    out
}

/// Reconstructed perturbation and its ingredients.
#[derive(Debug, Clone)]
pub struct QuarkoniumRecovery {
    pub potential: PotentialGrid,
    /// p(r) alone, same grid
    pub perturbation: Vec<f64>,
    /// kernel diagonal K(r,r)
    pub kernel_diagonal: Vec<f64>,
}

/// Recover q = r + p from data levels and the reference levels they replace.
///
/// The kernel is sum_m c_m Psi_m(x) Psi_m(y) with positive weights s_m^2 on
/// the data levels and negative weights -(s_j0)^2 on the subtracted
/// reference levels; the per-radius linear system has one row per basis
/// function.
pub fn recover_potential(
    data: &QuarkoniumData,
    reference: &[ReferenceLevel],
    x_max: f64,
    dx: f64,
) -> Result<QuarkoniumRecovery> {
    data.check()?;
    let n = (x_max / dx).round() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| dx * i as f64).collect();

    // basis functions and signed weights
    let mut weights = Vec::new();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for (e, s) in data.energies.iter().zip(&data.slopes) {
        weights.push(s * s);
        basis.push(unperturbed_solution(*e, &xs));
    }
    for r in reference {
        weights.push(-r.slope * r.slope);
        basis.push(unperturbed_solution(r.energy, &xs));
    }
    let m = weights.len();

    // cumulative overlaps G_lm(x) = int_0^x Psi_l Psi_m dt with an
    // Euler-Maclaurin endpoint correction (4th order)
    let mut overlaps = vec![vec![0.0_f64; n + 1]; m * m];
    for l in 0..m {
        for mm in l..m {
            let prod: Vec<f64> = basis[l]
                .iter()
                .zip(&basis[mm])
                .map(|(a, b)| a * b)
                .collect();
            let dprod = derivative_uniform(&prod, dx);
            let mut acc = 0.0;
            let mut cum = vec![0.0_f64; n + 1];
            for i in 1..=n {
                acc += 0.5 * dx * (prod[i - 1] + prod[i]);
                cum[i] = acc - dx * dx / 12.0 * (dprod[i] - dprod[0]);
            }
            overlaps[l * m + mm] = cum.clone();
            overlaps[mm * m + l] = cum;
        }
    }

    let mut diag = vec![0.0_f64; n + 1];
    for i in 0..=n {
        // M beta = rhs: M_{ab} = delta + c_a G_{ba}(x_i), rhs_a = -c_a Psi_a
        let mut mat = vec![0.0_f64; m * m];
        let mut rhs = vec![0.0_f64; m];
        for a in 0..m {
            for bq in 0..m {
                let mut v = weights[a] * overlaps[bq * m + a][i];
                if a == bq {
                    v += 1.0;
                }
                mat[a * m + bq] = v;
            }
            rhs[a] = -weights[a] * basis[a][i];
        }
        let lu = LuFactors::factor(mat, m)
            .map_err(|_| Error::SingularSystem(xs[i]))?;
        lu.solve_in_place(&mut rhs);
        diag[i] = rhs
            .iter()
            .zip(&basis)
            .map(|(beta, psi)| beta * psi[i])
            .sum();
    }

    let p: Vec<f64> = derivative_uniform(&diag, dx)
        .iter()
        .map(|d| 2.0 * d)
        .collect();
    let qs: Vec<f64> = xs.iter().zip(&p).map(|(x, pv)| x + pv).collect();
    Ok(QuarkoniumRecovery {
        potential: PotentialGrid::new(xs, qs, None, DecayClass::Confining)?,
        perturbation: p,
        kernel_diagonal: diag,
    })
}

/// Lowest `count` Dirichlet eigenvalues of -u'' + q u = E u by shooting:
/// bisection on the sign of u at a far boundary.
pub fn shooting_eigenvalues(q: &PotentialGrid, count: usize, r_far: f64) -> Vec<f64> {
    let n = 40000;
    let h = r_far / n as f64;
    let shoot = |e: f64| -> f64 {
        let mut u = 0.0_f64;
        let mut up = 1.0_f64;
        for i in 0..n {
            let x0 = i as f64 * h;
            let f = |x: f64, uu: f64| (q.value(x) - e) * uu;
            let k1u = up;
            let k1p = f(x0, u);
            let k2u = up + 0.5 * h * k1p;
            let k2p = f(x0 + 0.5 * h, u + 0.5 * h * k1u);
            let k3u = up + 0.5 * h * k2p;
            let k3p = f(x0 + 0.5 * h, u + 0.5 * h * k2u);
            let k4u = up + h * k3p;
            let k4p = f(x0 + h, u + h * k3u);
            u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            up += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            // renormalize against exponential growth in the forbidden region
            let mag = u.abs().max(up.abs());
            if mag > 1e200 {
                u /= mag;
                up /= mag;
            }
        }
        u
    };
    let mut out = Vec::with_capacity(count);
    let mut e = 0.0;
    let de = 0.05;
    let mut prev = shoot(e);
    while out.len() < count && e < 200.0 {
        e += de;
        let cur = shoot(e);
        if prev.signum() != cur.signum() {
            let mut lo = e - de;
            let mut hi = e;
            let mut f_lo = prev;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let fm = shoot(mid);
                if fm.signum() == f_lo.signum() {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev = cur;
    }
    out
}
