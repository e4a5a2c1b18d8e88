//! Marchenko inversion: scattering data -> F -> A -> q, the converse step
//! A -> F, and the one-sided kernel identity used as a residual diagnostic.
//!
//! The kernel equation
//!     A(x,y) + int_x^inf A(x,s) F(s+y) ds + F(x+y) = 0,  y >= x,
//! is discretized by Nystrom on a shared uniform grid truncated where F has
//! decayed. The systems for all x are trailing blocks of one matrix, so a
//! single pivot-free factorization in reversed index order serves the whole
//! family; the trapezoid half-weight at the moving left endpoint is restored
//! by a rank-one identity that reduces to a scalar rescaling.

use crate::error::{Error, Result};
use crate::grid::{uniform_step, DecayClass, PotentialGrid};
use crate::linalg::FamilyLu;
use crate::quad::{fourier_cos_transform, fourier_sin_transform, Direction};
use crate::types::{KernelKind, ScatteringData, TransformationKernel};

/// Tuning knobs for the Marchenko chain.
#[derive(Debug, Clone, Copy)]
pub struct MarchenkoConfig {
    /// uniform step of the x/y grids
    pub dx: f64,
    /// extent of the reconstructed potential / stored kernel rows
    pub x_out: f64,
    /// F support cut: first node with |F| below this times max |F|
    pub f_rel_floor: f64,
    /// pivot floor for the family factorization
    pub min_pivot: f64,
    /// extent of the F profile built from scattering data
    pub f_extent: f64,
}

impl Default for MarchenkoConfig {
    fn default() -> Self {
        Self {
            dx: 0.01,
            x_out: 5.0,
            f_rel_floor: 1.0e-10,
            min_pivot: 1.0e-10,
            f_extent: 60.0,
        }
    }
}

/// F(x) = (1/2pi) int (1 - S) e^{ikx} dk + sum s_j e^{-k_j x} on `xs`.
///
/// The k-integral is folded onto k > 0 through S(-k) = conj S(k), giving a
/// cosine transform of Re(1-S) and a sine transform of Im(1-S).
pub fn build_f(sd: &ScatteringData, xs: &[f64]) -> Result<Vec<f64>> {
    sd.check_shape()?;
    let re: Vec<f64> = sd.s.iter().map(|s| 1.0 - s.re).collect();
    let im: Vec<f64> = sd.s.iter().map(|s| -s.im).collect();
    let xs_abs: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
    let cos_part = fourier_cos_transform(&sd.ks, &re, &xs_abs, Direction::Forward)?;
    let sin_part = fourier_sin_transform(&sd.ks, &im, &xs_abs, Direction::Forward)?;
    let inv_pi = 1.0 / std::f64::consts::PI;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let sign = if x < 0.0 { -1.0 } else { 1.0 };
            let fs = inv_pi * (cos_part[i] - sign * sin_part[i]);
            let fd: f64 = sd
                .bound_ks
                .iter()
                .zip(&sd.norming)
                .map(|(kj, sj)| sj * (-kj * x).exp())
                .sum();
            fs + fd
        })
        .collect())
}

/// Kernel A(x,y) from F sampled as fs[m] = F(m * dx).
///
/// Rows span y in [x_i, X_cut] for x_i = i * dx up to `x_out`; row values are
/// the Nystrom solution at the quadrature nodes themselves. A second solve on
/// the doubled step feeds a Richardson correction, lifting the trapezoid
/// family to fourth order.
pub fn solve_marchenko(fs: &[f64], dx: f64, cfg: &MarchenkoConfig) -> Result<TransformationKernel> {
    let max_f = fs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if max_f == 0.0 {
        let rows = (cfg.x_out / dx).round() as usize;
        let xs: Vec<f64> = (0..=rows).map(|i| dx * i as f64).collect();
        return Ok(TransformationKernel {
            values: xs.iter().map(|_| vec![0.0; 8]).collect(),
            diagonal: vec![0.0; xs.len()],
            xs,
            kind: KernelKind::MarchenkoA,
            y_step: dx,
        });
    }
    // fix the truncation once so the fine and coarse grids stay aligned
    let cut = fs
        .iter()
        .position(|v| v.abs() < cfg.f_rel_floor * max_f)
        .unwrap_or(fs.len() - 1);
    let n = (cut / 4).max(4) * 2; // even node count, needs F up to 2n
    if 2 * n >= fs.len() {
        return Err(Error::InvalidArgument(format!(
            "F profile too short: need {} samples, got {}",
            2 * n + 1,
            fs.len()
        )));
    }
    let fine = solve_marchenko_plain(fs, dx, n, cfg)?;
    let coarse_fs: Vec<f64> = fs.iter().step_by(2).cloned().collect();
    let coarse = solve_marchenko_plain(&coarse_fs, 2.0 * dx, n / 2, cfg)?;
    Ok(richardson_combine(fine, &coarse))
}

/// Adds the (fine - coarse)/3 trapezoid defect, interpolated bilinearly from
/// the coarse lattice, to every fine node.
pub(crate) fn richardson_combine(
    mut fine: TransformationKernel,
    coarse: &TransformationKernel,
) -> TransformationKernel {
    let nc_rows = coarse.xs.len();
    // defect on the coarse lattice
    let mut defect: Vec<Vec<f64>> = Vec::with_capacity(nc_rows);
    for ic in 0..nc_rows {
        let i_fine = 2 * ic;
        if i_fine >= fine.xs.len() {
            break;
        }
        let row_c = &coarse.values[ic];
        let row_f = &fine.values[i_fine];
        let len = row_c.len().min(row_f.len().div_ceil(2));
        defect.push(
            (0..len)
                .map(|m| (row_f[2 * m] - row_c[m]) / 3.0)
                .collect(),
        );
    }
    let d_at = |xi: f64, off: f64| -> f64 {
        // bilinear interpolation on the coarse defect lattice
        let r = (xi / 2.0).min((defect.len() - 1) as f64);
        let c = (off / 2.0).max(0.0);
        let r0 = (r.floor() as usize).min(defect.len().saturating_sub(2));
        let fr = (r - r0 as f64).clamp(0.0, 1.0);
        let sample = |row: &Vec<f64>| -> f64 {
            if row.is_empty() {
                return 0.0;
            }
            let c0 = (c.floor() as usize).min(row.len().saturating_sub(1));
            let c1 = (c0 + 1).min(row.len() - 1);
            let fc = (c - c0 as f64).clamp(0.0, 1.0);
            row[c0] * (1.0 - fc) + row[c1] * fc
        };
        if defect.len() == 1 {
            return sample(&defect[0]);
        }
        let lo = sample(&defect[r0]);
        let hi = sample(&defect[r0 + 1]);
        lo * (1.0 - fr) + hi * fr
    };
    for (i, row) in fine.values.iter_mut().enumerate() {
        for (off, v) in row.iter_mut().enumerate() {
            *v += d_at(i as f64, off as f64);
        }
        fine.diagonal[i] = match fine.kind {
            crate::types::KernelKind::MarchenkoA => row[0],
            _ => *row.last().unwrap(),
        };
    }
    fine
}

fn solve_marchenko_plain(
    fs: &[f64],
    dx: f64,
    n: usize,
    cfg: &MarchenkoConfig,
) -> Result<TransformationKernel> {
    // flipped ordering: r = n - j so trailing blocks become leading blocks
    let m_full = n + 1;
    let mut g = vec![0.0_f64; m_full * m_full];
    for r in 0..m_full {
        let j_r = n - r;
        for c in 0..m_full {
            let j_c = n - c;
            let w = if j_c == 0 || j_c == n { 0.5 * dx } else { dx };
            let mut v = w * fs[j_r + j_c];
            if r == c {
                v += 1.0;
            }
            g[r * m_full + c] = v;
        }
    }
    let fam = FamilyLu::factor(g, m_full, cfg.min_pivot)?;

    let rows_out = ((cfg.x_out / dx).round() as usize).min(n);
    let mut values = Vec::with_capacity(rows_out + 1);
    let mut diagonal = Vec::with_capacity(rows_out + 1);
    let mut xs = Vec::with_capacity(rows_out + 1);
    for i in 0..=rows_out {
        let m = m_full - i; // unknowns at nodes j = i..n
        let mut b: Vec<f64> = (0..m).map(|r| -fs[i + (n - r)]).collect();
        fam.solve_leading(m, &mut b);
        if i > 0 {
            // restore the half weight at the moving endpoint s = x_i: the
            // correction column equals minus the right-hand side, so the
            // Sherman-Morrison update collapses to a scalar rescale
            let scale = 1.0 + 0.5 * dx * b[m - 1];
            if scale.abs() < 1.0e-6 {
                return Err(Error::SingularOperator(format!(
                    "endpoint correction degenerate at x = {}",
                    dx * i as f64
                )));
            }
            for v in b.iter_mut() {
                *v /= scale;
            }
        }
        // natural order: row[j - i] = A(x_i, s_j), j = i..n
        let row: Vec<f64> = (0..m).map(|off| b[m - 1 - off]).collect();
        diagonal.push(row[0]);
        values.push(row);
        xs.push(dx * i as f64);
    }
    Ok(TransformationKernel {
        xs,
        values,
        diagonal,
        kind: KernelKind::MarchenkoA,
        y_step: dx,
    })
}

/// Residual of the kernel equation at off-node points, as an independent
/// consistency measure of a solved kernel against its F.
pub fn marchenko_residual(kernel: &TransformationKernel, fs: &[f64], dx: f64) -> f64 {
    let mut worst = 0.0_f64;
    let f_at = |z: f64| -> f64 {
        let t = z / dx;
        let j = (t.floor() as usize).min(fs.len() - 2);
        let frac = t - j as f64;
        fs[j] * (1.0 - frac) + fs[j + 1] * frac
    };
    for (i, &x) in kernel.xs.iter().enumerate().step_by(7) {
        let row = &kernel.values[i];
        for off in (0..row.len()).step_by(11) {
            let y = x + kernel.y_step * (off as f64 + 0.5);
            if off + 1 >= row.len() {
                continue;
            }
            let a_xy = 0.5 * (row[off] + row[off + 1]);
            let mut integral = 0.0;
            for (m, &a_xs) in row.iter().enumerate() {
                let s = x + kernel.y_step * m as f64;
                let w = if m == 0 || m + 1 == row.len() {
                    0.5 * kernel.y_step
                } else {
                    kernel.y_step
                };
                integral += w * a_xs * f_at(s + y);
            }
            worst = worst.max((a_xy + integral + f_at(x + y)).abs());
        }
    }
    worst
}

/// Fourth-order first derivative on a uniform grid.
pub fn derivative_uniform(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 5, "derivative stencil needs at least 5 nodes");
    let mut out = vec![0.0; n];
    out[0] = (-25.0 * values[0] + 48.0 * values[1] - 36.0 * values[2] + 16.0 * values[3]
        - 3.0 * values[4])
        / (12.0 * h);
    out[1] = (-3.0 * values[0] - 10.0 * values[1] + 18.0 * values[2] - 6.0 * values[3]
        + values[4])
        / (12.0 * h);
    for i in 2..n - 2 {
        out[i] = (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2])
            / (12.0 * h);
    }
    out[n - 2] = (3.0 * values[n - 1] + 10.0 * values[n - 2] - 18.0 * values[n - 3]
        + 6.0 * values[n - 4]
        - values[n - 5])
        / (12.0 * h);
    out[n - 1] = (25.0 * values[n - 1] - 48.0 * values[n - 2] + 36.0 * values[n - 3]
        - 16.0 * values[n - 4]
        + 3.0 * values[n - 5])
        / (12.0 * h);
    out
}

/// q(x) = -2 d/dx A(x,x) from the kernel diagonal.
pub fn q_from_a(kernel: &TransformationKernel) -> Result<PotentialGrid> {
    let h = uniform_step(&kernel.xs)?;
    let deriv = derivative_uniform(&kernel.diagonal, h);
    let qs: Vec<f64> = deriv.iter().map(|d| -2.0 * d).collect();
    PotentialGrid::new(kernel.xs.clone(), qs, None, DecayClass::L11)
}

/// Full inversion: scattering data to potential on [0, x_out].
pub fn invert(sd: &ScatteringData, cfg: &MarchenkoConfig) -> Result<PotentialGrid> {
    let n_f = (cfg.f_extent / cfg.dx).round() as usize;
    let xs: Vec<f64> = (0..=n_f).map(|m| cfg.dx * m as f64).collect();
    let fs = build_f(sd, &xs)?;
    let kernel = solve_marchenko(&fs, cfg.dx, cfg)?;
    q_from_a(&kernel)
}

/// Recover F from a solved kernel: contraction iteration on the anchor row
/// x0 for z >= 2 x0, then a backward Volterra sweep of the x = 0 row.
pub fn f_from_a(kernel: &TransformationKernel) -> Result<Vec<f64>> {
    let dx = kernel.y_step;
    // anchor row: smallest x with integral of |A(x, .)| safely below 1
    let mut anchor = None;
    for (i, row) in kernel.values.iter().enumerate() {
        let norm: f64 = row.iter().map(|v| v.abs()).sum::<f64>() * dx;
        if norm < 0.9 {
            anchor = Some(i);
            break;
        }
    }
    let i0 = anchor.ok_or_else(|| {
        Error::ContractionFailed("no row with contraction norm below 0.9".into())
    })?;
    let x0 = kernel.xs[i0];
    let row0 = &kernel.values[i0];
    let z_len = row0.len(); // F(z) on z = 2 x0 + m dx needs A(x0, x0 + m dx + v)
    // indices: F grid z_m = 2 x0 + m dx, m = 0..z_len-1 (kernel args stay in row)
    let mut f_hi = vec![0.0_f64; z_len];
    for m in 0..z_len {
        f_hi[m] = -row0[m]; // first iterate: F(z) = -A(x0, z - x0)
    }
    for _ in 0..400 {
        let mut next = vec![0.0_f64; z_len];
        let mut delta = 0.0_f64;
        for m in 0..z_len {
            // integral over v >= z of A(x0, v + x0 - z) F(v):
            // v = z + l dx -> kernel offset m + ... A(x0, x0 + m' ) where
            // arg index = (z + l dx) + x0 - z - x0 = l dx offset from x0:
            // A(x0, x0 + l dx) = row0[l], F(v) = f_hi[m + l]
            let mut s = 0.0;
            let l_max = z_len - 1 - m;
            for l in 0..=l_max {
                let w = if l == 0 || l == l_max { 0.5 * dx } else { dx };
                s += w * row0[l] * f_hi[m + l];
            }
            next[m] = -row0[m] - s;
            delta = delta.max((next[m] - f_hi[m]).abs());
        }
        f_hi = next;
        if delta < 1.0e-14 {
            break;
        }
    }
    // Volterra sweep for z in [0, 2 x0) using the x = 0 row
    let rowz = &kernel.values[0];
    let m0 = ((2.0 * x0) / dx).round() as usize; // z-index where f_hi starts
    let total = m0 + z_len;
    let mut f_all = vec![0.0_f64; total];
    f_all[m0..].copy_from_slice(&f_hi);
    let a00 = rowz[0];
    for m in (0..m0).rev() {
        // F(z) + int_z^inf A(0, v - z) F(v) dv = -A(0, z)
        let mut s = 0.0;
        let l_max = (total - 1 - m).min(rowz.len() - 1);
        for l in 1..=l_max {
            let w = if l == l_max { 0.5 * dx } else { dx };
            s += w * rowz[l] * f_all[m + l];
        }
        f_all[m] = (-rowz[m] - s) / (1.0 + 0.5 * dx * a00);
    }
    Ok(f_all)
}

/// Kernel diagonal A(x,x) on [x_from, x_to] by Neumann iteration of the
/// per-x equation; converges where the operator norm is below one (the
/// far-field regime), which is what the hybrid Krein/Marchenko scheme uses.
pub fn diag_by_iteration(
    fs: &[f64],
    dx: f64,
    x_from: f64,
    x_to: f64,
    cfg: &MarchenkoConfig,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let max_f = fs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let cut = fs
        .iter()
        .position(|v| v.abs() < cfg.f_rel_floor * max_f)
        .unwrap_or(fs.len() - 1);
    let n_cut = cut / 2;
    let i_from = (x_from / dx).round() as usize;
    let i_to = (x_to / dx).round() as usize;
    let mut xs = Vec::with_capacity(i_to - i_from + 1);
    let mut diag = Vec::with_capacity(i_to - i_from + 1);
    for i in i_from..=i_to {
        let m = n_cut.saturating_sub(i) + 1; // nodes s_j, j = i..n_cut
        let rhs: Vec<f64> = (0..m).map(|r| -fs[2 * i + r]).collect();
        let weight = |r: usize| -> f64 {
            if r == 0 || r + 1 == m {
                0.5 * dx
            } else {
                dx
            }
        };
        let mut u = rhs.clone();
        let mut converged = false;
        for _ in 0..400 {
            let mut next = rhs.clone();
            let mut delta = 0.0_f64;
            for r in 0..m {
                let mut acc = 0.0;
                for l in 0..m {
                    // F(s_l + y_r) with s_l = (i+l) dx, y_r = (i+r) dx
                    acc += weight(l) * fs[2 * i + l + r] * u[l];
                }
                next[r] -= acc;
                delta = delta.max((next[r] - u[r]).abs());
            }
            u = next;
            if delta < 1.0e-13 * max_f {
                converged = true;
                break;
            }
            if !delta.is_finite() {
                break;
            }
        }
        if !converged {
            return Err(Error::ContractionFailed(format!(
                "iteration did not settle at x = {}",
                dx * i as f64
            )));
        }
        xs.push(dx * i as f64);
        diag.push(u[0]);
    }
    Ok((xs, diag))
}

/// Residuals of the one-sided kernel identity
///     F(y) + A(y) + int_0^inf A(t) F(t+y) dt = A(-y)
/// over y in [-Y, Y]. `a0` holds A(0, m dx); `f_pos` holds F(m dx) and
/// `f_neg` holds F(-m dx). Residuals are measured relative to the local
/// magnitude 1 + |F(y)|: with bound states present F grows exponentially on
/// the negative axis and the identity balances terms of that size.
#[derive(Debug, Clone, Copy)]
pub struct OneSidedResidual {
    /// max scaled |LHS| over y > 0 (right side vanishes there)
    pub max_positive: f64,
    /// max scaled |LHS - A(-y)| over y < 0
    pub max_negative: f64,
}

pub fn marchenko_type_residual(
    a0: &[f64],
    f_pos: &[f64],
    f_neg: &[f64],
    dx: f64,
) -> OneSidedResidual {
    let f_at = |idx: i64| -> f64 {
        if idx >= 0 {
            let i = idx as usize;
            if i < f_pos.len() {
                f_pos[i]
            } else {
                0.0
            }
        } else {
            let i = (-idx) as usize;
            if i < f_neg.len() {
                f_neg[i]
            } else {
                0.0
            }
        }
    };
    let lhs = |m: i64| -> f64 {
        // F(t+y) has a jump at t = -y when y < 0 (the continuous part of F
        // jumps at the origin), so the trapezoid rule runs as two segments
        // meeting at the kink; the left limit of F there is approximated by
        // the adjacent negative-side sample
        let n_last = a0.len() - 1;
        let split = if m < 0 { ((-m) as usize).min(n_last) } else { 0 };
        let mut integral = 0.0;
        for (t, &a) in a0.iter().enumerate() {
            if split > 0 && t == split {
                let left = f_at(t as i64 + m - 1);
                integral += 0.5 * dx * a * left;
                integral += 0.5 * dx * a * f_at(t as i64 + m);
                continue;
            }
            // segment-boundary nodes carry half weight
            let w = if t == 0 || t == n_last { 0.5 * dx } else { dx };
            integral += w * a * f_at(t as i64 + m);
        }
        let a_y = if m >= 0 && (m as usize) < a0.len() {
            a0[m as usize]
        } else {
            0.0
        };
        f_at(m) + a_y + integral
    };
    let y_len = (a0.len() - 1).min(f_neg.len() - 1) as i64;
    let mut max_pos = 0.0_f64;
    let mut max_neg = 0.0_f64;
    for m in 1..y_len {
        max_pos = max_pos.max(lhs(m).abs() / (1.0 + f_at(m).abs()));
        let a_minus = a0[m as usize];
        max_neg = max_neg.max((lhs(-m) - a_minus).abs() / (1.0 + f_at(-m).abs()));
    }
    OneSidedResidual {
        max_positive: max_pos,
        max_negative: max_neg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed forms for the zero-energy-resonance reflectionless potential
    /// with decay rate nu: F(x) = 2 nu e^{-nu x},
    /// A(x,y) = -2 nu e^{-nu(x+y)} / (1 + e^{-2 nu x}), q = -2 nu^2 sech^2.
    fn resonance_f(nu: f64, dx: f64, len: usize) -> Vec<f64> {
        (0..len).map(|m| 2.0 * nu * (-nu * dx * m as f64).exp()).collect()
    }

    fn resonance_a(nu: f64, x: f64, y: f64) -> f64 {
        -2.0 * nu * (-nu * (x + y)).exp() / (1.0 + (-2.0 * nu * x).exp())
    }

    #[test]
    fn zero_f_gives_zero_kernel() {
        let cfg = MarchenkoConfig {
            dx: 0.1,
            x_out: 1.0,
            ..Default::default()
        };
        let fs = vec![0.0; 100];
        let k = solve_marchenko(&fs, 0.1, &cfg).unwrap();
        assert!(k.max_abs() == 0.0);
    }

    #[test]
    fn resonance_kernel_matches_closed_form() {
        let dx = 0.01;
        let cfg = MarchenkoConfig {
            dx,
            x_out: 5.0,
            ..Default::default()
        };
        let fs = resonance_f(1.0, dx, 6001);
        let kernel = solve_marchenko(&fs, dx, &cfg).unwrap();
        let mut worst = 0.0_f64;
        for (i, &x) in kernel.xs.iter().enumerate() {
            let row = &kernel.values[i];
            for (off, &v) in row.iter().enumerate().take(((5.0 - x) / dx) as usize) {
                let y = x + dx * off as f64;
                worst = worst.max((v - resonance_a(1.0, x, y)).abs());
            }
        }
        assert!(worst < 1e-5, "max kernel error {worst:.2e}");
    }

    #[test]
    fn resonance_potential_recovered() {
        let dx = 0.01;
        let cfg = MarchenkoConfig {
            dx,
            x_out: 5.0,
            ..Default::default()
        };
        let fs = resonance_f(1.0, dx, 6001);
        let kernel = solve_marchenko(&fs, dx, &cfg).unwrap();
        let q = q_from_a(&kernel).unwrap();
        let q_max = q.max_abs();
        let mut worst = 0.0_f64;
        for (x, qv) in q.xs.iter().zip(&q.qs) {
            let want = -2.0 / x.cosh().powi(2);
            worst = worst.max((qv - want).abs());
        }
        assert!(
            worst < 1e-3 * q_max,
            "q error {worst:.2e} vs scale {q_max:.2}"
        );
    }

    #[test]
    fn kernel_equation_residual_is_small() {
        let dx = 0.01;
        let cfg = MarchenkoConfig {
            dx,
            x_out: 3.0,
            ..Default::default()
        };
        let fs = resonance_f(1.0, dx, 6001);
        let kernel = solve_marchenko(&fs, dx, &cfg).unwrap();
        // off-node evaluation carries the O(dx^2) interpolation error of A
        assert!(marchenko_residual(&kernel, &fs, dx) < 5e-5);
    }

    #[test]
    fn f_round_trip_through_kernel() {
        let dx = 0.01;
        let cfg = MarchenkoConfig {
            dx,
            x_out: 4.0,
            ..Default::default()
        };
        let fs = resonance_f(1.0, dx, 6001);
        let kernel = solve_marchenko(&fs, dx, &cfg).unwrap();
        let back = f_from_a(&kernel).unwrap();
        let mut worst = 0.0_f64;
        for (m, v) in back.iter().enumerate().take(800) {
            worst = worst.max((v - fs[m]).abs());
        }
        assert!(worst < 1e-4, "F round trip error {worst:.2e}");
    }

    #[test]
    fn one_sided_identity_holds_for_resonance_case() {
        // A(y) = A(0,y) = -e^{-y}; F = 2 e^{-y} for y > 0, 0 for y < 0
        let dx = 0.005;
        let len = 8001;
        let a0: Vec<f64> = (0..len).map(|m| -(-(dx * m as f64)).exp()).collect();
        let f_pos: Vec<f64> = (0..len).map(|m| 2.0 * (-(dx * m as f64)).exp()).collect();
        let f_neg = vec![0.0; len];
        let r = marchenko_type_residual(&a0, &f_pos, &f_neg, dx);
        assert!(r.max_positive < 1e-4, "y>0 residual {:.2e}", r.max_positive);
        assert!(r.max_negative < 1e-4, "y<0 residual {:.2e}", r.max_negative);
    }

    #[test]
    fn derivative_stencil_is_fourth_order() {
        let h = 0.01;
        let xs: Vec<f64> = (0..200).map(|i| h * i as f64).collect();
        let f: Vec<f64> = xs.iter().map(|x| (2.0 * x).sin()).collect();
        let d = derivative_uniform(&f, h);
        for (x, dv) in xs.iter().zip(&d) {
            assert!((dv - 2.0 * (2.0 * x).cos()).abs() < 1e-7);
        }
    }
}
