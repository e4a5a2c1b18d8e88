//! Fixed-energy (k = 1) partial waves: the phase-shift sequence of a
//! compactly supported potential, the support-radius estimator built on the
//! super-exponential decay of the shifts, and the angular-momentum-
//! independent transformation kernel via its characteristic-variable
//! Volterra equation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::PotentialGrid;
use crate::quad::cumulative_trapezoid;
use crate::types::{KernelKind, TransformationKernel};

/// Phase shifts and partial-wave amplitudes at unit energy.
#[derive(Debug, Clone)]
pub struct PhaseShiftSequence {
    pub ells: Vec<usize>,
    pub deltas: Vec<f64>,
    /// a_l = e^{i delta} sin delta
    pub a_ells: Vec<Complex64>,
}

/// Riccati-Bessel functions u_l(r) = r j_l(r) for l = 0..=l_max, downward
/// recurrence normalized by u_0 = sin r.
pub fn riccati_bessel_j(l_max: usize, r: f64) -> Vec<f64> {
    assert!(r > 0.0);
    let start = l_max + 16 + (1.5 * r) as usize;
    let mut jj = vec![0.0_f64; start + 2];
    jj[start + 1] = 0.0;
    jj[start] = 1.0e-280;
    for l in (1..=start).rev() {
        jj[l - 1] = (2.0 * l as f64 + 1.0) / r * jj[l] - jj[l + 1];
        if jj[l - 1].abs() > 1.0e250 {
            for v in jj.iter_mut().skip(l - 1) {
                *v *= 1.0e-250;
            }
        }
    }
    // normalize with j_0 = sin(r)/r; u_l = r j_l
    let scale = (r.sin() / r) / jj[0];
    (0..=l_max).map(|l| jj[l] * scale * r).collect()
}

/// Riccati-Bessel v_l(r) = -r y_l(r), upward recurrence (stable).
pub fn riccati_bessel_y(l_max: usize, r: f64) -> Vec<f64> {
    assert!(r > 0.0);
    // y_0 = -cos r / r, y_1 = -cos r / r^2 - sin r / r
    let mut ys = Vec::with_capacity(l_max + 1);
    let y0 = -r.cos() / r;
    ys.push(y0);
    if l_max >= 1 {
        ys.push(-r.cos() / (r * r) - r.sin() / r);
    }
    for l in 1..l_max {
        let next = (2.0 * l as f64 + 1.0) / r * ys[l] - ys[l - 1];
        ys.push(next);
    }
    ys.iter().map(|y| -r * y).collect()
}

/// Configuration for the partial-wave solver.
#[derive(Debug, Clone, Copy)]
pub struct PartialWaveConfig {
    /// radial nodes per unit length
    pub nodes_per_unit: usize,
    /// drop radial nodes where |u_l| falls below this (underflow guard)
    pub u_floor: f64,
    pub max_iterations: usize,
}

impl Default for PartialWaveConfig {
    fn default() -> Self {
        Self {
            nodes_per_unit: 400,
            u_floor: 1.0e-130,
            max_iterations: 60,
        }
    }
}

/// Solve the partial-wave integral equation for every l <= l_max and return
/// the phase shifts. The kernel shrinks like s/(2l+1), so Neumann iteration
/// converges for large l; small l falls back to a dense solve.
pub fn partial_wave_forward(
    q: &PotentialGrid,
    l_max: usize,
    cfg: &PartialWaveConfig,
) -> Result<PhaseShiftSequence> {
    let a = q
        .support_radius
        .ok_or_else(|| Error::InvalidArgument("partial waves need a compact support".into()))?;
    let n = (a * cfg.nodes_per_unit as f64).round() as usize;
    let h = a / n as f64;
    // radial nodes r_j = (j+1/2) h keep the origin singularity of w_l away
    let rs: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * h).collect();
    let qv: Vec<f64> = rs.iter().map(|&r| q.value(r)).collect();

    // tables u[l][j], v[l][j]
    let mut u_tab = vec![vec![0.0; n]; l_max + 1];
    let mut v_tab = vec![vec![0.0; n]; l_max + 1];
    for (j, &r) in rs.iter().enumerate() {
        let uj = riccati_bessel_j(l_max, r);
        let vj = riccati_bessel_y(l_max, r);
        for l in 0..=l_max {
            u_tab[l][j] = uj[l];
            v_tab[l][j] = vj[l];
        }
    }

    let mut ells = Vec::with_capacity(l_max + 1);
    let mut deltas = Vec::with_capacity(l_max + 1);
    let mut a_ells = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        let u = &u_tab[l];
        let v = &v_tab[l];
        // active nodes: |u| above floor and q nonzero contributes
        let active: Vec<usize> = (0..n).filter(|&j| u[j].abs() > cfg.u_floor).collect();
        let m = active.len();
        let psi = if m == 0 {
            Vec::new()
        } else {
            // w_l(s) = i u_l(s) + v_l(s); kernel g(r,s) = -u(min) w(max)
            let kernel = |ja: usize, jb: usize| -> Complex64 {
                let (jr, js) = (active[ja], active[jb]);
                let (lo, hi) = if rs[jr] <= rs[js] { (jr, js) } else { (js, jr) };
                -u[lo] * Complex64::new(v[hi], u[hi])
            };
            let rhs: Vec<Complex64> = active.iter().map(|&j| u[j].into()).collect();
            solve_partial_wave(&kernel, &rhs, &active, &qv, h, cfg)?
        };
        // a_l = - int u q psi dr over active nodes (midpoint rule)
        let mut a_l = Complex64::new(0.0, 0.0);
        for (ja, &j) in active.iter().enumerate() {
            a_l -= h * u[j] * qv[j] * psi[ja];
        }
        // delta from S_l = 1 + 2 i a_l
        let s_l = Complex64::new(1.0, 0.0) + Complex64::new(0.0, 2.0) * a_l;
        let delta = 0.5 * s_l.arg();
        // below the unitary floor the argument degenerates; keep the real
        // part of a_l as the tiny-shift limit
        let delta = if a_l.norm() < 1.0e-14 { a_l.re } else { delta };
        ells.push(l);
        deltas.push(delta);
        a_ells.push(a_l);
    }
    Ok(PhaseShiftSequence {
        ells,
        deltas,
        a_ells,
    })
}

fn solve_partial_wave(
    kernel: &dyn Fn(usize, usize) -> Complex64,
    rhs: &[Complex64],
    active: &[usize],
    qv: &[f64],
    h: f64,
    cfg: &PartialWaveConfig,
) -> Result<Vec<Complex64>> {
    let m = rhs.len();
    // Neumann iteration first
    let mut psi = rhs.to_vec();
    let rhs_norm = rhs.iter().map(|v| v.norm()).fold(0.0_f64, f64::max);
    let mut prev_delta = f64::INFINITY;
    for _ in 0..cfg.max_iterations {
        let mut next = rhs.to_vec();
        for ja in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for jb in 0..m {
                acc += kernel(ja, jb) * qv[active[jb]] * psi[jb];
            }
            next[ja] += h * acc;
        }
        let delta = next
            .iter()
            .zip(&psi)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0_f64, f64::max);
        psi = next;
        if delta < 1.0e-13 * rhs_norm.max(1e-300) {
            return Ok(psi);
        }
        if delta > 4.0 * prev_delta && delta > rhs_norm {
            break; // diverging, use the dense path
        }
        prev_delta = delta;
    }
    // dense complex solve via 2m x 2m real system
    let nn = 2 * m;
    let mut mat = vec![0.0_f64; nn * nn];
    for ja in 0..m {
        for jb in 0..m {
            let g = -h * kernel(ja, jb) * qv[active[jb]];
            mat[(2 * ja) * nn + 2 * jb] = g.re + if ja == jb { 1.0 } else { 0.0 };
            mat[(2 * ja) * nn + 2 * jb + 1] = -g.im;
            mat[(2 * ja + 1) * nn + 2 * jb] = g.im;
            mat[(2 * ja + 1) * nn + 2 * jb + 1] = g.re + if ja == jb { 1.0 } else { 0.0 };
        }
    }
    let mut b = vec![0.0_f64; nn];
    for (ja, v) in rhs.iter().enumerate() {
        b[2 * ja] = v.re;
        b[2 * ja + 1] = v.im;
    }
    let sol = crate::linalg::solve_dense(mat, nn, b)?;
    Ok((0..m)
        .map(|ja| Complex64::new(sol[2 * ja], sol[2 * ja + 1]))
        .collect())
}

/// Outcome of the support-radius extrapolation.
#[derive(Debug, Clone)]
pub struct RadiusEstimate {
    pub a_hat: f64,
    /// raw sequence t_l = ((2l+1)/e) |delta_l|^{1/(2l)}
    pub raw_tail: Vec<(usize, f64)>,
    /// usable l range (shifts above the floating-point floor)
    pub usable: (usize, usize),
    /// rms spread of the tail around the fitted model
    pub tail_spread: f64,
}

/// Estimate the support radius from the decay of the phase shifts,
/// extrapolating t_l = a (1 + c/l) in 1/l over the usable tail.
pub fn radius_estimate(ps: &PhaseShiftSequence) -> Result<RadiusEstimate> {
    let floor = 1.0e-280;
    let usable: Vec<(usize, f64)> = ps
        .ells
        .iter()
        .zip(&ps.deltas)
        .filter(|(l, d)| **l >= 4 && d.abs() > floor)
        .map(|(l, d)| {
            let lf = *l as f64;
            let t = (2.0 * lf + 1.0) / std::f64::consts::E * d.abs().powf(1.0 / (2.0 * lf));
            (*l, t)
        })
        .collect();
    if usable.len() < 4 {
        return Err(Error::Underflow {
            usable: usable.len(),
        });
    }
    // weight the top of the range; least squares for t = a + b/l
    let tail: Vec<(usize, f64)> = usable
        .iter()
        .skip(usable.len().saturating_sub(usable.len() / 2 + 4))
        .cloned()
        .collect();
    let (mut s0, mut s1, mut s2, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (l, t) in &tail {
        let x = 1.0 / *l as f64;
        s0 += 1.0;
        s1 += x;
        s2 += x * x;
        sy += t;
        sxy += x * t;
    }
    let det = s0 * s2 - s1 * s1;
    let a_hat = (s2 * sy - s1 * sxy) / det;
    let b = (s0 * sxy - s1 * sy) / det;
    let spread = (tail
        .iter()
        .map(|(l, t)| {
            let model = a_hat + b / *l as f64;
            (t - model) * (t - model)
        })
        .sum::<f64>()
        / tail.len() as f64)
        .sqrt();
    Ok(RadiusEstimate {
        a_hat,
        raw_tail: usable,
        usable: (tail.first().unwrap().0, tail.last().unwrap().0),
        tail_spread: spread,
    })
}

/// Configuration of the characteristic-variable kernel solve.
#[derive(Debug, Clone, Copy)]
pub struct FixedEnergyKernelConfig {
    /// extent of eta = ln(r/rho)
    pub eta_max: f64,
    /// xi reaches down to 2 ln a - xi_depth
    pub xi_depth: f64,
    pub step: f64,
    pub max_iterations: usize,
}

impl Default for FixedEnergyKernelConfig {
    fn default() -> Self {
        Self {
            eta_max: 4.0,
            xi_depth: 24.0,
            step: 0.02,
            max_iterations: 120,
        }
    }
}

/// Kernel field L(xi, eta) plus the machinery to read K(r, rho) off it.
#[derive(Debug, Clone)]
pub struct FixedEnergyField {
    pub xis: Vec<f64>,
    pub etas: Vec<f64>,
    /// l[i_eta][i_xi]
    pub l: Vec<Vec<f64>>,
    pub iterations: usize,
}

impl FixedEnergyField {
    pub fn l_at(&self, xi: f64, eta: f64) -> f64 {
        let hx = self.xis[1] - self.xis[0];
        let he = self.etas[1] - self.etas[0];
        let fx = ((xi - self.xis[0]) / hx).clamp(0.0, (self.xis.len() - 1) as f64);
        let fe = (eta / he).clamp(0.0, (self.etas.len() - 1) as f64);
        let j0 = (fe.floor() as usize).min(self.etas.len() - 2);
        let ae = fe - j0 as f64;
        // cubic in xi (the boundary data is curved there), linear in eta
        let row = |j: usize| -> f64 { cubic_sample(&self.l[j], fx) };
        row(j0) * (1.0 - ae) + row(j0 + 1) * ae
    }

    /// K(r, rho) = L(ln(r rho), ln(r/rho)) e^{xi/2}.
    pub fn kernel_at(&self, r: f64, rho: f64) -> f64 {
        if rho <= 0.0 || r <= 0.0 {
            return 0.0;
        }
        let xi = (r * rho).ln();
        let eta = (r / rho).ln();
        if eta > *self.etas.last().unwrap() || xi < self.xis[0] {
            return 0.0; // kernel is negligible there by construction
        }
        self.l_at(xi, eta) * (0.5 * xi).exp()
    }
}

/// Solve the characteristic-variable Volterra equation
///     L = b - V L,  (V L)(xi,eta) = int_{-inf}^{xi} int_0^{eta} Q L
/// by Picard iteration on a rectangular lattice, and wrap the result as a
/// triangular kernel on an r-grid.
pub fn fixed_energy_kernel(
    q: &PotentialGrid,
    cfg: &FixedEnergyKernelConfig,
) -> Result<(TransformationKernel, FixedEnergyField)> {
    let a = q
        .support_radius
        .ok_or_else(|| Error::InvalidArgument("kernel needs a compact support".into()))?;
    let xi_max = 2.0 * a.ln();
    let xi_min = xi_max - cfg.xi_depth;
    let nx = (cfg.xi_depth / cfg.step).round() as usize;
    let ne = (cfg.eta_max / cfg.step).round() as usize;
    let xis: Vec<f64> = (0..=nx).map(|i| xi_min + cfg.step * i as f64).collect();
    let etas: Vec<f64> = (0..=ne).map(|j| cfg.step * j as f64).collect();

    // boundary b(xi) = (1/2) int_0^{e^{xi/2}} s q(s) ds, exact on the
    // piecewise-linear potential
    let b: Vec<f64> = xis
        .iter()
        .map(|xi| 0.5 * q.first_moment_to((0.5 * xi).exp()))
        .collect();
    // Q(s,t) = (1/4)[e^{s+t}(1 - q(e^{(s+t)/2})) - e^{s-t}]
    let qfield = |s: f64, t: f64| -> f64 {
        let e_plus = (s + t).exp();
        let e_minus = (s - t).exp();
        0.25 * (e_plus * (1.0 - q.value((0.5 * (s + t)).exp())) - e_minus)
    };
    let mut qf = vec![vec![0.0_f64; nx + 1]; ne + 1];
    for (j, &t) in etas.iter().enumerate() {
        for (i, &s) in xis.iter().enumerate() {
            qf[j][i] = qfield(s, t);
        }
    }

    let h = cfg.step;
    let mut l: Vec<Vec<f64>> = (0..=ne).map(|_| b.clone()).collect();
    let mut iterations = 0;
    loop {
        iterations += 1;
        // inner cumulative over eta: c[j][i] = int_0^{eta_j} Q(s_i, t) L dt
        let mut c = vec![vec![0.0_f64; nx + 1]; ne + 1];
        for i in 0..=nx {
            let mut acc = 0.0;
            for j in 1..=ne {
                acc += 0.5
                    * h
                    * (qf[j - 1][i] * l[j - 1][i] + qf[j][i] * l[j][i]);
                c[j][i] = acc;
            }
        }
        // outer cumulative over xi and update
        let mut worst = 0.0_f64;
        let mut scale = 0.0_f64;
        for j in 0..=ne {
            let mut acc = 0.0;
            let mut prev = c[j][0];
            for i in 0..=nx {
                if i > 0 {
                    acc += 0.5 * h * (prev + c[j][i]);
                    prev = c[j][i];
                }
                let v = b[i] - acc;
                worst = worst.max((v - l[j][i]).abs());
                scale = scale.max(v.abs());
                l[j][i] = v;
            }
        }
        if worst < 1.0e-12 * scale.max(1.0) {
            break;
        }
        if iterations >= cfg.max_iterations {
            return Err(Error::IterationDiverged(format!(
                "kernel iteration stalled at delta {worst:.3e}"
            )));
        }
        if !worst.is_finite() {
            return Err(Error::IterationDiverged("kernel iteration overflow".into()));
        }
    }

    let field = FixedEnergyField {
        xis,
        etas,
        l,
        iterations,
    };

    // triangular kernel on an r-grid
    let n_r = 200;
    let hr = a / n_r as f64;
    let rs: Vec<f64> = (0..=n_r).map(|i| hr * i as f64).collect();
    let mut values = Vec::with_capacity(n_r + 1);
    let mut diagonal = Vec::with_capacity(n_r + 1);
    for (i, &r) in rs.iter().enumerate() {
        let mut row = Vec::with_capacity(i + 1);
        for j in 0..=i {
            row.push(field.kernel_at(r, rs[j]));
        }
        diagonal.push(if i == 0 { 0.0 } else { row[i] });
        values.push(row);
    }
    Ok((
        TransformationKernel {
            xs: rs,
            values,
            diagonal,
            kind: KernelKind::FixedEnergyK,
            y_step: hr,
        },
        field,
    ))
}

/// Four-point Lagrange interpolation at fractional index `fx`.
fn cubic_sample(row: &[f64], fx: f64) -> f64 {
    let n = row.len();
    let i = (fx.floor() as isize).clamp(1, n as isize - 3) as usize;
    let t = fx - i as f64;
    let (a, b, c, d) = (row[i - 1], row[i], row[i + 1], row[i + 2]);
    let wa = -t * (t - 1.0) * (t - 2.0) / 6.0;
    let wb = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    let wc = -(t + 1.0) * t * (t - 2.0) / 2.0;
    let wd = (t + 1.0) * t * (t - 1.0) / 6.0;
    a * wa + b * wb + c * wc + d * wd
}

/// mu_1(s) = int_{-inf}^s (1/2) e^u (1 + |q(e^{u/2})|) du on the field grid,
/// the weight entering the growth bound of the kernel.
pub fn growth_weight(q: &PotentialGrid, xis: &[f64]) -> Vec<f64> {
    let mu: Vec<f64> = xis
        .iter()
        .map(|&s| 0.5 * s.exp() * (1.0 + q.value((0.5 * s).exp()).abs()))
        .collect();
    let mut cum = cumulative_trapezoid(xis, &mu);
    // analytic head below the grid: integral of (1/2) e^u (1+|q(0)|)
    let head = 0.5 * xis[0].exp() * (1.0 + q.qs[0].abs());
    for v in cum.iter_mut() {
        *v += head;
    }
    cum
}
