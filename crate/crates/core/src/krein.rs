//! Krein's inversion chain: f -> H -> resolvent corners -> a(x) -> q, with
//! a Levinson-style Toeplitz recursion that solves the whole family of
//! truncated convolution equations in O(n^2) total, the coupled first-order
//! system for the wave amplitudes E(x, +-k), bound-state index reduction,
//! and the identity tying the accelerant to the Gel'fand-Levitan profile.
//!
//! The convolution equation
//!     Gamma_x(t,s) + int_0^x H(t-u) Gamma_x(u,s) du = H(t-s),  s = 0,
//! is collocated at midpoint nodes, which keeps the matrix exactly Toeplitz
//! for every interval length; corner values at t = x and t = 0 come from the
//! Nystrom interpolation formula, which needs H on the half-step lattice.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{DecayClass, PotentialGrid};
use crate::linalg::solve_dense;
use crate::marchenko::derivative_uniform;
use crate::quad::{fourier_cos_transform, Direction};
use crate::types::{JostData, ScatteringData};

/// Accelerant H(t) on a uniform half-step lattice; even extension implied.
#[derive(Debug, Clone)]
pub struct KreinKernel {
    /// storage step; the family solve advances by 2*dt per step
    pub dt: f64,
    /// H(m * dt), m = 0..=M
    pub h: Vec<f64>,
    /// min over the k-grid of 1 + Htilde(k) = 1/|f(k)|^2
    pub htilde_min: f64,
}

impl KreinKernel {
    pub fn at(&self, t: f64) -> f64 {
        let a = t.abs() / self.dt;
        let j = (a.floor() as usize).min(self.h.len() - 2);
        let frac = a - j as f64;
        self.h[j] * (1.0 - frac) + self.h[j + 1] * frac
    }

    /// Value at a half-step multiple m * dt, exact lattice read.
    fn lattice(&self, m: i64) -> f64 {
        let idx = m.unsigned_abs() as usize;
        if idx < self.h.len() {
            self.h[idx]
        } else {
            0.0
        }
    }
}

/// H(t) = (1/pi) int cos(kt) (1/|f(k)|^2 - 1) dk on [0, t_max].
///
/// Requires index-zero data: no bound states and no resonance.
pub fn h_from_jost(jd: &JostData, t_max: f64, dt: f64) -> Result<KreinKernel> {
    if !jd.bound_ks.is_empty() || jd.resonance {
        return Err(Error::InvalidArgument(
            "accelerant needs index-zero data (no bound states, no resonance)".into(),
        ));
    }
    let mut htilde_min = f64::INFINITY;
    let g: Vec<f64> = jd
        .f
        .iter()
        .map(|f| {
            let m2 = f.norm_sqr();
            htilde_min = htilde_min.min(1.0 / m2);
            1.0 / m2 - 1.0
        })
        .collect();
    if htilde_min <= 0.0 || !htilde_min.is_finite() {
        return Err(Error::PositivityViolated {
            k: 0.0,
            value: htilde_min,
        });
    }
    let n = (t_max / dt).round() as usize;
    let ts: Vec<f64> = (0..=n).map(|m| dt * m as f64).collect();
    let vals = fourier_cos_transform(&jd.ks, &g, &ts, Direction::Forward)?;
    let h: Vec<f64> = vals.iter().map(|v| v / std::f64::consts::PI).collect();
    Ok(KreinKernel {
        dt,
        h,
        htilde_min,
    })
}

/// Corner traces of the resolvent family plus the Levinson reflection
/// coefficients.
#[derive(Debug, Clone)]
pub struct KreinFamily {
    /// interval step of the family: x_n = n * delta
    pub delta: f64,
    /// Gamma_{x_n}(x_n, 0)
    pub corner_end: Vec<f64>,
    /// Gamma_{x_n}(0, 0)
    pub corner_zero: Vec<f64>,
    /// reflection coefficient magnitudes (all < 1 on valid data)
    pub reflections: Vec<f64>,
}

/// Solve the whole family of truncated convolution equations by the
/// Levinson recursion over midpoint collocation nodes: O(n) work per added
/// node, O(n^2) for the family.
pub fn solve_krein_family(hk: &KreinKernel, x_max: f64) -> Result<KreinFamily> {
    let delta = 2.0 * hk.dt;
    let n_max = (x_max / delta).round() as usize;
    if 2 * n_max >= hk.h.len() {
        return Err(Error::InvalidArgument(format!(
            "accelerant too short: need {} half-step samples, got {}",
            2 * n_max + 1,
            hk.h.len()
        )));
    }
    // normalized Toeplitz: diagonal d = 1 + delta H(0), off-diagonals
    // rho_m = delta H(m delta)/d; rhs b_j = H((j+1/2) delta)/d
    let d = 1.0 + delta * hk.lattice(0);
    if d.abs() < 1.0e-12 {
        return Err(Error::RecursionBreakdown {
            step: 0,
            coeff: d,
        });
    }
    let rho = |m: usize| delta * hk.lattice(2 * m as i64) / d;
    let rhs = |j: usize| hk.lattice(2 * j as i64 + 1) / d;

    let mut corner_end = Vec::with_capacity(n_max + 1);
    let mut corner_zero = Vec::with_capacity(n_max + 1);
    let mut reflections = Vec::with_capacity(n_max);
    // n = 0: empty interval, Gamma_0(t,s) = H(t-s)
    corner_end.push(hk.lattice(0));
    corner_zero.push(hk.lattice(0));

    // Levinson state after step k: y solves T_k y = -(rho_1..rho_k),
    // x solves T_k x = b_{0..k-1}
    let mut y = vec![-rho(1)];
    let mut x = vec![rhs(0)];
    let mut beta = 1.0;
    let mut alpha = -rho(1);
    reflections.push(alpha.abs());
    if alpha.abs() >= 1.0 {
        return Err(Error::RecursionBreakdown {
            step: 1,
            coeff: alpha,
        });
    }
    push_corners(hk, delta, 1, &x, &mut corner_end, &mut corner_zero);

    for k in 1..n_max {
        beta *= 1.0 - alpha * alpha;
        if beta <= 0.0 || !beta.is_finite() {
            return Err(Error::RecursionBreakdown {
                step: k,
                coeff: beta,
            });
        }
        // extend the solution
        let mut conv = 0.0;
        for i in 1..=k {
            conv += rho(i) * x[k - i];
        }
        let mu = (rhs(k) - conv) / beta;
        for i in 0..k {
            x[i] += mu * y[k - 1 - i];
        }
        x.push(mu);
        // extend the predictor
        let mut conv_y = 0.0;
        for i in 1..=k {
            conv_y += rho(i) * y[k - i];
        }
        alpha = -(rho(k + 1) + conv_y) / beta;
        reflections.push(alpha.abs());
        if alpha.abs() >= 1.0 {
            return Err(Error::RecursionBreakdown {
                step: k + 1,
                coeff: alpha,
            });
        }
        let mut z = y.clone();
        for i in 0..k {
            z[i] += alpha * y[k - 1 - i];
        }
        z.push(alpha);
        y = z;

        push_corners(hk, delta, k + 1, &x, &mut corner_end, &mut corner_zero);
    }

    Ok(KreinFamily {
        delta,
        corner_end,
        corner_zero,
        reflections,
    })
}

/// Nystrom interpolation of the corner values from the midpoint solution.
fn push_corners(
    hk: &KreinKernel,
    delta: f64,
    n: usize,
    sol: &[f64],
    corner_end: &mut Vec<f64>,
    corner_zero: &mut Vec<f64>,
) {
    // Gamma(t, 0) = H(t) - delta sum_j H(t - u_j) sol_j, u_j = (j+1/2) delta
    let mut end = hk.lattice(2 * n as i64);
    let mut zero = hk.lattice(0);
    for (j, s) in sol.iter().enumerate().take(n) {
        // t = n delta: arg (n - j - 1/2) delta = (2(n-j) - 1) half-steps
        end -= delta * hk.lattice(2 * (n - j) as i64 - 1) * s;
        // t = 0: arg -(j + 1/2) delta
        zero -= delta * hk.lattice(2 * j as i64 + 1) * s;
    }
    corner_end.push(end);
    corner_zero.push(zero);
}

/// Dense Nystrom oracle for one interval length, same discretization as the
/// Levinson path.
pub fn dense_gamma_solve(hk: &KreinKernel, n: usize) -> Result<Vec<f64>> {
    let delta = 2.0 * hk.dt;
    let mut m = vec![0.0_f64; n * n];
    for j in 0..n {
        for l in 0..n {
            let mut v = delta * hk.lattice(2 * (j as i64 - l as i64));
            if j == l {
                v += 1.0;
            }
            m[j * n + l] = v;
        }
    }
    let b: Vec<f64> = (0..n).map(|j| hk.lattice(2 * j as i64 + 1)).collect();
    solve_dense(m, n, b)
}

/// Potentials from the corner traces, both recipes:
/// primary q = a^2 + a' with a(x) = 2 Gamma_{2x}(2x, 0), and the
/// alternative q = 2 d/dx [Gamma_{2x}(2x,0) - Gamma_{2x}(0,0)].
#[derive(Debug, Clone)]
pub struct KreinPotentials {
    pub primary: PotentialGrid,
    pub alternative: PotentialGrid,
    /// a(x) on the same grid
    pub amplitude: Vec<f64>,
    pub max_discrepancy: f64,
}

pub fn q_from_gamma(family: &KreinFamily, hk: &KreinKernel) -> Result<KreinPotentials> {
    let n = family.corner_end.len();
    let dx = 0.5 * family.delta; // x_m = m delta/2 since 2x runs over steps
    let xs: Vec<f64> = (0..n).map(|m| dx * m as f64).collect();
    let mut a: Vec<f64> = family.corner_end.iter().map(|g| 2.0 * g).collect();
    // anchor a(0) = 2H(0) exactly
    a[0] = 2.0 * hk.lattice(0);
    let a_prime = derivative_uniform(&a, dx);
    let q1: Vec<f64> = a.iter().zip(&a_prime).map(|(av, ap)| av * av + ap).collect();
    let diff: Vec<f64> = family
        .corner_end
        .iter()
        .zip(&family.corner_zero)
        .map(|(e, z)| e - z)
        .collect();
    let q2: Vec<f64> = derivative_uniform(&diff, dx)
        .iter()
        .map(|d| 2.0 * d)
        .collect();
    let max_disc = q1
        .iter()
        .zip(&q2)
        .map(|(u, v)| (u - v).abs())
        .fold(0.0_f64, f64::max);
    Ok(KreinPotentials {
        primary: PotentialGrid::new(xs.clone(), q1, None, DecayClass::L11)?,
        alternative: PotentialGrid::new(xs, q2, None, DecayClass::L11)?,
        amplitude: a,
        max_discrepancy: max_disc,
    })
}

/// Wave amplitudes E(x, k), E(x, -k) from the coupled first-order system
/// E' = ikE - a(x) E_-, integrated by RK4 on the doubled step so midpoint
/// samples of a(x) stay on its grid.
#[derive(Debug, Clone)]
pub struct WaveAmplitudes {
    pub xs: Vec<f64>,
    pub ks: Vec<f64>,
    /// e[m][ix] = E(x_ix, k_m)
    pub e_plus: Vec<Vec<Complex64>>,
    pub e_minus: Vec<Vec<Complex64>>,
}

impl WaveAmplitudes {
    /// psi(x, k) = (E - E_-)/(2i)
    pub fn psi(&self, m: usize, ix: usize) -> Complex64 {
        (self.e_plus[m][ix] - self.e_minus[m][ix]) / Complex64::new(0.0, 2.0)
    }
}

pub fn e_system(a: &[f64], dx: f64, ks: &[f64]) -> WaveAmplitudes {
    let n = (a.len() - 1) / 2; // RK4 steps of size 2 dx
    let h = 2.0 * dx;
    let xs: Vec<f64> = (0..=n).map(|i| h * i as f64).collect();
    let mut e_plus = Vec::with_capacity(ks.len());
    let mut e_minus = Vec::with_capacity(ks.len());
    for &k in ks {
        let ik = Complex64::new(0.0, k);
        let mut ep = Vec::with_capacity(n + 1);
        let mut em = Vec::with_capacity(n + 1);
        let mut u = Complex64::new(1.0, 0.0);
        let mut v = Complex64::new(1.0, 0.0);
        ep.push(u);
        em.push(v);
        for i in 0..n {
            let a0 = a[2 * i];
            let am = a[2 * i + 1];
            let a1 = a[2 * i + 2];
            let f = |av: f64, uu: Complex64, vv: Complex64| {
                (ik * uu - av * vv, -ik * vv - av * uu)
            };
            let (k1u, k1v) = f(a0, u, v);
            let (k2u, k2v) = f(am, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
            let (k3u, k3v) = f(am, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
            let (k4u, k4v) = f(a1, u + h * k3u, v + h * k3v);
            u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            ep.push(u);
            em.push(v);
        }
        e_plus.push(ep);
        e_minus.push(em);
    }
    WaveAmplitudes {
        xs,
        ks: ks.to_vec(),
        e_plus,
        e_minus,
    }
}

/// Multiply out the bound states (and resonance) so the reduced S-matrix has
/// index zero. Returns the reduced data and the removed (k_j, s_j) pairs.
pub fn reduce_bound_states(
    sd: &ScatteringData,
    gamma: f64,
) -> Result<(ScatteringData, Vec<(f64, f64)>)> {
    sd.check_shape()?;
    let j = sd.bound_ks.len() as i64;
    let odd = sd.index == -2 * j - 1;
    if !odd && sd.index != -2 * j {
        return Err(Error::IndexMismatch {
            index: sd.index,
            bound: sd.bound_ks.len(),
        });
    }
    if sd.index == 0 {
        return Ok((sd.clone(), vec![]));
    }
    if odd {
        for &kj in &sd.bound_ks {
            if (gamma - kj).abs() < 1.0e-9 {
                return Err(Error::GammaCollision { gamma, kj });
            }
        }
    }
    let s1: Vec<Complex64> = sd
        .ks
        .iter()
        .zip(&sd.s)
        .map(|(&k, s)| {
            let mut w = crate::riemann::blaschke_at(
                Complex64::new(k, 0.0),
                &sd.bound_ks,
                odd.then_some(gamma),
            );
            w *= w;
            s * w
        })
        .collect();
    let removed: Vec<(f64, f64)> = sd
        .bound_ks
        .iter()
        .cloned()
        .zip(sd.norming.iter().cloned())
        .collect();
    Ok((
        ScatteringData {
            ks: sd.ks.clone(),
            s: s1,
            bound_ks: vec![],
            norming: vec![],
            index: 0,
        },
        removed,
    ))
}

/// Residual of the identity tying the accelerant to the Gel'fand-Levitan
/// profile: M(x) = H(x), where M is assembled through the spectral-density
/// route (density -> excess profile -> M = M(0) - L).
pub fn gl_relation_check(hk: &KreinKernel, jd: &JostData) -> Result<f64> {
    let sf = crate::forward::spectral_function(jd, &[]);
    let t_max = hk.dt * (hk.h.len() - 1) as f64;
    let profile = crate::gelfand_levitan::build_l(&sf, t_max, hk.dt)?;
    // M(0) through the same density route
    let ks: Vec<f64> = sf.lambdas.iter().map(|l| l.sqrt()).collect();
    let w: Vec<f64> = ks
        .iter()
        .zip(&sf.density)
        .map(|(k, d)| (d - k / std::f64::consts::PI) / k)
        .collect();
    let m0 = fourier_cos_transform(&ks, &w, &[0.0], Direction::Forward)?[0];
    let mut worst = 0.0_f64;
    for (m, h_val) in hk.h.iter().enumerate() {
        let m_val = m0 - profile.values[m.min(profile.values.len() - 1)];
        worst = worst.max((m_val - h_val).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::uniform_from;

    /// Benchmark accelerant: f = (k+i)/(k+2i) gives 1/|f|^2 - 1 = 3/(k^2+1)
    /// and H(t) = 1.5 e^{-|t|}.
    fn benchmark_jost(n: usize, dk: f64) -> JostData {
        let ks = uniform_from(dk, dk, n);
        let f: Vec<Complex64> = ks
            .iter()
            .map(|&k| Complex64::new(k, 1.0) / Complex64::new(k, 2.0))
            .collect();
        JostData {
            ks,
            f,
            fprime0: vec![],
            bound_ks: vec![],
            fdot_at_bound: vec![],
            resonance: false,
        }
    }

    #[test]
    fn accelerant_matches_closed_form() {
        let jd = benchmark_jost(20000, 0.01);
        let hk = h_from_jost(&jd, 30.0, 0.005).unwrap();
        for (m, h) in hk.h.iter().enumerate().step_by(400) {
            let t = hk.dt * m as f64;
            let want = 1.5 * (-t).exp();
            if want > 1e-3 {
                assert!(
                    (h - want).abs() / want < 1e-5,
                    "t={t}: H={h}, want {want}"
                );
            } else {
                assert!((h - want).abs() < 1e-8, "t={t}: H={h}, want {want}");
            }
        }
        // 1 + Htilde = (k^2+4)/(k^2+1) >= 1, min at k -> inf
        assert!(hk.htilde_min >= 1.0 - 1e-12);
    }

    #[test]
    fn zero_accelerant_gives_zero_corners() {
        let hk = KreinKernel {
            dt: 0.01,
            h: vec![0.0; 4001],
            htilde_min: 1.0,
        };
        let fam = solve_krein_family(&hk, 3.0).unwrap();
        assert!(fam.corner_end.iter().all(|v| *v == 0.0));
        assert!(fam.corner_zero.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn levinson_matches_dense_oracle() {
        let jd = benchmark_jost(20000, 0.01);
        let hk = h_from_jost(&jd, 30.0, 0.005).unwrap();
        let fam = solve_krein_family(&hk, 5.0).unwrap();
        for n in [10usize, 50, 137, 300, 499] {
            let sol = dense_gamma_solve(&hk, n).unwrap();
            let mut end = hk.lattice(2 * n as i64);
            let mut zero = hk.lattice(0);
            let delta = 2.0 * hk.dt;
            for (j, s) in sol.iter().enumerate() {
                end -= delta * hk.lattice(2 * (n - j) as i64 - 1) * s;
                zero -= delta * hk.lattice(2 * j as i64 + 1) * s;
            }
            assert!(
                (end - fam.corner_end[n]).abs() < 1e-8,
                "n={n}: end corner {:.3e} vs dense {:.3e}",
                fam.corner_end[n],
                end
            );
            assert!((zero - fam.corner_zero[n]).abs() < 1e-8, "n={n}");
        }
        // positive definiteness shows as reflection magnitudes < 1
        assert!(fam.reflections.iter().all(|r| *r < 1.0));
    }

    #[test]
    fn corner_symmetry_under_argument_reversal() {
        // Gamma_x(0, x) = Gamma_x(x, 0) via a dense solve with rhs H(t - x)
        let jd = benchmark_jost(20000, 0.01);
        let hk = h_from_jost(&jd, 30.0, 0.005).unwrap();
        let fam = solve_krein_family(&hk, 4.0).unwrap();
        let delta = 2.0 * hk.dt;
        for n in [40usize, 200, 380] {
            let mut m = vec![0.0_f64; n * n];
            for j in 0..n {
                for l in 0..n {
                    let mut v = delta * hk.lattice(2 * (j as i64 - l as i64));
                    if j == l {
                        v += 1.0;
                    }
                    m[j * n + l] = v;
                }
            }
            // rhs H(u_j - x), u_j = (j+1/2) delta, x = n delta
            let b: Vec<f64> = (0..n)
                .map(|j| hk.lattice(2 * (j as i64 - n as i64) + 1))
                .collect();
            let sol = solve_dense(m, n, b).unwrap();
            // Gamma_x(0, x) = H(-x) - delta sum H(-u_j) sol_j
            let mut zero_x = hk.lattice(2 * n as i64);
            for (j, s) in sol.iter().enumerate() {
                zero_x -= delta * hk.lattice(2 * j as i64 + 1) * s;
            }
            assert!(
                (zero_x - fam.corner_end[n]).abs() < 1e-10,
                "n={n}: {zero_x} vs {}",
                fam.corner_end[n]
            );
        }
    }

    #[test]
    fn free_wave_amplitudes() {
        let a = vec![0.0; 401];
        let waves = e_system(&a, 0.005, &[1.5]);
        for (i, &x) in waves.xs.iter().enumerate() {
            let want = Complex64::new(0.0, 1.5 * x).exp();
            assert!((waves.e_plus[0][i] - want).norm() < 5e-9);
            // psi = sin(kx)
            assert!((waves.psi(0, i) - (1.5 * x).sin()).norm() < 5e-9);
        }
    }

    #[test]
    fn wave_amplitudes_solve_the_schroedinger_equation() {
        let jd = benchmark_jost(20000, 0.01);
        let hk = h_from_jost(&jd, 30.0, 0.005).unwrap();
        let fam = solve_krein_family(&hk, 5.0).unwrap();
        let pots = q_from_gamma(&fam, &hk).unwrap();
        let k = 1.3;
        let waves = e_system(&pots.amplitude, 0.005, &[k]);
        // psi(0) = 0, psi'(0) = k
        assert!(waves.psi(0, 0).norm() < 1e-12);
        let h = waves.xs[1] - waves.xs[0];
        let dpsi0 = (waves.psi(0, 1) - waves.psi(0, 0)) / h;
        assert!((dpsi0.re - k).abs() < 1e-2);
        // -psi'' + q psi = k^2 psi with q = a^2 + a' built from the same a;
        // the identity is algebraic, so a fourth-order Laplacian keeps the
        // finite-difference truncation out of the residual
        let mut worst = 0.0_f64;
        for i in 2..waves.xs.len() - 2 {
            let lap = (-waves.psi(0, i - 2) + 16.0 * waves.psi(0, i - 1)
                - 30.0 * waves.psi(0, i)
                + 16.0 * waves.psi(0, i + 1)
                - waves.psi(0, i + 2))
                / (12.0 * h * h);
            let q = pots.primary.value(waves.xs[i]);
            let resid = (-lap + q * waves.psi(0, i) - k * k * waves.psi(0, i)).norm();
            worst = worst.max(resid);
        }
        assert!(worst < 1e-5, "ODE residual {worst:.2e}");
    }

    #[test]
    fn wave_amplitude_approaches_jost_asymptote() {
        let jd = benchmark_jost(20000, 0.01);
        let hk = h_from_jost(&jd, 30.0, 0.005).unwrap();
        let fam = solve_krein_family(&hk, 12.0).unwrap();
        let pots = q_from_gamma(&fam, &hk).unwrap();
        for k in [0.7, 1.5, 3.0] {
            let waves = e_system(&pots.amplitude, 0.005, &[k]);
            let last = waves.xs.len() - 1;
            let got = waves.e_plus[0][last]
                * Complex64::new(0.0, -k * waves.xs[last]).exp();
            let want = (Complex64::new(k, 1.0) / Complex64::new(k, 2.0)).conj();
            assert!(
                (got - want).norm() < 1e-3,
                "k={k}: E e^(-ikx) = {got}, f(-k) = {want}"
            );
        }
    }

    #[test]
    fn index_reduction_by_blaschke_squares() {
        use crate::winding::winding_index;
        let ks = uniform_from(0.005, 0.005, 40000);
        let nu1 = 2.0_f64.sqrt();
        // bound-state family, index -2
        let s: Vec<Complex64> = ks
            .iter()
            .map(|&k| {
                (Complex64::new(k, 1.0) * Complex64::new(k, nu1))
                    / (Complex64::new(k, -1.0) * Complex64::new(k, -nu1))
            })
            .collect();
        let sd = ScatteringData {
            ks: ks.clone(),
            s,
            bound_ks: vec![1.0],
            norming: vec![2.0],
            index: -2,
        };
        let (reduced, removed) = reduce_bound_states(&sd, 1.0).unwrap();
        assert_eq!(winding_index(&reduced.ks, &reduced.s).unwrap(), 0);
        assert_eq!(removed, vec![(1.0, 2.0)]);

        // resonance family, index -1, odd reduction with W = k/(k+i gamma)
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
        let (reduced, _) = reduce_bound_states(&sd, 1.0).unwrap();
        assert_eq!(winding_index(&reduced.ks, &reduced.s).unwrap(), 0);
    }

    #[test]
    fn accelerant_equals_gl_profile_route() {
        let jd = benchmark_jost(20000, 0.01);
        let hk = h_from_jost(&jd, 20.0, 0.01).unwrap();
        let resid = gl_relation_check(&hk, &jd).unwrap();
        assert!(resid < 1e-8, "M vs H residual {resid:.2e}");
    }
}
