//! Scalar Riemann factorizations for data conversion: recover the Jost
//! function from S(k), from its modulus, or from the boundary impedance,
//! with Blaschke factors carrying the bound-state zeros.
//!
//! All factorizations reduce to Hilbert-transform quadrature of a real
//! profile on the half-line. The profile is extended to t = 0, continued
//! past the grid end by a fitted inverse-power model, and the Cauchy
//! principal value is taken by singularity subtraction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::uniform_step;
use crate::quad::{fit_inverse_power_tail, pv_cauchy_on_grid, trapezoid, InversePowerTail};
use crate::types::{IFunction, JostData, ScatteringData, SpectralFunction};

/// Blaschke product w(k) carrying zeros at ik_j, optionally times the
/// resonance factor k/(k + i kappa).
pub fn blaschke_product(
    ks: &[f64],
    bound_ks: &[f64],
    kappa: Option<f64>,
) -> Result<Vec<Complex64>> {
    if let Some(kp) = kappa {
        for &kj in bound_ks {
            if (kp - kj).abs() < 1.0e-9 {
                return Err(Error::KappaCollision { kappa: kp, kj });
            }
        }
    }
    Ok(ks
        .iter()
        .map(|&k| blaschke_at(Complex64::new(k, 0.0), bound_ks, kappa))
        .collect())
}

/// Blaschke factor at a complex point (used off-axis for derivative probes).
pub fn blaschke_at(k: Complex64, bound_ks: &[f64], kappa: Option<f64>) -> Complex64 {
    let mut w = Complex64::new(1.0, 0.0);
    for &kj in bound_ks {
        w *= (k - Complex64::new(0.0, kj)) / (k + Complex64::new(0.0, kj));
    }
    if let Some(kp) = kappa {
        w *= k / (k + Complex64::new(0.0, kp));
    }
    w
}

// ---------------------------------------------------------------------------
// Hilbert-transform engine on a half-line profile.
// ---------------------------------------------------------------------------

/// Symmetry of the profile under t -> -t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Parity {
    Odd,
    Even,
}

/// Half-line profile with origin value, tail model, and PV machinery.
struct HalfLineProfile {
    /// grid including the 0 node and the appended tail region
    ts: Vec<f64>,
    /// profile on `ts`
    p: Vec<f64>,
    /// number of data nodes (offset of eval node i in `ts` is i + 1)
    tail_model: InversePowerTail,
    t_end: f64,
    parity: Parity,
}

impl HalfLineProfile {
    /// Build from samples on a uniform positive grid. `origin` fixes p(0);
    /// when None it is extrapolated cubically.
    fn new(ks: &[f64], p: &[f64], parity: Parity, origin: Option<f64>) -> Result<Self> {
        let h = uniform_step(ks)?;
        if (ks[0] - h).abs() > 1.0e-9 * h {
            return Err(Error::MalformedGrid(
                "profile grid must start one step from 0".into(),
            ));
        }
        let tail_model = fit_inverse_power_tail(ks, p);
        let k_max = *ks.last().unwrap();
        let p0 = origin.unwrap_or_else(|| {
            if p.len() >= 4 {
                4.0 * p[0] - 6.0 * p[1] + 4.0 * p[2] - p[3]
            } else {
                p[0]
            }
        });
        let mut ts = Vec::with_capacity(ks.len() + 600);
        let mut pv = Vec::with_capacity(ks.len() + 600);
        ts.push(0.0);
        pv.push(p0);
        ts.extend_from_slice(ks);
        pv.extend_from_slice(p);
        // extension region [k_max, 4 k_max] sampled from the tail model
        let n_ext = 600;
        let h_ext = 3.0 * k_max / n_ext as f64;
        for i in 1..=n_ext {
            let t = k_max + h_ext * i as f64;
            ts.push(t);
            pv.push(tail_model.a / t + tail_model.b / (t * t) + tail_model.c / (t * t * t));
        }
        let t_end = *ts.last().unwrap();
        Ok(Self {
            ts,
            p: pv,
            tail_model,
            t_end,
            parity,
        })
    }

    /// Full-axis PV integral of p_ext(t)/(t - k) dt at data node `i`
    /// (p extended to t < 0 by the declared parity), including the analytic
    /// remainder beyond the extension region.
    fn pv_full_axis(&self, i: usize) -> Result<f64> {
        let node = i + 1; // skip the origin node
        let k = self.ts[node];
        let pv_right = pv_cauchy_on_grid(&self.ts, &self.p, node)?;
        // left half: odd p gives +int p/(t+k); even gives -int p/(t+k)
        let mut mirror: Vec<f64> = self
            .ts
            .iter()
            .zip(&self.p)
            .map(|(t, p)| p / (t + k))
            .collect();
        // t = 0 node: p(0)/k is fine
        if self.parity == Parity::Even {
            for v in mirror.iter_mut() {
                *v = -*v;
            }
        }
        let left = trapezoid(&self.ts, &mirror);
        Ok(pv_right + left + self.analytic_tail(k))
    }

    /// Remainder of the full-axis integral over |t| > t_end from the fitted
    /// inverse-power model (a/t and b/t^2 terms).
    fn analytic_tail(&self, k: f64) -> f64 {
        let t = self.t_end;
        let a = self.tail_model.a;
        let b = self.tail_model.b;
        match self.parity {
            // kernel 2t/(t^2-k^2)
            Parity::Odd => {
                let a_term = (a / k) * ((t + k) / (t - k)).ln();
                let b_term = -(b / (k * k)) * (1.0 - k * k / (t * t)).ln();
                a_term + b_term
            }
            // kernel 2k/(t^2-k^2)
            Parity::Even => {
                let a_term = -(a / k) * (1.0 - k * k / (t * t)).ln();
                let b_term =
                    (2.0 * b / k) * (0.5 * ((t + k) / (t - k)).ln() - k / t) / k;
                a_term + b_term
            }
        }
    }

    /// Integral of p_ext(t)/(t - i kappa) over the axis, divided by i; real
    /// for both parities (used for probes in the upper half plane).
    fn upper_half_probe(&self, kappa: f64) -> f64 {
        let vals: Vec<f64> = self
            .ts
            .iter()
            .zip(&self.p)
            .map(|(t, p)| match self.parity {
                // (1/(t-ik) + 1/(t+ik)) /i -> p * 2t/(t^2+k^2) / i * i...
                Parity::Odd => 2.0 * t * p / (t * t + kappa * kappa),
                Parity::Even => 2.0 * kappa * p / (t * t + kappa * kappa),
            })
            .collect();
        let mut total = trapezoid(&self.ts, &vals);
        // model tail
        let t = self.t_end;
        total += match self.parity {
            Parity::Odd => self.tail_model.a * (1.0 + kappa * kappa / (t * t)).ln() / kappa,
            Parity::Even => {
                2.0 * kappa * (self.tail_model.a / t + self.tail_model.b / (2.0 * t * t)) / t
            }
        };
        total
    }
}

/// Unwrap the argument of unimodular samples, anchored so the last node's
/// phase is its principal argument (data approach 1 at the grid end).
fn unwrap_phase_from_end(values: &[Complex64], ks: &[f64]) -> Result<Vec<f64>> {
    let n = values.len();
    let mut theta = vec![0.0; n];
    theta[n - 1] = values[n - 1].arg();
    for i in (0..n - 1).rev() {
        let step = (values[i] / values[i + 1]).arg();
        if step.abs() > std::f64::consts::PI - 1.0e-9 {
            return Err(Error::BranchError {
                k: ks[i],
                jump: step,
            });
        }
        theta[i] = theta[i + 1] + step;
    }
    Ok(theta)
}

// ---------------------------------------------------------------------------
// S(k) -> f(k).
// ---------------------------------------------------------------------------

/// Options for the S -> f factorization.
#[derive(Debug, Clone, Copy)]
pub struct FactorizationConfig {
    /// auxiliary kappa for odd index (must avoid every k_j)
    pub kappa: f64,
}

impl Default for FactorizationConfig {
    fn default() -> Self {
        Self { kappa: 1.0 }
    }
}

/// Solve the Riemann problem f(k) = S(-k) f(-k): the zero-free part comes
/// from the exponential-Cauchy formula applied to the unwrapped phase of
/// S(-t) w^{-2}(t) (times the kappa factor when the index is odd), and the
/// Blaschke product restores the zeros.
pub fn jost_from_s(sd: &ScatteringData, cfg: &FactorizationConfig) -> Result<JostData> {
    sd.check_shape()?;
    let j = sd.bound_ks.len() as i64;
    let odd = if sd.index == -2 * j {
        false
    } else if sd.index == -2 * j - 1 {
        true
    } else {
        return Err(Error::IndexMismatch {
            index: sd.index,
            bound: sd.bound_ks.len(),
        });
    };
    let kappa = odd.then_some(cfg.kappa);
    if let Some(kp) = kappa {
        for &kj in &sd.bound_ks {
            if (kp - kj).abs() < 1.0e-9 {
                return Err(Error::KappaCollision { kappa: kp, kj });
            }
        }
    }

    // G(t) = S(-t) w^{-2}(t) [ (t + i kappa)/(t - i kappa) ]
    let w = blaschke_product(&sd.ks, &sd.bound_ks, None)?;
    let g: Vec<Complex64> = sd
        .ks
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut v = sd.s_at_neg(i) / (w[i] * w[i]);
            if let Some(kp) = kappa {
                v *= Complex64::new(t, kp) / Complex64::new(t, -kp);
            }
            v
        })
        .collect();
    let theta = unwrap_phase_from_end(&g, &sd.ks)?;
    if theta[0].abs() > 0.5 * std::f64::consts::PI {
        return Err(Error::BranchError {
            k: sd.ks[0],
            jump: theta[0],
        });
    }
    let profile = HalfLineProfile::new(&sd.ks, &theta, Parity::Odd, Some(0.0))?;

    let mut f = Vec::with_capacity(sd.ks.len());
    for (i, &k) in sd.ks.iter().enumerate() {
        // log f0(k + i0) = PV/(2 pi) + i theta(k)/2
        let re_log = profile.pv_full_axis(i)? / (2.0 * std::f64::consts::PI);
        let f0 = Complex64::new(re_log, 0.5 * theta[i]).exp();
        let mut fk = f0 * w[i];
        if let Some(kp) = kappa {
            fk *= Complex64::new(k, 0.0) / Complex64::new(k, kp);
        }
        f.push(fk);
    }

    // derivative at the bound-state zeros by differencing along i kappa
    let f_imag = |kap: f64| -> f64 {
        let re_log = profile.upper_half_probe(kap) / (2.0 * std::f64::consts::PI);
        let mut v = re_log.exp();
        let wb = blaschke_at(Complex64::new(0.0, kap), &sd.bound_ks, None);
        v *= wb.re; // purely real on the imaginary axis
        if let Some(kp) = kappa {
            v *= kap / (kap + kp);
        }
        v
    };
    let mut fdot = Vec::with_capacity(sd.bound_ks.len());
    for &kj in &sd.bound_ks {
        let dh = 1.0e-5 * kj;
        let gp = (f_imag(kj + dh) - f_imag(kj - dh)) / (2.0 * dh);
        fdot.push(Complex64::new(0.0, -gp));
    }

    Ok(JostData {
        ks: sd.ks.clone(),
        f,
        fprime0: vec![],
        bound_ks: sd.bound_ks.clone(),
        fdot_at_bound: fdot,
        resonance: odd,
    })
}

// ---------------------------------------------------------------------------
// |f(k)| -> f(k).
// ---------------------------------------------------------------------------

/// Recover f from its modulus on the real axis by the half-plane formula
/// f = |f| w exp( -(i/pi) PV int log|f(t)|/(t-k) dt ).
///
/// When the modulus vanishes at the origin (resonance), the canonical
/// boundary-zero factor k/(k+i) is split off analytically: its phase is
/// known in closed form, and the remaining log-modulus is regular at 0, so
/// the quadrature never sees the logarithmic singularity.
pub fn jost_from_modulus(ks: &[f64], absf: &[f64], bound_ks: &[f64]) -> Result<JostData> {
    if absf.iter().any(|v| *v <= 0.0) {
        return Err(Error::ZeroModulus(
            absf.iter().cloned().fold(f64::INFINITY, f64::min),
        ));
    }
    let max_abs = absf.iter().fold(0.0_f64, |mx, v| mx.max(*v));
    let resonance = absf[0] < 0.05 * max_abs;

    // regular part of the log-modulus: subtract |k/(k+i)| when resonant
    let m: Vec<f64> = ks
        .iter()
        .zip(absf)
        .map(|(&t, v)| {
            let mut val = v.ln();
            if resonance {
                val -= 0.5 * (t * t / (t * t + 1.0)).ln();
            }
            val
        })
        .collect();
    let profile = HalfLineProfile::new(ks, &m, Parity::Even, None)?;

    let w = blaschke_product(ks, bound_ks, None)?;
    let mut f = Vec::with_capacity(ks.len());
    for (i, &k) in ks.iter().enumerate() {
        let pv = profile.pv_full_axis(i)?;
        let mut phase = -pv / std::f64::consts::PI;
        if resonance {
            // arg of k/(k+i)
            phase -= (1.0 / k).atan();
        }
        f.push(absf[i] * w[i] * Complex64::new(0.0, phase).exp());
    }

    // |f| on the imaginary axis for derivative probes
    let f_imag = |kap: f64| -> f64 {
        let mut log_mag = profile.upper_half_probe(kap) / std::f64::consts::PI;
        if resonance {
            // (i kap)/(i kap + i) = kap/(kap + 1)
            log_mag += (kap / (kap + 1.0)).ln();
        }
        let wb = blaschke_at(Complex64::new(0.0, kap), bound_ks, None).re;
        log_mag.exp() * wb
    };
    let mut fdot = Vec::with_capacity(bound_ks.len());
    for &kj in bound_ks {
        let dh = 1.0e-5 * kj;
        let gp = (f_imag(kj + dh) - f_imag(kj - dh)) / (2.0 * dh);
        fdot.push(Complex64::new(0.0, -gp));
    }

    Ok(JostData {
        ks: ks.to_vec(),
        f,
        fprime0: vec![],
        bound_ks: bound_ks.to_vec(),
        fdot_at_bound: fdot,
        resonance,
    })
}

// ---------------------------------------------------------------------------
// Spectral function -> scattering data.
// ---------------------------------------------------------------------------

/// Read |f| off the continuous density, factorize the phase, and convert
/// the discrete weights c_j to norming constants s_j through the zero
/// derivatives of the factorized f.
pub fn s_from_spectral(sf: &SpectralFunction) -> Result<ScatteringData> {
    if sf.lambdas.is_empty() || sf.lambdas.len() != sf.density.len() {
        return Err(Error::MalformedGrid("spectral grids mismatch".into()));
    }
    let ks: Vec<f64> = sf.lambdas.iter().map(|l| l.sqrt()).collect();
    uniform_step(&ks).map_err(|_| {
        Error::MalformedGrid("spectral grid must be k^2 of a uniform k-grid".into())
    })?;
    let absf: Vec<f64> = ks
        .iter()
        .zip(&sf.density)
        .map(|(k, d)| {
            if *d <= 0.0 {
                return f64::NAN;
            }
            (k / (std::f64::consts::PI * d)).sqrt()
        })
        .collect();
    if absf.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("density must be positive".into()));
    }
    let mut bound_ks: Vec<f64> = sf
        .discrete_points
        .iter()
        .map(|(l, _)| (-l).sqrt())
        .collect();
    bound_ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let jd = jost_from_modulus(&ks, &absf, &bound_ks)?;

    let s: Vec<Complex64> = jd.f.iter().map(|f| f.conj() / f).collect();
    // c_j = -4 k_j^2 / ([fdot]^2 s_j) => s_j = 4 k_j^2/(|fdot|^2 c_j)
    let mut norming = Vec::with_capacity(bound_ks.len());
    let mut weights: Vec<(f64, f64)> = sf.discrete_points.clone();
    weights.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap()); // ascending k_j
    for ((kj, fdot), (_, cj)) in bound_ks.iter().zip(&jd.fdot_at_bound).zip(&weights) {
        let gp = fdot.im.abs();
        norming.push(4.0 * kj * kj / (gp * gp * cj));
    }
    let j = bound_ks.len() as i64;
    let index = if jd.resonance { -2 * j - 1 } else { -2 * j };
    Ok(ScatteringData {
        ks,
        s,
        bound_ks,
        norming,
        index,
    })
}

// ---------------------------------------------------------------------------
// I-function -> scattering data.
// ---------------------------------------------------------------------------

/// One-to-one correspondence between the boundary impedance and scattering
/// data: |f|^2 = k/Im I on the axis, factorized as in `jost_from_modulus`;
/// norming constants from the pole residues.
pub fn scattering_from_ifunction(ifn: &IFunction) -> Result<ScatteringData> {
    for (k, v) in ifn.ks.iter().zip(&ifn.values) {
        if v.im <= 0.0 {
            return Err(Error::NonHerglotz { k: *k, value: v.im });
        }
    }
    // |f(k)| = sqrt(k / Im I(k))
    let absf: Vec<f64> = ifn
        .ks
        .iter()
        .zip(&ifn.values)
        .map(|(k, v)| (k / v.im).sqrt())
        .collect();
    let jd = jost_from_modulus(&ifn.ks, &absf, &ifn.poles)?;
    let s: Vec<Complex64> = jd.f.iter().map(|f| f.conj() / f).collect();
    // s_j = -2 i k_j/(a_j [fdot]^2) with a_j = i r_j, [fdot]^2 = -|g'|^2
    let mut norming = Vec::with_capacity(ifn.poles.len());
    for ((kj, aj), fdot) in ifn.poles.iter().zip(&ifn.residues).zip(&jd.fdot_at_bound) {
        let rj = aj.im;
        let gp = fdot.im.abs();
        if rj <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "residue at k_j = {kj} must be i r with r > 0"
            )));
        }
        norming.push(2.0 * kj / (rj * gp * gp));
    }
    let j = ifn.poles.len() as i64;
    let index = if jd.resonance { -2 * j - 1 } else { -2 * j };
    Ok(ScatteringData {
        ks: ifn.ks.clone(),
        s,
        bound_ks: ifn.poles.clone(),
        norming,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::uniform_from;

    const K1: f64 = 1.0;

    fn nu1() -> f64 {
        2.0_f64.sqrt()
    }

    fn k_grid() -> Vec<f64> {
        uniform_from(0.01, 0.01, 20000)
    }

    /// S(k) of the one-bound-state family with k1 = 1, r1 = 1.
    fn bargmann_s(ks: &[f64]) -> Vec<Complex64> {
        ks.iter()
            .map(|&k| {
                (Complex64::new(k, K1) * Complex64::new(k, nu1()))
                    / (Complex64::new(k, -K1) * Complex64::new(k, -nu1()))
            })
            .collect()
    }

    fn bargmann_f(k: f64) -> Complex64 {
        Complex64::new(k, -K1) / Complex64::new(k, nu1())
    }

    #[test]
    fn blaschke_values() {
        let ks = vec![0.5, 1.0, 2.0];
        let w = blaschke_product(&ks, &[], None).unwrap();
        assert!(w.iter().all(|v| (v - 1.0).norm() < 1e-15));
        let w = blaschke_product(&ks, &[1.0], None).unwrap();
        // at k = 1: (1-i)/(1+i) = -i
        assert!((w[1] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        for v in &w {
            assert!((v.norm() - 1.0).abs() < 1e-14);
        }
        assert!(matches!(
            blaschke_product(&ks, &[2.0], Some(2.0)),
            Err(Error::KappaCollision { .. })
        ));
    }

    #[test]
    fn trivial_s_gives_unit_jost() {
        let ks = uniform_from(0.01, 0.01, 4000);
        let sd = ScatteringData {
            s: vec![Complex64::new(1.0, 0.0); ks.len()],
            ks,
            bound_ks: vec![],
            norming: vec![],
            index: 0,
        };
        let jd = jost_from_s(&sd, &FactorizationConfig::default()).unwrap();
        for f in &jd.f {
            assert!((f - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn bound_state_s_factorizes_to_bargmann_f() {
        let ks = k_grid();
        let sd = ScatteringData {
            s: bargmann_s(&ks),
            ks: ks.clone(),
            bound_ks: vec![K1],
            norming: vec![4.0 * (1.0 + nu1()) * (1.0 + nu1())],
            index: -2,
        };
        let jd = jost_from_s(&sd, &FactorizationConfig::default()).unwrap();
        for (k, f) in jd.ks.iter().zip(&jd.f) {
            if *k < 0.2 || *k > 10.0 {
                continue;
            }
            let want = bargmann_f(*k);
            let rel = (f - want).norm() / want.norm();
            assert!(rel < 1e-3, "k={k}: rel error {rel:.2e}");
        }
        // fdot at the zero: exact = -i/(k1+nu1) by differentiating the
        // rational closed form
        let want = 1.0 / (K1 + nu1());
        let got = jd.fdot_at_bound[0].im.abs();
        assert!(
            (got - want).abs() < 1e-3 * want,
            "fdot {got} vs {want}"
        );
    }

    #[test]
    fn resonance_s_with_odd_index_factorizes() {
        let ks = k_grid();
        let nu0 = 1.0;
        let s: Vec<Complex64> = ks
            .iter()
            .map(|&k| Complex64::new(k, nu0) / Complex64::new(k, -nu0))
            .collect();
        let sd = ScatteringData {
            ks: ks.clone(),
            s,
            bound_ks: vec![],
            norming: vec![],
            index: -1,
        };
        for kappa in [1.0, 2.0] {
            let jd = jost_from_s(&sd, &FactorizationConfig { kappa }).unwrap();
            for (k, f) in jd.ks.iter().zip(&jd.f) {
                if *k < 0.2 || *k > 10.0 {
                    continue;
                }
                let want = Complex64::new(*k, 0.0) / Complex64::new(*k, nu0);
                assert!(
                    (f - want).norm() < 1e-3,
                    "kappa={kappa}, k={k}: {f} vs {want}"
                );
            }
        }
    }

    #[test]
    fn kappa_independence_of_odd_factorization() {
        let ks = k_grid();
        let nu0 = 1.0;
        let s: Vec<Complex64> = ks
            .iter()
            .map(|&k| Complex64::new(k, nu0) / Complex64::new(k, -nu0))
            .collect();
        let sd = ScatteringData {
            ks: ks.clone(),
            s,
            bound_ks: vec![],
            norming: vec![],
            index: -1,
        };
        let f1 = jost_from_s(&sd, &FactorizationConfig { kappa: 1.0 }).unwrap();
        let f2 = jost_from_s(&sd, &FactorizationConfig { kappa: 2.0 }).unwrap();
        for ((k, a), b) in ks.iter().zip(&f1.f).zip(&f2.f) {
            if *k > 100.0 {
                continue;
            }
            assert!((a - b).norm() < 1e-3, "k={k}: {a} vs {b}");
        }
    }

    #[test]
    fn jump_relation_satisfied_by_factorized_f() {
        // defining property f(k) = S(-k) f(-k)
        let ks = k_grid();
        let sd = ScatteringData {
            s: bargmann_s(&ks),
            ks: ks.clone(),
            bound_ks: vec![K1],
            norming: vec![4.0 * (1.0 + nu1()) * (1.0 + nu1())],
            index: -2,
        };
        let jd = jost_from_s(&sd, &FactorizationConfig::default()).unwrap();
        let max_f = jd.f.iter().map(|f| f.norm()).fold(0.0_f64, f64::max);
        for (i, f) in jd.f.iter().enumerate() {
            let jump = (f - sd.s_at_neg(i) * f.conj()).norm();
            assert!(jump < 5e-3 * max_f, "node {i}: jump {jump:.2e}");
        }
        // the exponential-Cauchy output never vanishes on the computed
        // region and approaches one at the grid end
        let min_f = jd
            .f
            .iter()
            .zip(&jd.ks)
            .filter(|(_, k)| **k > 0.05)
            .map(|(f, _)| f.norm())
            .fold(f64::INFINITY, f64::min);
        assert!(min_f > 1e-3, "factorized f nearly vanishes: {min_f:.2e}");
        let end_dev = (jd.f.last().unwrap() - 1.0).norm();
        assert!(end_dev < 0.05, "f(k_max) = 1 deviation {end_dev:.2e}");
    }

    #[test]
    fn modulus_only_recovery_regular_case() {
        let ks = k_grid();
        // |f|^2 = (k^2+k1^2)/(k^2+nu1^2), bound state at k1
        let absf: Vec<f64> = ks
            .iter()
            .map(|&k| ((k * k + K1 * K1) / (k * k + nu1() * nu1())).sqrt())
            .collect();
        let jd = jost_from_modulus(&ks, &absf, &[K1]).unwrap();
        for (k, f) in jd.ks.iter().zip(&jd.f) {
            if *k < 0.2 || *k > 10.0 {
                continue;
            }
            let want = bargmann_f(*k);
            assert!(
                (f - want).norm() / want.norm() < 1e-3,
                "k={k}: {f} vs {want}"
            );
        }
        // modulus preserved exactly up to arithmetic
        for (f, m) in jd.f.iter().zip(&absf) {
            assert!((f.norm() - m).abs() < 1e-12);
        }
    }

    #[test]
    fn modulus_only_recovery_resonance_case() {
        let ks = k_grid();
        let nu0 = 1.0_f64;
        let absf: Vec<f64> = ks
            .iter()
            .map(|&k| (k * k / (k * k + nu0 * nu0)).sqrt())
            .collect();
        let jd = jost_from_modulus(&ks, &absf, &[]).unwrap();
        assert!(jd.resonance);
        for (k, f) in jd.ks.iter().zip(&jd.f) {
            if *k < 0.2 || *k > 10.0 {
                continue;
            }
            let want = Complex64::new(*k, 0.0) / Complex64::new(*k, nu0);
            assert!(
                (f - want).norm() / want.norm() < 1e-2,
                "k={k}: {f} vs {want}"
            );
        }
    }

    #[test]
    fn unit_modulus_gives_unit_f() {
        let ks = uniform_from(0.01, 0.01, 4000);
        let absf = vec![1.0; ks.len()];
        let jd = jost_from_modulus(&ks, &absf, &[]).unwrap();
        for f in &jd.f {
            assert!((f - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn free_density_gives_unit_s() {
        let ks = uniform_from(0.01, 0.01, 4000);
        let sf = SpectralFunction {
            lambdas: ks.iter().map(|k| k * k).collect(),
            density: ks
                .iter()
                .map(|k| k / std::f64::consts::PI)
                .collect(),
            discrete_points: vec![],
        };
        let sd = s_from_spectral(&sf).unwrap();
        for s in &sd.s {
            assert!((s - 1.0).norm() < 1e-9);
        }
        assert_eq!(sd.index, 0);
    }

    #[test]
    fn spectral_data_of_bound_state_family_round_trips_to_s() {
        // density of the r1 k1 family: (1/pi)(sqrt(l) + r1 sqrt(l)/(l+k1^2)),
        // weight c1 = 2 k1 r1; here r1 = 1, so nu1^2 = 2 and s1 has the
        // closed form 4 k1^2 (k1+nu1)^2 / c1
        let ks = k_grid();
        let r1 = 1.0;
        let sf = SpectralFunction {
            lambdas: ks.iter().map(|k| k * k).collect(),
            density: ks
                .iter()
                .map(|k| (k + r1 * k / (k * k + K1 * K1)) / std::f64::consts::PI)
                .collect(),
            discrete_points: vec![(-K1 * K1, 2.0 * K1 * r1)],
        };
        let sd = s_from_spectral(&sf).unwrap();
        assert_eq!(sd.index, -2);
        let want_s = bargmann_s(&sd.ks);
        for ((k, s), w) in sd.ks.iter().zip(&sd.s).zip(&want_s) {
            if *k < 0.2 || *k > 10.0 {
                continue;
            }
            assert!((s - w).norm() < 1e-3, "k={k}");
        }
        // s1 = 4 k1^2 (k1+nu1)^2 / c1 with c1 = 2 k1 r1 = 2
        let want_s1 = 4.0 * K1 * K1 * (K1 + nu1()) * (K1 + nu1()) / 2.0;
        let got = sd.norming[0];
        assert!(
            (got - want_s1).abs() < 2e-2 * want_s1,
            "s1 {got} vs {want_s1}"
        );
    }

    #[test]
    fn ifunction_conversion_matches_closed_forms() {
        let ks = k_grid();
        let r1 = 1.0;
        // I(k) = ik + i r1/(k - i k1)
        let values: Vec<Complex64> = ks
            .iter()
            .map(|&k| {
                Complex64::new(0.0, k)
                    + Complex64::new(0.0, r1) / Complex64::new(k, -K1)
            })
            .collect();
        let ifn = IFunction {
            ks: ks.clone(),
            values,
            poles: vec![K1],
            residues: vec![Complex64::new(0.0, r1)],
            resonance: false,
            residue_at_zero: None,
        };
        let sd = scattering_from_ifunction(&ifn).unwrap();
        let want = bargmann_s(&sd.ks);
        for ((k, s), w) in sd.ks.iter().zip(&sd.s).zip(&want) {
            if *k < 0.2 || *k > 10.0 {
                continue;
            }
            assert!((s - w).norm() < 2e-3, "k={k}: {s} vs {w}");
        }
        // s1 = 2 k1/(r1 |fdot|^2) with fdot = -i/(k1+nu1):
        let want_s1 = 2.0 * K1 * (K1 + nu1()) * (K1 + nu1()) / r1;
        assert!(
            (sd.norming[0] - want_s1).abs() < 2e-2 * want_s1,
            "s1 {} vs {want_s1}",
            sd.norming[0]
        );
    }

    #[test]
    fn trivial_ifunction_gives_unit_s() {
        let ks = uniform_from(0.01, 0.01, 4000);
        let ifn = IFunction {
            values: ks.iter().map(|&k| Complex64::new(0.0, k)).collect(),
            ks,
            poles: vec![],
            residues: vec![],
            resonance: false,
            residue_at_zero: None,
        };
        let sd = scattering_from_ifunction(&ifn).unwrap();
        for s in &sd.s {
            assert!((s - 1.0).norm() < 1e-9);
        }
    }
}
