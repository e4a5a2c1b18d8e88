//! Airy function of the first kind and its derivative, self-contained.
//!
//! The Maclaurin series is summed in double-double arithmetic so the
//! catastrophic cancellation between its two branches (growing like
//! e^{|zeta|} while the result decays) costs none of the leading digits;
//! beyond |x| = 9 the asymptotic expansions take over. Absolute accuracy is
//! better than 1e-12 across the range used here (|x| <= ~16).

/// Double-double value: hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let err = a.mul_add(b, -p);
    Dd { hi: p, lo: err }
}

fn dd_add(a: Dd, b: Dd) -> Dd {
    let s = two_sum(a.hi, b.hi);
    let lo = s.lo + a.lo + b.lo;
    let t = two_sum(s.hi, lo);
    Dd { hi: t.hi, lo: t.lo }
}

fn dd_mul(a: Dd, b: Dd) -> Dd {
    let p = two_prod(a.hi, b.hi);
    let lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    let t = two_sum(p.hi, lo);
    Dd { hi: t.hi, lo: t.lo }
}

fn dd_div_f64(a: Dd, d: f64) -> Dd {
    let q1 = a.hi / d;
    let r = dd_add(a, Dd { hi: -q1 * d, lo: -(q1.mul_add(d, -q1 * d)) });
    let q2 = (r.hi + r.lo) / d;
    let t = two_sum(q1, q2);
    Dd { hi: t.hi, lo: t.lo }
}

/// Ai(0) and -Ai'(0) as double-double pairs; the final combination of the
/// two series branches must run at extended precision too.
const AI0: Dd = Dd {
    hi: 0.355_028_053_887_817_2,
    lo: 2.052_336_324_362_12e-17,
};
const AIP0: Dd = Dd {
    hi: 0.258_819_403_792_806_8,
    lo: -2.522_243_111_610_832e-17,
};

/// Ai(x) and Ai'(x).
pub fn airy_ai(x: f64) -> (f64, f64) {
    if x.abs() <= 9.0 {
        airy_series(x)
    } else if x > 0.0 {
        airy_asymptotic_pos(x)
    } else {
        airy_asymptotic_neg(-x)
    }
}

fn airy_series(x: f64) -> (f64, f64) {
    if x.abs() < 1.0e-8 {
        // two-term Taylor avoids the 0/0 in the derivative terms below
        return (
            AI0.hi - AIP0.hi * x,
            -AIP0.hi + AI0.hi * 0.5 * x * x,
        );
    }
    let x3 = dd_mul(two_prod(x, x), Dd::from(x));
    // F = sum a_k, a_0 = 1, a_{k+1} = a_k x^3/((3k+2)(3k+3))
    // G = sum g_k, g_0 = x, g_{k+1} = g_k x^3/((3k+3)(3k+4))
    // derivative terms come straight from a_k and g_k:
    // F' = sum 3k a_k / x, G' = sum (3k+1) g_k / x   (integer factors exact)
    let mut a = Dd::from(1.0);
    let mut g = Dd::from(x);
    let mut f_sum = a;
    let mut g_sum = g;
    let mut fp_sum = Dd::from(0.0);
    let mut gp_sum = dd_div_f64(g, x); // k = 0 term: g_0/x = 1 up to rounding
    for k in 0..200 {
        let kf = k as f64;
        a = dd_div_f64(dd_mul(a, x3), (3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        g = dd_div_f64(dd_mul(g, x3), (3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        f_sum = dd_add(f_sum, a);
        g_sum = dd_add(g_sum, g);
        let b = dd_div_f64(dd_mul(a, Dd::from(3.0 * (kf + 1.0))), x);
        let d = dd_div_f64(dd_mul(g, Dd::from(3.0 * (kf + 1.0) + 1.0)), x);
        fp_sum = dd_add(fp_sum, b);
        gp_sum = dd_add(gp_sum, d);
        if a.hi.abs() < 1e-40 && g.hi.abs() < 1e-40 {
            break;
        }
    }
    let neg = |v: Dd| Dd {
        hi: -v.hi,
        lo: -v.lo,
    };
    let ai = dd_add(dd_mul(AI0, f_sum), neg(dd_mul(AIP0, g_sum))).value();
    let aip = dd_add(dd_mul(AI0, fp_sum), neg(dd_mul(AIP0, gp_sum))).value();
    (ai, aip)
}

/// Coefficients u_k of the asymptotic expansions.
fn u_coeffs() -> [f64; 12] {
    let mut u = [0.0; 12];
    u[0] = 1.0;
    for k in 0..11 {
        let kf = k as f64;
        u[k + 1] = u[k] * (6.0 * kf + 5.0) * (6.0 * kf + 1.0) / (72.0 * (kf + 1.0));
    }
    u
}

fn airy_asymptotic_pos(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let u = u_coeffs();
    let mut s = 0.0;
    let mut sp = 0.0;
    let mut pow = 1.0;
    for (k, uk) in u.iter().enumerate() {
        let vk = if k == 0 {
            1.0
        } else {
            uk * (6.0 * k as f64 + 1.0) / (1.0 - 6.0 * k as f64)
        };
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * uk * pow;
        sp += sign * vk * pow;
        pow /= zeta;
    }
    let front = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    let ai = front * s / x.powf(0.25);
    let aip = -front * x.powf(0.25) * sp;
    (ai, aip)
}

fn airy_asymptotic_neg(z: f64) -> (f64, f64) {
    // Ai(-z), Ai'(-z) for z > 0
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let u = u_coeffs();
    let mut p = 0.0;
    let mut q = 0.0;
    let mut pd = 0.0;
    let mut qd = 0.0;
    for k in 0..6 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let u2k = u[2 * k];
        let u2k1 = u[2 * k + 1];
        let v2k = if k == 0 {
            1.0
        } else {
            u2k * (12.0 * k as f64 + 1.0) / (1.0 - 12.0 * k as f64)
        };
        let v2k1 = u2k1 * (6.0 * (2.0 * k as f64 + 0.5) + 4.0) / (6.0 * (2.0 * k as f64) + 5.0);
        let _ = (v2k, v2k1);
        p += sign * u2k / zeta.powi(2 * k as i32);
        q += sign * u2k1 / zeta.powi(2 * k as i32 + 1);
        // derivative series use v_k = -(6k+1)/(6k-1) u_k
        let w2k = if k == 0 {
            1.0
        } else {
            -u2k * (12.0 * k as f64 + 1.0) / (12.0 * k as f64 - 1.0)
        };
        let w2k1 = -u2k1 * (6.0 * (2 * k + 1) as f64 + 1.0) / (6.0 * (2 * k + 1) as f64 - 1.0);
        pd += sign * w2k / zeta.powi(2 * k as i32);
        qd += sign * w2k1 / zeta.powi(2 * k as i32 + 1);
    }
    let phase = zeta + std::f64::consts::FRAC_PI_4;
    let root_pi = std::f64::consts::PI.sqrt();
    let ai = (phase.sin() * p - phase.cos() * q) / (root_pi * z.powf(0.25));
    let aip = -(phase.cos() * pd + phase.sin() * qd) * z.powf(0.25) / root_pi;
    (ai, aip)
}

/// First `n` roots of Ai(-E) = 0, ascending, by asymptotic seeding plus
/// Newton refinement.
pub fn airy_negated_zeros(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    for j in 1..=n {
        let t = 3.0 * std::f64::consts::PI * (4.0 * j as f64 - 1.0) / 8.0;
        // T(t) expansion for the j-th zero of Ai
        let t2 = t * t;
        let mut e = t.powf(2.0 / 3.0)
            * (1.0 + 5.0 / 48.0 / t2 - 5.0 / 36.0 / (t2 * t2)
                + 77125.0 / 82944.0 / (t2 * t2 * t2));
        for _ in 0..60 {
            let (ai, aip) = airy_ai(-e);
            let step = ai / aip; // d/dE Ai(-E) = -Ai'(-E)
            e += step;
            if step.abs() < 1e-14 * e {
                break;
            }
        }
        out.push(e);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn airy_reference_values() {
        // high-precision references
        let cases = [
            (0.0, 0.355_028_053_887_817_24, -0.258_819_403_792_806_8),
            (1.0, 0.135_292_416_312_881_42, -0.159_147_441_296_793_21),
            (5.0, 1.083_444_281_360_744e-4, -2.474_138_908_684_625e-4),
            (-1.0, 0.535_560_883_292_352_1, -0.010_160_567_116_645_21),
            (-5.0, 0.350_761_009_024_114_3, 0.327_192_818_554_443_14),
            (8.0, 4.692_207_616_099_232e-8, -1.341_439_297_906_787e-7),
            (-8.0, -0.052_705_050_356_386_2, 0.935_560_938_198_306_6),
            (-9.0, -0.022_133_721_547_341_4, -0.975_663_980_926_331_6),
        ];
        for (x, ai_want, aip_want) in cases {
            let (ai, aip) = airy_ai(x);
            assert!(
                (ai - ai_want).abs() < 1e-12,
                "Ai({x}) = {ai:.17}, want {ai_want:.17}"
            );
            assert!(
                (aip - aip_want).abs() < 1e-12,
                "Ai'({x}) = {aip:.17}, want {aip_want:.17}"
            );
        }
    }

    #[test]
    fn series_and_asymptotics_agree_in_overlap() {
        for &x in &[8.0_f64, 8.5, 9.0, -8.0, -8.5, -9.0] {
            let s = airy_series(x);
            let a = if x > 0.0 {
                airy_asymptotic_pos(x)
            } else {
                airy_asymptotic_neg(-x)
            };
            assert!(
                (s.0 - a.0).abs() < 1e-11 * (1.0 + s.0.abs()),
                "Ai mismatch at {x}: {} vs {}",
                s.0,
                a.0
            );
            assert!(
                (s.1 - a.1).abs() < 1e-10 * (1.0 + s.1.abs()),
                "Ai' mismatch at {x}: {} vs {}",
                s.1,
                a.1
            );
        }
    }

    #[test]
    fn airy_satisfies_its_equation_numerically() {
        // second differences reproduce x * Ai(x)
        for &x in &[-12.0, -3.3, 0.7, 4.0, 11.0] {
            let h = 1e-4;
            let (am, _) = airy_ai(x - h);
            let (a0, _) = airy_ai(x);
            let (ap, _) = airy_ai(x + h);
            let lap = (ap - 2.0 * a0 + am) / (h * h);
            assert!(
                (lap - x * a0).abs() < 1e-5 * (1.0 + a0.abs()),
                "x={x}"
            );
        }
    }

    #[test]
    fn negated_zeros_match_references() {
        let zs = airy_negated_zeros(10);
        let want = [
            2.338_107_410_459_767,
            4.087_949_444_130_970,
            5.520_559_828_095_551,
            6.786_708_090_071_759,
            7.944_133_587_120_853,
            9.022_650_853_340_980,
            10.040_174_341_558_085,
            11.008_524_303_733_260,
            11.936_015_563_236_262,
            12.828_776_752_865_757,
        ];
        for (z, w) in zs.iter().zip(&want) {
            assert!((z - w).abs() < 1e-10, "zero {z} vs {w}");
        }
        for z in zs {
            assert!(airy_ai(-z).0.abs() < 1e-12);
        }
    }
}
