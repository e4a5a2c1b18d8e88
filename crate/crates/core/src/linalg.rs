//! Small dense linear algebra: LU with partial pivoting, and a pivot-free
//! LU whose leading blocks factor every member of a nested family of
//! Nystrom systems at once.

use crate::error::{Error, Result};

/// Dense row-major LU factorization with row equilibration and partial
/// pivoting. Equilibration keeps badly scaled rows (orders of magnitude
/// apart) from losing their equations to fill-in.
pub struct LuFactors {
    a: Vec<f64>,
    n: usize,
    piv: Vec<usize>,
    row_scale: Vec<f64>,
    min_pivot: f64,
    max_pivot: f64,
}

impl LuFactors {
    pub fn factor(mut a: Vec<f64>, n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let mut row_scale = vec![1.0_f64; n];
        for r in 0..n {
            let m = a[r * n..(r + 1) * n]
                .iter()
                .fold(0.0_f64, |mx, v| mx.max(v.abs()));
            if m == 0.0 {
                return Err(Error::SingularOperator(format!("row {r} is zero")));
            }
            row_scale[r] = m;
            for v in a[r * n..(r + 1) * n].iter_mut() {
                *v /= m;
            }
        }
        let mut piv = vec![0usize; n];
        let mut min_pivot = f64::INFINITY;
        let mut max_pivot = 0.0_f64;
        for col in 0..n {
            let mut p = col;
            let mut best = a[col * n + col].abs();
            for r in col + 1..n {
                let v = a[r * n + col].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 {
                return Err(Error::SingularOperator(format!(
                    "zero pivot at column {col}"
                )));
            }
            piv[col] = p;
            if p != col {
                for c in 0..n {
                    a.swap(col * n + c, p * n + c);
                }
            }
            let d = a[col * n + col];
            min_pivot = min_pivot.min(d.abs());
            max_pivot = max_pivot.max(d.abs());
            for r in col + 1..n {
                let f = a[r * n + col] / d;
                a[r * n + col] = f;
                if f != 0.0 {
                    let (top, bottom) = a.split_at_mut(r * n);
                    let prow = &top[col * n + col + 1..col * n + n];
                    let row = &mut bottom[col + 1..n];
                    for (x, y) in row.iter_mut().zip(prow) {
                        *x -= f * y;
                    }
                }
            }
        }
        Ok(Self {
            a,
            n,
            piv,
            row_scale,
            min_pivot,
            max_pivot,
        })
    }

    /// Ratio of largest to smallest pivot, a cheap conditioning proxy.
    pub fn pivot_ratio(&self) -> f64 {
        self.max_pivot / self.min_pivot
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        for (r, v) in b.iter_mut().enumerate() {
            *v /= self.row_scale[r];
        }
        for col in 0..n {
            b.swap(col, self.piv[col]);
            let bc = b[col];
            if bc != 0.0 {
                for r in col + 1..n {
                    b[r] -= self.a[r * n + col] * bc;
                }
            }
        }
        for col in (0..n).rev() {
            b[col] /= self.a[col * n + col];
            let bc = b[col];
            if bc != 0.0 {
                for r in 0..col {
                    b[r] -= self.a[r * n + col] * bc;
                }
            }
        }
    }
}

/// Solve a dense system with partial pivoting, returning the solution.
pub fn solve_dense(a: Vec<f64>, n: usize, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let lu = LuFactors::factor(a, n)?;
    lu.solve_in_place(&mut b);
    Ok(b)
}

/// Pivot-free LU whose leading principal blocks are themselves LU
/// factorizations. One O(n^3) factorization serves the whole nested family
/// of Nystrom systems indexed by grid length m <= n.
///
/// Valid because the matrices arising here are discretizations of
/// identity-plus-compact operators with positive-definite symmetrizations,
/// so every leading minor stays away from zero.
pub struct FamilyLu {
    a: Vec<f64>,
    n: usize,
}

impl FamilyLu {
    pub fn factor(mut a: Vec<f64>, n: usize, min_pivot: f64) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        for col in 0..n {
            let d = a[col * n + col];
            if d.abs() < min_pivot {
                return Err(Error::SingularOperator(format!(
                    "leading minor {col} has pivot {d:.3e}"
                )));
            }
            for r in col + 1..n {
                let f = a[r * n + col] / d;
                a[r * n + col] = f;
                if f != 0.0 {
                    let (top, bottom) = a.split_at_mut(r * n);
                    let prow = &top[col * n + col + 1..col * n + n];
                    let row = &mut bottom[col + 1..n];
                    for (x, y) in row.iter_mut().zip(prow) {
                        *x -= f * y;
                    }
                }
            }
        }
        Ok(Self { a, n })
    }

    /// Solve the m x m leading-block system in place, m <= n. Substitution
    /// runs as row-contiguous dot products.
    pub fn solve_leading(&self, m: usize, b: &mut [f64]) {
        let n = self.n;
        assert!(m <= n && b.len() == m);
        for r in 1..m {
            let row = &self.a[r * n..r * n + r];
            let mut acc = 0.0;
            for (l, x) in row.iter().zip(b.iter()) {
                acc += l * x;
            }
            b[r] -= acc;
        }
        for r in (0..m).rev() {
            let row = &self.a[r * n + r..r * n + m];
            let mut acc = 0.0;
            for (u, x) in row.iter().skip(1).zip(b[r + 1..m].iter()) {
                acc += u * x;
            }
            b[r] = (b[r] - acc) / row[0];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_vec(a: &[f64], n: usize, x: &[f64]) -> Vec<f64> {
        (0..n)
            .map(|r| (0..n).map(|c| a[r * n + c] * x[c]).sum())
            .collect()
    }

    #[test]
    fn lu_solves_random_system() {
        let n = 20;
        let mut seed = 0x2545f4914f6cdd1d_u64;
        let mut rand = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut a = vec![0.0; n * n];
        for (i, v) in a.iter_mut().enumerate() {
            *v = rand() + if i % (n + 1) == 0 { 3.0 } else { 0.0 };
        }
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = mat_vec(&a, n, &x_true);
        let x = solve_dense(a, n, b).unwrap();
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).abs() < 1e-10);
        }
    }

    #[test]
    fn family_lu_leading_blocks_match_direct_solves() {
        let n = 30;
        // diagonally dominant test matrix keeps all leading minors healthy
        let mut a = vec![0.0; n * n];
        for r in 0..n {
            for c in 0..n {
                a[r * n + c] = if r == c {
                    4.0
                } else {
                    1.0 / (1.0 + (r as f64 - c as f64).abs()).powi(2)
                };
            }
        }
        let fam = FamilyLu::factor(a.clone(), n, 1e-12).unwrap();
        for m in [3usize, 11, 30] {
            let mut sub = vec![0.0; m * m];
            for r in 0..m {
                for c in 0..m {
                    sub[r * m + c] = a[r * n + c];
                }
            }
            let b: Vec<f64> = (0..m).map(|i| (i as f64).cos()).collect();
            let direct = solve_dense(sub, m, b.clone()).unwrap();
            let mut fast = b;
            fam.solve_leading(m, &mut fast);
            for (x, y) in fast.iter().zip(&direct) {
                assert!((x - y).abs() < 1e-11);
            }
        }
    }
}
