//! Dense symmetric eigenvalue solvers.
//!
//! [`jacobi_eigenvalues`] is the reference path used for every graph value
//! (order ≤ 64). [`tridiagonal_ql_eigenvalues`] (Householder reduction
//! followed by implicit QL) handles the larger dense matrices that arise in
//! convergence runs.

use crate::error::{Error, Result};

/// Row-major dense symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let x = f(i, j);
                m.set(i, j, x);
            }
        }
        m
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.n + j] = x;
        self.data[j * self.n + i] = x;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let x = self.get(i, j);
                s += 2.0 * x * x;
            }
        }
        s.sqrt()
    }
}

/// Cyclic Jacobi rotations until the off-diagonal norm falls below
/// `1e-12 · ‖A‖_F`. Returns eigenvalues sorted non-increasing.
pub fn jacobi_eigenvalues(matrix: &SymmetricMatrix) -> Vec<f64> {
    const MAX_SWEEPS: usize = 100;
    let n = matrix.order();
    let mut a = matrix.clone();
    let target = 1e-12 * a.frobenius_norm();
    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                a.set(p, p, app - t * apq);
                a.set(q, q, aqq + t * apq);
                a.set(p, q, 0.0);
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    sort_desc(&mut eig);
    eig
}

/// Householder tridiagonalisation followed by implicit QL with Wilkinson
/// shifts. Returns eigenvalues sorted non-increasing.
pub fn tridiagonal_ql_eigenvalues(matrix: &SymmetricMatrix) -> Result<Vec<f64>> {
    let n = matrix.order();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut d, mut e) = householder_tridiagonal(matrix);
    implicit_ql(&mut d, &mut e)?;
    sort_desc(&mut d);
    Ok(d)
}

/// Reduces `a` to tridiagonal form; returns (diagonal, subdiagonal) with
/// `e[i]` coupling rows `i` and `i+1` (last entry zero).
fn householder_tridiagonal(matrix: &SymmetricMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = matrix.order();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| matrix.get(i, j)).collect()).collect();
    let mut e = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let alpha_sq: f64 = ((k + 1)..n).map(|i| a[i][k] * a[i][k]).sum();
        if alpha_sq == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let x0 = a[k + 1][k];
        let sign = if x0 >= 0.0 { 1.0 } else { -1.0 };
        let alpha = -sign * alpha_sq.sqrt();
        // v = x - alpha e1, normalised
        let mut v = vec![0.0; n];
        v[k + 1] = x0 - alpha;
        for i in (k + 2)..n {
            v[i] = a[i][k];
        }
        let vnorm_sq: f64 = v.iter().map(|x| x * x).sum();
        if vnorm_sq == 0.0 {
            e[k] = x0;
            continue;
        }
        // A <- H A H with H = I - 2 v v' / (v'v)
        let beta = 2.0 / vnorm_sq;
        let mut p = vec![0.0; n];
        for i in k..n {
            p[i] = beta * ((k + 1)..n).map(|j| a[i][j] * v[j]).sum::<f64>();
        }
        let kappa = 0.5 * beta * ((k + 1)..n).map(|i| v[i] * p[i]).sum::<f64>();
        for i in k..n {
            p[i] -= kappa * v[i];
        }
        for i in k..n {
            for j in k..n {
                a[i][j] -= v[i] * p[j] + p[i] * v[j];
            }
        }
        e[k] = a[k + 1][k];
    }
    if n >= 2 {
        e[n - 2] = a[n - 1][n - 2];
    }
    let d = (0..n).map(|i| a[i][i]).collect();
    (d, e)
}

fn implicit_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence("implicit QL exceeded 60 iterations".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn sort_desc(v: &mut [f64]) {
    v.sort_by(|a, b| b.total_cmp(a));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_matrix(n: usize) -> SymmetricMatrix {
        SymmetricMatrix::from_fn(n, |i, j| if j == i + 1 { 1.0 } else { 0.0 })
    }

    #[test]
    fn path_spectrum_closed_form() {
        // eigenvalues of P_n are 2 cos(kπ/(n+1))
        for n in [1, 2, 5, 17, 40] {
            let mut expected: Vec<f64> = (1..=n)
                .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
                .collect();
            sort_desc(&mut expected);
            let jac = jacobi_eigenvalues(&path_matrix(n));
            let ql = tridiagonal_ql_eigenvalues(&path_matrix(n)).unwrap();
            for i in 0..n {
                assert!((jac[i] - expected[i]).abs() < 1e-10, "jacobi n={n}");
                assert!((ql[i] - expected[i]).abs() < 1e-10, "ql n={n}");
            }
        }
    }

    #[test]
    fn dense_matrix_agreement() {
        // deterministic pseudo-random symmetric matrix
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let n = 30;
        let mut m = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, next());
            }
        }
        let jac = jacobi_eigenvalues(&m);
        let ql = tridiagonal_ql_eigenvalues(&m).unwrap();
        let trace: f64 = (0..n).map(|i| m.get(i, i)).sum();
        assert!((jac.iter().sum::<f64>() - trace).abs() < 1e-10);
        for (a, b) in jac.iter().zip(&ql) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_and_diagonal() {
        assert_eq!(jacobi_eigenvalues(&SymmetricMatrix::zeros(3)), vec![0.0; 3]);
        let d = SymmetricMatrix::from_fn(3, |i, j| if i == j { i as f64 } else { 0.0 });
        assert_eq!(jacobi_eigenvalues(&d), vec![2.0, 1.0, 0.0]);
        assert_eq!(tridiagonal_ql_eigenvalues(&d).unwrap(), vec![2.0, 1.0, 0.0]);
    }
}
