//! Walk moments of the two sides of a complete join `L ∨ R` and the spread
//! expansion in powers of `a₀^{-1/2}`.
//!
//! Both extreme eigenvalues of the join satisfy `λ² = Σ_k a_k λ^{-k}` where
//! `a_k = Σ_j l_j r_{k−j}` convolves the walk counts of the sides. Moments are
//! exact integers, the coefficients `c₂, c₄, c₆` exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixed::Fixed;
use crate::graph::{Bits, Graph};
use crate::psi::psi;
use crate::rational::{big, big_to_f64, Exact};

/// Number of walks of length `k`, `1′Aᵏ1`.
pub fn walk_moment(g: &Graph, k: usize) -> Result<u128> {
    Ok(walk_moments(g, k)?[k])
}

/// `1′Aᵏ1` for `k = 0..=max_k`.
pub fn walk_moments(g: &Graph, max_k: usize) -> Result<Vec<u128>> {
    let n = g.order();
    let mut x = vec![1u128; n];
    let mut out = Vec::with_capacity(max_k + 1);
    out.push(n as u128);
    for _ in 0..max_k {
        let mut next = vec![0u128; n];
        for (u, slot) in next.iter_mut().enumerate() {
            for v in Bits(g.row(u)) {
                *slot = slot.checked_add(x[v]).ok_or(Error::Overflow("walk moment"))?;
            }
        }
        x = next;
        let total = x
            .iter()
            .try_fold(0u128, |acc, &y| acc.checked_add(y))
            .ok_or(Error::Overflow("walk moment"))?;
        out.push(total);
    }
    Ok(out)
}

/// Walk moments of `ell·K_t ∪ isolated·P₁` without building the graph.
pub fn clique_union_moments(t: usize, ell: usize, isolated: usize, max_k: usize) -> Result<Vec<u128>> {
    let overflow = Error::Overflow("clique moment");
    let mut out = Vec::with_capacity(max_k + 1);
    let base = (ell as u128).checked_mul(t as u128).ok_or(overflow.clone())?;
    let mut power = base;
    for k in 0..=max_k {
        let extra = if k == 0 { isolated as u128 } else { 0 };
        out.push(power.checked_add(extra).ok_or(overflow.clone())?);
        power = power.checked_mul(t.saturating_sub(1) as u128).ok_or(overflow.clone())?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSeries {
    pub l: Vec<u128>,
    pub r: Vec<u128>,
    pub a: Vec<u128>,
    /// Maximum degree of the right side; the series is only meaningful for
    /// `|λ|` above it.
    pub guard: usize,
}

impl MomentSeries {
    pub fn from_moments(l: Vec<u128>, r: Vec<u128>, guard: usize) -> Result<MomentSeries> {
        if l.len() != r.len() || l.is_empty() {
            return Err(Error::InvalidParameter("moment lists must share a non-zero length".into()));
        }
        let mut a = Vec::with_capacity(l.len());
        for k in 0..l.len() {
            let mut sum = 0u128;
            for j in 0..=k {
                let term = l[j].checked_mul(r[k - j]).ok_or(Error::Overflow("moment convolution"))?;
                sum = sum.checked_add(term).ok_or(Error::Overflow("moment convolution"))?;
            }
            a.push(sum);
        }
        Ok(MomentSeries { l, r, a, guard })
    }

    pub fn max_k(&self) -> usize {
        self.a.len() - 1
    }
}

pub fn moment_series(left: &Graph, right: &Graph, max_k: usize) -> Result<MomentSeries> {
    MomentSeries::from_moments(walk_moments(left, max_k)?, walk_moments(right, max_k)?, right.max_degree())
}

/// Exact `c₂, c₄, c₆`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    pub c2: BigRational,
    pub c4: BigRational,
    pub c6: BigRational,
}

fn qr(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn c_coefficients(series: &MomentSeries) -> Result<Coefficients> {
    let a = &series.a;
    if a.len() < 7 {
        return Err(Error::InvalidParameter(format!("need moments through k = 6, have {}", a.len() - 1)));
    }
    if a[0] == 0 {
        return Err(Error::InvalidParameter("a₀ = 0".into()));
    }
    let a0 = big(a[0]);
    let x: Vec<BigRational> = a.iter().take(7).map(|&v| big(v) / &a0).collect();
    let (x1, x2, x3, x4, x5, x6) = (&x[1], &x[2], &x[3], &x[4], &x[5], &x[6]);
    let x1_2 = x1 * x1;
    let x1_3 = &x1_2 * x1;
    let x1_4 = &x1_2 * &x1_2;
    let x2_2 = x2 * x2;

    let c2 = qr(-3, 8) * &x1_2 + qr(1, 2) * x2;

    let c4 = qr(-105, 128) * &x1_4 + qr(35, 16) * &x1_2 * x2 - qr(5, 8) * &x2_2 - qr(5, 4) * x1 * x3
        + qr(1, 2) * x4;

    let c6 = qr(-3003, 1024) * &x1_4 * &x1_2 + qr(3003, 256) * &x1_4 * x2 - qr(693, 64) * &x1_2 * &x2_2
        + qr(21, 16) * &x2_2 * x2
        - qr(21, 32) * (qr(11, 1) * &x1_3 - qr(12, 1) * x1 * x2) * x3
        - qr(7, 8) * x3 * x3
        + qr(7, 16) * (qr(9, 1) * &x1_2 - qr(4, 1) * x2) * x4
        - qr(7, 4) * x1 * x5
        + qr(1, 2) * x6;

    Ok(Coefficients { c2, c4, c6 })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpansionEstimate {
    pub a0: u128,
    pub c2: Exact,
    pub c4: Exact,
    pub c6: Exact,
    pub approx_spread: f64,
    pub truncation_order: &'static str,
}

impl ExpansionEstimate {
    pub fn from_series(series: &MomentSeries) -> Result<ExpansionEstimate> {
        let c = c_coefficients(series)?;
        let a0 = series.a[0] as f64;
        let root = a0.sqrt();
        let approx = 2.0 * root
            + 2.0 * big_to_f64(&c.c2) / root
            + 2.0 * big_to_f64(&c.c4) / (a0 * root)
            + 2.0 * big_to_f64(&c.c6) / (a0 * a0 * root);
        Ok(ExpansionEstimate {
            a0: series.a[0],
            c2: Exact::from(&c.c2),
            c4: Exact::from(&c.c4),
            c6: Exact::from(&c.c6),
            approx_spread: approx,
            truncation_order: "O(a0^-7/2)",
        })
    }
}

/// Four-term spread estimate for `L ∨ R`.
pub fn approx_spread(left: &Graph, right: &Graph) -> Result<ExpansionEstimate> {
    ExpansionEstimate::from_series(&moment_series(left, right, 6)?)
}

/// The four-term estimate in wide fixed point, for residuals below `f64`
/// resolution.
pub fn approx_spread_fixed(series: &MomentSeries) -> Result<Fixed> {
    let c = c_coefficients(series)?;
    let a0 = Fixed::from_int(i128::try_from(series.a[0]).map_err(|_| Error::Overflow("a₀"))?);
    let root = a0.sqrt();
    let two = Fixed::from_int(2);
    let mut total = &two * &root;
    let mut scale = root.clone();
    for coeff in [&c.c2, &c.c4, &c.c6] {
        let term = Fixed::from_ratio(&(coeff * big(2)));
        total = &total + &term.div(&scale);
        scale = &scale * &a0;
    }
    Ok(total)
}

/// Exact two-sided check of the rewriting of `c₂` through ψ. Returns
/// `|LHS − RHS|`, which is zero for every input.
pub fn c2_decomposition_check(left: &Graph, right: &Graph, t: usize) -> Result<f64> {
    let series = moment_series(left, right, 2)?;
    let (l, r) = (&series.l, &series.r);
    if l[0] == 0 || r[0] == 0 {
        return Err(Error::InvalidParameter("both sides need at least one vertex".into()));
    }
    let a0 = big(series.a[0]);
    let x1 = big(series.a[1]) / &a0;
    let x2 = big(series.a[2]) / &a0;
    let lhs = qr(-3, 8) * &x1 * &x1 + qr(1, 2) * x2;

    let (l0, l1, r0, r1, r2) = (big(l[0]), big(l[1]), big(r[0]), big(r[1]), big(r[2]));
    let tm1 = BigRational::from_integer(BigInt::from(t as i64 - 1));
    let p = psi(left, left.order() + 1, t)?;
    let psi_l = BigRational::new(BigInt::from(*p.numer()), BigInt::from(*p.denom()));
    let inner = &l1 / (big(3) * &l0) + &r1 / &r0 - qr(2, 3) * &tm1;
    let rhs = &tm1 * &tm1 / big(6) - qr(3, 8) * &inner * &inner
        + psi_l / (big(6) * &l0)
        + (r2 - &tm1 * r1) / (big(2) * r0);
    Ok(big_to_f64(&(lhs - rhs).abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Positive,
    Negative,
}

pub const NEWTON_MAX_ITER: usize = 200;

/// `f(λ) = λ² − Σ_{k≤K} a_k λ^{-k}` and its derivative.
fn implicit(a: &[f64], lambda: f64) -> (f64, f64) {
    let inv = 1.0 / lambda;
    let mut power = 1.0;
    let (mut sum, mut dsum) = (0.0, 0.0);
    for (k, &ak) in a.iter().enumerate() {
        sum += ak * power;
        dsum -= k as f64 * ak * power * inv;
        power *= inv;
    }
    (lambda * lambda - sum, 2.0 * lambda - dsum)
}

/// Root of the truncated implicit equation on one branch by damped Newton
/// from `±√a₀`. Uses `a_0..=a_K`; `K` must not exceed the series length.
///
/// Converged means `|f| < 1e-12·max(1, a₀)`: `f` carries terms of size `a₀`,
/// so an absolute `1e-12` is below double resolution once `a₀` grows.
pub fn solve_implicit_lambda(series: &MomentSeries, branch: Branch, max_k: usize) -> Result<f64> {
    if max_k < 6 || max_k > series.max_k() {
        return Err(Error::InvalidParameter(format!(
            "truncation K = {max_k} must satisfy 6 ≤ K ≤ {}",
            series.max_k()
        )));
    }
    if series.a[0] == 0 {
        return Err(Error::InvalidParameter("a₀ = 0".into()));
    }
    let a: Vec<f64> = series.a[..=max_k].iter().map(|&v| v as f64).collect();
    let sign = match branch {
        Branch::Positive => 1.0,
        Branch::Negative => -1.0,
    };
    let guard = series.guard as f64;
    let mut lambda = sign * a[0].sqrt();
    if lambda.abs() <= guard {
        return Err(Error::HypothesisRange(format!(
            "seed |λ| = {} does not exceed the right side's maximum degree {guard}",
            lambda.abs()
        )));
    }
    let tol = 1e-12 * a[0].max(1.0);
    let (mut f, mut df) = implicit(&a, lambda);
    for _ in 0..NEWTON_MAX_ITER {
        if f.abs() < tol {
            return Ok(lambda);
        }
        let mut step = f / df;
        let mut accepted = false;
        for _ in 0..60 {
            let next = lambda - step;
            if next.abs() > guard && next.signum() == sign {
                let (nf, ndf) = implicit(&a, next);
                if nf.abs() < f.abs() || nf.abs() < tol {
                    lambda = next;
                    f = nf;
                    df = ndf;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            if f.abs() < 1e-9 * a[0].max(1.0) {
                // the step has shrunk to rounding noise; the residual is at double resolution
                return Ok(lambda);
            }
            return Err(Error::HypothesisRange(format!(
                "Newton step cannot stay above the degree guard {guard} at λ = {lambda}"
            )));
        }
    }
    if f.abs() < tol {
        Ok(lambda)
    } else {
        Err(Error::NoConvergence(format!(
            "implicit equation after {NEWTON_MAX_ITER} iterations, |f| = {}",
            f.abs()
        )))
    }
}

/// `λ₊ − λ₋` from the implicit equation.
pub fn implicit_spread(series: &MomentSeries, max_k: usize) -> Result<f64> {
    Ok(solve_implicit_lambda(series, Branch::Positive, max_k)?
        - solve_implicit_lambda(series, Branch::Negative, max_k)?)
}
