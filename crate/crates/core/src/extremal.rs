//! The extremal family `G_ℓ = (s−1)K₁ ∨ (ℓK_t ∪ mK₁)` for admissible pairs:
//! its cubic eigenvalue equation, the trigonometric spread, the optimal clique
//! count and an exhaustive scan over `ℓ`.
//!
//! The three non-trivial eigenvalues of `G_ℓ` are the roots of
//! `λ³ − (t−1)λ² − (s−1)(n−s+1)λ + (s−1)(t−1)(n−s+1−ℓt)`. Shifting by
//! `(t−1)/3` gives the reduced cubic `x³ − px + q` with `q` linear in `ℓ`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixed::{bisect, Fixed};
use crate::graph::Graph;
use crate::psi::{admissible_closed_form, maximize_psi, ser_q, S_CAP};
use crate::rational::{q, qi, to_f64, Exact, Q};
use crate::spectra::{dense_spread, extremal_matrix, spread, DENSE_CAP};

/// Slack allowed on the arccos argument before a discriminant error.
const ARCCOS_SLACK: f64 = 1e-15;

/// Tolerance under which two scanned spreads count as tied.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct CubicParams {
    pub s: usize,
    pub t: usize,
    pub n: usize,
    pub ell: usize,
    #[serde(serialize_with = "ser_q")]
    pub p: Q,
    #[serde(serialize_with = "ser_q")]
    pub q: Q,
    /// `4p³ > 27q²`, exact.
    pub discriminant_ok: bool,
    pub alpha: f64,
    /// Roots of `x³ − px + q`, non-increasing.
    pub roots: [f64; 3],
    /// Roots shifted back by `(t−1)/3`.
    pub lambda_roots: [f64; 3],
    pub spread: f64,
}

fn check_family(s: usize, t: usize, n: usize, ell: usize) -> Result<usize> {
    if s < 2 || t < s {
        return Err(Error::HypothesisRange(format!("need t ≥ s ≥ 2, got s={s}, t={t}")));
    }
    let right = n
        .checked_sub(s - 1)
        .filter(|&r| r > 0)
        .ok_or_else(|| Error::InvalidParameter(format!("n = {n} leaves no right side for s = {s}")))?;
    if ell * t > right {
        return Err(Error::InvalidParameter(format!(
            "ell·t = {} exceeds n − s + 1 = {right}",
            ell * t
        )));
    }
    Ok(right)
}

/// Exact `(p, q)` of the reduced cubic.
fn reduced(s: usize, t: usize, right: usize, ell: usize) -> (Q, Q) {
    let (s, t, right, ell) = (s as i128, t as i128, right as i128, ell as i128);
    let p = qi((s - 1) * right) + q((t - 1) * (t - 1), 3);
    let q_ = qi((s - 1) * (t - 1)) * (q(2 * right, 3) - qi(ell * t)) - q(2 * (t - 1).pow(3), 27);
    (p, q_)
}

pub fn cubic_params(s: usize, t: usize, n: usize, ell: usize) -> Result<CubicParams> {
    let right = check_family(s, t, n, ell)?;
    let (p, q_) = reduced(s, t, right, ell);
    let discriminant_ok = qi(4) * p * p * p > qi(27) * q_ * q_;
    let (pf, qf) = (to_f64(&p), to_f64(&q_));
    let alpha = cubic_alpha(pf, qf)?;
    let roots = cubic_roots(pf, qf)?;
    let shift = (t as f64 - 1.0) / 3.0;
    Ok(CubicParams {
        s,
        t,
        n,
        ell,
        p,
        q: q_,
        discriminant_ok,
        alpha,
        roots,
        lambda_roots: roots.map(|x| x + shift),
        spread: cubic_spread(pf, qf)?,
    })
}

fn cubic_alpha(p: f64, q: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidParameter(format!("reduced cubic needs p > 0, got {p}")));
    }
    let arg = -(q.abs() / 2.0) / (p / 3.0).powf(1.5);
    if arg < -1.0 - ARCCOS_SLACK {
        return Err(Error::InvalidParameter(format!(
            "discriminant violated: 4p³ ≤ 27q² for p={p}, q={q}"
        )));
    }
    Ok(arg.max(-1.0).acos() / 3.0)
}

/// Roots of `x³ − px + q`, non-increasing.
pub fn cubic_roots(p: f64, q: f64) -> Result<[f64; 3]> {
    let alpha = cubic_alpha(p, q)?;
    let c = 2.0 * (p / 3.0).sqrt();
    let roots = [
        c * alpha.cos(),
        c * (alpha - 2.0 * PI / 3.0).cos(),
        c * (alpha + 2.0 * PI / 3.0).cos(),
    ];
    // these solve the equation with q replaced by |q|; q < 0 negates them
    Ok(if q < 0.0 { [-roots[2], -roots[1], -roots[0]] } else { roots })
}

/// `2√p·sin(α + π/3)`.
pub fn cubic_spread(p: f64, q: f64) -> Result<f64> {
    Ok(2.0 * p.sqrt() * (cubic_alpha(p, q)? + PI / 3.0).sin())
}

/// Exact spread of `G_ℓ` from its cubic. At `ℓ = 0` the graph is `K_{s−1,n−s+1}`
/// and the cubic carries a spurious root `t − 1`, so that case is closed-form.
pub fn family_spread(s: usize, t: usize, n: usize, ell: usize) -> Result<f64> {
    let right = check_family(s, t, n, ell)?;
    if ell == 0 {
        return Ok(2.0 * (((s - 1) * right) as f64).sqrt());
    }
    let (p, q_) = reduced(s, t, right, ell);
    cubic_spread(to_f64(&p), to_f64(&q_))
}

/// [`family_spread`] in wide fixed point: both extreme roots of the integer
/// cubic refined by bisection from their double-precision estimates.
pub fn family_spread_fixed(s: usize, t: usize, n: usize, ell: usize) -> Result<Fixed> {
    let right = check_family(s, t, n, ell)?;
    let a0 = ((s - 1) * right) as i128;
    if ell == 0 {
        return Ok(&Fixed::from_int(a0).sqrt() * &Fixed::from_int(2));
    }
    let b = Fixed::from_int(t as i128 - 1);
    let c = Fixed::from_int(a0);
    let d = Fixed::from_int((s as i128 - 1) * (t as i128 - 1) * (right as i128 - (ell * t) as i128));
    let cubic = |x: &Fixed| {
        // ((x − b)x − c)x + d
        let inner = &(&(x - &b) * x) - &c;
        &(&inner * x) + &d
    };
    let (p, q_) = reduced(s, t, right, ell);
    let roots = cubic_roots(to_f64(&p), to_f64(&q_))?;
    let shift = (t as f64 - 1.0) / 3.0;
    let refine = |guess: f64| -> Result<Fixed> {
        let mut width = 1e-9 * guess.abs().max(1.0);
        for _ in 0..40 {
            let lo = Fixed::from_f64(guess - width);
            let hi = Fixed::from_f64(guess + width);
            if let Some(root) = bisect(lo, hi, cubic) {
                return Ok(root);
            }
            width *= 4.0;
        }
        Err(Error::NoConvergence(format!("no sign change of the cubic near {guess}")))
    };
    let top = refine(roots[0] + shift)?;
    let bottom = refine(roots[2] + shift)?;
    Ok(&top - &bottom)
}

/// `ℓ₁ = (2/(3t))·(n − s + 1 − (t−1)²/(9(s−1)))`, exact.
pub fn ell_one(s: usize, t: usize, n: usize) -> Result<Q> {
    if s < 2 || t < 1 {
        return Err(Error::InvalidParameter(format!("need s ≥ 2 and t ≥ 1, got s={s}, t={t}")));
    }
    let (s, t, n) = (s as i128, t as i128, n as i128);
    Ok(q(2, 3 * t) * (qi(n - s + 1) - q((t - 1) * (t - 1), 9 * (s - 1))))
}

/// Nearest integer(s) to `x`; both neighbours when `x` is a half-integer.
pub fn nearest_integers(x: &Q) -> Vec<i128> {
    let floor = x.floor().to_integer();
    let frac = x - qi(floor);
    let half = q(1, 2);
    if frac == half {
        vec![floor, floor + 1]
    } else if frac < half {
        vec![floor]
    } else {
        vec![floor + 1]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub ell: usize,
    /// Present when `n` fits the graph cap.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<Graph>,
    pub exact_spread: f64,
    /// Valid `ξ` with `⌊(2n + ξ)/(3t)⌋ = ℓ`, as an inclusive interval.
    pub xi_interval: (i64, i64),
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalConstruction {
    pub s: usize,
    pub t: usize,
    pub n: usize,
    pub ell_one: Exact,
    pub ell_candidates: Vec<usize>,
    pub candidates: Vec<Candidate>,
    pub formula_spread: f64,
    /// Smallest valid `ξ` when the candidate is unique.
    pub xi_offset: Option<i64>,
}

pub fn xi_interval(t: usize, n: usize, ell: usize) -> (i64, i64) {
    let (t, n, ell) = (t as i64, n as i64, ell as i64);
    (3 * t * ell - 2 * n, 3 * t * ell + 3 * t - 1 - 2 * n)
}

pub fn ell_zero(s: usize, t: usize, n: usize) -> Result<ExtremalConstruction> {
    if !admissible_closed_form(s, t)? {
        return Err(Error::NotAdmissible { s, t });
    }
    let one = ell_one(s, t, n)?;
    let right = n.saturating_sub(s - 1);
    let mut ells = Vec::new();
    for ell in nearest_integers(&one) {
        if ell < 0 || ell as usize * t > right || right == 0 {
            return Err(Error::InvalidParameter(format!(
                "n = {n} too small: candidate ell = {ell} is infeasible for s = {s}, t = {t}"
            )));
        }
        ells.push(ell as usize);
    }
    let head = Graph::empty(s - 1)?;
    let candidates = ells
        .iter()
        .map(|&ell| {
            let graph = if n <= crate::graph::MAX_ORDER {
                Some(Graph::build_extremal(&head, ell, n, t)?)
            } else {
                None
            };
            let exact_spread = match &graph {
                Some(g) => spread(g),
                None => family_spread(s, t, n, ell)?,
            };
            Ok(Candidate {
                ell,
                graph,
                exact_spread,
                xi_interval: xi_interval(t, n, ell),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xi_offset = (candidates.len() == 1).then(|| candidates[0].xi_interval.0);
    Ok(ExtremalConstruction {
        s,
        t,
        n,
        ell_one: Exact::from(one),
        ell_candidates: ells,
        candidates,
        formula_spread: asymptotic_spread_formula(s, t, n, qi(0))?,
        xi_offset,
    })
}

/// Two-term estimate `2√a₀ + ((t−1)² + ψ_max/(s−1))/(3√a₀)` with
/// `a₀ = (s−1)(n−s+1)`.
pub fn asymptotic_spread_formula(s: usize, t: usize, n: usize, psi_max: Q) -> Result<f64> {
    if s < 2 || t < s || n < s {
        return Err(Error::HypothesisRange(format!("need t ≥ s ≥ 2 and n ≥ s, got s={s}, t={t}, n={n}")));
    }
    let a0 = ((s - 1) * (n - s + 1)) as f64;
    let root = a0.sqrt();
    let numerator = to_f64(&(qi(((t - 1) * (t - 1)) as i128) + psi_max / qi(s as i128 - 1)));
    Ok(2.0 * root + numerator / (3.0 * root))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMethod {
    /// Jacobi on the built graph.
    Graph,
    /// Householder + QL on the dense adjacency matrix.
    DenseMatrix,
    /// Trigonometric spread of the cubic; exact for an empty head.
    Cubic,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub ell: usize,
    pub spread: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub s: usize,
    pub t: usize,
    pub n: usize,
    pub head: Graph,
    pub method: ScanMethod,
    pub table: Vec<ScanRow>,
    /// Every ℓ within [`TIE_TOL`] of the best spread.
    pub best_ells: Vec<usize>,
    pub best_spread: f64,
    /// Best spread minus the best spread among the other ℓ values.
    pub top_two_gap: Option<f64>,
    /// Observed, not asserted.
    pub unimodal: bool,
}

/// Default head for [`scan_ell`]: `(s−1)K₁` for admissible pairs, a ψ-maximiser
/// otherwise.
pub fn default_head(s: usize, t: usize) -> Result<Graph> {
    if admissible_closed_form(s, t)? || s > S_CAP {
        Graph::empty(s - 1)
    } else {
        Ok(maximize_psi(s, t)?.witness)
    }
}

/// Spread of `L ∨ (ℓK_t ∪ mK₁)` for every feasible `ℓ`.
pub fn scan_ell(s: usize, t: usize, n: usize, head: Option<Graph>) -> Result<ScanResult> {
    let right = check_family(s, t, n, 0)?;
    let head = match head {
        Some(h) => h,
        None => default_head(s, t)?,
    };
    if head.order() != s - 1 {
        return Err(Error::InvalidParameter(format!(
            "head must have s − 1 = {} vertices, got {}",
            s - 1,
            head.order()
        )));
    }
    let method = if n <= crate::graph::MAX_ORDER {
        ScanMethod::Graph
    } else if head.edge_count() == 0 {
        ScanMethod::Cubic
    } else if n <= DENSE_CAP {
        ScanMethod::DenseMatrix
    } else {
        return Err(Error::CapExceeded {
            what: "order for a scan with a non-empty head",
            value: n,
            cap: DENSE_CAP,
        });
    };
    let table: Vec<ScanRow> = (0..=right / t)
        .into_par_iter()
        .map(|ell| {
            let value = match method {
                ScanMethod::Graph => spread(&Graph::build_extremal(&head, ell, n, t)?),
                ScanMethod::DenseMatrix => dense_spread(&extremal_matrix(&head, ell, n, t)?)?,
                ScanMethod::Cubic => family_spread(s, t, n, ell)?,
            };
            Ok(ScanRow { ell, spread: value })
        })
        .collect::<Result<Vec<_>>>()?;

    let best_spread = table.iter().map(|r| r.spread).fold(f64::NEG_INFINITY, f64::max);
    let best_ells: Vec<usize> = table
        .iter()
        .filter(|r| best_spread - r.spread <= TIE_TOL)
        .map(|r| r.ell)
        .collect();
    let best_single = table.iter().find(|r| r.spread == best_spread).map(|r| r.ell);
    let top_two_gap = table
        .iter()
        .filter(|r| Some(r.ell) != best_single)
        .map(|r| r.spread)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))))
        .map(|second| best_spread - second);
    Ok(ScanResult {
        s,
        t,
        n,
        head,
        method,
        unimodal: is_unimodal(&table),
        table,
        best_ells,
        best_spread,
        top_two_gap,
    })
}

/// Non-decreasing then non-increasing, up to [`TIE_TOL`].
fn is_unimodal(table: &[ScanRow]) -> bool {
    let mut descending = false;
    for pair in table.windows(2) {
        let diff = pair[1].spread - pair[0].spread;
        if diff < -TIE_TOL {
            descending = true;
        } else if diff > TIE_TOL && descending {
            return false;
        }
    }
    true
}
