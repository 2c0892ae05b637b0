//! Adjacency spectra, spread, closed-form join spectra and spectral-radius bounds.

use serde::Serialize;

use crate::eigen::{jacobi_eigenvalues, tridiagonal_ql_eigenvalues, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest order accepted by the dense large-matrix path.
pub const DENSE_CAP: usize = 2000;

/// Eigenvalues sorted non-increasing and the spread `λ₁ − λₙ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub spread: f64,
}

impl Spectrum {
    pub fn from_unsorted(mut eigenvalues: Vec<f64>) -> Spectrum {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let spread = match (eigenvalues.first(), eigenvalues.last()) {
            (Some(hi), Some(lo)) => hi - lo,
            _ => 0.0,
        };
        Spectrum { eigenvalues, spread }
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn smallest(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x * x).sum()
    }

    /// Multiset comparison after sorting.
    pub fn approx_eq(&self, other: &Spectrum, tol: f64) -> bool {
        self.eigenvalues.len() == other.eigenvalues.len()
            && self
                .eigenvalues
                .iter()
                .zip(&other.eigenvalues)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

pub fn adjacency_matrix(g: &Graph) -> SymmetricMatrix {
    SymmetricMatrix::from_fn(g.order(), |u, v| if g.has_edge(u, v) { 1.0 } else { 0.0 })
}

pub fn eigenvalues(g: &Graph) -> Spectrum {
    Spectrum::from_unsorted(jacobi_eigenvalues(&adjacency_matrix(g)))
}

pub fn spread(g: &Graph) -> f64 {
    eigenvalues(g).spread
}

/// A regular graph summarised by its degree, order and spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularPart {
    degree: usize,
    order: usize,
    eigenvalues: Vec<f64>,
}

impl RegularPart {
    pub fn from_graph(g: &Graph) -> Result<RegularPart> {
        let degree = g
            .regular_degree()
            .ok_or_else(|| Error::NotRegular(g.degree(0)))?;
        Ok(RegularPart {
            degree,
            order: g.order(),
            eigenvalues: eigenvalues(g).eigenvalues,
        })
    }

    /// Accepts a supplied spectrum after checking its length and that its
    /// largest value is the degree.
    pub fn new(degree: usize, order: usize, eigenvalues: Vec<f64>) -> Result<RegularPart> {
        let spec = Spectrum::from_unsorted(eigenvalues);
        if spec.eigenvalues.len() != order || order == 0 {
            return Err(Error::InvalidParameter(format!(
                "spectrum has {} values for order {order}",
                spec.eigenvalues.len()
            )));
        }
        if degree >= order || (spec.largest() - degree as f64).abs() > 1e-9 {
            return Err(Error::NotRegular(degree));
        }
        Ok(RegularPart {
            degree,
            order,
            eigenvalues: spec.eigenvalues,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

/// Spectrum of `G ∨ H` for regular `G`, `H`: the non-Perron eigenvalues of both
/// sides plus the roots of `(x − k)(x − ℓ) = mn`.
pub fn join_regular_spectrum(g: &RegularPart, h: &RegularPart) -> Spectrum {
    let k = g.degree as f64;
    let l = h.degree as f64;
    let mn = (g.order * h.order) as f64;
    // x² − (k+ℓ)x + kℓ − mn = 0
    let half_sum = (k + l) / 2.0;
    let disc = ((k - l) / 2.0).powi(2) + mn;
    let root = disc.sqrt();
    let mut values: Vec<f64> = Vec::with_capacity(g.order + h.order);
    values.extend_from_slice(&g.eigenvalues[1..]);
    values.extend_from_slice(&h.eigenvalues[1..]);
    values.push(half_sum + root);
    values.push(half_sum - root);
    Spectrum::from_unsorted(values)
}

/// Spread of `(s−1)K₁ ∨ qK_t`: `√((t−1)² + 4(s−1)qt)`. Requires `q ≥ 1`
/// so the right side is non-empty.
pub fn kst_spread_closed_form(s: usize, t: usize, q: usize) -> Result<f64> {
    if s < 2 || t < 1 {
        return Err(Error::InvalidParameter(format!("need s ≥ 2 and t ≥ 1, got s={s}, t={t}")));
    }
    if q == 0 {
        return Err(Error::InvalidParameter(
            "q = 0 leaves n = s − 1 < s; the right side must be non-empty".into(),
        ));
    }
    let (s, t, q) = (s as f64, t as f64, q as f64);
    Ok(((t - 1.0).powi(2) + 4.0 * (s - 1.0) * q * t).sqrt())
}

fn check_pair(s: usize, t: usize) -> Result<()> {
    if s < 2 || t < s {
        return Err(Error::HypothesisRange(format!("need t ≥ s ≥ 2, got s={s}, t={t}")));
    }
    Ok(())
}

/// Spectral-radius ceiling for `K_{s,t}`-minor-free graphs of order `n`:
/// `(s + t − 3 + √((t − s + 1)² + 4(s − 1)(n − s + 1))) / 2`.
pub fn tait_bound(s: usize, t: usize, n: usize) -> Result<f64> {
    check_pair(s, t)?;
    if n < s + t {
        return Err(Error::HypothesisRange(format!("need n ≥ s + t = {}, got n={n}", s + t)));
    }
    let (s, t, n) = (s as f64, t as f64, n as f64);
    Ok((s + t - 3.0 + ((t - s + 1.0).powi(2) + 4.0 * (s - 1.0) * (n - s + 1.0)).sqrt()) / 2.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaWindow {
    pub low: f64,
    pub high: f64,
    pub a0: usize,
    pub note: &'static str,
}

/// `√a₀ ∓ (s+t−3)/2` with `a₀ = (s−1)(n−s+1)`. Diagnostic only.
pub fn lambdan_window(s: usize, t: usize, n: usize) -> Result<LambdaWindow> {
    check_pair(s, t)?;
    if n < s {
        return Err(Error::InvalidParameter(format!("need n ≥ s, got n={n}")));
    }
    let a0 = (s - 1) * (n - s + 1);
    let centre = (a0 as f64).sqrt();
    let half = (s + t - 3) as f64 / 2.0;
    Ok(LambdaWindow {
        low: centre - half,
        high: centre + half,
        a0,
        note: "asymptotic window; ignores the O(1/sqrt(n)) slack",
    })
}

/// Dense adjacency of `L ∨ (ell·K_t ∪ (n − |L| − t·ell)·P₁)` for orders beyond
/// the graph cap.
pub fn extremal_matrix(head: &Graph, ell: usize, n: usize, t: usize) -> Result<SymmetricMatrix> {
    if n > DENSE_CAP {
        return Err(Error::CapExceeded {
            what: "dense matrix order",
            value: n,
            cap: DENSE_CAP,
        });
    }
    let h = head.order();
    let used = h + ell * t;
    if t == 0 || used > n || n == h {
        return Err(Error::InvalidParameter(format!(
            "infeasible construction |L|={h}, ell={ell}, t={t}, n={n}"
        )));
    }
    let clique_of = |v: usize| (v >= h && v < used).then(|| (v - h) / t);
    Ok(SymmetricMatrix::from_fn(n, |u, v| {
        let adjacent = if u == v {
            false
        } else if u < h && v < h {
            head.has_edge(u, v)
        } else if u < h || v < h {
            true
        } else {
            matches!((clique_of(u), clique_of(v)), (Some(a), Some(b)) if a == b)
        };
        if adjacent {
            1.0
        } else {
            0.0
        }
    }))
}

/// Spread of a dense symmetric matrix via the tridiagonal path.
pub fn dense_spread(m: &SymmetricMatrix) -> Result<f64> {
    let eig = tridiagonal_ql_eigenvalues(m)?;
    Ok(eig[0] - eig[eig.len() - 1])
}
