//! Exhaustive maximum-spread search over small minor-free graphs and the
//! expansion convergence experiment.

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::canonical_code;
use crate::enumerate::{enumerate_graphs, enumerate_graphs_with_cap, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::expansion::{approx_spread_fixed, clique_union_moments, ExpansionEstimate, MomentSeries};
use crate::extremal::{ell_one, family_spread_fixed, nearest_integers, asymptotic_spread_formula, TIE_TOL};
use crate::graph::Graph;
use crate::minor::has_kst_minor;
use crate::psi::admissible_closed_form;
use crate::rational::qi;
use crate::spectra::{eigenvalues, spread, tait_bound};

/// Graphs evaluated per parallel batch during a census.
const BATCH: usize = 4096;

#[derive(Debug, Clone, Serialize)]
pub struct FamilyMatch {
    pub head: Graph,
    pub ell: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TaitCheck {
    /// False when `n < s + t`, outside the bound's hypotheses.
    pub applicable: bool,
    pub bound: Option<f64>,
    pub max_spectral_radius: f64,
    pub consistent: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchRecord {
    pub n: usize,
    pub s: usize,
    pub t: usize,
    /// Canonical graph6 codes of every class within the tie tolerance of the best.
    pub best_graphs: Vec<String>,
    pub best_spread: f64,
    /// Best spread minus the best spread outside the winning set.
    pub runner_up_gap: Option<f64>,
    /// Minor-free classes examined.
    pub census_size: usize,
    pub total_classes: usize,
    /// Whether each winner is `L ∨ (ℓK_t ∪ mK₁)` for some `L` on `s − 1`
    /// vertices. Observational only.
    pub family_membership: Vec<Option<FamilyMatch>>,
    pub winner_recomputed_spread: f64,
    pub tait: TaitCheck,
    /// Largest edge count among minor-free classes, with the `s = 2` edge bound.
    pub max_edges: usize,
    pub crs_edge_bound: Option<f64>,
}

struct Evaluated {
    graph: Graph,
    spread: f64,
    radius: f64,
    edges: usize,
}

pub fn search_max_spread(n: usize, s: usize, t: usize) -> Result<SearchRecord> {
    search_max_spread_with_cap(n, s, t, DEFAULT_CAP)
}

pub fn search_max_spread_with_cap(n: usize, s: usize, t: usize, cap: usize) -> Result<SearchRecord> {
    if s < 1 || t < s {
        return Err(Error::HypothesisRange(format!("need 1 ≤ s ≤ t, got s={s}, t={t}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let census = enumerate_graphs_with_cap(n, cap)?;
    let mut kept: Vec<Evaluated> = Vec::new();
    let mut total = 0;
    let mut batch: Vec<Graph> = Vec::with_capacity(BATCH);
    let flush = |batch: &mut Vec<Graph>, kept: &mut Vec<Evaluated>| -> Result<()> {
        let evaluated: Vec<Option<Evaluated>> = batch
            .par_iter()
            .map(|g| {
                if has_kst_minor(g, s, t)?.is_some() {
                    return Ok(None);
                }
                let spec = eigenvalues(g);
                Ok(Some(Evaluated {
                    graph: *g,
                    spread: spec.spread,
                    radius: spec.largest(),
                    edges: g.edge_count(),
                }))
            })
            .collect::<Result<_>>()?;
        kept.extend(evaluated.into_iter().flatten());
        batch.clear();
        Ok(())
    };
    for g in census {
        total += 1;
        batch.push(g);
        if batch.len() == BATCH {
            flush(&mut batch, &mut kept)?;
        }
    }
    flush(&mut batch, &mut kept)?;

    let best_spread = kept.iter().map(|e| e.spread).fold(f64::NEG_INFINITY, f64::max);
    let (winners, others): (Vec<&Evaluated>, Vec<&Evaluated>) =
        kept.iter().partition(|e| best_spread - e.spread <= TIE_TOL);
    let runner_up_gap = others
        .iter()
        .map(|e| e.spread)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))))
        .map(|second| best_spread - second);

    let mut coded: Vec<(String, Graph)> = winners
        .iter()
        .map(|e| Ok((canonical_code(&e.graph)?.as_str().to_string(), e.graph)))
        .collect::<Result<_>>()?;
    coded.sort_by(|a, b| a.0.cmp(&b.0));
    let family_membership = coded
        .iter()
        .map(|(_, g)| family_match(g, s, t))
        .collect::<Result<Vec<_>>>()?;
    let winner_recomputed_spread = coded.first().map_or(f64::NAN, |(_, g)| spread(g));

    let max_radius = kept.iter().map(|e| e.radius).fold(f64::NEG_INFINITY, f64::max);
    let tait = match tait_bound(s, t, n) {
        Ok(bound) => TaitCheck {
            applicable: true,
            bound: Some(bound),
            max_spectral_radius: max_radius,
            consistent: Some(max_radius <= bound + 1e-9),
        },
        Err(_) => TaitCheck {
            applicable: false,
            bound: None,
            max_spectral_radius: max_radius,
            consistent: None,
        },
    };
    let crs_edge_bound = (s == 2 && t >= 2).then(|| (t + 1) as f64 * (n - 1) as f64 / 2.0);

    Ok(SearchRecord {
        n,
        s,
        t,
        best_graphs: coded.into_iter().map(|(code, _)| code).collect(),
        best_spread,
        runner_up_gap,
        census_size: kept.len(),
        total_classes: total,
        family_membership,
        winner_recomputed_spread,
        tait,
        max_edges: kept.iter().map(|e| e.edges).max().unwrap_or(0),
        crs_edge_bound,
    })
}

/// Finds `L` and `ℓ` with `g ≅ L ∨ (ℓK_t ∪ mK₁)`, if any.
pub fn family_match(g: &Graph, s: usize, t: usize) -> Result<Option<FamilyMatch>> {
    let n = g.order();
    if s < 1 || n < s {
        return Ok(None);
    }
    let target = canonical_code(g)?;
    let right = n - (s - 1);
    for head in enumerate_graphs(s - 1)? {
        for ell in 0..=right / t {
            if ell == 0 && right == 0 {
                continue;
            }
            let candidate = Graph::build_extremal(&head, ell, n, t)?;
            if candidate.edge_count() == g.edge_count() && canonical_code(&candidate)? == target {
                return Ok(Some(FamilyMatch { head, ell }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub ell: usize,
    pub exact_spread: f64,
    pub approx_spread: f64,
    /// `exact − approx`, computed in wide fixed point.
    pub residual: f64,
    /// Residual at the previous `n` divided by this one.
    pub ratio: Option<f64>,
    pub formula_spread: f64,
    /// `|exact − formula|·n^{3/2}`.
    pub formula_scaled_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub s: usize,
    pub t: usize,
    pub rows: Vec<ConvergenceRow>,
    /// Smallest `C` with `|exact − formula| ≤ C/n^{3/2}` over the rows.
    pub fitted_c: f64,
}

/// Exact spread of the `ℓ = round(ℓ₁)` construction against the four-term
/// expansion, per `n`.
pub fn convergence_experiment(s: usize, t: usize, ns: &[usize]) -> Result<ConvergenceTable> {
    if !admissible_closed_form(s, t)? {
        return Err(Error::NotAdmissible { s, t });
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ns.len());
    for &n in ns {
        let candidates = nearest_integers(&ell_one(s, t, n)?);
        let ell = usize::try_from(candidates[0])
            .map_err(|_| Error::InvalidParameter(format!("n = {n} too small for s = {s}, t = {t}")))?;
        let right = n
            .checked_sub(s - 1)
            .filter(|&r| r >= ell * t)
            .ok_or_else(|| Error::InvalidParameter(format!("n = {n} too small for s = {s}, t = {t}")))?;
        let mut l = vec![0u128; 7];
        l[0] = (s - 1) as u128;
        let r = clique_union_moments(t, ell, right - ell * t, 6)?;
        let series = MomentSeries::from_moments(l, r, t - 1)?;
        let exact = family_spread_fixed(s, t, n, ell)?;
        let approx = approx_spread_fixed(&series)?;
        let residual = (&exact - &approx).to_f64();
        let exact_f = exact.to_f64();
        let formula = asymptotic_spread_formula(s, t, n, qi(0))?;
        let ratio = rows.last().map(|prev| prev.residual.abs() / residual.abs());
        rows.push(ConvergenceRow {
            n,
            ell,
            exact_spread: exact_f,
            approx_spread: ExpansionEstimate::from_series(&series)?.approx_spread,
            residual,
            ratio,
            formula_spread: formula,
            formula_scaled_gap: (exact_f - formula).abs() * (n as f64).powf(1.5),
        });
    }
    let fitted_c = rows.iter().map(|r| r.formula_scaled_gap).fold(0.0, f64::max);
    Ok(ConvergenceTable { s, t, rows, fitted_c })
}
