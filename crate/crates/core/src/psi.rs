//! The degree functional ψ on graphs of order `s − 1`, its maximisation, and
//! admissibility of `(s, t)`.
//!
//! ψ(L) = 3·Σd² − (2/(s−1))·(Σd)² − (t−1)·Σd depends on `L` only through its
//! degree sequence, so the maximum is taken over graphical degree sequences.
//! All arithmetic is exact.

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::enumerate_graphs_with_cap;
use crate::error::{Error, Result};
use crate::graph::{DegreeSequence, Graph};
use crate::rational::{q, qi, Exact, Q};

/// Default upper limit on `s` for [`maximize_psi`].
pub const S_CAP: usize = 10;

fn check_s(s: usize) -> Result<()> {
    if s < 2 {
        return Err(Error::InvalidParameter(format!("need s ≥ 2, got s={s}")));
    }
    Ok(())
}

pub fn psi_from_degrees(sum_d: u64, sum_d2: u64, s: usize, t: usize) -> Result<Q> {
    check_s(s)?;
    let sum_d = sum_d as i128;
    let sum_d2 = sum_d2 as i128;
    Ok(qi(3 * sum_d2) - q(2 * sum_d * sum_d, s as i128 - 1) - qi((t as i128 - 1) * sum_d))
}

pub fn psi(head: &Graph, s: usize, t: usize) -> Result<Q> {
    check_s(s)?;
    if head.order() != s - 1 {
        return Err(Error::InvalidParameter(format!(
            "ψ needs a graph on s − 1 = {} vertices, got {}",
            s - 1,
            head.order()
        )));
    }
    let d = head.degree_sequence();
    psi_from_degrees(d.sum() as u64, d.sum_of_squares() as u64, s, t)
}

/// Closed form of ψ(K_{1,s−2}).
pub fn psi_star_formula(s: usize, t: usize) -> Result<Q> {
    if s < 3 {
        return Err(Error::InvalidParameter(format!("the star K_(1,s−2) needs s ≥ 3, got s={s}")));
    }
    let (s, t) = (s as i128, t as i128);
    Ok(qi(3 * (s - 2) * (s - 1)) - q(8 * (s - 2) * (s - 2), s - 1) - qi(2 * (t - 1) * (s - 2)))
}

/// `t ≥ (3/2)(s − 3) + 4/(s − 1)`, exact. `s = 2` is admissible unconditionally:
/// the only graph on one vertex is `K₁`.
pub fn admissible_closed_form(s: usize, t: usize) -> Result<bool> {
    if s < 2 || t < s {
        return Err(Error::HypothesisRange(format!("need t ≥ s ≥ 2, got s={s}, t={t}")));
    }
    if s == 2 {
        return Ok(true);
    }
    let (si, ti) = (s as i128, t as i128);
    Ok(qi(ti) >= q(3 * (si - 3), 2) + q(4, si - 1))
}

/// All graphical non-increasing degree sequences of length `m`.
pub fn graphical_sequences(m: usize) -> Vec<DegreeSequence> {
    fn extend(prefix: &mut Vec<usize>, m: usize, out: &mut Vec<DegreeSequence>) {
        if prefix.len() == m {
            let seq = DegreeSequence(prefix.clone());
            if seq.is_graphical() {
                out.push(seq);
            }
            return;
        }
        let hi = prefix.last().copied().unwrap_or(m.saturating_sub(1));
        for d in (0..=hi).rev() {
            prefix.push(d);
            extend(prefix, m, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(m), m, &mut out);
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct PsiReport {
    pub s: usize,
    pub t: usize,
    #[serde(serialize_with = "ser_q")]
    pub psi_max: Q,
    pub optimal_degree_sequences: Vec<DegreeSequence>,
    pub witness: Graph,
    pub admissible: bool,
}

pub(crate) fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    Exact::from(*x).serialize(s)
}

pub fn maximize_psi(s: usize, t: usize) -> Result<PsiReport> {
    maximize_psi_with_cap(s, t, S_CAP)
}

pub fn maximize_psi_with_cap(s: usize, t: usize, cap: usize) -> Result<PsiReport> {
    check_s(s)?;
    if s > cap {
        return Err(Error::CapExceeded {
            what: "s for ψ maximisation",
            value: s,
            cap,
        });
    }
    let mut best: Option<Q> = None;
    let mut optimal: Vec<DegreeSequence> = Vec::new();
    for seq in graphical_sequences(s - 1) {
        let value = psi_from_degrees(seq.sum() as u64, seq.sum_of_squares() as u64, s, t)?;
        match best {
            Some(b) if value < b => {}
            Some(b) if value == b => optimal.push(seq),
            _ => {
                best = Some(value);
                optimal = vec![seq];
            }
        }
    }
    let psi_max = best.expect("the all-zero sequence is always graphical");
    let admissible = psi_max == qi(0) && optimal.len() == 1 && optimal[0].is_all_zero();
    let witness = optimal[0].realize()?;
    Ok(PsiReport {
        s,
        t,
        psi_max,
        optimal_degree_sequences: optimal,
        witness,
        admissible,
    })
}

/// Admissibility by evaluating ψ on every isomorphism class of graphs on
/// `s − 1` vertices. Independent of the degree-sequence path.
pub fn admissible_by_graph_census(s: usize, t: usize) -> Result<bool> {
    check_s(s)?;
    let zero = qi(0);
    for g in enumerate_graphs_with_cap(s - 1, 8)? {
        let value = psi(&g, s, t)?;
        if value > zero || (value == zero && g.edge_count() > 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityRow {
    pub s: usize,
    pub t: usize,
    /// Degree-sequence maximisation; authoritative.
    pub brute_force: bool,
    pub closed_form: bool,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

/// Admissibility for `2 ≤ s ≤ s_max`, `s ≤ t ≤ t_max`, both ways.
pub fn admissibility_table(s_max: usize, t_max: usize) -> Result<Vec<AdmissibilityRow>> {
    if s_max > S_CAP {
        return Err(Error::CapExceeded {
            what: "s for the admissibility table",
            value: s_max,
            cap: S_CAP,
        });
    }
    let pairs: Vec<(usize, usize)> = (2..=s_max)
        .flat_map(|s| (s..=t_max).map(move |t| (s, t)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(s, t)| {
            let brute_force = maximize_psi(s, t)?.admissible;
            let closed_form = admissible_closed_form(s, t)?;
            Ok(AdmissibilityRow {
                s,
                t,
                brute_force,
                closed_form,
                agree: brute_force == closed_form,
                note: (s == 2).then_some(
                    "closed-form inequality reads t ≥ 5/2 at s = 2; special-cased since ψ(K₁) = 0",
                ),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeSquareBounds {
    #[serde(serialize_with = "ser_q")]
    pub decaen: Q,
    #[serde(serialize_with = "ser_q")]
    pub das: Q,
    pub actual: usize,
}

/// Upper bounds on Σd²: `e(2e/(n−1) + n − 2)` and `2e(d₁ + dₙ) − n·d₁·dₙ`.
pub fn degree_square_bounds(g: &Graph) -> Result<DegreeSquareBounds> {
    let n = g.order() as i128;
    if n < 2 {
        return Err(Error::InvalidParameter("the de Caen bound needs n ≥ 2".into()));
    }
    let e = g.edge_count() as i128;
    let d1 = g.max_degree() as i128;
    let dn = g.min_degree() as i128;
    Ok(DegreeSquareBounds {
        decaen: qi(e) * (q(2 * e, n - 1) + qi(n - 2)),
        das: qi(2 * e * (d1 + dn) - n * d1 * dn),
        actual: g.degree_sequence().sum_of_squares(),
    })
}
