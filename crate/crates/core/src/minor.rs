//! Exact `H`-minor containment for small graphs by branch-set search, and
//! edge-count filters for `K_{s,t}`-minor-freeness.
//!
//! `H` vertices are placed one at a time onto connected, pairwise disjoint
//! vertex sets of `G`; every `H` edge to an already placed vertex must be
//! realised by a `G` edge between the two sets.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{connected_within, neighborhood, Bits, Family, Graph};

/// Default order limit for exact minor search.
pub const DEFAULT_CAP: usize = 14;
/// Order limit that no option can raise.
pub const HARD_CAP: usize = 20;

/// Branch sets indexed by `H` vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorWitness {
    pub branch_sets: Vec<Vec<usize>>,
}

impl MinorWitness {
    fn from_masks(masks: &[u64]) -> MinorWitness {
        MinorWitness {
            branch_sets: masks.iter().map(|&m| Bits(m).collect()).collect(),
        }
    }
}

/// Checks a witness from first principles: non-empty disjoint sets, each
/// connected by breadth-first search, and a `G` edge for every `H` edge.
pub fn check_witness(g: &Graph, h: &Graph, witness: &MinorWitness) -> bool {
    let sets = &witness.branch_sets;
    if sets.len() != h.order() {
        return false;
    }
    let mut owner = vec![usize::MAX; g.order()];
    for (i, set) in sets.iter().enumerate() {
        if set.is_empty() {
            return false;
        }
        for &v in set {
            if v >= g.order() || owner[v] != usize::MAX {
                return false;
            }
            owner[v] = i;
        }
    }
    for (i, set) in sets.iter().enumerate() {
        let mut seen = vec![false; g.order()];
        let mut queue = vec![set[0]];
        seen[set[0]] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop() {
            for v in 0..g.order() {
                if g.has_edge(u, v) && owner[v] == i && !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push(v);
                }
            }
        }
        if reached != set.len() {
            return false;
        }
    }
    h.edges().all(|(a, b)| {
        sets[a]
            .iter()
            .any(|&u| sets[b].iter().any(|&v| g.has_edge(u, v)))
    })
}

#[derive(Debug, Clone, Copy)]
pub struct MinorOptions {
    pub cap: usize,
}

impl Default for MinorOptions {
    fn default() -> Self {
        MinorOptions { cap: DEFAULT_CAP }
    }
}

pub fn has_minor(g: &Graph, h: &Graph) -> Result<Option<MinorWitness>> {
    has_minor_with(g, h, MinorOptions::default())
}

pub fn has_kst_minor(g: &Graph, s: usize, t: usize) -> Result<Option<MinorWitness>> {
    has_kst_minor_with(g, s, t, MinorOptions::default())
}

pub fn has_kst_minor_with(g: &Graph, s: usize, t: usize, opts: MinorOptions) -> Result<Option<MinorWitness>> {
    let h = Graph::construct(Family::CompleteBipartite(s, t))?;
    has_minor_with(g, &h, opts)
}

pub fn has_minor_with(g: &Graph, h: &Graph, opts: MinorOptions) -> Result<Option<MinorWitness>> {
    let cap = opts.cap.min(HARD_CAP);
    if g.order() > cap {
        return Err(Error::CapExceeded {
            what: "order for exact minor search",
            value: g.order(),
            cap,
        });
    }
    let k = h.order();
    if k == 0 {
        return Ok(Some(MinorWitness { branch_sets: Vec::new() }));
    }
    if k > g.order() || h.edge_count() > g.edge_count() {
        return Ok(None);
    }
    let found = Search::new(g, h).run();
    Ok(found.map(|masks| MinorWitness::from_masks(&masks)))
}

struct Search {
    /// `H` vertices in placement order.
    order: Vec<usize>,
    /// For each position, positions of earlier `H` neighbours.
    earlier: Vec<Vec<usize>>,
    /// For each position, the number of later `H` neighbours.
    later: Vec<usize>,
    /// For each position, the earlier position of a twin, if any.
    twin: Vec<Option<usize>>,
    /// Connected vertex sets of the reduced `G`, smallest first.
    subsets: Vec<u64>,
    /// Neighbourhood of each subset, outside the subset.
    boundary: Vec<u64>,
    available: u64,
    /// Twin classes of the reduced `G` with at least two members.
    classes: Vec<u64>,
}

impl Search {
    fn new(g: &Graph, h: &Graph) -> Search {
        let k = h.order();
        let mut order = Vec::with_capacity(k);
        let mut placed = 0u64;
        while order.len() < k {
            let next = (0..k)
                .filter(|&v| placed >> v & 1 == 0)
                .max_by_key(|&v| ((h.row(v) & placed).count_ones(), h.degree(v), std::cmp::Reverse(v)))
                .expect("unplaced vertex remains");
            order.push(next);
            placed |= 1 << next;
        }
        let position: Vec<usize> = {
            let mut p = vec![0; k];
            for (i, &v) in order.iter().enumerate() {
                p[v] = i;
            }
            p
        };
        let earlier: Vec<Vec<usize>> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| h.neighbors(v).map(|w| position[w]).filter(|&j| j < i).collect())
            .collect();
        let later: Vec<usize> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| h.neighbors(v).filter(|&w| position[w] > i).count())
            .collect();
        // swapping two twins is an automorphism of H, so their sets may be
        // taken in increasing order of lowest vertex
        let twin: Vec<Option<usize>> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                (0..i).rev().find(|&j| {
                    let w = order[j];
                    h.row(v) & !(1 << w) == h.row(w) & !(1 << v)
                })
            })
            .collect();

        let available = reduce(g, h);
        let mut subsets: Vec<u64> = (1..=g.vertex_mask())
            .filter(|&m| m & !available == 0 && connected_within(g, m))
            .collect();
        subsets.sort_by_key(|m| (m.count_ones(), *m));
        let boundary = subsets.iter().map(|&m| neighborhood(g, m) & !m).collect();
        Search {
            order,
            earlier,
            later,
            twin,
            subsets,
            boundary,
            available,
            classes: twin_classes(g, available),
        }
    }

    fn run(&self) -> Option<Vec<u64>> {
        let k = self.order.len();
        if (self.available.count_ones() as usize) < k {
            return None;
        }
        let first = self
            .subsets
            .par_iter()
            .enumerate()
            .find_map_first(|(idx, &set)| {
                if !self.takes_prefixes(set, self.available) {
                    return None;
                }
                let mut chosen = vec![(0u64, 0u64); k];
                chosen[0] = (set, self.boundary[idx]);
                if !self.feasible(&chosen[..1], self.available & !set) {
                    return None;
                }
                self.extend(&mut chosen, 1, self.available & !set)
            })?;
        let mut masks = vec![0u64; k];
        for (i, &v) in self.order.iter().enumerate() {
            masks[v] = first[i];
        }
        Some(masks)
    }

    /// Swapping twins of `G` is an automorphism, so each twin class may be
    /// filled in vertex order: a set takes the lowest free members of a class.
    fn takes_prefixes(&self, set: u64, free: u64) -> bool {
        self.classes.iter().all(|&class| {
            let part = set & class;
            let open = free & class;
            part == 0 || part == lowest_bits(open, part.count_ones())
        })
    }

    /// Every placed set still needs one distinct free neighbour per unplaced
    /// `H` neighbour, and enough free vertices must remain.
    fn feasible(&self, chosen: &[(u64, u64)], free: u64) -> bool {
        let placed = chosen.len();
        if (free.count_ones() as usize) < self.order.len() - placed {
            return false;
        }
        chosen.iter().enumerate().all(|(i, &(_, bnd))| {
            let pending = self.later[i] - self.placed_later(i, placed);
            (bnd & free).count_ones() as usize >= pending
        })
    }

    fn placed_later(&self, i: usize, placed: usize) -> usize {
        (i + 1..placed).filter(|&j| self.earlier[j].contains(&i)).count()
    }

    fn extend(&self, chosen: &mut Vec<(u64, u64)>, pos: usize, free: u64) -> Option<Vec<u64>> {
        if pos == self.order.len() {
            return Some(chosen.iter().map(|&(m, _)| m).collect());
        }
        let remaining_after = self.order.len() - pos - 1;
        let max_size = free.count_ones() as usize - remaining_after;
        let min_vertex = self.twin[pos].map(|j| chosen[j].0.trailing_zeros());
        for (idx, &set) in self.subsets.iter().enumerate() {
            if set.count_ones() as usize > max_size {
                break;
            }
            if set & !free != 0 {
                continue;
            }
            if let Some(low) = min_vertex {
                if set.trailing_zeros() <= low {
                    continue;
                }
            }
            if !self.earlier[pos].iter().all(|&j| chosen[j].1 & set != 0) || !self.takes_prefixes(set, free) {
                continue;
            }
            chosen[pos] = (set, self.boundary[idx]);
            let rest = free & !set;
            if self.feasible(&chosen[..=pos], rest) {
                if let Some(found) = self.extend(chosen, pos + 1, rest) {
                    return Some(found);
                }
            }
        }
        None
    }
}

fn lowest_bits(mut mask: u64, count: u32) -> u64 {
    let mut out = 0;
    for _ in 0..count {
        let low = mask & mask.wrapping_neg();
        out |= low;
        mask &= !low;
    }
    out
}

/// Classes of vertices in `G[keep]` sharing an open or a closed neighbourhood.
fn twin_classes(g: &Graph, keep: u64) -> Vec<u64> {
    let mut groups: std::collections::HashMap<(bool, u64), u64> = std::collections::HashMap::new();
    for v in Bits(keep) {
        let open = g.row(v) & keep;
        *groups.entry((false, open)).or_default() |= 1 << v;
        *groups.entry((true, open | 1 << v)).or_default() |= 1 << v;
    }
    let mut classes: Vec<u64> = groups.into_values().filter(|m| m.count_ones() > 1).collect();
    classes.sort_unstable();
    classes
}

/// Vertices that can appear in some minor model. When `H` has minimum degree
/// at least 2, a `G` vertex of degree at most 1 in what remains is never
/// needed: alone it lacks neighbours, and inside a larger set it is a leaf.
fn reduce(g: &Graph, h: &Graph) -> u64 {
    let mut keep = g.vertex_mask();
    if h.min_degree() < 2 {
        return keep;
    }
    loop {
        let drop = Bits(keep)
            .filter(|&v| (g.row(v) & keep).count_ones() <= 1)
            .fold(0u64, |acc, v| acc | 1 << v);
        if drop == 0 {
            return keep;
        }
        keep &= !drop;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Consistent with minor-freeness.
    Pass,
    /// The edge count certifies a `K_{s,t}` minor.
    Fail,
    /// Outside the bound's hypotheses.
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct FilterOutcome {
    pub name: &'static str,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FilterReport {
    pub n: usize,
    pub edges: usize,
    pub filters: Vec<FilterOutcome>,
}

impl FilterReport {
    /// True when some filter certifies a minor.
    pub fn certifies_minor(&self) -> bool {
        self.filters.iter().any(|f| f.verdict == Verdict::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&FilterOutcome> {
        self.filters.iter().find(|f| f.name == name)
    }
}

pub fn default_mader_constant(t: usize) -> f64 {
    10.0 * t as f64
}

/// `log₂` of the threshold `(180 s log₂ s)^{1 + 6 s log₂ s}` on `t`.
fn kp_threshold_log2(s: usize) -> Option<f64> {
    if s < 2 {
        return None;
    }
    let lg = (s as f64).log2();
    Some((1.0 + 6.0 * s as f64 * lg) * (180.0 * s as f64 * lg).log2())
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Edge-count filters for `K_{s,t}`-minor-freeness, each applied only inside
/// its hypotheses.
pub fn edge_filters(g: &Graph, s: usize, t: usize, mader_constant: f64) -> FilterReport {
    let n = g.order();
    let e = g.edge_count();
    let ef = e as f64;
    let outcome = |name, holds: bool, bound: f64, note: String| FilterOutcome {
        name,
        verdict: if holds { Verdict::Pass } else { Verdict::Fail },
        bound: Some(bound),
        note,
    };
    let skip = |name, note: String| FilterOutcome {
        name,
        verdict: Verdict::NotApplicable,
        bound: None,
        note,
    };
    let mut filters = Vec::with_capacity(4);

    if n == 0 || s == 0 || s > t {
        filters.push(skip("mader", "needs n > 0 and 1 ≤ s ≤ t".into()));
    } else {
        let bound = mader_constant * n as f64;
        filters.push(outcome("mader", ef <= bound, bound, format!("heuristic constant C = {mader_constant}")));
    }

    match kp_threshold_log2(s) {
        Some(log_threshold) if t > 0 && (t as f64).log2() >= log_threshold && n >= s + t => {
            let bound = (t + 3 * s) as f64 / 2.0 * (n - s + 1) as f64;
            filters.push(outcome("kostochka_prince", ef <= bound, bound, "within hypotheses".into()));
        }
        Some(log_threshold) => filters.push(skip(
            "kostochka_prince",
            format!("needs log₂ t ≥ {log_threshold:.1} and n ≥ s + t"),
        )),
        None => filters.push(skip("kostochka_prince", "needs s ≥ 2".into())),
    }

    if s == 2 && t >= 2 && n >= 1 {
        let bound = (t + 1) as f64 * (n - 1) as f64 / 2.0;
        filters.push(outcome("chudnovsky_reed_seymour", ef <= bound, bound, "s = 2".into()));
    } else {
        filters.push(skip("chudnovsky_reed_seymour", "only for s = 2, t ≥ 2".into()));
    }

    match g.bipartition() {
        Some((a, b)) if a != 0 && b != 0 && s >= 1 => {
            let c = 4f64.powi(s as i32 + 1) * factorial(s) * t as f64;
            let (na, nb) = (a.count_ones() as f64, b.count_ones() as f64);
            // either side may play the role of the first part
            let bound = ((s - 1) as f64 * na + c * nb).min((s - 1) as f64 * nb + c * na);
            filters.push(outcome("thomason_bipartite", ef < bound, bound, "edges < (s−1)n + 4^(s+1) s! t m".into()));
        }
        _ => filters.push(skip("thomason_bipartite", "needs a bipartite graph with two non-empty parts".into())),
    }

    FilterReport { n, edges: e, filters }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_graphs;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn kst(s: usize, t: usize) -> Graph {
        Graph::construct(Family::CompleteBipartite(s, t)).unwrap()
    }

    fn found(g: &Graph, h: &Graph) -> bool {
        match has_minor(g, h).unwrap() {
            Some(w) => {
                assert!(check_witness(g, h, &w), "bad witness {w:?} for {g:?}");
                true
            }
            None => false,
        }
    }

    #[test]
    fn spec_examples() {
        let c4 = Graph::construct(Family::Cycle(4)).unwrap();
        assert!(found(&c4, &kst(2, 2)));
        let path = Graph::construct(Family::Path(9)).unwrap();
        assert!(!found(&path, &kst(2, 2)));
        let star = Graph::construct(Family::Star(7)).unwrap();
        assert!(!found(&star, &kst(2, 2)));
        assert!(found(&Graph::complete(5).unwrap(), &kst(2, 3)));
    }

    #[test]
    fn trees_have_no_cycle_minor() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let n = rng.gen_range(2..=14);
            let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
            let tree = Graph::from_edges(n, &edges).unwrap();
            assert!(!found(&tree, &kst(2, 2)));
        }
    }

    #[test]
    fn kst_examples() {
        let g = Graph::build_extremal(&Graph::complete(1).unwrap(), 3, 7, 2).unwrap();
        assert!(has_kst_minor(&g, 2, 2).unwrap().is_none());
        let g = Graph::build_extremal(&Graph::complete(2).unwrap(), 2, 8, 3).unwrap();
        assert!(has_kst_minor(&g, 3, 3).unwrap().is_none());

        let base = Graph::build_extremal(&Graph::empty(1).unwrap(), 3, 7, 2).unwrap();
        // cliques occupy vertices 1..7 in pairs
        let block = |v: usize| (v - 1) / 2;
        for u in 1..7 {
            for v in u + 1..7 {
                if block(u) != block(v) {
                    let w = has_kst_minor(&base.with_edge(u, v), 2, 2).unwrap().unwrap();
                    assert!(check_witness(&base.with_edge(u, v), &kst(2, 2), &w));
                }
            }
        }
    }

    #[test]
    fn larger_negative_cases_finish() {
        let g = Graph::build_extremal(&Graph::complete(1).unwrap(), 4, 13, 3).unwrap();
        assert!(has_kst_minor(&g, 2, 3).unwrap().is_none());
        let g = Graph::build_extremal(&Graph::complete(2).unwrap(), 4, 14, 3).unwrap();
        assert!(has_kst_minor(&g, 3, 3).unwrap().is_none());
        assert!(has_kst_minor(&g, 3, 4).unwrap().is_none());
        assert!(has_kst_minor(&g.with_edge(2, 5), 3, 3).unwrap().is_some());
    }

    #[test]
    fn twin_classes_of_clique_join() {
        let g = Graph::build_extremal(&Graph::complete(2).unwrap(), 2, 8, 3).unwrap();
        let classes = twin_classes(&g, g.vertex_mask());
        assert_eq!(classes, vec![0b11, 0b11100, 0b11100000]);
        let star = Graph::construct(Family::Star(3)).unwrap();
        assert_eq!(twin_classes(&star, star.vertex_mask()), vec![0b1110]);
        assert_eq!(lowest_bits(0b1011000, 2), 0b0011000);
    }

    #[test]
    fn caps() {
        let big = Graph::empty(15).unwrap();
        assert!(matches!(has_minor(&big, &kst(2, 2)), Err(Error::CapExceeded { .. })));
        assert!(has_minor_with(&big, &kst(2, 2), MinorOptions { cap: 16 }).unwrap().is_none());
        let huge = Graph::empty(21).unwrap();
        assert!(has_minor_with(&huge, &kst(2, 2), MinorOptions { cap: 64 }).is_err());
    }

    #[test]
    fn witness_checker_rejects_bad_models() {
        let c4 = Graph::construct(Family::Cycle(4)).unwrap();
        let h = kst(2, 2);
        let good = MinorWitness { branch_sets: vec![vec![0], vec![2], vec![1], vec![3]] };
        assert!(check_witness(&c4, &h, &good));
        let overlapping = MinorWitness { branch_sets: vec![vec![0], vec![0], vec![1], vec![3]] };
        assert!(!check_witness(&c4, &h, &overlapping));
        let disconnected = MinorWitness { branch_sets: vec![vec![0, 2], vec![1], vec![3]] };
        assert!(!check_witness(&c4, &kst(1, 2), &disconnected));
        let missing_edge = MinorWitness { branch_sets: vec![vec![0], vec![1], vec![2], vec![3]] };
        assert!(!check_witness(&c4, &h, &missing_edge));
    }

    #[test]
    fn subgraph_implies_minor_and_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let targets = [kst(2, 2), kst(1, 3), kst(2, 3), Graph::complete(4).unwrap()];
        for _ in 0..60 {
            let n = rng.gen_range(4..=8);
            let g = Graph::from_fn(n, |_, _| rng.gen_bool(0.35)).unwrap();
            let sup = Graph::from_fn(n, |u, v| g.has_edge(u, v) || rng.gen_bool(0.2)).unwrap();
            for h in &targets {
                if found(&g, h) {
                    assert!(found(&sup, h));
                }
            }
            // a random subgraph of g on a vertex subset, relabelled into H
            let keep: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
            if keep.is_empty() {
                continue;
            }
            let h = Graph::from_fn(keep.len(), |a, b| g.has_edge(keep[a], keep[b]) && rng.gen_bool(0.8)).unwrap();
            assert!(found(&g, &h));
        }
    }

    #[test]
    fn filter_examples() {
        let g = Graph::build_extremal(&Graph::complete(1).unwrap(), 4, 13, 3).unwrap();
        let r = edge_filters(&g, 2, 3, default_mader_constant(3));
        assert_eq!(r.edges, 24);
        let crs = r.get("chudnovsky_reed_seymour").unwrap();
        assert_eq!((crs.verdict, crs.bound), (Verdict::Pass, Some(24.0)));
        assert_eq!(r.get("kostochka_prince").unwrap().verdict, Verdict::NotApplicable);

        let k5 = Graph::complete(5).unwrap();
        let r = edge_filters(&k5, 2, 2, default_mader_constant(2));
        assert_eq!(r.get("chudnovsky_reed_seymour").unwrap().verdict, Verdict::Fail);
        assert!(has_kst_minor(&k5, 2, 2).unwrap().is_some());

        let empty = Graph::empty(6).unwrap();
        let r = edge_filters(&empty, 2, 3, default_mader_constant(3));
        assert!(r.filters.iter().all(|f| f.verdict != Verdict::Fail));
        assert_eq!(r.get("thomason_bipartite").unwrap().verdict, Verdict::NotApplicable);
    }

    #[test]
    fn failing_filters_are_sound() {
        for n in 2..=8 {
            let census: Vec<Graph> = enumerate_graphs(n).unwrap().collect();
            for t in 2..=3 {
                for g in &census {
                    if edge_filters(g, 2, t, default_mader_constant(t)).certifies_minor() {
                        assert!(has_kst_minor(g, 2, t).unwrap().is_some(), "{g:?}");
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..40 {
            let g = Graph::from_fn(rng.gen_range(9..=10), |_, _| rng.gen_bool(0.5)).unwrap();
            if edge_filters(&g, 2, 3, default_mader_constant(3)).certifies_minor() {
                assert!(has_kst_minor(&g, 2, 3).unwrap().is_some());
            }
        }
    }

    #[test]
    fn kp_threshold_is_out_of_reach() {
        // (360)^13 for s = 2
        let lg = kp_threshold_log2(2).unwrap();
        assert!((lg - 13.0 * 360f64.log2()).abs() < 1e-9);
        assert!(kp_threshold_log2(1).is_none());
    }
}
