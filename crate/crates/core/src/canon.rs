//! Canonical forms for isomorphism rejection.
//!
//! Colour refinement to an equitable ordered partition, then an
//! individualize-and-refine search tree over the first smallest non-singleton
//! cell. Leaves are compared by their relabelled upper triangle and the
//! maximum wins. Automorphisms discovered at equal leaves prune sibling
//! branches that lie in a common orbit of the prefix stabiliser.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6;

/// Default order up to which [`canonical_code`] runs the exact search.
pub const EXACT_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonOptions {
    pub exact_cap: usize,
    /// Above the cap, fall back to a single refinement path. Equal heuristic
    /// codes still certify isomorphism; different codes do not refute it.
    pub allow_heuristic: bool,
}

impl Default for CanonOptions {
    fn default() -> Self {
        CanonOptions {
            exact_cap: EXACT_CAP,
            allow_heuristic: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    /// graph6 bytes of the canonically relabelled graph.
    pub bytes: Vec<u8>,
    pub exact: bool,
}

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.bytes).expect("graph6 is ASCII")
    }
}

#[derive(Debug, Clone)]
pub struct CanonicalForm {
    /// `labeling[i]` is the original vertex placed at canonical position `i`.
    pub labeling: Vec<usize>,
    pub graph: Graph,
}

pub fn canonical_code(g: &Graph) -> Result<CanonicalCode> {
    canonical_code_with(g, CanonOptions::default())
}

pub fn canonical_code_with(g: &Graph, opts: CanonOptions) -> Result<CanonicalCode> {
    if g.order() <= opts.exact_cap {
        let form = canonical_form(g);
        Ok(CanonicalCode {
            bytes: graph6::encode(&form.graph).into_bytes(),
            exact: true,
        })
    } else if opts.allow_heuristic {
        let labeling = first_leaf(g);
        Ok(CanonicalCode {
            bytes: graph6::encode(&g.relabel(&labeling)).into_bytes(),
            exact: false,
        })
    } else {
        Err(Error::CapExceeded {
            what: "order for exact canonical labelling",
            value: g.order(),
            cap: opts.exact_cap,
        })
    }
}

/// Exact canonical form. Runtime grows with the symmetry structure; it is
/// intended for orders up to about ten.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let mut search = Search::new(g);
    let root = refine(g, unit_partition(g.order()));
    search.descend(root, &mut Vec::new());
    let labeling = search.best.expect("search visits at least one leaf").1;
    CanonicalForm {
        graph: g.relabel(&labeling),
        labeling,
    }
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order()
        && a.edge_count() == b.edge_count()
        && a.degree_sequence() == b.degree_sequence()
        && canonical_form(a).graph == canonical_form(b).graph
}

type Partition = Vec<Vec<usize>>;

fn unit_partition(n: usize) -> Partition {
    vec![(0..n).collect()]
}

/// Splits cells by neighbour counts into every cell until stable. Cell order
/// depends only on the isomorphism type of (graph, partition).
fn refine(g: &Graph, mut cells: Partition) -> Partition {
    loop {
        let masks: Vec<u64> = cells
            .iter()
            .map(|cell| cell.iter().fold(0u64, |m, &v| m | 1 << v))
            .collect();
        let mut next: Partition = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let row = g.row(v);
                    (masks.iter().map(|m| (row & m).count_ones()).collect(), v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn individualize(cells: &Partition, cell: usize, v: usize) -> Partition {
    let mut out = Vec::with_capacity(cells.len() + 1);
    out.extend_from_slice(&cells[..cell]);
    out.push(vec![v]);
    out.push(cells[cell].iter().copied().filter(|&u| u != v).collect());
    out.extend_from_slice(&cells[cell + 1..]);
    out
}

fn target_cell(cells: &Partition) -> Option<usize> {
    cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .min_by_key(|(i, c)| (c.len(), *i))
        .map(|(i, _)| i)
}

/// Upper triangle of the relabelled adjacency matrix, row-major, packed.
fn leaf_code(g: &Graph, labeling: &[usize]) -> Vec<u64> {
    let n = labeling.len();
    let mut words = vec![0u64; (n * n).div_ceil(64).max(1)];
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if g.has_edge(labeling[i], labeling[j]) {
                words[k / 64] |= 1 << (63 - k % 64);
            }
            k += 1;
        }
    }
    words
}

struct Search<'a> {
    g: &'a Graph,
    first: Option<(Vec<u64>, Vec<usize>)>,
    best: Option<(Vec<u64>, Vec<usize>)>,
    /// Automorphisms as vertex maps.
    automorphisms: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph) -> Self {
        Search {
            g,
            first: None,
            best: None,
            automorphisms: Vec::new(),
        }
    }

    fn descend(&mut self, cells: Partition, prefix: &mut Vec<usize>) {
        let Some(target) = target_cell(&cells) else {
            let labeling: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            self.leaf(labeling);
            return;
        };
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            if !explored.is_empty() {
                let orbits = self.stabiliser_orbits(prefix);
                let rep = orbits.find(v);
                if explored.iter().any(|&u| orbits.find(u) == rep) {
                    continue;
                }
            }
            explored.push(v);
            let child = refine(self.g, individualize(&cells, target, v));
            prefix.push(v);
            self.descend(child, prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, labeling: Vec<usize>) {
        let code = leaf_code(self.g, &labeling);
        for (other_code, other_labeling) in self.first.iter().chain(self.best.iter()) {
            if *other_code == code {
                let mut map = vec![0; labeling.len()];
                for (i, &u) in other_labeling.iter().enumerate() {
                    map[u] = labeling[i];
                }
                if map.iter().enumerate().any(|(i, &m)| i != m) {
                    self.automorphisms.push(map);
                }
                break;
            }
        }
        if self.first.is_none() {
            self.first = Some((code.clone(), labeling.clone()));
        }
        match &self.best {
            Some((best, _)) if *best >= code => {}
            _ => self.best = Some((code, labeling)),
        }
    }

    fn stabiliser_orbits(&self, prefix: &[usize]) -> UnionFind {
        let mut uf = UnionFind::new(self.g.order());
        for aut in &self.automorphisms {
            if prefix.iter().all(|&p| aut[p] == p) {
                for (v, &w) in aut.iter().enumerate() {
                    uf.union(v, w);
                }
            }
        }
        uf
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// One individualize-refine path, always taking the first vertex of the target cell.
fn first_leaf(g: &Graph) -> Vec<usize> {
    let mut cells = refine(g, unit_partition(g.order()));
    while let Some(target) = target_cell(&cells) {
        let v = cells[target][0];
        cells = refine(g, individualize(&cells, target, v));
    }
    cells.iter().map(|c| c[0]).collect()
}
