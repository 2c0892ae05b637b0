//! Small simple undirected graphs stored as bit-matrix rows.
//!
//! A [`Graph`] is an immutable value of order 1..=64. Row `u` is a `u64`
//! whose bit `v` is set iff `uv` is an edge. Values are `Copy`, so the
//! algebra below (join, disjoint union, edge toggles) always returns a new
//! graph.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: [u64; MAX_ORDER],
}

/// Named building blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `K_k`
    Complete(usize),
    /// `kP_1`, the edgeless graph on `k` vertices.
    Empty(usize),
    /// `K_{a,b}`
    CompleteBipartite(usize, usize),
    /// `K_{1,b}`
    Star(usize),
    /// `C_k`, `k >= 3`.
    Cycle(usize),
    /// `P_k` on `k` vertices.
    Path(usize),
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidParameter("graph order must be positive".into()));
    }
    if order > MAX_ORDER {
        return Err(Error::OrderOverflow {
            order,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Graph> {
        check_order(n)?;
        Ok(Graph {
            n,
            rows: [0; MAX_ORDER],
        })
    }

    pub fn complete(n: usize) -> Result<Graph> {
        Graph::from_fn(n, |u, v| u != v)
    }

    /// Builds a graph from a symmetric predicate; the predicate is only
    /// consulted for `u < v`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            for v in (u + 1)..n {
                if adjacent(u, v) {
                    g.set(u, v);
                }
            }
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for order {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            g.set(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows. Rows must be symmetric with an
    /// empty diagonal.
    pub fn from_rows(rows: &[u64]) -> Result<Graph> {
        let n = rows.len();
        let mut g = Graph::empty(n)?;
        let mask = low_mask(n);
        for (u, &row) in rows.iter().enumerate() {
            if row & !mask != 0 || row >> u & 1 == 1 {
                return Err(Error::InvalidParameter(format!("row {u} is not a valid adjacency row")));
            }
            g.rows[u] = row;
        }
        for u in 0..n {
            for v in g.neighbors(u) {
                if !g.has_edge(v, u) {
                    return Err(Error::InvalidParameter(format!(
                        "adjacency is not symmetric at ({u}, {v})"
                    )));
                }
            }
        }
        Ok(g)
    }

    pub fn construct(family: Family) -> Result<Graph> {
        let positive = |k: usize, what: &str| {
            if k == 0 {
                Err(Error::InvalidParameter(format!("{what} must be positive")))
            } else {
                Ok(())
            }
        };
        match family {
            Family::Complete(k) => {
                positive(k, "clique size")?;
                Graph::complete(k)
            }
            Family::Empty(k) => {
                positive(k, "vertex count")?;
                Graph::empty(k)
            }
            Family::CompleteBipartite(a, b) => {
                positive(a, "part size")?;
                positive(b, "part size")?;
                let n = a.checked_add(b).ok_or(Error::Overflow("order"))?;
                Graph::from_fn(n, |u, v| (u < a) != (v < a))
            }
            Family::Star(b) => {
                positive(b, "leaf count")?;
                Graph::construct(Family::CompleteBipartite(1, b))
            }
            Family::Cycle(k) => {
                if k < 3 {
                    return Err(Error::InvalidParameter(format!("cycle needs at least 3 vertices, got {k}")));
                }
                Graph::from_fn(k, |u, v| v == u + 1 || (u == 0 && v == k - 1))
            }
            Family::Path(k) => {
                positive(k, "path order")?;
                Graph::from_fn(k, |u, v| v == u + 1)
            }
        }
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    #[inline]
    fn clear(&mut self, u: usize, v: usize) {
        self.rows[u] &= !(1 << v);
        self.rows[v] &= !(1 << u);
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    /// Adjacency row of `u` as a bitmask.
    #[inline]
    pub fn row(&self, u: usize) -> u64 {
        self.rows[u]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows[..self.n]
    }

    /// Bitmask of all vertices.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        low_mask(self.n)
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.rows[u].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).min().unwrap_or(0)
    }

    /// `Some(k)` when every vertex has degree `k`.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.degree(0);
        (1..self.n).all(|u| self.degree(u) == k).then_some(k)
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> {
        Bits(self.rows[u])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| Bits(self.rows[u] >> u >> 1).map(move |d| (u, u + 1 + d)))
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Graph {
        assert!(u < self.n && v < self.n && u != v, "invalid edge ({u}, {v})");
        let mut g = *self;
        g.set(u, v);
        g
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        assert!(u < self.n && v < self.n && u != v, "invalid edge ({u}, {v})");
        let mut g = *self;
        g.clear(u, v);
        g
    }

    /// Graph with vertex `i` of the result equal to `perm[i]` of `self`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph {
            n: self.n,
            rows: [0; MAX_ORDER],
        };
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(perm[i], perm[j]) {
                    g.set(i, j);
                }
            }
        }
        g
    }

    /// Induced subgraph on the vertices of `mask`, relabelled in increasing order.
    pub fn induced(&self, mask: u64) -> Result<Graph> {
        let keep: Vec<usize> = Bits(mask & self.vertex_mask()).collect();
        let mut g = Graph::empty(keep.len())?;
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set(i, j);
                }
            }
        }
        Ok(g)
    }

    pub fn delete_vertex(&self, v: usize) -> Result<Graph> {
        self.induced(self.vertex_mask() & !(1 << v))
    }

    /// Adds a new vertex `n` adjacent to the vertices in `nbrs`.
    pub fn add_vertex(&self, nbrs: u64) -> Result<Graph> {
        check_order(self.n + 1)?;
        let mut g = *self;
        let v = self.n;
        g.n += 1;
        for u in Bits(nbrs & self.vertex_mask()) {
            g.set(u, v);
        }
        Ok(g)
    }

    pub fn complement(&self) -> Graph {
        let mask = self.vertex_mask();
        let mut g = *self;
        for u in 0..self.n {
            g.rows[u] = !self.rows[u] & mask & !(1 << u);
        }
        g
    }

    /// Join `G ∨ H`: disjoint union plus every edge between the two sides.
    pub fn join(&self, other: &Graph) -> Result<Graph> {
        let mut g = self.disjoint_union_with(other)?;
        let left = self.vertex_mask();
        let right = other.vertex_mask() << self.n;
        for u in 0..self.n {
            g.rows[u] |= right;
        }
        for v in self.n..g.n {
            g.rows[v] |= left;
        }
        Ok(g)
    }

    fn disjoint_union_with(&self, other: &Graph) -> Result<Graph> {
        let n = self.n + other.n;
        check_order(n)?;
        let mut g = *self;
        g.n = n;
        for v in 0..other.n {
            g.rows[self.n + v] = other.rows[v] << self.n;
        }
        Ok(g)
    }

    /// Disjoint union of `(graph, multiplicity)` parts in the given order.
    /// Parts with multiplicity zero are skipped; the result must be non-empty.
    pub fn disjoint_union(parts: &[(Graph, usize)]) -> Result<Graph> {
        let order: usize = parts.iter().map(|(g, k)| g.n * k).sum();
        check_order(order)?;
        let mut out: Option<Graph> = None;
        for (g, k) in parts {
            for _ in 0..*k {
                out = Some(match out {
                    None => *g,
                    Some(acc) => acc.disjoint_union_with(g)?,
                });
            }
        }
        out.ok_or_else(|| Error::InvalidParameter("disjoint union of nothing".into()))
    }

    /// `L ∨ (ell·K_t ∪ (n − |L| − t·ell)·P_1)`, labelled with `L` first, then
    /// the cliques, then the isolated vertices.
    pub fn build_extremal(head: &Graph, ell: usize, n: usize, t: usize) -> Result<Graph> {
        if t == 0 {
            return Err(Error::InvalidParameter("clique size t must be positive".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::OrderOverflow { order: n, max: MAX_ORDER });
        }
        let used = head.n + ell * t;
        if used > n {
            return Err(Error::InvalidParameter(format!(
                "negative isolated-vertex count: |L| + ell*t = {used} > n = {n}"
            )));
        }
        if used == n && ell == 0 {
            return Err(Error::InvalidParameter("construction has an empty right side".into()));
        }
        let clique = Graph::complete(t)?;
        let rest = Graph::disjoint_union(&[(clique, ell), (Graph::empty(1)?, n - used)])?;
        head.join(&rest)
    }

    pub fn is_connected(&self) -> bool {
        connected_within(self, self.vertex_mask())
    }

    /// Two-colouring `(side_a, side_b)` if the graph is bipartite.
    pub fn bipartition(&self) -> Option<(u64, u64)> {
        let mut color = vec![u8::MAX; self.n];
        for start in 0..self.n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for v in self.neighbors(u) {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        stack.push(v);
                    } else if color[v] == color[u] {
                        return None;
                    }
                }
            }
        }
        let mut a = 0u64;
        for (u, &c) in color.iter().enumerate() {
            if c == 0 {
                a |= 1 << u;
            }
        }
        Some((a, self.vertex_mask() & !a))
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        let mut d = self.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence(d)
    }

    /// `true` iff `self` is a spanning subgraph of `other` (same order).
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && (0..self.n).all(|u| self.rows[u] & !other.rows[u] == 0)
    }
}

/// Whether `mask` induces a connected subgraph (the empty set is not connected).
pub fn connected_within(g: &Graph, mask: u64) -> bool {
    if mask == 0 {
        return false;
    }
    let mut seen = mask & mask.wrapping_neg();
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0u64;
        for u in Bits(frontier) {
            next |= g.row(u);
        }
        next &= mask & !seen;
        seen |= next;
        frontier = next;
    }
    seen == mask
}

/// Union of neighbourhoods of the vertices in `mask`.
#[inline]
pub fn neighborhood(g: &Graph, mask: u64) -> u64 {
    Bits(mask).fold(0, |acc, u| acc | g.row(u))
}

/// Iterator over set bit positions of a `u64`.
#[derive(Clone, Copy)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }
}

impl serde::Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&crate::graph6::encode(self))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

/// Non-increasing degree sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct DegreeSequence(pub Vec<usize>);

impl DegreeSequence {
    /// Sorts the input into non-increasing order.
    pub fn new(mut degrees: Vec<usize>) -> DegreeSequence {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence(degrees)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn sum_of_squares(&self) -> usize {
        self.0.iter().map(|d| d * d).sum()
    }

    pub fn is_all_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    /// Erdős–Gallai test.
    pub fn is_graphical(&self) -> bool {
        let d = &self.0;
        let n = d.len();
        if d.iter().any(|&x| x + 1 > n) || self.sum() % 2 == 1 {
            return false;
        }
        let mut prefix = 0usize;
        for k in 1..=n {
            prefix += d[k - 1];
            let tail: usize = d[k..].iter().map(|&x| x.min(k)).sum();
            if prefix > k * (k - 1) + tail {
                return false;
            }
        }
        true
    }

    /// Havel–Hakimi realization, always connecting the current largest
    /// remaining degree to the next largest ones (ties by lower index).
    pub fn realize(&self) -> Result<Graph> {
        let n = self.len();
        if !self.is_graphical() {
            return Err(Error::InvalidParameter(format!("{:?} is not graphical", self.0)));
        }
        let mut g = Graph::empty(n.max(1))?;
        let mut remaining: Vec<(usize, usize)> = self.0.iter().copied().enumerate().map(|(v, d)| (d, v)).collect();
        loop {
            remaining.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let (d, v) = remaining[0];
            if d == 0 {
                break;
            }
            remaining[0].0 = 0;
            for slot in remaining.iter_mut().skip(1).take(d) {
                if slot.0 == 0 {
                    return Err(Error::InvalidParameter("Havel–Hakimi failed".into()));
                }
                slot.0 -= 1;
                g.set(v, slot.1);
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_constructions() {
        let k3 = Graph::construct(Family::Complete(3)).unwrap();
        assert_eq!((k3.order(), k3.edge_count()), (3, 3));
        let e4 = Graph::construct(Family::Empty(4)).unwrap();
        assert_eq!((e4.order(), e4.edge_count()), (4, 0));
        let k23 = Graph::construct(Family::CompleteBipartite(2, 3)).unwrap();
        assert_eq!((k23.order(), k23.edge_count()), (5, 6));
        let c5 = Graph::construct(Family::Cycle(5)).unwrap();
        assert_eq!(c5.regular_degree(), Some(2));
        let p4 = Graph::construct(Family::Path(4)).unwrap();
        assert_eq!(p4.edge_count(), 3);
        let star = Graph::construct(Family::Star(4)).unwrap();
        assert_eq!(star.degree(0), 4);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Graph::construct(Family::Complete(65)), Err(Error::OrderOverflow { .. })));
        assert!(matches!(Graph::construct(Family::Empty(0)), Err(Error::InvalidParameter(_))));
        assert!(Graph::construct(Family::Cycle(2)).is_err());
        assert!(Graph::construct(Family::CompleteBipartite(40, 30)).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
        assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
    }

    #[test]
    fn join_examples() {
        let k1 = Graph::complete(1).unwrap();
        assert_eq!(k1.join(&k1).unwrap(), Graph::complete(2).unwrap());

        let a = Graph::empty(2).unwrap();
        let b = Graph::empty(3).unwrap();
        let k23 = Graph::construct(Family::CompleteBipartite(2, 3)).unwrap();
        assert_eq!(a.join(&b).unwrap(), k23);

        let three_k2 = Graph::disjoint_union(&[(Graph::complete(2).unwrap(), 3)]).unwrap();
        let friendship = k1.join(&three_k2).unwrap();
        assert_eq!((friendship.order(), friendship.edge_count()), (7, 9));

        assert!(Graph::empty(40).unwrap().join(&Graph::empty(25).unwrap()).is_err());
    }

    #[test]
    fn disjoint_union_examples() {
        let k2 = Graph::complete(2).unwrap();
        let g = Graph::disjoint_union(&[(k2, 3)]).unwrap();
        assert_eq!((g.order(), g.edge_count()), (6, 3));
        let g = Graph::disjoint_union(&[(Graph::complete(3).unwrap(), 1), (Graph::empty(1).unwrap(), 2)]).unwrap();
        assert_eq!((g.order(), g.edge_count()), (5, 3));
        let g = Graph::disjoint_union(&[(Graph::complete(3).unwrap(), 2)]).unwrap();
        assert_eq!((g.order(), g.edge_count()), (6, 6));
        // block-diagonal layout
        assert!(g.has_edge(3, 5) && !g.has_edge(2, 3));
        assert!(Graph::disjoint_union(&[(Graph::complete(10).unwrap(), 7)]).is_err());
    }

    #[test]
    fn build_extremal_examples() {
        let k1 = Graph::complete(1).unwrap();
        let g = Graph::build_extremal(&k1, 2, 6, 2).unwrap();
        assert_eq!((g.order(), g.edge_count()), (6, 7));

        let head = Graph::empty(2).unwrap();
        let g = Graph::build_extremal(&head, 1, 8, 3).unwrap();
        assert_eq!((g.order(), g.edge_count()), (8, 15));
        // labelling: L = {0,1}, clique = {2,3,4}, isolated = {5,6,7}
        assert!(g.has_edge(2, 3) && g.has_edge(3, 4) && !g.has_edge(5, 6) && !g.has_edge(0, 1));
        assert!((2..8).all(|v| g.has_edge(0, v) && g.has_edge(1, v)));

        let g = Graph::build_extremal(&k1, 0, 5, 2).unwrap();
        assert_eq!(g, Graph::construct(Family::Star(4)).unwrap());

        assert!(Graph::build_extremal(&k1, 3, 6, 2).is_err());
        assert!(Graph::build_extremal(&k1, 0, 70, 2).is_err());
    }

    #[test]
    fn erdos_gallai_and_havel_hakimi() {
        assert!(DegreeSequence::new(vec![3, 3, 3, 3]).is_graphical());
        assert!(!DegreeSequence::new(vec![3, 3, 1, 1]).is_graphical());
        assert!(!DegreeSequence::new(vec![4, 1, 1, 1]).is_graphical());
        assert!(!DegreeSequence::new(vec![1, 0]).is_graphical());
        let seq = DegreeSequence::new(vec![3, 2, 2, 2, 1]);
        let g = seq.realize().unwrap();
        assert_eq!(g.degree_sequence(), seq);
    }

    #[test]
    fn bipartition_and_connectivity() {
        assert!(Graph::construct(Family::Cycle(6)).unwrap().bipartition().is_some());
        assert!(Graph::construct(Family::Cycle(5)).unwrap().bipartition().is_none());
        assert!(Graph::construct(Family::Path(5)).unwrap().is_connected());
        assert!(!Graph::empty(2).unwrap().is_connected());
    }
}
