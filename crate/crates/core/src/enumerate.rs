//! One representative per isomorphism class by canonical augmentation.
//!
//! A child `C` of order `k+1` is produced from a parent `P` of order `k` by
//! adding vertex `k` with some neighbour subset. `C` is accepted only when
//! the new vertex is the canonical deletion vertex of `C`, i.e. deleting the
//! maximum-degree vertex with the largest canonical label gives a graph
//! isomorphic to `P`. Children of one parent are deduplicated by canonical
//! code; nothing else is stored.

use std::collections::HashSet;

use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_CAP: usize = 8;
pub const HARD_CAP: usize = 9;

/// Depth-first census of unlabelled graphs on exactly `n` vertices.
/// Representatives are yielded in canonical labelling.
pub struct Census {
    target: usize,
    stack: Vec<Frame>,
}

struct Frame {
    parent: Graph,
    parent_code: Graph,
    next_subset: u64,
    seen: HashSet<Graph>,
}

pub fn enumerate_graphs(n: usize) -> Result<Census> {
    enumerate_graphs_with_cap(n, DEFAULT_CAP)
}

pub fn enumerate_graphs_with_cap(n: usize, cap: usize) -> Result<Census> {
    let cap = cap.min(HARD_CAP);
    if n == 0 {
        return Err(Error::InvalidParameter("graph order must be positive".into()));
    }
    if n > cap {
        return Err(Error::CapExceeded {
            what: "enumeration order",
            value: n,
            cap,
        });
    }
    let k1 = Graph::empty(1)?;
    let mut census = Census {
        target: n,
        stack: Vec::new(),
    };
    if n == 1 {
        census.stack.push(Frame::leaf(k1));
    } else {
        census.stack.push(Frame::new(k1));
    }
    Ok(census)
}

impl Frame {
    fn new(parent: Graph) -> Frame {
        Frame {
            parent,
            parent_code: canonical_form(&parent).graph,
            next_subset: 0,
            seen: HashSet::new(),
        }
    }

    /// A frame that yields its own graph once (n = 1).
    fn leaf(g: Graph) -> Frame {
        Frame {
            parent: g,
            parent_code: g,
            next_subset: u64::MAX,
            seen: HashSet::new(),
        }
    }
}

/// Is the last vertex of `child` its canonical deletion vertex, with the
/// deletion landing in the class `parent_code`?
fn accepts(child: &Graph, parent_code: &Graph) -> Option<Graph> {
    let last = child.order() - 1;
    let max_deg = child.max_degree();
    if child.degree(last) != max_deg {
        return None;
    }
    let form = canonical_form(child);
    let w = *form
        .labeling
        .iter()
        .rev()
        .find(|&&v| child.degree(v) == max_deg)
        .expect("some vertex attains the maximum degree");
    if w != last {
        let reduced = child.delete_vertex(w).ok()?;
        if canonical_form(&reduced).graph != *parent_code {
            return None;
        }
    }
    Some(form.graph)
}

impl Iterator for Census {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        loop {
            let frame = self.stack.last_mut()?;
            if frame.next_subset == u64::MAX {
                let g = frame.parent;
                self.stack.pop();
                return Some(g);
            }
            let k = frame.parent.order();
            if frame.next_subset >= 1u64 << k {
                self.stack.pop();
                continue;
            }
            let subset = frame.next_subset;
            frame.next_subset += 1;
            let child = frame.parent.add_vertex(subset).expect("order within cap");
            let Some(canon) = accepts(&child, &frame.parent_code) else {
                continue;
            };
            if !frame.seen.insert(canon) {
                continue;
            }
            if child.order() == self.target {
                return Some(canon);
            }
            self.stack.push(Frame::new(canon));
        }
    }
}

/// Known class counts for orders 1..=9.
pub const CLASS_COUNTS: [usize; 10] = [1, 1, 2, 4, 11, 34, 156, 1044, 12346, 274668];
