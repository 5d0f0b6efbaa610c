use std::collections::VecDeque;

use super::{Graph, VertexSet};
use crate::error::{Error, Result};

const UNBOUNDED: u32 = u32::MAX;

struct FlowNetwork {
    head: Vec<usize>,
    cap: Vec<u32>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn arc(&mut self, from: usize, to: usize, cap: u32) {
        self.adj[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(cap);
        self.adj[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
    }

    /// Edmonds-Karp; every augmenting path here has unit bottleneck.
    fn max_flow(&mut self, source: usize, sink: usize) -> usize {
        let mut flow = 0;
        loop {
            let mut via = vec![usize::MAX; self.adj.len()];
            let mut queue = VecDeque::from([source]);
            let mut reached = false;
            while let Some(u) = queue.pop_front() {
                if u == sink {
                    reached = true;
                    break;
                }
                for &e in &self.adj[u] {
                    let v = self.head[e];
                    if self.cap[e] > 0 && via[v] == usize::MAX && v != source {
                        via[v] = e;
                        queue.push_back(v);
                    }
                }
            }
            if !reached {
                return flow;
            }
            let mut bottleneck = UNBOUNDED;
            let mut v = sink;
            while v != source {
                let e = via[v];
                bottleneck = bottleneck.min(self.cap[e]);
                v = self.head[e ^ 1];
            }
            let mut v = sink;
            while v != source {
                let e = via[v];
                if self.cap[e] != UNBOUNDED {
                    self.cap[e] -= bottleneck;
                }
                if self.cap[e ^ 1] != UNBOUNDED {
                    self.cap[e ^ 1] += bottleneck;
                }
                v = self.head[e ^ 1];
            }
            flow += bottleneck as usize;
        }
    }
}

/// Minimum `a`-`b` separator size under the vertex-split convention.
///
/// Every vertex in `a ∩ b` counts once as its own separator and is removed.
/// On the remainder, non-terminal vertices have capacity one, terminals are
/// uncut and each edge carries one unit, so adjacent terminals contribute one
/// path per edge. The value equals the maximum number of such disjoint paths.
pub fn min_vertex_separator(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<usize> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("separator terminals must be non-empty"));
    }
    g.check_set(a)?;
    g.check_set(b)?;
    let overlap = a.intersection(b);
    let left = a.difference(&overlap);
    let right = b.difference(&overlap);
    if left.is_empty() || right.is_empty() {
        return Ok(overlap.len());
    }

    let n = g.n();
    let (source, sink) = (2 * n, 2 * n + 1);
    let mut net = FlowNetwork::new(2 * n + 2);
    for v in 0..n {
        if overlap.contains(v) {
            continue;
        }
        let terminal = left.contains(v) || right.contains(v);
        net.arc(2 * v, 2 * v + 1, if terminal { UNBOUNDED } else { 1 });
        for &w in g.neighbors(v) {
            if !overlap.contains(w) {
                net.arc(2 * v + 1, 2 * w, 1);
            }
        }
    }
    for v in left.iter() {
        net.arc(source, 2 * v, UNBOUNDED);
    }
    for v in right.iter() {
        net.arc(2 * v + 1, sink, UNBOUNDED);
    }
    Ok(overlap.len() + net.max_flow(source, sink))
}
