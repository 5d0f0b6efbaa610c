//! Simple undirected interaction graphs over dense vertex ids `0..n`.
//!
//! Exact searches elsewhere in the crate work on `u64` bitmasks, so the
//! mask-based helpers here require `n <= 64`. Plain graph construction,
//! parsing and the flow-based separator work for any `n`.

mod generate;
mod minor;
pub mod random;
mod separator;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{generate, Family};
pub use minor::MinorModel;
pub use separator::min_vertex_separator;

pub type Mask = u64;

pub const MASK_BITS: usize = 64;

/// Iterates the set bits of a mask in ascending order.
pub fn bits(mut mask: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// A canonical (sorted, duplicate-free) set of vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn from_mask(mask: Mask) -> Self {
        VertexSet(bits(mask).collect())
    }

    /// Bitmask form; every member must be below 64.
    pub fn mask(&self) -> Mask {
        self.0.iter().fold(0, |m, &v| {
            assert!(v < MASK_BITS, "vertex {v} does not fit in a mask");
            m | (1 << v)
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        VertexSet::new(v)
    }
}

impl From<VertexSet> for Vec<usize> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Simple undirected graph; immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    /// Neighbor masks, populated only when `n <= 64`.
    masks: Vec<Mask>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range ids.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u},{v}): vertex index out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::invalid(format!("duplicate edge ({u},{v})")));
            }
        }
        Ok(Self::from_edge_set(n, &seen))
    }

    fn from_edge_set(n: usize, edges: &BTreeSet<(usize, usize)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let masks = if n <= MASK_BITS {
            adj.iter()
                .map(|list| list.iter().fold(0, |m, &v| m | (1u64 << v)))
                .collect()
        } else {
            Vec::new()
        };
        Graph {
            n,
            adj,
            masks,
            edge_count: edges.len(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Fails with `TooLarge` when the graph does not fit the mask representation.
    pub fn require_masks(&self, what: &'static str) -> Result<()> {
        if self.n > MASK_BITS {
            Err(Error::TooLarge {
                what,
                size: self.n,
                limit: MASK_BITS,
            })
        } else {
            Ok(())
        }
    }

    pub fn neighbor_mask(&self, v: usize) -> Mask {
        self.masks[v]
    }

    pub fn all_mask(&self) -> Mask {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Open neighborhood of a vertex set.
    pub fn neighborhood_mask(&self, set: Mask) -> Mask {
        bits(set).fold(0, |m, v| m | self.masks[v]) & !set
    }

    /// Vertices reachable from `start` inside `allowed` (start must lie in allowed).
    pub fn reach_within(&self, start: Mask, allowed: Mask) -> Mask {
        let mut seen = start & allowed;
        let mut frontier = seen;
        while frontier != 0 {
            let next = bits(frontier).fold(0, |m, v| m | self.masks[v]) & allowed & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    /// Connected components of `G[allowed]`, ordered by lowest vertex.
    pub fn components_within(&self, allowed: Mask) -> Vec<Mask> {
        let mut rest = allowed;
        let mut out = Vec::new();
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            let comp = self.reach_within(low, rest);
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    pub fn is_connected_mask(&self, set: Mask) -> bool {
        if set == 0 {
            return false;
        }
        let low = set & set.wrapping_neg();
        self.reach_within(low, set) == set
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Checks that every member of `s` is a vertex of this graph.
    pub fn check_set(&self, s: &VertexSet) -> Result<()> {
        match s.iter().find(|&v| v >= self.n) {
            Some(v) => Err(Error::invalid(format!(
                "vertex {v} out of range for n = {}",
                self.n
            ))),
            None => Ok(()),
        }
    }

    /// Serializes to the edge-list format accepted by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edge_count);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// True iff `G[s]` is connected. The empty set is rejected.
pub fn is_connected_induced(g: &Graph, s: &VertexSet) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::invalid("empty vertex set has no connectivity"));
    }
    g.check_set(s)?;
    let mut seen = VertexSet::new([s.members()[0]]).0;
    let mut stack = vec![s.members()[0]];
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if s.contains(v) && !seen.contains(&v) {
                seen.push(v);
                stack.push(v);
            }
        }
    }
    Ok(seen.len() == s.len())
}

/// Parses the edge-list format: header `n m`, then `m` lines `u v`.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let parse_pair = |line: usize, l: &str, what: &str| -> Result<(usize, usize)> {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected two integers ({what}), found {l:?}"),
            });
        }
        let num = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("not a non-negative integer: {t:?}"),
            })
        };
        Ok((num(toks[0])?, num(toks[1])?))
    };

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header line \"n m\"".into(),
    })?;
    let (n, m) = parse_pair(hline, header, "header \"n m\"")?;

    let mut edges = BTreeSet::new();
    let mut last_line = hline;
    for (line, l) in lines {
        last_line = line;
        let (u, v) = parse_pair(line, l, "edge \"u v\"")?;
        if u >= n || v >= n {
            return Err(Error::Parse {
                line,
                message: format!("vertex index out of range: ({u},{v}) with n = {n}"),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("self-loop at vertex {u}"),
            });
        }
        if !edges.insert((u.min(v), u.max(v))) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate edge ({u},{v})"),
            });
        }
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header declares {m} edges but {} were listed", edges.len()),
        });
    }
    Ok(Graph::from_edge_set(n, &edges))
}

/// All connected induced vertex sets with `min_size..=max_size` members,
/// ordered by size and then lexicographically.
///
/// Every set is generated exactly once: it is grown from its lowest vertex,
/// always adding the smallest eligible frontier vertex that belongs to it and
/// excluding the frontier vertices skipped before it.
pub fn enumerate_connected_sets(
    g: &Graph,
    min_size: usize,
    max_size: usize,
) -> Result<Vec<VertexSet>> {
    if min_size == 0 || min_size > max_size || max_size > g.n() {
        return Err(Error::invalid(format!(
            "size bounds must satisfy 1 <= min <= max <= n, got {min_size}..={max_size} with n = {}",
            g.n()
        )));
    }
    g.require_masks("connected-set enumeration")?;
    let mut found: Vec<Mask> = Vec::new();
    for v in 0..g.n() {
        let above = g.all_mask() & !((1u64 << v) | ((1u64 << v) - 1));
        let start = 1u64 << v;
        grow(
            g,
            start,
            g.neighbor_mask(v) & above,
            0,
            above,
            min_size,
            max_size,
            &mut found,
        );
    }
    let mut out: Vec<VertexSet> = found.into_iter().map(VertexSet::from_mask).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn grow(
    g: &Graph,
    set: Mask,
    frontier: Mask,
    excluded: Mask,
    above: Mask,
    min_size: usize,
    max_size: usize,
    found: &mut Vec<Mask>,
) {
    let size = set.count_ones() as usize;
    if size >= min_size {
        found.push(set);
    }
    if size == max_size {
        return;
    }
    let mut excluded = excluded;
    for u in bits(frontier) {
        let next = set | (1 << u);
        let next_frontier = (frontier | g.neighbor_mask(u)) & above & !next & !excluded & !(1 << u);
        grow(
            g,
            next,
            next_frontier,
            excluded,
            above,
            min_size,
            max_size,
            found,
        );
        excluded |= 1 << u;
    }
}
