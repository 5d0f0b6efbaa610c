use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// A labelled tree: condition (ii) for edges is "subtrees intersect or are adjacent".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VineDecomposition {
    pub labels: Vec<VertexSet>,
    pub links: Vec<(usize, usize)>,
}

/// A labelled tree whose edge subtrees must intersect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDecomposition {
    pub labels: Vec<VertexSet>,
    pub links: Vec<(usize, usize)>,
}

impl VineDecomposition {
    pub fn width(&self) -> usize {
        self.labels.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn degree(&self, t: usize) -> usize {
        self.links
            .iter()
            .filter(|&&(a, b)| a == t || b == t)
            .count()
    }

    /// Nodes of degree at least two.
    pub fn internal_nodes(&self) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&t| self.degree(t) >= 2)
            .collect()
    }
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.labels.iter().map(VertexSet::len).max().unwrap_or(1) - 1
    }
}

/// Adjacency lists of a labelled tree, or the reasons it is not a tree.
fn tree_shape(
    nodes: usize,
    links: &[(usize, usize)],
) -> std::result::Result<Vec<Vec<usize>>, Vec<String>> {
    let mut problems = Vec::new();
    if nodes == 0 {
        return Err(vec!["decomposition has no nodes".into()]);
    }
    let mut adj = vec![Vec::new(); nodes];
    let mut seen = BTreeSet::new();
    for &(a, b) in links {
        if a >= nodes || b >= nodes {
            problems.push(format!("link ({a},{b}) names a missing node"));
        } else if a == b {
            problems.push(format!("link ({a},{b}) is a loop"));
        } else if !seen.insert((a.min(b), a.max(b))) {
            problems.push(format!("link ({a},{b}) repeated"));
        } else {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    if problems.is_empty() {
        if links.len() != nodes - 1 {
            problems.push(format!(
                "{} links for {nodes} nodes is not a tree",
                links.len()
            ));
        } else if component(&adj, 0, &vec![true; nodes]).len() != nodes {
            problems.push("links do not form a connected tree".into());
        }
    }
    if problems.is_empty() {
        Ok(adj)
    } else {
        Err(problems)
    }
}

/// Nodes reachable from `start` through nodes with `allowed[t]`.
fn component(adj: &[Vec<usize>], start: usize, allowed: &[bool]) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut out = Vec::new();
    while let Some(t) = stack.pop() {
        out.push(t);
        for &u in &adj[t] {
            if allowed[u] && !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    out
}

fn check_labels(g: &Graph, labels: &[VertexSet], adj: &[Vec<usize>], vine: bool) -> Vec<String> {
    let mut problems = Vec::new();
    for (t, label) in labels.iter().enumerate() {
        if let Some(v) = label.iter().find(|&v| v >= g.n()) {
            problems.push(format!("node {t} label has vertex {v} outside the graph"));
        }
    }
    if !problems.is_empty() {
        return problems;
    }
    let holders: Vec<Vec<bool>> = (0..g.n())
        .map(|v| labels.iter().map(|l| l.contains(v)).collect())
        .collect();
    for (v, hold) in holders.iter().enumerate() {
        match hold.iter().position(|&h| h) {
            None => problems.push(format!("vertex {v} appears in no label")),
            Some(first) => {
                let count = hold.iter().filter(|&&h| h).count();
                if component(adj, first, hold).len() != count {
                    problems.push(format!("nodes holding vertex {v} are not connected"));
                }
            }
        }
    }
    for (u, v) in g.edges() {
        let share = (0..labels.len()).any(|t| holders[u][t] && holders[v][t]);
        let adjacent = vine
            && (0..labels.len()).any(|t| holders[u][t] && adj[t].iter().any(|&s| holders[v][s]));
        if !share && !adjacent {
            let need = if vine {
                "intersect or be adjacent"
            } else {
                "intersect"
            };
            problems.push(format!("edge ({u},{v}): node sets must {need}"));
        }
    }
    problems
}

/// Every violated vine-decomposition condition; empty means valid.
pub fn validate_vine(g: &Graph, d: &VineDecomposition) -> Vec<String> {
    match tree_shape(d.labels.len(), &d.links) {
        Err(problems) => problems,
        Ok(adj) => check_labels(g, &d.labels, &adj, true),
    }
}

/// Every violated tree-decomposition condition; empty means valid.
pub fn validate_tree(g: &Graph, d: &TreeDecomposition) -> Vec<String> {
    match tree_shape(d.labels.len(), &d.links) {
        Err(problems) => problems,
        Ok(adj) => check_labels(g, &d.labels, &adj, false),
    }
}

fn require_vine(g: &Graph, d: &VineDecomposition) -> Result<()> {
    let problems = validate_vine(g, d);
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "invalid vine decomposition: {}",
            problems.join("; ")
        )))
    }
}

/// Subdivides every link with a node labelled by the union of its ends.
pub fn vine_to_tree(g: &Graph, d: &VineDecomposition) -> Result<TreeDecomposition> {
    require_vine(g, d)?;
    let mut labels = d.labels.clone();
    let mut links = Vec::with_capacity(2 * d.links.len());
    for &(a, b) in &d.links {
        let mid = labels.len();
        labels.push(d.labels[a].union(&d.labels[b]));
        links.push((a, mid));
        links.push((mid, b));
    }
    Ok(TreeDecomposition { labels, links })
}

/// Whether removing `V_t` leaves no edge (and no shared vertex) between the
/// vertex sets of the different subtrees hanging off node `t`.
pub fn node_separator_check(g: &Graph, d: &VineDecomposition, t: usize) -> Result<bool> {
    let adj = tree_shape(d.labels.len(), &d.links).map_err(|p| {
        Error::InvalidInput(format!("decomposition is not a tree: {}", p.join("; ")))
    })?;
    if t >= adj.len() {
        return Err(Error::invalid(format!("node {t} does not exist")));
    }
    if adj[t].len() < 2 {
        return Err(Error::invalid(format!("node {t} is a leaf")));
    }
    let sep = &d.labels[t];
    let mut allowed = vec![true; adj.len()];
    allowed[t] = false;
    let branches: Vec<VertexSet> = adj[t]
        .iter()
        .map(|&s| {
            let nodes = component(&adj, s, &allowed);
            VertexSet::new(nodes.iter().flat_map(|&u| d.labels[u].iter())).difference(sep)
        })
        .collect();
    for i in 0..branches.len() {
        for j in i + 1..branches.len() {
            if branches[i].intersects(&branches[j]) {
                return Ok(false);
            }
            for u in branches[i].iter() {
                if branches[j]
                    .iter()
                    .any(|v| u < g.n() && v < g.n() && g.has_edge(u, v))
                {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn path_links(nodes: usize) -> Vec<(usize, usize)> {
    (1..nodes).map(|t| (t - 1, t)).collect()
}

/// One node per vertex, linked along the edges of a tree graph.
pub fn trivial_vine(g: &Graph) -> Result<VineDecomposition> {
    if g.n() == 0 || g.edge_count() != g.n() - 1 || !g.is_connected() {
        return Err(Error::invalid("trivial vine decomposition needs a tree"));
    }
    Ok(VineDecomposition {
        labels: (0..g.n()).map(|v| VertexSet::new([v])).collect(),
        links: g.edges().collect(),
    })
}

/// A single node holding every vertex.
pub fn single_node_vine(g: &Graph) -> VineDecomposition {
    VineDecomposition {
        labels: vec![VertexSet::new(0..g.n())],
        links: vec![],
    }
}

/// Columns of the row-major `k x k` grid, linked as a path.
pub fn grid_column_vine(k: usize) -> VineDecomposition {
    VineDecomposition {
        labels: (0..k)
            .map(|c| VertexSet::new((0..k).map(|r| r * k + c)))
            .collect(),
        links: path_links(k),
    }
}

/// Two nodes splitting the clique into a first half of size `⌈n/2⌉` and the rest.
pub fn clique_halves_vine(n: usize) -> VineDecomposition {
    let half = n.div_ceil(2);
    if n <= 1 {
        return VineDecomposition {
            labels: vec![VertexSet::new(0..n)],
            links: vec![],
        };
    }
    VineDecomposition {
        labels: vec![VertexSet::new(0..half), VertexSet::new(half..n)],
        links: vec![(0, 1)],
    }
}

/// Consecutive blocks of `r` path positions, linked as a path.
pub fn path_power_vine(n: usize, r: usize) -> VineDecomposition {
    let blocks = n.div_ceil(r);
    VineDecomposition {
        labels: (0..blocks)
            .map(|q| VertexSet::new(q * r..((q + 1) * r).min(n)))
            .collect(),
        links: path_links(blocks),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::new(v.iter().copied())
    }

    #[test]
    fn vine_examples() {
        let path = generate(Family::Path(5)).unwrap();
        let trivial = trivial_vine(&path).unwrap();
        assert!(validate_vine(&path, &trivial).is_empty());
        assert_eq!(trivial.width(), 1);

        let k4 = generate(Family::Clique(4)).unwrap();
        let halves = clique_halves_vine(4);
        assert!(validate_vine(&k4, &halves).is_empty());
        assert_eq!(halves.width(), 2);

        let r3 = generate(Family::Grid(3)).unwrap();
        let cols = grid_column_vine(3);
        assert!(validate_vine(&r3, &cols).is_empty());
        assert_eq!(cols.width(), 3);

        for (n, r) in [(6, 2), (9, 3), (7, 3), (5, 1)] {
            let g = generate(Family::PathPower(n, r)).unwrap();
            let d = path_power_vine(n, r);
            assert!(validate_vine(&g, &d).is_empty(), "{n} {r}");
            assert_eq!(d.width(), r);
        }
    }

    #[test]
    fn vine_violations() {
        let k3 = generate(Family::Clique(3)).unwrap();
        let star = VineDecomposition {
            labels: vec![set(&[0]), set(&[1]), set(&[2])],
            links: vec![(1, 0), (1, 2)],
        };
        let problems = validate_vine(&k3, &star);
        assert_eq!(
            problems,
            vec!["edge (0,2): node sets must intersect or be adjacent".to_string()]
        );
        assert!(!node_separator_check(&k3, &star, 1).unwrap());

        let p3 = generate(Family::Path(3)).unwrap();
        let broken = VineDecomposition {
            labels: vec![set(&[0, 1]), set(&[2]), set(&[0])],
            links: vec![(0, 1), (1, 2)],
        };
        assert!(validate_vine(&p3, &broken)[0].contains("vertex 0"));
        let cyclic = VineDecomposition {
            labels: vec![set(&[0]), set(&[1]), set(&[2])],
            links: vec![(0, 1), (1, 2), (2, 0)],
        };
        assert!(!validate_vine(&p3, &cyclic).is_empty());
        let missing = VineDecomposition {
            labels: vec![set(&[0, 1])],
            links: vec![],
        };
        assert!(validate_vine(&p3, &missing)[0].contains("vertex 2"));
    }

    #[test]
    fn conversion() {
        let k4 = generate(Family::Clique(4)).unwrap();
        let tree = vine_to_tree(&k4, &clique_halves_vine(4)).unwrap();
        assert!(validate_tree(&k4, &tree).is_empty());
        assert_eq!(tree.labels.len(), 3);
        assert_eq!(tree.labels[2], set(&[0, 1, 2, 3]));
        assert_eq!(tree.width(), 3);

        let path = generate(Family::Path(4)).unwrap();
        let tree = vine_to_tree(&path, &trivial_vine(&path).unwrap()).unwrap();
        assert!(validate_tree(&path, &tree).is_empty());
        assert_eq!(tree.width(), 1);

        let r3 = generate(Family::Grid(3)).unwrap();
        let single = vine_to_tree(&r3, &single_node_vine(&r3)).unwrap();
        assert_eq!(single.width(), 8);

        // The vine itself is not a tree decomposition of K4.
        let as_tree = TreeDecomposition {
            labels: clique_halves_vine(4).labels,
            links: vec![(0, 1)],
        };
        assert!(!validate_tree(&k4, &as_tree).is_empty());
    }

    #[test]
    fn separators_at_internal_nodes() {
        let r3 = generate(Family::Grid(3)).unwrap();
        let cols = grid_column_vine(3);
        assert_eq!(cols.internal_nodes(), vec![1]);
        assert!(node_separator_check(&r3, &cols, 1).unwrap());
        assert!(node_separator_check(&r3, &cols, 0).is_err());

        let path = generate(Family::Path(5)).unwrap();
        let trivial = trivial_vine(&path).unwrap();
        for t in trivial.internal_nodes() {
            assert!(node_separator_check(&path, &trivial, t).unwrap());
        }
    }
}
