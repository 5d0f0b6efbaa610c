use serde::{Deserialize, Serialize};

use super::{is_connected_induced, Graph, VertexSet};

/// A `k x k` grid minor model: one branch set per grid cell, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinorModel {
    pub k: usize,
    pub branch_sets: Vec<VertexSet>,
}

impl MinorModel {
    pub fn branch(&self, row: usize, col: usize) -> &VertexSet {
        &self.branch_sets[row * self.k + col]
    }

    /// The model in which every grid cell is its own branch set.
    pub fn identity(k: usize) -> MinorModel {
        MinorModel {
            k,
            branch_sets: (0..k * k).map(|v| VertexSet::new([v])).collect(),
        }
    }

    /// Every violated minor condition, one message each; empty means valid.
    pub fn violations(&self, g: &Graph) -> Vec<String> {
        let k = self.k;
        let mut out = Vec::new();
        if k == 0 {
            out.push("grid side must be positive".to_string());
            return out;
        }
        if self.branch_sets.len() != k * k {
            out.push(format!(
                "expected {} branch sets, found {}",
                k * k,
                self.branch_sets.len()
            ));
            return out;
        }
        let cell = |idx: usize| (idx / k, idx % k);
        for (idx, set) in self.branch_sets.iter().enumerate() {
            let (i, j) = cell(idx);
            if let Err(e) = g.check_set(set) {
                out.push(format!("branch set ({i},{j}): {e}"));
                continue;
            }
            match is_connected_induced(g, set) {
                Err(_) => out.push(format!("branch set ({i},{j}) is empty")),
                Ok(false) => out.push(format!("branch set ({i},{j}) is not connected")),
                Ok(true) => {}
            }
        }
        if !out.is_empty() {
            return out;
        }
        for a in 0..k * k {
            for b in a + 1..k * k {
                if self.branch_sets[a].intersects(&self.branch_sets[b]) {
                    let ((i, j), (p, q)) = (cell(a), cell(b));
                    out.push(format!("branch sets ({i},{j}) and ({p},{q}) overlap"));
                }
            }
        }
        for a in 0..k * k {
            let (i, j) = cell(a);
            let right = (j + 1 < k).then(|| a + 1);
            let down = (i + 1 < k).then(|| a + k);
            for b in right.into_iter().chain(down) {
                let touching = self.branch_sets[a]
                    .iter()
                    .any(|u| self.branch_sets[b].iter().any(|v| g.has_edge(u, v)));
                if !touching {
                    let (p, q) = cell(b);
                    out.push(format!(
                        "no host edge between branch sets ({i},{j}) and ({p},{q})"
                    ));
                }
            }
        }
        out
    }
}
