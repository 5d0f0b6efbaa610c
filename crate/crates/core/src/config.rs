/// Resource limits shared by the exact searches. Exceeding any of them is
/// reported as an error, never answered approximately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Search-node budget for every branch-and-bound and backtracking search.
    pub nodes: u64,
    /// Largest graph accepted by the thicket-number and vinewidth searches.
    pub width_vertices: usize,
    /// Largest graph accepted by the treewidth dynamic program.
    pub treewidth_vertices: usize,
    /// Largest graph accepted by the VC-dimension search.
    pub vc_vertices: usize,
    /// Largest candidate set for which shattering is checked (2^size subsets).
    pub shatter_size: usize,
    /// Largest path handled by the implicit path-power routines.
    pub pathpower_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            nodes: 10_000_000,
            width_vertices: 10,
            treewidth_vertices: 16,
            vc_vertices: 12,
            shatter_size: 20,
            pathpower_vertices: 200,
        }
    }
}

impl Limits {
    pub fn with_nodes(nodes: u64) -> Self {
        Limits {
            nodes,
            ..Limits::default()
        }
    }
}

/// Counts search nodes against a budget.
#[derive(Debug)]
pub(crate) struct NodeCounter {
    used: u64,
    limit: u64,
    what: &'static str,
}

impl NodeCounter {
    pub(crate) fn new(limits: &Limits, what: &'static str) -> Self {
        NodeCounter {
            used: 0,
            limit: limits.nodes,
            what,
        }
    }

    pub(crate) fn tick(&mut self) -> crate::Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(crate::Error::BudgetExceeded {
                what: self.what,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}
