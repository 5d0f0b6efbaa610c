//! Graphical coalition games and the extremal constructions built on them.

mod constructions;
mod pathpower;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{is_connected_induced, Graph, VertexSet};

pub use constructions::{
    clique_grid_game, clique_half_game, grid_rowcol_game, minor_thicket_game, primal_gap_game,
    thicket_game, CLIQUE_HALF_LIMIT,
};
pub use pathpower::{
    pathpower_cover_number, pathpower_frac_upper, pathpower_min_cover, ImplicitPathPowerGame,
};

/// A game over an interaction graph, stored sparsely: unlisted coalitions
/// have value zero, listed ones are viable with value at least one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalitionGame {
    graph: Graph,
    coalitions: BTreeMap<VertexSet, u64>,
    tag: String,
}

impl CoalitionGame {
    /// Validates viability and positivity of every listed coalition; all
    /// offending coalitions are named in the error.
    pub fn new(
        graph: Graph,
        coalitions: impl IntoIterator<Item = (VertexSet, u64)>,
        tag: impl Into<String>,
    ) -> Result<CoalitionGame> {
        let mut map = BTreeMap::new();
        let mut problems = Vec::new();
        for (set, value) in coalitions {
            if value == 0 {
                problems.push(format!(
                    "coalition {set} has value 0 (list only positive values)"
                ));
            }
            match graph
                .check_set(&set)
                .and_then(|_| is_connected_induced(&graph, &set))
            {
                Ok(true) => {}
                Ok(false) => problems.push(format!("coalition {set} is not viable (disconnected)")),
                Err(e) => problems.push(format!("coalition {set}: {e}")),
            }
            if map.insert(set.clone(), value).is_some() {
                problems.push(format!("coalition {set} listed twice"));
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidInput(problems.join("; ")));
        }
        Ok(CoalitionGame {
            graph,
            coalitions: map,
            tag: tag.into(),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    /// Listed coalitions in canonical order; indices into LP vectors follow it.
    pub fn coalitions(&self) -> impl ExactSizeIterator<Item = (&VertexSet, u64)> + '_ {
        self.coalitions.iter().map(|(s, v)| (s, *v))
    }

    pub fn coalition_sets(&self) -> Vec<VertexSet> {
        self.coalitions.keys().cloned().collect()
    }

    pub fn value(&self, s: &VertexSet) -> u64 {
        self.coalitions.get(s).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.coalitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coalitions.is_empty()
    }

    pub fn max_value(&self) -> u64 {
        self.coalitions.values().copied().max().unwrap_or(0)
    }

    /// Every listed coalition has value one.
    pub fn is_simple(&self) -> bool {
        self.coalitions.values().all(|&v| v == 1)
    }
}
