use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::CoalitionGame;
use crate::graph::{parse_graph, Graph, VertexSet};
use crate::stability::{Allocation, PackingWitness};
use crate::width::{
    validate_thicket, validate_tree, validate_vine, Thicket, TreeDecomposition, VineDecomposition,
};

/// A graph given inline as an edge list, or as a path to an edge-list file
/// (relative paths resolve against the referring document's directory).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphRef {
    Inline(String),
    File(String),
}

impl GraphRef {
    pub fn inline(g: &Graph) -> GraphRef {
        GraphRef::Inline(g.to_edge_list())
    }

    pub fn load(&self, base: &Path) -> Result<Graph> {
        match self {
            GraphRef::Inline(text) => parse_graph(text),
            GraphRef::File(path) => {
                let full = base.join(path);
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| Error::invalid(format!("cannot read {}: {e}", full.display())))?;
                parse_graph(&text)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalitionEntry {
    pub members: Vec<usize>,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub graph: GraphRef,
    pub coalitions: Vec<CoalitionEntry>,
    #[serde(default)]
    pub tag: String,
}

impl GameDocument {
    pub fn from_game(game: &CoalitionGame) -> GameDocument {
        GameDocument {
            graph: GraphRef::inline(game.graph()),
            coalitions: game
                .coalitions()
                .map(|(s, value)| CoalitionEntry {
                    members: s.members().to_vec(),
                    value,
                })
                .collect(),
            tag: game.tag().to_string(),
        }
    }

    pub fn to_game(&self, base: &Path) -> Result<CoalitionGame> {
        let g = self.graph.load(base)?;
        for entry in &self.coalitions {
            let mut sorted = entry.members.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!(
                    "coalition {:?} repeats a member",
                    entry.members
                )));
            }
        }
        CoalitionGame::new(
            g,
            self.coalitions
                .iter()
                .map(|e| (VertexSet::new(e.members.iter().copied()), e.value)),
            self.tag.clone(),
        )
    }
}

pub fn parse_game_document(text: &str, base: &Path) -> Result<CoalitionGame> {
    let doc: GameDocument =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("game document: {e}")))?;
    doc.to_game(base)
}

/// A self-contained certificate; each kind re-validates on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Certificate {
    Thicket {
        graph: GraphRef,
        thicket: Thicket,
    },
    Vine {
        graph: GraphRef,
        decomposition: VineDecomposition,
    },
    Tree {
        graph: GraphRef,
        decomposition: TreeDecomposition,
    },
    Allocation {
        game: GameDocument,
        allocation: Allocation,
    },
    Packing {
        game: GameDocument,
        packing: PackingWitness,
    },
}

/// Every problem found in the certificate; empty means it verifies.
pub fn verify_certificate(cert: &Certificate, base: &Path) -> Result<Vec<String>> {
    Ok(match cert {
        Certificate::Thicket { graph, thicket } => validate_thicket(&graph.load(base)?, thicket),
        Certificate::Vine {
            graph,
            decomposition,
        } => validate_vine(&graph.load(base)?, decomposition),
        Certificate::Tree {
            graph,
            decomposition,
        } => validate_tree(&graph.load(base)?, decomposition),
        Certificate::Allocation { game, allocation } => allocation.check(&game.to_game(base)?),
        Certificate::Packing { game, packing } => packing.check(&game.to_game(base)?),
    })
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    serde_json::from_str(text).map_err(|e| Error::invalid(format!("certificate: {e}")))
}
