//! Thickets, vine decompositions and tree decompositions: validators, exact
//! small-instance parameters and named constructions.

mod decomp;
mod exact;
mod thicket;

pub use decomp::{
    clique_halves_vine, grid_column_vine, node_separator_check, path_power_vine, single_node_vine,
    trivial_vine, validate_tree, validate_vine, vine_to_tree, TreeDecomposition, VineDecomposition,
};
pub use exact::{minmax_exact, treewidth_exact, vinewidth_exact};
pub use thicket::{hitting_size, thicket_number_exact, validate_thicket, Thicket};
