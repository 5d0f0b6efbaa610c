//! Graph corpus, input documents and certificates, and the experiment tables.

mod corpus;
mod documents;
mod experiments;

pub use corpus::connected_graphs;
pub use documents::{
    parse_certificate, parse_game_document, verify_certificate, Certificate, CoalitionEntry,
    GameDocument, GraphRef,
};
pub use experiments::{
    allocation_instances, extend_to_maximal, minmax_graphs, random_clique_games, random_games,
    random_tree_games, run_experiment, small_path_power_games, sqrt_games, tables_to_csv,
    timed_experiment, ExperimentConfig, ExperimentTable, Field, ReportRow, RowStatus, DEFAULT_SEED,
    EXPERIMENTS,
};
