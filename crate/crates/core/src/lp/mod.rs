//! Exact linear programming and the covering/packing programs of a game.

mod simplex;

pub use simplex::{
    solve_rational_lp, verify_optimal, Constraint, LinearProgram, LpSolution, LpStatus, Relation,
    Sense,
};

use crate::error::{Error, Result};
use crate::games::CoalitionGame;
use crate::rational::{int, Rational};

/// The covering program: `min sum x_i` s.t. `x(S) >= v(S)` for each listed `S`.
/// Variable `i` is agent `i`; constraint `j` is the `j`-th listed coalition.
pub fn covering_program(game: &CoalitionGame) -> LinearProgram {
    let n = game.graph().n();
    let mut lp = LinearProgram::new(Sense::Minimize, vec![int(1); n]);
    for (set, value) in game.coalitions() {
        lp.add(
            set.iter().map(|i| (i, int(1))).collect(),
            Relation::Ge,
            int(value as i64),
        );
    }
    lp
}

/// The packing program: `max sum v(S) y_S` s.t. `sum_{S ∋ i} y_S <= 1`.
/// Variable `j` is the `j`-th listed coalition; constraint `i` is agent `i`.
pub fn packing_program(game: &CoalitionGame) -> LinearProgram {
    let n = game.graph().n();
    let objective = game.coalitions().map(|(_, v)| int(v as i64)).collect();
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    for (j, (set, _)) in game.coalitions().enumerate() {
        for i in set.iter() {
            rows[i].push((j, int(1)));
        }
    }
    for row in rows {
        lp.add(row, Relation::Le, int(1));
    }
    lp
}

fn expect_optimal(sol: LpSolution, what: &str) -> Result<LpSolution> {
    match sol.status {
        LpStatus::Optimal => Ok(sol),
        s => Err(Error::Inconsistency(format!("{what} reported {s:?}"))),
    }
}

/// Fractional covering optimum (kappa^f) and an optimal allocation.
///
/// Solved through the packing program, which has one row per agent rather
/// than one per coalition; its duals are the allocation, re-verified against
/// the covering program.
pub fn covering_lp(game: &CoalitionGame) -> Result<LpSolution> {
    let pack = expect_optimal(solve_rational_lp(&packing_program(game))?, "packing LP")?;
    let cover = LpSolution {
        status: LpStatus::Optimal,
        objective: pack.objective,
        primal: pack.duals,
        duals: pack.primal,
    };
    verify_optimal(&covering_program(game), &cover)?;
    Ok(cover)
}

/// Fractional packing optimum (rho^f) and an optimal packing.
pub fn packing_lp(game: &CoalitionGame) -> Result<LpSolution> {
    expect_optimal(solve_rational_lp(&packing_program(game))?, "packing LP")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family, VertexSet};

    #[test]
    fn single_grand_coalition() {
        let g = generate(Family::Clique(4)).unwrap();
        let game = CoalitionGame::new(g, [(VertexSet::new(0..4), 5)], "grand").unwrap();
        assert_eq!(covering_lp(&game).unwrap().objective, int(5));
        let p = packing_lp(&game).unwrap();
        assert_eq!(p.objective, int(5));
        assert_eq!(p.primal, vec![int(1)]);
    }

    #[test]
    fn empty_game_has_zero_optima() {
        let g = generate(Family::Path(3)).unwrap();
        let game = CoalitionGame::new(g, [], "empty").unwrap();
        assert_eq!(covering_lp(&game).unwrap().objective, int(0));
        assert_eq!(packing_lp(&game).unwrap().objective, int(0));
    }

    #[test]
    fn two_pairs_on_k4() {
        // All pairs of K_4 at value 1: kappa^f = rho^f = 2.
        let g = generate(Family::Clique(4)).unwrap();
        let pairs = (0..4).flat_map(|u| (u + 1..4).map(move |v| (VertexSet::new([u, v]), 1)));
        let game = CoalitionGame::new(g, pairs, "pairs").unwrap();
        assert_eq!(covering_lp(&game).unwrap().objective, int(2));
        assert_eq!(packing_lp(&game).unwrap().objective, int(2));
        // weighted variant stays exact
        let g = generate(Family::Path(3)).unwrap();
        let game = CoalitionGame::new(
            g,
            [
                (VertexSet::new([0, 1]), 3),
                (VertexSet::new([1, 2]), 2),
                (VertexSet::new([0, 1, 2]), 4),
            ],
            "w",
        )
        .unwrap();
        let c = covering_lp(&game).unwrap().objective;
        assert_eq!(c, packing_lp(&game).unwrap().objective);
        assert_eq!(c, int(4));
    }
}
