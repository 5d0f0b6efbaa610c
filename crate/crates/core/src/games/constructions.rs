use std::collections::BTreeSet;

use super::CoalitionGame;
use crate::config::{Limits, NodeCounter};
use crate::discrete::{is_hitting_set, min_hitting_set, HittingSet};
use crate::error::{Error, Result};
use crate::graph::{generate, Family, Graph, Mask, MinorModel, VertexSet};
use crate::width::{validate_thicket, Thicket};

/// Largest clique accepted by [`clique_half_game`]; it lists `C(n, ⌈n/2⌉)` coalitions.
pub const CLIQUE_HALF_LIMIT: usize = 12;

fn require_thicket(g: &Graph, t: &Thicket) -> Result<()> {
    let problems = validate_thicket(g, t);
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "invalid thicket: {}",
            problems.join("; ")
        )))
    }
}

fn simple_game(
    g: Graph,
    sets: impl IntoIterator<Item = VertexSet>,
    tag: String,
) -> Result<CoalitionGame> {
    let unique: BTreeSet<VertexSet> = sets.into_iter().collect();
    CoalitionGame::new(g, unique.into_iter().map(|s| (s, 1)), tag)
}

/// Value one exactly on the members of the thicket.
pub fn thicket_game(g: &Graph, t: &Thicket) -> Result<CoalitionGame> {
    require_thicket(g, t)?;
    simple_game(g.clone(), t.sets.iter().cloned(), "thicket".into())
}

fn row_col_sets(s: usize) -> Vec<VertexSet> {
    (0..s)
        .map(|i| VertexSet::new((0..s).map(|j| i * s + j).chain((0..s).map(|j| j * s + i))))
        .collect()
}

/// On the `k x k` grid, `H_i` is row `i` together with column `i`.
pub fn grid_rowcol_game(k: usize) -> Result<CoalitionGame> {
    if k < 2 {
        return Err(Error::invalid("grid row-column game needs k >= 2"));
    }
    let g = generate(Family::Grid(k))?;
    simple_game(g, row_col_sets(k), format!("grid-rowcol({k})"))
}

/// `H_i` is the union of the branch sets in row `i` and column `i` of the model.
pub fn minor_thicket_game(g: &Graph, m: &MinorModel) -> Result<CoalitionGame> {
    let problems = m.violations(g);
    if !problems.is_empty() {
        return Err(Error::InvalidInput(format!(
            "invalid minor model: {}",
            problems.join("; ")
        )));
    }
    let k = m.k;
    let sets = (0..k).map(|i| {
        let mut h = VertexSet::new([]);
        for j in 0..k {
            h = h.union(m.branch(i, j)).union(m.branch(j, i));
        }
        h
    });
    simple_game(g.clone(), sets, format!("minor-thicket({k})"))
}

/// `K_n` with its vertices laid out as a `√n x √n` grid, row-major; `H_i` is
/// row `i` together with column `i`.
pub fn clique_grid_game(n: usize) -> Result<CoalitionGame> {
    let s = n.isqrt();
    if n < 4 || s * s != n {
        return Err(Error::invalid(format!(
            "clique grid game needs a perfect square n >= 4, got {n}"
        )));
    }
    let g = generate(Family::Clique(n))?;
    simple_game(g, row_col_sets(s), format!("clique-grid({n})"))
}

/// Every `⌈n/2⌉`-subset of `K_n` has value one.
pub fn clique_half_game(n: usize) -> Result<CoalitionGame> {
    if n < 2 {
        return Err(Error::invalid("clique half game needs n >= 2"));
    }
    if n > CLIQUE_HALF_LIMIT {
        return Err(Error::TooLarge {
            what: "clique half game",
            size: n,
            limit: CLIQUE_HALF_LIMIT,
        });
    }
    let g = generate(Family::Clique(n))?;
    let half = n.div_ceil(2) as u32;
    let sets = (0u64..1 << n)
        .filter(|m| m.count_ones() == half)
        .map(VertexSet::from_mask);
    simple_game(g, sets, format!("clique-half({n})"))
}

/// Value one on every union of thicket members that contains at least
/// `⌈|X|/2⌉` vertices of the minimum hitting set `X`.
pub fn primal_gap_game(
    g: &Graph,
    t: &Thicket,
    x: &HittingSet,
    limits: &Limits,
) -> Result<CoalitionGame> {
    require_thicket(g, t)?;
    let members: BTreeSet<&VertexSet> = t.sets.iter().collect();
    g.check_set(&x.members)?;
    if !is_hitting_set(&t.sets, &x.members) {
        return Err(Error::invalid(format!(
            "{} does not hit every thicket member",
            x.members
        )));
    }
    let minimum = min_hitting_set(&t.sets, g.n(), limits)?.size();
    if x.size() != minimum {
        return Err(Error::invalid(format!(
            "{} has size {} but the minimum hitting set has size {minimum}",
            x.members,
            x.size()
        )));
    }
    let threshold = x.size().div_ceil(2) as u32;
    let xmask = x.members.mask();
    let mut counter = NodeCounter::new(limits, "primal gap game");
    // Distinct non-empty unions of subfamilies, grown one member at a time;
    // the work is bounded by the number of distinct unions, not 2^members.
    let mut unions: BTreeSet<Mask> = BTreeSet::new();
    for h in members {
        let hm = h.mask();
        let mut grown: Vec<Mask> = vec![hm];
        for &u in &unions {
            counter.tick()?;
            grown.push(u | hm);
        }
        unions.extend(grown);
    }
    let sets = unions
        .into_iter()
        .filter(|u| (u & xmask).count_ones() >= threshold)
        .map(VertexSet::from_mask);
    simple_game(g.clone(), sets, "primal-gap".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::{integral_covering, integral_packing};
    use crate::lp::{covering_lp, packing_lp};
    use crate::rational::{int, ratio};
    use crate::width::thicket_number_exact;

    fn kappa(g: &CoalitionGame) -> u64 {
        integral_covering(g, &Limits::default()).unwrap().cost
    }

    fn rho(g: &CoalitionGame) -> u64 {
        integral_packing(g, &Limits::default()).unwrap().value
    }

    #[test]
    fn thicket_games() {
        let r3 = generate(Family::Grid(3)).unwrap();
        let rows: Vec<VertexSet> = (0..3)
            .map(|r| VertexSet::new((0..3).map(|c| r * 3 + c)))
            .collect();
        let cols: Vec<VertexSet> = (0..3)
            .map(|c| VertexSet::new((0..3).map(|r| r * 3 + c)))
            .collect();
        let full = Thicket::new(
            rows.iter()
                .flat_map(|r| cols.iter().map(move |c| r.union(c)))
                .collect(),
        );
        let game = thicket_game(&r3, &full).unwrap();
        assert_eq!(game.len(), 9);
        assert_eq!((kappa(&game), rho(&game)), (3, 1));

        let k3 = generate(Family::Clique(3)).unwrap();
        let whole = thicket_game(&k3, &Thicket::new(vec![VertexSet::new(0..3)])).unwrap();
        assert_eq!((kappa(&whole), rho(&whole)), (1, 1));

        let k4 = generate(Family::Clique(4)).unwrap();
        let pairs = Thicket::new(
            (0u64..16)
                .filter(|m| m.count_ones() == 2)
                .map(VertexSet::from_mask)
                .collect(),
        );
        // All 2-subsets of K4 include disjoint pairs, so this family is not a thicket.
        assert!(thicket_game(&k4, &pairs).is_err());
        let triples = Thicket::new(
            (0u64..16)
                .filter(|m| m.count_ones() == 3)
                .map(VertexSet::from_mask)
                .collect(),
        );
        let game = thicket_game(&k4, &triples).unwrap();
        assert_eq!((kappa(&game), rho(&game)), (2, 1));
    }

    #[test]
    fn grid_games() {
        let g3 = grid_rowcol_game(3).unwrap();
        assert_eq!(rho(&g3), 1);
        assert_eq!(packing_lp(&g3).unwrap().objective, ratio(3, 2));
        assert_eq!(covering_lp(&g3).unwrap().objective, ratio(3, 2));
        assert_eq!(
            packing_lp(&grid_rowcol_game(4).unwrap()).unwrap().objective,
            int(2)
        );
        assert_eq!(
            packing_lp(&grid_rowcol_game(2).unwrap()).unwrap().objective,
            int(1)
        );
        assert!(grid_rowcol_game(1).is_err());
    }

    #[test]
    fn minor_games() {
        let r3 = generate(Family::Grid(3)).unwrap();
        assert_eq!(
            minor_thicket_game(&r3, &MinorModel::identity(3))
                .unwrap()
                .coalition_sets(),
            grid_rowcol_game(3).unwrap().coalition_sets()
        );
        let k9 = generate(Family::Clique(9)).unwrap();
        let model = MinorModel {
            k: 2,
            branch_sets: vec![
                VertexSet::new([0, 1]),
                VertexSet::new([2, 3]),
                VertexSet::new([4, 5]),
                VertexSet::new([6, 7, 8]),
            ],
        };
        let game = minor_thicket_game(&k9, &model).unwrap();
        assert_eq!(rho(&game), 1);
        assert!(packing_lp(&game).unwrap().objective >= int(1));
        let overlapping = MinorModel {
            k: 2,
            branch_sets: vec![
                VertexSet::new([0, 1]),
                VertexSet::new([1, 2]),
                VertexSet::new([3]),
                VertexSet::new([4]),
            ],
        };
        assert!(minor_thicket_game(&k9, &overlapping).is_err());
    }

    #[test]
    fn clique_games() {
        let g9 = clique_grid_game(9).unwrap();
        assert_eq!(rho(&g9), 1);
        assert_eq!(packing_lp(&g9).unwrap().objective, ratio(3, 2));
        assert_eq!(rho(&clique_grid_game(4).unwrap()), 1);
        assert_eq!(
            packing_lp(&clique_grid_game(16).unwrap())
                .unwrap()
                .objective,
            int(2)
        );
        assert!(clique_grid_game(8).is_err());

        let h4 = clique_half_game(4).unwrap();
        assert_eq!(kappa(&h4), 3);
        assert_eq!(covering_lp(&h4).unwrap().objective, int(2));
        let h5 = clique_half_game(5).unwrap();
        assert_eq!(kappa(&h5), 3);
        assert_eq!(covering_lp(&h5).unwrap().objective, ratio(5, 3));
        let h2 = clique_half_game(2).unwrap();
        assert_eq!(kappa(&h2), 2);
        assert_eq!(covering_lp(&h2).unwrap().objective, int(2));
        assert!(clique_half_game(13).is_err());
    }

    #[test]
    fn primal_gap_games() {
        let l = Limits::default();
        for family in [Family::Grid(3), Family::Clique(4), Family::Path(4)] {
            let g = generate(family).unwrap();
            let (tau, t) = thicket_number_exact(&g, &l).unwrap();
            let x = min_hitting_set(&t.sets, g.n(), &l).unwrap();
            let game = primal_gap_game(&g, &t, &x, &l).unwrap();
            assert!(
                covering_lp(&game).unwrap().objective <= int(2),
                "{family:?}"
            );
            assert!(kappa(&game) as usize > tau / 2, "{family:?}");
        }
        let r3 = generate(Family::Grid(3)).unwrap();
        let (_, t) = thicket_number_exact(&r3, &l).unwrap();
        let better = min_hitting_set(&t.sets, 9, &l).unwrap();
        let mut bigger = better.members.clone();
        bigger = bigger.union(&VertexSet::new(
            (0..9).find(|v| !better.members.contains(*v)),
        ));
        assert!(primal_gap_game(&r3, &t, &HittingSet { members: bigger }, &l).is_err());
    }
}
