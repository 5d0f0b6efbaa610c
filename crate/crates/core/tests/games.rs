use std::path::Path;

use proptest::prelude::*;
use rand::Rng;
use thicket::discrete::{integral_covering, integral_packing, min_hitting_set};
use thicket::games::CoalitionGame;
use thicket::graph::{enumerate_connected_sets, random, Graph, VertexSet};
use thicket::lp::{covering_lp, packing_lp};
use thicket::rational::{int, ratio_or_one};
use thicket::report::{parse_game_document, GameDocument};
use thicket::stability::{gap_report, sqrt_allocation, sqrt_bound_holds, vine_allocation};
use thicket::width::{
    hitting_size, node_separator_check, thicket_number_exact, treewidth_exact, validate_thicket,
    validate_tree, validate_vine, vine_to_tree, vinewidth_exact, Thicket,
};
use thicket::Limits;

fn game_from_seed(seed: u64, max_n: usize) -> CoalitionGame {
    let mut rng = random::stream(seed, 0);
    let n = rng.gen_range(2..=max_n);
    let g = random::connected_gnp(n, 0.5, &mut rng);
    let sets = enumerate_connected_sets(&g, 1, n).unwrap();
    let m = rng.gen_range(1..=10);
    let picked = random::sample_subset(&sets, m, &mut rng);
    let coalitions: Vec<(VertexSet, u64)> = picked
        .into_iter()
        .map(|s| (s, rng.gen_range(1..=4)))
        .collect();
    CoalitionGame::new(g, coalitions, "prop").unwrap()
}

fn graph_from_seed(seed: u64, max_n: usize) -> Graph {
    let mut rng = random::stream(seed, 1);
    let n = rng.gen_range(1..=max_n);
    random::connected_gnp(n, 0.4, &mut rng)
}

/// Oracle for `κ`: smallest total over integer allocations with entries up to the largest value.
fn brute_kappa(game: &CoalitionGame) -> u64 {
    let n = game.graph().n();
    let top = game.max_value();
    let mut x = vec![0u64; n];
    let mut best = u64::MAX;
    fn rec(i: usize, x: &mut Vec<u64>, top: u64, game: &CoalitionGame, best: &mut u64) {
        let cost: u64 = x[..i].iter().sum();
        if cost >= *best {
            return;
        }
        if i == x.len() {
            if game
                .coalitions()
                .all(|(s, v)| s.iter().map(|a| x[a]).sum::<u64>() >= v)
            {
                *best = cost;
            }
            return;
        }
        for value in 0..=top {
            x[i] = value;
            rec(i + 1, x, top, game, best);
        }
        x[i] = 0;
    }
    rec(0, &mut x, top, game, &mut best);
    best
}

/// Oracle for `ρ`: every subfamily of the listed coalitions.
fn brute_rho(game: &CoalitionGame) -> u64 {
    let list: Vec<(u64, u64)> = game.coalitions().map(|(s, v)| (s.mask(), v)).collect();
    (0u32..1 << list.len())
        .filter_map(|pick| {
            let mut used = 0u64;
            let mut value = 0;
            for (i, &(m, v)) in list.iter().enumerate() {
                if pick >> i & 1 == 1 {
                    if used & m != 0 {
                        return None;
                    }
                    used |= m;
                    value += v;
                }
            }
            Some(value)
        })
        .max()
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_optima_and_duality(seed in any::<u64>()) {
        let game = game_from_seed(seed, 6);
        let l = Limits::default();
        let kappa = integral_covering(&game, &l).unwrap().cost;
        let rho = integral_packing(&game, &l).unwrap().value;
        prop_assert_eq!(kappa, brute_kappa(&game));
        prop_assert_eq!(rho, brute_rho(&game));
        let kf = covering_lp(&game).unwrap().objective;
        let rf = packing_lp(&game).unwrap().objective;
        prop_assert_eq!(&kf, &rf);
        prop_assert!(int(rho as i64) <= rf && kf <= int(kappa as i64));
        let report = gap_report(&game, None, &l).unwrap();
        prop_assert_eq!(&report.ratio_pc, &(&report.gap_primal * &report.gap_dual));
        prop_assert_eq!(&report.alpha_star, &ratio_or_one(&rf, &int(rho as i64)));
    }

    #[test]
    fn sandwich_by_thicket_number(seed in any::<u64>()) {
        let game = game_from_seed(seed, 7);
        let l = Limits::default();
        let (tau, _) = thicket_number_exact(game.graph(), &l).unwrap();
        let kappa = integral_covering(&game, &l).unwrap().cost;
        let rho = integral_packing(&game, &l).unwrap().value;
        prop_assert!(kappa <= tau as u64 * rho);
    }

    #[test]
    fn allocations_are_stable(seed in any::<u64>()) {
        let game = game_from_seed(seed, 7);
        let l = Limits::default();
        let (nu, vine) = vinewidth_exact(game.graph(), &l).unwrap();
        let out = vine_allocation(&game, &vine).unwrap();
        prop_assert!(out.allocation.check(&game).is_empty());
        prop_assert!(out.witness.check(&game).is_empty());
        let rho = integral_packing(&game, &l).unwrap().value;
        prop_assert!(out.witness.value <= rho);
        prop_assert!(out.allocation.cost <= int((nu as u64 * out.witness.value) as i64));
        let sq = sqrt_allocation(&game);
        prop_assert!(sq.check(&game).is_empty());
        prop_assert!(sqrt_bound_holds(&sq.cost, game.graph().n(), rho));
    }

    #[test]
    fn width_parameters_agree(seed in any::<u64>()) {
        let g = graph_from_seed(seed, 7);
        let l = Limits::default();
        let (tau, t) = thicket_number_exact(&g, &l).unwrap();
        let (nu, vine) = vinewidth_exact(&g, &l).unwrap();
        prop_assert_eq!(tau, nu);
        prop_assert!(validate_thicket(&g, &t).is_empty());
        prop_assert_eq!(hitting_size(&g, &t, &l).unwrap(), tau);
        prop_assert!(tau <= t.min_member_size());
        prop_assert!(validate_vine(&g, &vine).is_empty());
        prop_assert_eq!(vine.width(), nu);
        let omega = treewidth_exact(&g, &l).unwrap();
        prop_assert!(nu <= omega + 1 && omega < 2 * nu);
        let tree = vine_to_tree(&g, &vine).unwrap();
        prop_assert!(validate_tree(&g, &tree).is_empty());
        prop_assert!(tree.width() < 2 * nu);
        for node in vine.internal_nodes() {
            prop_assert!(node_separator_check(&g, &vine, node).unwrap());
        }
    }

    #[test]
    fn hitting_sets_are_separated(seed in any::<u64>()) {
        let g = graph_from_seed(seed, 7);
        let l = Limits::default();
        let (_, t) = thicket_number_exact(&g, &l).unwrap();
        let x = min_hitting_set(&t.sets, g.n(), &l).unwrap();
        let h = x.size();
        // Any member is itself a hitting set.
        for member in &t.sets {
            prop_assert!(thicket::graph::min_vertex_separator(&g, &x.members, member).unwrap() >= h);
        }
    }

    #[test]
    fn game_documents_round_trip(seed in any::<u64>()) {
        let game = game_from_seed(seed, 8);
        let text = serde_json::to_string(&GameDocument::from_game(&game)).unwrap();
        prop_assert_eq!(parse_game_document(&text, Path::new(".")).unwrap(), game);
    }
}

#[test]
fn members_of_a_thicket_bound_its_hitting_size() {
    let g = thicket::graph::generate(thicket::graph::Family::Grid(3)).unwrap();
    let rows: Vec<VertexSet> = (0..3)
        .map(|r| VertexSet::new((0..3).map(|c| 3 * r + c)))
        .collect();
    let cols: Vec<VertexSet> = (0..3)
        .map(|c| VertexSet::new((0..3).map(|r| 3 * r + c)))
        .collect();
    let crosses = Thicket::new(
        rows.iter()
            .flat_map(|r| cols.iter().map(move |c| r.union(c)))
            .collect(),
    );
    let l = Limits::default();
    assert_eq!(hitting_size(&g, &crosses, &l).unwrap(), 3);
    assert!(crosses.min_member_size() >= 3);
}
