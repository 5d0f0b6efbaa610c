//! Exact integral optima by branch and bound: minimum hitting sets, maximum
//! weight packings of listed coalitions, and minimum integral covers.

use crate::config::{Limits, NodeCounter};
use crate::error::{Error, Result};
use crate::games::CoalitionGame;
use crate::graph::{bits, Mask, VertexSet};
use crate::lp::{solve_rational_lp, LinearProgram, LpStatus, Relation};
use crate::rational::{ceil_to_u64, int, is_integer, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingSet {
    pub members: VertexSet,
}

impl HittingSet {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralCover {
    pub allocation: Vec<u64>,
    pub cost: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralPacking {
    pub coalitions: Vec<VertexSet>,
    pub value: u64,
}

fn family_masks(family: &[VertexSet], n: usize) -> Result<Vec<Mask>> {
    if n > crate::graph::MASK_BITS {
        return Err(Error::TooLarge {
            what: "hitting set",
            size: n,
            limit: crate::graph::MASK_BITS,
        });
    }
    family
        .iter()
        .map(|s| {
            if s.is_empty() {
                Err(Error::invalid("hitting-set family contains an empty set"))
            } else if s.iter().any(|v| v >= n) {
                Err(Error::invalid(format!(
                    "set {s} has a vertex outside 0..{n}"
                )))
            } else {
                Ok(s.mask())
            }
        })
        .collect()
}

struct HittingSearch<'a> {
    sets: &'a [Mask],
    counter: NodeCounter,
    best: Mask,
    best_size: u32,
    /// When set, collect every hitting set of exactly this size instead.
    collect: Option<u32>,
    found: Vec<Mask>,
}

impl HittingSearch<'_> {
    /// Number of pairwise disjoint unhit sets: each needs its own vertex.
    fn lower_bound(&self, unhit: &[Mask]) -> u32 {
        let mut used = 0;
        let mut count = 0;
        for &s in unhit {
            if s & used == 0 {
                used |= s;
                count += 1;
            }
        }
        count
    }

    fn search(&mut self, chosen: Mask, forbidden: Mask) -> Result<()> {
        self.counter.tick()?;
        let mut unhit: Vec<Mask> = self
            .sets
            .iter()
            .copied()
            .filter(|&s| s & chosen == 0)
            .collect();
        let size = chosen.count_ones();
        if unhit.is_empty() {
            match self.collect {
                Some(target) if size == target => self.found.push(chosen),
                Some(_) => {}
                None if size < self.best_size => {
                    self.best = chosen;
                    self.best_size = size;
                }
                None => {}
            }
            return Ok(());
        }
        unhit.sort_by_key(|s| ((s & !forbidden).count_ones(), *s));
        let limit = match self.collect {
            Some(target) => target + 1,
            None => self.best_size,
        };
        if size + self.lower_bound(&unhit) >= limit {
            return Ok(());
        }
        let branch = unhit[0] & !forbidden;
        let mut forbidden = forbidden;
        for v in bits(branch) {
            self.search(chosen | 1 << v, forbidden)?;
            forbidden |= 1 << v;
        }
        Ok(())
    }
}

fn greedy_hitting(sets: &[Mask], n: usize) -> Mask {
    let mut chosen = 0;
    loop {
        let unhit: Vec<Mask> = sets.iter().copied().filter(|&s| s & chosen == 0).collect();
        if unhit.is_empty() {
            return chosen;
        }
        let v = (0..n)
            .max_by_key(|&v| {
                (
                    unhit.iter().filter(|&&s| s >> v & 1 == 1).count(),
                    usize::MAX - v,
                )
            })
            .expect("n > 0 when sets are non-empty");
        chosen |= 1 << v;
    }
}

/// A minimum-cardinality vertex set meeting every set of the family,
/// branching on the smallest unhit set.
pub fn min_hitting_set(family: &[VertexSet], n: usize, limits: &Limits) -> Result<HittingSet> {
    if family.is_empty() {
        return Err(Error::invalid("hitting-set family is empty"));
    }
    let sets = family_masks(family, n)?;
    let greedy = greedy_hitting(&sets, n);
    let mut search = HittingSearch {
        sets: &sets,
        counter: NodeCounter::new(limits, "minimum hitting set"),
        best: greedy,
        best_size: greedy.count_ones(),
        collect: None,
        found: Vec::new(),
    };
    search.search(0, 0)?;
    Ok(HittingSet {
        members: VertexSet::from_mask(search.best),
    })
}

/// Every minimum hitting set of the family, in canonical order.
pub fn all_min_hitting_sets(
    family: &[VertexSet],
    n: usize,
    limits: &Limits,
) -> Result<Vec<VertexSet>> {
    let size = min_hitting_set(family, n, limits)?.size() as u32;
    let sets = family_masks(family, n)?;
    let mut search = HittingSearch {
        sets: &sets,
        counter: NodeCounter::new(limits, "minimum hitting set enumeration"),
        best: 0,
        best_size: size,
        collect: Some(size),
        found: Vec::new(),
    };
    search.search(0, 0)?;
    let mut out: Vec<VertexSet> = search.found.into_iter().map(VertexSet::from_mask).collect();
    out.sort();
    Ok(out)
}

pub fn is_hitting_set(family: &[VertexSet], x: &VertexSet) -> bool {
    family.iter().all(|s| s.intersects(x))
}

struct PackingSearch {
    /// Candidates grouped by their lowest vertex.
    by_low: Vec<Vec<(Mask, u64)>>,
    /// Per-vertex upper bound on value density, as `numer / denom` with common `denom`.
    density: Vec<u128>,
    denom: u128,
    counter: NodeCounter,
    best: u64,
    best_sets: Vec<Mask>,
    chosen: Vec<Mask>,
}

impl PackingSearch {
    fn search(&mut self, v: usize, used: Mask, value: u64) -> Result<()> {
        self.counter.tick()?;
        if value > self.best {
            self.best = value;
            self.best_sets = self.chosen.clone();
        }
        let n = self.by_low.len();
        if v == n {
            return Ok(());
        }
        let potential: u128 = (v..n)
            .filter(|&u| used >> u & 1 == 0)
            .map(|u| self.density[u])
            .sum();
        // value + potential / denom <= best  <=>  prune
        if (value as u128) * self.denom + potential <= (self.best as u128) * self.denom {
            return Ok(());
        }
        if used >> v & 1 == 0 {
            let options = self.by_low[v].clone();
            for (s, val) in options {
                if s & used == 0 {
                    self.chosen.push(s);
                    self.search(v + 1, used | s, value + val)?;
                    self.chosen.pop();
                }
            }
        }
        self.search(v + 1, used, value)
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Maximum total value of pairwise disjoint listed coalitions.
///
/// Each packed coalition is charged to its lowest vertex; vertices are
/// decided in increasing order, with a density bound for pruning.
pub fn integral_packing(game: &CoalitionGame, limits: &Limits) -> Result<IntegralPacking> {
    let g = game.graph();
    g.require_masks("integral packing")?;
    let n = g.n();
    let mut by_low = vec![Vec::new(); n];
    let mut denom: u128 = 1;
    for (s, _) in game.coalitions() {
        let len = s.len() as u128;
        denom = denom / gcd(denom, len) * len;
        if denom > 1 << 80 {
            return Err(Error::TooLarge {
                what: "integral packing (coalition size lcm)",
                size: s.len(),
                limit: 64,
            });
        }
    }
    let mut density = vec![0u128; n];
    for (s, value) in game.coalitions() {
        by_low[s.members()[0]].push((s.mask(), value));
        let d = value as u128 * (denom / s.len() as u128);
        for v in s.iter() {
            density[v] = density[v].max(d);
        }
    }
    for options in &mut by_low {
        options.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    }
    let mut search = PackingSearch {
        by_low,
        density,
        denom,
        counter: NodeCounter::new(limits, "integral packing"),
        best: 0,
        best_sets: Vec::new(),
        chosen: Vec::new(),
    };
    search.search(0, 0, 0)?;
    let mut coalitions: Vec<VertexSet> = search
        .best_sets
        .iter()
        .map(|&m| VertexSet::from_mask(m))
        .collect();
    coalitions.sort();
    Ok(IntegralPacking {
        coalitions,
        value: search.best,
    })
}

fn cover_program(game: &CoalitionGame, lower: &[u64], upper: &[Option<u64>]) -> LinearProgram {
    let mut lp = crate::lp::covering_program(game);
    for (j, &lo) in lower.iter().enumerate() {
        if lo > 0 {
            lp.add(vec![(j, int(1))], Relation::Ge, int(lo as i64));
        }
    }
    for (j, hi) in upper.iter().enumerate() {
        if let Some(hi) = hi {
            lp.add(vec![(j, int(1))], Relation::Le, int(*hi as i64));
        }
    }
    lp
}

fn is_cover(game: &CoalitionGame, x: &[u64]) -> bool {
    game.coalitions()
        .all(|(s, v)| s.iter().map(|i| x[i]).sum::<u64>() >= v)
}

/// Minimum-cost integral allocation meeting every coalition value.
///
/// Simple games reduce to a minimum hitting set. Otherwise this is branch and
/// bound on per-agent integer allocations with the covering LP as the bound,
/// branching on the lowest-index fractional variable.
pub fn integral_covering(game: &CoalitionGame, limits: &Limits) -> Result<IntegralCover> {
    let n = game.graph().n();
    if game.is_empty() {
        return Ok(IntegralCover {
            allocation: vec![0; n],
            cost: 0,
        });
    }
    if game.is_simple() {
        let hit = min_hitting_set(&game.coalition_sets(), n, limits)?;
        let mut allocation = vec![0; n];
        for v in hit.members.iter() {
            allocation[v] = 1;
        }
        return Ok(IntegralCover {
            cost: hit.size() as u64,
            allocation,
        });
    }

    let mut counter = NodeCounter::new(limits, "integral covering");
    // Trivial feasible start: every agent receives the largest value.
    let mut best: Vec<u64> = vec![game.max_value(); n];
    let mut best_cost: u64 = best.iter().sum();
    let mut stack: Vec<(Vec<u64>, Vec<Option<u64>>)> = vec![(vec![0; n], vec![None; n])];
    while let Some((lower, upper)) = stack.pop() {
        counter.tick()?;
        let sol = solve_rational_lp(&cover_program(game, &lower, &upper))?;
        if sol.status != LpStatus::Optimal {
            continue;
        }
        if ceil_to_u64(&sol.objective) >= best_cost {
            continue;
        }
        let rounded: Vec<u64> = sol.primal.iter().map(ceil_to_u64).collect();
        let rounded_cost: u64 = rounded.iter().sum();
        if rounded_cost < best_cost {
            debug_assert!(is_cover(game, &rounded));
            best_cost = rounded_cost;
            best = rounded;
        }
        let Some(j) = sol.primal.iter().position(|x| !is_integer(x)) else {
            continue;
        };
        let x: &Rational = &sol.primal[j];
        let floor = x.floor().to_integer();
        let floor = u64::try_from(floor).unwrap_or(0);
        let mut down = upper.clone();
        down[j] = Some(floor);
        let mut up = lower.clone();
        up[j] = floor + 1;
        // Explored last-in-first-out: the rounding-up branch first.
        stack.push((lower, down));
        stack.push((up, upper));
    }
    if !is_cover(game, &best) {
        return Err(Error::Inconsistency("integral cover infeasible".into()));
    }
    Ok(IntegralCover {
        allocation: best,
        cost: best_cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, random, Family};

    fn sets(list: &[&[usize]]) -> Vec<VertexSet> {
        list.iter()
            .map(|s| VertexSet::new(s.iter().copied()))
            .collect()
    }

    fn brute_hitting(family: &[VertexSet], n: usize) -> usize {
        (0u64..1 << n)
            .filter(|&m| is_hitting_set(family, &VertexSet::from_mask(m)))
            .map(|m| m.count_ones() as usize)
            .min()
            .unwrap()
    }

    fn brute_packing(game: &CoalitionGame) -> u64 {
        let list: Vec<(Mask, u64)> = game.coalitions().map(|(s, v)| (s.mask(), v)).collect();
        let mut best = 0;
        for pick in 0u64..1 << list.len() {
            let mut used = 0;
            let mut value = 0;
            let mut ok = true;
            for (i, (m, v)) in list.iter().enumerate() {
                if pick >> i & 1 == 1 {
                    ok &= used & m == 0;
                    used |= m;
                    value += v;
                }
            }
            if ok {
                best = best.max(value);
            }
        }
        best
    }

    fn brute_cover(game: &CoalitionGame) -> u64 {
        let n = game.graph().n();
        let top = game.max_value();
        let mut best = u64::MAX;
        let mut x = vec![0u64; n];
        loop {
            if is_cover(game, &x) {
                best = best.min(x.iter().sum());
            }
            let mut i = 0;
            while i < n && x[i] == top {
                x[i] = 0;
                i += 1;
            }
            if i == n {
                return best;
            }
            x[i] += 1;
        }
    }

    #[test]
    fn hitting_set_examples() {
        let l = Limits::default();
        let grid = generate(Family::Grid(3)).unwrap();
        let mut thicket = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                thicket.push(VertexSet::new(
                    (0..3).map(|j| r * 3 + j).chain((0..3).map(|i| i * 3 + c)),
                ));
            }
        }
        assert_eq!(min_hitting_set(&thicket, grid.n(), &l).unwrap().size(), 3);
        let triples = sets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        assert_eq!(min_hitting_set(&triples, 4, &l).unwrap().size(), 2);
        assert_eq!(brute_hitting(&triples, 4), 2);
        assert_eq!(min_hitting_set(&sets(&[&[2, 3]]), 4, &l).unwrap().size(), 1);
        assert!(min_hitting_set(&[], 4, &l).is_err());
        assert!(min_hitting_set(&sets(&[&[]]), 4, &l).is_err());
    }

    #[test]
    fn all_minimum_hitting_sets() {
        let l = Limits::default();
        let family = sets(&[&[0, 1], &[1, 2], &[2, 3]]);
        let all = all_min_hitting_sets(&family, 4, &l).unwrap();
        assert_eq!(all, sets(&[&[0, 2], &[1, 2], &[1, 3]]));
    }

    #[test]
    fn packing_and_covering_examples() {
        let l = Limits::default();
        let path = generate(Family::Path(4)).unwrap();
        let game = CoalitionGame::new(
            path,
            [(VertexSet::new([0, 1]), 1), (VertexSet::new([2, 3]), 1)],
            "t",
        )
        .unwrap();
        assert_eq!(integral_packing(&game, &l).unwrap().value, 2);

        let k4 = generate(Family::Clique(4)).unwrap();
        let grand = CoalitionGame::new(k4.clone(), [(VertexSet::new(0..4), 5)], "g").unwrap();
        assert_eq!(integral_covering(&grand, &l).unwrap().cost, 5);
        assert_eq!(integral_packing(&grand, &l).unwrap().value, 5);

        let pairs = (0..4).flat_map(|u| (u + 1..4).map(move |v| (VertexSet::new([u, v]), 1)));
        let half = CoalitionGame::new(k4, pairs, "half").unwrap();
        assert_eq!(integral_covering(&half, &l).unwrap().cost, 3);
        assert_eq!(integral_packing(&half, &l).unwrap().value, 2);
    }

    #[test]
    fn budget_is_enforced() {
        let l = Limits::with_nodes(1);
        let triples = sets(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        assert!(matches!(
            min_hitting_set(&triples, 4, &l),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn agree_with_exhaustive_oracles() {
        let l = Limits::default();
        let mut rng = random::stream(99, 1);
        for trial in 0..80 {
            let n = 3 + trial % 6;
            let g = random::connected_gnp(n, 0.4, &mut rng);
            let connected = crate::graph::enumerate_connected_sets(&g, 1, n).unwrap();
            let picked = random::sample_subset(&connected, 1 + trial % 12, &mut rng);
            let simple = trial % 2 == 0;
            let coalitions: Vec<(VertexSet, u64)> = picked
                .into_iter()
                .enumerate()
                .map(|(i, s)| {
                    (
                        s,
                        if simple {
                            1
                        } else {
                            1 + (i as u64 * 7 + trial as u64) % 3
                        },
                    )
                })
                .collect();
            let family: Vec<VertexSet> = coalitions.iter().map(|(s, _)| s.clone()).collect();
            let game = CoalitionGame::new(g, coalitions, "random").unwrap();
            assert_eq!(
                min_hitting_set(&family, n, &l).unwrap().size(),
                brute_hitting(&family, n)
            );
            assert_eq!(
                integral_packing(&game, &l).unwrap().value,
                brute_packing(&game)
            );
            let cover = integral_covering(&game, &l).unwrap();
            assert!(is_cover(&game, &cover.allocation));
            assert_eq!(cover.cost, brute_cover(&game), "trial {trial}");
        }
    }
}
