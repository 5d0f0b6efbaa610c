use serde::{Deserialize, Serialize};

use super::CoalitionGame;
use crate::config::{Limits, NodeCounter};
use crate::error::{Error, Result};
use crate::graph::{enumerate_connected_sets, generate, Family, VertexSet};
use crate::rational::{int, Rational};

/// The simple game on `P^r` in which every connected coalition with at least
/// `⌈n/k⌉` members has value one. Coalitions are never materialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImplicitPathPowerGame {
    pub n: usize,
    pub r: usize,
    pub k: usize,
}

impl ImplicitPathPowerGame {
    pub fn new(n: usize, r: usize, k: usize) -> Result<Self> {
        if r == 0 || k == 0 {
            return Err(Error::invalid("path-power game needs r >= 1 and k >= 1"));
        }
        if n < 3 * r {
            return Err(Error::invalid(format!(
                "path-power game needs n >= 3r, got n={n}, r={r}"
            )));
        }
        Ok(ImplicitPathPowerGame { n, r, k })
    }

    pub fn threshold(&self) -> usize {
        self.n.div_ceil(self.k)
    }

    /// Whether `removed` meets every valued coalition; otherwise the first
    /// `⌈n/k⌉` survivors of the leftmost oversized block, which form one.
    ///
    /// Survivors of `P^r - X` split into blocks at runs of at least `r`
    /// consecutive removed positions, and each block is connected.
    pub fn violated(&self, removed: &[bool]) -> Option<Vec<usize>> {
        let t = self.threshold();
        let mut run = self.r;
        let mut block: Vec<usize> = Vec::new();
        for (v, &gone) in removed.iter().enumerate() {
            if gone {
                run += 1;
                continue;
            }
            if run >= self.r {
                block.clear();
            }
            run = 0;
            block.push(v);
            if block.len() == t {
                return Some(block);
            }
        }
        None
    }

    /// The coalitions as an explicit game, for small `n`.
    pub fn explicit(&self, limit: usize) -> Result<CoalitionGame> {
        if self.n > limit {
            return Err(Error::TooLarge {
                what: "explicit path-power game",
                size: self.n,
                limit,
            });
        }
        let g = generate(Family::PathPower(self.n, self.r))?;
        let sets = enumerate_connected_sets(&g, self.threshold(), self.n)?;
        CoalitionGame::new(
            g,
            sets.into_iter().map(|s| (s, 1)),
            format!("path-power({},{},{})", self.n, self.r, self.k),
        )
    }

    fn check_size(&self, limits: &Limits) -> Result<()> {
        if self.n > limits.pathpower_vertices {
            return Err(Error::TooLarge {
                what: "path-power game",
                size: self.n,
                limit: limits.pathpower_vertices,
            });
        }
        Ok(())
    }

    /// Lower bound on any hitting set extending `removed`: every window of
    /// `⌈n/k⌉ + r - 1` consecutive positions needs `r` removed vertices,
    /// counted over disjoint windows.
    fn lower_bound(&self, removed: &[bool], chosen: usize) -> usize {
        let w = self.threshold() + self.r - 1;
        let mut best = chosen;
        for offset in 0..w.min(self.n) {
            let mut outside = 0;
            let mut need = 0;
            let mut start = offset;
            outside += removed[..offset].iter().filter(|&&b| b).count();
            while start + w <= self.n {
                let inside = removed[start..start + w].iter().filter(|&&b| b).count();
                need += inside.max(self.r);
                start += w;
            }
            outside += removed[start..].iter().filter(|&&b| b).count();
            best = best.max(outside + need);
        }
        best
    }

    fn greedy(&self) -> Vec<bool> {
        let mut removed = vec![false; self.n];
        while let Some(block) = self.violated(&removed) {
            removed[*block.last().expect("non-empty block")] = true;
        }
        removed
    }
}

struct CoverSearch<'a> {
    game: &'a ImplicitPathPowerGame,
    counter: NodeCounter,
    best: Vec<bool>,
    best_size: usize,
}

impl CoverSearch<'_> {
    fn search(
        &mut self,
        removed: &mut Vec<bool>,
        forbidden: &mut Vec<bool>,
        chosen: usize,
    ) -> Result<()> {
        self.counter.tick()?;
        let Some(block) = self.game.violated(removed) else {
            if chosen < self.best_size {
                self.best_size = chosen;
                self.best = removed.clone();
            }
            return Ok(());
        };
        if self.game.lower_bound(removed, chosen).max(chosen + 1) >= self.best_size {
            return Ok(());
        }
        let options: Vec<usize> = block.into_iter().filter(|&v| !forbidden[v]).collect();
        let mut undo = Vec::new();
        for v in options {
            removed[v] = true;
            self.search(removed, forbidden, chosen + 1)?;
            removed[v] = false;
            forbidden[v] = true;
            undo.push(v);
        }
        for v in undo {
            forbidden[v] = false;
        }
        Ok(())
    }
}

/// A minimum set of agents meeting every valued coalition, found by branch
/// and bound with the block-scan violation oracle.
pub fn pathpower_min_cover(game: &ImplicitPathPowerGame, limits: &Limits) -> Result<VertexSet> {
    game.check_size(limits)?;
    let best = game.greedy();
    let mut search = CoverSearch {
        game,
        counter: NodeCounter::new(limits, "path-power cover"),
        best_size: best.iter().filter(|&&b| b).count(),
        best,
    };
    let mut removed = vec![false; game.n];
    let mut forbidden = vec![false; game.n];
    search.search(&mut removed, &mut forbidden, 0)?;
    Ok(VertexSet::new((0..game.n).filter(|&v| search.best[v])))
}

/// `κ` of the path-power game.
pub fn pathpower_cover_number(game: &ImplicitPathPowerGame, limits: &Limits) -> Result<usize> {
    Ok(pathpower_min_cover(game, limits)?.len())
}

/// `k`, the cost of giving `k/n` to every agent: each valued coalition has at
/// least `⌈n/k⌉ >= n/k` members and so receives at least one.
pub fn pathpower_frac_upper(game: &ImplicitPathPowerGame) -> Result<Rational> {
    if game.threshold() * game.k < game.n {
        return Err(Error::Inconsistency("uniform allocation infeasible".into()));
    }
    Ok(int(game.k as i64))
}
