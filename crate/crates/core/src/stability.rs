//! Constructive allocations (vine-decomposition allocation with its greedy
//! packing witness, greedy square-root allocation) and the gap report.

use std::collections::VecDeque;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::config::Limits;
use crate::discrete::{integral_covering, integral_packing};
use crate::error::{Error, Result};
use crate::games::CoalitionGame;
use crate::graph::VertexSet;
use crate::lp::{covering_lp, packing_lp};
use crate::rational::{int, ratio_or_one, Rational};
use crate::width::{validate_vine, VineDecomposition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    #[serde(with = "crate::rational::text_vec")]
    pub values: Vec<Rational>,
    #[serde(with = "crate::rational::text")]
    pub cost: Rational,
}

impl Allocation {
    pub fn new(values: Vec<Rational>) -> Allocation {
        let cost = values.iter().sum();
        Allocation { values, cost }
    }

    /// Coalitions receiving less than their value.
    pub fn shortfalls(&self, game: &CoalitionGame) -> Vec<VertexSet> {
        game.coalitions()
            .filter(|(s, v)| {
                let got: Rational = s
                    .iter()
                    .map(|i| self.values.get(i).cloned().unwrap_or_default())
                    .sum();
                got < int(*v as i64)
            })
            .map(|(s, _)| s.clone())
            .collect()
    }

    pub fn check(&self, game: &CoalitionGame) -> Vec<String> {
        let mut problems = Vec::new();
        if self.values.len() != game.graph().n() {
            problems.push(format!(
                "allocation has {} entries for {} agents",
                self.values.len(),
                game.graph().n()
            ));
            return problems;
        }
        if self.values.iter().any(|x| *x < Rational::zero()) {
            problems.push("allocation has a negative entry".into());
        }
        if self.values.iter().sum::<Rational>() != self.cost {
            problems.push("allocation cost is not the sum of its entries".into());
        }
        for s in self.shortfalls(game) {
            problems.push(format!("coalition {s} is under-allocated"));
        }
        problems
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingWitness {
    pub coalitions: Vec<VertexSet>,
    pub value: u64,
}

impl PackingWitness {
    pub fn check(&self, game: &CoalitionGame) -> Vec<String> {
        let mut problems = Vec::new();
        let mut total = 0;
        for (i, s) in self.coalitions.iter().enumerate() {
            let v = game.value(s);
            if v == 0 {
                problems.push(format!("{s} is not a listed coalition"));
            }
            total += v;
            for t in &self.coalitions[i + 1..] {
                if s.intersects(t) {
                    problems.push(format!("{s} and {t} overlap"));
                }
            }
        }
        if total != self.value {
            problems.push(format!(
                "packing value {} but coalitions sum to {total}",
                self.value
            ));
        }
        problems
    }
}

/// One node of the bottom-up pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeStep {
    pub node: usize,
    pub label: VertexSet,
    pub coalition: Option<VertexSet>,
    pub residual: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VineAllocation {
    pub allocation: Allocation,
    pub witness: PackingWitness,
    /// Steps in processing (postorder) order.
    pub trace: Vec<NodeStep>,
    pub width: usize,
    pub residual_sum: u64,
}

/// Grows every label to `width` by repeated breadth-first passes from node 0,
/// each node taking the lowest vertices of its parent, then of its children.
pub fn pad_labels(d: &VineDecomposition, width: usize) -> Result<Vec<VertexSet>> {
    let (parent, order) = rooted(d);
    let children = children_of(&parent);
    let mut labels = d.labels.clone();
    loop {
        let mut changed = false;
        for &t in &order {
            if labels[t].len() >= width {
                continue;
            }
            let mut sources: Vec<usize> = parent[t].into_iter().collect();
            sources.extend(&children[t]);
            for s in sources {
                let extra: Vec<usize> = labels[s].difference(&labels[t]).iter().collect();
                let room = width - labels[t].len();
                if !extra.is_empty() && room > 0 {
                    labels[t] = labels[t].union(&VertexSet::new(extra.into_iter().take(room)));
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    if labels.iter().any(|l| l.len() < width) {
        return Err(Error::invalid(format!(
            "labels cannot be padded to width {width}"
        )));
    }
    Ok(labels)
}

/// Parent pointers and breadth-first order with node 0 as the root.
fn rooted(d: &VineDecomposition) -> (Vec<Option<usize>>, Vec<usize>) {
    let m = d.labels.len();
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in &d.links {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut parent = vec![None; m];
    let mut seen = vec![false; m];
    let mut order = Vec::with_capacity(m);
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(t) = queue.pop_front() {
        order.push(t);
        for &u in &adj[t] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some(t);
                queue.push_back(u);
            }
        }
    }
    (parent, order)
}

fn children_of(parent: &[Option<usize>]) -> Vec<Vec<usize>> {
    let mut children = vec![Vec::new(); parent.len()];
    for (t, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(t);
        }
    }
    children
}

fn postorder(children: &[Vec<usize>]) -> Vec<usize> {
    let mut out = Vec::with_capacity(children.len());
    let mut stack = vec![(0usize, false)];
    while let Some((t, expanded)) = stack.pop() {
        if expanded {
            out.push(t);
        } else {
            stack.push((t, true));
            for &c in children[t].iter().rev() {
                stack.push((c, false));
            }
        }
    }
    out
}

fn preorder(children: &[Vec<usize>]) -> Vec<usize> {
    let mut out = Vec::with_capacity(children.len());
    let mut stack = vec![0usize];
    while let Some(t) = stack.pop() {
        out.push(t);
        for &c in children[t].iter().rev() {
            stack.push(c);
        }
    }
    out
}

/// Allocation of cost `width · Σ_t r(Q*_t, t)` computed bottom-up over a vine
/// decomposition, together with the greedy packing that bounds the residual sum.
pub fn vine_allocation(game: &CoalitionGame, d: &VineDecomposition) -> Result<VineAllocation> {
    let g = game.graph();
    let problems = validate_vine(g, d);
    if !problems.is_empty() {
        return Err(Error::InvalidInput(format!(
            "invalid vine decomposition: {}",
            problems.join("; ")
        )));
    }
    let width = d.width();
    let labels = pad_labels(d, width)?;
    let padded = VineDecomposition {
        labels: labels.clone(),
        links: d.links.clone(),
    };
    let padded_problems = validate_vine(g, &padded);
    if !padded_problems.is_empty() {
        return Err(Error::Inconsistency(format!(
            "padding broke the decomposition: {}",
            padded_problems.join("; ")
        )));
    }
    let (parent, _) = rooted(d);
    let children = children_of(&parent);
    let m = labels.len();
    let mut depth = vec![0usize; m];
    for &t in &preorder(&children) {
        if let Some(p) = parent[t] {
            depth[t] = depth[p] + 1;
        }
    }

    // Node sets T(Q), checked connected; the root of Q is its shallowest node.
    let coalitions: Vec<(VertexSet, u64)> =
        game.coalitions().map(|(s, v)| (s.clone(), v)).collect();
    let mut node_sets: Vec<Vec<bool>> = Vec::with_capacity(coalitions.len());
    let mut rooted_at: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (qi, (q, _)) in coalitions.iter().enumerate() {
        let holds: Vec<bool> = labels.iter().map(|l| l.intersects(q)).collect();
        let nodes: Vec<usize> = (0..m).filter(|&t| holds[t]).collect();
        let top = *nodes
            .iter()
            .min_by_key(|&&t| (depth[t], t))
            .expect("coalitions are non-empty");
        let linked = nodes
            .iter()
            .filter(|&&t| t != top)
            .all(|&t| parent[t].is_some_and(|p| holds[p]));
        if !linked {
            return Err(Error::InvalidInput(format!(
                "nodes of coalition {q} are not connected"
            )));
        }
        rooted_at[top].push(qi);
        node_sets.push(holds);
    }

    let mut values = vec![0u64; g.n()];
    let mut chosen: Vec<Option<usize>> = vec![None; m];
    let mut residual = vec![0u64; m];
    let mut trace = Vec::with_capacity(m);
    for t in postorder(&children) {
        let mut best: Option<(u64, usize)> = None;
        for &qi in &rooted_at[t] {
            let (q, v) = &coalitions[qi];
            let got: u64 = q.iter().map(|i| values[i]).sum();
            let r = v.saturating_sub(got);
            if best.is_none_or(|(b, _)| r > b) {
                best = Some((r, qi));
            }
        }
        if let Some((r, qi)) = best {
            residual[t] = r;
            chosen[t] = Some(qi);
            for i in labels[t].iter() {
                values[i] += r;
            }
        }
        trace.push(NodeStep {
            node: t,
            label: labels[t].clone(),
            coalition: chosen[t].map(|qi| coalitions[qi].0.clone()),
            residual: residual[t],
        });
    }

    // Greedy packing, root towards the leaves.
    let mut deleted = vec![false; m];
    let mut packed = Vec::new();
    let mut packed_value = 0;
    for t in preorder(&children) {
        if deleted[t] {
            continue;
        }
        match chosen[t] {
            Some(qi) if residual[t] > 0 => {
                packed.push(coalitions[qi].0.clone());
                packed_value += coalitions[qi].1;
                for (u, &h) in node_sets[qi].iter().enumerate() {
                    if h {
                        deleted[u] = true;
                    }
                }
            }
            _ => deleted[t] = true,
        }
    }
    packed.sort();
    let witness = PackingWitness {
        coalitions: packed,
        value: packed_value,
    };
    let allocation = Allocation::new(values.iter().map(|&x| int(x as i64)).collect());
    let residual_sum: u64 = residual.iter().sum();

    let mut problems = allocation.check(game);
    problems.extend(witness.check(game));
    if allocation.cost != int((width as u64 * residual_sum) as i64) {
        problems.push("allocation cost differs from width times residual sum".into());
    }
    if residual_sum > witness.value {
        problems.push(format!(
            "residual sum {residual_sum} exceeds packing value {}",
            witness.value
        ));
    }
    if !problems.is_empty() {
        return Err(Error::Inconsistency(format!(
            "vine allocation: {}",
            problems.join("; ")
        )));
    }
    Ok(VineAllocation {
        allocation,
        witness,
        trace,
        width,
        residual_sum,
    })
}

/// Smallest `s` with `s² >= n`: coalitions of at least `s` agents are large.
fn large_threshold(n: usize) -> usize {
    let s = n.isqrt();
    if s * s == n {
        s
    } else {
        s + 1
    }
}

/// Greedy packing of small coalitions (`|S|² < n`), each member receiving
/// `v(S_j)`, plus `v*/s` to every agent with `s = ⌈√n⌉`.
pub fn sqrt_allocation(game: &CoalitionGame) -> Allocation {
    let n = game.graph().n();
    let mut values = vec![Rational::zero(); n];
    let mut small: Vec<(&VertexSet, u64)> = game
        .coalitions()
        .filter(|(s, _)| s.len() * s.len() < n)
        .collect();
    small.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let mut used: Vec<&VertexSet> = Vec::new();
    for (s, v) in small {
        if used.iter().all(|u| !u.intersects(s)) {
            for i in s.iter() {
                values[i] += int(v as i64);
            }
            used.push(s);
        }
    }
    if n > 0 {
        let uniform = Rational::new(
            (game.max_value() as i64).into(),
            (large_threshold(n) as i64).into(),
        );
        for x in &mut values {
            *x += &uniform;
        }
    }
    Allocation::new(values)
}

/// `cost² <= 4·n·ρ²`, the exact form of `cost <= 2√n·ρ`.
pub fn sqrt_bound_holds(cost: &Rational, n: usize, rho: u64) -> bool {
    let rho = int(rho as i64);
    cost * cost <= int(4 * n as i64) * &rho * &rho
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    #[serde(with = "crate::rational::text")]
    pub kappa: Rational,
    #[serde(with = "crate::rational::text")]
    pub kappa_f: Rational,
    #[serde(with = "crate::rational::text")]
    pub rho: Rational,
    #[serde(with = "crate::rational::text")]
    pub rho_f: Rational,
    #[serde(with = "crate::rational::text")]
    pub ratio_pc: Rational,
    #[serde(with = "crate::rational::text")]
    pub gap_primal: Rational,
    #[serde(with = "crate::rational::text")]
    pub gap_dual: Rational,
    #[serde(with = "crate::rational::text")]
    pub alpha_star: Rational,
    pub tau: Option<usize>,
    pub checks: Vec<BoundCheck>,
}

impl GapReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// `κ, κ^f, ρ, ρ^f` and their ratios. An empty game has all four equal to 0
/// and every ratio equal to 1. With `tau`, the three upper bounds by `τ` are
/// checked and reported.
pub fn gap_report(game: &CoalitionGame, tau: Option<usize>, limits: &Limits) -> Result<GapReport> {
    let kappa = int(integral_covering(game, limits)?.cost as i64);
    let rho = int(integral_packing(game, limits)?.value as i64);
    let kappa_f = covering_lp(game)?.objective;
    let rho_f = packing_lp(game)?.objective;
    if kappa_f != rho_f {
        return Err(Error::Inconsistency(format!(
            "covering optimum {kappa_f} differs from packing optimum {rho_f}"
        )));
    }
    if !(rho <= rho_f && rho_f <= kappa) {
        return Err(Error::Inconsistency(format!(
            "sandwich ρ={rho} <= ρ^f={rho_f} <= κ={kappa} fails"
        )));
    }
    let ratio_pc = ratio_or_one(&kappa, &rho);
    let gap_primal = ratio_or_one(&kappa, &kappa_f);
    let gap_dual = ratio_or_one(&rho_f, &rho);
    if ratio_pc != &gap_primal * &gap_dual {
        return Err(Error::Inconsistency(
            "κ/ρ is not the product of the two gaps".into(),
        ));
    }
    let mut checks = Vec::new();
    if let Some(tau) = tau {
        let t = int(tau as i64);
        checks.push(BoundCheck {
            name: "kappa/rho <= tau".into(),
            holds: ratio_pc <= t,
        });
        checks.push(BoundCheck {
            name: "kappa/kappa_f <= tau".into(),
            holds: gap_primal <= t,
        });
        checks.push(BoundCheck {
            name: "rho_f/rho <= tau".into(),
            holds: gap_dual <= t,
        });
    }
    debug_assert!(ratio_pc >= Rational::one());
    Ok(GapReport {
        alpha_star: gap_dual.clone(),
        kappa,
        kappa_f,
        rho,
        rho_f,
        ratio_pc,
        gap_primal,
        gap_dual,
        tau,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{clique_half_game, grid_rowcol_game, thicket_game};
    use crate::graph::{generate, random, Family, Graph};
    use crate::rational::ratio;
    use crate::width::{grid_column_vine, trivial_vine, Thicket};

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::new(v.iter().copied())
    }

    fn r3_full_thicket() -> Thicket {
        let rows: Vec<VertexSet> = (0..3)
            .map(|r| VertexSet::new((0..3).map(|c| r * 3 + c)))
            .collect();
        let cols: Vec<VertexSet> = (0..3)
            .map(|c| VertexSet::new((0..3).map(|r| r * 3 + c)))
            .collect();
        Thicket::new(
            rows.iter()
                .flat_map(|r| cols.iter().map(move |c| r.union(c)))
                .collect(),
        )
    }

    #[test]
    fn vine_allocation_examples() {
        let p3 = generate(Family::Path(3)).unwrap();
        let game =
            CoalitionGame::new(p3.clone(), [(set(&[0, 1]), 1), (set(&[1, 2]), 1)], "p").unwrap();
        let out = vine_allocation(&game, &trivial_vine(&p3).unwrap()).unwrap();
        assert_eq!(out.allocation.cost, int(1));
        assert_eq!(out.allocation.values[1], int(1));
        assert_eq!(out.witness.value, 1);

        let r3 = generate(Family::Grid(3)).unwrap();
        let game = thicket_game(&r3, &r3_full_thicket()).unwrap();
        let out = vine_allocation(&game, &grid_column_vine(3)).unwrap();
        assert!(out.allocation.cost <= int(3));
        assert!(out.allocation.check(&game).is_empty());
        assert_eq!(out.witness.value, 1);

        let empty = CoalitionGame::new(p3.clone(), [], "empty").unwrap();
        let out = vine_allocation(&empty, &trivial_vine(&p3).unwrap()).unwrap();
        assert_eq!(out.allocation.cost, int(0));
        assert!(out.witness.coalitions.is_empty());
    }

    #[test]
    fn padding_borrows_from_neighbours() {
        let d = VineDecomposition {
            labels: vec![set(&[0, 1, 2]), set(&[3]), set(&[4])],
            links: vec![(0, 1), (1, 2)],
        };
        let padded = pad_labels(&d, 3).unwrap();
        assert_eq!(padded[1], set(&[0, 1, 3]));
        assert_eq!(padded[2], set(&[0, 1, 4]));
    }

    #[test]
    fn invalid_decomposition_is_rejected() {
        let p3 = generate(Family::Path(3)).unwrap();
        let game = CoalitionGame::new(p3, [(set(&[0, 1, 2]), 1)], "p").unwrap();
        let bad = VineDecomposition {
            labels: vec![set(&[0]), set(&[2]), set(&[1])],
            links: vec![(0, 1), (1, 2)],
        };
        assert!(vine_allocation(&game, &bad).is_err());
    }

    #[test]
    fn sqrt_allocation_examples() {
        let h4 = clique_half_game(4).unwrap();
        let a = sqrt_allocation(&h4);
        assert!(a.values.iter().all(|x| *x == ratio(1, 2)));
        assert_eq!(a.cost, int(2));
        assert!(sqrt_bound_holds(&a.cost, 4, 1));

        let k9 = generate(Family::Clique(9)).unwrap();
        let grand = CoalitionGame::new(k9, [(VertexSet::new(0..9), 5)], "g").unwrap();
        let a = sqrt_allocation(&grand);
        assert!(a.values.iter().all(|x| *x == ratio(5, 3)));
        assert_eq!(a.cost, int(15));
        assert!(sqrt_bound_holds(&a.cost, 9, 5));

        let p4 = generate(Family::Path(4)).unwrap();
        let game = CoalitionGame::new(p4, [(set(&[0]), 2), (set(&[3]), 1)], "s").unwrap();
        let a = sqrt_allocation(&game);
        assert!(a.check(&game).is_empty());
        assert_eq!(a.values, vec![int(3), int(1), int(1), int(2)]);
        assert!(sqrt_bound_holds(&a.cost, 4, 3));
    }

    #[test]
    fn gap_reports() {
        let l = Limits::default();
        let r3 = generate(Family::Grid(3)).unwrap();
        let report =
            gap_report(&thicket_game(&r3, &r3_full_thicket()).unwrap(), Some(3), &l).unwrap();
        assert_eq!((report.kappa.clone(), report.rho.clone()), (int(3), int(1)));
        assert_eq!(report.ratio_pc, int(3));
        assert!(report.all_hold());

        let report = gap_report(&grid_rowcol_game(4).unwrap(), None, &l).unwrap();
        assert_eq!(report.rho, int(1));
        assert_eq!(report.rho_f, int(2));
        assert_eq!(report.gap_dual, int(2));
        assert_eq!(report.alpha_star, int(2));

        let report = gap_report(&clique_half_game(6).unwrap(), Some(3), &l).unwrap();
        assert_eq!(report.kappa, int(4));
        assert_eq!(report.kappa_f, int(2));
        assert_eq!(report.gap_primal, int(2));
        assert!(report.gap_primal <= ratio(3, 2) + int(1));

        let empty = CoalitionGame::new(Graph::new(2, [(0, 1)]).unwrap(), [], "e").unwrap();
        let report = gap_report(&empty, Some(1), &l).unwrap();
        assert_eq!(report.kappa, int(0));
        assert_eq!(report.ratio_pc, int(1));
        assert_eq!(report.alpha_star, int(1));
    }

    #[test]
    fn trees_are_balanced_and_allocations_hold() {
        let l = Limits::default();
        let mut rng = random::stream(8, 8);
        for trial in 0..20 {
            let n = 2 + trial % 7;
            let g = random::tree(n, &mut rng);
            let sets = crate::graph::enumerate_connected_sets(&g, 1, n).unwrap();
            let picked = random::sample_subset(&sets, 1 + trial % 6, &mut rng);
            let game = CoalitionGame::new(g.clone(), picked.into_iter().zip(1..), "tree").unwrap();
            let report = gap_report(&game, Some(1), &l).unwrap();
            assert_eq!(report.kappa, report.rho);
            assert_eq!(report.kappa, report.kappa_f);
            assert!(report.all_hold());
            let out = vine_allocation(&game, &trivial_vine(&g).unwrap()).unwrap();
            assert!(out.allocation.cost <= int(out.witness.value as i64));
            let sq = sqrt_allocation(&game);
            assert!(sq.check(&game).is_empty());
            assert!(sqrt_bound_holds(
                &sq.cost,
                n,
                integral_packing(&game, &l).unwrap().value
            ));
        }
    }
}
