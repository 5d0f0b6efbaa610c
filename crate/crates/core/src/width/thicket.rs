use serde::{Deserialize, Serialize};

use crate::config::{Limits, NodeCounter};
use crate::discrete::min_hitting_set;
use crate::error::{Error, Result};
use crate::graph::{Graph, Mask, VertexSet};

/// A family of connected vertex sets that pairwise share a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thicket {
    pub sets: Vec<VertexSet>,
}

impl Thicket {
    pub fn new(sets: Vec<VertexSet>) -> Thicket {
        Thicket { sets }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn min_member_size(&self) -> usize {
        self.sets.iter().map(VertexSet::len).min().unwrap_or(0)
    }
}

/// Every violated thicket condition; empty means the thicket is valid.
pub fn validate_thicket(g: &Graph, t: &Thicket) -> Vec<String> {
    let mut out = Vec::new();
    if t.sets.is_empty() {
        out.push("thicket has no sets".to_string());
    }
    for (i, s) in t.sets.iter().enumerate() {
        if s.is_empty() {
            out.push(format!("set {i} is empty"));
        } else if let Err(e) = g.check_set(s) {
            out.push(format!("set {i} {s}: {e}"));
        } else if !crate::graph::is_connected_induced(g, s).unwrap_or(false) {
            out.push(format!("set {i} {s} is disconnected"));
        }
    }
    for i in 0..t.sets.len() {
        for j in i + 1..t.sets.len() {
            if !t.sets[i].intersects(&t.sets[j]) {
                out.push(format!(
                    "sets {i} {} and {j} {} are disjoint",
                    t.sets[i], t.sets[j]
                ));
            }
        }
    }
    out
}

fn require_valid(g: &Graph, t: &Thicket) -> Result<()> {
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

/// Minimum number of vertices meeting every member of a valid thicket.
pub fn hitting_size(g: &Graph, t: &Thicket, limits: &Limits) -> Result<usize> {
    require_valid(g, t)?;
    Ok(min_hitting_set(&t.sets, g.n(), limits)?.size())
}

/// Searches for one component of `G - X` per `(k-1)`-subset `X` such that all
/// chosen components pairwise intersect. Such a choice is exactly a thicket
/// of hitting size at least `k`: no `X` of size `k-1` meets its own component.
struct ChoiceSearch {
    assignment: Vec<Option<Mask>>,
    counter: NodeCounter,
}

impl ChoiceSearch {
    fn solve(&mut self, domains: Vec<Vec<Mask>>) -> Result<bool> {
        self.counter.tick()?;
        let open = (0..domains.len())
            .filter(|&i| self.assignment[i].is_none())
            .min_by_key(|&i| domains[i].len());
        let Some(var) = open else {
            return Ok(true);
        };
        for &choice in &domains[var] {
            let mut next = domains.clone();
            let mut dead = false;
            for (i, dom) in next.iter_mut().enumerate() {
                if i != var && self.assignment[i].is_none() {
                    dom.retain(|&c| c & choice != 0);
                    if dom.is_empty() {
                        dead = true;
                        break;
                    }
                }
            }
            if dead {
                continue;
            }
            next[var] = vec![choice];
            self.assignment[var] = Some(choice);
            if self.solve(next)? {
                return Ok(true);
            }
            self.assignment[var] = None;
        }
        Ok(false)
    }
}

fn subsets_of_size(n: usize, size: usize, mut visit: impl FnMut(Mask)) {
    fn go(start: usize, n: usize, left: usize, acc: Mask, visit: &mut dyn FnMut(Mask)) {
        if left == 0 {
            visit(acc);
            return;
        }
        for v in start..=n - left {
            go(v + 1, n, left - 1, acc | 1 << v, visit);
        }
    }
    if size <= n {
        go(0, n, size, 0, &mut visit);
    }
}

fn thicket_of_hitting_size(g: &Graph, k: usize, limits: &Limits) -> Result<Option<Vec<Mask>>> {
    let all = g.all_mask();
    let mut domains = Vec::new();
    let mut infeasible = false;
    subsets_of_size(g.n(), k - 1, |x| {
        let dom: Vec<Mask> = g
            .components_within(all & !x)
            .into_iter()
            .filter(|c| c.count_ones() as usize >= k)
            .collect();
        infeasible |= dom.is_empty();
        domains.push(dom);
    });
    if infeasible {
        return Ok(None);
    }
    let mut search = ChoiceSearch {
        assignment: vec![None; domains.len()],
        counter: NodeCounter::new(limits, "thicket number"),
    };
    if !search.solve(domains)? {
        return Ok(None);
    }
    let mut chosen: Vec<Mask> = search
        .assignment
        .into_iter()
        .map(|c| c.expect("assigned"))
        .collect();
    chosen.sort_unstable();
    chosen.dedup();
    Ok(Some(chosen))
}

/// Drops members one at a time (in order) while the hitting size stays `k`.
fn minimize_witness(
    g: &Graph,
    mut sets: Vec<VertexSet>,
    k: usize,
    limits: &Limits,
) -> Result<Vec<VertexSet>> {
    let mut i = 0;
    while i < sets.len() && sets.len() > 1 {
        let mut rest = sets.clone();
        rest.remove(i);
        if min_hitting_set(&rest, g.n(), limits)?.size() == k {
            sets = rest;
        } else {
            i += 1;
        }
    }
    Ok(sets)
}

/// `τ(G)` with a maximizing thicket that is minimal under member removal.
pub fn thicket_number_exact(g: &Graph, limits: &Limits) -> Result<(usize, Thicket)> {
    check_width_input(g, limits, "thicket number")?;
    let mut best: Option<(usize, Vec<Mask>)> = None;
    for k in 1..=g.n() {
        match thicket_of_hitting_size(g, k, limits)? {
            Some(sets) => best = Some((k, sets)),
            None => break,
        }
    }
    let (k, sets) = best.ok_or_else(|| Error::Inconsistency("no thicket found".into()))?;
    let members: Vec<VertexSet> = sets.into_iter().map(VertexSet::from_mask).collect();
    let members = minimize_witness(g, members, k, limits)?;
    let thicket = Thicket::new(members);
    let size = hitting_size(g, &thicket, limits)?;
    if size != k {
        return Err(Error::Inconsistency(format!(
            "thicket witness has hitting size {size}, expected {k}"
        )));
    }
    Ok((k, thicket))
}

pub(crate) fn check_width_input(g: &Graph, limits: &Limits, what: &'static str) -> Result<()> {
    if g.n() == 0 {
        return Err(Error::invalid(format!("{what} needs at least one vertex")));
    }
    if g.n() > limits.width_vertices {
        return Err(Error::TooLarge {
            what,
            size: g.n(),
            limit: limits.width_vertices,
        });
    }
    Ok(())
}
