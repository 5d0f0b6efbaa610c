use std::collections::HashMap;

use crate::config::{Limits, NodeCounter};
use crate::error::{Error, Result};
use crate::graph::{bits, Graph, Mask, VertexSet};

use super::decomp::{validate_vine, VineDecomposition};
use super::thicket::{check_width_input, thicket_number_exact, Thicket};

/// Decides whether a vine decomposition of width at most `k` exists.
///
/// A node with label `L` responsible for the vertex set `D ⊇ L` gets one child
/// per component `C` of `G[D \ L]`. The child label `L'` takes some vertices
/// of `C` and may inherit vertices of `L` adjacent to `C`; every vertex of `C`
/// adjacent to a parent vertex that is not inherited must sit in `L'`, since
/// its node set lies strictly below the child. Only `L ∩ N(C)` influences that
/// choice, so solutions are memoized on `(L ∩ N(C), C)`.
struct VineSearch<'a> {
    g: &'a Graph,
    k: u32,
    memo: HashMap<(Mask, Mask), Option<Mask>>,
    counter: NodeCounter,
}

impl VineSearch<'_> {
    fn covers(&mut self, label: Mask, domain: Mask) -> Result<bool> {
        for comp in self.g.components_within(domain & !label) {
            let border = label & self.g.neighborhood_mask(comp);
            if self.child(border, comp)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn child(&mut self, border: Mask, comp: Mask) -> Result<Option<Mask>> {
        if let Some(&known) = self.memo.get(&(border, comp)) {
            return Ok(known);
        }
        self.counter.tick()?;
        let found = self.find_child(border, comp)?;
        self.memo.insert((border, comp), found);
        Ok(found)
    }

    fn find_child(&mut self, border: Mask, comp: Mask) -> Result<Option<Mask>> {
        for inherit in submasks(border) {
            let dropped = border & !inherit;
            let forced = self.g.neighborhood_mask(dropped) & comp;
            let base = inherit.count_ones() + forced.count_ones();
            if base > self.k {
                continue;
            }
            let free = comp & !forced;
            let room = (self.k - base) as usize;
            for extra in subsets_up_to(free, room) {
                let own = forced | extra;
                if own == 0 {
                    continue;
                }
                let label = inherit | own;
                if self.covers(label, comp)? {
                    return Ok(Some(label));
                }
            }
        }
        Ok(None)
    }

    fn build(
        &mut self,
        label: Mask,
        domain: Mask,
        parent: Option<usize>,
        out: &mut VineDecomposition,
    ) {
        let node = out.labels.len();
        out.labels.push(VertexSet::from_mask(label));
        if let Some(p) = parent {
            out.links.push((p, node));
        }
        for comp in self.g.components_within(domain & !label) {
            let border = label & self.g.neighborhood_mask(comp);
            let child = self.memo[&(border, comp)].expect("solved child");
            self.build(child, comp, Some(node), out);
        }
    }
}

/// All submasks of `mask`, in increasing numeric order.
fn submasks(mask: Mask) -> Vec<Mask> {
    let mut out = Vec::new();
    let mut sub: Mask = 0;
    loop {
        out.push(sub);
        if sub == mask {
            return out;
        }
        sub = (sub.wrapping_sub(mask)) & mask;
    }
}

/// Subsets of `mask` with at most `size` members, by size then lexicographically.
fn subsets_up_to(mask: Mask, size: usize) -> Vec<Mask> {
    let items: Vec<usize> = bits(mask).collect();
    let mut out = Vec::new();
    fn go(items: &[usize], start: usize, left: usize, acc: Mask, out: &mut Vec<Mask>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < left {
                break;
            }
            go(items, i + 1, left - 1, acc | 1 << items[i], out);
        }
    }
    for s in 0..=size.min(items.len()) {
        go(&items, 0, s, 0, &mut out);
    }
    out
}

/// `ν(G)` with a decomposition attaining it.
pub fn vinewidth_exact(g: &Graph, limits: &Limits) -> Result<(usize, VineDecomposition)> {
    check_width_input(g, limits, "vinewidth")?;
    let all = g.all_mask();
    let mut counter = NodeCounter::new(limits, "vinewidth");
    for k in 1..=g.n() as u32 {
        let mut search = VineSearch {
            g,
            k,
            memo: HashMap::new(),
            counter,
        };
        // Rooting at a node that holds vertex 0 loses nothing.
        let roots = subsets_up_to(all & !1, k as usize - 1);
        for rest in roots {
            let root = rest | 1;
            if search.covers(root, all)? {
                let mut d = VineDecomposition {
                    labels: Vec::new(),
                    links: Vec::new(),
                };
                search.build(root, all, None, &mut d);
                let problems = validate_vine(g, &d);
                if !problems.is_empty() || d.width() != k as usize {
                    return Err(Error::Inconsistency(format!(
                        "vinewidth witness invalid: {}",
                        problems.join("; ")
                    )));
                }
                return Ok((k as usize, d));
            }
        }
        counter = search.counter;
    }
    Err(Error::Inconsistency("no vine decomposition found".into()))
}

/// Thicket number and vinewidth computed independently; a mismatch is an error.
pub fn minmax_exact(g: &Graph, limits: &Limits) -> Result<(usize, Thicket, VineDecomposition)> {
    let (tau, thicket) = thicket_number_exact(g, limits)?;
    let (nu, vine) = vinewidth_exact(g, limits)?;
    if tau != nu {
        return Err(Error::Inconsistency(format!(
            "thicket number {tau} differs from vinewidth {nu}"
        )));
    }
    Ok((tau, thicket, vine))
}

/// `ω(G)` by the elimination dynamic program
/// `TW(S) = min_{v∈S} max(TW(S∖v), |Q(S∖v, v)|)`, where `Q(S, v)` is the set of
/// vertices outside `S ∪ {v}` reachable from `v` through `S`.
pub fn treewidth_exact(g: &Graph, limits: &Limits) -> Result<usize> {
    let n = g.n();
    if n == 0 {
        return Err(Error::invalid("treewidth needs at least one vertex"));
    }
    if n > limits.treewidth_vertices {
        return Err(Error::TooLarge {
            what: "treewidth",
            size: n,
            limit: limits.treewidth_vertices,
        });
    }
    let mut counter = NodeCounter::new(limits, "treewidth");
    let full = g.all_mask();
    let mut tw = vec![i32::MAX; 1 << n];
    tw[0] = -1;
    for s in 1..=full {
        counter.tick()?;
        let mut best = i32::MAX;
        for v in bits(s) {
            let rest = s & !(1 << v);
            let prior = tw[rest as usize];
            if prior >= best {
                continue;
            }
            let reach = g.reach_within(1 << v, rest | 1 << v);
            let q = (g.neighborhood_mask(reach) & !s).count_ones() as i32;
            best = best.min(prior.max(q));
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize] as usize)
}
