use crate::error::Result;
use crate::graph::Graph;

/// Adjacency as bit rows, for the small graphs of the corpus.
fn rows(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | 1 << u))
        .collect()
}

fn invariant(rows: &[u32]) -> Vec<(u32, u32)> {
    // (degree, sum of neighbour degrees) per vertex, sorted.
    let deg: Vec<u32> = rows.iter().map(|r| r.count_ones()).collect();
    let mut inv: Vec<(u32, u32)> = rows
        .iter()
        .enumerate()
        .map(|(v, r)| {
            let around = (0..rows.len())
                .filter(|&u| r >> u & 1 == 1)
                .map(|u| deg[u])
                .sum();
            (deg[v], around)
        })
        .collect();
    inv.sort_unstable();
    inv
}

fn isomorphic(a: &[u32], b: &[u32]) -> bool {
    let n = a.len();
    let deg_a: Vec<u32> = a.iter().map(|r| r.count_ones()).collect();
    let deg_b: Vec<u32> = b.iter().map(|r| r.count_ones()).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        v: usize,
        a: &[u32],
        b: &[u32],
        da: &[u32],
        db: &[u32],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if v == a.len() {
            return true;
        }
        for w in 0..a.len() {
            if used[w] || da[v] != db[w] {
                continue;
            }
            let consistent = (0..v).all(|u| (a[v] >> u & 1) == (b[w] >> map[u] & 1));
            if consistent {
                map[v] = w;
                used[w] = true;
                if extend(v + 1, a, b, da, db, map, used) {
                    return true;
                }
                used[w] = false;
            }
        }
        false
    }
    extend(0, a, b, &deg_a, &deg_b, &mut map, &mut used)
}

type Representative = (Vec<(u32, u32)>, Vec<u32>, Graph);

/// One representative of every connected graph on `n` vertices up to
/// isomorphism. Each such graph has a vertex whose removal keeps it connected,
/// so all arise from the `n - 1` list by adding a vertex with some non-empty
/// neighbourhood.
fn next_level(prev: &[Graph], n: usize) -> Result<Vec<Graph>> {
    let mut reps: Vec<Representative> = Vec::new();
    for base in prev {
        let edges: Vec<(usize, usize)> = base.edges().collect();
        for hood in 1u32..1 << (n - 1) {
            let mut all = edges.clone();
            all.extend(
                (0..n - 1)
                    .filter(|&u| hood >> u & 1 == 1)
                    .map(|u| (u, n - 1)),
            );
            let g = Graph::new(n, all)?;
            let r = rows(&g);
            let inv = invariant(&r);
            if reps
                .iter()
                .any(|(i, rr, _)| *i == inv && isomorphic(&r, rr))
            {
                continue;
            }
            reps.push((inv, r, g));
        }
    }
    let mut out: Vec<Graph> = reps.into_iter().map(|(_, _, g)| g).collect();
    out.sort_by_key(|g| (g.edge_count(), g.edges().collect::<Vec<_>>()));
    Ok(out)
}

/// Every connected graph on at most `max_n` vertices (here at most 7), up to
/// isomorphism, ordered by vertex count, edge count, then edge list.
pub fn connected_graphs(max_n: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    if max_n == 0 {
        return Ok(out);
    }
    let mut level = vec![Graph::new(1, [])?];
    out.extend(level.iter().cloned());
    for n in 2..=max_n.min(7) {
        level = next_level(&level, n)?;
        out.extend(level.iter().cloned());
    }
    Ok(out)
}
