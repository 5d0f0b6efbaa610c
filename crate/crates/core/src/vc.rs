//! VC-dimension of the family of connected vertex sets of a graph.

use serde::{Deserialize, Serialize};

use crate::config::{Limits, NodeCounter};
use crate::error::{Error, Result};
use crate::graph::{bits, Graph, Mask, VertexSet};

/// A shattered set with one connected realizer `R` per subset `Y`, `Y = X ∩ R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShatterWitness {
    pub shattered_set: VertexSet,
    pub realizers: Vec<(VertexSet, VertexSet)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shatter {
    Shattered(ShatterWitness),
    /// The smallest subset, in set order, without a connected realizer.
    NotShattered(VertexSet),
}

impl Shatter {
    pub fn is_shattered(&self) -> bool {
        matches!(self, Shatter::Shattered(_))
    }
}

/// Connected `R` with `X ∩ R = Y`. For non-empty `Y` this is the component
/// of `G - (X \ Y)` containing `Y`, if `Y` lies in a single one; for `Y = ∅`
/// the lowest component of `G - X`.
fn realizer(g: &Graph, x: Mask, y: Mask) -> Option<Mask> {
    let allowed = g.all_mask() & !(x & !y);
    if y == 0 {
        return g.components_within(allowed).into_iter().next();
    }
    let low = y & y.wrapping_neg();
    let comp = g.reach_within(low, allowed);
    (comp & y == y).then_some(comp)
}

fn shatter_mask(
    g: &Graph,
    x: Mask,
    counter: &mut NodeCounter,
) -> Result<std::result::Result<Vec<(Mask, Mask)>, Mask>> {
    // Cheap rejections first: the empty subset and the co-singletons.
    if realizer(g, x, 0).is_none() {
        return Ok(Err(0));
    }
    for v in bits(x) {
        if realizer(g, x, x & !(1 << v)).is_none() {
            return Ok(Err(first_failure(g, x)));
        }
    }
    let mut out = Vec::with_capacity(1 << x.count_ones());
    let mut y: Mask = 0;
    loop {
        counter.tick()?;
        match realizer(g, x, y) {
            Some(r) => out.push((y, r)),
            None => return Ok(Err(first_failure(g, x))),
        }
        if y == x {
            break;
        }
        y = y.wrapping_sub(x) & x;
    }
    Ok(Ok(out))
}

fn first_failure(g: &Graph, x: Mask) -> Mask {
    let mut failing: Vec<VertexSet> = Vec::new();
    let mut y: Mask = 0;
    loop {
        if realizer(g, x, y).is_none() {
            failing.push(VertexSet::from_mask(y));
        }
        if y == x {
            break;
        }
        y = y.wrapping_sub(x) & x;
    }
    failing.into_iter().min().map(|s| s.mask()).unwrap_or(0)
}

fn witness(x: Mask, pairs: Vec<(Mask, Mask)>) -> ShatterWitness {
    let mut realizers: Vec<(VertexSet, VertexSet)> = pairs
        .into_iter()
        .map(|(y, r)| (VertexSet::from_mask(y), VertexSet::from_mask(r)))
        .collect();
    realizers.sort();
    ShatterWitness {
        shattered_set: VertexSet::from_mask(x),
        realizers,
    }
}

/// Whether `x` is shattered by the connected sets of `g`.
pub fn is_shattered(g: &Graph, x: &VertexSet, limits: &Limits) -> Result<Shatter> {
    g.require_masks("shattering")?;
    g.check_set(x)?;
    if x.is_empty() {
        return Err(Error::invalid("shattering needs a non-empty set"));
    }
    if x.len() > limits.shatter_size {
        return Err(Error::TooLarge {
            what: "shattering",
            size: x.len(),
            limit: limits.shatter_size,
        });
    }
    let mut counter = NodeCounter::new(limits, "shattering");
    Ok(match shatter_mask(g, x.mask(), &mut counter)? {
        Ok(pairs) => Shatter::Shattered(witness(x.mask(), pairs)),
        Err(y) => Shatter::NotShattered(VertexSet::from_mask(y)),
    })
}

/// Checks every realizer of a witness against the graph.
pub fn verify_shatter_witness(g: &Graph, w: &ShatterWitness) -> Vec<String> {
    let mut problems = Vec::new();
    let x = &w.shattered_set;
    if let Err(e) = g.check_set(x) {
        return vec![e.to_string()];
    }
    let expected = 1usize << x.len();
    let mut seen: Vec<&VertexSet> = w.realizers.iter().map(|(y, _)| y).collect();
    seen.sort();
    seen.dedup();
    if seen.len() != expected || w.realizers.len() != expected {
        problems.push(format!(
            "{} distinct subsets realized, need {expected}",
            seen.len()
        ));
    }
    for (y, r) in &w.realizers {
        if !y.is_subset(x) {
            problems.push(format!("{y} is not a subset of {x}"));
        }
        if r.is_empty()
            || g.check_set(r).is_err()
            || !crate::graph::is_connected_induced(g, r).unwrap_or(false)
        {
            problems.push(format!("realizer {r} of {y} is not a connected set"));
        } else if &x.intersection(r) != y {
            problems.push(format!(
                "realizer {r} meets {x} in {} not {y}",
                x.intersection(r)
            ));
        }
    }
    problems
}

/// Largest shattered set, searching sizes downward and candidates in
/// lexicographic order. A one-vertex graph has dimension 0.
pub fn vc_dimension_exact(g: &Graph, limits: &Limits) -> Result<(usize, ShatterWitness)> {
    let n = g.n();
    if n == 0 {
        return Err(Error::invalid("VC-dimension needs at least one vertex"));
    }
    if n > limits.vc_vertices {
        return Err(Error::TooLarge {
            what: "VC-dimension",
            size: n,
            limit: limits.vc_vertices,
        });
    }
    let mut counter = NodeCounter::new(limits, "VC-dimension");
    for size in (1..n).rev() {
        let mut candidates: Vec<VertexSet> = Vec::new();
        collect_subsets(n, size, 0, 0, &mut candidates);
        for x in candidates {
            if let Ok(pairs) = shatter_mask(g, x.mask(), &mut counter)? {
                return Ok((size, witness(x.mask(), pairs)));
            }
        }
    }
    Ok((
        0,
        ShatterWitness {
            shattered_set: VertexSet::new([]),
            realizers: vec![(VertexSet::new([]), VertexSet::new([0]))],
        },
    ))
}

fn collect_subsets(n: usize, left: usize, start: usize, acc: Mask, out: &mut Vec<VertexSet>) {
    if left == 0 {
        out.push(VertexSet::from_mask(acc));
        return;
    }
    for v in start..=n - left {
        collect_subsets(n, left - 1, v + 1, acc | 1 << v, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_connected_sets, generate, random, Family};

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::new(v.iter().copied())
    }

    /// Shattering by direct comparison against every connected set.
    fn brute_shattered(g: &Graph, x: Mask) -> bool {
        let family: Vec<Mask> = enumerate_connected_sets(g, 1, g.n())
            .unwrap()
            .iter()
            .map(VertexSet::mask)
            .collect();
        let mut y: Mask = 0;
        loop {
            if !family.iter().any(|&r| r & x == y) {
                return false;
            }
            if y == x {
                return true;
            }
            y = y.wrapping_sub(x) & x;
        }
    }

    fn brute_vc(g: &Graph) -> usize {
        (1u64..1 << g.n())
            .filter(|&x| brute_shattered(g, x))
            .map(|x| x.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn shattering_examples() {
        let l = Limits::default();
        let star = generate(Family::Star(3)).unwrap();
        match is_shattered(&star, &set(&[1, 2, 3]), &l).unwrap() {
            Shatter::Shattered(w) => {
                assert!(verify_shatter_witness(&star, &w).is_empty());
                assert_eq!(w.realizers[0], (set(&[]), set(&[0])));
            }
            other => panic!("{other:?}"),
        }
        let k3 = generate(Family::Clique(3)).unwrap();
        assert_eq!(
            is_shattered(&k3, &set(&[0, 1, 2]), &l).unwrap(),
            Shatter::NotShattered(set(&[]))
        );
        assert!(is_shattered(&k3, &set(&[0, 1]), &l).unwrap().is_shattered());
        let p3 = generate(Family::Path(3)).unwrap();
        assert!(is_shattered(&p3, &set(&[0, 2]), &l).unwrap().is_shattered());
        assert!(is_shattered(&p3, &set(&[]), &l).is_err());
        let p4 = generate(Family::Path(4)).unwrap();
        assert_eq!(
            is_shattered(&p4, &set(&[0, 1, 3]), &l).unwrap(),
            Shatter::NotShattered(set(&[0, 3]))
        );
    }

    #[test]
    fn dimension_examples() {
        let l = Limits::default();
        let cases = [
            (Family::Star(4), 4),
            (Family::Clique(3), 2),
            (Family::Clique(1), 0),
            (Family::Path(2), 1),
        ];
        for (family, expected) in cases {
            let g = generate(family).unwrap();
            let (d, w) = vc_dimension_exact(&g, &l).unwrap();
            assert_eq!(d, expected, "{family:?}");
            assert_eq!(w.shattered_set.len(), d);
            assert!(verify_shatter_witness(&g, &w).is_empty());
        }
    }

    #[test]
    fn agrees_with_exhaustive_oracle() {
        let l = Limits::default();
        let mut rng = random::stream(17, 3);
        for trial in 0..30 {
            let g = random::connected_gnp(2 + trial % 6, 0.5, &mut rng);
            assert_eq!(
                vc_dimension_exact(&g, &l).unwrap().0,
                brute_vc(&g),
                "trial {trial}"
            );
        }
    }

    #[test]
    fn detects_bad_witness() {
        let p3 = generate(Family::Path(3)).unwrap();
        let bad = ShatterWitness {
            shattered_set: set(&[0]),
            realizers: vec![(set(&[]), set(&[0, 2])), (set(&[0]), set(&[0]))],
        };
        assert!(!verify_shatter_witness(&p3, &bad).is_empty());
    }
}
