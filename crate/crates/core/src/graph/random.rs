//! Seeded random graphs for experiments (ChaCha streams, so runs are reproducible).

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Graph;

/// Independent deterministic stream `stream` under `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// G(n, p) conditioned on connectivity (rejection sampling).
pub fn connected_gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    assert!(n >= 1);
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, edges).expect("generated edges are simple");
        if g.is_connected() {
            return g;
        }
    }
}

/// Uniform labelled tree on `n` vertices via a random Pruefer sequence.
pub fn tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    assert!(n >= 1);
    if n <= 2 {
        return Graph::new(n, (1..n).map(|v| (0, v))).expect("simple");
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::new(n, edges).expect("Pruefer decoding yields a simple tree")
}

/// A random `count`-subset of `items`, keeping the original order.
pub fn sample_subset<T: Clone, R: Rng>(items: &[T], count: usize, rng: &mut R) -> Vec<T> {
    let mut idx: Vec<usize> = (0..items.len()).collect();
    idx.shuffle(rng);
    idx.truncate(count.min(items.len()));
    idx.sort_unstable();
    idx.into_iter().map(|i| items[i].clone()).collect()
}
