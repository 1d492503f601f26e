//! Topology generators: structured exponential digraphs and random
//! geometric / Erdos-Renyi networks.
//!
//! Generators emit unit link weights; [`assign_weights`](super::assign_weights)
//! scales them for the discrete consensus iteration.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GraphError, Link, WeightedDigraph};

/// Attempts before a random generator gives up on connectivity.
pub const RETRY_CAP: u32 = 100;

/// Exponential graph on `n = 2^q` nodes: node `i` transmits to
/// `(i + 2^j) mod n` for `j = 0..q-1`. Every node has in-degree = out-degree
/// = `q`, so uniform weights balance it by construction.
pub fn gen_exponential(n: usize) -> Result<WeightedDigraph, GraphError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(GraphError::NotPowerOfTwo(n));
    }
    let q = n.trailing_zeros();
    let mut links = Vec::with_capacity(n * q as usize);
    for i in 0..n {
        for j in 0..q {
            let to = (i + (1usize << j)) % n;
            links.push(Link::new(i, to, 1.0));
        }
    }
    WeightedDigraph::new(n, links, true)
}

/// Random geometric graph: `n` points uniform in the unit square, linked
/// bidirectionally when within `radius`. Points are resampled (up to
/// [`RETRY_CAP`] times) until the graph is connected.
pub fn gen_geometric(n: usize, radius: f64, seed: u64) -> Result<WeightedDigraph, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameter {
            name: "n",
            reason: format!("need at least 2 nodes, got {n}"),
        });
    }
    if !(radius > 0.0 && radius <= std::f64::consts::SQRT_2) {
        return Err(GraphError::InvalidParameter {
            name: "radius",
            reason: format!("must lie in (0, sqrt(2)], got {radius}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_CAP {
        let points: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random::<f64>(), rng.random::<f64>()))
            .collect();
        let mut links = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = points[i].0 - points[j].0;
                let dy = points[i].1 - points[j].1;
                if (dx * dx + dy * dy).sqrt() <= radius {
                    links.push(Link::new(i, j, 1.0));
                    links.push(Link::new(j, i, 1.0));
                }
            }
        }
        if let Ok(g) = WeightedDigraph::new(n, links, false) {
            return Ok(g);
        }
    }
    Err(GraphError::ConnectivityRetries {
        attempts: RETRY_CAP,
        detail: format!("geometric graph, n={n}, radius={radius}"),
    })
}

/// Erdos-Renyi graph: each unordered pair is linked independently with
/// probability `p`, stored bidirectionally. Resampled until connected.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<WeightedDigraph, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameter {
            name: "n",
            reason: format!("need at least 2 nodes, got {n}"),
        });
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(GraphError::InvalidParameter {
            name: "p",
            reason: format!("link probability must lie in (0, 1], got {p}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_CAP {
        let mut links = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < p {
                    links.push(Link::new(i, j, 1.0));
                    links.push(Link::new(j, i, 1.0));
                }
            }
        }
        if let Ok(g) = WeightedDigraph::new(n, links, false) {
            return Ok(g);
        }
    }
    Err(GraphError::ConnectivityRetries {
        attempts: RETRY_CAP,
        detail: format!("Erdos-Renyi graph, n={n}, p={p}"),
    })
}
