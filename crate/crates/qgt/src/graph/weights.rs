//! Weight assignment for the discrete consensus iteration.
//!
//! The engine adds consensus increments with an implicit unit step, so the
//! per-node incoming weight sum acts as the consensus step size. Keeping that
//! sum at `scale < 1` makes `I + Laplacian` a contraction on the disagreement
//! subspace. The uniform `scale / max_degree` scheme balances exactly without
//! an iterative solver.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GraphError, Link, WeightedDigraph};

fn check_scale(scale: f64) -> Result<(), GraphError> {
    if scale.is_finite() && scale > 0.0 && scale < 1.0 {
        Ok(())
    } else {
        Err(GraphError::InvalidParameter {
            name: "scale",
            reason: format!("per-node weight sum cap must lie in (0, 1), got {scale}"),
        })
    }
}

/// Assigns the uniform weight `scale / max_degree` to every link.
///
/// Bidirectional graphs get symmetric weights, directed graphs must have
/// in-degree = out-degree at every node — either way the result is exactly
/// weight-balanced and every per-node incoming sum stays at or below `scale`.
pub fn assign_weights(g: &WeightedDigraph, scale: f64) -> Result<WeightedDigraph, GraphError> {
    check_scale(scale)?;
    if !g.is_strongly_connected() {
        return Err(GraphError::NotConnected);
    }
    let in_deg = g.in_degrees();
    let out_deg = g.out_degrees();
    if g.is_directed() {
        for (node, (&i, &o)) in in_deg.iter().zip(&out_deg).enumerate() {
            if i != o {
                return Err(GraphError::UnbalancedDegrees {
                    node,
                    in_degree: i,
                    out_degree: o,
                });
            }
        }
    }
    let max_degree = in_deg.iter().copied().max().unwrap_or(0);
    if max_degree == 0 {
        return Err(GraphError::NotConnected);
    }
    let w = scale / max_degree as f64;
    let links = g
        .links()
        .iter()
        .map(|l| Link::new(l.from, l.to, w))
        .collect();
    WeightedDigraph::new(g.node_count(), links, g.is_directed())
}

/// Seeded perturbation of the uniform scheme, for switching schedules.
///
/// Bidirectional graphs draw one factor in `[0.5, 1.0]` per unordered pair
/// (applied to both directions, so symmetry and balance survive). Directed
/// graphs draw a single common factor — scaling all links together is the
/// one perturbation that preserves balance on an arbitrary digraph. Factors
/// never exceed 1, so the per-node sum cap continues to hold.
pub fn reweight(g: &WeightedDigraph, scale: f64, seed: u64) -> Result<WeightedDigraph, GraphError> {
    let base = assign_weights(g, scale)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let links = if base.is_directed() {
        let factor = rng.random_range(0.5..=1.0);
        base.links()
            .iter()
            .map(|l| Link::new(l.from, l.to, l.weight * factor))
            .collect()
    } else {
        // Draw in sorted pair order so the perturbation is independent of
        // link storage order.
        let mut factors: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for l in base.links() {
            let key = (l.from.min(l.to), l.from.max(l.to));
            factors.entry(key).or_insert(0.0);
        }
        for f in factors.values_mut() {
            *f = rng.random_range(0.5..=1.0);
        }
        base.links()
            .iter()
            .map(|l| {
                let key = (l.from.min(l.to), l.from.max(l.to));
                Link::new(l.from, l.to, l.weight * factors[&key])
            })
            .collect()
    };
    WeightedDigraph::new(base.node_count(), links, base.is_directed())
}
