//! Switching topology schedules.
//!
//! A schedule maps the iteration counter to a realized topology: every
//! `period` iterations either the link weights are re-perturbed on a fixed
//! structure (`ReweightOnly`) or the whole graph is redrawn (`ResampleTopology`).
//! The realization is a pure function of `(seed, k / period)`, so runs replay
//! exactly. Every realized graph satisfies the full digraph invariants.

use crate::seed::derive_seed;

use super::{
    assign_weights, gen_erdos_renyi, gen_exponential, gen_geometric, reweight, GraphError,
    WeightedDigraph,
};

/// Generator family plus its parameters; evaluation is deterministic in the
/// seed argument.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Exponential { n: usize },
    Geometric { n: usize, radius: f64 },
    ErdosRenyi { n: usize, p: f64 },
}

impl GraphSpec {
    pub fn generate(&self, seed: u64) -> Result<WeightedDigraph, GraphError> {
        match *self {
            GraphSpec::Exponential { n } => gen_exponential(n),
            GraphSpec::Geometric { n, radius } => gen_geometric(n, radius, seed),
            GraphSpec::ErdosRenyi { n, p } => gen_erdos_renyi(n, p, seed),
        }
    }

    pub fn node_count(&self) -> usize {
        match *self {
            GraphSpec::Exponential { n }
            | GraphSpec::Geometric { n, .. }
            | GraphSpec::ErdosRenyi { n, .. } => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchMode {
    /// Keep the link structure, re-perturb the weights each epoch.
    ReweightOnly,
    /// Redraw the whole graph (structure and weights) each epoch.
    ResampleTopology,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwitchingSchedule {
    /// Iterations between switches; `None` freezes the topology.
    pub period: Option<u64>,
    pub mode: SwitchMode,
    pub seed: u64,
}

impl SwitchingSchedule {
    pub fn fixed(seed: u64) -> Self {
        Self {
            period: None,
            mode: SwitchMode::ReweightOnly,
            seed,
        }
    }

    pub fn every(period: u64, mode: SwitchMode, seed: u64) -> Result<Self, GraphError> {
        if period == 0 {
            return Err(GraphError::InvalidParameter {
                name: "period",
                reason: "switching period must be positive".into(),
            });
        }
        Ok(Self {
            period: Some(period),
            mode,
            seed,
        })
    }

    pub fn epoch(&self, k: u64) -> u64 {
        match self.period {
            Some(p) => k / p,
            None => 0,
        }
    }
}

// Stream tags for derive_seed, so structure draws, weight draws and the
// B-matrix never share randomness.
const STREAM_STRUCTURE: u64 = 0x01;
const STREAM_WEIGHTS: u64 = 0x02;

/// Realized topology at iteration `k`: a deterministic function of the
/// schedule seed and the epoch index `k / period`.
pub fn topology_at(
    spec: &GraphSpec,
    scale: f64,
    schedule: &SwitchingSchedule,
    k: u64,
) -> Result<WeightedDigraph, GraphError> {
    let epoch = schedule.epoch(k);
    realize_epoch(spec, scale, schedule, epoch, 0)
}

/// `weight_salt` 0 realizes the primary (A) weights; any other value draws an
/// alternative weight stream over the *same* structure, used for independent
/// B-matrices. The structure seed never depends on the salt.
fn realize_epoch(
    spec: &GraphSpec,
    scale: f64,
    schedule: &SwitchingSchedule,
    epoch: u64,
    weight_salt: u64,
) -> Result<WeightedDigraph, GraphError> {
    let epoch_stream = derive_seed(schedule.seed, epoch.wrapping_add(0x100));
    let structure_seed = match (schedule.period, schedule.mode) {
        (Some(_), SwitchMode::ResampleTopology) => derive_seed(epoch_stream, STREAM_STRUCTURE),
        _ => derive_seed(schedule.seed, STREAM_STRUCTURE),
    };
    let g = spec.generate(structure_seed)?;
    match schedule.period {
        // A static schedule keeps the plain uniform scheme; only an
        // alternative weight stream perturbs it.
        None if weight_salt == 0 => assign_weights(&g, scale),
        None => reweight(
            &g,
            scale,
            derive_seed(derive_seed(schedule.seed, STREAM_WEIGHTS), weight_salt),
        ),
        Some(_) => reweight(
            &g,
            scale,
            derive_seed(derive_seed(epoch_stream, STREAM_WEIGHTS), weight_salt),
        ),
    }
}

/// Supplies the consensus-weight graph `A` and tracker-weight graph `B` for
/// each iteration. Implementations cache the current epoch so lock-step runs
/// pay the generation cost once per switch.
pub trait TopologyProvider {
    fn graphs_at(&mut self, k: u64) -> Result<(&WeightedDigraph, &WeightedDigraph), GraphError>;
    fn epoch_of(&self, k: u64) -> u64;
}

/// Fixed pair of graphs for static runs and unit tests.
pub struct StaticTopology {
    a: WeightedDigraph,
    b: WeightedDigraph,
}

impl StaticTopology {
    pub fn new(a: WeightedDigraph, b: WeightedDigraph) -> Self {
        Self { a, b }
    }

    /// Uses the same graph for both weight matrices.
    pub fn shared(g: WeightedDigraph) -> Self {
        let b = g.clone();
        Self { a: g, b }
    }
}

impl TopologyProvider for StaticTopology {
    fn graphs_at(&mut self, _k: u64) -> Result<(&WeightedDigraph, &WeightedDigraph), GraphError> {
        Ok((&self.a, &self.b))
    }

    fn epoch_of(&self, _k: u64) -> u64 {
        0
    }
}

/// Schedule-driven provider. By default the tracker matrix `B` equals `A`;
/// an independent B-weight stream can be requested instead.
pub struct ScheduledTopology {
    spec: GraphSpec,
    scale: f64,
    schedule: SwitchingSchedule,
    independent_b: bool,
    cached: Option<(u64, WeightedDigraph, WeightedDigraph)>,
}

impl ScheduledTopology {
    pub fn new(spec: GraphSpec, scale: f64, schedule: SwitchingSchedule) -> Self {
        Self {
            spec,
            scale,
            schedule,
            independent_b: false,
            cached: None,
        }
    }

    /// Draw B-weights from their own stream instead of reusing A.
    pub fn with_independent_b(mut self) -> Self {
        self.independent_b = true;
        self
    }

    pub fn schedule(&self) -> &SwitchingSchedule {
        &self.schedule
    }

    /// Realize the topology pair for an explicit epoch (used when sampling
    /// algebraic connectivity across the schedule). A and B always share the
    /// link structure; independent B only changes the weight draw.
    pub fn epoch_pair(
        &self,
        epoch: u64,
    ) -> Result<(WeightedDigraph, WeightedDigraph), GraphError> {
        let a = realize_epoch(&self.spec, self.scale, &self.schedule, epoch, 0)?;
        let b = if self.independent_b {
            realize_epoch(&self.spec, self.scale, &self.schedule, epoch, 0xB)?
        } else {
            a.clone()
        };
        Ok((a, b))
    }
}

impl TopologyProvider for ScheduledTopology {
    fn graphs_at(&mut self, k: u64) -> Result<(&WeightedDigraph, &WeightedDigraph), GraphError> {
        let epoch = self.schedule.epoch(k);
        let refresh = match &self.cached {
            Some((cached_epoch, _, _)) => *cached_epoch != epoch,
            None => true,
        };
        if refresh {
            let (a, b) = self.epoch_pair(epoch)?;
            self.cached = Some((epoch, a, b));
        }
        let (_, a, b) = self.cached.as_ref().unwrap();
        Ok((a, b))
    }

    fn epoch_of(&self, k: u64) -> u64 {
        self.schedule.epoch(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BALANCE_TOL;

    fn er_spec() -> GraphSpec {
        GraphSpec::ErdosRenyi { n: 16, p: 0.3 }
    }

    #[test]
    fn same_epoch_same_topology() {
        let sched = SwitchingSchedule::every(100, SwitchMode::ReweightOnly, 5).unwrap();
        let spec = GraphSpec::Exponential { n: 16 };
        let a = topology_at(&spec, 0.5, &sched, 0).unwrap();
        let b = topology_at(&spec, 0.5, &sched, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn epoch_boundary_changes_weights_but_not_structure_in_reweight_mode() {
        let sched = SwitchingSchedule::every(100, SwitchMode::ReweightOnly, 5).unwrap();
        let spec = er_spec();
        let before = topology_at(&spec, 0.5, &sched, 99).unwrap();
        let after = topology_at(&spec, 0.5, &sched, 100).unwrap();
        assert_ne!(before, after);
        let structure = |g: &WeightedDigraph| {
            let mut pairs: Vec<(usize, usize)> =
                g.links().iter().map(|l| (l.from, l.to)).collect();
            pairs.sort_unstable();
            pairs
        };
        assert_eq!(structure(&before), structure(&after));
    }

    #[test]
    fn resample_mode_redraws_structure() {
        let sched = SwitchingSchedule::every(100, SwitchMode::ResampleTopology, 5).unwrap();
        let spec = er_spec();
        let e0 = topology_at(&spec, 0.5, &sched, 0).unwrap();
        let e1 = topology_at(&spec, 0.5, &sched, 100).unwrap();
        let pairs = |g: &WeightedDigraph| {
            let mut p: Vec<(usize, usize)> = g.links().iter().map(|l| (l.from, l.to)).collect();
            p.sort_unstable();
            p
        };
        assert_ne!(pairs(&e0), pairs(&e1));
    }

    #[test]
    fn static_schedule_is_constant() {
        let sched = SwitchingSchedule::fixed(9);
        let spec = er_spec();
        let a = topology_at(&spec, 0.5, &sched, 0).unwrap();
        for k in [1, 57, 10_000] {
            assert_eq!(a, topology_at(&spec, 0.5, &sched, k).unwrap());
        }
    }

    #[test]
    fn every_realization_satisfies_the_invariants() {
        for mode in [SwitchMode::ReweightOnly, SwitchMode::ResampleTopology] {
            let sched = SwitchingSchedule::every(10, mode, 3).unwrap();
            for k in (0..100).step_by(10) {
                let g = topology_at(&er_spec(), 0.5, &sched, k).unwrap();
                g.validate().unwrap();
                assert!(g.is_weight_balanced(BALANCE_TOL));
            }
        }
    }

    #[test]
    fn provider_caches_within_an_epoch() {
        let sched = SwitchingSchedule::every(100, SwitchMode::ReweightOnly, 5).unwrap();
        let mut prov = ScheduledTopology::new(er_spec(), 0.5, sched);
        let first = prov.graphs_at(0).unwrap().0.clone();
        let again = prov.graphs_at(42).unwrap().0.clone();
        assert_eq!(first, again);
        assert_eq!(prov.epoch_of(42), 0);
        assert_eq!(prov.epoch_of(100), 1);
        let next = prov.graphs_at(100).unwrap().0.clone();
        assert_ne!(first, next);
    }

    #[test]
    fn independent_b_differs_from_a_in_weights_only() {
        let sched = SwitchingSchedule::every(100, SwitchMode::ReweightOnly, 5).unwrap();
        let mut prov = ScheduledTopology::new(er_spec(), 0.5, sched).with_independent_b();
        let (a, b) = prov.graphs_at(0).unwrap();
        assert_ne!(a, b);
        let pairs = |g: &WeightedDigraph| {
            let mut p: Vec<(usize, usize)> = g.links().iter().map(|l| (l.from, l.to)).collect();
            p.sort_unstable();
            p
        };
        assert_eq!(pairs(a), pairs(b));
        assert!(b.is_weight_balanced(BALANCE_TOL));
    }
}
