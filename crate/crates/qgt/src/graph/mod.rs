//! Weight-balanced directed communication networks.
//!
//! A [`WeightedDigraph`] stores the consensus weights `a_ij`: a link
//! `(from, to, w)` means `from` transmits to `to` and the receiver applies
//! weight `w` to the incoming message. Every graph handed to the engine must
//! be strongly connected and weight-balanced — at each node the incoming
//! weight sum equals the outgoing weight sum. Balance is what makes the
//! consensus terms cancel under summation, for any odd link nonlinearity.

mod generate;
mod schedule;
mod spectral;
mod weights;

pub use generate::{gen_erdos_renyi, gen_exponential, gen_geometric, RETRY_CAP};
pub use schedule::{
    topology_at, GraphSpec, ScheduledTopology, StaticTopology, SwitchMode, SwitchingSchedule,
    TopologyProvider,
};
pub use spectral::{
    laplacian, spectrum, spectrum_of, LaplacianSpectrum, SpectrumError, ZERO_EIGENVALUE_TOL,
};
pub use weights::{assign_weights, reweight};

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

/// Absolute tolerance for the per-node in/out weight-sum equality.
pub const BALANCE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("node count must be a power of two with n >= 2, got {0}")]
    NotPowerOfTwo(usize),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("connectivity not achieved after {attempts} attempts ({detail})")]
    ConnectivityRetries { attempts: u32, detail: String },
    #[error("self-link at node {0}")]
    SelfLink(usize),
    #[error("link ({from}, {to}) has non-positive weight {weight}")]
    NonPositiveWeight { from: usize, to: usize, weight: f64 },
    #[error("duplicate link ({from}, {to})")]
    DuplicateLink { from: usize, to: usize },
    #[error("link endpoint {node} out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("bidirectional graph is missing the reverse of link ({from}, {to})")]
    MissingReverse { from: usize, to: usize },
    #[error("graph is not strongly connected")]
    NotConnected,
    #[error("not weight-balanced: node {node} imbalance {imbalance:e} exceeds {tol:e}")]
    NotWeightBalanced { node: usize, imbalance: f64, tol: f64 },
    #[error("link ({from}, {to}) does not exist")]
    NoSuchLink { from: usize, to: usize },
    #[error("removing link ({from}, {to}) disconnects the graph")]
    WouldDisconnect { from: usize, to: usize },
    #[error("uniform weights cannot balance node {node}: in-degree {in_degree} != out-degree {out_degree}")]
    UnbalancedDegrees { node: usize, in_degree: usize, out_degree: usize },
    #[error("edge list parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One directed weighted link; `from` transmits, `to` receives and weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub from: usize,
    pub to: usize,
    pub weight: f64,
}

impl Link {
    pub fn new(from: usize, to: usize, weight: f64) -> Self {
        Self { from, to, weight }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    n: usize,
    links: Vec<Link>,
    directed: bool,
}

impl WeightedDigraph {
    /// Builds and fully validates a graph (range, self-links, duplicates,
    /// positive weights, strong connectivity, weight balance).
    pub fn new(n: usize, links: Vec<Link>, directed: bool) -> Result<Self, GraphError> {
        let g = Self { n, links, directed };
        g.validate()?;
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn link_weight(&self, from: usize, to: usize) -> Option<f64> {
        self.links
            .iter()
            .find(|l| l.from == from && l.to == to)
            .map(|l| l.weight)
    }

    /// Per-node sum of incoming link weights.
    pub fn in_weight_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n];
        for l in &self.links {
            sums[l.to] += l.weight;
        }
        sums
    }

    /// Per-node sum of outgoing link weights.
    pub fn out_weight_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n];
        for l in &self.links {
            sums[l.from] += l.weight;
        }
        sums
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for l in &self.links {
            deg[l.to] += 1;
        }
        deg
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for l in &self.links {
            deg[l.from] += 1;
        }
        deg
    }

    /// Incoming adjacency: for each node `i`, the list of `(sender j, a_ij)`.
    pub fn in_neighbors(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for l in &self.links {
            adj[l.to].push((l.from, l.weight));
        }
        adj
    }

    /// Largest absolute per-node difference between in- and out-weight sums.
    pub fn balance_residual(&self) -> f64 {
        let ins = self.in_weight_sums();
        let outs = self.out_weight_sums();
        ins.iter()
            .zip(&outs)
            .map(|(i, o)| (i - o).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_weight_balanced(&self, tol: f64) -> bool {
        self.balance_residual() <= tol
    }

    /// Strong connectivity via forward and reverse reachability from node 0.
    pub fn is_strongly_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut fwd = vec![Vec::new(); self.n];
        let mut rev = vec![Vec::new(); self.n];
        for l in &self.links {
            fwd[l.from].push(l.to);
            rev[l.to].push(l.from);
        }
        reaches_all(&fwd, self.n) && reaches_all(&rev, self.n)
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.n == 0 {
            return Err(GraphError::InvalidParameter {
                name: "n",
                reason: "node count must be positive".into(),
            });
        }
        let mut seen = std::collections::HashSet::with_capacity(self.links.len());
        for l in &self.links {
            for node in [l.from, l.to] {
                if node >= self.n {
                    return Err(GraphError::NodeOutOfRange { node, n: self.n });
                }
            }
            if l.from == l.to {
                return Err(GraphError::SelfLink(l.from));
            }
            if !(l.weight.is_finite() && l.weight > 0.0) {
                return Err(GraphError::NonPositiveWeight {
                    from: l.from,
                    to: l.to,
                    weight: l.weight,
                });
            }
            if !seen.insert((l.from, l.to)) {
                return Err(GraphError::DuplicateLink { from: l.from, to: l.to });
            }
        }
        if !self.directed {
            for l in &self.links {
                if !seen.contains(&(l.to, l.from)) {
                    return Err(GraphError::MissingReverse { from: l.from, to: l.to });
                }
            }
        }
        if !self.is_strongly_connected() {
            return Err(GraphError::NotConnected);
        }
        let ins = self.in_weight_sums();
        let outs = self.out_weight_sums();
        for (node, (i, o)) in ins.iter().zip(&outs).enumerate() {
            let imbalance = (i - o).abs();
            if imbalance > BALANCE_TOL {
                return Err(GraphError::NotWeightBalanced {
                    node,
                    imbalance,
                    tol: BALANCE_TOL,
                });
            }
        }
        Ok(())
    }

    /// Removes the link `(from, to)` together with its reverse, modeling the
    /// packet-drop rule where both directions of a failed channel are taken
    /// down so the network stays weight-balanced. The result is re-validated;
    /// disconnection or a balance violation rejects the removal.
    pub fn drop_link(&self, from: usize, to: usize) -> Result<Self, GraphError> {
        if self.link_weight(from, to).is_none() {
            return Err(GraphError::NoSuchLink { from, to });
        }
        let links: Vec<Link> = self
            .links
            .iter()
            .filter(|l| !((l.from == from && l.to == to) || (l.from == to && l.to == from)))
            .copied()
            .collect();
        let candidate = Self {
            n: self.n,
            links,
            directed: self.directed,
        };
        match candidate.validate() {
            Ok(()) => Ok(candidate),
            Err(GraphError::NotConnected) => Err(GraphError::WouldDisconnect { from, to }),
            Err(e) => Err(e),
        }
    }

    /// Plain-text edge list: header `n <count> directed <0|1>`, then one
    /// `i j w` triple per line with 17 significant digits.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n {} directed {}", self.n, u8::from(self.directed));
        for l in &self.links {
            let _ = writeln!(s, "{} {} {:.16e}", l.from, l.to, l.weight);
        }
        s
    }

    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            reason: "empty edge list".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "n" || fields[2] != "directed" {
            return Err(GraphError::Parse {
                line: 1,
                reason: format!("expected `n <count> directed <0|1>`, got `{header}`"),
            });
        }
        let n: usize = fields[1].parse().map_err(|e| GraphError::Parse {
            line: 1,
            reason: format!("bad node count: {e}"),
        })?;
        let directed = match fields[3] {
            "0" => false,
            "1" => true,
            other => {
                return Err(GraphError::Parse {
                    line: 1,
                    reason: format!("directed flag must be 0 or 1, got `{other}`"),
                })
            }
        };
        let mut links = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(GraphError::Parse {
                    line: idx + 1,
                    reason: format!("expected `i j w`, got `{line}`"),
                });
            }
            let parse = |s: &str, what: &str| -> Result<usize, GraphError> {
                s.parse().map_err(|e| GraphError::Parse {
                    line: idx + 1,
                    reason: format!("bad {what}: {e}"),
                })
            };
            let from = parse(parts[0], "source node")?;
            let to = parse(parts[1], "target node")?;
            let weight: f64 = parts[2].parse().map_err(|e| GraphError::Parse {
                line: idx + 1,
                reason: format!("bad weight: {e}"),
            })?;
            links.push(Link { from, to, weight });
        }
        Self::new(n, links, directed)
    }

    pub fn write_edge_list(&self, path: &Path) -> Result<(), GraphError> {
        std::fs::write(path, self.to_edge_list())?;
        Ok(())
    }

    pub fn read_edge_list(path: &Path) -> Result<Self, GraphError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_edge_list(&text)
    }
}

fn reaches_all(adj: &[Vec<usize>], n: usize) -> bool {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}

/// Free-function form of the balance check.
pub fn is_weight_balanced(g: &WeightedDigraph, tol: f64) -> bool {
    g.is_weight_balanced(tol)
}
