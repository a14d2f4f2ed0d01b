//! Deterministic random instances for property tests, benchmarks and the
//! `gen` command.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{CandidateSet, Instance};
use crate::io::InstanceFile;
use crate::metric::{Edge, MetricDescriptor, Norm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Clustered integer points in the plane.
    Euclidean,
    /// Connected graph with small integer edge lengths.
    Graph,
    /// Two co-located blocks of `⌈n/k⌉` and `n − ⌈n/k⌉` agents at distance 1.
    Blocks,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Family::Euclidean),
            "graph" => Ok(Family::Graph),
            "blocks" => Ok(Family::Blocks),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// How candidates relate to agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateMode {
    /// `N = C`: the points are exactly the agents.
    Agents,
    /// `N ⊆ C`: extra candidate-only points.
    Superset,
    /// Candidates are a random subset of agent and extra points.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub mode: CandidateMode,
    /// Candidate-only points added in `Superset` / `Mixed` mode.
    pub extra: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, k: usize, seed: u64) -> Self {
        GenSpec { family, n, k, mode: CandidateMode::Agents, extra: 0, seed }
    }
}

/// Builds the instance described by `spec`; identical specs give identical files.
pub fn generate(spec: &GenSpec) -> Result<InstanceFile> {
    if spec.n == 0 || spec.k == 0 {
        return Err(Error::InvalidInstance("n and k must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let extra = if spec.mode == CandidateMode::Agents || spec.family == Family::Blocks { 0 } else { spec.extra };
    let points = spec.n + extra;
    let metric = match spec.family {
        Family::Euclidean => euclidean(&mut rng, points),
        Family::Graph => graph(&mut rng, points),
        Family::Blocks => blocks(spec.n, spec.k),
    };
    let agents: Vec<usize> = (0..spec.n).collect();
    let candidates = if spec.mode == CandidateMode::Mixed {
        let size = rng.gen_range(1..=points);
        let mut ids: Vec<usize> = (0..points).collect();
        ids.shuffle(&mut rng);
        ids.truncate(size);
        CandidateSet::List(ids)
    } else {
        CandidateSet::All
    };
    Ok(InstanceFile { metric, agents, candidates, k: spec.k, labels: None })
}

fn euclidean(rng: &mut ChaCha8Rng, points: usize) -> MetricDescriptor {
    let clusters: Vec<(i32, i32)> = (0..rng.gen_range(1..=4)).map(|_| (rng.gen_range(0..60), rng.gen_range(0..60))).collect();
    let spread = rng.gen_range(0..=6);
    let coords = (0..points)
        .map(|_| {
            let (cx, cy) = clusters[rng.gen_range(0..clusters.len())];
            let dx = rng.gen_range(-spread..=spread);
            let dy = rng.gen_range(-spread..=spread);
            vec![f64::from(cx + dx), f64::from(cy + dy)]
        })
        .collect();
    let norm = [Norm::L2, Norm::L1, Norm::Linf][rng.gen_range(0..3)];
    MetricDescriptor::Points { dim: 2, coords, norm }
}

fn graph(rng: &mut ChaCha8Rng, nodes: usize) -> MetricDescriptor {
    let mut edges = Vec::new();
    // random spanning tree, then a few chords
    for v in 1..nodes {
        let u = rng.gen_range(0..v);
        edges.push(Edge::new(u, v, rng.gen_range(0i64..=5)));
    }
    for _ in 0..rng.gen_range(0..=nodes) {
        let u = rng.gen_range(0..nodes);
        let v = rng.gen_range(0..nodes);
        if u != v {
            edges.push(Edge::new(u, v, rng.gen_range(1i64..=8)));
        }
    }
    MetricDescriptor::Graph { nodes, edges }
}

fn blocks(n: usize, k: usize) -> MetricDescriptor {
    let first = n.div_ceil(k);
    let d = (0..n)
        .map(|i| (0..n).map(|j| if (i < first) == (j < first) { 0.0 } else { 1.0 }).collect())
        .collect();
    MetricDescriptor::Matrix { d }
}

/// A varied small instance for property suites: family, candidate mode, `n`,
/// `k` and the number of candidates are all drawn from `seed`.
pub fn corpus_instance(seed: u64, max_n: usize, max_candidates: usize, max_k: usize) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);
    let n = rng.gen_range(2..=max_n);
    let k = rng.gen_range(1..=max_k.min(n + 1));
    let family = if rng.gen_bool(0.5) { Family::Euclidean } else { Family::Graph };
    let mode = [CandidateMode::Agents, CandidateMode::Superset, CandidateMode::Mixed][rng.gen_range(0..3)];
    let extra = if max_candidates > n { rng.gen_range(0..=(max_candidates - n)) } else { 0 };
    let mut file = generate(&GenSpec { family, n, k, mode, extra, seed: rng.gen() })?;
    if let CandidateSet::List(list) = &mut file.candidates {
        list.truncate(max_candidates);
    }
    file.to_instance()
}
