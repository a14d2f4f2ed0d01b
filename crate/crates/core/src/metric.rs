//! Finite metric spaces.
//!
//! Three representations are supported: an explicit distance matrix, a
//! weighted undirected graph whose shortest-path distances form the metric,
//! and coordinate rows under a norm. Graph weights are rationals; shortest
//! paths are computed in scaled integer arithmetic and only converted to
//! `f64` once, so integral fixtures stay exact.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Index of a point in a [`MetricSpace`].
pub type PointId = usize;

/// A metric distance. Comparisons go through [`TOLERANCE`].
pub type Distance = f64;

pub type Rational = Ratio<i64>;

/// Slack used by every distance comparison (`a <= b` is `a <= b + TOLERANCE`).
pub const TOLERANCE: f64 = 1e-9;

/// Graphs up to this many nodes use Floyd–Warshall; larger ones run one
/// Dijkstra per source.
const FLOYD_WARSHALL_LIMIT: usize = 512;

#[inline]
pub fn approx_le(a: Distance, b: Distance) -> bool {
    a <= b + TOLERANCE
}

#[inline]
pub fn approx_eq(a: Distance, b: Distance) -> bool {
    (a - b).abs() <= TOLERANCE || a == b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    Linf,
}

/// An undirected weighted edge `u -- v` of length `weight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: impl Into<Rational>) -> Self {
        Edge { u, v, weight: weight.into() }
    }
}

/// Serialized form of a metric; kept alongside the computed table so that
/// instance files round-trip exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MetricDescriptor {
    Matrix {
        d: Vec<Vec<f64>>,
    },
    Graph {
        nodes: usize,
        edges: Vec<Edge>,
    },
    Points {
        dim: usize,
        coords: Vec<Vec<f64>>,
        norm: Norm,
    },
}

#[derive(Debug, Clone)]
enum Table {
    Dense(Vec<f64>),
    Coords,
}

/// An immutable finite metric space.
#[derive(Debug, Clone)]
pub struct MetricSpace {
    descriptor: MetricDescriptor,
    len: usize,
    table: Table,
}

impl PartialEq for MetricSpace {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor == other.descriptor
    }
}

impl MetricSpace {
    pub fn new(descriptor: MetricDescriptor) -> Result<Self> {
        match &descriptor {
            MetricDescriptor::Matrix { d } => {
                let table = validate_matrix(d)?;
                Ok(MetricSpace { len: d.len(), table: Table::Dense(table), descriptor })
            }
            MetricDescriptor::Graph { nodes, edges } => {
                let table = graph_distances(*nodes, edges)?;
                Ok(MetricSpace { len: *nodes, table: Table::Dense(table), descriptor })
            }
            MetricDescriptor::Points { dim, coords, .. } => {
                if *dim == 0 {
                    return Err(Error::InvalidMetric("dimension must be positive".into()));
                }
                for (row, c) in coords.iter().enumerate() {
                    if c.len() != *dim {
                        return Err(Error::InvalidMetric(format!(
                            "coordinate row {row} has {} entries, expected {dim}",
                            c.len()
                        )));
                    }
                    if c.iter().any(|x| !x.is_finite()) {
                        return Err(Error::InvalidMetric(format!("coordinate row {row} is not finite")));
                    }
                }
                Ok(MetricSpace { len: coords.len(), table: Table::Coords, descriptor })
            }
        }
    }

    pub fn from_matrix(d: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(MetricDescriptor::Matrix { d })
    }

    pub fn from_graph(nodes: usize, edges: Vec<Edge>) -> Result<Self> {
        Self::new(MetricDescriptor::Graph { nodes, edges })
    }

    pub fn from_points(coords: Vec<Vec<f64>>, norm: Norm) -> Result<Self> {
        let dim = coords.first().map_or(1, Vec::len);
        Self::new(MetricDescriptor::Points { dim, coords, norm })
    }

    pub fn descriptor(&self) -> &MetricDescriptor {
        &self.descriptor
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn check_point(&self, id: PointId) -> Result<()> {
        if id < self.len {
            Ok(())
        } else {
            Err(Error::InvalidPoint { id, len: self.len })
        }
    }

    /// Distance between two points. Panics if either id is out of range.
    #[inline]
    pub fn dist(&self, a: PointId, b: PointId) -> Distance {
        match &self.table {
            Table::Dense(t) => t[a * self.len + b],
            Table::Coords => {
                let MetricDescriptor::Points { coords, norm, .. } = &self.descriptor else {
                    unreachable!("coordinate table without coordinates")
                };
                norm_distance(*norm, &coords[a], &coords[b])
            }
        }
    }

    /// The `q`-th smallest distance from `a` to `targets`, counted with
    /// multiplicity; `q = 1` is the distance to the nearest target.
    pub fn dist_q(&self, a: PointId, targets: &[PointId], q: usize) -> Result<Distance> {
        if q == 0 || q > targets.len() {
            return Err(Error::InsufficientTargets { q, available: targets.len() });
        }
        let mut ds: Vec<f64> = targets.iter().map(|&t| self.dist(a, t)).collect();
        Ok(kth_smallest(&mut ds, q))
    }

    /// Members of `universe` within distance `r` of `a`, in universe order.
    pub fn ball(&self, a: PointId, r: Distance, universe: &[PointId]) -> Vec<PointId> {
        universe.iter().copied().filter(|&x| approx_le(self.dist(a, x), r)).collect()
    }

    /// Smallest radius around `a` whose ball holds `count` members of
    /// `agents` (with multiplicity). `a` is expected to be one of them.
    pub fn neighborhood_radius(&self, a: PointId, agents: &[PointId], count: usize) -> Result<Distance> {
        self.dist_q(a, agents, count)
    }
}

/// `q`-th smallest (1-based) of `values`; reorders the slice.
pub(crate) fn kth_smallest(values: &mut [f64], q: usize) -> f64 {
    let (_, v, _) = values.select_nth_unstable_by(q - 1, f64::total_cmp);
    *v
}

fn norm_distance(norm: Norm, a: &[f64], b: &[f64]) -> f64 {
    let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
    match norm {
        Norm::L1 => diffs.sum(),
        Norm::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
        Norm::Linf => diffs.fold(0.0, f64::max),
    }
}

fn validate_matrix(d: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = d.len();
    let mut table = Vec::with_capacity(n * n);
    for (i, row) in d.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidMetric(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        for (j, &x) in row.iter().enumerate() {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::InvalidMetric(format!("d[{i}][{j}] = {x} is not a finite non-negative value")));
            }
        }
        if row[i] != 0.0 {
            return Err(Error::InvalidMetric(format!("d[{i}][{i}] = {} is not zero", row[i])));
        }
        table.extend_from_slice(row);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if table[i * n + j] != table[j * n + i] {
                return Err(Error::InvalidMetric(format!("d[{i}][{j}] != d[{j}][{i}]")));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let dxy = table[x * n + y];
            for z in 0..n {
                if table[x * n + z] > dxy + table[y * n + z] + TOLERANCE {
                    return Err(Error::InvalidMetric(format!(
                        "triangle inequality fails: d({x},{z}) > d({x},{y}) + d({y},{z})"
                    )));
                }
            }
        }
    }
    Ok(table)
}

fn graph_distances(nodes: usize, edges: &[Edge]) -> Result<Vec<f64>> {
    let overflow = || Error::Overflow("graph edge weights".into());
    let mut scale: i64 = 1;
    for e in edges {
        if e.u >= nodes || e.v >= nodes {
            return Err(Error::InvalidMetric(format!("edge {}--{} references a missing node", e.u, e.v)));
        }
        if *e.weight.numer() < 0 {
            return Err(Error::InvalidMetric(format!("edge {}--{} has negative weight", e.u, e.v)));
        }
        let l = (scale as i128).lcm(&(*e.weight.denom() as i128));
        scale = i64::try_from(l).map_err(|_| overflow())?;
    }
    // Adjacency with integer weights in units of 1/scale; parallel edges keep the lightest.
    let mut adj: Vec<Vec<(usize, u128)>> = vec![Vec::new(); nodes];
    for e in edges {
        let w = (*e.weight.numer() as i128) * (scale as i128 / *e.weight.denom() as i128);
        let w = u128::try_from(w).map_err(|_| overflow())?;
        adj[e.u].push((e.v, w));
        adj[e.v].push((e.u, w));
    }

    let int_dist = if nodes <= FLOYD_WARSHALL_LIMIT {
        floyd_warshall(nodes, &adj)?
    } else {
        let mut all = Vec::with_capacity(nodes * nodes);
        for s in 0..nodes {
            all.extend(dijkstra(nodes, &adj, s)?);
        }
        all
    };

    let mut table = Vec::with_capacity(nodes * nodes);
    for (idx, d) in int_dist.into_iter().enumerate() {
        match d {
            Some(v) => table.push(v as f64 / scale as f64),
            None => {
                return Err(Error::MetricUndefined(format!(
                    "graph is disconnected: no path between {} and {}",
                    idx / nodes,
                    idx % nodes
                )))
            }
        }
    }
    Ok(table)
}

fn floyd_warshall(n: usize, adj: &[Vec<(usize, u128)>]) -> Result<Vec<Option<u128>>> {
    let mut d: Vec<Option<u128>> = vec![None; n * n];
    for (u, nbrs) in adj.iter().enumerate() {
        d[u * n + u] = Some(0);
        for &(v, w) in nbrs {
            let cell = &mut d[u * n + v];
            if cell.map_or(true, |old| w < old) {
                *cell = Some(w);
            }
        }
    }
    for m in 0..n {
        for i in 0..n {
            let Some(dim) = d[i * n + m] else { continue };
            for j in 0..n {
                let Some(dmj) = d[m * n + j] else { continue };
                let via = dim.checked_add(dmj).ok_or_else(|| Error::Overflow("shortest path length".into()))?;
                let cell = &mut d[i * n + j];
                if cell.map_or(true, |old| via < old) {
                    *cell = Some(via);
                }
            }
        }
    }
    Ok(d)
}

fn dijkstra(n: usize, adj: &[Vec<(usize, u128)>], source: usize) -> Result<Vec<Option<u128>>> {
    let mut dist: Vec<Option<u128>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(0);
    heap.push(Reverse((0u128, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u].is_some_and(|best| d > best) {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d.checked_add(w).ok_or_else(|| Error::Overflow("shortest path length".into()))?;
            if dist[v].map_or(true, |old| nd < old) {
                dist[v] = Some(nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    Ok(dist)
}

// Edges serialize as `[u, v, w]` where `w` is an integer or a `[num, den]` pair.

impl Serialize for Edge {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(3))?;
        seq.serialize_element(&self.u)?;
        seq.serialize_element(&self.v)?;
        if *self.weight.denom() == 1 {
            seq.serialize_element(self.weight.numer())?;
        } else {
            seq.serialize_element(&[*self.weight.numer(), *self.weight.denom()])?;
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightRepr {
    Int(i64),
    Pair([i64; 2]),
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EdgeVisitor;

        impl<'de> Visitor<'de> for EdgeVisitor {
            type Value = Edge;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an edge [u, v, w] with w an integer or [num, den]")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Edge, A::Error> {
                let u: usize = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let v: usize = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let w: WeightRepr = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(2, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(4, &self));
                }
                let weight = match w {
                    WeightRepr::Int(x) => Rational::from_integer(x),
                    WeightRepr::Pair([_, 0]) => return Err(de::Error::custom("edge weight has zero denominator")),
                    WeightRepr::Pair([num, den]) => Rational::new(num, den),
                };
                Ok(Edge { u, v, weight })
            }
        }

        deserializer.deserialize_seq(EdgeVisitor)
    }
}
