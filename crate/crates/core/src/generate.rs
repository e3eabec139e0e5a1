//! Random and deterministic graph generators.
//!
//! All generators are pure functions of their parameters and the RNG
//! state they are handed.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{rng_from_seed, WalkRng};

/// Whole-realization retry cap for configuration-model matchings.
pub const CONFIG_RETRY_CAP: u64 = 1_000_000;
/// Resample cap for the `require-connected` policy.
pub const CONNECTED_RESAMPLE_CAP: u64 = 10_000;

/// Erdős–Rényi G(n, p): every pair `(u, v)`, `u < v`, visited in
/// lexicographic order and kept when a uniform draw falls below `p`.
pub fn generate_er<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(Error::param(format!("ER graph needs n >= 2, got {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!(
            "ER probability must lie in [0, 1], got {p}"
        )));
    }
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                g.insert_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// How stubs are paired in the configuration model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StubMatching {
    /// Shuffle all stubs, pair them off, and discard the whole matching if
    /// it contains a self-loop or multi-edge. Exactly uniform over simple
    /// k-regular graphs but only feasible for very small `k`.
    WholeRejection,
    /// Join random pairs of free stubs one at a time, refusing pairs that
    /// would create a loop or a multi-edge, restarting from scratch when no
    /// admissible pair is left.
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigOptions {
    pub matching: StubMatching,
    /// Degree-preserving edge interchanges applied after matching, as a
    /// multiple of the edge count.
    pub mixing_swaps_per_edge: usize,
    pub retry_cap: u64,
}

impl Default for ConfigOptions {
    fn default() -> Self {
        ConfigOptions {
            matching: StubMatching::Sequential,
            mixing_swaps_per_edge: 10,
            retry_cap: CONFIG_RETRY_CAP,
        }
    }
}

/// Random k-regular simple graph on `n` nodes with the default options.
pub fn generate_configuration<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Graph> {
    generate_configuration_with(n, k, &ConfigOptions::default(), rng)
}

pub fn generate_configuration_with<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    opts: &ConfigOptions,
    rng: &mut R,
) -> Result<Graph> {
    check_configuration(n, k)?;
    // Dense regular graphs are drawn as complements of sparse ones; the
    // complement map is a bijection between k- and (n-1-k)-regular graphs.
    if opts.matching == StubMatching::Sequential && 2 * k > n - 1 {
        let sparse = generate_configuration_with(n, n - 1 - k, opts, rng)?;
        return Ok(sparse.complement());
    }
    if k == 0 {
        return Ok(Graph::empty(n));
    }
    let g = match opts.matching {
        StubMatching::WholeRejection => whole_rejection(n, k, opts.retry_cap, rng)?,
        StubMatching::Sequential => sequential_pairing(n, k, opts.retry_cap, rng)?,
    };
    let swaps = opts.mixing_swaps_per_edge * g.edge_count();
    Ok(randomize_by_edge_interchange(&g, swaps, rng))
}

fn check_configuration(n: usize, k: usize) -> Result<()> {
    if (n * k) % 2 != 0 {
        return Err(Error::param(format!(
            "n·k must be even for a k-regular graph (n={n}, k={k})"
        )));
    }
    if k >= n {
        return Err(Error::param(format!("degree k={k} must be below n={n}")));
    }
    Ok(())
}

fn whole_rejection<R: Rng + ?Sized>(n: usize, k: usize, cap: u64, rng: &mut R) -> Result<Graph> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|u| std::iter::repeat_n(u, k)).collect();
    'attempt: for _ in 0..cap {
        shuffle(&mut stubs, rng);
        let mut g = Graph::empty(n);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !g.insert_edge(u, v) {
                continue 'attempt;
            }
        }
        return Ok(g);
    }
    Err(Error::Generation {
        attempts: cap,
        reason: format!("every stub matching for n={n}, k={k} produced a self-loop or multi-edge"),
    })
}

fn sequential_pairing<R: Rng + ?Sized>(n: usize, k: usize, cap: u64, rng: &mut R) -> Result<Graph> {
    for _ in 0..cap {
        if let Some(g) = try_sequential(n, k, rng) {
            return Ok(g);
        }
    }
    Err(Error::Generation {
        attempts: cap,
        reason: format!("sequential stub pairing for n={n}, k={k} kept getting stuck"),
    })
}

fn try_sequential<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Option<Graph> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|u| std::iter::repeat_n(u, k)).collect();
    let mut g = Graph::empty(n);
    let mut misses = 0usize;
    while !stubs.is_empty() {
        let len = stubs.len();
        let i = rng.gen_range(0..len);
        let mut j = rng.gen_range(0..len - 1);
        if j >= i {
            j += 1;
        }
        let (u, v) = (stubs[i], stubs[j]);
        if u != v && !g.has_edge(u, v) {
            g.insert_edge(u, v);
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            stubs.swap_remove(hi);
            stubs.swap_remove(lo);
            misses = 0;
            continue;
        }
        misses += 1;
        if misses > 64 {
            if !has_admissible_pair(&stubs, &g) {
                return None;
            }
            misses = 0;
        }
    }
    Some(g)
}

fn has_admissible_pair(stubs: &[usize], g: &Graph) -> bool {
    let mut nodes: Vec<usize> = stubs.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    nodes
        .iter()
        .enumerate()
        .any(|(a, &u)| nodes[a + 1..].iter().any(|&v| !g.has_edge(u, v)))
}

/// Degree-preserving randomization by edge interchange.
///
/// Each of the `swaps` proposals picks two distinct edges `(a, b)`,
/// `(c, d)` uniformly (with a random orientation of the second) and
/// rewires them to `(a, d)`, `(c, b)` unless that would create a
/// self-loop or a duplicate edge. Rejected proposals still count.
pub fn randomize_by_edge_interchange<R: Rng + ?Sized>(
    g: &Graph,
    swaps: usize,
    rng: &mut R,
) -> Graph {
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    if edges.len() < 2 || swaps == 0 {
        return g.clone();
    }
    let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();
    let m = edges.len();
    for _ in 0..swaps {
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = edges[i];
        let (c, d) = if rng.gen::<bool>() {
            edges[j]
        } else {
            (edges[j].1, edges[j].0)
        };
        if a == d || c == b {
            continue;
        }
        let e1 = ordered(a, d);
        let e2 = ordered(c, b);
        if present.contains(&e1) || present.contains(&e2) {
            continue;
        }
        present.remove(&edges[i]);
        present.remove(&edges[j]);
        present.insert(e1);
        present.insert(e2);
        edges[i] = e1;
        edges[j] = e2;
    }
    Graph::from_edges(g.node_count(), edges).expect("edge interchange keeps the graph simple")
}

/// Complete graph minus `m` edges chosen uniformly without replacement.
pub fn generate_complete_minus_m<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<Graph> {
    if n < 2 {
        return Err(Error::param(format!(
            "complete-minus-m needs n >= 2, got {n}"
        )));
    }
    let total = n * (n - 1) / 2;
    if m > total {
        return Err(Error::param(format!(
            "cannot remove {m} edges from a complete graph with {total} edges"
        )));
    }
    let mut pairs: Vec<(usize, usize)> = all_pairs(n).collect();
    // Partial Fisher–Yates: the first m slots become the removed set.
    for i in 0..m {
        let j = rng.gen_range(i..total);
        pairs.swap(i, j);
    }
    Graph::from_edges(n, pairs.into_iter().skip(m))
}

pub fn generate_complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::param(format!(
            "complete graph needs n >= 2, got {n}"
        )));
    }
    Graph::from_edges(n, all_pairs(n))
}

pub fn generate_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::param(format!("cycle graph needs n >= 3, got {n}")));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| ((u + 1)..n).map(move |v| (u, v)))
}

fn ordered(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn shuffle<T, R: Rng + ?Sized>(items: &mut [T], rng: &mut R) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// A graph family together with its size parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum GraphModel {
    Er { n: usize, p: f64 },
    Config { n: usize, k: usize },
    CompleteMinusM { n: usize, m: usize },
    Complete { n: usize },
    Cycle { n: usize },
}

impl GraphModel {
    pub fn node_count(&self) -> usize {
        match *self {
            GraphModel::Er { n, .. }
            | GraphModel::Config { n, .. }
            | GraphModel::CompleteMinusM { n, .. }
            | GraphModel::Complete { n }
            | GraphModel::Cycle { n } => n,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GraphModel::Er { .. } => "er",
            GraphModel::Config { .. } => "config",
            GraphModel::CompleteMinusM { .. } => "complete-minus-m",
            GraphModel::Complete { .. } => "complete",
            GraphModel::Cycle { .. } => "cycle",
        }
    }

    /// Checks the family's parameter constraints without drawing anything.
    pub fn validate(&self) -> Result<()> {
        match *self {
            GraphModel::Er { n, p } => {
                if n < 2 {
                    return Err(Error::param(format!("ER graph needs n >= 2, got {n}")));
                }
                if !(p > 0.0 && p <= 1.0) {
                    return Err(Error::param(format!(
                        "ER probability must lie in (0, 1], got {p}"
                    )));
                }
                Ok(())
            }
            GraphModel::Config { n, k } => {
                if k == 0 {
                    return Err(Error::param("configuration degree k must be positive"));
                }
                check_configuration(n, k)
            }
            GraphModel::CompleteMinusM { n, m } => {
                if n < 2 {
                    return Err(Error::param(format!(
                        "complete-minus-m needs n >= 2, got {n}"
                    )));
                }
                if m > n * (n - 1) / 2 {
                    return Err(Error::param(format!(
                        "m={m} exceeds the {} edges of K_{n}",
                        n * (n - 1) / 2
                    )));
                }
                Ok(())
            }
            GraphModel::Complete { n } if n < 2 => Err(Error::param(format!(
                "complete graph needs n >= 2, got {n}"
            ))),
            GraphModel::Cycle { n } if n < 3 => {
                Err(Error::param(format!("cycle graph needs n >= 3, got {n}")))
            }
            _ => Ok(()),
        }
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Graph> {
        self.validate()?;
        match *self {
            GraphModel::Er { n, p } => generate_er(n, p, rng),
            GraphModel::Config { n, k } => generate_configuration(n, k, rng),
            GraphModel::CompleteMinusM { n, m } => generate_complete_minus_m(n, m, rng),
            GraphModel::Complete { n } => generate_complete(n),
            GraphModel::Cycle { n } => generate_cycle(n),
        }
    }

    /// Draws a graph from `seed`, optionally resampling from the same stream
    /// until the graph is connected.
    pub fn sample(&self, seed: u64, policy: ConnectivityPolicy) -> Result<SampledGraph> {
        let mut rng: WalkRng = rng_from_seed(seed);
        let mut resamples = 0u64;
        loop {
            let graph = self.generate(&mut rng)?;
            if policy == ConnectivityPolicy::None || graph.is_connected() {
                return Ok(SampledGraph { graph, resamples });
            }
            resamples += 1;
            if resamples >= CONNECTED_RESAMPLE_CAP {
                return Err(Error::Generation {
                    attempts: resamples,
                    reason: format!("no connected {} graph drawn", self.name()),
                });
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectivityPolicy {
    #[default]
    None,
    RequireConnected,
}

#[derive(Debug, Clone)]
pub struct SampledGraph {
    pub graph: Graph,
    /// Disconnected draws discarded before this one.
    pub resamples: u64,
}
