use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::rng::{exponential, RngSeed};

/// Disjoint clusters with a certifying BFS tree per cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterPartition {
    /// Cluster index of every vertex.
    pub cluster_of: Vec<usize>,
    /// Center vertex of every cluster.
    pub centers: Vec<usize>,
    /// Tree edges of every cluster, as edge ids of the input adjacency.
    pub trees: Vec<Vec<usize>>,
    /// Hop diameter of every cluster tree.
    pub diameters: Vec<usize>,
}

impl ClusterPartition {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn separates(&self, u: usize, v: usize) -> bool {
        self.cluster_of[u] != self.cluster_of[v]
    }

    pub fn max_diameter(&self) -> usize {
        self.diameters.iter().copied().max().unwrap_or(0)
    }
}

/// Largest shift kept, `c0 ln n / β`; longer draws are resampled. A vertex at
/// hop distance `h` from its center satisfies `h ≤ δ_center`.
pub fn shift_cap(n: usize, beta: f64, c0: f64) -> f64 {
    c0 * (n.max(2) as f64).ln() / beta
}

/// Diameter every cluster tree is expected to respect: `c0 ln n / β`.
pub fn diameter_bound(n: usize, beta: f64, c0: f64) -> f64 {
    shift_cap(n, beta, c0)
}

#[derive(Clone, Copy)]
struct Key {
    value: f64,
    center: usize,
    vertex: usize,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .value
            .total_cmp(&self.value)
            .then(other.center.cmp(&self.center))
            .then(other.vertex.cmp(&self.vertex))
    }
}

fn better(a: (f64, usize), b: (f64, usize)) -> bool {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)) == Ordering::Less
}

/// Exponential start time clustering of an unweighted graph given by
/// `adj[v] = [(neighbor, edge id)]`.
///
/// Every vertex `u` draws `δ_u ~ Exp(β)`; `v` joins the center minimizing
/// `(hop(u, v) − δ_u, u)`. Parent pointers of the winning sweep form the trees.
pub fn est_cluster(adj: &[Vec<(usize, usize)>], beta: f64, c0: f64, seed: RngSeed) -> ClusterPartition {
    let n = adj.len();
    let cap = shift_cap(n, beta, c0);
    let mut rng = seed.rng();
    let shifts: Vec<f64> = (0..n)
        .map(|_| loop {
            let d = exponential(&mut rng, beta);
            if d <= cap {
                break d;
            }
        })
        .collect();

    let mut best: Vec<(f64, usize)> = (0..n).map(|v| (-shifts[v], v)).collect();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap: BinaryHeap<Key> = (0..n).map(|v| Key { value: -shifts[v], center: v, vertex: v }).collect();
    while let Some(Key { value, center, vertex }) = heap.pop() {
        if done[vertex] || (value, center) != best[vertex] {
            continue;
        }
        done[vertex] = true;
        for &(w, e) in &adj[vertex] {
            let cand = (value + 1.0, center);
            if !done[w] && better(cand, best[w]) {
                best[w] = cand;
                parent[w] = Some(e);
                heap.push(Key { value: cand.0, center, vertex: w });
            }
        }
    }

    let mut index = vec![usize::MAX; n];
    let mut centers = Vec::new();
    let mut cluster_of = vec![0; n];
    for v in 0..n {
        let c = best[v].1;
        if index[c] == usize::MAX {
            index[c] = centers.len();
            centers.push(c);
        }
        cluster_of[v] = index[c];
    }
    let mut trees = vec![Vec::new(); centers.len()];
    for v in 0..n {
        if let Some(e) = parent[v] {
            trees[cluster_of[v]].push(e);
        }
    }
    let diameters = trees.iter().zip(&centers).map(|(t, &c)| tree_diameter(adj, t, c)).collect();
    ClusterPartition { cluster_of, centers, trees, diameters }
}

/// Hop diameter of the tree formed by `edges` containing `root`.
fn tree_diameter(adj: &[Vec<(usize, usize)>], edges: &[usize], root: usize) -> usize {
    if edges.is_empty() {
        return 0;
    }
    let mut in_tree = std::collections::HashSet::with_capacity(edges.len());
    in_tree.extend(edges.iter().copied());
    let far = |start: usize| {
        let mut dist = std::collections::HashMap::new();
        dist.insert(start, 0usize);
        let mut queue = VecDeque::from([start]);
        let mut last = (start, 0);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            if d > last.1 {
                last = (v, d);
            }
            for &(w, e) in &adj[v] {
                if in_tree.contains(&e) && !dist.contains_key(&w) {
                    dist.insert(w, d + 1);
                    queue.push_back(w);
                }
            }
        }
        last
    };
    let (a, _) = far(root);
    far(a).1
}
