//! Independent oracles shared by the integration tests. Nothing here calls
//! into the measuring code of the library.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use resparse::{Edge, WeightedGraph};
use sha2::{Digest, Sha256};

pub fn dense_laplacian(n: usize, edges: &[Edge]) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(n, n);
    for e in edges {
        l[(e.u, e.u)] += e.w;
        l[(e.v, e.v)] += e.w;
        l[(e.u, e.v)] -= e.w;
        l[(e.v, e.u)] -= e.w;
    }
    l
}

/// `max |λ − 1|` over the generalized eigenvalues of `(B, A)` on the range
/// of `A`, via `A^{+/2} B A^{+/2}`. Infinite if `B` leaks outside that range.
pub fn relative_epsilon(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let eig = SymmetricEigen::new(a.clone());
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..a.nrows()).filter(|&i| eig.eigenvalues[i] > 1e-9 * top.max(1e-300)).collect();
    let mut w = DMatrix::zeros(a.nrows(), keep.len());
    for (c, &i) in keep.iter().enumerate() {
        let s = 1.0 / eig.eigenvalues[i].sqrt();
        for r in 0..a.nrows() {
            w[(r, c)] = eig.eigenvectors[(r, i)] * s;
        }
    }
    // mass of B outside range(A)
    let mut proj = DMatrix::identity(a.nrows(), a.nrows());
    for &i in &keep {
        let v = eig.eigenvectors.column(i);
        proj -= v * v.transpose();
    }
    let outside = (&proj * b * &proj).norm();
    if outside > 1e-8 * b.norm().max(1.0) {
        return f64::INFINITY;
    }
    let m = w.transpose() * b * &w;
    let m = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(m).eigenvalues.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max)
}

pub fn graph_epsilon(g: &WeightedGraph, h: &WeightedGraph) -> f64 {
    relative_epsilon(&dense_laplacian(g.n(), g.edges()), &dense_laplacian(h.n(), h.edges()))
}

pub fn component_count(n: usize, edges: &[Edge]) -> usize {
    let mut seen = vec![false; n];
    let adj = adjacency(n, edges);
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    count
}

pub fn adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        adj[e.u].push((e.v, i));
        adj[e.v].push((e.u, i));
    }
    adj
}

/// Bridges by deletion: an edge is a bridge iff removing it adds a component.
pub fn bridges_by_deletion(g: &WeightedGraph) -> Vec<bool> {
    let base = component_count(g.n(), g.edges());
    (0..g.m())
        .map(|i| {
            let rest: Vec<Edge> = g.edges().iter().enumerate().filter(|(j, _)| *j != i).map(|(_, e)| *e).collect();
            component_count(g.n(), &rest) > base
        })
        .collect()
}

/// Multiset containment of unordered endpoint pairs.
pub fn edges_within(g: &WeightedGraph, h: &WeightedGraph) -> bool {
    let key = |e: &Edge| (e.u.min(e.v), e.u.max(e.v));
    let mut avail: HashMap<(usize, usize), i64> = HashMap::new();
    for e in g.edges() {
        *avail.entry(key(e)).or_default() += 1;
    }
    for e in h.edges() {
        let c = avail.entry(key(e)).or_default();
        *c -= 1;
        if *c < 0 {
            return false;
        }
    }
    true
}

/// Whether the edges form a forest, by path-compressed union-find.
pub fn is_forest(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (u, v) in edges {
        let (a, b) = (root(&mut parent, u), root(&mut parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Hop distances from `s` in the graph on `n` vertices with the given edges.
pub fn bfs(n: usize, edges: &[(usize, usize)], s: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut d = vec![usize::MAX; n];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if d[w] == usize::MAX {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

pub fn sha256_file(path: &Path) -> String {
    let bytes = std::fs::read(path).expect("read output");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes one line to stderr outside the test harness capture.
pub fn report(line: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stderr(), "{line}");
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}
