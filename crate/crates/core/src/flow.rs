//! Dinic max-flow on real capacities.

use std::collections::VecDeque;

const EPS: f64 = 1e-15;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: f64,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i64>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        Self { edges: Vec::new(), adj: vec![Vec::new(); n], level: vec![0; n], iter: vec![0; n] }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: f64) {
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge { to: from, cap: 0.0 });
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.adj[v] {
                let Edge { to, cap } = self.edges[e];
                if cap > EPS && self.level[to] < 0 {
                    self.level[to] = self.level[v] + 1;
                    queue.push_back(to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, pushed: f64) -> f64 {
        if v == t {
            return pushed;
        }
        while self.iter[v] < self.adj[v].len() {
            let e = self.adj[v][self.iter[v]];
            let Edge { to, cap } = self.edges[e];
            if cap > EPS && self.level[v] < self.level[to] {
                let d = self.dfs(to, t, pushed.min(cap));
                if d > EPS {
                    self.edges[e].cap -= d;
                    self.edges[e ^ 1].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0.0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut flow = 0.0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, f64::INFINITY);
                if f <= EPS {
                    break;
                }
                flow += f;
            }
        }
    }
}

/// Largest mass a coupling of `left` and `right` can place on `allowed` pairs.
pub fn max_coupled_mass(left: &[f64], right: &[f64], allowed: impl Fn(usize, usize) -> bool) -> f64 {
    max_coupling(left, right, allowed).0
}

/// [`max_coupled_mass`] together with the optimal plan as (i, j, mass).
pub fn max_coupling(
    left: &[f64],
    right: &[f64],
    allowed: impl Fn(usize, usize) -> bool,
) -> (f64, Vec<(usize, usize, f64)>) {
    let (m, k) = (left.len(), right.len());
    let (s, t) = (m + k, m + k + 1);
    let mut net = FlowNetwork::new(m + k + 2);
    for (i, &w) in left.iter().enumerate() {
        net.add_edge(s, i, w);
    }
    for (j, &w) in right.iter().enumerate() {
        net.add_edge(m + j, t, w);
    }
    let mut middle = Vec::new();
    for i in 0..m {
        for j in 0..k {
            if allowed(i, j) {
                middle.push((i, j, net.edges.len()));
                net.add_edge(i, m + j, 2.0);
            }
        }
    }
    let total = net.max_flow(s, t);
    let plan = middle
        .into_iter()
        .map(|(i, j, e)| (i, j, 2.0 - net.edges[e].cap))
        .filter(|&(_, _, f)| f > EPS)
        .collect();
    (total, plan)
}
