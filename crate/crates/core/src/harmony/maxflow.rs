//! Dinic max-flow on a sparse directed graph, used for exact binary labeling.

use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Edge {
    to: usize,
    rev: usize,
    cap: f64,
}

#[derive(Clone, Debug)]
pub struct FlowGraph {
    adj: Vec<Vec<Edge>>,
}

// Residual capacities below this are treated as saturated.
const EPS: f64 = 1e-12;

impl FlowGraph {
    pub fn new(nodes: usize) -> Self {
        Self {
            adj: vec![Vec::new(); nodes],
        }
    }

    /// Adds `from -> to` with capacity `cap` and `to -> from` with `rev_cap`.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: f64, rev_cap: f64) {
        let fwd = self.adj[from].len();
        let bwd = self.adj[to].len() + usize::from(from == to);
        self.adj[from].push(Edge { to, rev: bwd, cap });
        self.adj[to].push(Edge {
            to: from,
            rev: fwd,
            cap: rev_cap,
        });
    }

    fn levels(&self, source: usize, sink: usize) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for e in &self.adj[u] {
                if e.cap > EPS && level[e.to] == usize::MAX {
                    level[e.to] = level[u] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        (level[sink] != usize::MAX).then_some(level)
    }

    // Iterative blocking-flow search; recursion would overflow on large grids.
    fn augment(&mut self, source: usize, sink: usize, level: &[usize], next: &mut [usize]) -> f64 {
        let mut path: Vec<(usize, usize)> = Vec::new();
        let mut u = source;
        loop {
            if u == sink {
                let pushed = path
                    .iter()
                    .map(|&(n, i)| self.adj[n][i].cap)
                    .fold(f64::INFINITY, f64::min);
                for &(n, i) in &path {
                    let (to, rev) = (self.adj[n][i].to, self.adj[n][i].rev);
                    self.adj[n][i].cap -= pushed;
                    self.adj[to][rev].cap += pushed;
                }
                return pushed;
            }
            let mut advanced = false;
            while next[u] < self.adj[u].len() {
                let e = &self.adj[u][next[u]];
                if e.cap > EPS && level[e.to] == level[u] + 1 {
                    path.push((u, next[u]));
                    u = e.to;
                    advanced = true;
                    break;
                }
                next[u] += 1;
            }
            if !advanced {
                match path.pop() {
                    Some((prev, _)) => {
                        next[prev] += 1;
                        u = prev;
                    }
                    None => return 0.0,
                }
            }
        }
    }

    /// Runs max-flow and returns the flow value together with the set of
    /// nodes still reachable from `source` in the residual graph.
    pub fn min_cut(&mut self, source: usize, sink: usize) -> (f64, Vec<bool>) {
        let mut total = 0.0;
        while let Some(level) = self.levels(source, sink) {
            let mut next = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.augment(source, sink, &level, &mut next);
                if pushed <= EPS {
                    break;
                }
                total += pushed;
            }
        }
        let mut reach = vec![false; self.adj.len()];
        reach[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for e in &self.adj[u] {
                if e.cap > EPS && !reach[e.to] {
                    reach[e.to] = true;
                    queue.push_back(e.to);
                }
            }
        }
        (total, reach)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_network() {
        // CLRS figure 26.1: max flow 23.
        let mut g = FlowGraph::new(6);
        for (u, v, c) in [
            (0, 1, 16.0),
            (0, 2, 13.0),
            (2, 1, 4.0),
            (1, 3, 12.0),
            (3, 2, 9.0),
            (2, 4, 14.0),
            (4, 3, 7.0),
            (3, 5, 20.0),
            (4, 5, 4.0),
        ] {
            g.add_edge(u, v, c, 0.0);
        }
        let (flow, reach) = g.min_cut(0, 5);
        assert!((flow - 23.0).abs() < 1e-9);
        assert!(reach[0] && !reach[5]);
    }

    #[test]
    fn disconnected_sink() {
        let mut g = FlowGraph::new(3);
        g.add_edge(0, 1, 5.0, 0.0);
        let (flow, reach) = g.min_cut(0, 2);
        assert_eq!(flow, 0.0);
        assert_eq!(reach, vec![true, true, false]);
    }
}
