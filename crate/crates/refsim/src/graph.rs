//! Weighted directed interaction graphs and switching schedules.
//!
//! Edge convention: `w[(i, j)] > 0` means agent `i` receives information from
//! agent `j` (a directed edge i -> j in the "listening" digraph). A graph
//! contains a directed spanning tree when some vertex `k*` is reachable from
//! every other vertex along listening edges; this is the connectivity premise
//! of every convergence scenario in the crate.

use crate::error::{ConfigError, SimError};
use nalgebra::DMatrix;

/// Weighted directed graph over `n` agents. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    n: usize,
    weights: DMatrix<f64>,
}

impl DirectedGraph {
    /// Build from a weight matrix. Rejects negative weights and nonzero
    /// diagonal entries.
    pub fn new(weights: DMatrix<f64>) -> Result<Self, ConfigError> {
        let n = weights.nrows();
        if weights.ncols() != n {
            return Err(ConfigError::invalid("weight matrix must be square"));
        }
        for i in 0..n {
            if weights[(i, i)] != 0.0 {
                return Err(ConfigError::invalid(format!(
                    "graph weight w[{i}][{i}] must be zero (no self loops)"
                )));
            }
            for j in 0..n {
                let w = weights[(i, j)];
                if !w.is_finite() || w < 0.0 {
                    return Err(ConfigError::invalid(format!(
                        "graph weight w[{i}][{j}] = {w} must be finite and nonnegative"
                    )));
                }
            }
        }
        Ok(Self { n, weights })
    }

    /// Graph with no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            weights: DMatrix::zeros(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    /// Neighbors of `i`: vertices `j` with `w[(i, j)] > 0`, with weights.
    pub fn neighbors(&self, i: usize) -> Vec<(usize, f64)> {
        (0..self.n)
            .filter(|&j| self.weights[(i, j)] > 0.0)
            .map(|j| (j, self.weights[(i, j)]))
            .collect()
    }

    /// Row sum of weights for agent `i`.
    pub fn in_weight_sum(&self, i: usize) -> f64 {
        (0..self.n).map(|j| self.weights[(i, j)]).sum()
    }
}

/// Laplacian: `l[i][i] = sum_k w[i][k]`, `l[i][j] = -w[i][j]` for `i != j`.
/// Row sums are exactly zero because the diagonal is assembled from the same
/// additions as the off-diagonal entries.
pub fn laplacian(g: &DirectedGraph) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if j != i {
                let w = g.weight(i, j);
                l[(i, j)] = -w;
                diag += w;
            }
        }
        l[(i, i)] = diag;
    }
    l
}

/// Diagonal matrix of row weight sums.
pub fn degree_matrix(g: &DirectedGraph) -> DMatrix<f64> {
    let n = g.n();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = g.in_weight_sum(i);
    }
    d
}

/// Vertices that can reach `target` along listening edges (including
/// `target` itself). Breadth-first search over reversed edges.
fn reaches(g: &DirectedGraph, target: usize) -> Vec<bool> {
    let n = g.n();
    let mut seen = vec![false; n];
    seen[target] = true;
    let mut queue = std::collections::VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        for u in 0..n {
            if !seen[u] && g.weight(u, v) > 0.0 {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    seen
}

/// True iff some vertex `k*` is reachable from every other vertex.
pub fn has_spanning_tree(g: &DirectedGraph) -> bool {
    (0..g.n()).any(|k| reaches(g, k).iter().all(|&r| r))
}

/// True iff every vertex reaches `root`.
pub fn has_rooted_spanning_tree(g: &DirectedGraph, root: usize) -> bool {
    assert!(root < g.n(), "root {root} out of range");
    reaches(g, root).iter().all(|&r| r)
}

/// Piecewise-constant switching plan over a finite set of graphs.
///
/// Interval `[switch_times[k], switch_times[k+1])` is governed by
/// `graphs[active[k]]`; the final graph persists beyond the last switch time.
/// Switching is right-continuous: at `t = switch_times[k]` the new graph is
/// already active.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingSchedule {
    graphs: Vec<DirectedGraph>,
    switch_times: Vec<f64>,
    active: Vec<usize>,
    dwell: f64,
}

impl SwitchingSchedule {
    pub fn new(
        graphs: Vec<DirectedGraph>,
        switch_times: Vec<f64>,
        active: Vec<usize>,
        dwell: f64,
    ) -> Result<Self, ConfigError> {
        if graphs.is_empty() {
            return Err(ConfigError::invalid("schedule needs at least one graph"));
        }
        let n = graphs[0].n();
        if graphs.iter().any(|g| g.n() != n) {
            return Err(ConfigError::invalid(
                "all graphs in a schedule must share the same vertex count",
            ));
        }
        if switch_times.is_empty() || switch_times[0] != 0.0 {
            return Err(ConfigError::invalid("switch times must start at t = 0"));
        }
        if switch_times.len() != active.len() {
            return Err(ConfigError::invalid(
                "active-index list must match the switch-time list",
            ));
        }
        if !(dwell > 0.0) {
            return Err(ConfigError::invalid("dwell time must be positive"));
        }
        for pair in switch_times.windows(2) {
            if pair[1] - pair[0] < dwell {
                return Err(ConfigError::invalid(format!(
                    "switch interval [{}, {}] shorter than dwell time {dwell}",
                    pair[0], pair[1]
                )));
            }
        }
        if active.iter().any(|&k| k >= graphs.len()) {
            return Err(ConfigError::invalid("active index out of range"));
        }
        Ok(Self {
            graphs,
            switch_times,
            active,
            dwell,
        })
    }

    /// Fixed-topology schedule: one graph forever.
    pub fn fixed(graph: DirectedGraph) -> Self {
        Self {
            graphs: vec![graph],
            switch_times: vec![0.0],
            active: vec![0],
            dwell: f64::INFINITY,
        }
    }

    pub fn is_switching(&self) -> bool {
        self.switch_times.len() > 1
    }

    pub fn n(&self) -> usize {
        self.graphs[0].n()
    }

    pub fn dwell(&self) -> f64 {
        self.dwell
    }

    pub fn switch_times(&self) -> &[f64] {
        &self.switch_times
    }

    /// Interior switch instants (excludes t = 0).
    pub fn interior_switches(&self) -> &[f64] {
        &self.switch_times[1..]
    }

    /// Index into the interval list for time `t >= 0`.
    fn interval_index(&self, t: f64) -> usize {
        match self
            .switch_times
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(k) => k,
            Err(k) => k.saturating_sub(1),
        }
    }

    /// Graph active at time `t` (right-continuous at switch instants; the
    /// final graph persists past the last switch).
    pub fn graph_at(&self, t: f64) -> &DirectedGraph {
        let k = self.interval_index(t.max(0.0));
        &self.graphs[self.active[k]]
    }

    /// Union of the graphs active anywhere in `[t_a, t_b)`: the result keeps
    /// an edge at the maximum weight it attains across the window.
    pub fn union_over_window(&self, t_a: f64, t_b: f64) -> Result<DirectedGraph, SimError> {
        if !(t_a >= 0.0 && t_b > t_a) {
            return Err(SimError::BadWindow { a: t_a, b: t_b });
        }
        let n = self.n();
        let mut w = DMatrix::zeros(n, n);
        let first = self.interval_index(t_a);
        for (k, &start) in self.switch_times.iter().enumerate().skip(first) {
            if start >= t_b {
                break;
            }
            let g = &self.graphs[self.active[k]];
            for i in 0..n {
                for j in 0..n {
                    w[(i, j)] = f64::max(w[(i, j)], g.weight(i, j));
                }
            }
        }
        Ok(DirectedGraph { n, weights: w })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, DVector};
    use rand::SeedableRng;

    fn graph(w: DMatrix<f64>) -> DirectedGraph {
        DirectedGraph::new(w).unwrap()
    }

    #[test]
    fn laplacian_matches_definition() {
        let g = graph(dmatrix![0.0, 1.0; 0.0, 0.0]);
        assert_eq!(laplacian(&g), dmatrix![1.0, -1.0; 0.0, 0.0]);

        let z = DirectedGraph::empty(3);
        assert_eq!(laplacian(&z), DMatrix::zeros(3, 3));

        // Direct expansion of the definition for a 3-vertex graph.
        let g = graph(dmatrix![0.0, 2.0, 0.0; 0.0, 0.0, 1.0; 1.0, 0.0, 0.0]);
        assert_eq!(
            laplacian(&g),
            dmatrix![2.0, -2.0, 0.0; 0.0, 1.0, -1.0; -1.0, 0.0, 1.0]
        );
    }

    #[test]
    fn laplacian_row_sums_exactly_zero() {
        // Scenario-style weights (exactly representable sums): the diagonal
        // must cancel the off-diagonal entries bit-for-bit.
        let g = graph(dmatrix![
            0.0, 1.0, 0.5, 2.0;
            1.5, 0.0, 0.0, 0.25;
            0.0, 3.0, 0.0, 1.0;
            0.5, 2.0, 1.5, 0.0
        ]);
        let ones = DVector::from_element(4, 1.0);
        let sums = laplacian(&g) * ones;
        assert!(sums.iter().all(|&s| s == 0.0), "row sums {sums:?}");
    }

    #[test]
    fn laplacian_row_sums_vanish_for_arbitrary_weights() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(17);
        for _ in 0..200 {
            let w = DMatrix::from_fn(5, 5, |i, j| {
                if i == j {
                    0.0
                } else {
                    rand::Rng::gen_range(&mut rng, 0.0..10.0)
                }
            });
            let g = graph(w);
            let sums = laplacian(&g) * DVector::from_element(5, 1.0);
            assert!(sums.amax() <= 1e-12, "row sums {sums:?}");
        }
    }

    #[test]
    fn degree_matrix_row_sums() {
        let g = graph(dmatrix![0.0, 1.0; 0.0, 0.0]);
        assert_eq!(degree_matrix(&g), dmatrix![1.0, 0.0; 0.0, 0.0]);
        assert_eq!(degree_matrix(&DirectedGraph::empty(2)), DMatrix::zeros(2, 2));
        let g = graph(dmatrix![0.0, 2.0, 0.0; 0.0, 0.0, 1.0; 1.0, 0.0, 0.0]);
        let d = degree_matrix(&g);
        assert_eq!((d[(0, 0)], d[(1, 1)], d[(2, 2)]), (2.0, 1.0, 1.0));
    }

    #[test]
    fn degree_minus_laplacian_is_weight_matrix() {
        let g = graph(dmatrix![0.0, 2.0, 0.5; 0.0, 0.0, 1.0; 1.0, 0.0, 0.0]);
        assert_eq!(degree_matrix(&g) - laplacian(&g), *g.weights());
    }

    #[test]
    fn spanning_tree_examples() {
        // Chain 1 -> 2 -> 3 (0-indexed: 0 -> 1 -> 2), root is vertex 2.
        let chain = graph(dmatrix![0.0, 1.0, 0.0; 0.0, 0.0, 1.0; 0.0, 0.0, 0.0]);
        assert!(has_spanning_tree(&chain));
        assert!(!has_spanning_tree(&DirectedGraph::empty(2)));

        // Two disjoint 2-cycles.
        let two_cycles = graph(dmatrix![
            0.0, 1.0, 0.0, 0.0;
            1.0, 0.0, 0.0, 0.0;
            0.0, 0.0, 0.0, 1.0;
            0.0, 0.0, 1.0, 0.0
        ]);
        assert!(!has_spanning_tree(&two_cycles));
    }

    #[test]
    fn rooted_spanning_tree_examples() {
        // Star onto the leader vertex 0.
        let star = graph(dmatrix![
            0.0, 0.0, 0.0;
            1.0, 0.0, 0.0;
            2.0, 0.0, 0.0
        ]);
        assert!(has_rooted_spanning_tree(&star, 0));

        // Vertex 2 cannot reach the leader.
        let broken = graph(dmatrix![
            0.0, 0.0, 0.0;
            1.0, 0.0, 0.0;
            0.0, 0.0, 0.0
        ]);
        assert!(!has_rooted_spanning_tree(&broken, 0));

        // Chain through followers to the leader: 2 -> 1 -> 0.
        let chain = graph(dmatrix![
            0.0, 0.0, 0.0;
            1.0, 0.0, 0.0;
            0.0, 1.0, 0.0
        ]);
        assert!(has_rooted_spanning_tree(&chain, 0));
    }

    /// Bit-parallel transitive closure over adjacency masks; independent of
    /// the BFS used by the implementation.
    fn closure(adj: &[u32], n: usize) -> Vec<u32> {
        let mut reach: Vec<u32> = adj.iter().enumerate().map(|(i, &a)| a | (1 << i)).collect();
        for k in 0..n {
            for i in 0..n {
                if reach[i] & (1 << k) != 0 {
                    reach[i] |= reach[k];
                }
            }
        }
        reach
    }

    #[test]
    fn spanning_tree_agrees_with_reachability_oracle_up_to_n5() {
        for n in 1..=5usize {
            let bits = n * n - n;
            for code in 0u64..(1u64 << bits) {
                let mut w = DMatrix::zeros(n, n);
                let mut adj = vec![0u32; n];
                let mut b = 0;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            if code >> b & 1 == 1 {
                                w[(i, j)] = 1.0;
                                adj[i] |= 1 << j;
                            }
                            b += 1;
                        }
                    }
                }
                let g = DirectedGraph { n, weights: w };
                let reach = closure(&adj, n);
                let oracle = (0..n).any(|k| reach.iter().all(|&r| r & (1 << k) != 0));
                assert_eq!(has_spanning_tree(&g), oracle, "n={n} code={code}");
            }
        }
    }

    fn three_graph_schedule() -> SwitchingSchedule {
        let g0 = graph(dmatrix![0.0, 1.0, 0.0; 0.0, 0.0, 1.0; 0.0, 0.0, 0.0]);
        let g1 = graph(dmatrix![0.0, 0.0, 0.0; 0.0, 0.0, 2.0; 1.0, 0.0, 0.0]);
        let g2 = graph(dmatrix![0.0, 0.0, 3.0; 0.0, 0.0, 0.0; 0.0, 1.0, 0.0]);
        SwitchingSchedule::new(
            vec![g0, g1, g2],
            vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            vec![0, 1, 2, 0, 1, 2],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn graph_at_is_right_continuous_and_persists() {
        let s = three_graph_schedule();
        assert_eq!(s.graph_at(0.5), &s.graphs[0]);
        // Right-continuity: at the switch instant the new graph is active.
        assert_eq!(s.graph_at(1.0), &s.graphs[1]);
        // Beyond the last switch, the final graph persists.
        assert_eq!(s.graph_at(100.0), &s.graphs[2]);
    }

    #[test]
    fn union_over_window_examples() {
        let s = three_graph_schedule();
        // A window inside one interval is that interval's graph.
        let u = s.union_over_window(0.1, 0.9).unwrap();
        assert_eq!(&u, &s.graphs[0]);

        // A full rotation unions all three: elementwise max oracle.
        let u = s.union_over_window(0.0, 3.0).unwrap();
        let mut expect = DMatrix::zeros(3, 3);
        for g in &s.graphs {
            expect.zip_apply(g.weights(), |acc, w| *acc = f64::max(*acc, w));
        }
        assert_eq!(u.weights(), &expect);
        assert!(has_spanning_tree(&u));

        assert!(s.union_over_window(2.0, 1.0).is_err());
        assert!(s.union_over_window(-1.0, 1.0).is_err());
    }

    #[test]
    fn union_matches_pointwise_graph_at_on_the_switch_grid() {
        let s = three_graph_schedule();
        let (a, b) = (1.0, 4.0);
        let union = s.union_over_window(a, b).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let any_active = s
                    .switch_times()
                    .iter()
                    .filter(|&&t| t >= a && t < b)
                    .any(|&t| s.graph_at(t).weight(i, j) > 0.0);
                assert_eq!(union.weight(i, j) > 0.0, any_active, "edge ({i},{j})");
            }
        }
    }

    #[test]
    fn schedule_rejects_dwell_violation() {
        let g = DirectedGraph::empty(2);
        let err = SwitchingSchedule::new(
            vec![g.clone(), g],
            vec![0.0, 0.5],
            vec![0, 1],
            1.0,
        );
        assert!(err.is_err());
    }
}
