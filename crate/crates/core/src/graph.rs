use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::matrix::{
    check_gcd_multiples, min_support_size, verify_doubly_stochastic, ExactMatrix, SupportSet,
    VerifyReport,
};
use crate::ratio::Rational;

/// Bipartite graph of an n x m array: one vertex per row, one per column,
/// and a weighted edge for every nonzero cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub row_count: usize,
    pub col_count: usize,
    pub edges: Vec<GraphEdge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub row: usize,
    pub col: usize,
    pub weight: Rational,
}

/// Connected component, rows and columns listed in ascending order.
/// Isolated vertices form singleton components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Union-find over row vertices 0..n and column vertices n..n+m.
/// Union by size without path compression so unions can be rolled back,
/// which the enumeration search relies on.
pub(crate) struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub(crate) fn new(len: usize) -> DisjointSet {
        DisjointSet {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub(crate) fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Joins the sets of `a` and `b`. Returns the attached root for rollback,
    /// or None when they already share a set (adding the edge closes a cycle).
    pub(crate) fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        Some(small)
    }

    pub(crate) fn undo(&mut self, attached: usize) {
        let root = self.parent[attached];
        self.parent[attached] = attached;
        self.size[root] -= self.size[attached];
    }
}

pub fn build_graph(matrix: &ExactMatrix) -> BipartiteGraph {
    let mut edges = Vec::new();
    for row in 0..matrix.n() {
        for col in 0..matrix.m() {
            let weight = matrix.get(row, col);
            if !weight.is_zero() {
                edges.push(GraphEdge { row, col, weight });
            }
        }
    }
    BipartiteGraph {
        row_count: matrix.n(),
        col_count: matrix.m(),
        edges,
    }
}

pub fn has_cycle(graph: &BipartiteGraph) -> bool {
    let mut sets = DisjointSet::new(graph.row_count + graph.col_count);
    graph
        .edges
        .iter()
        .any(|e| sets.union(e.row, graph.row_count + e.col).is_none())
}

pub fn components(graph: &BipartiteGraph) -> Vec<Component> {
    let total = graph.row_count + graph.col_count;
    let mut sets = DisjointSet::new(total);
    for e in &graph.edges {
        sets.union(e.row, graph.row_count + e.col);
    }
    let mut order: Vec<Option<usize>> = vec![None; total];
    let mut out: Vec<Component> = Vec::new();
    for v in 0..total {
        let root = sets.find(v);
        let idx = *order[root].get_or_insert_with(|| {
            out.push(Component {
                rows: Vec::new(),
                cols: Vec::new(),
            });
            out.len() - 1
        });
        if v < graph.row_count {
            out[idx].rows.push(v);
        } else {
            out[idx].cols.push(v - graph.row_count);
        }
    }
    out
}

/// An array is extremal exactly when it is doubly stochastic and its
/// bipartite graph is acyclic, equivalently when it is the unique doubly
/// stochastic array on its support.
pub fn is_extremal(matrix: &ExactMatrix) -> bool {
    verify_doubly_stochastic(matrix) && !has_cycle(&build_graph(matrix))
}

/// Runs the full verification pipeline on one array.
pub fn verify_report(matrix: &ExactMatrix) -> VerifyReport {
    let graph = build_graph(matrix);
    let is_doubly_stochastic = verify_doubly_stochastic(matrix);
    VerifyReport {
        is_doubly_stochastic,
        is_extremal: is_doubly_stochastic && !has_cycle(&graph),
        support_size: graph.edges.len(),
        component_count: components(&graph).len(),
        entries_multiple_of_gcd: check_gcd_multiples(matrix),
        min_support_size: min_support_size(matrix.n(), matrix.m()),
    }
}

/// Outcome of solving for a doubly stochastic array with support exactly `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// The support is acyclic and admits exactly one solution.
    Forced(ExactMatrix),
    /// No doubly stochastic array has support exactly `S`.
    Infeasible(InfeasibleReason),
    /// The support contains a cycle, so solutions (if any) are not unique.
    /// Cells are listed in traversal order around one witness cycle.
    Underdetermined { cycle: Vec<(usize, usize)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfeasibleReason {
    EmptyRow { row: usize },
    EmptyColumn { col: usize },
    /// Peeling forces a zero or negative value at this cell.
    NonPositiveWeight { row: usize, col: usize, forced: i64 },
    /// A fully peeled component leaves a vertex with target mass unassigned.
    ResidualRow { row: usize, residual: i64 },
    ResidualColumn { col: usize, residual: i64 },
}

impl std::fmt::Display for InfeasibleReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InfeasibleReason::EmptyRow { row } => write!(f, "row {} has no support cells", row + 1),
            InfeasibleReason::EmptyColumn { col } => {
                write!(f, "column {} has no support cells", col + 1)
            }
            InfeasibleReason::NonPositiveWeight { row, col, forced } => write!(
                f,
                "cell ({}, {}) is forced to {forced}, which is not positive",
                row + 1,
                col + 1
            ),
            InfeasibleReason::ResidualRow { row, residual } => write!(
                f,
                "row {} is left with unassigned mass {residual}",
                row + 1
            ),
            InfeasibleReason::ResidualColumn { col, residual } => write!(
                f,
                "column {} is left with unassigned mass {residual}",
                col + 1
            ),
        }
    }
}

/// Solves for the doubly stochastic array supported exactly on `support`
/// by repeatedly forcing the single edge at a degree-one vertex.
///
/// Degree-one vertices are processed in ascending vertex order (rows before
/// columns). Which case applies, the forced matrix, and the cycle witness
/// are all independent of that order; only which infeasible cell gets
/// reported first can depend on it.
pub fn solve_support(support: &SupportSet) -> SolveOutcome {
    let total = support.n() + support.m();
    solve_support_ranked(support, &(0..total).collect::<Vec<_>>())
        .expect("identity ranking is valid")
}

/// Same as [`solve_support`] but peels degree-one vertices in the order given
/// by `rank` (lowest rank first). `rank` must assign one value per vertex:
/// rows 0..n, then columns n..n+m. Exists so tests can audit that the
/// outcome does not depend on the peeling order.
pub fn solve_support_ranked(support: &SupportSet, rank: &[usize]) -> Result<SolveOutcome> {
    let (n, m) = (support.n(), support.m());
    let total = n + m;
    if rank.len() != total {
        return Err(Error::ParameterRange {
            what: "peel ranking",
            details: format!("got {} ranks for {} vertices", rank.len(), total),
        });
    }

    // Adjacency over vertices 0..n (rows) and n..n+m (columns).
    let cells: Vec<(usize, usize)> = support.iter().collect();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (idx, &(row, col)) in cells.iter().enumerate() {
        adjacency[row].push(idx);
        adjacency[n + col].push(idx);
    }
    // An uncovered vertex rules out any solution, so it outranks a cycle.
    for (v, adj) in adjacency.iter().enumerate() {
        if adj.is_empty() {
            return Ok(SolveOutcome::Infeasible(if v < n {
                InfeasibleReason::EmptyRow { row: v }
            } else {
                InfeasibleReason::EmptyColumn { col: v - n }
            }));
        }
    }

    if let Some(cycle) = find_cycle(support) {
        return Ok(SolveOutcome::Underdetermined { cycle });
    }

    // Row vertices must absorb m, column vertices n.
    let mut residual: Vec<i64> = (0..total)
        .map(|v| if v < n { m as i64 } else { n as i64 })
        .collect();
    let mut degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let mut edge_alive = vec![true; cells.len()];
    let mut vertex_alive = vec![true; total];
    let mut weights: Vec<i64> = vec![0; cells.len()];

    let mut queue: BinaryHeap<Reverse<(usize, usize)>> = (0..total)
        .filter(|&v| degree[v] == 1)
        .map(|v| Reverse((rank[v], v)))
        .collect();

    while let Some(Reverse((_, v))) = queue.pop() {
        if !vertex_alive[v] || degree[v] != 1 {
            continue;
        }
        let edge = adjacency[v]
            .iter()
            .copied()
            .find(|&e| edge_alive[e])
            .expect("degree-one vertex has a live edge");
        let (row, col) = cells[edge];
        let forced = residual[v];
        if forced <= 0 {
            return Ok(SolveOutcome::Infeasible(
                InfeasibleReason::NonPositiveWeight { row, col, forced },
            ));
        }
        weights[edge] = forced;
        edge_alive[edge] = false;
        vertex_alive[v] = false;
        let other = if v == row { n + col } else { row };
        residual[other] -= forced;
        residual[v] = 0;
        degree[v] = 0;
        degree[other] -= 1;
        if degree[other] == 1 {
            queue.push(Reverse((rank[other], other)));
        }
    }

    // The support is a forest, so peeling exhausts every edge; each
    // component's final vertex must end exactly balanced.
    debug_assert!(edge_alive.iter().all(|&alive| !alive));
    for (v, &leftover) in residual.iter().enumerate() {
        if leftover != 0 {
            return Ok(SolveOutcome::Infeasible(if v < n {
                InfeasibleReason::ResidualRow {
                    row: v,
                    residual: leftover,
                }
            } else {
                InfeasibleReason::ResidualColumn {
                    col: v - n,
                    residual: leftover,
                }
            }));
        }
    }

    let mut matrix = ExactMatrix::zero(n, m).expect("positive dimensions");
    for (idx, &(row, col)) in cells.iter().enumerate() {
        matrix.set(row, col, Rational::from_integer(weights[idx]));
    }
    debug_assert!(is_extremal(&matrix));
    Ok(SolveOutcome::Forced(matrix))
}

/// Returns the cells of a simple cycle in the support, if any, in traversal
/// order: consecutive cells alternately share a column and a row. A cycle
/// requires at least two distinct rows and two distinct columns, so the
/// witness has even length at least four.
pub(crate) fn find_cycle(support: &SupportSet) -> Option<Vec<(usize, usize)>> {
    let n = support.n();
    let mut sets = DisjointSet::new(n + support.m());
    let mut accepted: Vec<Vec<usize>> = vec![Vec::new(); n + support.m()];
    for (row, col) in support.iter() {
        if sets.union(row, n + col).is_none() {
            let path = forest_path(&accepted, row, n + col);
            let mut cycle: Vec<(usize, usize)> = path
                .windows(2)
                .map(|pair| endpoint_cell(pair[0], pair[1], n))
                .collect();
            cycle.push((row, col));
            return Some(cycle);
        }
        accepted[row].push(n + col);
        accepted[n + col].push(row);
    }
    None
}

fn endpoint_cell(a: usize, b: usize, n: usize) -> (usize, usize) {
    if a < n {
        (a, b - n)
    } else {
        (b, a - n)
    }
}

/// Path from `from` to `to` through the forest of accepted edges; it exists
/// because both endpoints were just found in the same set.
fn forest_path(accepted: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut previous: Vec<Option<usize>> = vec![None; accepted.len()];
    let mut stack = vec![from];
    previous[from] = Some(from);
    while let Some(v) = stack.pop() {
        if v == to {
            break;
        }
        for &next in &accepted[v] {
            if previous[next].is_none() {
                previous[next] = Some(v);
                stack.push(next);
            }
        }
    }
    let mut path = vec![to];
    let mut v = to;
    while v != from {
        v = previous[v].expect("endpoints lie in one component");
        path.push(v);
    }
    path.reverse();
    path
}
