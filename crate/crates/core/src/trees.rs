use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::{find_cycle, is_extremal, DisjointSet};
use crate::matrix::{ExactMatrix, SupportSet};
use crate::ratio::Rational;

/// Tree on n + 1 vertices labeled 1..=n+1 with edges labeled 1..=n.
/// Vertices and edges are 0-based internally; `edges[i]` holds the
/// normalized endpoint pair of the edge labeled i + 1.
///
/// Labeled trees are in bijection with extremal n x (n+1) arrays: edge i
/// incident to vertex j exactly when cell (i, j) is in the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTree {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl LabeledTree {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<LabeledTree> {
        if vertex_count < 2 {
            return Err(Error::MalformedTree {
                details: format!("need at least 2 vertices, got {vertex_count}"),
            });
        }
        if edges.len() != vertex_count - 1 {
            return Err(Error::MalformedTree {
                details: format!(
                    "{} vertices need {} edges, got {}",
                    vertex_count,
                    vertex_count - 1,
                    edges.len()
                ),
            });
        }
        let mut normalized = Vec::with_capacity(edges.len());
        let mut seen = BTreeSet::new();
        let mut sets = DisjointSet::new(vertex_count);
        for (label0, &(a, b)) in edges.iter().enumerate() {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::MalformedTree {
                    details: format!(
                        "edge {} touches vertex {}, outside 1..={}",
                        label0 + 1,
                        a.max(b) + 1,
                        vertex_count
                    ),
                });
            }
            if a == b {
                return Err(Error::MalformedTree {
                    details: format!("edge {} is a self loop at vertex {}", label0 + 1, a + 1),
                });
            }
            let ends = (a.min(b), a.max(b));
            if !seen.insert(ends) {
                return Err(Error::MalformedTree {
                    details: format!(
                        "vertices {} and {} are joined twice",
                        ends.0 + 1,
                        ends.1 + 1
                    ),
                });
            }
            if sets.union(a, b).is_none() {
                return Err(Error::MalformedTree {
                    details: format!("edge {} closes a cycle", label0 + 1),
                });
            }
            normalized.push(ends);
        }
        Ok(LabeledTree {
            vertex_count,
            edges: normalized,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of edges, which is also the row count of the associated array.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Normalized endpoints of the edge labeled `label0 + 1`.
    pub fn edge(&self, label0: usize) -> (usize, usize) {
        self.edges[label0]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Reassigns edge labels: the edge currently labeled i + 1 becomes
    /// perm[i]. `perm` must be a permutation of 1..=edge_count.
    pub fn relabel_edges(&self, perm: &[usize]) -> Result<LabeledTree> {
        let n = self.edges.len();
        let valid = perm.len() == n && {
            let distinct: BTreeSet<usize> = perm.iter().copied().collect();
            distinct.len() == n && perm.iter().all(|&l| (1..=n).contains(&l))
        };
        if !valid {
            return Err(Error::ParameterRange {
                what: "edge relabeling",
                details: format!("expected a permutation of 1..={n}, got {perm:?}"),
            });
        }
        let mut edges = vec![(0, 0); n];
        for (i, &label) in perm.iter().enumerate() {
            edges[label - 1] = self.edges[i];
        }
        Ok(LabeledTree {
            vertex_count: self.vertex_count,
            edges,
        })
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.vertex_count];
        for (label0, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, label0));
            adj[b].push((a, label0));
        }
        adj
    }

    /// Parent of each vertex and vertices in a root-first order, rooted at 0.
    fn rooted(&self) -> (Vec<usize>, Vec<usize>) {
        let adj = self.adjacency();
        let mut parent = vec![usize::MAX; self.vertex_count];
        let mut order = Vec::with_capacity(self.vertex_count);
        let mut stack = vec![0usize];
        parent[0] = 0;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(next, _) in &adj[v] {
                if parent[next] == usize::MAX {
                    parent[next] = v;
                    stack.push(next);
                }
            }
        }
        (parent, order)
    }
}

/// Per-row cell count violations and a witness cycle for a candidate
/// support of an n x (kn + 1) array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportConditionReport {
    pub expected_row_cells: usize,
    pub row_violations: Vec<RowCellCount>,
    pub cycle: Option<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowCellCount {
    pub row: usize,
    pub found: usize,
}

impl SupportConditionReport {
    pub fn ok(&self) -> bool {
        self.row_violations.is_empty() && self.cycle.is_none()
    }
}

impl fmt::Display for SupportConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(
                f,
                "every row has exactly {} cells and no cycle exists",
                self.expected_row_cells
            );
        }
        let mut parts = Vec::new();
        for v in &self.row_violations {
            parts.push(format!(
                "row {} has {} cells, expected {}",
                v.row + 1,
                v.found,
                self.expected_row_cells
            ));
        }
        if let Some(cycle) = &self.cycle {
            let cells: Vec<String> = cycle
                .iter()
                .map(|&(i, j)| format!("({}, {})", i + 1, j + 1))
                .collect();
            parts.push(format!("cycle through {}", cells.join(" ")));
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// Decides whether `support` is the support of an extremal n x (kn + 1)
/// array: every row must hold exactly k + 1 cells and the cells must not
/// contain a cycle. Both conditions together force the support to be a
/// spanning tree of the bipartite cell graph.
pub fn check_support_conditions(k: usize, support: &SupportSet) -> Result<SupportConditionReport> {
    let n = support.n();
    if k == 0 || support.m() != k * n + 1 {
        return Err(Error::WrongShape {
            found_n: n,
            found_m: support.m(),
            expected: format!("{n}x(k*{n}+1) for some k >= 1"),
        });
    }
    let expected = k + 1;
    let row_violations = (0..n)
        .filter_map(|row| {
            let found = support.row_count(row);
            (found != expected).then_some(RowCellCount { row, found })
        })
        .collect();
    Ok(SupportConditionReport {
        expected_row_cells: expected,
        row_violations,
        cycle: find_cycle(support),
    })
}

/// The unique extremal array with support exactly `support`, for dimensions
/// n x (kn + 1). The entry at a support cell equals the number of rows in
/// the component of the cell's row vertex once the cell is deleted, counted
/// by rooted subtree sums in one pass.
pub fn extremal_from_support(k: usize, support: &SupportSet) -> Result<ExactMatrix> {
    let report = check_support_conditions(k, support)?;
    if !report.ok() {
        return Err(Error::SupportConditions { report });
    }

    let (n, m) = (support.n(), support.m());
    let total = n + m;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (row, col) in support.iter() {
        adj[row].push(n + col);
        adj[n + col].push(row);
    }

    // The support is a spanning tree; root it at row vertex 0.
    let mut parent = vec![usize::MAX; total];
    let mut order = Vec::with_capacity(total);
    let mut stack = vec![0usize];
    parent[0] = 0;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &next in &adj[v] {
            if parent[next] == usize::MAX {
                parent[next] = v;
                stack.push(next);
            }
        }
    }
    debug_assert_eq!(order.len(), total);

    // Rows (mass m each) and columns (mass n each) both sum over the tree
    // to the same total, which is what makes the weight rule consistent.
    let mut subtree_rows = vec![0i64; total];
    for &v in order.iter().rev() {
        if v < n {
            subtree_rows[v] += 1;
        }
        if v != 0 {
            subtree_rows[parent[v]] += subtree_rows[v];
        }
    }

    let mut matrix = ExactMatrix::zero(n, m)?;
    for (row, col) in support.iter() {
        let (u, v) = (row, n + col);
        let rows_on_u_side = if parent[v] == u {
            n as i64 - subtree_rows[v]
        } else {
            debug_assert_eq!(parent[u], v);
            subtree_rows[u]
        };
        debug_assert!(rows_on_u_side > 0);
        matrix.set(row, col, Rational::from_integer(rows_on_u_side));
    }
    debug_assert!(is_extremal(&matrix));
    debug_assert_eq!(crate::matrix::support(&matrix), *support);
    Ok(matrix)
}

/// Extremal n x (n+1) array of a labeled tree: row i gets nonzero cells at
/// the two endpoints of edge i, each holding the vertex count of the
/// component of the tree minus that edge on the opposite side.
pub fn tree_to_array(tree: &LabeledTree) -> ExactMatrix {
    let total = tree.vertex_count();
    let (parent, order) = tree.rooted();
    let mut subtree = vec![1i64; total];
    for &v in order.iter().rev() {
        if v != 0 {
            subtree[parent[v]] += subtree[v];
        }
    }
    let mut matrix =
        ExactMatrix::zero(tree.edge_count(), total).expect("trees have at least one edge");
    for (label0, &(a, b)) in tree.edges().iter().enumerate() {
        let child = if parent[b] == a { b } else { a };
        let other = if child == b { a } else { b };
        let below = subtree[child];
        matrix.set(label0, child, Rational::from_integer(total as i64 - below));
        matrix.set(label0, other, Rational::from_integer(below));
    }
    debug_assert!(is_extremal(&matrix));
    matrix
}

/// Inverse of [`tree_to_array`]: reads the labeled tree off an extremal
/// n x (n+1) array. Each row of such an array has exactly two support
/// cells, which become the endpoints of the edge with that row's label.
pub fn array_to_tree(matrix: &ExactMatrix) -> Result<LabeledTree> {
    let (n, m) = (matrix.n(), matrix.m());
    if m != n + 1 {
        return Err(Error::WrongShape {
            found_n: n,
            found_m: m,
            expected: format!("{n}x{}", n + 1),
        });
    }
    if !crate::matrix::verify_doubly_stochastic(matrix) {
        return Err(Error::NotExtremal {
            details: "the array is not doubly stochastic".to_string(),
        });
    }
    if !is_extremal(matrix) {
        return Err(Error::NotExtremal {
            details: "the cell graph contains a cycle".to_string(),
        });
    }
    let mut edges = Vec::with_capacity(n);
    for row in 0..n {
        let cols: Vec<usize> = (0..m).filter(|&j| !matrix.get(row, j).is_zero()).collect();
        debug_assert_eq!(cols.len(), 2, "extremal rows cannot fit in one cell");
        edges.push((cols[0], cols[1]));
    }
    LabeledTree::new(m, edges)
}

/// Decodes a sequence over 1..=len+2 into the labeled tree on len + 2
/// vertices, numbering edges 1, 2, ... in the order the decode produces
/// them (smallest-leaf-first). Every (sequence, edge relabeling) pair
/// yields a distinct tree, which is what makes the count formula work.
pub fn prufer_decode(seq: &[usize]) -> Result<LabeledTree> {
    let vertex_count = seq.len() + 2;
    for &label in seq {
        if label == 0 || label > vertex_count {
            return Err(Error::ParameterRange {
                what: "sequence entry",
                details: format!("vertex label {label} outside 1..={vertex_count}"),
            });
        }
    }
    let mut degree = vec![1usize; vertex_count];
    for &label in seq {
        degree[label - 1] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> = (0..vertex_count)
        .filter(|&v| degree[v] == 1)
        .map(Reverse)
        .collect();
    let mut edges = Vec::with_capacity(vertex_count - 1);
    for &label in seq {
        let a = label - 1;
        let Reverse(leaf) = leaves.pop().expect("a tree sequence always leaves a leaf");
        edges.push((leaf, a));
        degree[leaf] -= 1;
        degree[a] -= 1;
        if degree[a] == 1 {
            leaves.push(Reverse(a));
        }
    }
    let Reverse(x) = leaves.pop().expect("two vertices remain");
    let Reverse(y) = leaves.pop().expect("two vertices remain");
    edges.push((x, y));
    LabeledTree::new(vertex_count, edges)
}

/// Inverse of [`prufer_decode`] on vertex structure; edge labels are
/// ignored. Repeatedly records the neighbor of the smallest leaf.
pub fn prufer_encode(tree: &LabeledTree) -> Vec<usize> {
    let total = tree.vertex_count();
    let adj = tree.adjacency();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut gone = vec![false; total];
    let mut leaves: BinaryHeap<Reverse<usize>> = (0..total)
        .filter(|&v| degree[v] == 1)
        .map(Reverse)
        .collect();
    let mut seq = Vec::with_capacity(total.saturating_sub(2));
    for _ in 0..total.saturating_sub(2) {
        let Reverse(leaf) = leaves.pop().expect("trees keep at least two leaves");
        gone[leaf] = true;
        let &(neighbor, _) = adj[leaf]
            .iter()
            .find(|&&(v, _)| !gone[v])
            .expect("a live leaf has a live neighbor");
        seq.push(neighbor + 1);
        degree[neighbor] -= 1;
        if degree[neighbor] == 1 {
            leaves.push(Reverse(neighbor));
        }
    }
    seq
}

/// Number of extremal n x (n+1) arrays: n! * (n+1)^(n-1), the number of
/// trees on n + 1 labeled vertices with n labeled edges.
pub fn count_extremal_formula(n: usize) -> BigUint {
    assert!(n > 0, "row count must be positive");
    let mut count = BigUint::from(1u8);
    for i in 2..=n as u64 {
        count *= i;
    }
    count * BigUint::from(n as u64 + 1).pow(n as u32 - 1)
}

/// Isomorphism-invariant code of the underlying unlabeled tree: the
/// canonical parenthesis string rooted at the tree center, taking the
/// lexicographically smaller option when the center is an edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalTreeCode(String);

impl CanonicalTreeCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub fn canonical_tree_code(tree: &LabeledTree) -> CanonicalTreeCode {
    let adj = tree.adjacency();
    let code = centers(tree)
        .into_iter()
        .map(|root| rooted_code(&adj, root, usize::MAX))
        .min()
        .expect("every tree has a center");
    CanonicalTreeCode(code)
}

fn rooted_code(adj: &[Vec<(usize, usize)>], v: usize, parent: usize) -> String {
    let mut children: Vec<String> = adj[v]
        .iter()
        .filter(|&&(next, _)| next != parent)
        .map(|&(next, _)| rooted_code(adj, next, v))
        .collect();
    children.sort();
    format!("({})", children.concat())
}

/// One or two middle vertices of the tree, found by peeling leaf layers.
fn centers(tree: &LabeledTree) -> Vec<usize> {
    let total = tree.vertex_count();
    let adj = tree.adjacency();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..total).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = total;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            degree[v] = 0;
            for &(w, _) in &adj[v] {
                if degree[w] > 1 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    layer
}

/// All labeled trees on `vertex_count` vertices, one per sequence, edge
/// labels in decode order. Guarded to keep the enumeration desk sized.
pub fn enumerate_trees(vertex_count: usize) -> Result<Vec<LabeledTree>> {
    if !(2..=8).contains(&vertex_count) {
        return Err(Error::GuardExceeded {
            what: "tree enumeration",
            details: format!("vertex count {vertex_count} outside 2..=8"),
        });
    }
    let len = vertex_count - 2;
    let mut seq = vec![1usize; len];
    let mut out = Vec::new();
    loop {
        out.push(prufer_decode(&seq).expect("labels stay in range"));
        let mut pos = len;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if seq[pos] < vertex_count {
                seq[pos] += 1;
                seq[pos + 1..].fill(1);
                break;
            }
        }
    }
}

/// Number of equivalence classes of extremal n x (n+1) arrays, which equals
/// the number of distinct canonical codes among all trees on n + 1 vertices.
pub fn count_tree_classes(n: usize) -> Result<usize> {
    let codes: BTreeSet<CanonicalTreeCode> = enumerate_trees(n + 1)?
        .iter()
        .map(canonical_tree_code)
        .collect();
    Ok(codes.len())
}

/// Two extremal n x (n+1) arrays with identical entry multisets that are
/// not row/column permutations of one another; they exist exactly when
/// n >= 6. Built from a fixed pair of six-edge trees whose per-edge
/// component sizes agree label by label, extended by a chain that keeps the
/// agreement at every length, while one tree holds a degree-4 vertex and
/// the other does not.
pub fn loukaki_pair(n: usize) -> Result<(ExactMatrix, ExactMatrix)> {
    if n < 6 {
        return Err(Error::PairOrderTooSmall { n });
    }
    // 1-based edge lists; edge j splits both trees into parts of equal sizes.
    let mut left = vec![(1, 3), (2, 3), (3, 4), (4, 5), (5, 7)];
    let mut right = vec![(1, 2), (4, 5), (3, 5), (2, 3), (5, 6)];
    if n == 6 {
        left.push((4, 6));
        right.push((5, 7));
    } else {
        left.push((8, 6));
        right.push((8, 7));
        for j in 7..n {
            left.push((j + 2, j + 1));
            right.push((j + 2, j + 1));
        }
        left.push((4, n + 1));
        right.push((5, n + 1));
    }
    let to_tree = |edges: Vec<(usize, usize)>| {
        LabeledTree::new(
            n + 1,
            edges.into_iter().map(|(a, b)| (a - 1, b - 1)).collect(),
        )
        .expect("the pair templates are trees")
    };
    Ok((
        tree_to_array(&to_tree(left)),
        tree_to_array(&to_tree(right)),
    ))
}
