use num_integer::Integer;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, GraphEdge};
use crate::matrix::ExactMatrix;
use crate::ratio::Rational;

/// Symmetric trapezoid profile over 0..n+m-2, zero elsewhere:
/// value(t) = min(t + 1, n + m - 1 - t, n, m).
///
/// Writing the profile along the diagonal t -> (t mod n, t mod m) of the
/// n x m grid produces a doubly stochastic array when n and m are coprime,
/// because the profile tiles the cyclic group of order nm under shifts by
/// the subgroups generated by n and by m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrapezoidProfile {
    n: usize,
    m: usize,
    values: Vec<i64>,
}

impl TrapezoidProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Profile values for t = 0..n+m-2.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, t: i64) -> i64 {
        let len = self.values.len() as i64;
        if t < 0 || t >= len {
            0
        } else {
            self.values[t as usize]
        }
    }
}

pub fn trapezoid_profile(n: usize, m: usize) -> TrapezoidProfile {
    assert!(n > 0 && m > 0, "dimensions must be positive");
    let (ni, mi) = (n as i64, m as i64);
    let values = (0..ni + mi - 1)
        .map(|t| (t + 1).min(ni + mi - 1 - t).min(ni).min(mi))
        .collect();
    TrapezoidProfile { n, m, values }
}

/// Doubly stochastic n x m array with minimal support n + m - 1, built by
/// laying the trapezoid profile along the wrap-around diagonal. Requires
/// n and m coprime so that t -> (t mod n, t mod m) is a bijection.
pub fn trapezoid_array(n: usize, m: usize) -> Result<ExactMatrix> {
    let g = n.gcd(&m);
    if g != 1 {
        return Err(Error::NotCoprime { n, m, gcd: g });
    }
    let profile = trapezoid_profile(n, m);
    let mut matrix = ExactMatrix::zero(n, m)?;
    for t in 0..(n + m - 1) as i64 {
        let value = profile.value(t);
        debug_assert!(value > 0);
        matrix.set(
            t as usize % n,
            t as usize % m,
            Rational::from_integer(value),
        );
    }
    Ok(matrix)
}

/// Doubly stochastic n x m array with minimal support n + m - gcd(n, m),
/// built by division with remainder: for m = kn + r the array is k copies
/// of the scaled identity followed by the transposed array for (r, n).
/// For n > m the construction runs on the transpose.
pub fn euclid_array(n: usize, m: usize) -> Result<ExactMatrix> {
    if n == 0 || m == 0 {
        return Err(Error::ZeroDimension { n, m });
    }
    if n > m {
        return Ok(euclid_array(m, n)?.transpose());
    }
    let (k, r) = (m / n, m % n);
    let diagonal = ExactMatrix::scaled_identity(n)?;
    let mut out: Option<ExactMatrix> = None;
    for _ in 0..k {
        out = Some(match out {
            None => diagonal.clone(),
            Some(acc) => acc.hconcat(&diagonal)?,
        });
    }
    let mut out = out.expect("k >= 1 because n <= m");
    if r > 0 {
        out = out.hconcat(&euclid_array(r, n)?.transpose())?;
    }
    Ok(out)
}

/// Choice of coprime-block construction used inside [`min_support_array`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockMethod {
    Trapezoid,
    Euclid,
}

/// Block-diagonal composition: places the blocks along the diagonal and
/// multiplies every entry by `scale`. The result is doubly stochastic
/// exactly when the blocks are and the block count equals the scale, which
/// is why both are enforced.
pub fn block_compose(blocks: &[ExactMatrix], scale: usize) -> Result<ExactMatrix> {
    if blocks.is_empty() || blocks.len() != scale {
        return Err(Error::BlockCountMismatch {
            blocks: blocks.len(),
            scale,
        });
    }
    let (p, q) = (blocks[0].n(), blocks[0].m());
    for (index, block) in blocks.iter().enumerate() {
        if block.n() != p || block.m() != q {
            return Err(Error::BlockShapeMismatch {
                index,
                found_n: block.n(),
                found_m: block.m(),
                n: p,
                m: q,
            });
        }
        if !crate::matrix::verify_doubly_stochastic(block) {
            return Err(Error::BlockNotDoublyStochastic { index });
        }
    }
    let d = blocks.len();
    let factor = Rational::from_integer(scale as i64);
    let mut out = ExactMatrix::zero(d * p, d * q)?;
    for (b, block) in blocks.iter().enumerate() {
        for i in 0..p {
            for j in 0..q {
                let value = block.get(i, j);
                if !value.is_zero() {
                    out.set(b * p + i, b * q + j, value * factor);
                }
            }
        }
    }
    Ok(out)
}

/// Extremal n x m array with the smallest possible support
/// n + m - gcd(n, m): d = gcd(n, m) coprime blocks of shape (n/d) x (m/d),
/// block-diagonal and scaled by d.
pub fn min_support_array(n: usize, m: usize, method: BlockMethod) -> Result<ExactMatrix> {
    if n == 0 || m == 0 {
        return Err(Error::ZeroDimension { n, m });
    }
    let d = n.gcd(&m);
    let block = match method {
        BlockMethod::Trapezoid => trapezoid_array(n / d, m / d)?,
        BlockMethod::Euclid => euclid_array(n / d, m / d)?,
    };
    block_compose(&vec![block; d], d)
}

/// The four alternating-path building blocks used by [`lemma_array`].
///
/// Each is a path that alternates column and row vertices, drawn bottom to
/// top as v1, u1, v2, u2, ... Row vertices must absorb p + 1 and column
/// vertices p, except that one designated "special" vertex of either kind
/// absorbs one less, leaving room for the unit edge that links consecutive
/// blocks in the assembly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrototypeKind {
    /// p - 1 rows, p columns; the top column vertex is special.
    TypeI,
    /// p + 1 rows, p + 2 columns; the second row vertex from the top is special.
    TypeII,
    /// p rows, p + 1 columns; the top row and top column vertices are special.
    TypeIII,
    /// p rows, p + 1 columns; no special vertex.
    TypeIV,
}

pub(crate) struct Prototype {
    pub(crate) graph: BipartiteGraph,
    pub(crate) special_row: Option<usize>,
    pub(crate) special_col: Option<usize>,
}

/// Weighted alternating path for one prototype. Weights are the unique
/// solution of the vertex absorption targets, found by peeling the path
/// from the bottom; they stay positive for every p >= 2.
pub fn prototype_path(kind: PrototypeKind, p: usize) -> Result<BipartiteGraph> {
    Ok(prototype(kind, p)?.graph)
}

pub(crate) fn prototype(kind: PrototypeKind, p: usize) -> Result<Prototype> {
    if p < 2 {
        return Err(Error::ParameterRange {
            what: "prototype parameter",
            details: format!("p must be at least 2, got {p}"),
        });
    }
    let (row_count, col_count, special_row, special_col) = match kind {
        PrototypeKind::TypeI => (p - 1, p, None, Some(p - 1)),
        PrototypeKind::TypeII => (p + 1, p + 2, Some(p - 1), None),
        PrototypeKind::TypeIII => (p, p + 1, Some(p - 1), Some(p)),
        PrototypeKind::TypeIV => (p, p + 1, None, None),
    };

    let pi = p as i64;
    let row_target = |u: usize| pi + 1 - i64::from(special_row == Some(u));
    let col_target = |v: usize| pi - i64::from(special_col == Some(v));

    // Path bottom to top: v0, u0, v1, u1, ..., ending with the top column
    // vertex. Peel from the bottom: each edge takes whatever its lower
    // endpoint still needs.
    let mut edges = Vec::with_capacity(row_count + col_count - 1);
    let mut carried = 0i64;
    for step in 0..row_count + col_count - 1 {
        let (row, col, lower_need) = if step % 2 == 0 {
            (step / 2, step / 2, col_target(step / 2) - carried)
        } else {
            (step / 2, step / 2 + 1, row_target(step / 2) - carried)
        };
        assert!(lower_need > 0, "prototype weights stay positive for p >= 2");
        edges.push(GraphEdge {
            row,
            col,
            weight: Rational::from_integer(lower_need),
        });
        carried = lower_need;
    }
    assert_eq!(
        carried,
        col_target(col_count - 1),
        "top vertex absorbs exactly its target"
    );

    Ok(Prototype {
        graph: BipartiteGraph {
            row_count,
            col_count,
            edges,
        },
        special_row,
        special_col,
    })
}

/// Extremal n x m array for n = dp, m = d(p + 1) whose bipartite graph has
/// exactly s connected components, 1 <= s <= d - 1. The graph is a chain of
/// d prototype paths: one TypeI, then TypeIII links, one TypeII, and TypeIV
/// for the rest, consecutive blocks joined at their special vertices by unit
/// edges; entries are scaled by d at the end.
pub fn lemma_array(d: usize, p: usize, s: usize) -> Result<ExactMatrix> {
    if d < 2 || p < 2 {
        return Err(Error::ParameterRange {
            what: "lemma parameters",
            details: format!("need d >= 2 and p >= 2, got d = {d}, p = {p}"),
        });
    }
    if s == 0 || s >= d {
        return Err(Error::ParameterRange {
            what: "component count",
            details: format!("s must satisfy 1 <= s <= d - 1 = {}, got {s}", d - 1),
        });
    }

    let kind_for = |j: usize| {
        if j == 1 {
            PrototypeKind::TypeI
        } else if j <= d - s {
            PrototypeKind::TypeIII
        } else if j == d - s + 1 {
            PrototypeKind::TypeII
        } else {
            PrototypeKind::TypeIV
        }
    };

    let (mut row_offset, mut col_offset) = (0usize, 0usize);
    let mut edges: Vec<GraphEdge> = Vec::new();
    let mut specials: Vec<(Option<usize>, Option<usize>)> = Vec::new();
    for j in 1..=d {
        let part = prototype(kind_for(j), p)?;
        edges.extend(part.graph.edges.iter().map(|e| GraphEdge {
            row: row_offset + e.row,
            col: col_offset + e.col,
            weight: e.weight,
        }));
        specials.push((
            part.special_row.map(|u| row_offset + u),
            part.special_col.map(|v| col_offset + v),
        ));
        row_offset += part.graph.row_count;
        col_offset += part.graph.col_count;
    }
    debug_assert_eq!(row_offset, d * p);
    debug_assert_eq!(col_offset, d * (p + 1));

    // Unit edges: special column of block j feeds the special row of
    // block j + 1, welding the first d - s + 1 blocks into one component.
    for j in 0..d - s {
        let col = specials[j].1.expect("blocks 1..=d-s have a special column");
        let row = specials[j + 1]
            .0
            .expect("blocks 2..=d-s+1 have a special row");
        edges.push(GraphEdge {
            row,
            col,
            weight: Rational::ONE,
        });
    }

    let mut matrix = ExactMatrix::zero(row_offset, col_offset)?;
    let scale = Rational::from_integer(d as i64);
    for e in &edges {
        debug_assert!(matrix.get(e.row, e.col).is_zero());
        matrix.set(e.row, e.col, e.weight * scale);
    }
    debug_assert!(crate::graph::is_extremal(&matrix));
    Ok(matrix)
}

/// Extremal n x m array whose bipartite graph has exactly s components,
/// equivalently with support size n + m - s, for any 1 <= s <= gcd(n, m).
///
/// s = gcd(n, m) delegates to the block-diagonal minimal construction. For
/// smaller s the dimensions must not divide one another; the array is grown
/// by prepending scaled identities along the subtractive gcd chain until the
/// chain bottoms out in a shape the prototype assembly covers.
pub fn extremal_with_support_size(n: usize, m: usize, s: usize) -> Result<ExactMatrix> {
    if n == 0 || m == 0 {
        return Err(Error::ZeroDimension { n, m });
    }
    let d = n.gcd(&m);
    if s == 0 || s > d {
        return Err(Error::ParameterRange {
            what: "component count",
            details: format!("s must satisfy 1 <= s <= gcd = {d}, got {s}"),
        });
    }
    if s == d {
        return min_support_array(n, m, BlockMethod::Euclid);
    }
    if m.is_multiple_of(n) || n.is_multiple_of(m) {
        return Err(Error::DivisibilityConstraint { n, m, s });
    }
    Ok(subtractive_chain(n, m, s, d))
}

fn subtractive_chain(n: usize, m: usize, s: usize, d: usize) -> ExactMatrix {
    if n > m {
        return subtractive_chain(m, n, s, d).transpose();
    }
    // Invariants: s < d = gcd(n, m) and neither dimension divides the other,
    // so m mod n is a nonzero multiple of d and the chain is finite.
    if m == n + d {
        lemma_array(d, n / d, s).expect("chain invariants satisfy the lemma ranges")
    } else {
        let rest = subtractive_chain(n, m - n, s, d);
        ExactMatrix::scaled_identity(n)
            .expect("positive dimension")
            .hconcat(&rest)
            .expect("row counts agree")
    }
}
