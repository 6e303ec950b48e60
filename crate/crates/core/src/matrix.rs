use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratio::Rational;

/// Dense n x m array of exact rationals, row major. Dimensions are positive.
///
/// Throughout this crate an array is called doubly stochastic when every
/// column sums to n and every row sums to m; entries must be nonnegative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactMatrix {
    n: usize,
    m: usize,
    entries: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zero(n: usize, m: usize) -> Result<ExactMatrix> {
        if n == 0 || m == 0 {
            return Err(Error::ZeroDimension { n, m });
        }
        Ok(ExactMatrix {
            n,
            m,
            entries: vec![Rational::ZERO; n * m],
        })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<ExactMatrix> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(Error::ZeroDimension { n, m });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::RaggedRow {
                    row: i,
                    found: row.len(),
                    expected: m,
                });
            }
        }
        Ok(ExactMatrix {
            n,
            m,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<ExactMatrix> {
        ExactMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().copied().map(Rational::from_integer).collect())
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        assert!(row < self.n && col < self.m, "index out of bounds");
        self.entries[row * self.m + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        assert!(row < self.n && col < self.m, "index out of bounds");
        self.entries[row * self.m + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        assert!(row < self.n, "row out of bounds");
        &self.entries[row * self.m..(row + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.m)
    }

    pub fn row_sum(&self, row: usize) -> Rational {
        self.row(row)
            .iter()
            .fold(Rational::ZERO, |acc, &e| acc + e)
    }

    pub fn col_sum(&self, col: usize) -> Rational {
        (0..self.n).fold(Rational::ZERO, |acc, i| acc + self.get(i, col))
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zero(self.m, self.n).expect("positive dimensions");
        for i in 0..self.n {
            for j in 0..self.m {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Places `rhs` to the right of `self`; row counts must agree.
    pub fn hconcat(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.n != rhs.n {
            return Err(Error::BlockShapeMismatch {
                index: 1,
                found_n: rhs.n,
                found_m: rhs.m,
                n: self.n,
                m: rhs.m,
            });
        }
        let mut out = ExactMatrix::zero(self.n, self.m + rhs.m)?;
        for i in 0..self.n {
            for j in 0..self.m {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..rhs.m {
                out.set(i, self.m + j, rhs.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Rational) -> ExactMatrix {
        ExactMatrix {
            n: self.n,
            m: self.m,
            entries: self.entries.iter().map(|&e| e * factor).collect(),
        }
    }

    pub fn add(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.n != rhs.n || self.m != rhs.m {
            return Err(Error::WrongShape {
                found_n: rhs.n,
                found_m: rhs.m,
                expected: format!("{}x{}", self.n, self.m),
            });
        }
        Ok(ExactMatrix {
            n: self.n,
            m: self.m,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    /// n x n diagonal matrix with every diagonal entry equal to n.
    /// It is the unique extremal square array for equal dimensions up to
    /// permutations, and the building block of the division-based method.
    pub fn scaled_identity(n: usize) -> Result<ExactMatrix> {
        let mut out = ExactMatrix::zero(n, n)?;
        for i in 0..n {
            out.set(i, i, Rational::from_integer(n as i64));
        }
        Ok(out)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(Rational::is_integer)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.n, self.m)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(Rational::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Set of grid cells, 0-based internally. External formats are 1-based and
/// converted at the serialization boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    n: usize,
    m: usize,
    cells: BTreeSet<(usize, usize)>,
}

impl SupportSet {
    pub fn new(n: usize, m: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> Result<SupportSet> {
        if n == 0 || m == 0 {
            return Err(Error::ZeroDimension { n, m });
        }
        let mut set = BTreeSet::new();
        for (row, col) in cells {
            if row >= n || col >= m {
                return Err(Error::CellOutOfBounds { row, col, n, m });
            }
            set.insert((row, col));
        }
        Ok(SupportSet { n, m, cells: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: (usize, usize)) -> bool {
        self.cells.contains(&cell)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cells.iter().copied()
    }

    pub fn row_count(&self, row: usize) -> usize {
        self.cells.range((row, 0)..=(row, self.m - 1)).count()
    }
}

/// Multiset of the nonzero entries of an array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryMultiset {
    counts: BTreeMap<Rational, usize>,
}

impl EntryMultiset {
    pub fn counts(&self) -> &BTreeMap<Rational, usize> {
        &self.counts
    }

    pub fn multiplicity(&self, value: Rational) -> usize {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

/// Smallest possible support size of a doubly stochastic n x m array,
/// n + m - gcd(n, m).
pub fn min_support_size(n: usize, m: usize) -> usize {
    assert!(n > 0 && m > 0, "dimensions must be positive");
    n + m - n.gcd(&m)
}

/// Checks nonnegativity, column sums n and row sums m.
pub fn verify_doubly_stochastic(matrix: &ExactMatrix) -> bool {
    let n = Rational::from_integer(matrix.n() as i64);
    let m = Rational::from_integer(matrix.m() as i64);
    matrix.rows().flatten().all(|e| !e.is_negative())
        && (0..matrix.n()).all(|i| matrix.row_sum(i) == m)
        && (0..matrix.m()).all(|j| matrix.col_sum(j) == n)
}

/// Cells holding nonzero entries.
pub fn support(matrix: &ExactMatrix) -> SupportSet {
    SupportSet::new(
        matrix.n(),
        matrix.m(),
        (0..matrix.n())
            .flat_map(|i| (0..matrix.m()).map(move |j| (i, j)))
            .filter(|&(i, j)| !matrix.get(i, j).is_zero()),
    )
    .expect("support cells lie inside the grid")
}

/// Multiset of nonzero entries with multiplicities.
pub fn entry_multiset(matrix: &ExactMatrix) -> EntryMultiset {
    let mut counts = BTreeMap::new();
    for &e in matrix.rows().flatten() {
        if !e.is_zero() {
            *counts.entry(e).or_insert(0) += 1;
        }
    }
    EntryMultiset { counts }
}

/// True when every entry is a nonnegative integer multiple of gcd(n, m).
/// Every extremal array satisfies this; a failure certifies non-extremality.
pub fn check_gcd_multiples(matrix: &ExactMatrix) -> bool {
    let g = matrix.n().gcd(&matrix.m()) as i64;
    matrix
        .rows()
        .flatten()
        .all(|e| e.is_zero() || e.is_multiple_of(g))
}

/// Summary produced by the verification pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub is_doubly_stochastic: bool,
    pub is_extremal: bool,
    pub support_size: usize,
    pub component_count: usize,
    pub entries_multiple_of_gcd: bool,
    pub min_support_size: usize,
}
