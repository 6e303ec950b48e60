use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{solve_support, DisjointSet, SolveOutcome};
use crate::matrix::{min_support_size, support, ExactMatrix, SupportSet};
use crate::trees::{array_to_tree, canonical_tree_code};

/// Every extremal n x m array, sorted by row-major entry order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalCatalog {
    n: usize,
    m: usize,
    matrices: Vec<ExactMatrix>,
}

impl ExtremalCatalog {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[ExactMatrix] {
        &self.matrices
    }

    pub fn contains(&self, matrix: &ExactMatrix) -> bool {
        self.matrices.binary_search(matrix).is_ok()
    }
}

/// Count and support-size spectrum of an enumeration that does not keep
/// the arrays themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationSummary {
    pub count: u64,
    pub spectrum: Vec<usize>,
}

const CELL_GUARD: usize = 30;

/// Exhaustively enumerates the extremal n x m arrays by walking, row by
/// row, every acyclic covering support with at least ceil(m/n) cells per
/// row and at most n + m - 1 cells overall, then keeping the supports whose
/// forced solution exists. Guarded to n * m <= 30.
pub fn enumerate_extremal(n: usize, m: usize) -> Result<ExtremalCatalog> {
    enumerate_extremal_parallel(n, m, 1)
}

/// [`enumerate_extremal`] with the first-row choices split across worker
/// threads. The merged result is sorted, so the thread count never shows
/// in the output.
pub fn enumerate_extremal_parallel(n: usize, m: usize, threads: usize) -> Result<ExtremalCatalog> {
    let engine = Enumerator::new(n, m)?;
    let mut matrices = Vec::new();
    engine.run(threads.max(1), &mut |matrix| matrices.push(matrix));
    matrices.sort_unstable();
    debug_assert!(matrices.windows(2).all(|w| w[0] < w[1]));
    Ok(ExtremalCatalog { n, m, matrices })
}

/// Streaming variant: counts arrays and records the support sizes seen,
/// without materializing the catalog.
pub fn enumeration_summary(n: usize, m: usize, threads: usize) -> Result<EnumerationSummary> {
    let engine = Enumerator::new(n, m)?;
    let mut count = 0u64;
    let mut sizes = BTreeSet::new();
    engine.run(threads.max(1), &mut |matrix| {
        count += 1;
        sizes.insert(support(&matrix).len());
    });
    Ok(EnumerationSummary {
        count,
        spectrum: sizes.into_iter().collect(),
    })
}

/// Sorted set of support sizes attained by extremal n x m arrays.
pub fn support_size_spectrum(n: usize, m: usize) -> Result<Vec<usize>> {
    Ok(enumeration_summary(n, m, 1)?.spectrum)
}

/// Confirms by exhaustion that the smallest observed extremal support size
/// equals n + m - gcd(n, m).
pub fn verify_lower_bound(n: usize, m: usize) -> Result<bool> {
    let spectrum = support_size_spectrum(n, m)?;
    Ok(spectrum.first() == Some(&min_support_size(n, m)))
}

struct Enumerator {
    n: usize,
    m: usize,
    budget: usize,
    min_deg: usize,
    masks_by_size: Vec<Vec<u32>>,
    full_cover: u32,
}

impl Enumerator {
    fn new(n: usize, m: usize) -> Result<Enumerator> {
        if n == 0 || m == 0 {
            return Err(Error::ZeroDimension { n, m });
        }
        if n * m > CELL_GUARD {
            return Err(Error::GuardExceeded {
                what: "support enumeration",
                details: format!("{n} * {m} cells exceed the limit of {CELL_GUARD}"),
            });
        }
        let mut masks_by_size: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
        for mask in 0u32..1 << m {
            masks_by_size[mask.count_ones() as usize].push(mask);
        }
        Ok(Enumerator {
            n,
            m,
            budget: n + m - 1,
            min_deg: m.div_ceil(n),
            masks_by_size,
            full_cover: (1 << m) - 1,
        })
    }

    /// First-row candidates in deterministic (size, mask) order.
    fn first_row_choices(&self) -> Vec<u32> {
        (self.min_deg..=self.m)
            .flat_map(|size| self.masks_by_size[size].iter().copied())
            .collect()
    }

    fn run(&self, threads: usize, sink: &mut impl FnMut(ExactMatrix)) {
        let first = self.first_row_choices();
        if threads <= 1 || first.len() <= 1 {
            let mut state = SearchState::new(self.n, self.m);
            for &mask in &first {
                self.try_mask(0, mask, &mut state, sink);
            }
            return;
        }
        let workers = threads.min(first.len());
        let chunk_len = first.len().div_ceil(workers);
        let mut buckets: Vec<Vec<ExactMatrix>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = first
                .chunks(chunk_len)
                .map(|chunk| {
                    scope.spawn(move || {
                        let mut found = Vec::new();
                        let mut state = SearchState::new(self.n, self.m);
                        for &mask in chunk {
                            self.try_mask(0, mask, &mut state, &mut |matrix| found.push(matrix));
                        }
                        found
                    })
                })
                .collect();
            for handle in handles {
                buckets.push(handle.join().expect("enumeration workers do not panic"));
            }
        });
        for matrix in buckets.into_iter().flatten() {
            sink(matrix);
        }
    }

    fn try_mask(
        &self,
        row: usize,
        mask: u32,
        state: &mut SearchState,
        sink: &mut impl FnMut(ExactMatrix),
    ) {
        let size = mask.count_ones() as usize;
        let remaining_rows = self.n - row - 1;
        if state.used + size + remaining_rows * self.min_deg > self.budget {
            return;
        }
        let cover = state.cover | mask;
        let uncovered = self.m - cover.count_ones() as usize;
        let capacity = if remaining_rows == 0 {
            0
        } else {
            self.budget - state.used - size
        };
        if uncovered > capacity {
            return;
        }

        let undo_base = state.undo.len();
        let mut bits = mask;
        while bits != 0 {
            let col = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            match state.sets.union(row, self.n + col) {
                Some(attached) => state.undo.push(attached),
                None => {
                    // Cycle: roll back this row's unions and give up on the mask.
                    while state.undo.len() > undo_base {
                        let attached = state.undo.pop().expect("stack is non-empty");
                        state.sets.undo(attached);
                    }
                    return;
                }
            }
        }

        let saved_cover = state.cover;
        state.cover = cover;
        state.used += size;
        state.rows.push(mask);

        if row + 1 == self.n {
            debug_assert_eq!(cover, self.full_cover);
            self.emit(state, sink);
        } else {
            for next_size in self.min_deg..=self.m {
                for &next_mask in &self.masks_by_size[next_size] {
                    self.try_mask(row + 1, next_mask, state, sink);
                }
            }
        }

        state.rows.pop();
        state.used -= size;
        state.cover = saved_cover;
        while state.undo.len() > undo_base {
            let attached = state.undo.pop().expect("stack is non-empty");
            state.sets.undo(attached);
        }
    }

    fn emit(&self, state: &SearchState, sink: &mut impl FnMut(ExactMatrix)) {
        let mut listed = Vec::with_capacity(state.used);
        for (row, &mask) in state.rows.iter().enumerate() {
            let mut bits = mask;
            while bits != 0 {
                let col = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                listed.push((row, col));
            }
        }
        let support_set =
            SupportSet::new(self.n, self.m, listed).expect("masks stay inside the grid");
        if let SolveOutcome::Forced(matrix) = solve_support(&support_set) {
            sink(matrix);
        }
    }
}

struct SearchState {
    sets: DisjointSet,
    undo: Vec<usize>,
    rows: Vec<u32>,
    cover: u32,
    used: usize,
}

impl SearchState {
    fn new(n: usize, m: usize) -> SearchState {
        SearchState {
            sets: DisjointSet::new(n + m),
            undo: Vec::new(),
            rows: Vec::with_capacity(n),
            cover: 0,
            used: 0,
        }
    }
}

/// Lexicographically smallest row-major entry sequence over all row and
/// column permutations. Two arrays are equivalent (equal up to independent
/// row and column permutations) exactly when their canonical forms agree.
///
/// All n! row orders are tried; for a fixed row order the best column order
/// is simply the columns sorted as top-down tuples, which keeps the search
/// factorial in n only. Guarded to n <= 8, m <= 16.
pub fn canonical_matrix(matrix: &ExactMatrix) -> Result<ExactMatrix> {
    let (n, m) = (matrix.n(), matrix.m());
    if n > 8 || m > 16 {
        return Err(Error::GuardExceeded {
            what: "canonical form",
            details: format!("{n}x{m} exceeds the 8x16 limit"),
        });
    }

    let mut row_order: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<crate::ratio::Rational>> = None;
    permute(&mut row_order, 0, &mut |rows| {
        let mut col_order: Vec<usize> = (0..m).collect();
        col_order.sort_by(|&a, &b| {
            rows.iter()
                .map(|&i| matrix.get(i, a))
                .cmp(rows.iter().map(|&i| matrix.get(i, b)))
        });
        let candidate: Vec<crate::ratio::Rational> = rows
            .iter()
            .flat_map(|&i| col_order.iter().map(move |&j| matrix.get(i, j)))
            .collect();
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    });
    let entries = best.expect("at least one permutation exists");
    ExactMatrix::from_rows(entries.chunks(m).map(<[_]>::to_vec).collect())
}

fn permute(items: &mut [usize], start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, visit);
        items.swap(start, i);
    }
}

/// One equivalence class of a catalog: a canonical representative and the
/// number of catalog members it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub representative: ExactMatrix,
    pub size: usize,
}

/// Partitions a catalog into equivalence classes. For m = n + 1 the class
/// key is the canonical code of the underlying unlabeled tree, which
/// classifies these arrays completely; otherwise the canonical matrix is
/// the key. Classes come back sorted by representative.
pub fn equivalence_classes(catalog: &ExtremalCatalog) -> Result<Vec<EquivalenceClass>> {
    let mut classes: Vec<EquivalenceClass> = if catalog.m() == catalog.n() + 1 {
        let mut by_code: BTreeMap<_, Vec<&ExactMatrix>> = BTreeMap::new();
        for matrix in catalog.matrices() {
            let code = canonical_tree_code(&array_to_tree(matrix)?);
            by_code.entry(code).or_default().push(matrix);
        }
        by_code
            .into_values()
            .map(|members| {
                Ok(EquivalenceClass {
                    representative: canonical_matrix(members[0])?,
                    size: members.len(),
                })
            })
            .collect::<Result<_>>()?
    } else {
        let mut by_canon: BTreeMap<ExactMatrix, usize> = BTreeMap::new();
        for matrix in catalog.matrices() {
            *by_canon.entry(canonical_matrix(matrix)?).or_insert(0) += 1;
        }
        by_canon
            .into_iter()
            .map(|(representative, size)| EquivalenceClass {
                representative,
                size,
            })
            .collect()
    };
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{block_compose, euclid_array, trapezoid_array};
    use crate::graph::is_extremal;
    use crate::matrix::verify_doubly_stochastic;
    use crate::ratio::Rational;

    #[test]
    fn catalog_2_3_lists_all_six_arrays() {
        let catalog = enumerate_extremal(2, 3).unwrap();
        assert_eq!(catalog.len(), 6);
        for matrix in catalog.matrices() {
            assert!(is_extremal(matrix));
        }
        assert!(catalog.contains(&euclid_array(2, 3).unwrap()));
        assert!(catalog.contains(&trapezoid_array(2, 3).unwrap()));
    }

    #[test]
    fn catalog_2_4_is_prescribed_by_block_structure() {
        let catalog = enumerate_extremal(2, 4).unwrap();
        assert_eq!(catalog.len(), 6);
        assert_eq!(support_size_spectrum(2, 4).unwrap(), vec![4]);
        for matrix in catalog.matrices() {
            assert_eq!(support(matrix).len(), 4);
        }
    }

    #[test]
    fn spectrum_3_4_is_minimal_only() {
        assert_eq!(support_size_spectrum(3, 4).unwrap(), vec![6]);
        assert!(verify_lower_bound(3, 4).unwrap());
    }

    #[test]
    fn summary_agrees_with_catalog() {
        let summary = enumeration_summary(3, 4, 1).unwrap();
        let catalog = enumerate_extremal(3, 4).unwrap();
        assert_eq!(summary.count, catalog.len() as u64);
        assert_eq!(summary.spectrum, vec![6]);
        assert_eq!(catalog.len(), 96);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let one = enumerate_extremal_parallel(3, 4, 1).unwrap();
        let four = enumerate_extremal_parallel(3, 4, 4).unwrap();
        assert_eq!(one, four);
        let summary = enumeration_summary(4, 5, 3).unwrap();
        assert_eq!(summary.count, 3000);
    }

    #[test]
    fn guard_rejects_large_grids() {
        assert!(matches!(
            enumerate_extremal(6, 6),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn canonical_matrix_is_equivalence_invariant() {
        let a = euclid_array(3, 4).unwrap();
        // Rows of `a` reversed, then columns reordered as (1, 0, 3, 2).
        let permuted = ExactMatrix::from_integer_rows(&[
            vec![0, 0, 1, 3],
            vec![3, 0, 1, 0],
            vec![0, 3, 1, 0],
        ])
        .unwrap();
        assert_eq!(
            canonical_matrix(&a).unwrap(),
            canonical_matrix(&permuted).unwrap()
        );
        assert_ne!(
            canonical_matrix(&a).unwrap(),
            canonical_matrix(&trapezoid_array(3, 4).unwrap()).unwrap()
        );
        assert!(canonical_matrix(&ExactMatrix::zero(9, 9).unwrap()).is_err());
    }

    #[test]
    fn classes_of_3_4_match_the_two_golden_shapes() {
        let catalog = enumerate_extremal(3, 4).unwrap();
        let classes = equivalence_classes(&catalog).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes.iter().map(|c| c.size).sum::<usize>(), 96);
        let expected: BTreeSet<ExactMatrix> = [
            canonical_matrix(&euclid_array(3, 4).unwrap()).unwrap(),
            canonical_matrix(&trapezoid_array(3, 4).unwrap()).unwrap(),
        ]
        .into_iter()
        .collect();
        let got: BTreeSet<ExactMatrix> = classes
            .into_iter()
            .map(|c| c.representative)
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn single_class_when_columns_are_a_multiple() {
        let catalog = enumerate_extremal(2, 4).unwrap();
        let classes = equivalence_classes(&catalog).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].size, 6);
    }

    #[test]
    fn support_nine_without_extremality_exists_at_4_6() {
        // Two distinct minimal-support arrays replacing one block each: their
        // midpoint keeps nine support cells but sits strictly inside the
        // polytope, so a nine-cell support does not certify extremality.
        let t = trapezoid_array(2, 3).unwrap();
        let e = euclid_array(2, 3).unwrap();
        let a = block_compose(&[t.clone(), t.clone()], 2).unwrap();
        let b = block_compose(&[e, t], 2).unwrap();
        let mid = a
            .add(&b)
            .unwrap()
            .scale(Rational::new(1, 2).unwrap());
        assert!(verify_doubly_stochastic(&mid));
        assert_eq!(support(&mid).len(), 9);
        assert!(!is_extremal(&mid));
    }
}
