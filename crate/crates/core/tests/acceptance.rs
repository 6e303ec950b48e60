//! Acceptance gate. One test per criterion; each line of `cargo test` output
//! below is the pass/fail verdict for that criterion.
//!
//! Fixture matrices are frozen from independently checked sources; counting
//! identities are cross-checked against the closed formula, and randomized
//! checks run on fixed seeds against test-side oracles implemented here.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dsarray::{
    array_to_tree, canonical_matrix, canonical_tree_code, count_extremal_formula,
    count_tree_classes, entry_multiset, enumerate_extremal, enumerate_trees, enumeration_summary,
    equivalence_classes, euclid_array, extremal_from_support, extremal_with_support_size,
    is_extremal, lemma_array, loukaki_pair, min_support_array, min_support_size, prufer_decode,
    solve_support, support, support_size_spectrum, trapezoid_array, trapezoid_profile,
    tree_to_array, verify_lower_bound, BlockMethod, Error, ExactMatrix, Rational, SolveOutcome,
    SupportSet,
};

fn matrix(rows: &[Vec<i64>]) -> ExactMatrix {
    ExactMatrix::from_integer_rows(rows).unwrap()
}

/// Division-chain 3 x 4 example, minimal support.
fn golden_3x4_diagonal() -> ExactMatrix {
    matrix(&[vec![3, 0, 0, 1], vec![0, 3, 0, 1], vec![0, 0, 3, 1]])
}

/// Trapezoid 3 x 4 example, minimal support.
fn golden_3x4_trapezoid() -> ExactMatrix {
    matrix(&[vec![1, 0, 0, 3], vec![2, 2, 0, 0], vec![0, 1, 3, 0]])
}

#[test]
fn criterion_01_golden_construction_matrices() {
    assert_eq!(euclid_array(3, 4).unwrap(), golden_3x4_diagonal());
    assert_eq!(trapezoid_array(3, 4).unwrap(), golden_3x4_trapezoid());
    assert_eq!(
        trapezoid_array(5, 7).unwrap(),
        matrix(&[
            vec![1, 0, 0, 1, 0, 5, 0],
            vec![0, 2, 0, 0, 0, 0, 5],
            vec![4, 0, 3, 0, 0, 0, 0],
            vec![0, 3, 0, 4, 0, 0, 0],
            vec![0, 0, 2, 0, 5, 0, 0],
        ])
    );
    assert_eq!(
        euclid_array(5, 7).unwrap(),
        matrix(&[
            vec![5, 0, 0, 0, 0, 2, 0],
            vec![0, 5, 0, 0, 0, 0, 2],
            vec![0, 0, 5, 0, 0, 2, 0],
            vec![0, 0, 0, 5, 0, 0, 2],
            vec![0, 0, 0, 0, 5, 1, 1],
        ])
    );
    println!("PASS criterion 1: all four construction goldens reproduced entrywise");
}

#[test]
fn criterion_02_lemma_array_matches_published_6x9() {
    // Frozen 6 x 9 display: 3 times an integer array with two connected
    // components and full support size 14.
    let display = matrix(&[
        vec![6, 3, 0, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 6, 3, 0, 0, 0, 0, 0],
        vec![0, 3, 0, 3, 3, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 0, 6, 3, 0, 0],
        vec![0, 0, 0, 0, 3, 0, 3, 3, 0],
        vec![0, 0, 0, 0, 0, 0, 0, 3, 6],
    ]);
    let connected = lemma_array(3, 2, 1).unwrap();
    assert!(is_extremal(&connected));
    assert_eq!(support(&connected).len(), 14);
    assert_eq!(
        canonical_matrix(&connected).unwrap(),
        canonical_matrix(&display).unwrap()
    );

    let two_components = lemma_array(3, 2, 2).unwrap();
    assert!(is_extremal(&two_components));
    assert_eq!(support(&two_components).len(), 13);

    let minimal = min_support_array(6, 9, BlockMethod::Euclid).unwrap();
    assert!(is_extremal(&minimal));
    assert_eq!(support(&minimal).len(), 12);
    assert_eq!(min_support_size(6, 9), 12);
    println!("PASS criterion 2: 6x9 lemma construction matches the published array up to equivalence");
}

#[test]
fn criterion_03_counts_match_closed_formula() {
    let expected: [u64; 4] = [1, 6, 96, 3000];
    for (n, &want) in (1..=4).zip(&expected) {
        let catalog = enumerate_extremal(n, n + 1).unwrap();
        assert_eq!(catalog.matrices().len() as u64, want, "n = {n}");
        assert_eq!(
            count_extremal_formula(n),
            num_bigint::BigUint::from(want),
            "n = {n}"
        );
    }
    let summary = enumeration_summary(5, 6, 4).unwrap();
    assert_eq!(summary.count, 155_520);
    assert_eq!(count_extremal_formula(5), num_bigint::BigUint::from(155_520u64));
    println!("PASS criterion 3: extremal counts 1, 6, 96, 3000, 155520 reproduced");
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (1..=k).collect();
    fn heap(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(items, k - 1, out);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(&mut items, k, &mut out);
    out
}

#[test]
fn criterion_04_tree_bijection_covers_catalog_and_round_trips() {
    // Every tree with labeled vertices and labeled edges maps to a distinct
    // extremal n x (n+1) array, and together they exhaust the catalog.
    for n in 1..=4 {
        let catalog: BTreeSet<ExactMatrix> = enumerate_extremal(n, n + 1)
            .unwrap()
            .matrices()
            .iter()
            .cloned()
            .collect();
        let mut from_trees = BTreeSet::new();
        for tree in enumerate_trees(n + 1).unwrap() {
            for perm in permutations(n) {
                let relabeled = tree.relabel_edges(&perm).unwrap();
                assert!(
                    from_trees.insert(tree_to_array(&relabeled)),
                    "distinct labeled trees gave the same array at n = {n}"
                );
            }
        }
        assert_eq!(from_trees, catalog, "n = {n}");
    }

    // Inverting the map recovers the tree, edge labels included.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let n: usize = rng.random_range(1..=12);
        let seq: Vec<usize> = (0..n.saturating_sub(1))
            .map(|_| rng.random_range(1..=n + 1))
            .collect();
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.shuffle(&mut rng);
        let tree = prufer_decode(&seq).unwrap().relabel_edges(&perm).unwrap();
        assert_eq!(array_to_tree(&tree_to_array(&tree)).unwrap(), tree);
    }
    println!("PASS criterion 4: tree catalogs match for n <= 4 and 1000 random round trips hold");
}

#[test]
fn criterion_05_support_size_spectra_and_lower_bound() {
    assert_eq!(support_size_spectrum(3, 4).unwrap(), vec![6]);
    assert_eq!(support_size_spectrum(2, 4).unwrap(), vec![4]);
    assert_eq!(enumeration_summary(4, 6, 4).unwrap().spectrum, vec![8, 9]);
    for (n, m) in [(2, 2), (2, 3), (2, 4), (3, 4), (4, 6)] {
        assert!(verify_lower_bound(n, m).unwrap(), "lower bound at {n} x {m}");
    }
    println!("PASS criterion 5: spectra {{6}}, {{4}}, {{8,9}} and minimal-size lower bounds verified");
}

#[test]
fn criterion_06_prescribed_support_sizes() {
    for (n, m, valid) in [
        (6usize, 9usize, 1..=3usize),
        (4, 6, 1..=2),
        (6, 10, 1..=2),
        (9, 12, 1..=3),
    ] {
        for s in valid {
            let built = extremal_with_support_size(n, m, s).unwrap();
            assert!(is_extremal(&built), "{n} x {m}, {s} components");
            assert_eq!(
                support(&built).len(),
                n + m - s,
                "{n} x {m}, {s} components"
            );
        }
    }
    println!("PASS criterion 6: every admissible support size n+m-s realized at all four shapes");
}

#[test]
fn criterion_07_equivalence_class_counts() {
    let expected = [1usize, 1, 2, 3];
    for (n, &want) in (1..=4).zip(&expected) {
        let catalog = enumerate_extremal(n, n + 1).unwrap();
        let classes = equivalence_classes(&catalog).unwrap();
        assert_eq!(classes.len(), want, "n = {n}");
        assert_eq!(count_tree_classes(n).unwrap(), want, "n = {n}");
        assert_eq!(
            classes.iter().map(|c| c.size).sum::<usize>(),
            catalog.matrices().len(),
            "n = {n}"
        );
    }
    assert_eq!(count_tree_classes(5).unwrap(), 6);
    assert_eq!(expected.iter().sum::<usize>() + 6, 13);

    // The two 3 x 4 classes are exactly the two golden examples.
    let classes = equivalence_classes(&enumerate_extremal(3, 4).unwrap()).unwrap();
    let reps: BTreeSet<ExactMatrix> =
        classes.iter().map(|c| c.representative.clone()).collect();
    let golden: BTreeSet<ExactMatrix> = [golden_3x4_diagonal(), golden_3x4_trapezoid()]
        .iter()
        .map(|g| canonical_matrix(g).unwrap())
        .collect();
    assert_eq!(reps, golden);
    println!("PASS criterion 7: class counts 1, 1, 2, 3, 6 (13 in total) with matching 3x4 representatives");
}

#[test]
fn criterion_08_equal_multiset_pairs() {
    for n in 6..=12 {
        let (first, second) = loukaki_pair(n).unwrap();
        assert!(is_extremal(&first), "n = {n}");
        assert!(is_extremal(&second), "n = {n}");
        assert_eq!(support(&first).len(), 2 * n, "n = {n}");
        assert_eq!(support(&second).len(), 2 * n, "n = {n}");
        assert_eq!(
            entry_multiset(&first),
            entry_multiset(&second),
            "n = {n}"
        );
        // Stronger than equal multisets: each row holds the same two values.
        for i in 0..n {
            let pair = |m: &ExactMatrix| {
                let mut row: Vec<Rational> =
                    m.row(i).iter().copied().filter(|e| !e.is_zero()).collect();
                row.sort();
                row
            };
            assert_eq!(pair(&first), pair(&second), "n = {n}, row {i}");
        }
        assert_ne!(
            canonical_tree_code(&array_to_tree(&first).unwrap()),
            canonical_tree_code(&array_to_tree(&second).unwrap()),
            "pair at n = {n} must not be equivalent"
        );
    }

    // The 6 x 7 pair is the published one, up to row/column permutations.
    let display_a = matrix(&[
        vec![6, 1, 0, 0, 0, 0, 0],
        vec![0, 1, 6, 0, 0, 0, 0],
        vec![0, 4, 0, 3, 0, 0, 0],
        vec![0, 0, 0, 2, 5, 0, 0],
        vec![0, 0, 0, 0, 1, 6, 0],
        vec![0, 0, 0, 1, 0, 0, 6],
    ]);
    let display_b = matrix(&[
        vec![6, 1, 0, 0, 0, 0, 0],
        vec![0, 0, 1, 6, 0, 0, 0],
        vec![0, 0, 3, 0, 4, 0, 0],
        vec![0, 5, 0, 0, 2, 0, 0],
        vec![0, 0, 1, 0, 0, 6, 0],
        vec![0, 0, 1, 0, 0, 0, 6],
    ]);
    let (first, second) = loukaki_pair(6).unwrap();
    let canon = |m: &ExactMatrix| canonical_matrix(m).unwrap();
    let got: BTreeSet<ExactMatrix> = [canon(&first), canon(&second)].into_iter().collect();
    let want: BTreeSet<ExactMatrix> = [canon(&display_a), canon(&display_b)].into_iter().collect();
    assert_eq!(got, want);

    assert!(matches!(
        loukaki_pair(5),
        Err(Error::PairOrderTooSmall { n: 5 })
    ));
    println!("PASS criterion 8: equal-multiset inequivalent pairs for n = 6..12, published 6x7 pair matched");
}

#[test]
fn criterion_09_trapezoid_tiles_the_cyclic_group() {
    // The trapezoid profile tiles Z_{nm} along both subgroups: summing over
    // the multiples of n gives m at every point, and vice versa.
    for m in 2..=50usize {
        for n in 1..m {
            if num_integer::gcd(n, m) != 1 {
                continue;
            }
            let profile = trapezoid_profile(n, m);
            let tau: Vec<i64> = (0..n * m).map(|t| profile.value(t as i64)).collect();
            for t in 0..n * m {
                let along_n: i64 = (0..m).map(|q| tau[(t + q * n) % (n * m)]).sum();
                assert_eq!(along_n, m as i64, "n = {n}, m = {m}, t = {t}");
                let along_m: i64 = (0..n).map(|q| tau[(t + q * m) % (n * m)]).sum();
                assert_eq!(along_m, n as i64, "n = {n}, m = {m}, t = {t}");
            }
        }
    }
    println!("PASS criterion 9: trapezoid tiling identities hold for all coprime n < m <= 50");
}

/// Test-side acyclicity oracle: every component of the bipartite cell graph
/// must have exactly (vertices - 1) edges. Independent of the library's
/// union-find.
fn oracle_acyclic(n: usize, m: usize, cells: &BTreeSet<(usize, usize)>) -> bool {
    let total = n + m;
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); total];
    for &(row, col) in cells {
        adjacency[row].push(n + col);
        adjacency[n + col].push(row);
    }
    let mut seen = vec![false; total];
    for start in 0..total {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let (mut vertices, mut degree_sum) = (0usize, 0usize);
        while let Some(v) = stack.pop() {
            vertices += 1;
            degree_sum += adjacency[v].len();
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if degree_sum / 2 != vertices - 1 {
            return false;
        }
    }
    true
}

fn random_row_subsets(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    per_row: usize,
) -> BTreeSet<(usize, usize)> {
    let mut cells = BTreeSet::new();
    for row in 0..n {
        for col in rand::seq::index::sample(rng, m, per_row) {
            cells.insert((row, col));
        }
    }
    cells
}

fn assert_valid_cycle_witness(witness: &[(usize, usize)], support: &SupportSet) {
    assert!(witness.len() >= 4 && witness.len().is_multiple_of(2), "{witness:?}");
    let distinct: BTreeSet<_> = witness.iter().collect();
    assert_eq!(distinct.len(), witness.len(), "{witness:?}");
    let rows: BTreeSet<_> = witness.iter().map(|c| c.0).collect();
    let cols: BTreeSet<_> = witness.iter().map(|c| c.1).collect();
    assert!(rows.len() >= 2 && cols.len() >= 2, "{witness:?}");
    // Consecutive cells must alternate between sharing a row and sharing a
    // column (either phase), and the walk must close up.
    let row_first = witness[0].0 == witness[1].0;
    for (index, &cell) in witness.iter().enumerate() {
        assert!(support.contains(cell), "{witness:?}");
        let next = witness[(index + 1) % witness.len()];
        if (index % 2 == 0) == row_first {
            assert!(cell.0 == next.0 && cell.1 != next.1, "{witness:?}");
        } else {
            assert!(cell.1 == next.1 && cell.0 != next.0, "{witness:?}");
        }
    }
}

#[test]
fn criterion_10_row_count_and_acyclicity_characterize_wide_supports() {
    // On an n x (kn+1) grid, a set S is the support of an extremal array
    // exactly when every row holds k + 1 cells and S is acyclic.
    for (pair_index, &(n, k)) in [(2usize, 2usize), (3, 2), (2, 3), (4, 2)].iter().enumerate() {
        let m = k * n + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(10 + pair_index as u64);

        let mut accepted = 0;
        while accepted < 200 {
            let cells = random_row_subsets(&mut rng, n, m, k + 1);
            if !oracle_acyclic(n, m, &cells) {
                continue;
            }
            accepted += 1;
            let s = SupportSet::new(n, m, cells.iter().copied()).unwrap();
            let built = extremal_from_support(k, &s).unwrap();
            assert!(is_extremal(&built));
            assert_eq!(support(&built), s);
            match solve_support(&s) {
                SolveOutcome::Forced(solved) => assert_eq!(solved, built),
                other => panic!("valid support must force a solution, got {other:?}"),
            }
        }

        // Violation one: a cell moved between rows breaks the row counts,
        // and the report names exactly the two touched rows.
        for _ in 0..100 {
            let (from, to) = loop {
                let from = rng.random_range(0..n);
                let to = rng.random_range(0..n);
                if from != to {
                    break (from, to);
                }
            };
            let mut cells = loop {
                let cells = random_row_subsets(&mut rng, n, m, k + 1);
                if oracle_acyclic(n, m, &cells) {
                    break cells;
                }
            };
            let moved = *cells.iter().find(|c| c.0 == from).unwrap();
            let target_col = (0..m).find(|&c| !cells.contains(&(to, c))).unwrap();
            cells.remove(&moved);
            cells.insert((to, target_col));
            let s = SupportSet::new(n, m, cells.iter().copied()).unwrap();
            match extremal_from_support(k, &s) {
                Err(Error::SupportConditions { report }) => {
                    assert_eq!(report.expected_row_cells, k + 1);
                    let found: Vec<(usize, usize)> = report
                        .row_violations
                        .iter()
                        .map(|v| (v.row, v.found))
                        .collect();
                    let mut want = vec![(from, k), (to, k + 2)];
                    want.sort_unstable();
                    assert_eq!(found, want);
                }
                other => panic!("expected a row-count rejection, got {other:?}"),
            }
        }

        // Violation two: correct row counts but a cycle; the witness must be
        // a genuine cycle inside the submitted support.
        for _ in 0..100 {
            let cells = loop {
                let cells = random_row_subsets(&mut rng, n, m, k + 1);
                if !oracle_acyclic(n, m, &cells) {
                    break cells;
                }
            };
            let s = SupportSet::new(n, m, cells.iter().copied()).unwrap();
            match extremal_from_support(k, &s) {
                Err(Error::SupportConditions { report }) => {
                    assert!(report.row_violations.is_empty());
                    let witness = report.cycle.expect("cyclic support must produce a witness");
                    assert_valid_cycle_witness(&witness, &s);
                }
                other => panic!("expected a cycle rejection, got {other:?}"),
            }
        }
    }
    println!("PASS criterion 10: 800 valid and 800 violating random supports behaved as characterized");
}
