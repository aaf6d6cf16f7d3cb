//! Property tests for the crate's structural invariants.

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use penrec::evaluation::{accuracy, classify, confusion, roc};
use penrec::solver::soft_threshold;
use penrec::{assign_folds, split, Dataset};

fn lattice_scores(n: usize) -> impl Strategy<Value = Vec<f64>> {
    // scores on a coarse lattice so strictly increasing transforms cannot
    // merge distinct values through rounding
    prop::collection::vec((-128i32..=128).prop_map(|v| v as f64 / 64.0), n..=n)
}

proptest! {
    #[test]
    fn soft_threshold_shrinks_toward_zero(z in -100.0f64..100.0, gamma in 0.0f64..50.0) {
        let s = soft_threshold(z, gamma);
        prop_assert_eq!(s.abs(), (z.abs() - gamma).max(0.0));
        if s != 0.0 {
            prop_assert_eq!(s.signum(), z.signum());
        }
    }

    #[test]
    fn split_partitions_and_repeats(n in 2usize..300, seed in any::<u64>(), frac in 0.05f64..0.95) {
        let n_train = (frac * n as f64).round() as usize;
        prop_assume!(n_train > 0 && n_train < n);
        let a = split(n, seed, frac).unwrap();
        let b = split(n, seed, frac).unwrap();
        prop_assert_eq!(&a, &b);
        let mut all: Vec<usize> = a.train_indices.iter().chain(&a.test_indices).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(a.train_indices.len(), n_train);
    }

    #[test]
    fn fold_sizes_are_balanced(n in 4usize..400, k in 2usize..12, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let labels = assign_folds(n, k, seed).unwrap();
        let mut counts = vec![0usize; k];
        for &l in &labels { counts[l] += 1; }
        let max = counts.iter().max().unwrap();
        let min = counts.iter().min().unwrap();
        prop_assert!(max - min <= 1);
        prop_assert_eq!(labels, assign_folds(n, k, seed).unwrap());
    }

    #[test]
    fn standardize_round_trips(rows in 3usize..20, cols in 1usize..5, seed in any::<u64>()) {
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let x = DMatrix::from_fn(rows, cols, |_, _| next() * 10.0 - 5.0);
        let y = DVector::from_fn(rows, |_, _| next());
        let d = Dataset::new(x.clone(), y, (0..cols).map(|j| format!("c{j}")).collect()).unwrap();
        if let Ok(std) = d.standardize() {
            let back = std.destandardize().unwrap();
            for i in 0..rows {
                for j in 0..cols {
                    prop_assert!((back.x()[(i, j)] - x[(i, j)]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn raising_the_threshold_never_adds_positives(scores in lattice_scores(30), t1 in -2.0f64..2.0, shift in 0.0f64..2.0) {
        let lo = classify(&scores, t1);
        let hi = classify(&scores, t1 + shift);
        for (a, b) in lo.iter().zip(&hi) {
            prop_assert!(b <= a);
        }
    }

    #[test]
    fn roc_is_invariant_under_increasing_transforms(scores in lattice_scores(40), labels in prop::collection::vec(0u8..2, 40)) {
        prop_assume!(labels.contains(&1) && labels.contains(&0));
        let base = roc(&scores, &labels).unwrap();
        let affine: Vec<f64> = scores.iter().map(|s| 2.0 * s + 1.0).collect();
        let exps: Vec<f64> = scores.iter().map(|s| s.exp()).collect();
        prop_assert_eq!(&roc(&affine, &labels).unwrap(), &base);
        prop_assert_eq!(&roc(&exps, &labels).unwrap(), &base);
    }

    #[test]
    fn accuracy_agrees_with_confusion_cells(pred in prop::collection::vec(0u8..2, 1..60), seed in any::<u64>()) {
        let obs: Vec<u8> = pred.iter().enumerate().map(|(i, _)| ((seed >> (i % 60)) & 1) as u8).collect();
        let acc = accuracy(&pred, &obs).unwrap();
        let m = confusion(&pred, &obs).unwrap();
        prop_assert!((acc - m.accuracy()).abs() < 1e-12);
        prop_assert_eq!(m.total(), pred.len());
    }
}
