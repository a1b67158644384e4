//! Property tests on dyadic-rational piece data, where every operation is
//! exact and canonical-form equality at tolerance 0 is meaningful.

use proptest::prelude::*;

use qc1d_core::measures::{concatenate, Piece};
use qc1d_core::subshifts::Substitution;
use qc1d_core::suspension::{PieceAlphabet, PotentialStream};
use qc1d_core::transfer::piece_transfer;
use qc1d_core::DEFAULT_TOL;

/// Dyadic rational in (0, 8] with 1/16 resolution.
fn dyadic_len() -> impl Strategy<Value = f64> {
    (1u32..=128).prop_map(|n| n as f64 / 16.0)
}

/// A piece with dyadic structure: atoms strictly inside (0, length] and a
/// four-cell dyadic partition (so every boundary stays exact under the
/// partition arithmetic below; equal neighbors merge canonically).
fn dyadic_piece() -> impl Strategy<Value = Piece> {
    (
        dyadic_len(),
        proptest::collection::vec((1u32..=16, -8i32..=8), 0..4),
        proptest::collection::vec(-6i32..=6, 4),
    )
        .prop_map(|(len, raw_atoms, raw_values)| {
            let atoms: Vec<(f64, f64)> = raw_atoms
                .into_iter()
                .map(|(num, w)| (len * num as f64 / 16.0, w as f64 / 2.0))
                .collect();
            let mut steps = Vec::new();
            for (i, v) in raw_values.iter().enumerate() {
                let left = len * i as f64 / 4.0;
                let right = len * (i + 1) as f64 / 4.0;
                steps.push((left, right, *v as f64 / 2.0));
            }
            Piece::new(len, atoms, steps).expect("valid dyadic piece")
        })
}

proptest! {
    #[test]
    fn concat_length_is_additive(pieces in proptest::collection::vec(dyadic_piece(), 1..5)) {
        let total: f64 = pieces.iter().map(|p| p.length()).sum();
        let glued = concatenate(&pieces).unwrap();
        prop_assert_eq!(glued.length(), total);
    }

    #[test]
    fn concat_is_associative(a in dyadic_piece(), b in dyadic_piece(), c in dyadic_piece()) {
        let left = concatenate(&[concatenate(&[a.clone(), b.clone()]).unwrap(), c.clone()]).unwrap();
        let flat = concatenate(&[a, b, c]).unwrap();
        prop_assert!(left.piece_equal(&flat, 0.0));
    }

    #[test]
    fn total_variation_is_idempotent(p in dyadic_piece()) {
        let tv1 = p.total_variation().into_piece();
        let tv2 = tv1.total_variation().into_piece();
        prop_assert!(tv1.piece_equal(&tv2, 0.0));
    }

    #[test]
    fn total_variation_dominates_signed_mass(p in dyadic_piece()) {
        let tv = p.total_variation();
        let n = 16;
        for i in 0..n {
            let a = p.length() * i as f64 / n as f64;
            let b = p.length() * (i + 1) as f64 / n as f64;
            prop_assert!(tv.mass(a, b) + 1e-12 >= p.signed_mass(a, b).abs());
        }
    }

    #[test]
    fn reflect_is_involution(p in dyadic_piece()) {
        prop_assert!(p.reflect().reflect().piece_equal(&p, 0.0));
    }

    #[test]
    fn restrict_partition_reconstructs(p in dyadic_piece(), cuts in 1usize..4) {
        // Partition [0, L] into equal dyadic parts; atoms sit strictly
        // inside (0, L], so every atom lands in exactly one (a, b] part.
        let n = 1 << cuts;
        let mut parts = Vec::new();
        for i in 0..n {
            let a = p.length() * i as f64 / n as f64;
            let b = p.length() * (i + 1) as f64 / n as f64;
            parts.push(p.restrict(a, b).unwrap());
        }
        let rebuilt = concatenate(&parts).unwrap();
        prop_assert!(rebuilt.piece_equal(&p, 0.0));
    }

    #[test]
    fn piece_equal_is_equivalence_at_zero(a in dyadic_piece(), b in dyadic_piece(), c in dyadic_piece()) {
        prop_assert!(a.piece_equal(&a, 0.0));
        if a.piece_equal(&b, 0.0) {
            prop_assert!(b.piece_equal(&a, 0.0));
        }
        if a.piece_equal(&b, 0.0) && b.piece_equal(&c, 0.0) {
            prop_assert!(a.piece_equal(&c, 0.0));
        }
    }

    #[test]
    fn norm_lu_nonnegative_and_monotone_under_tv(p in dyadic_piece()) {
        let n = p.norm_lu();
        prop_assert!(n >= 0.0);
        // |μ| has the same uniform local norm as μ.
        prop_assert!((p.total_variation().piece().norm_lu() - n).abs() < 1e-12);
    }

    #[test]
    fn window_additivity_on_dyadic_suspension(
        seed_values in proptest::collection::vec(0usize..2, 8..20),
        cut_num in 1u32..31,
    ) {
        let alph = PieceAlphabet::from_pairs(vec![
            ('a', Piece::dirac(1.0, 0.25, 1.0).unwrap()),
            ('b', Piece::constant(0.5, -1.5).unwrap()),
        ]).unwrap();
        let symbols: Vec<char> = seed_values.iter().map(|&i| if i == 0 { 'a' } else { 'b' }).collect();
        let word = qc1d_core::subshifts::TwoSidedWord::new(symbols, 0).unwrap();
        let stream = PotentialStream::new(word, alph, 0.0, DEFAULT_TOL).unwrap();
        let (_, hi) = stream.span();
        let c = hi.min(4.0);
        let b = c * cut_num as f64 / 32.0;
        if b > 0.0 && b < c {
            let whole = stream.window(0.0, c).unwrap();
            let glued = concatenate(&[
                stream.window(0.0, b).unwrap(),
                stream.window(b, c).unwrap(),
            ]).unwrap();
            prop_assert!(whole.piece_equal(&glued, 0.0));
        }
    }

    #[test]
    fn transfer_det_one_on_dyadic_pieces(p in dyadic_piece(), e_num in -40i32..80) {
        let e = e_num as f64 / 4.0;
        let t = piece_transfer(&p, e);
        let scale = t.max_abs_entry().max(1.0);
        prop_assert!((t.det() - 1.0).abs() <= 1e-10 * scale * scale);
    }

    #[test]
    fn iterate_length_follows_incidence_matrix(n in 0usize..12) {
        for s in [Substitution::fibonacci(), Substitution::thue_morse()] {
            let m = s.incidence_matrix();
            let n_sym = s.alphabet().len();
            let seed = s.alphabet()[0];
            let mut col = vec![0u128; n_sym];
            col[0] = 1;
            for _ in 0..n {
                let mut next = vec![0u128; n_sym];
                for i in 0..n_sym {
                    for k in 0..n_sym {
                        next[i] += m[i][k] * col[k];
                    }
                }
                col = next;
            }
            let expected: u128 = col.iter().sum();
            prop_assert_eq!(s.iterate(seed, n).unwrap().len() as u128, expected);
        }
    }

    #[test]
    fn cubes_verify_by_recheck(prefix_len in 50usize..400, q_max in 1usize..20) {
        let w = Substitution::fibonacci().word_of_length('a', prefix_len).unwrap();
        for cube in w.find_cubes(q_max) {
            prop_assert!(cube.verify(&w));
        }
    }
}
