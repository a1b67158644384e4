//! Oracle-equivalence tests: the transfer-matrix path is checked against an
//! independent fixed-step RK4 integration of −u″ + (v − E)u = 0, and the
//! spectral diagnostics against each other on periodic approximants.

use qc1d_core::measures::Piece;
use qc1d_core::spectral::{band_spectrum, lyapunov};
use qc1d_core::subshifts::Substitution;
use qc1d_core::suspension::PotentialStream;
use qc1d_core::transfer::{piece_transfer, TransferMatrix};
use qc1d_core::DEFAULT_TOL;

/// RK4 integration of the first-order system (u, u′)′ = (u′, (v − E)u)
/// across one constant-density segment.
fn rk4_segment(e: f64, v: f64, len: f64, mut u: f64, mut du: f64) -> (f64, f64) {
    let steps = (len / 1e-3).ceil().max(8.0) as usize;
    let h = len / steps as f64;
    let f = |u: f64, du: f64| (du, (v - e) * u);
    for _ in 0..steps {
        let (k1u, k1d) = f(u, du);
        let (k2u, k2d) = f(u + 0.5 * h * k1u, du + 0.5 * h * k1d);
        let (k3u, k3d) = f(u + 0.5 * h * k2u, du + 0.5 * h * k2d);
        let (k4u, k4d) = f(u + h * k3u, du + h * k3d);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        du += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }
    (u, du)
}

/// Column-by-column transfer matrix of an atom-free piece by RK4.
fn rk4_transfer(piece: &Piece, e: f64) -> TransferMatrix {
    assert!(piece.atoms().is_empty(), "oracle covers atom-free pieces");
    let mut cols = [[1.0, 0.0], [0.0, 1.0]];
    for col in &mut cols {
        let (mut u, mut du) = (col[0], col[1]);
        for (l, r, v) in piece.cells() {
            let (nu, ndu) = rk4_segment(e, v, r - l, u, du);
            u = nu;
            du = ndu;
        }
        *col = [u, du];
    }
    TransferMatrix::new(cols[0][0], cols[1][0], cols[0][1], cols[1][1])
}

#[test]
fn piece_transfer_matches_rk4_on_step_potentials() {
    let pieces = [
        Piece::constant(1.0, 2.5).unwrap(),
        Piece::constant(1.0, -1.75).unwrap(),
        Piece::new(
            1.0,
            vec![],
            vec![(0.0, 0.25, 3.0), (0.25, 0.6, -2.0), (0.6, 1.0, 0.5)],
        )
        .unwrap(),
        Piece::zero(1.0).unwrap(),
    ];
    for e in [-5.0, -0.5, 0.0, 1e-8, 0.3, 2.0, 7.7, 18.0] {
        for piece in &pieces {
            let fast = piece_transfer(piece, e);
            let slow = rk4_transfer(piece, e);
            for (a, b) in [
                (fast.m11, slow.m11),
                (fast.m12, slow.m12),
                (fast.m21, slow.m21),
                (fast.m22, slow.m22),
            ] {
                assert!((a - b).abs() < 1e-6, "E = {e}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn lyapunov_vanishes_on_most_approximant_bands() {
    // In-band energies of the level-10 periodic approximant should carry a
    // near-zero finite-scale exponent on the aperiodic stream: threshold
    // 5·ln(L)/L, required at 95% of sampled band midpoints.
    let phi = 1.618033988749895;
    let alph = qc1d_core::suspension::PieceAlphabet::from_pairs(vec![
        ('a', Piece::dirac(1.0, 0.0, 1.0).unwrap()),
        ('b', Piece::zero(phi).unwrap()),
    ])
    .unwrap();
    let subst = Substitution::fibonacci();
    let word = subst.iterate('a', 10).unwrap();
    let bands = band_spectrum(&word, &alph, 0.0, 20.0, 3000, 1e-8).unwrap();
    assert!(!bands.bands().is_empty());

    let big_l = 2000.0;
    let stream =
        PotentialStream::from_substitution(&subst, 'a', &alph, big_l + 50.0, 0.0, DEFAULT_TOL)
            .unwrap();
    let threshold = 5.0 * big_l.ln() / big_l;
    let midpoints = bands.midpoints();
    let mut small = 0usize;
    for &e in &midpoints {
        let g = lyapunov(&stream, e, big_l).unwrap();
        assert!(g >= -1e-9);
        if g <= threshold {
            small += 1;
        }
    }
    let fraction = small as f64 / midpoints.len() as f64;
    assert!(
        fraction >= 0.95,
        "only {small}/{} band midpoints below {threshold}",
        midpoints.len()
    );
}

#[test]
fn gap_energies_carry_positive_exponent() {
    // Complement check: energies well inside gaps of a high approximant
    // grow exponentially on the aperiodic stream.
    let phi = 1.618033988749895;
    let alph = qc1d_core::suspension::PieceAlphabet::from_pairs(vec![
        ('a', Piece::dirac(1.0, 0.0, 1.0).unwrap()),
        ('b', Piece::zero(phi).unwrap()),
    ])
    .unwrap();
    let subst = Substitution::fibonacci();
    let word = subst.iterate('a', 10).unwrap();
    let bands = band_spectrum(&word, &alph, 0.0, 20.0, 3000, 1e-8).unwrap();
    let stream =
        PotentialStream::from_substitution(&subst, 'a', &alph, 900.0, 0.0, DEFAULT_TOL).unwrap();

    // Midpoints of the widest gaps.
    let mut gaps: Vec<(f64, f64)> = Vec::new();
    let b = bands.bands();
    for w in b.windows(2) {
        gaps.push((w[0].1, w[1].0));
    }
    gaps.sort_by(|x, y| (y.1 - y.0).partial_cmp(&(x.1 - x.0)).unwrap());
    let l = 800.0;
    let threshold = 5.0 * f64::ln(l) / l;
    let take = gaps.len().min(3);
    for &(lo, hi) in gaps.iter().take(take) {
        let e = 0.5 * (lo + hi);
        let g = lyapunov(&stream, e, l).unwrap();
        assert!(
            g > threshold,
            "gap ({lo}, {hi}) midpoint exponent {g} not above {threshold}"
        );
    }
}
