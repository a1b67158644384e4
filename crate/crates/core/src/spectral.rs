//! Spectral diagnostics: band spectra of periodic approximants, Lyapunov
//! exponents, and the integrated density of states.
//!
//! The aperiodic operator itself has no computable spectrum at desk scale;
//! the standard surrogate is the periodization of a finite word (an
//! *approximant*), whose spectrum is exactly the energies where the Floquet
//! discriminant — the trace of the period transfer matrix — has absolute
//! value ≤ 2. [`band_spectrum`] scans a grid for that condition and refines
//! band edges by bisection; bands narrower than the grid spacing can be
//! missed, and the returned [`BandSet`] records the resolution used so the
//! caveat travels with the data.
//!
//! [`lyapunov`] is the finite-scale exponent `log‖T(0, L)‖ / L` (spectral
//! norm, renormalized products so nothing overflows), and [`ids`] counts
//! Dirichlet-solution zeros on `(0, L]` by Sturm oscillation. Zero counting
//! is analytic per constant-density segment (trigonometric, linear or
//! hyperbolic), and point masses never create zeros: a kick changes `u′`
//! only, while `u` stays continuous.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::math;
use crate::measures::Piece;
use crate::subshifts::Word;
use crate::suspension::{PieceAlphabet, PotentialStream};
use crate::transfer::{delta_kick, free_propagator, piece_transfer, SolutionState, TransferMatrix};
use crate::{Error, Result};

/// Transfer matrix of one period of the word-periodized potential, with a
/// per-symbol matrix cache. Identical (up to roundoff) to transferring the
/// concatenated period piece: coinciding boundary atoms merge into a single
/// kick either way.
pub fn word_transfer(word: &Word, alph: &PieceAlphabet, e: f64) -> Result<TransferMatrix> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("empty word".into()));
    }
    let mut memo: BTreeMap<char, TransferMatrix> = BTreeMap::new();
    let mut m = TransferMatrix::IDENTITY;
    for &c in word.symbols() {
        let t = match memo.get(&c) {
            Some(t) => *t,
            None => {
                let t = piece_transfer(alph.get(c)?, e);
                memo.insert(c, t);
                t
            }
        };
        m = t * m;
    }
    Ok(m)
}

/// The Floquet discriminant: trace of the period transfer matrix.
pub fn discriminant(word: &Word, alph: &PieceAlphabet, e: f64) -> Result<f64> {
    Ok(word_transfer(word, alph, e)?.trace())
}

/// Energy intervals where the periodized word's discriminant satisfies
/// `|Δ(E)| ≤ 2`, with bisected edges.
#[derive(Clone, Debug, PartialEq)]
pub struct BandSet {
    bands: Vec<(f64, f64)>,
    e_min: f64,
    e_max: f64,
    grid_points: usize,
    refine_tol: f64,
}

impl BandSet {
    /// Disjoint, sorted band intervals `[lo, hi]` inside the scan window.
    pub fn bands(&self) -> &[(f64, f64)] {
        &self.bands
    }

    pub fn total_length(&self) -> f64 {
        self.bands.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn e_min(&self) -> f64 {
        self.e_min
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn refine_tol(&self) -> f64 {
        self.refine_tol
    }

    /// Grid spacing of the scan. Bands narrower than this may have been
    /// missed entirely; edges are refined to `refine_tol` only once a band
    /// is seen on the grid.
    pub fn min_resolvable_width(&self) -> f64 {
        (self.e_max - self.e_min) / (self.grid_points - 1) as f64
    }

    pub fn contains(&self, e: f64) -> bool {
        self.bands.iter().any(|&(lo, hi)| lo <= e && e <= hi)
    }

    /// Midpoints of all bands (handy energy samples inside the spectrum).
    pub fn midpoints(&self) -> Vec<f64> {
        self.bands.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect()
    }
}

/// Scans `[e_min, e_max]` on `grid_points` points for `|Δ| ≤ 2` and refines
/// every in/out transition by bisection to width `refine_tol`.
pub fn band_spectrum(
    word: &Word,
    alph: &PieceAlphabet,
    e_min: f64,
    e_max: f64,
    grid_points: usize,
    refine_tol: f64,
) -> Result<BandSet> {
    if !(e_min < e_max) || !e_min.is_finite() || !e_max.is_finite() {
        return Err(Error::InvalidArgument("need e_min < e_max".into()));
    }
    if grid_points < 2 {
        return Err(Error::InvalidArgument("need at least 2 grid points".into()));
    }
    if !(refine_tol > 0.0) {
        return Err(Error::InvalidArgument("refine_tol must be positive".into()));
    }
    let h = (e_max - e_min) / (grid_points - 1) as f64;
    let in_band = |e: f64| -> Result<bool> { Ok(math::abs(discriminant(word, alph, e)?) <= 2.0) };

    let mut flags = Vec::with_capacity(grid_points);
    for i in 0..grid_points {
        let e = e_min + h * i as f64;
        flags.push(in_band(e)?);
    }

    // Bisect each transition, keeping one point on each side.
    let mut edges: Vec<f64> = Vec::new();
    for i in 0..grid_points - 1 {
        if flags[i] != flags[i + 1] {
            let mut a = e_min + h * i as f64;
            let mut b = e_min + h * (i + 1) as f64;
            let a_flag = flags[i];
            while b - a > refine_tol {
                let mid = 0.5 * (a + b);
                if in_band(mid)? == a_flag {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            edges.push(0.5 * (a + b));
        }
    }

    let mut bands = Vec::new();
    let mut cursor = if flags[0] { Some(e_min) } else { None };
    let mut edge_iter = edges.into_iter();
    for i in 0..grid_points - 1 {
        if flags[i] != flags[i + 1] {
            let edge = edge_iter.next().expect("one edge per transition");
            match cursor {
                Some(start) => {
                    bands.push((start, edge));
                    cursor = None;
                }
                None => cursor = Some(edge),
            }
        }
    }
    if let Some(start) = cursor {
        bands.push((start, e_max));
    }

    Ok(BandSet {
        bands,
        e_min,
        e_max,
        grid_points,
        refine_tol,
    })
}

/// Walks the stream cell by cell over `(0, l]`, calling `f` with the window
/// piece of each segment. Full-cell pieces are memoized per (symbol, next
/// symbol) pair — the window of a full cell also carries the next piece's
/// leading atom on its right edge.
fn walk_cells<F: FnMut(&Piece)>(stream: &PotentialStream, l: f64, mut f: F) -> Result<()> {
    let bounds = stream.bounds();
    let symbols = stream.word().symbols();
    // First cell: the one whose right edge lies strictly past 0.
    let mut cell = match bounds.partition_point(|&b| b <= 0.0) {
        0 => 0,
        k => k - 1,
    };
    let mut pos = 0.0f64;
    let mut memo: BTreeMap<(char, char), Piece> = BTreeMap::new();
    while pos < l {
        if cell + 1 >= bounds.len() {
            return Err(Error::ExtendWord);
        }
        let next_bound = bounds[cell + 1];
        if next_bound <= pos {
            cell += 1;
            continue;
        }
        let seg_end = if next_bound < l { next_bound } else { l };
        let full = pos == bounds[cell] && seg_end == next_bound && cell + 1 < symbols.len();
        if full {
            let key = (symbols[cell], symbols[cell + 1]);
            if !memo.contains_key(&key) {
                memo.insert(key, stream.window(pos, seg_end)?);
            }
            f(&memo[&key]);
        } else {
            f(&stream.window(pos, seg_end)?);
        }
        pos = seg_end;
        cell += 1;
    }
    Ok(())
}

/// Finite-scale Lyapunov exponent `log‖T(0, L)‖ / L` (spectral norm), with
/// the product renormalized cell by cell so long hyperbolic stretches never
/// overflow. Nonnegative up to roundoff, since a unimodular matrix has
/// spectral norm ≥ 1.
pub fn lyapunov(stream: &PotentialStream, e: f64, l: f64) -> Result<f64> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::InvalidArgument("length must be positive".into()));
    }
    let mut m = TransferMatrix::IDENTITY;
    let mut log_scale = 0.0f64;
    walk_cells(stream, l, |piece| {
        m = piece_transfer(piece, e) * m;
        let norm = m.frobenius_norm();
        if norm > 1e100 {
            m = m.scale(1.0 / norm);
            log_scale += math::ln(norm);
        }
    })?;
    Ok((log_scale + math::ln(m.spectral_norm())) / l)
}

/// Zeros of `A·cos + (B/k)·sin`-type solutions on one constant-density
/// segment `(0, len]`, plus the propagated end state.
fn zeros_in_segment(k2: f64, len: f64, state: SolutionState) -> (u64, SolutionState) {
    let end = free_propagator(k2, len).apply(state);
    let (u0, du0) = (state.u, state.du);
    let count = if math::abs(k2) * len * len < 1e-12 {
        // Effectively linear: u(t) = u0 + du0·t.
        if du0 != 0.0 {
            let t = -u0 / du0;
            u64::from(t > 0.0 && t <= len)
        } else {
            0
        }
    } else if k2 > 0.0 {
        // u(t) = C sin(kt + φ): count multiples of π crossed by the phase.
        let k = math::sqrt(k2);
        let phi = math::atan2(u0, du0 / k);
        let hi = math::floor((phi + k * len) / core::f64::consts::PI);
        let lo = math::floor(phi / core::f64::consts::PI);
        (hi - lo).max(0.0) as u64
    } else {
        // u(t) = u0 cosh(κt) + (du0/κ) sinh(κt): at most one zero.
        let kappa = math::sqrt(-k2);
        if du0 == 0.0 {
            0
        } else {
            let z = -u0 * kappa / du0;
            if math::abs(z) < 1.0 {
                let t = math::atanh(z) / kappa;
                u64::from(t > 0.0 && t <= len)
            } else {
                0
            }
        }
    };
    (count, end)
}

/// Zeros of the solution through one piece, segment by segment; kicks at
/// atoms update `u′` between segments and never create zeros themselves.
fn zeros_through_piece(piece: &Piece, e: f64, mut state: SolutionState) -> (u64, SolutionState) {
    let atoms = piece.atoms();
    let mut ai = 0usize;
    let mut zeros = 0u64;
    for (l, r, v) in piece.cells() {
        while ai < atoms.len() && atoms[ai].pos <= l {
            state = delta_kick(atoms[ai].weight).apply(state);
            ai += 1;
        }
        let mut cursor = l;
        while ai < atoms.len() && atoms[ai].pos < r {
            let pos = atoms[ai].pos;
            if pos > cursor {
                let (z, s) = zeros_in_segment(e - v, pos - cursor, state);
                zeros += z;
                state = s;
                cursor = pos;
            }
            state = delta_kick(atoms[ai].weight).apply(state);
            ai += 1;
        }
        if r > cursor {
            let (z, s) = zeros_in_segment(e - v, r - cursor, state);
            zeros += z;
            state = s;
        }
    }
    while ai < atoms.len() {
        state = delta_kick(atoms[ai].weight).apply(state);
        ai += 1;
    }
    (zeros, state)
}

/// Integrated density of states by Sturm oscillation: the number of zeros
/// on `(0, L]` of the Dirichlet solution (`u(0) = 0`, `u′(0) = 1`), divided
/// by `L`. Nondecreasing in `E` up to one zero count (1/L).
pub fn ids(stream: &PotentialStream, e: f64, l: f64) -> Result<f64> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::InvalidArgument("length must be positive".into()));
    }
    let mut state = SolutionState::new(0.0, 1.0);
    let mut zeros = 0u64;
    walk_cells(stream, l, |piece| {
        let (z, s) = zeros_through_piece(piece, e, state);
        zeros += z;
        // Zeros are scale-invariant; keep the state normalized.
        let norm = s.norm();
        state = if norm > 0.0 {
            SolutionState::new(s.u / norm, s.du / norm)
        } else {
            s
        };
    })?;
    Ok(zeros as f64 / l)
}

/// One row of a spectral scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub e: f64,
    pub trace: f64,
    pub in_band: bool,
    pub lyapunov: f64,
    pub ids: f64,
}

/// Grid scan of discriminant, Lyapunov exponent and IDS for the
/// periodization of a word.
#[derive(Clone, Debug)]
pub struct SpectralScan {
    pub rows: Vec<ScanRow>,
    /// Periodized word length (cells per period).
    pub word_len: usize,
    /// Substitution level the word came from, when applicable.
    pub approximant_level: Option<usize>,
    /// Stream length used for the Lyapunov and IDS columns.
    pub length: f64,
}

pub fn scan(
    word: &Word,
    alph: &PieceAlphabet,
    e_min: f64,
    e_max: f64,
    grid_points: usize,
    length: f64,
    approximant_level: Option<usize>,
    tol: f64,
) -> Result<SpectralScan> {
    if !(e_min < e_max) || grid_points < 2 {
        return Err(Error::InvalidArgument("bad energy grid".into()));
    }
    if !(length > 0.0) {
        return Err(Error::InvalidArgument("length must be positive".into()));
    }
    let stream = PotentialStream::periodic(word, alph, length + 2.0 * alph.max_length(), 0.0, tol)?;
    let h = (e_max - e_min) / (grid_points - 1) as f64;
    let mut rows = Vec::with_capacity(grid_points);
    for i in 0..grid_points {
        let e = e_min + h * i as f64;
        let trace = discriminant(word, alph, e)?;
        rows.push(ScanRow {
            e,
            trace,
            in_band: math::abs(trace) <= 2.0,
            lyapunov: lyapunov(&stream, e, length)?,
            ids: ids(&stream, e, length)?,
        });
    }
    Ok(SpectralScan {
        rows,
        word_len: word.len(),
        approximant_level,
        length,
    })
}
