//! Finite decomposition property checks.
//!
//! Suspension streams satisfy the finite decomposition property by
//! construction — the local pieces are the alphabet pieces, anchored at the
//! left end of the origin cell — and [`check_fdp`] returns exactly that
//! tautological decomposition.
//!
//! The *simple* f.d.p. is a determinism condition on the decomposition: if
//! two factor instances share a common final part of suspension length at
//! least ℓ, and their continuations agree as measures on `[0, ℓ)`, then
//! their first continuation pieces must coincide. [`check_sfdp`] searches
//! the stream's decomposition sequence exhaustively for violating pairs up
//! to a factor-size cutoff (in cells); the quantification over all
//! decompositions is fixed to the suspension's own, which is the one the
//! construction supplies. A found counterexample carries enough data to
//! re-verify its three defining conditions from scratch.
//!
//! [`sufficient_sfdp`] is the cheap sufficient criterion: the property
//! holds whenever at most one alphabet piece is a multiple of Lebesgue
//! measure.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::measures::{concatenate, Piece, WindowConvention};
use crate::suspension::{PieceAlphabet, PotentialStream};
use crate::{Error, Result};

/// The tautological decomposition of a suspension stream: distinct local
/// pieces, the cell sequence indexing into them, and the anchor `x₀` (left
/// end of the origin cell).
#[derive(Clone, Debug)]
pub struct Decomposition {
    pieces: Vec<Piece>,
    /// Index into `pieces` for each cell from the origin cell onward.
    sequence: Vec<usize>,
    anchor: f64,
}

impl Decomposition {
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    /// Re-concatenates the decomposition from the anchor and restricts to
    /// `(0, upto]`, for comparison against the stream content.
    pub fn reconstruct(&self, upto: f64) -> Result<Piece> {
        let mut parts = Vec::new();
        let mut total = 0.0;
        for &idx in &self.sequence {
            if total >= upto {
                break;
            }
            parts.push(self.pieces[idx].clone());
            total += self.pieces[idx].length();
        }
        if total < upto {
            return Err(Error::ExtendWord);
        }
        let glued = concatenate(&parts)?;
        glued.restrict(0.0, upto)
    }
}

/// Returns the tautological decomposition (alphabet pieces, anchored at the
/// origin cell's left edge). Infallible for suspension-built streams.
pub fn check_fdp(stream: &PotentialStream) -> Decomposition {
    let (classes, class_of) = piece_classes(stream.alphabet(), stream.tol());
    let symbols = stream.word().symbols();
    let sequence = symbols[stream.origin_cell()..]
        .iter()
        .map(|c| class_of[c])
        .collect();
    Decomposition {
        pieces: classes,
        sequence,
        anchor: -stream.offset(),
    }
}

/// Distinct alphabet pieces (within `tol`) and the symbol → class map.
fn piece_classes(alph: &PieceAlphabet, tol: f64) -> (Vec<Piece>, BTreeMap<char, usize>) {
    let mut classes: Vec<Piece> = Vec::new();
    let mut class_of = BTreeMap::new();
    for (sym, piece) in alph.pieces() {
        let idx = classes.iter().position(|p| p.piece_equal(piece, tol));
        let idx = match idx {
            Some(i) => i,
            None => {
                classes.push(piece.clone());
                classes.len() - 1
            }
        };
        class_of.insert(sym, idx);
    }
    (classes, class_of)
}

/// Sufficient criterion for the simple f.d.p. of a suspension: at most one
/// alphabet piece is a multiple of Lebesgue measure (zero included).
pub fn sufficient_sfdp(alph: &PieceAlphabet) -> bool {
    alph.pieces().filter(|(_, p)| p.is_lebesgue_multiple()).count() <= 1
}

/// Verdict of the s.f.d.p. search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfdpVerdict {
    /// No violating pair among factors up to the cutoff.
    VerifiedToCutoff,
    /// A violating pair was found (see the counterexample data).
    Counterexample,
    /// Search was clean *and* the Lebesgue-multiple criterion applies.
    SufficientCriterionPassed,
}

/// A violating pair: same past, same ℓ-window of the continuation,
/// different first pieces.
#[derive(Clone, Debug)]
pub struct SfdpCounterexample {
    /// Cell indices (into the stream's word) where the two continuations start.
    pub position_a: usize,
    pub position_b: usize,
    /// Number of cells in the shared past.
    pub common_cells: usize,
    /// Suspension length of the shared past (≥ ℓ).
    pub common_length: f64,
    /// First continuation pieces (these differ).
    pub first_a: Piece,
    pub first_b: Piece,
    /// The agreeing continuation measures on `[0, ℓ)`.
    pub window_a: Piece,
    pub window_b: Piece,
}

impl SfdpCounterexample {
    /// Re-derives all three defining conditions from the stream.
    pub fn verify(&self, stream: &PotentialStream, ell: f64) -> bool {
        let tol = stream.tol();
        let symbols = stream.word().symbols();
        let alph = stream.alphabet();
        let (i, j, k) = (self.position_a, self.position_b, self.common_cells);
        if i < k || j < k {
            return false;
        }
        // Common past: the k cells before each position carry equal pieces.
        for step in 1..=k {
            let pa = match alph.get(symbols[i - step]) {
                Ok(p) => p,
                Err(_) => return false,
            };
            let pb = match alph.get(symbols[j - step]) {
                Ok(p) => p,
                Err(_) => return false,
            };
            if !pa.piece_equal(pb, tol) {
                return false;
            }
        }
        if self.common_length < ell - tol {
            return false;
        }
        // Continuations agree as measures on [0, ℓ).
        let wa = match continuation_window(stream, i, ell) {
            Ok(Some(w)) => w,
            _ => return false,
        };
        let wb = match continuation_window(stream, j, ell) {
            Ok(Some(w)) => w,
            _ => return false,
        };
        if !wa.piece_equal(&wb, tol) {
            return false;
        }
        // First pieces differ.
        let fa = match alph.get(symbols[i]) {
            Ok(p) => p,
            Err(_) => return false,
        };
        let fb = match alph.get(symbols[j]) {
            Ok(p) => p,
            Err(_) => return false,
        };
        !fa.piece_equal(fb, tol)
    }
}

/// Report of an s.f.d.p. search.
#[derive(Clone, Debug)]
pub struct SfdpReport {
    pub verdict: SfdpVerdict,
    pub ell: f64,
    pub cutoff: usize,
    /// Continuation positions that entered the search.
    pub positions_checked: usize,
    pub counterexample: Option<SfdpCounterexample>,
}

/// The continuation measure `1_{[0,ℓ)}(ν_1 | ν_2 | …)` of the decomposition
/// factor starting at `cell`, built from the alphabet pieces themselves (so
/// the factor's own leading atom at 0 is included, and nothing from the
/// past leaks in). `None` when the word ends before ℓ is covered.
fn continuation_window(stream: &PotentialStream, cell: usize, ell: f64) -> Result<Option<Piece>> {
    let symbols = stream.word().symbols();
    let alph = stream.alphabet();
    let mut parts = Vec::new();
    let mut total = 0.0;
    let mut idx = cell;
    while total < ell {
        if idx >= symbols.len() {
            return Ok(None);
        }
        let piece = alph.get(symbols[idx])?;
        parts.push(piece.clone());
        total += piece.length();
        idx += 1;
    }
    let glued = concatenate(&parts)?;
    Ok(Some(glued.restrict_with(
        0.0,
        ell,
        WindowConvention::LeftClosedRightOpen,
    )?))
}

/// Exhaustive search for s.f.d.p. violations in the stream's decomposition
/// sequence, with factor sizes bounded by `cutoff` cells on each side.
///
/// Positions are grouped by the minimal piece-suffix of suspension length
/// ≥ ℓ preceding them; any pair with a common part of length ≥ ℓ shares
/// that minimal suffix, so the grouping is lossless. Within a group, a
/// violation is a pair with ℓ-agreeing continuations but different first
/// pieces. A larger cutoff only admits more positions, so a counterexample
/// found at some cutoff persists at every larger one.
pub fn check_sfdp(stream: &PotentialStream, ell: f64, cutoff: usize) -> Result<SfdpReport> {
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(Error::InvalidArgument("ℓ must be positive".into()));
    }
    if cutoff == 0 {
        return Err(Error::CutoffTooSmall { cutoff, ell });
    }
    let alph = stream.alphabet();
    if (cutoff as f64) * alph.max_length() < ell {
        return Err(Error::CutoffTooSmall { cutoff, ell });
    }
    let tol = stream.tol();
    let symbols = stream.word().symbols();
    let n = symbols.len();
    let (_, class_of) = piece_classes(alph, tol);
    let seq: Vec<usize> = symbols.iter().map(|c| class_of[c]).collect();
    let lengths: Vec<f64> = symbols
        .iter()
        .map(|&c| alph.length_of(c))
        .collect::<Result<_>>()?;

    struct Rep {
        first_class: usize,
        window: Piece,
        position: usize,
    }
    let mut groups: BTreeMap<Vec<usize>, Vec<Rep>> = BTreeMap::new();
    let mut positions_checked = 0usize;

    for i in 1..n {
        // Minimal past suffix reaching ℓ, capped by the cutoff.
        let mut k = 0usize;
        let mut past_len = 0.0;
        while past_len < ell {
            k += 1;
            if k > cutoff || k > i {
                break;
            }
            past_len += lengths[i - k];
        }
        if past_len < ell {
            continue;
        }
        let window = match continuation_window(stream, i, ell)? {
            Some(w) => w,
            None => continue,
        };
        positions_checked += 1;
        let key: Vec<usize> = seq[i - k..i].to_vec();
        let reps = groups.entry(key).or_default();
        let mut known = false;
        for rep in reps.iter() {
            if rep.window.piece_equal(&window, tol) {
                if rep.first_class != seq[i] {
                    let counterexample = SfdpCounterexample {
                        position_a: rep.position,
                        position_b: i,
                        common_cells: k,
                        common_length: past_len,
                        first_a: alph.get(symbols[rep.position])?.clone(),
                        first_b: alph.get(symbols[i])?.clone(),
                        window_a: rep.window.clone(),
                        window_b: window.clone(),
                    };
                    debug_assert!(counterexample.verify(stream, ell));
                    return Ok(SfdpReport {
                        verdict: SfdpVerdict::Counterexample,
                        ell,
                        cutoff,
                        positions_checked,
                        counterexample: Some(counterexample),
                    });
                }
                known = true;
                break;
            }
        }
        if !known {
            reps.push(Rep {
                first_class: seq[i],
                window,
                position: i,
            });
        }
    }

    Ok(SfdpReport {
        verdict: SfdpVerdict::VerifiedToCutoff,
        ell,
        cutoff,
        positions_checked,
        counterexample: None,
    })
}

/// [`check_sfdp`] with the verdict upgraded to
/// [`SfdpVerdict::SufficientCriterionPassed`] when the search is clean and
/// the Lebesgue-multiple criterion holds for the alphabet.
pub fn sfdp_report(stream: &PotentialStream, ell: f64, cutoff: usize) -> Result<SfdpReport> {
    let mut report = check_sfdp(stream, ell, cutoff)?;
    if report.verdict == SfdpVerdict::VerifiedToCutoff && sufficient_sfdp(stream.alphabet()) {
        report.verdict = SfdpVerdict::SufficientCriterionPassed;
    }
    Ok(report)
}

/// Checks the stream and its reflection ω(−·), as the spectral statement
/// requires both orientations.
pub fn check_sfdp_both(
    stream: &PotentialStream,
    ell: f64,
    cutoff: usize,
) -> Result<(SfdpReport, SfdpReport)> {
    let forward = sfdp_report(stream, ell, cutoff)?;
    let reflected = stream.reflected()?;
    let backward = sfdp_report(&reflected, ell, cutoff)?;
    Ok((forward, backward))
}

/// Default ℓ for a given alphabet: twice the longest cell, so any
/// continuation of length ≥ ℓ contains at least one full piece boundary.
pub fn default_ell(alph: &PieceAlphabet) -> f64 {
    2.0 * alph.max_length()
}
