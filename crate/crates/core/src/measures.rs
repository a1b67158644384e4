//! Finite pieces of signed measures on an interval.
//!
//! A [`Piece`] represents a signed measure ν supported on `[0, L]`, `L > 0`,
//! consisting of finitely many point masses (atoms) plus a piecewise
//! constant density. This class is closed under concatenation, restriction,
//! translation and reflection, which is all the suspension construction
//! needs, and every integral it involves is exact.
//!
//! Window conventions are half-open `(a, b]` throughout: an atom sitting
//! exactly on a window's left endpoint belongs to the window on its left.
//! This matches the unit windows `(a, a+1]` of the uniform local norm
//! [`Piece::norm_lu`] and makes boundary atoms belong to exactly one window.
//!
//! Pieces are canonicalized on construction: atoms at equal positions are
//! merged, zero-weight atoms are dropped, and adjacent density cells with
//! equal values are fused. Equality ([`Piece::piece_equal`]) is equality of
//! canonical forms; `tol = 0` is exact and appropriate for dyadic-rational
//! data, while irrational lengths (golden ratio cells and the like) compare
//! under the global default tolerance [`crate::DEFAULT_TOL`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result, DEFAULT_TOL};

/// Which endpoint of a half-open window owns a boundary atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowConvention {
    /// `(a, b]` — the global default, matching the unit windows of ‖·‖_lu.
    LeftOpenRightClosed,
    /// `[a, b)` — used where the decomposition calculus compares
    /// continuations on `[0, ℓ)`.
    LeftClosedRightOpen,
}

/// A point mass: weight `weight` at position `pos` in piece coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub pos: f64,
    pub weight: f64,
}

/// A signed measure with finite atom set and piecewise constant density,
/// supported on `[0, length]` and normalized so the interval starts at 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    length: f64,
    atoms: Vec<Atom>,
    /// Cell boundaries: `breaks[0] == 0.0`, `breaks.last() == length`,
    /// strictly increasing.
    breaks: Vec<f64>,
    /// Density value per cell; `values.len() == breaks.len() - 1`, adjacent
    /// values distinct (canonical form).
    values: Vec<f64>,
}

impl Piece {
    /// Builds a piece from raw data and canonicalizes it.
    ///
    /// `steps` lists density cells as `(left, right, value)`; they must tile
    /// `[0, length]` in order (gaps up to [`DEFAULT_TOL`] are snapped shut).
    /// An empty list means zero density.
    pub fn new(length: f64, atoms: Vec<(f64, f64)>, steps: Vec<(f64, f64, f64)>) -> Result<Self> {
        if !length.is_finite() || length <= 0.0 {
            return Err(Error::InvalidPiece(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        let mut atom_list = Vec::with_capacity(atoms.len());
        for (pos, weight) in atoms {
            if !pos.is_finite() || !weight.is_finite() {
                return Err(Error::InvalidPiece("non-finite atom data".into()));
            }
            if pos < 0.0 || pos > length {
                return Err(Error::InvalidPiece(format!(
                    "atom position {pos} outside [0, {length}]"
                )));
            }
            atom_list.push(Atom { pos, weight });
        }

        let mut breaks = vec![0.0];
        let mut values = Vec::new();
        if steps.is_empty() {
            breaks.push(length);
            values.push(0.0);
        } else {
            let mut cursor = 0.0;
            for (left, right, value) in &steps {
                if !left.is_finite() || !right.is_finite() || !value.is_finite() {
                    return Err(Error::InvalidPiece("non-finite step data".into()));
                }
                if math::abs(left - cursor) > DEFAULT_TOL {
                    return Err(Error::InvalidPiece(format!(
                        "step cells must tile the interval: gap at {cursor} vs {left}"
                    )));
                }
                if *right <= cursor {
                    return Err(Error::InvalidPiece(format!(
                        "step cell ({left}, {right}) has nonpositive width"
                    )));
                }
                breaks.push(*right);
                values.push(*value);
                cursor = *right;
            }
            if math::abs(cursor - length) > DEFAULT_TOL {
                return Err(Error::InvalidPiece(format!(
                    "step cells end at {cursor}, expected {length}"
                )));
            }
        }

        Ok(Self::assemble(length, atom_list, breaks, values))
    }

    /// The zero measure on `[0, length]`.
    pub fn zero(length: f64) -> Result<Self> {
        Self::new(length, Vec::new(), Vec::new())
    }

    /// A single point mass on an otherwise empty interval.
    pub fn dirac(length: f64, pos: f64, weight: f64) -> Result<Self> {
        Self::new(length, vec![(pos, weight)], Vec::new())
    }

    /// A constant density on `[0, length]` (a multiple of Lebesgue measure).
    pub fn constant(length: f64, value: f64) -> Result<Self> {
        Self::new(length, Vec::new(), vec![(0.0, length, value)])
    }

    /// Canonicalizes pre-sorted, pre-validated parts. Used by internal
    /// walkers whose output is consistent by construction.
    pub(crate) fn assemble(
        length: f64,
        mut atoms: Vec<Atom>,
        breaks: Vec<f64>,
        values: Vec<f64>,
    ) -> Self {
        atoms.sort_by(|a, b| a.pos.partial_cmp(&b.pos).expect("finite atom positions"));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for atom in atoms {
            match merged.last_mut() {
                Some(last) if last.pos == atom.pos => last.weight += atom.weight,
                _ => merged.push(atom),
            }
        }
        merged.retain(|a| a.weight != 0.0);

        debug_assert_eq!(values.len() + 1, breaks.len());
        let mut cbreaks = Vec::with_capacity(breaks.len());
        let mut cvalues: Vec<f64> = Vec::with_capacity(values.len());
        cbreaks.push(0.0);
        for (i, &v) in values.iter().enumerate() {
            match cvalues.last() {
                Some(&prev) if prev == v => {
                    *cbreaks.last_mut().expect("nonempty") = breaks[i + 1];
                }
                _ => {
                    cbreaks.push(breaks[i + 1]);
                    cvalues.push(v);
                }
            }
        }
        *cbreaks.last_mut().expect("nonempty") = length;

        Self {
            length,
            atoms: merged,
            breaks: cbreaks,
            values: cvalues,
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Density cells as `(left, right, value)` triples, in order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breaks
            .windows(2)
            .zip(self.values.iter())
            .map(|(w, &v)| (w[0], w[1], v))
    }

    pub fn cell_count(&self) -> usize {
        self.values.len()
    }

    /// True for the zero measure.
    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.values.iter().all(|&v| v == 0.0)
    }

    /// True iff the piece is `c · Lebesgue` on its interval (no atoms, one
    /// constant density value — including `c = 0`).
    pub fn is_lebesgue_multiple(&self) -> bool {
        self.atoms.is_empty() && self.values.len() == 1
    }

    /// Signed mass of the half-open window `(a, b]`.
    pub fn signed_mass(&self, a: f64, b: f64) -> f64 {
        self.mass_with(a, b, false, true, false)
    }

    /// Mass with explicit endpoint handling; `absolute` sums |atom| and |v|.
    fn mass_with(&self, a: f64, b: f64, include_left: bool, include_right: bool, absolute: bool) -> f64 {
        if b < a || (b == a && !(include_left && include_right)) {
            return 0.0;
        }
        let mut total = 0.0;
        for atom in &self.atoms {
            let in_left = if include_left { atom.pos >= a } else { atom.pos > a };
            let in_right = if include_right { atom.pos <= b } else { atom.pos < b };
            if in_left && in_right {
                total += if absolute { math::abs(atom.weight) } else { atom.weight };
            }
        }
        for (l, r, v) in self.cells() {
            let lo = if l > a { l } else { a };
            let hi = if r < b { r } else { b };
            if hi > lo {
                total += (hi - lo) * if absolute { math::abs(v) } else { v };
            }
        }
        total
    }

    /// The uniform local norm `sup_a |μ|((a, a+1])` of the piece viewed as a
    /// compactly supported measure on ℝ.
    ///
    /// The sup of the window mass, as a function of the window position `a`,
    /// is piecewise affine with jumps only where a window endpoint crosses an
    /// atom or a density breakpoint; it therefore suffices to examine the
    /// one-sided limits at each atom position / breakpoint and at each such
    /// point minus 1. The left limit at `c` is the mass of `[c, c+1)`.
    pub fn norm_lu(&self) -> f64 {
        let mut candidates: Vec<f64> = Vec::with_capacity(2 * (self.atoms.len() + self.breaks.len()));
        for atom in &self.atoms {
            candidates.push(atom.pos);
            candidates.push(atom.pos - 1.0);
        }
        for &b in &self.breaks {
            candidates.push(b);
            candidates.push(b - 1.0);
        }
        let mut best: f64 = 0.0;
        for &c in &candidates {
            let right_continuous = self.mass_with(c, c + 1.0, false, true, true);
            let left_limit = self.mass_with(c, c + 1.0, true, false, true);
            if right_continuous > best {
                best = right_continuous;
            }
            if left_limit > best {
                best = left_limit;
            }
        }
        best
    }

    /// The total variation |μ|: atom weights and density values replaced by
    /// their absolute values (with canonical re-merging).
    pub fn total_variation(&self) -> TotalVariation {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                pos: a.pos,
                weight: math::abs(a.weight),
            })
            .collect();
        let values = self.values.iter().map(|&v| math::abs(v)).collect();
        TotalVariation {
            piece: Self::assemble(self.length, atoms, self.breaks.clone(), values),
        }
    }

    /// Restriction `1_{(a, b]} ν`, translated back to start at 0.
    ///
    /// Atoms follow the half-open convention; in particular an atom exactly
    /// at `a` is dropped (it belongs to the window on the left).
    pub fn restrict(&self, a: f64, b: f64) -> Result<Piece> {
        self.restrict_with(a, b, WindowConvention::LeftOpenRightClosed)
    }

    /// Restriction under an explicit boundary convention.
    pub fn restrict_with(&self, a: f64, b: f64, conv: WindowConvention) -> Result<Piece> {
        if !a.is_finite() || !b.is_finite() || a >= b {
            return Err(Error::EmptyInterval);
        }
        if a < -DEFAULT_TOL || b > self.length + DEFAULT_TOL {
            return Err(Error::InvalidPiece(format!(
                "restriction ({a}, {b}] outside [0, {}]",
                self.length
            )));
        }
        let a = a.max(0.0);
        let b = b.min(self.length);
        let len = b - a;
        let keep = |pos: f64| match conv {
            WindowConvention::LeftOpenRightClosed => pos > a && pos <= b,
            WindowConvention::LeftClosedRightOpen => pos >= a && pos < b,
        };
        let atoms = self
            .atoms
            .iter()
            .filter(|at| keep(at.pos))
            .map(|at| Atom {
                pos: at.pos - a,
                weight: at.weight,
            })
            .collect();
        let mut breaks = vec![0.0];
        let mut values = Vec::new();
        for (l, r, v) in self.cells() {
            let lo = if l > a { l } else { a };
            let hi = if r < b { r } else { b };
            if hi > lo {
                breaks.push(hi - a);
                values.push(v);
            }
        }
        if values.is_empty() {
            breaks.push(len);
            values.push(0.0);
        }
        Ok(Self::assemble(len, atoms, breaks, values))
    }

    /// Shifts the content right by `t ≥ 0`, embedding ν(· − t) in the
    /// enlarged interval `[0, length + t]` (zero density on `[0, t)`).
    pub fn translate(&self, t: f64) -> Result<Piece> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "translation offset must be nonnegative, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(self.clone());
        }
        let len = self.length + t;
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                pos: a.pos + t,
                weight: a.weight,
            })
            .collect();
        let mut breaks = vec![0.0, t];
        let mut values = vec![0.0];
        for (_, r, v) in self.cells() {
            breaks.push(r + t);
            values.push(v);
        }
        Ok(Self::assemble(len, atoms, breaks, values))
    }

    /// The reflected piece ν(L − ·): positions map to `length − pos`.
    ///
    /// An exact involution on dyadic-rational data.
    pub fn reflect(&self) -> Piece {
        let atoms = self
            .atoms
            .iter()
            .rev()
            .map(|a| Atom {
                pos: self.length - a.pos,
                weight: a.weight,
            })
            .collect();
        let mut breaks = vec![0.0];
        let mut values = Vec::new();
        for (l, _, v) in self.cells().collect::<Vec<_>>().into_iter().rev() {
            breaks.push(self.length - l);
            values.push(v);
        }
        Self::assemble(self.length, atoms, breaks, values)
    }

    /// Canonical-form equality within `tol`: lengths, atom positions and
    /// weights, and aligned density cells must all agree within `tol`.
    ///
    /// `tol = 0` is exact equality. A positive `tol` absorbs numeric jitter
    /// but still requires the same canonical structure (atom and cell
    /// counts), so it is not transitive; only `tol = 0` is an equivalence.
    pub fn piece_equal(&self, other: &Piece, tol: f64) -> bool {
        if math::abs(self.length - other.length) > tol {
            return false;
        }
        if self.atoms.len() != other.atoms.len() || self.values.len() != other.values.len() {
            return false;
        }
        for (a, b) in self.atoms.iter().zip(other.atoms.iter()) {
            if math::abs(a.pos - b.pos) > tol || math::abs(a.weight - b.weight) > tol {
                return false;
            }
        }
        for (a, b) in self.breaks.iter().zip(other.breaks.iter()) {
            if math::abs(a - b) > tol {
                return false;
            }
        }
        for (a, b) in self.values.iter().zip(other.values.iter()) {
            if math::abs(a - b) > tol {
                return false;
            }
        }
        true
    }
}

/// End-to-end gluing: piece `j` is shifted by the total length of the pieces
/// before it and the measures are added (coinciding boundary atoms merge).
pub fn concatenate(pieces: &[Piece]) -> Result<Piece> {
    if pieces.is_empty() {
        return Err(Error::EmptyConcatenation);
    }
    let mut offset = 0.0f64;
    let mut atoms = Vec::new();
    let mut breaks = vec![0.0];
    let mut values = Vec::new();
    for piece in pieces {
        for a in &piece.atoms {
            atoms.push(Atom {
                pos: offset + a.pos,
                weight: a.weight,
            });
        }
        for (_, r, v) in piece.cells() {
            breaks.push(offset + r);
            values.push(v);
        }
        offset += piece.length;
    }
    Ok(Piece::assemble(offset, atoms, breaks, values))
}

/// The total variation |μ| of a piece: a piece with nonnegative atom weights
/// and density values.
#[derive(Clone, Debug, PartialEq)]
pub struct TotalVariation {
    piece: Piece,
}

impl TotalVariation {
    pub fn piece(&self) -> &Piece {
        &self.piece
    }

    pub fn into_piece(self) -> Piece {
        self.piece
    }

    /// |μ|((a, b]).
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        self.piece.signed_mass(a, b)
    }
}
