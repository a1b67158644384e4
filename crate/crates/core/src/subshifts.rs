//! Substitution subshifts: word generation, factor complexity, primitivity
//! and cube detection.
//!
//! Finite prefixes stand in for infinite sequences throughout; analyses are
//! scoped by the prefix length they were run on. Aperiodicity is *certified*
//! (not proven) through the Morse–Hedlund surrogate: factor complexity
//! `≥ n + 1` for all `n` up to a cutoff rules out eventual periodicity of
//! the symbolic layer at the inspected scales.
//!
//! Cubes — factors of the form `www` — are the symbolic witnesses behind
//! the three-block window sets of condition (K); [`Word::find_cubes`] and
//! [`cube_frequency`] locate them and estimate how often they occur along
//! an orbit.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A rewriting rule `a ↦ word` over a finite alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Vec<char>,
    rules: BTreeMap<char, Vec<char>>,
}

impl Substitution {
    /// Validates that every image is nonempty, uses only alphabet symbols,
    /// and that every symbol occurs in at least one image.
    pub fn new(rules: BTreeMap<char, Vec<char>>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::InvalidSubstitution("no rules".into()));
        }
        let alphabet: Vec<char> = rules.keys().copied().collect();
        let mut seen: BTreeSet<char> = BTreeSet::new();
        for (sym, image) in &rules {
            if image.is_empty() {
                return Err(Error::InvalidSubstitution(format!(
                    "image of {sym:?} is empty"
                )));
            }
            for c in image {
                if !rules.contains_key(c) {
                    return Err(Error::InvalidSubstitution(format!(
                        "image of {sym:?} uses unknown symbol {c:?}"
                    )));
                }
                seen.insert(*c);
            }
        }
        for sym in &alphabet {
            if !seen.contains(sym) {
                return Err(Error::InvalidSubstitution(format!(
                    "symbol {sym:?} appears in no image"
                )));
            }
        }
        Ok(Self { alphabet, rules })
    }

    /// Convenience constructor from `(symbol, image)` string pairs.
    pub fn from_str_rules(rules: &[(char, &str)]) -> Result<Self> {
        Self::new(
            rules
                .iter()
                .map(|(c, w)| (*c, w.chars().collect()))
                .collect(),
        )
    }

    /// The Fibonacci substitution a → ab, b → a.
    pub fn fibonacci() -> Self {
        Self::from_str_rules(&[('a', "ab"), ('b', "a")]).expect("valid rules")
    }

    /// The Thue–Morse substitution 0 → 01, 1 → 10.
    pub fn thue_morse() -> Self {
        Self::from_str_rules(&[('0', "01"), ('1', "10")]).expect("valid rules")
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn image(&self, sym: char) -> Result<&[char]> {
        self.rules
            .get(&sym)
            .map(|w| w.as_slice())
            .ok_or(Error::UnknownSymbol(sym))
    }

    pub fn apply(&self, word: &Word) -> Result<Word> {
        let mut out = Vec::with_capacity(word.len() * 2);
        for &sym in word.symbols() {
            out.extend_from_slice(self.image(sym)?);
        }
        Ok(Word(out))
    }

    /// The n-th iterate `sⁿ(seed)`.
    pub fn iterate(&self, seed: char, n: usize) -> Result<Word> {
        if !self.rules.contains_key(&seed) {
            return Err(Error::UnknownSymbol(seed));
        }
        let mut word = Word(vec![seed]);
        for _ in 0..n {
            word = self.apply(&word)?;
        }
        Ok(word)
    }

    /// Iterates until the word reaches `min_len` symbols and truncates.
    ///
    /// If the substitution stops growing from the seed (e.g. `a → a`), the
    /// fixed word is extended periodically instead, which is the orbit
    /// closure of such seeds anyway.
    pub fn word_of_length(&self, seed: char, min_len: usize) -> Result<Word> {
        let mut word = self.iterate(seed, 0)?;
        while word.len() < min_len {
            let next = self.apply(&word)?;
            if next.len() == word.len() {
                let mut symbols = Vec::with_capacity(min_len);
                while symbols.len() < min_len {
                    symbols.extend_from_slice(word.symbols());
                }
                symbols.truncate(min_len);
                return Ok(Word(symbols));
            }
            word = next;
        }
        word.0.truncate(min_len);
        Ok(word)
    }

    /// Incidence matrix `M[a][b]` = number of occurrences of symbol `a` in
    /// the image of `b`, indexed by alphabet order.
    pub fn incidence_matrix(&self) -> Vec<Vec<u128>> {
        let n = self.alphabet.len();
        let index: BTreeMap<char, usize> = self
            .alphabet
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let mut m = vec![vec![0u128; n]; n];
        for (sym, image) in &self.rules {
            let col = index[sym];
            for c in image {
                m[index[c]][col] += 1;
            }
        }
        m
    }

    /// Primitivity: some power `k ≤ |A|²` of the incidence matrix is
    /// entrywise positive. Only the positivity pattern matters, so the
    /// check runs on boolean matrices and cannot overflow.
    pub fn is_primitive(&self) -> bool {
        let m = self.incidence_matrix();
        let n = self.alphabet.len();
        let base: Vec<Vec<bool>> = m
            .iter()
            .map(|row| row.iter().map(|&x| x > 0).collect())
            .collect();
        let mut power = base.clone();
        for _ in 0..n * n {
            if power.iter().all(|row| row.iter().all(|&x| x)) {
                return true;
            }
            let mut next = vec![vec![false; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if power[i][k] {
                        for j in 0..n {
                            if base[k][j] {
                                next[i][j] = true;
                            }
                        }
                    }
                }
            }
            if next == power {
                // Pattern reached a fixed point; no further power changes it.
                return next.iter().all(|row| row.iter().all(|&x| x));
            }
            power = next;
        }
        power.iter().all(|row| row.iter().all(|&x| x))
    }
}

/// A finite word over the alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<char>);

impl Word {
    pub fn new(symbols: Vec<char>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[char] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    /// Number of distinct length-`n` factors.
    pub fn complexity(&self, n: usize) -> Result<usize> {
        if n == 0 || n > self.len() {
            return Err(Error::ComplexityRange { n, len: self.len() });
        }
        let mut factors: BTreeSet<&[char]> = BTreeSet::new();
        for window in self.0.windows(n) {
            factors.insert(window);
        }
        Ok(factors.len())
    }

    /// Morse–Hedlund certificate: complexity `≥ n + 1` for all `n ≤ n_max`
    /// rules out eventual periodicity at the inspected scales.
    pub fn certify_aperiodic(&self, n_max: usize) -> Result<bool> {
        for n in 1..=n_max {
            if self.complexity(n)? < n + 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All occurrences of `www` with block length `q ≤ q_max`, by brute
    /// force scan, sorted by start index then block length.
    pub fn find_cubes(&self, q_max: usize) -> Vec<CubeOccurrence> {
        let mut found = Vec::new();
        let n = self.len();
        for start in 0..n {
            for q in 1..=q_max {
                if start + 3 * q > n {
                    break;
                }
                if self.is_cube_at(start, q) {
                    found.push(CubeOccurrence {
                        start,
                        block: Word(self.0[start..start + q].to_vec()),
                    });
                }
            }
        }
        found
    }

    /// Cube occurrences whose period extends one symbol past the cube:
    /// `w w w` followed by `w[0]`.
    ///
    /// These are the symbolic anchors at which the suspension's three-block
    /// window test holds exactly under half-open windows: the window edge at
    /// `2p` touches the point mass contributed by the symbol *after* the
    /// cube, so that symbol must repeat the block's first one.
    pub fn find_extended_cubes(&self, q_max: usize) -> Vec<CubeOccurrence> {
        let w = &self.0;
        let n = self.len();
        let mut found = Vec::new();
        for start in 0..n {
            for q in 1..=q_max {
                if start + 3 * q + 1 > n {
                    break;
                }
                if (0..2 * q + 1).all(|k| w[start + k] == w[start + k + q]) {
                    found.push(CubeOccurrence {
                        start,
                        block: Word(w[start..start + q].to_vec()),
                    });
                }
            }
        }
        found
    }

    /// Distinct block lengths at which some cube occurs, ascending.
    pub fn cube_block_lengths(&self, q_max: usize) -> Vec<usize> {
        let mut qs = BTreeSet::new();
        let n = self.len();
        for q in 1..=q_max {
            if 3 * q > n {
                break;
            }
            for start in 0..=(n - 3 * q) {
                if self.is_cube_at(start, q) {
                    qs.insert(q);
                    break;
                }
            }
        }
        qs.into_iter().collect()
    }

    fn is_cube_at(&self, start: usize, q: usize) -> bool {
        let w = &self.0;
        (0..2 * q).all(|k| w[start + k] == w[start + k + q])
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.chars().collect())
    }
}

impl core::fmt::Display for Word {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s: String = self.0.iter().collect();
        write!(f, "{s}")
    }
}

/// A cube occurrence `w w w` in a host word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeOccurrence {
    /// Start index of the first block in the host word.
    pub start: usize,
    /// The repeated block `w`.
    pub block: Word,
}

impl CubeOccurrence {
    pub fn q(&self) -> usize {
        self.block.len()
    }

    /// Re-checks `host[start .. start+3q) = block³` directly.
    pub fn verify(&self, host: &Word) -> bool {
        let q = self.q();
        if self.start + 3 * q > host.len() {
            return false;
        }
        let w = host.symbols();
        let b = self.block.symbols();
        (0..3 * q).all(|k| w[self.start + k] == b[k % q])
    }
}

/// Empirical cube frequency at block length exactly `q` along the orbit of
/// `seed`, over a prefix of `sample_length` symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeFrequency {
    pub q: usize,
    pub sample_length: usize,
    /// Positions `i` with a `q`-cube starting at `i`.
    pub count: usize,
    /// Number of positions scanned (`sample_length − 3q + 1`).
    pub positions: usize,
    pub frequency: f64,
}

/// Counts positions starting a cube of block length exactly `q` in a
/// length-`sample_length` prefix. An empirical Birkhoff-average surrogate
/// for the probability of the three-block event at the symbolic level; the
/// estimate is taken along a single orbit and is as good as the prefix.
pub fn cube_frequency(
    subst: &Substitution,
    seed: char,
    q: usize,
    sample_length: usize,
) -> Result<CubeFrequency> {
    if q == 0 {
        return Err(Error::InvalidArgument("block length q must be positive".into()));
    }
    if sample_length < 3 * q {
        return Err(Error::SampleTooShort { sample_length, q });
    }
    let word = subst.word_of_length(seed, sample_length)?;
    let positions = sample_length - 3 * q + 1;
    let mut count = 0usize;
    for start in 0..positions {
        if word.is_cube_at(start, q) {
            count += 1;
        }
    }
    Ok(CubeFrequency {
        q,
        sample_length,
        count,
        positions,
        frequency: count as f64 / positions as f64,
    })
}

/// A finite two-sided word: symbols with a marked origin index, standing in
/// for a point of `A^ℤ`. Index `n ∈ ℤ` maps to `symbols[origin + n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSidedWord {
    symbols: Vec<char>,
    origin: usize,
}

impl TwoSidedWord {
    pub fn new(symbols: Vec<char>, origin: usize) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidArgument("two-sided word must be nonempty".into()));
        }
        if origin >= symbols.len() {
            return Err(Error::InvalidArgument(format!(
                "origin {origin} outside word of length {}",
                symbols.len()
            )));
        }
        Ok(Self { symbols, origin })
    }

    /// Marks the origin at the middle of a one-sided word.
    pub fn centered(word: &Word) -> Result<Self> {
        Self::new(word.symbols().to_vec(), word.len() / 2)
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbol at two-sided index `n` (0 at the origin), if generated.
    pub fn get(&self, n: isize) -> Option<char> {
        let idx = self.origin as isize + n;
        if idx < 0 {
            return None;
        }
        self.symbols.get(idx as usize).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_iterates() {
        let s = Substitution::fibonacci();
        assert_eq!(s.iterate('a', 0).unwrap(), Word::from("a"));
        assert_eq!(s.iterate('a', 3).unwrap(), Word::from("abaab"));
    }

    #[test]
    fn thue_morse_iterates() {
        let s = Substitution::thue_morse();
        assert_eq!(s.iterate('0', 3).unwrap(), Word::from("01101001"));
    }

    #[test]
    fn iterate_rejects_unknown_seed() {
        let s = Substitution::fibonacci();
        assert_eq!(s.iterate('z', 1), Err(Error::UnknownSymbol('z')));
    }

    #[test]
    fn iterate_length_matches_incidence_matrix() {
        for s in [Substitution::fibonacci(), Substitution::thue_morse()] {
            let m = s.incidence_matrix();
            let n_sym = s.alphabet().len();
            let seed = s.alphabet()[0];
            let seed_col = s.alphabet().iter().position(|&c| c == seed).unwrap();
            // Column vector of M^n at the seed column, summed.
            let mut col = vec![0u128; n_sym];
            col[seed_col] = 1;
            for n in 0..=20usize {
                let expected: u128 = col.iter().sum();
                let word = s.iterate(seed, n).unwrap();
                assert_eq!(word.len() as u128, expected, "level {n}");
                let mut next = vec![0u128; n_sym];
                for i in 0..n_sym {
                    for k in 0..n_sym {
                        next[i] += m[i][k] * col[k];
                    }
                }
                col = next;
                if expected > 1_000_000 {
                    break;
                }
            }
        }
    }

    #[test]
    fn complexity_counts_factors() {
        let s = Substitution::fibonacci();
        let w = s.iterate('a', 12).unwrap();
        assert!(w.len() >= 100);
        assert_eq!(w.complexity(2).unwrap(), 3);
        assert_eq!(w.complexity(w.len()).unwrap(), 1);
        assert!(w.complexity(w.len() + 1).is_err());
        assert!(w.complexity(0).is_err());
    }

    #[test]
    fn complexity_bounds() {
        let s = Substitution::thue_morse();
        let w = s.iterate('0', 10).unwrap();
        for n in 1..=8 {
            let c = w.complexity(n).unwrap();
            assert!(c >= 1);
            assert!(c <= 2usize.pow(n as u32));
        }
    }

    #[test]
    fn primitivity() {
        assert!(Substitution::fibonacci().is_primitive());
        assert!(Substitution::thue_morse().is_primitive());
        let identity = Substitution::from_str_rules(&[('a', "a"), ('b', "b")]).unwrap();
        assert!(!identity.is_primitive());
    }

    #[test]
    fn find_cubes_basics() {
        let w = Word::from("aaa");
        let cubes = w.find_cubes(1);
        assert_eq!(cubes.len(), 1);
        assert_eq!(cubes[0].start, 0);
        assert_eq!(cubes[0].block, Word::from("a"));
        assert!(cubes[0].verify(&w));
    }

    #[test]
    fn fibonacci_prefix_contains_cubes() {
        let s = Substitution::fibonacci();
        let w = s.word_of_length('a', 1000).unwrap();
        let cubes = w.find_cubes(50);
        assert!(!cubes.is_empty());
        for c in &cubes {
            assert!(c.verify(&w));
        }
        // Smallest cube block in the Fibonacci word has length 3.
        assert_eq!(cubes.iter().map(|c| c.q()).min(), Some(3));
    }

    #[test]
    fn cubes_on_prefix_are_a_subset() {
        let s = Substitution::fibonacci();
        let w = s.word_of_length('a', 400).unwrap();
        let p = Word::new(w.symbols()[..200].to_vec());
        let full = w.find_cubes(20);
        let pref = p.find_cubes(20);
        for c in &pref {
            assert!(full.contains(c));
        }
        for c in full.iter().filter(|c| c.start + 3 * c.q() <= p.len()) {
            assert!(pref.contains(c));
        }
    }

    #[test]
    fn cube_frequency_periodic_word() {
        let s = Substitution::from_str_rules(&[('a', "ab"), ('b', "ab")]).unwrap();
        let f = cube_frequency(&s, 'a', 2, 1000).unwrap();
        assert_eq!(f.frequency, 1.0);
        assert_eq!(f.count, f.positions);
    }

    #[test]
    fn cube_frequency_thue_morse_is_zero() {
        let s = Substitution::thue_morse();
        for q in [1, 2, 3, 5, 8] {
            let f = cube_frequency(&s, '0', q, 2048).unwrap();
            assert_eq!(f.count, 0);
            assert_eq!(f.frequency, 0.0);
        }
    }

    #[test]
    fn cube_frequency_fibonacci_positive() {
        let s = Substitution::fibonacci();
        let f = cube_frequency(&s, 'a', 3, 100_000).unwrap();
        assert!(f.frequency > 0.0, "count {} of {}", f.count, f.positions);
    }

    #[test]
    fn cube_frequency_rejects_short_samples() {
        let s = Substitution::fibonacci();
        assert_eq!(
            cube_frequency(&s, 'a', 10, 20),
            Err(Error::SampleTooShort { sample_length: 20, q: 10 })
        );
    }

    #[test]
    fn two_sided_word_indexing() {
        let w = TwoSidedWord::new(vec!['a', 'b', 'c'], 1).unwrap();
        assert_eq!(w.get(-1), Some('a'));
        assert_eq!(w.get(0), Some('b'));
        assert_eq!(w.get(1), Some('c'));
        assert_eq!(w.get(2), None);
        assert_eq!(w.get(-2), None);
    }

    #[test]
    fn substitution_validation() {
        assert!(Substitution::from_str_rules(&[('a', "")]).is_err());
        assert!(Substitution::from_str_rules(&[('a', "ax")]).is_err());
        // 'b' appears in no image.
        assert!(Substitution::from_str_rules(&[('a', "aa"), ('b', "a")]).is_err());
    }
}
