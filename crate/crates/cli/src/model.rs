//! Model files: substitution + piece alphabet + offset + RNG seed +
//! comparison tolerance, as JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use qc1d_core::measures::Piece;
use qc1d_core::subshifts::Substitution;
use qc1d_core::suspension::PieceAlphabet;

use crate::CliError;

pub const GOLDEN_RATIO: f64 = 1.618033988749895;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubstitutionConfig {
    pub alphabet: Vec<String>,
    pub rules: BTreeMap<String, String>,
    pub seed: String,
}

/// Piece serialization: `{"length": r, "atoms": [[pos, w], …],
/// "steps": [[left, right, value], …]}`. Empty `steps` means zero density.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceConfig {
    pub length: f64,
    #[serde(default)]
    pub atoms: Vec<(f64, f64)>,
    #[serde(default)]
    pub steps: Vec<(f64, f64, f64)>,
}

impl PieceConfig {
    pub fn to_piece(&self) -> Result<Piece, CliError> {
        Piece::new(self.length, self.atoms.clone(), self.steps.clone())
            .map_err(|e| CliError::Config(format!("invalid piece: {e}")))
    }

    pub fn from_piece(piece: &Piece) -> Self {
        Self {
            length: piece.length(),
            atoms: piece.atoms().iter().map(|a| (a.pos, a.weight)).collect(),
            steps: piece.cells().collect(),
        }
    }
}

fn default_rng_seed() -> u64 {
    42
}

fn default_tolerance() -> f64 {
    qc1d_core::DEFAULT_TOL
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelConfig {
    pub substitution: SubstitutionConfig,
    pub pieces: BTreeMap<String, PieceConfig>,
    #[serde(default)]
    pub offset: f64,
    #[serde(default = "default_rng_seed")]
    pub rng_seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn single_char(s: &str, what: &str) -> Result<char, CliError> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(CliError::Config(format!(
            "{what} must be a single character, got {s:?}"
        ))),
    }
}

impl ModelConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config: ModelConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.substitution_rules()?;
        self.piece_alphabet()?;
        self.seed_symbol()?;
        if !self.tolerance.is_finite() || self.tolerance < 0.0 {
            return Err(CliError::Config("tolerance must be nonnegative".into()));
        }
        if !self.offset.is_finite() {
            return Err(CliError::Config("offset must be finite".into()));
        }
        for sym in &self.substitution.alphabet {
            let c = single_char(sym, "alphabet symbol")?;
            if !self.pieces.contains_key(sym) {
                return Err(CliError::Config(format!("no piece for symbol {c:?}")));
            }
        }
        Ok(())
    }

    pub fn substitution_rules(&self) -> Result<Substitution, CliError> {
        let mut rules: BTreeMap<char, Vec<char>> = BTreeMap::new();
        for (sym, image) in &self.substitution.rules {
            let c = single_char(sym, "rule symbol")?;
            rules.insert(c, image.chars().collect());
        }
        Substitution::new(rules).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn seed_symbol(&self) -> Result<char, CliError> {
        single_char(&self.substitution.seed, "seed symbol")
    }

    pub fn piece_alphabet(&self) -> Result<PieceAlphabet, CliError> {
        let mut pairs = Vec::new();
        for (sym, piece) in &self.pieces {
            let c = single_char(sym, "piece symbol")?;
            pairs.push((c, piece.to_piece()?));
        }
        PieceAlphabet::from_pairs(pairs).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Built-in models, mostly mirroring the test fixtures.
pub fn preset(name: &str) -> Result<ModelConfig, CliError> {
    let zero = |len: f64| PieceConfig {
        length: len,
        atoms: vec![],
        steps: vec![],
    };
    let comb = |len: f64, weight: f64| PieceConfig {
        length: len,
        atoms: vec![(0.0, weight)],
        steps: vec![],
    };
    let subst = |rules: &[(&str, &str)], seed: &str| SubstitutionConfig {
        alphabet: rules.iter().map(|(a, _)| a.to_string()).collect(),
        rules: rules
            .iter()
            .map(|(a, w)| (a.to_string(), w.to_string()))
            .collect(),
        seed: seed.to_string(),
    };
    let model = |substitution: SubstitutionConfig, pieces: Vec<(&str, PieceConfig)>| ModelConfig {
        substitution,
        pieces: pieces
            .into_iter()
            .map(|(s, p)| (s.to_string(), p))
            .collect(),
        offset: 0.0,
        rng_seed: default_rng_seed(),
        tolerance: default_tolerance(),
    };

    let config = match name {
        "free" => model(subst(&[("a", "a")], "a"), vec![("a", zero(1.0))]),
        "periodic-comb" => model(subst(&[("a", "a")], "a"), vec![("a", comb(1.0, 1.0))]),
        "classical-kp" => model(subst(&[("a", "a")], "a"), vec![("a", comb(1.0, 5.0))]),
        "fibonacci-kp" => model(
            subst(&[("a", "ab"), ("b", "a")], "a"),
            vec![("a", comb(1.0, 1.0)), ("b", zero(GOLDEN_RATIO))],
        ),
        "thue-morse" => model(
            subst(&[("0", "01"), ("1", "10")], "0"),
            vec![
                (
                    "0",
                    PieceConfig {
                        length: 1.0,
                        atoms: vec![],
                        steps: vec![(0.0, 1.0, 1.0)],
                    },
                ),
                ("1", comb(1.0, 1.0)),
            ],
        ),
        "two-zeros" => model(
            subst(&[("a", "ab"), ("b", "a")], "a"),
            vec![("a", zero(1.0)), ("b", zero(2.0))],
        ),
        other => {
            return Err(CliError::Config(format!(
                "unknown preset {other:?} (available: free, periodic-comb, classical-kp, fibonacci-kp, thue-morse, two-zeros)"
            )))
        }
    };
    Ok(config)
}
