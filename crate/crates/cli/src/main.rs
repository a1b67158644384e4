//! `qc1d`: build measure potentials over substitution sequences, check the
//! structural hypotheses behind their spectral analysis, and compute band
//! spectra, Lyapunov exponents and the integrated density of states.
//!
//! Exit codes: 0 success / hypothesis holds; 1 a check produced a
//! counterexample or a bound failed; 2 malformed config or invocation;
//! 3 numeric failure.

mod model;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qc1d_core::fdp::{check_sfdp_both, default_ell, sufficient_sfdp, SfdpVerdict};
use qc1d_core::spectral::{band_spectrum, discriminant, ids, lyapunov, SpectralScan};
use qc1d_core::subshifts::{cube_frequency, TwoSidedWord};
use qc1d_core::suspension::{estimate_p_gn, PotentialStream};
use qc1d_core::transfer::{gordon_check, SolutionState};

use model::{preset, ModelConfig, PieceConfig};
use report::{now_ms, write_json, write_scan_csv, Report};

#[derive(Debug)]
pub enum CliError {
    /// Malformed config or invocation (exit 2).
    Config(String),
    /// Numeric or internal failure (exit 3).
    Numeric(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Numeric(msg) => write!(f, "{msg}"),
        }
    }
}

fn numeric(e: qc1d_core::Error) -> CliError {
    CliError::Numeric(e.to_string())
}

#[derive(Parser)]
#[command(name = "qc1d", version, about = "quasicrystal measure potentials in one dimension")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a model file (or emit a preset) and summarize it.
    Model {
        #[arg(long, conflicts_with = "preset")]
        model: Option<PathBuf>,
        /// free | periodic-comb | classical-kp | fibonacci-kp | thue-morse | two-zeros
        #[arg(long)]
        preset: Option<String>,
        /// Write the (preset) model JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Search the decomposition for simple-f.d.p. violations (both
    /// orientations); exit 1 on a counterexample.
    CheckSfdp {
        #[arg(long)]
        model: PathBuf,
        /// Agreement length ℓ; default 2·max piece length.
        #[arg(long)]
        ell: Option<f64>,
        #[arg(long, default_value_t = 20)]
        cutoff: usize,
        /// Cells of the sampled decomposition sequence.
        #[arg(long, default_value_t = 800)]
        prefix_cells: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Cube census and three-block probability estimates (condition (K)
    /// evidence); exit 1 when no positive evidence is found.
    CheckK {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 50)]
        qmax: usize,
        /// Symbol prefix length for the cube census.
        #[arg(long, default_value_t = 20000)]
        prefix_len: usize,
        /// Monte Carlo samples per block length.
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Band spectrum of a periodic approximant, plus a full spectral scan.
    Bands {
        #[arg(long)]
        model: PathBuf,
        /// Substitution level of the approximant word.
        #[arg(long, default_value_t = 8)]
        level: usize,
        #[arg(long, default_value_t = 0.0)]
        emin: f64,
        #[arg(long, default_value_t = 20.0)]
        emax: f64,
        #[arg(long, default_value_t = 4000)]
        grid: usize,
        #[arg(long, default_value_t = 1e-8)]
        refine: f64,
        /// Stream length for the Lyapunov/IDS columns of the CSV scan.
        #[arg(long, default_value_t = 200.0)]
        length: f64,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Finite-scale Lyapunov exponents over an energy grid.
    Lyapunov {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 8)]
        level: usize,
        #[arg(long, default_value_t = 0.0)]
        emin: f64,
        #[arg(long, default_value_t = 20.0)]
        emax: f64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, default_value_t = 500.0)]
        length: f64,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Integrated density of states over an energy grid.
    Ids {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 8)]
        level: usize,
        #[arg(long, default_value_t = 0.0)]
        emin: f64,
        #[arg(long, default_value_t = 20.0)]
        emax: f64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, default_value_t = 1000.0)]
        length: f64,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Gordon three-block lower bound at scale p over sampled energies and
    /// states; exit 1 on any failure, 2 without three-block structure.
    Gordon {
        #[arg(long)]
        model: PathBuf,
        /// Repetition scale; requires the stream (as anchored by the model
        /// offset) to have the three-block property at p.
        #[arg(long, conflicts_with = "auto_anchor_q")]
        p: Option<f64>,
        /// Anchor automatically at an extended symbolic cube with this
        /// block length and use its suspension length as p.
        #[arg(long)]
        auto_anchor_q: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        emin: f64,
        #[arg(long, default_value_t = 20.0)]
        emax: f64,
        /// Number of energy samples.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Random initial states per energy.
        #[arg(long, default_value_t = 20)]
        states: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Model { model, preset: preset_name, out, json } => {
            cmd_model(model, preset_name, out, json)
        }
        Command::CheckSfdp { model, ell, cutoff, prefix_cells, json } => {
            cmd_check_sfdp(model, ell, cutoff, prefix_cells, json)
        }
        Command::CheckK { model, qmax, prefix_len, samples, json } => {
            cmd_check_k(model, qmax, prefix_len, samples, json)
        }
        Command::Bands { model, level, emin, emax, grid, refine, length, json, csv } => {
            cmd_bands(model, level, emin, emax, grid, refine, length, json, csv)
        }
        Command::Lyapunov { model, level, emin, emax, grid, length, json, csv } => {
            cmd_scan("lyapunov", model, level, emin, emax, grid, length, json, csv)
        }
        Command::Ids { model, level, emin, emax, grid, length, json, csv } => {
            cmd_scan("ids", model, level, emin, emax, grid, length, json, csv)
        }
        Command::Gordon { model, p, auto_anchor_q, emin, emax, samples, states, json } => {
            cmd_gordon(model, p, auto_anchor_q, emin, emax, samples, states, json)
        }
    }
}

fn load_model(path: &std::path::Path) -> Result<ModelConfig, CliError> {
    ModelConfig::load(path)
}

/// Stream over a substitution word whose suspension covers ±half_span.
fn build_stream(config: &ModelConfig, half_span: f64) -> Result<PotentialStream, CliError> {
    let subst = config.substitution_rules()?;
    let alph = config.piece_alphabet()?;
    let seed = config.seed_symbol()?;
    PotentialStream::from_substitution(&subst, seed, &alph, half_span, config.offset, config.tolerance)
        .map_err(numeric)
}

/// Stream backed by a fixed number of cells (origin centered).
fn build_stream_cells(config: &ModelConfig, cells: usize) -> Result<PotentialStream, CliError> {
    let subst = config.substitution_rules()?;
    let alph = config.piece_alphabet()?;
    let seed = config.seed_symbol()?;
    let word = subst.word_of_length(seed, cells).map_err(numeric)?;
    let origin = word.len() / 2;
    PotentialStream::new(
        TwoSidedWord::new(word.symbols().to_vec(), origin).map_err(numeric)?,
        alph,
        config.offset,
        config.tolerance,
    )
    .map_err(numeric)
}

fn cmd_model(
    model_path: Option<PathBuf>,
    preset_name: Option<String>,
    out: Option<PathBuf>,
    json: Option<PathBuf>,
) -> Result<u8, CliError> {
    let (config, origin) = match (&model_path, &preset_name) {
        (Some(path), None) => (load_model(path)?, path.display().to_string()),
        (None, Some(name)) => (preset(name)?, format!("preset:{name}")),
        _ => {
            return Err(CliError::Config(
                "pass exactly one of --model or --preset".into(),
            ))
        }
    };
    config.validate()?;
    if let Some(out_path) = &out {
        write_json(out_path, &config)?;
        println!("wrote model to {}", out_path.display());
    }

    let subst = config.substitution_rules()?;
    let alph = config.piece_alphabet()?;
    let seed = config.seed_symbol()?;
    let primitive = subst.is_primitive();
    let word = subst.word_of_length(seed, 4000).map_err(numeric)?;
    let aperiodic_certified = word.certify_aperiodic(50).map_err(numeric)?;
    let sufficient = sufficient_sfdp(&alph);

    #[derive(Serialize)]
    struct PieceSummary {
        symbol: String,
        length: f64,
        atoms: usize,
        norm_lu: f64,
    }
    #[derive(Serialize)]
    struct ModelSummary {
        origin: String,
        primitive: bool,
        aperiodicity_certified_to: usize,
        aperiodicity_certified: bool,
        aperiodicity_prefix_len: usize,
        sufficient_sfdp: bool,
        pieces: Vec<PieceSummary>,
    }
    let pieces: Vec<PieceSummary> = alph
        .pieces()
        .map(|(sym, piece)| PieceSummary {
            symbol: sym.to_string(),
            length: piece.length(),
            atoms: piece.atoms().len(),
            norm_lu: piece.norm_lu(),
        })
        .collect();
    let summary = ModelSummary {
        origin,
        primitive,
        aperiodicity_certified_to: 50,
        aperiodicity_certified: aperiodic_certified,
        aperiodicity_prefix_len: word.len(),
        sufficient_sfdp: sufficient,
        pieces,
    };

    println!("model: {}", summary.origin);
    for p in &summary.pieces {
        println!(
            "  piece {:?}: length {}, atoms {}, ||.||_lu {}",
            p.symbol, p.length, p.atoms, p.norm_lu
        );
    }
    println!("  substitution primitive: {primitive}");
    println!(
        "  aperiodicity (complexity(n) >= n+1 for n <= 50, prefix {}): {}",
        summary.aperiodicity_prefix_len,
        if aperiodic_certified { "certified" } else { "NOT certified (periodic at inspected scales)" }
    );
    println!("  sufficient s.f.d.p. criterion (<= 1 Lebesgue multiple): {sufficient}");

    if let Some(json_path) = json {
        let report = Report {
            command: "model",
            timestamp_ms: now_ms(),
            config: &config,
            params: serde_json::json!({}),
            results: &summary,
        };
        write_json(&json_path, &report)?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct SfdpSide {
    verdict: String,
    positions_checked: usize,
    counterexample: Option<SfdpCounterexampleJson>,
}

#[derive(Serialize)]
struct SfdpCounterexampleJson {
    position_a: usize,
    position_b: usize,
    common_cells: usize,
    common_length: f64,
    first_a: PieceConfig,
    first_b: PieceConfig,
    reverified: bool,
}

fn verdict_name(v: SfdpVerdict) -> String {
    match v {
        SfdpVerdict::VerifiedToCutoff => "verified-to-cutoff".into(),
        SfdpVerdict::Counterexample => "counterexample".into(),
        SfdpVerdict::SufficientCriterionPassed => "sufficient-criterion-passed".into(),
    }
}

fn cmd_check_sfdp(
    model_path: PathBuf,
    ell: Option<f64>,
    cutoff: usize,
    prefix_cells: usize,
    json: Option<PathBuf>,
) -> Result<u8, CliError> {
    let config = load_model(&model_path)?;
    let alph = config.piece_alphabet()?;
    let ell = ell.unwrap_or_else(|| default_ell(&alph));
    let stream = build_stream_cells(&config, prefix_cells)?;

    let (fwd, bwd) = check_sfdp_both(&stream, ell, cutoff).map_err(numeric)?;
    let side = |report: &qc1d_core::fdp::SfdpReport, stream: &PotentialStream| SfdpSide {
        verdict: verdict_name(report.verdict),
        positions_checked: report.positions_checked,
        counterexample: report.counterexample.as_ref().map(|ce| SfdpCounterexampleJson {
            position_a: ce.position_a,
            position_b: ce.position_b,
            common_cells: ce.common_cells,
            common_length: ce.common_length,
            first_a: PieceConfig::from_piece(&ce.first_a),
            first_b: PieceConfig::from_piece(&ce.first_b),
            reverified: ce.verify(stream, report.ell),
        }),
    };
    let reflected = stream.reflected().map_err(numeric)?;
    let results = serde_json::json!({
        "ell": ell,
        "cutoff": cutoff,
        "prefix_cells": stream.word().len(),
        "sufficient_criterion": sufficient_sfdp(&alph),
        "forward": side(&fwd, &stream),
        "reflected": side(&bwd, &reflected),
    });

    println!("s.f.d.p. check (ell = {ell}, cutoff = {cutoff} cells)");
    println!("  forward:   {} ({} positions)", verdict_name(fwd.verdict), fwd.positions_checked);
    println!("  reflected: {} ({} positions)", verdict_name(bwd.verdict), bwd.positions_checked);
    let bad = fwd.verdict == SfdpVerdict::Counterexample || bwd.verdict == SfdpVerdict::Counterexample;
    if bad {
        for (name, rep) in [("forward", &fwd), ("reflected", &bwd)] {
            if let Some(ce) = &rep.counterexample {
                println!(
                    "  {name} counterexample: cells {} and {} share {} cells (length {:.6}) and an agreeing [0, ell) continuation, but start with different pieces (lengths {} vs {})",
                    ce.position_a, ce.position_b, ce.common_cells, ce.common_length,
                    ce.first_a.length(), ce.first_b.length()
                );
            }
        }
    }

    if let Some(json_path) = json {
        let report = Report {
            command: "check-sfdp",
            timestamp_ms: now_ms(),
            config: &config,
            params: serde_json::json!({"ell": ell, "cutoff": cutoff, "prefix_cells": prefix_cells}),
            results,
        };
        write_json(&json_path, &report)?;
    }
    Ok(u8::from(bad))
}

fn cmd_check_k(
    model_path: PathBuf,
    qmax: usize,
    prefix_len: usize,
    samples: usize,
    json: Option<PathBuf>,
) -> Result<u8, CliError> {
    let config = load_model(&model_path)?;
    let subst = config.substitution_rules()?;
    let alph = config.piece_alphabet()?;
    let seed = config.seed_symbol()?;
    let word = subst.word_of_length(seed, prefix_len).map_err(numeric)?;
    let qs = word.cube_block_lengths(qmax);

    #[derive(Serialize)]
    struct ScaleEvidence {
        q: usize,
        cube_count: usize,
        cube_positions: usize,
        cube_frequency: f64,
        gn_samples: usize,
        gn_hits: usize,
        gn_fraction: f64,
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut scales = Vec::new();
    for &q in qs.iter().take(4) {
        let freq = cube_frequency(&subst, seed, q, prefix_len).map_err(numeric)?;
        let est = estimate_p_gn(
            &subst,
            seed,
            &alph,
            q,
            samples,
            prefix_len.min(8000).max(60 * q),
            config.tolerance,
            &mut rng,
        )
        .map_err(numeric)?;
        scales.push(ScaleEvidence {
            q,
            cube_count: freq.count,
            cube_positions: freq.positions,
            cube_frequency: freq.frequency,
            gn_samples: est.samples,
            gn_hits: est.hits,
            gn_fraction: est.fraction,
        });
    }
    let evidence = scales.iter().any(|s| s.gn_hits > 0);

    println!(
        "condition (K) evidence on a prefix of {} symbols (qmax = {qmax}):",
        word.len()
    );
    if qs.is_empty() {
        println!("  no cubes found: no three-block repetition at the symbolic level");
    } else {
        println!("  cube block lengths: {qs:?}");
        for s in &scales {
            println!(
                "  q = {}: cube frequency {:.5} ({}/{} positions), P(G) estimate {:.4} ({}/{} samples)",
                s.q, s.cube_frequency, s.cube_count, s.cube_positions,
                s.gn_fraction, s.gn_hits, s.gn_samples
            );
        }
    }
    println!(
        "  verdict: {}",
        if evidence {
            "positive three-block probability at some scale (evidence for condition (K))"
        } else {
            "no positive estimate found (no evidence for condition (K))"
        }
    );

    if let Some(json_path) = json {
        let report = Report {
            command: "check-k",
            timestamp_ms: now_ms(),
            config: &config,
            params: serde_json::json!({
                "qmax": qmax, "prefix_len": prefix_len, "samples": samples,
                "rng_seed": config.rng_seed,
            }),
            results: serde_json::json!({
                "prefix_len": word.len(),
                "cube_block_lengths": qs,
                "scales": scales,
                "evidence": evidence,
                "note": "single-orbit estimates; see README on ergodicity caveats",
            }),
        };
        write_json(&json_path, &report)?;
    }
    Ok(u8::from(!evidence))
}

/// Builds the spectral scan used by `bands`, `lyapunov` and `ids`.
fn make_scan(
    config: &ModelConfig,
    level: usize,
    emin: f64,
    emax: f64,
    grid: usize,
    length: f64,
) -> Result<SpectralScan, CliError> {
    let subst = config.substitution_rules()?;
    let alph = config.piece_alphabet()?;
    let seed = config.seed_symbol()?;
    let word = subst.iterate(seed, level).map_err(numeric)?;
    qc1d_core::spectral::scan(
        &word,
        &alph,
        emin,
        emax,
        grid,
        length,
        Some(level),
        config.tolerance,
    )
    .map_err(numeric)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bands(
    model_path: PathBuf,
    level: usize,
    emin: f64,
    emax: f64,
    grid: usize,
    refine: f64,
    length: f64,
    json: Option<PathBuf>,
    csv: Option<PathBuf>,
) -> Result<u8, CliError> {
    let config = load_model(&model_path)?;
    let subst = config.substitution_rules()?;
    let alph = config.piece_alphabet()?;
    let seed = config.seed_symbol()?;
    let word = subst.iterate(seed, level).map_err(numeric)?;
    let set = band_spectrum(&word, &alph, emin, emax, grid, refine).map_err(numeric)?;

    println!(
        "band spectrum of the level-{level} approximant ({} cells) on [{emin}, {emax}]:",
        word.len()
    );
    println!(
        "  {} bands, total length {:.6} (grid {} points, spacing {:.3e}; narrower bands may be missed)",
        set.bands().len(),
        set.total_length(),
        set.grid_points(),
        set.min_resolvable_width()
    );
    if let Some((lo, hi)) = set.bands().first() {
        println!("  first band: [{lo:.6}, {hi:.6}]");
    }

    if let Some(csv_path) = &csv {
        let scan = make_scan(&config, level, emin, emax, grid.min(2000), length)?;
        write_scan_csv(csv_path, &scan)?;
        println!("  wrote scan CSV to {}", csv_path.display());
    }
    if let Some(json_path) = json {
        let report = Report {
            command: "bands",
            timestamp_ms: now_ms(),
            config: &config,
            params: serde_json::json!({
                "level": level, "emin": emin, "emax": emax,
                "grid": grid, "refine": refine, "length": length,
            }),
            results: serde_json::json!({
                "approximant_level": level,
                "word_len": word.len(),
                "bands": set.bands(),
                "total_length": set.total_length(),
                "grid_points": set.grid_points(),
                "refine_tol": set.refine_tol(),
                "min_resolvable_width": set.min_resolvable_width(),
                "note": "surrogate for the aperiodic spectrum; bands narrower than the grid spacing may be missed",
            }),
        };
        write_json(&json_path, &report)?;
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    name: &'static str,
    model_path: PathBuf,
    level: usize,
    emin: f64,
    emax: f64,
    grid: usize,
    length: f64,
    json: Option<PathBuf>,
    csv: Option<PathBuf>,
) -> Result<u8, CliError> {
    let config = load_model(&model_path)?;
    // The Lyapunov/IDS columns ride the aperiodic substitution stream; the
    // trace column refers to the level approximant.
    let subst = config.substitution_rules()?;
    let alph = config.piece_alphabet()?;
    let seed = config.seed_symbol()?;
    let word = subst.iterate(seed, level).map_err(numeric)?;
    let stream = build_stream(&config, length + 4.0 * alph.max_length())?;

    let h = (emax - emin) / (grid.max(2) - 1) as f64;
    let mut rows = Vec::with_capacity(grid);
    for i in 0..grid.max(2) {
        let e = emin + h * i as f64;
        let trace = discriminant(&word, &alph, e).map_err(numeric)?;
        rows.push(qc1d_core::spectral::ScanRow {
            e,
            trace,
            in_band: trace.abs() <= 2.0,
            lyapunov: lyapunov(&stream, e, length).map_err(numeric)?,
            ids: ids(&stream, e, length).map_err(numeric)?,
        });
    }
    let scan = SpectralScan {
        rows,
        word_len: word.len(),
        approximant_level: Some(level),
        length,
    };

    let lyap_min = scan.rows.iter().map(|r| r.lyapunov).fold(f64::INFINITY, f64::min);
    let lyap_max = scan.rows.iter().map(|r| r.lyapunov).fold(0.0f64, f64::max);
    let ids_last = scan.rows.last().map(|r| r.ids).unwrap_or(0.0);
    println!(
        "{name} scan over [{emin}, {emax}] ({} points), stream length {length} (trace column: level-{level} approximant)",
        scan.rows.len()
    );
    println!("  lyapunov range: [{lyap_min:.6}, {lyap_max:.6}]; ids at E = {emax}: {ids_last:.6}");

    if let Some(csv_path) = &csv {
        write_scan_csv(csv_path, &scan)?;
        println!("  wrote scan CSV to {}", csv_path.display());
    }
    if let Some(json_path) = json {
        #[derive(Serialize)]
        struct RowJson {
            e: f64,
            trace: f64,
            in_band: bool,
            lyapunov: f64,
            ids: f64,
        }
        let rows: Vec<RowJson> = scan
            .rows
            .iter()
            .map(|r| RowJson {
                e: r.e,
                trace: r.trace,
                in_band: r.in_band,
                lyapunov: r.lyapunov,
                ids: r.ids,
            })
            .collect();
        let report = Report {
            command: name,
            timestamp_ms: now_ms(),
            config: &config,
            params: serde_json::json!({
                "level": level, "emin": emin, "emax": emax,
                "grid": grid, "length": length,
            }),
            results: serde_json::json!({"rows": rows, "word_len": scan.word_len}),
        };
        write_json(&json_path, &report)?;
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_gordon(
    model_path: PathBuf,
    p_arg: Option<f64>,
    auto_anchor_q: Option<usize>,
    emin: f64,
    emax: f64,
    samples: usize,
    states: usize,
    json: Option<PathBuf>,
) -> Result<u8, CliError> {
    let config = load_model(&model_path)?;
    let alph = config.piece_alphabet()?;

    let (stream, p, anchor_note) = match (p_arg, auto_anchor_q) {
        (Some(p), None) => {
            let stream = build_stream(&config, 3.0 * p + 4.0 * alph.max_length())?;
            (stream, p, "model offset anchor".to_string())
        }
        (None, Some(q)) => {
            let subst = config.substitution_rules()?;
            let seed = config.seed_symbol()?;
            let word = subst.word_of_length(seed, (60 * q).max(4000)).map_err(numeric)?;
            let cube = word
                .find_extended_cubes(q)
                .into_iter()
                .find(|c| c.q() == q && c.start > q + 2 && c.start + 3 * c.q() + 2 < word.len())
                .ok_or_else(|| {
                    CliError::Numeric(format!(
                        "no extended cube of block length {q} in a prefix of {} symbols",
                        word.len()
                    ))
                })?;
            let origin = cube.start + q;
            let stream = PotentialStream::new(
                TwoSidedWord::new(word.symbols().to_vec(), origin).map_err(numeric)?,
                alph.clone(),
                0.0,
                config.tolerance,
            )
            .map_err(numeric)?;
            let p = stream.block_length(origin, q).map_err(numeric)?;
            (stream, p, format!("auto-anchored at cube (start {}, q {q})", cube.start))
        }
        _ => {
            return Err(CliError::Config(
                "pass exactly one of --p or --auto-anchor-q".into(),
            ))
        }
    };

    if !stream.in_g_n(p, stream.tol()).map_err(numeric)? {
        return Err(CliError::Config(format!(
            "no three-block structure at p = {p}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let h = (emax - emin) / (samples.max(2) - 1) as f64;
    let mut failures = 0usize;
    let mut min_ratio = f64::INFINITY;
    let mut checked = 0usize;
    for i in 0..samples.max(2) {
        let e = emin + h * i as f64;
        for _ in 0..states {
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let state = SolutionState::new(theta.cos(), theta.sin());
            let res = gordon_check(&stream, p, e, state).map_err(numeric)?;
            checked += 1;
            min_ratio = min_ratio.min(res.ratio);
            if !res.pass {
                failures += 1;
            }
        }
    }

    println!("gordon bound at p = {p} ({anchor_note}):");
    println!(
        "  {checked} (energy, state) samples on [{emin}, {emax}]: min ratio {min_ratio:.9}, failures {failures}"
    );

    if let Some(json_path) = json {
        let report = Report {
            command: "gordon",
            timestamp_ms: now_ms(),
            config: &config,
            params: serde_json::json!({
                "p": p, "emin": emin, "emax": emax,
                "samples": samples, "states": states, "rng_seed": config.rng_seed,
            }),
            results: serde_json::json!({
                "anchor": anchor_note,
                "checked": checked,
                "failures": failures,
                "min_ratio": min_ratio,
                "threshold": 0.5 - qc1d_core::transfer::GORDON_SLACK,
            }),
        };
        write_json(&json_path, &report)?;
    }
    Ok(u8::from(failures > 0))
}
