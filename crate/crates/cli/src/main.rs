//! Command-line front end: runs every simulation pipeline and emits
//! figure-ready CSV or JSON.
//!
//! Every run that writes to `--out` also writes a `<out>.manifest.json`
//! echoing the full configuration; `cltusim rerun <manifest>` re-executes it
//! and verifies the data section is byte-identical.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cltusim_core::analysis::{
    code_min_weight_search, convergence_histogram, nearest_codewords, SearchEffort,
};
use cltusim_core::channel::ChannelParams;
use cltusim_core::cltu::{self, CltuConfig, StartDetectConfig, TsMode};
use cltusim_core::codes::{make_code, CODE_IDS};
use cltusim_core::decoder::{Algorithm, DecoderConfig};
use cltusim_core::estimators::{
    build_rejection_report, estimate_cer, estimate_pnat, p_md_analytic, Estimate, StoppingRule,
};
use cltusim_core::gf2::BitWord;
use cltusim_core::scrambler;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "cltusim",
    version,
    about = "Telecommand CLTU / LDPC coding and synchronization simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe or export a supported code.
    Code {
        #[command(subcommand)]
        action: CodeAction,
    },
    /// Apply the CCSDS randomizer to a hex word.
    Randomize {
        /// Hex digits, optionally split across arguments.
        hex: Vec<String>,
    },
    /// Invert the CCSDS randomizer on a hex word.
    Derandomize { hex: Vec<String> },
    /// Analytic start-sequence miss probability sweep.
    Pmd {
        /// Start sequence length in bits.
        #[arg(long = "S", default_value_t = 64)]
        sequence_bits: usize,
        /// Detection threshold: up to this many bit errors are tolerated.
        #[arg(long = "E", default_value_t = 13)]
        max_errors: usize,
        #[arg(long, value_parser = parse_ebn0_list)]
        ebn0: Ebn0List,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Monte Carlo codeword error rates (CER, CER*, UCER).
    Cer {
        #[command(flatten)]
        campaign: CampaignOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Monte Carlo tail-sequence non-recognition probability.
    Pnat {
        #[command(flatten)]
        campaign: CampaignOpts,
        #[arg(long, value_parser = parse_ts_mode, default_value = "randomized")]
        ts_mode: TsMode,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Full telecommand rejection probability pipeline.
    Tcrej {
        #[command(flatten)]
        campaign: CampaignOpts,
        #[arg(long, default_value_t = 1)]
        n_codewords: usize,
        #[arg(long, value_parser = parse_ts_mode, default_value = "randomized")]
        ts_mode: TsMode,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Randomized nearest-codeword / minimum-weight census.
    Distance {
        #[arg(long, default_value = "ccsds-128-64")]
        code: String,
        /// Target word as hex, or the shorthands `tail` / `randomized-tail`.
        #[arg(long, conflicts_with = "min_weight")]
        target: Option<String>,
        /// Search for minimum-weight codewords instead of a target.
        #[arg(long)]
        min_weight: bool,
        #[arg(long, default_value_t = 10_000)]
        iterations: u64,
        #[arg(long, default_value_t = 2)]
        subset_size: usize,
        #[arg(long, default_value_t = 6)]
        window_bits: usize,
        #[arg(long, default_value_t = 24)]
        distance_cap: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Histogram of codewords the decoder converges to from the noisy TS.
    Histogram {
        #[arg(long, default_value = "ccsds-128-64")]
        code: String,
        #[arg(long, value_parser = parse_algorithm, default_value = "spa")]
        algo: Algorithm,
        #[arg(long, default_value_t = 100)]
        max_iter: u32,
        #[arg(long, value_parser = parse_ts_mode, default_value = "randomized")]
        ts_mode: TsMode,
        #[arg(long, value_parser = parse_ebn0_list)]
        ebn0: Ebn0List,
        /// Trials per Eb/N0 point.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Re-execute a run manifest and verify its data is reproduced.
    Rerun { manifest: PathBuf },
}

#[derive(Subcommand)]
enum CodeAction {
    /// Print dimensions and weight profile.
    Info {
        #[arg(long, default_value = "ccsds-128-64")]
        code: String,
    },
    /// Print the parity-check matrix.
    Export {
        #[arg(long, default_value = "ccsds-128-64")]
        code: String,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Alist)]
        format: MatrixFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Flags shared by the Monte Carlo campaign subcommands.
#[derive(Args)]
struct CampaignOpts {
    #[arg(long, default_value = "ccsds-128-64")]
    code: String,
    #[arg(long, value_parser = parse_algorithm, default_value = "spa")]
    algo: Algorithm,
    #[arg(long, default_value_t = 100)]
    max_iter: u32,
    /// Eb/N0 points in dB: `start:stop:step` or a comma list.
    #[arg(long, value_parser = parse_ebn0_list)]
    ebn0: Ebn0List,
    /// Stop each point after this many events.
    #[arg(long, default_value_t = 100)]
    target_events: u64,
    #[arg(long, default_value_t = 100_000_000)]
    max_trials: u64,
    /// Defaults to $CLTUSIM_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct OutputOpts {
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Write data here (with a manifest alongside) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy)]
enum MatrixFormat {
    Alist,
    Dense,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_ts_mode(s: &str) -> Result<TsMode, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Eb/N0 points parsed from one flag value (clap would otherwise treat a
/// `Vec<f64>` field as one value per flag occurrence).
#[derive(Clone)]
struct Ebn0List(Vec<f64>);

impl std::ops::Deref for Ebn0List {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// `start:stop:step` (inclusive) or a comma-separated list, in dB.
fn parse_ebn0_list(s: &str) -> Result<Ebn0List, String> {
    let parse_one = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("bad Eb/N0 value {t:?}"))
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range must be start:stop:step, got {s:?}"));
        }
        let (start, stop, step) = (
            parse_one(parts[0])?,
            parse_one(parts[1])?,
            parse_one(parts[2])?,
        );
        if step <= 0.0 || stop < start {
            return Err("range needs step > 0 and stop >= start".into());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok(Ebn0List(
            (0..count).map(|i| start + i as f64 * step).collect(),
        ));
    }
    let list: Result<Vec<f64>, String> = s.split(',').map(parse_one).collect();
    let list = list?;
    if list.is_empty() {
        return Err("need at least one Eb/N0 point".into());
    }
    Ok(Ebn0List(list))
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("CLTUSIM_SEED")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}

fn resolve_workers(flag: Option<usize>) -> usize {
    flag.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(serde::Serialize, serde::Deserialize)]
struct RunManifest {
    schema: String,
    tool_version: String,
    /// Arguments after the binary name, exactly as invoked.
    argv: Vec<String>,
    seed: u64,
    outputs: Vec<String>,
    wall_clock_seconds: f64,
}

/// Result of executing one subcommand: the data section plus the seed the
/// run actually used (if it consumed randomness).
struct Execution {
    data: String,
    seed: u64,
}

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(match run(&argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    });
}

fn run(argv: &[String]) -> Result<i32> {
    let cli = match Cli::try_parse_from(
        std::iter::once("cltusim".to_string()).chain(argv.iter().cloned()),
    ) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with success status.
            let code = if e.use_stderr() { 2 } else { 0 };
            e.print().expect("write clap message");
            return Ok(code);
        }
    };
    let clock = Instant::now();
    match cli.command {
        Command::Rerun { manifest } => return rerun(&manifest),
        Command::Code {
            action: CodeAction::Info { code },
        } => {
            print!("{}", code_info(&code)?);
            return Ok(0);
        }
        Command::Code {
            action: CodeAction::Export { code, format, out },
        } => {
            let text = code_export(&code, format)?;
            match out {
                Some(path) => std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            return Ok(0);
        }
        command => {
            let (exec, output) = execute(command)?;
            match output {
                Some(OutputOpts {
                    out: Some(path), ..
                }) => {
                    std::fs::write(&path, &exec.data)
                        .with_context(|| format!("writing {}", path.display()))?;
                    let manifest = RunManifest {
                        schema: "run-manifest/v1".into(),
                        tool_version: env!("CARGO_PKG_VERSION").into(),
                        argv: argv.to_vec(),
                        seed: exec.seed,
                        outputs: vec![path.display().to_string()],
                        wall_clock_seconds: clock.elapsed().as_secs_f64(),
                    };
                    let mpath = manifest_path(&path);
                    std::fs::write(&mpath, serde_json::to_string_pretty(&manifest)?)
                        .with_context(|| format!("writing {}", mpath.display()))?;
                }
                _ => print!("{}", exec.data),
            }
        }
    }
    Ok(0)
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Re-execute a manifest's argv and byte-compare the regenerated data
/// section with the file it originally produced.
fn rerun(manifest: &Path) -> Result<i32> {
    let text = std::fs::read_to_string(manifest)
        .with_context(|| format!("reading {}", manifest.display()))?;
    let m: RunManifest = serde_json::from_str(&text).context("parsing manifest")?;

    // Strip the --out pair so the re-execution stays in memory.
    let mut argv = Vec::new();
    let mut it = m.argv.iter();
    while let Some(a) = it.next() {
        if a == "--out" {
            it.next();
        } else if !a.starts_with("--out=") {
            argv.push(a.clone());
        }
    }
    let cli = Cli::try_parse_from(std::iter::once("cltusim".to_string()).chain(argv))
        .context("manifest argv no longer parses")?;
    let (exec, _) = execute(cli.command)?;

    let original_path = m
        .outputs
        .first()
        .ok_or_else(|| anyhow!("manifest lists no outputs"))?;
    let original = std::fs::read_to_string(original_path)
        .with_context(|| format!("reading original output {original_path}"))?;
    if exec.data == original {
        println!("identical: {original_path} reproduced byte-for-byte");
        Ok(0)
    } else {
        eprintln!("differs: re-execution does not match {original_path}");
        Ok(1)
    }
}

fn execute(command: Command) -> Result<(Execution, Option<OutputOpts>)> {
    match command {
        Command::Randomize { hex } => {
            let w = parse_hex_args(&hex)?;
            Ok((
                Execution {
                    data: format!("{}\n", scrambler::randomize(&w).to_hex()),
                    seed: 0,
                },
                None,
            ))
        }
        Command::Derandomize { hex } => {
            let w = parse_hex_args(&hex)?;
            Ok((
                Execution {
                    data: format!("{}\n", scrambler::derandomize(&w).to_hex()),
                    seed: 0,
                },
                None,
            ))
        }
        Command::Pmd {
            sequence_bits,
            max_errors,
            ebn0,
            output,
        } => {
            let data = pmd_sweep(sequence_bits, max_errors, &ebn0, output.format)?;
            Ok((Execution { data, seed: 0 }, Some(output)))
        }
        Command::Cer { campaign, output } => {
            let data = cer_sweep(&campaign, output.format)?;
            let seed = resolve_seed(campaign.seed);
            Ok((Execution { data, seed }, Some(output)))
        }
        Command::Pnat {
            campaign,
            ts_mode,
            output,
        } => {
            let data = pnat_sweep(&campaign, ts_mode, output.format)?;
            let seed = resolve_seed(campaign.seed);
            Ok((Execution { data, seed }, Some(output)))
        }
        Command::Tcrej {
            campaign,
            n_codewords,
            ts_mode,
            output,
        } => {
            let data = tcrej_sweep(&campaign, n_codewords, ts_mode, output.format)?;
            let seed = resolve_seed(campaign.seed);
            Ok((Execution { data, seed }, Some(output)))
        }
        Command::Distance {
            code,
            target,
            min_weight,
            iterations,
            subset_size,
            window_bits,
            distance_cap,
            seed,
            output,
        } => {
            let code = make_code(&code)?;
            let effort =
                SearchEffort::with_parameters(iterations, subset_size, window_bits, distance_cap)?;
            let seed = resolve_seed(seed);
            let report = if min_weight {
                code_min_weight_search(&code, &effort, seed)?
            } else {
                let target =
                    target.ok_or_else(|| anyhow!("need --target <hex> or --min-weight"))?;
                let word = match target.as_str() {
                    "tail" => cltu::tail_sequence(),
                    "randomized-tail" => cltu::randomized_tail_sequence(),
                    hex => BitWord::from_hex(hex)?,
                };
                nearest_codewords(&code, &word, &effort, seed)?
            };
            let data = match output.format {
                OutFormat::Csv => report.to_csv(),
                OutFormat::Json => report.to_json() + "\n",
            };
            Ok((Execution { data, seed }, Some(output)))
        }
        Command::Histogram {
            code,
            algo,
            max_iter,
            ts_mode,
            ebn0,
            trials,
            seed,
            workers,
            output,
        } => {
            let code = make_code(&code)?;
            let cfg = DecoderConfig::new(algo, max_iter);
            let seed = resolve_seed(seed);
            let hist = convergence_histogram(
                &code,
                &cfg,
                ts_mode,
                &ebn0,
                trials,
                seed,
                resolve_workers(workers),
            )?;
            let data = match output.format {
                OutFormat::Csv => hist.to_csv(),
                OutFormat::Json => hist.to_json() + "\n",
            };
            Ok((Execution { data, seed }, Some(output)))
        }
        Command::Code { .. } | Command::Rerun { .. } => unreachable!("handled in run()"),
    }
}

fn parse_hex_args(parts: &[String]) -> Result<BitWord> {
    if parts.is_empty() {
        bail!("need hex digits to process");
    }
    Ok(BitWord::from_hex(&parts.join(""))?)
}

fn code_info(id: &str) -> Result<String> {
    let code = make_code(id)?;
    let h = code.parity_check();
    let row_weights: Vec<usize> = (0..h.rows()).map(|r| h.row_weight(r)).collect();
    let col_weights: Vec<usize> = (0..h.cols()).map(|c| h.col_weight(c)).collect();
    let mut out = String::new();
    out.push_str(&format!("id: {}\n", code.id()));
    out.push_str(&format!("n: {}\n", code.n()));
    out.push_str(&format!("k: {}\n", code.k()));
    out.push_str(&format!("rate: {}\n", code.rate()));
    out.push_str(&format!("parity_check: {} x {}\n", h.rows(), h.cols()));
    out.push_str(&format!(
        "row_weights: {}..{}\n",
        row_weights.iter().min().unwrap(),
        row_weights.iter().max().unwrap()
    ));
    out.push_str(&format!(
        "col_weights: {}..{}\n",
        col_weights.iter().min().unwrap(),
        col_weights.iter().max().unwrap()
    ));
    out.push_str(&format!("known_codes: {}\n", CODE_IDS.join(", ")));
    Ok(out)
}

fn code_export(id: &str, format: MatrixFormat) -> Result<String> {
    let code = make_code(id)?;
    Ok(match format {
        MatrixFormat::Alist => code.parity_check().to_alist(),
        MatrixFormat::Dense => code.parity_check().to_dense_text(),
    })
}

fn pmd_sweep(s: usize, e: usize, ebn0: &[f64], format: OutFormat) -> Result<String> {
    if e > s {
        bail!("threshold E = {e} exceeds sequence length S = {s}");
    }
    if ebn0.is_empty() {
        bail!("need at least one Eb/N0 point (--ebn0)");
    }
    let rows: Vec<(f64, f64)> = ebn0
        .iter()
        .map(|&db| (db, p_md_analytic(s, e, db)))
        .collect();
    Ok(match format {
        OutFormat::Csv => {
            let mut out = String::from("ebn0_db,p_md\n");
            for (db, p) in rows {
                out.push_str(&format!("{db},{p}\n"));
            }
            out
        }
        OutFormat::Json => {
            #[derive(serde::Serialize)]
            struct Row {
                ebn0_db: f64,
                p_md: f64,
            }
            #[derive(serde::Serialize)]
            struct Sweep {
                schema: &'static str,
                sequence_bits: usize,
                max_errors: usize,
                rows: Vec<Row>,
            }
            let sweep = Sweep {
                schema: "pmd-sweep/v1",
                sequence_bits: s,
                max_errors: e,
                rows: rows
                    .into_iter()
                    .map(|(ebn0_db, p_md)| Row { ebn0_db, p_md })
                    .collect(),
            };
            serde_json::to_string_pretty(&sweep)? + "\n"
        }
    })
}

fn campaign_parts(
    c: &CampaignOpts,
) -> Result<(
    cltusim_core::LinearCode,
    DecoderConfig,
    StoppingRule,
    u64,
    usize,
)> {
    if c.ebn0.is_empty() {
        bail!("need at least one Eb/N0 point (--ebn0)");
    }
    let code = make_code(&c.code)?;
    let cfg = DecoderConfig::new(c.algo, c.max_iter);
    let rule = StoppingRule::new(c.target_events, c.max_trials)?;
    Ok((
        code,
        cfg,
        rule,
        resolve_seed(c.seed),
        resolve_workers(c.workers),
    ))
}

fn cer_sweep(c: &CampaignOpts, format: OutFormat) -> Result<String> {
    let (code, cfg, rule, seed, workers) = campaign_parts(c)?;
    #[derive(serde::Serialize)]
    struct Row {
        ebn0_db: f64,
        cer: Estimate,
        cer_star: Estimate,
        ucer: Estimate,
    }
    let mut rows = Vec::new();
    for (i, &db) in c.ebn0.iter().enumerate() {
        let params = ChannelParams::new(db, code.rate())?;
        let point_seed = seed.wrapping_add(i as u64);
        let est = estimate_cer(&code, &cfg, params, &rule, point_seed, workers)?;
        rows.push(Row {
            ebn0_db: db,
            cer: est.cer,
            cer_star: est.cer_star,
            ucer: est.ucer,
        });
    }
    Ok(match format {
        OutFormat::Csv => {
            let mut out = String::from(
                "ebn0_db,cer,cer_low,cer_high,cer_star,cer_star_low,cer_star_high,ucer,ucer_low,ucer_high,events,trials\n",
            );
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.ebn0_db,
                    r.cer.point,
                    r.cer.ci_low,
                    r.cer.ci_high,
                    r.cer_star.point,
                    r.cer_star.ci_low,
                    r.cer_star.ci_high,
                    r.ucer.point,
                    r.ucer.ci_low,
                    r.ucer.ci_high,
                    r.cer.events,
                    r.cer.trials
                ));
            }
            out
        }
        OutFormat::Json => {
            #[derive(serde::Serialize)]
            struct Sweep<'a> {
                schema: &'static str,
                code_id: &'a str,
                decoder: DecoderConfig,
                rule: StoppingRule,
                seed: u64,
                rows: Vec<Row>,
            }
            serde_json::to_string_pretty(&Sweep {
                schema: "cer-sweep/v1",
                code_id: code.id(),
                decoder: cfg,
                rule,
                seed,
                rows,
            })? + "\n"
        }
    })
}

fn pnat_sweep(c: &CampaignOpts, ts_mode: TsMode, format: OutFormat) -> Result<String> {
    let (code, cfg, rule, seed, workers) = campaign_parts(c)?;
    #[derive(serde::Serialize)]
    struct Row {
        ebn0_db: f64,
        p_nat: Estimate,
    }
    let mut rows = Vec::new();
    for (i, &db) in c.ebn0.iter().enumerate() {
        let params = ChannelParams::new(db, code.rate())?;
        let point_seed = seed.wrapping_add(i as u64);
        let est = estimate_pnat(&code, &cfg, params, ts_mode, &rule, point_seed, workers)?;
        rows.push(Row {
            ebn0_db: db,
            p_nat: est,
        });
    }
    Ok(match format {
        OutFormat::Csv => {
            let mut out = String::from("ebn0_db,p_nat,p_nat_low,p_nat_high,events,trials\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.ebn0_db,
                    r.p_nat.point,
                    r.p_nat.ci_low,
                    r.p_nat.ci_high,
                    r.p_nat.events,
                    r.p_nat.trials
                ));
            }
            out
        }
        OutFormat::Json => {
            #[derive(serde::Serialize)]
            struct Sweep<'a> {
                schema: &'static str,
                code_id: &'a str,
                decoder: DecoderConfig,
                ts_mode: TsMode,
                rule: StoppingRule,
                seed: u64,
                rows: Vec<Row>,
            }
            serde_json::to_string_pretty(&Sweep {
                schema: "pnat-sweep/v1",
                code_id: code.id(),
                decoder: cfg,
                ts_mode,
                rule,
                seed,
                rows,
            })? + "\n"
        }
    })
}

fn tcrej_sweep(
    c: &CampaignOpts,
    n_codewords: usize,
    ts_mode: TsMode,
    format: OutFormat,
) -> Result<String> {
    let (code, cfg, rule, seed, workers) = campaign_parts(c)?;
    let cltu_cfg = CltuConfig::new(code.id(), n_codewords, ts_mode)?;
    cltu_cfg.check_code(&code)?;
    let report = build_rejection_report(
        &code,
        &cfg,
        &cltu_cfg,
        &StartDetectConfig::standard(),
        &c.ebn0,
        &rule,
        seed,
        workers,
    )?;
    Ok(match format {
        OutFormat::Csv => report.to_csv(),
        OutFormat::Json => report.to_json() + "\n",
    })
}
