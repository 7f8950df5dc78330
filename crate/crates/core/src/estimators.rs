//! Analytic formulas and Monte Carlo estimators for the telecommand
//! rejection probability and its components.
//!
//! The combined rejection probability is
//! `P_TCrej = P_nat + (1 - P_nat) [P_md + (1 - P_md) P_LDPC]`,
//! where `P_md` is the start-sequence miss probability (binomial tail at the
//! uncoded operating point), `P_LDPC = 1 - (1 - CER*)^N` is the chance that
//! some of the `N` codewords suffers a detected decoding failure, and `P_nat`
//! is the chance that the tail sequence accidentally decodes to a codeword so
//! the terminator goes unnoticed.
//!
//! Monte Carlo campaigns stop after a target number of events (the paper's
//! convention: 100 errors, or 100 successes for `P_nat`) or at a trial cap.
//! Every trial draws its randomness from a counter-based stream keyed by
//! `(seed, trial index)`, so results do not depend on the worker count.

use crate::channel::{transmit, ChannelParams, RngStream};
use crate::cltu::{CltuConfig, StartDetectConfig, TsMode};
use crate::codes::LinearCode;
use crate::decoder::{Decoder, DecoderConfig, ErrorClass};
use crate::gf2::BitWord;
use crate::{Error, Result};
use rayon::prelude::*;

/// When to stop a Monte Carlo campaign.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct StoppingRule {
    /// Stop once this many events of the measured class have occurred.
    pub target_events: u64,
    /// Hard cap on the number of trials.
    pub max_trials: u64,
}

impl StoppingRule {
    pub fn new(target_events: u64, max_trials: u64) -> Result<Self> {
        if target_events < 1 || max_trials < 1 {
            return Err(Error::InvalidArgument(
                "stopping rule needs target_events >= 1 and max_trials >= 1".into(),
            ));
        }
        Ok(Self {
            target_events,
            max_trials,
        })
    }

    /// The reference rule: 100 events with a 10^8-trial safety cap.
    pub fn standard() -> Self {
        Self {
            target_events: 100,
            max_trials: 100_000_000,
        }
    }
}

/// A binomial proportion with its 95% Clopper-Pearson interval.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub events: u64,
    pub trials: u64,
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    pub fn from_counts(events: u64, trials: u64) -> Self {
        assert!(
            events <= trials && trials > 0,
            "counts must satisfy events <= trials, trials > 0"
        );
        let (ci_low, ci_high) = clopper_pearson(events, trials, 0.95);
        Self {
            events,
            trials,
            point: events as f64 / trials as f64,
            ci_low,
            ci_high,
        }
    }
}

/// Exact (Clopper-Pearson) binomial confidence interval.
pub fn clopper_pearson(events: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(events <= trials && trials > 0);
    assert!(confidence > 0.0 && confidence < 1.0);
    let alpha = 1.0 - confidence;
    let (x, n) = (events as f64, trials as f64);
    let low = if events == 0 {
        0.0
    } else {
        beta_quantile(alpha / 2.0, x, n - x + 1.0)
    };
    let high = if events == trials {
        1.0
    } else {
        beta_quantile(1.0 - alpha / 2.0, x + 1.0, n - x)
    };
    (low, high)
}

/// Regularized incomplete beta function by Lentz's continued fraction.
fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = -ln_beta(a, b) + a * x.ln() + b * (-x).ln_1p();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

/// `ln B(a, b)`. When one parameter is a small integer and the other is
/// large — the shape of every binomial-interval call — the cancellation in
/// `lgamma(a+b) - lgamma(b)` costs ~7 digits, so expand
/// `Gamma(a+b)/Gamma(b)` as an exact product instead.
fn ln_beta(a: f64, b: f64) -> f64 {
    let (small, large) = if a <= b { (a, b) } else { (b, a) };
    if small == small.trunc() && (1.0..=100_000.0).contains(&small) {
        let mut sum = 0.0;
        for j in 0..small as u64 {
            sum += (large + j as f64).ln();
        }
        libm::lgamma(small) - sum
    } else {
        libm::lgamma(small) + libm::lgamma(large) - libm::lgamma(small + large)
    }
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const EPS: f64 = 3e-16;
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..400 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Quantile of the Beta(a, b) distribution by bisection.
fn beta_quantile(p: f64, a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if reg_inc_beta(a, b, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Start-sequence miss probability: the binomial tail
/// `P_md = sum_{j=E+1}^{S} C(S,j) P_b^j (1-P_b)^(S-j)`
/// with the bit error probability taken at the UNCODED `Eb/N0`.
pub fn p_md_analytic(sequence_bits: usize, max_errors: usize, ebn0_db: f64) -> f64 {
    assert!(
        max_errors <= sequence_bits,
        "threshold exceeds sequence length"
    );
    let s = sequence_bits as f64;
    let p = crate::channel::bit_error_probability(ebn0_db);
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    // Summing the tail (not one minus the head) keeps the value accurate
    // when it is many orders of magnitude below 1.
    let mut total = 0.0;
    for j in (max_errors + 1)..=sequence_bits {
        let jf = j as f64;
        let ln_term = libm::lgamma(s + 1.0) - libm::lgamma(jf + 1.0) - libm::lgamma(s - jf + 1.0)
            + jf * ln_p
            + (s - jf) * ln_q;
        total += ln_term.exp();
    }
    total
}

/// Probability that at least one of `n` codewords fails to decode:
/// `1 - (1 - cer_star)^n`, evaluated without cancellation.
pub fn p_ldpc_from_cer(cer_star: f64, n_codewords: usize) -> f64 {
    assert!((0.0..=1.0).contains(&cer_star), "probability out of range");
    assert!(n_codewords >= 1);
    -f64::exp_m1(n_codewords as f64 * (-cer_star).ln_1p())
}

/// Combined rejection probability,
/// `P_nat + (1 - P_nat) [P_md + (1 - P_md) P_LDPC]`.
pub fn combine_tc_rejection(p_md: f64, p_ldpc: f64, p_nat: f64) -> f64 {
    for p in [p_md, p_ldpc, p_nat] {
        assert!((0.0..=1.0).contains(&p), "probability out of range");
    }
    p_nat + (1.0 - p_nat) * (p_md + (1.0 - p_md) * p_ldpc)
}

/// Exact `1 - (1 - cer)^n` next to the linearized `n * cer`, with their
/// relative gap (relative to the approximation).
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct ApproximationCheck {
    pub exact: f64,
    pub approx: f64,
    pub relative_gap: f64,
}

pub fn approximation_check(cer: f64, n_codewords: usize) -> ApproximationCheck {
    assert!(
        cer * n_codewords as f64 <= 1.0,
        "linearization needs cer * n <= 1"
    );
    let exact = p_ldpc_from_cer(cer, n_codewords);
    let approx = n_codewords as f64 * cer;
    let relative_gap = if approx == 0.0 {
        0.0
    } else {
        (approx - exact).abs() / approx
    };
    ApproximationCheck {
        exact,
        approx,
        relative_gap,
    }
}

/// Counter-mixing for deriving independent sub-campaign seeds.
pub(crate) fn derive_seed(master: u64, tag: u64) -> u64 {
    let mut z = master ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-class trial counts of a campaign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Counts {
    pub per_class: Vec<u64>,
    pub trials: u64,
}

/// Trials per scheduling quantum. Fixed so that the scan order, and hence
/// the early-stopping cutoff, never depends on the worker count.
const BATCH: u64 = 1024;

/// Runs trials until the stop-class total reaches the target or the trial
/// cap. Trials are evaluated in fixed-size batches (possibly in parallel)
/// and counted in trial order up to and including the event that hits the
/// target, so identical seeds give identical counts for any worker count.
pub(crate) fn run_trials<S, I, F>(
    rule: &StoppingRule,
    workers: usize,
    n_classes: usize,
    stop_class: &[bool],
    init: I,
    trial: F,
) -> Counts
where
    S: Send,
    I: Fn() -> S + Send + Sync,
    F: Fn(&mut S, u64) -> usize + Send + Sync,
{
    assert_eq!(stop_class.len(), n_classes);
    let pool = (workers > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool construction")
    });
    let mut per_class = vec![0u64; n_classes];
    let mut stop_events = 0u64;
    let mut done = 0u64;
    let mut state = init();
    while done < rule.max_trials {
        let end = (done + BATCH).min(rule.max_trials);
        let outcomes: Vec<usize> = match &pool {
            Some(p) => p.install(|| {
                (done..end)
                    .into_par_iter()
                    .map_init(&init, |s, t| trial(s, t))
                    .collect()
            }),
            None => (done..end).map(|t| trial(&mut state, t)).collect(),
        };
        for (offset, &class) in outcomes.iter().enumerate() {
            per_class[class] += 1;
            if stop_class[class] {
                stop_events += 1;
                if stop_events >= rule.target_events {
                    return Counts {
                        per_class,
                        trials: done + offset as u64 + 1,
                    };
                }
            }
        }
        done = end;
    }
    Counts {
        per_class,
        trials: done,
    }
}

/// Codeword error rates from one campaign: `cer` counts detected and
/// undetected errors together, `cer_star` detected only, `ucer` undetected
/// only. All three share the same trial count.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CerEstimates {
    pub cer: Estimate,
    pub cer_star: Estimate,
    pub ucer: Estimate,
}

/// Monte Carlo codeword-error-rate estimation: each trial encodes a random
/// infoword, transmits it at the coded operating point, decodes, and
/// classifies the outcome. Stops per `rule` on detected-or-undetected
/// errors.
pub fn estimate_cer(
    code: &LinearCode,
    dec_cfg: &DecoderConfig,
    params: ChannelParams,
    rule: &StoppingRule,
    seed: u64,
    workers: usize,
) -> Result<CerEstimates> {
    Decoder::new(code, *dec_cfg)?;
    let counts = run_trials(
        rule,
        workers,
        3,
        &[false, true, true],
        || Decoder::new(code, *dec_cfg).expect("config validated above"),
        |dec, t| {
            let mut rng = RngStream::new(seed, t);
            let (_, c) = code.random_codeword(&mut rng);
            let (_, llrs) = transmit(&c, params, &mut rng);
            let out = dec.decode(&llrs).expect("campaign LLRs are finite");
            debug_assert!(!out.converged || code.is_codeword(&out.hard_word));
            match out.classify(&c) {
                ErrorClass::Correct => 0,
                ErrorClass::Detected => 1,
                ErrorClass::Undetected => 2,
            }
        },
    );
    let (detected, undetected) = (counts.per_class[1], counts.per_class[2]);
    Ok(CerEstimates {
        cer: Estimate::from_counts(detected + undetected, counts.trials),
        cer_star: Estimate::from_counts(detected, counts.trials),
        ucer: Estimate::from_counts(undetected, counts.trials),
    })
}

/// Probability that a fixed word, sent through the channel, decodes to some
/// codeword (a decoding "success" is the counted event). This is the engine
/// behind `P_nat`: the tail sequence terminates decoding precisely because
/// this probability is small.
pub fn estimate_convergence_rate(
    code: &LinearCode,
    dec_cfg: &DecoderConfig,
    params: ChannelParams,
    word: &BitWord,
    rule: &StoppingRule,
    seed: u64,
    workers: usize,
) -> Result<Estimate> {
    if word.len() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "word has {} bits, code expects {}",
            word.len(),
            code.n()
        )));
    }
    Decoder::new(code, *dec_cfg)?;
    let counts = run_trials(
        rule,
        workers,
        2,
        &[false, true],
        || Decoder::new(code, *dec_cfg).expect("config validated above"),
        |dec, t| {
            let mut rng = RngStream::new(seed, t);
            let (_, llrs) = transmit(word, params, &mut rng);
            let out = dec.decode(&llrs).expect("campaign LLRs are finite");
            debug_assert!(!out.converged || code.is_codeword(&out.hard_word));
            usize::from(out.converged)
        },
    );
    Ok(Estimate::from_counts(counts.per_class[1], counts.trials))
}

/// `P_nat` estimation: the decoder faces the noisy tail sequence as seen
/// after de-randomization (`t'` in randomized mode, `t` in derandomized
/// mode).
pub fn estimate_pnat(
    code: &LinearCode,
    dec_cfg: &DecoderConfig,
    params: ChannelParams,
    ts_mode: TsMode,
    rule: &StoppingRule,
    seed: u64,
    workers: usize,
) -> Result<Estimate> {
    let word = ts_mode.decoder_side_tail().ok_or_else(|| {
        Error::InvalidArgument(
            "P_nat needs a tail sequence (ts-mode randomized or derandomized)".into(),
        )
    })?;
    estimate_convergence_rate(code, dec_cfg, params, &word, rule, seed, workers)
}

/// One operating point of the rejection report.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RejectionRow {
    pub ebn0_db: f64,
    pub p_md: f64,
    pub cer: Estimate,
    pub cer_star: Estimate,
    pub ucer: Estimate,
    pub p_ldpc: f64,
    pub p_nat: Option<Estimate>,
    pub p_tcrej: f64,
}

/// Configuration echo stored with every report.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ReportMetadata {
    pub code_id: String,
    pub decoder: DecoderConfig,
    pub cltu: CltuConfig,
    pub start_detect: StartDetectConfig,
    pub rule: StoppingRule,
    pub seed: u64,
    pub workers: usize,
}

/// Rejection-probability sweep over `Eb/N0`, with every component.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RejectionReport {
    pub schema: String,
    pub metadata: ReportMetadata,
    pub rows: Vec<RejectionRow>,
}

/// CSV column order for [`RejectionReport::to_csv`] and the other report
/// emitters; bump the schema string when changing any of them.
pub const REPORT_SCHEMA: &str = "tc-rejection/v1";

impl RejectionReport {
    /// One row per operating point. Columns:
    /// `ebn0_db,p_md,cer,cer_low,cer_high,cer_star,ucer,p_ldpc,p_nat,p_nat_low,p_nat_high,p_tcrej`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "ebn0_db,p_md,cer,cer_low,cer_high,cer_star,ucer,p_ldpc,p_nat,p_nat_low,p_nat_high,p_tcrej\n",
        );
        for r in &self.rows {
            let (pn, pl, ph) = match &r.p_nat {
                Some(e) => (e.point, e.ci_low, e.ci_high),
                None => (0.0, 0.0, 0.0),
            };
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.ebn0_db,
                r.p_md,
                r.cer.point,
                r.cer.ci_low,
                r.cer.ci_high,
                r.cer_star.point,
                r.ucer.point,
                r.p_ldpc,
                pn,
                pl,
                ph,
                r.p_tcrej
            ));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs the full per-point pipeline: analytic `P_md`, Monte Carlo CER and
/// `P_nat`, then the Eq.-style combination into `P_TCrej`.
#[allow(clippy::too_many_arguments)]
pub fn build_rejection_report(
    code: &LinearCode,
    dec_cfg: &DecoderConfig,
    cltu_cfg: &CltuConfig,
    start_cfg: &StartDetectConfig,
    ebn0_list: &[f64],
    rule: &StoppingRule,
    seed: u64,
    workers: usize,
) -> Result<RejectionReport> {
    if ebn0_list.is_empty() {
        return Err(Error::InvalidArgument(
            "need at least one Eb/N0 point".into(),
        ));
    }
    if code.id() != cltu_cfg.code_id {
        return Err(Error::InvalidArgument(format!(
            "config is for code {:?} but got {:?}",
            cltu_cfg.code_id,
            code.id()
        )));
    }
    let mut rows = Vec::with_capacity(ebn0_list.len());
    for (i, &db) in ebn0_list.iter().enumerate() {
        let params = ChannelParams::new(db, code.rate())?;
        let p_md = p_md_analytic(start_cfg.sequence_bits, start_cfg.max_errors, db);
        let cer = estimate_cer(
            code,
            dec_cfg,
            params,
            rule,
            derive_seed(seed, 2 * i as u64),
            workers,
        )?;
        let p_nat = match cltu_cfg.ts_mode {
            TsMode::None => None,
            mode => Some(estimate_pnat(
                code,
                dec_cfg,
                params,
                mode,
                rule,
                derive_seed(seed, 2 * i as u64 + 1),
                workers,
            )?),
        };
        let p_ldpc = p_ldpc_from_cer(cer.cer_star.point, cltu_cfg.n_codewords);
        let p_tcrej = combine_tc_rejection(p_md, p_ldpc, p_nat.map_or(0.0, |e| e.point));
        rows.push(RejectionRow {
            ebn0_db: db,
            p_md,
            cer: cer.cer,
            cer_star: cer.cer_star,
            ucer: cer.ucer,
            p_ldpc,
            p_nat,
            p_tcrej,
        });
    }
    Ok(RejectionReport {
        schema: REPORT_SCHEMA.to_string(),
        metadata: ReportMetadata {
            code_id: code.id().to_string(),
            decoder: *dec_cfg,
            cltu: cltu_cfg.clone(),
            start_detect: *start_cfg,
            rule: *rule,
            seed,
            workers,
        },
        rows,
    })
}
