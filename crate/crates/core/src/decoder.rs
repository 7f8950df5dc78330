//! Iterative belief-propagation decoders for binary LDPC codes, plus an
//! exhaustive maximum-likelihood oracle for small codes.
//!
//! All three algorithms run a flooding schedule: every check node updates,
//! then every variable node. After each iteration the hard decision is tested
//! against the parity checks and decoding stops at the first zero syndrome.
//! Convergence to a wrong codeword is an undetected error; running out of
//! iterations is a detected one.

use crate::codes::LinearCode;
use crate::gf2::BitWord;
use crate::{Error, Result};

/// Check-node update rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Sum-product in the LLR domain (tanh-product check update).
    LlrSpa,
    /// Min-sum: minimum magnitude with sign product.
    MinSum,
    /// Min-sum with the check output scaled by a normalization factor.
    NormalizedMinSum,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::LlrSpa => "spa",
            Algorithm::MinSum => "msa",
            Algorithm::NormalizedMinSum => "nmsa",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spa" | "llr-spa" => Ok(Algorithm::LlrSpa),
            "msa" | "min-sum" => Ok(Algorithm::MinSum),
            "nmsa" | "normalized-min-sum" => Ok(Algorithm::NormalizedMinSum),
            _ => Err(Error::Parse(format!(
                "unknown algorithm {s:?} (expected spa, msa, or nmsa)"
            ))),
        }
    }
}

/// Decoder settings.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct DecoderConfig {
    pub algorithm: Algorithm,
    pub max_iterations: u32,
    /// Check-output scale for [`Algorithm::NormalizedMinSum`]; others ignore it.
    pub normalization_factor: f64,
    /// Magnitude bound applied to channel inputs and reported posteriors.
    pub llr_clip_magnitude: f64,
    /// Test the channel hard decision against H before the first iteration.
    pub check_iteration_zero: bool,
}

impl DecoderConfig {
    /// Standard settings: normalization 0.8, clip 30, iteration-0 check on.
    pub fn new(algorithm: Algorithm, max_iterations: u32) -> Self {
        Self {
            algorithm,
            max_iterations,
            normalization_factor: 0.8,
            llr_clip_magnitude: 30.0,
            check_iteration_zero: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(Error::InvalidArgument(
                "max_iterations must be at least 1".into(),
            ));
        }
        if !(self.normalization_factor > 0.0 && self.normalization_factor <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "normalization factor must be in (0,1], got {}",
                self.normalization_factor
            )));
        }
        // NaN must fail this check too, so compare via partial_cmp.
        if self.llr_clip_magnitude.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidArgument(
                "LLR clip magnitude must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome classes relative to the transmitted codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorClass {
    Correct,
    /// Converged, but to a different codeword.
    Undetected,
    /// Ran out of iterations without satisfying the checks.
    Detected,
}

/// Result of one decoding attempt.
#[derive(Clone, Debug)]
pub struct DecodeOutcome {
    /// A zero syndrome was reached.
    pub converged: bool,
    /// Iterations performed before stopping (0 when the channel hard
    /// decision already satisfied the checks).
    pub iterations_used: u32,
    /// Final hard decision.
    pub hard_word: BitWord,
}

impl DecodeOutcome {
    /// Classifies against the codeword that was actually sent.
    pub fn classify(&self, reference: &BitWord) -> ErrorClass {
        if !self.converged {
            ErrorClass::Detected
        } else if &self.hard_word == reference {
            ErrorClass::Correct
        } else {
            ErrorClass::Undetected
        }
    }
}

/// Reusable decoder for one code: owns the Tanner-graph adjacency and the
/// message scratch, so campaigns avoid per-trial rebuilding. Calls are
/// independent; clone one decoder per worker for concurrent use.
#[derive(Clone)]
pub struct Decoder {
    cfg: DecoderConfig,
    n: usize,
    m: usize,
    check_start: Vec<u32>,
    check_var: Vec<u32>,
    var_start: Vec<u32>,
    var_edge: Vec<u32>,
    // Scratch, sized once.
    ch: Vec<f64>,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    tanh_buf: Vec<f64>,
    prefix_buf: Vec<f64>,
    hard: Vec<bool>,
}

impl Decoder {
    pub fn new(code: &LinearCode, cfg: DecoderConfig) -> Result<Self> {
        cfg.validate()?;
        let h = code.parity_check();
        let (m, n) = (h.rows(), h.cols());
        let mut check_start = Vec::with_capacity(m + 1);
        let mut check_var = Vec::new();
        check_start.push(0u32);
        for r in 0..m {
            for c in 0..n {
                if h.get(r, c) {
                    check_var.push(c as u32);
                }
            }
            check_start.push(check_var.len() as u32);
        }
        let edges = check_var.len();
        let mut var_start = vec![0u32; n + 1];
        for &v in &check_var {
            var_start[v as usize + 1] += 1;
        }
        for v in 0..n {
            var_start[v + 1] += var_start[v];
        }
        let mut cursor = var_start.clone();
        let mut var_edge = vec![0u32; edges];
        for (e, &v) in check_var.iter().enumerate() {
            var_edge[cursor[v as usize] as usize] = e as u32;
            cursor[v as usize] += 1;
        }
        let max_deg = (0..m).map(|r| h.row_weight(r)).max().unwrap_or(0);
        Ok(Self {
            cfg,
            n,
            m,
            check_start,
            check_var,
            var_start,
            var_edge,
            ch: vec![0.0; n],
            v2c: vec![0.0; edges],
            c2v: vec![0.0; edges],
            tanh_buf: vec![0.0; max_deg],
            prefix_buf: vec![0.0; max_deg + 1],
            hard: vec![false; n],
        })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.cfg
    }

    /// Decodes channel LLRs (positive favors bit 0).
    pub fn decode(&mut self, llrs: &[f64]) -> Result<DecodeOutcome> {
        self.run(llrs, None)
    }

    /// Like [`Self::decode`], also returning the hard-decision word after
    /// the channel stage (index 0) and after each completed iteration.
    pub fn decode_traced(&mut self, llrs: &[f64]) -> Result<(DecodeOutcome, Vec<BitWord>)> {
        let mut trace = Vec::new();
        let outcome = self.run(llrs, Some(&mut trace))?;
        Ok((outcome, trace))
    }

    fn run(&mut self, llrs: &[f64], mut trace: Option<&mut Vec<BitWord>>) -> Result<DecodeOutcome> {
        if llrs.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "got {} LLRs for a length-{} code",
                llrs.len(),
                self.n
            )));
        }
        if llrs.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("LLRs must be finite".into()));
        }
        let clip = self.cfg.llr_clip_magnitude;
        for (dst, &x) in self.ch.iter_mut().zip(llrs) {
            *dst = x.clamp(-clip, clip);
        }
        // Channel-stage hard decision; ties at zero decide bit 0.
        for v in 0..self.n {
            self.hard[v] = self.ch[v] < 0.0;
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(self.hard_word());
        }
        if self.cfg.check_iteration_zero && self.syndrome_ok() {
            return Ok(DecodeOutcome {
                converged: true,
                iterations_used: 0,
                hard_word: self.hard_word(),
            });
        }
        for (e, &v) in self.check_var.iter().enumerate() {
            self.v2c[e] = self.ch[v as usize];
        }
        for iter in 1..=self.cfg.max_iterations {
            match self.cfg.algorithm {
                Algorithm::LlrSpa => self.check_update_spa(),
                Algorithm::MinSum => self.check_update_minsum(1.0),
                Algorithm::NormalizedMinSum => {
                    self.check_update_minsum(self.cfg.normalization_factor)
                }
            }
            self.variable_update();
            if let Some(t) = trace.as_deref_mut() {
                t.push(self.hard_word());
            }
            if self.syndrome_ok() {
                return Ok(DecodeOutcome {
                    converged: true,
                    iterations_used: iter,
                    hard_word: self.hard_word(),
                });
            }
        }
        Ok(DecodeOutcome {
            converged: false,
            iterations_used: self.cfg.max_iterations,
            hard_word: self.hard_word(),
        })
    }

    /// Tanh-product check update. Each factor is clamped away from exact
    /// magnitude 1 so the atanh stays finite.
    fn check_update_spa(&mut self) {
        const ONE: f64 = 1.0 - 1e-15;
        for c in 0..self.m {
            let (s, e) = (
                self.check_start[c] as usize,
                self.check_start[c + 1] as usize,
            );
            let deg = e - s;
            for j in 0..deg {
                self.tanh_buf[j] = (0.5 * self.v2c[s + j]).tanh().clamp(-ONE, ONE);
            }
            // Products of all factors except one, via prefix/suffix scans.
            self.prefix_buf[0] = 1.0;
            for j in 0..deg {
                self.prefix_buf[j + 1] = self.prefix_buf[j] * self.tanh_buf[j];
            }
            let mut suffix = 1.0;
            for j in (0..deg).rev() {
                let p = (self.prefix_buf[j] * suffix).clamp(-ONE, ONE);
                self.c2v[s + j] = 2.0 * p.atanh();
                suffix *= self.tanh_buf[j];
            }
        }
    }

    /// Min-sum check update: sign product and smallest magnitude among the
    /// other inputs, then scaled by `factor`.
    fn check_update_minsum(&mut self, factor: f64) {
        for c in 0..self.m {
            let (s, e) = (
                self.check_start[c] as usize,
                self.check_start[c + 1] as usize,
            );
            let mut parity = false;
            let (mut min1, mut min2) = (f64::INFINITY, f64::INFINITY);
            let mut argmin = s;
            for j in s..e {
                let x = self.v2c[j];
                parity ^= x < 0.0;
                let mag = x.abs();
                if mag < min1 {
                    min2 = min1;
                    min1 = mag;
                    argmin = j;
                } else if mag < min2 {
                    min2 = mag;
                }
            }
            for j in s..e {
                let mag = if j == argmin { min2 } else { min1 };
                let neg = parity ^ (self.v2c[j] < 0.0);
                self.c2v[j] = if neg { -factor * mag } else { factor * mag };
            }
        }
    }

    /// Variable update. Messages are computed from the exact sums so that
    /// min-sum dynamics commute with positive scaling of the inputs; the
    /// clip guards the channel terms and the reported posteriors (the hard
    /// decision reads the sign, which clamping preserves).
    fn variable_update(&mut self) {
        for v in 0..self.n {
            let (s, e) = (self.var_start[v] as usize, self.var_start[v + 1] as usize);
            let mut sum = self.ch[v];
            for j in s..e {
                sum += self.c2v[self.var_edge[j] as usize];
            }
            self.hard[v] = sum < 0.0;
            for j in s..e {
                let edge = self.var_edge[j] as usize;
                self.v2c[edge] = sum - self.c2v[edge];
            }
        }
    }

    /// True when the current hard decision satisfies every check.
    fn syndrome_ok(&self) -> bool {
        for c in 0..self.m {
            let (s, e) = (
                self.check_start[c] as usize,
                self.check_start[c + 1] as usize,
            );
            let mut parity = false;
            for j in s..e {
                parity ^= self.hard[self.check_var[j] as usize];
            }
            if parity {
                return false;
            }
        }
        true
    }

    fn hard_word(&self) -> BitWord {
        let mut w = BitWord::zero(self.n);
        for (v, &b) in self.hard.iter().enumerate() {
            if b {
                w.set(v, true);
            }
        }
        w
    }
}

/// One-shot decode without keeping a [`Decoder`] around.
pub fn decode(code: &LinearCode, llrs: &[f64], cfg: DecoderConfig) -> Result<DecodeOutcome> {
    Decoder::new(code, cfg)?.decode(llrs)
}

/// Brute-force maximum-likelihood decoding: returns the codeword whose BPSK
/// image is closest in Euclidean distance to `received`. Ties go to the
/// first codeword in information-word enumeration order.
pub fn exhaustive_ml_decode(code: &LinearCode, received: &[f64]) -> Result<BitWord> {
    let k = code.k();
    if k > 20 {
        return Err(Error::Capability(format!(
            "exhaustive search over 2^{k} codewords refused"
        )));
    }
    if received.len() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "got {} samples for a length-{} code",
            received.len(),
            code.n()
        )));
    }
    let mut best: Option<(f64, BitWord)> = None;
    for idx in 0u32..1 << k {
        let mut info = BitWord::zero(k);
        for i in 0..k {
            if (idx >> (k - 1 - i)) & 1 == 1 {
                info.set(i, true);
            }
        }
        let c = code.encode(&info)?;
        let d2: f64 = received
            .iter()
            .zip(c.iter())
            .map(|(&y, b)| {
                let x = if b { -1.0 } else { 1.0 };
                (y - x) * (y - x)
            })
            .sum();
        if best.as_ref().is_none_or(|(bd, _)| d2 < *bd) {
            best = Some((d2, c));
        }
    }
    Ok(best.expect("codebook is never empty").1)
}
