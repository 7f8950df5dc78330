//! CLTU assembly and reception: start sequence, randomized codewords, and
//! the tail sequence that terminates decoding by failing to decode.
//!
//! The receiver pipeline is: hard-detect the start sequence at its known
//! position, de-randomize everything after it, decode the data blocks, then
//! decode the tail-sequence block. A tail sequence that *fails* to decode is
//! the expected terminator; one that decodes to a codeword means the
//! terminator was not recognized.

use crate::channel::{hard_decision, ChannelParams, RngStream};
use crate::codes::LinearCode;
use crate::decoder::{Decoder, DecoderConfig};
use crate::gf2::{hamming, BitWord};
use crate::scrambler::{randomize, scramble_stream, CCSDS_LFSR};
use crate::{Error, Result};

/// 64-bit CLTU start sequence.
pub const START_SEQUENCE_HEX: &str = "034776C7272895B0";
/// 128-bit tail sequence `t` as transmitted in the standard (randomized) mode.
pub const TAIL_SEQUENCE_HEX: &str = "5555 5556 AAAA AAAA 5555 5555 5555 5555";
/// The tail sequence after randomization, `t' = randomize(t)`: what the
/// decoder sees in the standard mode.
pub const RANDOMIZED_TAIL_HEX: &str = "AA6C CB0C C243 AC5F 39DC 7AF4 640B 5D95";
/// The three (128,64) codewords at Hamming distance 15 from `t'`.
pub const DISTANCE_15_CODEWORDS: [&str; 3] = [
    "AE6C EF4C C057 BC7F 1DDC FBF4 641B 5D85",
    "AAEC 8F0C CA43 2C5F 3F58 78F4 048B 1DB5",
    "0A4C 8B0C C34B ACDD 29DD FEF4 250B 5D97",
];

pub fn start_sequence() -> BitWord {
    BitWord::from_hex(START_SEQUENCE_HEX).expect("constant parses")
}

pub fn tail_sequence() -> BitWord {
    BitWord::from_hex(TAIL_SEQUENCE_HEX).expect("constant parses")
}

pub fn randomized_tail_sequence() -> BitWord {
    BitWord::from_hex(RANDOMIZED_TAIL_HEX).expect("constant parses")
}

/// Tail-sequence placement relative to the randomizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TsMode {
    /// Standard: `t` goes on the wire, the receiver de-randomizes it to `t'`.
    Randomized,
    /// Proposed alternative: `t'` goes on the wire, the receiver sees `t`.
    Derandomized,
    /// No tail sequence (the longer code omits it).
    None,
}

impl TsMode {
    pub fn name(self) -> &'static str {
        match self {
            TsMode::Randomized => "randomized",
            TsMode::Derandomized => "derandomized",
            TsMode::None => "none",
        }
    }

    /// The 128-bit word the decoder faces after de-randomization.
    pub fn decoder_side_tail(self) -> Option<BitWord> {
        match self {
            TsMode::Randomized => Some(randomized_tail_sequence()),
            TsMode::Derandomized => Some(tail_sequence()),
            TsMode::None => None,
        }
    }

    /// The 128-bit word appended to the CLTU on the wire.
    pub fn wire_side_tail(self) -> Option<BitWord> {
        match self {
            TsMode::Randomized => Some(tail_sequence()),
            TsMode::Derandomized => Some(randomized_tail_sequence()),
            TsMode::None => None,
        }
    }
}

impl std::str::FromStr for TsMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "randomized" => Ok(TsMode::Randomized),
            "derandomized" => Ok(TsMode::Derandomized),
            "none" => Ok(TsMode::None),
            _ => Err(Error::Parse(format!(
                "unknown ts-mode {s:?} (expected randomized, derandomized, or none)"
            ))),
        }
    }
}

/// Shape of one CLTU.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CltuConfig {
    pub code_id: String,
    pub n_codewords: usize,
    pub ts_mode: TsMode,
}

impl CltuConfig {
    pub fn new(code_id: &str, n_codewords: usize, ts_mode: TsMode) -> Result<Self> {
        if n_codewords < 1 {
            return Err(Error::InvalidArgument(
                "a CLTU carries at least one codeword".into(),
            ));
        }
        Ok(Self {
            code_id: code_id.to_string(),
            n_codewords,
            ts_mode,
        })
    }

    pub fn check_code(&self, code: &LinearCode) -> Result<()> {
        if code.id() != self.code_id {
            return Err(Error::InvalidArgument(format!(
                "config is for code {:?} but got {:?}",
                self.code_id,
                code.id()
            )));
        }
        if self.ts_mode != TsMode::None && code.n() != 128 {
            return Err(Error::InvalidArgument(
                "the tail sequence is defined for the 128-bit code only".into(),
            ));
        }
        Ok(())
    }

    /// Total CLTU length in bits.
    pub fn frame_bits(&self, code: &LinearCode) -> usize {
        64 + self.n_codewords * code.n() + if self.ts_mode == TsMode::None { 0 } else { 128 }
    }
}

/// Start-sequence acceptance rule: accept when the hard-detected word
/// differs from the known sequence in at most `max_errors` positions.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct StartDetectConfig {
    pub sequence_bits: usize,
    pub max_errors: usize,
}

impl StartDetectConfig {
    /// The reference operating point: 64-bit sequence, threshold 13.
    pub fn standard() -> Self {
        Self {
            sequence_bits: 64,
            max_errors: 13,
        }
    }

    pub fn with_threshold(max_errors: usize) -> Result<Self> {
        let cfg = Self {
            sequence_bits: 64,
            max_errors,
        };
        if cfg.max_errors > cfg.sequence_bits {
            return Err(Error::InvalidArgument(format!(
                "threshold {max_errors} exceeds the sequence length {}",
                cfg.sequence_bits
            )));
        }
        Ok(cfg)
    }
}

/// Receiver verdict for one CLTU.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CltuVerdict {
    Accepted,
    /// Start sequence missed: too many bit errors in the detection window.
    MissedStart,
    /// Some data block failed to decode.
    LdpcFailure,
    /// The tail-sequence block decoded to a codeword, so the terminator
    /// was consumed as data and the CLTU is not acknowledged.
    TsNotAcknowledged,
}

impl CltuVerdict {
    pub fn is_rejected(self) -> bool {
        self != CltuVerdict::Accepted
    }

    pub fn label(self) -> &'static str {
        match self {
            CltuVerdict::Accepted => "accepted",
            CltuVerdict::MissedStart => "missed-start",
            CltuVerdict::LdpcFailure => "ldpc-failure",
            CltuVerdict::TsNotAcknowledged => "ts-not-acknowledged",
        }
    }
}

/// Assembles a CLTU: start sequence, randomized codewords, tail sequence
/// per mode.
pub fn build_cltu(code: &LinearCode, infowords: &[BitWord], cfg: &CltuConfig) -> Result<BitWord> {
    cfg.check_code(code)?;
    if infowords.len() != cfg.n_codewords {
        return Err(Error::InvalidArgument(format!(
            "expected {} infowords, got {}",
            cfg.n_codewords,
            infowords.len()
        )));
    }
    let mut body = BitWord::zero(0);
    for u in infowords {
        body.extend(&code.encode(u)?);
    }
    let mut frame = start_sequence();
    frame.extend(&randomize(&body));
    if let Some(ts) = cfg.ts_mode.wire_side_tail() {
        frame.extend(&ts);
    }
    Ok(frame)
}

/// Start-sequence detection on hard bits at the known frame position.
pub fn detect_start_sequence(received: &BitWord, cfg: &StartDetectConfig) -> bool {
    assert_eq!(received.len(), cfg.sequence_bits, "detection window length");
    hamming(received, &start_sequence()) <= cfg.max_errors
}

/// Runs the receiver pipeline on noisy samples of a full CLTU.
///
/// `params` is the coded operating point used to scale samples into LLRs for
/// the codeword and tail-sequence blocks; the start sequence is detected from
/// hard decisions only.
pub fn receive_cltu(
    samples: &[f64],
    code: &LinearCode,
    cfg: &CltuConfig,
    start_cfg: &StartDetectConfig,
    dec_cfg: &DecoderConfig,
    params: ChannelParams,
) -> Result<CltuVerdict> {
    cfg.check_code(code)?;
    let want = cfg.frame_bits(code);
    if samples.len() != want {
        return Err(Error::DimensionMismatch(format!(
            "CLTU has {} samples, config implies {want}",
            samples.len()
        )));
    }
    let mut decoder = Decoder::new(code, *dec_cfg)?;
    receive_cltu_with(samples, code, cfg, start_cfg, &mut decoder, params)
}

/// [`receive_cltu`] with a caller-supplied decoder, for campaign loops that
/// reuse scratch across trials.
pub fn receive_cltu_with(
    samples: &[f64],
    code: &LinearCode,
    cfg: &CltuConfig,
    start_cfg: &StartDetectConfig,
    decoder: &mut Decoder,
    params: ChannelParams,
) -> Result<CltuVerdict> {
    let n = code.n();
    let start = hard_decision(&samples[..64]);
    if !detect_start_sequence(&start, start_cfg) {
        return Ok(CltuVerdict::MissedStart);
    }
    // De-randomization after the start sequence operates on LLRs: flip the
    // sign wherever the scrambling stream has a one (the hard-bit XOR moved
    // into the soft domain).
    let scale = params.llr_scale();
    let tail = &samples[64..];
    let stream = scramble_stream(CCSDS_LFSR, tail.len());
    let llrs: Vec<f64> = tail
        .iter()
        .enumerate()
        .map(|(i, &y)| if stream.get(i) { -scale * y } else { scale * y })
        .collect();
    for b in 0..cfg.n_codewords {
        let out = decoder.decode(&llrs[b * n..(b + 1) * n])?;
        if !out.converged {
            return Ok(CltuVerdict::LdpcFailure);
        }
    }
    if cfg.ts_mode != TsMode::None {
        let ts_llrs = &llrs[cfg.n_codewords * n..];
        let out = decoder.decode(ts_llrs)?;
        if out.converged {
            return Ok(CltuVerdict::TsNotAcknowledged);
        }
    }
    Ok(CltuVerdict::Accepted)
}

/// Transmits a CLTU over AWGN. The start sequence is an uncoded segment, so
/// its noise is drawn at the uncoded operating point; everything after it
/// uses the coded one. Both segments share the given `Eb/N0`.
pub fn transmit_cltu(
    frame: &BitWord,
    ebn0_db: f64,
    code_rate: f64,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    let uncoded = ChannelParams::uncoded(ebn0_db);
    let coded = ChannelParams::new(ebn0_db, code_rate)?;
    let x = crate::channel::bpsk_modulate(frame);
    let mut y = crate::channel::add_noise(&x[..64], uncoded.noise_sigma(), rng);
    y.extend(crate::channel::add_noise(
        &x[64..],
        coded.noise_sigma(),
        rng,
    ));
    Ok(y)
}
