//! BPSK modulation over the AWGN channel, LLR computation, and seeded
//! random-number streams for reproducible Monte Carlo campaigns.
//!
//! Bit `b` maps to the symbol `(-1)^b`, so a positive received sample (and a
//! positive LLR) favors bit 0. For a code of rate `R` at a given `Eb/N0`, the
//! noise variance per dimension is `sigma^2 = 1 / (2 R 10^(EbN0_dB/10))` and
//! the channel LLR is `2 y / sigma^2`. Start-sequence detection is analyzed
//! uncoded (`R = 1`), codeword and tail-sequence segments at the code rate;
//! both conventions coexist in one CLTU reception.

use crate::gf2::BitWord;
use crate::{Error, Result};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Operating point of the AWGN channel.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    pub rate: f64,
}

impl ChannelParams {
    pub fn new(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) || !ebn0_db.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "channel needs finite Eb/N0 and rate in (0,1], got {ebn0_db} dB at rate {rate}"
            )));
        }
        Ok(Self { ebn0_db, rate })
    }

    /// Uncoded operating point (`R = 1`), used for start-sequence analysis.
    pub fn uncoded(ebn0_db: f64) -> Self {
        Self { ebn0_db, rate: 1.0 }
    }

    /// Linear `Eb/N0`.
    pub fn ebn0_linear(&self) -> f64 {
        10f64.powf(self.ebn0_db / 10.0)
    }

    /// Noise variance per real dimension.
    pub fn noise_sigma2(&self) -> f64 {
        1.0 / (2.0 * self.rate * self.ebn0_linear())
    }

    pub fn noise_sigma(&self) -> f64 {
        self.noise_sigma2().sqrt()
    }

    /// Multiplier taking a received sample to its LLR.
    pub fn llr_scale(&self) -> f64 {
        2.0 / self.noise_sigma2()
    }
}

/// Counter-based random stream: a master seed plus a stream index yield a
/// generator whose draws depend only on `(seed, index)`, never on scheduling,
/// so per-trial substreams make parallel campaigns reproducible.
#[derive(Clone, Debug)]
pub struct RngStream(ChaCha8Rng);

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self(rng)
    }

    /// Standard normal draw.
    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.0)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.0.try_fill_bytes(dest)
    }
}

/// Maps bits to antipodal symbols: 0 -> +1, 1 -> -1.
pub fn bpsk_modulate(bits: &BitWord) -> Vec<f64> {
    bits.iter().map(|b| if b { -1.0 } else { 1.0 }).collect()
}

/// Adds white Gaussian noise of the given standard deviation.
pub fn add_noise(symbols: &[f64], sigma: f64, rng: &mut RngStream) -> Vec<f64> {
    symbols.iter().map(|&x| x + sigma * rng.normal()).collect()
}

/// Channel LLRs for received samples; positive favors bit 0.
pub fn llrs_from_samples(samples: &[f64], params: ChannelParams) -> Vec<f64> {
    let scale = params.llr_scale();
    samples.iter().map(|&y| scale * y).collect()
}

/// Sign detector: negative sample -> bit 1; ties decide 0.
pub fn hard_decision(samples: &[f64]) -> BitWord {
    let mut w = BitWord::zero(samples.len());
    for (i, &y) in samples.iter().enumerate() {
        if y < 0.0 {
            w.set(i, true);
        }
    }
    w
}

/// Transmits `bits` over the channel; returns received samples and LLRs.
pub fn transmit(
    bits: &BitWord,
    params: ChannelParams,
    rng: &mut RngStream,
) -> (Vec<f64>, Vec<f64>) {
    let samples = add_noise(&bpsk_modulate(bits), params.noise_sigma(), rng);
    let llrs = llrs_from_samples(&samples, params);
    (samples, llrs)
}

/// Uncoded BPSK bit error probability `1/2 erfc(sqrt(Eb/N0))`.
pub fn bit_error_probability(ebn0_db: f64) -> f64 {
    0.5 * libm::erfc(10f64.powf(ebn0_db / 10.0).sqrt())
}
