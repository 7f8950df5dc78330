//! CCSDS telecommand randomizer.
//!
//! An 8-cell Fibonacci LFSR generates the scrambling stream. The register is
//! reset to its seed at the start of every 128-bit block, so the stream is the
//! same 128-bit prefix repeated, and randomization is an involution.

use crate::gf2::BitWord;

/// Block length after which the register is reset to its seed.
pub const BLOCK_BITS: usize = 128;

/// Which value a step of the register emits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TapEnd {
    /// The oldest cell (the end the register shifts out of).
    OldestCell,
    /// The freshly computed feedback bit.
    Feedback,
}

/// Fibonacci LFSR over 8 cells. Cell `i` is bit `i` of the state byte;
/// cell 0 is the oldest. Each step computes the feedback as the parity of
/// the tapped cells and shifts it in at cell 7.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LfsrConfig {
    /// Feedback tap mask: bit `i` set means cell `i` contributes.
    pub taps: u8,
    /// Initial register fill.
    pub seed: u8,
    /// Output convention.
    pub output: TapEnd,
}

/// The flight-standard configuration: polynomial
/// `x^8 + x^6 + x^4 + x^3 + x^2 + x + 1`, all-ones seed, oldest-cell output.
/// The recurrence `a[m+8] = a[m+6] + a[m+4] + a[m+3] + a[m+2] + a[m+1] + a[m]`
/// taps cells {0, 1, 2, 3, 4, 6}.
pub const CCSDS_LFSR: LfsrConfig = LfsrConfig {
    taps: 0b0101_1111,
    seed: 0xFF,
    output: TapEnd::OldestCell,
};

/// Generates `len` output bits from a free-running register (no block reset).
pub fn lfsr_sequence(cfg: LfsrConfig, len: usize) -> BitWord {
    let mut out = BitWord::zero(len);
    let mut state = cfg.seed;
    for i in 0..len {
        let fb = (state & cfg.taps).count_ones() as u8 & 1;
        let bit = match cfg.output {
            TapEnd::OldestCell => state & 1,
            TapEnd::Feedback => fb,
        };
        if bit == 1 {
            out.set(i, true);
        }
        state = (state >> 1) | (fb << 7);
    }
    out
}

/// Scrambling stream with the register reset every [`BLOCK_BITS`] bits.
pub fn scramble_stream(cfg: LfsrConfig, len: usize) -> BitWord {
    let mut out = BitWord::zero(len);
    let mut done = 0;
    while done < len {
        let take = BLOCK_BITS.min(len - done);
        let block = lfsr_sequence(cfg, take);
        for i in 0..take {
            if block.get(i) {
                out.set(done + i, true);
            }
        }
        done += take;
    }
    out
}

/// XORs the standard scrambling stream onto `data` (per-block reset).
/// Applying it twice restores the input.
pub fn randomize(data: &BitWord) -> BitWord {
    data.xor(&scramble_stream(CCSDS_LFSR, data.len()))
}

/// Identical operation to [`randomize`]; named for the receive side.
pub fn derandomize(data: &BitWord) -> BitWord {
    randomize(data)
}
