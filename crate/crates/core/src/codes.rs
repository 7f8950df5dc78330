//! Linear block codes: quasi-cyclic LDPC construction, systematic encoding,
//! and the registry of codes used by the CLI.
//!
//! The CCSDS telecommand codes are built from a 4x8 grid of MxM circulant
//! blocks. `Phi^i` denotes the identity cyclically shifted right by `i`
//! columns: row `r` has its one at column `(r + i) mod M`.

use crate::gf2::{BinMatrix, BitWord, ColumnPermutation};
use crate::{Error, Result};

/// One MxM block of a quasi-cyclic parity-check matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcBlockEntry {
    /// All-zero block.
    Zero,
    /// Identity block.
    Identity,
    /// Circulant shift `Phi^i`.
    Shift(usize),
    /// `I + Phi^i` (weight-2 rows for `i != 0`).
    IdentityPlusShift(usize),
}

/// Grid of circulant blocks plus the block size `M`.
#[derive(Clone, Debug)]
pub struct QcMatrixSpec {
    pub block_size: usize,
    pub grid: Vec<Vec<QcBlockEntry>>,
}

impl QcMatrixSpec {
    /// Expands the grid into a dense parity-check matrix.
    pub fn expand(&self) -> Result<BinMatrix> {
        let m = self.block_size;
        if m == 0 {
            return Err(Error::InvalidArgument("block size must be positive".into()));
        }
        if self.grid.is_empty() || self.grid.iter().any(|row| row.len() != self.grid[0].len()) {
            return Err(Error::InvalidArgument(
                "grid must be rectangular and non-empty".into(),
            ));
        }
        let (br, bc) = (self.grid.len(), self.grid[0].len());
        let mut h = BinMatrix::zeros(br * m, bc * m);
        for (bi, row) in self.grid.iter().enumerate() {
            for (bj, &entry) in row.iter().enumerate() {
                let shifts: Vec<usize> = match entry {
                    QcBlockEntry::Zero => vec![],
                    QcBlockEntry::Identity => vec![0],
                    QcBlockEntry::Shift(i) => {
                        check_shift(i, m)?;
                        vec![i]
                    }
                    QcBlockEntry::IdentityPlusShift(i) => {
                        check_shift(i, m)?;
                        if i == 0 {
                            // I + Phi^0 would be the zero block in disguise.
                            return Err(Error::InvalidArgument(
                                "identity-plus-shift requires a nonzero shift".into(),
                            ));
                        }
                        vec![0, i]
                    }
                };
                for &s in &shifts {
                    for r in 0..m {
                        let c = (r + s) % m;
                        // XOR semantics: overlapping ones cancel.
                        let cur = h.get(bi * m + r, bj * m + c);
                        h.set(bi * m + r, bj * m + c, !cur);
                    }
                }
            }
        }
        Ok(h)
    }
}

fn check_shift(i: usize, m: usize) -> Result<()> {
    if i >= m {
        return Err(Error::InvalidArgument(format!(
            "shift {i} out of range for block size {m}"
        )));
    }
    Ok(())
}

/// A binary linear code with its parity-check matrix and a systematic
/// encoder derived from it.
#[derive(Clone, Debug)]
pub struct LinearCode {
    id: String,
    n: usize,
    k: usize,
    h: BinMatrix,
    g: BinMatrix,
    info_positions: Vec<usize>,
}

impl LinearCode {
    /// Builds a code from a parity-check matrix. The generator comes from
    /// Gauss-Jordan elimination of `H` with the column permutation undone,
    /// so codewords are in the natural transmitted bit order.
    pub fn from_parity_check(id: &str, h: BinMatrix) -> Result<Self> {
        let n = h.cols();
        let (red, perm, rank) = h.clone().row_reduce_systematic();
        let k = n - rank;
        if k == 0 {
            return Err(Error::InvalidArgument(format!(
                "code {id:?} has rank n; no information bits"
            )));
        }
        // Permuted H is [I_r | A]; the permuted generator is [A^T | I_k].
        let mut g = BinMatrix::zeros(k, n);
        let mut info_positions = Vec::with_capacity(k);
        for i in 0..k {
            for j in 0..rank {
                if red.get(j, rank + i) {
                    g.set(i, perm.original_of(j), true);
                }
            }
            let pos = perm.original_of(rank + i);
            g.set(i, pos, true);
            info_positions.push(pos);
        }
        let code = Self {
            id: id.to_string(),
            n,
            k,
            h,
            g,
            info_positions,
        };
        for i in 0..k {
            if code.syndrome(&code.g.row(i)).weight() != 0 {
                return Err(Error::InvalidArgument(format!(
                    "generator row {i} of code {id:?} violates the parity checks"
                )));
            }
        }
        Ok(code)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Information length.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Code rate `k/n`.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn parity_check(&self) -> &BinMatrix {
        &self.h
    }

    pub fn generator(&self) -> &BinMatrix {
        &self.g
    }

    /// Columns of the natural order that carry the information bits.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    /// Encodes `k` information bits into an `n`-bit codeword.
    pub fn encode(&self, info: &BitWord) -> Result<BitWord> {
        if info.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "infoword has {} bits, code {:?} expects {}",
                info.len(),
                self.id,
                self.k
            )));
        }
        let mut c = BitWord::zero(self.n);
        for i in 0..self.k {
            if info.get(i) {
                c.xor_in_place(&self.g.row(i));
            }
        }
        Ok(c)
    }

    /// Reads the information bits back out of a codeword.
    pub fn extract_info(&self, codeword: &BitWord) -> Result<BitWord> {
        if codeword.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "codeword has {} bits, code {:?} expects {}",
                codeword.len(),
                self.id,
                self.n
            )));
        }
        let mut u = BitWord::zero(self.k);
        for (i, &pos) in self.info_positions.iter().enumerate() {
            if codeword.get(pos) {
                u.set(i, true);
            }
        }
        Ok(u)
    }

    /// Syndrome of a received hard word.
    pub fn syndrome(&self, word: &BitWord) -> BitWord {
        self.h.mul_vec(word)
    }

    /// True when the word satisfies every parity check.
    pub fn is_codeword(&self, word: &BitWord) -> bool {
        self.syndrome(word).weight() == 0
    }

    /// Draws a uniformly random infoword and its codeword.
    pub fn random_codeword<R: rand::Rng>(&self, rng: &mut R) -> (BitWord, BitWord) {
        let mut u = BitWord::zero(self.k);
        for i in 0..self.k {
            u.set(i, rng.gen());
        }
        let c = self
            .encode(&u)
            .expect("infoword length is k by construction");
        (u, c)
    }
}

/// Identifiers accepted by [`make_code`].
pub const CODE_IDS: [&str; 4] = [
    "ccsds-128-64",
    "ccsds-512-256",
    "toy-hamming-7-4",
    "toy-rand-8-4",
];

/// Grid for the (128,64) telecommand code, `M = 16`.
pub fn ccsds_128_64_spec() -> QcMatrixSpec {
    use QcBlockEntry::{Identity as I, IdentityPlusShift as P, Shift as S, Zero as Z};
    QcMatrixSpec {
        block_size: 16,
        grid: vec![
            vec![P(7), S(2), S(14), S(6), Z, S(0), S(13), I],
            vec![S(6), P(15), S(0), S(1), I, Z, S(0), S(7)],
            vec![S(4), S(1), P(15), S(14), S(11), I, Z, S(3)],
            vec![S(0), S(1), S(9), P(13), S(14), S(1), I, Z],
        ],
    }
}

/// Grid for the (512,256) telecommand code, `M = 64`.
pub fn ccsds_512_256_spec() -> QcMatrixSpec {
    use QcBlockEntry::{Identity as I, IdentityPlusShift as P, Shift as S, Zero as Z};
    QcMatrixSpec {
        block_size: 64,
        grid: vec![
            vec![P(63), S(30), S(50), S(25), Z, S(43), S(62), I],
            vec![S(56), P(61), S(50), S(25), I, Z, S(37), S(26)],
            vec![S(16), S(0), P(55), S(27), S(56), I, Z, S(43)],
            vec![S(35), S(56), S(62), P(11), S(58), S(3), I, Z],
        ],
    }
}

/// Builds a registered code by identifier.
pub fn make_code(id: &str) -> Result<LinearCode> {
    match id {
        "ccsds-128-64" => LinearCode::from_parity_check(id, ccsds_128_64_spec().expand()?),
        "ccsds-512-256" => LinearCode::from_parity_check(id, ccsds_512_256_spec().expand()?),
        "toy-hamming-7-4" => {
            // Columns are 1..7 in binary, so the syndrome of a single error
            // names the flipped position.
            let h = BinMatrix::from_dense_text("0001111\n0110011\n1010101\n")?;
            LinearCode::from_parity_check(id, h)
        }
        "toy-rand-8-4" => {
            // Fixed full-rank matrix drawn once at random.
            let h = BinMatrix::from_dense_text("10110100\n01101011\n11010110\n00111101\n")?;
            LinearCode::from_parity_check(id, h)
        }
        _ => Err(Error::UnknownCode(id.to_string())),
    }
}

/// Column permutation helper re-exported for callers that reduce matrices.
pub type Permutation = ColumnPermutation;
