//! Bit vectors and matrices over GF(2).
//!
//! Bits are indexed in transmission order: index 0 is the first bit on the
//! wire and maps to the most significant bit of the first storage word, so a
//! hex digit covers four consecutive indices MSB-first. All arithmetic keeps
//! the padding bits past `len` zero.

use crate::{Error, Result};

/// Packed bit vector with MSB-first word layout.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord {
    len: usize,
    words: Vec<u64>,
}

impl BitWord {
    /// All-zero word of the given bit length.
    pub fn zero(len: usize) -> Self {
        Self {
            len,
            words: vec![0u64; len.div_ceil(64)],
        }
    }

    /// Builds from bit values in transmission order (nonzero = 1).
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut w = Self::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                w.set(i, true);
            }
        }
        w
    }

    /// Parses hex text; whitespace is skipped and case is ignored.
    /// The length is four bits per digit.
    pub fn from_hex(text: &str) -> Result<Self> {
        let mut nibbles = Vec::with_capacity(text.len());
        for ch in text.chars() {
            if ch.is_whitespace() {
                continue;
            }
            let v = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex character {ch:?}")))?;
            nibbles.push(v as u64);
        }
        if nibbles.is_empty() {
            return Err(Error::Parse("empty hex string".into()));
        }
        let mut w = Self::zero(nibbles.len() * 4);
        for (i, v) in nibbles.into_iter().enumerate() {
            w.words[i / 16] |= v << (4 * (15 - i % 16));
        }
        Ok(w)
    }

    /// Hex rendering, `ceil(len/4)` uppercase digits; padding bits print as 0.
    pub fn to_hex(&self) -> String {
        let ndigits = self.len.div_ceil(4);
        let mut s = String::with_capacity(ndigits);
        for i in 0..ndigits {
            let v = (self.words[i / 16] >> (4 * (15 - i % 16))) & 0xF;
            s.push(char::from_digit(v as u32, 16).unwrap().to_ascii_uppercase());
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (63 - i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (63 - i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Flips bit `i`.
    pub fn flip(&mut self, i: usize) {
        self.set(i, !self.get(i));
    }

    /// Raw storage words (padding bits are zero).
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// In-place XOR; lengths must match.
    pub fn xor_in_place(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "BitWord length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    /// XOR of two equal-length words.
    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_in_place(other);
        out
    }

    /// Parity of the AND with `other` (used for syndrome bits).
    pub fn and_parity(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "BitWord length mismatch");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Copy of bits `start..end` as a new word.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.len, "slice out of range");
        let mut out = Self::zero(end - start);
        for i in start..end {
            if self.get(i) {
                out.set(i - start, true);
            }
        }
        out
    }

    /// Appends all bits of `other`.
    pub fn extend(&mut self, other: &Self) {
        let old = self.len;
        self.len += other.len;
        self.words.resize(self.len.div_ceil(64), 0);
        for i in 0..other.len {
            if other.get(i) {
                self.set(old + i, true);
            }
        }
    }

    /// Concatenation of several words.
    pub fn concat(parts: &[&Self]) -> Self {
        let mut out = Self::zero(0);
        for p in parts {
            out.extend(p);
        }
        out
    }

    /// Iterator over bit values in transmission order.
    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl std::fmt::Debug for BitWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitWord[{}]({})", self.len, self.to_hex())
    }
}

impl std::fmt::Display for BitWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl serde::Serialize for BitWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

/// Hamming distance between equal-length words.
pub fn hamming(a: &BitWord, b: &BitWord) -> usize {
    assert_eq!(a.len, b.len, "BitWord length mismatch");
    a.words
        .iter()
        .zip(&b.words)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum()
}

/// Dense bit matrix over GF(2), rows packed like [`BitWord`].
#[derive(Clone, PartialEq, Eq)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        Self {
            rows,
            cols,
            stride,
            data: vec![0u64; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds from equal-length rows.
    pub fn from_rows(rows: &[BitWord]) -> Self {
        assert!(!rows.is_empty(), "matrix needs at least one row");
        let cols = rows[0].len();
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row length mismatch");
            m.data[r * m.stride..(r + 1) * m.stride].copy_from_slice(&row.words);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / 64] >> (63 - c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let mask = 1u64 << (63 - c % 64);
        let w = &mut self.data[r * self.stride + c / 64];
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// Copies row `r` out as a word.
    pub fn row(&self, r: usize) -> BitWord {
        BitWord {
            len: self.cols,
            words: self.data[r * self.stride..(r + 1) * self.stride].to_vec(),
        }
    }

    /// Raw packed words of row `r`.
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// XORs row `src` into row `dst`.
    pub fn xor_rows(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let (a, b) = (src * self.stride, dst * self.stride);
        for i in 0..self.stride {
            let v = self.data[a + i];
            self.data[b + i] ^= v;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.stride {
            self.data.swap(a * self.stride + i, b * self.stride + i);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            let (va, vb) = (self.get(r, a), self.get(r, b));
            self.set(r, a, vb);
            self.set(r, b, va);
        }
    }

    /// Matrix-vector product over GF(2); `v` has `cols` bits.
    pub fn mul_vec(&self, v: &BitWord) -> BitWord {
        assert_eq!(v.len, self.cols, "vector length mismatch");
        let mut out = BitWord::zero(self.rows);
        for r in 0..self.rows {
            let ones: u32 = self
                .row_words(r)
                .iter()
                .zip(&v.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if ones & 1 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Number of ones in column `c`.
    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    /// Number of ones in row `r`.
    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        self.clone().row_reduce_systematic().2
    }

    /// Gauss-Jordan elimination with column swaps so the pivot columns form an
    /// identity block on the left of the permuted matrix. Pivots take the
    /// leftmost available column at each step. Returns the reduced matrix, the
    /// column permutation applied, and the rank.
    pub fn row_reduce_systematic(mut self) -> (Self, ColumnPermutation, usize) {
        let mut perm: Vec<usize> = (0..self.cols).collect();
        let mut rank = 0usize;
        let steps = self.rows.min(self.cols);
        'steps: for step in 0..steps {
            // Leftmost column with a one at or below the current pivot row.
            let mut pivot = None;
            'cols: for c in step..self.cols {
                for r in step..self.rows {
                    if self.get(r, c) {
                        pivot = Some((r, c));
                        break 'cols;
                    }
                }
            }
            let Some((r, c)) = pivot else { break 'steps };
            self.swap_cols(step, c);
            perm.swap(step, c);
            self.swap_rows(step, r);
            for rr in 0..self.rows {
                if rr != step && self.get(rr, step) {
                    self.xor_rows(step, rr);
                }
            }
            rank += 1;
        }
        (self, ColumnPermutation { perm }, rank)
    }

    /// Renders rows as dense `0`/`1` text lines.
    pub fn to_dense_text(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Parses dense `0`/`1` text lines (whitespace between rows ignored).
    pub fn from_dense_text(text: &str) -> Result<Self> {
        let rows: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        if rows.is_empty() {
            return Err(Error::Parse("empty dense matrix text".into()));
        }
        let cols = rows[0].len();
        let mut m = Self::zeros(rows.len(), cols);
        for (r, line) in rows.iter().enumerate() {
            if line.len() != cols {
                return Err(Error::Parse(format!(
                    "row {r} has {} columns, expected {cols}",
                    line.len()
                )));
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, true),
                    _ => return Err(Error::Parse(format!("invalid matrix character {ch:?}"))),
                }
            }
        }
        Ok(m)
    }

    /// Exports in alist sparse text form (1-based indices, entries padded
    /// with zeros to the maximum weight, per the usual convention).
    pub fn to_alist(&self) -> String {
        let col_weights: Vec<usize> = (0..self.cols).map(|c| self.col_weight(c)).collect();
        let row_weights: Vec<usize> = (0..self.rows).map(|r| self.row_weight(r)).collect();
        let max_col = col_weights.iter().copied().max().unwrap_or(0);
        let max_row = row_weights.iter().copied().max().unwrap_or(0);
        let mut s = String::new();
        s.push_str(&format!(
            "{} {}\n{} {}\n",
            self.cols, self.rows, max_col, max_row
        ));
        s.push_str(&join(&col_weights));
        s.push('\n');
        s.push_str(&join(&row_weights));
        s.push('\n');
        for c in 0..self.cols {
            let mut entries: Vec<usize> = (0..self.rows)
                .filter(|&r| self.get(r, c))
                .map(|r| r + 1)
                .collect();
            entries.resize(max_col, 0);
            s.push_str(&join(&entries));
            s.push('\n');
        }
        for r in 0..self.rows {
            let mut entries: Vec<usize> = (0..self.cols)
                .filter(|&c| self.get(r, c))
                .map(|c| c + 1)
                .collect();
            entries.resize(max_row, 0);
            s.push_str(&join(&entries));
            s.push('\n');
        }
        s
    }

    /// Parses alist text; padding zeros are accepted and ignored.
    pub fn from_alist(text: &str) -> Result<Self> {
        let mut nums = text.split_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad alist token {t:?}")))
        });
        let mut next = |what: &str| {
            nums.next()
                .unwrap_or_else(|| Err(Error::Parse(format!("alist truncated before {what}"))))
        };
        let n = next("n")?;
        let m = next("m")?;
        if n == 0 || m == 0 {
            return Err(Error::Parse("alist dimensions must be positive".into()));
        }
        let max_col = next("max col weight")?;
        let max_row = next("max row weight")?;
        let col_w: Vec<usize> = (0..n).map(|_| next("col weight")).collect::<Result<_>>()?;
        let row_w: Vec<usize> = (0..m).map(|_| next("row weight")).collect::<Result<_>>()?;
        if col_w.iter().any(|&w| w > max_col) || row_w.iter().any(|&w| w > max_row) {
            return Err(Error::Parse("alist weight exceeds declared maximum".into()));
        }
        let mut mat = Self::zeros(m, n);
        for (c, &w) in col_w.iter().enumerate() {
            // Padded files list max_col entries per column; unpadded list w.
            let mut seen = 0usize;
            while seen < w {
                let r = next("col entry")?;
                if r == 0 {
                    continue;
                }
                if r > m {
                    return Err(Error::Parse(format!("alist row index {r} out of range")));
                }
                mat.set(r - 1, c, true);
                seen += 1;
            }
        }
        // Zeros are skipped everywhere, so padded and unpadded files parse
        // alike. The row section is redundant with the column section; parse
        // it and verify consistency.
        let mut check = Self::zeros(m, n);
        let mut remaining: Vec<usize> = row_w.clone();
        let mut entries_read = 0usize;
        let total: usize = row_w.iter().sum();
        let mut r = 0usize;
        while entries_read < total {
            while r < m && remaining[r] == 0 {
                r += 1;
            }
            if r == m {
                break;
            }
            let c = next("row entry")?;
            if c == 0 {
                continue;
            }
            if c > n {
                return Err(Error::Parse(format!("alist column index {c} out of range")));
            }
            check.set(r, c - 1, true);
            remaining[r] -= 1;
            entries_read += 1;
        }
        if check != mat {
            return Err(Error::Parse(
                "alist row and column sections disagree".into(),
            ));
        }
        Ok(mat)
    }
}

impl std::fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BinMatrix({}x{})", self.rows, self.cols)
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Syndrome `H·v` over GF(2).
pub fn syndrome(h: &BinMatrix, v: &BitWord) -> BitWord {
    h.mul_vec(v)
}

/// Column permutation recorded by [`BinMatrix::row_reduce_systematic`]:
/// permuted column `j` is original column `perm[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnPermutation {
    perm: Vec<usize>,
}

impl ColumnPermutation {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Original column index at permuted position `j`.
    pub fn original_of(&self, j: usize) -> usize {
        self.perm[j]
    }

    /// Reorders a word from original order into permuted order.
    pub fn apply(&self, w: &BitWord) -> BitWord {
        assert_eq!(w.len(), self.perm.len());
        let mut out = BitWord::zero(w.len());
        for (j, &orig) in self.perm.iter().enumerate() {
            if w.get(orig) {
                out.set(j, true);
            }
        }
        out
    }

    /// Reorders a word from permuted order back to original order.
    pub fn invert(&self, w: &BitWord) -> BitWord {
        assert_eq!(w.len(), self.perm.len());
        let mut out = BitWord::zero(w.len());
        for (j, &orig) in self.perm.iter().enumerate() {
            if w.get(j) {
                out.set(orig, true);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hex_round_trip_is_identity() {
        let w = BitWord::from_hex("0347 76C7 2728 95B0").unwrap();
        assert_eq!(w.len(), 64);
        assert_eq!(w.to_hex(), "034776C7272895B0");
        let lower = BitWord::from_hex("034776c7272895b0").unwrap();
        assert_eq!(w, lower);
    }

    #[test]
    fn hex_is_msb_first() {
        let w = BitWord::from_hex("8").unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.get(0));
        assert!(!w.get(1));
        let w = BitWord::from_hex("01").unwrap();
        assert!(w.get(7));
        assert_eq!(w.weight(), 1);
    }

    #[test]
    fn hex_rejects_garbage() {
        assert!(BitWord::from_hex("12G4").is_err());
        assert!(BitWord::from_hex("  ").is_err());
    }

    #[test]
    fn weight_xor_hamming_agree() {
        let a = BitWord::from_hex("FF00").unwrap();
        let b = BitWord::from_hex("0F0F").unwrap();
        assert_eq!(a.weight(), 8);
        assert_eq!(a.xor(&b).weight(), 8);
        assert_eq!(hamming(&a, &b), 8);
        assert_eq!(hamming(&a, &a), 0);
    }

    #[test]
    fn slice_and_concat_invert() {
        let w = BitWord::from_hex("DEADBEEF0123").unwrap();
        let a = w.slice(0, 17);
        let b = w.slice(17, 48);
        assert_eq!(BitWord::concat(&[&a, &b]), w);
    }

    #[test]
    fn set_get_flip() {
        let mut w = BitWord::zero(130);
        w.set(129, true);
        assert!(w.get(129));
        assert_eq!(w.weight(), 1);
        w.flip(129);
        assert_eq!(w.weight(), 0);
        // Padding bits in the last storage word stay zero.
        assert_eq!(w.words()[2] & !(0b11u64 << 62), 0);
    }

    #[test]
    fn matrix_mul_vec_matches_naive() {
        let m = BinMatrix::from_dense_text("1011\n0110\n1111\n").unwrap();
        let v = BitWord::from_bits(&[1, 1, 0, 1]);
        let s = m.mul_vec(&v);
        // Naive: row0 = 1+0+0+1 = 0, row1 = 0+1+0+0 = 1, row2 = 1+1+0+1 = 1.
        assert_eq!(s, BitWord::from_bits(&[0, 1, 1]));
    }

    #[test]
    fn row_reduce_produces_identity_block() {
        let m = BinMatrix::from_dense_text("111100\n011110\n110011\n101101\n").unwrap();
        let (red, perm, rank) = m.clone().row_reduce_systematic();
        assert!(rank <= 4);
        for i in 0..rank {
            for j in 0..rank {
                assert_eq!(red.get(i, j), i == j);
            }
        }
        // Row space is preserved: un-permuted reduced rows all lie in the
        // row space of the original (stacking does not raise the rank).
        let unperm_rows: Vec<BitWord> = (0..rank).map(|r| perm.invert(&red.row(r))).collect();
        let mut stacked: Vec<BitWord> = (0..m.rows()).map(|r| m.row(r)).collect();
        stacked.extend(unperm_rows);
        assert_eq!(BinMatrix::from_rows(&stacked).rank(), rank);
        assert_eq!(m.rank(), rank);
    }

    #[test]
    fn rank_of_identity_and_zero() {
        assert_eq!(BinMatrix::identity(17).rank(), 17);
        assert_eq!(BinMatrix::zeros(3, 5).rank(), 0);
    }

    #[test]
    fn alist_round_trip() {
        let m = BinMatrix::from_dense_text("101100\n010110\n111111\n000001\n").unwrap();
        let text = m.to_alist();
        let back = BinMatrix::from_alist(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn alist_accepts_unpadded_regular_form() {
        // The matrix 1101/0110 written without padding zeros.
        let text = "4 2\n2 3\n1 2 1 1\n3 2\n1\n1 2\n2\n1\n1 2 4\n2 3\n";
        let m = BinMatrix::from_alist(text).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 4));
        let expect = BinMatrix::from_dense_text("1101\n0110\n").unwrap();
        assert_eq!(m, expect);
    }

    #[test]
    fn alist_rejects_inconsistent_sections() {
        // Column section encodes the identity, row section its transpose
        // with columns exchanged; the two disagree.
        let text = "2 2\n1 1\n1 1\n1 1\n1\n2\n2\n1\n";
        assert!(BinMatrix::from_alist(text).is_err());
        assert!(BinMatrix::from_alist("2 2\n1 1\n1 1\n1 1\n1\n2\n1\n2\n").is_ok());
    }

    #[test]
    fn dense_text_round_trip() {
        let m = BinMatrix::from_dense_text("110\n011\n").unwrap();
        assert_eq!(BinMatrix::from_dense_text(&m.to_dense_text()).unwrap(), m);
    }

    #[test]
    fn permutation_apply_invert() {
        let m = BinMatrix::from_dense_text("0111\n1011\n").unwrap();
        let (_, perm, _) = m.row_reduce_systematic();
        let w = BitWord::from_bits(&[1, 0, 0, 1]);
        assert_eq!(perm.invert(&perm.apply(&w)), w);
    }

    proptest! {
        #[test]
        fn prop_hex_round_trip(bytes in proptest::collection::vec(any::<u8>(), 1..64)) {
            let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
            let w = BitWord::from_hex(&hex).unwrap();
            prop_assert_eq!(w.to_hex().to_lowercase(), hex);
        }

        #[test]
        fn prop_xor_weight_is_hamming(a in proptest::collection::vec(any::<u8>(), 1..32),
                                      b in proptest::collection::vec(any::<u8>(), 1..32)) {
            let n = a.len().min(b.len()) * 8;
            let bits = |v: &[u8]| BitWord::from_bits(
                &v.iter().flat_map(|x| (0..8).map(move |i| (x >> i) & 1)).take(n).collect::<Vec<_>>());
            let (wa, wb) = (bits(&a), bits(&b));
            prop_assert_eq!(wa.xor(&wb).weight(), hamming(&wa, &wb));
            prop_assert_eq!(wa.xor(&wb), wb.xor(&wa));
            prop_assert_eq!(wa.xor(&wb).xor(&wb), wa);
        }

        #[test]
        fn prop_syndrome_is_linear(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut m = BinMatrix::zeros(6, 12);
            for r in 0..6 { for c in 0..12 { m.set(r, c, rng.gen()); } }
            let rand_word = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut w = BitWord::zero(12);
                for i in 0..12 { w.set(i, rng.gen()); }
                w
            };
            let (a, b) = (rand_word(&mut rng), rand_word(&mut rng));
            prop_assert_eq!(m.mul_vec(&a.xor(&b)), m.mul_vec(&a).xor(&m.mul_vec(&b)));
        }
    }
}
