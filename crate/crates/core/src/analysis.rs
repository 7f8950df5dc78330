//! Structural analyses: a randomized nearest-codeword census (Stern-style
//! information-set decoding on the coset of the target word) and the
//! histogram of codewords the iterative decoder converges to when fed the
//! tail sequence.
//!
//! The census is a lower bound by construction: every reported codeword is
//! verified against the parity-check matrix and its distance re-counted at
//! insertion, but absence from the census never proves absence from the
//! code.

use crate::channel::{transmit, ChannelParams, RngStream};
use crate::cltu::TsMode;
use crate::codes::LinearCode;
use crate::decoder::{Decoder, DecoderConfig};
use crate::estimators::derive_seed;
use crate::gf2::{hamming, syndrome, BinMatrix, BitWord};
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Work bounds for the randomized distance search.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct SearchEffort {
    /// Number of random information-set iterations.
    pub iterations: u64,
    /// Maximum bits taken from each half of the free positions (subsets of
    /// every size up to this are enumerated).
    pub subset_size: usize,
    /// Collision window: leading syndrome bits that must match exactly.
    pub window_bits: usize,
    /// Codewords farther than this from the target are not recorded.
    pub distance_cap: usize,
}

impl SearchEffort {
    /// Standard parameters (pairs per half, 6-bit window).
    pub fn new(iterations: u64, distance_cap: usize) -> Self {
        Self {
            iterations,
            subset_size: 2,
            window_bits: 6,
            distance_cap,
        }
    }

    pub fn with_parameters(
        iterations: u64,
        subset_size: usize,
        window_bits: usize,
        distance_cap: usize,
    ) -> Result<Self> {
        if subset_size > 8 || window_bits > 64 {
            return Err(Error::InvalidArgument(
                "search wants subset_size <= 8 and window_bits <= 64".into(),
            ));
        }
        Ok(Self {
            iterations,
            subset_size,
            window_bits,
            distance_cap,
        })
    }
}

/// All distinct codewords found at one distance, sorted.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DistanceBucket {
    pub distance: usize,
    pub count: usize,
    pub codewords: Vec<BitWord>,
}

/// Census of codewords near a target word.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DistanceReport {
    pub code_id: String,
    pub target: BitWord,
    pub best_distance: Option<usize>,
    /// Buckets in increasing distance order; counts are lower bounds.
    pub census: Vec<DistanceBucket>,
    pub effort: SearchEffort,
    pub seed: u64,
}

impl DistanceReport {
    pub fn count_at(&self, distance: usize) -> usize {
        self.census
            .binary_search_by_key(&distance, |b| b.distance)
            .map_or(0, |i| self.census[i].count)
    }

    pub fn codewords_at(&self, distance: usize) -> &[BitWord] {
        self.census
            .binary_search_by_key(&distance, |b| b.distance)
            .map_or(&[], |i| &self.census[i].codewords)
    }

    pub fn total(&self) -> usize {
        self.census.iter().map(|b| b.count).sum()
    }

    /// Rows `distance,codeword` in increasing distance order.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("distance,codeword\n");
        for b in &self.census {
            for c in &b.codewords {
                s.push_str(&format!("{},{}\n", b.distance, c.to_hex()));
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

type Census = BTreeMap<usize, BTreeSet<BitWord>>;

/// Randomized search for codewords close to `target` in Hamming distance.
/// Each iteration permutes the columns, reduces the parity-check matrix to
/// echelon form over the permuted order, and looks for error patterns that
/// are sparse over the free (non-pivot) positions, matching halves of free
/// positions through a small syndrome window.
pub fn nearest_codewords(
    code: &LinearCode,
    target: &BitWord,
    effort: &SearchEffort,
    seed: u64,
) -> Result<DistanceReport> {
    if target.len() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "target has {} bits, code expects {}",
            target.len(),
            code.n()
        )));
    }
    let census: Census = (0..effort.iterations)
        .into_par_iter()
        .fold(Census::new, |mut acc, iteration| {
            search_iteration(code, target, effort, seed, iteration, &mut acc);
            acc
        })
        .reduce(Census::new, merge_census);
    let best_distance = census.keys().next().copied();
    Ok(DistanceReport {
        code_id: code.id().to_string(),
        target: target.clone(),
        best_distance,
        census: census
            .into_iter()
            .map(|(distance, set)| DistanceBucket {
                distance,
                count: set.len(),
                codewords: set.into_iter().collect(),
            })
            .collect(),
        effort: *effort,
        seed,
    })
}

/// Minimum-weight census: distances from the zero word, with the zero
/// codeword itself excluded.
pub fn code_min_weight_search(
    code: &LinearCode,
    effort: &SearchEffort,
    seed: u64,
) -> Result<DistanceReport> {
    let mut report = nearest_codewords(code, &BitWord::zero(code.n()), effort, seed)?;
    report.census.retain(|b| b.distance > 0);
    report.best_distance = report.census.first().map(|b| b.distance);
    Ok(report)
}

fn merge_census(mut a: Census, b: Census) -> Census {
    for (d, set) in b {
        a.entry(d).or_default().extend(set);
    }
    a
}

fn search_iteration(
    code: &LinearCode,
    target: &BitWord,
    effort: &SearchEffort,
    seed: u64,
    iteration: u64,
    acc: &mut Census,
) {
    let h = code.parity_check();
    let (n, r) = (code.n(), h.rows());
    let mut rng = RngStream::new(seed, iteration);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);

    // Augmented matrix [H_perm | s] over the permuted column order.
    let s = syndrome(h, target);
    let mut aug = BinMatrix::zeros(r, n + 1);
    for i in 0..r {
        for (j, &orig) in perm.iter().enumerate() {
            if h.get(i, orig) {
                aug.set(i, j, true);
            }
        }
        if s.get(i) {
            aug.set(i, n, true);
        }
    }

    // Gauss-Jordan, pivoting on the leftmost available permuted column.
    let mut rank = 0;
    let mut pivots = Vec::with_capacity(r);
    for col in 0..n {
        let Some(pr) = (rank..r).find(|&i| aug.get(i, col)) else {
            continue;
        };
        aug.swap_rows(rank, pr);
        for i in 0..r {
            if i != rank && aug.get(i, col) {
                aug.xor_rows(rank, i);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == r {
            break;
        }
    }
    let free: Vec<usize> = {
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        (0..n).filter(|j| !pivot_set.contains(j)).collect()
    };

    // Column-major repack over the `rank` meaningful rows.
    let words = rank.div_ceil(64);
    let pack_col = |col: usize| -> Vec<u64> {
        let mut v = vec![0u64; words];
        for (i, w) in v.iter_mut().enumerate() {
            for bit in 0..64.min(rank - i * 64) {
                if aug.get(i * 64 + bit, col) {
                    *w |= 1 << bit;
                }
            }
        }
        v
    };
    let cols: Vec<Vec<u64>> = free.iter().map(|&j| pack_col(j)).collect();
    let syn = pack_col(n);

    // The window must stay well below the rank: bits inside it can only be
    // cancelled by the free columns, so a window covering most syndrome rows
    // would exclude codewords outright. Shrinking it to zero on toy codes
    // makes the per-iteration enumeration exhaustive there.
    let window = effort
        .window_bits
        .min(rank.saturating_sub(effort.window_bits))
        .min(64);
    let mask = if window == 64 {
        u64::MAX
    } else {
        (1u64 << window) - 1
    };
    let mid = free.len().div_ceil(2);

    // Left half: window value of every subset of size <= p.
    let mut left: HashMap<u64, Vec<Vec<u16>>> = HashMap::new();
    for_each_subset(mid, effort.subset_size, &mut Vec::new(), 0, &mut |subset| {
        let key = subset.iter().fold(0u64, |w, &i| w ^ cols[i as usize][0]) & mask;
        left.entry(key).or_default().push(subset.to_vec());
    });

    // Right half: match against the left through the syndrome window.
    let mut scratch = vec![0u64; words];
    for_each_subset(
        free.len() - mid,
        effort.subset_size,
        &mut Vec::new(),
        0,
        &mut |subset| {
            let key = subset
                .iter()
                .fold(syn[0], |w, &i| w ^ cols[mid + i as usize][0])
                & mask;
            let Some(partners) = left.get(&key) else {
                return;
            };
            for lhs in partners {
                scratch.copy_from_slice(&syn);
                for &i in lhs {
                    for (w, c) in scratch.iter_mut().zip(&cols[i as usize]) {
                        *w ^= c;
                    }
                }
                for &i in subset {
                    for (w, c) in scratch.iter_mut().zip(&cols[mid + i as usize]) {
                        *w ^= c;
                    }
                }
                let weight = lhs.len()
                    + subset.len()
                    + scratch
                        .iter()
                        .map(|w| w.count_ones() as usize)
                        .sum::<usize>();
                if weight > effort.distance_cap {
                    continue;
                }
                // Reconstruct the error pattern in original coordinates.
                let mut e = BitWord::zero(n);
                for &i in lhs {
                    e.set(perm[free[i as usize]], true);
                }
                for &i in subset {
                    e.set(perm[free[mid + i as usize]], true);
                }
                for (row, &col) in pivots.iter().enumerate() {
                    if scratch[row / 64] >> (row % 64) & 1 == 1 {
                        e.set(perm[col], true);
                    }
                }
                let candidate = target.xor(&e);
                assert!(
                    code.is_codeword(&candidate),
                    "census entry must be a codeword"
                );
                assert_eq!(
                    hamming(target, &candidate),
                    weight,
                    "census distance must match"
                );
                acc.entry(weight).or_default().insert(candidate);
            }
        },
    );
}

/// Calls `f` once for every subset of `{0..n}` of size at most `p`,
/// including the empty one.
fn for_each_subset(
    n: usize,
    p: usize,
    buf: &mut Vec<u16>,
    start: usize,
    f: &mut impl FnMut(&[u16]),
) {
    f(buf);
    if buf.len() == p {
        return;
    }
    for i in start..n {
        buf.push(i as u16);
        for_each_subset(n, p, buf, i + 1, f);
        buf.pop();
    }
}

/// One codeword the decoder converged to, with its per-SNR counts.
#[derive(Clone, Debug, serde::Serialize)]
pub struct HistogramEntry {
    pub codeword: BitWord,
    /// Hamming distance from the word fed to the decoder.
    pub distance_to_input: usize,
    /// Successes per `Eb/N0` point, aligned with `ebn0_db`.
    pub counts: Vec<u64>,
    pub total: u64,
    /// Global trial index of the first occurrence.
    pub first_trial: u64,
}

/// Which codewords the decoder lands on when fed a fixed non-codeword.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ConvergenceHistogram {
    pub schema: String,
    pub code_id: String,
    pub ts_mode: TsMode,
    pub decoder: DecoderConfig,
    pub ebn0_db: Vec<f64>,
    pub trials_per_point: u64,
    pub seed: u64,
    /// Successful decodings per `Eb/N0` point.
    pub successes: Vec<u64>,
    /// Entries sorted by total count (descending), then first occurrence.
    pub entries: Vec<HistogramEntry>,
}

pub const HISTOGRAM_SCHEMA: &str = "convergence-histogram/v1";

impl ConvergenceHistogram {
    pub fn total_successes(&self) -> u64 {
        self.successes.iter().sum()
    }

    /// Fraction of all successes captured by the `n` most frequent
    /// codewords (0 when nothing converged).
    pub fn top_share(&self, n: usize) -> f64 {
        let total = self.total_successes();
        if total == 0 {
            return 0.0;
        }
        let top: u64 = self.entries.iter().take(n).map(|e| e.total).sum();
        top as f64 / total as f64
    }

    /// Fraction of all successes whose `Eb/N0` lies in `[lo_db, hi_db]`.
    pub fn band_fraction(&self, lo_db: f64, hi_db: f64) -> f64 {
        let total = self.total_successes();
        if total == 0 {
            return 0.0;
        }
        let band: u64 = self
            .ebn0_db
            .iter()
            .zip(&self.successes)
            .filter(|(db, _)| (lo_db..=hi_db).contains(db))
            .map(|(_, c)| c)
            .sum();
        band as f64 / total as f64
    }

    /// Rows `codeword,distance_to_input,total,first_trial,
    /// count_<db>db,...` sorted as in `entries`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("codeword,distance_to_input,total,first_trial");
        for db in &self.ebn0_db {
            s.push_str(&format!(",count_{db}db"));
        }
        s.push('\n');
        for e in &self.entries {
            s.push_str(&format!(
                "{},{},{},{}",
                e.codeword.to_hex(),
                e.distance_to_input,
                e.total,
                e.first_trial
            ));
            for c in &e.counts {
                s.push_str(&format!(",{c}"));
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("histogram serializes")
    }
}

/// Histogram of the codewords reached when transmitting the tail sequence
/// the decoder actually sees in the given mode.
pub fn convergence_histogram(
    code: &LinearCode,
    dec_cfg: &DecoderConfig,
    ts_mode: TsMode,
    ebn0_list: &[f64],
    trials_per_point: u64,
    seed: u64,
    workers: usize,
) -> Result<ConvergenceHistogram> {
    let word = ts_mode.decoder_side_tail().ok_or_else(|| {
        Error::InvalidArgument(
            "histogram needs a tail sequence (ts-mode randomized or derandomized)".into(),
        )
    })?;
    let mut hist = histogram_for_word(
        code,
        dec_cfg,
        &word,
        ebn0_list,
        trials_per_point,
        seed,
        workers,
    )?;
    hist.ts_mode = ts_mode;
    Ok(hist)
}

/// The engine behind [`convergence_histogram`], taking an arbitrary word.
pub(crate) fn histogram_for_word(
    code: &LinearCode,
    dec_cfg: &DecoderConfig,
    word: &BitWord,
    ebn0_list: &[f64],
    trials_per_point: u64,
    seed: u64,
    workers: usize,
) -> Result<ConvergenceHistogram> {
    if word.len() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "word has {} bits, code expects {}",
            word.len(),
            code.n()
        )));
    }
    if ebn0_list.is_empty() || trials_per_point == 0 {
        return Err(Error::InvalidArgument(
            "need at least one Eb/N0 point and one trial".into(),
        ));
    }
    Decoder::new(code, *dec_cfg)?;
    let pool = (workers > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool construction")
    });

    // codeword -> (per-point counts, first global trial)
    let mut table: BTreeMap<BitWord, (Vec<u64>, u64)> = BTreeMap::new();
    let mut successes = vec![0u64; ebn0_list.len()];
    for (pi, &db) in ebn0_list.iter().enumerate() {
        let params = ChannelParams::new(db, code.rate())?;
        let point_seed = derive_seed(seed, pi as u64);
        let run_one = |dec: &mut Decoder, t: u64| -> Option<(BitWord, u64)> {
            let mut rng = RngStream::new(point_seed, t);
            let (_, llrs) = transmit(word, params, &mut rng);
            let out = dec.decode(&llrs).expect("campaign LLRs are finite");
            out.converged.then(|| {
                assert!(
                    code.is_codeword(&out.hard_word),
                    "convergence must mean zero syndrome"
                );
                (out.hard_word, pi as u64 * trials_per_point + t)
            })
        };
        type PointMap = BTreeMap<BitWord, (u64, u64)>;
        let merge = |mut a: PointMap, b: PointMap| -> PointMap {
            for (w, (c, first)) in b {
                let e = a.entry(w).or_insert((0, u64::MAX));
                e.0 += c;
                e.1 = e.1.min(first);
            }
            a
        };
        let point_table: PointMap = match &pool {
            Some(p) => p.install(|| {
                (0..trials_per_point)
                    .into_par_iter()
                    .fold(
                        || {
                            (
                                Decoder::new(code, *dec_cfg).expect("config validated above"),
                                PointMap::new(),
                            )
                        },
                        |(mut dec, mut map), t| {
                            if let Some((w, g)) = run_one(&mut dec, t) {
                                let e = map.entry(w).or_insert((0, u64::MAX));
                                e.0 += 1;
                                e.1 = e.1.min(g);
                            }
                            (dec, map)
                        },
                    )
                    .map(|(_, map)| map)
                    .reduce(PointMap::new, merge)
            }),
            None => {
                let mut dec = Decoder::new(code, *dec_cfg).expect("config validated above");
                let mut map = PointMap::new();
                for t in 0..trials_per_point {
                    if let Some((w, g)) = run_one(&mut dec, t) {
                        let e = map.entry(w).or_insert((0, u64::MAX));
                        e.0 += 1;
                        e.1 = e.1.min(g);
                    }
                }
                map
            }
        };
        for (w, (count, first)) in point_table {
            successes[pi] += count;
            let e = table
                .entry(w)
                .or_insert_with(|| (vec![0; ebn0_list.len()], u64::MAX));
            e.0[pi] += count;
            e.1 = e.1.min(first);
        }
    }

    let mut entries: Vec<HistogramEntry> = table
        .into_iter()
        .map(|(codeword, (counts, first_trial))| HistogramEntry {
            distance_to_input: hamming(&codeword, word),
            total: counts.iter().sum(),
            codeword,
            counts,
            first_trial,
        })
        .collect();
    entries.sort_by(|a, b| {
        b.total
            .cmp(&a.total)
            .then(a.first_trial.cmp(&b.first_trial))
            .then(a.codeword.cmp(&b.codeword))
    });
    Ok(ConvergenceHistogram {
        schema: HISTOGRAM_SCHEMA.to_string(),
        code_id: code.id().to_string(),
        ts_mode: TsMode::None,
        decoder: *dec_cfg,
        ebn0_db: ebn0_list.to_vec(),
        trials_per_point,
        seed,
        successes,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cltu;
    use crate::codes::make_code;
    use crate::decoder::Algorithm;

    #[test]
    fn hamming_weight_census_is_exhaustive() {
        // The (7,4) Hamming code has weight enumerator 1 + 7z^3 + 7z^4 + z^7.
        let code = make_code("toy-hamming-7-4").unwrap();
        let effort = SearchEffort::new(20, 7);
        let report = code_min_weight_search(&code, &effort, 3).unwrap();
        assert_eq!(report.best_distance, Some(3));
        assert_eq!(report.count_at(3), 7);
        assert_eq!(report.count_at(4), 7);
        assert_eq!(report.count_at(7), 1);
        assert_eq!(report.total(), 15);
        let zero = BitWord::zero(7);
        assert!(report.census.iter().all(|b| !b.codewords.contains(&zero)));
        for b in &report.census {
            for c in &b.codewords {
                assert!(code.is_codeword(c));
                assert_eq!(c.weight(), b.distance);
            }
        }
    }

    #[test]
    fn codeword_target_is_reported_at_distance_zero() {
        let code = make_code("ccsds-128-64").unwrap();
        let mut rng = RngStream::new(4, 0);
        let (_, c) = code.random_codeword(&mut rng);
        let report = nearest_codewords(&code, &c, &SearchEffort::new(3, 10), 5).unwrap();
        assert_eq!(report.best_distance, Some(0));
        assert_eq!(report.codewords_at(0), std::slice::from_ref(&c));
    }

    #[test]
    fn randomized_tail_has_three_codewords_at_distance_fifteen() {
        let code = make_code("ccsds-128-64").unwrap();
        let target = cltu::randomized_tail_sequence();
        let effort = SearchEffort::new(4000, 16);
        let report = nearest_codewords(&code, &target, &effort, 6).unwrap();
        assert_eq!(report.best_distance, Some(15));
        let found = report.codewords_at(15);
        assert!(
            found.len() >= 3,
            "expected the known triple, found {}",
            found.len()
        );
        for hex in cltu::DISTANCE_15_CODEWORDS {
            let c = BitWord::from_hex(hex).unwrap();
            assert!(found.contains(&c), "missing known codeword {hex}");
        }
    }

    #[test]
    fn census_grows_with_effort() {
        let code = make_code("ccsds-128-64").unwrap();
        let target = cltu::randomized_tail_sequence();
        let small = nearest_codewords(&code, &target, &SearchEffort::new(60, 20), 7).unwrap();
        let large = nearest_codewords(&code, &target, &SearchEffort::new(600, 20), 7).unwrap();
        assert!(small.total() > 0);
        for b in &small.census {
            assert!(
                large.count_at(b.distance) >= b.count,
                "regression at distance {}",
                b.distance
            );
            for c in &b.codewords {
                assert!(large.codewords_at(b.distance).contains(c));
            }
        }
    }

    #[test]
    fn zero_effort_reports_nothing() {
        let code = make_code("toy-rand-8-4").unwrap();
        let report = code_min_weight_search(&code, &SearchEffort::new(0, 8), 1).unwrap();
        assert_eq!(report.best_distance, None);
        assert!(report.census.is_empty());
        assert_eq!(report.total(), 0);
    }

    #[test]
    fn search_rejects_wrong_target_length() {
        let code = make_code("toy-hamming-7-4").unwrap();
        let bad = BitWord::zero(8);
        assert!(nearest_codewords(&code, &bad, &SearchEffort::new(1, 7), 0).is_err());
    }

    #[test]
    fn report_csv_lists_each_codeword_once() {
        let code = make_code("toy-hamming-7-4").unwrap();
        let report = code_min_weight_search(&code, &SearchEffort::new(10, 7), 2).unwrap();
        let csv = report.to_csv();
        assert!(csv.starts_with("distance,codeword\n"));
        assert_eq!(csv.lines().count(), 1 + report.total());
        assert!(report.to_json().contains("\"best_distance\": 3"));
    }

    #[test]
    fn histogram_counts_converged_codewords() {
        // A codeword with one flipped bit converges back to it at high SNR.
        let code = make_code("ccsds-128-64").unwrap();
        let mut rng = RngStream::new(8, 0);
        let (_, c) = code.random_codeword(&mut rng);
        let mut word = c.clone();
        word.flip(17);
        let cfg = DecoderConfig::new(Algorithm::LlrSpa, 30);
        let hist = histogram_for_word(&code, &cfg, &word, &[6.0, 7.0], 100, 21, 1).unwrap();
        assert_eq!(hist.total_successes(), 200, "every trial should converge");
        assert_eq!(hist.entries[0].codeword, c);
        assert_eq!(hist.entries[0].distance_to_input, 1);
        assert!(hist.top_share(1) > 0.99);
        let total_from_entries: u64 = hist.entries.iter().map(|e| e.total).sum();
        assert_eq!(total_from_entries, hist.total_successes());
        for e in &hist.entries {
            assert_eq!(e.total, e.counts.iter().sum::<u64>());
            assert!(code.is_codeword(&e.codeword));
        }
    }

    #[test]
    fn histogram_is_worker_count_invariant() {
        let code = make_code("ccsds-128-64").unwrap();
        let mut rng = RngStream::new(9, 0);
        let (_, c) = code.random_codeword(&mut rng);
        let mut word = c;
        word.flip(3);
        word.flip(90);
        let cfg = DecoderConfig::new(Algorithm::MinSum, 15);
        let one = histogram_for_word(&code, &cfg, &word, &[2.0, 4.0], 150, 33, 1).unwrap();
        let four = histogram_for_word(&code, &cfg, &word, &[2.0, 4.0], 150, 33, 4).unwrap();
        assert_eq!(one.to_json(), four.to_json());
        assert!(one.total_successes() > 0);
    }

    #[test]
    fn tail_sequence_never_converges_at_high_snr() {
        // De-randomized mode feeds the decoder the raw tail sequence, which
        // sits far from every codeword; at high SNR nothing converges.
        let code = make_code("ccsds-128-64").unwrap();
        let cfg = DecoderConfig::new(Algorithm::LlrSpa, 20);
        let hist =
            convergence_histogram(&code, &cfg, TsMode::Derandomized, &[10.0], 100, 11, 1).unwrap();
        assert_eq!(hist.successes, vec![0]);
        assert!(hist.entries.is_empty());
        assert_eq!(hist.top_share(3), 0.0);
        assert_eq!(hist.band_fraction(0.0, 10.0), 0.0);
        assert_eq!(hist.ts_mode, TsMode::Derandomized);
    }

    #[test]
    fn histogram_rejects_missing_tail_and_bad_args() {
        let code = make_code("ccsds-128-64").unwrap();
        let cfg = DecoderConfig::new(Algorithm::LlrSpa, 10);
        assert!(convergence_histogram(&code, &cfg, TsMode::None, &[3.0], 10, 0, 1).is_err());
        assert!(convergence_histogram(&code, &cfg, TsMode::Randomized, &[], 10, 0, 1).is_err());
        assert!(convergence_histogram(&code, &cfg, TsMode::Randomized, &[3.0], 0, 0, 1).is_err());
    }

    #[test]
    fn band_and_top_share_arithmetic() {
        let hist = ConvergenceHistogram {
            schema: HISTOGRAM_SCHEMA.to_string(),
            code_id: "ccsds-128-64".into(),
            ts_mode: TsMode::Randomized,
            decoder: DecoderConfig::new(Algorithm::LlrSpa, 100),
            ebn0_db: vec![0.0, 1.0, 2.0, 3.0],
            trials_per_point: 10,
            seed: 0,
            successes: vec![1, 2, 3, 4],
            entries: vec![
                HistogramEntry {
                    codeword: BitWord::zero(128),
                    distance_to_input: 15,
                    counts: vec![1, 2, 3, 0],
                    total: 6,
                    first_trial: 0,
                },
                HistogramEntry {
                    codeword: BitWord::zero(128),
                    distance_to_input: 22,
                    counts: vec![0, 0, 0, 4],
                    total: 4,
                    first_trial: 31,
                },
            ],
        };
        assert_eq!(hist.total_successes(), 10);
        assert_eq!(hist.top_share(1), 0.6);
        assert_eq!(hist.top_share(2), 1.0);
        assert_eq!(hist.band_fraction(1.0, 2.0), 0.5);
        assert_eq!(hist.band_fraction(3.0, 3.0), 0.4);
        let csv = hist.to_csv();
        assert!(csv.starts_with("codeword,distance_to_input,total,first_trial,count_0db,count_1db"));
        assert_eq!(csv.lines().count(), 3);
    }
}
