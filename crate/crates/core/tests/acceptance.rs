//! Acceptance gate: one test per criterion, each printing a PASS or FAIL
//! line with the measured numbers.
//!
//! Run the default set with
//! `cargo test -p cltusim-core --test acceptance -- --nocapture`
//! and the two extended Monte Carlo criteria (7 and 9, tens of minutes)
//! with `... -- --nocapture --ignored`.

#![allow(clippy::excessive_precision)] // oracle values kept digit-for-digit as printed

use cltusim_core::analysis::{
    code_min_weight_search, convergence_histogram, nearest_codewords, SearchEffort,
};
use cltusim_core::channel::{transmit, ChannelParams, RngStream};
use cltusim_core::cltu::{self, TsMode};
use cltusim_core::codes::make_code;
use cltusim_core::decoder::{exhaustive_ml_decode, Algorithm, Decoder, DecoderConfig};
use cltusim_core::estimators::{
    combine_tc_rejection, estimate_cer, estimate_pnat, p_ldpc_from_cer, p_md_analytic, StoppingRule,
};
use cltusim_core::gf2::{hamming, BitWord};
use cltusim_core::scrambler::{randomize, scramble_stream, CCSDS_LFSR};
use std::time::Instant;

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {n:2} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_randomizer_conformance() {
    let t = cltu::tail_sequence();
    let t_prime = cltu::randomized_tail_sequence();
    let mapped = randomize(&t);
    let stream = scramble_stream(CCSDS_LFSR, 128);
    let pass = mapped == t_prime && stream == t.xor(&t_prime);
    report(
        1,
        "randomizer conformance",
        pass,
        &format!(
            "randomize(t) = {}, stream = {}",
            mapped.to_hex(),
            stream.to_hex()
        ),
    );
}

#[test]
fn criterion_02_code_conformance() {
    let code = make_code("ccsds-128-64").unwrap();
    let t_prime = cltu::randomized_tail_sequence();
    let mut distances = Vec::new();
    let mut all_codewords = true;
    for hex in cltu::DISTANCE_15_CODEWORDS {
        let c = BitWord::from_hex(hex).unwrap();
        all_codewords &= code.is_codeword(&c);
        distances.push(hamming(&t_prime, &c));
    }
    let pass = all_codewords && distances.iter().all(|&d| d == 15);
    report(
        2,
        "code conformance",
        pass,
        &format!("zero syndromes = {all_codewords}, d_H(t', c_i) = {distances:?}"),
    );
}

#[test]
fn criterion_03_minimum_distance() {
    let code = make_code("ccsds-128-64").unwrap();
    let effort = SearchEffort::new(25_000, 20);
    let clock = Instant::now();
    let found = code_min_weight_search(&code, &effort, 0xACCE01).unwrap();
    let elapsed = clock.elapsed();
    let pass = found.best_distance == Some(14) && elapsed.as_secs() < 60;
    report(
        3,
        "minimum distance",
        pass,
        &format!(
            "best weight = {:?} ({} codewords), nothing below 14, {:.1} s of 60 s budget",
            found.best_distance,
            found.count_at(14),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_04_tail_sequence_distance_census() {
    let code = make_code("ccsds-128-64").unwrap();
    let t = cltu::tail_sequence();
    let effort = SearchEffort::new(60_000, 20);
    let clock = Instant::now();
    let census = nearest_codewords(&code, &t, &effort, 0xACCE02).unwrap();
    let elapsed = clock.elapsed();
    let (at18, at20) = (census.count_at(18), census.count_at(20));
    let pass = census.best_distance == Some(18) && at18 >= 60 && at20 >= 3000;
    report(
        4,
        "tail-sequence distance census",
        pass,
        &format!(
            "best = {:?}, census(18) = {at18} (>= 60, reference 73), census(20) = {at20} (>= 3000, reference 3967), {:.0} s",
            census.best_distance,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_05_start_sequence_miss_curve() {
    // Frozen from a 50-digit independent evaluation of the binomial tail.
    let oracle = [
        3.8141310950631823e-4,
        1.0506333741305443e-5,
        8.8498711202644689e-8,
        1.7553734123943733e-10,
        6.06129003127392e-14,
        2.5479595379175871e-18,
        8.4083098226440326e-24,
        1.2480270590417256e-30,
    ];
    let mut worst = 0.0f64;
    for (db, want) in oracle.iter().enumerate() {
        let got = p_md_analytic(64, 13, db as f64);
        worst = worst.max((got - want).abs() / want);
    }
    let spot = p_md_analytic(64, 13, 0.0);
    let spot_ok = (spot - 3.8141e-4).abs() / 3.8141e-4 < 1e-4;
    let pass = worst < 1e-10 && spot_ok;
    report(
        5,
        "start-sequence miss curve",
        pass,
        &format!("worst relative error {worst:.2e} over 0-7 dB, spot P_md(0 dB) = {spot:.5e}"),
    );
}

#[test]
fn criterion_06_waterfall_cer_regression() {
    let code = make_code("ccsds-128-64").unwrap();
    let params = ChannelParams::new(3.0, code.rate()).unwrap();
    let rule = StoppingRule::standard();

    let spa = DecoderConfig::new(Algorithm::LlrSpa, 100);
    let spa_cer = estimate_cer(&code, &spa, params, &rule, 0xACCE06, 1).unwrap();
    let spa_ok = (2.6e-2..=1.0e-1).contains(&spa_cer.cer.point);

    let msa = DecoderConfig::new(Algorithm::MinSum, 20);
    let msa_cer = estimate_cer(&code, &msa, params, &rule, 0xACCE06, 1).unwrap();
    let msa_ok = (8e-2..=3.2e-1).contains(&msa_cer.cer.point);

    report(
        6,
        "waterfall CER regression",
        spa_ok && msa_ok,
        &format!(
            "SPA/100 CER(3 dB) = {:.3e} in [2.6e-2, 1.0e-1] (reference 5.17e-2, {} trials); MSA/20 CER(3 dB) = {:.3e} in [8e-2, 3.2e-1] (reference 1.61e-1, {} trials)",
            spa_cer.cer.point, spa_cer.cer.trials, msa_cer.cer.point, msa_cer.cer.trials
        ),
    );
}

#[test]
#[ignore = "extended Monte Carlo campaign, tens of minutes"]
fn criterion_07_pnat_order_of_magnitude() {
    let code = make_code("ccsds-128-64").unwrap();
    let cfg = DecoderConfig::new(Algorithm::LlrSpa, 100);
    let params = ChannelParams::new(3.0, code.rate()).unwrap();
    let rule = StoppingRule::new(30, 4_000_000).unwrap();
    let seed = 0xACCE07;

    let rand = estimate_pnat(&code, &cfg, params, TsMode::Randomized, &rule, seed, 1).unwrap();
    let derand = estimate_pnat(&code, &cfg, params, TsMode::Derandomized, &rule, seed, 1).unwrap();

    let in_range = (1e-5..=3e-4).contains(&rand.point) && rand.events >= 30;
    let ordered = derand.point < rand.point;
    report(
        7,
        "P_nat order of magnitude",
        in_range && ordered,
        &format!(
            "randomized P_nat(3 dB) = {:.3e} [{} events / {} trials, reference 5.46e-5]; de-randomized = {:.3e} [{} events / {} trials], strictly smaller = {ordered}",
            rand.point, rand.events, rand.trials, derand.point, derand.events, derand.trials
        ),
    );
}

#[test]
fn criterion_08_combination_consistency() {
    let mut rng = RngStream::new(0xACCE08, 0);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let (a, b, c): (f64, f64, f64) = (
            rand::Rng::gen(&mut rng),
            rand::Rng::gen(&mut rng),
            rand::Rng::gen(&mut rng),
        );
        let direct = combine_tc_rejection(a, b, c);
        let alternative = a + (1.0 - a) * (b + (1.0 - b) * c);
        worst = worst.max((direct - alternative).abs());
    }
    // Reconstruction at 6 dB, SPA, 100 iterations, N = 1, randomized mode,
    // from published component values.
    let p_md = p_md_analytic(64, 13, 6.0);
    let p_ldpc = p_ldpc_from_cer(1.34e-7, 1);
    let p_tcrej = combine_tc_rejection(p_md, p_ldpc, 1.628e-5);
    let target = 1.6414e-5;
    let rel = (p_tcrej - target).abs() / target;
    let pass = worst <= 1e-15 && rel <= 0.01;
    report(
        8,
        "combination consistency",
        pass,
        &format!("worst |direct - expanded| = {worst:.2e} over 10000 triples; reconstructed P_TCrej(6 dB) = {p_tcrej:.5e} vs {target:.4e} ({rel:.2e} relative)"),
    );
}

#[test]
#[ignore = "extended Monte Carlo campaign, tens of minutes"]
fn criterion_09_tail_sequence_polarization() {
    let code = make_code("ccsds-128-64").unwrap();
    let cfg = DecoderConfig::new(Algorithm::LlrSpa, 100);
    let points: Vec<f64> = (0..=7).map(f64::from).collect();
    // 300k trials split evenly over the eight points.
    let per_point = 300_000 / points.len() as u64;
    let seed = 0xACCE09;

    let rand_hist =
        convergence_histogram(&code, &cfg, TsMode::Randomized, &points, per_point, seed, 1)
            .unwrap();
    let triple: Vec<BitWord> = cltu::DISTANCE_15_CODEWORDS
        .iter()
        .map(|h| BitWord::from_hex(h).unwrap())
        .collect();
    let triple_count: u64 = rand_hist
        .entries
        .iter()
        .filter(|e| triple.contains(&e.codeword))
        .map(|e| e.total)
        .sum();
    let total = rand_hist.total_successes();
    let share = if total == 0 {
        0.0
    } else {
        triple_count as f64 / total as f64
    };

    let derand_hist = convergence_histogram(
        &code,
        &cfg,
        TsMode::Derandomized,
        &points,
        per_point,
        seed,
        1,
    )
    .unwrap();
    let derand_max = derand_hist.entries.first().map_or(0, |e| e.total);

    let pass = share >= 0.5 && derand_max <= 5;
    report(
        9,
        "tail-sequence polarization",
        pass,
        &format!(
            "randomized: {triple_count} of {total} successes on the distance-15 triple (share {share:.2}, threshold 0.50); de-randomized: {} successes, max per codeword {derand_max} (threshold 5)",
            derand_hist.total_successes()
        ),
    );
}

#[test]
fn criterion_10_property_suites() {
    let mut failures = Vec::new();

    // Every encode has zero syndrome, on both flight codes.
    for id in ["ccsds-128-64", "ccsds-512-256"] {
        let code = make_code(id).unwrap();
        let mut rng = RngStream::new(0xACCE10, 0);
        for _ in 0..200 {
            let (_, c) = code.random_codeword(&mut rng);
            if !code.is_codeword(&c) {
                failures.push(format!("encode violated syndrome on {id}"));
                break;
            }
        }
    }

    // Scrambler involution on random words.
    let mut rng = RngStream::new(0xACCE10, 1);
    for i in 0..100 {
        let mut w = BitWord::zero(256);
        for b in 0..256 {
            w.set(b, rand::Rng::gen::<bool>(&mut rng));
        }
        if cltusim_core::scrambler::derandomize(&randomize(&w)) != w {
            failures.push(format!("scrambler involution broke at word {i}"));
            break;
        }
    }

    // Min-sum hard decisions are invariant to positive LLR scaling, and
    // NMSA with factor 1.0 reproduces MSA exactly.
    let code = make_code("ccsds-128-64").unwrap();
    let params = ChannelParams::new(-6.0, code.rate()).unwrap();
    let msa = DecoderConfig::new(Algorithm::MinSum, 25);
    let mut nmsa_as_msa = DecoderConfig::new(Algorithm::NormalizedMinSum, 25);
    nmsa_as_msa.normalization_factor = 1.0;
    let mut rng = RngStream::new(0xACCE10, 2);
    for i in 0..20 {
        let (_, c) = code.random_codeword(&mut rng);
        let (_, llrs) = transmit(&c, params, &mut rng);
        let base = Decoder::new(&code, msa)
            .unwrap()
            .decode_traced(&llrs)
            .unwrap();
        for alpha in [0.1, 3.7] {
            let scaled: Vec<f64> = llrs.iter().map(|l| alpha * l).collect();
            if scaled.iter().any(|l| l.abs() >= msa.llr_clip_magnitude) {
                failures.push(format!("scale test hit the clip at word {i}"));
                continue;
            }
            let got = Decoder::new(&code, msa)
                .unwrap()
                .decode_traced(&scaled)
                .unwrap();
            if got.1 != base.1 {
                failures.push(format!(
                    "MSA hard decisions changed under scale {alpha} at word {i}"
                ));
            }
        }
        let nm = Decoder::new(&code, nmsa_as_msa)
            .unwrap()
            .decode_traced(&llrs)
            .unwrap();
        if nm.1 != base.1 {
            failures.push(format!("NMSA(1.0) diverged from MSA at word {i}"));
        }
    }

    // Iterative decoders agree with the exhaustive maximum-likelihood oracle
    // nearly always at high SNR on codes small enough to enumerate.
    for id in ["toy-hamming-7-4", "toy-rand-8-4"] {
        let code = make_code(id).unwrap();
        let params = ChannelParams::new(6.0, code.rate()).unwrap();
        let cfg = DecoderConfig::new(Algorithm::LlrSpa, 50);
        let mut dec = Decoder::new(&code, cfg).unwrap();
        let mut rng = RngStream::new(0xACCE10, 3);
        let mut agree = 0;
        let trials = 2000;
        for _ in 0..trials {
            let (_, c) = code.random_codeword(&mut rng);
            let (_, llrs) = transmit(&c, params, &mut rng);
            let it = dec.decode(&llrs).unwrap();
            let ml = exhaustive_ml_decode(&code, &llrs).unwrap();
            if it.converged && it.hard_word == ml {
                agree += 1;
            }
        }
        if (agree as f64) < 0.93 * trials as f64 {
            failures.push(format!("ML agreement only {agree}/{trials} on {id}"));
        }
    }

    // Campaign results do not depend on the worker count.
    let cfg = DecoderConfig::new(Algorithm::MinSum, 10);
    let params = ChannelParams::new(1.0, code.rate()).unwrap();
    let rule = StoppingRule::new(10, 2000).unwrap();
    let single = estimate_cer(&code, &cfg, params, &rule, 0xACCE10, 1).unwrap();
    let multi = estimate_cer(&code, &cfg, params, &rule, 0xACCE10, 3).unwrap();
    if single != multi {
        failures.push("CER campaign differed between 1 and 3 workers".into());
    }
    let h1 =
        convergence_histogram(&code, &cfg, TsMode::Randomized, &[1.0], 300, 0xACCE10, 1).unwrap();
    let h4 =
        convergence_histogram(&code, &cfg, TsMode::Randomized, &[1.0], 300, 0xACCE10, 4).unwrap();
    if h1.to_json() != h4.to_json() {
        failures.push("histogram differed between 1 and 4 workers".into());
    }

    report(
        10,
        "property suites",
        failures.is_empty(),
        &if failures.is_empty() {
            "encode syndromes, scrambler involution, MSA scale invariance, NMSA(1.0) = MSA, ML agreement, worker-count determinism".to_string()
        } else {
            failures.join("; ")
        },
    );
}
