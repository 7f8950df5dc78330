//! Hot-path benchmarks: encoding, randomization, the three decoders, and
//! one information-set-decoding iteration batch.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use cltusim_core::analysis::{nearest_codewords, SearchEffort};
use cltusim_core::channel::{transmit, ChannelParams, RngStream};
use cltusim_core::cltu::randomized_tail_sequence;
use cltusim_core::codes::make_code;
use cltusim_core::decoder::{Algorithm, Decoder, DecoderConfig};
use cltusim_core::gf2::BitWord;
use cltusim_core::scrambler;

/// Deterministic non-trivial information word of the given length.
fn info_word(k: usize) -> BitWord {
    let mut w = BitWord::zero(k);
    for i in 0..k {
        w.set(i, i % 3 == 0);
    }
    w
}

fn bench_encode(c: &mut Criterion) {
    let mut group = c.benchmark_group("encode");
    for id in ["ccsds-128-64", "ccsds-512-256"] {
        let code = make_code(id).unwrap();
        let info = info_word(code.k());
        group.bench_function(id, |b| b.iter(|| code.encode(black_box(&info)).unwrap()));
    }
    group.finish();
}

fn bench_randomizer(c: &mut Criterion) {
    let word = randomized_tail_sequence();
    c.bench_function("randomize/128", |b| {
        b.iter(|| scrambler::randomize(black_box(&word)))
    });
}

fn bench_decoders(c: &mut Criterion) {
    let code = make_code("ccsds-128-64").unwrap();
    let params = ChannelParams::new(3.0, code.rate()).unwrap();
    let mut rng = RngStream::new(0xBE9C, 0);
    let codeword = code.encode(&info_word(code.k())).unwrap();
    let (_, llrs) = transmit(&codeword, params, &mut rng);

    let mut group = c.benchmark_group("decode/3dB");
    for algo in [
        Algorithm::LlrSpa,
        Algorithm::MinSum,
        Algorithm::NormalizedMinSum,
    ] {
        let mut decoder = Decoder::new(&code, DecoderConfig::new(algo, 100)).unwrap();
        group.bench_function(BenchmarkId::from_parameter(algo.name()), |b| {
            b.iter(|| decoder.decode(black_box(&llrs)).unwrap())
        });
    }
    group.finish();
}

fn bench_distance_search(c: &mut Criterion) {
    let code = make_code("ccsds-128-64").unwrap();
    let target = randomized_tail_sequence();
    let effort = SearchEffort::with_parameters(20, 2, 6, 20).unwrap();
    c.bench_function("distance/20-iterations", |b| {
        b.iter(|| nearest_codewords(black_box(&code), black_box(&target), &effort, 7).unwrap())
    });
}

criterion_group!(
    benches,
    bench_encode,
    bench_randomizer,
    bench_decoders,
    bench_distance_search
);
criterion_main!(benches);
