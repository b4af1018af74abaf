use prnglab::generators::philox::philox4x32_10;
use prnglab::repro::{check_golden, DeepVerdict, GoldenCorpus};
use prnglab::seeding::{GenerationMode, StreamSpec};
use prnglab::{make_stream, AlgorithmId, Block, GeneratorState, OutputKind};

fn stream(algo: AlgorithmId, seed: u64, kind: OutputKind) -> prnglab::Stream {
    make_stream(StreamSpec::new(algo, seed, kind)).unwrap()
}

#[test]
fn mt19937_reference_first_output() {
    let mut s = stream(AlgorithmId::Mt19937, 5489, OutputKind::U32);
    assert_eq!(s.next_u32().unwrap(), 3_499_211_612);
}

#[test]
fn pcg32_reference_demo_sequence() {
    let spec = StreamSpec::new(AlgorithmId::Pcg32XshRr, 42, OutputKind::U32).with_sequence(54);
    let mut s = make_stream(spec).unwrap();
    let got: Vec<u32> = (0..6).map(|_| s.next_u32().unwrap()).collect();
    assert_eq!(
        got,
        [0xa15c02b7, 0x7b47f409, 0xba1d3330, 0x83d2f293, 0xbfa4784b, 0xcbed606e]
    );
}

#[test]
fn pcg64_reference_demo_sequence() {
    let spec = StreamSpec::new(AlgorithmId::Pcg64XslRr, 42, OutputKind::U32).with_sequence(54);
    let mut s = make_stream(spec).unwrap();
    let lo = s.next_u32().unwrap() as u64;
    let hi = s.next_u32().unwrap() as u64;
    assert_eq!((hi << 32) | lo, 0x86b1da1d72062b68);
}

#[test]
fn philox_known_answer_blocks() {
    assert_eq!(
        philox4x32_10([0; 4], [0; 2]),
        [0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8]
    );
    assert_eq!(
        philox4x32_10([u32::MAX; 4], [u32::MAX; 2]),
        [0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd]
    );
    assert_eq!(
        philox4x32_10(
            [0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344],
            [0xa4093822, 0x299f31d0]
        ),
        [0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1]
    );
    let mut s = stream(AlgorithmId::Philox4x32_10, 0, OutputKind::U32);
    let words: Vec<u32> = (0..4).map(|_| s.next_u32().unwrap()).collect();
    assert_eq!(words, [0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8]);
}

#[test]
fn mrg32k3a_default_state_first_double() {
    // Residues after one step from all-12345: p1 = 3023790853, p2 = 2478282264.
    let expected = (3_023_790_853f64 - 2_478_282_264f64) * 2.328306549295727688e-10;
    let mut s = stream(AlgorithmId::Mrg32k3a, 0, OutputKind::F64);
    assert_eq!(s.next_f64().to_bits(), expected.to_bits());
}

#[test]
fn mt_first_double_is_two_draw_composition() {
    let mut ints = stream(AlgorithmId::Mt19937, 5489, OutputKind::U32);
    let x0 = ints.next_u32().unwrap();
    let x1 = ints.next_u32().unwrap();
    let expected = ((x0 >> 5) as f64 * 67108864.0 + (x1 >> 6) as f64) / 9007199254740992.0;
    let mut d = stream(AlgorithmId::Mt19937, 5489, OutputKind::F64);
    assert_eq!(d.next_f64().to_bits(), expected.to_bits());
}

#[test]
fn mrg_u32_unsupported() {
    let spec = StreamSpec::new(AlgorithmId::Mrg32k3a, 1, OutputKind::F64);
    let mut s = make_stream(spec).unwrap();
    assert!(s.next_u32().is_err());
    assert!(s.next_block(4, OutputKind::U32).is_err());
    assert!(s.next_block(0, OutputKind::U32).unwrap().is_empty());
}

#[test]
fn zero_length_block_leaves_state() {
    for algo in AlgorithmId::ALL {
        for kind in algo.supported_kinds() {
            let mut s = stream(algo, 5489, kind);
            let before = s.state().clone();
            assert!(s.next_block(0, kind).unwrap().is_empty());
            assert_eq!(s.state(), &before);
            assert_eq!(s.drawn(), 0);
        }
    }
}

fn single_draws(s: &mut prnglab::Stream, n: usize, kind: OutputKind) -> Block {
    match kind {
        OutputKind::U32 => Block::U32((0..n).map(|_| s.next_u32().unwrap()).collect()),
        OutputKind::F64 => Block::F64((0..n).map(|_| s.next_f64()).collect()),
    }
}

#[test]
fn bulk_equals_single_draws_2_16() {
    let n = 1 << 16;
    for algo in AlgorithmId::ALL {
        for kind in algo.supported_kinds() {
            for seed in [0, 1, 5489, u32::MAX as u64] {
                let mut a = stream(algo, seed, kind);
                let mut b = stream(algo, seed, kind);
                let bulk = a.next_block(n, kind).unwrap();
                let single = single_draws(&mut b, n, kind);
                assert!(bulk.bitwise_eq(&single), "{algo} {kind} seed {seed}");
                assert_eq!(a.state(), b.state());
                assert_eq!(a.drawn(), n as u64);
            }
        }
    }
}

#[test]
fn bulk_after_odd_offsets_matches() {
    // Partially consumed Philox blocks and PCG64 half-words.
    for algo in [
        AlgorithmId::Philox4x32_10,
        AlgorithmId::Pcg64XslRr,
        AlgorithmId::Mt19937,
    ] {
        for offset in 0..7 {
            let mut a = stream(algo, 9, OutputKind::U32);
            let mut b = stream(algo, 9, OutputKind::U32);
            for _ in 0..offset {
                a.next_u32().unwrap();
                b.next_u32().unwrap();
            }
            let bulk = a.next_block(1001, OutputKind::U32).unwrap();
            let single = single_draws(&mut b, 1001, OutputKind::U32);
            assert!(bulk.bitwise_eq(&single), "{algo} offset {offset}");
        }
    }
}

#[test]
fn determinism_2_16() {
    for algo in AlgorithmId::ALL {
        for kind in algo.supported_kinds() {
            let a = stream(algo, 77, kind).next_block(1 << 16, kind).unwrap();
            let b = stream(algo, 77, kind).next_block(1 << 16, kind).unwrap();
            assert!(a.bitwise_eq(&b));
        }
    }
}

#[test]
fn doubles_in_unit_interval() {
    for algo in AlgorithmId::ALL {
        let Block::F64(v) = stream(algo, 0, OutputKind::F64)
            .next_block(1 << 20, OutputKind::F64)
            .unwrap()
        else {
            unreachable!()
        };
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(min >= 0.0 && max < 1.0, "{algo}: [{min}, {max}]");
    }
}

#[test]
fn philox_counter_advances_once_per_four_draws() {
    let mut s = stream(AlgorithmId::Philox4x32_10, 123, OutputKind::U32);
    let counter = |s: &prnglab::Stream| match s.state() {
        GeneratorState::Philox4x32_10(p) => p.counter_u128(),
        _ => unreachable!(),
    };
    for k in 1..=50u128 {
        s.next_block(4, OutputKind::U32).unwrap();
        assert_eq!(counter(&s), k);
    }
}

#[test]
fn philox_counter_carries() {
    use prnglab::generators::Philox4x32;
    let mut p = Philox4x32::new([u32::MAX, u32::MAX, 0, 0], [1, 2]);
    for _ in 0..4 {
        p.next_u32();
    }
    assert_eq!(p.counter(), [0, 0, 1, 0]);
}

#[test]
fn mt_twist_changes_state() {
    let mut s = stream(AlgorithmId::Mt19937, 0, OutputKind::U32);
    let before = match s.state() {
        GeneratorState::Mt19937(m) => *m.state(),
        _ => unreachable!(),
    };
    s.next_block(624, OutputKind::U32).unwrap();
    let after = match s.state() {
        GeneratorState::Mt19937(m) => *m.state(),
        _ => unreachable!(),
    };
    assert_ne!(before, after);
}

#[test]
fn block_mode_spec_streams_match_one_by_one() {
    let base = StreamSpec::new(AlgorithmId::Mt19937, 0, OutputKind::U32);
    let mut a = make_stream(base.clone().with_mode(GenerationMode::block())).unwrap();
    let mut b = make_stream(base).unwrap();
    let bulk = a.next_block(1 << 20, OutputKind::U32).unwrap();
    assert!(bulk.bitwise_eq(&single_draws(&mut b, 1 << 20, OutputKind::U32)));
}

#[test]
fn golden_corpus_conforms() {
    let corpus = GoldenCorpus::load_default().unwrap();
    for entry in corpus.entries() {
        let v = corpus.vector(entry).unwrap();
        let verdict = check_golden(&v).unwrap();
        assert!(verdict.conforms(), "{}: {verdict}", entry.name());
    }
}

#[test]
fn golden_corpus_covers_every_algorithm_and_kind() {
    let corpus = GoldenCorpus::load_default().unwrap();
    for algo in AlgorithmId::ALL {
        for kind in algo.supported_kinds() {
            for seed in [0, 5489] {
                corpus.find(algo, seed, kind, None).unwrap();
            }
        }
    }
    corpus
        .find(AlgorithmId::Pcg32XshRr, 42, OutputKind::U32, Some(54))
        .unwrap();
}

#[test]
fn golden_deep_digests_match() {
    let corpus = GoldenCorpus::load_default().unwrap();
    for entry in corpus.entries() {
        let verdict = corpus.check_deep(entry).unwrap();
        assert!(
            matches!(
                verdict,
                DeepVerdict::Conforms {
                    compared: 1_000_000
                }
            ),
            "{}: {verdict:?}",
            entry.name()
        );
    }
}
