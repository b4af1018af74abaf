use prnglab::seeding::StreamSpec;
use prnglab::source::{BlockSource, ConstantSource, CounterSource, RepeatWordSource};
use prnglab::stattests::bm::{berlekamp_massey, linear_complexity, BitSeq};
use prnglab::stattests::special::chi2_sf;
use prnglab::stattests::*;
use prnglab::{make_stream, AlgorithmId, Error, OutputKind};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Chi-square survival from closed forms: Q(df+2) = Q(df) + e^-h h^(df/2) / Γ(df/2 + 1)
/// with h = x/2, started from Q(0) = 0 or Q(1) = erfc(√h).
fn erfc_oracle(z: f64) -> f64 {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    if z < 1.5 {
        // erf Taylor series; terms stay below e^(z^2) so little is cancelled.
        let (mut sum, mut term, mut n) = (0.0, z, 0.0);
        while term.abs() > 1e-20 {
            sum += term / (2.0 * n + 1.0);
            n += 1.0;
            term *= -z * z / n;
        }
        1.0 - 2.0 / sqrt_pi * sum
    } else {
        // Laplace continued fraction, evaluated from the tail.
        let mut t = z;
        for k in (1..=20_000).rev() {
            t = z + (k as f64 / 2.0) / t;
        }
        (-z * z).exp() / (sqrt_pi * t)
    }
}

fn chi2_sf_oracle(x: f64, df: u32) -> f64 {
    let h = x / 2.0;
    let (mut q, mut nu, mut term) = if df % 2 == 0 {
        (0.0, 0.0, (-h).exp())
    } else {
        let half_sqrt_pi = std::f64::consts::PI.sqrt() / 2.0;
        (
            erfc_oracle(h.sqrt()),
            1.0,
            (-h).exp() * h.sqrt() / half_sqrt_pi,
        )
    };
    while nu + 2.0 <= df as f64 {
        q += term;
        term *= h / (nu / 2.0 + 1.0);
        nu += 2.0;
    }
    q
}

#[test]
fn chi2_sf_matches_closed_forms() {
    for df in [1u32, 2, 3, 4, 5, 7, 10, 17, 30, 31, 64, 100, 101] {
        let d = df as f64;
        for x in [
            0.01,
            0.5,
            1.0,
            2.0,
            5.0,
            10.0,
            d,
            d + 3.0 * (2.0 * d).sqrt(),
            50.0,
            100.0,
            200.0,
        ] {
            let want = chi2_sf_oracle(x, df);
            let got = chi2_sf(x, df).unwrap();
            let rel = ((got - want) / want).abs();
            assert!(rel < 1e-10, "df={df} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn chi2_sf_monotone_and_bounded() {
    for df in 1..=50 {
        let mut prev = chi2_sf(0.0, df).unwrap();
        assert!((prev - 1.0).abs() < 1e-15);
        for i in 1..=800 {
            let q = chi2_sf(i as f64 * 0.25, df).unwrap();
            assert!(q <= prev && q >= 0.0, "df={df} x={}", i as f64 * 0.25);
            prev = q;
        }
    }
    assert!(chi2_sf(1.0, 0).is_err());
    assert!(chi2_sf(-1.0, 3).is_err());
}

fn poly_mod(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= db {
        a ^= b << (63 - a.leading_zeros() - db);
    }
    a
}

fn irreducible(p: u64) -> bool {
    let deg = 63 - p.leading_zeros();
    (2u64..1 << (deg / 2 + 1))
        .filter(|d| 63 - d.leading_zeros() <= deg / 2)
        .all(|d| poly_mod(p, d) != 0)
}

#[test]
fn berlekamp_massey_recovers_random_lfsr_lengths() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..50 {
        let l: u32 = rng.gen_range(2..=32);
        // Irreducible feedback polynomial: every nonzero state has complexity l.
        let poly = loop {
            let p = 1u64 << l | (rng.gen::<u64>() & ((1u64 << l) - 1)) | 1;
            if irreducible(p) {
                break p;
            }
        };
        let mut bits: Vec<u8> = (0..l).map(|_| rng.gen_range(0..2)).collect();
        if bits.iter().all(|&b| b == 0) {
            bits[0] = 1;
        }
        for k in l as usize..3 * l as usize + 17 {
            // s_k = sum over i of c_i s_{k-i}, c_i the coefficient of x^(l-i).
            let s = (1..=l as usize).fold(0u8, |acc, i| {
                acc ^ (((poly >> (l as usize - i)) & 1) as u8 & bits[k - i])
            });
            bits.push(s);
        }
        assert_eq!(berlekamp_massey(&bits), l as usize, "poly {poly:#x}");
        let seq = BitSeq::from_bits(&bits);
        assert_eq!(linear_complexity(&seq).complexity, l as usize);
    }
}

fn naive_rank(mut m: Vec<Vec<bool>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if let Some(p) = (r..m.len()).find(|&i| m[i][c]) {
            m.swap(r, p);
            for i in 0..m.len() {
                if i != r && m[i][c] {
                    let pivot = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(pivot) {
                        *x ^= y;
                    }
                }
            }
            r += 1;
        }
    }
    r
}

#[test]
fn gf2_rank_matches_naive_elimination() {
    let mut rng = StdRng::seed_from_u64(11);
    for trial in 0..1000 {
        // Mix in low-rank matrices so every rank class shows up.
        let base: Vec<u64> = (0..32).map(|_| rng.gen::<u64>() & 0xFFFF_FFFF).collect();
        let rows: Vec<u64> = if trial % 4 == 0 {
            let keep = rng.gen_range(0..32);
            (0..32)
                .map(|_| (0..keep).filter(|_| rng.gen()).fold(0, |a, k| a ^ base[k]))
                .collect()
        } else {
            base
        };
        let bools = rows
            .iter()
            .map(|w| (0..32).map(|j| w >> j & 1 == 1).collect())
            .collect();
        let mut packed: Vec<Vec<u64>> = rows.iter().map(|&w| vec![w]).collect();
        assert_eq!(gf2::rank(&mut packed, 32), naive_rank(bools));
    }
    let mut id: Vec<Vec<u64>> = (0..100)
        .map(|i| {
            let mut r = vec![0u64; 2];
            r[i / 64] |= 1 << (i % 64);
            r
        })
        .collect();
    assert_eq!(gf2::rank(&mut id, 100), 100);
}

fn run(cfg: &TestConfig, src: &mut dyn prnglab::ValueSource) -> TestResult {
    run_test(cfg, src).unwrap()
}

#[test]
fn gap_on_constant_inside_interval_fails() {
    let cfg = TestConfig::Gap(GapParams {
        n: 10_000,
        alpha: 0.4,
        beta: 0.6,
    });
    let r = run(&cfg, &mut ConstantSource::new(0.5));
    assert_eq!(r.verdict, Verdict::Fail);
    assert_eq!(r.consumed, 10_000);
}

#[test]
fn equally_spaced_birthdays_fail() {
    let p = BirthdaySpacingsParams::default();
    // Day i·(d/n) sits in the top day_bits bits of hi:lo.
    let step_shift = 64 - p.n.trailing_zeros();
    let mut words = Vec::new();
    for i in 0..p.n as u64 {
        let v = i << step_shift;
        words.push((v >> 32) as u32);
        words.push(v as u32);
    }
    words.push(0x8000_0000);
    let r = run(
        &TestConfig::BirthdaySpacings(p.clone()),
        &mut BlockSource::u32s(words),
    );
    assert_eq!(r.statistic, (p.n - 2) as f64);
    assert_eq!(r.verdict, Verdict::Fail);
}

#[test]
fn degenerate_examples_fail() {
    let zero_rank = run(
        &TestId::MatrixRank.default_config(),
        &mut RepeatWordSource::zeros(),
    );
    assert_eq!(zero_rank.verdict, Verdict::Fail);
    let top = run(
        &TestId::MaxOft.default_config(),
        &mut ConstantSource::new(0.99),
    );
    assert_eq!(top.verdict, Verdict::Fail);
    let walk = run(
        &TestId::RandomWalk1.default_config(),
        &mut RepeatWordSource::alternating_bits(),
    );
    assert_eq!(walk.verdict, Verdict::Fail);
    let sums = run(
        &TestId::SumCollector.default_config(),
        &mut ConstantSource::new(0.5),
    );
    assert_eq!(sums.verdict, Verdict::Fail);
    let coll = run(
        &TestId::CollisionOver.default_config(),
        &mut ConstantSource::new(0.5),
    );
    assert_eq!(coll.verdict, Verdict::Fail);
}

#[test]
fn starved_test_is_named() {
    let mut short = BlockSource::u32s((0..1000).collect());
    let tests = [
        TestId::RandomWalk1.default_config(),
        TestId::Gap.default_config(),
    ];
    match run_battery(&mut short, "short", &tests) {
        Err(Error::InsufficientData { test, .. }) => assert_eq!(test, "RANDOM_WALK1"),
        other => panic!("expected InsufficientData, got {other:?}"),
    }
}

#[test]
fn bad_interval_rejected() {
    let cfg = TestConfig::Gap(GapParams {
        n: 100,
        alpha: 0.5,
        beta: 0.5,
    });
    assert!(matches!(
        run_test(&cfg, &mut CounterSource::new()),
        Err(Error::BadParams(_))
    ));
}

#[test]
fn config_file_accepts_partial_params() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("battery.json");
    std::fs::write(
        &path,
        r#"[{"test":"GAP","params":{"n":5000}},{"test":"MATRIX_RANK"}]"#,
    )
    .unwrap();
    let tests = load_battery_config(&path).unwrap();
    assert_eq!(tests.len(), 2);
    match &tests[0] {
        TestConfig::Gap(g) => assert_eq!((g.n, g.alpha, g.beta), (5000, 0.0, 0.125)),
        other => panic!("{other:?}"),
    }
    assert_eq!(tests[1], TestId::MatrixRank.default_config());
    std::fs::write(&path, r#"[{"test":"GAP","params":{"bogus":1}}]"#).unwrap();
    assert!(load_battery_config(&path).is_err());
}

#[test]
fn same_stream_file_gives_identical_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pcg.u32");
    let mut s = make_stream(StreamSpec::new(AlgorithmId::Pcg32XshRr, 3, OutputKind::U32)).unwrap();
    let block = s.next_block(1 << 18, OutputKind::U32).unwrap();
    prnglab::streamio::write_stream(&path, &block).unwrap();
    let tests = [
        TestConfig::LinearComp(LinearCompParams {
            n_bits: 4096,
            ..Default::default()
        }),
        TestConfig::MatrixRank(MatrixRankParams {
            matrices: 100,
            size: 32,
        }),
        TestConfig::Gap(GapParams {
            n: 2000,
            ..Default::default()
        }),
    ];
    let a = {
        let mut r = prnglab::streamio::read_stream(&path, OutputKind::U32).unwrap();
        run_battery(&mut r, "pcg", &tests).unwrap()
    };
    let b = {
        let mut r = prnglab::streamio::read_stream(&path, OutputKind::U32).unwrap();
        run_battery(&mut r, "pcg", &tests).unwrap()
    };
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.detail_csv(), b.detail_csv());
}

#[test]
fn mt_battery_fails_only_linear_complexity() {
    let mut s = make_stream(StreamSpec::new(AlgorithmId::Mt19937, 0, OutputKind::U32)).unwrap();
    let report = run_battery(&mut s, "mt", &default_battery()).unwrap();
    assert_eq!(report.failed_ids(), vec![TestId::LinearComp]);
    assert_eq!(report.failed_count, 1);
}

#[test]
fn pcg64_double_battery_is_clean() {
    let mut s = make_stream(StreamSpec::new(AlgorithmId::Pcg64XslRr, 0, OutputKind::F64)).unwrap();
    let report = run_battery(&mut s, "pcg64 f64", &default_battery()).unwrap();
    assert!(report.failed_ids().is_empty(), "{:?}", report.failed_ids());
    let csv = report.detail_csv();
    assert!(csv.starts_with(BatteryReport::DETAIL_HEADER));
    assert_eq!(csv.lines().count(), 9);
}

fn result(test: TestId, p_value: f64) -> TestResult {
    TestResult {
        test,
        params: serde_json::json!({}),
        param_hash: String::new(),
        statistic: 0.0,
        p_value,
        verdict: Verdict::from_p(p_value),
        consumed: 0,
        details: Default::default(),
    }
}

#[test]
fn summary_row_layout() {
    let results = vec![
        result(TestId::Gap, 1e-12),
        result(TestId::LinearComp, 1e-20),
        result(TestId::MaxOft, 0.3),
    ];
    let r = BatteryReport::from_results("gen", results);
    assert_eq!(r.summary_row(), "gen,2,\"GAP, LINEAR_COMP\"");
}
