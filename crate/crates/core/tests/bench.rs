use prnglab::bench::{run_bench, summarize, BenchRecord, BenchSpec};
use prnglab::seeding::StreamSpec;
use prnglab::{AlgorithmId, GenerationMode, OutputKind};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

#[test]
fn three_samples() {
    let s = summarize(&[2.0, 4.0, 6.0]).unwrap();
    assert_eq!(s.mean, 4.0);
    assert!((s.half_width() - 4.968).abs() < 0.01);
}

#[test]
fn t_interval_coverage_near_nominal() {
    let mut rng = StdRng::seed_from_u64(2024);
    let dist = Normal::new(10.0, 3.0).unwrap();
    let trials = 10_000;
    let mut covered = 0;
    for _ in 0..trials {
        let xs: Vec<f64> = (0..30).map(|_| dist.sample(&mut rng)).collect();
        let s = summarize(&xs).unwrap();
        if s.lo <= 10.0 && 10.0 <= s.hi {
            covered += 1;
        }
    }
    let rate = covered as f64 / trials as f64;
    assert!((0.94..=0.96).contains(&rate), "coverage {rate}");
}

#[test]
fn permutation_invariant_and_scale_equivariant() {
    let mut rng = StdRng::seed_from_u64(5);
    let dist = Normal::new(0.0, 1.0).unwrap();
    let mut xs: Vec<f64> = (0..17).map(|_| dist.sample(&mut rng)).collect();
    let a = summarize(&xs).unwrap();
    xs.shuffle(&mut rng);
    let b = summarize(&xs).unwrap();
    assert!((a.mean - b.mean).abs() < 1e-12 && (a.half_width() - b.half_width()).abs() < 1e-12);
    let scaled: Vec<f64> = xs.iter().map(|x| 3.5 * x + 1.0).collect();
    let c = summarize(&scaled).unwrap();
    assert!((c.mean - (3.5 * a.mean + 1.0)).abs() < 1e-12);
    assert!((c.half_width() - 3.5 * a.half_width()).abs() < 1e-12);
}

#[test]
fn modes_agree_and_csv_row_matches_header() {
    let base = StreamSpec::new(AlgorithmId::Well19937a, 9, OutputKind::U32);
    let mut records = Vec::new();
    for mode in [GenerationMode::OneByOne, GenerationMode::Block(1000)] {
        let mut spec = BenchSpec::new(base.clone().with_mode(mode));
        spec.n = 50_000;
        spec.reps = 3;
        records.push(run_bench(&spec).unwrap());
    }
    assert_eq!(records[0].checksum, records[1].checksum);
    let fields = BenchRecord::CSV_HEADER.split(',').count();
    for r in &records {
        assert_eq!(r.csv_row().split(',').count(), fields);
    }
}

#[test]
fn bad_pin_is_a_warning() {
    let mut spec = BenchSpec::new(StreamSpec::new(AlgorithmId::Pcg32XshRr, 1, OutputKind::U32));
    spec.n = 1000;
    spec.reps = 2;
    spec.cpu_pin = Some(100_000);
    let r = run_bench(&spec).unwrap();
    assert!(r.warnings.iter().any(|w| w.starts_with("PinUnsupported")));
}
