//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Runs as a plain binary (`harness = false`); the calibration
//! criterion takes several minutes on one core.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use prnglab::bench::{run_bench, summarize, BenchSpec};
use prnglab::energy::{integrate, wrap_delta, DomainReading, EnergySample};
use prnglab::generators::GeneratorState;
use prnglab::repro::{check_golden, compare_streams, DeepVerdict, GoldenCorpus, GoldenVerdict};
use prnglab::seeding::{expand_seed, SeedValue, SeedWarning};
use prnglab::source::{ConstantSource, CounterSource, ValueSource};
use prnglab::stattests::special::ks_uniform;
use prnglab::stattests::{default_battery, run_battery, run_test, TestId};
use prnglab::streamio::{read_text_sample, write_text_sample};
use prnglab::{make_stream, AlgorithmId, Block, GenerationMode, OutputKind, StreamSpec};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn conformance() -> Check {
    let corpus = GoldenCorpus::load_default().map_err(e)?;
    let mut algos = Vec::new();
    let mut values = 0;
    for entry in corpus.entries() {
        let v = check_golden(&corpus.vector(entry).map_err(e)?).map_err(e)?;
        ensure(v.conforms(), || format!("{}: {v}", entry.name()))?;
        match corpus.check_deep(entry).map_err(e)? {
            DeepVerdict::Conforms { compared } => {
                ensure(compared >= 1_000_000, || {
                    format!("{}: only {compared} deep values", entry.name())
                })?;
                values += compared;
                algos.push(entry.algo);
            }
            DeepVerdict::NotRecorded => {}
            DeepVerdict::DigestMismatch { expected, actual } => {
                return Err(format!("{}: digest {actual} != {expected}", entry.name()))
            }
        }
    }
    for a in AlgorithmId::ALL {
        ensure(algos.contains(&a), || {
            format!("no 10^6-value reference for {a}")
        })?;
    }
    Ok(format!(
        "{} vectors, {values} values bitwise",
        corpus.entries().len()
    ))
}

fn seed_zero_protocol() -> Check {
    let mt = expand_seed(AlgorithmId::Mt19937, SeedValue(0));
    let GeneratorState::Mt19937(g) = &mt.state else {
        return Err("MT19937 expanded to the wrong state".into());
    };
    let head = &g.state()[..3];
    ensure(head == [0, 1, 1_812_433_255], || {
        format!("MT state[0..2] = {head:?}")
    })?;
    ensure(mt.warnings.is_empty(), || "MT seed 0 warned".into())?;
    let mrg = expand_seed(AlgorithmId::Mrg32k3a, SeedValue(0));
    let GeneratorState::Mrg32k3a(m) = &mrg.state else {
        return Err("MRG32k3a expanded to the wrong state".into());
    };
    ensure(m.residues() == ([12345; 3], [12345; 3]), || {
        format!("MRG residues {:?}", m.residues())
    })?;
    ensure(mrg.warnings == [SeedWarning::MrgZeroStateFallback], || {
        format!("MRG warnings {:?}", mrg.warnings)
    })?;
    Ok("MT (0, 1, 1812433255); MRG all-12345 with fallback warning".into())
}

fn bulk_equals_single() -> Check {
    const N: usize = 1 << 20;
    let mut cases = 0;
    for algo in AlgorithmId::ALL {
        for kind in algo.supported_kinds() {
            for seed in [0, 5489] {
                let spec = StreamSpec::new(algo, seed, kind);
                let block = make_stream(spec.clone())
                    .map_err(e)?
                    .next_block(N, kind)
                    .map_err(e)?;
                let mut single = make_stream(spec).map_err(e)?;
                let one: Block = match kind {
                    OutputKind::U32 => Block::U32(
                        (0..N)
                            .map(|_| single.next_u32())
                            .collect::<Result<_, _>>()
                            .map_err(e)?,
                    ),
                    OutputKind::F64 => Block::F64((0..N).map(|_| single.next_f64()).collect()),
                };
                ensure(block.bitwise_eq(&one), || {
                    format!("{algo} {kind} seed {seed} differs")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!(
        "{cases} algorithm/kind/seed cases, 2^20 values each"
    ))
}

fn linear_comp_signature() -> Check {
    let cfg = TestId::LinearComp.default_config();
    let mut out = Vec::new();
    for (algo, should_fail) in [
        (AlgorithmId::Mt19937, true),
        (AlgorithmId::Well19937a, true),
        (AlgorithmId::Pcg64XslRr, false),
        (AlgorithmId::Pcg32XshRr, false),
        (AlgorithmId::Philox4x32_10, false),
        (AlgorithmId::Mrg32k3a, false),
    ] {
        let kind = if algo.supports(OutputKind::U32) {
            OutputKind::U32
        } else {
            OutputKind::F64
        };
        let mut s = make_stream(StreamSpec::new(algo, 0, kind)).map_err(e)?;
        let r = run_test(&cfg, &mut s).map_err(e)?;
        let p = r.p_value;
        if should_fail {
            ensure(p < 1e-10, || format!("{algo} p={p:e}, expected < 1e-10"))?;
        } else {
            ensure((1e-4..=1.0 - 1e-4).contains(&p), || {
                format!("{algo} p={p:e}, expected PASS")
            })?;
        }
        out.push(format!("{algo} p={p:.2e}"));
    }
    Ok(out.join(", "))
}

fn degenerate_sources() -> Check {
    let mut out = Vec::new();
    let sources: [(&str, Box<dyn ValueSource>); 2] = [
        ("constant 0.5", Box::new(ConstantSource::new(0.5))),
        ("counter", Box::new(CounterSource::new())),
    ];
    for (name, mut src) in sources {
        let report = run_battery(src.as_mut(), name, &default_battery()).map_err(e)?;
        ensure(report.failed_count >= 6, || {
            format!("{name}: only {} failed", report.failed_count)
        })?;
        out.push(format!("{name} {}/8", report.failed_count));
    }
    Ok(out.join(", "))
}

fn calibration() -> Check {
    let mut out = Vec::new();
    let mut worst: Option<String> = None;
    for cfg in default_battery() {
        let ps = (0..200u64)
            .map(|rep| {
                let spec = StreamSpec::new(AlgorithmId::Philox4x32_10, 1000 + rep, OutputKind::U32);
                let mut s = make_stream(spec).map_err(e)?;
                run_test(&cfg, &mut s).map(|r| r.p_value).map_err(e)
            })
            .collect::<Result<Vec<f64>, String>>()?;
        let ks = ks_uniform(&ps);
        if ks <= 1e-3 {
            worst.get_or_insert_with(|| format!("{} KS p={ks:.2e}", cfg.id()));
        }
        out.push(format!("{} {ks:.3}", cfg.id()));
    }
    match worst {
        Some(w) => Err(w),
        None => Ok(format!("KS p per test: {}", out.join(", "))),
    }
}

fn ci_math() -> Check {
    let s = summarize(&[2.0, 4.0, 6.0]).map_err(e)?;
    ensure(
        s.mean == 4.0 && (s.half_width() - 4.968).abs() <= 0.01,
        || format!("summarize([2,4,6]) = {} ± {}", s.mean, s.half_width()),
    )?;
    let mut rng = StdRng::seed_from_u64(30);
    let normal = Normal::new(0.0, 1.0).map_err(e)?;
    let trials = 10_000;
    let mut hits = 0;
    for _ in 0..trials {
        let xs: Vec<f64> = (0..30).map(|_| normal.sample(&mut rng)).collect();
        let s = summarize(&xs).map_err(e)?;
        hits += (s.lo <= 0.0 && 0.0 <= s.hi) as u32;
    }
    let rate = hits as f64 / trials as f64;
    ensure((0.94..=0.96).contains(&rate), || format!("coverage {rate}"))?;
    Ok(format!(
        "4.0 ± {:.3}; coverage {:.2}%",
        s.half_width(),
        rate * 100.0
    ))
}

fn bench_relative() -> Check {
    let base = StreamSpec::new(AlgorithmId::Mt19937, 0, OutputKind::U32);
    let mut spec = BenchSpec::new(base.clone().with_mode(GenerationMode::OneByOne));
    spec.n = 1 << 24;
    spec.reps = 30;
    let one = run_bench(&spec).map_err(e)?;
    spec.stream = base.with_mode(GenerationMode::block());
    let block = run_bench(&spec).map_err(e)?;
    ensure(one.checksum == block.checksum, || {
        format!("checksums {:016x} vs {:016x}", one.checksum, block.checksum)
    })?;
    let ratio = block.real.mean / one.real.mean;
    ensure(ratio <= 0.9, || format!("block/one-by-one = {ratio:.3}"))?;
    Ok(format!(
        "block {:.4}s vs one-by-one {:.4}s (ratio {ratio:.2}), checksum {:016x} over 30+30 reps",
        block.real.mean, one.real.mean, one.checksum
    ))
}

fn energy_suite() -> Check {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..10_000 {
        let range: u64 = rng.gen_range(1..=u64::MAX / 2);
        let (prev, now) = (rng.gen_range(0..range), rng.gen_range(0..range));
        let want = ((now as u128 + range as u128 - prev as u128) % range as u128) as u64;
        ensure(wrap_delta(prev, now, range) == want, || {
            format!("wrap {prev} {now} {range}")
        })?;
    }
    let at = |t: u64, uj: u64| EnergySample {
        timestamp_ns: t * 1_000_000_000,
        domains: vec![DomainReading {
            name: "package-0".into(),
            energy_uj: uj,
            max_range_uj: 1 << 32,
        }],
    };
    let r = integrate(
        &[at(0, 0), at(30, 100_000_000), at(40, 150_000_000)],
        30.0,
        Some(60.0),
    )
    .map_err(e)?;
    ensure(r.joules == 200.0 && r.duration_s == 60.0, || {
        format!("extrapolated {} J", r.joules)
    })?;

    let out = tempfile::tempdir().map_err(e)?;
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_prnglab"))
            .args(args)
            .env("PRNGLAB_OUT_DIR", out.path())
            .env_remove("PRNGLAB_SIMULATED_ENERGY")
            .output()
    };
    let small = ["--algo", "pcg32", "--n", "2^16", "--reps", "2"];
    let bench = run(&[&["bench"][..], &small].concat()).map_err(e)?;
    ensure(bench.status.success(), || "bench failed".into())?;
    let host = if Path::new("/sys/class/powercap/intel-rapl:0").exists() {
        "powercap present, Unsupported path not applicable".to_string()
    } else {
        let energy = run(&[&["energy"][..], &small].concat()).map_err(e)?;
        let stderr = String::from_utf8_lossy(&energy.stderr);
        ensure(
            !energy.status.success() && stderr.contains("unsupported"),
            || format!("energy without powercap: {:?} {stderr}", energy.status),
        )?;
        "energy exits Unsupported, bench completes".to_string()
    };
    Ok(format!(
        "10^4 wrap triples exact; 100 J @ 30 s -> 200 J / 60 s; {host}"
    ))
}

fn repro_protocol() -> Check {
    let dir = tempfile::tempdir().map_err(e)?;
    let spec = StreamSpec::new(AlgorithmId::Pcg64XslRr, 0, OutputKind::F64);
    let mut paths = Vec::new();
    for name in ["a.txt", "b.txt"] {
        let p = dir.path().join(name);
        write_text_sample(&mut make_stream(spec.clone()).map_err(e)?, &p, 100).map_err(e)?;
        paths.push(p);
    }
    let mut a = read_text_sample(&paths[0], OutputKind::F64).map_err(e)?;
    let mut b = read_text_sample(&paths[1], OutputKind::F64).map_err(e)?;
    let d = compare_streams(&mut a, &mut b, 100).map_err(e)?;
    ensure(d.to_string() == "IDENTICAL(100)", || d.to_string())?;

    let corpus = GoldenCorpus::load_default().map_err(e)?;
    let entry = corpus
        .find(AlgorithmId::Mt19937, 0, OutputKind::U32, None)
        .map_err(e)?;
    let bad = corpus.vector(entry).map_err(e)?.with_flipped_bit(7, 3);
    match check_golden(&bad).map_err(e)? {
        GoldenVerdict::Violates(d) if d.first_difference() == Some(7) => {}
        other => return Err(format!("corrupted vector gave {other}")),
    }
    Ok("text samples IDENTICAL(100); corrupted vector VIOLATES at 7".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 10] = [
        (
            "conformance to reference dumps",
            conformance,
            Duration::from_secs(10),
        ),
        ("seed-0 protocol", seed_zero_protocol, Duration::MAX),
        (
            "bulk equals one-by-one",
            bulk_equals_single,
            Duration::from_secs(5),
        ),
        (
            "linear complexity signature",
            linear_comp_signature,
            Duration::from_secs(60),
        ),
        (
            "degenerate-source detection",
            degenerate_sources,
            Duration::from_secs(60),
        ),
        (
            "p-value calibration (slow)",
            calibration,
            Duration::from_secs(600),
        ),
        ("confidence interval math", ci_math, Duration::MAX),
        (
            "benchmark block vs one-by-one",
            bench_relative,
            Duration::MAX,
        ),
        ("energy units and wraparound", energy_suite, Duration::MAX),
        ("repro protocol", repro_protocol, Duration::MAX),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (name, check, limit) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = t.elapsed();
        let result = result.and_then(|msg| {
            if elapsed > limit {
                Err(format!(
                    "took {:.1}s, limit {}s ({msg})",
                    elapsed.as_secs_f64(),
                    limit.as_secs()
                ))
            } else {
                Ok(msg)
            }
        });
        match result {
            Ok(msg) => println!("PASS  {name:<32} {:>7.1}s  {msg}", elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name:<32} {:>7.1}s  {msg}", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {failed} failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
