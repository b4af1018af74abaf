//! Throughput benchmark: n draws one by one or in blocks, replicated, with
//! Student-t 95% intervals on real and user time.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::generators::OutputKind;
use crate::seeding::{make_stream, GenerationMode, StreamSpec};

pub const DEFAULT_N: u64 = 1 << 24;
pub const DEFAULT_REPS: usize = 30;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub stream: StreamSpec,
    pub n: u64,
    pub reps: usize,
    /// Logical CPU to pin the measured loop to.
    pub cpu_pin: Option<usize>,
    /// Run one unrecorded replication first.
    pub warmup: bool,
}

impl BenchSpec {
    pub fn new(stream: StreamSpec) -> Self {
        BenchSpec {
            stream,
            n: DEFAULT_N,
            reps: DEFAULT_REPS,
            cpu_pin: None,
            warmup: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.stream.validate()?;
        if self.reps < 2 {
            return Err(Error::BadParams(format!(
                "bench needs reps >= 2 for a confidence interval, got {}",
                self.reps
            )));
        }
        if self.n == 0 {
            return Err(Error::BadParams("bench needs n >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Summary {
    pub fn half_width(&self) -> f64 {
        (self.hi - self.lo) / 2.0
    }
}

/// Mean and Student-t 95% interval `mean ± t(0.975, k−1)·s/√k`.
pub fn summarize(samples: &[f64]) -> Result<Summary> {
    let k = samples.len();
    if k < 2 {
        return Err(Error::BadParams(format!(
            "a confidence interval needs at least 2 samples, got {k}"
        )));
    }
    let kf = k as f64;
    let mean = samples.iter().sum::<f64>() / kf;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (kf - 1.0);
    if var == 0.0 {
        return Ok(Summary {
            mean,
            lo: mean,
            hi: mean,
        });
    }
    let t = StudentsT::new(0.0, 1.0, kf - 1.0)
        .map_err(|e| Error::Domain(e.to_string()))?
        .inverse_cdf(0.975);
    let half = t * var.sqrt() / kf.sqrt();
    Ok(Summary {
        mean,
        lo: mean - half,
        hi: mean + half,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub real_seconds: f64,
    pub user_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub spec: BenchSpec,
    pub samples: Vec<Sample>,
    pub real: Summary,
    pub user: Summary,
    /// Fold of every output of one replication; equal across replications.
    pub checksum: u64,
    pub warnings: Vec<String>,
}

impl BenchRecord {
    pub const CSV_HEADER: &'static str =
        "generator,kind,mode,n,reps,real_mean,real_ci_lo,real_ci_hi,user_mean,user_ci_lo,user_ci_hi,checksum";

    pub fn csv_row(&self) -> String {
        let s = &self.spec.stream;
        format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:016x}",
            s.algo,
            s.kind,
            s.mode.label(),
            self.spec.n,
            self.spec.reps,
            self.real.mean,
            self.real.lo,
            self.real.hi,
            self.user.mean,
            self.user.lo,
            self.user.hi,
            self.checksum
        )
    }

    /// User time well above real time hints at hidden parallelism.
    pub fn user_exceeds_real(&self, tolerance: f64) -> bool {
        self.user.mean > self.real.mean * (1.0 + tolerance)
    }
}

#[inline(always)]
fn fold(acc: u64, bits: u64) -> u64 {
    acc.rotate_left(5) ^ bits
}

fn user_time() -> Duration {
    // SAFETY: getrusage only writes into the zeroed struct we pass.
    let mut usage: libc::rusage = unsafe { std::mem::zeroed() };
    let rc = unsafe { libc::getrusage(libc::RUSAGE_SELF, &mut usage) };
    if rc != 0 {
        return Duration::ZERO;
    }
    Duration::new(
        usage.ru_utime.tv_sec as u64,
        usage.ru_utime.tv_usec as u32 * 1000,
    )
}

/// Generates `n` values of `spec` and returns the checksum.
pub fn generate_checksum(spec: &StreamSpec, n: u64) -> Result<u64> {
    let mut stream = make_stream(spec.clone())?;
    let mut acc = 0u64;
    match (spec.mode, spec.kind) {
        (GenerationMode::OneByOne, OutputKind::U32) => {
            for _ in 0..n {
                acc = fold(acc, stream.next_u32()? as u64);
            }
        }
        (GenerationMode::OneByOne, OutputKind::F64) => {
            for _ in 0..n {
                acc = fold(acc, stream.next_f64().to_bits());
            }
        }
        (GenerationMode::Block(size), OutputKind::U32) => {
            let mut buf = vec![0u32; size.min(n as usize)];
            let mut left = n;
            while left > 0 {
                let take = (left as usize).min(buf.len());
                stream.fill_u32(&mut buf[..take])?;
                acc = buf[..take].iter().fold(acc, |a, &v| fold(a, v as u64));
                left -= take as u64;
            }
        }
        (GenerationMode::Block(size), OutputKind::F64) => {
            let mut buf = vec![0f64; size.min(n as usize)];
            let mut left = n;
            while left > 0 {
                let take = (left as usize).min(buf.len());
                stream.fill_f64(&mut buf[..take]);
                acc = buf[..take].iter().fold(acc, |a, &v| fold(a, v.to_bits()));
                left -= take as u64;
            }
        }
    }
    Ok(acc)
}

#[cfg(target_os = "linux")]
mod affinity {
    pub struct Pinned(libc::cpu_set_t);

    pub fn pin(cpu: usize) -> Result<Pinned, String> {
        // SAFETY: cpu_set_t is plain data; the libc calls only read/write it.
        unsafe {
            let mut old: libc::cpu_set_t = std::mem::zeroed();
            if libc::sched_getaffinity(0, std::mem::size_of::<libc::cpu_set_t>(), &mut old) != 0 {
                return Err(std::io::Error::last_os_error().to_string());
            }
            if cpu >= libc::CPU_SETSIZE as usize {
                return Err(format!("cpu {cpu} out of range"));
            }
            let mut set: libc::cpu_set_t = std::mem::zeroed();
            libc::CPU_SET(cpu, &mut set);
            if libc::sched_setaffinity(0, std::mem::size_of::<libc::cpu_set_t>(), &set) != 0 {
                return Err(std::io::Error::last_os_error().to_string());
            }
            Ok(Pinned(old))
        }
    }

    impl Drop for Pinned {
        fn drop(&mut self) {
            // SAFETY: restores the mask saved by `pin`.
            unsafe {
                libc::sched_setaffinity(0, std::mem::size_of::<libc::cpu_set_t>(), &self.0);
            }
        }
    }
}

#[cfg(not(target_os = "linux"))]
mod affinity {
    pub struct Pinned;

    pub fn pin(_cpu: usize) -> Result<Pinned, String> {
        Err("CPU affinity is not supported on this platform".into())
    }
}

pub fn run_bench(spec: &BenchSpec) -> Result<BenchRecord> {
    spec.validate()?;
    let mut warnings = Vec::new();
    let _pin = match spec.cpu_pin {
        Some(cpu) => match affinity::pin(cpu) {
            Ok(p) => Some(p),
            Err(e) => {
                warnings.push(format!("PinUnsupported: {e}"));
                None
            }
        },
        None => None,
    };

    if spec.warmup {
        generate_checksum(&spec.stream, spec.n)?;
    }
    let mut samples = Vec::with_capacity(spec.reps);
    let mut checksum = None;
    for _ in 0..spec.reps {
        let (u0, t0) = (user_time(), Instant::now());
        let c = generate_checksum(&spec.stream, spec.n)?;
        let real = t0.elapsed();
        let user = user_time().saturating_sub(u0);
        match checksum {
            None => checksum = Some(c),
            Some(prev) if prev != c => {
                return Err(Error::Workload(format!(
                    "checksum changed between replications: {prev:016x} vs {c:016x}"
                )))
            }
            _ => {}
        }
        samples.push(Sample {
            real_seconds: real.as_secs_f64(),
            user_seconds: user.as_secs_f64(),
        });
    }
    let real: Vec<f64> = samples.iter().map(|s| s.real_seconds).collect();
    let user: Vec<f64> = samples.iter().map(|s| s.user_seconds).collect();
    Ok(BenchRecord {
        spec: spec.clone(),
        real: summarize(&real)?,
        user: summarize(&user)?,
        samples,
        checksum: checksum.unwrap_or(0),
        warnings,
    })
}
