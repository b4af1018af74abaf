//! Package energy from the powercap (RAPL) counters.
//!
//! Counters are cumulative microjoule readings that wrap at
//! `max_energy_range_uj`. A sampler thread reads them while a workload runs;
//! energy is either integrated over the whole run or taken over the first
//! window and scaled to an expected total duration.

use std::io::ErrorKind;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SIMULATED_ENV: &str = "PRNGLAB_SIMULATED_ENERGY";
pub const POWERCAP_ROOT: &str = "/sys/class/powercap";
pub const DEFAULT_WINDOW_S: f64 = 1.0;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainReading {
    pub name: String,
    pub energy_uj: u64,
    pub max_range_uj: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnergySample {
    /// Monotonic nanoseconds, origin chosen by the backend.
    pub timestamp_ns: u64,
    pub domains: Vec<DomainReading>,
}

pub trait CounterBackend: Send + Sync {
    fn name(&self) -> &str;
    fn read(&self) -> Result<EnergySample>;
}

/// `(now − prev) mod range`, the energy between two readings of a
/// counter that wraps at `range`.
pub fn wrap_delta(prev: u64, now: u64, range: u64) -> u64 {
    if range == 0 {
        return now.saturating_sub(prev);
    }
    (now as i128 - prev as i128).rem_euclid(range as i128) as u64
}

pub fn uj_to_joules(uj: u64) -> f64 {
    uj as f64 / 1e6
}

fn parse_counter(path: &Path) -> Result<u64> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        ErrorKind::PermissionDenied => Error::PermissionDenied {
            path: path.to_path_buf(),
        },
        _ => Error::io(path, e),
    })?;
    text.trim().parse().map_err(|_| Error::Parse {
        what: path.display().to_string(),
        detail: format!("not a counter value: {:?}", text.trim()),
    })
}

/// Top-level `intel-rapl:N` package domains under a powercap root.
#[derive(Clone, Debug)]
pub struct SysfsBackend {
    domains: Vec<(String, PathBuf, u64)>,
    origin: Instant,
}

impl SysfsBackend {
    pub fn discover() -> Result<Self> {
        Self::discover_at(Path::new(POWERCAP_ROOT))
    }

    pub fn discover_at(root: &Path) -> Result<Self> {
        let entries = std::fs::read_dir(root)
            .map_err(|e| Error::EnergyUnsupported(format!("{}: {e}", root.display())))?;
        let mut dirs: Vec<PathBuf> = entries
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| {
                p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.starts_with("intel-rapl:") && n.matches(':').count() == 1)
            })
            .collect();
        dirs.sort();
        if dirs.is_empty() {
            return Err(Error::EnergyUnsupported(format!(
                "no RAPL package domains under {}",
                root.display()
            )));
        }
        let mut domains = Vec::new();
        for dir in dirs {
            let name = std::fs::read_to_string(dir.join("name"))
                .map(|s| s.trim().to_string())
                .unwrap_or_else(|_| dir.file_name().unwrap().to_string_lossy().into_owned());
            let range = parse_counter(&dir.join("max_energy_range_uj"))?;
            let energy = dir.join("energy_uj");
            // Probe now so permission problems surface before any workload runs.
            parse_counter(&energy)?;
            domains.push((name, energy, range));
        }
        Ok(SysfsBackend {
            domains,
            origin: Instant::now(),
        })
    }
}

impl CounterBackend for SysfsBackend {
    fn name(&self) -> &str {
        "powercap"
    }

    fn read(&self) -> Result<EnergySample> {
        let mut domains = Vec::with_capacity(self.domains.len());
        for (name, path, range) in &self.domains {
            domains.push(DomainReading {
                name: name.clone(),
                energy_uj: parse_counter(path)?,
                max_range_uj: *range,
            });
        }
        Ok(EnergySample {
            timestamp_ns: self.origin.elapsed().as_nanos() as u64,
            domains,
        })
    }
}

#[derive(Debug)]
enum Clock {
    /// Time only moves through `advance`.
    Virtual { now_ns: u64, energy_uj: u128 },
    /// Constant power against the real monotonic clock.
    Real { origin: Instant, watts: f64 },
}

/// A single-package counter with a configurable wrap range.
#[derive(Debug)]
pub struct SimulatedBackend {
    clock: Mutex<Clock>,
    range_uj: u64,
    start_uj: u64,
}

impl SimulatedBackend {
    /// RAPL's common 2^32 µJ wrap range.
    pub const DEFAULT_RANGE_UJ: u64 = 1 << 32;

    pub fn manual(start_uj: u64, range_uj: u64) -> Self {
        SimulatedBackend {
            clock: Mutex::new(Clock::Virtual {
                now_ns: 0,
                energy_uj: 0,
            }),
            range_uj,
            start_uj,
        }
    }

    pub fn constant_power(watts: f64) -> Self {
        SimulatedBackend {
            clock: Mutex::new(Clock::Real {
                origin: Instant::now(),
                watts,
            }),
            range_uj: Self::DEFAULT_RANGE_UJ,
            start_uj: 0,
        }
    }

    /// Moves a manual clock forward, charging `joules` over `seconds`.
    pub fn advance(&self, seconds: f64, joules: f64) {
        if let Clock::Virtual { now_ns, energy_uj } = &mut *self.clock.lock().unwrap() {
            *now_ns += (seconds * 1e9).round() as u64;
            *energy_uj += (joules * 1e6).round() as u128;
        }
    }
}

impl CounterBackend for SimulatedBackend {
    fn name(&self) -> &str {
        "simulated"
    }

    fn read(&self) -> Result<EnergySample> {
        let (ts, total) = match &*self.clock.lock().unwrap() {
            Clock::Virtual { now_ns, energy_uj } => (*now_ns, *energy_uj),
            Clock::Real { origin, watts } => {
                let t = origin.elapsed();
                (t.as_nanos() as u64, (t.as_secs_f64() * watts * 1e6) as u128)
            }
        };
        let counter = (self.start_uj as u128 + total) % self.range_uj.max(1) as u128;
        Ok(EnergySample {
            timestamp_ns: ts,
            domains: vec![DomainReading {
                name: "package-0".into(),
                energy_uj: counter as u64,
                max_range_uj: self.range_uj,
            }],
        })
    }
}

/// Simulated backend when `PRNGLAB_SIMULATED_ENERGY=1`, powercap otherwise.
pub fn default_backend() -> Result<Box<dyn CounterBackend>> {
    if std::env::var(SIMULATED_ENV).is_ok_and(|v| v == "1") {
        Ok(Box::new(SimulatedBackend::constant_power(15.0)))
    } else {
        Ok(Box::new(SysfsBackend::discover()?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyRecord {
    pub joules: f64,
    pub duration_s: f64,
    pub j_per_min: f64,
    pub window_s: f64,
    pub extrapolated: bool,
    /// Joules per package, before any extrapolation.
    pub per_domain: Vec<(String, f64)>,
}

pub fn joules_per_minute(joules: f64, duration_s: f64) -> f64 {
    if joules == 0.0 {
        0.0
    } else {
        joules * 60.0 / duration_s
    }
}

/// Per-domain microjoules between consecutive samples, summed.
fn domain_energy(samples: &[EnergySample]) -> Result<Vec<(String, u64)>> {
    let first = &samples[0];
    let mut totals: Vec<(String, u64)> =
        first.domains.iter().map(|d| (d.name.clone(), 0)).collect();
    for pair in samples.windows(2) {
        if pair[0].domains.len() != pair[1].domains.len() {
            return Err(Error::Domain(
                "energy domains changed between samples".into(),
            ));
        }
        for (i, (a, b)) in pair[0].domains.iter().zip(&pair[1].domains).enumerate() {
            totals[i].1 += wrap_delta(a.energy_uj, b.energy_uj, b.max_range_uj);
        }
    }
    Ok(totals)
}

/// Turns ordered samples into a record. With `total_expected_s`, energy over
/// the first `window_s` is scaled to the expected total; otherwise every
/// delta is integrated.
pub fn integrate(
    samples: &[EnergySample],
    window_s: f64,
    total_expected_s: Option<f64>,
) -> Result<EnergyRecord> {
    if !(window_s > 0.0) {
        return Err(Error::BadParams("energy window must be > 0 s".into()));
    }
    if samples.len() < 2 {
        return Err(Error::Domain("need at least two energy samples".into()));
    }
    if samples
        .windows(2)
        .any(|w| w[1].timestamp_ns < w[0].timestamp_ns)
    {
        return Err(Error::Domain("energy samples out of order".into()));
    }
    let t0 = samples[0].timestamp_ns;
    let span_s = (samples[samples.len() - 1].timestamp_ns - t0) as f64 / 1e9;

    if let Some(total) = total_expected_s {
        if span_s >= window_s {
            let window_ns = (window_s * 1e9).round() as u64;
            let end = samples
                .iter()
                .position(|s| s.timestamp_ns - t0 >= window_ns)
                .expect("span covers the window");
            let window = &samples[..=end];
            let measured_s = (window[end].timestamp_ns - t0) as f64 / 1e9;
            let per_domain = domain_energy(window)?;
            let uj: u64 = per_domain.iter().map(|d| d.1).sum();
            let joules = uj_to_joules(uj) * total / measured_s;
            return Ok(EnergyRecord {
                joules,
                duration_s: total,
                j_per_min: joules_per_minute(joules, total),
                window_s: measured_s,
                extrapolated: true,
                per_domain: per_domain
                    .into_iter()
                    .map(|(n, e)| (n, uj_to_joules(e)))
                    .collect(),
            });
        }
    }
    if span_s <= 0.0 {
        return Err(Error::Domain("energy samples span no time".into()));
    }
    let per_domain = domain_energy(samples)?;
    let joules = uj_to_joules(per_domain.iter().map(|d| d.1).sum());
    Ok(EnergyRecord {
        joules,
        duration_s: span_s,
        j_per_min: joules_per_minute(joules, span_s),
        window_s,
        extrapolated: false,
        per_domain: per_domain
            .into_iter()
            .map(|(n, e)| (n, uj_to_joules(e)))
            .collect(),
    })
}

/// Runs `workload` while sampling `backend` every `window_s` seconds.
pub fn measure<T>(
    backend: &dyn CounterBackend,
    window_s: f64,
    total_expected_s: Option<f64>,
    workload: impl FnOnce() -> Result<T>,
) -> Result<(EnergyRecord, T)> {
    if !(window_s > 0.0) {
        return Err(Error::BadParams("energy window must be > 0 s".into()));
    }
    let samples = Mutex::new(vec![backend.read()?]);
    let done = AtomicBool::new(false);
    let period = Duration::from_secs_f64(window_s);
    let (sampler_result, output) = std::thread::scope(|scope| {
        let sampler = scope.spawn(|| -> Result<()> {
            let mut next = Instant::now() + period;
            while !done.load(Ordering::Acquire) {
                let now = Instant::now();
                if now >= next {
                    let s = backend.read()?;
                    samples.lock().unwrap().push(s);
                    next += period;
                } else {
                    std::thread::sleep((next - now).min(Duration::from_millis(5)));
                }
            }
            Ok(())
        });
        let output = workload();
        done.store(true, Ordering::Release);
        (sampler.join().expect("sampler thread panicked"), output)
    });
    sampler_result?;
    let output = output.map_err(|e| match e {
        Error::Workload(_) => e,
        other => Error::Workload(other.to_string()),
    })?;
    let mut samples = samples.into_inner().unwrap();
    samples.push(backend.read()?);
    Ok((integrate(&samples, window_s, total_expected_s)?, output))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergySummary {
    pub label: String,
    pub backend: String,
    pub records: Vec<EnergyRecord>,
    pub j_per_min: crate::bench::Summary,
    pub joules: crate::bench::Summary,
}

impl EnergySummary {
    pub const CSV_HEADER: &'static str =
        "generator,backend,reps,j_per_min_mean,j_per_min_ci_lo,j_per_min_ci_hi,joules_mean,duration_mean_s,extrapolated";

    pub fn new(label: &str, backend: &str, records: Vec<EnergyRecord>) -> Result<Self> {
        let jpm: Vec<f64> = records.iter().map(|r| r.j_per_min).collect();
        let j: Vec<f64> = records.iter().map(|r| r.joules).collect();
        Ok(EnergySummary {
            label: label.into(),
            backend: backend.into(),
            j_per_min: crate::bench::summarize(&jpm)?,
            joules: crate::bench::summarize(&j)?,
            records,
        })
    }

    pub fn csv_row(&self) -> String {
        let dur =
            self.records.iter().map(|r| r.duration_s).sum::<f64>() / self.records.len() as f64;
        format!(
            "{},{},{},{:.4},{:.4},{:.4},{:.4},{:.4},{}",
            self.label,
            self.backend,
            self.records.len(),
            self.j_per_min.mean,
            self.j_per_min.lo,
            self.j_per_min.hi,
            self.joules.mean,
            dur,
            self.records.iter().any(|r| r.extrapolated)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(ts_s: f64, uj: u64, range: u64) -> EnergySample {
        EnergySample {
            timestamp_ns: (ts_s * 1e9) as u64,
            domains: vec![DomainReading {
                name: "package-0".into(),
                energy_uj: uj,
                max_range_uj: range,
            }],
        }
    }

    #[test]
    fn wraparound_examples() {
        assert_eq!(wrap_delta(100, 250, 1000), 150);
        assert_eq!(wrap_delta(999, 5, 1000), 6);
        assert_eq!(wrap_delta(7, 7, 1000), 0);
        assert_eq!(uj_to_joules(123_456_789), 123.456789);
    }

    #[test]
    fn per_minute() {
        assert_eq!(joules_per_minute(30.0, 60.0), 30.0);
        assert_eq!(joules_per_minute(100.0, 30.0), 200.0);
        assert_eq!(joules_per_minute(0.0, 12.0), 0.0);
    }

    #[test]
    fn extrapolates_first_window() {
        let s = [
            sample(0.0, 0, 1 << 40),
            sample(30.0, 100_000_000, 1 << 40),
            sample(45.0, 999_000_000, 1 << 40),
        ];
        let r = integrate(&s, 30.0, Some(60.0)).unwrap();
        assert!(r.extrapolated);
        assert_eq!(r.joules, 200.0);
        assert_eq!(r.duration_s, 60.0);
        assert_eq!(r.j_per_min, 200.0);
    }

    #[test]
    fn short_runs_are_integrated() {
        let s = [
            sample(0.0, 990, 1000),
            sample(1.0, 40, 1000),
            sample(2.0, 90, 1000),
        ];
        let r = integrate(&s, 30.0, Some(60.0)).unwrap();
        assert!(!r.extrapolated);
        assert_eq!(r.joules, 100e-6);
        assert_eq!(r.duration_s, 2.0);
    }

    #[test]
    fn integration_rejects_bad_input() {
        assert!(integrate(&[sample(0.0, 0, 10)], 1.0, None).is_err());
        assert!(integrate(&[sample(1.0, 0, 10), sample(0.0, 1, 10)], 1.0, None).is_err());
        assert!(integrate(&[sample(0.0, 0, 10), sample(1.0, 1, 10)], 0.0, None).is_err());
    }

    #[test]
    fn missing_powercap_is_unsupported() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            SysfsBackend::discover_at(&dir.path().join("nope")),
            Err(Error::EnergyUnsupported(_))
        ));
        assert!(matches!(
            SysfsBackend::discover_at(dir.path()),
            Err(Error::EnergyUnsupported(_))
        ));
    }

    #[test]
    fn sysfs_layout_sums_packages() {
        let dir = tempfile::tempdir().unwrap();
        for (pkg, e) in [("intel-rapl:0", 1000u64), ("intel-rapl:1", 2000)] {
            let d = dir.path().join(pkg);
            std::fs::create_dir(&d).unwrap();
            std::fs::write(d.join("energy_uj"), format!("{e}\n")).unwrap();
            std::fs::write(d.join("max_energy_range_uj"), "262143328850\n").unwrap();
            std::fs::write(d.join("name"), format!("package-{}\n", &pkg[11..])).unwrap();
        }
        // Subdomains are not packages.
        std::fs::create_dir(dir.path().join("intel-rapl:0:0")).unwrap();
        let b = SysfsBackend::discover_at(dir.path()).unwrap();
        let s = b.read().unwrap();
        assert_eq!(s.domains.len(), 2);
        assert_eq!(s.domains[1].name, "package-1");
        assert_eq!(s.domains[1].energy_uj, 2000);
    }

    #[test]
    fn measure_on_manual_clock() {
        let b = SimulatedBackend::manual(
            SimulatedBackend::DEFAULT_RANGE_UJ - 10,
            SimulatedBackend::DEFAULT_RANGE_UJ,
        );
        let (r, out) = measure(&b, 10.0, None, || {
            b.advance(12.0, 48.0);
            Ok(7)
        })
        .unwrap();
        assert_eq!(out, 7);
        assert_eq!(r.joules, 48.0);
        assert_eq!(r.duration_s, 12.0);
        assert_eq!(r.j_per_min, 240.0);
    }

    #[test]
    fn failing_workload_discards_record() {
        let b = SimulatedBackend::manual(0, 1000);
        let r: Result<(EnergyRecord, ())> =
            measure(&b, 1.0, None, || Err(Error::BadParams("boom".into())));
        assert!(matches!(r, Err(Error::Workload(_))));
    }
}
