//! The `prnglab` command line.
//!
//! Every subcommand writes machine-readable tables into the output
//! directory (flag, then `PRNGLAB_OUT_DIR`, then config file, then
//! `prnglab-out`). Table CSVs are appended to, so repeated runs build up one
//! table per experiment; `report` turns them into a long-format CSV.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bench::{self, BenchRecord, BenchSpec};
use crate::energy::{self, EnergySummary};
use crate::error::{Error, Result};
use crate::generators::{AlgorithmId, OutputKind};
use crate::repro::{self, DeepVerdict, GoldenCorpus};
use crate::seeding::{make_stream, GenerationMode, StreamSpec, DEFAULT_BLOCK_SIZE};
use crate::source::ValueSource;
use crate::stattests::{self, BatteryReport, TestConfig, TestId};
use crate::streamio::{self, SidecarMeta, StreamReader, StreamWriter};

pub const SCHEMA_VERSION: &str = "prnglab.v1";
pub const OUT_DIR_ENV: &str = "PRNGLAB_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "prnglab-out";

/// Exit status when golden vectors fail to conform.
pub const EXIT_NONCONFORMING: i32 = 3;

pub const REPRO_HEADER: &str = "vector,kind,compared,verdict,first_difference";
pub const COMPARE_HEADER: &str = "a,b,kind,limit,outcome,index,value_a,value_b";
pub const LONG_HEADER: &str = "generator,metric,value";

#[derive(Parser, Debug)]
#[command(
    name = "prnglab",
    version,
    about = "PRNG conformance, statistics, throughput and energy"
)]
pub struct Cli {
    /// JSON config; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    fn csv(self) -> bool {
        self != Format::Json
    }
    fn json(self) -> bool {
        self != Format::Csv
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a stream file (or a readable text sample).
    Gen(GenArgs),
    /// Run the statistical battery on a stream file or a generator.
    Battery(BatteryArgs),
    /// Time one-by-one or block generation.
    Bench(BenchArgs),
    /// Measure the energy of repeated generation.
    Energy(EnergyArgs),
    /// Compare streams or check the golden corpus.
    Repro(ReproArgs),
    /// Collect the tables in the output directory into long format.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    OneByOne,
    Block,
}

/// Options shared by every subcommand that builds a generator stream.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct StreamArgs {
    #[arg(long)]
    pub algo: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub block_size: Option<usize>,
    /// PCG stream selector (decimal or 0x-hex).
    #[arg(long)]
    pub sequence: Option<String>,
}

impl StreamArgs {
    fn kind(&self) -> Result<Option<OutputKind>> {
        self.kind.as_deref().map(str::parse).transpose()
    }

    fn spec(&self, default_kind: OutputKind) -> Result<StreamSpec> {
        let algo: AlgorithmId = self
            .algo
            .as_deref()
            .ok_or_else(|| Error::BadParams("--algo is required".into()))?
            .parse()?;
        let kind = self.kind()?.unwrap_or(default_kind);
        let mode = match self.mode.unwrap_or(ModeArg::OneByOne) {
            ModeArg::OneByOne => GenerationMode::OneByOne,
            ModeArg::Block => GenerationMode::Block(self.block_size.unwrap_or(DEFAULT_BLOCK_SIZE)),
        };
        let mut spec = StreamSpec::new(algo, self.seed.unwrap_or(0), kind).with_mode(mode);
        if let Some(seq) = &self.sequence {
            spec = spec.with_sequence(parse_u128(seq)?);
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_u128(s: &str) -> Result<u128> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u128::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|_| Error::Parse {
        what: "sequence".into(),
        detail: s.into(),
    })
}

/// Accepts plain integers or powers of two written `2^k`.
fn parse_count(s: &str) -> Result<u64> {
    let bad = || Error::Parse {
        what: "count".into(),
        detail: s.into(),
    };
    match s.split_once('^') {
        Some(("2", k)) => {
            let k: u32 = k.parse().map_err(|_| bad())?;
            1u64.checked_shl(k).filter(|_| k < 64).ok_or_else(bad)
        }
        Some(_) => Err(bad()),
        None => s.replace('_', "").parse().map_err(|_| bad()),
    }
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct GenArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub stream: StreamArgs,
    /// Number of values (integer or 2^k).
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write one value per line instead of raw records.
    #[arg(long)]
    pub text: bool,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct BatteryArgs {
    /// Stream file to test; otherwise a generator is built from --algo/--seed.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub stream: StreamArgs,
    /// JSON list of {test, params}.
    #[arg(long)]
    pub battery: Option<PathBuf>,
    /// Comma-separated subset of tests at default parameters.
    #[arg(long)]
    pub tests: Option<String>,
    /// Name used for the report rows.
    #[arg(long)]
    pub label: Option<String>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub stream: StreamArgs,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Pin the measured loop to this logical CPU.
    #[arg(long)]
    pub pin: Option<usize>,
    #[arg(long)]
    pub no_warmup: bool,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct EnergyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub stream: StreamArgs,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Sampling window in seconds.
    #[arg(long)]
    pub window: Option<f64>,
    /// Expected run length; enables extrapolation from the first window.
    #[arg(long)]
    pub total: Option<f64>,
    /// Use the simulated counter backend.
    #[arg(long)]
    pub simulate: bool,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ReproArgs {
    /// Check every golden vector.
    #[arg(long)]
    pub golden_all: bool,
    /// With --golden-all, also check the 10^6-value digests.
    #[arg(long)]
    pub deep: bool,
    /// Golden corpus directory.
    #[arg(long)]
    pub golden_dir: Option<PathBuf>,
    /// First stream file (raw, or text with --text).
    #[arg(long)]
    pub a: Option<PathBuf>,
    /// Second stream file; otherwise the generator given by --algo/--seed.
    #[arg(long)]
    pub b: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub stream: StreamArgs,
    /// Values to compare.
    #[arg(long)]
    pub limit: Option<u64>,
    /// Inputs are text samples.
    #[arg(long)]
    pub text: bool,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ReportArgs {
    /// Directory holding the tables; defaults to the output directory.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
}

/// Overlays `flags` (ignoring unset options and false switches) on the
/// matching section of the config file.
fn merge<T: Serialize + DeserializeOwned>(
    flags: &T,
    section: Option<&serde_json::Value>,
) -> Result<T> {
    let mut base = match section {
        Some(serde_json::Value::Object(m)) => m.clone(),
        Some(other) => {
            return Err(Error::Parse {
                what: "config".into(),
                detail: format!("expected an object, got {other}"),
            })
        }
        None => Default::default(),
    };
    let flags = serde_json::to_value(flags).expect("args serialize");
    if let serde_json::Value::Object(m) = flags {
        for (k, v) in m {
            if !(v.is_null() || v == serde_json::Value::Bool(false)) {
                base.insert(k, v);
            }
        }
    }
    serde_json::from_value(serde_json::Value::Object(base)).map_err(|e| Error::Parse {
        what: "config".into(),
        detail: e.to_string(),
    })
}

struct Context {
    out_dir: PathBuf,
    format: Format,
}

impl Context {
    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    fn write_json<T: Serialize>(&self, name: &str, kind: &str, data: &T) -> Result<()> {
        if !self.format.json() {
            return Ok(());
        }
        let doc = serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "kind": kind,
            "data": data,
        });
        let path = self.path(name);
        std::fs::write(&path, serde_json::to_string_pretty(&doc).expect("json"))
            .map_err(|e| Error::io(&path, e))
    }

    fn append_csv(&self, name: &str, header: &str, rows: &[String]) -> Result<()> {
        if !self.format.csv() {
            return Ok(());
        }
        append_csv(&self.path(name), header, rows)
    }
}

/// Appends rows, writing the header first for a new file and refusing to
/// mix schemas in an existing one.
pub fn append_csv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let existing = std::fs::read_to_string(path).unwrap_or_default();
    if let Some(first) = existing.lines().next() {
        if first != header {
            return Err(Error::Parse {
                what: path.display().to_string(),
                detail: format!("existing header {first:?} differs from {header:?}"),
            });
        }
    }
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let mut text = String::new();
    if existing.is_empty() {
        text.push_str(header);
        text.push('\n');
    }
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Parses arguments, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    let config: serde_json::Value = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            serde_json::from_str(&text).map_err(|e| Error::Parse {
                what: p.display().to_string(),
                detail: e.to_string(),
            })?
        }
        None => serde_json::json!({}),
    };
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| {
            config
                .get("out_dir")
                .and_then(|v| v.as_str())
                .map(PathBuf::from)
        })
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let format = match cli.format {
        Some(f) => f,
        None => match config.get("format") {
            Some(v) => serde_json::from_value(v.clone()).map_err(|e| Error::Parse {
                what: "config format".into(),
                detail: e.to_string(),
            })?,
            None => Format::Both,
        },
    };
    std::fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
    let ctx = Context { out_dir, format };
    match &cli.command {
        Command::Gen(a) => cmd_gen(&ctx, &merge(a, config.get("gen"))?),
        Command::Battery(a) => cmd_battery(&ctx, &merge(a, config.get("battery"))?),
        Command::Bench(a) => cmd_bench(&ctx, &merge(a, config.get("bench"))?),
        Command::Energy(a) => cmd_energy(&ctx, &merge(a, config.get("energy"))?),
        Command::Repro(a) => cmd_repro(&ctx, &merge(a, config.get("repro"))?),
        Command::Report(a) => cmd_report(&ctx, &merge(a, config.get("report"))?),
    }
}

fn sha256_file(path: &Path) -> Result<String> {
    use sha2::{Digest, Sha256};
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

fn cmd_gen(_ctx: &Context, a: &GenArgs) -> Result<i32> {
    let spec = a.stream.spec(OutputKind::U32)?;
    let n = parse_count(a.n.as_deref().unwrap_or("100"))?;
    let out = a
        .out
        .clone()
        .ok_or_else(|| Error::BadParams("--out is required".into()))?;
    let mut stream = make_stream(spec.clone())?;
    for w in stream.warnings() {
        eprintln!("warning: {}", w.code());
    }
    if a.text {
        streamio::write_text_sample(&mut stream, &out, n as usize)?;
    } else {
        let mut writer = StreamWriter::create(&out, spec.kind)?;
        match spec.mode {
            GenerationMode::OneByOne => {
                for _ in 0..n {
                    writer.write_value(stream.next_value()?)?;
                }
            }
            GenerationMode::Block(size) => {
                let mut left = n;
                while left > 0 {
                    let take = left.min(size as u64) as usize;
                    writer.write_block(&stream.next_block(take, spec.kind)?)?;
                    left -= take as u64;
                }
            }
        }
        writer.finish()?;
    }
    println!(
        "{} {} values -> {} sha256={}",
        spec.label(),
        n,
        out.display(),
        sha256_file(&out)?
    );
    Ok(0)
}

fn battery_tests(a: &BatteryArgs) -> Result<Vec<TestConfig>> {
    if let Some(p) = &a.battery {
        return stattests::load_battery_config(p);
    }
    match &a.tests {
        Some(list) => list
            .split(',')
            .map(|t| t.trim().parse::<TestId>().map(TestId::default_config))
            .collect(),
        None => Ok(stattests::default_battery()),
    }
}

fn cmd_battery(ctx: &Context, a: &BatteryArgs) -> Result<i32> {
    let tests = battery_tests(a)?;
    let (mut source, default_label): (Box<dyn ValueSource>, String) = match &a.input {
        Some(path) => {
            let meta = SidecarMeta::load_for(path)?;
            let kind = match (a.stream.kind()?, &meta, streamio::kind_from_path(path)) {
                (Some(k), _, _) => k,
                (None, Some(m), _) => m.kind,
                (None, None, Some(k)) => k,
                (None, None, None) => {
                    return Err(Error::BadParams(format!(
                        "cannot tell the kind of {}; pass --kind",
                        path.display()
                    )))
                }
            };
            let reader = match &meta {
                Some(m) if m.kind == kind => m.validate_against(path)?,
                _ => StreamReader::open(path, kind)?,
            };
            let label = meta
                .map(|m| format!("{}_{}", m.ecosystem, m.kind))
                .unwrap_or_else(|| {
                    path.file_name()
                        .map(|f| f.to_string_lossy().into_owned())
                        .unwrap_or_else(|| path.display().to_string())
                });
            (Box::new(reader), label)
        }
        None => {
            let spec = a.stream.spec(OutputKind::U32)?;
            let label = format!("{}_{}_s{}", spec.algo, spec.kind, spec.seed.0);
            (Box::new(make_stream(spec)?), label)
        }
    };
    let label = a.label.clone().unwrap_or(default_label);
    let report = stattests::run_battery(source.as_mut(), &label, &tests)?;
    for r in &report.results {
        println!(
            "{:<18} stat={:<14.6} p={:<12.4e} {}",
            r.test.name(),
            r.statistic,
            r.p_value,
            r.verdict
        );
    }
    println!("{}", BatteryReport::SUMMARY_HEADER);
    println!("{}", report.summary_row());

    let file = sanitize(&label);
    if ctx.format.csv() {
        let path = ctx.path(&format!("battery_{file}.csv"));
        std::fs::write(&path, report.detail_csv()).map_err(|e| Error::io(&path, e))?;
    }
    ctx.append_csv(
        "battery_summary.csv",
        BatteryReport::SUMMARY_HEADER,
        &[report.summary_row()],
    )?;
    ctx.write_json(&format!("battery_{file}.json"), "battery", &report)?;
    Ok(0)
}

fn long_rows(generator: &str, metrics: &[(&str, f64)]) -> Vec<String> {
    metrics
        .iter()
        .map(|(m, v)| format!("{},{m},{v}", stattests::csv_field(generator)))
        .collect()
}

fn cmd_bench(ctx: &Context, a: &BenchArgs) -> Result<i32> {
    let stream = a.stream.spec(OutputKind::U32)?;
    let mut spec = BenchSpec::new(stream);
    if let Some(n) = &a.n {
        spec.n = parse_count(n)?;
    }
    if let Some(r) = a.reps {
        spec.reps = r;
    }
    spec.cpu_pin = a.pin;
    spec.warmup = !a.no_warmup;
    let record = bench::run_bench(&spec)?;
    for w in &record.warnings {
        eprintln!("warning: {w}");
    }
    if record.user_exceeds_real(0.05) {
        eprintln!("warning: user time exceeds real time; generation ran on several threads");
    }
    println!("{}", BenchRecord::CSV_HEADER);
    println!("{}", record.csv_row());
    ctx.append_csv("bench.csv", BenchRecord::CSV_HEADER, &[record.csv_row()])?;
    ctx.write_json(
        &format!("bench_{}.json", sanitize(&spec.stream.label())),
        "bench",
        &record,
    )?;
    Ok(0)
}

fn cmd_energy(ctx: &Context, a: &EnergyArgs) -> Result<i32> {
    let stream = a.stream.spec(OutputKind::U32)?;
    let n = parse_count(a.n.as_deref().unwrap_or("2^24"))?;
    let reps = a.reps.unwrap_or(5);
    let window = a.window.unwrap_or(energy::DEFAULT_WINDOW_S);
    let backend: Box<dyn energy::CounterBackend> = if a.simulate {
        Box::new(energy::SimulatedBackend::constant_power(15.0))
    } else {
        energy::default_backend()?
    };
    let mut records = Vec::with_capacity(reps);
    for _ in 0..reps {
        let (record, _) = energy::measure(backend.as_ref(), window, a.total, || {
            bench::generate_checksum(&stream, n)
        })?;
        records.push(record);
    }
    let summary = EnergySummary::new(&stream.label(), backend.name(), records)?;
    println!("{}", EnergySummary::CSV_HEADER);
    println!("{}", summary.csv_row());
    ctx.append_csv(
        "energy.csv",
        EnergySummary::CSV_HEADER,
        &[summary.csv_row()],
    )?;
    ctx.write_json(
        &format!("energy_{}.json", sanitize(&stream.label())),
        "energy",
        &summary,
    )?;
    Ok(0)
}

fn open_source(path: &Path, kind: OutputKind, text: bool) -> Result<Box<dyn ValueSource>> {
    if text {
        Ok(Box::new(streamio::read_text_sample(path, kind)?))
    } else {
        Ok(Box::new(StreamReader::open(path, kind)?))
    }
}

fn cmd_repro(ctx: &Context, a: &ReproArgs) -> Result<i32> {
    if a.golden_all {
        let corpus = match &a.golden_dir {
            Some(d) => GoldenCorpus::load(d)?,
            None => GoldenCorpus::load_default()?,
        };
        let mut rows = Vec::new();
        let mut all = true;
        for entry in corpus.entries() {
            let verdict = repro::check_golden(&corpus.vector(entry)?)?;
            let (compared, first) = match verdict {
                repro::GoldenVerdict::Conforms { compared } => (compared, String::new()),
                repro::GoldenVerdict::Violates(d) => (
                    entry.count,
                    d.first_difference()
                        .map(|i| i.to_string())
                        .unwrap_or_default(),
                ),
            };
            let mut word = if verdict.conforms() {
                "CONFORMS"
            } else {
                "VIOLATES"
            };
            all &= verdict.conforms();
            if a.deep && verdict.conforms() {
                match corpus.check_deep(entry)? {
                    DeepVerdict::Conforms { .. } | DeepVerdict::NotRecorded => {}
                    DeepVerdict::DigestMismatch { .. } => {
                        word = "VIOLATES_DEEP";
                        all = false;
                    }
                }
            }
            println!("{:<40} {word}", entry.name());
            rows.push(format!(
                "{},{},{compared},{word},{first}",
                stattests::csv_field(&entry.name()),
                entry.kind
            ));
        }
        ctx.append_csv("repro.csv", REPRO_HEADER, &rows)?;
        return Ok(if all { 0 } else { EXIT_NONCONFORMING });
    }

    let a_path =
        a.a.clone()
            .ok_or_else(|| Error::BadParams("repro needs --golden-all or --a".into()))?;
    let meta = SidecarMeta::load_for(&a_path)?;
    let kind = a
        .stream
        .kind()?
        .or(meta.as_ref().map(|m| m.kind))
        .or_else(|| streamio::kind_from_path(&a_path))
        .ok_or_else(|| Error::BadParams("cannot tell the stream kind; pass --kind".into()))?;
    let limit = a.limit.unwrap_or(repro::DEFAULT_COMPARE_LEN);
    let mut left = open_source(&a_path, kind, a.text)?;
    let (mut right, b_name): (Box<dyn ValueSource>, String) = match &a.b {
        Some(b) => (open_source(b, kind, a.text)?, b.display().to_string()),
        None => {
            let spec = a.stream.spec(kind)?;
            let name = format!("{}_{}_s{}", spec.algo, spec.kind, spec.seed.0);
            (Box::new(make_stream(spec)?), name)
        }
    };
    if let Some(m) = &meta {
        println!("a: {} {} ({})", m.ecosystem, m.version, m.seeding_call);
    }
    let d = repro::compare_streams(left.as_mut(), right.as_mut(), limit)?;
    println!("{d}");
    let (outcome, index, va, vb) = match d.outcome {
        repro::Outcome::Identical { .. } => {
            ("IDENTICAL", String::new(), String::new(), String::new())
        }
        repro::Outcome::Differs { index, a, b } => {
            ("DIFFERS", index.to_string(), a.to_string(), b.to_string())
        }
    };
    ctx.append_csv(
        "compare.csv",
        COMPARE_HEADER,
        &[format!(
            "{},{},{kind},{limit},{outcome},{index},{va},{vb}",
            stattests::csv_field(&a_path.display().to_string()),
            stattests::csv_field(&b_name)
        )],
    )?;
    Ok(0)
}

fn read_table(path: &Path) -> Result<Option<Vec<std::collections::BTreeMap<String, String>>>> {
    if !path.exists() {
        return Ok(None);
    }
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Parse {
        what: path.display().to_string(),
        detail: e.to_string(),
    })?;
    let mut rows = Vec::new();
    for r in rdr.deserialize() {
        rows.push(r.map_err(|e: csv::Error| Error::Parse {
            what: path.display().to_string(),
            detail: e.to_string(),
        })?);
    }
    Ok(Some(rows))
}

fn cmd_report(ctx: &Context, a: &ReportArgs) -> Result<i32> {
    let dir = a.input.clone().unwrap_or_else(|| ctx.out_dir.clone());
    let mut long = Vec::new();
    let mut doc = serde_json::Map::new();
    let tables: [(&str, &str, &[&str]); 3] = [
        (
            "bench.csv",
            "generator",
            &[
                "real_mean",
                "real_ci_lo",
                "real_ci_hi",
                "user_mean",
                "user_ci_lo",
                "user_ci_hi",
            ],
        ),
        (
            "energy.csv",
            "generator",
            &[
                "j_per_min_mean",
                "j_per_min_ci_lo",
                "j_per_min_ci_hi",
                "joules_mean",
            ],
        ),
        (
            "battery_summary.csv",
            "Generator",
            &["Number of Failed Tests"],
        ),
    ];
    for (file, key, metrics) in tables {
        let Some(rows) = read_table(&dir.join(file))? else {
            continue;
        };
        for row in &rows {
            let mut generator = row.get(key).cloned().unwrap_or_default();
            if let (Some(kind), Some(mode)) = (row.get("kind"), row.get("mode")) {
                generator = format!("{generator}_{kind}_{mode}");
            }
            let vals: Vec<(&str, f64)> = metrics
                .iter()
                .filter_map(|m| row.get(*m).and_then(|v| v.parse().ok()).map(|v| (*m, v)))
                .collect();
            long.extend(long_rows(&generator, &vals));
        }
        doc.insert(
            file.trim_end_matches(".csv").into(),
            serde_json::to_value(&rows).expect("json"),
        );
    }
    if long.is_empty() {
        return Err(Error::BadParams(format!(
            "no bench.csv, energy.csv or battery_summary.csv in {}",
            dir.display()
        )));
    }
    let long_path = ctx.path("long.csv");
    let mut text = String::from(LONG_HEADER);
    text.push('\n');
    for r in &long {
        text.push_str(r);
        text.push('\n');
    }
    std::fs::write(&long_path, text).map_err(|e| Error::io(&long_path, e))?;
    ctx.write_json("report.json", "report", &doc)?;
    println!("{} rows -> {}", long.len(), long_path.display());
    Ok(0)
}
