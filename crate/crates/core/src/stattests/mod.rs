//! Desk-scale statistical battery.
//!
//! Every test reads its values sequentially from a [`ValueSource`]. Word
//! sources are used as-is; double sources are mapped to words with
//! `floor(v·2^32)`, and uniforms are `u·2^-32` or the double itself.

pub mod bm;
mod families;
pub mod gf2;
pub mod special;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::Value;
use crate::source::ValueSource;

pub use families::{
    BirthdaySpacingsParams, CollisionOverParams, GapParams, LinearCompParams, MatrixRankParams,
    MaxOftParams, RandomWalk1Params, SumCollectorParams,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TestId {
    LinearComp,
    BirthdaySpacings,
    Gap,
    CollisionOver,
    MaxOft,
    MatrixRank,
    RandomWalk1,
    SumCollector,
}

impl TestId {
    pub const ALL: [TestId; 8] = [
        TestId::LinearComp,
        TestId::BirthdaySpacings,
        TestId::Gap,
        TestId::CollisionOver,
        TestId::MaxOft,
        TestId::MatrixRank,
        TestId::RandomWalk1,
        TestId::SumCollector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestId::LinearComp => "LINEAR_COMP",
            TestId::BirthdaySpacings => "BIRTHDAY_SPACINGS",
            TestId::Gap => "GAP",
            TestId::CollisionOver => "COLLISION_OVER",
            TestId::MaxOft => "MAX_OFT",
            TestId::MatrixRank => "MATRIX_RANK",
            TestId::RandomWalk1 => "RANDOM_WALK1",
            TestId::SumCollector => "SUM_COLLECTOR",
        }
    }

    pub fn default_config(self) -> TestConfig {
        match self {
            TestId::LinearComp => TestConfig::LinearComp(Default::default()),
            TestId::BirthdaySpacings => TestConfig::BirthdaySpacings(Default::default()),
            TestId::Gap => TestConfig::Gap(Default::default()),
            TestId::CollisionOver => TestConfig::CollisionOver(Default::default()),
            TestId::MaxOft => TestConfig::MaxOft(Default::default()),
            TestId::MatrixRank => TestConfig::MatrixRank(Default::default()),
            TestId::RandomWalk1 => TestConfig::RandomWalk1(Default::default()),
            TestId::SumCollector => TestConfig::SumCollector(Default::default()),
        }
    }
}

impl fmt::Display for TestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| *c != '_' && *c != '-')
            .collect::<String>()
            .to_ascii_lowercase();
        TestId::ALL
            .into_iter()
            .find(|t| t.name().replace('_', "").to_ascii_lowercase() == norm)
            .ok_or_else(|| Error::Parse {
                what: "test id".into(),
                detail: s.into(),
            })
    }
}

/// One battery entry: a test and its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "test",
    content = "params",
    rename_all = "SCREAMING_SNAKE_CASE",
    try_from = "RawTestConfig"
)]
pub enum TestConfig {
    LinearComp(LinearCompParams),
    BirthdaySpacings(BirthdaySpacingsParams),
    Gap(GapParams),
    CollisionOver(CollisionOverParams),
    MaxOft(MaxOftParams),
    MatrixRank(MatrixRankParams),
    RandomWalk1(RandomWalk1Params),
    SumCollector(SumCollectorParams),
}

/// Config entries may omit `params` or any field of it.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTestConfig {
    test: String,
    #[serde(default)]
    params: Option<serde_json::Value>,
}

impl TryFrom<RawTestConfig> for TestConfig {
    type Error = Error;

    fn try_from(raw: RawTestConfig) -> Result<Self> {
        let id: TestId = raw.test.parse()?;
        let params = raw.params.unwrap_or_else(|| serde_json::json!({}));
        let parse_err = |e: serde_json::Error| Error::Parse {
            what: format!("{id} params"),
            detail: e.to_string(),
        };
        fn p<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> serde_json::Result<T> {
            serde_json::from_value(v)
        }
        Ok(match id {
            TestId::LinearComp => TestConfig::LinearComp(p(params).map_err(parse_err)?),
            TestId::BirthdaySpacings => TestConfig::BirthdaySpacings(p(params).map_err(parse_err)?),
            TestId::Gap => TestConfig::Gap(p(params).map_err(parse_err)?),
            TestId::CollisionOver => TestConfig::CollisionOver(p(params).map_err(parse_err)?),
            TestId::MaxOft => TestConfig::MaxOft(p(params).map_err(parse_err)?),
            TestId::MatrixRank => TestConfig::MatrixRank(p(params).map_err(parse_err)?),
            TestId::RandomWalk1 => TestConfig::RandomWalk1(p(params).map_err(parse_err)?),
            TestId::SumCollector => TestConfig::SumCollector(p(params).map_err(parse_err)?),
        })
    }
}

impl TestConfig {
    pub fn id(&self) -> TestId {
        match self {
            TestConfig::LinearComp(_) => TestId::LinearComp,
            TestConfig::BirthdaySpacings(_) => TestId::BirthdaySpacings,
            TestConfig::Gap(_) => TestId::Gap,
            TestConfig::CollisionOver(_) => TestId::CollisionOver,
            TestConfig::MaxOft(_) => TestId::MaxOft,
            TestConfig::MatrixRank(_) => TestId::MatrixRank,
            TestConfig::RandomWalk1(_) => TestId::RandomWalk1,
            TestConfig::SumCollector(_) => TestId::SumCollector,
        }
    }

    /// Parameters as a JSON object.
    pub fn params_json(&self) -> serde_json::Value {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.get("params").cloned())
            .unwrap_or(serde_json::Value::Null)
    }

    /// Short stable hash of the parameters (FNV-1a over their JSON form).
    pub fn param_hash(&self) -> String {
        let text = self.params_json().to_string();
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        format!("{:08x}", h >> 32)
    }
}

/// The eight tests at default parameters, in canonical order.
pub fn default_battery() -> Vec<TestConfig> {
    TestId::ALL.iter().map(|t| t.default_config()).collect()
}

pub fn load_battery_config(path: &Path) -> Result<Vec<TestConfig>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        what: format!("battery config {}", path.display()),
        detail: e.to_string(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Suspect,
    Fail,
}

impl Verdict {
    pub const FAIL_LEVEL: f64 = 1e-10;
    pub const SUSPECT_LEVEL: f64 = 1e-4;

    pub fn from_p(p: f64) -> Verdict {
        if !(Self::FAIL_LEVEL..=1.0 - Self::FAIL_LEVEL).contains(&p) {
            Verdict::Fail
        } else if !(Self::SUSPECT_LEVEL..=1.0 - Self::SUSPECT_LEVEL).contains(&p) {
            Verdict::Suspect
        } else {
            Verdict::Pass
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Suspect => "SUSPECT",
            Verdict::Fail => "FAIL",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub test: TestId,
    pub params: serde_json::Value,
    pub param_hash: String,
    pub statistic: f64,
    pub p_value: f64,
    pub verdict: Verdict,
    /// Values read from the source.
    pub consumed: u64,
    /// Secondary quantities (expected counts, KS distance, ...).
    pub details: BTreeMap<String, f64>,
}

/// What a family computes before bookkeeping is attached.
pub(crate) struct Outcome {
    pub statistic: f64,
    pub p_value: f64,
    pub details: BTreeMap<String, f64>,
}

impl Outcome {
    pub fn new(statistic: f64, p_value: f64) -> Self {
        Outcome {
            statistic,
            p_value: p_value.clamp(0.0, 1.0),
            details: BTreeMap::new(),
        }
    }

    pub fn detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.into(), value);
        self
    }
}

/// Counting wrapper that turns exhaustion into `InsufficientData`.
pub(crate) struct Input<'a> {
    src: &'a mut dyn ValueSource,
    test: TestId,
    read: u64,
}

impl<'a> Input<'a> {
    fn new(src: &'a mut dyn ValueSource, test: TestId) -> Self {
        Input { src, test, read: 0 }
    }

    fn value(&mut self) -> Result<Value> {
        match self.src.next_value() {
            Ok(v) => {
                self.read += 1;
                Ok(v)
            }
            Err(Error::Exhausted { .. }) => Err(Error::InsufficientData {
                test: self.test.name().into(),
                detail: format!("source ran dry after {} values", self.read),
            }),
            Err(e) => Err(e),
        }
    }

    pub fn word(&mut self) -> Result<u32> {
        Ok(match self.value()? {
            Value::U32(w) => w,
            // Saturating cast; values in [0,1) land in 0..2^32.
            Value::F64(v) => (v * 4_294_967_296.0) as u32,
        })
    }

    pub fn uniform(&mut self) -> Result<f64> {
        Ok(match self.value()? {
            Value::U32(w) => w as f64 * (1.0 / 4_294_967_296.0),
            Value::F64(v) => v,
        })
    }
}

pub fn run_test(config: &TestConfig, source: &mut dyn ValueSource) -> Result<TestResult> {
    let id = config.id();
    let mut input = Input::new(source, id);
    let outcome = match config {
        TestConfig::LinearComp(p) => families::linear_comp(p, &mut input)?,
        TestConfig::BirthdaySpacings(p) => families::birthday_spacings(p, &mut input)?,
        TestConfig::Gap(p) => families::gap(p, &mut input)?,
        TestConfig::CollisionOver(p) => families::collision_over(p, &mut input)?,
        TestConfig::MaxOft(p) => families::max_oft(p, &mut input)?,
        TestConfig::MatrixRank(p) => families::matrix_rank(p, &mut input)?,
        TestConfig::RandomWalk1(p) => families::random_walk1(p, &mut input)?,
        TestConfig::SumCollector(p) => families::sum_collector(p, &mut input)?,
    };
    Ok(TestResult {
        test: id,
        params: config.params_json(),
        param_hash: config.param_hash(),
        statistic: outcome.statistic,
        p_value: outcome.p_value,
        verdict: Verdict::from_p(outcome.p_value),
        consumed: input.read,
        details: outcome.details,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub source: String,
    pub results: Vec<TestResult>,
    pub failed_count: usize,
    pub failed_tests: Vec<String>,
}

impl BatteryReport {
    pub fn from_results(source: impl Into<String>, results: Vec<TestResult>) -> Self {
        let failed_tests: Vec<String> = results
            .iter()
            .filter(|r| r.verdict == Verdict::Fail)
            .map(|r| r.test.name().to_string())
            .collect();
        BatteryReport {
            source: source.into(),
            failed_count: failed_tests.len(),
            failed_tests,
            results,
        }
    }

    pub fn failed_ids(&self) -> Vec<TestId> {
        self.results
            .iter()
            .filter(|r| r.verdict == Verdict::Fail)
            .map(|r| r.test)
            .collect()
    }

    pub const SUMMARY_HEADER: &'static str = "Generator,Number of Failed Tests,Failed Tests";
    pub const DETAIL_HEADER: &'static str =
        "source,test,param_hash,statistic,p_value,verdict,consumed";

    /// One summary row: generator, number failed, failed names.
    pub fn summary_row(&self) -> String {
        format!(
            "{},{},{}",
            csv_field(&self.source),
            self.failed_count,
            csv_field(&self.failed_tests.join(", "))
        )
    }

    pub fn summary_csv(reports: &[BatteryReport]) -> String {
        let mut out = String::from(Self::SUMMARY_HEADER);
        out.push('\n');
        for r in reports {
            out.push_str(&r.summary_row());
            out.push('\n');
        }
        out
    }

    pub fn detail_csv(&self) -> String {
        let mut out = String::from(Self::DETAIL_HEADER);
        out.push('\n');
        for r in &self.results {
            out.push_str(&format!(
                "{},{},{},{:e},{:e},{},{}\n",
                csv_field(&self.source),
                r.test,
                r.param_hash,
                r.statistic,
                r.p_value,
                r.verdict,
                r.consumed
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs `tests` in order, each on the next segment of `source`.
pub fn run_battery(
    source: &mut dyn ValueSource,
    description: &str,
    tests: &[TestConfig],
) -> Result<BatteryReport> {
    let mut results = Vec::with_capacity(tests.len());
    for t in tests {
        results.push(run_test(t, source)?);
    }
    Ok(BatteryReport::from_results(description, results))
}
