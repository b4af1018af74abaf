//! Seed → full-state expansion, one function per reference implementation.
//!
//! Seeds are 64 bits everywhere. Per algorithm:
//! - MT19937 / WELL19937a: low 32 bits feed the `1812433253` fill recurrence.
//! - PCG32: the full 64 bits are the reference `initstate`.
//! - PCG64: zero-extended to 128 bits.
//! - Philox4x32-10: key = (low 32, high 32), counter = 0.
//! - MRG32k3a: `seed mod m1` for the first component, `seed mod m2` for
//!   the second; a component that would be all zero triggers the fallback
//!   to the reference default state (every residue 12345) and a warning.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{
    mrg32k3a, mt19937, pcg, AlgorithmId, GeneratorState, Mrg32k3a, Mt19937, OutputKind, Pcg32,
    Pcg64, Philox4x32, Stream, Well19937a,
};

/// Default block size for bulk generation.
pub const DEFAULT_BLOCK_SIZE: usize = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeedValue(pub u64);

impl SeedValue {
    pub fn low32(self) -> u32 {
        self.0 as u32
    }

    pub fn high32(self) -> u32 {
        (self.0 >> 32) as u32
    }
}

impl From<u64> for SeedValue {
    fn from(v: u64) -> Self {
        SeedValue(v)
    }
}

impl fmt::Display for SeedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenerationMode {
    OneByOne,
    Block(usize),
}

impl GenerationMode {
    pub fn block() -> Self {
        GenerationMode::Block(DEFAULT_BLOCK_SIZE)
    }

    pub fn label(self) -> &'static str {
        match self {
            GenerationMode::OneByOne => "one_by_one",
            GenerationMode::Block(_) => "block",
        }
    }
}

/// Everything needed to reproduce a stream.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamSpec {
    pub algo: AlgorithmId,
    pub seed: SeedValue,
    pub kind: OutputKind,
    pub mode: GenerationMode,
    /// PCG sequence selector (`initseq`); the increment becomes `2·seq + 1`.
    /// `None` keeps the variant's default increment. Ignored by other algorithms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<u128>,
}

impl StreamSpec {
    pub fn new(algo: AlgorithmId, seed: u64, kind: OutputKind) -> Self {
        StreamSpec {
            algo,
            seed: SeedValue(seed),
            kind,
            mode: GenerationMode::OneByOne,
            sequence: None,
        }
    }

    pub fn with_mode(mut self, mode: GenerationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_sequence(mut self, sequence: u128) -> Self {
        self.sequence = Some(sequence);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let GenerationMode::Block(0) = self.mode {
            return Err(Error::BadParams("block size must be at least 1".into()));
        }
        if !self.algo.supports(self.kind) {
            return Err(Error::UnsupportedOutput {
                algo: self.algo,
                kind: self.kind,
            });
        }
        Ok(())
    }

    /// Label used in report rows, e.g. `mt19937_u32_block`.
    pub fn label(&self) -> String {
        format!("{}_{}_{}", self.algo, self.kind, self.mode.label())
    }
}

/// Machine-readable note attached when seed expansion had to substitute state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedWarning {
    /// The seed mapped to an absorbing all-zero MRG32k3a component; the
    /// reference default state (all residues 12345) was used instead.
    MrgZeroStateFallback,
}

impl SeedWarning {
    pub fn code(self) -> &'static str {
        match self {
            SeedWarning::MrgZeroStateFallback => "mrg_zero_state_fallback",
        }
    }
}

impl fmt::Display for SeedWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedWarning::MrgZeroStateFallback => write!(
                f,
                "{}: seed gives an all-zero MRG32k3a component; using default state 12345",
                self.code()
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedSeed {
    pub state: GeneratorState,
    pub warnings: Vec<SeedWarning>,
}

/// Expands `seed` with each algorithm's default sequence.
pub fn expand_seed(algo: AlgorithmId, seed: SeedValue) -> ExpandedSeed {
    expand_seed_with_sequence(algo, seed, None)
}

pub fn expand_seed_with_sequence(
    algo: AlgorithmId,
    seed: SeedValue,
    sequence: Option<u128>,
) -> ExpandedSeed {
    let mut warnings = Vec::new();
    let state = match algo {
        AlgorithmId::Mt19937 => GeneratorState::Mt19937(Box::new(Mt19937::from_state(
            mt19937::fill_state(seed.low32()),
        ))),
        AlgorithmId::Well19937a => GeneratorState::Well19937a(Box::new(Well19937a::from_state(
            mt19937::fill_state(seed.low32()),
        ))),
        AlgorithmId::Pcg32XshRr => {
            let inc = sequence
                .map(|s| ((s as u64) << 1) | 1)
                .unwrap_or(pcg::PCG32_DEFAULT_INCREMENT);
            GeneratorState::Pcg32XshRr(Pcg32::seeded(seed.0, inc))
        }
        AlgorithmId::Pcg64XslRr => {
            let inc = sequence
                .map(|s| (s << 1) | 1)
                .unwrap_or(pcg::PCG64_DEFAULT_INCREMENT);
            GeneratorState::Pcg64XslRr(Pcg64::seeded(seed.0 as u128, inc))
        }
        AlgorithmId::Philox4x32_10 => {
            GeneratorState::Philox4x32_10(Philox4x32::new([0; 4], [seed.low32(), seed.high32()]))
        }
        AlgorithmId::Mrg32k3a => {
            let r1 = (seed.0 % mrg32k3a::M1 as u64) as u32;
            let r2 = (seed.0 % mrg32k3a::M2 as u64) as u32;
            let gen = Mrg32k3a::from_residues([r1; 3], [r2; 3]).unwrap_or_else(|| {
                warnings.push(SeedWarning::MrgZeroStateFallback);
                let d = mrg32k3a::DEFAULT_SEED;
                Mrg32k3a::from_residues([d; 3], [d; 3]).expect("default state is valid")
            });
            GeneratorState::Mrg32k3a(gen)
        }
    };
    ExpandedSeed { state, warnings }
}

pub fn make_stream(spec: StreamSpec) -> Result<Stream> {
    spec.validate()?;
    let ExpandedSeed { state, warnings } =
        expand_seed_with_sequence(spec.algo, spec.seed, spec.sequence);
    Ok(Stream::from_parts(spec, state, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mt_seed_zero_fill() {
        let ExpandedSeed { state, .. } = expand_seed(AlgorithmId::Mt19937, SeedValue(0));
        let GeneratorState::Mt19937(mt) = state else {
            panic!("wrong variant")
        };
        // 1812433253·(1 ^ 0) + 2
        assert_eq!(&mt.state()[..3], &[0, 1, 1_812_433_255]);
    }

    #[test]
    fn philox_seed_zero() {
        let ExpandedSeed { state, warnings } =
            expand_seed(AlgorithmId::Philox4x32_10, SeedValue(0));
        let GeneratorState::Philox4x32_10(p) = state else {
            panic!("wrong variant")
        };
        assert_eq!(p.key(), [0, 0]);
        assert_eq!(p.counter(), [0, 0, 0, 0]);
        assert!(warnings.is_empty());
    }

    #[test]
    fn philox_key_split() {
        let ExpandedSeed { state, .. } =
            expand_seed(AlgorithmId::Philox4x32_10, SeedValue(0x1234_5678_9abc_def0));
        let GeneratorState::Philox4x32_10(p) = state else {
            panic!("wrong variant")
        };
        assert_eq!(p.key(), [0x9abc_def0, 0x1234_5678]);
    }

    #[test]
    fn mrg_zero_seed_falls_back() {
        for seed in [0, mrg32k3a::M1 as u64, mrg32k3a::M2 as u64] {
            let ExpandedSeed { state, warnings } =
                expand_seed(AlgorithmId::Mrg32k3a, SeedValue(seed));
            let GeneratorState::Mrg32k3a(g) = state else {
                panic!("wrong variant")
            };
            assert_eq!(g.residues(), ([12345; 3], [12345; 3]));
            assert_eq!(warnings, vec![SeedWarning::MrgZeroStateFallback]);
        }
    }

    #[test]
    fn mrg_regular_seed() {
        let ExpandedSeed { state, warnings } = expand_seed(AlgorithmId::Mrg32k3a, SeedValue(5489));
        let GeneratorState::Mrg32k3a(g) = state else {
            panic!("wrong variant")
        };
        assert_eq!(g.residues(), ([5489; 3], [5489; 3]));
        assert!(warnings.is_empty());
    }

    #[test]
    fn mrg_u32_stream_rejected() {
        let spec = StreamSpec::new(AlgorithmId::Mrg32k3a, 0, OutputKind::U32)
            .with_mode(GenerationMode::block());
        assert!(matches!(
            make_stream(spec),
            Err(Error::UnsupportedOutput { .. })
        ));
    }

    #[test]
    fn zero_block_size_rejected() {
        let spec = StreamSpec::new(AlgorithmId::Mt19937, 0, OutputKind::U32)
            .with_mode(GenerationMode::Block(0));
        assert!(matches!(make_stream(spec), Err(Error::BadParams(_))));
    }

    #[test]
    fn pcg_increments_odd() {
        for seq in [None, Some(0), Some(54), Some(u128::MAX >> 1)] {
            let e = expand_seed_with_sequence(AlgorithmId::Pcg32XshRr, SeedValue(7), seq);
            let GeneratorState::Pcg32XshRr(g) = e.state else {
                panic!()
            };
            assert_eq!(g.increment() & 1, 1);
            let e = expand_seed_with_sequence(AlgorithmId::Pcg64XslRr, SeedValue(7), seq);
            let GeneratorState::Pcg64XslRr(g) = e.state else {
                panic!()
            };
            assert_eq!(g.increment() & 1, 1);
        }
    }

    #[test]
    fn mt_and_well_states_never_zero() {
        use proptest::prelude::*;
        let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(1000));
        runner
            .run(&any::<u64>(), |seed| {
                for algo in [AlgorithmId::Mt19937, AlgorithmId::Well19937a] {
                    let words: Vec<u32> = match expand_seed(algo, SeedValue(seed)).state {
                        GeneratorState::Mt19937(g) => g.state().to_vec(),
                        GeneratorState::Well19937a(g) => g.state().to_vec(),
                        _ => unreachable!(),
                    };
                    prop_assert!(words.iter().any(|&w| w != 0));
                }
                let GeneratorState::Mrg32k3a(g) =
                    expand_seed(AlgorithmId::Mrg32k3a, SeedValue(seed)).state
                else {
                    unreachable!()
                };
                let (s1, s2) = g.residues();
                prop_assert!(s1.iter().any(|&x| x != 0) && s2.iter().any(|&x| x != 0));
                prop_assert!(s1.iter().all(|&x| (x as i64) < mrg32k3a::M1));
                prop_assert!(s2.iter().all(|&x| (x as i64) < mrg32k3a::M2));
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn expansion_is_pure() {
        for algo in AlgorithmId::ALL {
            for seed in [0, 1, 5489, u32::MAX as u64, u64::MAX] {
                assert_eq!(
                    expand_seed(algo, SeedValue(seed)),
                    expand_seed(algo, SeedValue(seed))
                );
            }
        }
    }
}
