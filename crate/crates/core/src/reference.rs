//! The squeezed reference noise system.
//!
//! Each noise-bit `i` has a logic-high reference `R_i1`, a random telegraph
//! wave taking +1 or -1 with probability 1/2 per clock, and a logic-low
//! reference that is the constant 1. Only the highs are stored; the low
//! reference is the multiplicative identity and is produced on demand.
//!
//! Samples come from a counter-based stream: sample `(i, t)` is a pure
//! function of `(seed, i, t)` (ChaCha8 keyed by the seed, stream `i`,
//! word position `t`), so every trace is reproducible on its own and any
//! sample is addressable without generating its predecessors.

use std::sync::OnceLock;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::{InblError, Result, MAX_NOISE_BITS};
use crate::trace::Trace;

fn stream_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn word_to_sample(word: u32) -> i64 {
    if word >> 31 == 1 {
        1
    } else {
        -1
    }
}

/// Sample of the high reference of noise-bit `index` (1-based) at `clock`,
/// computed directly from the counter.
pub fn reference_sample(seed: u64, index: usize, clock: usize) -> i64 {
    let mut rng = stream_for(seed, index);
    rng.set_word_pos(clock as u128);
    word_to_sample(rng.next_u32())
}

fn reference_trace(seed: u64, index: usize, clocks: usize) -> Trace {
    let mut rng = stream_for(seed, index);
    let samples = (0..clocks).map(|_| word_to_sample(rng.next_u32())).collect();
    Trace::from_vec(samples).with_label(format!("R{index}1"))
}

#[derive(Debug)]
pub struct ReferenceSystem {
    seed: u64,
    clocks: usize,
    highs: Vec<Trace>,
    // bit (i-1) set iff R_i1(t) = -1
    patterns: Vec<u64>,
    ones: OnceLock<Trace>,
}

impl ReferenceSystem {
    /// Builds `noise_bits` high references over `clocks` cycles.
    pub fn generate(noise_bits: usize, clocks: usize, seed: u64) -> Result<Self> {
        if noise_bits == 0 || clocks == 0 {
            return Err(InblError::InvalidDimension(format!(
                "need M >= 1 and T >= 1, got M = {noise_bits}, T = {clocks}"
            )));
        }
        if noise_bits > MAX_NOISE_BITS {
            return Err(InblError::InvalidDimension(format!(
                "M = {noise_bits} exceeds the engine limit of {MAX_NOISE_BITS}"
            )));
        }
        let highs: Vec<Trace> = (1..=noise_bits)
            .map(|i| reference_trace(seed, i, clocks))
            .collect();
        let patterns = (0..clocks)
            .map(|t| {
                highs.iter().enumerate().fold(0u64, |acc, (bit, h)| {
                    if h.samples()[t] < 0 {
                        acc | (1 << bit)
                    } else {
                        acc
                    }
                })
            })
            .collect();
        Ok(Self {
            seed,
            clocks,
            highs,
            patterns,
            ones: OnceLock::new(),
        })
    }

    /// `M`
    pub fn noise_bits(&self) -> usize {
        self.highs.len()
    }

    /// `T`
    pub fn clocks(&self) -> usize {
        self.clocks
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn highs(&self) -> &[Trace] {
        &self.highs
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.noise_bits() {
            return Err(InblError::IndexOutOfRange {
                index,
                width: self.noise_bits(),
            });
        }
        Ok(())
    }

    /// High reference `R_i1` of noise-bit `index` (1-based).
    pub fn high(&self, index: usize) -> Result<&Trace> {
        self.check_index(index)?;
        Ok(&self.highs[index - 1])
    }

    /// Low reference: the constant 1 over this system's window.
    pub fn low(&self) -> Trace {
        Trace::from_vec(vec![1; self.clocks]).with_label("L")
    }

    /// `G_i^p`: the low reference for `bit = false`, `R_i1` for `bit = true`.
    pub fn noise_bit(&self, index: usize, bit: bool) -> Result<Trace> {
        let high = self.high(index)?;
        Ok(if bit { high.clone() } else { self.low() })
    }

    /// Product of every high reference (the all-ones string). Computed once.
    pub fn ones(&self) -> &Trace {
        self.ones.get_or_init(|| {
            let mut acc = self.low();
            for h in &self.highs {
                acc = acc.multiply(h).expect("references share T");
            }
            acc.with_label("Ones")
        })
    }

    /// Per-clock sign patterns: bit `i-1` is set iff `R_i1(t) = -1`.
    pub(crate) fn patterns(&self) -> &[u64] {
        &self.patterns
    }
}

/// Constant-1 low reference over `clocks` cycles.
pub fn low_reference(clocks: usize) -> Result<Trace> {
    Ok(Trace::constant(clocks, 1)?.with_label("L"))
}

pub fn generate_reference_system(
    noise_bits: usize,
    clocks: usize,
    seed: u64,
) -> Result<ReferenceSystem> {
    ReferenceSystem::generate(noise_bits, clocks, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// A single clock cannot distinguish orthogonal from correlated.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeanEntry {
    pub index: usize,
    pub mean: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationEntry {
    pub first: usize,
    pub second: usize,
    pub correlation: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrthogonalityReport {
    pub z: f64,
    /// `z / sqrt(T)`
    pub bound: f64,
    pub means: Vec<MeanEntry>,
    /// Self pairs `(i, i)` followed by every distinct pair `(i, k)`, `i < k`.
    pub pairs: Vec<CorrelationEntry>,
}

impl OrthogonalityReport {
    pub fn failures(&self) -> usize {
        self.means
            .iter()
            .map(|m| m.verdict)
            .chain(self.pairs.iter().map(|p| p.verdict))
            .filter(|v| *v == Verdict::Fail)
            .count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

fn sum_product(a: &Trace, b: &Trace) -> i64 {
    a.samples().iter().zip(b.samples()).map(|(x, y)| x * y).sum()
}

/// Empirical zero-mean and orthogonality checks at a `z`-sigma bound.
pub fn check_orthogonality(sys: &ReferenceSystem, z: f64) -> OrthogonalityReport {
    let t = sys.clocks();
    let bound = z / (t as f64).sqrt();
    let judge = |value: f64| {
        if t < 2 {
            Verdict::Inconclusive
        } else if value.abs() <= bound {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    };

    let means = sys
        .highs()
        .iter()
        .enumerate()
        .map(|(k, h)| {
            let mean = h.mean();
            MeanEntry {
                index: k + 1,
                mean,
                verdict: judge(mean),
            }
        })
        .collect();

    let mut pairs = Vec::new();
    for (k, h) in sys.highs().iter().enumerate() {
        let correlation = sum_product(h, h) as f64 / t as f64;
        pairs.push(CorrelationEntry {
            first: k + 1,
            second: k + 1,
            correlation,
            verdict: if correlation == 1.0 {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        });
    }
    let highs = sys.highs();
    for i in 0..highs.len() {
        for k in i + 1..highs.len() {
            let correlation = sum_product(&highs[i], &highs[k]) as f64 / t as f64;
            pairs.push(CorrelationEntry {
                first: i + 1,
                second: k + 1,
                correlation,
                verdict: judge(correlation),
            });
        }
    }

    OrthogonalityReport {
        z,
        bound,
        means,
        pairs,
    }
}
