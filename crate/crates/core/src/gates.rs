//! NOT, XOR and XNOR in the squeezed scheme.
//!
//! Every gate is a sample-wise product with reference traces, so it acts on
//! a hyperspace vector and on every component of a superposition at once
//! (multiplication distributes over the sum), and its output at clock `t`
//! depends only on its inputs at clock `t`.
//!
//! Gates work on traces. Their string-level meaning (bitwise XOR of the
//! encoded numbers, etc.) is checked against the symbolic oracle in tests.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{InblError, Result};
use crate::reference::ReferenceSystem;
use crate::symbolic::ProductTerm;
use crate::trace::Trace;

/// Non-empty set of noise-bit indices targeted by a gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSet(BTreeSet<usize>);

impl TargetSet {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        if set.is_empty() {
            return Err(InblError::Parse("target set must not be empty".into()));
        }
        if set.contains(&0) {
            return Err(InblError::IndexOutOfRange { index: 0, width: 0 });
        }
        Ok(Self(set))
    }

    pub fn single(index: usize) -> Result<Self> {
        Self::new([index])
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn to_term(&self) -> Result<ProductTerm> {
        ProductTerm::from_indices(self.indices())
    }

    fn validate(&self, sys: &ReferenceSystem) -> Result<()> {
        self.indices().try_for_each(|i| sys.check_index(i))
    }
}

impl FromStr for TargetSet {
    type Err = InblError;

    /// Comma-separated 1-based indices, e.g. `1,3`.
    fn from_str(s: &str) -> Result<Self> {
        let indices = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|e| InblError::Parse(format!("bad target `{p}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(indices)
    }
}

impl fmt::Display for TargetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

fn check_clocks(sys: &ReferenceSystem, input: &Trace) -> Result<()> {
    if input.len() != sys.clocks() {
        return Err(InblError::LengthMismatch {
            left: sys.clocks(),
            right: input.len(),
        });
    }
    Ok(())
}

/// `NOT_x(t)`: the product of the targeted high references.
pub fn not_operator(sys: &ReferenceSystem, targets: &TargetSet) -> Result<Trace> {
    targets.validate(sys)?;
    let mut acc = sys.low();
    for i in targets.indices() {
        acc = acc.multiply(sys.high(i)?)?;
    }
    Ok(acc.with_label(format!("NOT{{{targets}}}")))
}

/// Inverts the targeted bits of every component of `input`.
pub fn apply_not(sys: &ReferenceSystem, targets: &TargetSet, input: &Trace) -> Result<Trace> {
    check_clocks(sys, input)?;
    not_operator(sys, targets)?.multiply(input)
}

/// XOR of two `i`-th noise-bit signals. The low reference `G_i^0` would be
/// a third factor, but it is the constant 1.
pub fn xor_bit(sys: &ReferenceSystem, index: usize, a: &Trace, b: &Trace) -> Result<Trace> {
    sys.check_index(index)?;
    a.multiply(b)
}

/// XNOR of two `i`-th noise-bit signals: `a * b * R_i1`.
pub fn xnor_bit(sys: &ReferenceSystem, index: usize, a: &Trace, b: &Trace) -> Result<Trace> {
    a.multiply(b)?.multiply(sys.high(index)?)
}

/// Pairwise XOR of hyperspace vectors or superpositions: `a * b`.
pub fn xor_pair(a: &Trace, b: &Trace) -> Result<Trace> {
    a.multiply(b)
}

/// Pairwise XNOR: `a * b * Ones`.
pub fn xnor_pair(sys: &ReferenceSystem, a: &Trace, b: &Trace) -> Result<Trace> {
    a.multiply(b)?.multiply(sys.ones())
}

/// XOR of noise-bit `index` with bit value `bit`. For `bit = false` the
/// factor `G_i^0` is the constant 1 and the input passes through.
pub fn xor_targeted(sys: &ReferenceSystem, input: &Trace, index: usize, bit: bool) -> Result<Trace> {
    sys.check_index(index)?;
    check_clocks(sys, input)?;
    if bit {
        input.multiply(sys.high(index)?)
    } else {
        Ok(input.clone())
    }
}

/// XNOR of noise-bit `index` with bit value `bit`: `input * G_i^p * R_i1`.
pub fn xnor_targeted(
    sys: &ReferenceSystem,
    input: &Trace,
    index: usize,
    bit: bool,
) -> Result<Trace> {
    check_clocks(sys, input)?;
    let selected = sys.noise_bit(index, bit)?;
    input.multiply(&selected)?.multiply(sys.high(index)?)
}
