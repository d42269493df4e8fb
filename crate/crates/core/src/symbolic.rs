//! Exact, noise-free algebra of product terms and superpositions.
//!
//! A product term is a set of noise-bit indices stored as a bitmask (bit
//! `i-1` for noise-bit `i`). Since `R_i1 * R_i1 = 1`, multiplying two terms
//! is symmetric difference of their masks, i.e. XOR in GF(2)^M. A
//! superposition is a formal integer combination of terms kept in canonical
//! form: like terms merged, zero coefficients dropped. This module never
//! touches a signal, so it can adjudicate the numeric engine.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{InblError, Result};
use crate::hyperspace::BitString;

/// Widest universe the oracle will enumerate.
pub const MAX_ORACLE_UNIVERSE_BITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ProductTerm(u64);

impl ProductTerm {
    /// The vacuum: no high references, i.e. the all-zeros string.
    pub const fn empty() -> Self {
        ProductTerm(0)
    }

    /// Every noise-bit in `1..=width`: the all-ones string.
    pub fn full(width: usize) -> Self {
        assert!(width <= 64);
        if width == 64 {
            ProductTerm(u64::MAX)
        } else {
            ProductTerm((1u64 << width) - 1)
        }
    }

    pub const fn from_mask(mask: u64) -> Self {
        ProductTerm(mask)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = 0u64;
        for i in indices {
            if i == 0 || i > 64 {
                return Err(InblError::IndexOutOfRange {
                    index: i,
                    width: 64,
                });
            }
            mask |= 1 << (i - 1);
        }
        Ok(ProductTerm(mask))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, index: usize) -> bool {
        index >= 1 && index <= 64 && self.0 >> (index - 1) & 1 == 1
    }

    /// Member indices, ascending.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        (1..=64).filter(move |&i| self.contains(i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Highest index present, 0 for the vacuum.
    pub fn max_index(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn fits(self, width: usize) -> bool {
        self.max_index() <= width
    }

    /// Product of two hyperspace vectors: symmetric difference of masks.
    pub fn product(self, other: ProductTerm) -> ProductTerm {
        ProductTerm(self.0 ^ other.0)
    }
}

/// Checked form of [`ProductTerm::product`] for terms at a stated width.
pub fn sym_product(width: usize, p: ProductTerm, q: ProductTerm) -> Result<ProductTerm> {
    for t in [p, q] {
        if !t.fits(width) {
            return Err(InblError::WidthMismatch {
                expected: width,
                found: t.max_index(),
            });
        }
    }
    Ok(p.product(q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Not,
    Xor,
    Xnor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicSuperposition {
    width: usize,
    terms: BTreeMap<ProductTerm, i64>,
}

impl SymbolicSuperposition {
    /// The zero signal (no terms) at `width` noise-bits.
    pub fn new(width: usize) -> Self {
        Self {
            width,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        width: usize,
        terms: impl IntoIterator<Item = (ProductTerm, i64)>,
    ) -> Result<Self> {
        let mut sup = Self::new(width);
        for (t, c) in terms {
            sup.add_term(t, c)?;
        }
        Ok(sup)
    }

    /// One hyperspace vector with coefficient 1.
    pub fn vector(s: &BitString) -> Self {
        let mut sup = Self::new(s.width());
        sup.terms.insert(s.to_term(), 1);
        sup
    }

    pub fn from_strings<'a>(width: usize, strings: impl IntoIterator<Item = &'a BitString>) -> Result<Self> {
        let mut sup = Self::new(width);
        for s in strings {
            if s.width() != width {
                return Err(InblError::WidthMismatch {
                    expected: width,
                    found: s.width(),
                });
            }
            sup.add_term(s.to_term(), 1)?;
        }
        Ok(sup)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Adds `coeff * term`, merging with an existing like term.
    pub fn add_term(&mut self, term: ProductTerm, coeff: i64) -> Result<()> {
        if !term.fits(self.width) {
            return Err(InblError::IndexOutOfRange {
                index: term.max_index(),
                width: self.width,
            });
        }
        self.merge(term, coeff);
        Ok(())
    }

    fn merge(&mut self, term: ProductTerm, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(term).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&term);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (ProductTerm, i64)> + '_ {
        self.terms.iter().map(|(&t, &c)| (t, c))
    }

    pub fn coefficient(&self, term: ProductTerm) -> i64 {
        self.terms.get(&term).copied().unwrap_or(0)
    }

    /// Number of distinct terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of absolute coefficients: bounds every sample of the realized trace.
    pub fn l1_norm(&self) -> i64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// A single hyperspace vector with coefficient 1.
    pub fn as_vector(&self) -> Option<ProductTerm> {
        match self.terms.iter().next() {
            Some((&t, &1)) if self.terms.len() == 1 => Some(t),
            _ => None,
        }
    }

    /// Decoded set view: each term as a bit string, with its coefficient.
    pub fn strings(&self) -> Vec<(BitString, i64)> {
        let mut out: Vec<_> = self
            .terms()
            .map(|(t, c)| (BitString::from_term(t, self.width).expect("fits"), c))
            .collect();
        out.sort_by(|a, b| b.0.value().cmp(&a.0.value()));
        out
    }

    fn check_same_width(&self, other: &Self) -> Result<()> {
        if self.width != other.width {
            return Err(InblError::WidthMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_width(other)?;
        let mut out = self.clone();
        for (t, c) in other.terms() {
            out.merge(t, c);
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: i64) -> Self {
        let mut out = Self::new(self.width);
        for (t, c) in self.terms() {
            out.merge(t, c * factor);
        }
        out
    }

    /// Multiplies every term by `operand` (mask XOR), re-merging collisions.
    pub fn times_term(&self, operand: ProductTerm) -> Result<Self> {
        if !operand.fits(self.width) {
            return Err(InblError::WidthMismatch {
                expected: self.width,
                found: operand.max_index(),
            });
        }
        let mut out = Self::new(self.width);
        for (t, c) in self.terms() {
            out.merge(t.product(operand), c);
        }
        Ok(out)
    }

    /// Full bilinear product of two superpositions.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_width(other)?;
        let mut out = Self::new(self.width);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.merge(a.product(b), ca * cb);
            }
        }
        Ok(out)
    }

    /// Applies a gate whose second input is the hyperspace vector `operand`.
    /// NOT and XOR multiply by `operand`; XNOR also by the full mask.
    pub fn gate(&self, kind: GateKind, operand: ProductTerm) -> Result<Self> {
        let factor = match kind {
            GateKind::Not | GateKind::Xor => operand,
            GateKind::Xnor => operand.product(ProductTerm::full(self.width)),
        };
        self.times_term(factor)
    }

    /// Pairwise XOR/XNOR against another superposition.
    ///
    /// The product is always well defined, but it only has set semantics
    /// when one side is a single hyperspace vector; see
    /// [`within_gate_table`].
    pub fn pairwise(&self, kind: GateKind, other: &Self) -> Result<Self> {
        let product = self.multiply(other)?;
        match kind {
            GateKind::Xnor => product.times_term(ProductTerm::full(self.width)),
            GateKind::Not | GateKind::Xor => Ok(product),
        }
    }

    /// Targeted XOR / XNOR of noise-bit `index` with bit value `bit`.
    pub fn targeted(&self, kind: GateKind, index: usize, bit: bool) -> Result<Self> {
        if index == 0 || index > self.width {
            return Err(InblError::IndexOutOfRange {
                index,
                width: self.width,
            });
        }
        let single = ProductTerm::from_indices([index])?;
        let selected = if bit { single } else { ProductTerm::empty() };
        let factor = match kind {
            GateKind::Xnor => selected.product(single),
            GateKind::Not | GateKind::Xor => selected,
        };
        self.times_term(factor)
    }

    /// Every one of the `2^width` terms with coefficient 1.
    pub fn universe(width: usize) -> Result<Self> {
        if width > MAX_ORACLE_UNIVERSE_BITS {
            return Err(InblError::ScaleExceeded {
                what: "symbolic universe",
                limit: MAX_ORACLE_UNIVERSE_BITS,
                requested: width,
            });
        }
        Ok(Self {
            width,
            terms: (0..1u64 << width).map(|m| (ProductTerm(m), 1)).collect(),
        })
    }

    /// Parses the text format when the width cannot be inferred (e.g. `0`).
    pub fn parse_with_width(text: &str, width: usize) -> Result<Self> {
        if text.trim() == "0" {
            return Ok(Self::new(width));
        }
        let sup: Self = text.parse()?;
        if sup.width != width {
            return Err(InblError::WidthMismatch {
                expected: width,
                found: sup.width,
            });
        }
        Ok(sup)
    }
}

/// True when pairwise-gating `a` with `b` has set-level meaning: at least
/// one input is a single hyperspace vector.
pub fn within_gate_table(a: &SymbolicSuperposition, b: &SymbolicSuperposition) -> bool {
    a.as_vector().is_some() || b.as_vector().is_some()
}

pub fn sym_gate(
    kind: GateKind,
    operand: ProductTerm,
    sup: &SymbolicSuperposition,
) -> Result<SymbolicSuperposition> {
    sup.gate(kind, operand)
}

pub fn sym_universe(width: usize) -> Result<SymbolicSuperposition> {
    SymbolicSuperposition::universe(width)
}

pub fn sym_equal(a: &SymbolicSuperposition, b: &SymbolicSuperposition) -> bool {
    a == b
}

/// `c1*[bits] + c2*[bits] + ...`, masks printed MSB-first over `M` bits,
/// larger strings first. The empty superposition prints as `0`.
impl fmt::Display for SymbolicSuperposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (k, (s, c)) in self.strings().iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*[{s}]")?;
        }
        Ok(())
    }
}

impl FromStr for SymbolicSuperposition {
    type Err = InblError;

    /// Parses at least one term; the width is the bracket length.
    fn from_str(text: &str) -> Result<Self> {
        let mut width = None;
        let mut parsed = Vec::new();
        for piece in text.split('+') {
            let piece = piece.trim();
            let (coeff, bits) = match piece.split_once('*') {
                Some((c, b)) => (
                    c.trim()
                        .parse::<i64>()
                        .map_err(|e| InblError::Parse(format!("bad coefficient `{c}`: {e}")))?,
                    b.trim(),
                ),
                None => (1, piece),
            };
            let inner = bits
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| InblError::Parse(format!("expected `[bits]`, found `{bits}`")))?;
            let s: BitString = inner.parse()?;
            match width {
                None => width = Some(s.width()),
                Some(w) if w != s.width() => {
                    return Err(InblError::WidthMismatch {
                        expected: w,
                        found: s.width(),
                    })
                }
                _ => {}
            }
            parsed.push((s.to_term(), coeff));
        }
        let width = width.ok_or_else(|| InblError::Parse("empty superposition".into()))?;
        Self::from_terms(width, parsed)
    }
}
