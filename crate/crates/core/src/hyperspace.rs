//! Hyperspace vectors, superpositions and the universe.
//!
//! A bit string selects, for every noise-bit, either the low reference
//! (constant 1) or the high reference `R_i1`; its hyperspace vector is the
//! sample-wise product of the selections. Bit 1 is the leftmost character
//! of the printed string, so `1100` is `R_11 * R_21`.

use std::fmt;
use std::str::FromStr;

use crate::error::{InblError, Result};
use crate::reference::ReferenceSystem;
use crate::symbolic::{ProductTerm, SymbolicSuperposition};
use crate::trace::Trace;

/// An `M`-bit binary number `n`, printed most significant (bit 1) first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    width: usize,
    value: u64,
}

impl BitString {
    pub fn new(width: usize, value: u64) -> Result<Self> {
        if width == 0 || width > 64 {
            return Err(InblError::InvalidDimension(format!(
                "bit string width must be in 1..=64, got {width}"
            )));
        }
        if width < 64 && value >> width != 0 {
            return Err(InblError::Parse(format!(
                "value {value} does not fit in {width} bits"
            )));
        }
        Ok(Self { width, value })
    }

    pub fn zeros(width: usize) -> Result<Self> {
        Self::new(width, 0)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// The number `n` this string denotes.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Value of bit `index`, 1-based from the left.
    pub fn bit(&self, index: usize) -> bool {
        assert!(index >= 1 && index <= self.width, "bit index out of range");
        (self.value >> (self.width - index)) & 1 == 1
    }

    /// Indices (1-based) of the bits set to 1, ascending.
    pub fn high_bits(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.width).filter(|&i| self.bit(i))
    }

    pub fn to_term(&self) -> ProductTerm {
        ProductTerm::from_indices(self.high_bits()).expect("indices within 1..=64")
    }

    pub fn from_term(term: ProductTerm, width: usize) -> Result<Self> {
        let mut value = 0u64;
        for i in term.indices() {
            if i > width {
                return Err(InblError::IndexOutOfRange { index: i, width });
            }
            value |= 1 << (width - i);
        }
        Self::new(width, value)
    }

    /// Parses a CLI operand at a known width.
    ///
    /// * `1100`: a binary literal whose length must equal `width`;
    /// * `0b110`: binary, left-padded with zeros to `width`;
    /// * `0d12`: decimal `n`.
    pub fn parse_with_width(text: &str, width: usize) -> Result<Self> {
        let text = text.trim();
        let value = if let Some(bin) = text.strip_prefix("0b") {
            parse_binary(bin)?
        } else if let Some(dec) = text.strip_prefix("0d") {
            dec.parse::<u64>()
                .map_err(|e| InblError::Parse(format!("bad decimal `{dec}`: {e}")))?
        } else {
            let s: BitString = text.parse()?;
            if s.width != width {
                return Err(InblError::WidthMismatch {
                    expected: width,
                    found: s.width,
                });
            }
            return Ok(s);
        };
        Self::new(width, value)
    }
}

fn parse_binary(digits: &str) -> Result<u64> {
    if digits.is_empty() || digits.len() > 64 || !digits.bytes().all(|b| b == b'0' || b == b'1')
    {
        return Err(InblError::Parse(format!("`{digits}` is not a binary literal")));
    }
    Ok(u64::from_str_radix(digits, 2).expect("validated binary"))
}

impl FromStr for BitString {
    type Err = InblError;

    /// Plain binary literal; the width is the literal's length.
    fn from_str(s: &str) -> Result<Self> {
        let value = parse_binary(s)?;
        Self::new(s.len(), value)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.width {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

fn check_width(sys: &ReferenceSystem, width: usize) -> Result<()> {
    if width != sys.noise_bits() {
        return Err(InblError::WidthMismatch {
            expected: sys.noise_bits(),
            found: width,
        });
    }
    Ok(())
}

fn product_of_highs(sys: &ReferenceSystem, indices: impl Iterator<Item = usize>) -> Result<Trace> {
    let mut acc = sys.low();
    for i in indices {
        acc = acc.multiply(sys.high(i)?)?;
    }
    Ok(acc)
}

/// Hyperspace vector `S_n(t)`: the product of the high references of the
/// string's 1-bits. The all-zeros string yields the constant 1.
pub fn synthesize(sys: &ReferenceSystem, s: &BitString) -> Result<Trace> {
    check_width(sys, s.width())?;
    Ok(product_of_highs(sys, s.high_bits())?.with_label(s.to_string()))
}

/// Sample-wise sum of `traces`, each of which must span `clocks` cycles.
/// An empty list gives the all-zero trace.
pub fn superpose(clocks: usize, traces: &[Trace]) -> Result<Trace> {
    let mut acc = Trace::constant(clocks, 0)?;
    for t in traces {
        acc = acc.add(t)?;
    }
    Ok(acc)
}

/// The superposition of all `2^M` hyperspace vectors, built in factored
/// form as `prod_i (1 + R_i1(t))`. Every sample is 0 or `2^M`.
pub fn universe(sys: &ReferenceSystem) -> Trace {
    let mut acc = sys.low();
    let one = sys.low();
    for h in sys.highs() {
        let factor = one.add(h).expect("references share T");
        acc = acc.multiply(&factor).expect("references share T");
    }
    acc.with_label("U")
}

/// Signal form of a symbolic superposition: `sum_k c_k * S_{mask_k}(t)`.
pub fn realize(sys: &ReferenceSystem, sup: &SymbolicSuperposition) -> Result<Trace> {
    check_width(sys, sup.width())?;
    let mut acc = Trace::constant(sys.clocks(), 0)?;
    for (term, coeff) in sup.terms() {
        let vector = product_of_highs(sys, term.indices())?;
        acc = acc.add(&vector.scaled(coeff))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::generate_reference_system;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn bit_order_is_left_to_right() {
        let a = bs("1100");
        assert_eq!(a.value(), 12);
        assert!(a.bit(1) && a.bit(2) && !a.bit(3) && !a.bit(4));
        assert_eq!(a.high_bits().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(a.to_string(), "1100");
        assert_eq!(BitString::from_term(a.to_term(), 4).unwrap(), a);
    }

    #[test]
    fn operand_forms() {
        assert_eq!(BitString::parse_with_width("1100", 4).unwrap(), bs("1100"));
        assert_eq!(BitString::parse_with_width("0b100", 4).unwrap(), bs("0100"));
        assert_eq!(BitString::parse_with_width("0d12", 4).unwrap(), bs("1100"));
        assert!(matches!(
            BitString::parse_with_width("110", 4),
            Err(InblError::WidthMismatch { .. })
        ));
        assert!(BitString::parse_with_width("0d16", 4).is_err());
        assert!(BitString::parse_with_width("1120", 4).is_err());
        assert!("".parse::<BitString>().is_err());
    }

    #[test]
    fn synthesize_two_bit_vector() {
        let sys = generate_reference_system(4, 128, 3).unwrap();
        let a = synthesize(&sys, &bs("1100")).unwrap();
        let expected = sys.high(1).unwrap().multiply(sys.high(2).unwrap()).unwrap();
        assert_eq!(a, expected);
        assert!(a.is_bipolar());
    }

    #[test]
    fn synthesize_zero_string_is_vacuum() {
        let sys = generate_reference_system(4, 128, 3).unwrap();
        let z = synthesize(&sys, &bs("0000")).unwrap();
        assert!(z.is_constant(1));
        let one_term = SymbolicSuperposition::from_terms(4, [(ProductTerm::empty(), 1)]).unwrap();
        assert_eq!(realize(&sys, &one_term).unwrap(), z);
    }

    #[test]
    fn synthesize_all_ones_against_loop() {
        let sys = generate_reference_system(4, 128, 3).unwrap();
        let got = synthesize(&sys, &bs("1111")).unwrap();
        for t in 0..128 {
            let mut p = 1;
            for i in 1..=4 {
                p *= sys.high(i).unwrap().samples()[t];
            }
            assert_eq!(got.samples()[t], p);
        }
    }

    #[test]
    fn synthesize_width_checked() {
        let sys = generate_reference_system(4, 16, 3).unwrap();
        assert_eq!(
            synthesize(&sys, &bs("110")),
            Err(InblError::WidthMismatch {
                expected: 4,
                found: 3
            })
        );
    }

    #[test]
    fn superpose_cases() {
        let sys = generate_reference_system(4, 128, 9).unwrap();
        let a = synthesize(&sys, &bs("1100")).unwrap();
        assert_eq!(superpose(128, std::slice::from_ref(&a)).unwrap(), a);
        assert!(superpose(128, &[]).unwrap().is_constant(0));

        let doubled = superpose(128, &[a.clone(), a.clone()]).unwrap();
        assert!(doubled.samples().iter().all(|&s| s == 2 || s == -2));

        let mixed = superpose(
            128,
            &[
                a,
                synthesize(&sys, &bs("1010")).unwrap(),
                synthesize(&sys, &bs("1000")).unwrap(),
            ],
        )
        .unwrap();
        assert!(mixed.samples().iter().all(|s| [-3, -1, 1, 3].contains(s)));

        let short = Trace::constant(5, 1).unwrap();
        assert!(superpose(128, &[short]).is_err());
    }

    #[test]
    fn universe_single_bit() {
        let sys = generate_reference_system(1, 64, 4).unwrap();
        let u = universe(&sys);
        let expected = sys.low().add(sys.high(1).unwrap()).unwrap();
        assert_eq!(u, expected);
        assert!(u.samples().iter().all(|&s| s == 0 || s == 2));
    }

    #[test]
    fn universe_equals_explicit_sum() {
        let sys = generate_reference_system(3, 64, 4).unwrap();
        let all: Vec<Trace> = (0..8)
            .map(|n| synthesize(&sys, &BitString::new(3, n).unwrap()).unwrap())
            .collect();
        assert_eq!(universe(&sys), superpose(64, &all).unwrap());
    }

    #[test]
    fn realize_xor_output() {
        let sys = generate_reference_system(4, 128, 5).unwrap();
        let sup: SymbolicSuperposition = "1*[0110] + 1*[0100]".parse().unwrap();
        let r2 = sys.high(2).unwrap();
        let r3 = sys.high(3).unwrap();
        let expected = r2.multiply(r3).unwrap().add(r2).unwrap();
        assert_eq!(realize(&sys, &sup).unwrap(), expected);
        assert!(realize(&sys, &SymbolicSuperposition::new(4))
            .unwrap()
            .is_constant(0));
        assert!(realize(&sys, &SymbolicSuperposition::new(3)).is_err());
    }
}
