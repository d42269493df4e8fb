//! Decoding traces back to strings and superpositions, plus the agreement
//! and universe statistics.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{InblError, Result};
use crate::hyperspace::{universe, BitString};
use crate::reference::ReferenceSystem;
use crate::symbolic::{ProductTerm, SymbolicSuperposition};
use crate::trace::Trace;

/// Largest `M` for brute-force product decoding.
pub const MAX_PRODUCT_DECODE_BITS: usize = 20;
/// Largest `M` for superposition decoding (basis of `2^M` traces).
pub const MAX_SUPERPOSITION_DECODE_BITS: usize = 12;

fn check_scale(what: &'static str, limit: usize, m: usize) -> Result<()> {
    if m > limit {
        return Err(InblError::ScaleExceeded {
            what,
            limit,
            requested: m,
        });
    }
    Ok(())
}

fn check_clocks(sys: &ReferenceSystem, x: &Trace) -> Result<()> {
    if x.len() != sys.clocks() {
        return Err(InblError::LengthMismatch {
            left: sys.clocks(),
            right: x.len(),
        });
    }
    Ok(())
}

/// Value of basis vector `mask` at a clock whose sign pattern is `pattern`.
fn basis_sample(mask: u64, pattern: u64) -> i64 {
    if (mask & pattern).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Finds the unique bit string whose hyperspace vector equals `x` at every
/// clock. Candidates are scanned exhaustively, each rejected at its first
/// mismatching clock.
pub fn decode_product(sys: &ReferenceSystem, x: &Trace) -> Result<BitString> {
    let m = sys.noise_bits();
    check_scale("product decoding", MAX_PRODUCT_DECODE_BITS, m)?;
    check_clocks(sys, x)?;
    if !x.is_bipolar() {
        return Err(InblError::NoMatch);
    }
    let patterns = sys.patterns();
    let matches: Vec<u64> = (0..1u64 << m)
        .filter(|&mask| {
            x.samples()
                .iter()
                .zip(patterns)
                .all(|(&s, &p)| s == basis_sample(mask, p))
        })
        .collect();
    let to_string = |mask| BitString::from_term(ProductTerm::from_mask(mask), m);
    match matches.as_slice() {
        [] => Err(InblError::NoMatch),
        [only] => to_string(*only),
        many => Err(InblError::Ambiguous(
            many.iter().map(|&k| to_string(k)).collect::<Result<_>>()?,
        )),
    }
}

/// In-place Walsh–Hadamard transform: `out[n] = sum_x v[x] * (-1)^|n & x|`.
fn walsh_hadamard(v: &mut [i64]) {
    let mut h = 1;
    while h < v.len() {
        for block in (0..v.len()).step_by(2 * h) {
            for k in block..block + h {
                let (a, b) = (v[k], v[k + h]);
                v[k] = a + b;
                v[k + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Recovers the integer coefficients of `y` over the `2^M` hyperspace
/// vectors.
///
/// Clocks are grouped by their reference sign pattern; each basis vector is
/// a character of that pattern, so correlations against all of them come
/// from one Walsh–Hadamard transform. When every pattern has been observed
/// the coefficients follow exactly. Otherwise the decoder repeatedly takes
/// the basis vector with the strongest residual correlation, rounds the
/// correlation to an integer coefficient and subtracts it. Either way the
/// result is accepted only if it reconstructs `y` exactly.
pub fn decode_superposition(sys: &ReferenceSystem, y: &Trace) -> Result<SymbolicSuperposition> {
    let m = sys.noise_bits();
    check_scale("superposition decoding", MAX_SUPERPOSITION_DECODE_BITS, m)?;
    check_clocks(sys, y)?;

    let size = 1usize << m;
    let patterns = sys.patterns();
    let mut value_at: Vec<Option<i64>> = vec![None; size];
    for (&s, &p) in y.samples().iter().zip(patterns) {
        match value_at[p as usize] {
            None => value_at[p as usize] = Some(s),
            Some(v) if v != s => {
                return Err(InblError::DecodeFailed(
                    "two clocks with identical references carry different amplitudes; \
                     not a combination of hyperspace vectors"
                        .into(),
                ))
            }
            _ => {}
        }
    }

    let mut sup = SymbolicSuperposition::new(m);
    if value_at.iter().all(Option::is_some) {
        let mut coeffs: Vec<i64> = value_at.iter().map(|v| v.unwrap()).collect();
        walsh_hadamard(&mut coeffs);
        for (mask, c) in coeffs.into_iter().enumerate() {
            if c % size as i64 != 0 {
                return Err(InblError::DecodeFailed(format!(
                    "non-integer coefficient {c}/{size} for term {mask:#b}"
                )));
            }
            sup.add_term(ProductTerm::from_mask(mask as u64), c / size as i64)?;
        }
    } else {
        sup = pursue(sys, y)?;
    }

    let rebuilt: Vec<i64> = patterns
        .iter()
        .map(|&p| sup.terms().map(|(t, c)| c * basis_sample(t.mask(), p)).sum())
        .collect();
    if rebuilt != y.samples() {
        return Err(InblError::DecodeFailed(
            "reconstruction does not reproduce the trace".into(),
        ));
    }
    Ok(sup)
}

fn pursue(sys: &ReferenceSystem, y: &Trace) -> Result<SymbolicSuperposition> {
    let m = sys.noise_bits();
    let size = 1usize << m;
    let t = sys.clocks() as i64;
    let patterns = sys.patterns();
    let mut residual = y.samples().to_vec();
    let mut sup = SymbolicSuperposition::new(m);
    let mut sums = vec![0i64; size];

    for _ in 0..size + 64 {
        if residual.iter().all(|&r| r == 0) {
            return Ok(sup);
        }
        sums.iter_mut().for_each(|s| *s = 0);
        for (&r, &p) in residual.iter().zip(patterns) {
            sums[p as usize] += r;
        }
        walsh_hadamard(&mut sums);
        let (mask, &best) = sums
            .iter()
            .enumerate()
            .max_by_key(|(mask, c)| (c.abs(), std::cmp::Reverse(*mask)))
            .expect("non-empty basis");
        // round half away from zero
        let coeff = (2 * best + best.signum() * t) / (2 * t);
        if coeff == 0 {
            break;
        }
        sup.add_term(ProductTerm::from_mask(mask as u64), coeff)?;
        for (r, &p) in residual.iter_mut().zip(patterns) {
            *r -= coeff * basis_sample(mask as u64, p);
        }
    }
    if residual.iter().all(|&r| r == 0) {
        return Ok(sup);
    }
    Err(InblError::DecodeFailed(format!(
        "correlation rounding did not converge within T = {}; window too short",
        sys.clocks()
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    /// Fraction of clocks where the two traces are equal.
    pub rate: f64,
    pub matches: usize,
    #[serde(rename = "T")]
    pub clocks: usize,
    pub full_agreement: bool,
    /// `0.5^T`: chance that two independent distinct product states agree
    /// over the whole window.
    pub theoretical_full_agreement: f64,
}

pub fn theoretical_full_agreement(clocks: usize) -> f64 {
    0.5f64.powf(clocks as f64)
}

pub fn agreement_stats(a: &Trace, b: &Trace) -> Result<AgreementReport> {
    if a.len() != b.len() {
        return Err(InblError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let matches = a
        .samples()
        .iter()
        .zip(b.samples())
        .filter(|(x, y)| x == y)
        .count();
    Ok(AgreementReport {
        rate: matches as f64 / a.len() as f64,
        matches,
        clocks: a.len(),
        full_agreement: matches == a.len(),
        theoretical_full_agreement: theoretical_full_agreement(a.len()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniverseStats {
    #[serde(rename = "M")]
    pub noise_bits: usize,
    #[serde(rename = "T")]
    pub clocks: usize,
    /// Fraction of clocks where the universe amplitude is nonzero.
    pub nonzero_fraction: f64,
    /// `2^-M`
    pub expected_fraction: f64,
    /// Binomial standard error `sqrt(p (1 - p) / T)` at `p = 2^-M`.
    pub standard_error: f64,
    /// Distinct amplitudes observed, ascending.
    pub amplitudes: Vec<i64>,
}

pub fn universe_stats(sys: &ReferenceSystem) -> UniverseStats {
    trace_universe_stats(sys.noise_bits(), &universe(sys))
}

/// Statistics of an already computed universe trace at `noise_bits`.
pub fn trace_universe_stats(noise_bits: usize, u: &Trace) -> UniverseStats {
    let clocks = u.len();
    let amplitudes: BTreeSet<i64> = u.samples().iter().copied().collect();
    let nonzero = u.samples().iter().filter(|&&s| s != 0).count();
    let p = 0.5f64.powi(noise_bits as i32);
    UniverseStats {
        noise_bits,
        clocks,
        nonzero_fraction: nonzero as f64 / clocks as f64,
        expected_fraction: p,
        standard_error: (p * (1.0 - p) / clocks as f64).sqrt(),
        amplitudes: amplitudes.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{apply_not, xor_pair, TargetSet};
    use crate::hyperspace::{realize, superpose, synthesize};
    use crate::reference::generate_reference_system;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn wht_matches_definition() {
        let v = [3i64, -1, 4, 0, 2, 2, -5, 1];
        let mut fast = v;
        walsh_hadamard(&mut fast);
        for n in 0..8u64 {
            let slow: i64 = (0..8u64).map(|x| v[x as usize] * basis_sample(n, x)).sum();
            assert_eq!(fast[n as usize], slow);
        }
    }

    #[test]
    fn decode_round_trip_and_vacuum() {
        let sys = generate_reference_system(4, 128, 10).unwrap();
        let a = synthesize(&sys, &bs("1100")).unwrap();
        assert_eq!(decode_product(&sys, &a).unwrap(), bs("1100"));
        assert_eq!(decode_product(&sys, &sys.low()).unwrap(), bs("0000"));
        let b = synthesize(&sys, &bs("1010")).unwrap();
        assert_eq!(decode_product(&sys, &xor_pair(&a, &b).unwrap()).unwrap(), bs("0110"));
    }

    #[test]
    fn decode_product_rejections() {
        let sys = generate_reference_system(4, 128, 10).unwrap();
        let sum = sys.high(1).unwrap().add(sys.high(2).unwrap()).unwrap();
        assert_eq!(decode_product(&sys, &sum), Err(InblError::NoMatch));
        let negated = sys.high(1).unwrap().scaled(-1);
        assert_eq!(decode_product(&sys, &negated), Err(InblError::NoMatch));
        assert!(matches!(
            decode_product(&sys, &Trace::constant(3, 1).unwrap()),
            Err(InblError::LengthMismatch { .. })
        ));
        let big = generate_reference_system(21, 4, 1).unwrap();
        assert!(matches!(
            decode_product(&big, &big.low()),
            Err(InblError::ScaleExceeded { .. })
        ));
    }

    #[test]
    fn short_window_is_ambiguous() {
        let sys = generate_reference_system(4, 1, 10).unwrap();
        match decode_product(&sys, &sys.low()) {
            Err(InblError::Ambiguous(c)) => {
                // 8 candidates share the parity, or all 16 if every reference is +1
                assert!(c.len() == 8 || c.len() == 16);
                assert!(c.contains(&bs("0000")));
            }
            other => panic!("expected ambiguity, got {other:?}"),
        }
    }

    #[test]
    fn decode_superposition_of_three() {
        let sys = generate_reference_system(4, 128, 10).unwrap();
        let y = superpose(
            128,
            &["1100", "1010", "1000"].map(|s| synthesize(&sys, &bs(s)).unwrap()),
        )
        .unwrap();
        let out = apply_not(&sys, &"1,3".parse::<TargetSet>().unwrap(), &y).unwrap();
        let decoded = decode_superposition(&sys, &out).unwrap();
        let expected: SymbolicSuperposition = "[0110] + [0000] + [0010]".parse().unwrap();
        assert_eq!(decoded, expected);
    }

    #[test]
    fn decode_superposition_universe_and_zero() {
        let sys = generate_reference_system(3, 128, 10).unwrap();
        let decoded = decode_superposition(&sys, &universe(&sys)).unwrap();
        assert_eq!(decoded, SymbolicSuperposition::universe(3).unwrap());
        let zero = Trace::constant(128, 0).unwrap();
        assert!(decode_superposition(&sys, &zero).unwrap().is_empty());
    }

    #[test]
    fn decode_superposition_failures() {
        let sys = generate_reference_system(3, 128, 10).unwrap();
        let odd = sys.low().scaled(3).add(&Trace::constant(128, 0).unwrap()).unwrap();
        let mut samples = odd.into_samples();
        samples[0] += 1;
        let broken = Trace::new(samples).unwrap();
        assert!(matches!(
            decode_superposition(&sys, &broken),
            Err(InblError::DecodeFailed(_))
        ));
        let big = generate_reference_system(13, 8, 1).unwrap();
        assert!(matches!(
            decode_superposition(&big, &big.low()),
            Err(InblError::ScaleExceeded { .. })
        ));
    }

    #[test]
    fn pursuit_path_recovers_sparse_superposition() {
        // M = 8 with T = 600 leaves most of the 256 sign patterns unseen
        let sys = generate_reference_system(8, 600, 31).unwrap();
        let sup: SymbolicSuperposition =
            "2*[10110001] + -1*[00000000] + 3*[01010101] + 1*[11111111]".parse().unwrap();
        let y = realize(&sys, &sup).unwrap();
        assert_eq!(decode_superposition(&sys, &y).unwrap(), sup);
    }

    #[test]
    fn agreement_cases() {
        let sys = generate_reference_system(4, 100_000, 10).unwrap();
        let a = synthesize(&sys, &bs("1100")).unwrap();
        let same = agreement_stats(&a, &a).unwrap();
        assert_eq!(same.rate, 1.0);
        assert!(same.full_agreement);

        let b = synthesize(&sys, &bs("1010")).unwrap();
        let r = agreement_stats(&a, &b).unwrap();
        let band = 4.0 * (0.25f64 / 100_000.0).sqrt();
        assert!((r.rate - 0.5).abs() <= band, "rate {}", r.rate);
        assert!(!r.full_agreement);

        let p83 = theoretical_full_agreement(83);
        assert!((p83 - 1.0339757656912846e-25).abs() < 1e-37);
        assert!(agreement_stats(&a, &Trace::constant(5, 1).unwrap()).is_err());
    }

    #[test]
    fn universe_stats_cases() {
        let sys = generate_reference_system(1, 10_000, 3).unwrap();
        let s = universe_stats(&sys);
        assert!(s.amplitudes.iter().all(|a| [0, 2].contains(a)));
        assert!((s.nonzero_fraction - 0.5).abs() <= 3.0 * s.standard_error);

        let sys = generate_reference_system(6, 100_000, 3).unwrap();
        let s = universe_stats(&sys);
        assert!(s.amplitudes.iter().all(|a| [0, 64].contains(a)));
        assert_eq!(s.expected_fraction, 0.015625);
        assert!((s.nonzero_fraction - 0.015625).abs() <= 3.0 * s.standard_error);
    }

    #[test]
    fn universe_stats_json_shape() {
        let sys = generate_reference_system(2, 16, 3).unwrap();
        let v = serde_json::to_value(universe_stats(&sys)).unwrap();
        assert!(v["nonzero_fraction"].is_f64());
        assert!(v["amplitudes"].is_array());
        let a = serde_json::to_value(agreement_stats(&sys.low(), &sys.low()).unwrap()).unwrap();
        assert_eq!(a["T"], 16);
        assert_eq!(a["rate"], 1.0);
        assert!(a["theoretical_full_agreement"].is_f64());
    }
}
