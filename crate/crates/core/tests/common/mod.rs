//! Random gate programs, run twice: through the signal engine and through
//! the symbolic oracle.

#![allow(dead_code)]

use inbl::gates::{apply_not, xnor_pair, xnor_targeted, xor_pair, xor_targeted, TargetSet};
use inbl::hyperspace::{superpose, synthesize};
use inbl::{BitString, GateKind, ProductTerm, ReferenceSystem, SymbolicSuperposition, Trace};
use rand::seq::IteratorRandom;
use rand::Rng;

/// Upper bound on `sum |c|` of any intermediate state, keeping every sample
/// far from i64 overflow.
const MAX_L1: i64 = 1 << 20;

#[derive(Debug, Clone)]
pub enum Step {
    Not(Vec<usize>),
    XorPair(SymbolicSuperposition),
    XnorPair(SymbolicSuperposition),
    XorTargeted(usize, bool),
    XnorTargeted(usize, bool),
}

#[derive(Debug, Clone)]
pub struct Program {
    pub width: usize,
    pub input: SymbolicSuperposition,
    pub steps: Vec<Step>,
}

pub fn random_superposition<R: Rng>(rng: &mut R, width: usize, max_terms: usize) -> SymbolicSuperposition {
    loop {
        let mut sup = SymbolicSuperposition::new(width);
        for _ in 0..rng.random_range(1..=max_terms) {
            let mask = rng.random_range(0..1u64 << width);
            let coeff = if rng.random_bool(0.7) {
                1
            } else {
                *[-2i64, -1, 2, 3].iter().choose(rng).unwrap()
            };
            sup.add_term(ProductTerm::from_mask(mask), coeff).unwrap();
        }
        if !sup.is_empty() {
            return sup;
        }
    }
}

pub fn random_vector<R: Rng>(rng: &mut R, width: usize) -> SymbolicSuperposition {
    let mask = rng.random_range(0..1u64 << width);
    SymbolicSuperposition::from_terms(width, [(ProductTerm::from_mask(mask), 1)]).unwrap()
}

pub fn random_program<R: Rng>(rng: &mut R, width: usize, max_len: usize) -> Program {
    let input = if rng.random_bool(0.5) {
        random_vector(rng, width)
    } else {
        random_superposition(rng, width, 6)
    };
    let mut bound = input.l1_norm();
    let mut steps = Vec::new();
    for _ in 0..rng.random_range(1..=max_len) {
        let step = match rng.random_range(0..5) {
            0 => {
                let count = rng.random_range(1..=width);
                Step::Not((1..=width).choose_multiple(rng, count))
            }
            k @ (1 | 2) => {
                let mut operand = if rng.random_bool(0.4) {
                    random_superposition(rng, width, 6)
                } else {
                    random_vector(rng, width)
                };
                if bound.saturating_mul(operand.l1_norm()) > MAX_L1 {
                    operand = random_vector(rng, width);
                }
                bound *= operand.l1_norm();
                if k == 1 {
                    Step::XorPair(operand)
                } else {
                    Step::XnorPair(operand)
                }
            }
            3 => Step::XorTargeted(rng.random_range(1..=width), rng.random_bool(0.5)),
            _ => Step::XnorTargeted(rng.random_range(1..=width), rng.random_bool(0.5)),
        };
        steps.push(step);
    }
    Program {
        width,
        input,
        steps,
    }
}

/// Builds an operand trace from its terms by synthesis and summation only.
pub fn build_trace(sys: &ReferenceSystem, sup: &SymbolicSuperposition) -> Trace {
    let parts: Vec<Trace> = sup
        .terms()
        .map(|(t, c)| {
            let s = BitString::from_term(t, sup.width()).unwrap();
            synthesize(sys, &s).unwrap().scaled(c)
        })
        .collect();
    superpose(sys.clocks(), &parts).unwrap()
}

pub fn run_numeric(sys: &ReferenceSystem, program: &Program) -> Trace {
    let mut state = build_trace(sys, &program.input);
    for step in &program.steps {
        state = match step {
            Step::Not(targets) => {
                apply_not(sys, &TargetSet::new(targets.iter().copied()).unwrap(), &state).unwrap()
            }
            Step::XorPair(op) => xor_pair(&state, &build_trace(sys, op)).unwrap(),
            Step::XnorPair(op) => xnor_pair(sys, &state, &build_trace(sys, op)).unwrap(),
            Step::XorTargeted(i, p) => xor_targeted(sys, &state, *i, *p).unwrap(),
            Step::XnorTargeted(i, p) => xnor_targeted(sys, &state, *i, *p).unwrap(),
        };
    }
    state
}

pub fn run_symbolic(program: &Program) -> SymbolicSuperposition {
    let mut state = program.input.clone();
    for step in &program.steps {
        state = match step {
            Step::Not(targets) => state
                .gate(
                    GateKind::Not,
                    ProductTerm::from_indices(targets.iter().copied()).unwrap(),
                )
                .unwrap(),
            Step::XorPair(op) => state.pairwise(GateKind::Xor, op).unwrap(),
            Step::XnorPair(op) => state.pairwise(GateKind::Xnor, op).unwrap(),
            Step::XorTargeted(i, p) => state.targeted(GateKind::Xor, *i, *p).unwrap(),
            Step::XnorTargeted(i, p) => state.targeted(GateKind::Xnor, *i, *p).unwrap(),
        };
    }
    state
}

/// Bitwise XNOR of two `width`-bit numbers.
pub fn xnor_bits(a: u64, b: u64, width: usize) -> u64 {
    !(a ^ b) & ((1u64 << width) - 1)
}
