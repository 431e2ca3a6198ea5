#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rsvp_core::compilers::Formula;
use rsvp_core::{BitString, Gate, Program, WordArray};

pub fn random_bits<R: Rng>(rng: &mut R, width: usize) -> BitString {
    let mut b = BitString::zeros(width);
    for i in 0..width {
        b.set(i, rng.gen());
    }
    b
}

pub fn random_array<R: Rng>(rng: &mut R, width: usize, len: usize) -> WordArray {
    WordArray::new((0..len).map(|_| random_bits(rng, width)), width).unwrap()
}

/// A gate with at least one target; each other bit is a control with
/// probability `p_control`.
pub fn random_gate<R: Rng>(rng: &mut R, width: usize, p_control: f64) -> Gate {
    let mut idx: Vec<usize> = (0..width).collect();
    idx.shuffle(rng);
    let targets = 1 + rng.gen_range(0..width.min(3));
    let (t, rest) = idx.split_at(targets);
    let controls: Vec<usize> = rest.iter().copied().filter(|_| rng.gen_bool(p_control)).collect();
    Gate::new(controls, t.iter().copied()).unwrap()
}

pub fn random_program<R: Rng>(rng: &mut R, width: usize, max_gates: usize) -> Program {
    let count = rng.gen_range(0..=max_gates);
    Program::with_gates(width, (0..count).map(|_| random_gate(rng, width, 0.4)).collect())
}

pub fn var_name(i: usize) -> String {
    format!("x{i}")
}

/// Random expression tree over `x0..x{n-1}`.
pub fn random_formula<R: Rng>(rng: &mut R, n: usize, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return if n == 0 || rng.gen_bool(0.05) {
            Formula::Const(rng.gen())
        } else {
            Formula::var(var_name(rng.gen_range(0..n)))
        };
    }
    let op = rng.gen_range(0..4);
    if op == 0 {
        return Formula::not(random_formula(rng, n, depth - 1));
    }
    let arity = rng.gen_range(2..=3);
    let kids: Vec<Formula> = (0..arity).map(|_| random_formula(rng, n, depth - 1)).collect();
    match op {
        1 => Formula::And(kids),
        2 => Formula::Or(kids),
        _ => Formula::Xor(kids),
    }
}

pub fn patterns(a: &WordArray) -> Vec<BitString> {
    a.patterns().cloned().collect()
}
