//! Exclusive-or sum of products.
//!
//! [`esop_expand`] builds the positive-polarity Reed-Muller form of a
//! formula: an XOR of AND-terms with no complemented literals. Products are
//! distributed, `!g` becomes `1 ^ g`, and `g | h` becomes `g ^ h ^ gh`.
//! Identical terms cancel in pairs as they are accumulated.

use std::collections::{BTreeSet, HashSet};

use crate::bits::BitString;

use super::formula::{Formula, Indexed};

/// One product term. The empty cube is the constant-true product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cube {
    pub positive: BTreeSet<usize>,
    pub negative: BTreeSet<usize>,
}

impl Cube {
    /// Returns `None` when a variable appears in both polarities.
    pub fn new<P, N>(positive: P, negative: N) -> Option<Self>
    where
        P: IntoIterator<Item = usize>,
        N: IntoIterator<Item = usize>,
    {
        let cube = Cube {
            positive: positive.into_iter().collect(),
            negative: negative.into_iter().collect(),
        };
        cube.positive.is_disjoint(&cube.negative).then_some(cube)
    }

    pub fn positive<P: IntoIterator<Item = usize>>(positive: P) -> Self {
        Cube {
            positive: positive.into_iter().collect(),
            negative: BTreeSet::new(),
        }
    }

    pub fn one() -> Self {
        Cube::default()
    }

    pub fn degree(&self) -> usize {
        self.positive.len() + self.negative.len()
    }

    pub fn eval<F: Fn(usize) -> bool>(&self, value: F) -> bool {
        self.positive.iter().all(|&i| value(i)) && self.negative.iter().all(|&i| !value(i))
    }
}

/// XOR of the cubes under an assignment.
pub fn eval_esop<F: Fn(usize) -> bool>(cubes: &[Cube], value: F) -> bool {
    cubes.iter().fold(false, |acc, c| acc ^ c.eval(&value))
}

/// Monomials as bitmasks over variable positions, XOR-accumulated.
#[derive(Debug, Clone, Default)]
struct Anf {
    terms: HashSet<BitString>,
}

impl Anf {
    fn toggle(&mut self, m: BitString) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    fn xor(mut self, other: Anf) -> Anf {
        for m in other.terms {
            self.toggle(m);
        }
        self
    }

    fn mul(&self, other: &Anf) -> Anf {
        let mut out = Anf::default();
        for a in &self.terms {
            for b in &other.terms {
                let mut m = a.clone();
                m.or_assign(b);
                out.toggle(m);
            }
        }
        out
    }
}

fn expand(f: &Indexed, nvars: usize) -> Anf {
    let one = || {
        let mut a = Anf::default();
        a.toggle(BitString::zeros(nvars));
        a
    };
    match f {
        Indexed::Var(i) => {
            let mut a = Anf::default();
            a.toggle(BitString::from_indices(nvars, [*i]));
            a
        }
        Indexed::Const(true) => one(),
        Indexed::Const(false) => Anf::default(),
        Indexed::Not(inner) => expand(inner, nvars).xor(one()),
        Indexed::Xor(ts) => ts
            .iter()
            .fold(Anf::default(), |acc, t| acc.xor(expand(t, nvars))),
        Indexed::And(ts) => ts
            .iter()
            .fold(one(), |acc, t| acc.mul(&expand(t, nvars))),
        Indexed::Or(ts) => ts.iter().fold(Anf::default(), |acc, t| {
            let g = expand(t, nvars);
            let both = acc.mul(&g);
            acc.xor(g).xor(both)
        }),
    }
}

/// Expands `formula` into cubes over the positions of
/// [`Formula::variables`]: cube index `i` names `formula.variables()[i]`.
///
/// Cubes come back ordered by degree, then lexicographically.
pub fn esop_expand(formula: &Formula) -> Vec<Cube> {
    let vars = formula.variables();
    let indexed = formula
        .index(&|name| vars.iter().position(|v| v == name))
        .expect("every variable is listed by variables()");
    let anf = expand(&indexed, vars.len());
    let mut cubes: Vec<Cube> = anf
        .terms
        .into_iter()
        .map(|m| Cube::positive(m.ones()))
        .collect();
    cubes.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    cubes
}
