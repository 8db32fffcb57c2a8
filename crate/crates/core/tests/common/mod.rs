#![allow(dead_code)]

use heisenberg_core::cocycles::CochainFunction;
use heisenberg_core::text::parse_cocycle;
use heisenberg_core::{Cocycle, HeisenbergGroup};
use rand::rngs::StdRng;
use rand::SeedableRng;

pub struct Model {
    pub name: &'static str,
    pub h: HeisenbergGroup,
}

/// Bimultiplicative cocycle text, plus a seed for an added random coboundary.
const MODELS: &[(&str, &str, Option<u64>)] = &[
    ("D4-model", "pairing on Z/2xZ/2 coeff Z/2\n(1,2) = 1/2", None),
    ("Q8-model", "pairing on Z/2xZ/2 coeff Z/2\n(1,1) = 1/2\n(1,2) = 1/2\n(2,2) = 1/2", None),
    ("Z/3^2-model", "pairing on Z/3xZ/3 coeff Z/3\n(1,2) = 1/3", None),
    ("degenerate Z/2xZ/4", "pairing on Z/2xZ/4 coeff Z/2\n(1,2) = 1/2", None),
    ("trivial A", "pairing on 0 coeff Z/2", None),
    ("abelian Z/4 carry", "pairing on Z/4 coeff Z/4\n(1,1) = 1/4", Some(1)),
    ("Z/2^3 rank-2 form", "pairing on Z/2^3 coeff Z/2\n(1,2) = 1/2\n(2,3) = 1/2", None),
    ("Z/2^2 over Z/2^2", "pairing on Z/2xZ/2 coeff Z/2xZ/2\n(1,1) = (1/2,0)\n(1,2) = (0,1/2)", None),
    ("twisted Z/2xZ/4", "pairing on Z/2xZ/4 coeff Z/4\n(1,2) = 1/2\n(2,2) = 1/4", Some(7)),
    ("Z/4^2-model", "pairing on Z/4xZ/4 coeff Z/4\n(1,2) = 1/4\n(2,1) = 1/2", None),
    ("Z/3^3-model", "pairing on Z/3^3 coeff Z/3\n(1,2) = 1/3\n(1,3) = 2/3\n(2,3) = 1/3", Some(3)),
    ("Z/2xZ/4^2", "pairing on Z/2xZ/4xZ/4 coeff Z/4\n(1,2) = 1/2\n(2,3) = 1/4\n(3,3) = 1/2", Some(11)),
    ("Z/6^2-model", "pairing on Z/6xZ/6 coeff Z/6\n(1,2) = 1/6", None),
    ("Z/8^2-model", "pairing on Z/8xZ/8 coeff Z/8\n(1,2) = 1/8", Some(5)),
];

/// Finite Heisenberg groups used across the suites, all of order at most 512.
pub fn finite_models() -> Vec<Model> {
    MODELS
        .iter()
        .map(|&(name, text, seed)| {
            let mut c = parse_cocycle(text).expect("model parses");
            if let Some(seed) = seed {
                let mut rng = StdRng::seed_from_u64(seed);
                let g = CochainFunction::random(c.group(), c.context(), c.group().exponent(), &mut rng);
                c = c.add(&g.defect()).expect("same group");
            }
            Model { name, h: HeisenbergGroup::new(c).expect("model is a cocycle") }
        })
        .collect()
}

/// `c` with `δ` added to the single entry `c(x, x)`, `x` the second element.
pub fn mutate(c: &Cocycle) -> Cocycle {
    let a = c.group();
    let n = a.order();
    let delta = c.context().elements().expect("finite context")[1].clone();
    let mut v = c.values();
    v[n + 1] = &v[n + 1] + &delta;
    Cocycle::from_table(a, c.context(), v).expect("values stay in C")
}
