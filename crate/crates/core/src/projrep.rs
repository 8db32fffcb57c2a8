//! Monomial matrices with root-of-unity weights written additively in
//! `ℚ/ℤ`, the induced representation of `H(A, C, c)`, and the
//! correspondence between projective representations of `A` for `c` and
//! linear representations of `H` that are scalar on `C`.

use std::fmt;

use crate::cocycles::{CochainFunction, Cocycle};
use crate::error::{Error, Result};
use crate::fab::{Coeff, CoeffContext, Elem, FinAbGroup};
use crate::heisenberg::{HElem, HeisenbergGroup};

/// `M e_a = w(a) e_{π(a)}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialMatrix {
    perm: Vec<u32>,
    weights: Vec<Coeff>,
}

impl MonomialMatrix {
    pub fn new(perm: Vec<u32>, weights: Vec<Coeff>) -> Result<MonomialMatrix> {
        let d = perm.len();
        if weights.len() != d {
            return Err(Error::Dimension(format!("{} weights for dimension {d}", weights.len())));
        }
        let mut seen = vec![false; d];
        for &p in &perm {
            if p as usize >= d || std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::Precondition("not a permutation".into()));
            }
        }
        Ok(MonomialMatrix { perm, weights })
    }

    pub fn identity(d: usize, ctx: &CoeffContext) -> MonomialMatrix {
        MonomialMatrix::scalar(d, ctx.zero())
    }

    pub fn scalar(d: usize, t: Coeff) -> MonomialMatrix {
        MonomialMatrix { perm: (0..d as u32).collect(), weights: vec![t; d] }
    }

    pub fn random<R: rand::Rng + ?Sized>(
        d: usize,
        ctx: &CoeffContext,
        denominator: u64,
        rng: &mut R,
    ) -> MonomialMatrix {
        use rand::seq::SliceRandom;
        let mut perm: Vec<u32> = (0..d as u32).collect();
        perm.shuffle(rng);
        let weights = (0..d).map(|_| ctx.random(denominator, rng)).collect();
        MonomialMatrix { perm, weights }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    pub fn weights(&self) -> &[Coeff] {
        &self.weights
    }

    /// `self ∘ other`: weight at `a` is `w'(a) + w(π'(a))`.
    pub fn compose(&self, other: &MonomialMatrix) -> MonomialMatrix {
        debug_assert_eq!(self.dim(), other.dim());
        let perm = other.perm.iter().map(|&p| self.perm[p as usize]).collect();
        let weights = other.weights.iter().zip(&other.perm).map(|(w, &p)| w + &self.weights[p as usize]).collect();
        MonomialMatrix { perm, weights }
    }

    pub fn inverse(&self) -> MonomialMatrix {
        let d = self.dim();
        let mut perm = vec![0u32; d];
        let mut weights = self.weights.clone();
        for a in 0..d {
            let p = self.perm[a] as usize;
            perm[p] = a as u32;
            weights[p] = -&self.weights[a];
        }
        MonomialMatrix { perm, weights }
    }

    /// Multiplies every weight by the scalar `t`.
    pub fn twist(&self, t: &Coeff) -> MonomialMatrix {
        MonomialMatrix { perm: self.perm.clone(), weights: self.weights.iter().map(|w| w + t).collect() }
    }

    /// The scalar, if this is a homothety.
    pub fn as_scalar(&self) -> Option<&Coeff> {
        let first = self.weights.first()?;
        let trivial = self.perm.iter().enumerate().all(|(a, &p)| p as usize == a);
        (trivial && self.weights.iter().all(|w| w == first)).then_some(first)
    }
}

impl fmt::Display for MonomialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> =
            self.perm.iter().zip(&self.weights).enumerate().map(|(a, (p, w))| format!("{a}->{w}@{p}")).collect();
        write!(f, "[{}]", cols.join(" "))
    }
}

/// A representation of (a finite subgroup of) `H` by monomial matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRep {
    group: HeisenbergGroup,
    /// Sorted.
    elements: Vec<HElem>,
    matrices: Vec<MonomialMatrix>,
}

impl LinearRep {
    pub fn new(group: &HeisenbergGroup, pairs: Vec<(HElem, MonomialMatrix)>) -> Result<LinearRep> {
        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let d = pairs.first().map_or(0, |p| p.1.dim());
        if pairs.iter().any(|p| p.1.dim() != d) {
            return Err(Error::Dimension("matrices of different dimensions".into()));
        }
        let (elements, matrices) = pairs.into_iter().unzip();
        Ok(LinearRep { group: group.clone(), elements, matrices })
    }

    pub fn group(&self) -> &HeisenbergGroup {
        &self.group
    }

    pub fn elements(&self) -> &[HElem] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, MonomialMatrix::dim)
    }

    pub fn get(&self, x: &HElem) -> Option<&MonomialMatrix> {
        self.elements.binary_search(x).ok().map(|k| &self.matrices[k])
    }

    /// First pair `(X, Y)` in element order with `σ(XY) ≠ σ(X)σ(Y)`.
    pub fn homomorphism_failure(&self) -> Option<(HElem, HElem)> {
        for (x, mx) in self.elements.iter().zip(&self.matrices) {
            for (y, my) in self.elements.iter().zip(&self.matrices) {
                let ok = match self.get(&self.group.mul(x, y)) {
                    Some(mxy) => *mxy == mx.compose(my),
                    None => false,
                };
                if !ok {
                    return Some((x.clone(), y.clone()));
                }
            }
        }
        None
    }

    pub fn is_homomorphism(&self) -> bool {
        self.homomorphism_failure().is_none()
    }
}

/// `ρ: A → monomial matrices` with `ρ(x) ρ(y) = c(x, y) · ρ(x + y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveRep {
    cocycle: Cocycle,
    /// Indexed by the positions of `A`.
    matrices: Vec<MonomialMatrix>,
}

impl ProjectiveRep {
    /// Unchecked; see [`ProjectiveRep::law_failure`].
    pub fn new(cocycle: &Cocycle, matrices: Vec<MonomialMatrix>) -> Result<ProjectiveRep> {
        if matrices.len() != cocycle.group().order() {
            return Err(Error::Dimension(format!(
                "{} matrices for {} elements",
                matrices.len(),
                cocycle.group().order()
            )));
        }
        let d = matrices.first().map_or(0, MonomialMatrix::dim);
        if matrices.iter().any(|m| m.dim() != d) {
            return Err(Error::Dimension("matrices of different dimensions".into()));
        }
        Ok(ProjectiveRep { cocycle: cocycle.clone(), matrices })
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn group(&self) -> &FinAbGroup {
        self.cocycle.group()
    }

    pub fn get(&self, x: &Elem) -> &MonomialMatrix {
        &self.matrices[self.group().index_of(x)]
    }

    pub fn matrices(&self) -> &[MonomialMatrix] {
        &self.matrices
    }

    /// First pair violating the projective law.
    pub fn law_failure(&self) -> Option<(Elem, Elem)> {
        let a = self.group();
        for x in a.elements() {
            for y in a.elements() {
                let lhs = self.get(&x).compose(self.get(&y));
                let rhs = self.get(&a.add(&x, &y)).twist(&self.cocycle.eval(&x, &y));
                if lhs != rhs {
                    return Some((x, y));
                }
            }
        }
        None
    }
}

/// The representation of `H` on functions on `A`:
/// `π(t, x) e_a = (t + c(x, a)) e_{x + a}`.
pub fn induced_rep(h: &HeisenbergGroup) -> Result<LinearRep> {
    induced_rep_on(h, &h.elements()?)
}

/// [`induced_rep`] restricted to the given elements.
pub fn induced_rep_on(h: &HeisenbergGroup, elements: &[HElem]) -> Result<LinearRep> {
    let pairs = elements.iter().map(|x| (x.clone(), induced_matrix(h, x))).collect();
    LinearRep::new(h, pairs)
}

pub fn induced_matrix(h: &HeisenbergGroup, g: &HElem) -> MonomialMatrix {
    let a = h.group();
    let mut perm = Vec::with_capacity(a.order());
    let mut weights = Vec::with_capacity(a.order());
    for y in a.elements() {
        perm.push(a.index_of(&a.add(&g.x, &y)) as u32);
        weights.push(&g.t + &h.cocycle().eval(&g.x, &y));
    }
    MonomialMatrix { perm, weights }
}

/// `σ'(x) = σ(0, x)`, after checking that `σ(t, 0)` is the scalar `t`.
pub fn projectivize(sigma: &LinearRep) -> Result<ProjectiveRep> {
    let h = sigma.group();
    let d = sigma.dim();
    for (x, m) in sigma.elements.iter().zip(&sigma.matrices) {
        if x.x.is_zero() && *m != MonomialMatrix::scalar(d, x.t.clone()) {
            return Err(Error::Precondition(format!("σ{x} is not the scalar {}", x.t)));
        }
    }
    let matrices = h
        .group()
        .elements()
        .map(|x| {
            sigma
                .get(&h.lift(x.clone()))
                .cloned()
                .ok_or_else(|| Error::Precondition(format!("σ is not defined at (0, {x})")))
        })
        .collect::<Result<Vec<_>>>()?;
    let rho = ProjectiveRep::new(h.cocycle(), matrices)?;
    if let Some((x, y)) = rho.law_failure() {
        return Err(Error::Invariant(format!("projective law fails at ({x}, {y})")));
    }
    Ok(rho)
}

/// `ρ̃(t, x) = t · ρ(x)` on the given elements of `h`.
pub fn linearize(rho: &ProjectiveRep, h: &HeisenbergGroup, elements: &[HElem]) -> Result<LinearRep> {
    if h.cocycle() != rho.cocycle() {
        return Err(Error::Dimension("the representation belongs to another cocycle".into()));
    }
    if let Some((x, y)) = rho.law_failure() {
        return Err(Error::Precondition(format!("ρ(x)ρ(y) ≠ c(x,y)·ρ(x+y) at x={x}, y={y}")));
    }
    let pairs = elements.iter().map(|g| (g.clone(), rho.get(&g.x).twist(&g.t))).collect();
    let sigma = LinearRep::new(h, pairs)?;
    if let Some((x, y)) = sigma.homomorphism_failure() {
        return Err(Error::Invariant(format!("ρ̃ is not multiplicative at ({x}, {y})")));
    }
    Ok(sigma)
}

/// When every `ρ(x)` is a scalar `λ(x)`, returns `q = −λ`, which satisfies
/// `Δq = c`: the scalars obey `λ(x) + λ(y) = c(x, y) + λ(x + y)`.
pub fn scalar_test(rho: &ProjectiveRep) -> Option<CochainFunction> {
    let scalars: Option<Vec<Coeff>> = rho.matrices.iter().map(|m| m.as_scalar().map(|t| -t)).collect();
    let c = rho.cocycle();
    let q = CochainFunction::new(c.group(), c.context(), scalars?).ok()?;
    (q.defect() == *c).then_some(q)
}
