//! The extension group `H(A, C, c)`: the set `C × A` with
//! `(t, x)(t', y) = (t + t' + c(x, y), x + y)`.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use crate::cocycles::{CochainFunction, Cocycle};
use crate::error::{Error, Result};
use crate::fab::{Coeff, CoeffContext, Elem, FinAbGroup};
use crate::grouprec::FiniteGroup;
use crate::pairings::SymplecticPairing;

/// Largest group for which exhaustive all-pairs checks run by default.
pub const EXHAUSTIVE_LIMIT: usize = 512;

/// Largest group exported as a Cayley table.
pub const CAYLEY_LIMIT: usize = 4096;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HElem {
    pub t: Coeff,
    pub x: Elem,
}

impl HElem {
    pub fn new(t: Coeff, x: Elem) -> HElem {
        HElem { t, x }
    }
}

impl fmt::Display for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t, self.x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergGroup {
    cocycle: Cocycle,
    omega: SymplecticPairing,
}

impl HeisenbergGroup {
    /// Verifies the cocycle exhaustively before accepting it.
    pub fn new(cocycle: Cocycle) -> Result<HeisenbergGroup> {
        cocycle.verify().map_err(|v| Error::NotACocycle(v.to_string()))?;
        HeisenbergGroup::new_unchecked(cocycle)
    }

    /// Skips the cocycle check; the resulting "group" may fail associativity.
    pub fn new_unchecked(cocycle: Cocycle) -> Result<HeisenbergGroup> {
        let omega = match cocycle.omega() {
            Ok(w) => w,
            Err(_) => SymplecticPairing::zero(cocycle.group(), cocycle.context()),
        };
        Ok(HeisenbergGroup { cocycle, omega })
    }

    pub fn group(&self) -> &FinAbGroup {
        self.cocycle.group()
    }

    pub fn context(&self) -> &CoeffContext {
        self.cocycle.context()
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn omega(&self) -> &SymplecticPairing {
        &self.omega
    }

    pub fn is_finite(&self) -> bool {
        self.context().is_finite()
    }

    pub fn order(&self) -> Option<u128> {
        self.context().order().map(|c| c * self.group().order() as u128)
    }

    pub fn identity(&self) -> HElem {
        HElem::new(self.context().zero(), self.group().zero())
    }

    /// Validated element.
    pub fn elem(&self, t: Coeff, x: Elem) -> Result<HElem> {
        self.context().check(&t)?;
        self.group().check(&x)?;
        Ok(HElem::new(t, x))
    }

    pub fn central(&self, t: Coeff) -> HElem {
        HElem::new(t, self.group().zero())
    }

    pub fn lift(&self, x: Elem) -> HElem {
        HElem::new(self.context().zero(), x)
    }

    pub fn mul(&self, a: &HElem, b: &HElem) -> HElem {
        let mut t = &a.t + &b.t;
        t.add_assign_ref(&self.cocycle.eval(&a.x, &b.x));
        HElem::new(t, self.group().add(&a.x, &b.x))
    }

    /// `(−t − c(x, −x), −x)`.
    pub fn inv(&self, a: &HElem) -> HElem {
        let nx = self.group().neg(&a.x);
        let t = -&(&a.t + &self.cocycle.eval(&a.x, &nx));
        HElem::new(t, nx)
    }

    /// `X Y X⁻¹ Y⁻¹`, computed in the group law.
    pub fn commutator(&self, a: &HElem, b: &HElem) -> HElem {
        let ab = self.mul(a, b);
        let ab_ai = self.mul(&ab, &self.inv(a));
        self.mul(&ab_ai, &self.inv(b))
    }

    pub fn pow(&self, a: &HElem, k: u64) -> HElem {
        (0..k).fold(self.identity(), |acc, _| self.mul(&acc, a))
    }

    /// All elements of a finite `H`, ordered lexicographically by `(t, x)`.
    pub fn elements(&self) -> Result<Vec<HElem>> {
        let ts = self.context().elements()?;
        Ok(self.product_with(&ts))
    }

    /// `C[d] × A`, a finite subgroup whenever every cocycle value lies in `C[d]`.
    pub fn snapshot(&self, d: u64) -> Result<Vec<HElem>> {
        let dens = self.cocycle.denominators();
        if let Some(bad) = dens.iter().find(|&&m| !d.is_multiple_of(m)) {
            return Err(Error::Precondition(format!(
                "cocycle values need denominator {bad}, which does not divide {d}"
            )));
        }
        let ts = self.context().torsion_elements(d);
        Ok(self.product_with(&ts))
    }

    /// The smallest snapshot containing every cocycle value.
    pub fn minimal_snapshot(&self) -> Result<Vec<HElem>> {
        let d = self.cocycle.denominators().iter().fold(1u64, |a, b| a.lcm(b));
        self.snapshot(d)
    }

    fn product_with(&self, ts: &[Coeff]) -> Vec<HElem> {
        let xs: Vec<Elem> = self.group().elements().collect();
        ts.iter().flat_map(|t| xs.iter().map(move |x| HElem::new(t.clone(), x.clone()))).collect()
    }

    /// Position in [`HeisenbergGroup::elements`].
    pub fn index_of(&self, a: &HElem) -> Result<usize> {
        Ok(self.context().index_of(&a.t)? * self.group().order() + self.group().index_of(&a.x))
    }

    /// `C × ker ω̂`.
    pub fn center(&self) -> Center {
        let kernel = self.omega.adjoint_kernel();
        let elements = self.context().elements().ok().map(|ts| {
            let mut out: Vec<HElem> =
                ts.iter().flat_map(|t| kernel.iter().map(move |x| HElem::new(t.clone(), x.clone()))).collect();
            out.sort();
            out
        });
        Center { context: self.context().clone(), kernel, elements }
    }

    /// Elements commuting with everything in `elements`, by direct comparison.
    pub fn center_brute(&self, elements: &[HElem]) -> Vec<HElem> {
        elements.iter().filter(|z| elements.iter().all(|w| self.mul(z, w) == self.mul(w, z))).cloned().collect()
    }

    /// `C_ω × 0`, where `C_ω` is generated by the values of `ω`.
    pub fn commutator_subgroup(&self) -> Vec<HElem> {
        let r = self.group().rank();
        let gens: Vec<Coeff> =
            (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).map(|(i, j)| self.omega.entry(i, j).clone()).collect();
        let mut out: Vec<HElem> =
            generated_subgroup(&self.context().zero(), &gens).into_iter().map(|t| self.central(t)).collect();
        out.sort();
        out
    }

    /// Subgroup generated by all commutators of pairs from `elements`.
    pub fn commutator_subgroup_brute(&self, elements: &[HElem]) -> Vec<HElem> {
        let mut comms = BTreeSet::new();
        for a in elements {
            for b in elements {
                comms.insert(self.commutator(a, b));
            }
        }
        let gens: Vec<HElem> = comms.into_iter().collect();
        let mut seen: BTreeSet<HElem> = BTreeSet::new();
        seen.insert(self.identity());
        let mut frontier = vec![self.identity()];
        while let Some(g) = frontier.pop() {
            for h in &gens {
                let p = self.mul(&g, h);
                if seen.insert(p.clone()) {
                    frontier.push(p);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// 0 for the trivial group, 1 when abelian, 2 otherwise.
    pub fn nilpotency_class(&self) -> u32 {
        if self.order() == Some(1) {
            0
        } else if self.omega.is_zero() {
            1
        } else {
            2
        }
    }

    /// Multiplication table of a finite `H` in the order of [`HeisenbergGroup::elements`].
    pub fn cayley_table(&self) -> Result<FiniteGroup> {
        let els = self.elements()?;
        self.cayley_table_of(&els)
    }

    /// Multiplication table of a finite subgroup given by its elements; the
    /// first element must be the identity.
    pub fn cayley_table_of(&self, els: &[HElem]) -> Result<FiniteGroup> {
        let n = els.len();
        if n > CAYLEY_LIMIT {
            return Err(Error::TooLarge(format!("{n} elements exceeds the Cayley table limit {CAYLEY_LIMIT}")));
        }
        let mut sorted: Vec<(&HElem, usize)> = els.iter().zip(0..).collect();
        sorted.sort();
        let find = |h: &HElem| -> Result<usize> {
            sorted
                .binary_search_by(|(e, _)| (*e).cmp(h))
                .map(|k| sorted[k].1)
                .map_err(|_| Error::Precondition(format!("product {h} leaves the element list")))
        };
        let identity = find(&self.identity())?;
        let mut table = Vec::with_capacity(n * n);
        for a in els {
            for b in els {
                table.push(find(&self.mul(a, b))? as u32);
            }
        }
        FiniteGroup::new(n, identity, table)
    }

    /// Pushes the cocycle through a coefficient embedding.
    pub fn pushforward(&self, embedding: &CoeffEmbedding) -> Result<HeisenbergGroup> {
        if embedding.source() != self.context() {
            return Err(Error::Dimension(format!(
                "embedding starts at {} but the group has coefficients {}",
                embedding.source(),
                self.context()
            )));
        }
        let c = self.cocycle.map_coeffs(embedding.target(), |v| embedding.apply(v))?;
        HeisenbergGroup::new_unchecked(c)
    }
}

impl fmt::Display for HeisenbergGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({}, {})", self.group(), self.context())
    }
}

/// Subgroup of a coefficient group generated by `gens`.
pub fn generated_subgroup(zero: &Coeff, gens: &[Coeff]) -> Vec<Coeff> {
    let mut seen: BTreeSet<Coeff> = BTreeSet::new();
    seen.insert(zero.clone());
    let mut frontier = vec![zero.clone()];
    while let Some(v) = frontier.pop() {
        for g in gens {
            let w = &v + g;
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen.into_iter().collect()
}

/// `C × K` with `K = ker ω̂`; elements are listed only for finite `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Center {
    pub context: CoeffContext,
    pub kernel: Vec<Elem>,
    pub elements: Option<Vec<HElem>>,
}

impl Center {
    pub fn order(&self) -> Option<u128> {
        self.context.order().map(|c| c * self.kernel.len() as u128)
    }
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.kernel.iter().map(Elem::to_string).collect();
        write!(f, "{} x {{{}}}", self.context, ks.join(", "))
    }
}

/// A map `a ↦ s(a)` with `s(a)` projecting to `a` and `s(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    values: Vec<HElem>,
}

impl Section {
    pub fn new(h: &HeisenbergGroup, values: Vec<HElem>) -> Result<Section> {
        if values.len() != h.group().order() {
            return Err(Error::Dimension(format!(
                "section has {} values, expected {}",
                values.len(),
                h.group().order()
            )));
        }
        for (k, v) in values.iter().enumerate() {
            let a = h.group().elem_at(k);
            if v.x != a {
                return Err(Error::Precondition(format!("s({a}) = {v} does not project to {a}")));
            }
            h.context().check(&v.t)?;
        }
        if values[0] != h.identity() {
            return Err(Error::Precondition(format!("s(0) = {} is not the identity", values[0])));
        }
        Ok(Section { values })
    }

    /// `a ↦ (0, a)`.
    pub fn standard(h: &HeisenbergGroup) -> Section {
        Section { values: h.group().elements().map(|x| h.lift(x)).collect() }
    }

    /// `a ↦ (g(a), a)`.
    pub fn shifted(h: &HeisenbergGroup, g: &CochainFunction) -> Result<Section> {
        let values = h.group().elements().zip(g.values()).map(|(x, t)| HElem::new(t.clone(), x)).collect();
        Section::new(h, values)
    }

    pub fn get(&self, index: usize) -> &HElem {
        &self.values[index]
    }

    pub fn values(&self) -> &[HElem] {
        &self.values
    }
}

/// The cocycle `c_s(x, y)` defined by `s(x) s(y) = (c_s(x, y), 0) · s(x + y)`.
///
/// For `s(a) = (g(a), a)` this is `c − Δg`.
pub fn defect_of_section(h: &HeisenbergGroup, s: &Section) -> Result<Cocycle> {
    let a = h.group();
    let n = a.order();
    let inverses: Vec<HElem> = s.values.iter().map(|v| h.inv(v)).collect();
    let mut values = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let xy = a.index_of(&a.add(&s.values[x].x, &s.values[y].x));
            let p = h.mul(&h.mul(&s.values[x], &s.values[y]), &inverses[xy]);
            if !p.x.is_zero() {
                return Err(Error::Invariant(format!("section defect {p} is not central")));
            }
            values.push(p.t);
        }
    }
    Cocycle::from_table(a, h.context(), values)
}

/// `φ(t, a) = (t + f(a), a)` from `H_c` to `H_c′`, where `Δf = c′ − c`.
#[derive(Clone, Debug)]
pub struct Equivalence {
    source: HeisenbergGroup,
    target: HeisenbergGroup,
    f: CochainFunction,
}

impl Equivalence {
    pub fn source(&self) -> &HeisenbergGroup {
        &self.source
    }

    pub fn target(&self) -> &HeisenbergGroup {
        &self.target
    }

    pub fn function(&self) -> &CochainFunction {
        &self.f
    }

    pub fn apply(&self, a: &HElem) -> HElem {
        HElem::new(&a.t + self.f.get(&a.x), a.x.clone())
    }

    pub fn apply_inverse(&self, a: &HElem) -> HElem {
        HElem::new(&a.t - self.f.get(&a.x), a.x.clone())
    }

    /// Homomorphism on all pairs of `elements`, identity on the central
    /// elements, identity on `A`, and inverse round trip.
    pub fn verify_on(&self, elements: &[HElem]) -> Result<()> {
        for a in elements {
            let fa = self.apply(a);
            if fa.x != a.x {
                return Err(Error::Invariant(format!("φ{a} = {fa} changes the A-component")));
            }
            if a.x.is_zero() && fa != *a {
                return Err(Error::Invariant(format!("φ moves the central element {a} to {fa}")));
            }
            if self.apply_inverse(&fa) != *a {
                return Err(Error::Invariant(format!("φ is not invertible at {a}")));
            }
            for b in elements {
                let lhs = self.apply(&self.source.mul(a, b));
                let rhs = self.target.mul(&fa, &self.apply(b));
                if lhs != rhs {
                    return Err(Error::Invariant(format!("φ({a}·{b}) = {lhs} but φ{a}·φ{b} = {rhs}")));
                }
            }
        }
        Ok(())
    }

    /// Checks the homomorphism property on the lifts `(0, a)`, which
    /// together with `C` generate `H`; and on a full snapshot when small.
    pub fn verify(&self) -> Result<()> {
        let lifts: Vec<HElem> = self.source.group().elements().map(|x| self.source.lift(x)).collect();
        self.verify_on(&lifts)?;
        let d = self
            .source
            .cocycle()
            .denominators()
            .into_iter()
            .chain(self.target.cocycle().denominators())
            .chain(self.f.values().iter().flat_map(|v| v.coords().iter().map(|q| q.den())).collect::<Vec<_>>())
            .fold(1u64, |a, b| a.lcm(&b));
        if let Ok(snap) = self.source.snapshot(d) {
            if snap.len() <= EXHAUSTIVE_LIMIT {
                self.verify_on(&snap)?;
            }
        }
        Ok(())
    }
}

/// Builds and verifies `φ(t, a) = (t + f(a), a)`; requires `Δf = c′ − c`.
pub fn equivalence_iso(h: &HeisenbergGroup, h2: &HeisenbergGroup, f: &CochainFunction) -> Result<Equivalence> {
    if h.group() != h2.group() || h.context() != h2.context() {
        return Err(Error::Dimension(format!("{h} and {h2} differ")));
    }
    let need = h2.cocycle().sub(h.cocycle())?;
    let have = f.defect();
    let a = h.group();
    for x in a.elements() {
        for y in a.elements() {
            let (l, r) = (have.eval(&x, &y), need.eval(&x, &y));
            if l != r {
                return Err(Error::Precondition(format!("Δf({x}, {y}) = {l} but c′ − c = {r}")));
            }
        }
    }
    let eq = Equivalence { source: h.clone(), target: h2.clone(), f: f.clone() };
    eq.verify()?;
    Ok(eq)
}

/// An injective homomorphism of coefficient groups, given by the images of
/// the standard generators `1/m_j` of a finite source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffEmbedding {
    source: CoeffContext,
    target: CoeffContext,
    images: Option<Vec<Coeff>>,
}

impl CoeffEmbedding {
    /// The inclusion into the divisible hull; values are unchanged.
    pub fn inclusion(source: &CoeffContext) -> CoeffEmbedding {
        CoeffEmbedding { source: source.clone(), target: source.divisible_hull(), images: None }
    }

    pub fn new(source: &CoeffContext, target: &CoeffContext, images: Vec<Coeff>) -> Result<CoeffEmbedding> {
        let ms =
            source.moduli().ok_or_else(|| Error::Precondition("explicit embeddings need a finite source".into()))?;
        if images.len() != ms.len() {
            return Err(Error::Dimension(format!("{} images for {} generators", images.len(), ms.len())));
        }
        for (v, &m) in images.iter().zip(ms) {
            target.check(v)?;
            if m % v.order() != 0 {
                return Err(Error::Precondition(format!("image {v} has order {} not dividing {m}", v.order())));
            }
        }
        let emb = CoeffEmbedding { source: source.clone(), target: target.clone(), images: Some(images) };
        let els = source.elements()?;
        let mut seen = BTreeSet::new();
        for v in &els {
            let w = emb.apply(v);
            if !seen.insert(w.clone()) {
                return Err(Error::NotInjective(format!("{v} and another element both map to {w}")));
            }
        }
        Ok(emb)
    }

    pub fn source(&self) -> &CoeffContext {
        &self.source
    }

    pub fn target(&self) -> &CoeffContext {
        &self.target
    }

    pub fn apply(&self, v: &Coeff) -> Coeff {
        match (&self.images, self.source.moduli()) {
            (Some(images), Some(ms)) => {
                let mut out = self.target.zero();
                for ((q, img), &m) in v.coords().iter().zip(images).zip(ms) {
                    let k = q.num() * (m / q.den());
                    out.add_assign_ref(&img.scale(k as i64));
                }
                out
            }
            _ => v.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycles::{cohomologous, ClassWitness};
    use crate::fab::Qz;
    use crate::pairings::Pairing;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn c(n: i64, d: u64) -> Coeff {
        Coeff::scalar(Qz::new(n, d))
    }

    fn grp(m: &[u64]) -> FinAbGroup {
        FinAbGroup::new(m.iter().copied()).unwrap()
    }

    fn fin(m: &[u64]) -> CoeffContext {
        CoeffContext::finite(m.iter().copied()).unwrap()
    }

    fn model(m: &[u64], ctx: &CoeffContext, entries: &[(usize, usize, Coeff)]) -> HeisenbergGroup {
        let a = grp(m);
        let p = Pairing::from_entries(&a, ctx, entries.iter().cloned()).unwrap();
        HeisenbergGroup::new(Cocycle::from_pairing(p)).unwrap()
    }

    fn d4() -> HeisenbergGroup {
        model(&[2, 2], &fin(&[2]), &[(0, 1, c(1, 2))])
    }

    fn q8() -> HeisenbergGroup {
        model(&[2, 2], &fin(&[2]), &[(0, 0, c(1, 2)), (1, 1, c(1, 2)), (0, 1, c(1, 2))])
    }

    fn el(h: &HeisenbergGroup, t: Coeff, x: &[i64]) -> HElem {
        HElem::new(t, h.group().elem(x).unwrap())
    }

    fn test_groups() -> Vec<HeisenbergGroup> {
        vec![
            d4(),
            q8(),
            model(&[3, 3], &fin(&[3]), &[(0, 1, c(1, 3))]),
            model(&[2, 4], &fin(&[4]), &[(0, 1, c(1, 2))]),
            model(&[4], &fin(&[4]), &[(0, 0, c(1, 4))]),
            model(&[2, 2, 2], &fin(&[2]), &[(0, 1, c(1, 2)), (1, 2, c(1, 2))]),
            model(&[5], &CoeffContext::trivial(), &[]),
        ]
    }

    #[test]
    fn multiplication_examples() {
        let h = d4();
        let p = h.mul(&el(&h, c(0, 1), &[1, 0]), &el(&h, c(0, 1), &[0, 1]));
        assert_eq!(p, el(&h, c(1, 2), &[1, 1]));
        let e = h.identity();
        for x in h.elements().unwrap() {
            assert_eq!(h.mul(&e, &x), x);
            assert_eq!(h.mul(&x, &e), x);
            assert_eq!(h.mul(&x, &h.inv(&x)), e);
            assert_eq!(h.mul(&h.inv(&x), &x), e);
        }
        assert_eq!(h.mul(&h.central(c(1, 2)), &h.central(c(1, 2))), e);
    }

    #[test]
    fn inverse_examples() {
        let h = model(&[4], &CoeffContext::divisible(1), &[(0, 0, c(1, 4))]);
        let x = el(&h, c(0, 1), &[1]);
        assert_eq!(h.inv(&x), el(&h, c(1, 4), &[3]));
        assert_eq!(h.inv(&h.central(c(1, 3))), h.central(c(-1, 3)));
        assert_eq!(h.inv(&h.identity()), h.identity());
        // bimultiplicative special case: (−t + β(x, x), −x)
        let beta = h.cocycle().as_pairing().unwrap().clone();
        for x in h.snapshot(8).unwrap() {
            let expected = HElem::new(&-&x.t + &beta.eval(&x.x, &x.x), h.group().neg(&x.x));
            assert_eq!(h.inv(&x), expected);
        }
    }

    #[test]
    fn commutators_are_omega() {
        let h = d4();
        let (x, y) = (el(&h, c(0, 1), &[1, 0]), el(&h, c(0, 1), &[0, 1]));
        assert_eq!(h.commutator(&x, &y), h.central(c(1, 2)));
        for g in test_groups() {
            let els = g.elements().unwrap();
            for a in &els {
                assert_eq!(g.commutator(a, a), g.identity());
                for b in &els {
                    assert_eq!(g.commutator(a, b), g.central(g.omega().eval(&a.x, &b.x)));
                }
            }
        }
    }

    #[test]
    fn center_and_commutator_subgroup_match_brute_force() {
        for g in test_groups() {
            let els = g.elements().unwrap();
            let center = g.center();
            assert_eq!(center.elements.clone().unwrap(), g.center_brute(&els), "{g}");
            assert_eq!(g.commutator_subgroup(), g.commutator_subgroup_brute(&els), "{g}");
            let z: BTreeSet<_> = center.elements.unwrap().into_iter().collect();
            assert!(g.commutator_subgroup().iter().all(|x| z.contains(x)));
            assert!(g.nilpotency_class() <= 2);
        }
        let h = d4();
        assert_eq!(h.center().elements.unwrap(), vec![h.identity(), h.central(c(1, 2))]);
        assert_eq!(h.commutator_subgroup().len(), 2);
        assert_eq!(model(&[3, 3], &fin(&[3]), &[(0, 1, c(1, 3))]).commutator_subgroup().len(), 3);
        let degenerate = model(&[2, 4], &fin(&[4]), &[(0, 1, c(1, 2))]);
        assert_eq!(degenerate.center().order(), Some(8));
    }

    #[test]
    fn trivial_cocycle_gives_abelian_group() {
        let a = grp(&[2, 3]);
        let h = HeisenbergGroup::new(Cocycle::trivial(&a, &fin(&[2]))).unwrap();
        assert_eq!(h.center().order(), Some(12));
        assert_eq!(h.commutator_subgroup(), vec![h.identity()]);
        assert_eq!(h.nilpotency_class(), 1);
        let one = HeisenbergGroup::new(Cocycle::trivial(&FinAbGroup::trivial(), &CoeffContext::trivial())).unwrap();
        assert_eq!(one.nilpotency_class(), 0);
        assert_eq!(d4().nilpotency_class(), 2);
    }

    #[test]
    fn sections_recover_the_cocycle() {
        let h = model(&[2, 4], &CoeffContext::divisible(1), &[(0, 1, c(1, 2)), (1, 1, c(1, 4))]);
        let s = Section::standard(&h);
        assert_eq!(defect_of_section(&h, &s).unwrap(), *h.cocycle());
        let mut rng = StdRng::seed_from_u64(5);
        let g = CochainFunction::random(h.group(), h.context(), 8, &mut rng);
        let shifted = Section::shifted(&h, &g).unwrap();
        assert_eq!(defect_of_section(&h, &shifted).unwrap(), h.cocycle().sub(&g.defect()).unwrap());
        let hom = CochainFunction::from_fn(h.group(), h.context(), |x| c(x.coords()[1] as i64, 4)).unwrap();
        assert!(hom.is_homomorphism());
        let s = Section::shifted(&h, &hom).unwrap();
        assert_eq!(defect_of_section(&h, &s).unwrap(), *h.cocycle());
        let mut bad = Section::standard(&h).values().to_vec();
        bad.swap(1, 2);
        assert!(Section::new(&h, bad).is_err());
    }

    #[test]
    fn equivalences() {
        let h = d4();
        let id = equivalence_iso(&h, &h, &CochainFunction::zero(h.group(), h.context())).unwrap();
        for x in h.elements().unwrap() {
            assert_eq!(id.apply(&x), x);
        }
        let qz = CoeffContext::divisible(1);
        let inc = CoeffEmbedding::inclusion(&fin(&[2]));
        let (hd, hq) = (d4().pushforward(&inc).unwrap(), q8().pushforward(&inc).unwrap());
        assert_eq!(hd.context(), &qz);
        let cmp = cohomologous(hq.cocycle(), hd.cocycle()).unwrap();
        let ClassWitness::Refinement(f) = cmp.witness else { panic!("expected a refinement") };
        let eq = equivalence_iso(&hd, &hq, &f).unwrap();
        eq.verify_on(&hd.snapshot(4).unwrap()).unwrap();
        assert!(matches!(equivalence_iso(&hd, &hq, &f.add(&f).unwrap()), Err(Error::Precondition(_))));

        let mut rng = StdRng::seed_from_u64(9);
        let base = model(&[2, 4], &fin(&[4]), &[(0, 1, c(1, 2)), (1, 1, c(1, 4))]);
        for _ in 0..5 {
            let g = CochainFunction::random(base.group(), base.context(), 4, &mut rng);
            let other = HeisenbergGroup::new(base.cocycle().add(&g.defect()).unwrap()).unwrap();
            let eq = equivalence_iso(&base, &other, &g).unwrap();
            eq.verify_on(&base.elements().unwrap()).unwrap();
        }
    }

    #[test]
    fn pushforward_examples() {
        let inc = CoeffEmbedding::inclusion(&fin(&[2]));
        assert_eq!(inc.apply(&c(1, 2)), c(1, 2));
        let h = d4().pushforward(&inc).unwrap();
        assert_eq!(h.cocycle().eval(&h.group().elem(&[1, 1]).unwrap(), &h.group().elem(&[0, 1]).unwrap()), c(1, 2));
        let triv = HeisenbergGroup::new(Cocycle::trivial(&grp(&[2]), &fin(&[2]))).unwrap();
        assert!(triv.pushforward(&inc).unwrap().omega().is_zero());
        let qz = CoeffContext::divisible(1);
        let emb = CoeffEmbedding::new(&fin(&[4]), &qz, vec![c(3, 4)]).unwrap();
        assert_eq!(emb.apply(&c(1, 2)), c(1, 2));
        assert!(matches!(CoeffEmbedding::new(&fin(&[4]), &qz, vec![c(1, 2)]), Err(Error::NotInjective(_))));
        assert!(CoeffEmbedding::new(&fin(&[4]), &qz, vec![c(1, 3)]).is_err());
    }

    #[test]
    fn cayley_tables() {
        for g in test_groups() {
            let t = g.cayley_table().unwrap();
            assert_eq!(t.order() as u128, g.order().unwrap());
            assert!(t.is_class_at_most_2());
        }
        let census = |h: &HeisenbergGroup| {
            let els = h.elements().unwrap();
            els.iter().filter(|x| h.mul(x, x) == h.identity() && **x != h.identity()).count()
        };
        assert_eq!(census(&q8()), 1);
        assert_eq!(census(&d4()), 5);
        let cyc = HeisenbergGroup::new(Cocycle::trivial(&grp(&[6]), &CoeffContext::trivial())).unwrap();
        assert!(cyc.cayley_table().unwrap().is_abelian());
    }

    #[test]
    fn unchecked_groups_are_not_verified() {
        let a = grp(&[2, 2]);
        let ctx = fin(&[2]);
        let mut v = Cocycle::trivial(&a, &ctx).values();
        v[2 * 4 + 1] = c(1, 2);
        let bad = Cocycle::from_table(&a, &ctx, v).unwrap();
        assert!(matches!(HeisenbergGroup::new(bad.clone()), Err(Error::NotACocycle(_))));
        assert!(HeisenbergGroup::new_unchecked(bad).is_ok());
    }
}
