//! Normalized 2-cocycles `c: A × A → C`, coboundaries, the alternating
//! invariant `ω_c`, quadratic refinements, and the classification of
//! extension classes by `ω`.
//!
//! A cocycle is stored either as a bimultiplicative matrix ([`Pairing`]) or
//! as a dense table indexed by the lexicographic positions of `A`. Both
//! satisfy
//!
//! ```text
//! c(x, 0) = c(0, x) = 0
//! c(x, y) + c(x + y, z) = c(y, z) + c(x, y + z)
//! ```

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::fab::{AddTable, Coeff, CoeffContext, Elem, FinAbGroup};
use crate::pairings::{alternating_pairing_count, beta_from_alternating, Pairing, SymplecticPairing};

/// Default node budget for the exhaustive searches in this module.
pub const SEARCH_LIMIT: u128 = 10_000_000;

#[derive(Clone, Debug)]
pub enum CocycleBody {
    Bimult(Pairing),
    /// Row-major `|A| × |A|` values, indexed by element positions.
    Table(Vec<Coeff>),
}

#[derive(Clone, Debug)]
pub struct Cocycle {
    group: FinAbGroup,
    ctx: CoeffContext,
    body: CocycleBody,
}

/// First failure found by [`Cocycle::verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleViolation {
    Normalization { x: Elem, y: Elem, value: Coeff },
    Identity { x: Elem, y: Elem, z: Elem, lhs: Coeff, rhs: Coeff },
}

impl fmt::Display for CocycleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleViolation::Normalization { x, y, value } => {
                write!(f, "normalization fails: c({x}, {y}) = {value} ≠ 0")
            }
            CocycleViolation::Identity { x, y, z, lhs, rhs } => {
                write!(f, "c(x,y) + c(x+y,z) = {lhs} but c(y,z) + c(x,y+z) = {rhs} at x={x}, y={y}, z={z}")
            }
        }
    }
}

impl Cocycle {
    pub fn from_pairing(p: Pairing) -> Cocycle {
        Cocycle { group: p.group().clone(), ctx: p.context().clone(), body: CocycleBody::Bimult(p) }
    }

    pub fn trivial(group: &FinAbGroup, ctx: &CoeffContext) -> Cocycle {
        Cocycle::from_pairing(Pairing::zero(group, ctx))
    }

    /// A table cocycle from row-major values; the cocycle identities are not
    /// checked here (see [`Cocycle::verify`]).
    pub fn from_table(group: &FinAbGroup, ctx: &CoeffContext, values: Vec<Coeff>) -> Result<Cocycle> {
        let n = group.order();
        if values.len() != n * n {
            return Err(Error::MalformedCocycle(format!(
                "table has {} entries, expected {} for {group}",
                values.len(),
                n * n
            )));
        }
        for v in &values {
            ctx.check(v)?;
        }
        Ok(Cocycle { group: group.clone(), ctx: ctx.clone(), body: CocycleBody::Table(values) })
    }

    /// A table cocycle from an association that must cover all of `A × A`.
    pub fn from_map(group: &FinAbGroup, ctx: &CoeffContext, map: &HashMap<(Elem, Elem), Coeff>) -> Result<Cocycle> {
        let mut values = Vec::with_capacity(group.order() * group.order());
        for x in group.elements() {
            for y in group.elements() {
                let v = map
                    .get(&(x.clone(), y.clone()))
                    .ok_or_else(|| Error::MalformedCocycle(format!("no value for c({x}, {y})")))?;
                values.push(v.clone());
            }
        }
        Cocycle::from_table(group, ctx, values)
    }

    pub fn from_fn(group: &FinAbGroup, ctx: &CoeffContext, f: impl Fn(&Elem, &Elem) -> Coeff) -> Result<Cocycle> {
        let els: Vec<Elem> = group.elements().collect();
        let values = els.iter().flat_map(|x| els.iter().map(|y| f(x, y)).collect::<Vec<_>>()).collect();
        Cocycle::from_table(group, ctx, values)
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn context(&self) -> &CoeffContext {
        &self.ctx
    }

    pub fn body(&self) -> &CocycleBody {
        &self.body
    }

    pub fn as_pairing(&self) -> Option<&Pairing> {
        match &self.body {
            CocycleBody::Bimult(p) => Some(p),
            CocycleBody::Table(_) => None,
        }
    }

    pub fn eval(&self, x: &Elem, y: &Elem) -> Coeff {
        match &self.body {
            CocycleBody::Bimult(p) => p.eval(x, y),
            CocycleBody::Table(t) => {
                let n = self.group.order();
                t[self.group.index_of(x) * n + self.group.index_of(y)].clone()
            }
        }
    }

    /// Dense row-major values.
    pub fn values(&self) -> Vec<Coeff> {
        match &self.body {
            CocycleBody::Table(t) => t.clone(),
            CocycleBody::Bimult(p) => {
                let els: Vec<Elem> = self.group.elements().collect();
                els.iter().flat_map(|x| els.iter().map(|y| p.eval(x, y)).collect::<Vec<_>>()).collect()
            }
        }
    }

    pub fn to_table(&self) -> Cocycle {
        Cocycle { group: self.group.clone(), ctx: self.ctx.clone(), body: CocycleBody::Table(self.values()) }
    }

    /// Exhaustive check of normalization and the cocycle identity, for both
    /// storage forms. Reports the first violation in lexicographic order.
    pub fn verify(&self) -> Result<(), CocycleViolation> {
        let n = self.group.order();
        let v = self.values();
        let add = AddTable::new(&self.group);
        let el = |i: usize| self.group.elem_at(i);
        for x in 0..n {
            for (a, b) in [(x, 0), (0, x)] {
                let val = &v[a * n + b];
                if !val.is_zero() {
                    return Err(CocycleViolation::Normalization { x: el(a), y: el(b), value: val.clone() });
                }
            }
        }
        let mut lhs = self.ctx.zero();
        let mut rhs = self.ctx.zero();
        for x in 0..n {
            for y in 0..n {
                let xy = add.add(x, y);
                for z in 0..n {
                    lhs.clone_from(&v[x * n + y]);
                    lhs.add_assign_ref(&v[xy * n + z]);
                    rhs.clone_from(&v[y * n + z]);
                    rhs.add_assign_ref(&v[x * n + add.add(y, z)]);
                    if lhs != rhs {
                        return Err(CocycleViolation::Identity {
                            x: el(x),
                            y: el(y),
                            z: el(z),
                            lhs: lhs.clone(),
                            rhs: rhs.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_cocycle(&self) -> bool {
        self.verify().is_ok()
    }

    fn check_compatible(&self, other: &Cocycle) -> Result<()> {
        if self.group != other.group || self.ctx != other.ctx {
            return Err(Error::Dimension(format!(
                "cocycles on {} over {} and on {} over {}",
                self.group, self.ctx, other.group, other.ctx
            )));
        }
        Ok(())
    }

    /// Pointwise sum; two bimultiplicative cocycles add as matrices.
    pub fn add(&self, other: &Cocycle) -> Result<Cocycle> {
        self.check_compatible(other)?;
        let body = match (&self.body, &other.body) {
            (CocycleBody::Bimult(p), CocycleBody::Bimult(q)) => CocycleBody::Bimult(p.add(q)?),
            _ => {
                let mut v = self.values();
                for (a, b) in v.iter_mut().zip(other.values()) {
                    a.add_assign_ref(&b);
                }
                CocycleBody::Table(v)
            }
        };
        Ok(Cocycle { group: self.group.clone(), ctx: self.ctx.clone(), body })
    }

    pub fn neg(&self) -> Cocycle {
        let body = match &self.body {
            CocycleBody::Bimult(p) => CocycleBody::Bimult(p.neg()),
            CocycleBody::Table(t) => CocycleBody::Table(t.iter().map(|v| -v).collect()),
        };
        Cocycle { group: self.group.clone(), ctx: self.ctx.clone(), body }
    }

    pub fn sub(&self, other: &Cocycle) -> Result<Cocycle> {
        self.add(&other.neg())
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.body {
            CocycleBody::Bimult(p) => p.is_symmetric(),
            CocycleBody::Table(t) => {
                let n = self.group.order();
                (0..n).all(|x| (0..x).all(|y| t[x * n + y] == t[y * n + x]))
            }
        }
    }

    /// The alternating pairing `ω_c(x, y) = c(x, y) − c(y, x)` as a generator matrix.
    ///
    /// For table cocycles the full table of `c(x, y) − c(y, x)` is compared
    /// against the bimultiplicative extension of the generator matrix; a
    /// mismatch means the input was not a cocycle.
    pub fn omega(&self) -> Result<SymplecticPairing> {
        let t = match &self.body {
            CocycleBody::Bimult(p) => return Ok(p.omega()),
            CocycleBody::Table(t) => t,
        };
        let n = self.group.order();
        let gens = self.group.generators();
        let r = gens.len();
        let idx: Vec<usize> = gens.iter().map(|e| self.group.index_of(e)).collect();
        let mut rows = vec![vec![self.ctx.zero(); r]; r];
        for i in 0..r {
            for j in 0..r {
                rows[i][j] = &t[idx[i] * n + idx[j]] - &t[idx[j] * n + idx[i]];
            }
        }
        let w = Pairing::new(&self.group, &self.ctx, rows)
            .map_err(|e| Error::Invariant(format!("commutator form is not a pairing: {e}")))?;
        let els: Vec<Elem> = self.group.elements().collect();
        for (a, x) in els.iter().enumerate() {
            for (b, y) in els.iter().enumerate() {
                let full = &t[a * n + b] - &t[b * n + a];
                if full != w.eval(x, y) {
                    return Err(Error::Invariant(format!(
                        "c(x,y) − c(y,x) = {full} at x={x}, y={y} is not bimultiplicative in the generators"
                    )));
                }
            }
        }
        SymplecticPairing::new(w).map_err(|e| Error::Invariant(e.to_string()))
    }

    /// The same values read in another context via a coefficient map.
    pub fn map_coeffs(&self, ctx: &CoeffContext, f: impl Fn(&Coeff) -> Coeff) -> Result<Cocycle> {
        match &self.body {
            CocycleBody::Bimult(p) => Ok(Cocycle::from_pairing(p.map_coeffs(ctx, f)?)),
            CocycleBody::Table(t) => Cocycle::from_table(&self.group, ctx, t.iter().map(f).collect()),
        }
    }

    /// Lcm of the denominators of all values, per coordinate.
    pub fn denominators(&self) -> Vec<u64> {
        let mut dens = vec![1u64; self.ctx.rank()];
        for v in self.values() {
            for (d, q) in dens.iter_mut().zip(v.coords()) {
                *d = d.lcm(&q.den());
            }
        }
        dens
    }
}

/// Pointwise equality of values on the same group and context.
impl PartialEq for Cocycle {
    fn eq(&self, other: &Cocycle) -> bool {
        if self.group != other.group || self.ctx != other.ctx {
            return false;
        }
        match (&self.body, &other.body) {
            (CocycleBody::Bimult(p), CocycleBody::Bimult(q)) => p == q,
            _ => self.values() == other.values(),
        }
    }
}

impl Eq for Cocycle {}

/// A normalized 1-cochain `f: A → C` with `f(0) = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CochainFunction {
    group: FinAbGroup,
    ctx: CoeffContext,
    values: Vec<Coeff>,
}

impl CochainFunction {
    pub fn new(group: &FinAbGroup, ctx: &CoeffContext, values: Vec<Coeff>) -> Result<CochainFunction> {
        if values.len() != group.order() {
            return Err(Error::Dimension(format!("cochain has {} values, expected {}", values.len(), group.order())));
        }
        for v in &values {
            ctx.check(v)?;
        }
        if !values[0].is_zero() {
            return Err(Error::Precondition(format!("f(0) = {} ≠ 0", values[0])));
        }
        Ok(CochainFunction { group: group.clone(), ctx: ctx.clone(), values })
    }

    pub fn zero(group: &FinAbGroup, ctx: &CoeffContext) -> CochainFunction {
        CochainFunction { group: group.clone(), ctx: ctx.clone(), values: vec![ctx.zero(); group.order()] }
    }

    pub fn from_fn(group: &FinAbGroup, ctx: &CoeffContext, f: impl Fn(&Elem) -> Coeff) -> Result<CochainFunction> {
        CochainFunction::new(group, ctx, group.elements().map(|x| f(&x)).collect())
    }

    /// Random values with denominators dividing `denominator` (within `ctx`).
    pub fn random<R: rand::Rng + ?Sized>(
        group: &FinAbGroup,
        ctx: &CoeffContext,
        denominator: u64,
        rng: &mut R,
    ) -> CochainFunction {
        let choices = ctx.torsion_elements(denominator);
        let mut values: Vec<Coeff> =
            (0..group.order()).map(|_| choices[rng.gen_range(0..choices.len())].clone()).collect();
        values[0] = ctx.zero();
        CochainFunction { group: group.clone(), ctx: ctx.clone(), values }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn context(&self) -> &CoeffContext {
        &self.ctx
    }

    pub fn values(&self) -> &[Coeff] {
        &self.values
    }

    pub fn get(&self, x: &Elem) -> &Coeff {
        &self.values[self.group.index_of(x)]
    }

    pub fn at(&self, index: usize) -> &Coeff {
        &self.values[index]
    }

    /// The morphism defect `Δf(x, y) = f(x + y) − f(x) − f(y)`.
    pub fn defect(&self) -> Cocycle {
        let n = self.group.order();
        let add = AddTable::new(&self.group);
        let mut values = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let mut v = self.values[add.add(x, y)].clone();
                v.sub_assign_ref(&self.values[x]);
                v.sub_assign_ref(&self.values[y]);
                values.push(v);
            }
        }
        Cocycle { group: self.group.clone(), ctx: self.ctx.clone(), body: CocycleBody::Table(values) }
    }

    pub fn is_homomorphism(&self) -> bool {
        self.defect().values().iter().all(Coeff::is_zero)
    }

    pub fn add(&self, other: &CochainFunction) -> Result<CochainFunction> {
        if self.group != other.group || self.ctx != other.ctx {
            return Err(Error::Dimension("cochains on different groups or contexts".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(CochainFunction { group: self.group.clone(), ctx: self.ctx.clone(), values })
    }

    pub fn neg(&self) -> CochainFunction {
        CochainFunction {
            group: self.group.clone(),
            ctx: self.ctx.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    pub fn sub(&self, other: &CochainFunction) -> Result<CochainFunction> {
        self.add(&other.neg())
    }

    pub fn map_coeffs(&self, ctx: &CoeffContext, f: impl Fn(&Coeff) -> Coeff) -> Result<CochainFunction> {
        CochainFunction::new(&self.group, ctx, self.values.iter().map(f).collect())
    }
}

/// `Δf` as a cocycle.
pub fn morphism_defect(f: &CochainFunction) -> Cocycle {
    f.defect()
}

/// `ω_c` as a generator matrix (see [`Cocycle::omega`]).
pub fn omega_c(c: &Cocycle) -> Result<SymplecticPairing> {
    c.omega()
}

fn check_refines(f: &CochainFunction, c: &Cocycle) -> Result<()> {
    let d = f.defect();
    if d != *c {
        let n = c.group().order();
        let (dv, cv) = (d.values(), c.values());
        let k = (0..n * n).find(|&k| dv[k] != cv[k]).unwrap_or(0);
        return Err(Error::Invariant(format!(
            "Δf ≠ c at ({}, {}): {} vs {}",
            c.group().elem_at(k / n),
            c.group().elem_at(k % n),
            dv[k],
            cv[k]
        )));
    }
    Ok(())
}

/// A quadratic refinement of a symmetric cocycle: `f` with `Δf = c`.
///
/// `c` makes `C × A` an abelian extension of `A`. For each generator `e_i` of
/// order `n_i`, the lift `(u_i, e_i)` has `n_i`-th power
/// `(n_i·u_i + t_i, 0)` with `t_i = Σ_{j=1}^{n_i−1} c(j·e_i, e_i)`, so
/// choosing `u_i` with `n_i·u_i = −t_i` makes the lifts a splitting. The
/// splitting is extended over coordinates in index order and `f` is its
/// first component.
///
/// Fails with [`Error::NoRefinement`] when some `−t_i` is not divisible by
/// `n_i` inside a finite context; in that case no refinement exists at all,
/// since any refinement yields such a `u_i`.
pub fn quadratic_refinement(c: &Cocycle) -> Result<CochainFunction> {
    if !c.is_symmetric() {
        return Err(Error::Precondition("cocycle is not symmetric".into()));
    }
    let a = c.group();
    let ctx = c.context();
    let mut u = Vec::with_capacity(a.rank());
    for (i, e) in a.generators().iter().enumerate() {
        let n = a.moduli()[i];
        let mut t = ctx.zero();
        let mut multiple = e.clone();
        for _ in 1..n {
            t.add_assign_ref(&c.eval(&multiple, e));
            multiple = a.add(&multiple, e);
        }
        let ui = ctx.divide(&-&t, n).map_err(|err| match err {
            Error::NotDivisible(msg) => {
                Error::NoRefinement(format!("the lift of generator {} needs n·u = {} with n = {n}: {msg}", i + 1, -&t))
            }
            other => other,
        })?;
        u.push(ui);
    }
    let mut values = vec![ctx.zero(); a.order()];
    for idx in 1..a.order() {
        let x = a.elem_at(idx);
        let j = x.coords().iter().rposition(|&v| v != 0).expect("nonzero element");
        let ej = a.basis(j);
        let y = a.sub(&x, &ej);
        let mut v = values[a.index_of(&y)].clone();
        v.add_assign_ref(&u[j]);
        v.add_assign_ref(&c.eval(&y, &ej));
        values[idx] = v;
    }
    let f = CochainFunction::new(a, ctx, values)?;
    check_refines(&f, c)?;
    Ok(f)
}

/// Exhaustive search for `f` with `Δf = c` among cochains whose values have
/// denominators dividing `denominator` (and lie in the context).
///
/// Elements are assigned in lexicographic order and every constraint
/// `f(u + w) = f(u) + f(w) + c(u, w)` is checked as soon as its three
/// elements are assigned. Only generator positions branch, so the search
/// visits at most `k^(r+1)·|A|` nodes for `k` candidate values and rank `r`;
/// larger searches are refused.
pub fn brute_refinement(c: &Cocycle, denominator: u64) -> Result<Option<CochainFunction>> {
    brute_refinement_limited(c, denominator, SEARCH_LIMIT)
}

pub fn brute_refinement_limited(c: &Cocycle, denominator: u64, limit: u128) -> Result<Option<CochainFunction>> {
    let a = c.group();
    let ctx = c.context();
    let candidates = ctx.torsion_elements(denominator);
    let k = candidates.len() as u128;
    let estimate =
        k.checked_pow(a.rank() as u32 + 1).and_then(|p| p.checked_mul(a.order() as u128)).unwrap_or(u128::MAX);
    if estimate > limit {
        return Err(Error::SearchSpace { estimate, limit });
    }
    let n = a.order();
    let add = AddTable::new(a);
    let cv = c.values();
    let mut f: Vec<Option<usize>> = vec![None; n];
    // candidate index per element; element 0 is pinned to zero
    let zero_idx = candidates.iter().position(Coeff::is_zero).expect("0 is a candidate");
    f[0] = Some(zero_idx);

    let consistent = |f: &[Option<usize>], x: usize| -> bool {
        let val = |i: usize| &candidates[f[i].expect("assigned")];
        for u in 0..n {
            if f[u].is_none() {
                continue;
            }
            // x = u + w
            let w = add.sub(x, u);
            if f[w].is_some() {
                let mut rhs = val(u) + val(w);
                rhs.add_assign_ref(&cv[u * n + w]);
                if *val(x) != rhs {
                    return false;
                }
            }
            // s = x + u
            let s = add.add(x, u);
            if f[s].is_some() {
                let mut rhs = val(x) + val(u);
                rhs.add_assign_ref(&cv[x * n + u]);
                if *val(s) != rhs {
                    return false;
                }
            }
        }
        true
    };

    if !consistent(&f, 0) {
        return Ok(None);
    }
    // iterative depth-first search over positions 1..n
    let mut pos = 1usize;
    let mut next_choice = vec![0usize; n + 1];
    let mut visited: u128 = 0;
    while pos >= 1 {
        if pos == n {
            let values = f.iter().map(|i| candidates[i.expect("assigned")].clone()).collect();
            let g = CochainFunction::new(a, ctx, values)?;
            check_refines(&g, c)?;
            return Ok(Some(g));
        }
        let mut advanced = false;
        while next_choice[pos] < candidates.len() {
            let choice = next_choice[pos];
            next_choice[pos] += 1;
            visited += 1;
            f[pos] = Some(choice);
            if consistent(&f, pos) {
                advanced = true;
                break;
            }
        }
        if advanced {
            pos += 1;
            next_choice[pos.min(n)] = 0;
        } else {
            f[pos] = None;
            next_choice[pos] = 0;
            pos -= 1;
        }
        if visited > limit {
            return Err(Error::SearchSpace { estimate: visited, limit });
        }
    }
    Ok(None)
}

/// Certificate returned by [`cohomologous`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassWitness {
    /// `f` with `Δf = c − c′`.
    Refinement(CochainFunction),
    /// Generator pair (0-based) where `ω_c` and `ω_c′` differ.
    Separator { i: usize, j: usize, left: Coeff, right: Coeff },
    /// `ω_c = ω_c′` but `c − c′` has no refinement in the (finite) context.
    Obstructed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassComparison {
    pub omega_equal: bool,
    pub cohomologous: bool,
    pub witness: ClassWitness,
}

/// Decides whether `c` and `c′` differ by a coboundary.
///
/// Over a divisible context the answer is `ω_c = ω_c′`, and the refinement of
/// `c − c′` is returned as a certificate. Over a finite context `ω`-equality
/// is only necessary; existence of a refinement is decided by exhaustive
/// search and reported separately.
pub fn cohomologous(c: &Cocycle, c2: &Cocycle) -> Result<ClassComparison> {
    c.check_compatible(c2)?;
    let w = c.omega()?;
    let w2 = c2.omega()?;
    if let Some((i, j)) = w.first_difference(&w2) {
        return Ok(ClassComparison {
            omega_equal: false,
            cohomologous: false,
            witness: ClassWitness::Separator { i, j, left: w.entry(i, j).clone(), right: w2.entry(i, j).clone() },
        });
    }
    let diff = c.sub(c2)?;
    let refinement = match c.context().moduli() {
        None => Some(quadratic_refinement(&diff)?),
        Some(ms) => {
            let exponent = ms.iter().fold(1u64, |acc, m| acc.lcm(m));
            match brute_refinement(&diff, exponent) {
                Ok(found) => found,
                Err(Error::SearchSpace { .. }) => match quadratic_refinement(&diff) {
                    Ok(f) => Some(f),
                    Err(Error::NoRefinement(_)) => None,
                    Err(e) => return Err(e),
                },
                Err(e) => return Err(e),
            }
        }
    };
    Ok(match refinement {
        Some(f) => ClassComparison { omega_equal: true, cohomologous: true, witness: ClassWitness::Refinement(f) },
        None => ClassComparison { omega_equal: true, cohomologous: false, witness: ClassWitness::Obstructed },
    })
}

/// A bimultiplicative `β` cohomologous to `c`, with `f` such that `Δf = c − β`.
///
/// `β` is the upper-triangular lift of `ω_c`, so `ω_β = ω_c` and `c − β` is
/// symmetric.
pub fn bimult_representative(c: &Cocycle) -> Result<(Pairing, CochainFunction)> {
    let beta = beta_from_alternating(&c.omega()?);
    let diff = c.sub(&Cocycle::from_pairing(beta.clone()))?;
    let f = quadratic_refinement(&diff)?;
    Ok((beta, f))
}

/// `|Ext(A, C)| = Π_i |C[n_i]|` for finite `C`; zero-dimensional (order 1)
/// when `C` is divisible.
pub fn ext_order(group: &FinAbGroup, ctx: &CoeffContext) -> u128 {
    if ctx.is_divisible() {
        1
    } else {
        group.hom_count(ctx)
    }
}

/// `|H²(A, C)|`.
///
/// For divisible `C` this is the number of alternating pairings
/// `Π_{i<j} |C[gcd(n_i, n_j)]|`. For finite `C` the symmetric classes do not
/// all vanish and contribute the extra factor [`ext_order`].
pub fn h2_order(group: &FinAbGroup, ctx: &CoeffContext) -> u128 {
    alternating_pairing_count(group, ctx) * ext_order(group, ctx)
}

/// Every normalized cocycle table over a finite context, in lexicographic
/// order of the table. Entries are assigned row by row and each cocycle
/// identity is checked once its four entries are known.
pub fn enumerate_cocycles(group: &FinAbGroup, ctx: &CoeffContext) -> Result<Vec<Cocycle>> {
    enumerate_cocycles_limited(group, ctx, SEARCH_LIMIT)
}

pub fn enumerate_cocycles_limited(group: &FinAbGroup, ctx: &CoeffContext, limit: u128) -> Result<Vec<Cocycle>> {
    let values =
        ctx.elements().map_err(|_| Error::Precondition("enumeration needs a finite coefficient context".into()))?;
    let n = group.order();
    // every coboundary is in the output: |C|^(|A|-1) / |Hom(A, C)| of them
    let coboundaries = (values.len() as f64).powi(n as i32 - 1) / group.hom_count(ctx) as f64;
    if coboundaries > limit as f64 {
        return Err(Error::SearchSpace { estimate: coboundaries.min(u128::MAX as f64) as u128, limit });
    }
    let add = AddTable::new(group);
    let free: Vec<usize> = (1..n).flat_map(|x| (1..n).map(move |y| x * n + y)).collect();
    let zero = values.iter().position(Coeff::is_zero).expect("0 in C");
    let mut table: Vec<usize> = vec![zero; n * n];
    // position in `free` of each entry, usize::MAX for pinned entries
    let mut order = vec![usize::MAX; n * n];
    for (k, &p) in free.iter().enumerate() {
        order[p] = k;
    }

    let ok = |table: &[usize], depth: usize, p: usize| -> bool {
        let assigned = |q: usize| order[q] == usize::MAX || order[q] <= depth;
        let val = |q: usize| &values[table[q]];
        let check = |e1: usize, e2: usize, e3: usize, e4: usize| -> bool {
            if !(assigned(e1) && assigned(e2) && assigned(e3) && assigned(e4)) {
                return true;
            }
            val(e1) + val(e2) == val(e3) + val(e4)
        };
        let (x, y) = (p / n, p % n);
        for t in 0..n {
            // (x, y, t)
            if !check(x * n + y, add.add(x, y) * n + t, y * n + t, x * n + add.add(y, t)) {
                return false;
            }
            // (t, x − t, y)
            let b = add.sub(x, t);
            if !check(t * n + b, x * n + y, b * n + y, t * n + add.add(b, y)) {
                return false;
            }
            // (t, x, y)
            if !check(t * n + x, add.add(t, x) * n + y, x * n + y, t * n + add.add(x, y)) {
                return false;
            }
            // (x, t, y − t)
            let d = add.sub(y, t);
            if !check(x * n + t, add.add(x, t) * n + d, t * n + d, x * n + y) {
                return false;
            }
        }
        true
    };

    let mut out = Vec::new();
    if free.is_empty() {
        out.push(Cocycle::from_table(group, ctx, vec![ctx.zero(); n * n])?);
        return Ok(out);
    }
    let mut next = vec![0usize; free.len()];
    let mut depth = 0usize;
    let mut visited: u128 = 0;
    loop {
        let p = free[depth];
        let mut advanced = false;
        while next[depth] < values.len() {
            table[p] = next[depth];
            next[depth] += 1;
            visited += 1;
            if ok(&table, depth, p) {
                advanced = true;
                break;
            }
        }
        if visited > limit {
            return Err(Error::SearchSpace { estimate: visited, limit });
        }
        if advanced {
            if depth + 1 == free.len() {
                let vals = table.iter().map(|&i| values[i].clone()).collect();
                out.push(Cocycle::from_table(group, ctx, vals)?);
            } else {
                depth += 1;
                next[depth] = 0;
            }
        } else {
            table[p] = zero;
            if depth == 0 {
                break;
            }
            depth -= 1;
        }
    }
    Ok(out)
}

/// Cohomology classes among `cocycles`, found pairwise: each cocycle is
/// compared by [`cohomologous`] against one representative per class already
/// seen with the same `ω`. Returns the representatives.
pub fn class_representatives(cocycles: &[Cocycle]) -> Result<Vec<Cocycle>> {
    let mut by_omega: Vec<(SymplecticPairing, Vec<Cocycle>)> = Vec::new();
    for c in cocycles {
        let w = c.omega()?;
        let slot = match by_omega.iter().position(|(w2, _)| *w2 == w) {
            Some(k) => k,
            None => {
                by_omega.push((w, Vec::new()));
                by_omega.len() - 1
            }
        };
        let reps = &mut by_omega[slot].1;
        let mut found = false;
        for r in reps.iter() {
            let cmp = cohomologous(c, r)?;
            if cmp.cohomologous {
                if let ClassWitness::Refinement(f) = &cmp.witness {
                    if f.defect() != c.sub(r)? {
                        return Err(Error::Invariant("refinement certificate fails to verify".into()));
                    }
                }
                found = true;
                break;
            }
        }
        if !found {
            reps.push(c.clone());
        }
    }
    Ok(by_omega.into_iter().flat_map(|(_, reps)| reps).collect())
}

/// `|H²(A, C)|` by enumeration. A divisible `C` of rank `k` is sampled
/// through its `d`-torsion, `d` the largest `gcd(n_i, n_j)` with `i < j`:
/// every class has a bimultiplicative representative with values there.
/// Comparison then happens in `C` itself.
pub fn brute_h2_order(group: &FinAbGroup, ctx: &CoeffContext, limit: u128) -> Result<u128> {
    let cocycles = if ctx.is_divisible() {
        let ms = group.moduli();
        let d = (0..ms.len()).flat_map(|i| (i + 1..ms.len()).map(move |j| ms[i].gcd(&ms[j]))).fold(2, u64::max);
        let torsion = CoeffContext::finite(vec![d; ctx.rank()])?;
        enumerate_cocycles_limited(group, &torsion, limit)?
            .iter()
            .map(|c| c.map_coeffs(ctx, Coeff::clone))
            .collect::<Result<Vec<_>>>()?
    } else {
        enumerate_cocycles_limited(group, ctx, limit)?
    };
    Ok(class_representatives(&cocycles)?.len() as u128)
}

impl fmt::Display for Cocycle {
    /// The cocycle file syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            CocycleBody::Bimult(p) => {
                writeln!(f, "cocycle bimult on {} coeff {}", self.group, self.ctx)?;
                for (i, j, v) in p.nonzero_entries() {
                    writeln!(f, "({},{}) = {}", i + 1, j + 1, v)?;
                }
            }
            CocycleBody::Table(t) => {
                writeln!(f, "cocycle table on {} coeff {}", self.group, self.ctx)?;
                let n = self.group.order();
                for (k, v) in t.iter().enumerate() {
                    if !v.is_zero() {
                        let x = self.group.elem_at(k / n);
                        let y = self.group.elem_at(k % n);
                        writeln!(f, "({} | {}) = {}", bare(&x), bare(&y), v)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for CochainFunction {
    /// The refinement file syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "refinement on {} coeff {}", self.group, self.ctx)?;
        for (k, v) in self.values.iter().enumerate().skip(1) {
            writeln!(f, "f{} = {}", self.group.elem_at(k), v)?;
        }
        Ok(())
    }
}

fn bare(x: &Elem) -> String {
    x.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}
