//! Bimultiplicative pairings `β: A × A → C` stored as generator matrices.
//!
//! A pairing is determined by the values `b_ij = β(e_i, e_j)` on the standard
//! generators; `β(x, y) = Σ x_i y_j b_ij`. The matrix is well defined on
//! `Z/n_i × Z/n_j` exactly when the order of `b_ij` divides `gcd(n_i, n_j)`.

use std::fmt;
use std::ops::Deref;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::fab::{Coeff, CoeffContext, Elem, FinAbGroup};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Pairing {
    group: FinAbGroup,
    ctx: CoeffContext,
    // row-major r × r
    matrix: Vec<Coeff>,
}

impl Pairing {
    pub fn zero(group: &FinAbGroup, ctx: &CoeffContext) -> Pairing {
        let r = group.rank();
        Pairing { group: group.clone(), ctx: ctx.clone(), matrix: vec![ctx.zero(); r * r] }
    }

    /// Builds a pairing from a full `r × r` matrix of generator values.
    pub fn new(group: &FinAbGroup, ctx: &CoeffContext, rows: Vec<Vec<Coeff>>) -> Result<Pairing> {
        let r = group.rank();
        if rows.len() != r || rows.iter().any(|row| row.len() != r) {
            return Err(Error::Dimension(format!("pairing matrix on {group} must be {r}×{r}")));
        }
        let mut p = Pairing::zero(group, ctx);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                p.set(i, j, v)?;
            }
        }
        Ok(p)
    }

    /// Builds a pairing from sparse 0-based entries; unspecified entries are zero.
    pub fn from_entries(
        group: &FinAbGroup,
        ctx: &CoeffContext,
        entries: impl IntoIterator<Item = (usize, usize, Coeff)>,
    ) -> Result<Pairing> {
        let mut p = Pairing::zero(group, ctx);
        for (i, j, v) in entries {
            p.set(i, j, v)?;
        }
        Ok(p)
    }

    /// Sets `b_ij`, enforcing membership in C and the gcd-order condition.
    pub fn set(&mut self, i: usize, j: usize, v: Coeff) -> Result<()> {
        let r = self.group.rank();
        if i >= r || j >= r {
            return Err(Error::Dimension(format!("entry ({},{}) outside a {r}×{r} pairing", i + 1, j + 1)));
        }
        self.ctx.check(&v)?;
        let g = self.group.moduli()[i].gcd(&self.group.moduli()[j]);
        let order = v.order();
        if !g.is_multiple_of(order) {
            return Err(Error::IllDefinedEntry { i: i + 1, j: j + 1, order, gcd: g });
        }
        self.matrix[i * r + j] = v;
        Ok(())
    }

    /// A random well-defined pairing. Divisible contexts draw each entry from
    /// the `gcd(n_i, n_j)`-torsion.
    pub fn random<R: rand::Rng + ?Sized>(group: &FinAbGroup, ctx: &CoeffContext, rng: &mut R) -> Pairing {
        let mut p = Pairing::zero(group, ctx);
        let r = group.rank();
        for i in 0..r {
            for j in 0..r {
                let g = group.moduli()[i].gcd(&group.moduli()[j]);
                let choices = ctx.torsion_elements(g);
                let v = choices[rng.gen_range(0..choices.len())].clone();
                p.matrix[i * r + j] = v;
            }
        }
        p
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn context(&self) -> &CoeffContext {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Coeff {
        &self.matrix[i * self.rank() + j]
    }

    /// Nonzero entries as 0-based `(i, j, b_ij)` in row-major order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &Coeff)> {
        let r = self.rank();
        self.matrix.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(k, v)| (k / r, k % r, v))
    }

    /// `β(x, y) = Σ x_i y_j b_ij` for canonical `x`, `y`.
    pub fn eval(&self, x: &Elem, y: &Elem) -> Coeff {
        let r = self.rank();
        let mut acc = self.ctx.zero();
        for (i, &xi) in x.coords().iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.coords().iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let b = &self.matrix[i * r + j];
                if !b.is_zero() {
                    acc.add_assign_ref(&b.scale((xi * yj) as i64));
                }
            }
        }
        acc
    }

    /// [`Pairing::eval`] with membership checks on the arguments.
    pub fn try_eval(&self, x: &Elem, y: &Elem) -> Result<Coeff> {
        self.group.check(x).map_err(|e| Error::Dimension(e.to_string()))?;
        self.group.check(y).map_err(|e| Error::Dimension(e.to_string()))?;
        Ok(self.eval(x, y))
    }

    pub fn transpose(&self) -> Pairing {
        let r = self.rank();
        let mut t = self.clone();
        for i in 0..r {
            for j in 0..r {
                t.matrix[i * r + j] = self.matrix[j * r + i].clone();
            }
        }
        t
    }

    fn check_compatible(&self, other: &Pairing) -> Result<()> {
        if self.group != other.group || self.ctx != other.ctx {
            return Err(Error::Dimension(format!(
                "pairings on {} over {} and on {} over {}",
                self.group, self.ctx, other.group, other.ctx
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Pairing) -> Result<Pairing> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.matrix.iter_mut().zip(&other.matrix) {
            a.add_assign_ref(b);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Pairing {
        let mut out = self.clone();
        for a in out.matrix.iter_mut() {
            *a = -&*a;
        }
        out
    }

    pub fn sub(&self, other: &Pairing) -> Result<Pairing> {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(Coeff::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        let r = self.rank();
        (0..r).all(|i| (0..i).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    /// Matrix criterion: `B + Bᵀ = 0` and zero diagonal.
    pub fn is_alternating(&self) -> bool {
        let r = self.rank();
        (0..r).all(|i| self.entry(i, i).is_zero() && (0..i).all(|j| (self.entry(i, j) + self.entry(j, i)).is_zero()))
    }

    /// Pointwise criterion: `β(x, x) = 0` for every `x ∈ A`.
    pub fn is_alternating_exhaustive(&self) -> bool {
        self.group.elements().all(|x| self.eval(&x, &x).is_zero())
    }

    /// The associated symplectic pairing `ω_β(x, y) = β(x, y) − β(y, x)`.
    pub fn omega(&self) -> SymplecticPairing {
        let w = self.sub(&self.transpose()).expect("transpose is compatible");
        SymplecticPairing(w)
    }

    /// Left kernel `{x : β(x, y) = 0 for all y}`, testing `y` on generators only.
    pub fn adjoint_kernel(&self) -> Vec<Elem> {
        let gens = self.group.generators();
        self.group.elements().filter(|x| gens.iter().all(|e| self.eval(x, e).is_zero())).collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.adjoint_kernel().len() == 1
    }

    /// Nondegenerate, and the adjoint `A → Hom(A, C)` is onto.
    ///
    /// An injective adjoint has image of size `|A|`, so surjectivity reduces
    /// to `|A| = |Hom(A, C)|`.
    pub fn is_regular(&self) -> bool {
        self.is_nondegenerate() && self.group.order() as u128 == self.group.hom_count(&self.ctx)
    }

    /// The same matrix read in another coefficient context.
    pub fn map_coeffs(&self, ctx: &CoeffContext, f: impl Fn(&Coeff) -> Coeff) -> Result<Pairing> {
        let r = self.rank();
        let mut out = Pairing::zero(&self.group, ctx);
        for i in 0..r {
            for j in 0..r {
                out.set(i, j, f(self.entry(i, j)))?;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Pairing {
    /// The pairing file syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pairing on {} coeff {}", self.group, self.ctx)?;
        for (i, j, v) in self.nonzero_entries() {
            writeln!(f, "({},{}) = {}", i + 1, j + 1, v)?;
        }
        Ok(())
    }
}

/// An alternating bimultiplicative pairing.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymplecticPairing(Pairing);

impl SymplecticPairing {
    pub fn new(p: Pairing) -> Result<SymplecticPairing> {
        if !p.is_alternating() {
            return Err(Error::Precondition("pairing is not alternating".into()));
        }
        Ok(SymplecticPairing(p))
    }

    pub fn zero(group: &FinAbGroup, ctx: &CoeffContext) -> SymplecticPairing {
        SymplecticPairing(Pairing::zero(group, ctx))
    }

    pub fn as_pairing(&self) -> &Pairing {
        &self.0
    }

    pub fn into_pairing(self) -> Pairing {
        self.0
    }

    /// First generator pair `(i, j)`, `i < j`, where the two pairings differ.
    pub fn first_difference(&self, other: &SymplecticPairing) -> Option<(usize, usize)> {
        let r = self.rank();
        (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).find(|&(i, j)| self.entry(i, j) != other.entry(i, j))
    }
}

impl Deref for SymplecticPairing {
    type Target = Pairing;

    fn deref(&self) -> &Pairing {
        &self.0
    }
}

/// A bimultiplicative `β` with `ω_β = ω`: the strictly upper-triangular part
/// of `ω` on the standard generators.
pub fn beta_from_alternating(omega: &SymplecticPairing) -> Pairing {
    let r = omega.rank();
    let mut beta = Pairing::zero(omega.group(), omega.context());
    for i in 0..r {
        for j in i + 1..r {
            beta.matrix[i * r + j] = omega.entry(i, j).clone();
        }
    }
    beta
}

/// Every alternating pairing on `group` with values in `ctx`, in lexicographic
/// order of the upper-triangular entries.
pub fn alternating_pairings(group: &FinAbGroup, ctx: &CoeffContext) -> Vec<SymplecticPairing> {
    let r = group.rank();
    let slots: Vec<(usize, usize, Vec<Coeff>)> = (0..r)
        .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
        .map(|(i, j)| {
            let g = group.moduli()[i].gcd(&group.moduli()[j]);
            (i, j, ctx.torsion_elements(g))
        })
        .collect();
    let mut out = vec![Pairing::zero(group, ctx)];
    for (i, j, choices) in &slots {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for p in &out {
            for v in choices {
                let mut q = p.clone();
                q.matrix[i * r + j] = v.clone();
                q.matrix[j * r + i] = -v;
                next.push(q);
            }
        }
        out = next;
    }
    out.into_iter().map(SymplecticPairing).collect()
}

/// `|C²_altb(A, C)| = Π_{i<j} |C[gcd(n_i, n_j)]|`.
pub fn alternating_pairing_count(group: &FinAbGroup, ctx: &CoeffContext) -> u128 {
    let m = group.moduli();
    let mut count: u128 = 1;
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            count *= ctx.torsion_order(m[i].gcd(&m[j]));
        }
    }
    count
}
