//! Exact arithmetic in ℚ/ℤ, coefficient groups C ⊆ (ℚ/ℤ)^k, and finite
//! abelian groups `Z/n1 x ... x Z/nr` with coordinate elements.
//!
//! Everything here is written additively: the identity is `0` and group
//! products are sums.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// An element `num/den + ℤ` of ℚ/ℤ in reduced canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Qz {
    num: u64,
    den: u64,
}

impl Qz {
    pub const ZERO: Qz = Qz { num: 0, den: 1 };

    /// The class of `num/den` modulo 1.
    ///
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: u64) -> Qz {
        assert!(den > 0, "zero denominator");
        let r = (num as i128).rem_euclid(den as i128) as u64;
        Qz::reduced(r, den)
    }

    fn reduced(num: u64, den: u64) -> Qz {
        if num == 0 {
            return Qz::ZERO;
        }
        let g = num.gcd(&den);
        Qz { num: num / g, den: den / g }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Least `n ≥ 1` with `n·a = 0`; this is the reduced denominator.
    pub fn order(self) -> u64 {
        self.den
    }

    /// `k·a` for any integer `k`.
    pub fn scale(self, k: i64) -> Qz {
        let prod = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Qz::reduced(prod as u64, self.den)
    }

    /// The canonical solution `b` of `n·b = a` in ℚ/ℤ: the one with the
    /// smallest numerator over the denominator `n·den(a)`.
    pub fn divide(self, n: u64) -> Qz {
        assert!(n > 0, "division by zero");
        Qz::reduced(self.num, self.den * n)
    }

    /// All solutions of `n·b = a`, ordered by numerator over `n·den(a)`.
    pub fn divisions(self, n: u64) -> impl Iterator<Item = Qz> {
        let (p, q) = (self.num, self.den);
        (0..n).map(move |k| Qz::reduced(p + k * q, q * n))
    }
}

impl Default for Qz {
    fn default() -> Self {
        Qz::ZERO
    }
}

impl Add for Qz {
    type Output = Qz;

    fn add(self, rhs: Qz) -> Qz {
        let l = self.den.lcm(&rhs.den);
        let n = (self.num as u128 * (l / self.den) as u128 + rhs.num as u128 * (l / rhs.den) as u128) % l as u128;
        Qz::reduced(n as u64, l)
    }
}

impl Neg for Qz {
    type Output = Qz;

    fn neg(self) -> Qz {
        if self.num == 0 {
            self
        } else {
            Qz { num: self.den - self.num, den: self.den }
        }
    }
}

impl Sub for Qz {
    type Output = Qz;

    fn sub(self, rhs: Qz) -> Qz {
        self + (-rhs)
    }
}

/// Ordered by the representative in `[0, 1)`.
impl Ord for Qz {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128)
            .cmp(&(other.num as u128 * self.den as u128))
            .then(self.den.cmp(&other.den))
    }
}

impl PartialOrd for Qz {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Qz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            f.write_str("0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Qz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// An element of (ℚ/ℤ)^k.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coeff(SmallVec<[Qz; 2]>);

impl Coeff {
    pub fn zero(rank: usize) -> Coeff {
        Coeff(SmallVec::from_elem(Qz::ZERO, rank))
    }

    pub fn from_coords(coords: impl IntoIterator<Item = Qz>) -> Coeff {
        Coeff(coords.into_iter().collect())
    }

    /// A rank-one value.
    pub fn scalar(q: Qz) -> Coeff {
        Coeff::from_coords([q])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Qz] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|q| q.is_zero())
    }

    /// Order in (ℚ/ℤ)^k: the lcm of the coordinate denominators.
    pub fn order(&self) -> u64 {
        self.0.iter().fold(1, |acc, q| acc.lcm(&q.den()))
    }

    pub fn scale(&self, k: i64) -> Coeff {
        Coeff(self.0.iter().map(|q| q.scale(k)).collect())
    }

    pub fn add_assign_ref(&mut self, rhs: &Coeff) {
        debug_assert_eq!(self.rank(), rhs.rank());
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a = *a + *b;
        }
    }

    pub fn sub_assign_ref(&mut self, rhs: &Coeff) {
        debug_assert_eq!(self.rank(), rhs.rank());
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a = *a - *b;
        }
    }
}

impl Add for &Coeff {
    type Output = Coeff;

    fn add(self, rhs: &Coeff) -> Coeff {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &Coeff {
    type Output = Coeff;

    fn sub(self, rhs: &Coeff) -> Coeff {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Neg for &Coeff {
    type Output = Coeff;

    fn neg(self) -> Coeff {
        Coeff(self.0.iter().map(|q| -*q).collect())
    }
}

impl Add for Coeff {
    type Output = Coeff;

    fn add(mut self, rhs: Coeff) -> Coeff {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for Coeff {
    type Output = Coeff;

    fn sub(mut self, rhs: Coeff) -> Coeff {
        self.sub_assign_ref(&rhs);
        self
    }
}

impl Neg for Coeff {
    type Output = Coeff;

    fn neg(self) -> Coeff {
        -&self
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        f.write_str("(")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The coefficient group C: either the finite group
/// `(1/m1)ℤ/ℤ x ... x (1/mk)ℤ/ℤ` or the divisible group (ℚ/ℤ)^k.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CoeffContext {
    rank: usize,
    moduli: Option<Vec<u64>>,
}

impl CoeffContext {
    pub fn divisible(rank: usize) -> CoeffContext {
        CoeffContext { rank, moduli: None }
    }

    /// `Z/m1 x ... x Z/mk`, realized inside (ℚ/ℤ)^k by `1 ↦ 1/mj`.
    /// Trivial factors are dropped.
    pub fn finite(moduli: impl IntoIterator<Item = u64>) -> Result<CoeffContext> {
        let mut kept = Vec::new();
        for m in moduli {
            if m == 0 {
                return Err(Error::Precondition("coefficient modulus must be positive".into()));
            }
            if m > 1 {
                kept.push(m);
            }
        }
        Ok(CoeffContext { rank: kept.len(), moduli: Some(kept) })
    }

    /// The trivial coefficient group.
    pub fn trivial() -> CoeffContext {
        CoeffContext { rank: 0, moduli: Some(Vec::new()) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn moduli(&self) -> Option<&[u64]> {
        self.moduli.as_deref()
    }

    pub fn is_divisible(&self) -> bool {
        self.moduli.is_none()
    }

    pub fn is_finite(&self) -> bool {
        self.moduli.is_some()
    }

    pub fn zero(&self) -> Coeff {
        Coeff::zero(self.rank)
    }

    /// The divisible context of the same rank (the ambient (ℚ/ℤ)^k).
    pub fn divisible_hull(&self) -> CoeffContext {
        CoeffContext::divisible(self.rank)
    }

    pub fn contains(&self, v: &Coeff) -> bool {
        if v.rank() != self.rank {
            return false;
        }
        match &self.moduli {
            None => true,
            Some(ms) => v.coords().iter().zip(ms).all(|(q, m)| m % q.den() == 0),
        }
    }

    pub fn check(&self, v: &Coeff) -> Result<()> {
        if v.rank() != self.rank {
            return Err(Error::Dimension(format!(
                "coefficient {v} has rank {}, context {self} has rank {}",
                v.rank(),
                self.rank
            )));
        }
        if !self.contains(v) {
            return Err(Error::MalformedElement(format!("{v} does not lie in {self}")));
        }
        Ok(())
    }

    /// The canonical solution of `n·b = a` inside this context.
    ///
    /// Coordinatewise, the solution with the smallest numerator over
    /// `n·den` that lies in the context is returned.
    pub fn divide(&self, a: &Coeff, n: u64) -> Result<Coeff> {
        self.check(a)?;
        if n == 0 {
            return Err(Error::Precondition("division by zero".into()));
        }
        match &self.moduli {
            None => Ok(Coeff(a.0.iter().map(|q| q.divide(n)).collect())),
            Some(ms) => {
                let mut out = SmallVec::new();
                for (q, &m) in a.0.iter().zip(ms) {
                    let b = q
                        .divisions(n)
                        .find(|b| m % b.den() == 0)
                        .ok_or_else(|| Error::NotDivisible(format!("{q} is not divisible by {n} in Z/{m}")))?;
                    out.push(b);
                }
                Ok(Coeff(out))
            }
        }
    }

    /// Order of the m-torsion subgroup C[m].
    pub fn torsion_order(&self, m: u64) -> u128 {
        match &self.moduli {
            None => (m as u128).pow(self.rank as u32),
            Some(ms) => ms.iter().map(|&mj| m.gcd(&mj) as u128).product(),
        }
    }

    /// Elements of the m-torsion subgroup C[m], in lexicographic order of numerators.
    pub fn torsion_elements(&self, m: u64) -> Vec<Coeff> {
        let dens: Vec<u64> = match &self.moduli {
            None => vec![m; self.rank],
            Some(ms) => ms.iter().map(|&mj| m.gcd(&mj)).collect(),
        };
        let total: u64 = dens.iter().product();
        (0..total)
            .map(|mut idx| {
                let mut coords: SmallVec<[Qz; 2]> = SmallVec::from_elem(Qz::ZERO, dens.len());
                for (j, &d) in dens.iter().enumerate().rev() {
                    coords[j] = Qz::new((idx % d) as i64, d);
                    idx /= d;
                }
                Coeff(coords)
            })
            .collect()
    }

    /// |C| for finite contexts.
    pub fn order(&self) -> Option<u128> {
        self.moduli.as_ref().map(|ms| ms.iter().map(|&m| m as u128).product())
    }

    /// Values `(k1/m1, ..., kk/mk)` in lexicographic order of `(k1, ..., kk)`.
    ///
    /// Only meaningful for finite contexts; a divisible context yields an error.
    pub fn elements(&self) -> Result<Vec<Coeff>> {
        let ms = self.moduli.as_ref().ok_or_else(|| Error::Precondition(format!("{self} is infinite")))?;
        let total: u64 = ms.iter().product();
        Ok((0..total as usize).map(|i| self.element_at(ms, i)).collect())
    }

    fn element_at(&self, ms: &[u64], mut index: usize) -> Coeff {
        let mut coords: SmallVec<[Qz; 2]> = SmallVec::from_elem(Qz::ZERO, ms.len());
        for (j, &m) in ms.iter().enumerate().rev() {
            coords[j] = Qz::new((index as u64 % m) as i64, m);
            index /= m as usize;
        }
        Coeff(coords)
    }

    /// Position of `v` in [`CoeffContext::elements`].
    pub fn index_of(&self, v: &Coeff) -> Result<usize> {
        self.check(v)?;
        let ms = self.moduli.as_ref().ok_or_else(|| Error::Precondition(format!("{self} is infinite")))?;
        let mut idx = 0usize;
        for (q, &m) in v.0.iter().zip(ms) {
            idx = idx * m as usize + (q.num() * (m / q.den())) as usize;
        }
        Ok(idx)
    }

    /// A uniformly random element; divisible contexts draw from the
    /// `denominator`-torsion.
    pub fn random<R: rand::Rng + ?Sized>(&self, denominator: u64, rng: &mut R) -> Coeff {
        let coords = (0..self.rank).map(|j| {
            let m = match &self.moduli {
                None => denominator,
                Some(ms) => ms[j],
            };
            Qz::new(rng.gen_range(0..m) as i64, m)
        });
        Coeff::from_coords(coords)
    }
}

impl fmt::Display for CoeffContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.moduli {
            None if self.rank == 1 => f.write_str("QZ"),
            None => write!(f, "QZ^{}", self.rank),
            Some(ms) if ms.is_empty() => f.write_str("0"),
            Some(ms) => {
                let parts: Vec<String> = ms.iter().map(|m| format!("Z/{m}")).collect();
                f.write_str(&parts.join(" x "))
            }
        }
    }
}

/// Coordinates of an element of a [`FinAbGroup`], canonical in `[0, n_i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(SmallVec<[u64; 4]>);

impl Elem {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finite abelian group `Z/n1 x ... x Z/nr`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FinAbGroup {
    moduli: Vec<u64>,
    order: usize,
}

impl FinAbGroup {
    /// Factors equal to 1 are dropped; a zero modulus is rejected.
    pub fn new(moduli: impl IntoIterator<Item = u64>) -> Result<FinAbGroup> {
        let mut kept = Vec::new();
        let mut order: usize = 1;
        for n in moduli {
            if n == 0 {
                return Err(Error::Precondition("infinite cyclic factors are not supported".into()));
            }
            if n > 1 {
                order = order.checked_mul(n as usize).ok_or_else(|| Error::TooLarge("group order overflows".into()))?;
                kept.push(n);
            }
        }
        Ok(FinAbGroup { moduli: kept, order })
    }

    pub fn trivial() -> FinAbGroup {
        FinAbGroup { moduli: Vec::new(), order: 1 }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_cyclic(&self) -> bool {
        // Z/a x Z/b is cyclic iff gcd(a, b) = 1
        let mut acc = 1u64;
        for &n in &self.moduli {
            if acc.gcd(&n) != 1 {
                return false;
            }
            acc *= n;
        }
        true
    }

    pub fn exponent(&self) -> u64 {
        self.moduli.iter().fold(1, |acc, n| acc.lcm(n))
    }

    pub fn zero(&self) -> Elem {
        Elem(SmallVec::from_elem(0, self.rank()))
    }

    /// Builds an element from arbitrary integer coordinates, reducing mod `n_i`.
    pub fn elem(&self, coords: &[i64]) -> Result<Elem> {
        if coords.len() != self.rank() {
            return Err(Error::MalformedElement(format!("expected {} coordinates, got {}", self.rank(), coords.len())));
        }
        Ok(Elem(coords.iter().zip(&self.moduli).map(|(&c, &n)| (c as i128).rem_euclid(n as i128) as u64).collect()))
    }

    /// Builds an element from canonical coordinates, rejecting out-of-range values.
    pub fn element(&self, coords: &[u64]) -> Result<Elem> {
        let e = Elem(coords.iter().copied().collect());
        self.check(&e)?;
        Ok(e)
    }

    pub fn check(&self, x: &Elem) -> Result<()> {
        if x.0.len() != self.rank() {
            return Err(Error::MalformedElement(format!(
                "{x} has {} coordinates, {self} has rank {}",
                x.0.len(),
                self.rank()
            )));
        }
        for (i, (&c, &n)) in x.0.iter().zip(&self.moduli).enumerate() {
            if c >= n {
                return Err(Error::MalformedElement(format!("coordinate {} of {x} is out of range for Z/{n}", i + 1)));
            }
        }
        Ok(())
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        Elem(x.0.iter().zip(&y.0).zip(&self.moduli).map(|((&a, &b), &n)| (a + b) % n).collect())
    }

    pub fn neg(&self, x: &Elem) -> Elem {
        Elem(x.0.iter().zip(&self.moduli).map(|(&a, &n)| (n - a) % n).collect())
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, x: &Elem, k: i64) -> Elem {
        Elem(
            x.0.iter()
                .zip(&self.moduli)
                .map(|(&a, &n)| ((a as i128 * k as i128).rem_euclid(n as i128)) as u64)
                .collect(),
        )
    }

    /// lcm of the coordinate orders.
    pub fn elem_order(&self, x: &Elem) -> u64 {
        x.0.iter().zip(&self.moduli).fold(1, |acc, (&a, &n)| acc.lcm(&(n / a.gcd(&n))))
    }

    /// The standard basis `e_1, ..., e_r`.
    pub fn generators(&self) -> Vec<Elem> {
        (0..self.rank()).map(|i| self.basis(i)).collect()
    }

    pub fn basis(&self, i: usize) -> Elem {
        let mut e = self.zero();
        e.0[i] = 1;
        e
    }

    /// All elements in lexicographic order; position `k` is `elem_at(k)`.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order).map(move |k| self.elem_at(k))
    }

    pub fn elem_at(&self, mut index: usize) -> Elem {
        let mut coords: SmallVec<[u64; 4]> = SmallVec::from_elem(0, self.rank());
        for (i, &n) in self.moduli.iter().enumerate().rev() {
            coords[i] = index as u64 % n;
            index /= n as usize;
        }
        Elem(coords)
    }

    pub fn index_of(&self, x: &Elem) -> usize {
        x.0.iter().zip(&self.moduli).fold(0, |acc, (&c, &n)| acc * n as usize + c as usize)
    }

    /// `|Hom(A, C)|`.
    pub fn hom_count(&self, ctx: &CoeffContext) -> u128 {
        self.moduli.iter().map(|&n| ctx.torsion_order(n)).product()
    }
}

/// Index-level addition and negation tables of a [`FinAbGroup`], for
/// exhaustive scans over `A × A` and `A × A × A`.
#[derive(Clone, Debug)]
pub struct AddTable {
    n: usize,
    sum: Vec<u32>,
    neg: Vec<u32>,
}

impl AddTable {
    pub fn new(group: &FinAbGroup) -> AddTable {
        let n = group.order();
        let els: Vec<Elem> = group.elements().collect();
        let mut sum = Vec::with_capacity(n * n);
        for x in &els {
            for y in &els {
                sum.push(group.index_of(&group.add(x, y)) as u32);
            }
        }
        let neg = els.iter().map(|x| group.index_of(&group.neg(x)) as u32).collect();
        AddTable { n, sum, neg }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.sum[x * self.n + y] as usize
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    #[inline]
    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.moduli.iter().map(|n| format!("Z/{n}")).collect();
        f.write_str(&parts.join(" x "))
    }
}
