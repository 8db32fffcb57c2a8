//! Finite groups given by Cayley tables, class-2 detection, and recognition
//! of a central extension `1 → C → G → A → 1` as an explicit `H_β(A)`.

use std::collections::BTreeSet;

use crate::cocycles::{bimult_representative, brute_refinement, quadratic_refinement, CochainFunction, Cocycle};
use crate::error::{Error, Result, Stage};
use crate::fab::{Coeff, CoeffContext, Elem, FinAbGroup, Qz};
use crate::heisenberg::{CoeffEmbedding, HElem, HeisenbergGroup};
use crate::pairings::beta_from_alternating;
use crate::pairings::Pairing;

/// A finite group on `0..n` with a validated multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    n: usize,
    identity: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

impl FiniteGroup {
    /// Checks closure, identity, inverses and associativity.
    pub fn new(n: usize, identity: usize, table: Vec<u32>) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::InvalidTable("a group has at least one element".into()));
        }
        if table.len() != n * n {
            return Err(Error::InvalidTable(format!("{} entries for order {n}", table.len())));
        }
        if identity >= n {
            return Err(Error::InvalidTable(format!("identity index {identity} out of range")));
        }
        if let Some(k) = table.iter().position(|&v| v as usize >= n) {
            return Err(Error::InvalidTable(format!(
                "entry {} at row {}, column {} out of range",
                table[k],
                k / n,
                k % n
            )));
        }
        for a in 0..n {
            if table[identity * n + a] as usize != a || table[a * n + identity] as usize != a {
                return Err(Error::InvalidTable(format!("{identity} is not a two-sided identity at {a}")));
            }
        }
        let mut inverse = vec![u32::MAX; n];
        for a in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                row[table[a * n + b] as usize] = true;
                col[table[b * n + a] as usize] = true;
                if table[a * n + b] as usize == identity {
                    inverse[a] = b as u32;
                }
            }
            if row.contains(&false) || col.contains(&false) {
                return Err(Error::InvalidTable(format!("row or column {a} is not a permutation")));
            }
        }
        for a in 0..n {
            if table[inverse[a] as usize * n + a] as usize != identity {
                return Err(Error::InvalidTable(format!("{a} has no two-sided inverse")));
            }
        }
        let g = FiniteGroup { n, identity, table, inverse };
        if let Some((a, b, c)) = g.associativity_failure() {
            return Err(Error::InvalidTable(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
        }
        Ok(g)
    }

    pub fn from_fn(n: usize, identity: usize, mul: impl Fn(usize, usize) -> usize) -> Result<FiniteGroup> {
        let table = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| mul(a, b) as u32).collect();
        FiniteGroup::new(n, identity, table)
    }

    /// Light's test: associativity against a generating set reached by right
    /// multiplication suffices.
    fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        let mut reached = vec![false; n];
        reached[self.identity] = true;
        let mut gens = Vec::new();
        let mut frontier = vec![self.identity];
        while let Some(g) = (0..n).find(|&g| !reached[g]) {
            gens.push(g);
            frontier.extend((0..n).filter(|&x| reached[x]));
            while let Some(x) = frontier.pop() {
                for &s in &gens {
                    let y = self.mul(x, s);
                    if !reached[y] {
                        reached[y] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        for &c in &gens {
            for a in 0..n {
                for b in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn elem_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Number of elements of each order, sorted by order.
    pub fn order_census(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for a in 0..self.n {
            *counts.entry(self.elem_order(a)).or_insert(0) += 1;
        }
        counts.into_iter().collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n).filter(|&z| (0..self.n).all(|g| self.mul(z, g) == self.mul(g, z))).collect()
    }

    /// Closure of `gens` under multiplication, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    frontier.push(y);
                }
            }
        }
        (0..self.n).filter(|&x| seen[x]).collect()
    }

    /// `[H, K]`, generated by commutators of elements of `h` and `k`.
    pub fn commutator_of(&self, h: &[usize], k: &[usize]) -> Vec<usize> {
        let comms: BTreeSet<usize> =
            h.iter().flat_map(|&a| k.iter().map(move |&b| (a, b))).map(|(a, b)| self.commutator(a, b)).collect();
        self.generated_subgroup(&comms.into_iter().collect::<Vec<_>>())
    }

    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let all: Vec<usize> = (0..self.n).collect();
        self.commutator_of(&all, &all)
    }

    pub fn is_subgroup(&self, s: &[usize]) -> bool {
        let set: BTreeSet<usize> = s.iter().copied().collect();
        set.contains(&self.identity)
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, self.inv(b)))))
    }

    pub fn is_normal(&self, s: &[usize]) -> bool {
        let set: BTreeSet<usize> = s.iter().copied().collect();
        self.is_subgroup(s)
            && (0..self.n).all(|g| set.iter().all(|&h| set.contains(&self.mul(self.mul(g, h), self.inv(g)))))
    }

    /// `γ_1 = G`, `γ_{i+1} = [γ_i, G]`, up to the first repeated term.
    pub fn lower_central_series(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.n).collect();
        let mut series = vec![all.clone()];
        loop {
            let next = self.commutator_of(series.last().expect("nonempty"), &all);
            if next == *series.last().expect("nonempty") {
                break;
            }
            series.push(next);
        }
        series
    }

    /// Length of the lower central series down to `1`; `None` if it stalls above `1`.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let series = self.lower_central_series();
        (series.last().map(Vec::len) == Some(1)).then(|| series.len() - 1)
    }

    /// `[G, G] ⊆ Z(G)`.
    pub fn is_class_at_most_2(&self) -> bool {
        let z: BTreeSet<usize> = self.center().into_iter().collect();
        self.commutator_subgroup().iter().all(|x| z.contains(x))
    }

    /// The three equivalent characterizations of class at most two, computed
    /// independently.
    pub fn class_two_verdicts(&self) -> ClassTwoVerdicts {
        let by_series = self.nilpotency_class().is_some_and(|c| c <= 2);
        let by_inclusion = self.is_class_at_most_2();
        let descent = descend_commutator(self);
        ClassTwoVerdicts {
            lower_central_series: by_series,
            commutator_in_center: by_inclusion,
            pairing_descends: descent.well_defined && descent.bimultiplicative,
        }
    }

    /// The subgroup on the elements `s` (sorted), reindexed `0..|s|`.
    pub fn subgroup(&self, s: &[usize]) -> Result<FiniteGroup> {
        let mut s = s.to_vec();
        s.sort_unstable();
        s.dedup();
        if !self.is_subgroup(&s) {
            return Err(Error::Precondition("the designated elements do not form a subgroup".into()));
        }
        let pos = |g: usize| s.binary_search(&g).expect("closed");
        let identity = pos(self.identity);
        FiniteGroup::from_fn(s.len(), identity, |a, b| pos(self.mul(s[a], s[b])))
    }

    /// `G/N` with cosets numbered by their lowest element.
    pub fn quotient(&self, normal: &[usize]) -> Result<Quotient> {
        if !self.is_normal(normal) {
            return Err(Error::Precondition("the designated subgroup is not normal".into()));
        }
        let mut coset_of = vec![u32::MAX; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if coset_of[g] == u32::MAX {
                let label = reps.len() as u32;
                for &h in normal {
                    coset_of[self.mul(g, h)] = label;
                }
                reps.push(g);
            }
        }
        let group = FiniteGroup::from_fn(reps.len(), coset_of[self.identity] as usize, |a, b| {
            coset_of[self.mul(reps[a], reps[b])] as usize
        })?;
        Ok(Quotient { group, coset_of: coset_of.into_iter().map(|c| c as usize).collect(), reps })
    }

    /// `n`, identity, then the rows of the table.
    pub fn to_cayley_string(&self) -> String {
        let mut out = format!("{}\n{}\n", self.n, self.identity);
        for a in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|b| self.mul(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassTwoVerdicts {
    pub lower_central_series: bool,
    pub commutator_in_center: bool,
    pub pairing_descends: bool,
}

impl ClassTwoVerdicts {
    pub fn consistent(&self) -> bool {
        self.lower_central_series == self.commutator_in_center && self.commutator_in_center == self.pairing_descends
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// Coset label of each element of the parent group.
    pub coset_of: Vec<usize>,
    /// Lowest element of each coset.
    pub reps: Vec<usize>,
}

/// The commutator map read on `G/Z(G) × G/Z(G)`, with its properties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorPairing {
    pub quotient: Quotient,
    /// `values[p * q + r]` is `[x, y]` for the lowest representatives of cosets `p`, `r`.
    pub values: Vec<usize>,
    pub well_defined: bool,
    pub alternating: bool,
    pub bimultiplicative: bool,
    pub nondegenerate: bool,
}

impl CommutatorPairing {
    pub fn eval(&self, p: usize, r: usize) -> usize {
        self.values[p * self.quotient.group.order() + r]
    }
}

fn descend_commutator(g: &FiniteGroup) -> CommutatorPairing {
    let z = g.center();
    let quotient = g.quotient(&z).expect("the center is normal");
    let q = quotient.group.order();
    let n = g.order();
    let mut values = vec![0; q * q];
    for p in 0..q {
        for r in 0..q {
            values[p * q + r] = g.commutator(quotient.reps[p], quotient.reps[r]);
        }
    }
    let well_defined =
        (0..n).all(|a| (0..n).all(|b| g.commutator(a, b) == values[quotient.coset_of[a] * q + quotient.coset_of[b]]));
    let alternating = (0..q).all(|p| values[p * q + p] == g.identity());
    let bimultiplicative = (0..n).all(|a| {
        (0..n).all(|b| (0..n).all(|c| g.commutator(g.mul(a, b), c) == g.mul(g.commutator(a, c), g.commutator(b, c))))
    });
    let nondegenerate =
        (0..q).all(|p| p == quotient.group.identity() || (0..q).any(|r| values[p * q + r] != g.identity()));
    CommutatorPairing { quotient, values, well_defined, alternating, bimultiplicative, nondegenerate }
}

/// The commutator pairing of a class-2 group on `G/Z(G)`.
pub fn commutator_pairing(g: &FiniteGroup) -> Result<CommutatorPairing> {
    let p = descend_commutator(g);
    if !g.is_class_at_most_2() {
        let failed = if !p.bimultiplicative { "bimultiplicativity" } else { "well-definedness" };
        return Err(Error::Precondition(format!("[G,G] ⊄ Z(G); the commutator on G/Z(G) fails {failed}")));
    }
    Ok(p)
}

/// A finite abelian group identified with a product of cyclic groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianStructure {
    pub group: FinAbGroup,
    /// Coordinates of each element of the table group.
    pub coords: Vec<Elem>,
    /// Table element at each position of `group.elements()`.
    pub element_at: Vec<usize>,
}

impl AbelianStructure {
    pub fn elem(&self, g: usize) -> &Elem {
        &self.coords[g]
    }

    pub fn element(&self, x: &Elem) -> usize {
        self.element_at[self.group.index_of(x)]
    }
}

/// Decomposes an abelian table group by repeatedly splitting off a cyclic
/// subgroup of maximal order. Moduli are returned in increasing order.
pub fn abelian_structure(b: &FiniteGroup) -> Result<AbelianStructure> {
    if !b.is_abelian() {
        return Err(Error::Precondition("the group is not abelian".into()));
    }
    let gens = cyclic_decomposition(b)?;
    let moduli: Vec<u64> = gens.iter().map(|&g| b.elem_order(g) as u64).collect();
    let group = FinAbGroup::new(moduli.iter().copied())?;
    let gens: Vec<usize> = gens.into_iter().filter(|&g| b.elem_order(g) > 1).collect();
    let mut element_at = Vec::with_capacity(group.order());
    for x in group.elements() {
        let mut g = b.identity();
        for (&k, &gen) in x.coords().iter().zip(&gens) {
            for _ in 0..k {
                g = b.mul(g, gen);
            }
        }
        element_at.push(g);
    }
    let mut coords = vec![None; b.order()];
    for (i, &g) in element_at.iter().enumerate() {
        if coords[g].is_some() {
            return Err(Error::Invariant("decomposition is not injective".into()));
        }
        coords[g] = Some(group.elem_at(i));
    }
    if element_at.len() != b.order() {
        return Err(Error::Invariant("decomposition is not surjective".into()));
    }
    let coords: Vec<Elem> = coords.into_iter().map(|c| c.expect("bijective")).collect();
    for (i, x) in group.elements().enumerate() {
        for (j, y) in group.elements().enumerate() {
            if b.mul(element_at[i], element_at[j]) != element_at[group.index_of(&group.add(&x, &y))] {
                return Err(Error::Invariant(format!("decomposition is not a homomorphism at {x}, {y}")));
            }
        }
    }
    Ok(AbelianStructure { group, coords, element_at })
}

/// Generators of cyclic summands, in increasing order of element order.
fn cyclic_decomposition(b: &FiniteGroup) -> Result<Vec<usize>> {
    if b.order() == 1 {
        return Ok(Vec::new());
    }
    let g = (0..b.order()).max_by_key(|&x| (b.elem_order(x), std::cmp::Reverse(x))).expect("nonempty");
    let cyclic = b.generated_subgroup(&[g]);
    let q = b.quotient(&cyclic)?;
    let rest = cyclic_decomposition(&q.group)?;
    let mut out = Vec::with_capacity(rest.len() + 1);
    for coset in rest {
        let k = q.group.elem_order(coset);
        let lift = (0..b.order())
            .find(|&x| q.coset_of[x] == coset && b.elem_order(x) == k)
            .ok_or_else(|| Error::Invariant(format!("no lift of order {k}")))?;
        out.push(lift);
    }
    out.push(g);
    Ok(out)
}

/// A central subgroup `C`, the quotient `A = G/C`, and the section choosing
/// the lowest element of each coset (the identity for `C` itself).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralExtensionData {
    pub g: FiniteGroup,
    /// Sorted elements of `C`.
    pub central: Vec<usize>,
    /// `C` as a product of cyclic groups.
    pub c_structure: AbelianStructure,
    /// Coefficient context `⊕ (1/m_j)Z/Z` matching `c_structure`.
    pub context: CoeffContext,
    pub quotient: Quotient,
    pub a_structure: AbelianStructure,
    /// `s(a)` for each position of `A`.
    pub section: Vec<usize>,
}

impl CentralExtensionData {
    pub fn a(&self) -> &FinAbGroup {
        &self.a_structure.group
    }

    /// `A`-coordinates of the image of `g`.
    pub fn project(&self, g: usize) -> &Elem {
        self.a_structure.elem(self.quotient.coset_of[g])
    }

    /// Coefficient value of a central element.
    pub fn coeff_of(&self, z: usize) -> Result<Coeff> {
        let k = self.central.binary_search(&z).map_err(|_| Error::Invariant(format!("{z} is not in C")))?;
        let x = self.c_structure.elem(k);
        Ok(Coeff::from_coords(
            x.coords().iter().zip(self.c_structure.group.moduli()).map(|(&v, &m)| Qz::new(v as i64, m)),
        ))
    }

    /// Central element with a given coefficient value.
    pub fn central_of(&self, v: &Coeff) -> usize {
        let coords: Vec<i64> = v
            .coords()
            .iter()
            .zip(self.c_structure.group.moduli())
            .map(|(q, &m)| (q.num() * (m / q.den())) as i64)
            .collect();
        let x = self.c_structure.group.elem(&coords).expect("rank matches");
        self.central[self.c_structure.element(&x)]
    }
}

/// Reads off the cocycle of `1 → C → G → G/C → 1` from the section
/// `s(x) s(y) = c(x, y) · s(x + y)`.
pub fn extract_cocycle(g: &FiniteGroup, central: &[usize]) -> Result<(CentralExtensionData, Cocycle)> {
    let mut central = central.to_vec();
    central.sort_unstable();
    central.dedup();
    if !g.is_subgroup(&central) {
        return Err(Error::Precondition("C is not a subgroup".into()));
    }
    let z: BTreeSet<usize> = g.center().into_iter().collect();
    if let Some(&bad) = central.iter().find(|x| !z.contains(x)) {
        return Err(Error::Precondition(format!("C is not central: element {bad} is not in Z(G)")));
    }
    let quotient = g.quotient(&central)?;
    if !quotient.group.is_abelian() {
        return Err(Error::Precondition("G/C is not abelian".into()));
    }
    let c_structure = abelian_structure(&g.subgroup(&central)?)?;
    let context = CoeffContext::finite(c_structure.group.moduli().iter().copied())?;
    let a_structure = abelian_structure(&quotient.group)?;
    let section: Vec<usize> = a_structure
        .element_at
        .iter()
        .map(|&coset| if coset == quotient.group.identity() { g.identity() } else { quotient.reps[coset] })
        .collect();
    let data = CentralExtensionData { g: g.clone(), central, c_structure, context, quotient, a_structure, section };
    let cocycle = section_cocycle(&data)?;
    Ok((data, cocycle))
}

fn section_cocycle(data: &CentralExtensionData) -> Result<Cocycle> {
    let g = &data.g;
    let a = data.a();
    let n = a.order();
    let mut values = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let sum = a.index_of(&a.add(&a.elem_at(x), &a.elem_at(y)));
            let zval = g.mul(g.mul(data.section[x], data.section[y]), g.inv(data.section[sum]));
            values.push(data.coeff_of(zval)?);
        }
    }
    let cocycle = Cocycle::from_table(a, &data.context, values)?;
    cocycle.verify().map_err(|v| Error::NotACocycle(v.to_string()))?;
    Ok(cocycle)
}

impl CentralExtensionData {
    /// The same extension with `A` re-coordinatized so that the standard
    /// generators become `images` (a basis of `A`).
    pub fn rebase(&self, images: &[Elem]) -> Result<(CentralExtensionData, Cocycle)> {
        let a = self.a();
        let alpha: Vec<usize> = a
            .elements()
            .map(|x| {
                let y = x.coords().iter().zip(images).fold(a.zero(), |acc, (&k, g)| a.add(&acc, &a.scale(g, k as i64)));
                a.index_of(&y)
            })
            .collect();
        let mut inverse = vec![usize::MAX; a.order()];
        for (i, &j) in alpha.iter().enumerate() {
            if inverse[j] != usize::MAX {
                return Err(Error::Precondition("the proposed generators are not a basis".into()));
            }
            inverse[j] = i;
        }
        let element_at: Vec<usize> = alpha.iter().map(|&j| self.a_structure.element_at[j]).collect();
        let coords: Vec<Elem> = self.a_structure.coords.iter().map(|x| a.elem_at(inverse[a.index_of(x)])).collect();
        let section = alpha.iter().map(|&j| self.section[j]).collect();
        let data = CentralExtensionData {
            a_structure: AbelianStructure { group: a.clone(), coords, element_at },
            section,
            ..self.clone()
        };
        let cocycle = section_cocycle(&data)?;
        Ok((data, cocycle))
    }
}

/// Largest number of candidate bases of `A` tried when looking for an
/// equivalence over the original coefficients.
pub const BASIS_SEARCH_LIMIT: usize = 100_000;

/// Tuples `(g_1, ..., g_r)` with `g_i` of order `n_i`, the standard basis first.
fn candidate_bases(a: &FinAbGroup) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let by_order: Vec<Vec<Elem>> =
        a.moduli().iter().map(|&n| a.elements().filter(|x| a.elem_order(x) == n).collect()).collect();
    let r = a.rank();
    let mut idx = vec![0usize; r];
    let mut done = by_order.iter().any(Vec::is_empty);
    let standard = a.generators();
    std::iter::once(standard.clone()).chain(std::iter::from_fn(move || {
        while !done {
            let tuple: Vec<Elem> = idx.iter().zip(&by_order).map(|(&k, v)| v[k].clone()).collect();
            let mut k = 0;
            while k < r {
                idx[k] += 1;
                if idx[k] < by_order[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            done = k == r;
            if tuple != standard {
                return Some(tuple);
            }
        }
        None
    }))
}

/// Whether `c − β(ω_c)` has a refinement over the (finite) coefficients of `c`.
fn splits_against_beta(c: &Cocycle) -> Result<bool> {
    let beta = beta_from_alternating(&c.omega()?);
    match quadratic_refinement(&c.sub(&Cocycle::from_pairing(beta))?) {
        Ok(_) => Ok(true),
        Err(Error::NoRefinement(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The first basis of `A` (standard basis first) in which the extension is
/// equivalent to `H_β` over its own coefficients, if any is found.
fn original_basis(data: &CentralExtensionData) -> Result<Option<(CentralExtensionData, Cocycle)>> {
    for images in candidate_bases(data.a()).take(BASIS_SEARCH_LIMIT) {
        let rebased = match data.rebase(&images) {
            Ok(r) => r,
            Err(Error::Precondition(_)) => continue,
            Err(e) => return Err(e),
        };
        if splits_against_beta(&rebased.1)? {
            return Ok(Some(rebased));
        }
    }
    Ok(None)
}

/// `G ≅ H_β(A)` over the divisible hull of `C`, with every ingredient kept
/// for inspection.
#[derive(Clone, Debug)]
pub struct HeisenbergPresentation {
    pub extension: CentralExtensionData,
    /// Extracted cocycle with values in the finite `C`.
    pub cocycle: Cocycle,
    pub embedding: CoeffEmbedding,
    /// `β` over the divisible hull.
    pub beta: Pairing,
    /// `f` with `Δf = ι(c) − β`.
    pub refinement: CochainFunction,
    /// `H_β(A)` over the divisible hull.
    pub target: HeisenbergGroup,
    /// Image of each element of `G`.
    pub iso: Vec<HElem>,
    /// `f₀` with `Δf₀ = c − β` over the original finite `C`, if one exists.
    pub original_refinement: Option<CochainFunction>,
}

impl HeisenbergPresentation {
    pub fn a(&self) -> &FinAbGroup {
        self.extension.a()
    }

    pub fn equivalent_over_original(&self) -> bool {
        self.original_refinement.is_some()
    }

    /// Bijective homomorphism onto its image, identity on `C` and on `A`.
    pub fn verify(&self) -> Result<()> {
        let g = &self.extension.g;
        let n = g.order();
        let mut seen = BTreeSet::new();
        for x in 0..n {
            let img = &self.iso[x];
            if !seen.insert(img.clone()) {
                return Err(Error::Invariant(format!("element {x} collides with another image {img}")));
            }
            if &img.x != self.extension.project(x) {
                return Err(Error::Invariant(format!("image of {x} does not lie over its class in A")));
            }
            for y in 0..n {
                let lhs = &self.iso[g.mul(x, y)];
                let rhs = self.target.mul(img, &self.iso[y]);
                if *lhs != rhs {
                    return Err(Error::Invariant(format!("ψ({x}·{y}) = {lhs} but ψ({x})·ψ({y}) = {rhs}")));
                }
            }
        }
        for &z in &self.extension.central {
            let expected = self.target.central(self.embedding.apply(&self.extension.coeff_of(z)?));
            if self.iso[z] != expected {
                return Err(Error::Invariant(format!("central element {z} maps to {} not {expected}", self.iso[z])));
            }
        }
        let hit: BTreeSet<&Elem> = self.iso.iter().map(|h| &h.x).collect();
        if hit.len() != self.a().order() {
            return Err(Error::Invariant("the projection to A is not surjective".into()));
        }
        Ok(())
    }
}

/// The recognition pipeline for a class-2 group and a designated central
/// subgroup.
pub fn recognize(g: &FiniteGroup, central: &[usize]) -> Result<HeisenbergPresentation> {
    if !g.is_class_at_most_2() {
        return Err(Error::at(Stage::ClassCheck)(Error::Hypothesis(
            "[G,G] ⊄ Z(G): the group does not have nilpotency class at most two".into(),
        )));
    }
    let (extension, cocycle) = extract_cocycle(g, central).map_err(Error::at(Stage::Extraction))?;
    let (extension, cocycle) = match original_basis(&extension).map_err(Error::at(Stage::Extraction))? {
        Some(rebased) => rebased,
        None => (extension, cocycle),
    };
    let embedding = CoeffEmbedding::inclusion(&extension.context);
    let pushed = HeisenbergGroup::new(cocycle.clone())
        .and_then(|h| h.pushforward(&embedding))
        .map_err(Error::at(Stage::Pushforward))?;
    let (beta, refinement) = bimult_representative(pushed.cocycle()).map_err(Error::at(Stage::Representative))?;
    let target = HeisenbergGroup::new(Cocycle::from_pairing(beta.clone())).map_err(Error::at(Stage::Representative))?;

    let original_refinement = (|| -> Result<Option<CochainFunction>> {
        let beta0 = beta.map_coeffs(&extension.context, Coeff::clone)?;
        let diff = cocycle.sub(&Cocycle::from_pairing(beta0))?;
        let exponent = extension.context.moduli().map_or(1, |ms| ms.iter().fold(1u64, |a, &m| num_integer::lcm(a, m)));
        match brute_refinement(&diff, exponent) {
            Ok(found) => Ok(found),
            Err(Error::SearchSpace { .. }) => match quadratic_refinement(&diff) {
                Ok(f) => Ok(Some(f)),
                Err(Error::NoRefinement(_)) => Ok(None),
                Err(e) => Err(e),
            },
            Err(e) => Err(e),
        }
    })()
    .map_err(Error::at(Stage::Equivalence))?;

    let mut iso = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let a = extension.project(x).clone();
        let ai = extension.a().index_of(&a);
        let zval = g.mul(x, g.inv(extension.section[ai]));
        let t = extension.coeff_of(zval).map_err(Error::at(Stage::Equivalence))?;
        iso.push(HElem::new(&embedding.apply(&t) - refinement.at(ai), a));
    }
    let p =
        HeisenbergPresentation { extension, cocycle, embedding, beta, refinement, target, iso, original_refinement };
    p.verify().map_err(Error::at(Stage::Verification))?;
    Ok(p)
}

/// `ω_β(x, y) = ι([s(x), s(y)])` for all `x, y ∈ A`.
pub fn verify_omega_factorization(p: &HeisenbergPresentation) -> bool {
    let g = &p.extension.g;
    let a = p.a();
    let omega = p.beta.omega();
    for (i, x) in a.elements().enumerate() {
        for (j, y) in a.elements().enumerate() {
            let comm = g.commutator(p.extension.section[i], p.extension.section[j]);
            let Ok(v) = p.extension.coeff_of(comm) else { return false };
            if omega.eval(&x, &y) != p.embedding.apply(&v) {
                return false;
            }
        }
    }
    true
}

pub fn cyclic(n: usize) -> FiniteGroup {
    FiniteGroup::from_fn(n, 0, |a, b| (a + b) % n).expect("cyclic group")
}

pub fn klein() -> FiniteGroup {
    FiniteGroup::from_fn(4, 0, |a, b| a ^ b).expect("Klein group")
}

/// `r^k s^e` at index `e·n + k`.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 1 {
        return Err(Error::Precondition("dihedral(n) needs n ≥ 1".into()));
    }
    FiniteGroup::from_fn(2 * n, 0, |x, y| {
        let (e, a) = (x / n, x % n);
        let (f, b) = (y / n, y % n);
        let k = if e == 0 { (a + b) % n } else { (a + n - b) % n };
        ((e + f) % 2) * n + k
    })
}

/// `±1, ±i, ±j, ±k` at index `4·sign + unit`.
pub fn quaternion8() -> FiniteGroup {
    // unit products: (sign, unit) for 1, i, j, k
    const PROD: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    FiniteGroup::from_fn(8, 0, |x, y| {
        let (s, u) = PROD[x % 4][y % 4];
        ((x / 4 + y / 4 + s) % 2) * 4 + u
    })
    .expect("quaternion group")
}

/// Upper unitriangular 3×3 matrices over `Z/m`, `(a, b, c)` at `(a·m + b)·m + c`
/// for the matrix with `a, b` above the diagonal and `c` in the corner.
pub fn unitriangular3(m: usize) -> Result<FiniteGroup> {
    if m < 1 {
        return Err(Error::Precondition("unitriangular(3, Z/m) needs m ≥ 1".into()));
    }
    let split = |x: usize| (x / (m * m), (x / m) % m, x % m);
    FiniteGroup::from_fn(m * m * m, 0, |x, y| {
        let (a, b, c) = split(x);
        let (a2, b2, c2) = split(y);
        (((a + a2) % m) * m + (b + b2) % m) * m + (c + c2 + a * b2) % m
    })
}

/// Permutations of `{0, 1, 2}` in lexicographic order, composed right to left.
pub fn symmetric3() -> FiniteGroup {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    FiniteGroup::from_fn(6, 0, |x, y| {
        let p = perms[x];
        let q = perms[y];
        let r = [p[q[0]], p[q[1]], p[q[2]]];
        perms.iter().position(|s| *s == r).expect("permutation")
    })
    .expect("symmetric group")
}

/// Looks up a built-in group: `d4`, `dihedral(n)`, `q8`, `quaternion8`,
/// `unitriangular(3,Z/m)` (or `u3(m)`), `s3`, `symmetric3`, `cyclic(n)`, `klein`.
pub fn builtin(name: &str) -> Result<FiniteGroup> {
    let key: String = name.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let arg = |prefix: &str| -> Option<usize> { key.strip_prefix(prefix)?.strip_suffix(')')?.parse().ok() };
    match key.as_str() {
        "d4" => return dihedral(4),
        "q8" | "quaternion8" => return Ok(quaternion8()),
        "s3" | "symmetric3" => return Ok(symmetric3()),
        "klein" | "v4" => return Ok(klein()),
        _ => {}
    }
    if let Some(n) = arg("dihedral(") {
        return dihedral(n);
    }
    if let Some(n) = arg("cyclic(") {
        if n >= 1 {
            return Ok(cyclic(n));
        }
    }
    if let Some(m) = arg("unitriangular(3,z/").or_else(|| arg("u3(")) {
        return unitriangular3(m);
    }
    if let Some(n) = key.strip_prefix('d').and_then(|s| s.parse().ok()) {
        return dihedral(n);
    }
    Err(Error::UnknownBuiltin(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycles::cohomologous;
    use crate::heisenberg::HeisenbergGroup;

    fn all_builtins() -> Vec<(&'static str, FiniteGroup)> {
        [
            "d4",
            "q8",
            "s3",
            "klein",
            "cyclic(6)",
            "dihedral(3)",
            "dihedral(6)",
            "unitriangular(3,Z/2)",
            "unitriangular(3,Z/3)",
            "u3(4)",
        ]
        .into_iter()
        .map(|n| (n, builtin(n).unwrap()))
        .collect()
    }

    #[test]
    fn builtins_have_expected_shapes() {
        assert_eq!(builtin("d4").unwrap().order(), 8);
        assert_eq!(builtin("q8").unwrap().order_census(), vec![(1, 1), (2, 1), (4, 6)]);
        assert_eq!(builtin("d4").unwrap().order_census(), vec![(1, 1), (2, 5), (4, 2)]);
        let u2 = builtin("unitriangular(3, Z/2)").unwrap();
        assert_eq!(u2.order_census(), builtin("d4").unwrap().order_census());
        assert!(builtin("cyclic(7)").unwrap().is_abelian());
        assert!(!builtin("s3").unwrap().is_abelian());
        assert!(matches!(builtin("monster"), Err(Error::UnknownBuiltin(_))));
    }

    #[test]
    fn unitriangular_mod_2_is_dihedral() {
        // r = (1,1,0) has order 4, s = (1,0,0) has order 2, s r s = r⁻¹
        let u = unitriangular3(2).unwrap();
        let d = dihedral(4).unwrap();
        let (r, s) = (6usize, 4usize);
        assert_eq!(u.elem_order(r), 4);
        let mut map = [0; 8];
        for e in 0..2 {
            for k in 0..4 {
                let mut x = u.identity();
                for _ in 0..k {
                    x = u.mul(x, r);
                }
                if e == 1 {
                    x = u.mul(x, s);
                }
                map[e * 4 + k] = x;
            }
        }
        let distinct: BTreeSet<_> = map.iter().collect();
        assert_eq!(distinct.len(), 8);
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(map[d.mul(a, b)], u.mul(map[a], map[b]));
            }
        }
    }

    #[test]
    fn centers_and_commutators() {
        let d = builtin("d4").unwrap();
        assert_eq!(d.center().len(), 2);
        assert_eq!(d.commutator_subgroup().len(), 2);
        assert!(d.is_class_at_most_2());
        let s = symmetric3();
        assert_eq!(s.center(), vec![0]);
        assert_eq!(s.commutator_subgroup().len(), 3);
        assert!(!s.is_class_at_most_2());
        assert!(klein().is_class_at_most_2());
        assert_eq!(s.nilpotency_class(), None);
        assert_eq!(d.nilpotency_class(), Some(2));
        assert_eq!(cyclic(5).nilpotency_class(), Some(1));
        assert_eq!(cyclic(1).nilpotency_class(), Some(0));
        assert_eq!(dihedral(8).unwrap().nilpotency_class(), Some(3));
    }

    #[test]
    fn class_two_characterizations_agree() {
        for (name, g) in all_builtins() {
            let v = g.class_two_verdicts();
            assert!(v.consistent(), "{name}: {v:?}");
        }
        let d8 = dihedral(8).unwrap();
        assert!(d8.class_two_verdicts().consistent());
        assert!(!d8.is_class_at_most_2());
        let s = descend_commutator(&symmetric3());
        assert!(!(s.well_defined && s.bimultiplicative));
        assert!(commutator_pairing(&symmetric3()).is_err());
    }

    #[test]
    fn commutator_pairings() {
        for name in ["d4", "q8", "unitriangular(3,Z/3)"] {
            let g = builtin(name).unwrap();
            let p = commutator_pairing(&g).unwrap();
            assert!(p.well_defined && p.alternating && p.bimultiplicative && p.nondegenerate, "{name}");
            assert_eq!(p.quotient.group.order(), if name.contains("Z/3") { 9 } else { 4 });
        }
        let u3 = commutator_pairing(&unitriangular3(3).unwrap()).unwrap();
        let g = unitriangular3(3).unwrap();
        assert!(u3.values.iter().all(|&v| v == g.identity() || g.elem_order(v) == 3));
    }

    #[test]
    fn abelian_structures() {
        let s = abelian_structure(&cyclic(6)).unwrap();
        assert_eq!(s.group.moduli(), &[6]);
        let s = abelian_structure(&klein()).unwrap();
        assert_eq!(s.group.moduli(), &[2, 2]);
        let d = builtin("d4").unwrap();
        let q = d.quotient(&d.center()).unwrap();
        assert_eq!(abelian_structure(&q.group).unwrap().group.moduli(), &[2, 2]);
        let z12 = FiniteGroup::from_fn(24, 0, |a, b| ((a / 2 + b / 2) % 12) * 2 + (a + b) % 2).unwrap();
        assert_eq!(abelian_structure(&z12).unwrap().group.moduli(), &[2, 12]);
        assert_eq!(abelian_structure(&cyclic(1)).unwrap().group.order(), 1);
        assert!(abelian_structure(&symmetric3()).is_err());
    }

    #[test]
    fn extraction_from_dihedral() {
        let d = builtin("d4").unwrap();
        let (data, c) = extract_cocycle(&d, &d.center()).unwrap();
        assert_eq!(data.a().moduli(), &[2, 2]);
        assert_eq!(data.context, CoeffContext::finite([2]).unwrap());
        assert!(c.is_cocycle());
        assert!(c.omega().unwrap().is_nondegenerate());
        assert!(extract_cocycle(&d, &[0, 1]).is_err());
        let all: Vec<usize> = (0..8).collect();
        assert!(extract_cocycle(&d, &all).is_err());
    }

    #[test]
    fn extraction_from_abelian_group() {
        let g = cyclic(4);
        let (_, c) = extract_cocycle(&g, &[0]).unwrap();
        assert!(c.values().iter().all(Coeff::is_zero));
        let (_, c) = extract_cocycle(&g, &[0, 2]).unwrap();
        assert!(c.is_symmetric());
        let pushed = c.map_coeffs(&c.context().divisible_hull(), Coeff::clone).unwrap();
        assert!(quadratic_refinement(&pushed).is_ok());
        assert!(quadratic_refinement(&c).is_err());
    }

    #[test]
    fn recognition_examples() {
        let d = builtin("d4").unwrap();
        let p = recognize(&d, &d.center()).unwrap();
        assert!(p.equivalent_over_original());
        assert!(verify_omega_factorization(&p));
        let q = builtin("q8").unwrap();
        let pq = recognize(&q, &q.center()).unwrap();
        assert!(!pq.equivalent_over_original());
        assert!(verify_omega_factorization(&pq));
        assert_eq!(p.beta.omega(), pq.beta.omega());
        let u = unitriangular3(3).unwrap();
        let pu = recognize(&u, &u.center()).unwrap();
        assert_eq!(pu.a().moduli(), &[3, 3]);
        assert!(pu.beta.omega().is_nondegenerate());
        assert!(verify_omega_factorization(&pu));
        let err = recognize(&symmetric3(), &[0]).unwrap_err();
        assert!(matches!(err, Error::Stage { stage: Stage::ClassCheck, .. }));
        assert!(err.to_string().contains("[G,G] ⊄ Z(G)"));
        let k = klein();
        let pk = recognize(&k, &[0]).unwrap();
        assert!(pk.beta.is_zero());
        assert!(verify_omega_factorization(&pk));
    }

    #[test]
    fn different_sections_give_cohomologous_cocycles() {
        let d = builtin("d4").unwrap();
        let (data, c) = extract_cocycle(&d, &d.center()).unwrap();
        // the highest representative of each nontrivial coset
        let a = data.a();
        let n = a.order();
        let alt: Vec<usize> = (0..n)
            .map(|i| {
                let coset = data.a_structure.element_at[i];
                if i == 0 {
                    d.identity()
                } else {
                    (0..d.order()).rev().find(|&x| data.quotient.coset_of[x] == coset).unwrap()
                }
            })
            .collect();
        let mut values = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let s = a.index_of(&a.add(&a.elem_at(x), &a.elem_at(y)));
                values.push(data.coeff_of(d.mul(d.mul(alt[x], alt[y]), d.inv(alt[s]))).unwrap());
            }
        }
        let c2 = Cocycle::from_table(a, &data.context, values).unwrap();
        assert!(c2.is_cocycle());
        assert!(cohomologous(&c, &c2).unwrap().cohomologous);
    }

    #[test]
    fn cayley_round_trip_preserves_omega() {
        use crate::fab::FinAbGroup;
        let a = FinAbGroup::new([2, 2]).unwrap();
        let ctx = CoeffContext::finite([2]).unwrap();
        let beta = Pairing::from_entries(&a, &ctx, [(0, 1, Coeff::scalar(Qz::new(1, 2)))]).unwrap();
        let h = HeisenbergGroup::new(Cocycle::from_pairing(beta)).unwrap();
        let table = h.cayley_table().unwrap();
        let els = h.elements().unwrap();
        let c_sub: Vec<usize> = (0..els.len()).filter(|&i| els[i].x.is_zero()).collect();
        let p = recognize(&table, &c_sub).unwrap();
        assert!(verify_omega_factorization(&p));
        assert!(!p.beta.omega().is_zero());
    }

    #[test]
    fn cayley_text_round_trip() {
        let g = builtin("q8").unwrap();
        let s = g.to_cayley_string();
        assert!(s.starts_with("8\n0\n"));
        assert_eq!(s.lines().count(), 10);
    }

    #[test]
    fn invalid_tables_are_rejected() {
        assert!(FiniteGroup::new(2, 0, vec![0, 1, 1, 1]).is_err());
        assert!(FiniteGroup::new(2, 0, vec![0, 1, 1]).is_err());
        assert!(FiniteGroup::new(2, 1, vec![0, 1, 1, 0]).is_err());
        // a Latin square with identity that is not associative
        let t: Vec<u32> = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(matches!(FiniteGroup::new(5, 0, t), Err(Error::InvalidTable(_))));
    }
}
