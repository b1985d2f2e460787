//! Finite groups given by generators in one of three concrete realizations
//! (permutations, abelian tuples, structured semidirect products), with
//! closure enumeration and the usual subgroup machinery on top of an
//! index-based view of the enumerated elements.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::arith;
use crate::structured::StructuredGroup;

/// Default ceiling on the number of enumerated elements.
pub const DEFAULT_ELEMENT_CAP: usize = 2_000_000;
/// Groups up to this order get a full multiplication table.
pub const DEFAULT_TABLE_CAP: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element {element} does not belong to realization {realization}")]
    Mismatch { element: String, realization: String },
    #[error("enumeration exceeded the cap of {cap} elements")]
    EnumerationOverflow { cap: usize },
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, GroupError>;

/// A permutation of `0..n`, stored as its image list.
///
/// Products are read left to right: `a.then(&b)` applies `a` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(GroupError::BadPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// Parses cycle notation such as `(0 1 2)(3,4)` on points `0..degree`.
    /// The empty string and `()` denote the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        let text = text.trim();
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| GroupError::BadPermutation(format!("expected '(' in {text:?}")))?;
            if !rest[..open].trim().is_empty() {
                return Err(GroupError::BadPermutation(format!("stray text in {text:?}")));
            }
            let close = rest[open..]
                .find(')')
                .ok_or_else(|| GroupError::BadPermutation(format!("unbalanced cycle in {text:?}")))?
                + open;
            let body = &rest[open + 1..close];
            let points = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u32>().map_err(|_| GroupError::BadPermutation(format!("bad point {s:?}"))))
                .collect::<Result<Vec<u32>>>()?;
            for &pt in &points {
                if pt as usize >= degree {
                    return Err(GroupError::BadPermutation(format!("point {pt} outside 0..{degree}")));
                }
                if seen[pt as usize] {
                    return Err(GroupError::BadPermutation(format!("point {pt} repeated in {text:?}")));
                }
                seen[pt as usize] = true;
            }
            for (k, &pt) in points.iter().enumerate() {
                images[pt as usize] = points[(k + 1) % points.len()];
            }
            rest = rest[close + 1..].trim_start();
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, point: u32) -> u32 {
        self.0[point as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i as u32);
                i = self.0[i] as usize;
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(u32::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

/// Element of a structured group `F ⋊ H`: a module vector (the blocks of
/// every module, concatenated in module order) and an exponent tuple in `H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StructuredElement {
    pub vec: Vec<u32>,
    pub h: Vec<u32>,
}

impl StructuredElement {
    pub fn new(vec: Vec<u32>, h: Vec<u32>) -> Self {
        Self { vec, h }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Perm(Perm),
    Abelian(Vec<u32>),
    Structured(StructuredElement),
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Perm(p) => write!(f, "{p}"),
            GroupElement::Abelian(t) => {
                let parts: Vec<String> = t.iter().map(u32::to_string).collect();
                write!(f, "{}", parts.join(","))
            }
            GroupElement::Structured(s) => {
                let v: Vec<String> = s.vec.iter().map(u32::to_string).collect();
                let h: Vec<String> = s.h.iter().map(u32::to_string).collect();
                write!(f, "[{}|{}]", v.join(","), h.join(","))
            }
        }
    }
}

/// The ambient universe a group's elements live in.
#[derive(Clone, Debug)]
pub enum Realization {
    Permutation { degree: usize },
    Abelian { moduli: Vec<u32> },
    Structured(Arc<StructuredGroup>),
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Realization::Permutation { degree } => write!(f, "Sym({degree})"),
            Realization::Abelian { moduli } => write!(f, "abelian{moduli:?}"),
            Realization::Structured(g) => write!(f, "structured{g}"),
        }
    }
}

impl Realization {
    pub fn identity(&self) -> GroupElement {
        match self {
            Realization::Permutation { degree } => GroupElement::Perm(Perm::identity(*degree)),
            Realization::Abelian { moduli } => GroupElement::Abelian(vec![0; moduli.len()]),
            Realization::Structured(g) => GroupElement::Structured(g.identity()),
        }
    }

    fn mismatch(&self, e: &GroupElement) -> GroupError {
        GroupError::Mismatch { element: e.to_string(), realization: self.to_string() }
    }

    /// Checks that `e` is a well-formed, reduced element of this universe.
    pub fn check(&self, e: &GroupElement) -> Result<()> {
        let ok = match (self, e) {
            (Realization::Permutation { degree }, GroupElement::Perm(p)) => p.degree() == *degree,
            (Realization::Abelian { moduli }, GroupElement::Abelian(t)) => {
                t.len() == moduli.len() && t.iter().zip(moduli).all(|(&x, &m)| x < m)
            }
            (Realization::Structured(g), GroupElement::Structured(s)) => g.is_element(s),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.mismatch(e))
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.multiply_unchecked(a, b))
    }

    pub(crate) fn multiply_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (Realization::Permutation { .. }, GroupElement::Perm(x), GroupElement::Perm(y)) => {
                GroupElement::Perm(x.then(y))
            }
            (Realization::Abelian { moduli }, GroupElement::Abelian(x), GroupElement::Abelian(y)) => {
                GroupElement::Abelian(x.iter().zip(y).zip(moduli).map(|((&s, &t), &m)| (s + t) % m).collect())
            }
            (Realization::Structured(g), GroupElement::Structured(x), GroupElement::Structured(y)) => {
                GroupElement::Structured(g.multiply(x, y))
            }
            _ => unreachable!("payload kinds were checked"),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(match (self, a) {
            (Realization::Permutation { .. }, GroupElement::Perm(x)) => GroupElement::Perm(x.inverse()),
            (Realization::Abelian { moduli }, GroupElement::Abelian(x)) => {
                GroupElement::Abelian(x.iter().zip(moduli).map(|(&s, &m)| (m - s) % m).collect())
            }
            (Realization::Structured(g), GroupElement::Structured(x)) => GroupElement::Structured(g.inverse(x)),
            _ => unreachable!("payload kinds were checked"),
        })
    }
}

/// A subgroup of an enumerated group, as a bit set over the parent's
/// element indices plus a generating witness.
#[derive(Clone, Debug)]
pub struct Subgroup {
    members: FixedBitSet,
    generators: Vec<u32>,
    order: usize,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn contains(&self, idx: u32) -> bool {
        self.members.contains(idx as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.ones().map(|i| i as u32)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order <= other.order && self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Subgroup) -> FixedBitSet {
        let mut m = self.members.clone();
        m.intersect_with(&other.members);
        m
    }
}

struct Enumeration {
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, u32>,
    /// `(parent, generator)` with `elements[i] = elements[parent] * gens[generator]`.
    schreier: Vec<(u32, u32)>,
    /// `right_gen[i * ngens + k]` is the index of `elements[i] * gens[k]`.
    right_gen: Vec<u32>,
}

/// Full multiplication and inverse tables over element indices.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl CayleyTable {
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }
}

/// A finite group given by generators inside a realization. Elements are
/// enumerated lazily; element index 0 is always the identity.
#[derive(Clone)]
pub struct FiniteGroup {
    realization: Realization,
    generators: Vec<GroupElement>,
    element_cap: usize,
    table_cap: usize,
    enumeration: OnceLock<Arc<Enumeration>>,
    table: OnceLock<Option<Arc<CayleyTable>>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("realization", &self.realization)
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    pub fn new(realization: Realization, generators: Vec<GroupElement>) -> Result<Self> {
        for g in &generators {
            realization.check(g)?;
        }
        Ok(Self {
            realization,
            generators,
            element_cap: DEFAULT_ELEMENT_CAP,
            table_cap: DEFAULT_TABLE_CAP,
            enumeration: OnceLock::new(),
            table: OnceLock::new(),
        })
    }

    pub fn with_element_cap(mut self, cap: usize) -> Self {
        self.element_cap = cap;
        self.enumeration = OnceLock::new();
        self.table = OnceLock::new();
        self
    }

    pub fn with_table_cap(mut self, cap: usize) -> Self {
        self.table_cap = cap;
        self.table = OnceLock::new();
        self
    }

    pub fn permutation(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::new(Realization::Permutation { degree }, generators.into_iter().map(GroupElement::Perm).collect())
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn element_cap(&self) -> usize {
        self.element_cap
    }

    pub fn identity(&self) -> GroupElement {
        self.realization.identity()
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.realization.multiply(a, b)
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        self.realization.inverse(a)
    }

    /// Least `k ≥ 1` with `g^k = 1`, by repeated multiplication.
    pub fn order_of(&self, g: &GroupElement) -> Result<u64> {
        self.realization.check(g)?;
        let id = self.identity();
        let mut x = g.clone();
        let mut k = 1u64;
        while x != id {
            x = self.realization.multiply_unchecked(&x, g);
            k += 1;
            if k as usize > self.element_cap.max(1) {
                return Err(GroupError::EnumerationOverflow { cap: self.element_cap });
            }
        }
        Ok(k)
    }

    fn enumeration(&self) -> Result<&Arc<Enumeration>> {
        if let Some(e) = self.enumeration.get() {
            return Ok(e);
        }
        let e = Arc::new(self.enumerate_now()?);
        Ok(self.enumeration.get_or_init(|| e))
    }

    fn enumerate_now(&self) -> Result<Enumeration> {
        let ngens = self.generators.len();
        let id = self.identity();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0u32);
        let mut schreier = vec![(0u32, 0u32)];
        let mut right_gen: Vec<u32> = Vec::new();
        let mut pos = 0;
        while pos < elements.len() {
            for (k, g) in self.generators.iter().enumerate() {
                let prod = self.realization.multiply_unchecked(&elements[pos], g);
                let idx = match index.get(&prod) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= self.element_cap {
                            return Err(GroupError::EnumerationOverflow { cap: self.element_cap });
                        }
                        let i = elements.len() as u32;
                        index.insert(prod.clone(), i);
                        elements.push(prod);
                        schreier.push((pos as u32, k as u32));
                        i
                    }
                };
                right_gen.push(idx);
            }
            pos += 1;
        }
        debug_assert_eq!(right_gen.len(), elements.len() * ngens);
        Ok(Enumeration { elements, index, schreier, right_gen })
    }

    /// Breadth-first closure of the generators; errors past the element cap.
    pub fn enumerate(&self) -> Result<&[GroupElement]> {
        Ok(&self.enumeration()?.elements)
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.enumeration()?.elements.len())
    }

    pub fn element(&self, idx: u32) -> Result<&GroupElement> {
        self.enumeration()?
            .elements
            .get(idx as usize)
            .ok_or_else(|| GroupError::Usage(format!("no element with index {idx}")))
    }

    pub fn index_of(&self, e: &GroupElement) -> Result<Option<u32>> {
        Ok(self.enumeration()?.index.get(e).copied())
    }

    /// Indices of the generators inside the enumeration.
    pub fn generator_indices(&self) -> Result<Vec<u32>> {
        let en = self.enumeration()?;
        Ok(self.generators.iter().map(|g| en.index[g]).collect())
    }

    /// `(parent, generator)` pairs of the breadth-first spanning tree; entry 0
    /// belongs to the identity and is meaningless.
    pub fn schreier_tree(&self) -> Result<Vec<(u32, u32)>> {
        Ok(self.enumeration()?.schreier.clone())
    }

    /// The multiplication table, if the order is within the table cap.
    pub fn table(&self) -> Result<Option<&CayleyTable>> {
        if let Some(t) = self.table.get() {
            return Ok(t.as_deref());
        }
        let en = self.enumeration()?;
        let n = en.elements.len();
        let t = if n <= self.table_cap { Some(Arc::new(build_table(en, self.generators.len()))) } else { None };
        Ok(self.table.get_or_init(|| t).as_deref())
    }

    /// Index arithmetic view over the enumerated elements. Uses the Cayley
    /// table when available and falls back to element arithmetic otherwise.
    pub fn indexed(&self) -> Result<Indexed<'_>> {
        let table = self.table()?;
        let en = self.enumeration()?;
        Ok(Indexed { group: self, en, table })
    }

    pub fn whole(&self) -> Result<Subgroup> {
        Ok(self.indexed()?.whole())
    }

    pub fn trivial_subgroup(&self) -> Result<Subgroup> {
        Ok(self.indexed()?.trivial())
    }

    pub fn subgroup(&self, gens: &[GroupElement]) -> Result<Subgroup> {
        let ix = self.indexed()?;
        let idx = gens
            .iter()
            .map(|g| ix.index_of(g).ok_or_else(|| GroupError::Usage(format!("{g} is not in the group"))))
            .collect::<Result<Vec<u32>>>()?;
        Ok(ix.closure(&idx))
    }

    /// Elements commuting with every element of `set`.
    pub fn centralizer(&self, set: &[u32]) -> Result<Subgroup> {
        let ix = self.indexed()?;
        let mut members = FixedBitSet::with_capacity(ix.n());
        for g in 0..ix.n() as u32 {
            if set.iter().all(|&t| ix.mul(g, t) == ix.mul(t, g)) {
                members.insert(g as usize);
            }
        }
        Ok(ix.subgroup_from_members(members))
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, g: u32) -> Result<Subgroup> {
        Ok(self.indexed()?.conjugate_subgroup(h, g))
    }

    pub fn is_normal(&self, h: &Subgroup) -> Result<bool> {
        let ix = self.indexed()?;
        let gens = self.generator_indices()?;
        Ok(ix.is_normalized_by(h, &gens))
    }

    pub fn normal_closure(&self, set: &[u32]) -> Result<Subgroup> {
        let ix = self.indexed()?;
        let gens = self.generator_indices()?;
        Ok(ix.normal_closure_under(&gens, set))
    }

    /// `[H, H]`: normal closure in `H` of commutators of `H`'s generators.
    pub fn derived_subgroup_of(&self, h: &Subgroup) -> Result<Subgroup> {
        Ok(self.indexed()?.derived_subgroup_of(h))
    }

    /// `G = G^(0) ≥ G^(1) ≥ …`, ending at the first repeated term.
    pub fn derived_series(&self) -> Result<Vec<Subgroup>> {
        let ix = self.indexed()?;
        let mut series = vec![ix.whole()];
        loop {
            let last = series.last().expect("nonempty");
            let next = ix.derived_subgroup_of(last);
            if next.order() == last.order() {
                return Ok(series);
            }
            series.push(next);
        }
    }

    pub fn is_soluble(&self) -> Result<bool> {
        Ok(self.derived_series()?.last().expect("nonempty").order() == 1)
    }

    pub fn is_metabelian(&self) -> Result<bool> {
        let series = self.derived_series()?;
        Ok(series.len() <= 3 && series.last().expect("nonempty").order() == 1)
    }

    pub fn is_abelian(&self) -> Result<bool> {
        let ix = self.indexed()?;
        let gens = self.generator_indices()?;
        Ok(ix.commute_pairwise(&gens))
    }

    pub fn exponent(&self) -> Result<u64> {
        let ix = self.indexed()?;
        Ok((0..ix.n() as u32).fold(1, |acc, g| arith::lcm(acc, ix.element_order(g))))
    }

    /// Abelian with square-free exponent (not necessarily a p-group).
    pub fn is_elementary_abelian(&self) -> Result<bool> {
        Ok(self.is_abelian()? && arith::is_square_free(self.exponent()?))
    }

    /// Peels off normal subgroups of prime order one quotient at a time.
    pub fn is_supersoluble(&self) -> Result<bool> {
        let mut current = self.clone();
        loop {
            let ix = current.indexed()?;
            if ix.n() == 1 {
                return Ok(true);
            }
            let gens = current.generator_indices()?;
            let mut found = None;
            for g in 1..ix.n() as u32 {
                let ord = ix.element_order(g);
                if !arith::is_prime(ord) {
                    continue;
                }
                let cyc = ix.closure(&[g]);
                if ix.is_normalized_by(&cyc, &gens) {
                    found = Some(cyc);
                    break;
                }
            }
            let Some(n) = found else {
                return Ok(false);
            };
            let q = current.quotient(&n)?;
            current = q;
        }
    }

    /// `G/N` as a permutation group on the right cosets of `N`.
    pub fn quotient(&self, n: &Subgroup) -> Result<FiniteGroup> {
        if !self.is_normal(n)? {
            return Err(GroupError::Usage("quotient by a subgroup that is not normal".into()));
        }
        let ix = self.indexed()?;
        let size = ix.n();
        let mut coset_of = vec![u32::MAX; size];
        let mut reps = Vec::new();
        for x in 0..size as u32 {
            if coset_of[x as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(x);
            for m in n.iter() {
                coset_of[ix.mul(m, x) as usize] = c;
            }
        }
        let degree = reps.len();
        let mut gens = Vec::new();
        for g in self.generator_indices()? {
            let images: Vec<u32> = reps.iter().map(|&r| coset_of[ix.mul(r, g) as usize]).collect();
            gens.push(Perm::from_images(images)?);
        }
        Ok(FiniteGroup::permutation(degree, gens)?.with_element_cap(self.element_cap).with_table_cap(self.table_cap))
    }

    /// Invariant factors `d_1 | d_2 | …` (ascending), read off from the sizes
    /// of the `p^k`-torsion subgroups.
    pub fn abelian_invariants(&self) -> Result<Vec<u64>> {
        if !self.is_abelian()? {
            return Err(GroupError::Usage("abelian_invariants of a non-abelian group".into()));
        }
        let ix = self.indexed()?;
        let n = ix.n() as u64;
        let orders: Vec<u64> = (0..n as u32).map(|g| ix.element_order(g)).collect();
        // exps[p] = elementary divisor exponents of the p-part, descending.
        let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for (p, e) in arith::factorize(n) {
            let torsion = |k: u32| orders.iter().filter(|&&o| p.pow(k) % o == 0).count() as u64;
            let mut at_least = Vec::new(); // number of factors of order ≥ p^k
            let mut prev = 1u64;
            for k in 1..=e {
                let t = torsion(k);
                let mut ratio = t / prev;
                let mut c = 0;
                while ratio > 1 {
                    ratio /= p;
                    c += 1;
                }
                at_least.push(c);
                prev = t;
            }
            let rank = at_least.first().copied().unwrap_or(0);
            let mut exps = Vec::new();
            for j in 0..rank {
                exps.push(at_least.iter().filter(|&&c| c > j).count() as u32);
            }
            per_prime.push((p, exps));
        }
        let len = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for (p, exps) in &per_prime {
            for (j, &e) in exps.iter().enumerate() {
                factors[j] *= p.pow(e);
            }
        }
        factors.reverse();
        Ok(factors)
    }

    /// The subgroup `h` as a group in its own right, generated by its witness.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<FiniteGroup> {
        let en = self.enumeration()?;
        let gens = h.generators().iter().map(|&i| en.elements[i as usize].clone()).collect();
        Ok(FiniteGroup::new(self.realization.clone(), gens)?
            .with_element_cap(self.element_cap)
            .with_table_cap(self.table_cap))
    }

    /// Right regular representation on `0..|G|`.
    pub fn regular_permutation_group(&self) -> Result<FiniteGroup> {
        let ix = self.indexed()?;
        let n = ix.n();
        let mut gens = Vec::new();
        for g in self.generator_indices()? {
            gens.push(Perm::from_images((0..n as u32).map(|i| ix.mul(i, g)).collect())?);
        }
        Ok(FiniteGroup::permutation(n, gens)?.with_element_cap(self.element_cap).with_table_cap(self.table_cap))
    }
}

fn build_table(en: &Enumeration, ngens: usize) -> CayleyTable {
    let n = en.elements.len();
    let mut mul = vec![0u32; n * n];
    for i in 0..n {
        let row = i * n;
        mul[row] = i as u32;
        for j in 1..n {
            let (parent, k) = en.schreier[j];
            let left = mul[row + parent as usize];
            mul[row + j] = en.right_gen[left as usize * ngens + k as usize];
        }
    }
    let mut inv = vec![0u32; n];
    for i in 0..n {
        let row = &mul[i * n..(i + 1) * n];
        inv[i] = row.iter().position(|&x| x == 0).expect("every element has an inverse") as u32;
    }
    CayleyTable { n, mul, inv }
}

/// Index arithmetic over an enumerated group.
pub struct Indexed<'a> {
    group: &'a FiniteGroup,
    en: &'a Enumeration,
    table: Option<&'a CayleyTable>,
}

impl<'a> Indexed<'a> {
    pub fn group(&self) -> &'a FiniteGroup {
        self.group
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.en.elements.len()
    }

    pub fn element(&self, i: u32) -> &'a GroupElement {
        &self.en.elements[i as usize]
    }

    pub fn index_of(&self, e: &GroupElement) -> Option<u32> {
        self.en.index.get(e).copied()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self.table {
            Some(t) => t.mul(a, b),
            None => {
                let prod = self
                    .group
                    .realization
                    .multiply_unchecked(&self.en.elements[a as usize], &self.en.elements[b as usize]);
                self.en.index[&prod]
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        match self.table {
            Some(t) => t.inv(a),
            None => {
                let inv = self
                    .group
                    .realization
                    .inverse(&self.en.elements[a as usize])
                    .expect("enumerated elements are well formed");
                self.en.index[&inv]
            }
        }
    }

    /// `g⁻¹ x g`.
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        let mut acc = 0u32;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn commute_pairwise(&self, gens: &[u32]) -> bool {
        gens.iter().enumerate().all(|(i, &a)| gens[i + 1..].iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        let n = self.n();
        let mut members = FixedBitSet::with_capacity(n);
        members.insert_range(..);
        let generators = self.group.generator_indices().expect("enumerated");
        Subgroup { members, generators, order: n }
    }

    pub fn trivial(&self) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.n());
        members.insert(0);
        Subgroup { members, generators: Vec::new(), order: 1 }
    }

    /// `⟨S, z⟩` by adjoining right cosets of `S` (Dimino's step).
    pub fn join_element(&self, s: &Subgroup, z: u32) -> Subgroup {
        if s.contains(z) {
            return s.clone();
        }
        let base: Vec<u32> = s.iter().collect();
        let mut members = s.members.clone();
        let mut elements = base.clone();
        let mut generators = s.generators.clone();
        generators.push(z);
        let add_coset = |r: u32, members: &mut FixedBitSet, elements: &mut Vec<u32>| {
            for &h in &base {
                let x = self.mul(h, r);
                members.insert(x as usize);
                elements.push(x);
            }
        };
        add_coset(z, &mut members, &mut elements);
        let mut rep_pos = base.len();
        while rep_pos < elements.len() {
            let r = elements[rep_pos];
            for &g in &generators {
                let t = self.mul(r, g);
                if !members.contains(t as usize) {
                    add_coset(t, &mut members, &mut elements);
                }
            }
            rep_pos += base.len();
        }
        let order = elements.len();
        Subgroup { members, generators, order }
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        b.generators.iter().fold(a.clone(), |acc, &g| self.join_element(&acc, g))
    }

    pub fn closure(&self, gens: &[u32]) -> Subgroup {
        gens.iter().fold(self.trivial(), |acc, &g| self.join_element(&acc, g))
    }

    /// Wraps a member set known to be a subgroup, choosing a short witness.
    pub fn subgroup_from_members(&self, members: FixedBitSet) -> Subgroup {
        let mut sub = self.trivial();
        for x in members.ones() {
            if !sub.contains(x as u32) {
                sub = self.join_element(&sub, x as u32);
            }
        }
        debug_assert_eq!(sub.members, members);
        sub
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, g: u32) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.n());
        let gi = self.inv(g);
        for x in h.iter() {
            members.insert(self.mul(self.mul(gi, x), g) as usize);
        }
        let generators = h.generators.iter().map(|&x| self.mul(self.mul(gi, x), g)).collect();
        Subgroup { members, generators, order: h.order }
    }

    /// Whether `h^g = h` for every `g` in `gens`.
    pub fn is_normalized_by(&self, h: &Subgroup, gens: &[u32]) -> bool {
        gens.iter().all(|&g| h.generators.iter().all(|&x| h.contains(self.conj(x, g))))
    }

    /// Smallest subgroup containing `set` and normalized by `gens`.
    pub fn normal_closure_under(&self, gens: &[u32], set: &[u32]) -> Subgroup {
        let mut sub = self.closure(set);
        loop {
            let mut grown = false;
            let current_gens = sub.generators.clone();
            for &g in gens {
                for &x in &current_gens {
                    let c = self.conj(x, g);
                    if !sub.contains(c) {
                        sub = self.join_element(&sub, c);
                        grown = true;
                    }
                }
            }
            if !grown {
                return sub;
            }
        }
    }

    pub fn derived_subgroup_of(&self, h: &Subgroup) -> Subgroup {
        let gens = &h.generators;
        let mut comms = Vec::new();
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i + 1..] {
                let c = self.commutator(a, b);
                if c != 0 {
                    comms.push(c);
                }
            }
        }
        self.normal_closure_under(gens, &comms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn perm(n: usize, s: &str) -> Perm {
        Perm::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn three_cycle_squared() {
        let c = perm(3, "(0 1 2)");
        assert_eq!(c.then(&c), perm(3, "(0 2 1)"));
        assert_eq!(c.then(&c).to_string(), "(0 2 1)");
    }

    #[test]
    fn identity_times_g() {
        let g = families::symmetric(3);
        let x = GroupElement::Perm(perm(3, "(0 1)"));
        assert_eq!(g.multiply(&g.identity(), &x).unwrap(), x);
    }

    #[test]
    fn mismatched_realizations_are_rejected() {
        let g = families::symmetric(3);
        let bad = GroupElement::Perm(perm(4, "(0 1)"));
        assert!(matches!(g.multiply(&g.identity(), &bad), Err(GroupError::Mismatch { .. })));
        let abelian = GroupElement::Abelian(vec![1]);
        assert!(g.multiply(&abelian, &abelian).is_err());
    }

    #[test]
    fn bad_cycles() {
        assert!(Perm::parse_cycles(3, "(0 1 3)").is_err());
        assert!(Perm::parse_cycles(3, "(0 1)(1 2)").is_err());
        assert!(Perm::parse_cycles(3, "(0 1").is_err());
        assert!(Perm::parse_cycles(3, "()").unwrap().is_identity());
        assert_eq!(Perm::parse_cycles(5, "(1,2)(3,4)").unwrap(), perm(5, "(1 2)(3 4)"));
    }

    #[test]
    fn sym3_enumeration() {
        let g = FiniteGroup::permutation(3, vec![perm(3, "(0 1)"), perm(3, "(0 1 2)")]).unwrap();
        assert_eq!(g.order().unwrap(), 6);
    }

    #[test]
    fn enumeration_cap() {
        let g = families::symmetric(5).with_element_cap(100);
        assert_eq!(g.order(), Err(GroupError::EnumerationOverflow { cap: 100 }));
    }

    #[test]
    fn element_orders() {
        let c8 = families::cyclic(8);
        assert_eq!(c8.order_of(&c8.identity()).unwrap(), 1);
        assert_eq!(c8.order_of(&GroupElement::Abelian(vec![1])).unwrap(), 8);
        assert_eq!(c8.order_of(&GroupElement::Abelian(vec![6])).unwrap(), 4);
    }

    #[test]
    fn table_matches_element_arithmetic() {
        let g = families::alternating(4);
        let ix = g.indexed().unwrap();
        for a in 0..12u32 {
            for b in 0..12u32 {
                let prod = g.multiply(ix.element(a), ix.element(b)).unwrap();
                assert_eq!(ix.index_of(&prod), Some(ix.mul(a, b)));
            }
            assert_eq!(ix.mul(a, ix.inv(a)), 0);
        }
    }

    #[test]
    fn slow_path_matches_table() {
        let fast = families::symmetric(4);
        let slow = families::symmetric(4).with_table_cap(0);
        assert!(slow.table().unwrap().is_none());
        let (fi, si) = (fast.indexed().unwrap(), slow.indexed().unwrap());
        for a in 0..24u32 {
            for b in 0..24u32 {
                assert_eq!(fi.mul(a, b), si.mul(a, b));
            }
            assert_eq!(fi.inv(a), si.inv(a));
        }
        assert!(!slow.is_supersoluble().unwrap());
        assert!(slow.is_soluble().unwrap());
    }

    #[test]
    fn centralizers() {
        let s3 = families::symmetric(3);
        assert_eq!(s3.centralizer(&[0]).unwrap().order(), 6);
        let c = s3.index_of(&GroupElement::Perm(perm(3, "(0 1 2)"))).unwrap().unwrap();
        let cent = s3.centralizer(&[c]).unwrap();
        assert_eq!(cent.order(), 3);
        // brute force over all six elements
        let ix = s3.indexed().unwrap();
        let brute: Vec<u32> = (0..6).filter(|&g| ix.mul(g, c) == ix.mul(c, g)).collect();
        assert_eq!(cent.iter().collect::<Vec<_>>(), brute);
    }

    #[test]
    fn normality() {
        let s3 = families::symmetric(3);
        let alt = s3.subgroup(&[GroupElement::Perm(perm(3, "(0 1 2)"))]).unwrap();
        assert!(s3.is_normal(&alt).unwrap());
        let t = s3.subgroup(&[GroupElement::Perm(perm(3, "(0 1)"))]).unwrap();
        assert!(!s3.is_normal(&t).unwrap());
        assert_eq!(s3.conjugate_subgroup(&t, 0).unwrap(), t);
        let c = s3.index_of(&GroupElement::Perm(perm(3, "(0 1 2)"))).unwrap().unwrap();
        assert_ne!(s3.conjugate_subgroup(&t, c).unwrap(), t);
        let tgen = t.generators()[0];
        assert_eq!(s3.normal_closure(&[tgen]).unwrap().order(), 6);
    }

    #[test]
    fn solubility_flags() {
        let s3 = families::symmetric(3);
        let series = s3.derived_series().unwrap();
        assert_eq!(series.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![6, 3, 1]);
        assert!(s3.is_metabelian().unwrap());
        assert!(s3.is_soluble().unwrap());
        let a5 = families::alternating(5);
        assert!(!a5.is_soluble().unwrap());
        assert_eq!(a5.derived_subgroup_of(&a5.whole().unwrap()).unwrap().order(), 60);
        let a4 = families::alternating(4);
        assert!(a4.is_soluble().unwrap());
        assert!(!a4.is_metabelian().unwrap() || a4.derived_series().unwrap().len() <= 3);
    }

    #[test]
    fn elementary_abelian_convention() {
        assert!(families::cyclic(6).is_elementary_abelian().unwrap());
        assert!(!families::cyclic(4).is_elementary_abelian().unwrap());
        assert!(families::abelian(&[2, 2]).is_elementary_abelian().unwrap());
        assert!(!families::symmetric(3).is_elementary_abelian().unwrap());
    }

    #[test]
    fn supersolubility() {
        assert!(families::abelian(&[2, 6]).is_supersoluble().unwrap());
        assert!(!families::alternating(4).is_supersoluble().unwrap());
        assert!(families::symmetric(3).is_supersoluble().unwrap());
        assert!(families::dihedral(4).is_supersoluble().unwrap());
        assert!(!families::symmetric(4).is_supersoluble().unwrap());
    }

    #[test]
    fn quotients() {
        let s3 = families::symmetric(3);
        assert_eq!(s3.quotient(&s3.trivial_subgroup().unwrap()).unwrap().order().unwrap(), 6);
        let alt = s3.subgroup(&[GroupElement::Perm(perm(3, "(0 1 2)"))]).unwrap();
        assert_eq!(s3.quotient(&alt).unwrap().order().unwrap(), 2);
        let t = s3.subgroup(&[GroupElement::Perm(perm(3, "(0 1)"))]).unwrap();
        assert!(matches!(s3.quotient(&t), Err(GroupError::Usage(_))));
    }

    #[test]
    fn invariant_factors() {
        assert_eq!(families::cyclic(6).abelian_invariants().unwrap(), vec![6]);
        assert_eq!(families::abelian(&[2, 2]).abelian_invariants().unwrap(), vec![2, 2]);
        assert_eq!(families::cyclic(8).abelian_invariants().unwrap(), vec![8]);
        assert_eq!(families::abelian(&[2, 3]).abelian_invariants().unwrap(), vec![6]);
        assert_eq!(families::abelian(&[4, 6]).abelian_invariants().unwrap(), vec![2, 12]);
        assert_eq!(families::abelian(&[]).abelian_invariants().unwrap(), Vec::<u64>::new());
        assert!(families::symmetric(3).abelian_invariants().is_err());
    }

    #[test]
    fn regular_representation() {
        let q8 = families::quaternion8();
        let reg = q8.regular_permutation_group().unwrap();
        assert_eq!(reg.order().unwrap(), 8);
        assert_eq!(reg.exponent().unwrap(), 4);
        assert!(!reg.is_abelian().unwrap());
    }
}
