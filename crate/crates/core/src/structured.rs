//! Groups of the shape `(V_1^δ1 × … × V_r^δr) ⋊ H` with `H` abelian and
//! every `V_i` of prime order `p_i`, `H` acting on `V_i` through a scalar
//! unit. This module holds the closed-form cyclic-closure formula and CIM
//! criterion, an independent evaluator built from the explicit list of
//! maximal subgroups, materialization into a concrete [`FiniteGroup`], and
//! constructors for the named example families.
//!
//! Coordinates: a module vector is the concatenation of every module's
//! `δ_i`-block in module order; an element of `H` is an exponent tuple over
//! the cyclic factors `h_orders`, so `h = (e_1, …, e_m)` acts on block `i`
//! as multiplication by `∏_k a_{i,k}^{e_k} mod p_i`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::group::{FiniteGroup, GroupElement, GroupError, Realization, StructuredElement};
use crate::linalg::{dot, solve_affine, MatModP};

/// Upper limit for the prime search in [`construct_with_quotient`].
pub const DEFAULT_PRIME_CEILING: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub p: u32,
    pub delta: usize,
    /// Image in `Aut(C_p)` of each cyclic generator of `H`.
    pub action: Vec<u32>,
}

impl ModuleSpec {
    pub fn new(p: u32, delta: usize, action: Vec<u32>) -> Self {
        Self { p, delta, action }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StructuredGroup {
    pub h_orders: Vec<u32>,
    pub modules: Vec<ModuleSpec>,
}

impl fmt::Display for StructuredGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{:?}", self.h_orders)?;
        for m in &self.modules {
            write!(f, " V({}^{}:{:?})", m.p, m.delta, m.action)?;
        }
        Ok(())
    }
}

/// A rule broken by a structured group description, with the offending indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Violation {
    BadHOrder { generator: usize, order: u32 },
    NotPrime { module: usize, p: u32 },
    ZeroMultiplicity { module: usize },
    ActionArity { module: usize, expected: usize, found: usize },
    NotUnit { module: usize, generator: usize, unit: u32 },
    NotHomomorphism { module: usize, generator: usize, unit: u32, h_order: u32 },
    DuplicatePrime { p: u32, first: usize, second: usize },
    PrimeDividesH { module: usize, p: u32, h_order: u64 },
    NontrivialCommonKernel { kernel_order: usize },
}

impl Violation {
    /// Violations that make the multiplication law ill defined, as opposed
    /// to the shape rules a CIM-group must satisfy.
    pub fn is_structural(&self) -> bool {
        !matches!(
            self,
            Violation::DuplicatePrime { .. }
                | Violation::PrimeDividesH { .. }
                | Violation::NontrivialCommonKernel { .. }
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadHOrder { generator, order } => {
                write!(f, "H generator {generator} has order {order}")
            }
            Violation::NotPrime { module, p } => write!(f, "module {module}: {p} is not prime"),
            Violation::ZeroMultiplicity { module } => write!(f, "module {module}: delta is 0"),
            Violation::ActionArity { module, expected, found } => {
                write!(f, "module {module}: {found} action units for {expected} H generators")
            }
            Violation::NotUnit { module, generator, unit } => {
                write!(f, "module {module}: action {unit} of generator {generator} is not a unit")
            }
            Violation::NotHomomorphism { module, generator, unit, h_order } => {
                write!(f, "module {module}: {unit}^{h_order} != 1, generator {generator} does not act")
            }
            Violation::DuplicatePrime { p, first, second } => {
                write!(f, "duplicate prime {p} in modules {first} and {second}")
            }
            Violation::PrimeDividesH { module, p, h_order } => {
                write!(f, "module {module}: p divides |H| ({p} | {h_order})")
            }
            Violation::NontrivialCommonKernel { kernel_order } => {
                write!(f, "common kernel of the actions has order {kernel_order}")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructuredError {
    #[error("invalid structured group: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("element is not normalized: module part meets a block that h moves")]
    NotNormalized,
    #[error("malformed element {0}")]
    NotAnElement(String),
    #[error("no prime p ≡ 1 mod {modulus} below {ceiling} is available")]
    PrimeSearchExhausted { modulus: u64, ceiling: u64 },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub type Result<T> = std::result::Result<T, StructuredError>;

/// A maximal subgroup of a valid structured group, described symbolically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaximalDescriptor {
    /// `F(G)·K` for a maximal subgroup `K` of `H` (bit set over `H` indices).
    Type1 { k: FixedBitSet },
    /// `W·H^u`: `W` is the hyperplane `ker f` of block `module` plus every
    /// other block, `U` is spanned by `complement` (normalized so
    /// `f(complement) = 1`) and `u = shift · complement`.
    Type2 { module: usize, hyperplane: Vec<u32>, complement: Vec<u32>, shift: u32 },
}

impl MaximalDescriptor {
    pub fn contains(&self, g: &StructuredGroup, x: &StructuredElement) -> bool {
        match self {
            MaximalDescriptor::Type1 { k } => k.contains(g.h_index(&x.h)),
            MaximalDescriptor::Type2 { module, hyperplane, complement, shift } => {
                let p = g.modules[*module].p;
                let block = g.block(&x.vec, *module);
                // v = w + f(v)·e with w ∈ ker f, so the U-component is f(v)·e
                let coeff = dot(p, hyperplane, block) as u64;
                let s = g.scalar(*module, &x.h) as u64;
                let target = ((1 + p as u64 - s) % p as u64) * *shift as u64 % p as u64;
                complement.iter().all(|&e| coeff * e as u64 % p as u64 == target * e as u64 % p as u64)
            }
        }
    }

    pub fn index(&self, g: &StructuredGroup) -> u64 {
        match self {
            MaximalDescriptor::Type1 { k } => (g.h_size() / k.count_ones(..)) as u64,
            MaximalDescriptor::Type2 { module, .. } => g.modules[*module].p as u64,
        }
    }

    pub fn describe(&self, g: &StructuredGroup) -> String {
        match self {
            MaximalDescriptor::Type1 { k } => {
                let gens: Vec<String> = g.h_subgroup_generators(k).iter().map(|t| format!("{t:?}")).collect();
                format!("F·<{}>", gens.join(","))
            }
            MaximalDescriptor::Type2 { module, hyperplane, complement, shift } => {
                format!("M(W=ker{hyperplane:?}@{module}, U=<{complement:?}>, u={shift}·U)")
            }
        }
    }
}

/// Result of the closed-form closure of a cyclic subgroup `⟨x⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastClosure {
    pub normalized: StructuredElement,
    pub y_order: u64,
    pub h_generates: bool,
    pub j_tilde: BTreeSet<usize>,
    /// `∩_{j ∈ J̃} C_{M_H(h)}(V_j)` as a subset of `H`.
    pub c: FixedBitSet,
    pub order: u128,
    pub cyclic_order: u128,
}

impl FastClosure {
    pub fn is_closed(&self) -> bool {
        self.order == self.cyclic_order
    }
}

/// Per-`h` record of the CIM test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HCheck {
    pub h: Vec<u32>,
    pub j_set: Vec<usize>,
    pub m_h_order: usize,
    pub c_order: usize,
    pub h_order: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CimVerdict {
    pub is_cim: bool,
    /// First failing `h` in lexicographic tuple order.
    pub witness: Option<Vec<u32>>,
    pub checks: Vec<HCheck>,
}

/// Output of [`construct_with_quotient`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientConstruction {
    pub group: StructuredGroup,
    /// For each module: generators of the kernel `C ≤ A`, `|A/C|` and `p`.
    pub kernels: Vec<(Vec<Vec<u32>>, u64, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpotCheckReport {
    pub fitting_order: u128,
    pub fitting_closure_order: u128,
    pub samples: usize,
    pub cyclic_samples: usize,
    pub mixed_samples: usize,
    pub failures: Vec<String>,
}

impl SpotCheckReport {
    pub fn passed(&self) -> bool {
        self.fitting_closure_order != self.fitting_order && self.failures.is_empty()
    }
}

impl StructuredGroup {
    pub fn new(h_orders: Vec<u32>, modules: Vec<ModuleSpec>) -> Self {
        Self { h_orders, modules }
    }

    // ---- H as exponent tuples ------------------------------------------------

    pub fn h_size(&self) -> usize {
        self.h_orders.iter().map(|&d| d as usize).product()
    }

    /// Tuples in lexicographic order: the last coordinate varies fastest.
    pub fn h_element(&self, mut idx: usize) -> Vec<u32> {
        let mut t = vec![0u32; self.h_orders.len()];
        for k in (0..self.h_orders.len()).rev() {
            let d = self.h_orders[k] as usize;
            t[k] = (idx % d) as u32;
            idx /= d;
        }
        t
    }

    pub fn h_index(&self, t: &[u32]) -> usize {
        t.iter().zip(&self.h_orders).fold(0, |acc, (&e, &d)| acc * d as usize + (e % d) as usize)
    }

    fn h_add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).zip(&self.h_orders).map(|((&x, &y), &d)| (x + y) % d).collect()
    }

    fn h_neg(&self, a: &[u32]) -> Vec<u32> {
        a.iter().zip(&self.h_orders).map(|(&x, &d)| (d - x % d) % d).collect()
    }

    pub fn h_order_of(&self, t: &[u32]) -> u64 {
        t.iter().zip(&self.h_orders).fold(1, |acc, (&e, &d)| arith::lcm(acc, d as u64 / arith::gcd(e as u64, d as u64)))
    }

    /// `⟨t⟩` as a bit set over `H`.
    pub fn h_cyclic(&self, t: &[u32]) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.h_size());
        let mut x = vec![0u32; t.len()];
        loop {
            let i = self.h_index(&x);
            if set.contains(i) {
                return set;
            }
            set.insert(i);
            x = self.h_add(&x, t);
        }
    }

    fn h_full(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.h_size());
        s.insert_range(..);
        s
    }

    /// Maximal subgroups of `H`: kernels of the surjections onto `Z/q`.
    pub fn h_maximal_subgroups(&self) -> Vec<FixedBitSet> {
        let size = self.h_size();
        let m = self.h_orders.len();
        let mut out: Vec<FixedBitSet> = Vec::new();
        for q in arith::prime_divisors(size as u64) {
            let q = q as u32;
            let free: Vec<usize> = (0..m).filter(|&k| self.h_orders[k].is_multiple_of(q)).collect();
            let total = (q as usize).pow(free.len() as u32);
            for code in 1..total {
                let mut c = vec![0u32; m];
                let mut rest = code;
                for &k in &free {
                    c[k] = (rest % q as usize) as u32;
                    rest /= q as usize;
                }
                let mut kernel = FixedBitSet::with_capacity(size);
                for i in 0..size {
                    let t = self.h_element(i);
                    let s: u64 = c.iter().zip(&t).map(|(&a, &b)| a as u64 * b as u64).sum();
                    if s.is_multiple_of(q as u64) {
                        kernel.insert(i);
                    }
                }
                if !out.contains(&kernel) {
                    out.push(kernel);
                }
            }
        }
        out
    }

    /// A short generating list for a subgroup of `H` given as a bit set.
    pub fn h_subgroup_generators(&self, set: &FixedBitSet) -> Vec<Vec<u32>> {
        let mut span = FixedBitSet::with_capacity(self.h_size());
        span.insert(0);
        let mut gens = Vec::new();
        for i in set.ones() {
            if span.contains(i) {
                continue;
            }
            let t = self.h_element(i);
            gens.push(t.clone());
            // span ← span + ⟨t⟩
            let cyc: Vec<usize> = self.h_cyclic(&t).ones().collect();
            let old: Vec<usize> = span.ones().collect();
            for &a in &old {
                for &b in &cyc {
                    span.insert(self.h_index(&self.h_add(&self.h_element(a), &self.h_element(b))));
                }
            }
        }
        gens
    }

    // ---- the module and the action -------------------------------------------

    pub fn dim(&self) -> usize {
        self.modules.iter().map(|m| m.delta).sum()
    }

    pub fn offset(&self, module: usize) -> usize {
        self.modules[..module].iter().map(|m| m.delta).sum()
    }

    pub fn block<'v>(&self, vec: &'v [u32], module: usize) -> &'v [u32] {
        let o = self.offset(module);
        &vec[o..o + self.modules[module].delta]
    }

    /// Scalar by which `t ∈ H` acts on module `module`.
    pub fn scalar(&self, module: usize, t: &[u32]) -> u32 {
        let m = &self.modules[module];
        let p = m.p as u64;
        m.action.iter().zip(t).fold(1u64, |acc, (&a, &e)| acc * arith::pow_mod(a as u64, e as u64, p) % p) as u32
    }

    /// `C_H(V_i)` as a bit set over `H`.
    pub fn kernel(&self, module: usize) -> FixedBitSet {
        let mut k = FixedBitSet::with_capacity(self.h_size());
        for i in 0..self.h_size() {
            if self.scalar(module, &self.h_element(i)) == 1 {
                k.insert(i);
            }
        }
        k
    }

    pub fn act(&self, t: &[u32], v: &[u32]) -> Vec<u32> {
        let mut out = Vec::with_capacity(v.len());
        for (i, m) in self.modules.iter().enumerate() {
            let s = self.scalar(i, t) as u64;
            out.extend(self.block(v, i).iter().map(|&x| (x as u64 * s % m.p as u64) as u32));
        }
        out
    }

    fn vec_add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = Vec::with_capacity(a.len());
        for (i, m) in self.modules.iter().enumerate() {
            let (x, y) = (self.block(a, i), self.block(b, i));
            out.extend(x.iter().zip(y).map(|(&s, &t)| (s + t) % m.p));
        }
        out
    }

    fn vec_neg(&self, a: &[u32]) -> Vec<u32> {
        let mut out = Vec::with_capacity(a.len());
        for (i, m) in self.modules.iter().enumerate() {
            out.extend(self.block(a, i).iter().map(|&s| (m.p - s) % m.p));
        }
        out
    }

    pub fn module_order(&self) -> u128 {
        self.modules.iter().map(|m| (m.p as u128).pow(m.delta as u32)).product()
    }

    pub fn order(&self) -> u128 {
        self.module_order() * self.h_size() as u128
    }

    // ---- element arithmetic --------------------------------------------------

    pub fn identity(&self) -> StructuredElement {
        StructuredElement::new(vec![0; self.dim()], vec![0; self.h_orders.len()])
    }

    pub fn is_element(&self, x: &StructuredElement) -> bool {
        x.vec.len() == self.dim()
            && x.h.len() == self.h_orders.len()
            && x.h.iter().zip(&self.h_orders).all(|(&e, &d)| e < d)
            && self.modules.iter().enumerate().all(|(i, m)| self.block(&x.vec, i).iter().all(|&c| c < m.p))
    }

    /// `(v1, h1)(v2, h2) = (v1 + h1·v2, h1 + h2)`.
    pub fn multiply(&self, a: &StructuredElement, b: &StructuredElement) -> StructuredElement {
        StructuredElement::new(self.vec_add(&a.vec, &self.act(&a.h, &b.vec)), self.h_add(&a.h, &b.h))
    }

    pub fn inverse(&self, a: &StructuredElement) -> StructuredElement {
        let hinv = self.h_neg(&a.h);
        StructuredElement::new(self.vec_neg(&self.act(&hinv, &a.vec)), hinv)
    }

    pub fn power(&self, a: &StructuredElement, k: u64) -> StructuredElement {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.multiply(&acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: &StructuredElement) -> u64 {
        let id = self.identity();
        let mut x = a.clone();
        let mut k = 1;
        while x != id {
            x = self.multiply(&x, a);
            k += 1;
        }
        k
    }

    /// Order of the module element `y` (product of the primes of its
    /// nonzero blocks).
    pub fn vec_order(&self, v: &[u32]) -> u64 {
        self.modules
            .iter()
            .enumerate()
            .filter(|(i, _)| self.block(v, *i).iter().any(|&c| c != 0))
            .map(|(_, m)| m.p as u64)
            .product()
    }

    fn check_element(&self, x: &StructuredElement) -> Result<()> {
        if self.is_element(x) {
            Ok(())
        } else {
            Err(StructuredError::NotAnElement(format!("{x:?}")))
        }
    }

    // ---- validation ----------------------------------------------------------

    fn structural_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (k, &d) in self.h_orders.iter().enumerate() {
            if d == 0 {
                out.push(Violation::BadHOrder { generator: k, order: d });
            }
        }
        for (i, m) in self.modules.iter().enumerate() {
            if !arith::is_prime(m.p as u64) {
                out.push(Violation::NotPrime { module: i, p: m.p });
                continue;
            }
            if m.delta == 0 {
                out.push(Violation::ZeroMultiplicity { module: i });
            }
            if m.action.len() != self.h_orders.len() {
                out.push(Violation::ActionArity { module: i, expected: self.h_orders.len(), found: m.action.len() });
                continue;
            }
            for (k, (&a, &d)) in m.action.iter().zip(&self.h_orders).enumerate() {
                if a == 0 || a >= m.p {
                    out.push(Violation::NotUnit { module: i, generator: k, unit: a });
                } else if d != 0 && arith::pow_mod(a as u64, d as u64, m.p as u64) != 1 {
                    out.push(Violation::NotHomomorphism { module: i, generator: k, unit: a, h_order: d });
                }
            }
        }
        out
    }

    /// The description defines a group at all (primes, arities, homomorphic action).
    pub fn check_well_formed(&self) -> Result<()> {
        let v = self.structural_violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(StructuredError::Invalid(v))
        }
    }

    /// Every violated rule; an empty list means the group is valid.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = self.structural_violations();
        if !out.is_empty() {
            return out;
        }
        for i in 0..self.modules.len() {
            for j in i + 1..self.modules.len() {
                if self.modules[i].p == self.modules[j].p {
                    out.push(Violation::DuplicatePrime { p: self.modules[i].p, first: i, second: j });
                }
            }
        }
        let h = self.h_size() as u64;
        for (i, m) in self.modules.iter().enumerate() {
            if h.is_multiple_of(m.p as u64) {
                out.push(Violation::PrimeDividesH { module: i, p: m.p, h_order: h });
            }
        }
        let common = self.common_kernel();
        if common.count_ones(..) != 1 {
            out.push(Violation::NontrivialCommonKernel { kernel_order: common.count_ones(..) });
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(StructuredError::Invalid(v))
        }
    }

    pub fn common_kernel(&self) -> FixedBitSet {
        (0..self.modules.len()).fold(self.h_full(), |mut acc, i| {
            acc.intersect_with(&self.kernel(i));
            acc
        })
    }

    // ---- the closed-form criterion -------------------------------------------

    /// `M_H(h)`: intersection of the maximal subgroups of `H` containing `h`,
    /// or `H` itself when `⟨h⟩ = H`.
    pub fn m_h(&self, h: &[u32]) -> FixedBitSet {
        if self.h_cyclic(h).count_ones(..) == self.h_size() {
            return self.h_full();
        }
        let i = self.h_index(h);
        self.h_maximal_subgroups().into_iter().filter(|k| k.contains(i)).fold(self.h_full(), |mut acc, k| {
            acc.intersect_with(&k);
            acc
        })
    }

    /// `J_G(h) = { i : h centralizes V_i and δ_i ≥ 2 }` (0-based indices).
    pub fn j_set(&self, h: &[u32]) -> BTreeSet<usize> {
        self.modules
            .iter()
            .enumerate()
            .filter(|(i, m)| m.delta >= 2 && self.scalar(*i, h) == 1)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_normalized(&self, x: &StructuredElement) -> bool {
        (0..self.modules.len()).all(|i| self.scalar(i, &x.h) == 1 || self.block(&x.vec, i).iter().all(|&c| c == 0))
    }

    /// `J̃(x)` for `x = yh` with `[y, h] = 0`: modules centralized by `h` on
    /// which `y` vanishes or that occur with multiplicity at least two.
    pub fn j_tilde(&self, x: &StructuredElement) -> Result<BTreeSet<usize>> {
        self.check_element(x)?;
        if !self.is_normalized(x) {
            return Err(StructuredError::NotNormalized);
        }
        Ok(self
            .modules
            .iter()
            .enumerate()
            .filter(|(i, m)| {
                self.scalar(*i, &x.h) == 1 && (self.block(&x.vec, *i).iter().all(|&c| c == 0) || m.delta >= 2)
            })
            .map(|(i, _)| i)
            .collect())
    }

    /// A conjugate `x^w` (with `w` in the module) whose module part vanishes
    /// on every block that `h` moves.
    pub fn normalize(&self, x: &StructuredElement) -> Result<StructuredElement> {
        self.check_element(x)?;
        Ok(self.multiply(&self.multiply(&self.normalizer_for(x), x), &self.inverse(&self.normalizer_for(x))))
    }

    /// The module element `w` with `w x w⁻¹` normalized.
    fn normalizer_for(&self, x: &StructuredElement) -> StructuredElement {
        let mut w = vec![0u32; self.dim()];
        for (i, m) in self.modules.iter().enumerate() {
            let s = self.scalar(i, &x.h) as u64;
            if s == 1 {
                continue;
            }
            let p = m.p as u64;
            // w + y − s·w = 0  ⇒  w = −y / (1 − s)
            let inv = arith::inv_mod_prime((1 + p - s) % p, p).expect("s != 1");
            let o = self.offset(i);
            for c in 0..m.delta {
                let y = x.vec[o + c] as u64;
                w[o + c] = ((p - y) % p * inv % p) as u32;
            }
        }
        StructuredElement::new(w, vec![0; self.h_orders.len()])
    }

    /// Order and description of the intersection of all maximal subgroups
    /// containing `x`, by the closed formula `⟨y⟩·C`.
    pub fn fast_mi_closure(&self, x: &StructuredElement) -> Result<FastClosure> {
        self.validate()?;
        let normalized = self.normalize(x)?;
        let y_order = self.vec_order(&normalized.vec);
        let h = &normalized.h;
        let h_cyc = self.h_cyclic(h);
        let h_generates = h_cyc.count_ones(..) == self.h_size();
        let cyclic_order = y_order as u128 * h_cyc.count_ones(..) as u128;
        let j_tilde = self.j_tilde(&normalized)?;
        let c = if h_generates {
            h_cyc
        } else {
            j_tilde.iter().fold(self.m_h(h), |mut acc, &j| {
                acc.intersect_with(&self.kernel(j));
                acc
            })
        };
        let order = y_order as u128 * c.count_ones(..) as u128;
        Ok(FastClosure { normalized, y_order, h_generates, j_tilde, c, order, cyclic_order })
    }

    /// CIM test over every `h ∈ H` with `⟨h⟩ ≠ H`, in lexicographic order.
    pub fn fast_is_cim(&self) -> Result<CimVerdict> {
        self.validate()?;
        let mut checks = Vec::new();
        let mut witness = None;
        for i in 0..self.h_size() {
            let h = self.h_element(i);
            let cyc = self.h_cyclic(&h);
            if cyc.count_ones(..) == self.h_size() {
                continue;
            }
            let m = self.m_h(&h);
            let j = self.j_set(&h);
            let c = j.iter().fold(m.clone(), |mut acc, &jj| {
                acc.intersect_with(&self.kernel(jj));
                acc
            });
            let ok = c == cyc;
            if !ok && witness.is_none() {
                witness = Some(h.clone());
            }
            checks.push(HCheck {
                h,
                j_set: j.into_iter().collect(),
                m_h_order: m.count_ones(..),
                c_order: c.count_ones(..),
                h_order: cyc.count_ones(..),
                ok,
            });
        }
        Ok(CimVerdict { is_cim: witness.is_none(), witness, checks })
    }

    /// IM test for a valid group: `F` is abelian of square-free exponent
    /// with every subgroup normal, so the group is IM exactly when `H` has
    /// square-free exponent.
    pub fn fast_is_im(&self) -> Result<bool> {
        self.validate()?;
        let exponent = self.h_orders.iter().fold(1u64, |e, &d| arith::lcm(e, d as u64));
        Ok(arith::is_square_free(exponent))
    }

    // ---- symbolic maximal subgroups ------------------------------------------

    /// All maximal subgroups of a valid structured group: `F·K` for `K`
    /// maximal in `H`, and `M(W, U, u)` for every hyperplane of every block,
    /// every complementary line and every shift along it.
    pub fn symbolic_maximals(&self) -> Vec<MaximalDescriptor> {
        let mut out: Vec<MaximalDescriptor> =
            self.h_maximal_subgroups().into_iter().map(|k| MaximalDescriptor::Type1 { k }).collect();
        for (i, m) in self.modules.iter().enumerate() {
            let all = all_vectors(m.p, m.delta);
            for f in all.iter().filter(|v| leading_one(v)) {
                for e in all.iter().filter(|v| dot(m.p, f, v) == 1) {
                    for t in 0..m.p {
                        out.push(MaximalDescriptor::Type2 {
                            module: i,
                            hyperplane: f.clone(),
                            complement: e.clone(),
                            shift: t,
                        });
                    }
                }
            }
        }
        out
    }

    /// Order of the intersection of every descriptor in `family` containing
    /// all of `gens`, by solving the linear conditions on the module part
    /// separately for each `h ∈ H`.
    pub fn closure_order_from_maximals(&self, family: &[MaximalDescriptor], gens: &[StructuredElement]) -> u128 {
        let mut k_part = self.h_full();
        let mut constraints: Vec<HashSet<(Vec<u32>, u32)>> = vec![HashSet::new(); self.modules.len()];
        for d in family {
            if !gens.iter().all(|x| d.contains(self, x)) {
                continue;
            }
            match d {
                MaximalDescriptor::Type1 { k } => k_part.intersect_with(k),
                MaximalDescriptor::Type2 { module, hyperplane, shift, .. } => {
                    constraints[*module].insert((hyperplane.clone(), *shift));
                }
            }
        }
        let constraints: Vec<Vec<(Vec<u32>, u32)>> = constraints.into_iter().map(|s| s.into_iter().collect()).collect();
        let mut total: u128 = 0;
        for zi in k_part.ones() {
            let z = self.h_element(zi);
            let mut count: u128 = 1;
            for (i, m) in self.modules.iter().enumerate() {
                let p = m.p as u64;
                let s = self.scalar(i, &z) as u64;
                let rows: Vec<Vec<u32>> = constraints[i].iter().map(|(f, _)| f.clone()).collect();
                let rhs: Vec<u32> =
                    constraints[i].iter().map(|(_, t)| ((1 + p - s) % p * *t as u64 % p) as u32).collect();
                count *= solve_affine(m.p, m.delta, &rows, &rhs).count(m.p);
                if count == 0 {
                    break;
                }
            }
            total += count;
        }
        total
    }

    /// Closure order of `⟨x⟩` computed from the explicit maximal subgroups.
    pub fn mid_scale_mi_closure(&self, x: &StructuredElement) -> Result<u128> {
        self.validate()?;
        self.check_element(x)?;
        Ok(self.closure_order_from_maximals(&self.symbolic_maximals(), std::slice::from_ref(x)))
    }

    /// One `x = yh` per `h ∈ H` and per set of `h`-fixed blocks carrying
    /// `y` (the first basis vector of each chosen block). Every cyclic
    /// subgroup is the image of one of these under conjugation and a
    /// block-wise linear automorphism.
    pub fn cyclic_representatives(&self) -> Vec<StructuredElement> {
        let mut out = Vec::new();
        for hi in 0..self.h_size() {
            let h = self.h_element(hi);
            let fixed: Vec<usize> = (0..self.modules.len()).filter(|&i| self.scalar(i, &h) == 1).collect();
            for mask in 0..(1usize << fixed.len()) {
                let mut vec = vec![0u32; self.dim()];
                for (b, &i) in fixed.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        vec[self.offset(i)] = 1;
                    }
                }
                out.push(StructuredElement::new(vec, h.clone()));
            }
        }
        out
    }

    /// CIM test from the explicit maximal subgroups over
    /// [`cyclic_representatives`](Self::cyclic_representatives).
    pub fn mid_scale_is_cim(&self) -> Result<(bool, Option<StructuredElement>)> {
        self.validate()?;
        let family = self.symbolic_maximals();
        for x in self.cyclic_representatives() {
            let closure = self.closure_order_from_maximals(&family, std::slice::from_ref(&x));
            if closure != self.element_order(&x) as u128 {
                return Ok((false, Some(x)));
            }
        }
        Ok((true, None))
    }

    // ---- concrete realization ------------------------------------------------

    /// The group as a [`FiniteGroup`] generated by the module basis vectors
    /// and the cyclic generators of `H`.
    pub fn materialize(&self, cap: usize) -> Result<FiniteGroup> {
        self.check_well_formed()?;
        if self.order() > cap as u128 {
            return Err(GroupError::EnumerationOverflow { cap }.into());
        }
        let me = Arc::new(self.clone());
        let mut gens = Vec::new();
        for j in 0..self.dim() {
            let mut v = vec![0u32; self.dim()];
            v[j] = 1;
            gens.push(GroupElement::Structured(StructuredElement::new(v, vec![0; self.h_orders.len()])));
        }
        for k in 0..self.h_orders.len() {
            let mut t = vec![0u32; self.h_orders.len()];
            t[k] = 1 % self.h_orders[k];
            gens.push(GroupElement::Structured(StructuredElement::new(vec![0; self.dim()], t)));
        }
        Ok(FiniteGroup::new(Realization::Structured(me), gens)?.with_element_cap(cap))
    }

    /// Generators of the module part `V_1^δ1 × … × V_r^δr`.
    pub fn module_generators(&self) -> Vec<GroupElement> {
        (0..self.dim())
            .map(|j| {
                let mut v = vec![0u32; self.dim()];
                v[j] = 1;
                GroupElement::Structured(StructuredElement::new(v, vec![0; self.h_orders.len()]))
            })
            .collect()
    }

    // ---- spot check of the unique non-closed subgroup ------------------------

    /// Checks through the explicit maximal subgroups that the module part is
    /// not an intersection of maximal subgroups while `samples` random
    /// subgroups `N·⟨x⟩` (`N` a subspace of the module part) all are.
    /// Alternates purely cyclic samples (`N = 0`) with mixed ones.
    pub fn spot_check_unique_nonclosed(&self, samples: usize, seed: u64) -> Result<SpotCheckReport> {
        self.validate()?;
        let family = self.symbolic_maximals();
        let fitting_gens: Vec<StructuredElement> = self
            .module_generators()
            .into_iter()
            .map(|g| match g {
                GroupElement::Structured(s) => s,
                _ => unreachable!(),
            })
            .collect();
        let fitting_order = self.module_order();
        let fitting_closure_order = self.closure_order_from_maximals(&family, &fitting_gens);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = SpotCheckReport {
            fitting_order,
            fitting_closure_order,
            samples: 0,
            cyclic_samples: 0,
            mixed_samples: 0,
            failures: Vec::new(),
        };
        let mut attempts = 0usize;
        while report.samples < samples {
            attempts += 1;
            if attempts > samples * 100 {
                return Err(StructuredError::Usage("could not draw enough proper subgroups".into()));
            }
            let cyclic = report.samples.is_multiple_of(2);
            let bases: Vec<Vec<Vec<u32>>> = self
                .modules
                .iter()
                .map(|m| {
                    if cyclic {
                        Vec::new()
                    } else {
                        let dim = rng.gen_range(0..=m.delta);
                        random_subspace(&mut rng, m.p, m.delta, dim)
                    }
                })
                .collect();
            let x = StructuredElement::new(
                self.modules
                    .iter()
                    .flat_map(|m| (0..m.delta).map(|_| rng.gen_range(0..m.p)).collect::<Vec<_>>())
                    .collect(),
                self.h_orders.iter().map(|&d| rng.gen_range(0..d)).collect(),
            );
            let n_order: u128 =
                self.modules.iter().zip(&bases).map(|(m, b)| (m.p as u128).pow(b.len() as u32)).product();
            // order of x modulo N
            let mut k = 1u64;
            let mut xk = x.clone();
            while !(xk.h.iter().all(|&e| e == 0) && self.in_subspaces(&bases, &xk.vec)) {
                xk = self.multiply(&xk, &x);
                k += 1;
            }
            let order = n_order * k as u128;
            let is_fitting = order == fitting_order && x.h.iter().all(|&e| e == 0);
            if order == self.order() || is_fitting {
                continue;
            }
            let mut gens: Vec<StructuredElement> = Vec::new();
            for (i, b) in bases.iter().enumerate() {
                for v in b {
                    let mut full = vec![0u32; self.dim()];
                    full[self.offset(i)..self.offset(i) + v.len()].copy_from_slice(v);
                    gens.push(StructuredElement::new(full, vec![0; self.h_orders.len()]));
                }
            }
            gens.push(x.clone());
            let closure = self.closure_order_from_maximals(&family, &gens);
            if closure != order {
                report.failures.push(format!(
                    "N dims {:?}, x = {:?}: |K| = {order}, closure order {closure}",
                    bases.iter().map(Vec::len).collect::<Vec<_>>(),
                    x
                ));
            }
            report.samples += 1;
            if cyclic {
                report.cyclic_samples += 1;
            } else {
                report.mixed_samples += 1;
            }
        }
        Ok(report)
    }

    fn in_subspaces(&self, bases: &[Vec<Vec<u32>>], v: &[u32]) -> bool {
        self.modules.iter().enumerate().all(|(i, m)| {
            let block = self.block(v, i);
            if block.iter().all(|&c| c == 0) {
                return true;
            }
            let b = &bases[i];
            if b.is_empty() {
                return false;
            }
            let mut rows: Vec<Vec<i64>> = b.iter().map(|r| r.iter().map(|&c| c as i64).collect()).collect();
            let r0 = MatModP::from_rows(m.p, &rows).rank();
            rows.push(block.iter().map(|&c| c as i64).collect());
            MatModP::from_rows(m.p, &rows).rank() == r0
        })
    }
}

fn all_vectors(p: u32, n: usize) -> Vec<Vec<u32>> {
    let total = (p as usize).pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![0u32; n];
            for c in v.iter_mut().rev() {
                *c = (code % p as usize) as u32;
                code /= p as usize;
            }
            v
        })
        .collect()
}

fn leading_one(v: &[u32]) -> bool {
    v.iter().find(|&&c| c != 0) == Some(&1)
}

fn random_subspace(rng: &mut ChaCha8Rng, p: u32, n: usize, dim: usize) -> Vec<Vec<u32>> {
    let mut basis: Vec<Vec<u32>> = Vec::new();
    while basis.len() < dim {
        let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let mut rows: Vec<Vec<i64>> = basis.iter().map(|r| r.iter().map(|&c| c as i64).collect()).collect();
        rows.push(v.iter().map(|&c| c as i64).collect());
        if MatModP::from_rows(p, &rows).rank() == basis.len() + 1 {
            basis.push(v);
        }
    }
    basis
}

// ---- fixtures and constructors ------------------------------------------------

/// `H = C8`, `V_1` of order 5 with kernel `⟨x⁴⟩` (unit 2), `V_2` of order 17
/// acting faithfully (unit 2).
fn example(delta1: usize, delta2: usize) -> StructuredGroup {
    StructuredGroup::new(vec![8], vec![ModuleSpec::new(5, delta1, vec![2]), ModuleSpec::new(17, delta2, vec![2])])
}

/// `(V_1² × V_2²) ⋊ C8`, a CIM-group.
pub fn example_g1() -> StructuredGroup {
    example(2, 2)
}

/// `(V_1² × V_2) ⋊ C8`.
pub fn example_g2() -> StructuredGroup {
    example(2, 1)
}

/// `(V_1 × V_2²) ⋊ C8`.
pub fn example_g3() -> StructuredGroup {
    example(1, 2)
}

/// `(V_5^d1 × V_13^d2) ⋊ C4` with both actions faithful: the module part is
/// its only proper subgroup that is not an intersection of maximal subgroups.
pub fn construct_solouno(d1: usize, d2: usize) -> Result<StructuredGroup> {
    if d1 < 2 || d2 < 2 {
        return Err(StructuredError::Usage(format!("multiplicities must be at least 2, got {d1}, {d2}")));
    }
    Ok(StructuredGroup::new(vec![4], vec![ModuleSpec::new(5, d1, vec![2]), ModuleSpec::new(13, d2, vec![5])]))
}

/// `(V_3² × V_5²) ⋊ C2` with both actions by −1 (order 450).
pub fn solouno_small_analog() -> StructuredGroup {
    StructuredGroup::new(vec![2], vec![ModuleSpec::new(3, 2, vec![2]), ModuleSpec::new(5, 2, vec![4])])
}

/// A CIM-group `(∏ V(C, p_C)²) ⋊ A` whose quotient by the module part is the
/// abelian group `A = C_{orders[0]} × …`. One module per kernel `C ≤ A`
/// with `A/C` cyclic, chosen greedily over the pairs `(a, b)` with
/// `⟨a⟩ ≠ A`, `b ∉ ⟨a⟩`; primes are the least `p ≡ 1 mod |A/C|` not dividing
/// `|A|` and not yet used.
pub fn construct_with_quotient(orders: &[u32]) -> Result<QuotientConstruction> {
    construct_with_quotient_bounded(orders, DEFAULT_PRIME_CEILING)
}

pub fn construct_with_quotient_bounded(orders: &[u32], prime_ceiling: u64) -> Result<QuotientConstruction> {
    if orders.contains(&0) {
        return Err(StructuredError::Usage("cyclic factor of order 0".into()));
    }
    let a = StructuredGroup::new(orders.to_vec(), Vec::new());
    let size = a.h_size();
    if size <= 1 {
        return Err(StructuredError::Usage("the abelian group must be nontrivial".into()));
    }
    let exponent = orders.iter().fold(1u64, |acc, &d| arith::lcm(acc, d as u64));

    // Candidate kernels of surjections A → Z/m, first hom kept per kernel.
    struct Candidate {
        kernel: FixedBitSet,
        coeffs: Vec<u64>,
        m: u64,
    }
    let mut candidates: Vec<Candidate> = Vec::new();
    for m in arith::divisors(exponent).into_iter().filter(|&m| m > 1) {
        let choices: Vec<Vec<u64>> =
            orders.iter().map(|&d| (0..m).filter(|&c| (c * d as u64).is_multiple_of(m)).collect()).collect();
        let mut idx = vec![0usize; orders.len()];
        loop {
            let coeffs: Vec<u64> = idx.iter().zip(&choices).map(|(&i, ch)| ch[i]).collect();
            let g = coeffs.iter().fold(m, |acc, &c| arith::gcd(acc, c));
            if g == 1 {
                let mut kernel = FixedBitSet::with_capacity(size);
                for i in 0..size {
                    let t = a.h_element(i);
                    let s: u64 = coeffs.iter().zip(&t).map(|(&c, &e)| c * e as u64).sum();
                    if s.is_multiple_of(m) {
                        kernel.insert(i);
                    }
                }
                if !candidates.iter().any(|c| c.kernel == kernel) {
                    candidates.push(Candidate { kernel, coeffs, m });
                }
            }
            // odometer
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    // Largest kernels first; the sort is stable so ties keep discovery order.
    candidates.sort_by(|x, y| y.kernel.count_ones(..).cmp(&x.kernel.count_ones(..)));

    let mut chosen: Vec<usize> = Vec::new();
    for ai in 0..size {
        let at = a.h_element(ai);
        let cyc = a.h_cyclic(&at);
        if cyc.count_ones(..) == size {
            continue;
        }
        for bi in 0..size {
            if cyc.contains(bi) {
                continue;
            }
            let usable = |c: &Candidate| c.kernel.contains(ai) && !c.kernel.contains(bi);
            if chosen.iter().any(|&c| usable(&candidates[c])) {
                continue;
            }
            let pick = candidates.iter().position(usable).expect("a cyclic quotient separates b from <a>");
            chosen.push(pick);
        }
    }

    let mut used: Vec<u64> = Vec::new();
    let mut modules = Vec::new();
    let mut kernels = Vec::new();
    for &ci in &chosen {
        let cand = &candidates[ci];
        let m = cand.m;
        let mut p = m + 1;
        loop {
            if p > prime_ceiling {
                return Err(StructuredError::PrimeSearchExhausted { modulus: m, ceiling: prime_ceiling });
            }
            if arith::is_prime(p) && !(size as u64).is_multiple_of(p) && !used.contains(&p) {
                break;
            }
            p += m;
        }
        used.push(p);
        let zeta = arith::pow_mod(arith::primitive_root(p), (p - 1) / m, p);
        let action = cand.coeffs.iter().map(|&c| arith::pow_mod(zeta, c, p) as u32).collect();
        modules.push(ModuleSpec::new(p as u32, 2, action));
        kernels.push((a.h_subgroup_generators(&cand.kernel), m, p as u32));
    }
    Ok(QuotientConstruction { group: StructuredGroup::new(orders.to_vec(), modules), kernels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn se(vec: &[u32], h: &[u32]) -> StructuredElement {
        StructuredElement::new(vec.to_vec(), h.to_vec())
    }

    fn set(s: &[usize]) -> BTreeSet<usize> {
        s.iter().copied().collect()
    }

    #[test]
    fn semidirect_law_hand_computation() {
        // C8 = <x> acting on C5 by the unit 2: (3, x)(1, 1) = (3 + 2·1, x) = (0, x)
        let g = StructuredGroup::new(vec![8], vec![ModuleSpec::new(5, 1, vec![2])]);
        assert_eq!(g.multiply(&se(&[3], &[1]), &se(&[1], &[0])), se(&[0], &[1]));
        let x = se(&[3], &[5]);
        assert_eq!(g.multiply(&x, &g.inverse(&x)), g.identity());
        assert_eq!(g.multiply(&g.inverse(&x), &x), g.identity());
    }

    #[test]
    fn validation_rules() {
        assert!(example_g1().validate().is_ok());
        assert!(example_g2().validate().is_ok());
        assert!(example_g3().validate().is_ok());
        let dup = StructuredGroup::new(vec![4], vec![ModuleSpec::new(5, 1, vec![2]), ModuleSpec::new(5, 1, vec![3])]);
        assert_eq!(dup.violations(), vec![Violation::DuplicatePrime { p: 5, first: 0, second: 1 }]);
        let divides = StructuredGroup::new(vec![5], vec![ModuleSpec::new(5, 1, vec![1])]);
        let v = divides.violations();
        assert!(v.contains(&Violation::PrimeDividesH { module: 0, p: 5, h_order: 5 }));
        assert!(v.contains(&Violation::NontrivialCommonKernel { kernel_order: 5 }));
        let kernel = StructuredGroup::new(vec![4], vec![ModuleSpec::new(3, 1, vec![2])]);
        assert_eq!(kernel.violations(), vec![Violation::NontrivialCommonKernel { kernel_order: 2 }]);
        let not_hom = StructuredGroup::new(vec![4], vec![ModuleSpec::new(7, 1, vec![3])]);
        assert!(matches!(not_hom.violations()[0], Violation::NotHomomorphism { .. }));
        assert!(not_hom.materialize(1000).is_err());
        let not_prime = StructuredGroup::new(vec![2], vec![ModuleSpec::new(9, 1, vec![8])]);
        assert_eq!(not_prime.violations(), vec![Violation::NotPrime { module: 0, p: 9 }]);
    }

    #[test]
    fn kernels_of_the_examples() {
        let g1 = example_g1();
        // C_H(V_1) = <x^4>, C_H(V_2) = 1
        let k1: Vec<Vec<u32>> = g1.kernel(0).ones().map(|i| g1.h_element(i)).collect();
        assert_eq!(k1, vec![vec![0], vec![4]]);
        assert_eq!(g1.kernel(1).count_ones(..), 1);
    }

    #[test]
    fn m_h_in_c8() {
        let g = example_g1();
        let elems = |s: &FixedBitSet| s.ones().map(|i| g.h_element(i)[0]).collect::<Vec<_>>();
        assert_eq!(elems(&g.m_h(&[4])), vec![0, 2, 4, 6]);
        assert_eq!(elems(&g.m_h(&[2])), vec![0, 2, 4, 6]);
        assert_eq!(elems(&g.m_h(&[6])), vec![0, 2, 4, 6]);
        assert_eq!(g.m_h(&[1]).count_ones(..), 8);
        assert_eq!(g.h_maximal_subgroups().len(), 1);
    }

    #[test]
    fn j_sets() {
        assert_eq!(example_g1().j_set(&[4]), set(&[0]));
        assert_eq!(example_g1().j_set(&[0]), set(&[0, 1]));
        assert_eq!(example_g3().j_set(&[4]), set(&[]));
        assert_eq!(example_g2().j_set(&[0]), set(&[0]));
    }

    #[test]
    fn j_tilde_cases() {
        let g2 = example_g2();
        // y of order 17, h = 1
        assert_eq!(g2.j_tilde(&se(&[0, 0, 1], &[0])).unwrap(), set(&[0]));
        // x = h: every module h centralizes
        assert_eq!(g2.j_tilde(&se(&[0, 0, 0], &[4])).unwrap(), set(&[0]));
        let g1 = example_g1();
        assert_eq!(g1.j_tilde(&se(&[1, 0, 3, 0], &[0])).unwrap(), set(&[0, 1]));
        assert_eq!(g1.j_tilde(&se(&[1, 0, 0, 0], &[1])), Err(StructuredError::NotNormalized));
    }

    #[test]
    fn normalization() {
        let g1 = example_g1();
        let x = se(&[0, 1, 0, 0], &[0]);
        assert_eq!(g1.normalize(&x).unwrap(), x);
        // x acts on V_1 by 2 ≠ 1, so the V_1 block can be conjugated away
        let moved = se(&[3, 0, 0, 0], &[1]);
        assert_eq!(g1.normalize(&moved).unwrap(), se(&[0, 0, 0, 0], &[1]));
        // block already supported where h = x^4 acts trivially
        let fixed = se(&[1, 2, 0, 0], &[4]);
        assert_eq!(g1.normalize(&fixed).unwrap(), fixed);
        // the result really is a conjugate
        let y = se(&[2, 3, 5, 7], &[3]);
        let ny = g1.normalize(&y).unwrap();
        assert!(g1.is_normalized(&ny));
        assert_eq!(g1.element_order(&ny), g1.element_order(&y));
    }

    #[test]
    fn closure_orders_of_the_examples() {
        let g2 = example_g2();
        let c17 = g2.fast_mi_closure(&se(&[0, 0, 1], &[0])).unwrap();
        assert_eq!((c17.cyclic_order, c17.order), (17, 34));
        let c85 = g2.fast_mi_closure(&se(&[1, 0, 1], &[0])).unwrap();
        assert_eq!((c85.cyclic_order, c85.order), (85, 170));
        assert_eq!(g2.mid_scale_mi_closure(&se(&[0, 0, 1], &[0])).unwrap(), 34);
        assert_eq!(g2.mid_scale_mi_closure(&se(&[1, 0, 1], &[0])).unwrap(), 170);
        let g3 = example_g3();
        let x = se(&[1, 0, 0], &[4]);
        assert_eq!(g3.element_order(&x), 10);
        assert_eq!(g3.fast_mi_closure(&x).unwrap().order, 20);
        assert_eq!(g3.mid_scale_mi_closure(&x).unwrap(), 20);
        let g1 = example_g1();
        for x in [se(&[1, 0, 0, 0], &[4]), se(&[1, 1, 2, 3], &[0]), se(&[0, 0, 0, 0], &[2]), se(&[4, 4, 0, 0], &[1])] {
            let c = g1.fast_mi_closure(&x).unwrap();
            assert!(c.is_closed(), "{x:?}");
            assert_eq!(c.cyclic_order, g1.element_order(&x) as u128);
            assert_eq!(g1.mid_scale_mi_closure(&x).unwrap(), c.order);
        }
    }

    #[test]
    fn cim_verdicts() {
        let v1 = example_g1().fast_is_cim().unwrap();
        assert!(v1.is_cim);
        let v2 = example_g2().fast_is_cim().unwrap();
        assert_eq!(v2.witness, Some(vec![0]));
        let v3 = example_g3().fast_is_cim().unwrap();
        assert_eq!(v3.witness, Some(vec![4]));
        assert!(example_g1().mid_scale_is_cim().unwrap().0);
        assert!(!example_g2().mid_scale_is_cim().unwrap().0);
        assert!(!example_g3().mid_scale_is_cim().unwrap().0);
        let bad = StructuredGroup::new(vec![4], vec![ModuleSpec::new(3, 1, vec![2])]);
        assert!(matches!(bad.fast_is_cim(), Err(StructuredError::Invalid(_))));
    }

    #[test]
    fn descriptor_counts() {
        let g1 = example_g1();
        let d = g1.symbolic_maximals();
        let type1 = d.iter().filter(|x| matches!(x, MaximalDescriptor::Type1 { .. })).count();
        assert_eq!(type1, 1);
        let hyperplanes = |m: usize| {
            d.iter()
                .filter_map(|x| match x {
                    MaximalDescriptor::Type2 { module, hyperplane, .. } if *module == m => Some(hyperplane.clone()),
                    _ => None,
                })
                .collect::<HashSet<_>>()
                .len()
        };
        assert_eq!(hyperplanes(0), 6);
        assert_eq!(hyperplanes(1), 18);
        let id = g1.identity();
        for x in &d {
            if let MaximalDescriptor::Type2 { shift: 0, .. } = x {
                assert!(x.contains(&g1, &id));
            }
        }
        let prime_h = StructuredGroup::new(vec![3], vec![ModuleSpec::new(7, 1, vec![2])]);
        let t1: Vec<_> = prime_h
            .symbolic_maximals()
            .into_iter()
            .filter_map(|x| match x {
                MaximalDescriptor::Type1 { k } => Some(k.count_ones(..)),
                _ => None,
            })
            .collect();
        assert_eq!(t1, vec![1]);
    }

    #[test]
    fn frattini_through_descriptors() {
        for g in [example_g1(), example_g2(), example_g3()] {
            assert_eq!(g.mid_scale_mi_closure(&g.identity()).unwrap(), 1);
        }
    }

    #[test]
    fn materialized_orders() {
        let s3 = StructuredGroup::new(vec![2], vec![ModuleSpec::new(3, 1, vec![2])]);
        let g = s3.materialize(100).unwrap();
        assert_eq!(g.order().unwrap(), 6);
        assert!(!g.is_abelian().unwrap());
        assert_eq!(solouno_small_analog().order(), 450);
        assert_eq!(construct_solouno(2, 2).unwrap().order(), 16_900);
        assert_eq!(construct_solouno(2, 2).unwrap().module_order(), 4_225);
        assert!(construct_solouno(1, 2).is_err());
        assert!(example_g1().materialize(1000).is_err());
    }

    #[test]
    fn quotient_constructions() {
        let c2 = construct_with_quotient(&[2]).unwrap();
        assert_eq!(c2.group.modules, vec![ModuleSpec::new(3, 2, vec![2])]);
        assert_eq!(c2.group.order(), 18);
        for a in [vec![2], vec![4], vec![2, 2], vec![6], vec![3], vec![2, 4]] {
            let q = construct_with_quotient(&a).unwrap();
            assert!(q.group.validate().is_ok(), "{a:?}");
            assert!(q.group.fast_is_cim().unwrap().is_cim, "{a:?}");
        }
        assert!(construct_with_quotient(&[1]).is_err());
        assert!(matches!(construct_with_quotient_bounded(&[4], 4), Err(StructuredError::PrimeSearchExhausted { .. })));
    }

    #[test]
    fn solouno_unit_choices() {
        assert_eq!(arith::multiplicative_order(2, 5), Some(4));
        assert_eq!(arith::multiplicative_order(5, 13), Some(4));
        let g = construct_solouno(2, 2).unwrap();
        assert!(g.validate().is_ok());
        assert_eq!(g.common_kernel().count_ones(..), 1);
        assert_eq!(g.kernel(0).count_ones(..), 1);
        assert_eq!(g.kernel(1).count_ones(..), 1);
    }
}
