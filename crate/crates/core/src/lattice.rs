//! Brute-force subgroup lattice of an enumerated group and the closure
//! invariants read off from it: MI-closure, Frattini and Fitting subgroups,
//! the IM / CIM / AIM and T-group properties, and the proportion of
//! closed subgroups.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::group::{FiniteGroup, GroupError, Indexed, Subgroup};

/// Default ceiling on the number of subgroups the lattice may hold.
pub const DEFAULT_SUBGROUP_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("subgroup lattice exceeded the cap of {cap} subgroups")]
    Overflow { cap: usize },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// Every subgroup of `top` (by default the whole group), sorted by order.
pub struct SubgroupLattice<'a> {
    ix: Indexed<'a>,
    subgroups: Vec<Subgroup>,
    index: HashMap<FixedBitSet, usize>,
    top: usize,
    top_gens: Vec<u32>,
    maximals: Vec<usize>,
}

impl<'a> SubgroupLattice<'a> {
    pub fn new(group: &'a FiniteGroup) -> Result<Self> {
        Self::with_cap(group, DEFAULT_SUBGROUP_CAP)
    }

    pub fn with_cap(group: &'a FiniteGroup, cap: usize) -> Result<Self> {
        let ix = group.indexed()?;
        let gens = group.generator_indices()?;
        let subgroups = all_subgroups(&ix, &gens, cap)?;
        Ok(Self::assemble(ix, subgroups, None))
    }

    fn assemble(ix: Indexed<'a>, mut subgroups: Vec<Subgroup>, top_gens: Option<Vec<u32>>) -> Self {
        subgroups.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members().ones().cmp(b.members().ones())));
        let index = subgroups.iter().enumerate().map(|(i, s)| (s.members().clone(), i)).collect();
        let top = subgroups.len() - 1;
        let top_gens = top_gens.unwrap_or_else(|| subgroups[top].generators().to_vec());
        let mut lattice = Self { ix, subgroups, index, top, top_gens, maximals: Vec::new() };
        lattice.maximals = lattice.find_maximals();
        lattice
    }

    /// The lattice of subgroups of `self.subgroups()[sub]`.
    pub fn restrict(&self, sub: usize) -> SubgroupLattice<'a> {
        let top = &self.subgroups[sub];
        let subs: Vec<Subgroup> = self.subgroups.iter().filter(|s| s.is_subgroup_of(top)).cloned().collect();
        let ix = self.ix.group().indexed().expect("already enumerated");
        SubgroupLattice::assemble(ix, subs, Some(top.generators().to_vec()))
    }

    pub fn indexed(&self) -> &Indexed<'a> {
        &self.ix
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn get(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn find(&self, members: &FixedBitSet) -> Option<usize> {
        self.index.get(members).copied()
    }

    /// Position of the subgroup generated by `gens`.
    pub fn position_of_closure(&self, gens: &[u32]) -> usize {
        let s = self.ix.closure(gens);
        self.find(s.members()).expect("the lattice holds every subgroup")
    }

    pub fn maximals(&self) -> &[usize] {
        &self.maximals
    }

    fn find_maximals(&self) -> Vec<usize> {
        let mut found: Vec<usize> = Vec::new();
        for i in (0..self.top).rev() {
            let s = &self.subgroups[i];
            if !found.iter().any(|&m| s.is_subgroup_of(&self.subgroups[m])) {
                found.push(i);
            }
        }
        found.sort_unstable();
        found
    }

    /// Intersection of all maximal subgroups containing subgroup `i`, or the
    /// top group when none does.
    pub fn mi_closure(&self, i: usize) -> usize {
        let s = &self.subgroups[i];
        let mut acc: Option<FixedBitSet> = None;
        for &m in &self.maximals {
            let mm = &self.subgroups[m];
            if s.is_subgroup_of(mm) {
                match acc.as_mut() {
                    None => acc = Some(mm.members().clone()),
                    Some(a) => a.intersect_with(mm.members()),
                }
            }
        }
        match acc {
            None => self.top,
            Some(a) => self.find(&a).expect("intersections of subgroups are subgroups"),
        }
    }

    pub fn is_closed(&self, i: usize) -> bool {
        self.mi_closure(i) == i
    }

    pub fn frattini(&self) -> usize {
        self.mi_closure(self.trivial())
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.ix.is_normalized_by(&self.subgroups[i], &self.top_gens)
    }

    fn is_normal_in(&self, i: usize, j: usize) -> bool {
        self.ix.is_normalized_by(&self.subgroups[i], self.subgroups[j].generators())
    }

    /// A subgroup is nilpotent iff it has exactly one subgroup of each
    /// Sylow order.
    pub fn is_nilpotent(&self, i: usize) -> bool {
        let s = &self.subgroups[i];
        arith::factorize(s.order() as u64).into_iter().all(|(p, e)| {
            let sylow = p.pow(e) as usize;
            self.subgroups.iter().filter(|t| t.order() == sylow && t.is_subgroup_of(s)).count() == 1
        })
    }

    pub fn fitting(&self) -> usize {
        (0..=self.top)
            .rev()
            .find(|&i| self.is_normal(i) && self.is_nilpotent(i))
            .expect("the trivial subgroup is nilpotent and normal")
    }

    pub fn is_cyclic(&self, i: usize) -> bool {
        let s = &self.subgroups[i];
        s.iter().any(|g| self.ix.element_order(g) == s.order() as u64)
    }

    pub fn is_abelian(&self, i: usize) -> bool {
        self.ix.commute_pairwise(self.subgroups[i].generators())
    }

    /// Proper subgroups that are not intersections of maximal subgroups.
    pub fn non_closed(&self) -> Vec<usize> {
        (0..self.top).filter(|&i| !self.is_closed(i)).collect()
    }

    pub fn is_im(&self) -> bool {
        (0..=self.top).all(|i| self.is_closed(i))
    }

    pub fn is_cim(&self) -> bool {
        (0..=self.top).filter(|&i| self.is_cyclic(i)).all(|i| self.is_closed(i))
    }

    pub fn is_aim(&self) -> bool {
        (0..=self.top).filter(|&i| self.is_abelian(i)).all(|i| self.is_closed(i))
    }

    /// Share of proper subgroups (the trivial one included) that are
    /// intersections of maximal subgroups.
    pub fn p_im(&self) -> Result<Ratio<u64>> {
        if self.top == 0 {
            return Err(LatticeError::Usage("the trivial group has no proper subgroups".into()));
        }
        let closed = (0..self.top).filter(|&i| self.is_closed(i)).count();
        Ok(Ratio::new(closed as u64, self.top as u64))
    }

    /// Normality is transitive: a normal subgroup of a normal subgroup is
    /// normal.
    pub fn is_t_group(&self) -> bool {
        let normal: Vec<usize> = (0..=self.top).filter(|&i| self.is_normal(i)).collect();
        normal.iter().all(|&n| {
            let nn = &self.subgroups[n];
            (0..n).all(|k| {
                let kk = &self.subgroups[k];
                !kk.is_subgroup_of(nn) || !self.is_normal_in(k, n) || self.is_normal(k)
            })
        })
    }

    /// The structural shape of an IM-group: a normal Hall subgroup `N`,
    /// abelian of square-free exponent, with `G/N` abelian of square-free
    /// exponent and every subgroup of `N` normal in `G`.
    pub fn is_im_structural(&self) -> bool {
        let g_order = self.subgroups[self.top].order() as u64;
        let top = self.subgroups[self.top].clone();
        (0..=self.top).any(|n| {
            let nn = &self.subgroups[n];
            let n_order = nn.order() as u64;
            let q_order = g_order / n_order;
            if arith::gcd(n_order, q_order) != 1 || !self.is_normal(n) || !self.is_abelian(n) {
                return false;
            }
            let n_exp = nn.iter().fold(1, |acc, g| arith::lcm(acc, self.ix.element_order(g)));
            if !arith::is_square_free(n_exp) {
                return false;
            }
            let rad: u64 = arith::prime_divisors(q_order).into_iter().product();
            let quotient_ok = top.iter().all(|g| {
                nn.contains(self.ix.pow(g, rad)) && self.top_gens.iter().all(|&h| nn.contains(self.ix.commutator(g, h)))
            });
            quotient_ok && (0..n).all(|k| !self.subgroups[k].is_subgroup_of(nn) || self.is_normal(k))
        })
    }

    /// `<g1, g2, …>` using the parent group's element notation.
    pub fn describe(&self, i: usize) -> String {
        let gens: Vec<String> =
            self.subgroups[i].generators().iter().map(|&g| self.ix.element(g).to_string()).collect();
        format!("<{}> (order {})", gens.join(", "), self.subgroups[i].order())
    }
}

/// Join-closure from the cyclic subgroups, one conjugacy class at a time.
fn all_subgroups(ix: &Indexed<'_>, group_gens: &[u32], cap: usize) -> Result<Vec<Subgroup>> {
    let n = ix.n();
    // one generator per cyclic subgroup
    let mut covered = FixedBitSet::with_capacity(n);
    let mut cyclic_gens = Vec::new();
    for g in 1..n as u32 {
        if covered.contains(g as usize) {
            continue;
        }
        let ord = ix.element_order(g);
        for k in 1..=ord {
            if arith::gcd(k, ord) == 1 {
                covered.insert(ix.pow(g, k) as usize);
            }
        }
        cyclic_gens.push(g);
    }

    let mut subgroups: Vec<Subgroup> = Vec::new();
    let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();

    let add_class = |s: Subgroup,
                     subgroups: &mut Vec<Subgroup>,
                     index: &mut HashMap<FixedBitSet, usize>|
     -> Result<Option<usize>> {
        if index.contains_key(s.members()) {
            return Ok(None);
        }
        let rep = subgroups.len();
        let mut orbit = VecDeque::from([s]);
        while let Some(t) = orbit.pop_front() {
            if index.contains_key(t.members()) {
                continue;
            }
            if subgroups.len() >= cap {
                return Err(LatticeError::Overflow { cap });
            }
            index.insert(t.members().clone(), subgroups.len());
            for &g in group_gens {
                let c = ix.conjugate_subgroup(&t, g);
                if !index.contains_key(c.members()) {
                    orbit.push_back(c);
                }
            }
            subgroups.push(t);
        }
        Ok(Some(rep))
    };

    if let Some(r) = add_class(ix.trivial(), &mut subgroups, &mut index)? {
        queue.push_back(r);
    }
    while let Some(r) = queue.pop_front() {
        let s = subgroups[r].clone();
        for &z in &cyclic_gens {
            if s.contains(z) {
                continue;
            }
            let t = ix.join_element(&s, z);
            if let Some(rep) = add_class(t, &mut subgroups, &mut index)? {
                queue.push_back(rep);
            }
        }
    }
    Ok(subgroups)
}

/// Everything the brute-force classifier reports about one group.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub group_id: String,
    pub order: u128,
    #[serde(rename = "is_IM")]
    pub is_im: Option<bool>,
    #[serde(rename = "is_CIM")]
    pub is_cim: Option<bool>,
    #[serde(rename = "is_AIM")]
    pub is_aim: Option<bool>,
    #[serde(rename = "is_T_group")]
    pub is_t_group: Option<bool>,
    pub is_soluble: Option<bool>,
    pub is_supersoluble: Option<bool>,
    pub is_metabelian: Option<bool>,
    pub frattini_order: Option<u128>,
    pub fitting_order: Option<u128>,
    /// Reduced fraction `a/b`, or `None` for the trivial group.
    pub p_im: Option<String>,
    pub non_closed_witnesses: Vec<String>,
}

/// Classifies an enumerable group through its full subgroup lattice.
/// At most `max_witnesses` non-closed subgroups are listed.
pub fn classify_brute(
    group: &FiniteGroup,
    group_id: &str,
    subgroup_cap: usize,
    max_witnesses: usize,
) -> Result<ClassificationReport> {
    let lattice = SubgroupLattice::with_cap(group, subgroup_cap)?;
    let non_closed = lattice.non_closed();
    let p_im = lattice.p_im().ok().map(|r| format!("{}/{}", r.numer(), r.denom()));
    Ok(ClassificationReport {
        group_id: group_id.to_string(),
        order: group.order()? as u128,
        is_im: Some(non_closed.is_empty()),
        is_cim: Some(lattice.is_cim()),
        is_aim: Some(lattice.is_aim()),
        is_t_group: Some(lattice.is_t_group()),
        is_soluble: Some(group.is_soluble()?),
        is_supersoluble: Some(group.is_supersoluble()?),
        is_metabelian: Some(group.is_metabelian()?),
        frattini_order: Some(lattice.get(lattice.frattini()).order() as u128),
        fitting_order: Some(lattice.get(lattice.fitting()).order() as u128),
        p_im,
        non_closed_witnesses: non_closed.iter().take(max_witnesses).map(|&i| lattice.describe(i)).collect(),
    })
}
