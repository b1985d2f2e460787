//! Bulk classification with implication checks.

use cimlab_core::lattice::SubgroupLattice;
use cimlab_core::structured::ModuleSpec;
use cimlab_core::{arith, families, FiniteGroup, StructuredGroup};
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{compare_on_lattice, fast_report, Caps};
use crate::error::CliError;
use crate::groupfile::GroupFile;

pub const GRID_H: [&[u32]; 5] = [&[2], &[3], &[4], &[2, 2], &[6]];
pub const GRID_PRIMES: [u32; 6] = [3, 5, 7, 11, 13, 17];

/// One census subject.
#[derive(Clone, Debug)]
pub enum Subject {
    Structured(StructuredGroup),
    Named(String, FiniteGroup),
    File(String, GroupFile),
}

impl Subject {
    pub fn id(&self) -> String {
        match self {
            Subject::Structured(g) => g.to_string(),
            Subject::Named(name, _) | Subject::File(name, _) => name.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub group_id: String,
    pub order: Option<u128>,
    pub is_im: Option<bool>,
    pub is_cim: Option<bool>,
    pub is_aim: Option<bool>,
    pub is_t_group: Option<bool>,
    pub is_soluble: Option<bool>,
    pub is_supersoluble: Option<bool>,
    pub is_metabelian: Option<bool>,
    pub p_im: Option<String>,
    pub fast_vs_brute_agree: Option<bool>,
    pub witness: String,
}

/// A row plus everything the summary needs but the CSV does not carry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowResult {
    pub row: CensusRow,
    pub violations: Vec<String>,
    pub disagreements: Vec<String>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub rows: usize,
    pub cim_not_im: usize,
    pub violations: usize,
    pub disagreements: usize,
    pub errors: usize,
}

impl Summary {
    pub fn of(results: &[RowResult]) -> Self {
        Summary {
            rows: results.len(),
            cim_not_im: results.iter().filter(|r| r.row.is_cim == Some(true) && r.row.is_im == Some(false)).count(),
            violations: results.iter().map(|r| r.violations.len()).sum(),
            disagreements: results.iter().filter(|r| !r.disagreements.is_empty()).count(),
            errors: results.iter().filter(|r| r.error.is_some()).count(),
        }
    }

    pub fn clean(&self) -> bool {
        self.violations == 0 && self.disagreements == 0 && self.errors == 0
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "census: {} rows, {} CIM-not-IM, {} implication violations, {} engine disagreements, {} errors",
            self.rows, self.cim_not_im, self.violations, self.disagreements, self.errors
        )
    }
}

/// Every unit tuple `(a_1, …, a_m)` modulo `p` with `a_k^{d_k} = 1`.
pub fn action_tuples(p: u32, h: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &d in h {
        let units: Vec<u32> = (1..p).filter(|&a| arith::pow_mod(a as u64, d as u64, p as u64) == 1).collect();
        out = out
            .into_iter()
            .flat_map(|t| {
                units.iter().map(move |&a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// Valid structured groups over the grid with order at most `max_order`, in
/// a fixed order: `H`, then prime subsets, multiplicities, actions.
pub fn structured_grid(max_order: u128) -> Vec<StructuredGroup> {
    let mut out = Vec::new();
    for h in GRID_H {
        let h_size: u128 = h.iter().map(|&d| d as u128).product();
        for mask in 1u32..(1 << GRID_PRIMES.len()) {
            let primes: Vec<u32> =
                GRID_PRIMES.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            if h_size * primes.iter().map(|&p| p as u128).product::<u128>() > max_order {
                continue;
            }
            let mut partial: Vec<Vec<ModuleSpec>> = vec![Vec::new()];
            for &p in &primes {
                let mut next = Vec::new();
                for prefix in &partial {
                    for delta in 1..=2 {
                        for action in action_tuples(p, h) {
                            let mut modules = prefix.clone();
                            modules.push(ModuleSpec::new(p, delta, action));
                            next.push(modules);
                        }
                    }
                }
                partial = next;
            }
            for modules in partial {
                let g = StructuredGroup::new(h.to_vec(), modules);
                if g.order() <= max_order && g.validate().is_ok() {
                    out.push(g);
                }
            }
        }
    }
    out
}

/// `C4, Q8, D8, Sym(3), Alt(4), Alt(5), C3 × C3, C6`.
pub fn control_groups() -> Vec<(String, FiniteGroup)> {
    vec![
        ("C4".into(), families::cyclic(4)),
        ("Q8".into(), families::quaternion8()),
        ("D8".into(), families::dihedral(4)),
        ("Sym(3)".into(), families::symmetric(3)),
        ("Alt(4)".into(), families::alternating(4)),
        ("Alt(5)".into(), families::alternating(5)),
        ("C3xC3".into(), families::elementary_abelian(3, 2)),
        ("C6".into(), families::cyclic(6)),
    ]
}

/// Implications that must hold in every finite group; one line per failure.
pub fn implication_violations(group: &FiniteGroup, lattice: &SubgroupLattice<'_>) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    let (im, cim, aim) = (lattice.is_im(), lattice.is_cim(), lattice.is_aim());
    if cim {
        let soluble = group.is_soluble()?;
        let supersoluble = group.is_supersoluble()?;
        let metabelian = group.is_metabelian()?;
        let t = lattice.is_t_group();
        if !(soluble && supersoluble && metabelian && t) {
            out.push(format!(
                "CIM but soluble={soluble} supersoluble={supersoluble} metabelian={metabelian} T-group={t}"
            ));
        }
        for i in 0..lattice.len() {
            if i != lattice.top() && lattice.is_normal(i) && !lattice.restrict(i).is_cim() {
                out.push(format!("CIM but normal subgroup {} is not CIM", lattice.describe(i)));
            }
        }
    }
    if im && !aim {
        out.push("IM but not AIM".into());
    }
    if aim && !cim {
        out.push("AIM but not CIM".into());
    }
    if aim != im {
        out.push(format!("is_AIM = {aim} but is_IM = {im}"));
    }
    let structural = lattice.is_im_structural();
    if structural != im {
        out.push(format!("is_IM = {im} but structural IM shape = {structural}"));
    }
    Ok(out)
}

fn first_witness(lattice: &SubgroupLattice<'_>) -> String {
    lattice.non_closed().first().map(|&i| format!("non-closed {}", lattice.describe(i))).unwrap_or_default()
}

fn lattice_row(
    id: String,
    group: &FiniteGroup,
    lattice: &SubgroupLattice<'_>,
) -> Result<(CensusRow, Vec<String>), CliError> {
    let row = CensusRow {
        group_id: id,
        order: Some(group.order()? as u128),
        is_im: Some(lattice.is_im()),
        is_cim: Some(lattice.is_cim()),
        is_aim: Some(lattice.is_aim()),
        is_t_group: Some(lattice.is_t_group()),
        is_soluble: Some(group.is_soluble()?),
        is_supersoluble: Some(group.is_supersoluble()?),
        is_metabelian: Some(group.is_metabelian()?),
        p_im: lattice.p_im().ok().map(|r| format!("{}/{}", r.numer(), r.denom())),
        fast_vs_brute_agree: None,
        witness: first_witness(lattice),
    };
    Ok((row, implication_violations(group, lattice)?))
}

fn run_structured(g: &StructuredGroup, caps: Caps) -> Result<RowResult, CliError> {
    let group = g.materialize(caps.elements)?;
    let lattice = SubgroupLattice::with_cap(&group, caps.subgroups)?;
    let (mut row, violations) = lattice_row(g.to_string(), &group, &lattice)?;
    let mut disagreements = compare_on_lattice(g, &lattice)?;
    let (fast, witness) = fast_report(g, &row.group_id)?;
    if fast.frattini_order != Some(lattice.get(lattice.frattini()).order() as u128) {
        disagreements.push(format!("frattini_order: fast {:?}", fast.frattini_order));
    }
    if fast.fitting_order != Some(lattice.get(lattice.fitting()).order() as u128) {
        disagreements.push(format!("fitting_order: fast {:?}", fast.fitting_order));
    }
    row.fast_vs_brute_agree = Some(disagreements.is_empty());
    if let Some(h) = witness {
        let h = h.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        row.witness = if row.witness.is_empty() { format!("h=({h})") } else { format!("h=({h}); {}", row.witness) };
    }
    Ok(RowResult { row, violations, disagreements, error: None })
}

fn run_group(id: String, group: &FiniteGroup, caps: Caps) -> Result<RowResult, CliError> {
    let lattice = SubgroupLattice::with_cap(group, caps.subgroups)?;
    let (row, violations) = lattice_row(id, group, &lattice)?;
    Ok(RowResult { row, violations, disagreements: Vec::new(), error: None })
}

fn run_one(subject: &Subject, caps: Caps) -> RowResult {
    let result = match subject {
        Subject::Structured(g) => run_structured(g, caps),
        Subject::Named(id, g) => run_group(id.clone(), g, caps),
        Subject::File(id, file) => match file.structured() {
            Some(g) if g.validate().is_ok() => run_structured(g, caps).map(|mut r| {
                r.row.group_id = id.clone();
                r
            }),
            Some(g) => Err(CliError::Invalid(g.validate().unwrap_err().to_string())),
            None => file.to_group(caps.elements).and_then(|g| run_group(id.clone(), &g, caps)),
        },
    };
    result.unwrap_or_else(|e| RowResult {
        row: CensusRow { group_id: subject.id(), witness: format!("error: {e}"), ..CensusRow::default() },
        violations: Vec::new(),
        disagreements: Vec::new(),
        error: Some(e.to_string()),
    })
}

/// Classifies every subject on `jobs` worker threads; results come back in
/// input order.
pub fn run(subjects: &[Subject], caps: Caps, jobs: usize) -> Result<Vec<RowResult>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Engine(format!("thread pool: {e}")))?;
    Ok(pool.install(|| subjects.par_iter().map(|s| run_one(s, caps)).collect()))
}

pub fn write_csv<W: std::io::Write>(out: W, results: &[RowResult]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for r in results {
        w.serialize(&r.row).map_err(|e| CliError::Engine(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
