//! The `classify` and `closure` commands and the engine comparison shared
//! with the census.

use std::collections::HashSet;

use cimlab_core::families;
use cimlab_core::lattice::{classify_brute, ClassificationReport, LatticeError, SubgroupLattice};
use cimlab_core::{FiniteGroup, GroupElement, StructuredElement, StructuredGroup};
use serde::Serialize;

use crate::error::CliError;
use crate::groupfile::GroupFile;

/// Witnesses listed in a JSON report.
const MAX_WITNESSES: usize = 10;

/// Largest valid structured group whose lattice is built without `--mode brute`.
pub const DEFAULT_LATTICE_ORDER: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Fast,
    Brute,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub elements: usize,
    pub subgroups: usize,
    /// Applies to structured groups, which have a closed-form engine.
    pub lattice_order: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            elements: cimlab_core::group::DEFAULT_ELEMENT_CAP,
            subgroups: cimlab_core::lattice::DEFAULT_SUBGROUP_CAP,
            lattice_order: DEFAULT_LATTICE_ORDER,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyOutput {
    #[serde(flatten)]
    pub report: ClassificationReport,
    pub mode: &'static str,
    /// `lattice` or `symbolic-maximals` when a brute-force side ran.
    pub brute_engine: Option<&'static str>,
    pub quotient_invariants: Option<Vec<u64>>,
    /// First `h` (in lexicographic order) failing the fast CIM criterion.
    pub fast_witness: Option<String>,
    pub fast_vs_brute_agree: Option<bool>,
    pub disagreements: Vec<String>,
}

/// Structured-only report: CIM from the closed-form criterion, IM from the
/// exponent of `H`, Frattini as the closure of the trivial subgroup.
pub fn fast_report(g: &StructuredGroup, group_id: &str) -> Result<(ClassificationReport, Option<Vec<u32>>), CliError> {
    let verdict = g.fast_is_cim()?;
    let im = g.fast_is_im()?;
    let frattini = g.fast_mi_closure(&g.identity())?.order;
    let report = ClassificationReport {
        group_id: group_id.to_string(),
        order: g.order(),
        is_im: Some(im),
        is_cim: Some(verdict.is_cim),
        is_aim: Some(im),
        is_t_group: None,
        is_soluble: Some(true),
        is_supersoluble: Some(true),
        is_metabelian: Some(true),
        frattini_order: Some(frattini),
        fitting_order: Some(g.module_order()),
        p_im: None,
        non_closed_witnesses: Vec::new(),
    };
    Ok((report, verdict.witness))
}

fn format_tuple(t: &[u32]) -> String {
    format!("({})", t.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
}

fn as_structured(e: &GroupElement) -> &StructuredElement {
    match e {
        GroupElement::Structured(s) => s,
        other => unreachable!("structured group produced {other}"),
    }
}

/// Compares the lattice closure, the closed form and the maximal-subgroup
/// evaluator on every cyclic subgroup, then the CIM and IM verdicts.
/// Returns one line per mismatch.
pub fn compare_on_lattice(g: &StructuredGroup, lattice: &SubgroupLattice<'_>) -> Result<Vec<String>, CliError> {
    let ix = lattice.indexed();
    let family = g.symbolic_maximals();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for e in 0..ix.n() as u32 {
        let cyc = lattice.position_of_closure(&[e]);
        if !seen.insert(cyc) {
            continue;
        }
        let x = as_structured(ix.element(e));
        let brute = lattice.get(lattice.mi_closure(cyc)).order() as u128;
        let fast = g.fast_mi_closure(x)?.order;
        let mid = g.closure_order_from_maximals(&family, std::slice::from_ref(x));
        if brute != fast || brute != mid {
            out.push(format!("<{}>: lattice closure {brute}, fast {fast}, symbolic-maximals {mid}", ix.element(e)));
        }
    }
    let fast_cim = g.fast_is_cim()?.is_cim;
    if fast_cim != lattice.is_cim() {
        out.push(format!("is_CIM: lattice {}, fast {fast_cim}", lattice.is_cim()));
    }
    let fast_im = g.fast_is_im()?;
    if fast_im != lattice.is_im() {
        out.push(format!("is_IM: lattice {}, fast {fast_im}", lattice.is_im()));
    }
    Ok(out)
}

/// Same comparison without a lattice: the closed form against the
/// maximal-subgroup evaluator on the cyclic representatives.
pub fn compare_symbolic(g: &StructuredGroup) -> Result<Vec<String>, CliError> {
    let family = g.symbolic_maximals();
    let mut out = Vec::new();
    for x in g.cyclic_representatives() {
        let fast = g.fast_mi_closure(&x)?.order;
        let mid = g.closure_order_from_maximals(&family, std::slice::from_ref(&x));
        if fast != mid {
            out.push(format!("<{}>: fast {fast}, symbolic-maximals {mid}", GroupElement::Structured(x)));
        }
    }
    let fast_cim = g.fast_is_cim()?.is_cim;
    let (mid_cim, _) = g.mid_scale_is_cim()?;
    if fast_cim != mid_cim {
        out.push(format!("is_CIM: symbolic-maximals {mid_cim}, fast {fast_cim}"));
    }
    Ok(out)
}

/// Brute-force classification of an enumerable group.
pub fn brute_report(group: &FiniteGroup, group_id: &str, caps: Caps) -> Result<ClassificationReport, CliError> {
    Ok(classify_brute(group, group_id, caps.subgroups, MAX_WITNESSES)?)
}

pub fn default_mode(file: &GroupFile) -> Mode {
    if file.structured().is_some() {
        Mode::Both
    } else {
        Mode::Brute
    }
}

pub fn classify(
    file: &GroupFile,
    group_id: &str,
    mode: Option<Mode>,
    caps: Caps,
    allow_invalid: bool,
) -> Result<ClassifyOutput, CliError> {
    let mode = mode.unwrap_or_else(|| default_mode(file));
    let structured = file.structured();
    if let Some(g) = structured {
        if let Err(e) = g.validate() {
            if !(allow_invalid && mode == Mode::Brute) {
                let hint = if allow_invalid { " (only --mode brute runs on invalid groups)" } else { "" };
                return Err(CliError::Invalid(format!("{e}{hint}")));
            }
        }
    }
    match (mode, structured) {
        (Mode::Fast | Mode::Both, None) => Err(CliError::Invalid("fast mode needs a structured group file".into())),
        (Mode::Brute, _) => {
            let group = file.to_group(caps.elements)?;
            let report = brute_report(&group, group_id, caps)?;
            let quotient_invariants = match structured {
                Some(g) => Some(module_quotient_invariants(g, &group)?),
                None => None,
            };
            Ok(ClassifyOutput {
                report,
                mode: "brute",
                brute_engine: Some("lattice"),
                quotient_invariants,
                fast_witness: None,
                fast_vs_brute_agree: None,
                disagreements: Vec::new(),
            })
        }
        (Mode::Fast, Some(g)) => {
            let (report, witness) = fast_report(g, group_id)?;
            let quotient_invariants = families::abelian(&g.h_orders).abelian_invariants()?;
            Ok(ClassifyOutput {
                report,
                mode: "fast",
                brute_engine: None,
                quotient_invariants: Some(quotient_invariants),
                fast_witness: witness.map(|h| format_tuple(&h)),
                fast_vs_brute_agree: None,
                disagreements: Vec::new(),
            })
        }
        (Mode::Both, Some(g)) => classify_both(g, group_id, caps),
    }
}

fn module_quotient_invariants(g: &StructuredGroup, group: &FiniteGroup) -> Result<Vec<u64>, CliError> {
    let f = group.subgroup(&g.module_generators())?;
    Ok(group.quotient(&f)?.abelian_invariants()?)
}

fn classify_both(g: &StructuredGroup, group_id: &str, caps: Caps) -> Result<ClassifyOutput, CliError> {
    let (fast, witness) = fast_report(g, group_id)?;
    let fast_witness = witness.map(|h| format_tuple(&h));
    let lattice_side = if g.order() <= caps.lattice_order.min(caps.elements) as u128 {
        let group = g.materialize(caps.elements)?;
        match SubgroupLattice::with_cap(&group, caps.subgroups) {
            Ok(lattice) => {
                let disagreements = compare_on_lattice(g, &lattice)?;
                let report = brute_report(&group, group_id, caps)?;
                let invariants = module_quotient_invariants(g, &group)?;
                Some((report, invariants, disagreements))
            }
            Err(LatticeError::Overflow { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };

    match lattice_side {
        Some((report, invariants, mut disagreements)) => {
            for (name, a, b) in [
                ("frattini_order", fast.frattini_order, report.frattini_order),
                ("fitting_order", fast.fitting_order, report.fitting_order),
            ] {
                if a != b {
                    disagreements.push(format!("{name}: lattice {b:?}, fast {a:?}"));
                }
            }
            let expected = families::abelian(&g.h_orders).abelian_invariants()?;
            if invariants != expected {
                disagreements.push(format!("G/F invariants {invariants:?}, H invariants {expected:?}"));
            }
            Ok(ClassifyOutput {
                report,
                mode: "both",
                brute_engine: Some("lattice"),
                quotient_invariants: Some(invariants),
                fast_witness,
                fast_vs_brute_agree: Some(disagreements.is_empty()),
                disagreements,
            })
        }
        None => {
            let disagreements = compare_symbolic(g)?;
            let invariants = families::abelian(&g.h_orders).abelian_invariants()?;
            Ok(ClassifyOutput {
                report: fast,
                mode: "both",
                brute_engine: Some("symbolic-maximals"),
                quotient_invariants: Some(invariants),
                fast_witness,
                fast_vs_brute_agree: Some(disagreements.is_empty()),
                disagreements,
            })
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureOutput {
    pub element: String,
    pub cyclic_order: u128,
    pub fast: Option<u128>,
    pub symbolic_maximals: Option<u128>,
    pub lattice: Option<u128>,
    pub is_closed: bool,
    pub description: String,
    pub engines_agree: bool,
}

/// Closure order of `⟨x⟩` from every engine that applies.
pub fn closure(file: &GroupFile, element: &str, caps: Caps, allow_invalid: bool) -> Result<ClosureOutput, CliError> {
    let x = file.parse_element(element)?;
    let mut description = Vec::new();
    let (mut fast, mut mid) = (None, None);
    let mut cyclic_order = None;

    if let Some(g) = file.structured() {
        match g.validate() {
            Ok(()) => {
                let s = as_structured(&x);
                let c = g.fast_mi_closure(s)?;
                description.push(format!(
                    "normalized {}, |y| = {}, J~ = {:?}, |C| = {}",
                    GroupElement::Structured(c.normalized.clone()),
                    c.y_order,
                    c.j_tilde,
                    c.c.count_ones(..)
                ));
                cyclic_order = Some(c.cyclic_order);
                fast = Some(c.order);
                mid = Some(g.mid_scale_mi_closure(s)?);
            }
            Err(e) if allow_invalid => description.push(format!("closed forms skipped: {e}")),
            Err(e) => return Err(CliError::Invalid(e.to_string())),
        }
    }

    let small_enough = match file.structured() {
        Some(g) if fast.is_some() => g.order() <= caps.lattice_order.min(caps.elements) as u128,
        _ => true,
    };
    let mut lattice_order = None;
    if small_enough {
        match lattice_closure(file, &x, caps) {
            Ok((order, cyc, desc)) => {
                lattice_order = Some(order);
                cyclic_order.get_or_insert(cyc);
                description.push(format!("lattice closure {desc}"));
            }
            Err(e @ CliError::Overflow(_)) if fast.is_some() => description.push(format!("lattice skipped: {e}")),
            Err(e) => return Err(e),
        }
    }

    let orders: Vec<u128> = [fast, mid, lattice_order].into_iter().flatten().collect();
    let cyclic_order = cyclic_order.expect("some engine ran");
    Ok(ClosureOutput {
        element: x.to_string(),
        cyclic_order,
        fast,
        symbolic_maximals: mid,
        lattice: lattice_order,
        is_closed: orders.first() == Some(&cyclic_order),
        description: description.join("; "),
        engines_agree: orders.windows(2).all(|w| w[0] == w[1]),
    })
}

fn lattice_closure(file: &GroupFile, x: &GroupElement, caps: Caps) -> Result<(u128, u128, String), CliError> {
    let group = file.to_group(caps.elements)?;
    let lattice = SubgroupLattice::with_cap(&group, caps.subgroups)?;
    let e = group.index_of(x)?.ok_or_else(|| CliError::Parse(format!("{x} is not an element of the group")))?;
    let cyc = lattice.position_of_closure(&[e]);
    let c = lattice.mi_closure(cyc);
    Ok((lattice.get(c).order() as u128, lattice.get(cyc).order() as u128, lattice.describe(c)))
}
