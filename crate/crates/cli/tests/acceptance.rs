//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cimlab::census::{self, Subject, Summary};
use cimlab::classify::Caps;
use cimlab_core::lattice::SubgroupLattice;
use cimlab_core::structured::{
    construct_solouno, construct_with_quotient, example_g1, example_g2, example_g3, solouno_small_analog, ModuleSpec,
};
use cimlab_core::{families, section4, FiniteGroup, StructuredElement, StructuredGroup};

const CRITERION_1_BUDGET: Duration = Duration::from_secs(1);
const CRITERION_3_BUDGET: Duration = Duration::from_secs(600);
const CRITERION_6_BUDGET: Duration = Duration::from_secs(300);
const CRITERION_7_BUDGET: Duration = Duration::from_secs(60);
const GRID_MAX_ORDER: u128 = 2000;
const MIN_GRID_GROUPS: usize = 40;
const SPOT_CHECK_SAMPLES: usize = 1000;
const SPOT_CHECK_SEED: u64 = 2024;

struct Outcome {
    passed: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { passed: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: impl Into<String>) {
        let detail = detail.into();
        if !ok {
            self.passed = false;
            self.details.push(format!("FAILED {detail}"));
        } else {
            self.details.push(detail);
        }
    }

    fn within(&mut self, start: Instant, budget: Duration) {
        let elapsed = start.elapsed();
        self.check(elapsed < budget, format!("runtime {elapsed:.2?} (budget {budget:?})"));
    }
}

fn element(vec: &[u32], h: &[u32]) -> StructuredElement {
    StructuredElement::new(vec.to_vec(), h.to_vec())
}

fn closure_check(out: &mut Outcome, name: &str, g: &StructuredGroup, x: &StructuredElement, order: u64, closure: u128) {
    let actual_order = g.element_order(x);
    let c = g.fast_mi_closure(x).expect("valid group").order;
    out.check(
        actual_order == order && c == closure,
        format!("{name}: |x| = {actual_order} (want {order}), closure {c} (want {closure})"),
    );
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut out = Outcome::new();
    let g1 = example_g1().fast_is_cim().expect("G1 is valid");
    out.check(g1.is_cim, format!("G1 CIM = {}", g1.is_cim));
    let g2 = example_g2().fast_is_cim().expect("G2 is valid");
    out.check(!g2.is_cim && g2.witness == Some(vec![0]), format!("G2 CIM = {}, witness {:?}", g2.is_cim, g2.witness));
    let g3 = example_g3().fast_is_cim().expect("G3 is valid");
    out.check(!g3.is_cim && g3.witness == Some(vec![4]), format!("G3 CIM = {}, witness {:?}", g3.is_cim, g3.witness));
    let (g2, g3) = (example_g2(), example_g3());
    closure_check(&mut out, "G2", &g2, &element(&[0, 0, 1], &[0]), 17, 34);
    closure_check(&mut out, "G2", &g2, &element(&[1, 0, 1], &[0]), 85, 170);
    closure_check(&mut out, "G3", &g3, &element(&[1, 0, 0], &[4]), 10, 20);
    out.within(start, CRITERION_1_BUDGET);
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let g1 = example_g1();
    let sets = |v: &[usize]| v.iter().copied().collect::<BTreeSet<usize>>();
    // module indices are 0-based: V_1 is module 0
    for (name, g, h, want) in [
        ("G1, h = x^4", &g1, vec![4], sets(&[0])),
        ("G1, h = 1", &g1, vec![0], sets(&[0, 1])),
        ("G2, h = 1", &example_g2(), vec![0], sets(&[0])),
        ("G3, h = x^4", &example_g3(), vec![4], sets(&[])),
    ] {
        let j = g.j_set(&h);
        out.check(j == want, format!("J({name}) = {j:?}"));
    }
    let x2 = g1.h_cyclic(&[2]);
    for h in [4u32, 0] {
        let m = g1.m_h(&[h]);
        out.check(m == x2, format!("M_H(x^{h}) = <x^2>: |M_H| = {}", m.count_ones(..)));
    }
    for h in [2u32, 6] {
        let m = g1.m_h(&[h]);
        out.check(m == g1.h_cyclic(&[h]), format!("M_H(x^{h}) = <x^{h}>: |M_H| = {}", m.count_ones(..)));
    }
    out
}

fn criteria_3_and_4() -> (Outcome, Outcome) {
    let start = Instant::now();
    let grid = census::structured_grid(GRID_MAX_ORDER);
    let grid_len = grid.len();
    let mut subjects: Vec<Subject> = grid.into_iter().map(Subject::Structured).collect();
    let controls = census::control_groups();
    let control_count = controls.len();
    subjects.extend(controls.into_iter().map(|(id, g)| Subject::Named(id, g)));
    let results = census::run(&subjects, Caps::default(), 1).expect("thread pool");
    let elapsed = start.elapsed();

    let (grid_rows, control_rows) = results.split_at(grid_len);
    let mut c3 = Outcome::new();
    c3.check(grid_len >= MIN_GRID_GROUPS, format!("{grid_len} valid grid groups of order <= {GRID_MAX_ORDER}"));
    let mismatches: Vec<String> = grid_rows
        .iter()
        .flat_map(|r| r.disagreements.iter().map(move |d| format!("{}: {d}", r.row.group_id)))
        .collect();
    c3.check(mismatches.is_empty(), format!("{} closure/CIM mismatches {:?}", mismatches.len(), mismatches.first()));
    let errors: Vec<&str> = results.iter().filter_map(|r| r.error.as_deref()).collect();
    c3.check(errors.is_empty(), format!("{} row errors {:?}", errors.len(), errors.first()));
    c3.check(elapsed < CRITERION_3_BUDGET, format!("runtime {elapsed:.2?} (budget {CRITERION_3_BUDGET:?})"));

    let mut c4 = Outcome::new();
    let summary = Summary::of(&results);
    let violations: Vec<String> =
        results.iter().flat_map(|r| r.violations.iter().map(move |v| format!("{}: {v}", r.row.group_id))).collect();
    c4.check(violations.is_empty(), format!("{} implication violations {:?}", violations.len(), violations.first()));
    c4.check(
        control_rows.len() == control_count && control_rows.iter().all(|r| r.error.is_none()),
        "control groups classified",
    );
    let cim_rows = results.iter().filter(|r| r.row.is_cim == Some(true)).count();
    c4.check(true, format!("{} rows, {cim_rows} CIM, {} CIM-not-IM", summary.rows, summary.cim_not_im));
    let alt5 = control_rows.iter().find(|r| r.row.group_id == "Alt(5)").expect("control");
    c4.check(alt5.row.is_cim == Some(false) && alt5.row.is_soluble == Some(false), "Alt(5) neither CIM nor soluble");
    (c3, c4)
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    for a in [vec![2u32], vec![4], vec![2, 2], vec![6]] {
        let q = construct_with_quotient(&a).expect("prime search");
        let g = &q.group;
        let cim = g.fast_is_cim().map(|v| v.is_cim).unwrap_or(false);
        let fg = g.materialize(cimlab_core::group::DEFAULT_ELEMENT_CAP).expect("materializes");
        let f = fg.subgroup(&g.module_generators()).expect("module part");
        let invariants = fg.quotient(&f).and_then(|q| q.abelian_invariants()).expect("quotient");
        let want = families::abelian(&a).abelian_invariants().expect("abelian");
        out.check(
            cim && invariants == want,
            format!("A = {a:?}: order {}, CIM {cim}, G/F invariants {invariants:?}", g.order()),
        );
        if a == [2] {
            let lattice = SubgroupLattice::new(&fg).expect("small lattice");
            out.check(
                fg.order().ok() == Some(18) && lattice.is_cim(),
                format!("A = [2]: lattice order {:?}, CIM {}", fg.order().ok(), lattice.is_cim()),
            );
        }
    }
    out
}

fn unique_non_closed(fg: &FiniteGroup, g: &StructuredGroup) -> (usize, bool) {
    let lattice = SubgroupLattice::new(fg).expect("lattice within caps");
    let non_closed = lattice.non_closed();
    let f = fg.subgroup(&g.module_generators()).expect("module part");
    let is_fitting = non_closed.len() == 1 && lattice.get(non_closed[0]) == &f && lattice.fitting() == non_closed[0];
    (non_closed.len(), is_fitting)
}

fn criterion_6() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut out = Outcome::new();
    let analog = solouno_small_analog();
    let fg = analog.materialize(cimlab_core::group::DEFAULT_ELEMENT_CAP).expect("small analog");
    let order = fg.order().expect("enumerates");
    out.check(order == 900, format!("small analog order {order} (stated 900)"));
    let (count, is_fitting) = unique_non_closed(&fg, &analog);
    out.check(
        count == 1 && is_fitting,
        format!("{count} non-closed proper subgroups, unique and equal to F: {is_fitting}"),
    );
    out.within(start, CRITERION_6_BUDGET);

    let g = construct_solouno(2, 2).expect("parameters");
    let expected_order: u128 = 5u128.pow(2) * 13u128.pow(2) * 4;
    out.check(g.order() == expected_order, format!("construct_solouno(2, 2) order {}", g.order()));
    let spot = g.spot_check_unique_nonclosed(SPOT_CHECK_SAMPLES, SPOT_CHECK_SEED).expect("valid");
    out.check(
        spot.passed() && spot.samples == SPOT_CHECK_SAMPLES,
        format!(
            "|F| = {}, closure of F {}, {} samples ({} cyclic, {} mixed) closed, failures {:?}",
            spot.fitting_order,
            spot.fitting_closure_order,
            spot.samples,
            spot.cyclic_samples,
            spot.mixed_samples,
            spot.failures.first()
        ),
    );

    // H = C4 acting faithfully on both modules, small enough for the lattice
    let mut extra = Outcome::new();
    let c4 = StructuredGroup::new(vec![4], vec![ModuleSpec::new(5, 1, vec![2]), ModuleSpec::new(13, 1, vec![5])]);
    let fg = c4.materialize(10_000).expect("order 260");
    let (count, is_fitting) = unique_non_closed(&fg, &c4);
    extra
        .check(count == 1 && is_fitting, format!("order {}: {count} non-closed, equal to F: {is_fitting}", c4.order()));
    (out, extra)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut out = Outcome::new();
    let report = section4::verify_all(false);
    for c in &report.checks {
        out.check(c.passed, c.name.clone());
    }
    for name in
        ["dim End(phi1) = 1", "dim End(phi2) = 1", "dim End(phi1 + phi1) = 4", "Alt(5) is not soluble and not CIM"]
    {
        out.check(report.checks.iter().any(|c| c.name == name), format!("ran {name:?}"));
    }
    let sylow = report.checks.iter().filter(|c| c.name.starts_with("Sylow")).count();
    out.check(sylow == 4, format!("{sylow} Sylow identities"));
    let control = section4::verify_all(true);
    out.check(!control.passed(), "negative control fails");
    out.within(start, CRITERION_7_BUDGET);
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    for (name, g, count) in [
        ("Sym(3)", families::symmetric(3), 6),
        ("C6", families::cyclic(6), 4),
        ("Alt(5)", families::alternating(5), 59),
    ] {
        let n = SubgroupLattice::new(&g).expect("small").len();
        out.check(n == count, format!("{name}: {n} subgroups"));
    }
    for (name, g, order) in [("C4", families::cyclic(4), 2), ("Sym(3)", families::symmetric(3), 1)] {
        let l = SubgroupLattice::new(&g).expect("small");
        let f = l.get(l.frattini()).order();
        out.check(f == order, format!("Frattini({name}) has order {f}"));
    }
    out
}

fn report(label: &str, o: &Outcome) -> bool {
    println!("{label}: {} ({})", if o.passed { "PASS" } else { "FAIL" }, o.details.join("; "));
    o.passed
}

fn main() -> ExitCode {
    let mut all = true;
    all &= report("criterion 1", &criterion_1());
    all &= report("criterion 2", &criterion_2());
    let (c3, c4) = criteria_3_and_4();
    all &= report("criterion 3", &c3);
    all &= report("criterion 4", &c4);
    all &= report("criterion 5", &criterion_5());
    let (c6, c6_extra) = criterion_6();
    all &= report("criterion 6", &c6);
    report("criterion 6 (supplementary, H = C4 analog)", &c6_extra);
    all &= report("criterion 7", &criterion_7());
    all &= report("criterion 8", &criterion_8());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
