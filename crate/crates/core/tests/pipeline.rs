// SPDX-License-Identifier: Apache-2.0

//! End-to-end checks across synthesis, optimization, costing and comparison.

use revseq::circuit::{simulate_permutation, Circuit, Gate, GateKind};
use revseq::equivalence::{
    check_claimed_function, compare_designs, Design, GateExpansion, Registry,
};
use revseq::format::parse_circuit;
use revseq::qcost::Catalog;
use revseq::sequential::{builtin, sr_extended_table};
use revseq::synthesis::{
    synth_pipeline, synthesize_basic, synthesize_bidirectional, PipelineConfig, TruthTable,
};

fn fredkin_table() -> TruthTable {
    TruthTable::new(3, 3, vec![0, 1, 2, 3, 4, 6, 5, 7]).unwrap()
}

#[test]
fn fredkin_table_synthesizes_to_quantum_cost_five() {
    let r = synth_pipeline(&fredkin_table(), &PipelineConfig::default()).unwrap();
    assert_eq!(
        simulate_permutation(&r.circuit).unwrap().map(),
        fredkin_table().rows()
    );
    assert_eq!(r.report.quantum_cost, 5);
    assert!(r
        .candidates
        .iter()
        .filter_map(|c| c.quantum_cost)
        .all(|q| q >= 5));
    assert!(r
        .circuit
        .gates()
        .iter()
        .all(|g| *g.kind() == GateKind::X && g.is_nct()));
}

#[test]
fn sr_table_keeps_two_garbage_lines() {
    let r = synth_pipeline(&sr_extended_table(), &PipelineConfig::default()).unwrap();
    assert_eq!(
        simulate_permutation(&r.circuit).unwrap().map(),
        sr_extended_table().rows()
    );
    let latch = builtin("sr-latch").unwrap();
    assert_eq!(latch.core().garbage().len(), 2);
}

#[test]
fn bidirectional_is_never_longer_on_the_sr_table() {
    let t = sr_extended_table();
    assert!(synthesize_bidirectional(&t).unwrap().len() <= synthesize_basic(&t).unwrap().len());
}

#[test]
fn toffoli_computes_nand_with_a_constant_one() {
    let c = parse_circuit(".v a,b,c\nBEGIN\nt3 a,b,c\nEND\n").unwrap();
    let g = GateExpansion::new("toffoli", c, None).unwrap();
    let nand = TruthTable::from_fn(2, 1, |x| usize::from(x != 3)).unwrap();
    assert!(
        check_claimed_function(&g, &nand, &[(2, true)], &[2])
            .unwrap()
            .holds
    );
    assert!(
        !check_claimed_function(&g, &nand, &[(2, false)], &[2])
            .unwrap()
            .holds
    );
}

fn designs() -> Vec<(String, Design)> {
    let c = |text: &str| Design::from(parse_circuit(text).unwrap());
    vec![
        ("fredkin".into(), c(".v a,b,c\nBEGIN\nf3 a,b,c\nEND\n")),
        (
            "ctc".into(),
            c(".v a,b,c\nBEGIN\nt2 c,b\nt3 a,b,c\nt2 c,b\nEND\n"),
        ),
        (
            "new".into(),
            c(".v a,b,c\nBEGIN\nuse new-gate a,b,c\nEND\n"),
        ),
        ("sr".into(), builtin("sr-latch").unwrap().into()),
    ]
}

#[test]
fn comparison_minima_ignore_input_order() {
    let reg = Registry::builtin();
    let forward = compare_designs(&designs(), reg, Catalog::builtin()).unwrap();
    let mut rev = designs();
    rev.reverse();
    let backward = compare_designs(&rev, reg, Catalog::builtin()).unwrap();
    assert_eq!(forward.minima(), backward.minima());
    for (k, _) in forward.minima() {
        assert_eq!(forward.winners(k), backward.winners(k));
    }
    assert_eq!(forward.rows[3].report.feedback_loops, 1);
    assert!(forward.rows.iter().all(|r| r.report.total_is_consistent()));
}

#[test]
fn relabeled_designs_get_identical_rows() {
    let base = parse_circuit(".v a,b,c,d\nBEGIN\nt3 a,b,c\nf3 d,a,b\nt2 c,d\nEND\n").unwrap();
    let moved = base.relabel(&[2, 0, 3, 1]);
    let rows = compare_designs(
        &[("a".into(), base.into()), ("b".into(), moved.into())],
        Registry::builtin(),
        Catalog::builtin(),
    )
    .unwrap()
    .rows;
    assert_eq!(rows[0].report, rows[1].report);
}

#[test]
fn pipeline_output_is_equivalent_to_the_design() {
    let reg = Registry::builtin();
    for (name, d) in designs() {
        let row = &compare_designs(&[(name.clone(), d.clone())], reg, Catalog::builtin())
            .unwrap()
            .rows[0];
        let before = revseq::circuit::simulate_permutation_with(d.core(), reg).unwrap();
        let after = simulate_permutation(&row.circuit).unwrap();
        assert_eq!(before, after, "{name}");
    }
}

#[test]
fn cccnot_row_counts_three_toffolis() {
    let c = Circuit::with_gates(4, vec![Gate::catalog("cccnot", vec![0, 1, 2, 3])]);
    let r = compare_designs(
        &[("cccnot".into(), c.into())],
        Registry::builtin(),
        Catalog::builtin(),
    )
    .unwrap();
    assert_eq!(r.rows[0].report.nct_count, 3);
    assert_eq!(r.rows[0].circuit.width(), 5);
}
