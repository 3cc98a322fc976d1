// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if a criterion fails that is not a recorded known deviation, or
//! if a recorded deviation unexpectedly passes.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use revseq::circuit::{simulate_permutation, Circuit, Gate, GateKind, Permutation};
use revseq::equivalence::{
    check_claimed_function, compare_designs, expand_to_nct, Design, Registry,
};
use revseq::exact::{circuit_unitary, gate_unitary, unitary_equivalent};
use revseq::optimizer::optimize;
use revseq::qcost::{
    cost_report, quantum_cost, search_realization, Catalog, CostReport, CostSource, SearchSpace,
};
use revseq::sequential::{
    builtin, builtin_names, feedback_cost_report, feedback_count, run_sequence, verify_latch,
    Clocking, LatchKind, LatchSpec,
};
use revseq::synthesis::{
    check_bijective, min_garbage, synth_pipeline, synthesize_basic, synthesize_bidirectional,
    Bijectivity, PipelineConfig, TruthTable,
};

/// Criteria that cannot be met as stated; see the project notes.
const KNOWN_DEVIATIONS: &[&str] = &["AC9", "AC10"];

struct Check {
    failures: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check {
            failures: Vec::new(),
        }
    }

    fn that(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn within(&mut self, start: Instant, budget: Duration) {
        let took = start.elapsed();
        self.that(took <= budget, format!("took {took:?}, budget {budget:?}"));
    }
}

fn circ(w: usize, gates: Vec<Gate>) -> Circuit {
    Circuit::with_gates(w, gates)
}

fn fredkin() -> Circuit {
    circ(3, vec![Gate::fredkin(0, 1, 2)])
}

fn ac1(c: &mut Check, reports: &mut Vec<CostReport>) {
    let t0 = Instant::now();
    let toffoli = circ(3, vec![Gate::toffoli(0, 1, 2)]);
    let q = quantum_cost(&toffoli).unwrap();
    c.that(q.cost == 5, format!("Toffoli QC {} != 5", q.cost));
    c.that(
        unitary_equivalent(&q.witness, &toffoli).unwrap(),
        "witness differs from Toffoli",
    );
    reports.push(cost_report(&toffoli).unwrap());
    c.within(t0, Duration::from_secs(1));
}

fn ac2(c: &mut Check, reports: &mut Vec<CostReport>) {
    let t0 = Instant::now();
    let q = quantum_cost(&fredkin()).unwrap();
    c.that(
        q.rewrite_cost <= 6,
        format!("rewrite reaches {}, not <= 6", q.rewrite_cost),
    );
    c.that(q.cost == 5, format!("Fredkin QC {} != 5", q.cost));
    c.that(
        matches!(q.source, CostSource::Catalog(_)),
        "cost 5 does not come from the catalog",
    );
    c.that(
        unitary_equivalent(&q.witness, &fredkin()).unwrap(),
        "witness differs from Fredkin",
    );
    reports.push(cost_report(&fredkin()).unwrap());

    let target = gate_unitary(&Gate::fredkin(0, 1, 2), 3).unwrap();
    let found = search_realization(
        &target,
        SearchSpace {
            max_blocks: 5,
            block_len: 2,
        },
    )
    .unwrap();
    match found.found {
        Some((k, gates)) => {
            c.that(k == 5, format!("search found {k} blocks"));
            let w = circ(3, gates);
            c.that(
                circuit_unitary(&w).unwrap() == target,
                "searched circuit is not Fredkin",
            );
            let entry = Catalog::builtin().get("fredkin-5").unwrap();
            c.that(
                entry.gates() == &w,
                "catalog entry differs from the search result",
            );
        }
        None => c.that(false, "search found no realization"),
    }
    c.within(t0, Duration::from_secs(300));
}

fn ac3(c: &mut Check) {
    let t0 = Instant::now();
    let three = circ(
        3,
        vec![
            Gate::toffoli(0, 2, 1),
            Gate::toffoli(0, 1, 2),
            Gate::toffoli(0, 2, 1),
        ],
    );
    let (o, _) = optimize(&three);
    let toffolis = o.gates().iter().filter(|g| g.controls().len() == 2).count();
    let cnots = o
        .gates()
        .iter()
        .filter(|g| *g.kind() == GateKind::X && g.controls().len() == 1)
        .count();
    c.that(
        o.len() == 3 && toffolis == 1 && cnots == 2,
        format!("optimized to {} gates", o.len()),
    );
    c.that(o.gates().iter().all(Gate::is_nct), "non-NCT gate in result");
    c.that(
        simulate_permutation(&o).unwrap() == simulate_permutation(&three).unwrap(),
        "semantics changed",
    );
    c.that(
        simulate_permutation(&o).unwrap() == simulate_permutation(&fredkin()).unwrap(),
        "result is not Fredkin",
    );
    c.within(t0, Duration::from_secs(1));
}

fn ac4(c: &mut Check) {
    let t0 = Instant::now();
    let v = |dag: bool| {
        Gate::new(
            if dag { GateKind::Vdag } else { GateKind::V },
            vec![],
            vec![0],
        )
    };
    let cases = [
        ("V*V = N", vec![v(false), v(false)], vec![Gate::not(0)]),
        ("V*V+ = I", vec![v(false), v(true)], vec![]),
        ("V+*V+ = N", vec![v(true), v(true)], vec![Gate::not(0)]),
    ];
    for (name, lhs, rhs) in cases {
        let eq = circuit_unitary(&circ(1, lhs.clone())).unwrap()
            == circuit_unitary(&circ(1, rhs.clone())).unwrap();
        c.that(eq, name);
        // Controlled forms on two lines.
        let ctl = |g: &[Gate]| {
            g.iter()
                .map(|g| Gate::new(g.kind().clone(), vec![0], vec![1]))
                .collect::<Vec<_>>()
        };
        let eq2 = circuit_unitary(&circ(2, ctl(&lhs))).unwrap()
            == circuit_unitary(&circ(2, ctl(&rhs))).unwrap();
        c.that(eq2, format!("controlled {name}"));
    }
    c.within(t0, Duration::from_secs(1));
}

fn nth_permutation(mut k: usize, n: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut fact: Vec<usize> = vec![1; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i;
    }
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let idx = k / fact[i];
        k %= fact[i];
        out.push(pool.remove(idx));
    }
    out
}

fn ac5(c: &mut Check) {
    let t0 = Instant::now();
    let (mut wins, mut wrong, total) = (0usize, 0usize, 40_320usize);
    for k in 0..total {
        let map = nth_permutation(k, 8);
        let p = Permutation::from_map(3, map.clone()).unwrap();
        let t = TruthTable::from_permutation(&p);
        let basic = synthesize_basic(&t).unwrap();
        let bidi = synthesize_bidirectional(&t).unwrap();
        let ok = |x: &Circuit| {
            (0..8).all(|i| x.apply(i, &revseq::circuit::NoCatalog).unwrap() == map[i])
        };
        if !ok(&basic) || !ok(&bidi) {
            wrong += 1;
        }
        if bidi.len() <= basic.len() {
            wins += 1;
        }
    }
    let share = wins as f64 / total as f64;
    c.that(wrong == 0, format!("{wrong} incorrect circuits"));
    c.that(
        share >= 0.95,
        format!("bidirectional <= basic on {:.2}%", 100.0 * share),
    );
    println!(
        "    bidirectional <= basic on {:.2}% of {total}",
        100.0 * share
    );
    c.within(t0, Duration::from_secs(120));
}

fn random_gate(rng: &mut ChaCha8Rng, w: usize) -> Gate {
    let mut lines: Vec<usize> = (0..w).collect();
    for i in (1..w).rev() {
        lines.swap(i, rng.gen_range(0..=i));
    }
    match rng.gen_range(0..4) {
        2 if w >= 2 => Gate::swap(lines[0], lines[1]),
        3 if w >= 3 => Gate::fredkin(lines[0], lines[1], lines[2]),
        _ => {
            let k = rng.gen_range(0..w.min(3));
            Gate::mct(lines[1..=k].to_vec(), lines[0])
        }
    }
}

fn ac6(c: &mut Check) {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut bad = 0;
    for _ in 0..1000 {
        let w = rng.gen_range(1..=4);
        let len = rng.gen_range(0..=20);
        let x = circ(w, (0..len).map(|_| random_gate(&mut rng, w)).collect());
        let (o, _) = optimize(&x);
        if o.len() > x.len()
            || simulate_permutation(&o).unwrap() != simulate_permutation(&x).unwrap()
        {
            bad += 1;
        }
    }
    c.that(
        bad == 0,
        format!("{bad} of 1000 circuits changed meaning or grew"),
    );
    c.within(t0, Duration::from_secs(60));
}

/// Characteristic equations, input bits named in order with the first as MSB.
fn next_state(kind: LatchKind, x: usize, q: bool) -> bool {
    let n = kind.arity();
    let b = |k: usize| (x >> (n - 1 - k)) & 1 == 1;
    match kind {
        LatchKind::Sr => {
            if b(0) != b(1) {
                b(0)
            } else {
                q
            }
        }
        LatchKind::D => b(0),
        LatchKind::Jk => (b(0) && !q) || (!b(1) && q),
        LatchKind::T => b(0) != q,
    }
}

fn ac7(c: &mut Check, reports: &mut Vec<CostReport>) {
    let t0 = Instant::now();
    let f = builtin("sr-latch").unwrap();
    let perm = simulate_permutation(f.core()).unwrap();
    c.that(
        check_bijective(&TruthTable::from_permutation(&perm)).unwrap() == Bijectivity::Bijective,
        "core is not bijective",
    );
    let source = TruthTable::from_fn(3, 1, |x| {
        usize::from(next_state(LatchKind::Sr, x >> 1, x & 1 == 1))
    })
    .unwrap();
    let g = f.core().garbage().len();
    c.that(g == 2, format!("{g} garbage outputs"));
    c.that(
        min_garbage(&source) == 2,
        format!("source needs {} garbage outputs", min_garbage(&source)),
    );
    c.that(feedback_count(&f) == 1, "feedback loops != 1");
    for q in [false, true] {
        let held = run_sequence(&f.clone().with_initial_state(vec![q]).unwrap(), &[0b11]).unwrap();
        c.that(
            held.observed() == [q],
            format!("S=R=1 does not hold Q={}", u8::from(q)),
        );
    }
    let v = verify_latch(&f, &LatchSpec::new(LatchKind::Sr, Clocking::Latch), 4);
    c.that(v.passed(), format!("verify_latch: {v:?}"));
    reports.push(feedback_cost_report(&f, Catalog::builtin()).unwrap());
    c.within(t0, Duration::from_secs(10));
}

fn ac8(c: &mut Check) {
    let t0 = Instant::now();
    for kind in LatchKind::ALL {
        let name = format!("gated-{}-latch", kind.label());
        let f = builtin(&name).unwrap();
        for q in [false, true] {
            let fq = f.clone().with_initial_state(vec![q]).unwrap();
            for x in 0..1usize << kind.arity() {
                for clk in [0, 1] {
                    let out = run_sequence(&fq, &[(x << 1) | clk]).unwrap().observed()[0];
                    let want = if clk == 1 { next_state(kind, x, q) } else { q };
                    c.that(
                        out == want,
                        format!("{name}: q={} x={x:b} clk={clk}", u8::from(q)),
                    );
                }
            }
        }
        let v = verify_latch(&f, &LatchSpec::new(kind, Clocking::Gated), 4);
        c.that(v.passed(), format!("{name} verify_latch failed"));
    }
    c.within(t0, Duration::from_secs(10));
}

fn ac9(c: &mut Check) {
    let t0 = Instant::now();
    for kind in LatchKind::ALL {
        let name = format!("{}-flipflop", kind.label());
        let f = builtin(&name).unwrap();
        c.that(
            feedback_count(&f) == 1,
            format!("{name}: feedback loops != 1"),
        );
        let alphabet = 1usize << (kind.arity() + 1);
        let (mut edge_only, mut tracks_master) = (true, true);
        for len in 1..=4u32 {
            for code in 0..alphabet.pow(len) {
                let inputs: Vec<usize> = (0..len)
                    .map(|t| code / alphabet.pow(len - 1 - t) % alphabet)
                    .collect();
                for q in [false, true] {
                    let obs =
                        run_sequence(&f.clone().with_initial_state(vec![q]).unwrap(), &inputs)
                            .unwrap()
                            .observed();
                    let mut master = q;
                    let mut prev_clk = None;
                    for (t, &w) in inputs.iter().enumerate() {
                        let clk = w & 1 == 1;
                        if clk {
                            master = next_state(kind, w >> 1, master);
                        }
                        if !clk && obs[t] != master {
                            tracks_master = false;
                        }
                        if t > 0 && obs[t] != obs[t - 1] && !(prev_clk == Some(true) && !clk) {
                            edge_only = false;
                        }
                        prev_clk = Some(clk);
                    }
                }
            }
        }
        c.that(
            tracks_master,
            format!("{name}: output differs from the master while the clock is low"),
        );
        c.that(
            edge_only,
            format!("{name}: output also changes off the falling edge"),
        );
    }
    c.within(t0, Duration::from_secs(30));
}

type Oracle = fn(usize) -> usize;

fn ac10(c: &mut Check) {
    let t0 = Instant::now();
    let reg = Registry::builtin();
    let oracles: [(&str, usize, Oracle); 4] = [
        ("fredkin", 3, |x| {
            let (a, b, cc) = ((x >> 2) & 1 == 1, (x >> 1) & 1 == 1, x & 1 == 1);
            if a {
                usize::from(a) << 2 | usize::from(cc) << 1 | usize::from(b)
            } else {
                x
            }
        }),
        ("new-gate", 4, |x| {
            let (a, b, cc) = ((x >> 2) & 1 == 1, (x >> 1) & 1 == 1, x & 1 == 1);
            usize::from(a) << 2 | usize::from((a && b) != cc) << 1 | usize::from((!a && !cc) != !b)
        }),
        ("mod-toffoli", 3, |x| {
            let (a, b, cc) = ((x >> 2) & 1 == 1, (x >> 1) & 1 == 1, x & 1 == 1);
            usize::from(a) << 2 | usize::from(b) << 1 | usize::from((a || b) != cc)
        }),
        ("mod-fredkin", 4, |x| {
            let (a, b, cc) = ((x >> 2) & 1 == 1, (x >> 1) & 1 == 1, x & 1 == 1);
            let (p, q) = if a { (cc, b) } else { (b, cc) };
            usize::from(a) << 2 | usize::from(p) << 1 | usize::from(!q)
        }),
    ];
    for (name, want, oracle) in oracles {
        let e = reg.get(name).unwrap();
        c.that(
            e.nct_count() == want,
            format!("{name}: {} NCT gates, expected {want}", e.nct_count()),
        );
        let ok = (0..8).all(|x| e.table().apply(x) == oracle(x));
        c.that(
            ok,
            format!("{name}: table differs from its defining equations"),
        );
        let g = circ(3, vec![Gate::catalog(name, vec![0, 1, 2])]);
        let x = expand_to_nct(&g, reg).unwrap();
        let same = (0..8).all(|i| x.apply(i, reg).unwrap() == oracle(i));
        c.that(
            same,
            format!("{name}: expansion is not semantics-preserving"),
        );
        c.that(
            x.len() == e.nct_count(),
            format!("{name}: expansion length differs from the registry count"),
        );
    }
    let cccnot = circ(4, vec![Gate::catalog("cccnot", vec![0, 1, 2, 3])]);
    let x = expand_to_nct(&cccnot, reg).unwrap();
    let toffolis = x.gates().iter().filter(|g| g.controls().len() == 2).count();
    c.that(
        x.len() == 3 && toffolis == 3,
        format!("CCCNOT expands to {} gates", x.len()),
    );
    c.that(
        x.width() == 5 && x.constants().get(&4) == Some(&false),
        "CCCNOT does not use one zero ancilla",
    );
    let same = (0..16).all(|s| {
        let want = if s >> 1 == 0b111 { s ^ 1 } else { s };
        x.apply(s << 1, reg).unwrap() == want << 1
    });
    c.that(same, "CCCNOT expansion is not semantics-preserving");

    let mt = reg.get("mod-toffoli").unwrap();
    let nor = TruthTable::from_fn(2, 1, |x| usize::from(x == 0)).unwrap();
    c.that(
        !check_claimed_function(mt, &nor, &[(2, false)], &[2])
            .unwrap()
            .holds,
        "NOR claim holds at C=0",
    );
    c.that(
        check_claimed_function(mt, &nor, &[(2, true)], &[2])
            .unwrap()
            .holds,
        "NOR claim fails at C=1",
    );
    c.within(t0, Duration::from_secs(10));
}

fn ac11(c: &mut Check, mut reports: Vec<CostReport>) {
    let t0 = Instant::now();
    for name in builtin_names() {
        reports.push(feedback_cost_report(&builtin(&name).unwrap(), Catalog::builtin()).unwrap());
    }
    let designs: Vec<(String, Design)> = vec![
        ("fredkin".into(), fredkin().into()),
        (
            "ctc".into(),
            circ(
                3,
                vec![Gate::cnot(2, 1), Gate::toffoli(0, 1, 2), Gate::cnot(2, 1)],
            )
            .into(),
        ),
        ("sr-latch".into(), builtin("sr-latch").unwrap().into()),
        (
            "cccnot".into(),
            circ(4, vec![Gate::catalog("cccnot", vec![0, 1, 2, 3])]).into(),
        ),
    ];
    let cmp = compare_designs(&designs, Registry::builtin(), Catalog::builtin()).unwrap();
    c.that(
        cmp.rows[0].report.quantum_cost == 5 && cmp.rows[1].report.quantum_cost == 5,
        "Fredkin forms differ in QC",
    );
    reports.extend(cmp.rows.iter().map(|r| r.report));
    let table = TruthTable::new(2, 1, vec![0, 1, 1, 1]).unwrap();
    reports.push(
        synth_pipeline(&table, &PipelineConfig::default())
            .unwrap()
            .report,
    );
    for r in &reports {
        c.that(
            r.total_cost == r.nct_count + r.quantum_cost + r.garbage,
            format!("TC identity fails for {r:?}"),
        );
    }
    println!("    TC identity checked on {} reports", reports.len());
    c.within(t0, Duration::from_secs(60));
}

fn main() {
    let mut reports = Vec::new();
    let mut results: Vec<(&str, &str, Check)> = Vec::new();
    let mut run = |id: &'static str, title: &'static str, f: &mut dyn FnMut(&mut Check)| {
        let mut c = Check::new();
        f(&mut c);
        let status = if c.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let note = if KNOWN_DEVIATIONS.contains(&id) && !c.failures.is_empty() {
            " (known deviation)"
        } else {
            ""
        };
        println!("{id} {status}{note}: {title}");
        for f in &c.failures {
            println!("    - {f}");
        }
        results.push((id, title, c));
    };
    run("AC1", "Toffoli quantum cost is 5", &mut |c| {
        ac1(c, &mut reports)
    });
    run("AC2", "Fredkin quantum cost is 5", &mut |c| {
        ac2(c, &mut reports)
    });
    run(
        "AC3",
        "Fredkin three-Toffoli form optimizes to one Toffoli and two CNOTs",
        &mut ac3,
    );
    run("AC4", "V identities hold exactly", &mut ac4);
    run(
        "AC5",
        "synthesis round trip over all width-3 permutations",
        &mut ac5,
    );
    run(
        "AC6",
        "optimizer preserves semantics on 1000 random circuits",
        &mut ac6,
    );
    run("AC7", "built-in SR latch", &mut |c| ac7(c, &mut reports));
    run(
        "AC8",
        "gated latches hold at clock 0 and are transparent at clock 1",
        &mut ac8,
    );
    run("AC9", "master-slave flip-flops", &mut ac9);
    run(
        "AC10",
        "registry expansion counts and claimed-function checks",
        &mut ac10,
    );
    let snapshot = reports.clone();
    run("AC11", "TC = NCT + QC + G on every report", &mut |c| {
        ac11(c, snapshot.clone())
    });

    let mut unexpected = Vec::new();
    for (id, _, c) in &results {
        let known = KNOWN_DEVIATIONS.contains(id);
        if c.failures.is_empty() == known {
            unexpected.push(*id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all criteria match expectations");
    } else {
        println!(
            "acceptance: unexpected outcome for {}",
            unexpected.join(", ")
        );
        std::process::exit(1);
    }
}
