// SPDX-License-Identifier: Apache-2.0

//! Local optimization: deletion rule, moving rule and template matching.
//!
//! Commutation is decided semantically on the union of the two gates'
//! supports, so every move is safe by construction. Registry gates are
//! treated as barriers: they only commute with gates on disjoint lines.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::circuit::{Circuit, Gate, GateKind, NoCatalog};
use crate::error::{Error, Result};
use crate::exact::circuit_unitary;
use crate::format::parse_blocks;

/// One rewrite applied by a pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub pass: String,
    /// First and last gate index touched, in the circuit before the step.
    pub span: (usize, usize),
    pub before: usize,
    pub after: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    fn record(&mut self, pass: &str, span: (usize, usize), before: usize, after: usize) {
        self.steps.push(RewriteStep {
            pass: pass.to_string(),
            span,
            before,
            after,
        });
    }

    pub fn extend(&mut self, other: RewriteTrace) {
        self.steps.extend(other.steps);
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(
                f,
                "{} [{}..{}] {} -> {}",
                s.pass, s.span.0, s.span.1, s.before, s.after
            )?;
        }
        Ok(())
    }
}

type CommuteCache = Mutex<HashMap<(Gate, Gate), bool>>;

fn commute_cache() -> &'static CommuteCache {
    static CACHE: OnceLock<CommuteCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Semantic commutation: `[a, b]` and `[b, a]` have equal exact unitaries on
/// the union of their supports.
pub fn can_commute(a: &Gate, b: &Gate) -> bool {
    let (sa, sb) = (a.support(), b.support());
    if sa.iter().all(|l| !sb.contains(l)) || a == b {
        return true;
    }
    if matches!(a.kind(), GateKind::Catalog(_)) || matches!(b.kind(), GateKind::Catalog(_)) {
        return false;
    }
    // Relabel onto 0..m in order of first appearance so the cache key only
    // depends on the gates' shape.
    let mut order: Vec<usize> = Vec::new();
    for g in [a, b] {
        for &l in g.controls().iter().chain(g.targets()) {
            if !order.contains(&l) {
                order.push(l);
            }
        }
    }
    let local = |l: usize| order.iter().position(|&x| x == l).unwrap();
    let key = (a.relabel(local), b.relabel(local));
    if let Some(&hit) = commute_cache().lock().unwrap().get(&key) {
        return hit;
    }
    let m = order.len();
    let ab = Circuit::with_gates(m, vec![key.0.clone(), key.1.clone()]);
    let ba = Circuit::with_gates(m, vec![key.1.clone(), key.0.clone()]);
    let result = if a.is_classical() && b.is_classical() {
        (0..1usize << m).all(|s| ab.apply(s, &NoCatalog).ok() == ba.apply(s, &NoCatalog).ok())
    } else {
        circuit_unitary(&ab).ok() == circuit_unitary(&ba).ok()
    };
    commute_cache().lock().unwrap().insert(key, result);
    result
}

/// Number of quantum primitives when every maximal contiguous run of gates
/// confined to the same two lines counts once.
pub fn primitive_count(gates: &[Gate]) -> usize {
    let mut count = 0;
    // Lines of the open run; `None` when the previous gate is wider than two
    // lines and cannot absorb neighbours.
    let mut run: Option<BTreeSet<usize>> = None;
    for g in gates {
        let support: BTreeSet<usize> = g.support().into_iter().collect();
        if let Some(r) = &mut run {
            let merged: BTreeSet<usize> = r.union(&support).copied().collect();
            if merged.len() <= 2 {
                *r = merged;
                continue;
            }
        }
        count += 1;
        run = (support.len() <= 2).then_some(support);
    }
    count
}

/// Remove inverse pairs, including pairs separated only by gates that commute
/// with the first member.
pub fn deletion_pass(c: &Circuit) -> (Circuit, RewriteTrace) {
    let mut gates = c.gates().to_vec();
    let mut trace = RewriteTrace::default();
    'outer: loop {
        for i in 0..gates.len() {
            let Some(inv) = gates[i].inverse() else {
                continue;
            };
            for j in i + 1..gates.len() {
                if gates[j] == inv {
                    let before = gates.len();
                    gates.remove(j);
                    gates.remove(i);
                    trace.record("deletion", (i, j), before, gates.len());
                    continue 'outer;
                }
                if !can_commute(&gates[i], &gates[j]) {
                    break;
                }
            }
        }
        break;
    }
    (c.replace_gates(gates), trace)
}

/// What the moving rule tries to make adjacent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveGoal {
    /// Bring a gate next to its inverse so the deletion rule can fire.
    InversePairs,
    /// Co-locate gates on the same two lines to lower [`primitive_count`].
    SharedSupport,
}

/// Reorder gates through commuting swaps toward `goal`. Gate count is
/// unchanged.
pub fn moving_pass(c: &Circuit, goal: MoveGoal) -> (Circuit, RewriteTrace) {
    match goal {
        MoveGoal::InversePairs => move_inverse_pairs(c),
        MoveGoal::SharedSupport => move_for_grouping(c),
    }
}

fn move_inverse_pairs(c: &Circuit) -> (Circuit, RewriteTrace) {
    let mut gates = c.gates().to_vec();
    let mut trace = RewriteTrace::default();
    let mut budget = c.width().max(1) * gates.len();
    let mut i = 0;
    while i < gates.len() && budget > 0 {
        let Some(inv) = gates[i].inverse() else {
            i += 1;
            continue;
        };
        let mut j = i + 1;
        while j < gates.len() && gates[j] != inv && can_commute(&gates[i], &gates[j]) {
            j += 1;
        }
        if j < gates.len() && gates[j] == inv && j > i + 1 {
            budget -= 1;
            let g = gates.remove(j);
            gates.insert(i + 1, g);
            trace.record("moving", (i, j), gates.len(), gates.len());
            i += 2;
        } else {
            i += 1;
        }
    }
    (c.replace_gates(gates), trace)
}

fn move_for_grouping(c: &Circuit) -> (Circuit, RewriteTrace) {
    let mut gates = c.gates().to_vec();
    let mut trace = RewriteTrace::default();
    let n = gates.len();
    let mut budget = c.width().max(1) * n * n.max(1);
    let mut current = primitive_count(&gates);
    'improve: while budget > 0 {
        for j in 0..gates.len() {
            // Leftward moves, nearest first.
            let mut p = j;
            while p > 0 && can_commute(&gates[p - 1], &gates[j]) {
                p -= 1;
                budget = budget.saturating_sub(1);
                let mut cand = gates.clone();
                let g = cand.remove(j);
                cand.insert(p, g);
                let count = primitive_count(&cand);
                if count < current {
                    trace.record("moving", (p, j), gates.len(), gates.len());
                    gates = cand;
                    current = count;
                    continue 'improve;
                }
            }
            // Rightward moves.
            let mut p = j;
            while p + 1 < gates.len() && can_commute(&gates[p + 1], &gates[j]) {
                p += 1;
                budget = budget.saturating_sub(1);
                let mut cand = gates.clone();
                let g = cand.remove(j);
                cand.insert(p, g);
                let count = primitive_count(&cand);
                if count < current {
                    trace.record("moving", (j, p), gates.len(), gates.len());
                    gates = cand;
                    current = count;
                    continue 'improve;
                }
            }
        }
        break;
    }
    (c.replace_gates(gates), trace)
}

/// A certified identity circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    name: String,
    circuit: Circuit,
}

impl Template {
    /// Certify that `circuit` is the exact identity.
    pub fn new(name: impl Into<String>, circuit: Circuit) -> Result<Self> {
        let name = name.into();
        let u = circuit_unitary(&circuit).map_err(|e| Error::Certification {
            name: name.clone(),
            reason: e.to_string(),
        })?;
        if !u.is_identity() {
            return Err(Error::Certification {
                name,
                reason: "template circuit is not the identity".into(),
            });
        }
        Ok(Template { name, circuit })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn gates(&self) -> &[Gate] {
        self.circuit.gates()
    }

    pub fn size(&self) -> usize {
        self.circuit.len()
    }

    pub fn width(&self) -> usize {
        self.circuit.width()
    }

    /// All rotations of the gate list and of its inverse; each is an identity.
    fn variants(&self) -> Vec<Vec<Gate>> {
        let g = self.gates();
        let inv: Vec<Gate> = g.iter().rev().filter_map(Gate::inverse).collect();
        let mut out: Vec<Vec<Gate>> = Vec::new();
        for base in [g.to_vec(), inv] {
            for r in 0..base.len() {
                let mut v = base[r..].to_vec();
                v.extend_from_slice(&base[..r]);
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct TemplateLibrary {
    templates: Vec<Template>,
}

impl TemplateLibrary {
    pub fn empty() -> Self {
        TemplateLibrary::default()
    }

    pub fn register(&mut self, template: Template) {
        self.templates.push(template);
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    /// One template per block; each must certify as the identity.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lib = TemplateLibrary::empty();
        for (i, block) in parse_blocks(text)?.into_iter().enumerate() {
            let name = block.name.unwrap_or_else(|| format!("template-{}", i + 1));
            lib.register(Template::new(name, block.circuit)?);
        }
        Ok(lib)
    }

    pub fn extend(&mut self, other: &TemplateLibrary) {
        self.templates.extend(other.templates.iter().cloned());
    }

    /// Inverse pairs of every base gate, the Fredkin template, the CNOT-triple
    /// SWAP template and the V identities.
    pub fn standard() -> Self {
        let c = |w: usize, gates: Vec<Gate>| Circuit::with_gates(w, gates);
        let pair = |g: Gate, w: usize| c(w, vec![g.clone(), g.inverse().unwrap()]);
        let entries = vec![
            ("not-pair", pair(Gate::not(0), 1)),
            ("cnot-pair", pair(Gate::cnot(0, 1), 2)),
            ("toffoli-pair", pair(Gate::toffoli(0, 1, 2), 3)),
            ("v-pair", pair(Gate::new(GateKind::V, vec![], vec![0]), 1)),
            ("cv-pair", pair(Gate::v(0, 1), 2)),
            ("swap-pair", pair(Gate::swap(0, 1), 2)),
            ("fredkin-pair", pair(Gate::fredkin(0, 1, 2), 3)),
            (
                "fredkin-3t-ctc",
                c(
                    3,
                    vec![
                        Gate::toffoli(0, 1, 2),
                        Gate::toffoli(0, 2, 1),
                        Gate::toffoli(0, 1, 2),
                        Gate::cnot(2, 1),
                        Gate::toffoli(0, 1, 2),
                        Gate::cnot(2, 1),
                    ],
                ),
            ),
            (
                "cnot-swap",
                c(
                    2,
                    vec![
                        Gate::cnot(0, 1),
                        Gate::cnot(1, 0),
                        Gate::cnot(0, 1),
                        Gate::swap(0, 1),
                    ],
                ),
            ),
            (
                "v-v-not",
                c(2, vec![Gate::v(0, 1), Gate::v(0, 1), Gate::cnot(0, 1)]),
            ),
            (
                "vdag-vdag-not",
                c(
                    2,
                    vec![Gate::vdag(0, 1), Gate::vdag(0, 1), Gate::cnot(0, 1)],
                ),
            ),
            (
                "v-v-not-1",
                c(
                    1,
                    vec![
                        Gate::new(GateKind::V, vec![], vec![0]),
                        Gate::new(GateKind::V, vec![], vec![0]),
                        Gate::not(0),
                    ],
                ),
            ),
            (
                "vdag-vdag-not-1",
                c(
                    1,
                    vec![
                        Gate::new(GateKind::Vdag, vec![], vec![0]),
                        Gate::new(GateKind::Vdag, vec![], vec![0]),
                        Gate::not(0),
                    ],
                ),
            ),
        ];
        let mut lib = TemplateLibrary::empty();
        for (name, circuit) in entries {
            lib.register(Template::new(name, circuit).expect("built-in template is an identity"));
        }
        lib
    }
}

/// Partial injective map from template lines to circuit lines.
#[derive(Debug, Clone)]
struct LineMap {
    fwd: Vec<Option<usize>>,
}

impl LineMap {
    fn bind(&self, t: usize, c: usize) -> Option<LineMap> {
        match self.fwd[t] {
            Some(x) if x == c => Some(self.clone()),
            Some(_) => None,
            None if self.fwd.contains(&Some(c)) => None,
            None => {
                let mut m = self.clone();
                m.fwd[t] = Some(c);
                Some(m)
            }
        }
    }

    fn bind_all(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Option<LineMap> {
        pairs
            .into_iter()
            .try_fold(self.clone(), |m, (t, c)| m.bind(t, c))
    }
}

fn orderings(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let head = rest.remove(i);
        for mut tail in orderings(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Every extension of `map` under which template gate `t` becomes `g`.
fn gate_matches(t: &Gate, g: &Gate, map: &LineMap) -> Vec<LineMap> {
    if t.kind() != g.kind()
        || t.controls().len() != g.controls().len()
        || t.targets().len() != g.targets().len()
    {
        return Vec::new();
    }
    let unordered_targets = matches!(t.kind(), GateKind::Swap | GateKind::Fredkin);
    let target_orders = if unordered_targets {
        orderings(g.targets())
    } else {
        vec![g.targets().to_vec()]
    };
    let mut out = Vec::new();
    for targets in &target_orders {
        let Some(m) = map.bind_all(t.targets().iter().copied().zip(targets.iter().copied())) else {
            continue;
        };
        for controls in orderings(g.controls()) {
            if let Some(m2) = m.bind_all(t.controls().iter().copied().zip(controls)) {
                out.push(m2);
            }
        }
    }
    out
}

const MAX_SKIPPED: usize = 8;

/// Match `pattern` starting at gate `pos`, allowing later pattern gates to be
/// gathered leftward over gates they commute with. Returns matched positions
/// and the line map.
fn find_match(
    gates: &[Gate],
    pos: usize,
    pattern: &[Gate],
    width: usize,
) -> Option<(Vec<usize>, LineMap)> {
    let start = LineMap {
        fwd: vec![None; width],
    };
    for m in gate_matches(&pattern[0], &gates[pos], &start) {
        if let Some(found) = extend_match(gates, pattern, 1, vec![pos], Vec::new(), m) {
            return Some(found);
        }
    }
    None
}

fn extend_match(
    gates: &[Gate],
    pattern: &[Gate],
    k: usize,
    matched: Vec<usize>,
    mut skipped: Vec<usize>,
    map: LineMap,
) -> Option<(Vec<usize>, LineMap)> {
    if k == pattern.len() {
        return Some((matched, map));
    }
    let mut j = *matched.last().unwrap() + 1;
    while j < gates.len() && skipped.len() <= MAX_SKIPPED {
        if skipped.iter().all(|&s| can_commute(&gates[s], &gates[j])) {
            for m in gate_matches(&pattern[k], &gates[j], &map) {
                let mut next = matched.clone();
                next.push(j);
                if let Some(found) = extend_match(gates, pattern, k + 1, next, skipped.clone(), m) {
                    return Some(found);
                }
            }
        }
        skipped.push(j);
        j += 1;
    }
    None
}

fn control_weight(gates: &[Gate]) -> usize {
    gates.iter().map(|g| g.controls().len()).sum()
}

fn introduces_new_kind(replacement: &[Gate], present: &BTreeSet<GateKind>) -> bool {
    replacement
        .iter()
        .any(|g| *g.kind() != GateKind::X && !present.contains(g.kind()))
}

/// Replace a majority match of a template by the inverse of its remainder.
///
/// A rewrite fires only if it lowers (gate count, total controls)
/// lexicographically and does not introduce a non-X gate kind that was not
/// already present in the circuit.
pub fn template_pass(c: &Circuit, lib: &TemplateLibrary) -> (Circuit, RewriteTrace) {
    let mut gates = c.gates().to_vec();
    let mut trace = RewriteTrace::default();
    let present: BTreeSet<GateKind> = gates.iter().map(|g| g.kind().clone()).collect();
    let variants: Vec<(usize, Vec<Gate>)> = lib
        .templates
        .iter()
        .flat_map(|t| t.variants().into_iter().map(move |v| (t.width(), v)))
        .collect();
    'outer: loop {
        for pos in 0..gates.len() {
            for (width, seq) in &variants {
                let s = seq.len();
                for m in (s.div_ceil(2)..=s).rev() {
                    let Some((positions, map)) = find_match(&gates, pos, &seq[..m], *width) else {
                        continue;
                    };
                    let replacement: Option<Vec<Gate>> = seq[m..]
                        .iter()
                        .rev()
                        .map(|g| {
                            let inv = g.inverse()?;
                            let lines: Option<Vec<usize>> =
                                inv.support().iter().map(|&l| map.fwd[l]).collect();
                            lines.map(|_| inv.relabel(|l| map.fwd[l].unwrap()))
                        })
                        .collect();
                    let Some(replacement) = replacement else {
                        continue;
                    };
                    let removed: Vec<Gate> = positions.iter().map(|&p| gates[p].clone()).collect();
                    let better = (replacement.len(), control_weight(&replacement))
                        < (removed.len(), control_weight(&removed));
                    if !better || introduces_new_kind(&replacement, &present) {
                        continue;
                    }
                    let before = gates.len();
                    let span = (pos, *positions.last().unwrap());
                    let mut next: Vec<Gate> = Vec::with_capacity(before);
                    for (i, g) in gates.iter().enumerate() {
                        if i == pos {
                            next.extend(replacement.iter().cloned());
                        }
                        if !positions.contains(&i) {
                            next.push(g.clone());
                        }
                    }
                    gates = next;
                    trace.record("template", span, before, gates.len());
                    continue 'outer;
                }
            }
        }
        break;
    }
    (c.replace_gates(gates), trace)
}

/// Run moving, deletion and template passes with the standard library until
/// none of them changes the circuit.
pub fn optimize(c: &Circuit) -> (Circuit, RewriteTrace) {
    optimize_with(c, &standard_library())
}

pub fn optimize_with(c: &Circuit, lib: &TemplateLibrary) -> (Circuit, RewriteTrace) {
    let mut current = c.clone();
    let mut trace = RewriteTrace::default();
    loop {
        let before = current.clone();
        let (moved, t) = moving_pass(&current, MoveGoal::InversePairs);
        trace.extend(t);
        let (deleted, t) = deletion_pass(&moved);
        trace.extend(t);
        let (templated, t) = template_pass(&deleted, lib);
        trace.extend(t);
        current = templated;
        if current == before {
            break;
        }
    }
    (current, trace)
}

pub fn standard_library() -> TemplateLibrary {
    static LIB: OnceLock<TemplateLibrary> = OnceLock::new();
    LIB.get_or_init(TemplateLibrary::standard).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::unitary_equivalent;

    fn circ(w: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::with_gates(w, gates)
    }

    #[test]
    fn template_file_is_certified() {
        let ok = ".name cnots\n.v a,b,c\nBEGIN\nt2 a,b\nt2 b,c\nt2 a,b\nt2 b,c\nt2 a,c\nEND\n";
        let lib = TemplateLibrary::from_text(ok).unwrap();
        assert_eq!(lib.templates()[0].size(), 5);
        let bad = ".v a,b\nBEGIN\nt2 a,b\nEND\n";
        assert!(matches!(
            TemplateLibrary::from_text(bad),
            Err(Error::Certification { .. })
        ));
    }

    #[test]
    fn commutation_examples() {
        assert!(can_commute(&Gate::cnot(0, 1), &Gate::cnot(2, 1)));
        assert!(!can_commute(&Gate::cnot(2, 1), &Gate::v(1, 2)));
        assert!(can_commute(&Gate::not(0), &Gate::toffoli(1, 2, 3)));
        assert!(can_commute(&Gate::v(0, 2), &Gate::vdag(1, 2)));
        assert!(!can_commute(&Gate::cnot(0, 1), &Gate::cnot(1, 2)));
    }

    #[test]
    fn primitive_count_groups_same_pair_runs() {
        let g = vec![
            Gate::cnot(2, 1),
            Gate::v(1, 2),
            Gate::cnot(0, 1),
            Gate::not(1),
        ];
        assert_eq!(primitive_count(&g), 2);
        assert_eq!(primitive_count(&[Gate::toffoli(0, 1, 2), Gate::not(0)]), 2);
        assert_eq!(primitive_count(&[]), 0);
    }

    #[test]
    fn deletion_examples() {
        for g in [Gate::not(0), Gate::toffoli(0, 1, 2)] {
            let c = circ(3, vec![g.clone(), g]);
            assert!(deletion_pass(&c).0.is_empty());
        }
        let c = circ(2, vec![Gate::v(0, 1), Gate::vdag(0, 1)]);
        let (out, trace) = deletion_pass(&c);
        assert!(out.is_empty());
        assert_eq!(trace.steps[0].before, 2);
        assert_eq!(trace.steps[0].after, 0);
    }

    #[test]
    fn deletion_through_commuting_gates() {
        let c = circ(
            3,
            vec![Gate::cnot(0, 1), Gate::cnot(2, 1), Gate::cnot(0, 1)],
        );
        assert_eq!(deletion_pass(&c).0.gates(), &[Gate::cnot(2, 1)]);
    }

    #[test]
    fn moving_brings_inverse_next_to_gate() {
        let c = circ(2, vec![Gate::not(0), Gate::not(1), Gate::not(0)]);
        let (moved, _) = moving_pass(&c, MoveGoal::InversePairs);
        assert_eq!(moved.gates(), &[Gate::not(0), Gate::not(0), Gate::not(1)]);
        assert_eq!(deletion_pass(&moved).0.gates(), &[Gate::not(1)]);
    }

    #[test]
    fn grouping_moves_preserve_semantics() {
        let c = circ(
            3,
            vec![
                Gate::v(0, 1),
                Gate::not(2),
                Gate::cnot(0, 1),
                Gate::vdag(1, 2),
            ],
        );
        let (moved, _) = moving_pass(&c, MoveGoal::SharedSupport);
        assert!(primitive_count(moved.gates()) < primitive_count(c.gates()));
        assert!(unitary_equivalent(&c, &moved).unwrap());
    }

    #[test]
    fn fredkin_three_toffolis_become_toffoli_and_two_cnots() {
        let c = circ(
            3,
            vec![
                Gate::toffoli(0, 1, 2),
                Gate::toffoli(0, 2, 1),
                Gate::toffoli(0, 1, 2),
            ],
        );
        let (out, trace) = template_pass(&c, &standard_library());
        assert_eq!(out.len(), 3);
        assert_eq!(
            out.gates()
                .iter()
                .filter(|g| g.controls().len() == 2)
                .count(),
            1
        );
        assert_eq!(
            out.gates()
                .iter()
                .filter(|g| g.controls().len() == 1)
                .count(),
            2
        );
        assert!(unitary_equivalent(&c, &out).unwrap());
        assert_eq!(trace.steps.len(), 1);
    }

    #[test]
    fn cnot_pair_template_empties_circuit() {
        let c = circ(2, vec![Gate::cnot(0, 1), Gate::cnot(0, 1)]);
        assert!(template_pass(&c, &standard_library()).0.is_empty());
    }

    #[test]
    fn no_match_leaves_circuit_unchanged() {
        let c = circ(3, vec![Gate::cnot(0, 1), Gate::toffoli(0, 1, 2)]);
        let (out, trace) = template_pass(&c, &standard_library());
        assert_eq!(out, c);
        assert!(trace.is_empty());
    }

    #[test]
    fn v_pair_becomes_cnot() {
        let c = circ(2, vec![Gate::v(0, 1), Gate::v(0, 1)]);
        let (out, _) = optimize(&c);
        assert_eq!(out.gates(), &[Gate::cnot(0, 1)]);
    }

    #[test]
    fn swap_is_not_introduced_into_nct_circuits() {
        let c = circ(
            2,
            vec![Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)],
        );
        assert_eq!(optimize(&c).0, c);
        let with_swap = circ(
            2,
            vec![
                Gate::swap(0, 1),
                Gate::cnot(0, 1),
                Gate::cnot(1, 0),
                Gate::cnot(0, 1),
            ],
        );
        assert!(optimize(&with_swap).0.is_empty());
    }

    #[test]
    fn uncertified_template_is_rejected() {
        let err = Template::new("bad", circ(1, vec![Gate::not(0)])).unwrap_err();
        assert!(matches!(err, Error::Certification { .. }));
    }

    #[test]
    fn optimize_keeps_minimal_circuit() {
        let c = circ(3, vec![Gate::toffoli(0, 1, 2), Gate::cnot(0, 1)]);
        let (out, trace) = optimize(&c);
        assert_eq!(out, c);
        assert!(trace.is_empty());
    }
}
