// SPDX-License-Identifier: Apache-2.0

//! Quantum cost: NCT to NCV expansion, identity-driven reduction, grouping of
//! two-line runs into primitives, and certified whole-circuit realizations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::exact::{circuit_unitary, gate_unitary, ExactUnitary};
use crate::format::parse_blocks;
use crate::optimizer::{
    moving_pass, optimize, optimize_with, primitive_count, MoveGoal, Template, TemplateLibrary,
};

/// A certified NCV circuit for a single gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    name: String,
    target: Gate,
    gates: Circuit,
    cost: usize,
}

impl Realization {
    /// Certify that `gates` has exactly the unitary of `target`.
    pub fn new(name: impl Into<String>, target: Gate, gates: Circuit) -> Result<Self> {
        let name = name.into();
        let fail = |reason: String| Error::Certification {
            name: name.clone(),
            reason,
        };
        if let Some(g) = gates.gates().iter().find(|g| !g.is_ncv()) {
            return Err(fail(format!("gate {g} is outside the NCV library")));
        }
        let want = gate_unitary(&target, gates.width()).map_err(|e| fail(e.to_string()))?;
        let got = circuit_unitary(&gates).map_err(|e| fail(e.to_string()))?;
        if want != got {
            return Err(fail(format!("circuit does not realize {target}")));
        }
        let cost = primitive_count(gates.gates());
        Ok(Realization {
            name,
            target,
            gates,
            cost,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn target(&self) -> &Gate {
        &self.target
    }

    pub fn gates(&self) -> &Circuit {
        &self.gates
    }

    pub fn cost(&self) -> usize {
        self.cost
    }

    pub fn width(&self) -> usize {
        self.gates.width()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: Vec<Realization>,
}

const BUILTIN_CATALOG: &str = include_str!("../data/catalog.rev");

impl Catalog {
    pub fn empty() -> Self {
        Catalog::default()
    }

    /// The shipped realizations: the five-gate Toffoli and the
    /// five-primitive Fredkin.
    pub fn builtin() -> &'static Catalog {
        static CAT: OnceLock<Catalog> = OnceLock::new();
        CAT.get_or_init(|| Catalog::from_text(BUILTIN_CATALOG).expect("built-in catalog certifies"))
    }

    /// Load blocks carrying `.name` and `.realizes`; every entry is certified.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cat = Catalog::empty();
        for block in parse_blocks(text)? {
            let name = block.name.clone().unwrap_or_else(|| "unnamed".into());
            let target = block.realizes.clone().ok_or_else(|| Error::Certification {
                name: name.clone(),
                reason: "catalog block lacks `.realizes`".into(),
            })?;
            cat.add(Realization::new(name, target, block.circuit)?);
        }
        Ok(cat)
    }

    pub fn add(&mut self, r: Realization) {
        self.entries.push(r);
    }

    pub fn entries(&self) -> &[Realization] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&Realization> {
        self.entries.iter().find(|r| r.name == name)
    }

    pub fn extend(&mut self, other: &Catalog) {
        self.entries.extend(other.entries.iter().cloned());
    }
}

/// `V(b;t) C(a;b) V⁺(b;t) C(a;b) V(a;t)` for `T(a,b;t)`.
pub fn toffoli_to_ncv(g: &Gate) -> Result<Vec<Gate>> {
    toffoli_form(g, ToffoliForm::default())
}

/// Which of the equivalent five-gate Toffoli expansions to emit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ToffoliForm {
    /// Exchange the roles of the two controls.
    pub swap_controls: bool,
    /// Emit the gate sequence back to front.
    pub reversed: bool,
}

impl ToffoliForm {
    pub const ALL: [ToffoliForm; 4] = [
        ToffoliForm {
            swap_controls: false,
            reversed: false,
        },
        ToffoliForm {
            swap_controls: true,
            reversed: false,
        },
        ToffoliForm {
            swap_controls: false,
            reversed: true,
        },
        ToffoliForm {
            swap_controls: true,
            reversed: true,
        },
    ];
}

pub fn toffoli_form(g: &Gate, form: ToffoliForm) -> Result<Vec<Gate>> {
    if *g.kind() != GateKind::X || g.controls().len() != 2 {
        return Err(Error::Unexpandable {
            gate: g.to_string(),
            reason: "only two-control X gates have a five-gate NCV form".into(),
        });
    }
    let (mut a, mut b) = (g.controls()[0], g.controls()[1]);
    if form.swap_controls {
        std::mem::swap(&mut a, &mut b);
    }
    let t = g.target();
    let mut out = vec![
        Gate::v(b, t),
        Gate::cnot(a, b),
        Gate::vdag(b, t),
        Gate::cnot(a, b),
        Gate::v(a, t),
    ];
    if form.reversed {
        out.reverse();
    }
    Ok(out)
}

/// Gates of `g` over {N, C, T}; Fredkin and SWAP are expanded.
pub(crate) fn nct_gates(g: &Gate) -> Result<Vec<Gate>> {
    nct_gates_oriented(g, false)
}

/// `mirror` exchanges the roles of the two swapped lines, which gives the
/// other of the two equally short expansions.
fn nct_gates_oriented(g: &Gate, mirror: bool) -> Result<Vec<Gate>> {
    let pair = || {
        let (a, b) = (g.targets()[0], g.targets()[1]);
        if mirror {
            (b, a)
        } else {
            (a, b)
        }
    };
    match g.kind() {
        GateKind::X | GateKind::V | GateKind::Vdag => Ok(vec![g.clone()]),
        GateKind::Swap => {
            let (a, b) = pair();
            Ok(vec![Gate::cnot(a, b), Gate::cnot(b, a), Gate::cnot(a, b)])
        }
        GateKind::Fredkin => {
            let c = g.controls()[0];
            let (a, b) = pair();
            Ok(vec![
                Gate::cnot(b, a),
                Gate::toffoli(c, a, b),
                Gate::cnot(b, a),
            ])
        }
        GateKind::Catalog(name) => Err(Error::Unexpandable {
            gate: g.to_string(),
            reason: format!("registry gate `{name}` must be expanded first"),
        }),
    }
}

/// Expansion choice for one gate during quantum-cost evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Choice {
    toffoli: ToffoliForm,
    mirror: bool,
}

fn choices(g: &Gate) -> Vec<Choice> {
    let mirrors: &[bool] = match g.kind() {
        GateKind::Swap | GateKind::Fredkin => &[false, true],
        _ => &[false],
    };
    let forms: &[ToffoliForm] = match g.kind() {
        GateKind::Fredkin => &ToffoliForm::ALL,
        GateKind::X if g.controls().len() == 2 => &ToffoliForm::ALL,
        _ => &ToffoliForm::ALL[..1],
    };
    mirrors
        .iter()
        .flat_map(|&mirror| forms.iter().map(move |&toffoli| Choice { toffoli, mirror }))
        .collect()
}

fn ncv_gates(g: &Gate, choice: Choice) -> Result<Vec<Gate>> {
    let mut out = Vec::new();
    for h in nct_gates_oriented(g, choice.mirror)? {
        match h.controls().len() {
            _ if *h.kind() != GateKind::X => out.push(h),
            0 | 1 => out.push(h),
            2 => out.extend(toffoli_form(&h, choice.toffoli)?),
            _ => {
                return Err(Error::Unexpandable {
                    gate: h.to_string(),
                    reason: "X gates with more than two controls have no NCV expansion here".into(),
                })
            }
        }
    }
    Ok(out)
}

/// Replace every Toffoli by its five-gate NCV form.
pub fn circuit_to_ncv(c: &Circuit) -> Result<Circuit> {
    circuit_to_ncv_choices(c, &[])
}

/// Gate `i` uses `chosen[i]`, or the default expansion past the end.
fn circuit_to_ncv_choices(c: &Circuit, chosen: &[Choice]) -> Result<Circuit> {
    let mut gates = Vec::new();
    for (i, g) in c.gates().iter().enumerate() {
        gates.extend(ncv_gates(g, chosen.get(i).copied().unwrap_or_default())?);
    }
    Ok(c.replace_gates(gates))
}

fn ncv_library() -> &'static TemplateLibrary {
    static LIB: OnceLock<TemplateLibrary> = OnceLock::new();
    LIB.get_or_init(|| {
        let keep = [
            "not-pair",
            "cnot-pair",
            "v-pair",
            "cv-pair",
            "v-v-not",
            "vdag-vdag-not",
            "v-v-not-1",
            "vdag-vdag-not-1",
        ];
        let mut lib = TemplateLibrary::empty();
        for t in TemplateLibrary::standard().templates() {
            if keep.contains(&t.name()) {
                lib.register(Template::clone(t));
            }
        }
        lib
    })
}

/// Cancel with the V identities, then group same-pair runs.
fn reduce_ncv(c: &Circuit) -> Circuit {
    let (reduced, _) = optimize_with(c, ncv_library());
    moving_pass(&reduced, MoveGoal::SharedSupport).0
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CostSource {
    Rewrite,
    Catalog(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumCost {
    /// Minimum over the rewrite result and catalog matches.
    pub cost: usize,
    /// Primitive count reached by expansion, reduction and grouping alone.
    pub rewrite_cost: usize,
    /// NCV circuit realizing the input with `cost` primitives.
    pub witness: Circuit,
    pub source: CostSource,
}

/// Largest number of expansion combinations tried exhaustively.
const EXHAUSTIVE_CHOICES: usize = 512;

pub fn quantum_cost(c: &Circuit) -> Result<QuantumCost> {
    quantum_cost_with(c, Catalog::builtin())
}

/// Cheapest reduced NCV expansion over the expansion choices of `c`.
fn best_rewrite(c: &Circuit) -> Result<Circuit> {
    let options: Vec<Vec<Choice>> = c.gates().iter().map(choices).collect();
    let evaluate = |chosen: &[Choice]| -> Result<Circuit> {
        Ok(reduce_ncv(&circuit_to_ncv_choices(c, chosen)?))
    };
    let score = |w: &Circuit| (primitive_count(w.gates()), w.len());
    let mut chosen = vec![Choice::default(); c.len()];
    let mut best = evaluate(&chosen)?;
    let combos = options
        .iter()
        .try_fold(1usize, |acc, o| acc.checked_mul(o.len()));
    match combos {
        Some(total) if total <= EXHAUSTIVE_CHOICES => {
            for mut code in 1..total {
                for (slot, o) in chosen.iter_mut().zip(&options) {
                    *slot = o[code % o.len()];
                    code /= o.len();
                }
                let w = evaluate(&chosen)?;
                if score(&w) < score(&best) {
                    best = w;
                }
            }
        }
        _ => {
            for (i, o) in options.iter().enumerate() {
                let mut keep = chosen[i];
                for &choice in &o[1..] {
                    chosen[i] = choice;
                    let w = evaluate(&chosen)?;
                    if score(&w) < score(&best) {
                        best = w;
                        keep = choice;
                    }
                }
                chosen[i] = keep;
            }
        }
    }
    Ok(best)
}

/// Most canonical labelings evaluated per circuit.
const MAX_LABELINGS: usize = 24;

/// Line maps that number lines by first use, branching over the order of
/// lines that first appear together in interchangeable roles. Unused lines
/// keep their relative order after the used ones.
fn canonical_maps(c: &Circuit) -> Vec<Vec<usize>> {
    let unset = usize::MAX;
    let mut maps = vec![vec![unset; c.width()]];
    let mut next = 0;
    for g in c.gates() {
        let symmetric_targets = matches!(g.kind(), GateKind::Swap | GateKind::Fredkin);
        let groups: Vec<(Vec<usize>, bool)> = if matches!(g.kind(), GateKind::Catalog(_)) {
            g.controls()
                .iter()
                .chain(g.targets())
                .map(|&l| (vec![l], false))
                .collect()
        } else {
            vec![
                (g.controls().to_vec(), true),
                (g.targets().to_vec(), symmetric_targets),
            ]
        };
        for (lines, symmetric) in groups {
            let fresh: Vec<usize> = lines.into_iter().filter(|&l| maps[0][l] == unset).collect();
            if fresh.is_empty() {
                continue;
            }
            let orders = if symmetric {
                permutations(fresh.len())
            } else {
                vec![(0..fresh.len()).collect()]
            };
            maps = maps
                .into_iter()
                .flat_map(|m| {
                    orders.iter().map({
                        let fresh = &fresh;
                        move |o| {
                            let mut m = m.clone();
                            for (k, &i) in o.iter().enumerate() {
                                m[fresh[i]] = next + k;
                            }
                            m
                        }
                    })
                })
                .collect();
            next += fresh.len();
        }
    }
    for l in 0..c.width() {
        if maps[0][l] == unset {
            for m in &mut maps {
                m[l] = next;
            }
            next += 1;
        }
    }
    maps
}

fn invert(map: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; map.len()];
    for (old, &new) in map.iter().enumerate() {
        inv[new] = old;
    }
    inv
}

/// Expand, reduce and group under every combination of Toffoli forms and
/// Fredkin/SWAP orientations (greedily when there are too many), for both the
/// circuit and its gate-level optimization, then compare against catalog
/// realizations of the whole circuit. The search runs on canonical labelings
/// of the lines, so the cost does not depend on how lines are numbered.
pub fn quantum_cost_with(c: &Circuit, catalog: &Catalog) -> Result<QuantumCost> {
    circuit_to_ncv(c)?;
    let canonical: BTreeMap<Vec<Gate>, (Circuit, Vec<usize>)> = canonical_maps(c)
        .into_iter()
        .map(|m| {
            let cc = c.relabel(&m);
            (cc.gates().to_vec(), (cc, m))
        })
        .collect();
    let score = |w: &Circuit| (primitive_count(w.gates()), w.len());
    let mut best: Option<Circuit> = None;
    for (cc, map) in canonical.into_values().take(MAX_LABELINGS) {
        let mut found = vec![best_rewrite(&cc)?];
        let (pre, _) = optimize(&cc);
        if pre != cc {
            found.push(best_rewrite(&pre)?);
        }
        let back = invert(&map);
        for w in found {
            if best.as_ref().is_none_or(|b| score(&w) < score(b)) {
                best = Some(w.relabel(&back));
            }
        }
    }
    let best = best.unwrap_or_else(|| c.clone());
    let rewrite_cost = primitive_count(best.gates());
    let mut result = QuantumCost {
        cost: rewrite_cost,
        rewrite_cost,
        witness: best,
        source: CostSource::Rewrite,
    };
    if let Some((r, witness)) = catalog_match(c, catalog)? {
        if r.cost < result.cost {
            result.cost = r.cost;
            result.witness = witness;
            result.source = CostSource::Catalog(r.name.clone());
        }
    }
    Ok(result)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// The cheapest catalog entry whose gate equals the whole circuit under some
/// assignment of its lines to the circuit's active lines.
fn catalog_match<'a>(
    c: &Circuit,
    catalog: &'a Catalog,
) -> Result<Option<(&'a Realization, Circuit)>> {
    let support: Vec<usize> = c
        .gates()
        .iter()
        .flat_map(Gate::support)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let m = support.len();
    if m == 0 || catalog.entries.iter().all(|r| r.width() != m) {
        return Ok(None);
    }
    let local_index = |l: usize| support.iter().position(|&s| s == l).unwrap();
    let local = Circuit::with_gates(
        m,
        c.gates().iter().map(|g| g.relabel(local_index)).collect(),
    );
    let u = circuit_unitary(&local)?;
    let mut best: Option<(&Realization, Circuit)> = None;
    for r in catalog.entries.iter().filter(|r| r.width() == m) {
        if best.as_ref().is_some_and(|(b, _)| b.cost <= r.cost) {
            continue;
        }
        for sigma in permutations(m) {
            let target = r.target.relabel(|l| sigma[l]);
            if gate_unitary(&target, m)? == u {
                let gates = r
                    .gates
                    .gates()
                    .iter()
                    .map(|g| g.relabel(|l| support[sigma[l]]))
                    .collect();
                best = Some((r, c.replace_gates(gates)));
                break;
            }
        }
    }
    Ok(best)
}

/// Gate counts and costs of one design.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CostReport {
    /// Gates after expanding Fredkin and SWAP to {N, C, T}.
    pub nct_count: usize,
    pub ncv_count: usize,
    pub garbage: usize,
    pub quantum_cost: usize,
    /// `nct_count + quantum_cost + garbage`.
    pub total_cost: usize,
    pub feedback_loops: usize,
}

impl CostReport {
    pub fn new(
        nct_count: usize,
        ncv_count: usize,
        garbage: usize,
        quantum_cost: usize,
        feedback_loops: usize,
    ) -> Self {
        CostReport {
            nct_count,
            ncv_count,
            garbage,
            quantum_cost,
            total_cost: nct_count + quantum_cost + garbage,
            feedback_loops,
        }
    }

    pub fn total_is_consistent(&self) -> bool {
        self.total_cost == self.nct_count + self.quantum_cost + self.garbage
    }

    /// Stable machine-readable keys with their values.
    pub fn pairs(&self) -> [(&'static str, usize); 6] {
        [
            ("nct_count", self.nct_count),
            ("ncv_count", self.ncv_count),
            ("garbage", self.garbage),
            ("quantum_cost", self.quantum_cost),
            ("total_cost", self.total_cost),
            ("feedback_loops", self.feedback_loops),
        ]
    }
}

pub fn cost_report(c: &Circuit) -> Result<CostReport> {
    cost_report_with(c, Catalog::builtin(), 0)
}

pub fn cost_report_with(
    c: &Circuit,
    catalog: &Catalog,
    feedback_loops: usize,
) -> Result<CostReport> {
    let mut nct = 0;
    for g in c.gates() {
        nct += nct_gates(g)?.len();
    }
    let ncv = circuit_to_ncv(c)?.len();
    let qc = quantum_cost_with(c, catalog)?.cost;
    Ok(CostReport::new(
        nct,
        ncv,
        c.garbage().len(),
        qc,
        feedback_loops,
    ))
}

/// Limits for [`search_realization`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchSpace {
    /// Largest number of two-line blocks tried.
    pub max_blocks: usize,
    /// Longest NCV word inside one block; 1 searches plain gate sequences.
    pub block_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Smallest block count with a solution and the lexicographically least
    /// solution at that count.
    pub found: Option<(usize, Vec<Gate>)>,
    /// Number of sequences examined.
    pub explored: usize,
}

/// Dense complex matrix over dyadic Gaussian integers at a fixed scale.
/// Only used to hash candidates quickly; hits are re-certified exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct FixedMat {
    dim: usize,
    data: Vec<(i64, i64)>,
}

const FIXED_SHIFT: u32 = 20;

impl FixedMat {
    fn from_exact(u: &ExactUnitary) -> Option<Self> {
        let dim = u.dim();
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                let s = u.get(r, c);
                if s.k() > FIXED_SHIFT {
                    return None;
                }
                let scale = 1i128 << (FIXED_SHIFT - s.k());
                data.push((
                    i64::try_from(s.re() * scale).ok()?,
                    i64::try_from(s.im() * scale).ok()?,
                ));
            }
        }
        Some(FixedMat { dim, data })
    }

    /// `self · other`.
    fn mul(&self, other: &FixedMat) -> FixedMat {
        let n = self.dim;
        let mut data = vec![(0i64, 0i64); n * n];
        for r in 0..n {
            for k in 0..n {
                let (a, b) = self.data[r * n + k];
                if a == 0 && b == 0 {
                    continue;
                }
                for c in 0..n {
                    let (x, y) = other.data[k * n + c];
                    let e = &mut data[r * n + c];
                    e.0 += (a * x - b * y) >> FIXED_SHIFT;
                    e.1 += (a * y + b * x) >> FIXED_SHIFT;
                }
            }
        }
        FixedMat { dim: n, data }
    }

    fn dagger(&self) -> FixedMat {
        let n = self.dim;
        let mut data = vec![(0i64, 0i64); n * n];
        for r in 0..n {
            for c in 0..n {
                let (a, b) = self.data[c * n + r];
                data[r * n + c] = (a, -b);
            }
        }
        FixedMat { dim: n, data }
    }
}

struct Block {
    gates: Vec<Gate>,
    unitary: FixedMat,
}

/// NCV words of length `1..=len` on each line pair, deduplicated by unitary
/// and with identities dropped.
fn blocks(width: usize, len: usize) -> Result<Vec<Block>> {
    let mut out: Vec<Block> = Vec::new();
    let mut seen: BTreeSet<Vec<(i64, i64)>> = BTreeSet::new();
    seen.insert(
        FixedMat::from_exact(&ExactUnitary::identity(width))
            .unwrap()
            .data,
    );
    for x in 0..width {
        for y in x + 1..width {
            let letters = [
                Gate::cnot(x, y),
                Gate::cnot(y, x),
                Gate::v(x, y),
                Gate::v(y, x),
                Gate::vdag(x, y),
                Gate::vdag(y, x),
            ];
            let mut words: Vec<Vec<Gate>> = letters.iter().map(|g| vec![g.clone()]).collect();
            let mut frontier = words.clone();
            for _ in 1..len {
                let mut next = Vec::new();
                for w in &frontier {
                    for g in &letters {
                        let mut v = w.clone();
                        v.push(g.clone());
                        next.push(v);
                    }
                }
                words.extend(next.iter().cloned());
                frontier = next;
            }
            for w in words {
                let u = circuit_unitary(&Circuit::with_gates(width, w.clone()))?;
                let f = FixedMat::from_exact(&u).expect("short words stay within the fixed scale");
                if seen.insert(f.data.clone()) {
                    out.push(Block {
                        gates: w,
                        unitary: f,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Meet-in-the-middle search for the fewest two-line blocks whose product is
/// `target`. Candidates are confirmed with exact arithmetic.
pub fn search_realization(target: &ExactUnitary, space: SearchSpace) -> Result<SearchOutcome> {
    let width = target.lines();
    let blocks = blocks(width, space.block_len)?;
    let goal = FixedMat::from_exact(target).ok_or_else(|| Error::Certification {
        name: "search".into(),
        reason: "target is outside the fixed-point range".into(),
    })?;
    let mut explored = 0usize;
    let seqs = |len: usize| -> Vec<(Vec<usize>, FixedMat)> {
        let mut level = vec![(
            Vec::new(),
            FixedMat::from_exact(&ExactUnitary::identity(width)).unwrap(),
        )];
        for _ in 0..len {
            let mut next = Vec::with_capacity(level.len() * blocks.len());
            for (seq, u) in &level {
                for (b, block) in blocks.iter().enumerate() {
                    let mut s = seq.clone();
                    s.push(b);
                    // Later blocks multiply on the left.
                    next.push((s, block.unitary.mul(u)));
                }
            }
            level = next;
        }
        level
    };
    for k in 1..=space.max_blocks {
        let p = k / 2;
        let s = k - p;
        let mut wanted: HashMap<FixedMat, Vec<Vec<usize>>> = HashMap::new();
        for (seq, u) in seqs(p) {
            explored += 1;
            wanted.entry(goal.mul(&u.dagger())).or_default().push(seq);
        }
        let mut solutions: Vec<Vec<Gate>> = Vec::new();
        for (suffix, u) in seqs(s) {
            explored += 1;
            if let Some(prefixes) = wanted.get(&u) {
                for prefix in prefixes {
                    let gates: Vec<Gate> = prefix
                        .iter()
                        .chain(&suffix)
                        .flat_map(|&b| blocks[b].gates.iter().cloned())
                        .collect();
                    let exact = circuit_unitary(&Circuit::with_gates(width, gates.clone()))?;
                    if exact == *target {
                        solutions.push(gates);
                    }
                }
            }
        }
        if let Some(best) = solutions.into_iter().min() {
            return Ok(SearchOutcome {
                found: Some((k, best)),
                explored,
            });
        }
    }
    Ok(SearchOutcome {
        found: None,
        explored,
    })
}
