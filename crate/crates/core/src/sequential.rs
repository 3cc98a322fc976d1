// SPDX-License-Identifier: Apache-2.0

//! Circuits with spatial feedback, their time-unrolled cascades, and the
//! latch and flip-flop designs built on them.
//!
//! One step of a [`FeedbackCircuit`] runs the reversible core once. Each
//! feedback pair copies an output line into an input line of the next step;
//! constant lines are reset every step and the remaining input lines are
//! driven from outside.

use std::fmt;
use std::sync::OnceLock;

use crate::circuit::{simulate_permutation, Circuit, Gate, GateKind, Permutation};
use crate::error::{Error, Result};
use crate::format::{parse_blocks, CircuitFile};
use crate::qcost::{cost_report_with, Catalog, CostReport};
use crate::synthesis::{check_bijective, synth_pipeline, Bijectivity, PipelineConfig, TruthTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedbackCircuit {
    core: Circuit,
    feedback: Vec<(usize, usize)>,
    initial: Vec<bool>,
    observe: usize,
    clock: Option<usize>,
}

impl FeedbackCircuit {
    /// Feedback pairs are `(output line, input line)`. The observed line
    /// defaults to the first feedback output.
    pub fn new(core: Circuit, feedback: Vec<(usize, usize)>) -> Result<Self> {
        let observe = feedback.first().map_or(0, |p| p.0);
        let initial = vec![false; feedback.len()];
        let f = FeedbackCircuit {
            core,
            feedback,
            initial,
            observe,
            clock: None,
        };
        f.check()?;
        Ok(f)
    }

    /// A combinational circuit with no feedback.
    pub fn combinational(core: Circuit) -> Self {
        FeedbackCircuit {
            core,
            feedback: Vec::new(),
            initial: Vec::new(),
            observe: 0,
            clock: None,
        }
    }

    fn check(&self) -> Result<()> {
        let n = self.core.width();
        let err = |m: String| Err(Error::Sequential(m));
        if let Err(v) = self.core.validate() {
            return Err(Error::Invalid(v));
        }
        for (i, &(o, inp)) in self.feedback.iter().enumerate() {
            if o >= n || inp >= n {
                return err(format!("feedback pair {o}->{inp} is out of range"));
            }
            if self.feedback[..i]
                .iter()
                .any(|&(o2, i2)| o2 == o || i2 == inp)
            {
                return err(format!("feedback pair {o}->{inp} overlaps an earlier pair"));
            }
            if self.core.constants().contains_key(&inp) {
                return err(format!("feedback input line {inp} is also a constant"));
            }
        }
        if self.initial.len() != self.feedback.len() {
            return err("one initial value is needed per feedback pair".into());
        }
        if n > 0 && self.observe >= n {
            return err(format!("observed line {} is out of range", self.observe));
        }
        if let Some(c) = self.clock {
            if !self.free_inputs().contains(&c) {
                return err(format!("clock line {c} is not a free input"));
            }
        }
        Ok(())
    }

    pub fn from_file(f: &CircuitFile) -> Result<Self> {
        let mut fc = FeedbackCircuit::new(f.circuit.clone(), f.feedback.clone())?;
        for &(line, v) in &f.initial {
            let k = fc
                .feedback
                .iter()
                .position(|p| p.1 == line)
                .ok_or_else(|| {
                    Error::Sequential(format!("`.s` names line {line}, which is not fed back"))
                })?;
            fc.initial[k] = v;
        }
        if let Some(o) = f.observe {
            fc.observe = o;
        }
        fc.check()?;
        Ok(fc)
    }

    pub fn to_file(&self, name: Option<&str>) -> CircuitFile {
        let mut f = CircuitFile::new(self.core.clone());
        f.name = name.map(str::to_string);
        f.feedback = self.feedback.clone();
        f.initial = self
            .feedback
            .iter()
            .zip(&self.initial)
            .map(|(&(_, i), &v)| (i, v))
            .collect();
        if !self.feedback.is_empty() || self.observe != 0 {
            f.observe = Some(self.observe);
        }
        f
    }

    pub fn core(&self) -> &Circuit {
        &self.core
    }

    pub fn feedback(&self) -> &[(usize, usize)] {
        &self.feedback
    }

    pub fn initial_state(&self) -> &[bool] {
        &self.initial
    }

    pub fn with_initial_state(mut self, state: Vec<bool>) -> Result<Self> {
        self.initial = state;
        self.check()?;
        Ok(self)
    }

    pub fn observe(&self) -> usize {
        self.observe
    }

    pub fn clock(&self) -> Option<usize> {
        self.clock
    }

    /// Inputs driven from outside: neither fed back nor constant.
    pub fn free_inputs(&self) -> Vec<usize> {
        (0..self.core.width())
            .filter(|l| {
                !self.feedback.iter().any(|p| p.1 == *l) && !self.core.constants().contains_key(l)
            })
            .collect()
    }

    fn place(&self, line: usize, bit: bool, word: usize) -> usize {
        let n = self.core.width();
        if bit {
            word | 1 << (n - 1 - line)
        } else {
            word
        }
    }

    fn read(&self, line: usize, word: usize) -> bool {
        let n = self.core.width();
        word >> (n - 1 - line) & 1 == 1
    }

    /// Core input word for one step.
    fn compose_input(&self, state: &[bool], inputs: usize) -> usize {
        let free = self.free_inputs();
        let mut word = 0;
        for (k, &l) in free.iter().enumerate() {
            word = self.place(l, inputs >> (free.len() - 1 - k) & 1 == 1, word);
        }
        for (&(_, l), &v) in self.feedback.iter().zip(state) {
            word = self.place(l, v, word);
        }
        for (&l, &v) in self.core.constants() {
            word = self.place(l, v, word);
        }
        word
    }
}

pub fn feedback_count(f: &FeedbackCircuit) -> usize {
    f.feedback.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    /// Free input bits, first free line in the MSB.
    pub inputs: usize,
    /// Full core input word.
    pub before: usize,
    /// Full core output word.
    pub after: usize,
    /// Observed output bit after the step.
    pub observed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub final_state: Vec<bool>,
}

impl Trace {
    pub fn observed(&self) -> Vec<bool> {
        self.steps.iter().map(|s| s.observed).collect()
    }
}

struct Stepper<'a> {
    f: &'a FeedbackCircuit,
    perm: Permutation,
    free: usize,
}

impl<'a> Stepper<'a> {
    fn new(f: &'a FeedbackCircuit) -> Result<Self> {
        let perm = simulate_permutation(&f.core)?;
        Ok(Stepper {
            f,
            perm,
            free: f.free_inputs().len(),
        })
    }

    fn run(&self, initial: &[bool], inputs: &[usize]) -> Result<Trace> {
        let mut state = initial.to_vec();
        let mut steps = Vec::with_capacity(inputs.len());
        for &x in inputs {
            if x >> self.free != 0 {
                return Err(Error::Sequential(format!(
                    "input word {x:b} is wider than the {} free input lines",
                    self.free
                )));
            }
            let before = self.f.compose_input(&state, x);
            let after = self.perm.apply(before);
            for (s, &(o, _)) in state.iter_mut().zip(&self.f.feedback) {
                *s = self.f.read(o, after);
            }
            steps.push(TraceStep {
                inputs: x,
                before,
                after,
                observed: self.f.read(self.f.observe, after),
            });
        }
        Ok(Trace {
            steps,
            final_state: state,
        })
    }
}

/// Step-by-step simulation from the circuit's initial state.
pub fn run_sequence(f: &FeedbackCircuit, inputs: &[usize]) -> Result<Trace> {
    Stepper::new(f)?.run(&f.initial, inputs)
}

/// Combinational cascade of `steps` core copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unrolled {
    pub circuit: Circuit,
    /// Lines holding the initial state, one per feedback pair.
    pub state_lines: Vec<usize>,
    /// For each step, where every core line of that copy lives.
    pub copies: Vec<Vec<usize>>,
    /// Lines holding the state after the last step.
    pub final_state_lines: Vec<usize>,
}

/// Cascade `steps` copies of the core. State lines come first, then each
/// copy's remaining lines in core order.
pub fn unroll(f: &FeedbackCircuit, steps: usize) -> Result<Unrolled> {
    if steps == 0 {
        return Err(Error::Sequential("unroll needs at least one step".into()));
    }
    check_core_bijective(&f.core)?;
    let n = f.core.width();
    let k = f.feedback.len();
    let fresh: Vec<usize> = (0..n)
        .filter(|l| !f.feedback.iter().any(|p| p.1 == *l))
        .collect();
    let width = k + steps * fresh.len();
    let mut names = Vec::with_capacity(width);
    for &(_, i) in &f.feedback {
        names.push(format!("{}_0", f.core.names()[i]));
    }
    let mut holder: Vec<usize> = (0..k).collect();
    let mut copies = Vec::with_capacity(steps);
    let mut circuit_gates = Vec::new();
    let mut constants = Vec::new();
    for step in 0..steps {
        let mut map = vec![usize::MAX; n];
        for (j, &(_, i)) in f.feedback.iter().enumerate() {
            map[i] = holder[j];
        }
        for &l in &fresh {
            map[l] = names.len();
            if let Some(&v) = f.core.constants().get(&l) {
                constants.push((names.len(), v));
            }
            names.push(format!("{}_{}", f.core.names()[l], step + 1));
        }
        circuit_gates.extend(f.core.gates().iter().map(|g| g.relabel(|l| map[l])));
        for (j, &(o, _)) in f.feedback.iter().enumerate() {
            holder[j] = map[o];
        }
        copies.push(map);
    }
    let mut circuit = Circuit::with_names(names);
    for g in circuit_gates {
        circuit.push(g);
    }
    for (l, v) in constants {
        circuit.set_constant(l, v);
    }
    Ok(Unrolled {
        circuit,
        state_lines: (0..k).collect(),
        copies,
        final_state_lines: holder,
    })
}

fn check_core_bijective(core: &Circuit) -> Result<()> {
    let perm = simulate_permutation(core)?;
    let t = TruthTable::from_permutation(&perm);
    match check_bijective(&t)? {
        Bijectivity::Bijective => Ok(()),
        Bijectivity::Collision(a, b) => Err(Error::NotReversible(format!(
            "core maps inputs {a} and {b} to the same word"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatchKind {
    Sr,
    D,
    Jk,
    T,
}

impl LatchKind {
    pub const ALL: [LatchKind; 4] = [LatchKind::Sr, LatchKind::D, LatchKind::Jk, LatchKind::T];

    pub fn input_names(self) -> &'static [&'static str] {
        match self {
            LatchKind::Sr => &["S", "R"],
            LatchKind::D => &["D"],
            LatchKind::Jk => &["J", "K"],
            LatchKind::T => &["T"],
        }
    }

    pub fn arity(self) -> usize {
        self.input_names().len()
    }

    /// Characteristic equation; `x` holds the inputs with the first in the MSB.
    pub fn next_state(self, x: usize, q: bool) -> bool {
        let bit = |k: usize| x >> (self.arity() - 1 - k) & 1 == 1;
        match self {
            LatchKind::Sr => {
                let (s, r) = (bit(0), bit(1));
                if s ^ r {
                    s
                } else {
                    q
                }
            }
            LatchKind::D => bit(0),
            LatchKind::Jk => {
                let (j, k) = (bit(0), bit(1));
                (j && !q) || (!k && q)
            }
            LatchKind::T => bit(0) ^ q,
        }
    }

    /// Irreversible table from (inputs, Q) to Q⁺.
    pub fn source_table(self) -> TruthTable {
        let a = self.arity();
        TruthTable::from_fn(a + 1, 1, |w| {
            usize::from(self.next_state(w >> 1, w & 1 == 1))
        })
        .expect("characteristic table is well formed")
    }

    pub fn label(self) -> &'static str {
        match self {
            LatchKind::Sr => "sr",
            LatchKind::D => "d",
            LatchKind::Jk => "jk",
            LatchKind::T => "t",
        }
    }
}

/// Reversible SR table over (S, R, Q): R′ = S⊕R, Q⁺ follows S when the inputs
/// differ, and S′ keeps the old Q in that case so the map stays bijective.
pub fn sr_extended_table() -> TruthTable {
    TruthTable::from_fn(3, 3, |w| {
        let (s, r, q) = (w >> 2 & 1, w >> 1 & 1, w & 1);
        let d = s ^ r;
        let (s2, q2) = if d == 1 { (q, s) } else { (s, q) };
        s2 << 2 | d << 1 | q2
    })
    .expect("three-line table")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clocking {
    /// Unclocked.
    Latch,
    /// Level-sensitive: transparent while the clock is 1, holding while 0.
    Gated,
    /// Master-slave: the master is a gated latch; the output shows the
    /// master's value while the clock is 0 and is 0 while the clock is 1.
    FlipFlop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatchSpec {
    pub kind: LatchKind,
    pub clocking: Clocking,
}

impl LatchSpec {
    pub fn new(kind: LatchKind, clocking: Clocking) -> Self {
        LatchSpec { kind, clocking }
    }

    /// Number of free inputs, including the clock (last) for clocked designs.
    pub fn inputs(&self) -> usize {
        self.kind.arity() + usize::from(self.clocking != Clocking::Latch)
    }

    /// Accepts `sr`, `gated-sr`, `sr-ff` and likewise for `d`, `jk`, `t`.
    pub fn parse(text: &str) -> Option<Self> {
        let lower = text.to_ascii_lowercase();
        let (base, clocking) = if let Some(b) = lower.strip_prefix("gated-") {
            (b.to_string(), Clocking::Gated)
        } else if let Some(b) = lower.strip_suffix("-ff") {
            (b.to_string(), Clocking::FlipFlop)
        } else {
            (lower, Clocking::Latch)
        };
        let kind = LatchKind::ALL.into_iter().find(|k| k.label() == base)?;
        Some(LatchSpec { kind, clocking })
    }
}

impl fmt::Display for LatchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.clocking {
            Clocking::Latch => write!(f, "{}", self.kind.label()),
            Clocking::Gated => write!(f, "gated-{}", self.kind.label()),
            Clocking::FlipFlop => write!(f, "{}-ff", self.kind.label()),
        }
    }
}

/// Reference behaviour: the observed output after each step.
pub fn expected_outputs(spec: &LatchSpec, initial: bool, inputs: &[usize]) -> Vec<bool> {
    let mut q = initial;
    inputs
        .iter()
        .map(|&w| match spec.clocking {
            Clocking::Latch => {
                q = spec.kind.next_state(w, q);
                q
            }
            Clocking::Gated | Clocking::FlipFlop => {
                let clk = w & 1 == 1;
                if clk {
                    q = spec.kind.next_state(w >> 1, q);
                }
                if spec.clocking == Clocking::Gated {
                    q
                } else {
                    !clk && q
                }
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub initial: bool,
    pub inputs: Vec<usize>,
    pub expected: Vec<bool>,
    pub observed: Vec<bool>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |v: &[bool]| {
            v.iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect::<String>()
        };
        let ins: Vec<String> = self.inputs.iter().map(|x| format!("{x:b}")).collect();
        write!(
            f,
            "initial {} inputs [{}] expected {} observed {}",
            u8::from(self.initial),
            ins.join(","),
            bits(&self.expected),
            bits(&self.observed)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub bijectivity: Bijectivity,
    pub sequences_checked: usize,
    pub counterexample: Option<Counterexample>,
    pub error: Option<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.bijectivity == Bijectivity::Bijective
            && self.counterexample.is_none()
            && self.error.is_none()
    }
}

/// Check every input sequence of length `horizon`, from both initial states
/// of the first feedback line, against `spec`. Outputs are compared at every
/// step, so shorter sequences are covered by prefixes.
pub fn verify_latch(f: &FeedbackCircuit, spec: &LatchSpec, horizon: usize) -> Verdict {
    let fail = |msg: String, bij: Bijectivity| Verdict {
        bijectivity: bij,
        sequences_checked: 0,
        counterexample: None,
        error: Some(msg),
    };
    let perm = match simulate_permutation(&f.core) {
        Ok(p) => p,
        Err(e) => return fail(e.to_string(), Bijectivity::Collision(0, 0)),
    };
    let bijectivity = check_bijective(&TruthTable::from_permutation(&perm))
        .unwrap_or(Bijectivity::Collision(0, 0));
    if f.feedback.len() != 1 {
        return fail(
            format!("expected one feedback pair, found {}", f.feedback.len()),
            bijectivity,
        );
    }
    let free = f.free_inputs().len();
    if free != spec.inputs() {
        return fail(
            format!(
                "{spec} needs {} free inputs, circuit has {free}",
                spec.inputs()
            ),
            bijectivity,
        );
    }
    let stepper = Stepper { f, perm, free };
    let alphabet = 1usize << free;
    let total = alphabet.pow(horizon as u32);
    let mut checked = 0;
    for initial in [false, true] {
        for code in 0..total {
            let inputs: Vec<usize> = (0..horizon)
                .map(|t| code / alphabet.pow((horizon - 1 - t) as u32) % alphabet)
                .collect();
            let trace = match stepper.run(&[initial], &inputs) {
                Ok(t) => t,
                Err(e) => return fail(e.to_string(), bijectivity),
            };
            checked += 1;
            let expected = expected_outputs(spec, initial, &inputs);
            let observed = trace.observed();
            if expected != observed {
                return Verdict {
                    bijectivity,
                    sequences_checked: checked,
                    counterexample: Some(Counterexample {
                        initial,
                        inputs,
                        expected,
                        observed,
                    }),
                    error: None,
                };
            }
        }
    }
    Verdict {
        bijectivity,
        sequences_checked: checked,
        counterexample: None,
        error: None,
    }
}

/// Add a clock line (appended last) that must be 1 for any gate targeting
/// the state line to fire. Gates that would need a third control share one
/// zero-initialized ancilla line.
pub fn build_gated(latch: &FeedbackCircuit) -> Result<FeedbackCircuit> {
    if latch.clock.is_some() {
        return Err(Error::Sequential("circuit is already clocked".into()));
    }
    let &(q, _) = latch
        .feedback
        .first()
        .ok_or_else(|| Error::Sequential("a latch needs a feedback pair".into()))?;
    let mut core = latch.core.clone();
    let clk = core.add_lines(1, "clk");
    core.rename_line(clk, "clk");
    let needs_ancilla = core
        .gates()
        .iter()
        .any(|g| g.targets().contains(&q) && g.controls().len() >= 2);
    let anc = if needs_ancilla {
        let a = core.add_lines(1, "anc");
        core.rename_line(a, "anc");
        core.set_constant(a, false);
        Some(a)
    } else {
        None
    };
    let mut gates = Vec::new();
    for g in latch.core.gates() {
        if !g.targets().contains(&q) {
            gates.push(g.clone());
            continue;
        }
        if *g.kind() != GateKind::X {
            return Err(Error::Sequential(format!(
                "cannot clock non-X gate {g} on the state line"
            )));
        }
        if g.controls().len() < 2 {
            let mut cs = g.controls().to_vec();
            cs.push(clk);
            gates.push(Gate::mct(cs, q));
        } else {
            let a = anc.expect("ancilla allocated above");
            let compute = Gate::mct(g.controls().to_vec(), a);
            gates.push(compute.clone());
            gates.push(Gate::toffoli(a, clk, q));
            gates.push(compute);
        }
    }
    let core = core.replace_gates(gates);
    let gated = FeedbackCircuit {
        core,
        feedback: latch.feedback.clone(),
        initial: latch.initial.clone(),
        observe: q,
        clock: Some(clk),
    };
    gated.check()?;
    Ok(gated)
}

/// Master-slave flip-flop from a gated latch. Two zero lines are appended:
/// `out` receives the master's state while the clock is 0, and `fb` carries
/// a copy of the state back to the master's input.
pub fn build_flipflop(gated: &FeedbackCircuit) -> Result<FeedbackCircuit> {
    let clk = gated
        .clock
        .ok_or_else(|| Error::Sequential("flip-flop needs a gated latch".into()))?;
    let &[(q, q_in)] = gated.feedback.as_slice() else {
        return Err(Error::Sequential(
            "flip-flop needs exactly one feedback pair".into(),
        ));
    };
    let mut core = gated.core.clone();
    let out = core.add_lines(2, "ff");
    let fb = out + 1;
    core.rename_line(out, "out");
    core.rename_line(fb, "fb");
    core.set_constant(out, false);
    core.set_constant(fb, false);
    core.push(Gate::not(clk));
    core.push(Gate::toffoli(clk, q, out));
    core.push(Gate::cnot(q, fb));
    let ff = FeedbackCircuit {
        core,
        feedback: vec![(fb, q_in)],
        initial: gated.initial.clone(),
        observe: out,
        clock: Some(clk),
    };
    ff.check()?;
    Ok(ff)
}

/// Cost report including the feedback-loop count.
pub fn feedback_cost_report(f: &FeedbackCircuit, catalog: &Catalog) -> Result<CostReport> {
    cost_report_with(&f.core, catalog, feedback_count(f))
}

/// Synthesize a latch core from its characteristic table and wrap it with a
/// single feedback pair on the last line. The SR core uses the extended
/// reversible table; the others embed the irreversible table.
pub fn synthesize_latch(kind: LatchKind) -> Result<FeedbackCircuit> {
    let config = PipelineConfig::default();
    let mut core = match kind {
        LatchKind::Sr => {
            let r = synth_pipeline(&sr_extended_table(), &config)?;
            let mut c = r.circuit;
            c.mark_garbage(0);
            c.mark_garbage(1);
            c
        }
        _ => synth_pipeline(&kind.source_table(), &config)?.circuit,
    };
    let n = core.width();
    for (l, name) in kind.input_names().iter().enumerate() {
        core.rename_line(l, *name);
    }
    core.rename_line(n - 1, "Q");
    FeedbackCircuit::new(core, vec![(n - 1, n - 1)])
}

const BUILTIN_LATCHES: &str = include_str!("../data/latches.rev");

fn builtin_cores() -> &'static Vec<(String, FeedbackCircuit)> {
    static CORES: OnceLock<Vec<(String, FeedbackCircuit)>> = OnceLock::new();
    CORES.get_or_init(|| {
        parse_blocks(BUILTIN_LATCHES)
            .expect("built-in latch file parses")
            .iter()
            .map(|b| {
                let name = b.name.clone().expect("built-in blocks are named");
                (
                    name,
                    FeedbackCircuit::from_file(b).expect("built-in latch is well formed"),
                )
            })
            .collect()
    })
}

/// Names accepted by [`builtin`].
pub fn builtin_names() -> Vec<String> {
    let mut out = Vec::new();
    for kind in LatchKind::ALL {
        out.push(format!("{}-latch", kind.label()));
        out.push(format!("gated-{}-latch", kind.label()));
        out.push(format!("{}-flipflop", kind.label()));
    }
    out
}

/// A built-in design by name, e.g. `sr-latch`, `gated-d-latch`, `jk-flipflop`.
pub fn builtin(name: &str) -> Result<FeedbackCircuit> {
    let spec = builtin_spec(name)
        .ok_or_else(|| Error::Sequential(format!("no built-in design `{name}`")))?;
    let core_name = format!("{}-latch", spec.kind.label());
    let latch = builtin_cores()
        .iter()
        .find(|(n, _)| *n == core_name)
        .map(|(_, f)| f.clone())
        .ok_or_else(|| Error::Sequential(format!("missing fixture `{core_name}`")))?;
    match spec.clocking {
        Clocking::Latch => Ok(latch),
        Clocking::Gated => build_gated(&latch),
        Clocking::FlipFlop => build_flipflop(&build_gated(&latch)?),
    }
}

/// Behavioural contract of a built-in design name.
pub fn builtin_spec(name: &str) -> Option<LatchSpec> {
    let (rest, clocking) = if let Some(r) = name.strip_suffix("-flipflop") {
        (r, Clocking::FlipFlop)
    } else {
        let r = name.strip_suffix("-latch")?;
        match r.strip_prefix("gated-") {
            Some(g) => (g, Clocking::Gated),
            None => (r, Clocking::Latch),
        }
    };
    let kind = LatchKind::ALL.into_iter().find(|k| k.label() == rest)?;
    Some(LatchSpec::new(kind, clocking))
}
