// SPDX-License-Identifier: Apache-2.0

//! Truth tables, reversible embedding and transformation-based synthesis.

use std::collections::HashMap;

use crate::circuit::{simulate_permutation, Circuit, Gate, Permutation};
use crate::error::{Error, Result};
use crate::optimizer::optimize;
use crate::qcost::{cost_report, quantum_cost, CostReport};

/// Output word for every input word; bit order puts line 0 in the MSB.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n_in: usize,
    n_out: usize,
    rows: Vec<usize>,
}

impl TruthTable {
    pub fn new(n_in: usize, n_out: usize, rows: Vec<usize>) -> Result<Self> {
        if rows.len() != 1 << n_in {
            return Err(Error::NotReversible(format!(
                "expected {} rows for {n_in} inputs, got {}",
                1usize << n_in,
                rows.len()
            )));
        }
        if let Some(&bad) = rows.iter().find(|&&r| r >> n_out != 0) {
            return Err(Error::NotReversible(format!(
                "output word {bad} does not fit in {n_out} bits"
            )));
        }
        Ok(TruthTable { n_in, n_out, rows })
    }

    pub fn identity(n: usize) -> Self {
        TruthTable {
            n_in: n,
            n_out: n,
            rows: (0..1 << n).collect(),
        }
    }

    pub fn from_permutation(p: &Permutation) -> Self {
        TruthTable {
            n_in: p.lines(),
            n_out: p.lines(),
            rows: p.map().to_vec(),
        }
    }

    /// Table of a single-output boolean function of `n_in` inputs.
    pub fn from_fn(n_in: usize, n_out: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        TruthTable::new(n_in, n_out, (0..1 << n_in).map(f).collect())
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn is_reversible(&self) -> bool {
        matches!(check_bijective(self), Ok(Bijectivity::Bijective))
    }

    pub fn to_permutation(&self) -> Result<Permutation> {
        match check_bijective(self)? {
            Bijectivity::Bijective => Permutation::from_map(self.n_in, self.rows.clone()),
            Bijectivity::Collision(a, b) => Err(Error::NotReversible(format!(
                "inputs {a} and {b} share output {}",
                self.rows[a]
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bijectivity {
    Bijective,
    /// Two inputs, in increasing order, with the same output word.
    Collision(usize, usize),
}

/// Report the first pair of inputs that share an output word.
pub fn check_bijective(t: &TruthTable) -> Result<Bijectivity> {
    if t.n_in != t.n_out {
        return Err(Error::ShapeMismatch {
            inputs: t.n_in,
            outputs: t.n_out,
        });
    }
    let mut first: HashMap<usize, usize> = HashMap::new();
    for (i, &r) in t.rows.iter().enumerate() {
        if let Some(&j) = first.get(&r) {
            return Ok(Bijectivity::Collision(j, i));
        }
        first.insert(r, i);
    }
    Ok(Bijectivity::Bijective)
}

fn ceil_log2(q: usize) -> usize {
    if q <= 1 {
        0
    } else {
        (usize::BITS - (q - 1).leading_zeros()) as usize
    }
}

/// ⌈log₂ q⌉ where q is the largest number of inputs sharing one output word.
pub fn min_garbage(t: &TruthTable) -> usize {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &r in &t.rows {
        *counts.entry(r).or_default() += 1;
    }
    ceil_log2(counts.values().copied().max().unwrap_or(0))
}

/// A reversible table that reproduces `source` once constants are fixed.
///
/// Constant lines follow the source inputs. Garbage lines come first on the
/// output side and the source outputs occupy the last `n_out` lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub source: TruthTable,
    pub target: TruthTable,
    /// Values of the appended constant input lines, in line order.
    pub constants: Vec<bool>,
    pub garbage: usize,
    /// Target line carrying each source output column.
    pub output_lines: Vec<usize>,
}

impl Embedding {
    pub fn width(&self) -> usize {
        self.target.n_in
    }

    pub fn constant_lines(&self) -> std::ops::Range<usize> {
        self.source.n_in..self.width()
    }

    pub fn garbage_lines(&self) -> std::ops::Range<usize> {
        0..self.garbage
    }

    /// Copy the constant and garbage annotations onto `c`.
    pub fn annotate(&self, c: &mut Circuit) {
        for (line, &v) in self.constant_lines().zip(&self.constants) {
            c.set_constant(line, v);
        }
        for line in self.garbage_lines() {
            c.mark_garbage(line);
        }
    }

    /// Target input word for a source input.
    pub fn input_word(&self, x: usize) -> usize {
        let k = self.constants.len();
        let consts = self
            .constants
            .iter()
            .fold(0, |acc, &b| (acc << 1) | usize::from(b));
        (x << k) | consts
    }
}

/// Embed with `extra_lines` constant lines all fixed to 0.
pub fn embed_truth_table(t: &TruthTable, extra_lines: usize) -> Result<Embedding> {
    embed_with_constants(t, &vec![false; extra_lines])
}

pub fn embed_with_constants(t: &TruthTable, constants: &[bool]) -> Result<Embedding> {
    let n = t.n_in + constants.len();
    let need = min_garbage(t);
    if n < t.n_out + need {
        return Err(Error::Infeasible(format!(
            "{n} lines cannot hold {} outputs plus the minimum of {need} garbage lines",
            t.n_out
        )));
    }
    let garbage = n - t.n_out;
    let k = constants.len();
    let out_mask = (1usize << t.n_out) - 1;
    let const_word = constants
        .iter()
        .fold(0, |acc, &b| (acc << 1) | usize::from(b));
    let mut rows = vec![usize::MAX; 1 << n];
    let mut used = vec![false; 1 << n];
    let pick = |used: &[bool], i: usize, want: Option<usize>| -> Option<usize> {
        (0..1usize << n)
            .filter(|&w| !used[w] && want.is_none_or(|y| w & out_mask == y))
            .min_by_key(|&w| ((w ^ i).count_ones(), w))
    };
    for x in 0..1usize << t.n_in {
        let i = (x << k) | const_word;
        let w = pick(&used, i, Some(t.rows[x]))
            .ok_or_else(|| Error::Infeasible("no free word for a required output".into()))?;
        used[w] = true;
        rows[i] = w;
    }
    for (i, row) in rows.iter_mut().enumerate() {
        if *row == usize::MAX {
            let w = pick(&used, i, None).expect("word count matches row count");
            used[w] = true;
            *row = w;
        }
    }
    Ok(Embedding {
        source: t.clone(),
        target: TruthTable::new(n, n, rows)?,
        constants: constants.to_vec(),
        garbage,
        output_lines: (garbage..n).collect(),
    })
}

/// Tie-break order over candidate control sets of equal size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ControlOrder {
    Ascending,
    Descending,
}

fn word_to_lines(word: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&l| word >> (n - 1 - l) & 1 == 1).collect()
}

fn line_mask(lines: &[usize], n: usize) -> usize {
    lines.iter().fold(0, |m, &l| m | 1 << (n - 1 - l))
}

/// Subsets of `pool` in order of size, then in `order`.
fn subsets(pool: &[usize], order: ControlOrder) -> Vec<Vec<usize>> {
    let mut pool = pool.to_vec();
    if order == ControlOrder::Descending {
        pool.reverse();
    }
    let mut all: Vec<Vec<usize>> = (0..1usize << pool.len())
        .map(|m| {
            (0..pool.len())
                .filter(|&b| m >> b & 1 == 1)
                .map(|b| pool[b])
                .collect()
        })
        .collect();
    all.sort_by(|a, b| {
        a.len().cmp(&b.len()).then_with(|| {
            let key = |v: &Vec<usize>| {
                v.iter()
                    .map(|&x| pool.iter().position(|&p| p == x))
                    .collect::<Vec<_>>()
            };
            key(a).cmp(&key(b))
        })
    });
    all
}

/// Gates that move `f[i]` to `i` while fixing every row below `i`. The gates
/// are applied to `f` (as output-side transformations) in the returned order.
fn fix_row(f: &mut [usize], i: usize, n: usize, order: ControlOrder) -> Vec<Gate> {
    let mut gates = Vec::new();
    let p0 = f[i];
    if p0 == i {
        return gates;
    }
    let to_set = i & !p0;
    let mut p = p0;
    for phase in 0..2 {
        let pending = if phase == 0 { to_set } else { p & !i };
        for target in word_to_lines(pending, n) {
            let tbit = 1usize << (n - 1 - target);
            let pool: Vec<usize> = word_to_lines(p & !tbit, n);
            let controls = subsets(&pool, order)
                .into_iter()
                .find(|cs| {
                    let m = line_mask(cs, n);
                    (0..i).all(|j| j & m != m)
                })
                .expect("the full control set never fires below the row");
            let m = line_mask(&controls, n);
            for w in f.iter_mut() {
                if *w & m == m {
                    *w ^= tbit;
                }
            }
            p ^= tbit;
            gates.push(Gate::mct(controls, target));
        }
    }
    debug_assert_eq!(p, i);
    gates
}

fn require_reversible(t: &TruthTable) -> Result<usize> {
    t.to_permutation()?;
    Ok(t.n_in)
}

pub fn synthesize_basic(t: &TruthTable) -> Result<Circuit> {
    synthesize_basic_with(t, ControlOrder::Ascending)
}

/// Output-side transformation-based synthesis.
pub fn synthesize_basic_with(t: &TruthTable, order: ControlOrder) -> Result<Circuit> {
    let n = require_reversible(t)?;
    let mut f = t.rows.clone();
    let mut gates = Vec::new();
    for i in 0..1usize << n {
        gates.extend(fix_row(&mut f, i, n, order));
    }
    gates.reverse();
    Ok(Circuit::with_gates(n, gates))
}

pub fn synthesize_bidirectional(t: &TruthTable) -> Result<Circuit> {
    synthesize_bidirectional_with(t, ControlOrder::Ascending)
}

/// Gates and total controls the basic algorithm adds to finish rows
/// `from..` of `f`.
fn completion_cost(f: &[usize], from: usize, n: usize, order: ControlOrder) -> (usize, usize) {
    let mut f = f.to_vec();
    let (mut gates, mut controls) = (0, 0);
    for j in from..f.len() {
        for g in fix_row(&mut f, j, n, order) {
            gates += 1;
            controls += g.controls().len();
        }
    }
    (gates, controls)
}

fn inverse(f: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; f.len()];
    for (x, &y) in f.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// Per row, repair from the input or the output side, whichever leaves the
/// lower total when the remaining rows are finished by the basic algorithm
/// (gates, then controls; ties go to the output side). The result is never
/// longer than [`synthesize_basic_with`] for the same order.
pub fn synthesize_bidirectional_with(t: &TruthTable, order: ControlOrder) -> Result<Circuit> {
    let n = require_reversible(t)?;
    let size = 1usize << n;
    let mut f = t.rows.clone();
    let mut input_side = Vec::new();
    let mut output_side = Vec::new();
    for i in 0..size {
        if f[i] == i {
            continue;
        }
        let mut out_f = f.clone();
        let out_gates = fix_row(&mut out_f, i, n, order);
        let mut inv = inverse(&f);
        let in_gates = fix_row(&mut inv, i, n, order);
        let in_f = inverse(&inv);
        let total = |now: &[Gate], rest: &[usize]| {
            let (g, c) = completion_cost(rest, i + 1, n, order);
            (
                now.len() + g,
                now.iter().map(|g| g.controls().len()).sum::<usize>() + c,
            )
        };
        if total(&in_gates, &in_f) < total(&out_gates, &out_f) {
            f = in_f;
            input_side.extend(in_gates);
        } else {
            f = out_f;
            output_side.extend(out_gates);
        }
    }
    output_side.reverse();
    input_side.extend(output_side);
    Ok(Circuit::with_gates(n, input_side))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Basic,
    Bidirectional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    pub algorithms: Vec<Algorithm>,
    pub orders: Vec<ControlOrder>,
    /// Constant lines for irreversible tables; `None` picks the fewest that
    /// satisfy the garbage bound.
    pub extra_lines: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            algorithms: vec![Algorithm::Basic, Algorithm::Bidirectional],
            orders: vec![ControlOrder::Ascending, ControlOrder::Descending],
            extra_lines: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub algorithm: Algorithm,
    pub order: ControlOrder,
    pub circuit: Circuit,
    /// `None` when the circuit holds gates with no NCV expansion.
    pub quantum_cost: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineResult {
    pub circuit: Circuit,
    pub report: CostReport,
    pub embedding: Option<Embedding>,
    pub candidates: Vec<Candidate>,
}

/// Synthesize with every configured variant, optimize each, and keep the one
/// with the lowest quantum cost, then fewest gates, then smallest gate list.
pub fn synth_pipeline(t: &TruthTable, config: &PipelineConfig) -> Result<PipelineResult> {
    let embedding = if t.is_reversible() {
        None
    } else {
        let extra = config
            .extra_lines
            .unwrap_or_else(|| (t.n_out + min_garbage(t)).saturating_sub(t.n_in));
        Some(embed_truth_table(t, extra)?)
    };
    let table = embedding.as_ref().map_or(t, |e| &e.target);
    let mut candidates = Vec::new();
    for &algorithm in &config.algorithms {
        for &order in &config.orders {
            let raw = match algorithm {
                Algorithm::Basic => synthesize_basic_with(table, order)?,
                Algorithm::Bidirectional => synthesize_bidirectional_with(table, order)?,
            };
            let (mut circuit, _) = optimize(&raw);
            if let Some(e) = &embedding {
                e.annotate(&mut circuit);
            }
            let qc = quantum_cost(&circuit).ok().map(|q| q.cost);
            candidates.push(Candidate {
                algorithm,
                order,
                circuit,
                quantum_cost: qc,
            });
        }
    }
    let best = candidates
        .iter()
        .min_by(|a, b| {
            let key = |c: &Candidate| (c.quantum_cost.unwrap_or(usize::MAX), c.circuit.len());
            key(a)
                .cmp(&key(b))
                .then_with(|| a.circuit.gates().cmp(b.circuit.gates()))
        })
        .ok_or_else(|| Error::Infeasible("no synthesis variant configured".into()))?
        .circuit
        .clone();
    debug_assert_eq!(
        simulate_permutation(&best).ok().map(|p| p.map().to_vec()),
        Some(table.rows.clone())
    );
    let report = cost_report(&best)?;
    Ok(PipelineResult {
        circuit: best,
        report,
        embedding,
        candidates,
    })
}
