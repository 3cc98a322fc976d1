// SPDX-License-Identifier: Apache-2.0

//! Registry of non-NCT gates with certified NCT expansions, and the
//! expand, optimize, cost and compare pipeline built on it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::circuit::{bit, Circuit, Gate, GateKind, GateResolver, Permutation};
use crate::error::{Error, Result};
use crate::format::{parse_blocks, CircuitFile};
use crate::optimizer::optimize;
use crate::qcost::{cost_report_with, nct_gates, Catalog, CostReport};
use crate::sequential::{feedback_count, FeedbackCircuit};
use crate::synthesis::TruthTable;

/// A named gate together with an NCT circuit that realizes it.
///
/// The circuit may carry constant-0 ancilla lines. Logical lines are the
/// remaining lines in index order; the table is over those.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateExpansion {
    name: String,
    circuit: Circuit,
    logical: Vec<usize>,
    ancillas: Vec<usize>,
    table: Permutation,
}

impl GateExpansion {
    /// Certify `circuit` against `table`, or derive the table when none is
    /// given. Every ancilla must start at 0 and be restored.
    pub fn new(
        name: impl Into<String>,
        circuit: Circuit,
        table: Option<Permutation>,
    ) -> Result<Self> {
        let name = name.into();
        let fail = |reason: String| Error::Certification {
            name: name.clone(),
            reason,
        };
        circuit.validate().map_err(Error::Invalid)?;
        if let Some(g) = circuit.gates().iter().find(|g| !g.is_nct()) {
            return Err(fail(format!("{g} is not a NOT, CNOT or Toffoli gate")));
        }
        if let Some((&l, _)) = circuit.constants().iter().find(|(_, &v)| v) {
            return Err(fail(format!("ancilla line {l} must be constant 0")));
        }
        let ancillas: Vec<usize> = circuit.constants().keys().copied().collect();
        let logical: Vec<usize> = (0..circuit.width())
            .filter(|l| !ancillas.contains(l))
            .collect();
        let k = logical.len();
        let width = circuit.width();
        let mut map = Vec::with_capacity(1 << k);
        for x in 0..1usize << k {
            let full = scatter(x, &logical, width);
            let out = circuit.apply(full, &crate::circuit::NoCatalog)?;
            if let Some(&a) = ancillas.iter().find(|&&a| bit(out, a, width)) {
                return Err(fail(format!(
                    "ancilla line {a} is left at 1 for input {x:0k$b}"
                )));
            }
            map.push(gather(out, &logical, width));
        }
        let derived = Permutation::from_map(k, map).map_err(|e| fail(e.to_string()))?;
        if let Some(t) = &table {
            if t.lines() != k {
                return Err(fail(format!(
                    "table covers {} lines, circuit has {k} logical lines",
                    t.lines()
                )));
            }
            if let Some(x) = (0..1usize << k).find(|&x| t.apply(x) != derived.apply(x)) {
                return Err(fail(format!(
                    "input {x:0k$b}: table gives {:0k$b}, circuit gives {:0k$b}",
                    t.apply(x),
                    derived.apply(x)
                )));
            }
        }
        Ok(GateExpansion {
            name,
            circuit,
            logical,
            ancillas,
            table: derived,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of logical lines.
    pub fn arity(&self) -> usize {
        self.logical.len()
    }

    pub fn ancillas(&self) -> usize {
        self.ancillas.len()
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn nct_count(&self) -> usize {
        self.circuit.len()
    }

    pub fn table(&self) -> &Permutation {
        &self.table
    }

    /// The expansion's gates with logical line `i` sent to `lines[i]` and
    /// ancilla `j` sent to `pool[j]`.
    fn instantiate(&self, lines: &[usize], pool: &[usize]) -> Vec<Gate> {
        let mut map = vec![0; self.circuit.width()];
        for (i, &l) in self.logical.iter().enumerate() {
            map[l] = lines[i];
        }
        for (j, &a) in self.ancillas.iter().enumerate() {
            map[a] = pool[j];
        }
        self.circuit
            .gates()
            .iter()
            .map(|g| g.relabel(|l| map[l]))
            .collect()
    }
}

fn scatter(x: usize, lines: &[usize], width: usize) -> usize {
    let k = lines.len();
    lines
        .iter()
        .enumerate()
        .filter(|&(i, _)| (x >> (k - 1 - i)) & 1 == 1)
        .fold(0, |s, (_, &l)| s | 1 << (width - 1 - l))
}

fn gather(state: usize, lines: &[usize], width: usize) -> usize {
    lines
        .iter()
        .fold(0, |acc, &l| (acc << 1) | usize::from(bit(state, l, width)))
}

/// Registered gate expansions, looked up by name. Immutable once built.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: BTreeMap<String, GateExpansion>,
}

const BUILTIN_REGISTRY: &str = include_str!("../data/registry.rev");

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// Fredkin, the new gate, the modified Toffoli and Fredkin gates,
    /// CCCNOT (one ancilla) and SWAP.
    pub fn builtin() -> &'static Registry {
        static REG: OnceLock<Registry> = OnceLock::new();
        REG.get_or_init(|| {
            Registry::from_text(BUILTIN_REGISTRY).expect("built-in registry certifies")
        })
    }

    /// Load named blocks, each with a `.table` section; every block is
    /// certified against its table.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut reg = Registry::empty();
        for block in parse_blocks(text)? {
            reg.register(expansion_from_block(block)?)?;
        }
        Ok(reg)
    }

    /// Adds an entry; a name may be registered once.
    pub fn register(&mut self, e: GateExpansion) -> Result<&GateExpansion> {
        if self.entries.contains_key(&e.name) {
            return Err(Error::Certification {
                name: e.name.clone(),
                reason: "already registered".into(),
            });
        }
        let name = e.name.clone();
        Ok(self.entries.entry(name).or_insert(e))
    }

    pub fn get(&self, name: &str) -> Option<&GateExpansion> {
        self.entries.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl GateResolver for Registry {
    fn permutation(&self, name: &str) -> Option<&Permutation> {
        self.entries.get(name).map(|e| &e.table)
    }
}

fn expansion_from_block(block: CircuitFile) -> Result<GateExpansion> {
    let name = block.name.ok_or_else(|| Error::Certification {
        name: "unnamed".into(),
        reason: "registry block lacks `.name`".into(),
    })?;
    let rows = block.table.ok_or_else(|| Error::Certification {
        name: name.clone(),
        reason: "registry block lacks `.table`".into(),
    })?;
    let lines = rows.len().trailing_zeros() as usize;
    let table = Permutation::from_map(lines, rows).map_err(|e| Error::Certification {
        name: name.clone(),
        reason: e.to_string(),
    })?;
    GateExpansion::new(name, block.circuit, Some(table))
}

/// Replace Fredkin, SWAP and registry gates by NCT gates. Registry gates
/// that need ancillas share one pool of constant-0 lines appended after the
/// existing lines; each expansion returns its ancillas to 0.
pub fn expand_to_nct(c: &Circuit, registry: &Registry) -> Result<Circuit> {
    let mut pool_size = 0;
    for g in c.gates() {
        if let GateKind::Catalog(name) = g.kind() {
            let e = registry
                .get(name)
                .ok_or_else(|| Error::UnknownGate(name.clone()))?;
            if e.arity() != g.targets().len() {
                return Err(Error::Unexpandable {
                    gate: g.to_string(),
                    reason: format!("`{name}` acts on {} lines", e.arity()),
                });
            }
            pool_size = pool_size.max(e.ancillas());
        }
    }
    let mut out = c.replace_gates(Vec::new());
    let first = out.add_lines(pool_size, "anc");
    let pool: Vec<usize> = (first..first + pool_size).collect();
    for &a in &pool {
        out.set_constant(a, false);
    }
    for g in c.gates() {
        match g.kind() {
            GateKind::Catalog(name) => {
                let e = registry.get(name).expect("checked above");
                for h in e.instantiate(g.targets(), &pool) {
                    out.push(h);
                }
            }
            _ => {
                for h in nct_gates(g)? {
                    out.push(h);
                }
            }
        }
    }
    Ok(out)
}

/// Input on which a claimed function disagrees with a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClaimMismatch {
    /// Word over the free (unbound) lines.
    pub input: usize,
    pub expected: usize,
    pub actual: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimVerdict {
    pub holds: bool,
    pub mismatch: Option<ClaimMismatch>,
}

/// Does the gate, with `bindings` fixing some of its logical lines, compute
/// `claimed` on the `outputs` lines? The unbound lines, in index order, form
/// the claimed function's input word.
pub fn check_claimed_function(
    g: &GateExpansion,
    claimed: &TruthTable,
    bindings: &[(usize, bool)],
    outputs: &[usize],
) -> Result<ClaimVerdict> {
    let k = g.arity();
    let bad = |m: String| {
        Err(Error::Unexpandable {
            gate: g.name.clone(),
            reason: m,
        })
    };
    if let Some(&(l, _)) = bindings.iter().find(|&&(l, _)| l >= k) {
        return bad(format!("bound line {l} is out of range"));
    }
    if let Some(&l) = outputs.iter().find(|&&l| l >= k) {
        return bad(format!("output line {l} is out of range"));
    }
    let free: Vec<usize> = (0..k)
        .filter(|l| bindings.iter().all(|b| b.0 != *l))
        .collect();
    if free.len() + bindings.len() != k {
        return bad("a line is bound twice".into());
    }
    if claimed.n_in() != free.len() || claimed.n_out() != outputs.len() {
        return Err(Error::ShapeMismatch {
            inputs: claimed.n_in(),
            outputs: claimed.n_out(),
        });
    }
    let fixed = bindings
        .iter()
        .filter(|b| b.1)
        .fold(0, |s, &(l, _)| s | scatter(1, &[l], k));
    for x in 0..1usize << free.len() {
        let word = fixed | scatter(x, &free, k);
        let actual = gather(g.table.apply(word), outputs, k);
        let expected = claimed.rows()[x];
        if actual != expected {
            return Ok(ClaimVerdict {
                holds: false,
                mismatch: Some(ClaimMismatch {
                    input: x,
                    expected,
                    actual,
                }),
            });
        }
    }
    Ok(ClaimVerdict {
        holds: true,
        mismatch: None,
    })
}

/// A design entered into a comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Design {
    Combinational(Circuit),
    Sequential(FeedbackCircuit),
}

impl From<Circuit> for Design {
    fn from(c: Circuit) -> Self {
        Design::Combinational(c)
    }
}

impl From<FeedbackCircuit> for Design {
    fn from(f: FeedbackCircuit) -> Self {
        Design::Sequential(f)
    }
}

impl Design {
    pub fn core(&self) -> &Circuit {
        match self {
            Design::Combinational(c) => c,
            Design::Sequential(f) => f.core(),
        }
    }

    fn feedback_loops(&self) -> usize {
        match self {
            Design::Combinational(_) => 0,
            Design::Sequential(f) => feedback_count(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub name: String,
    /// The design after expansion and optimization.
    pub circuit: Circuit,
    pub report: CostReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    /// Smallest value of each report metric, keyed as in
    /// [`CostReport::pairs`].
    pub fn minima(&self) -> Vec<(&'static str, usize)> {
        let Some(first) = self.rows.first() else {
            return Vec::new();
        };
        first
            .report
            .pairs()
            .iter()
            .enumerate()
            .map(|(i, &(key, _))| {
                let m = self
                    .rows
                    .iter()
                    .map(|r| r.report.pairs()[i].1)
                    .min()
                    .unwrap();
                (key, m)
            })
            .collect()
    }

    /// Names of the designs that attain the minimum of `metric`, sorted.
    pub fn winners(&self, metric: &str) -> Vec<&str> {
        let Some(&(_, best)) = self.minima().iter().find(|(k, _)| *k == metric) else {
            return Vec::new();
        };
        let mut names: Vec<&str> = self
            .rows
            .iter()
            .filter(|r| {
                r.report
                    .pairs()
                    .iter()
                    .any(|&(k, v)| k == metric && v == best)
            })
            .map(|r| r.name.as_str())
            .collect();
        names.sort_unstable();
        names
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let heads = ["NCT", "NCV", "G", "QC", "TC", "FB"];
        let name_w = self
            .rows
            .iter()
            .map(|r| r.name.len())
            .max()
            .unwrap_or(0)
            .max(6);
        write!(f, "{:<name_w$}", "design")?;
        for h in heads {
            write!(f, " {h:>5}")?;
        }
        writeln!(f)?;
        let minima = self.minima();
        for r in &self.rows {
            write!(f, "{:<name_w$}", r.name)?;
            for (i, &(_, v)) in r.report.pairs().iter().enumerate() {
                let mark = if self.rows.len() > 1 && minima[i].1 == v {
                    "*"
                } else {
                    " "
                };
                write!(f, " {v:>4}{mark}")?;
            }
            writeln!(f)?;
        }
        if self.rows.len() > 1 {
            writeln!(f, "* lowest in column")?;
        }
        Ok(())
    }
}

/// Expand, optimize and cost each design.
pub fn compare_designs(
    designs: &[(String, Design)],
    registry: &Registry,
    catalog: &Catalog,
) -> Result<ComparisonReport> {
    let rows = designs
        .iter()
        .map(|(name, d)| {
            let expanded = expand_to_nct(d.core(), registry)?;
            let (circuit, _) = optimize(&expanded);
            let report = cost_report_with(&circuit, catalog, d.feedback_loops())?;
            Ok(ComparisonRow {
                name: name.clone(),
                circuit,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::simulate_permutation_with;
    use crate::format::parse_circuit;

    fn reg() -> &'static Registry {
        Registry::builtin()
    }

    #[test]
    fn builtin_counts() {
        let counts: Vec<(&str, usize)> = reg()
            .names()
            .map(|n| (n, reg().get(n).unwrap().nct_count()))
            .collect();
        assert_eq!(
            counts,
            [
                ("cccnot", 3),
                ("fredkin", 3),
                ("mod-fredkin", 4),
                ("mod-toffoli", 3),
                ("new-gate", 5),
                ("swap", 3)
            ]
        );
        assert_eq!(reg().get("cccnot").unwrap().ancillas(), 1);
        assert_eq!(reg().get("cccnot").unwrap().arity(), 4);
    }

    #[test]
    fn mismatched_table_is_rejected() {
        let c = parse_circuit(".v a,b\nBEGIN\nt2 a,b\nEND\n").unwrap();
        let swapped = Permutation::from_map(2, vec![0, 2, 1, 3]).unwrap();
        assert!(matches!(
            GateExpansion::new("bogus", c, Some(swapped)),
            Err(Error::Certification { .. })
        ));
    }

    #[test]
    fn dirty_ancilla_is_rejected() {
        let c = parse_circuit(".v a,b\n.c b=0\nBEGIN\nt2 a,b\nEND\n").unwrap();
        assert!(GateExpansion::new("leaky", c, None).is_err());
    }

    #[test]
    fn expansion_preserves_semantics() {
        let c = parse_circuit(
            ".v a,b,c,d\nBEGIN\nuse fredkin a,b,c\nuse new-gate b,c,d\nswap a,d\nf3 d,a,b\nEND\n",
        )
        .unwrap();
        let x = expand_to_nct(&c, reg()).unwrap();
        assert!(x.gates().iter().all(Gate::is_nct));
        assert_eq!(x.len(), 3 + 5 + 3 + 3);
        assert_eq!(
            simulate_permutation_with(&c, reg()).unwrap(),
            simulate_permutation_with(&x, reg()).unwrap()
        );
    }

    #[test]
    fn cccnot_uses_one_ancilla() {
        let c = parse_circuit(".v a,b,c,d\nBEGIN\nuse cccnot a,b,c,d\nEND\n").unwrap();
        let x = expand_to_nct(&c, reg()).unwrap();
        assert_eq!(x.width(), 5);
        assert_eq!(x.len(), 3);
        assert!(x.gates().iter().all(|g| g.controls().len() == 2));
        for s in 0..16 {
            assert_eq!(
                x.apply(s << 1, reg()).unwrap(),
                c.apply(s, reg()).unwrap() << 1
            );
        }
    }

    #[test]
    fn unknown_gate_is_an_error() {
        let c = parse_circuit(".v a,b\nBEGIN\nuse mystery a,b\nEND\n").unwrap();
        assert_eq!(
            expand_to_nct(&c, reg()),
            Err(Error::UnknownGate("mystery".into()))
        );
    }

    #[test]
    fn modified_toffoli_nor_claim() {
        let g = reg().get("mod-toffoli").unwrap();
        let nor = TruthTable::new(2, 1, vec![1, 0, 0, 0]).unwrap();
        let at0 = check_claimed_function(g, &nor, &[(2, false)], &[2]).unwrap();
        assert!(!at0.holds);
        assert_eq!(at0.mismatch.unwrap().input, 0);
        assert!(
            check_claimed_function(g, &nor, &[(2, true)], &[2])
                .unwrap()
                .holds
        );
        assert!(check_claimed_function(g, &nor, &[], &[2]).is_err());
    }

    #[test]
    fn comparison_flags_minima() {
        let fredkin = parse_circuit(".v a,b,c\nBEGIN\nf3 a,b,c\nEND\n").unwrap();
        let ctc = parse_circuit(".v a,b,c\nBEGIN\nt2 c,b\nt3 a,b,c\nt2 c,b\nEND\n").unwrap();
        let designs = vec![
            ("f".to_string(), fredkin.into()),
            ("ctc".to_string(), ctc.into()),
        ];
        let r = compare_designs(&designs, reg(), Catalog::builtin()).unwrap();
        assert_eq!(r.rows[0].report.quantum_cost, 5);
        assert_eq!(r.rows[1].report.quantum_cost, 5);
        assert_eq!(r.winners("quantum_cost"), ["ctc", "f"]);
        assert!(r.to_string().contains("QC"));
    }
}
