// SPDX-License-Identifier: Apache-2.0

//! Gate and circuit IR.
//!
//! A basis state of an `n`-line circuit is an integer in `0..2^n` where line 0
//! is the most significant bit. All gates use positive-polarity controls.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Kind of a reversible primitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    /// NOT / CNOT / Toffoli, depending on the number of controls.
    X,
    V,
    Vdag,
    Swap,
    Fredkin,
    /// A gate resolved through a registry (see [`GateResolver`]).
    Catalog(String),
}

/// One gate: a kind, a set of positive controls and its target lines.
///
/// Controls are kept sorted. The two targets of `Swap`/`Fredkin` are
/// interchangeable and are kept sorted too, so structural equality matches
/// semantic identity for those kinds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gate {
    kind: GateKind,
    controls: Vec<usize>,
    targets: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, mut controls: Vec<usize>, mut targets: Vec<usize>) -> Self {
        controls.sort_unstable();
        if matches!(kind, GateKind::Swap | GateKind::Fredkin) {
            targets.sort_unstable();
        }
        Gate {
            kind,
            controls,
            targets,
        }
    }

    pub fn not(target: usize) -> Self {
        Gate::new(GateKind::X, vec![], vec![target])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::new(GateKind::X, vec![control], vec![target])
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Gate::new(GateKind::X, vec![c1, c2], vec![target])
    }

    /// Multiple-control Toffoli with an arbitrary control set.
    pub fn mct(controls: Vec<usize>, target: usize) -> Self {
        Gate::new(GateKind::X, controls, vec![target])
    }

    pub fn v(control: usize, target: usize) -> Self {
        Gate::new(GateKind::V, vec![control], vec![target])
    }

    pub fn vdag(control: usize, target: usize) -> Self {
        Gate::new(GateKind::Vdag, vec![control], vec![target])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Swap, vec![], vec![a, b])
    }

    pub fn fredkin(control: usize, a: usize, b: usize) -> Self {
        Gate::new(GateKind::Fredkin, vec![control], vec![a, b])
    }

    /// A registry gate applied to `lines`, first line = most significant bit
    /// of the registered table.
    pub fn catalog(name: impl Into<String>, lines: Vec<usize>) -> Self {
        Gate::new(GateKind::Catalog(name.into()), vec![], lines)
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Single target of an X/V/V⁺ gate.
    pub fn target(&self) -> usize {
        self.targets[0]
    }

    /// All lines touched by the gate, sorted.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.controls.iter().chain(&self.targets).copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn is_classical(&self) -> bool {
        !matches!(self.kind, GateKind::V | GateKind::Vdag)
    }

    /// Member of the NOT/CNOT/Toffoli library (at most two controls).
    pub fn is_nct(&self) -> bool {
        self.kind == GateKind::X && self.controls.len() <= 2
    }

    /// Member of the NOT/CNOT/controlled-V/controlled-V⁺ library.
    pub fn is_ncv(&self) -> bool {
        match self.kind {
            GateKind::X => self.controls.len() <= 1,
            GateKind::V | GateKind::Vdag => self.controls.len() <= 1,
            _ => false,
        }
    }

    /// The inverse gate for built-in kinds; `None` for catalog gates.
    pub fn inverse(&self) -> Option<Gate> {
        let kind = match &self.kind {
            GateKind::V => GateKind::Vdag,
            GateKind::Vdag => GateKind::V,
            GateKind::Catalog(_) => return None,
            k => k.clone(),
        };
        Some(Gate {
            kind,
            controls: self.controls.clone(),
            targets: self.targets.clone(),
        })
    }

    /// Rename every line through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Gate {
        Gate::new(
            self.kind.clone(),
            self.controls.iter().map(|&l| map(l)).collect(),
            self.targets.iter().map(|&l| map(l)).collect(),
        )
    }

    /// Apply a classical gate to a basis state of a `width`-line register.
    pub fn apply_classical(
        &self,
        state: usize,
        width: usize,
        resolver: &dyn GateResolver,
    ) -> Result<usize> {
        let mask = |l: usize| 1usize << (width - 1 - l);
        let controls_on = self.controls.iter().all(|&c| state & mask(c) != 0);
        match &self.kind {
            GateKind::X => Ok(if controls_on {
                state ^ mask(self.targets[0])
            } else {
                state
            }),
            GateKind::Swap | GateKind::Fredkin => {
                if !controls_on {
                    return Ok(state);
                }
                let (a, b) = (mask(self.targets[0]), mask(self.targets[1]));
                let (bit_a, bit_b) = (state & a != 0, state & b != 0);
                Ok(if bit_a != bit_b { state ^ a ^ b } else { state })
            }
            GateKind::Catalog(name) => {
                let perm = resolver
                    .permutation(name)
                    .ok_or_else(|| Error::UnknownGate(name.clone()))?;
                let k = self.targets.len();
                let mut local = 0;
                for &l in &self.targets {
                    local = (local << 1) | usize::from(state & mask(l) != 0);
                }
                let out = perm.apply(local);
                let mut next = state;
                for (i, &l) in self.targets.iter().enumerate() {
                    let bit = (out >> (k - 1 - i)) & 1;
                    next = (next & !mask(l)) | (bit * mask(l));
                }
                Ok(next)
            }
            GateKind::V | GateKind::Vdag => Err(Error::NotClassical {
                index: 0,
                gate: self.to_string(),
            }),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| {
            v.iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let name = match &self.kind {
            GateKind::X => match self.controls.len() {
                0 => "N".to_string(),
                1 => "C".to_string(),
                2 => "T".to_string(),
                n => format!("T{}", n + 1),
            },
            GateKind::V => "V".into(),
            GateKind::Vdag => "V+".into(),
            GateKind::Swap => "SWAP".into(),
            GateKind::Fredkin => "F".into(),
            GateKind::Catalog(n) => n.clone(),
        };
        if self.controls.is_empty() {
            write!(f, "{name}({})", list(&self.targets))
        } else {
            write!(
                f,
                "{name}({};{})",
                list(&self.controls),
                list(&self.targets)
            )
        }
    }
}

/// Resolves registry gates to their classical semantics.
pub trait GateResolver {
    fn permutation(&self, name: &str) -> Option<&Permutation>;

    /// Name of the registered inverse of `name`. Involutions are their own
    /// inverse.
    fn inverse_name(&self, name: &str) -> Option<String> {
        let p = self.permutation(name)?;
        p.compose(p).is_identity().then(|| name.to_string())
    }
}

/// Resolver that knows no registry gates.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoCatalog;

impl GateResolver for NoCatalog {
    fn permutation(&self, _name: &str) -> Option<&Permutation> {
        None
    }
}

/// A bijection on `0..2^lines`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    lines: usize,
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(lines: usize) -> Self {
        Permutation {
            lines,
            map: (0..1usize << lines).collect(),
        }
    }

    /// Checked constructor: `map` must have length `2^lines` and be a bijection.
    pub fn from_map(lines: usize, map: Vec<usize>) -> Result<Self> {
        if map.len() != 1usize << lines {
            return Err(Error::NotReversible(format!(
                "{} rows for {} lines",
                map.len(),
                lines
            )));
        }
        let mut seen = vec![false; map.len()];
        for (i, &y) in map.iter().enumerate() {
            if y >= map.len() || std::mem::replace(&mut seen[y], true) {
                return Err(Error::NotReversible(format!(
                    "row {i} maps to {y}, which is out of range or repeated"
                )));
            }
        }
        Ok(Permutation { lines, map })
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self` followed by `next`.
    pub fn compose(&self, next: &Permutation) -> Permutation {
        Permutation {
            lines: self.lines,
            map: self.map.iter().map(|&y| next.map[y]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Permutation {
            lines: self.lines,
            map: inv,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &y)| i == y)
    }
}

/// Rule broken by a gate or annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    LineOutOfRange(usize),
    ControlOverlapsTarget,
    DuplicateLine,
    Arity(&'static str),
    DuplicateName(String),
    AnnotationOutOfRange(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Offending gate index, `None` for circuit-level annotations.
    pub gate: Option<usize>,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.gate {
            write!(f, "gate {i}: ")?;
        }
        match &self.rule {
            Rule::LineOutOfRange(l) => write!(f, "line out of range ({l})"),
            Rule::ControlOverlapsTarget => write!(f, "control overlaps target"),
            Rule::DuplicateLine => write!(f, "line used twice"),
            Rule::Arity(msg) => write!(f, "{msg}"),
            Rule::DuplicateName(n) => write!(f, "duplicate line name `{n}`"),
            Rule::AnnotationOutOfRange(l) => {
                write!(f, "constant/garbage annotation on missing line {l}")
            }
        }
    }
}

/// A fixed-width ordered gate list with line names, constant inputs and
/// garbage outputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    names: Vec<String>,
    constants: BTreeMap<usize, bool>,
    garbage: BTreeSet<usize>,
    gates: Vec<Gate>,
}

pub fn default_line_name(index: usize, width: usize) -> String {
    if width <= 26 {
        ((b'a' + index as u8) as char).to_string()
    } else {
        format!("x{index}")
    }
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit {
            names: (0..width).map(|i| default_line_name(i, width)).collect(),
            constants: BTreeMap::new(),
            garbage: BTreeSet::new(),
            gates: Vec::new(),
        }
    }

    pub fn with_gates(width: usize, gates: Vec<Gate>) -> Self {
        let mut c = Circuit::new(width);
        c.gates = gates;
        c
    }

    pub fn with_names(names: Vec<String>) -> Self {
        Circuit {
            names,
            constants: BTreeMap::new(),
            garbage: BTreeSet::new(),
            gates: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn line_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    /// Same lines and annotations, different gate list.
    pub fn replace_gates(&self, gates: Vec<Gate>) -> Circuit {
        Circuit {
            names: self.names.clone(),
            constants: self.constants.clone(),
            garbage: self.garbage.clone(),
            gates,
        }
    }

    pub fn constants(&self) -> &BTreeMap<usize, bool> {
        &self.constants
    }

    pub fn set_constant(&mut self, line: usize, value: bool) {
        self.constants.insert(line, value);
    }

    pub fn garbage(&self) -> &BTreeSet<usize> {
        &self.garbage
    }

    pub fn mark_garbage(&mut self, line: usize) {
        self.garbage.insert(line);
    }

    /// Append lines with default names, returning the index of the first.
    pub fn add_lines(&mut self, count: usize, prefix: &str) -> usize {
        let first = self.width();
        for i in 0..count {
            let mut name = format!("{prefix}{i}");
            while self.names.contains(&name) {
                name.push('_');
            }
            self.names.push(name);
        }
        first
    }

    pub fn rename_line(&mut self, line: usize, name: impl Into<String>) {
        self.names[line] = name.into();
    }

    /// Gate list followed by `other`'s gate list; annotations of `self` kept.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        if self.width() != other.width() {
            return Err(Error::WidthMismatch {
                left: self.width(),
                right: other.width(),
            });
        }
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Ok(self.replace_gates(gates))
    }

    /// Check every gate and annotation invariant, reporting all violations.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let n = self.width();
        let mut seen = BTreeSet::new();
        for name in &self.names {
            if !seen.insert(name) {
                out.push(Violation {
                    gate: None,
                    rule: Rule::DuplicateName(name.clone()),
                });
            }
        }
        for &l in self.constants.keys().chain(self.garbage.iter()) {
            if l >= n {
                out.push(Violation {
                    gate: None,
                    rule: Rule::AnnotationOutOfRange(l),
                });
            }
        }
        for (i, g) in self.gates.iter().enumerate() {
            let mut push = |rule| {
                out.push(Violation {
                    gate: Some(i),
                    rule,
                })
            };
            for &l in g.controls.iter().chain(&g.targets) {
                if l >= n {
                    push(Rule::LineOutOfRange(l));
                }
            }
            if g.controls.iter().any(|c| g.targets.contains(c)) {
                push(Rule::ControlOverlapsTarget);
            }
            let dup = |v: &[usize]| v.windows(2).any(|w| w[0] == w[1]);
            let mut t = g.targets.clone();
            t.sort_unstable();
            if dup(&g.controls) || dup(&t) {
                push(Rule::DuplicateLine);
            }
            match g.kind {
                GateKind::X if g.targets.len() != 1 => push(Rule::Arity("X gate needs one target")),
                GateKind::V | GateKind::Vdag if g.targets.len() != 1 => {
                    push(Rule::Arity("V gate needs one target"))
                }
                GateKind::V | GateKind::Vdag if g.controls.len() > 1 => {
                    push(Rule::Arity("V gate with more than one control"))
                }
                GateKind::Swap if g.targets.len() != 2 || !g.controls.is_empty() => {
                    push(Rule::Arity("SWAP needs two targets and no controls"))
                }
                GateKind::Fredkin if g.targets.len() != 2 || g.controls.len() != 1 => {
                    push(Rule::Arity("Fredkin needs one control and two targets"))
                }
                GateKind::Catalog(_) if g.targets.is_empty() || !g.controls.is_empty() => push(
                    Rule::Arity("registry gate needs at least one line and no controls"),
                ),
                _ => {}
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(Error::Invalid)
    }

    /// Run a classical circuit on one basis state.
    pub fn apply(&self, state: usize, resolver: &dyn GateResolver) -> Result<usize> {
        let n = self.width();
        self.gates.iter().enumerate().try_fold(state, |s, (i, g)| {
            g.apply_classical(s, n, resolver).map_err(|e| match e {
                Error::NotClassical { gate, .. } => Error::NotClassical { index: i, gate },
                e => e,
            })
        })
    }

    pub fn is_classical(&self) -> bool {
        self.gates.iter().all(Gate::is_classical)
    }

    /// Gates renamed through `map`, which must be a permutation of the lines.
    pub fn relabel(&self, map: &[usize]) -> Circuit {
        let mut names = vec![String::new(); self.width()];
        for (old, &new) in map.iter().enumerate() {
            names[new] = self.names[old].clone();
        }
        Circuit {
            names,
            constants: self.constants.iter().map(|(&l, &v)| (map[l], v)).collect(),
            garbage: self.garbage.iter().map(|&l| map[l]).collect(),
            gates: self.gates.iter().map(|g| g.relabel(|l| map[l])).collect(),
        }
    }
}

/// Composite bijection of a classical circuit; gates act left to right.
pub fn simulate_permutation(c: &Circuit) -> Result<Permutation> {
    simulate_permutation_with(c, &NoCatalog)
}

pub fn simulate_permutation_with(c: &Circuit, resolver: &dyn GateResolver) -> Result<Permutation> {
    c.ensure_valid()?;
    if let Some((index, g)) = c.gates.iter().enumerate().find(|(_, g)| !g.is_classical()) {
        return Err(Error::NotClassical {
            index,
            gate: g.to_string(),
        });
    }
    let map = (0..1usize << c.width())
        .map(|s| c.apply(s, resolver))
        .collect::<Result<Vec<_>>>()?;
    Ok(Permutation {
        lines: c.width(),
        map,
    })
}

/// Reversed gate list with every gate replaced by its inverse.
pub fn invert_circuit(c: &Circuit) -> Result<Circuit> {
    invert_circuit_with(c, &NoCatalog)
}

pub fn invert_circuit_with(c: &Circuit, resolver: &dyn GateResolver) -> Result<Circuit> {
    c.ensure_valid()?;
    let gates = c
        .gates
        .iter()
        .rev()
        .map(|g| match g.inverse() {
            Some(inv) => Ok(inv),
            None => {
                let GateKind::Catalog(name) = &g.kind else {
                    unreachable!()
                };
                let inv = resolver
                    .inverse_name(name)
                    .ok_or_else(|| Error::NoInverse(name.clone()))?;
                Ok(Gate::catalog(inv, g.targets.clone()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(c.replace_gates(gates))
}

/// Value of `line` in basis state `state` of a `width`-line register.
pub fn bit(state: usize, line: usize, width: usize) -> bool {
    (state >> (width - 1 - line)) & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_formed_toffoli_validates() {
        let c = Circuit::with_gates(3, vec![Gate::toffoli(0, 1, 2)]);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn control_on_target_is_reported() {
        let c = Circuit::with_gates(3, vec![Gate::cnot(1, 1)]);
        let v = c.validate().unwrap_err();
        assert_eq!(v[0].gate, Some(0));
        assert_eq!(v[0].rule, Rule::ControlOverlapsTarget);
        assert!(v[0].to_string().contains("control overlaps target"));
    }

    #[test]
    fn out_of_range_line_is_reported() {
        let c = Circuit::with_gates(3, vec![Gate::not(0), Gate::cnot(0, 5)]);
        let v = c.validate().unwrap_err();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].gate, Some(1));
        assert!(v[0].to_string().contains("line out of range"));
    }

    #[test]
    fn not_flips_the_bit() {
        let c = Circuit::with_gates(1, vec![Gate::not(0)]);
        assert_eq!(simulate_permutation(&c).unwrap().map(), &[1, 0]);
    }

    #[test]
    fn toffoli_swaps_110_and_111() {
        let c = Circuit::with_gates(3, vec![Gate::toffoli(0, 1, 2)]);
        assert_eq!(
            simulate_permutation(&c).unwrap().map(),
            &[0, 1, 2, 3, 4, 5, 7, 6]
        );
    }

    #[test]
    fn fredkin_equals_cnot_toffoli_cnot() {
        let ctc = Circuit::with_gates(
            3,
            vec![Gate::cnot(2, 1), Gate::toffoli(0, 1, 2), Gate::cnot(2, 1)],
        );
        let f = Circuit::with_gates(3, vec![Gate::fredkin(0, 1, 2)]);
        assert_eq!(
            simulate_permutation(&ctc).unwrap(),
            simulate_permutation(&f).unwrap()
        );
    }

    #[test]
    fn v_gates_are_rejected_by_classical_simulation() {
        let c = Circuit::with_gates(2, vec![Gate::not(0), Gate::v(0, 1)]);
        assert!(matches!(
            simulate_permutation(&c),
            Err(Error::NotClassical { index: 1, .. })
        ));
    }

    #[test]
    fn inversion_reverses_and_swaps_v() {
        let c = Circuit::with_gates(2, vec![Gate::not(0), Gate::cnot(0, 1)]);
        assert_eq!(
            invert_circuit(&c).unwrap().gates(),
            &[Gate::cnot(0, 1), Gate::not(0)]
        );
        let v = Circuit::with_gates(2, vec![Gate::v(0, 1)]);
        assert_eq!(invert_circuit(&v).unwrap().gates(), &[Gate::vdag(0, 1)]);
    }

    #[test]
    fn unregistered_catalog_gate_has_no_inverse() {
        let c = Circuit::with_gates(2, vec![Gate::catalog("FOO", vec![0, 1])]);
        assert_eq!(invert_circuit(&c), Err(Error::NoInverse("FOO".into())));
    }

    #[test]
    fn swap_and_fredkin_targets_are_unordered() {
        assert_eq!(Gate::swap(2, 0), Gate::swap(0, 2));
        assert_eq!(Gate::fredkin(0, 2, 1), Gate::fredkin(0, 1, 2));
    }

    #[test]
    fn display_uses_library_names() {
        assert_eq!(Gate::toffoli(1, 0, 2).to_string(), "T(0,1;2)");
        assert_eq!(Gate::not(3).to_string(), "N(3)");
        assert_eq!(Gate::vdag(0, 1).to_string(), "V+(0;1)");
        assert_eq!(Gate::fredkin(0, 1, 2).to_string(), "F(0;1,2)");
    }

    #[test]
    fn permutation_rejects_non_bijection() {
        assert!(Permutation::from_map(1, vec![0, 0]).is_err());
        assert!(Permutation::from_map(2, vec![0, 1, 2]).is_err());
    }
}
