// SPDX-License-Identifier: Apache-2.0

//! Error-free unitary semantics for NCV circuits.
//!
//! Every entry reachable from NOT, CNOT, controlled-V and controlled-V⁺ lies in
//! `Z[i] / 2^k`, so matrices are kept over scaled Gaussian integers and
//! compared for exact equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::circuit::{Circuit, Gate, GateKind, GateResolver, NoCatalog, Permutation};
use crate::error::{Error, Result};

/// Default width cap for [`circuit_unitary`] (65,536 entries).
pub const DEFAULT_WIDTH_CAP: usize = 8;

/// `(re + i·im) / 2^k` in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GScalar {
    re: i128,
    im: i128,
    k: u32,
}

impl GScalar {
    pub const ZERO: GScalar = GScalar { re: 0, im: 0, k: 0 };
    pub const ONE: GScalar = GScalar { re: 1, im: 0, k: 0 };

    pub fn new(re: i128, im: i128, k: u32) -> Self {
        GScalar { re, im, k }.normalized()
    }

    pub fn re(&self) -> i128 {
        self.re
    }

    pub fn im(&self) -> i128 {
        self.im
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn normalized(mut self) -> Self {
        if self.re == 0 && self.im == 0 {
            self.k = 0;
            return self;
        }
        while self.k > 0 && self.re & 1 == 0 && self.im & 1 == 0 {
            self.re >>= 1;
            self.im >>= 1;
            self.k -= 1;
        }
        self
    }

    pub fn conj(self) -> Self {
        GScalar {
            im: -self.im,
            ..self
        }
    }

    fn scaled_to(self, k: u32) -> (i128, i128) {
        let s = k - self.k;
        let shift = |v: i128| {
            v.checked_mul(1i128 << s)
                .expect("exact arithmetic overflow")
        };
        (shift(self.re), shift(self.im))
    }

    /// `self · (1+i)/2`
    fn mul_half_one_plus_i(self) -> Self {
        GScalar {
            re: self.re - self.im,
            im: self.re + self.im,
            k: self.k + 1,
        }
    }

    /// `self · (1−i)/2`
    fn mul_half_one_minus_i(self) -> Self {
        GScalar {
            re: self.re + self.im,
            im: self.im - self.re,
            k: self.k + 1,
        }
    }
}

impl Add for GScalar {
    type Output = GScalar;
    fn add(self, rhs: GScalar) -> GScalar {
        let k = self.k.max(rhs.k);
        let (a, b) = self.scaled_to(k);
        let (c, d) = rhs.scaled_to(k);
        GScalar::new(a + c, b + d, k)
    }
}

impl Neg for GScalar {
    type Output = GScalar;
    fn neg(self) -> GScalar {
        GScalar {
            re: -self.re,
            im: -self.im,
            k: self.k,
        }
    }
}

impl Sub for GScalar {
    type Output = GScalar;
    fn sub(self, rhs: GScalar) -> GScalar {
        self + (-rhs)
    }
}

impl Mul for GScalar {
    type Output = GScalar;
    fn mul(self, rhs: GScalar) -> GScalar {
        let m = |a: i128, b: i128| a.checked_mul(b).expect("exact arithmetic overflow");
        GScalar::new(
            m(self.re, rhs.re) - m(self.im, rhs.im),
            m(self.re, rhs.im) + m(self.im, rhs.re),
            self.k + rhs.k,
        )
    }
}

impl fmt::Display for GScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = match (self.re, self.im) {
            (r, 0) => r.to_string(),
            (0, i) => format!("{i}i"),
            (r, i) if i < 0 => format!("({r}-{}i)", -i),
            (r, i) => format!("({r}+{i}i)"),
        };
        if self.k == 0 {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/{}", 1u128 << self.k)
        }
    }
}

/// A `2^n × 2^n` matrix over [`GScalar`], row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactUnitary {
    n: usize,
    entries: Vec<GScalar>,
}

impl ExactUnitary {
    pub fn identity(n: usize) -> Self {
        let dim = 1usize << n;
        let mut entries = vec![GScalar::ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = GScalar::ONE;
        }
        ExactUnitary { n, entries }
    }

    /// Permutation matrix sending basis state `x` to `p(x)`.
    pub fn from_permutation(p: &Permutation) -> Self {
        let dim = 1usize << p.lines();
        let mut entries = vec![GScalar::ZERO; dim * dim];
        for x in 0..dim {
            entries[p.apply(x) * dim + x] = GScalar::ONE;
        }
        ExactUnitary {
            n: p.lines(),
            entries,
        }
    }

    pub fn lines(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> GScalar {
        self.entries[row * self.dim() + col]
    }

    pub fn is_identity(&self) -> bool {
        *self == ExactUnitary::identity(self.n)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let dim = self.dim();
        let mut entries = vec![GScalar::ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                entries[c * dim + r] = self.entries[r * dim + c].conj();
            }
        }
        ExactUnitary { n: self.n, entries }
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &ExactUnitary) -> Self {
        assert_eq!(self.n, rhs.n, "matmul of different widths");
        let dim = self.dim();
        let mut entries = vec![GScalar::ZERO; dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.entries[r * dim + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..dim {
                    let b = rhs.entries[k * dim + c];
                    if !b.is_zero() {
                        entries[r * dim + c] = entries[r * dim + c] + a * b;
                    }
                }
            }
        }
        ExactUnitary { n: self.n, entries }
    }

    pub fn is_unitary(&self) -> bool {
        self.matmul(&self.dagger()).is_identity()
    }

    /// Classical permutation if every column has a single entry equal to 1.
    pub fn as_permutation(&self) -> Option<Permutation> {
        let dim = self.dim();
        let mut map = vec![0; dim];
        for (c, slot) in map.iter_mut().enumerate() {
            let mut found = None;
            for r in 0..dim {
                let e = self.get(r, c);
                if e == GScalar::ONE && found.is_none() {
                    found = Some(r);
                } else if !e.is_zero() {
                    return None;
                }
            }
            *slot = found?;
        }
        Permutation::from_map(self.n, map).ok()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        let dim = self.dim();
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.entries.split_at_mut(hi * dim);
        head[lo * dim..lo * dim + dim].swap_with_slice(&mut tail[..dim]);
    }

    /// Left-multiply by the unitary of `g` (i.e. apply `g` after `self`).
    pub fn apply_gate(&mut self, g: &Gate, resolver: &dyn GateResolver) -> Result<()> {
        let n = self.n;
        let dim = self.dim();
        let mask = |l: usize| 1usize << (n - 1 - l);
        let ctrl: usize = g.controls().iter().map(|&c| mask(c)).sum();
        match g.kind() {
            GateKind::V | GateKind::Vdag => {
                let t = mask(g.target());
                let dagger = *g.kind() == GateKind::Vdag;
                for r0 in 0..dim {
                    if r0 & t != 0 || r0 & ctrl != ctrl {
                        continue;
                    }
                    let r1 = r0 | t;
                    for c in 0..dim {
                        let a0 = self.entries[r0 * dim + c];
                        let a1 = self.entries[r1 * dim + c];
                        if a0.is_zero() && a1.is_zero() {
                            continue;
                        }
                        // V = ½[[1+i, 1−i], [1−i, 1+i]], V⁺ is its conjugate.
                        let (n0, n1) = if dagger {
                            (
                                a0.mul_half_one_minus_i() + a1.mul_half_one_plus_i(),
                                a0.mul_half_one_plus_i() + a1.mul_half_one_minus_i(),
                            )
                        } else {
                            (
                                a0.mul_half_one_plus_i() + a1.mul_half_one_minus_i(),
                                a0.mul_half_one_minus_i() + a1.mul_half_one_plus_i(),
                            )
                        };
                        self.entries[r0 * dim + c] = n0;
                        self.entries[r1 * dim + c] = n1;
                    }
                }
            }
            GateKind::Catalog(_) => {
                let mut next = vec![GScalar::ZERO; dim * dim];
                for s in 0..dim {
                    let img = g.apply_classical(s, n, resolver)?;
                    next[img * dim..img * dim + dim]
                        .copy_from_slice(&self.entries[s * dim..s * dim + dim]);
                }
                self.entries = next;
            }
            _ => {
                // X-family, SWAP and Fredkin are involutions on basis states.
                for s in 0..dim {
                    let img = g.apply_classical(s, n, resolver)?;
                    if img > s {
                        self.swap_rows(s, img);
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ExactUnitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dim = self.dim();
        for r in 0..dim {
            let row: Vec<String> = (0..dim).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Exact matrix of one gate on `n` lines.
pub fn gate_unitary(g: &Gate, n: usize) -> Result<ExactUnitary> {
    gate_unitary_with(g, n, &NoCatalog)
}

pub fn gate_unitary_with(g: &Gate, n: usize, resolver: &dyn GateResolver) -> Result<ExactUnitary> {
    let c = Circuit::with_gates(n, vec![g.clone()]);
    c.validate().map_err(Error::Invalid)?;
    let mut u = ExactUnitary::identity(n);
    u.apply_gate(g, resolver)?;
    Ok(u)
}

/// Left-to-right product of the circuit's gates, capped at
/// [`DEFAULT_WIDTH_CAP`] lines.
pub fn circuit_unitary(c: &Circuit) -> Result<ExactUnitary> {
    circuit_unitary_with(c, DEFAULT_WIDTH_CAP, &NoCatalog)
}

pub fn circuit_unitary_with(
    c: &Circuit,
    cap: usize,
    resolver: &dyn GateResolver,
) -> Result<ExactUnitary> {
    if c.width() > cap {
        return Err(Error::TooWide {
            width: c.width(),
            cap,
        });
    }
    c.validate().map_err(Error::Invalid)?;
    let mut u = ExactUnitary::identity(c.width());
    for g in c.gates() {
        u.apply_gate(g, resolver)?;
    }
    Ok(u)
}

/// Exact entrywise equality of the two circuit unitaries (no global-phase
/// allowance).
pub fn unitary_equivalent(a: &Circuit, b: &Circuit) -> Result<bool> {
    if a.width() != b.width() {
        return Err(Error::WidthMismatch {
            left: a.width(),
            right: b.width(),
        });
    }
    Ok(circuit_unitary(a)? == circuit_unitary(b)?)
}
