//! Min-plus matrices over [`ExtInt`] and their Lie-algebraic closure.

use std::fmt;

use crate::ext::{ExtInt, Fin, NegInf, PosInf};

/// A square matrix of extended integers, stored row-major with an explicit diagonal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtMatrix {
    dim: usize,
    entries: Vec<ExtInt>,
}

impl ExtMatrix {
    pub fn filled(dim: usize, value: ExtInt) -> Self {
        ExtMatrix {
            dim,
            entries: vec![value; dim * dim],
        }
    }

    /// `I′`: zero on the diagonal and `+∞` (the empty set) elsewhere.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::filled(dim, PosInf);
        for i in 0..dim {
            m[(i, i)] = Fin(0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExtInt>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        ExtMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> ExtInt) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        ExtMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[ExtInt] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ExtInt]> {
        self.entries.chunks(self.dim.max(1))
    }

    /// Entrywise `self ≤ other`.
    pub fn le(&self, other: &ExtMatrix) -> bool {
        self.dim == other.dim && self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }
}

impl std::ops::Index<(usize, usize)> for ExtMatrix {
    type Output = ExtInt;
    fn index(&self, (i, j): (usize, usize)) -> &ExtInt {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExtMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ExtInt {
        &mut self.entries[i * self.dim + j]
    }
}

impl fmt::Display for ExtMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>4}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `A ⊙′ B`: `c_ij = min_k (a_ik + b_kj)`.
pub fn minplus_product(a: &ExtMatrix, b: &ExtMatrix) -> ExtMatrix {
    assert_eq!(a.dim, b.dim, "dimension mismatch");
    let n = a.dim;
    ExtMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| a[(i, k)] + b[(k, j)])
            .min()
            .unwrap_or(PosInf)
    })
}

/// `A ⊕′ B`: entrywise minimum.
pub fn elementwise_min(a: &ExtMatrix, b: &ExtMatrix) -> ExtMatrix {
    assert_eq!(a.dim, b.dim, "dimension mismatch");
    ExtMatrix {
        dim: a.dim,
        entries: a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| *x.min(y))
            .collect(),
    }
}

/// One application of `A ↦ A ⊙′ (A ⊕′ I′)`.
pub fn closure_step(a: &ExtMatrix) -> ExtMatrix {
    minplus_product(a, &elementwise_min(a, &ExtMatrix::identity(a.dim)))
}

/// Outcome of [`closure_with_report`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub matrix: ExtMatrix,
    /// Number of closure products applied before the fixpoint (or the flooring pass).
    pub iterations: usize,
    /// Some diagonal cycle had negative weight and entries were floored at `−∞`.
    pub negative_cycle: bool,
    /// Whether every diagonal entry is exactly 1, i.e. the input contains `h°⊗tC[t]`
    /// and meets `h°⊗C[t⁻¹]` trivially. Outside this case the fixpoint is still
    /// computed but the closure formula carries no subalgebra guarantee.
    pub hypotheses_hold: bool,
}

pub fn closure(a: &ExtMatrix) -> ExtMatrix {
    closure_with_report(a).matrix
}

/// Least fixpoint of `A ← A ⊙′ (A ⊕′ I′)`.
///
/// Each product doubles the walk length covered, so without negative cycles the
/// fixpoint is confirmed after at most `⌈log₂ dim⌉ + 1 ≤ dim` products. If entries
/// are still decreasing after that, every entry whose walks pass through a
/// negative cycle is set to `−∞`.
pub fn closure_with_report(a: &ExtMatrix) -> ClosureReport {
    let n = a.dim;
    let hypotheses_hold = (0..n).all(|i| a[(i, i)] == Fin(1));
    let budget = n.max(1).next_power_of_two().trailing_zeros() as usize + 1;
    let mut cur = a.clone();
    let mut iterations = 0;
    loop {
        let next = closure_step(&cur);
        if next == cur {
            return ClosureReport {
                matrix: cur,
                iterations,
                negative_cycle: false,
                hypotheses_hold,
            };
        }
        cur = next;
        iterations += 1;
        if iterations >= budget {
            break;
        }
    }
    // `cur` now covers all walks of length ≤ 2^budget ≥ 2·dim, so any simple
    // cycle shows up on the diagonal.
    let on_negative_cycle: Vec<bool> = (0..n).map(|m| cur[(m, m)] < Fin(0)).collect();
    let reaches = |m: &ExtMatrix, i: usize, j: usize| i == j || m[(i, j)] != PosInf;
    let mut floored = cur.clone();
    let mut negative_cycle = false;
    for (m, _) in on_negative_cycle.iter().enumerate().filter(|(_, &neg)| neg) {
        negative_cycle = true;
        for i in 0..n {
            if !reaches(&cur, i, m) {
                continue;
            }
            for j in 0..n {
                if reaches(&cur, m, j) {
                    floored[(i, j)] = NegInf;
                }
            }
        }
    }
    let next = closure_step(&floored);
    debug_assert_eq!(next, floored, "closure did not settle after flooring");
    ClosureReport {
        matrix: next,
        iterations: iterations + 1,
        negative_cycle,
        hypotheses_hold,
    }
}

/// True iff `A ⊙′ (A ⊕′ I′) = A`.
pub fn is_idempotent(a: &ExtMatrix) -> bool {
    closure_step(a) == *a
}

fn block(a: &ExtMatrix, b: &ExtMatrix, lower_left: ExtInt) -> ExtMatrix {
    let (p, q) = (a.dim, b.dim);
    ExtMatrix::from_fn(p + q, |i, j| match (i < p, j < p) {
        (true, true) => a[(i, j)],
        (false, false) => b[(i - p, j - p)],
        (true, false) => PosInf,
        (false, true) => lower_left,
    })
}

/// `A ⊞ B`: block diagonal with empty off-diagonal blocks.
pub fn box_plus(a: &ExtMatrix, b: &ExtMatrix) -> ExtMatrix {
    block(a, b, PosInf)
}

/// `A ⧅ B`: empty upper-right block, full (`−∞`) lower-left block.
pub fn box_bslash(a: &ExtMatrix, b: &ExtMatrix) -> ExtMatrix {
    block(a, b, NegInf)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `𝔫^□_{±α_k}` for rank `n`: the `(n+1)`-dimensional matrix split after row `k`,
/// with `−∞` in the lower-left block (sign −) or the upper-right block (sign +).
pub fn n_square(n: usize, k: usize, sign: Sign) -> ExtMatrix {
    assert!((1..=n).contains(&k), "split index must lie in 1..=n");
    let empty = |d| ExtMatrix::filled(d, PosInf);
    let m = box_bslash(&empty(k), &empty(n + 1 - k));
    match sign {
        Sign::Minus => m,
        Sign::Plus => ExtMatrix::from_fn(n + 1, |i, j| m[(j, i)]),
    }
}
