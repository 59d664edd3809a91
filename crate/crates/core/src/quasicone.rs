//! Quasicone presentation matrices: validation, defect, normal forms and enumeration.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ext::{ExtInt, Fin, NegInf, PosInf};
use crate::roots::RootIndex;
use crate::tropical::{closure_with_report, elementwise_min, ExtMatrix};

/// An `(n+1)×(n+1)` matrix of minimal δ-exponents plus the Heisenberg exponent `ω`.
///
/// The diagonal of `cells` is kept at 0 and carries no meaning.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Wire", try_from = "Wire")]
pub struct QuasiconeMatrix {
    rank: usize,
    cells: ExtMatrix,
    heisenberg: ExtInt,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("expected {expected} entries for rank {rank}, found {found}")]
    Shape { rank: usize, expected: usize, found: usize },
    #[error("diagonal entry {0} must be null")]
    Diagonal(usize),
    #[error("off-diagonal entry {0} is missing")]
    Missing(usize),
    #[error("rank must be at least 1")]
    Rank,
    #[error("cannot parse {0:?}")]
    Token(String),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// `c_pq > c_pr + c_rq`.
    Triangle { p: usize, q: usize, r: usize },
    /// `c_pq + c_qp < ω`, reported once with `p < q`.
    Pair { p: usize, q: usize },
    Infinite { p: usize, q: usize },
    /// `ω ≠ 1`.
    Heisenberg,
}

impl QuasiconeMatrix {
    pub fn new(rank: usize, mut cells: ExtMatrix, heisenberg: ExtInt) -> Self {
        assert_eq!(cells.dim(), rank + 1, "dimension must be rank + 1");
        for i in 0..=rank {
            cells[(i, i)] = Fin(0);
        }
        QuasiconeMatrix { rank, cells, heisenberg }
    }

    /// From finite off-diagonal rows; diagonal values are ignored and `ω = 1`.
    pub fn from_finite(rows: &[Vec<i64>]) -> Self {
        let cells = ExtMatrix::from_fn(rows.len(), |i, j| Fin(rows[i][j]));
        Self::new(rows.len() - 1, cells, Fin(1))
    }

    /// Compact rows such as `"* 1 1 / 2 * 1 / 1 2 *"`. A diagonal `Z` or `ℤ` marks
    /// the Cartan part as fully contained, i.e. `ω = −∞`.
    pub fn parse_rows(s: &str) -> Result<Self, MatrixError> {
        let rows: Vec<Vec<&str>> = s
            .split(['/', '\n', ';'])
            .map(|r| r.split_whitespace().collect::<Vec<_>>())
            .filter(|r| !r.is_empty())
            .collect();
        let d = rows.len();
        if d < 2 {
            return Err(MatrixError::Rank);
        }
        let mut heisenberg = Fin(1);
        let mut cells = ExtMatrix::filled(d, Fin(0));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(MatrixError::Shape { rank: d - 1, expected: d, found: row.len() });
            }
            for (j, tok) in row.iter().enumerate() {
                if i == j {
                    match *tok {
                        "*" => {}
                        "Z" | "ℤ" => heisenberg = NegInf,
                        _ => return Err(MatrixError::Diagonal(i * d + j)),
                    }
                } else {
                    cells[(i, j)] = tok.parse().map_err(|_| MatrixError::Token(tok.to_string()))?;
                }
            }
        }
        Ok(Self::new(d - 1, cells, heisenberg))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.rank + 1
    }

    pub fn heisenberg(&self) -> ExtInt {
        self.heisenberg
    }

    pub fn set_heisenberg(&mut self, omega: ExtInt) {
        self.heisenberg = omega;
    }

    /// Cells with a zero diagonal.
    pub fn cells(&self) -> &ExtMatrix {
        &self.cells
    }

    /// Cells with `ω` on the diagonal, the form used by the closure.
    pub fn with_heisenberg_diagonal(&self) -> ExtMatrix {
        let mut m = self.cells.clone();
        for i in 0..self.dim() {
            m[(i, i)] = self.heisenberg;
        }
        m
    }

    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize)> {
        let d = self.dim();
        (0..d).flat_map(move |p| (0..d).filter(move |&q| q != p).map(move |q| (p, q)))
    }

    pub fn is_finite(&self) -> bool {
        self.off_diagonal().all(|(p, q)| self[(p, q)].is_finite())
    }

    pub fn validate(&self) -> Vec<Violation> {
        let d = self.dim();
        let mut out = Vec::new();
        if self.heisenberg != Fin(1) {
            out.push(Violation::Heisenberg);
        }
        for (p, q) in self.off_diagonal() {
            if !self[(p, q)].is_finite() {
                out.push(Violation::Infinite { p, q });
            }
        }
        for (p, q) in self.off_diagonal() {
            for r in (0..d).filter(|&r| r != p && r != q) {
                if self[(p, q)] > self[(p, r)] + self[(r, q)] {
                    out.push(Violation::Triangle { p, q, r });
                }
            }
        }
        for (p, q) in self.off_diagonal().filter(|(p, q)| p < q) {
            if self[(p, q)] + self[(q, p)] < self.heisenberg {
                out.push(Violation::Pair { p, q });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `(c_ν + c_{−ν})` over `I_n` in increasing `ν`.
    pub fn gap(&self) -> Vec<ExtInt> {
        RootIndex::all(self.rank)
            .into_iter()
            .map(|r| self[(r.a(), r.b())] + self[(r.b(), r.a())])
            .collect()
    }

    /// `Σ (g_ν − 2)_+`.
    pub fn defect(&self) -> ExtInt {
        self.gap()
            .into_iter()
            .map(|g| (g - 2).positive_part())
            .fold(Fin(0), |a, b| a + b)
    }

    /// All gap components lie in `{1, 2}`.
    pub fn is_gvm_complete(&self) -> bool {
        self.gap().iter().all(|g| *g == Fin(1) || *g == Fin(2))
    }

    pub fn is_normal(&self) -> bool {
        (0..self.rank).all(|p| self[(p, p + 1)] == Fin(1)) && is_monotone(&self.gap())
    }

    /// `c_{p,q} ↦ c_{p,q} + u_p − u_q`.
    pub fn translate_action(&self, u: &[i64]) -> Self {
        assert_eq!(u.len(), self.dim(), "translation vector has wrong length");
        let cells = ExtMatrix::from_fn(self.dim(), |p, q| self.cells[(p, q)] + (u[p] - u[q]));
        Self::new(self.rank, cells, self.heisenberg)
    }

    /// `c′_{p,q} = c_{σ⁻¹(p),σ⁻¹(q)}`.
    pub fn permute_action(&self, sigma: &[usize]) -> Self {
        let inv = invert(sigma);
        let cells = ExtMatrix::from_fn(self.dim(), |p, q| self.cells[(inv[p], inv[q])]);
        Self::new(self.rank, cells, self.heisenberg)
    }

    /// The translation making every superdiagonal entry 1.
    pub fn superdiagonal_shift(&self) -> Option<Vec<i64>> {
        let mut u = vec![0i64; self.dim()];
        for p in 0..self.rank {
            u[p + 1] = u[p] + self[(p, p + 1)].finite()? - 1;
        }
        Some(u)
    }

    /// Canonical representative of the orbit under permutations and translations.
    pub fn normalize(&self) -> Result<Self, NormalizeError> {
        let f = FiniteMat::from_matrix(self).ok_or(NormalizeError::Infinite)?;
        let best = f.canonical().ok_or(NormalizeError::NoMonotone)?;
        Ok(best.to_matrix(self.heisenberg))
    }

    pub fn is_canonical(&self) -> bool {
        self.normalize().is_ok_and(|c| c == *self)
    }

    /// Lexicographic key: gap vector, then off-diagonal entries row-major.
    pub fn canonical_key(&self) -> (Vec<ExtInt>, Vec<ExtInt>) {
        (self.gap(), self.off_diagonal().map(|pq| self[pq]).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, MatrixError> {
        serde_json::from_str(s).map_err(|e| MatrixError::Json(e.to_string()))
    }

    /// Rows in the compact `* 1 2 / …` notation.
    pub fn to_rows_string(&self) -> String {
        let omega_mark = if self.heisenberg == NegInf { "Z" } else { "*" };
        self.cells
            .rows()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| if i == j { omega_mark.to_string() } else { v.to_string() })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join(" / ")
    }
}

impl std::ops::Index<(usize, usize)> for QuasiconeMatrix {
    type Output = ExtInt;
    fn index(&self, pq: (usize, usize)) -> &ExtInt {
        &self.cells[pq]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QuasiconeMatrix {
    fn index_mut(&mut self, pq: (usize, usize)) -> &mut ExtInt {
        assert_ne!(pq.0, pq.1, "the diagonal is not addressable");
        &mut self.cells[pq]
    }
}

impl fmt::Display for QuasiconeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.cells.rows().enumerate() {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(j, v)| if i == j { format!("{:>4}", "*") } else { format!("{v:>4}") })
                .collect();
            writeln!(f, "{}", cells.join(""))?;
        }
        write!(f, "ω = {}", self.heisenberg)
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    rank: usize,
    entries: Vec<Option<ExtInt>>,
    heisenberg: ExtInt,
}

impl From<QuasiconeMatrix> for Wire {
    fn from(m: QuasiconeMatrix) -> Wire {
        let d = m.dim();
        let entries = (0..d * d)
            .map(|k| (k / d != k % d).then(|| m.cells.entries()[k]))
            .collect();
        Wire { rank: m.rank, entries, heisenberg: m.heisenberg }
    }
}

impl TryFrom<Wire> for QuasiconeMatrix {
    type Error = MatrixError;
    fn try_from(w: Wire) -> Result<Self, MatrixError> {
        if w.rank == 0 {
            return Err(MatrixError::Rank);
        }
        let d = w.rank + 1;
        if w.entries.len() != d * d {
            return Err(MatrixError::Shape { rank: w.rank, expected: d * d, found: w.entries.len() });
        }
        let mut cells = ExtMatrix::filled(d, Fin(0));
        for (k, e) in w.entries.iter().enumerate() {
            match (k / d == k % d, e) {
                (true, None) => {}
                (true, Some(_)) => return Err(MatrixError::Diagonal(k)),
                (false, None) => return Err(MatrixError::Missing(k)),
                (false, Some(v)) => cells[(k / d, k % d)] = *v,
            }
        }
        Ok(QuasiconeMatrix::new(w.rank, cells, w.heisenberg))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("normal form is only defined for finite matrices")]
    Infinite,
    #[error("no permutation yields a monotone gap vector")]
    NoMonotone,
}

pub fn is_monotone<T: PartialOrd>(g: &[T]) -> bool {
    g.windows(2).all(|w| w[0] >= w[1])
}

fn invert(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; sigma.len()];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    inv
}

/// Every permutation of `0..d` in lexicographic order.
pub fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..d).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..d).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..d).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// `γ(a)`: `c_ν = ℓ(ν)` and `c_{−ν} = a_ν − ℓ(ν)`.
pub fn gamma(n: usize, a: &[i64]) -> Result<QuasiconeMatrix, GammaError> {
    let idx = RootIndex::all(n);
    if a.len() != idx.len() {
        return Err(GammaError::Length { expected: idx.len(), found: a.len() });
    }
    if !is_monotone(a) {
        return Err(GammaError::NotMonotone);
    }
    let mut cells = ExtMatrix::filled(n + 1, Fin(0));
    for (r, &g) in idx.iter().zip(a) {
        let l = r.length() as i64;
        cells[(r.a(), r.b())] = Fin(l);
        cells[(r.b(), r.a())] = Fin(g - l);
    }
    Ok(QuasiconeMatrix::new(n, cells, Fin(1)))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GammaError {
    #[error("gap vector must have {expected} components, found {found}")]
    Length { expected: usize, found: usize },
    #[error("gap vector must be monotone non-increasing")]
    NotMonotone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub equal: bool,
    /// Same positive entries, some negative entry strictly smaller.
    pub below_i: bool,
    /// Same gap vector, some negative entry strictly smaller.
    pub below_ii: bool,
}

impl Comparison {
    pub fn below(&self) -> bool {
        self.below_i || self.below_ii
    }
}

/// Relation of `c` to `other` under the three orders on normal quasicones.
pub fn compare(c: &QuasiconeMatrix, other: &QuasiconeMatrix) -> Comparison {
    assert_eq!(c.rank, other.rank, "rank mismatch");
    let idx = RootIndex::all(c.rank);
    let some_negative_smaller = idx.iter().any(|r| c[(r.b(), r.a())] < other[(r.b(), r.a())]);
    let positives_equal = idx.iter().all(|r| c[(r.a(), r.b())] == other[(r.a(), r.b())]);
    Comparison {
        equal: c == other,
        below_i: positives_equal && some_negative_smaller,
        below_ii: some_negative_smaller && c.gap() == other.gap(),
    }
}

/// The subalgebra generated by both: closure of the entrywise minimum.
pub fn lattice_join(c: &QuasiconeMatrix, other: &QuasiconeMatrix) -> QuasiconeMatrix {
    let m = elementwise_min(&c.with_heisenberg_diagonal(), &other.with_heisenberg_diagonal());
    from_closed_diagonal(c.rank, closure_with_report(&m).matrix)
}

/// The intersection: entrywise maximum.
pub fn lattice_meet(c: &QuasiconeMatrix, other: &QuasiconeMatrix) -> QuasiconeMatrix {
    let d = c.dim();
    let cells = ExtMatrix::from_fn(d, |p, q| c.cells[(p, q)].max(other.cells[(p, q)]));
    QuasiconeMatrix::new(c.rank, cells, c.heisenberg.max(other.heisenberg))
}

/// Reads `ω` back as the minimum of a closed matrix's diagonal.
pub(crate) fn from_closed_diagonal(rank: usize, m: ExtMatrix) -> QuasiconeMatrix {
    let omega = (0..=rank).map(|i| m[(i, i)]).min().unwrap_or(PosInf);
    QuasiconeMatrix::new(rank, m, omega)
}

/// Dense finite copy used by canonicalization and enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
struct FiniteMat {
    d: usize,
    v: Vec<i64>,
}

impl FiniteMat {
    fn from_matrix(m: &QuasiconeMatrix) -> Option<Self> {
        let d = m.dim();
        let mut v = vec![0; d * d];
        for (p, q) in m.off_diagonal() {
            v[p * d + q] = m[(p, q)].finite()?;
        }
        Some(FiniteMat { d, v })
    }

    fn to_matrix(&self, heisenberg: ExtInt) -> QuasiconeMatrix {
        let cells = ExtMatrix::from_fn(self.d, |p, q| Fin(self.v[p * self.d + q]));
        QuasiconeMatrix::new(self.d - 1, cells, heisenberg)
    }

    fn gap_into(&self, pos: &[(usize, usize)], out: &mut Vec<i64>) {
        out.clear();
        out.extend(pos.iter().map(|&(a, b)| self.v[a * self.d + b] + self.v[b * self.d + a]));
    }

    fn canonical(&self) -> Option<FiniteMat> {
        let d = self.d;
        let pos: Vec<(usize, usize)> = RootIndex::all(d - 1).iter().map(|r| (r.a(), r.b())).collect();
        let mut best: Option<(Vec<i64>, FiniteMat)> = None;
        let mut cand = FiniteMat { d, v: vec![0; d * d] };
        let mut g = Vec::with_capacity(pos.len());
        let mut u = vec![0i64; d];
        for sigma in permutations(d) {
            let inv = invert(&sigma);
            for p in 0..d {
                for q in 0..d {
                    cand.v[p * d + q] = if p == q { 0 } else { self.v[inv[p] * d + inv[q]] };
                }
            }
            cand.gap_into(&pos, &mut g);
            if !is_monotone(&g) {
                continue;
            }
            for p in 0..d - 1 {
                u[p + 1] = u[p] + cand.v[p * d + p + 1] - 1;
            }
            for p in 0..d {
                for q in 0..d {
                    if p != q {
                        cand.v[p * d + q] += u[p] - u[q];
                    }
                }
            }
            let better = match &best {
                None => true,
                Some((bg, bm)) => match g.cmp(bg) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => cand.v < bm.v,
                },
            };
            if better {
                best = Some((g.clone(), cand.clone()));
            }
        }
        best.map(|(_, m)| m)
    }
}

/// Gap vectors over `I_n`, monotone non-increasing with components in `[1, bound]`,
/// in lexicographic order.
fn monotone_gaps(len: usize, bound: i64) -> Vec<Vec<i64>> {
    fn rec(len: usize, top: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if acc.len() == len {
            out.push(acc.clone());
            return;
        }
        for g in 1..=top {
            acc.push(g);
            rec(len, g, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, bound, &mut Vec::new(), &mut out);
    out
}

/// All normal matrices (superdiagonal 1, triangle inequalities, monotone gaps in
/// `[1, bound]`) with a given gap vector.
fn fill_gap(n: usize, gap: &[i64], out: &mut Vec<FiniteMat>) {
    let d = n + 1;
    let mut g = vec![0i64; d * d];
    for (r, &v) in RootIndex::all(n).iter().zip(gap) {
        g[r.a() * d + r.b()] = v;
    }
    let mut order: Vec<(usize, usize)> =
        (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))).collect();
    order.sort_by_key(|&(a, b)| (b - a, a));
    let mut c: Vec<Option<i64>> = vec![None; d * d];
    for i in 0..d {
        c[i * d + i] = Some(0);
    }

    fn consistent(c: &[Option<i64>], d: usize, a: usize, b: usize) -> bool {
        let at = |p: usize, q: usize| c[p * d + q];
        for (p, q) in [(a, b), (b, a)] {
            let pq = at(p, q).unwrap();
            for r in (0..d).filter(|&r| r != p && r != q) {
                if let (Some(x), Some(y)) = (at(p, r), at(r, q)) {
                    if pq > x + y {
                        return false;
                    }
                }
                if let (Some(x), Some(y)) = (at(p, r), at(q, r)) {
                    if x > pq + y {
                        return false;
                    }
                }
                if let (Some(x), Some(y)) = (at(r, q), at(r, p)) {
                    if x > y + pq {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn rec(
        i: usize,
        order: &[(usize, usize)],
        g: &[i64],
        d: usize,
        c: &mut Vec<Option<i64>>,
        out: &mut Vec<FiniteMat>,
    ) {
        if i == order.len() {
            out.push(FiniteMat { d, v: c.iter().map(|x| x.unwrap()).collect() });
            return;
        }
        let (a, b) = order[i];
        let total = g[a * d + b];
        let at = |c: &Vec<Option<i64>>, p: usize, q: usize| c[p * d + q].unwrap();
        let (lo, hi) = if b == a + 1 {
            (1, 1)
        } else {
            let hi = (a + 1..b).map(|m| at(c, a, m) + at(c, m, b)).min().unwrap();
            let lo = (a + 1..b).map(|m| total - (at(c, b, m) + at(c, m, a))).max().unwrap();
            (lo, hi)
        };
        for v in lo..=hi {
            c[a * d + b] = Some(v);
            c[b * d + a] = Some(total - v);
            if consistent(c, d, a, b) {
                rec(i + 1, order, g, d, c, out);
            }
        }
        c[a * d + b] = None;
        c[b * d + a] = None;
    }

    rec(0, &order, &g, d, &mut c, out);
}

/// Every normal matrix in the enumeration domain, one per (gap, entries) combination.
pub fn enumerate_raw(n: usize, bound: i64) -> Vec<QuasiconeMatrix> {
    let gaps = monotone_gaps(n * (n + 1) / 2, bound);
    gaps.par_iter()
        .flat_map_iter(|g| {
            let mut out = Vec::new();
            fill_gap(n, g, &mut out);
            out.into_iter().map(|f| f.to_matrix(Fin(1)))
        })
        .collect()
}

/// One canonical representative per orbit, sorted by [`QuasiconeMatrix::canonical_key`].
pub fn enumerate_normal(n: usize, bound: i64) -> Vec<QuasiconeMatrix> {
    let gaps = monotone_gaps(n * (n + 1) / 2, bound);
    let mut out: Vec<QuasiconeMatrix> = gaps
        .par_iter()
        .flat_map_iter(|g| {
            let mut raw = Vec::new();
            fill_gap(n, g, &mut raw);
            raw.into_iter()
                .filter(|f| f.canonical().as_ref() == Some(f))
                .map(|f| f.to_matrix(Fin(1)))
        })
        .collect();
    out.sort_by_cached_key(|m| m.canonical_key());
    out
}

/// `n + 2`: past this `c_{1,0}` the shortest strategy is guaranteed to succeed.
pub fn default_bound(n: usize) -> i64 {
    n as i64 + 2
}

#[cfg(test)]
mod tests {
    use super::*;

    const CASE1: &str = "* 1 1 0 -1 / 2 * 1 1 0 / 1 2 * 1 0 / 2 1 1 * 1 / 2 2 2 1 *";

    #[test]
    fn case1_gap_and_defect() {
        let c = QuasiconeMatrix::parse_rows(CASE1).unwrap();
        let g: Vec<i64> = c.gap().iter().map(|v| v.finite().unwrap()).collect();
        assert_eq!(g, vec![3, 3, 2, 2, 2, 2, 2, 2, 2, 1]);
        assert_eq!(c.defect(), Fin(2));
        assert!(c.is_valid());
        assert!(c.is_normal());
        assert_eq!(c.normalize().unwrap(), c);
    }

    #[test]
    fn json_round_trip() {
        let c = QuasiconeMatrix::parse_rows("* 1 inf / -inf * 1 / 0 2 *").unwrap();
        let s = c.to_json();
        assert_eq!(
            s,
            r#"{"rank":2,"entries":[null,1,"inf","-inf",null,1,0,2,null],"heisenberg":1}"#
        );
        let back = QuasiconeMatrix::from_json(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), s);
        assert!(QuasiconeMatrix::from_json(r#"{"rank":1,"entries":[0,1,0,null],"heisenberg":1}"#).is_err());
        assert!(QuasiconeMatrix::from_json(r#"{"rank":1,"entries":[null,1,null],"heisenberg":1}"#).is_err());
    }

    #[test]
    fn rows_round_trip() {
        let c = QuasiconeMatrix::parse_rows(CASE1).unwrap();
        assert_eq!(c.to_rows_string(), CASE1);
        let z = QuasiconeMatrix::parse_rows("Z 1 / 0 *").unwrap();
        assert_eq!(z.heisenberg(), NegInf);
    }

    #[test]
    fn gamma_examples() {
        let bottom = gamma(2, &[0, 0, 0]).unwrap();
        for (p, q) in bottom.off_diagonal() {
            assert_eq!(bottom[(p, q)], Fin(q as i64 - p as i64));
        }
        assert!(bottom.validate().contains(&Violation::Pair { p: 0, q: 1 }));
        // constant a = d+1 gives negatives d − ℓ(ν) + 1
        let d = 3;
        let up = gamma(3, &[d + 1; 6]).unwrap();
        for r in RootIndex::all(3) {
            assert_eq!(up[(r.b(), r.a())], Fin(d - r.length() as i64 + 1));
        }
        assert_eq!(gamma(2, &[1, 2, 1]), Err(GammaError::NotMonotone));
        assert!(gamma(2, &[1, 1]).is_err());
    }

    #[test]
    fn permutations_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(1), vec![vec![0]]);
    }

    #[test]
    fn small_enumeration() {
        let e = enumerate_normal(1, 2);
        let pairs: Vec<(ExtInt, ExtInt)> = e.iter().map(|m| (m[(0, 1)], m[(1, 0)])).collect();
        assert_eq!(pairs, vec![(Fin(1), Fin(0)), (Fin(1), Fin(1))]);
    }

    #[test]
    fn normalize_rejects_infinite() {
        let c = QuasiconeMatrix::parse_rows("* 1 inf / 0 * 1 / 0 0 *").unwrap();
        assert_eq!(c.normalize(), Err(NormalizeError::Infinite));
    }
}
