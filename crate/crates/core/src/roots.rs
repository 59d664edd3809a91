//! Affine type-A root arithmetic and the weight classifiers.
//!
//! Classical roots use exponential indices: `α_i ↦ 2^{i−1}`, so the positive
//! root `α_{a+1}+…+α_b` has index `2^b − 2^a` and sits at matrix position `(a,b)`.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct RootIndex(u32);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("{0} is not a contiguous block of bits")]
    NotContiguous(i64),
    #[error("index {nu} exceeds rank {rank}")]
    OutOfRank { nu: i64, rank: usize },
}

impl RootIndex {
    pub fn new(nu: u32) -> Result<Self, RootError> {
        if nu == 0 {
            return Err(RootError::NotContiguous(0));
        }
        let shifted = nu >> nu.trailing_zeros();
        if shifted & (shifted + 1) != 0 {
            return Err(RootError::NotContiguous(nu as i64));
        }
        Ok(RootIndex(nu))
    }

    pub fn from_endpoints(a: usize, b: usize) -> Self {
        assert!(a < b && b < 32, "bad endpoints ({a},{b})");
        RootIndex((1u32 << b) - (1u32 << a))
    }

    /// `α_i`, for `1 ≤ i`.
    pub fn simple(i: usize) -> Self {
        Self::from_endpoints(i - 1, i)
    }

    /// `θ = α_1+…+α_n`.
    pub fn highest(n: usize) -> Self {
        Self::from_endpoints(0, n)
    }

    pub fn nu(self) -> u32 {
        self.0
    }

    pub fn a(self) -> usize {
        self.0.trailing_zeros() as usize
    }

    pub fn b(self) -> usize {
        (u32::BITS - self.0.leading_zeros()) as usize
    }

    pub fn length(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn fits(self, n: usize) -> bool {
        self.b() <= n
    }

    /// `I_n` in increasing order.
    pub fn all(n: usize) -> Vec<RootIndex> {
        let mut v: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..=n).map(move |b| Self::from_endpoints(a, b)))
            .collect();
        v.sort();
        v
    }
}

impl TryFrom<u32> for RootIndex {
    type Error = RootError;
    fn try_from(v: u32) -> Result<Self, RootError> {
        RootIndex::new(v)
    }
}

impl From<RootIndex> for u32 {
    fn from(r: RootIndex) -> u32 {
        r.0
    }
}

impl fmt::Display for RootIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A classical root `±α_ν`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedRoot {
    pub index: RootIndex,
    pub positive: bool,
}

impl SignedRoot {
    pub fn pos(index: RootIndex) -> Self {
        SignedRoot { index, positive: true }
    }

    pub fn neg(index: RootIndex) -> Self {
        SignedRoot { index, positive: false }
    }

    /// From a signed exponential index, e.g. `-3` for `−α_1−α_2`.
    pub fn from_signed(v: i64) -> Result<Self, RootError> {
        let mag = u32::try_from(v.unsigned_abs()).map_err(|_| RootError::NotContiguous(v))?;
        let index = RootIndex::new(mag).map_err(|_| RootError::NotContiguous(v))?;
        Ok(SignedRoot { index, positive: v > 0 })
    }

    pub fn signed(self) -> i64 {
        let v = self.index.nu() as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn negate(self) -> Self {
        SignedRoot { index: self.index, positive: !self.positive }
    }

    /// Matrix position: `(a,b)` for the positive root, `(b,a)` for its negative.
    pub fn position(self) -> (usize, usize) {
        let (a, b) = (self.index.a(), self.index.b());
        if self.positive {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn from_position(p: usize, q: usize) -> Self {
        if p < q {
            Self::pos(RootIndex::from_endpoints(p, q))
        } else {
            Self::neg(RootIndex::from_endpoints(q, p))
        }
    }

    /// Coordinates on `α_1..α_n`.
    pub fn coords(self, n: usize) -> Vec<i64> {
        let s = if self.positive { 1 } else { -1 };
        (0..n)
            .map(|i| if (self.index.a()..self.index.b()).contains(&i) { s } else { 0 })
            .collect()
    }

    /// Inverse of [`coords`](Self::coords): `Some(None)` for zero, `None` if not a root.
    pub fn from_coords(v: &[i64]) -> Option<Option<SignedRoot>> {
        let nz: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0).collect();
        let (Some(&first), Some(&last)) = (nz.first(), nz.last()) else {
            return Some(None);
        };
        let s = v[first];
        if s.abs() != 1 || last - first + 1 != nz.len() || nz.iter().any(|&i| v[i] != s) {
            return None;
        }
        let r = RootIndex::from_endpoints(first, last + 1);
        Some(Some(SignedRoot { index: r, positive: s > 0 }))
    }

    /// All `±α_ν`, ordered by index then sign (positive first).
    pub fn all(n: usize) -> Vec<SignedRoot> {
        RootIndex::all(n)
            .into_iter()
            .flat_map(|r| [Self::pos(r), Self::neg(r)])
            .collect()
    }
}

impl fmt::Display for SignedRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.positive { '+' } else { '-' }, self.index)
    }
}

/// `classical + kδ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineRoot {
    pub classical: Option<SignedRoot>,
    pub delta: i64,
}

impl AffineRoot {
    pub fn real(classical: SignedRoot, delta: i64) -> Self {
        AffineRoot { classical: Some(classical), delta }
    }

    pub fn imaginary(delta: i64) -> Self {
        AffineRoot { classical: None, delta }
    }

    pub fn is_root(self) -> bool {
        self.classical.is_some() || self.delta != 0
    }

    pub fn is_real(self) -> bool {
        self.classical.is_some()
    }

    pub fn negate(self) -> Self {
        AffineRoot { classical: self.classical.map(SignedRoot::negate), delta: -self.delta }
    }

    /// Coordinates on `α_0..α_n`, using `δ = α_0+…+α_n`.
    pub fn simple_coords(self, n: usize) -> Vec<i64> {
        let cl = self.classical.map_or(vec![0; n], |r| r.coords(n));
        std::iter::once(self.delta)
            .chain(cl.into_iter().map(|c| c + self.delta))
            .collect()
    }

    pub fn try_add(self, other: AffineRoot, n: usize) -> Option<AffineRoot> {
        let a = self.classical.map_or(vec![0; n], |r| r.coords(n));
        let b = other.classical.map_or(vec![0; n], |r| r.coords(n));
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let classical = SignedRoot::from_coords(&sum)?;
        let r = AffineRoot { classical, delta: self.delta + other.delta };
        r.is_root().then_some(r)
    }

    /// Real roots with `|δ-coefficient| ≤ k`, then the imaginary ones.
    pub fn window(n: usize, k: i64) -> Vec<AffineRoot> {
        let mut v: Vec<AffineRoot> = SignedRoot::all(n)
            .into_iter()
            .flat_map(|r| (-k..=k).map(move |d| AffineRoot::real(r, d)))
            .collect();
        v.extend((-k..=k).filter(|&d| d != 0).map(AffineRoot::imaginary));
        v
    }
}

/// A weight in coroot coordinates `λ(α̌_0),…,λ(α̌_n)` plus `λ(d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub coroot_values: Vec<i64>,
    pub d_value: i64,
}

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight { coroot_values: vec![0; n + 1], d_value: 0 }
    }

    pub fn new(coroot_values: Vec<i64>) -> Self {
        Weight { coroot_values, d_value: 0 }
    }

    pub fn rank(&self) -> usize {
        self.coroot_values.len() - 1
    }

    /// `λ(c)`; every mark is 1 in type A.
    pub fn central_charge(&self) -> i64 {
        self.coroot_values.iter().sum()
    }

    /// `±Σ_{i∈X} ω_{α_i}`, with `X ⊆ {0..n}`.
    pub fn lambda_set(n: usize, x: &[usize], negative: bool) -> Self {
        let mut w = Self::zero(n);
        for &i in x {
            w.coroot_values[i] = if negative { -1 } else { 1 };
        }
        w
    }
}

/// Symmetric form on simple roots: the affine `A_n` Cartan matrix.
fn cartan(n: usize, i: usize, j: usize) -> i64 {
    if i == j {
        return 2;
    }
    let d = n + 1;
    -(((i + 1) % d == j) as i64) - (((j + 1) % d == i) as i64)
}

pub fn pairing(lambda: &Weight, beta: AffineRoot) -> i64 {
    let n = lambda.rank();
    let cl = beta.classical.map_or(vec![0; n], |r| r.coords(n));
    cl.iter().zip(&lambda.coroot_values[1..]).map(|(m, v)| m * v).sum::<i64>()
        + beta.delta * lambda.central_charge()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Plus,
    Zero,
    Minus,
}

pub fn classify(lambda: &Weight, beta: AffineRoot) -> Class {
    match pairing(lambda, beta).signum() {
        1 => Class::Plus,
        0 => Class::Zero,
        _ => Class::Minus,
    }
}

pub fn positive_member(l1: &Weight, l2: &Weight, beta: AffineRoot) -> bool {
    match classify(l1, beta) {
        Class::Plus => true,
        Class::Zero => classify(l2, beta) == Class::Plus,
        Class::Minus => false,
    }
}

pub fn parabolic_member(l1: &Weight, l2: &Weight, l3: &Weight, beta: AffineRoot) -> bool {
    match classify(l1, beta) {
        Class::Plus => true,
        Class::Zero => classify(l2, beta) == Class::Plus || classify(l3, beta) == Class::Plus,
        Class::Minus => false,
    }
}

/// `φ_X` for `X ⊆ {1..n}`.
pub fn phi_x(n: usize, x: &[usize]) -> Weight {
    assert!(x.iter().all(|&i| (1..=n).contains(&i)), "X must lie in 1..=n");
    let rest: Vec<usize> = (1..=n).filter(|i| !x.contains(i)).collect();
    if rest.is_empty() {
        return Weight::lambda_set(n, x, false);
    }
    let mut w = Weight::lambda_set(n, &rest, false);
    w.coroot_values[0] = -(rest.len() as i64);
    w
}

fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0..1u32 << items.len())
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect())
        .collect()
}

/// A labelled weight triple for [`parabolic_member`].
#[derive(Clone, Debug)]
pub struct ParabolicTriple {
    pub name: String,
    pub weights: [Weight; 3],
}

/// `P(X,−S)` for `S ⊆ X ⊆ Π°`, then `P_S(Π°)` and `P_S` for `S ⊆ Π°`.
/// `φ_{−Π°}` is read as `−φ_{Π°}`.
pub fn published_parabolic_triples(n: usize) -> Vec<ParabolicTriple> {
    let full: Vec<usize> = (1..=n).collect();
    let phi_full = phi_x(n, &full);
    let neg_full = Weight {
        coroot_values: phi_full.coroot_values.iter().map(|v| -v).collect(),
        d_value: -phi_full.d_value,
    };
    let mut out = Vec::new();
    for x in subsets(&full) {
        for s in subsets(&x) {
            out.push(ParabolicTriple {
                name: format!("P(X={x:?}, -S={s:?})"),
                weights: [phi_x(n, &x), Weight::lambda_set(n, &s, true), phi_full.clone()],
            });
        }
    }
    for s in subsets(&full) {
        out.push(ParabolicTriple {
            name: format!("P_{s:?}(full)"),
            weights: [phi_full.clone(), Weight::lambda_set(n, &s, true), Weight::lambda_set(n, &[0], true)],
        });
        let rest: Vec<usize> = full.iter().copied().filter(|i| !s.contains(i)).collect();
        out.push(ParabolicTriple {
            name: format!("P_{s:?}"),
            weights: [Weight::lambda_set(n, &rest, false), phi_full.clone(), neg_full.clone()],
        });
    }
    out
}

/// `t_α(λ) = λ + λ(c)α − ((λ,α) + ½(α,α)λ(c))δ` for a classical `α` given on `α_1..α_n`.
pub fn translate(alpha: &[i64], lambda: &Weight) -> Weight {
    let n = lambda.rank();
    assert_eq!(alpha.len(), n, "alpha must have n coordinates");
    let c = lambda.central_charge();
    let full: Vec<i64> = std::iter::once(0).chain(alpha.iter().copied()).collect();
    let form = |i: usize| (0..=n).map(|j| full[j] * cartan(n, i, j)).sum::<i64>();
    let coroot_values = (0..=n).map(|i| lambda.coroot_values[i] + c * form(i)).collect();
    let la: i64 = (1..=n).map(|i| alpha[i - 1] * lambda.coroot_values[i]).sum();
    let aa: i64 = (1..=n).map(|i| alpha[i - 1] * form(i)).sum();
    Weight { coroot_values, d_value: lambda.d_value - (la + aa / 2 * c) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for n in 1..6 {
            let all = RootIndex::all(n);
            assert_eq!(all.len(), n * (n + 1) / 2);
            for r in all {
                assert_eq!(RootIndex::from_endpoints(r.a(), r.b()), r);
                assert_eq!(r.length(), r.b() - r.a());
                for s in [SignedRoot::pos(r), SignedRoot::neg(r)] {
                    let (p, q) = s.position();
                    assert_eq!(SignedRoot::from_position(p, q), s);
                    assert_eq!(SignedRoot::from_coords(&s.coords(n)), Some(Some(s)));
                }
            }
        }
        assert_eq!(RootIndex::all(4).iter().map(|r| r.nu()).collect::<Vec<_>>(),
                   vec![1, 2, 3, 4, 6, 7, 8, 12, 14, 15]);
        assert!(RootIndex::new(5).is_err());
        assert!(RootIndex::new(0).is_err());
    }

    #[test]
    fn non_roots_from_coords() {
        assert_eq!(SignedRoot::from_coords(&[2, 0]), None);
        assert_eq!(SignedRoot::from_coords(&[1, 0, 1]), None);
        assert_eq!(SignedRoot::from_coords(&[1, -1]), None);
        assert_eq!(SignedRoot::from_coords(&[0, 0]), Some(None));
    }

    #[test]
    fn pairing_examples() {
        let a1 = AffineRoot::real(SignedRoot::pos(RootIndex::simple(1)), 0);
        assert_eq!(pairing(&Weight::zero(3), a1), 0);
        let mut w = Weight::zero(3);
        w.coroot_values[1] = 1;
        assert_eq!(pairing(&w, a1), 1);
        for n in 1..6 {
            let w = Weight::new((0..=n).map(|i| (i > 0) as i64).collect());
            assert_eq!(pairing(&w, AffineRoot::imaginary(1)), n as i64);
            // δ expanded as α_0+…+α_n in simple-root coordinates
            let by_hand: i64 = AffineRoot::imaginary(1)
                .simple_coords(n)
                .iter()
                .zip(&w.coroot_values)
                .map(|(m, v)| m * v)
                .sum();
            assert_eq!(by_hand, n as i64);
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_x(2, &[]).coroot_values, vec![-2, 1, 1]);
        assert_eq!(phi_x(3, &[1, 2, 3]).coroot_values, vec![0, 1, 1, 1]);
        let w = phi_x(4, &[2, 3]);
        for j in [2, 3] {
            let aj = AffineRoot::real(SignedRoot::pos(RootIndex::simple(j)), 0);
            assert_eq!(pairing(&w, aj), 0);
        }
        assert_eq!(classify(&phi_x(2, &[2]), AffineRoot::real(SignedRoot::pos(RootIndex::simple(1)), 0)),
                   Class::Plus);
    }

    #[test]
    fn translation_group() {
        let l = Weight { coroot_values: vec![0, 1, 0], d_value: 0 };
        assert_eq!(l.central_charge(), 1);
        let a = [1, 0];
        let back = translate(&[-1, 0], &translate(&a, &l));
        assert_eq!(back, l);
        assert_eq!(translate(&a, &l).central_charge(), 1);
        // λ(c) = 0 and (λ,α) = 0
        let flat = Weight { coroot_values: vec![1, 0, -1], d_value: 3 };
        assert_eq!(translate(&a, &flat), flat);
    }
}
