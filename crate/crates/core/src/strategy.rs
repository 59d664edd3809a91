//! Root-step operators on annihilating quasicones and the strategy families built from them.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::ext::{ExtInt, Fin, NegInf, PosInf};
use crate::quasicone::{from_closed_diagonal, QuasiconeMatrix};
use crate::roots::{AffineRoot, RootIndex, SignedRoot};
use crate::tropical::closure_with_report;

/// How the δ-exponent of a step is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    /// `entry − 1`.
    Auto,
    /// `min(entry − 1, −Σ earlier exponents of the strategy)`, closing a circular
    /// strategy without pushing `ω` below 1.
    Balanced,
    Fixed(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StrategyStep {
    pub root: SignedRoot,
    pub exponent: Exponent,
}

impl StrategyStep {
    pub fn auto(root: SignedRoot) -> Self {
        StrategyStep { root, exponent: Exponent::Auto }
    }

    pub fn signed(v: i64) -> Self {
        Self::auto(SignedRoot::from_signed(v).expect("not a root index"))
    }
}

/// Steps in application order: the first step acts first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Strategy {
    pub steps: Vec<StrategyStep>,
}

impl Strategy {
    pub fn new(steps: Vec<StrategyStep>) -> Self {
        Strategy { steps }
    }

    /// AUTO steps from signed indices, e.g. `[1, 2, -3]`.
    pub fn from_signed(v: &[i64]) -> Self {
        Strategy::new(v.iter().map(|&x| StrategyStep::signed(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn concat(&self, other: &Strategy) -> Strategy {
        Strategy::new(self.steps.iter().chain(&other.steps).copied().collect())
    }

    /// Index of the first step whose partial sum of classical parts is neither a root nor zero.
    pub fn path_violation(&self, n: usize) -> Option<usize> {
        let mut acc = vec![0i64; n];
        for (i, s) in self.steps.iter().enumerate() {
            if !s.root.index.fits(n) {
                return Some(i);
            }
            for (x, y) in acc.iter_mut().zip(s.root.coords(n)) {
                *x += y;
            }
            if SignedRoot::from_coords(&acc).is_none() {
                return Some(i);
            }
        }
        None
    }

    pub fn is_circular(&self, n: usize) -> bool {
        let mut acc = vec![0i64; n];
        for s in &self.steps {
            for (x, y) in acc.iter_mut().zip(s.root.coords(n)) {
                *x += y;
            }
        }
        acc.iter().all(|&x| x == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyParseError {
    #[error("empty step at position {0}")]
    Empty(usize),
    #[error("step {index}: {token:?} is not a signed root index")]
    Root { index: usize, token: String },
    #[error("step {index}: bad exponent {token:?}")]
    Exponent { index: usize, token: String },
}

impl FromStr for Strategy {
    type Err = StrategyParseError;

    /// `"+1, +2, -3"` or `"+1, -1@0"`; `@auto` and `@bal` name the exponent policies.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Ok(Strategy::default());
        }
        let mut steps = Vec::new();
        for (index, tok) in compact.split(',').enumerate() {
            if tok.is_empty() {
                return Err(StrategyParseError::Empty(index));
            }
            let (root_tok, exp_tok) = match tok.split_once('@') {
                Some((r, e)) => (r, Some(e)),
                None => (tok, None),
            };
            let root = root_tok
                .parse::<i64>()
                .ok()
                .and_then(|v| SignedRoot::from_signed(v).ok())
                .ok_or_else(|| StrategyParseError::Root { index, token: root_tok.to_string() })?;
            let exponent = match exp_tok {
                None | Some("auto") => Exponent::Auto,
                Some("bal") => Exponent::Balanced,
                Some(e) => Exponent::Fixed(
                    e.parse()
                        .map_err(|_| StrategyParseError::Exponent { index, token: e.to_string() })?,
                ),
            };
            steps.push(StrategyStep { root, exponent });
        }
        Ok(Strategy { steps })
    }
}

impl fmt::Display for StrategyStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)?;
        match self.exponent {
            Exponent::Auto => Ok(()),
            Exponent::Balanced => f.write_str("@bal"),
            Exponent::Fixed(k) => write!(f, "@{k}"),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(", "))
    }
}

impl Serialize for Strategy {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Which update runs after the preimage pass and hole generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum StepRule {
    /// Tropical closure with `ω` on the diagonal.
    #[default]
    Closure,
    /// No transitive closure and no pair-sum feedback into `ω`. The printed A₄
    /// transforms were computed this way; kept for replay only.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EngineConfig {
    pub rule: StepRule,
    /// δ-coefficient of the start offset, `−ε`.
    pub start_delta: i64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { rule: StepRule::Closure, start_delta: -1 }
    }
}

/// `ϑ`: classical coordinates on `α_1..α_n` plus a δ-coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Offset {
    pub classical: Vec<i64>,
    pub delta: i64,
}

impl Offset {
    pub fn start(n: usize, delta: i64) -> Self {
        Offset { classical: vec![0; n], delta }
    }

    pub fn as_root(&self) -> Option<AffineRoot> {
        let classical = SignedRoot::from_coords(&self.classical)?;
        Some(AffineRoot { classical, delta: self.delta })
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match SignedRoot::from_coords(&self.classical) {
            Some(Some(r)) => write!(f, "{r}{:+}d", self.delta),
            Some(None) => write!(f, "{}d", self.delta),
            None => write!(f, "{:?}{:+}d", self.classical, self.delta),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ResolvedStep {
    #[serde(serialize_with = "ser_display")]
    pub root: SignedRoot,
    pub exponent: i64,
}

fn ser_display<S: Serializer, T: fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StrategyState {
    pub matrix: QuasiconeMatrix,
    pub offset: Offset,
    pub trace: Vec<ResolvedStep>,
}

impl StrategyState {
    pub fn start(matrix: QuasiconeMatrix, config: &EngineConfig) -> Self {
        let n = matrix.rank();
        StrategyState { matrix, offset: Offset::start(n, config.start_delta), trace: Vec::new() }
    }

    pub fn resolved_strategy(&self) -> Strategy {
        Strategy::new(
            self.trace
                .iter()
                .map(|r| StrategyStep { root: r.root, exponent: Exponent::Fixed(r.exponent) })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("operator {root} at exponent {k} already annihilates (entry {entry})")]
    Annihilates { root: SignedRoot, k: i64, entry: ExtInt },
    #[error("entry for {0} is empty, so an explicit exponent is required")]
    AutoUndefined(SignedRoot),
    #[error("partial sum after {0} is not a root")]
    InvalidPath(SignedRoot),
    #[error("resulting Heisenberg exponent {} is below 1", .0.matrix.heisenberg())]
    Degenerate(Box<StrategyState>),
}

impl StepError {
    pub fn kind(&self) -> &'static str {
        match self {
            StepError::Annihilates { .. } | StepError::AutoUndefined(_) => "StepAnnihilates",
            StepError::InvalidPath(_) => "InvalidPath",
            StepError::Degenerate(_) => "DegenerateState",
        }
    }
}

/// `entry − 1`.
pub fn auto_exponent(state: &StrategyState, root: SignedRoot) -> Result<i64, StepError> {
    match state.matrix[root.position()] {
        Fin(v) => Ok(v - 1),
        NegInf => Err(StepError::Annihilates { root, k: i64::MIN, entry: NegInf }),
        PosInf => Err(StepError::AutoUndefined(root)),
    }
}

pub fn apply_step(
    state: &StrategyState,
    root: SignedRoot,
    k: i64,
    config: &EngineConfig,
) -> Result<StrategyState, StepError> {
    let c = &state.matrix;
    let n = c.rank();
    if !root.index.fits(n) {
        return Err(StepError::InvalidPath(root));
    }
    let (a, b) = root.position();
    let entry = c[(a, b)];
    if entry <= Fin(k) {
        return Err(StepError::Annihilates { root, k, entry });
    }
    let mut classical = state.offset.classical.clone();
    for (x, y) in classical.iter_mut().zip(root.coords(n)) {
        *x += y;
    }
    let Some(target) = SignedRoot::from_coords(&classical) else {
        return Err(StepError::InvalidPath(root));
    };

    // preimage pass
    let omega = c.heisenberg();
    let mut next = c.clone();
    for (p, q) in c.off_diagonal() {
        let lifted = if q == a && p != b {
            c[(p, b)] - k
        } else if p == b && q != a {
            c[(a, q)] - k
        } else if (p, q) == (b, a) {
            omega - k
        } else {
            continue;
        };
        next[(p, q)] = c[(p, q)].max(lifted);
    }

    // hole generator
    let delta = state.offset.delta + k;
    let hole = Fin(-delta);
    match target {
        Some(t) => {
            let pos = t.negate().position();
            next[pos] = next[pos].min(hole);
        }
        None => next.set_heisenberg(omega.min(hole)),
    }

    let matrix = match config.rule {
        StepRule::Closure => from_closed_diagonal(n, closure_with_report(&next.with_heisenberg_diagonal()).matrix),
        StepRule::Literal => next,
    };
    let mut trace = state.trace.clone();
    trace.push(ResolvedStep { root, exponent: k });
    let out = StrategyState { matrix, offset: Offset { classical, delta }, trace };
    if out.matrix.heisenberg() < Fin(1) {
        return Err(StepError::Degenerate(Box::new(out)));
    }
    Ok(out)
}

/// A failed strategy application, with the index of the offending step.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("step {index}: {error}")]
pub struct StrategyError {
    pub index: usize,
    pub error: StepError,
}

pub fn resolve_exponent(
    state: &StrategyState,
    step: StrategyStep,
    sum_so_far: i64,
) -> Result<i64, StepError> {
    match step.exponent {
        Exponent::Fixed(k) => Ok(k),
        Exponent::Auto => auto_exponent(state, step.root),
        Exponent::Balanced => Ok(auto_exponent(state, step.root)?.min(-sum_so_far)),
    }
}

pub fn apply_strategy(
    state: &StrategyState,
    s: &Strategy,
    config: &EngineConfig,
) -> Result<StrategyState, StrategyError> {
    let mut cur = state.clone();
    let mut sum = 0;
    for (index, step) in s.steps.iter().enumerate() {
        let wrap = |error| StrategyError { index, error };
        let k = resolve_exponent(&cur, *step, sum).map_err(wrap)?;
        cur = apply_step(&cur, step.root, k, config).map_err(wrap)?;
        sum += k;
    }
    Ok(cur)
}

/// Defect dropped, or every gap component lies in `{1, 2}`.
pub fn succeeded(input: &QuasiconeMatrix, output: &StrategyState) -> bool {
    output.matrix.defect() < input.defect() || output.matrix.is_gvm_complete()
}

/// `e_{−α_1} ∘ e_{α_1}` with AUTO exponents; the start offset fixes `ε`.
pub fn shortest() -> Strategy {
    Strategy::from_signed(&[1, -1])
}

/// The shortest strategy with the exponents spelled out for a given `ε`.
pub fn shortest_for(c: &QuasiconeMatrix, epsilon: i64) -> Strategy {
    let hat = c[(1, 0)].min(Fin(epsilon));
    let k = hat.finite().expect("c_{1,0} must be finite") - 1;
    let a1 = SignedRoot::pos(RootIndex::simple(1));
    Strategy::new(vec![
        StrategyStep { root: a1, exponent: Exponent::Fixed(0) },
        StrategyStep { root: a1.negate(), exponent: Exponent::Fixed(k) },
    ])
}

/// Raise through `α_1, …, α_n`, then lower `−θ` with a balanced exponent.
pub fn shortest_long(n: usize) -> Strategy {
    let mut steps: Vec<StrategyStep> =
        (1..=n).map(|i| StrategyStep::auto(SignedRoot::pos(RootIndex::simple(i)))).collect();
    steps.push(StrategyStep {
        root: SignedRoot::neg(RootIndex::highest(n)),
        exponent: Exponent::Balanced,
    });
    Strategy::new(steps)
}

/// Compositions of `0..m` into contiguous intervals, as root indices in increasing order.
fn interval_partitions(m: usize) -> Vec<Vec<RootIndex>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << (m - 1)) {
        let mut parts = Vec::new();
        let mut start = 0;
        for cut in 1..m {
            if mask & (1 << (cut - 1)) != 0 {
                parts.push(RootIndex::from_endpoints(start, cut));
                start = cut;
            }
        }
        parts.push(RootIndex::from_endpoints(start, m));
        out.push(parts);
    }
    out.sort_by_key(|p| (p.len(), p.iter().map(|r| r.b()).collect::<Vec<_>>()));
    out
}

/// For each `m ≤ n`: raise `α_1..α_m`, then lower by a monotone partition of `θ_m`.
pub fn simple_basic_set(n: usize) -> Vec<Strategy> {
    let mut out = Vec::new();
    for m in 1..=n {
        let raise: Vec<StrategyStep> =
            (1..=m).map(|i| StrategyStep::auto(SignedRoot::pos(RootIndex::simple(i)))).collect();
        for parts in interval_partitions(m) {
            let lower = |order: &mut dyn Iterator<Item = &RootIndex>| -> Strategy {
                let mut steps = raise.clone();
                steps.extend(order.map(|r| StrategyStep::auto(SignedRoot::neg(*r))));
                Strategy::new(steps)
            };
            out.push(lower(&mut parts.iter()));
            if parts.len() > 1 {
                out.push(lower(&mut parts.iter().rev()));
            }
        }
    }
    out
}

/// Which strategy axiom failed, and where.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategyViolation {
    /// Nonvanishing: the operator already annihilates.
    S1 { index: usize },
    /// The result is not a quasicone.
    S2 { index: usize },
    /// A partial sum is not a root.
    S3 { index: usize },
}

pub fn validate_strategy(
    s: &Strategy,
    c: &QuasiconeMatrix,
    config: &EngineConfig,
) -> Result<(), StrategyViolation> {
    if let Some(index) = s.path_violation(c.rank()) {
        return Err(StrategyViolation::S3 { index });
    }
    match apply_strategy(&StrategyState::start(c.clone(), config), s, config) {
        Ok(_) => Ok(()),
        Err(StrategyError { index, error }) => Err(match error {
            StepError::Annihilates { .. } | StepError::AutoUndefined(_) => StrategyViolation::S1 { index },
            StepError::Degenerate(_) => StrategyViolation::S2 { index },
            StepError::InvalidPath(_) => StrategyViolation::S3 { index },
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CASE1: &str = "* 1 1 0 -1 / 2 * 1 1 0 / 1 2 * 1 0 / 2 1 1 * 1 / 2 2 2 1 *";
    const CASE1_OUT: &str = "* 0 1 0 -1 / 2 * 1 1 0 / 1 0 * 1 0 / 2 1 1 * 1 / 2 2 2 1 *";

    #[test]
    fn grammar_round_trip() {
        let s: Strategy = " +1 , -1@0,+3@bal ,-12@auto".parse().unwrap();
        assert_eq!(s.to_string(), "+1, -1@0, +3@bal, -12");
        assert_eq!(s.to_string().parse::<Strategy>().unwrap(), s);
        assert!("+5".parse::<Strategy>().is_err());
        assert!("+1,,-1".parse::<Strategy>().is_err());
        assert!("+1@x".parse::<Strategy>().is_err());
    }

    #[test]
    fn case1_replay() {
        let c = QuasiconeMatrix::parse_rows(CASE1).unwrap();
        let cfg = EngineConfig::default();
        let s0 = StrategyState::start(c.clone(), &cfg);
        assert_eq!(auto_exponent(&s0, SignedRoot::from_signed(-1).unwrap()), Ok(1));
        let out = apply_strategy(&s0, &Strategy::from_signed(&[-1, 3]), &cfg).unwrap();
        assert_eq!(out.matrix, QuasiconeMatrix::parse_rows(CASE1_OUT).unwrap());
        assert_eq!(out.matrix.defect(), Fin(0));
        assert!(succeeded(&c, &out));
    }

    #[test]
    fn annihilating_step() {
        let c = QuasiconeMatrix::parse_rows(CASE1).unwrap();
        let cfg = EngineConfig::default();
        let s0 = StrategyState::start(c, &cfg);
        let r = SignedRoot::from_signed(-1).unwrap();
        assert!(matches!(apply_step(&s0, r, 2, &cfg), Err(StepError::Annihilates { .. })));
        assert!(apply_step(&s0, r, 1, &cfg).is_ok());
    }

    #[test]
    fn path_checks() {
        assert_eq!(Strategy::from_signed(&[1, 1]).path_violation(2), Some(1));
        assert_eq!(Strategy::from_signed(&[1, 2, -1, -2]).path_violation(2), None);
        assert_eq!(Strategy::from_signed(&[1, 4]).path_violation(3), Some(1));
        assert!(Strategy::from_signed(&[1, 2, -3]).is_circular(2));
    }

    #[test]
    fn simple_basic_a2() {
        let set = simple_basic_set(2);
        let printed: Vec<Strategy> = [&[1, -1][..], &[1, 2, -3], &[1, 2, -1, -2], &[1, 2, -2, -1]]
            .iter()
            .map(|v| Strategy::from_signed(v))
            .collect();
        assert_eq!(set, printed);
        assert_eq!(simple_basic_set(3).len(), 11);
        assert_eq!(simple_basic_set(4).len(), 26);
    }

    #[test]
    fn shortest_long_rank1_is_shortest() {
        let c = QuasiconeMatrix::from_finite(&[vec![0, 1], vec![3, 0]]);
        let cfg = EngineConfig::default();
        let s0 = StrategyState::start(c, &cfg);
        let a = apply_strategy(&s0, &shortest_long(1), &cfg).unwrap();
        let b = apply_strategy(&s0, &shortest(), &cfg).unwrap();
        assert_eq!(a, b);
    }
}
