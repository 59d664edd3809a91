//! Independent reference computations shared by the test targets.

use quasicone_core::ext::{ExtInt, Fin, NegInf, PosInf};
use quasicone_core::tropical::ExtMatrix;
use quasicone_core::roots::{parabolic_member, AffineRoot, Weight};
use quasicone_core::strategy::{apply_step, apply_strategy, shortest, shortest_for};
use quasicone_core::{EngineConfig, QuasiconeMatrix, SignedRoot, StrategyState};
use rand::Rng;

/// Bellman-Ford style relaxation over walks of length ≥ 1 with the matrix
/// diagonal as self-loops, then `−∞` for every pair joined through a
/// negative cycle.
pub fn relax(a: &[Vec<Option<i64>>]) -> Vec<Vec<Option<Option<i64>>>> {
    // Option<i64>: None = no edge (+∞). Result: None = +∞, Some(None) = −∞.
    let n = a.len();
    let mut dist: Vec<Vec<Option<i64>>> = a.to_vec();
    for _ in 0..n * n {
        let prev = dist.clone();
        for i in 0..n {
            for k in 0..n {
                let Some(x) = prev[i][k] else { continue };
                for j in 0..n {
                    if let Some(y) = a[k][j] {
                        let v = x + y;
                        if dist[i][j].is_none_or(|d| v < d) {
                            dist[i][j] = Some(v);
                        }
                    }
                }
            }
        }
    }
    let neg: Vec<bool> = (0..n).map(|m| dist[m][m].is_some_and(|d| d < 0)).collect();
    let reach = |i: usize, j: usize| i == j || dist[i][j].is_some();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let through_neg = (0..n).any(|m| neg[m] && reach(i, m) && reach(m, j));
                    match dist[i][j] {
                        _ if through_neg => Some(None),
                        None => None,
                        Some(v) => Some(Some(v)),
                    }
                })
                .collect()
        })
        .collect()
}

pub fn random_entry(rng: &mut impl Rng) -> ExtInt {
    match rng.gen_range(0..13) {
        11 => PosInf,
        12 => NegInf,
        v => Fin(v - 5),
    }
}

/// `−∞` entries have no finite path weight; the oracle treats them as edges of
/// weight −M with M large enough to dominate every finite walk.
pub fn to_oracle(m: &ExtMatrix) -> Vec<Vec<Option<i64>>> {
    let n = m.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match m[(i, j)] {
                    PosInf => None,
                    NegInf => Some(-1_000_000),
                    Fin(v) => Some(v),
                })
                .collect()
        })
        .collect()
}

pub fn from_oracle(v: Option<Option<i64>>) -> ExtInt {
    match v {
        None => PosInf,
        Some(None) => NegInf,
        Some(Some(x)) if x <= -100_000 => NegInf,
        Some(Some(x)) => Fin(x),
    }
}

/// `closure` computed by [`relax`], as an [`ExtMatrix`].
pub fn closure(m: &ExtMatrix) -> ExtMatrix {
    let r = relax(&to_oracle(m));
    ExtMatrix::from_fn(m.dim(), |i, j| from_oracle(r[i][j]))
}

pub type Grid = Vec<Vec<i64>>;

pub fn grid(m: &QuasiconeMatrix) -> Grid {
    let d = m.dim();
    (0..d)
        .map(|p| (0..d).map(|q| if p == q { 0 } else { m[(p, q)].finite().unwrap() }).collect())
        .collect()
}

/// Only the entries the closed forms name: row 1 and column 0 after the raise,
/// row 0 and column 1 after the lowering. Other entries may still move under the
/// closure.
pub struct Expected {
    pub after_raise: Vec<((usize, usize), i64)>,
    pub after_lower: Vec<((usize, usize), i64)>,
    /// Rows where the printed `c″_{i,1} = min(1 + c_{i,0}, …)` differs from the closure value.
    pub literal_line_differs: usize,
}

pub fn closed_forms(c: &Grid, epsilon: i64) -> Expected {
    let d = c.len();
    let hat = epsilon.min(c[1][0]);
    let k = hat - 1;
    let mut c1 = c.clone();
    c1[1][0] = hat;
    for i in 2..d {
        c1[1][i] = (hat + c[0][i]).min(c[0][i].max(c[1][i]));
        c1[i][0] = (hat + c[i][1]).min(c[i][1].max(c[i][0]));
    }
    let mut after_raise = vec![((1, 0), hat)];
    let mut after_lower = vec![((1, 0), hat), ((0, 1), 1)];
    let mut literal_line_differs = 0;
    for i in 2..d {
        after_raise.push(((1, i), c1[1][i]));
        after_raise.push(((i, 0), c1[i][0]));
        let c2_0i = (1 + c1[1][i]).min(c[0][i].max(c1[1][i] - k));
        let c2_i1 = (1 + c1[i][0]).min(c[i][1].max(c1[i][0] - k));
        after_lower.push(((0, i), c2_0i));
        after_lower.push(((i, 1), c2_i1));
        if (1 + c[i][0]).min(c[i][1].max(c1[i][0] - k)) != c2_i1 {
            literal_line_differs += 1;
        }
    }
    Expected { after_raise, after_lower, literal_line_differs }
}


/// Runs the two steps of the shortest strategy at start offset `−εδ` and lists
/// every named entry that disagrees with [`closed_forms`].
pub fn lemma_mismatches(c: &QuasiconeMatrix, epsilon: i64) -> Vec<String> {
    let config = EngineConfig { start_delta: -epsilon, ..EngineConfig::default() };
    let a1 = SignedRoot::from_signed(1).unwrap();
    let g = grid(c);
    let want = closed_forms(&g, epsilon);
    let mut bad = Vec::new();
    let mut check = |m: &QuasiconeMatrix, named: &[((usize, usize), i64)], what: &str| {
        for &(pq, v) in named {
            if m[pq] != Fin(v) {
                bad.push(format!("{what} {pq:?}: got {}, want {v}", m[pq]));
            }
        }
    };
    let s0 = StrategyState::start(c.clone(), &config);
    let s1 = match apply_step(&s0, a1, 0, &config) {
        Ok(s) => s,
        Err(e) => return vec![format!("raise failed: {e}")],
    };
    check(&s1.matrix, &want.after_raise, "raise");
    let k = epsilon.min(g[1][0]) - 1;
    let s2 = match apply_step(&s1, a1.negate(), k, &config) {
        Ok(s) => s,
        Err(e) => return vec![format!("lower failed: {e}")],
    };
    check(&s2.matrix, &want.after_lower, "lower");
    if s2.matrix.heisenberg() != Fin(1) {
        bad.push(format!("omega {}", s2.matrix.heisenberg()));
    }
    if s2.offset.classical.iter().any(|&x| x != 0) {
        bad.push("offset not circular".into());
    }
    for s in [shortest(), shortest_for(c, epsilon)] {
        match apply_strategy(&s0, &s, &config) {
            Ok(out) if out.matrix == s2.matrix => {}
            _ => bad.push(format!("{s} disagrees with the stepwise result")),
        }
    }
    bad
}

/// Pairs of members whose sum is a non-member root inside the window.
pub fn closure_failures(n: usize, k: i64, l1: &Weight, l2: &Weight, l3: &Weight) -> Vec<(AffineRoot, AffineRoot)> {
    let members: Vec<AffineRoot> =
        AffineRoot::window(n, k).into_iter().filter(|&b| parabolic_member(l1, l2, l3, b)).collect();
    let mut bad = Vec::new();
    for &a in &members {
        for &b in &members {
            let Some(sum) = a.try_add(b, n) else { continue };
            if sum.delta.abs() <= k && !parabolic_member(l1, l2, l3, sum) {
                bad.push((a, b));
            }
        }
    }
    bad
}

pub fn covers(n: usize, k: i64, l1: &Weight, l2: &Weight, l3: &Weight) -> bool {
    AffineRoot::window(n, k)
        .into_iter()
        .all(|b| parabolic_member(l1, l2, l3, b) || parabolic_member(l1, l2, l3, b.negate()))
}

