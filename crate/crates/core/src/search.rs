//! Forest search over canonical quasicones: strategy tiers, concatenation and
//! post-hoc witness checks.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::ext::ExtInt;
use crate::quasicone::{enumerate_normal, enumerate_raw, QuasiconeMatrix};
use crate::strategy::{
    apply_strategy, shortest, shortest_long, simple_basic_set, succeeded, EngineConfig, Strategy,
    StrategyState,
};

/// A named family of strategies applied to every unsolved node.
pub trait Tier: Send + Sync {
    fn name(&self) -> &'static str;

    fn strategies(&self, n: usize) -> Vec<Strategy>;

    /// Repeat rounds and grow the forest with non-successful images.
    fn concatenates(&self) -> bool {
        false
    }
}

pub struct ShortestTier;
pub struct ShortestLongTier;
pub struct SimpleBasicTier;
pub struct ConcatTier;

impl Tier for ShortestTier {
    fn name(&self) -> &'static str {
        "shortest"
    }
    fn strategies(&self, _n: usize) -> Vec<Strategy> {
        vec![shortest()]
    }
}

impl Tier for ShortestLongTier {
    fn name(&self) -> &'static str {
        "shortest-long"
    }
    fn strategies(&self, n: usize) -> Vec<Strategy> {
        vec![shortest_long(n)]
    }
}

impl Tier for SimpleBasicTier {
    fn name(&self) -> &'static str {
        "simple-basic"
    }
    fn strategies(&self, n: usize) -> Vec<Strategy> {
        simple_basic_set(n)
    }
}

impl Tier for ConcatTier {
    fn name(&self) -> &'static str {
        "concat"
    }
    fn strategies(&self, n: usize) -> Vec<Strategy> {
        simple_basic_set(n)
    }
    fn concatenates(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown tier {name:?} (known: {known})")]
pub struct UnknownTier {
    pub name: String,
    pub known: String,
}

/// Tiers by name, in registration order.
#[derive(Clone, Default)]
pub struct TierRegistry {
    tiers: Vec<Arc<dyn Tier>>,
}

impl TierRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_builtin() -> Self {
        let mut r = Self::new();
        r.register(Arc::new(ShortestTier));
        r.register(Arc::new(ShortestLongTier));
        r.register(Arc::new(SimpleBasicTier));
        r.register(Arc::new(ConcatTier));
        r
    }

    /// Replaces any tier already registered under the same name.
    pub fn register(&mut self, tier: Arc<dyn Tier>) {
        self.tiers.retain(|t| t.name() != tier.name());
        self.tiers.push(tier);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Tier>> {
        self.tiers.iter().find(|t| t.name() == name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.tiers.iter().map(|t| t.name()).collect()
    }

    /// Comma-separated names, e.g. `"shortest,shortest-long"`.
    pub fn resolve(&self, list: &str) -> Result<Vec<Arc<dyn Tier>>, UnknownTier> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| {
                self.get(name).ok_or_else(|| UnknownTier {
                    name: name.to_string(),
                    known: self.names().join(", "),
                })
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Unsolved,
    Solved,
}

#[derive(Clone, Debug)]
pub struct SearchNode {
    pub canonical: QuasiconeMatrix,
    pub defect: ExtInt,
    pub status: Status,
    /// Strategy ids leading from this node to a success, each link restarting from
    /// the normal form of the previous image.
    pub witness: Option<Vec<usize>>,
}

/// Result of one strategy on one node.
#[derive(Clone, Debug)]
enum Outcome {
    Success,
    Image(QuasiconeMatrix),
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub strategy: usize,
}

/// The search forest. Nodes `0..seeds` are the enumerated quasicones; later
/// nodes are images discovered by concatenation.
pub struct Forest {
    pub rank: usize,
    pub config: EngineConfig,
    pub nodes: Vec<SearchNode>,
    pub seeds: usize,
    pub strategies: Vec<Strategy>,
    pub edges: Vec<Edge>,
    index: HashMap<QuasiconeMatrix, usize>,
    strategy_ids: HashMap<Strategy, usize>,
    parents: Vec<Vec<(usize, usize)>>,
    tried: Vec<Vec<usize>>,
}

impl Forest {
    pub fn new(rank: usize, seeds: Vec<QuasiconeMatrix>, config: EngineConfig) -> Self {
        let mut f = Forest {
            rank,
            config,
            nodes: Vec::new(),
            seeds: 0,
            strategies: Vec::new(),
            edges: Vec::new(),
            index: HashMap::new(),
            strategy_ids: HashMap::new(),
            parents: Vec::new(),
            tried: Vec::new(),
        };
        for c in seeds {
            f.insert(c);
        }
        f.seeds = f.nodes.len();
        f
    }

    fn insert(&mut self, c: QuasiconeMatrix) -> usize {
        if let Some(&i) = self.index.get(&c) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(SearchNode {
            defect: c.defect(),
            canonical: c.clone(),
            status: Status::Unsolved,
            witness: None,
        });
        self.index.insert(c, i);
        self.parents.push(Vec::new());
        self.tried.push(Vec::new());
        i
    }

    fn intern(&mut self, s: &Strategy) -> usize {
        if let Some(&i) = self.strategy_ids.get(s) {
            return i;
        }
        self.strategies.push(s.clone());
        self.strategy_ids.insert(s.clone(), self.strategies.len() - 1);
        self.strategies.len() - 1
    }

    pub fn lookup(&self, c: &QuasiconeMatrix) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn unsolved_seeds(&self) -> usize {
        self.nodes[..self.seeds].iter().filter(|n| n.status == Status::Unsolved).count()
    }

    pub fn residual(&self) -> Vec<&QuasiconeMatrix> {
        self.nodes[..self.seeds]
            .iter()
            .filter(|n| n.status == Status::Unsolved)
            .map(|n| &n.canonical)
            .collect()
    }

    fn mark_solved(&mut self, node: usize, witness: Vec<usize>) {
        let mut queue = VecDeque::from([(node, witness)]);
        while let Some((x, w)) = queue.pop_front() {
            if self.nodes[x].status == Status::Solved {
                continue;
            }
            self.nodes[x].status = Status::Solved;
            for &(p, s) in &self.parents[x] {
                if self.nodes[p].status == Status::Unsolved {
                    let mut pw = vec![s];
                    pw.extend(&w);
                    queue.push_back((p, pw));
                }
            }
            self.nodes[x].witness = Some(w);
        }
    }

    fn outcome(&self, c: &QuasiconeMatrix, s: &Strategy) -> Outcome {
        let start = StrategyState::start(c.clone(), &self.config);
        match apply_strategy(&start, s, &self.config) {
            Err(_) => Outcome::Failed,
            Ok(out) if succeeded(c, &out) => Outcome::Success,
            Ok(out) => match out.matrix.normalize() {
                Ok(image) => Outcome::Image(image),
                Err(_) => Outcome::Failed,
            },
        }
    }

    /// One pass of every strategy over the unsolved nodes. Seeds only, unless
    /// `expand`, in which case images with unchanged defect join the forest.
    /// Returns the number of nodes newly solved.
    pub fn run_tier(&mut self, strategies: &[Strategy], expand: bool) -> usize {
        let ids: Vec<usize> = strategies.iter().map(|s| self.intern(s)).collect();
        let limit = if expand { self.nodes.len() } else { self.seeds };
        let work: Vec<(usize, Vec<usize>)> = (0..limit)
            .filter(|&i| self.nodes[i].status == Status::Unsolved)
            .map(|i| (i, ids.iter().copied().filter(|j| !self.tried[i].contains(j)).collect::<Vec<_>>()))
            .filter(|(_, js)| !js.is_empty())
            .collect();
        let results: Vec<Vec<(usize, Outcome)>> = work
            .par_iter()
            .map(|(i, js)| {
                let c = &self.nodes[*i].canonical;
                js.iter().map(|&j| (j, self.outcome(c, &self.strategies[j]))).collect()
            })
            .collect();

        let before = self.nodes.iter().filter(|n| n.status == Status::Solved).count();
        for ((i, _), outs) in work.into_iter().zip(results) {
            for (j, out) in outs {
                self.tried[i].push(j);
                if self.nodes[i].status == Status::Solved {
                    continue;
                }
                match out {
                    Outcome::Success => self.mark_solved(i, vec![j]),
                    Outcome::Failed => {}
                    Outcome::Image(image) => {
                        // a non-success image never has smaller defect; only a
                        // defect-neutral one can carry a later success back
                        if image.defect() != self.nodes[i].defect {
                            continue;
                        }
                        let known = self.lookup(&image);
                        if let Some(k) = known {
                            if self.nodes[k].status == Status::Solved {
                                let mut w = vec![j];
                                w.extend(self.nodes[k].witness.clone().unwrap_or_default());
                                self.mark_solved(i, w);
                                continue;
                            }
                        }
                        let k = match known {
                            Some(k) => k,
                            None if expand => self.insert(image),
                            None => continue,
                        };
                        if k != i {
                            self.parents[k].push((i, j));
                            self.edges.push(Edge { from: i, to: k, strategy: j });
                        }
                    }
                }
            }
        }
        self.nodes.iter().filter(|n| n.status == Status::Solved).count() - before
    }

    /// Repeats [`run_tier`](Self::run_tier) with expansion until every seed is
    /// solved, a round changes nothing, or `max_rounds` is hit. Returns rounds run.
    pub fn concatenate(&mut self, strategies: &[Strategy], max_rounds: usize) -> usize {
        for round in 1..=max_rounds {
            let size = self.nodes.len();
            let solved = self.run_tier(strategies, true);
            if self.unsolved_seeds() == 0 || (solved == 0 && self.nodes.len() == size) {
                return round;
            }
        }
        max_rounds
    }

    pub fn run(&mut self, tier: &dyn Tier, max_rounds: usize) -> usize {
        let strategies = tier.strategies(self.rank);
        if tier.concatenates() {
            self.concatenate(&strategies, max_rounds)
        } else {
            self.run_tier(&strategies, false);
            1
        }
    }

    pub fn witness_strategies(&self, node: usize) -> Option<Vec<&Strategy>> {
        let w = self.nodes[node].witness.as_ref()?;
        Some(w.iter().map(|&j| &self.strategies[j]).collect())
    }

    /// Replays a node's witness chain from scratch.
    pub fn verify_witness(&self, node: usize) -> bool {
        match self.witness_strategies(node) {
            Some(chain) => replay_chain(&self.nodes[node].canonical, &chain, &self.config),
            None => false,
        }
    }
}

/// Applies each strategy in turn from the start offset, normalizing between links,
/// and checks success of the last link against `c`.
pub fn replay_chain(c: &QuasiconeMatrix, chain: &[&Strategy], config: &EngineConfig) -> bool {
    let mut cur = c.clone();
    for (i, s) in chain.iter().enumerate() {
        let Ok(out) = apply_strategy(&StrategyState::start(cur.clone(), config), s, config) else {
            return false;
        };
        if i + 1 == chain.len() {
            return succeeded(c, &out);
        }
        if out.matrix.defect() != cur.defect() {
            return false;
        }
        match out.matrix.normalize() {
            Ok(next) => cur = next,
            Err(_) => return false,
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TierCount {
    pub tier: String,
    pub unsolved: usize,
    pub unsolved_raw: Option<usize>,
    pub rounds: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub matrix: QuasiconeMatrix,
    pub chain: Vec<Strategy>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub rank: usize,
    pub bound: i64,
    pub total_considered: usize,
    pub total_raw: Option<usize>,
    pub unsolved_after: Vec<TierCount>,
    pub residual: Vec<QuasiconeMatrix>,
    pub witnesses_verified: usize,
    pub witnesses_failed: usize,
    pub forest_nodes: usize,
    pub forest_edges: Vec<Edge>,
    pub strategies: Vec<Strategy>,
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub bound: i64,
    pub max_rounds: usize,
    pub config: EngineConfig,
    /// Also enumerate raw matrices and report unsolved raw counts.
    pub raw_counts: bool,
}

impl SearchOptions {
    pub fn for_rank(n: usize) -> Self {
        SearchOptions {
            bound: crate::quasicone::default_bound(n),
            max_rounds: 8,
            config: EngineConfig::default(),
            raw_counts: false,
        }
    }
}

/// Seeds a forest from the enumeration and runs the tiers in order.
pub fn concatenate_strategies(n: usize, tiers: &[Arc<dyn Tier>], opts: &SearchOptions) -> SearchReport {
    let seeds = enumerate_normal(n, opts.bound);
    let mut forest = Forest::new(n, seeds, opts.config);
    let raw: Option<Vec<usize>> = opts.raw_counts.then(|| {
        enumerate_raw(n, opts.bound)
            .par_iter()
            .map(|m| {
                let c = m.normalize().expect("enumerated matrices are finite");
                forest.lookup(&c).expect("every raw matrix normalizes to a seed")
            })
            .collect()
    });
    let raw_unsolved = |f: &Forest| {
        raw.as_ref()
            .map(|r| r.iter().filter(|&&i| f.nodes[i].status == Status::Unsolved).count())
    };
    let mut counts = Vec::new();
    for tier in tiers {
        let rounds = forest.run(tier.as_ref(), opts.max_rounds);
        counts.push(TierCount {
            tier: tier.name().to_string(),
            unsolved: forest.unsolved_seeds(),
            unsolved_raw: raw_unsolved(&forest),
            rounds,
        });
    }
    let solved: Vec<usize> = (0..forest.seeds)
        .filter(|&i| forest.nodes[i].status == Status::Solved)
        .collect();
    let verified = solved.par_iter().filter(|&&i| forest.verify_witness(i)).count();
    SearchReport {
        rank: n,
        bound: opts.bound,
        total_considered: forest.seeds,
        total_raw: raw.as_ref().map(Vec::len),
        unsolved_after: counts,
        residual: forest.residual().into_iter().cloned().collect(),
        witnesses_verified: verified,
        witnesses_failed: solved.len() - verified,
        forest_nodes: forest.nodes.len(),
        forest_edges: forest.edges.clone(),
        strategies: forest.strategies.clone(),
    }
}

/// The published counts: total, then unsolved after each of the four tiers.
pub fn printed_row(n: usize) -> Option<[Option<usize>; 5]> {
    match n {
        2 => Some([Some(48), Some(32), Some(0), None, None]),
        3 => Some([Some(669), Some(242), Some(38), Some(8), Some(0)]),
        4 => Some([Some(23431), Some(2747), Some(536), Some(65), Some(8)]),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub rank: usize,
    pub bound: i64,
    pub computed: Vec<Option<usize>>,
    pub printed: Vec<Option<usize>>,
    pub matches: bool,
    pub report: SearchReport,
}

/// Runs the four tiers in order for rank `n` and sets the result beside the published row.
pub fn verify_table(n: usize, opts: &SearchOptions) -> TableRow {
    let registry = TierRegistry::with_builtin();
    let tiers = registry
        .resolve("shortest,shortest-long,simple-basic,concat")
        .expect("built-in tiers are registered");
    let report = concatenate_strategies(n, &tiers, opts);
    let mut computed = vec![Some(report.total_considered)];
    computed.extend(report.unsolved_after.iter().map(|t| Some(t.unsolved)));
    let printed: Vec<Option<usize>> = printed_row(n).map(|r| r.to_vec()).unwrap_or_default();
    let matches = !printed.is_empty()
        && printed.iter().zip(&computed).all(|(p, c)| p.is_none() || p == c);
    TableRow { rank: n, bound: opts.bound, computed, printed, matches, report }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_resolves_names() {
        let r = TierRegistry::with_builtin();
        assert_eq!(r.names(), vec!["shortest", "shortest-long", "simple-basic", "concat"]);
        let t = r.resolve("shortest, concat").unwrap();
        assert_eq!(t.len(), 2);
        assert!(t[1].concatenates());
        let err = r.resolve("shortest,bogus").err().unwrap();
        assert_eq!(err.name, "bogus");
    }

    #[test]
    fn empty_tier_changes_nothing() {
        let seeds = enumerate_normal(2, 4);
        let mut f = Forest::new(2, seeds.clone(), EngineConfig::default());
        assert_eq!(f.run_tier(&[], false), 0);
        assert_eq!(f.unsolved_seeds(), seeds.len());
    }
}
